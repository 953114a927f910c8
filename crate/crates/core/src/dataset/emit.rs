use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{io_err, DatasetError, DatasetGroup, RunConfig, SCHEMA_VERSION};
use crate::codec::format::{flow_to_raw, RawTensor, FORMAT_VERSION};
use crate::codec::{
    compress, compress_flow, decompress_density, plan_compression, segment_regions, visibility, CageTensor,
    CompressionPlan, FlowMap,
};
use crate::floorplan::{generate, typology, FloorplanConfig};
use crate::flow::{
    accumulate_flow, proxy_dense_flow, proxy_sparse_flow, sample_agents_goals, simulate_social_force, CrowdConfig,
};
use crate::grid::{Dims, GoalField, Scenario};
use crate::metrics::{render_goal_field, render_heatmap, to_png};
use crate::seed::{derive_seed, rng};

/// Caps the worker pool when the run config leaves `threads` unset.
pub const THREADS_ENV: &str = "CAGEFLOW_THREADS";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    /// Relative to the manifest's directory.
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub id: String,
    pub index: usize,
    pub seed: u64,
    pub attempts: usize,
    pub floorplan: FloorplanConfig,
    pub crowd: CrowdConfig,
    pub agents: usize,
    pub original: Dims,
    pub compressed: Dims,
    /// Total flow of the source-resolution ground truth.
    pub flow_mass: f64,
    pub files: BTreeMap<String, FileEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub schema_version: u32,
    pub format_version: u32,
    pub group: DatasetGroup,
    pub count: usize,
    pub master_seed: u64,
    pub n: usize,
    pub samples: Vec<SampleRecord>,
}

/// One generated sample held in memory.
#[derive(Clone, Debug)]
pub struct Sample {
    pub index: usize,
    pub seed: u64,
    pub attempts: usize,
    pub floorplan: FloorplanConfig,
    pub crowd: CrowdConfig,
    pub scenario: Scenario,
    pub plan: CompressionPlan,
    pub x: CageTensor,
    /// Ground truth at source resolution.
    pub flow: FlowMap,
    /// Ground truth on the compressed `n x n` canvas.
    pub y: FlowMap,
}

fn group_seed(cfg: &RunConfig, group: DatasetGroup) -> u64 {
    let k = DatasetGroup::ALL.iter().position(|&g| g == group).expect("known group");
    derive_seed(cfg.seed, k as u64)
}

/// Builds sample `index` of `group`. Attempts whose floorplan cannot be
/// built, whose crowd cannot be placed, or whose plan does not fit the
/// canvas are retried with a fresh derived seed.
pub fn generate_sample(cfg: &RunConfig, group: DatasetGroup, index: usize) -> Result<Sample, DatasetError> {
    let seed = derive_seed(group_seed(cfg, group), index as u64);
    let (lo, hi) = cfg.sides();
    let (morphology, organization) = typology(index);
    let mut last = String::new();
    for attempt in 0..cfg.max_attempts {
        let attempt_seed = derive_seed(seed, attempt as u64);
        let mut r = rng(attempt_seed);
        let floorplan = FloorplanConfig::new(morphology, organization, r.gen_range(lo..=hi), r.gen_range(lo..=hi), attempt_seed);
        let f = match generate(&floorplan) {
            Ok(f) => f,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let crowd = match group.regime() {
            crate::flow::Regime::Sparse => CrowdConfig::sparse(r.gen_range(cfg.sparse_agents.0..=cfg.sparse_agents.1), attempt_seed),
            crate::flow::Regime::Dense => CrowdConfig::dense(r.gen_range(cfg.dense_density.0..=cfg.dense_density.1), attempt_seed),
        };
        let scenario = match sample_agents_goals(&f.env, &crowd) {
            Ok(s) => s,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let plan = plan_compression(&segment_regions(&visibility(&f.env), &f.env), &f.env, cfg.n);
        if !plan.fits() {
            last = format!("compressed {} does not fit {}x{}", plan.compressed, cfg.n, cfg.n);
            log::debug!("{} sample {index} attempt {attempt}: {last}", group.name());
            continue;
        }
        let x = compress(&scenario, &plan)?;
        let flow = ground_truth(&scenario, group, cfg).map_err(|e| DatasetError::Config(e.to_string()))?;
        let y = compress_flow(&flow, &plan, cfg.n)?;
        return Ok(Sample { index, seed, attempts: attempt + 1, floorplan, crowd, scenario, plan, x, flow, y });
    }
    Err(DatasetError::Infeasible { index, attempts: cfg.max_attempts, last })
}

fn ground_truth(s: &Scenario, group: DatasetGroup, cfg: &RunConfig) -> Result<FlowMap, crate::flow::FlowError> {
    match (group.simulated(), group.regime()) {
        (true, _) => Ok(accumulate_flow(&simulate_social_force(s, &cfg.social_force)?, &s.env)),
        (false, crate::flow::Regime::Sparse) => proxy_sparse_flow(s),
        (false, crate::flow::Regime::Dense) => proxy_dense_flow(s),
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn write_file(root: &Path, rel: &str, bytes: &[u8], files: &mut BTreeMap<String, FileEntry>, key: &str) -> Result<(), DatasetError> {
    let path = root.join(rel);
    std::fs::write(&path, bytes).map_err(io_err(&path))?;
    files.insert(key.to_string(), FileEntry { path: rel.to_string(), sha256: sha256_hex(bytes) });
    Ok(())
}

fn tensor_bytes(t: &RawTensor) -> Result<Vec<u8>, DatasetError> {
    let mut out = Vec::new();
    crate::codec::format::write_raw(&mut out, t)?;
    Ok(out)
}

/// Writes a sample under `root/samples/<id>/` and returns its record.
fn write_sample(root: &Path, sample: &Sample, png: bool) -> Result<SampleRecord, DatasetError> {
    let id = format!("{:06}", sample.index);
    let rel_dir = format!("samples/{id}");
    let dir = root.join(&rel_dir);
    std::fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let mut files = BTreeMap::new();
    let (original, trim, seed) = (sample.plan.original, sample.plan.trim, sample.scenario.seed);

    write_file(root, &format!("{rel_dir}/x.tensor"), &tensor_bytes(&RawTensor::from(&sample.x))?, &mut files, "x")?;
    write_file(root, &format!("{rel_dir}/y.tensor"), &tensor_bytes(&flow_to_raw(&sample.y, original, trim, seed))?, &mut files, "y")?;
    write_file(
        root,
        &format!("{rel_dir}/y_full.tensor"),
        &tensor_bytes(&flow_to_raw(&sample.flow, original, trim, seed))?,
        &mut files,
        "y_full",
    )?;
    let plan_json = serde_json::to_string_pretty(&sample.plan)? + "\n";
    write_file(root, &format!("{rel_dir}/plan.json"), plan_json.as_bytes(), &mut files, "plan")?;

    if png {
        let mask = sample.x.navigable_mask();
        let goal = GoalField { markers: sample.x.g.map(|&d| d == 0), distance: sample.x.g.clone() };
        let agents = crate::grid::AgentField { grid: sample.x.a.clone() };
        let images = [
            ("x_g", render_goal_field(&goal, Some(&agents))),
            ("y", render_heatmap(&sample.y, Some(&mask)).expect("same canvas")),
            (
                "y_full",
                render_heatmap(&sample.flow, Some(&sample.scenario.env.navigable_mask())).expect("same dims"),
            ),
        ];
        for (name, img) in images {
            write_file(root, &format!("{rel_dir}/{name}.png"), &to_png(&img), &mut files, &format!("{name}_png"))?;
        }
    }

    Ok(SampleRecord {
        id,
        index: sample.index,
        seed: sample.seed,
        attempts: sample.attempts,
        floorplan: sample.floorplan.clone(),
        crowd: sample.crowd,
        agents: sample.scenario.agent_count(),
        original,
        compressed: sample.plan.compressed,
        flow_mass: sample.flow.total(),
        files,
    })
}

fn pool(cfg: &RunConfig) -> Result<rayon::ThreadPool, DatasetError> {
    let threads = cfg
        .threads
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| DatasetError::Pool(e.to_string()))
}

/// Emits one group into `root` (`manifest.json` plus `samples/`).
pub fn emit_group(cfg: &RunConfig, group: DatasetGroup, root: &Path) -> Result<DatasetManifest, DatasetError> {
    cfg.validate()?;
    std::fs::create_dir_all(root).map_err(io_err(root))?;
    let samples = pool(cfg)?.install(|| {
        (0..cfg.count)
            .into_par_iter()
            .map(|i| {
                let sample = generate_sample(cfg, group, i)?;
                // Decompressing the stored target must give back the source mass.
                let restored = decompress_density(&sample.y, &sample.plan)?.total();
                debug_assert!((restored - sample.flow.total()).abs() <= 1e-6);
                write_sample(root, &sample, cfg.png)
            })
            .collect::<Result<Vec<_>, DatasetError>>()
    })?;
    let manifest = DatasetManifest {
        schema_version: SCHEMA_VERSION,
        format_version: FORMAT_VERSION,
        group,
        count: cfg.count,
        master_seed: cfg.seed,
        n: cfg.n,
        samples,
    };
    let path = root.join("manifest.json");
    std::fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n").map_err(io_err(&path))?;
    log::info!("{}: {} samples in {}", group.name(), cfg.count, root.display());
    Ok(manifest)
}

/// Emits every selected group. A single group is written directly into
/// `cfg.out`; several groups each get a subdirectory named after the group.
pub fn emit_dataset(cfg: &RunConfig) -> Result<Vec<DatasetManifest>, DatasetError> {
    cfg.validate()?;
    let mut groups = cfg.groups.clone();
    groups.sort();
    groups.dedup();
    let single = groups.len() == 1;
    groups
        .into_iter()
        .map(|g| {
            let root: PathBuf = if single { cfg.out.clone() } else { cfg.out.join(g.name()) };
            emit_group(cfg, g, &root)
        })
        .collect()
}
