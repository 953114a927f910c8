use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::codec::format::{
    decode_flow, flow_to_raw, raw_to_flow, read_plan_file, read_raw_file, write_plan_file, write_raw_file, RawTensor,
};
use crate::codec::Resolution;
use crate::dataset::{emit_dataset, generate_sample, verify_dataset, DatasetGroup, RunConfig};
use crate::flow::{accumulate_flow, proxy_dense_flow, proxy_sparse_flow, simulate_social_force, Regime, SocialForceParams};
use crate::grid::{GoalField, Scenario};
use crate::metrics::{kl_divergence, mae, masked_kl, masked_mae, render_goal_field, render_heatmap, to_png, write_reports_csv, EvalReport, GoalTag};

/// Must track `codec::format::FORMAT_VERSION`.
const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (tensor format 1)");

#[derive(Parser, Debug)]
#[command(name = "cageflow", version = VERSION, about = "Synthetic crowd-flow datasets on compressed grids")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Side of the compressed canvas.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a dataset.
    Gen {
        #[arg(long)]
        count: Option<usize>,
        /// Repeatable; defaults to the config's groups.
        #[arg(long = "group", value_name = "GROUP")]
        groups: Vec<String>,
        #[arg(long)]
        no_png: bool,
        #[arg(long)]
        threads: Option<usize>,
        /// Re-read the emitted files and check them.
        #[arg(long)]
        verify: bool,
    },
    /// Compress a scenario into an input tensor and plan.
    Encode(ScenarioArgs),
    /// Expand a compressed flow tensor back to the source grid.
    Decode {
        #[arg(long)]
        flow: PathBuf,
        #[arg(long)]
        plan: PathBuf,
    },
    /// Proxy ground-truth flow for a scenario.
    Flow(ScenarioArgs),
    /// Social-force ground-truth flow and trajectories for a scenario.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// JSON object overriding simulation parameters.
        #[arg(long, value_name = "FILE")]
        params: Option<PathBuf>,
    },
    /// Compare a predicted flow tensor with the truth.
    Eval {
        #[arg(long)]
        prediction: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        /// Input tensor whose environment channel masks obstacle cells out
        /// of both metrics.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value = "case")]
        case_id: String,
        #[arg(long, value_enum, default_value = "sparse")]
        regime: RegimeArg,
        #[arg(long, value_enum, default_value = "g-centric")]
        goal: GoalArg,
    },
    /// Render a tensor to PNG.
    Render {
        #[arg(long)]
        tensor: PathBuf,
        /// Flow tensors have one channel; input tensors render the goal
        /// field with agents unless a channel is given.
        #[arg(long)]
        channel: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    /// Scenario JSON (`cell_width`, `rows`); omitted means a random
    /// scenario drawn from the seed.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "sparse")]
    regime: RegimeArg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RegimeArg {
    Sparse,
    Dense,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Sparse => Regime::Sparse,
            RegimeArg::Dense => Regime::Dense,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GoalArg {
    ECentric,
    GCentric,
}

/// Text form of a scenario: `#` obstacle, `.` free, `A` agent, `G` goal,
/// `@` agent on a goal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub cell_width: f64,
    pub rows: Vec<String>,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioFile {
    pub fn from_scenario(s: &Scenario) -> Self {
        Self { cell_width: s.env.cell_width(), rows: s.to_ascii(), seed: s.seed }
    }

    pub fn to_scenario(&self) -> Result<Scenario, crate::grid::GridError> {
        Scenario::from_ascii(&self.rows, self.cell_width, self.seed)
    }
}

type Failure = Box<dyn std::error::Error>;

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 on usage errors, 2 on runtime errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn out_dir(g: &Global) -> Result<PathBuf, Failure> {
    let dir = g.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    Ok(dir)
}

fn base_config(g: &Global) -> Result<RunConfig, Failure> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(n) = g.n {
        cfg.n = n;
    }
    if let Some(o) = &g.out {
        cfg.out = o.clone();
    }
    Ok(cfg)
}

fn load_scenario(g: &Global, args: &ScenarioArgs) -> Result<Scenario, Failure> {
    if let Some(path) = &args.scenario {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let file: ScenarioFile = serde_json::from_str(&text)?;
        return Ok(file.to_scenario()?);
    }
    let cfg = base_config(g)?;
    let group = match Regime::from(args.regime) {
        Regime::Sparse => DatasetGroup::SparseProxy,
        Regime::Dense => DatasetGroup::DenseProxy,
    };
    Ok(generate_sample(&cfg, group, (cfg.seed % 12) as usize)?.scenario)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(())
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    match cli.command {
        Command::Gen { count, groups, no_png, threads, verify } => {
            let mut cfg = base_config(g)?;
            if let Some(c) = count {
                cfg.count = c;
            }
            if !groups.is_empty() {
                cfg.groups = groups
                    .iter()
                    .map(|name| DatasetGroup::from_name(name).ok_or_else(|| format!("unknown group {name:?}")))
                    .collect::<Result<_, _>>()?;
            }
            if no_png {
                cfg.png = false;
            }
            if threads.is_some() {
                cfg.threads = threads;
            }
            let single = cfg.groups.len() == 1;
            for m in emit_dataset(&cfg)? {
                let dir = if single { cfg.out.clone() } else { cfg.out.join(m.group.name()) };
                println!("{}: {} samples in {}", m.group.name(), m.samples.len(), dir.display());
                if verify {
                    let problems = verify_dataset(&dir)?;
                    if !problems.is_empty() {
                        return Err(format!("{} problems, first: {}", problems.len(), problems[0]).into());
                    }
                }
            }
        }
        Command::Encode(args) => {
            let s = load_scenario(g, &args)?;
            let n = g.n.unwrap_or(RunConfig::default().n);
            let (plan, x) = crate::codec::encode(&s, n)?;
            let dir = out_dir(g)?;
            write_json(&dir.join("scenario.json"), &ScenarioFile::from_scenario(&s))?;
            write_plan_file(&dir.join("plan.json"), &plan)?;
            write_raw_file(&dir.join("x.tensor"), &RawTensor::from(&x))?;
            println!("{} -> {} ({} regions)", plan.original, plan.compressed, plan.regions.len());
        }
        Command::Decode { flow, plan } => {
            let plan = read_plan_file(&plan)?;
            let raw = read_raw_file(&flow)?;
            let full = decode_flow(&raw, &plan)?;
            let dir = out_dir(g)?;
            write_raw_file(&dir.join("decoded.tensor"), &flow_to_raw(&full, plan.original, plan.trim, raw.header.seed))?;
            println!("{}x{} -> {}, mass {:.6}", raw.header.height, raw.header.width, full.dims(), full.total());
        }
        Command::Flow(args) => {
            let s = load_scenario(g, &args)?;
            let flow = match Regime::from(args.regime) {
                Regime::Sparse => proxy_sparse_flow(&s)?,
                Regime::Dense => proxy_dense_flow(&s)?,
            };
            write_flow(g, &s, &flow)?;
        }
        Command::Simulate { scenario, params } => {
            let s = load_scenario(g, &scenario)?;
            let params: SocialForceParams = match params {
                Some(p) => serde_json::from_str(&std::fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?)?,
                None => base_config(g)?.social_force,
            };
            let t = simulate_social_force(&s, &params)?;
            let dir = out_dir(g)?;
            let path = dir.join("trajectories.jsonl");
            let file = std::fs::File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            t.write_jsonl(std::io::BufWriter::new(file))?;
            let done = t.agents.iter().filter(|a| a.finished).count();
            println!("{done}/{} agents reached a goal in {} frames", t.agents.len(), t.frames);
            write_flow(g, &s, &accumulate_flow(&t, &s.env))?;
        }
        Command::Eval { prediction, truth, input, case_id, regime, goal } => {
            let p = raw_to_flow(&read_raw_file(&prediction)?, Resolution::Compressed)?;
            let t = raw_to_flow(&read_raw_file(&truth)?, Resolution::Compressed)?;
            let (mae, kl) = match input {
                Some(x) => {
                    let mask = read_raw_file(&x)?.channel_grid(4)?.map(|&e| e == 1.0);
                    (masked_mae(&t, &p, &mask)?, masked_kl(&p, &t, &mask)?)
                }
                None => (mae(&t, &p)?, kl_divergence(&p, &t)?),
            };
            let report = EvalReport {
                case_id,
                regime: regime.into(),
                goal: match goal {
                    GoalArg::ECentric => GoalTag::ECentric,
                    GoalArg::GCentric => GoalTag::GCentric,
                },
                mae,
                kl,
            };
            let mut csv = Vec::new();
            write_reports_csv(&mut csv, std::slice::from_ref(&report))?;
            if g.out.is_some() {
                write_bytes(&out_dir(g)?.join("report.csv"), &csv)?;
            }
            print!("{}", String::from_utf8(csv)?);
        }
        Command::Render { tensor, channel } => {
            let raw = read_raw_file(&tensor)?;
            let img = match (raw.header.channels, channel) {
                (crate::codec::CHANNELS, None) => {
                    let (g, e) = (raw.channel_grid(3)?, raw.channel_grid(4)?);
                    let mut distance = g.map(|&v| (v * 1e6).round() as u32);
                    for (c, &v) in e.iter() {
                        if v == 0.0 {
                            distance[c] = crate::grid::UNREACHABLE;
                        }
                    }
                    let goal = GoalField { markers: distance.map(|&d| d == 0), distance };
                    let agents = crate::grid::AgentField { grid: raw.channel_grid(2)? };
                    render_goal_field(&goal, Some(&agents))
                }
                (c, k) => {
                    let k = k.unwrap_or(0);
                    if k >= c {
                        return Err(format!("channel {k} out of range for {c} channels").into());
                    }
                    let grid = raw.channel_grid(k)?;
                    let mask = grid.map(|_| true);
                    let flow = crate::codec::FlowMap::original(grid);
                    render_heatmap(&flow, Some(&mask))?
                }
            };
            let stem = tensor.file_stem().and_then(|s| s.to_str()).unwrap_or("tensor").to_string();
            let path = out_dir(g)?.join(format!("{stem}.png"));
            write_bytes(&path, &to_png(&img))?;
            println!("{}", path.display());
        }
    }
    Ok(())
}

fn write_flow(g: &Global, s: &Scenario, flow: &crate::codec::FlowMap) -> Result<(), Failure> {
    let dir = out_dir(g)?;
    write_json(&dir.join("scenario.json"), &ScenarioFile::from_scenario(s))?;
    let trim = crate::codec::Trim::default();
    write_raw_file(&dir.join("flow.tensor"), &flow_to_raw(flow, s.dims(), trim, s.seed))?;
    write_bytes(&dir.join("flow.png"), &to_png(&render_heatmap(flow, Some(&s.env.navigable_mask()))?))?;
    println!("flow over {} cells, mass {:.6}", s.dims(), flow.total());
    Ok(())
}
