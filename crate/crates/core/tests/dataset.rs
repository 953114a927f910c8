use std::collections::BTreeSet;

use cageflow::codec::decompress_density;
use cageflow::dataset::{emit_dataset, emit_group, generate_sample, verify_dataset, DatasetGroup, RunConfig};
use cageflow::flow::{accumulate_flow, proxy_dense_flow, proxy_sparse_flow, simulate_social_force};

fn cfg(out: &std::path::Path) -> RunConfig {
    RunConfig { out: out.to_path_buf(), n: 16, count: 12, seed: 99, png: false, ..Default::default() }
}

#[test]
fn one_sample_writes_one_pair() {
    let dir = tempfile::tempdir().unwrap();
    let c = RunConfig { count: 1, png: true, ..cfg(dir.path()) };
    let m = emit_group(&c, DatasetGroup::SparseProxy, dir.path()).unwrap();
    assert_eq!(m.samples.len(), 1);
    let files: BTreeSet<&str> = m.samples[0].files.keys().map(|k| k.as_str()).collect();
    assert_eq!(files, BTreeSet::from(["plan", "x", "x_g_png", "y", "y_full", "y_full_png", "y_png"]));
    assert_eq!(verify_dataset(dir.path()).unwrap(), Vec::<String>::new());
}

#[test]
fn twelve_samples_cover_every_floorplan_type() {
    let dir = tempfile::tempdir().unwrap();
    let m = emit_group(&cfg(dir.path()), DatasetGroup::DenseProxy, dir.path()).unwrap();
    let types: BTreeSet<String> =
        m.samples.iter().map(|s| format!("{:?}/{:?}", s.floorplan.morphology, s.floorplan.organization)).collect();
    assert_eq!(types.len(), 12);
}

#[test]
fn ground_truth_follows_the_group() {
    let c = RunConfig { count: 4, ..cfg(std::path::Path::new("unused")) };
    for group in DatasetGroup::ALL {
        for i in 0..4 {
            let s = generate_sample(&c, group, i).unwrap();
            assert_eq!(s.crowd.regime, group.regime());
            let expected = match group {
                DatasetGroup::SparseProxy => proxy_sparse_flow(&s.scenario).unwrap(),
                DatasetGroup::DenseProxy => proxy_dense_flow(&s.scenario).unwrap(),
                _ => accumulate_flow(&simulate_social_force(&s.scenario, &c.social_force).unwrap(), &s.scenario.env),
            };
            assert_eq!(s.flow, expected, "{group:?} {i}");
            let restored = decompress_density(&s.y, &s.plan).unwrap();
            assert!((restored.total() - s.flow.total()).abs() <= 1e-6);
            assert!(s.plan.fits());
        }
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let one = RunConfig { threads: Some(1), ..cfg(&dir.path().join("one")) };
    let four = RunConfig { threads: Some(4), ..cfg(&dir.path().join("four")) };
    let a = emit_dataset(&one).unwrap();
    let b = emit_dataset(&four).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        std::fs::read(dir.path().join("one/manifest.json")).unwrap(),
        std::fs::read(dir.path().join("four/manifest.json")).unwrap()
    );
}

#[test]
fn verification_catches_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let m = emit_group(&RunConfig { count: 2, ..cfg(dir.path()) }, DatasetGroup::SparseSimulated, dir.path()).unwrap();
    assert!(verify_dataset(dir.path()).unwrap().is_empty());
    let y = dir.path().join(&m.samples[1].files["y"].path);
    let mut bytes = std::fs::read(&y).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0x40;
    std::fs::write(&y, bytes).unwrap();
    let problems = verify_dataset(dir.path()).unwrap();
    assert!(problems.iter().any(|p| p.contains("checksum")), "{problems:?}");
}

#[test]
fn several_groups_get_their_own_directories() {
    let dir = tempfile::tempdir().unwrap();
    let c = RunConfig { count: 1, groups: vec![DatasetGroup::DenseSimulated, DatasetGroup::SparseProxy], ..cfg(dir.path()) };
    let ms = emit_dataset(&c).unwrap();
    assert_eq!(ms.len(), 2);
    for m in ms {
        assert!(dir.path().join(m.group.name()).join("manifest.json").exists());
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [
        RunConfig { n: 7, ..cfg(dir.path()) },
        RunConfig { count: 0, ..cfg(dir.path()) },
        RunConfig { groups: vec![], ..cfg(dir.path()) },
        RunConfig { sparse_agents: (3, 30), ..cfg(dir.path()) },
    ] {
        assert!(emit_dataset(&bad).is_err());
    }
}

/// Reads the tensor files the way an external consumer would: one JSON
/// header line, then little-endian f32 values, channel-major.
#[test]
fn tensor_files_parse_without_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let m = emit_group(&RunConfig { count: 1, ..cfg(dir.path()) }, DatasetGroup::SparseProxy, dir.path()).unwrap();
    let sample = generate_sample(&RunConfig { count: 1, ..cfg(dir.path()) }, DatasetGroup::SparseProxy, 0).unwrap();
    for (key, channels) in [("x", 5usize), ("y", 1)] {
        let bytes = std::fs::read(dir.path().join(&m.samples[0].files[key].path)).unwrap();
        let newline = bytes.iter().position(|&b| b == b'\n').unwrap();
        let header: serde_json::Value = serde_json::from_slice(&bytes[..newline]).unwrap();
        assert_eq!(header["version"], 1);
        assert_eq!(header["channels"], channels);
        assert_eq!((header["height"].as_u64(), header["width"].as_u64(), header["n"].as_u64()), (Some(16), Some(16), Some(16)));
        let values: Vec<f32> = bytes[newline + 1..].chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect();
        assert_eq!(values.len(), channels * 16 * 16);
        if key == "x" {
            let env = &values[4 * 256..];
            let agents = &values[2 * 256..3 * 256];
            let navigable = sample.x.navigable_mask();
            for (i, (&e, &a)) in env.iter().zip(agents).enumerate() {
                assert_eq!(e == 1.0, navigable.values()[i]);
                assert_eq!(a as f64, sample.x.a.values()[i] as f32 as f64);
            }
        } else {
            for (v, w) in values.iter().zip(sample.y.grid.values()) {
                assert_eq!(*v, *w as f32);
            }
        }
    }
}
