use std::path::Path;

use sha2::{Digest, Sha256};

use super::{io_err, DatasetError, DatasetManifest};
use crate::codec::format::{read_plan_file, read_raw, raw_to_flow, RawTensor};
use crate::codec::{decompress_density, Resolution};

/// Problems with an input tensor: non-integer or zero capacities, values
/// outside their channel ranges, or padding cells that are not blank.
pub fn check_input_tensor(t: &RawTensor) -> Vec<String> {
    let mut out = Vec::new();
    if t.header.channels != crate::codec::CHANNELS {
        return vec![format!("{} channels", t.header.channels)];
    }
    let (cx, cy, a, g, e) = (t.channel(0), t.channel(1), t.channel(2), t.channel(3), t.channel(4));
    for i in 0..cx.len() {
        let integral = |v: f32| v >= 1.0 && v.fract() == 0.0;
        if !integral(cx[i]) || !integral(cy[i]) {
            out.push(format!("cell {i}: capacity ({}, {})", cx[i], cy[i]));
        }
        if !(0.0..=1.0).contains(&a[i]) || !(0.0..=1.0).contains(&g[i]) {
            out.push(format!("cell {i}: agent {} or goal {} outside [0, 1]", a[i], g[i]));
        }
        match e[i] {
            1.0 => {}
            0.0 if a[i] == 0.0 && g[i] == 1.0 && cx[i] == 1.0 && cy[i] == 1.0 => {}
            0.0 => out.push(format!("cell {i}: obstacle cell is not blank")),
            v => out.push(format!("cell {i}: environment value {v}")),
        }
    }
    out
}

/// Re-reads a group directory and lists every problem found: checksum
/// mismatches, malformed tensors, targets outside `[0, 1]` or nonzero on
/// obstacles, and decompressed targets whose mass differs from the stored
/// source-resolution flow by more than a relative `1e-5` (f32 storage).
pub fn verify_dataset(root: &Path) -> Result<Vec<String>, DatasetError> {
    let path = root.join("manifest.json");
    let manifest: DatasetManifest = serde_json::from_str(&std::fs::read_to_string(&path).map_err(io_err(&path))?)?;
    let mut problems = Vec::new();
    for s in &manifest.samples {
        let mut bytes = std::collections::BTreeMap::new();
        for (key, entry) in &s.files {
            let p = root.join(&entry.path);
            let data = std::fs::read(&p).map_err(io_err(&p))?;
            let digest: String = Sha256::digest(&data).iter().map(|b| format!("{b:02x}")).collect();
            if digest != entry.sha256 {
                problems.push(format!("{}: checksum mismatch for {key}", s.id));
            }
            bytes.insert(key.as_str(), data);
        }
        let (Some(x), Some(y), Some(full)) = (bytes.get("x"), bytes.get("y"), bytes.get("y_full")) else {
            problems.push(format!("{}: missing tensor files", s.id));
            continue;
        };
        let x = read_raw(&x[..])?;
        let y = read_raw(&y[..])?;
        let full = raw_to_flow(&read_raw(&full[..])?, Resolution::Original)?;
        problems.extend(check_input_tensor(&x).into_iter().map(|p| format!("{}: x {p}", s.id)));
        let e = x.channel(4);
        for (i, &v) in y.channel(0).iter().enumerate() {
            if !(0.0..=1.0).contains(&v) || (e[i] == 0.0 && v != 0.0) {
                problems.push(format!("{}: y cell {i} = {v}", s.id));
            }
        }
        let plan = read_plan_file(&root.join(&s.files["plan"].path))?;
        let restored = decompress_density(&raw_to_flow(&y, Resolution::Compressed)?, &plan)?.total();
        let expected = full.total();
        if (restored - expected).abs() > 1e-5 * expected.max(1.0) {
            problems.push(format!("{}: decompressed mass {restored} vs source {expected}", s.id));
        }
    }
    Ok(problems)
}
