//! On-disk tensor container: one line of compact JSON describing the array,
//! terminated by `\n`, followed by `channels * height * width` little-endian
//! `f32` values in channel-major, row-major order.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{decompress_density, CageTensor, CodecError, CompressionPlan, FlowMap, Resolution, Trim, CHANNELS};
use crate::grid::{Dims, Grid2D};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorHeader {
    pub version: u32,
    pub channels: usize,
    pub height: usize,
    pub width: usize,
    /// Canvas side the content was padded to.
    pub n: usize,
    /// Source environment rows.
    pub p: usize,
    /// Source environment columns.
    pub q: usize,
    pub trim: Trim,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawTensor {
    pub header: TensorHeader,
    pub data: Vec<f32>,
}

impl RawTensor {
    pub fn channel(&self, k: usize) -> &[f32] {
        let len = self.header.height * self.header.width;
        &self.data[k * len..(k + 1) * len]
    }

    /// Channel `k` as a grid of `f64`.
    pub fn channel_grid(&self, k: usize) -> Result<Grid2D<f64>, CodecError> {
        let values = self.channel(k).iter().map(|&v| v as f64).collect();
        Ok(Grid2D::from_vec(self.header.height, self.header.width, values)?)
    }
}

impl From<&CageTensor> for RawTensor {
    fn from(t: &CageTensor) -> Self {
        RawTensor {
            header: TensorHeader {
                version: FORMAT_VERSION,
                channels: CHANNELS,
                height: t.side,
                width: t.side,
                n: t.side,
                p: t.original.rows,
                q: t.original.cols,
                trim: t.trim,
                seed: t.seed,
            },
            data: t.to_f32(),
        }
    }
}

/// Single-channel container for a flow map. `original` and `trim` describe
/// the scenario the map belongs to.
pub fn flow_to_raw(flow: &FlowMap, original: Dims, trim: Trim, seed: u64) -> RawTensor {
    let d = flow.dims();
    RawTensor {
        header: TensorHeader {
            version: FORMAT_VERSION,
            channels: 1,
            height: d.rows,
            width: d.cols,
            n: if flow.resolution == Resolution::Compressed { d.rows } else { d.rows.max(d.cols) },
            p: original.rows,
            q: original.cols,
            trim,
            seed,
        },
        data: flow.grid.values().iter().map(|&v| v as f32).collect(),
    }
}

pub fn raw_to_flow(raw: &RawTensor, resolution: Resolution) -> Result<FlowMap, CodecError> {
    if raw.header.channels != 1 {
        return Err(CodecError::Format(format!("expected 1 channel, found {}", raw.header.channels)));
    }
    Ok(FlowMap { grid: raw.channel_grid(0)?, resolution })
}

/// Reads a compressed flow tensor against `plan` and expands it to the
/// source grid as a density map. The tensor must describe the plan's source
/// grid and sit on the plan's canvas.
pub fn decode_flow(raw: &RawTensor, plan: &CompressionPlan) -> Result<FlowMap, CodecError> {
    let described = Dims::new(raw.header.p, raw.header.q);
    if described != plan.original {
        return Err(CodecError::DimensionMismatch { expected: plan.original, actual: described });
    }
    decompress_density(&raw_to_flow(raw, Resolution::Compressed)?, plan)
}

pub fn write_raw<W: Write>(mut w: W, t: &RawTensor) -> Result<(), CodecError> {
    let expected = t.header.channels * t.header.height * t.header.width;
    if t.data.len() != expected {
        return Err(CodecError::Format(format!("{} values for a header describing {expected}", t.data.len())));
    }
    let header = serde_json::to_string(&t.header).map_err(|e| CodecError::Format(e.to_string()))?;
    w.write_all(header.as_bytes())?;
    w.write_all(b"\n")?;
    let mut bytes = Vec::with_capacity(4 * t.data.len());
    for v in &t.data {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&bytes)?;
    Ok(())
}

pub fn read_raw<R: Read>(r: R) -> Result<RawTensor, CodecError> {
    let mut r = BufReader::new(r);
    let mut line = Vec::new();
    r.read_until(b'\n', &mut line)?;
    if line.last() != Some(&b'\n') {
        return Err(CodecError::Format("missing header line".into()));
    }
    let header: TensorHeader =
        serde_json::from_slice(&line[..line.len() - 1]).map_err(|e| CodecError::Format(e.to_string()))?;
    if header.version != FORMAT_VERSION {
        return Err(CodecError::Format(format!("unsupported version {}", header.version)));
    }
    let len = header.channels * header.height * header.width;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != 4 * len {
        return Err(CodecError::Format(format!("expected {} data bytes, found {}", 4 * len, bytes.len())));
    }
    let data = bytes.chunks_exact(4).map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]])).collect();
    Ok(RawTensor { header, data })
}

pub fn write_raw_file(path: &Path, t: &RawTensor) -> Result<(), CodecError> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    write_raw(&mut w, t)?;
    w.flush()?;
    Ok(())
}

pub fn read_raw_file(path: &Path) -> Result<RawTensor, CodecError> {
    read_raw(std::fs::File::open(path)?)
}

pub fn write_plan_file(path: &Path, plan: &CompressionPlan) -> Result<(), CodecError> {
    let json = serde_json::to_string_pretty(plan).map_err(|e| CodecError::Format(e.to_string()))?;
    std::fs::write(path, json + "\n")?;
    Ok(())
}

pub fn read_plan_file(path: &Path) -> Result<CompressionPlan, CodecError> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CodecError::Format(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::encode;
    use crate::grid::Scenario;

    #[test]
    fn tensor_round_trips_bit_exactly() {
        let s = Scenario::from_ascii(&["G...#", ".A..#", "....A"], 0.5, 11).unwrap();
        let (_, t) = encode(&s, 8).unwrap();
        let raw = RawTensor::from(&t);
        let mut buf = Vec::new();
        write_raw(&mut buf, &raw).unwrap();
        let back = read_raw(&buf[..]).unwrap();
        assert_eq!(back, raw);
        assert_eq!(back.header.seed, 11);
        assert_eq!(buf.len(), buf.iter().position(|&b| b == b'\n').unwrap() + 1 + 4 * 5 * 64);
    }

    #[test]
    fn truncated_data_is_rejected() {
        let flow = FlowMap::zeros(Dims::new(2, 3), Resolution::Original);
        let mut buf = Vec::new();
        write_raw(&mut buf, &flow_to_raw(&flow, Dims::new(2, 3), Trim::default(), 0)).unwrap();
        buf.pop();
        assert!(matches!(read_raw(&buf[..]), Err(CodecError::Format(_))));
    }

    #[test]
    fn flow_round_trip_keeps_values() {
        let mut flow = FlowMap::zeros(Dims::new(2, 2), Resolution::Compressed);
        flow.grid[crate::grid::Cell::new(1, 0)] = 0.25;
        let raw = flow_to_raw(&flow, Dims::new(4, 4), Trim::default(), 1);
        assert_eq!(raw_to_flow(&raw, Resolution::Compressed).unwrap(), flow);
    }
}
