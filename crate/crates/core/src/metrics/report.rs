use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::flow::Regime;

/// Which input the predictor was built around: the environment channel or
/// the goal channel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GoalTag {
    #[serde(rename = "E-centric")]
    ECentric,
    #[serde(rename = "G-centric")]
    GCentric,
}

/// One evaluated case; serialized as a CSV row `case_id,regime,goal,mae,kl`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub case_id: String,
    pub regime: Regime,
    pub goal: GoalTag,
    pub mae: f64,
    pub kl: f64,
}

pub fn write_reports_csv<W: std::io::Write>(w: W, reports: &[EvalReport]) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in reports {
        out.serialize(r)?;
    }
    if reports.is_empty() {
        out.write_record(["case_id", "regime", "goal", "mae", "kl"])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_reports_csv(path: &Path) -> csv::Result<Vec<EvalReport>> {
    csv::Reader::from_path(path)?.deserialize().collect()
}
