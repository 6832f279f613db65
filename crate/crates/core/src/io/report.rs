//! JSON report documents.
//!
//! Both document kinds carry `"schema": "toppr/1"` and a `"kind"` tag. Floats
//! are written in shortest round-trip form, so parsing a document gives back
//! the exact values.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::baselines::BaselineReport;
use crate::error::{Error, Result};
use crate::kde::Kernel;
use crate::scoring::ScoreReport;

pub const SCHEMA: &str = "toppr/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreFlags {
    pub precision_undefined: bool,
    pub recall_undefined: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreDiagnostics {
    pub kernel: Kernel,
    pub balloon_k_real: usize,
    pub balloon_k_fake: usize,
    pub n_real_in_own_support: usize,
    pub n_fake_in_own_support: usize,
    pub n_fake_in_both: usize,
    pub n_real_in_both: usize,
}

/// On-disk form of a [`ScoreReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreDocument {
    pub schema: String,
    pub kind: String,
    pub top_p: f64,
    pub top_r: f64,
    pub f1: f64,
    pub h_real: f64,
    pub h_fake: f64,
    pub c_real: f64,
    pub c_fake: f64,
    pub n_real: usize,
    pub n_fake: usize,
    /// `null` when the raw features were scored.
    pub proj_dim: Option<usize>,
    pub alpha: f64,
    pub bootstrap: usize,
    pub seed: u64,
    pub flags: ScoreFlags,
    pub diagnostics: ScoreDiagnostics,
}

impl From<&ScoreReport> for ScoreDocument {
    fn from(r: &ScoreReport) -> Self {
        ScoreDocument {
            schema: SCHEMA.into(),
            kind: "score".into(),
            top_p: r.top_p,
            top_r: r.top_r,
            f1: r.f1,
            h_real: r.h_real,
            h_fake: r.h_fake,
            c_real: r.c_real,
            c_fake: r.c_fake,
            n_real: r.n_real,
            n_fake: r.n_fake,
            proj_dim: r.proj_dim_used,
            alpha: r.alpha,
            bootstrap: r.repeats,
            seed: r.seed,
            flags: ScoreFlags {
                precision_undefined: r.precision_undefined,
                recall_undefined: r.recall_undefined,
            },
            diagnostics: ScoreDiagnostics {
                kernel: r.kernel,
                balloon_k_real: r.balloon_k_real,
                balloon_k_fake: r.balloon_k_fake,
                n_real_in_own_support: r.n_real_in_own_support,
                n_fake_in_own_support: r.n_fake_in_own_support,
                n_fake_in_both: r.n_fake_in_both,
                n_real_in_both: r.n_real_in_both,
            },
        }
    }
}

impl From<ScoreDocument> for ScoreReport {
    fn from(d: ScoreDocument) -> Self {
        ScoreReport {
            top_p: d.top_p,
            top_r: d.top_r,
            f1: d.f1,
            h_real: d.h_real,
            h_fake: d.h_fake,
            c_real: d.c_real,
            c_fake: d.c_fake,
            n_real: d.n_real,
            n_fake: d.n_fake,
            n_real_in_own_support: d.diagnostics.n_real_in_own_support,
            n_fake_in_own_support: d.diagnostics.n_fake_in_own_support,
            n_fake_in_both: d.diagnostics.n_fake_in_both,
            n_real_in_both: d.diagnostics.n_real_in_both,
            proj_dim_used: d.proj_dim,
            alpha: d.alpha,
            repeats: d.bootstrap,
            kernel: d.diagnostics.kernel,
            balloon_k_real: d.diagnostics.balloon_k_real,
            balloon_k_fake: d.diagnostics.balloon_k_fake,
            seed: d.seed,
            precision_undefined: d.flags.precision_undefined,
            recall_undefined: d.flags.recall_undefined,
        }
    }
}

/// On-disk form of a [`BaselineReport`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineDocument {
    pub schema: String,
    pub kind: String,
    #[serde(flatten)]
    pub report: BaselineReport,
}

impl From<&BaselineReport> for BaselineDocument {
    fn from(r: &BaselineReport) -> Self {
        BaselineDocument {
            schema: SCHEMA.into(),
            kind: "baseline".into(),
            report: r.clone(),
        }
    }
}

/// Either kind of report.
#[derive(Clone, Debug, PartialEq)]
pub enum Report {
    Score(ScoreReport),
    Baseline(BaselineReport),
}

impl From<ScoreReport> for Report {
    fn from(r: ScoreReport) -> Self {
        Report::Score(r)
    }
}

impl From<BaselineReport> for Report {
    fn from(r: BaselineReport) -> Self {
        Report::Baseline(r)
    }
}

impl Report {
    /// Compact JSON on one line, newline-terminated.
    pub fn to_json(&self) -> Result<String> {
        let mut text = match self {
            Report::Score(r) => serde_json::to_string(&ScoreDocument::from(r))?,
            Report::Baseline(r) => serde_json::to_string(&BaselineDocument::from(r))?,
        };
        text.push('\n');
        Ok(text)
    }

    /// Parses a document written by [`Report::to_json`].
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let schema = value.get("schema").and_then(|s| s.as_str());
        if schema != Some(SCHEMA) {
            return Err(Error::BadConfig(format!("unsupported report schema {schema:?}")));
        }
        match value.get("kind").and_then(|k| k.as_str()) {
            Some("score") => Ok(Report::Score(serde_json::from_value::<ScoreDocument>(value)?.into())),
            Some("baseline") => Ok(Report::Baseline(serde_json::from_value::<BaselineDocument>(value)?.report)),
            other => Err(Error::BadConfig(format!("unknown report kind {other:?}"))),
        }
    }
}

pub fn write_report(report: &Report, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, report.to_json()?)?;
    Ok(())
}

pub fn read_report(path: impl AsRef<Path>) -> Result<Report> {
    Report::from_json(&fs::read_to_string(path)?)
}
