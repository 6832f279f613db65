//! Topological precision and recall for comparing generated samples with real ones.
//!
//! Each feature set gets a kernel density estimate with a balloon bandwidth,
//! and a bootstrap confidence band thresholds that estimate into a support.
//! Precision is the share of generated samples in their own support that also
//! land in the real support; recall is the mirror image.
//!
//! ```
//! use toppr::{synth, top_pr, PipelineConfig, ScenarioKind, ScenarioSpec};
//!
//! let spec = ScenarioSpec::new(ScenarioKind::Shift).sizes(300, 300).dim(16).outlier(None);
//! let (real, fake) = synth::gen_shift_pair(&spec)?;
//! let cfg = PipelineConfig::default().with_proj_dim(Some(8));
//! let report = top_pr(&real, &fake, &cfg)?;
//! assert!(report.top_p > 0.5 && report.top_r > 0.5);
//! # Ok::<(), toppr::Error>(())
//! ```

pub mod band;
pub mod baselines;
mod error;
pub mod io;
pub mod kde;
mod matrix;
pub mod neighbors;
pub mod projection;
pub mod rank;
pub mod rng;
pub mod scoring;
pub mod synth;

pub use band::{bootstrap_band, ConfidenceBand};
pub use baselines::{density_coverage, improved_pr, BaselineReport, DensityVariant};
pub use error::{Error, Result};
pub use kde::{balloon_bandwidth, kernel_mean, BalloonK, KdeModel, Kernel};
pub use matrix::{sq_dist, FeatureMatrix};
pub use projection::{make_projection, project, ProjectionMap};
pub use scoring::{f1_score, top_pr, PipelineConfig, ScoreReport, SupportEstimate};
pub use synth::{ScenarioKind, ScenarioSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/supports.md")]
    mod supports {}
    #[doc = include_str!("../../../book/src/projection.md")]
    mod projection {}
    #[doc = include_str!("../../../book/src/scoring.md")]
    mod scoring {}
    #[doc = include_str!("../../../book/src/baselines.md")]
    mod baselines {}
    #[doc = include_str!("../../../book/src/scenarios.md")]
    mod scenarios {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
