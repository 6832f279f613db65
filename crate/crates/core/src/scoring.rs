//! The topological precision and recall pipeline.
//!
//! 1. Optionally project both sets with one shared random map.
//! 2. For each set, pick a bandwidth with the balloon estimator and a
//!    threshold with the bootstrap band. The estimated support is the set of
//!    points whose kernel mean exceeds the threshold.
//! 3. Precision is the share of generated points inside their own estimated
//!    support that also fall inside the real one; recall is the mirror image.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::band::{bootstrap_band, ConfidenceBand, DEFAULT_ALPHA, DEFAULT_REPEATS};
use crate::error::{Error, Result};
use crate::kde::{balloon_bandwidth, kernel_mean, BalloonK, KdeModel, Kernel};
use crate::matrix::FeatureMatrix;
use crate::projection::{make_projection, project, DEFAULT_PROJ_DIM};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Target dimension of the random projection; `None` scores the raw features.
    pub proj_dim: Option<usize>,
    pub alpha: f64,
    /// Bootstrap rounds per band.
    pub repeats: usize,
    pub balloon_k: BalloonK,
    pub kernel: Kernel,
    pub master_seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            proj_dim: Some(DEFAULT_PROJ_DIM),
            alpha: DEFAULT_ALPHA,
            repeats: DEFAULT_REPEATS,
            balloon_k: BalloonK::Auto,
            kernel: Kernel::default(),
            master_seed: 42,
        }
    }
}

impl PipelineConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn with_proj_dim(mut self, proj_dim: Option<usize>) -> Self {
        self.proj_dim = proj_dim;
        self
    }

    pub fn with_kernel(mut self, kernel: Kernel) -> Self {
        self.kernel = kernel;
        self
    }

    pub fn with_balloon_k(mut self, balloon_k: BalloonK) -> Self {
        self.balloon_k = balloon_k;
        self
    }

    /// Checks the configuration against inputs with `cols` features.
    pub fn validate(&self, cols: usize) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::BadAlpha(self.alpha));
        }
        if self.repeats == 0 {
            return Err(Error::ZeroRepeats);
        }
        if let Some(r) = self.proj_dim {
            if r == 0 || r > cols {
                return Err(Error::BadDims {
                    source_dim: cols,
                    target_dim: r,
                });
            }
        }
        if self.balloon_k == BalloonK::Fixed(0) {
            return Err(Error::BadConfig("balloon k must be at least 1".into()));
        }
        Ok(())
    }
}

/// A fitted kernel mean together with its confidence band.
///
/// A point belongs to the estimated support when its kernel mean is strictly
/// greater than the band threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportEstimate {
    pub model: KdeModel,
    pub band: ConfidenceBand,
    /// Neighbor rank used for the bandwidth.
    pub balloon_k: usize,
}

impl SupportEstimate {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.model.eval(x) > self.band.c
    }

    /// Membership of every row of `points`.
    pub fn membership(&self, points: &FeatureMatrix) -> Result<Vec<bool>> {
        Ok(threshold(&kernel_mean(&self.model, points)?, self.band.c))
    }
}

/// `values[i] > c` for every entry.
pub fn threshold(values: &[f64], c: f64) -> Vec<bool> {
    values.iter().map(|&v| v > c).collect()
}

/// Fits the bandwidth and band for one data set.
pub fn estimate_support(features: &FeatureMatrix, cfg: &PipelineConfig, dataset_seed: u64) -> Result<SupportEstimate> {
    if features.rows() < 2 {
        return Err(Error::TooFewRows {
            rows: features.rows(),
            min: 2,
        });
    }
    let k = cfg.balloon_k.resolve(features.rows());
    let h = balloon_bandwidth(features, k)?;
    let model = KdeModel::new(features.clone(), h, cfg.kernel)?;
    let band = bootstrap_band(&model, cfg.alpha, cfg.repeats, dataset_seed)?;
    Ok(SupportEstimate {
        model,
        band,
        balloon_k: k,
    })
}

/// Seed for a data set's bootstrap, keyed by content rather than by role.
///
/// SHA-256 over a domain tag, the master seed and the matrix (shape, then
/// values as little-endian `f64`); the first 8 digest bytes, little-endian.
pub fn dataset_seed(master_seed: u64, features: &FeatureMatrix) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(b"toppr/dataset");
    hasher.update(master_seed.to_le_bytes());
    hasher.update((features.rows() as u64).to_le_bytes());
    hasher.update((features.cols() as u64).to_le_bytes());
    for v in features.as_slice() {
        hasher.update(v.to_le_bytes());
    }
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub top_p: f64,
    pub top_r: f64,
    pub f1: f64,
    pub h_real: f64,
    pub h_fake: f64,
    pub c_real: f64,
    pub c_fake: f64,
    pub n_real: usize,
    pub n_fake: usize,
    pub n_real_in_own_support: usize,
    pub n_fake_in_own_support: usize,
    pub n_fake_in_both: usize,
    pub n_real_in_both: usize,
    pub proj_dim_used: Option<usize>,
    pub alpha: f64,
    pub repeats: usize,
    pub kernel: Kernel,
    pub balloon_k_real: usize,
    pub balloon_k_fake: usize,
    pub seed: u64,
    /// No generated point fell inside its own estimated support; `top_p` is reported as 0.
    pub precision_undefined: bool,
    /// No real point fell inside its own estimated support; `top_r` is reported as 0.
    pub recall_undefined: bool,
}

/// Scores `fake` against `real`.
pub fn top_pr(real: &FeatureMatrix, fake: &FeatureMatrix, cfg: &PipelineConfig) -> Result<ScoreReport> {
    real.ensure_same_cols(fake)?;
    cfg.validate(real.cols())?;
    for m in [real, fake] {
        if m.rows() < 2 {
            return Err(Error::TooFewRows {
                rows: m.rows(),
                min: 2,
            });
        }
    }

    let projected;
    let (real, fake) = match cfg.proj_dim {
        Some(r) => {
            let map = make_projection(real.cols(), r, cfg.master_seed)?;
            projected = (project(&map, real)?, project(&map, fake)?);
            (&projected.0, &projected.1)
        }
        None => (real, fake),
    };

    let (real_est, fake_est) = rayon::join(
        || estimate_support(real, cfg, dataset_seed(cfg.master_seed, real)),
        || estimate_support(fake, cfg, dataset_seed(cfg.master_seed, fake)),
    );
    let (real_est, fake_est) = (real_est?, fake_est?);

    let (real_own, fake_own) = rayon::join(
        || real_est.membership(real),
        || fake_est.membership(fake),
    );
    let (real_own, fake_own) = (real_own?, fake_own?);
    let (fake_in_real, real_in_fake) = rayon::join(
        || real_est.membership(fake),
        || fake_est.membership(real),
    );
    let (fake_in_real, real_in_fake) = (fake_in_real?, real_in_fake?);

    let count = |v: &[bool]| v.iter().filter(|&&b| b).count();
    let both = |a: &[bool], b: &[bool]| a.iter().zip(b).filter(|&(&x, &y)| x && y).count();

    let n_fake_own = count(&fake_own);
    let n_real_own = count(&real_own);
    let n_fake_both = both(&fake_own, &fake_in_real);
    let n_real_both = both(&real_own, &real_in_fake);

    let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
    let top_p = ratio(n_fake_both, n_fake_own);
    let top_r = ratio(n_real_both, n_real_own);

    Ok(ScoreReport {
        top_p,
        top_r,
        f1: f1_score(top_p, top_r)?,
        h_real: real_est.model.bandwidth(),
        h_fake: fake_est.model.bandwidth(),
        c_real: real_est.band.c,
        c_fake: fake_est.band.c,
        n_real: real.rows(),
        n_fake: fake.rows(),
        n_real_in_own_support: n_real_own,
        n_fake_in_own_support: n_fake_own,
        n_fake_in_both: n_fake_both,
        n_real_in_both: n_real_both,
        proj_dim_used: cfg.proj_dim,
        alpha: cfg.alpha,
        repeats: cfg.repeats,
        kernel: cfg.kernel,
        balloon_k_real: real_est.balloon_k,
        balloon_k_fake: fake_est.balloon_k,
        seed: cfg.master_seed,
        precision_undefined: n_fake_own == 0,
        recall_undefined: n_real_own == 0,
    })
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f1_score(p: f64, r: f64) -> Result<f64> {
    for (name, value) in [("precision", p), ("recall", r)] {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::OutOfRange { name, value });
        }
    }
    if p + r == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * p * r / (p + r))
}
