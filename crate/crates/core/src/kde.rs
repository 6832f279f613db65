//! Kernel means and the balloon bandwidth estimator.
//!
//! The estimator used throughout is the *unnormalized* kernel mean
//!
//! ```text
//! s(x) = (1/n) * sum_i K(||x - X_i|| / h)
//! ```
//!
//! with `K(0) = 1`. The usual `1/h^d` density normalization is left out: it
//! underflows or overflows in a few dozen dimensions, and every decision this
//! crate makes compares `s(x)` against a threshold derived from the same
//! estimator, so a common positive factor cancels. [`KdeModel::with_scale`]
//! reinstates any such factor for callers who want true densities.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{sq_dist, FeatureMatrix};
use crate::neighbors::kth_sq_dists;

/// Radial kernel profile, evaluated on `u = ||x - y|| / h`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// `exp(-u^2 / 2)`.
    Gaussian,
    /// `cos(pi u / 2)` for `u < 1`, else 0.
    Cosine,
    /// `1 - u^2` for `u < 1`, else 0.
    Epanechnikov,
    /// 1 on the closed unit ball, else 0. The kernel mean is then the
    /// fraction of reference points within distance `h`.
    #[default]
    Uniform,
}

impl Kernel {
    pub const ALL: [Kernel; 4] = [
        Kernel::Gaussian,
        Kernel::Cosine,
        Kernel::Epanechnikov,
        Kernel::Uniform,
    ];

    /// Kernel value for a squared distance `sq` at bandwidth `h`.
    #[inline]
    pub fn eval_sq(self, sq: f64, h: f64) -> f64 {
        match self {
            Kernel::Gaussian => (-0.5 * (sq / (h * h))).exp(),
            Kernel::Cosine => {
                let u = sq.sqrt() / h;
                if u < 1.0 {
                    (std::f64::consts::FRAC_PI_2 * u).cos()
                } else {
                    0.0
                }
            }
            Kernel::Epanechnikov => {
                let t = sq / (h * h);
                if t < 1.0 {
                    1.0 - t
                } else {
                    0.0
                }
            }
            Kernel::Uniform => {
                if sq <= h * h {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Gaussian => "gaussian",
            Kernel::Cosine => "cosine",
            Kernel::Epanechnikov => "epanechnikov",
            Kernel::Uniform => "uniform",
        }
    }

    pub fn has_compact_support(self) -> bool {
        !matches!(self, Kernel::Gaussian)
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kernel::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::BadConfig(format!("unknown kernel {s:?}")))
    }
}

/// A reference set, a bandwidth and a kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct KdeModel {
    reference: FeatureMatrix,
    bandwidth: f64,
    kernel: Kernel,
    scale: f64,
}

impl KdeModel {
    pub fn new(reference: FeatureMatrix, bandwidth: f64, kernel: Kernel) -> Result<Self> {
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::BadConfig(format!(
                "bandwidth must be positive and finite, got {bandwidth}"
            )));
        }
        Ok(KdeModel {
            reference,
            bandwidth,
            kernel,
            scale: 1.0,
        })
    }

    /// Multiplies every kernel mean by `scale` (for example `1/h^d`).
    pub fn with_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::BadConfig(format!("scale must be positive, got {scale}")));
        }
        self.scale = scale;
        Ok(self)
    }

    pub fn reference(&self) -> &FeatureMatrix {
        &self.reference
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Kernel mean at a single point. Summation runs over reference rows in order.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for r in self.reference.row_iter() {
            acc += self.kernel.eval_sq(sq_dist(x, r), self.bandwidth);
        }
        self.scale * (acc / self.reference.rows() as f64)
    }
}

/// Kernel mean of `model` at every query row.
///
/// Values lie in `(0, scale]` for the Gaussian kernel; compact kernels return
/// 0 for queries farther than `h` from every reference point.
pub fn kernel_mean(model: &KdeModel, queries: &FeatureMatrix) -> Result<Vec<f64>> {
    model.reference.ensure_same_cols(queries)?;
    Ok((0..queries.rows())
        .into_par_iter()
        .map(|i| model.eval(queries.row(i)))
        .collect())
}

/// How many neighbors the balloon estimator looks at.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BalloonK {
    /// `ceil(sqrt(2n))`, capped at `n - 1`.
    #[default]
    Auto,
    Fixed(usize),
}

impl BalloonK {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            BalloonK::Auto => ((2.0 * n as f64).sqrt().ceil() as usize).clamp(1, n.saturating_sub(1).max(1)),
            BalloonK::Fixed(k) => k,
        }
    }
}

impl fmt::Display for BalloonK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BalloonK::Auto => f.write_str("auto"),
            BalloonK::Fixed(k) => write!(f, "{k}"),
        }
    }
}

impl FromStr for BalloonK {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(BalloonK::Auto);
        }
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(BalloonK::Fixed(k)),
            _ => Err(Error::BadConfig(format!(
                "balloon k must be 'auto' or a positive integer, got {s:?}"
            ))),
        }
    }
}

/// Median of the per-point `k`-th nearest-neighbor distances, self excluded.
pub fn balloon_bandwidth(features: &FeatureMatrix, k: usize) -> Result<f64> {
    let n = features.rows();
    if n < 2 {
        return Err(Error::TooFewRows { rows: n, min: 2 });
    }
    let mut dists: Vec<f64> = kth_sq_dists(features, features, k, true)?
        .into_iter()
        .map(f64::sqrt)
        .collect();
    let h = median(&mut dists);
    if h <= 0.0 {
        return Err(Error::DegenerateData(format!(
            "balloon bandwidth is 0: at least half of the {n} points coincide with their {k}-th neighbor"
        )));
    }
    Ok(h)
}

/// Median with the midpoint convention for even lengths. Reorders `values`.
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty slice");
    values.sort_unstable_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}
