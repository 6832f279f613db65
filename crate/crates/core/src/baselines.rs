//! k-NN ball baselines: improved precision/recall and density/coverage.
//!
//! Each real (or fake) point `X_i` gets the closed ball of radius
//! `NND_k(X_i)`, its distance to the `k`-th nearest other point of the same
//! set. The union of balls is the support estimate these metrics use.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{sq_dist, FeatureMatrix};
use crate::neighbors::kth_sq_dists;

pub const DEFAULT_BASELINE_K: usize = 5;

/// Normalization of the density double sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityVariant {
    /// `1 / (k M)`, as density and coverage were originally defined.
    #[default]
    Original,
    /// `1 / M`, without the `1/k` factor.
    PaperLiteral,
}

impl DensityVariant {
    pub fn name(self) -> &'static str {
        match self {
            DensityVariant::Original => "original",
            DensityVariant::PaperLiteral => "paper-literal",
        }
    }
}

impl fmt::Display for DensityVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DensityVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "original" => Ok(DensityVariant::Original),
            "paper-literal" => Ok(DensityVariant::PaperLiteral),
            _ => Err(Error::BadConfig(format!("unknown density variant {s:?}"))),
        }
    }
}

/// Results of the baseline metrics. Fields that were not computed are `None`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recall: Option<f64>,
    /// Unbounded above.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<f64>,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dc_variant: Option<DensityVariant>,
}

impl BaselineReport {
    /// All four metrics.
    pub fn compute(real: &FeatureMatrix, fake: &FeatureMatrix, k: usize, variant: DensityVariant) -> Result<Self> {
        let (precision, recall) = improved_pr(real, fake, k)?;
        let (density, coverage) = density_coverage(real, fake, k, variant)?;
        Ok(BaselineReport {
            precision: Some(precision),
            recall: Some(recall),
            density: Some(density),
            coverage: Some(coverage),
            k,
            dc_variant: Some(variant),
        })
    }
}

/// Improved precision and recall.
///
/// Precision is the share of fake points inside the union of real balls;
/// recall is the share of real points inside the union of fake balls.
pub fn improved_pr(real: &FeatureMatrix, fake: &FeatureMatrix, k: usize) -> Result<(f64, f64)> {
    real.ensure_same_cols(fake)?;
    let real_r2 = kth_sq_dists(real, real, k, true)?;
    let fake_r2 = kth_sq_dists(fake, fake, k, true)?;
    let precision = fraction(&inside_any(real, &real_r2, fake));
    let recall = fraction(&inside_any(fake, &fake_r2, real));
    Ok((precision, recall))
}

/// Density and coverage, both measured against the real balls only.
pub fn density_coverage(
    real: &FeatureMatrix,
    fake: &FeatureMatrix,
    k: usize,
    variant: DensityVariant,
) -> Result<(f64, f64)> {
    real.ensure_same_cols(fake)?;
    let real_r2 = kth_sq_dists(real, real, k, true)?;

    let hits: usize = (0..fake.rows())
        .into_par_iter()
        .map(|j| {
            let y = fake.row(j);
            real.row_iter()
                .zip(&real_r2)
                .filter(|&(x, &r2)| sq_dist(y, x) <= r2)
                .count()
        })
        .sum();
    let m = fake.rows() as f64;
    let density = match variant {
        DensityVariant::Original => hits as f64 / (k as f64 * m),
        DensityVariant::PaperLiteral => hits as f64 / m,
    };

    let covered: Vec<bool> = (0..real.rows())
        .into_par_iter()
        .map(|i| {
            let (x, r2) = (real.row(i), real_r2[i]);
            fake.row_iter().any(|y| sq_dist(x, y) <= r2)
        })
        .collect();
    Ok((density, fraction(&covered)))
}

/// For each point: does some ball `(center_i, sq_radius_i)` contain it?
fn inside_any(centers: &FeatureMatrix, sq_radii: &[f64], points: &FeatureMatrix) -> Vec<bool> {
    (0..points.rows())
        .into_par_iter()
        .map(|j| {
            let p = points.row(j);
            centers.row_iter().zip(sq_radii).any(|(c, &r2)| sq_dist(p, c) <= r2)
        })
        .collect()
}

fn fraction(flags: &[bool]) -> f64 {
    flags.iter().filter(|&&b| b).count() as f64 / flags.len() as f64
}
