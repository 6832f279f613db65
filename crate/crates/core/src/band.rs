//! Bootstrap confidence band for the kernel-mean sup-norm.
//!
//! For each of `repeats` rounds, `n` indices are drawn with replacement from
//! the data, the bootstrap kernel mean `s*` is formed from that resample, and
//! the statistic `theta = sqrt(n) * max_i |s(X_i) - s*(X_i)|` is recorded. The
//! sup runs over the original data points. The band is
//! `c = q / sqrt(n)` where `q` is the nearest-rank upper-`alpha` quantile of
//! the recorded statistics.
//!
//! Round `r` draws its indices from [`rng::stream`]`(seed, r)` using
//! `Rng::random_range(0..n)`, so the band is a pure function of its inputs.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kde::KdeModel;
use crate::matrix::sq_dist;
use crate::rng;

/// Default significance level.
pub const DEFAULT_ALPHA: f64 = 0.1;
/// Default number of bootstrap rounds.
pub const DEFAULT_REPEATS: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceBand {
    /// The threshold, in kernel-mean units.
    pub c: f64,
    pub alpha: f64,
    pub repeats: usize,
    /// `sqrt(n) * sup |s - s*|` for each round, in round order.
    pub theta: Vec<f64>,
    pub seed: u64,
    /// Number of resampled points.
    pub n: usize,
}

impl ConfidenceBand {
    /// Recomputes the threshold at another significance level from the stored statistics.
    pub fn threshold_at(&self, alpha: f64) -> Result<f64> {
        check_alpha(alpha)?;
        Ok(upper_quantile(&self.theta, alpha) / (self.n as f64).sqrt())
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::BadAlpha(alpha))
    }
}

/// Smallest `q` among `theta` with `#{t > q} / len <= alpha`.
pub fn upper_quantile(theta: &[f64], alpha: f64) -> f64 {
    assert!(!theta.is_empty());
    let mut sorted = theta.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let k = sorted.len();
    for (i, &q) in sorted.iter().enumerate() {
        // everything after the last copy of q is strictly greater
        let last = sorted[i..].iter().take_while(|&&t| t == q).count() + i;
        let above = k - last;
        if (above as f64) / (k as f64) <= alpha {
            return q;
        }
    }
    sorted[k - 1]
}

/// Runs the bootstrap on the reference set of `model`.
///
/// The model's reference rows are both the data being resampled and the
/// points where the sup-norm is evaluated.
pub fn bootstrap_band(model: &KdeModel, alpha: f64, repeats: usize, seed: u64) -> Result<ConfidenceBand> {
    check_alpha(alpha)?;
    if repeats == 0 {
        return Err(Error::ZeroRepeats);
    }
    let data = model.reference();
    let n = data.rows();
    let nf = n as f64;
    let (h, kernel, scale) = (model.bandwidth(), model.kernel(), model.scale());

    let draws: Vec<Vec<usize>> = (0..repeats as u64)
        .map(|r| {
            let mut rng = rng::stream(seed, r);
            (0..n).map(|_| rng.random_range(0..n)).collect()
        })
        .collect();

    // For each evaluation point: one kernel row, then every round's resample
    // is summed from it in draw order.
    let sup = (0..n)
        .into_par_iter()
        .fold(
            || (vec![0.0; repeats], Vec::with_capacity(n)),
            |(mut sup, mut krow): (Vec<f64>, Vec<f64>), i| {
                let xi = data.row(i);
                krow.clear();
                krow.extend(data.row_iter().map(|xj| kernel.eval_sq(sq_dist(xi, xj), h)));
                let mut total = 0.0;
                for &k in &krow {
                    total += k;
                }
                let s = scale * (total / nf);
                for (r, idx) in draws.iter().enumerate() {
                    let mut acc = 0.0;
                    for &j in idx {
                        acc += krow[j];
                    }
                    let s_star = scale * (acc / nf);
                    let diff = (s - s_star).abs();
                    if diff > sup[r] {
                        sup[r] = diff;
                    }
                }
                (sup, krow)
            },
        )
        .map(|(sup, _)| sup)
        .reduce(
            || vec![0.0; repeats],
            |a, b| a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect(),
        );

    let root_n = nf.sqrt();
    let theta: Vec<f64> = sup.iter().map(|s| root_n * s).collect();
    let c = upper_quantile(&theta, alpha) / root_n;
    Ok(ConfidenceBand {
        c,
        alpha,
        repeats,
        theta,
        seed,
        n,
    })
}
