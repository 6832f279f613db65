//! Seeded generators for the synthetic sanity-check scenarios.
//!
//! Every generator draws from its own named [`rng::stream`], and each mode of
//! a mixture has a private stream, so neighbouring steps of a sweep share
//! their samples: shrinking a mode keeps a prefix of its points and shifting
//! the generated set moves the same points.

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;
use crate::rng::{self, StreamRng};

const REAL_STREAM: u64 = 1;
const FAKE_STREAM: u64 = 2;
const REAL_MODE_STREAM: u64 = 1 << 32;
const FAKE_MODE_STREAM: u64 = 2 << 32;
const SCATTER_STREAM: u64 = 3 << 32;
const SWAP_STREAM: u64 = 4 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Shift,
    SequentialDrop,
    SimultaneousDrop,
    ScatterNoise,
    SwapNoise,
    LongTail,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Shift => "shift",
            ScenarioKind::SequentialDrop => "seq-drop",
            ScenarioKind::SimultaneousDrop => "sim-drop",
            ScenarioKind::ScatterNoise => "scatter",
            ScenarioKind::SwapNoise => "swap",
            ScenarioKind::LongTail => "long-tail",
        }
    }

    pub fn is_mode_drop(self) -> bool {
        matches!(self, ScenarioKind::SequentialDrop | ScenarioKind::SimultaneousDrop)
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use ScenarioKind::*;
        [Shift, SequentialDrop, SimultaneousDrop, ScatterNoise, SwapNoise, LongTail]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::BadSpec(format!("unknown scenario {s:?}")))
    }
}

/// Parameters of one synthetic scenario instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    /// Real sample count (outliers not included).
    pub n: usize,
    /// Generated sample count (outliers not included).
    pub m: usize,
    pub d: usize,
    /// Mean shift of the generated set along the all-ones direction.
    pub mu: f64,
    /// Coordinate of the single outlier appended to each set, if any.
    pub outlier_coord: Option<f64>,
    pub num_modes: usize,
    /// Distance between neighbouring mixture modes.
    pub mode_spacing: f64,
    /// Position in a mode-drop sweep, 0 (no drop) to 1 (only mode 0 left).
    pub progress: f64,
    /// Fraction of rows hit by scatter or swap noise.
    pub rho: f64,
    pub long_tail: LongTailSpec,
    pub seed: u64,
}

/// Class layout of the long-tailed mixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LongTailSpec {
    pub majors: usize,
    pub major_count: usize,
    pub minors: usize,
    pub minor_count: usize,
}

impl Default for LongTailSpec {
    fn default() -> Self {
        LongTailSpec {
            majors: 6,
            major_count: 2000,
            minors: 4,
            minor_count: 500,
        }
    }
}

impl LongTailSpec {
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![self.major_count; self.majors];
        counts.extend(std::iter::repeat_n(self.minor_count, self.minors));
        counts
    }

    pub fn total(&self) -> usize {
        self.majors * self.major_count + self.minors * self.minor_count
    }
}

pub const DEFAULT_OUTLIER_COORD: f64 = 3.0;
pub const DEFAULT_NUM_MODES: usize = 7;
pub const DEFAULT_MODE_SPACING: f64 = 30.0;

impl ScenarioSpec {
    pub fn new(kind: ScenarioKind) -> Self {
        ScenarioSpec {
            kind,
            n: 1000,
            m: 1000,
            d: 64,
            mu: if matches!(kind, ScenarioKind::ScatterNoise | ScenarioKind::SwapNoise) {
                1.0
            } else {
                0.0
            },
            outlier_coord: (kind == ScenarioKind::Shift).then_some(DEFAULT_OUTLIER_COORD),
            num_modes: DEFAULT_NUM_MODES,
            mode_spacing: DEFAULT_MODE_SPACING,
            progress: 0.0,
            rho: 0.0,
            long_tail: LongTailSpec::default(),
            seed: 0,
        }
    }

    pub fn sizes(mut self, n: usize, m: usize) -> Self {
        self.n = n;
        self.m = m;
        self
    }

    pub fn dim(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn outlier(mut self, coord: Option<f64>) -> Self {
        self.outlier_coord = coord;
        self
    }

    pub fn progress(mut self, t: f64) -> Self {
        self.progress = t;
        self
    }

    pub fn rho(mut self, rho: f64) -> Self {
        self.rho = rho;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadSpec(msg));
        if self.n == 0 || self.m == 0 || self.d == 0 {
            return bad(format!("n, m and d must be positive (n={}, m={}, d={})", self.n, self.m, self.d));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return bad(format!("rho = {} outside [0, 1]", self.rho));
        }
        if !(0.0..=1.0).contains(&self.progress) {
            return bad(format!("progress = {} outside [0, 1]", self.progress));
        }
        if !self.mu.is_finite() || self.outlier_coord.is_some_and(|c| !c.is_finite()) {
            return bad("mu and the outlier coordinate must be finite".into());
        }
        if self.num_modes == 0 || !(self.mode_spacing.is_finite() && self.mode_spacing >= 0.0) {
            return bad("need at least one mode and a finite, non-negative spacing".into());
        }
        Ok(())
    }

    fn expect(&self, kinds: &[ScenarioKind]) -> Result<()> {
        if kinds.contains(&self.kind) {
            self.validate()
        } else {
            Err(Error::BadSpec(format!("{} scenario passed to a {} generator", self.kind, kinds[0])))
        }
    }
}

/// Number of rows touched by noise at fraction `rho`: `floor(rho * rows)`.
pub fn noise_count(rho: f64, rows: usize) -> usize {
    // the epsilon absorbs representation error, e.g. 0.15 * 1000 = 149.999...
    ((rho * rows as f64) + 1e-9).floor() as usize
}

fn gaussian_rows(rng: &mut StreamRng, rows: usize, center: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(rows * center.len());
    for _ in 0..rows {
        for &c in center {
            let z: f64 = StandardNormal.sample(rng);
            out.push(c + z);
        }
    }
    out
}

/// Real `N(0, I)` and generated `N(mu 1, I)`, each with the optional outlier row appended.
pub fn gen_shift_pair(spec: &ScenarioSpec) -> Result<(FeatureMatrix, FeatureMatrix)> {
    spec.expect(&[ScenarioKind::Shift, ScenarioKind::ScatterNoise, ScenarioKind::SwapNoise])?;
    if spec.kind == ScenarioKind::Shift && !(-1.0..=1.0).contains(&spec.mu) {
        return Err(Error::BadSpec(format!("mu = {} outside [-1, 1]", spec.mu)));
    }
    let d = spec.d;
    let mut real = gaussian_rows(&mut rng::stream(spec.seed, REAL_STREAM), spec.n, &vec![0.0; d]);
    let mut fake = gaussian_rows(&mut rng::stream(spec.seed, FAKE_STREAM), spec.m, &vec![spec.mu; d]);
    let (mut n, mut m) = (spec.n, spec.m);
    if let Some(c) = spec.outlier_coord {
        real.extend(std::iter::repeat_n(c, d));
        fake.extend(std::iter::repeat_n(c, d));
        n += 1;
        m += 1;
    }
    Ok((FeatureMatrix::new(n, d, real)?, FeatureMatrix::new(m, d, fake)?))
}

/// Centre of mixture mode `j`: offsets 0, +1, -1, +2, -2, ... times the
/// spacing, along the unit all-ones direction.
pub fn mode_center(j: usize, spacing: f64, d: usize) -> Vec<f64> {
    let step = j.div_ceil(2) as f64;
    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
    let offset = if j == 0 { 0.0 } else { sign * step * spacing };
    vec![offset / (d as f64).sqrt(); d]
}

/// Mixture weights of the generated set at `progress` in a mode-drop sweep.
///
/// Sequential drop drains modes 1, 2, ... one after another; simultaneous
/// drop thins all of them at once. Removed mass moves to mode 0.
pub fn mode_drop_weights(kind: ScenarioKind, progress: f64, num_modes: usize) -> Vec<f64> {
    let base = 1.0 / num_modes as f64;
    let mut w = vec![base; num_modes];
    let dropped = progress * (num_modes - 1) as f64;
    for (j, wj) in w.iter_mut().enumerate().skip(1) {
        let removed = match kind {
            ScenarioKind::SequentialDrop => (dropped - (j - 1) as f64).clamp(0.0, 1.0),
            _ => progress,
        };
        *wj = base * (1.0 - removed);
    }
    w[0] = 1.0 - w[1..].iter().sum::<f64>();
    w
}

/// Overlap mass `sum_j min(real_j, fake_j)` of the balanced real mixture and
/// the generated one: the share of real modes still represented.
pub fn ground_truth_diversity(kind: ScenarioKind, progress: f64, num_modes: usize) -> f64 {
    let base = 1.0 / num_modes as f64;
    mode_drop_weights(kind, progress, num_modes)
        .iter()
        .map(|w| w.min(base))
        .sum()
}

/// Splits `total` samples over `weights`: rounded counts for modes 1.., the rest to mode 0.
fn counts_for(weights: &[f64], total: usize) -> Vec<usize> {
    let mut counts: Vec<usize> = weights.iter().map(|w| (w * total as f64).round() as usize).collect();
    let rest: usize = counts[1..].iter().sum();
    counts[0] = total.saturating_sub(rest);
    counts
}

fn mixture(seed: u64, stream_base: u64, counts: &[usize], spacing: f64, d: usize) -> Result<(FeatureMatrix, Vec<usize>)> {
    let mut data = Vec::with_capacity(counts.iter().sum::<usize>() * d);
    let mut labels = Vec::new();
    for (j, &count) in counts.iter().enumerate() {
        let center = mode_center(j, spacing, d);
        let mut rng = rng::stream(seed, stream_base + j as u64);
        data.extend(gaussian_rows(&mut rng, count, &center));
        labels.extend(std::iter::repeat_n(j, count));
    }
    let rows = labels.len();
    if rows == 0 {
        return Err(Error::BadSpec("mixture has no samples".into()));
    }
    Ok((FeatureMatrix::new(rows, d, data)?, labels))
}

/// Balanced real mixture and a generated mixture with modes dropped.
///
/// Both sets keep their total sample counts; mass removed from modes 1.. is
/// supplemented to mode 0.
pub fn gen_mode_drop_pair(spec: &ScenarioSpec) -> Result<(FeatureMatrix, FeatureMatrix)> {
    spec.expect(&[ScenarioKind::SequentialDrop, ScenarioKind::SimultaneousDrop])?;
    let balanced = vec![1.0 / spec.num_modes as f64; spec.num_modes];
    let real_counts = counts_for(&balanced, spec.n);
    let fake_counts = counts_for(&mode_drop_weights(spec.kind, spec.progress, spec.num_modes), spec.m);
    let (real, _) = mixture(spec.seed, REAL_MODE_STREAM, &real_counts, spec.mode_spacing, spec.d)?;
    let (fake, _) = mixture(spec.seed, FAKE_MODE_STREAM, &fake_counts, spec.mode_spacing, spec.d)?;
    Ok((real, fake))
}

/// Long-tailed mixture: `majors` classes of `major_count` samples followed by
/// `minors` classes of `minor_count`. Returns the rows and their class labels.
pub fn gen_long_tail(spec: &ScenarioSpec) -> Result<(FeatureMatrix, Vec<usize>)> {
    spec.expect(&[ScenarioKind::LongTail])?;
    mixture(spec.seed, REAL_MODE_STREAM, &spec.long_tail.counts(), spec.mode_spacing, spec.d)
}

/// A second draw from the same long-tailed mixture with each minority class
/// cut to `minor_kept` samples.
pub fn gen_long_tail_decayed(spec: &ScenarioSpec, minor_kept: usize) -> Result<(FeatureMatrix, Vec<usize>)> {
    spec.expect(&[ScenarioKind::LongTail])?;
    let layout = LongTailSpec {
        minor_count: minor_kept,
        ..spec.long_tail.clone()
    };
    mixture(spec.seed, FAKE_MODE_STREAM, &layout.counts(), spec.mode_spacing, spec.d)
}

/// Share of the real samples whose class is still matched by the decayed set:
/// `sum_j min(real_j, kept_j) / sum_j real_j`.
pub fn long_tail_diversity(layout: &LongTailSpec, minor_kept: usize) -> f64 {
    let kept = LongTailSpec {
        minor_count: minor_kept,
        ..layout.clone()
    };
    let overlap: usize = layout
        .counts()
        .iter()
        .zip(kept.counts())
        .map(|(&a, b)| a.min(b))
        .sum();
    overlap as f64 / layout.total() as f64
}

/// Axis-aligned box that scatter noise is drawn from.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl NoiseBox {
    /// `[min - sd, max + sd]` per coordinate, from the clean data.
    pub fn around(x: &FeatureMatrix) -> Self {
        let (rows, cols) = (x.rows(), x.cols());
        let mut lo = vec![f64::INFINITY; cols];
        let mut hi = vec![f64::NEG_INFINITY; cols];
        let mut mean = vec![0.0; cols];
        for row in x.row_iter() {
            for (j, &v) in row.iter().enumerate() {
                lo[j] = lo[j].min(v);
                hi[j] = hi[j].max(v);
                mean[j] += v / rows as f64;
            }
        }
        let mut var = vec![0.0; cols];
        for row in x.row_iter() {
            for (j, &v) in row.iter().enumerate() {
                var[j] += (v - mean[j]).powi(2) / rows as f64;
            }
        }
        for j in 0..cols {
            let sd = var[j].sqrt();
            lo[j] -= sd;
            hi[j] += sd;
        }
        NoiseBox { lo, hi }
    }
}

/// Replaces `floor(rho * rows)` randomly chosen rows with uniform draws from `bounds`.
pub fn apply_scatter_noise(x: &FeatureMatrix, rho: f64, bounds: &NoiseBox, seed: u64) -> Result<FeatureMatrix> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::BadSpec(format!("rho = {rho} outside [0, 1]")));
    }
    if bounds.lo.len() != x.cols() || bounds.hi.len() != x.cols() {
        return Err(Error::DimMismatch {
            left: x.cols(),
            right: bounds.lo.len(),
        });
    }
    let count = noise_count(rho, x.rows());
    let mut rng = rng::stream(seed, SCATTER_STREAM);
    let rows = index::sample(&mut rng, x.rows(), count);
    let mut data = x.as_slice().to_vec();
    let cols = x.cols();
    for i in rows.iter() {
        for j in 0..cols {
            let (lo, hi) = (bounds.lo[j], bounds.hi[j]);
            data[i * cols + j] = if hi > lo { rng.random_range(lo..hi) } else { lo };
        }
    }
    FeatureMatrix::new(x.rows(), cols, data)
}

/// Exchanges `floor(rho * rows)` randomly chosen rows of `x` with as many of `y`.
pub fn apply_swap_noise(
    x: &FeatureMatrix,
    y: &FeatureMatrix,
    rho: f64,
    seed: u64,
) -> Result<(FeatureMatrix, FeatureMatrix)> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::BadSpec(format!("rho = {rho} outside [0, 1]")));
    }
    x.ensure_same_cols(y)?;
    if x.rows() != y.rows() {
        return Err(Error::RowCountMismatch {
            left: x.rows(),
            right: y.rows(),
        });
    }
    let count = noise_count(rho, x.rows());
    let mut rng = rng::stream(seed, SWAP_STREAM);
    let from_x = index::sample(&mut rng, x.rows(), count);
    let from_y = index::sample(&mut rng, y.rows(), count);
    let cols = x.cols();
    let mut xs = x.as_slice().to_vec();
    let mut ys = y.as_slice().to_vec();
    for (i, j) in from_x.iter().zip(from_y.iter()) {
        xs[i * cols..(i + 1) * cols].swap_with_slice(&mut ys[j * cols..(j + 1) * cols]);
    }
    Ok((FeatureMatrix::new(x.rows(), cols, xs)?, FeatureMatrix::new(y.rows(), cols, ys)?))
}

/// Builds the real/generated pair for any scenario kind.
///
/// Scatter and swap noise are applied at `spec.rho` to the shifted pair
/// (with `spec.mu`, no outliers). Long-tail pairs the full mixture with a
/// decayed draw whose minority classes shrink linearly with `progress`
/// down to a fifth of their size.
pub fn gen_pair(spec: &ScenarioSpec) -> Result<(FeatureMatrix, FeatureMatrix)> {
    match spec.kind {
        ScenarioKind::Shift => gen_shift_pair(spec),
        ScenarioKind::SequentialDrop | ScenarioKind::SimultaneousDrop => gen_mode_drop_pair(spec),
        ScenarioKind::ScatterNoise => {
            let (real, fake) = gen_shift_pair(&spec.clone().outlier(None))?;
            let real_box = NoiseBox::around(&real);
            let fake_box = NoiseBox::around(&fake);
            Ok((
                apply_scatter_noise(&real, spec.rho, &real_box, spec.seed)?,
                apply_scatter_noise(&fake, spec.rho, &fake_box, spec.seed ^ 0x5eed)?,
            ))
        }
        ScenarioKind::SwapNoise => {
            let (real, fake) = gen_shift_pair(&spec.clone().outlier(None))?;
            apply_swap_noise(&real, &fake, spec.rho, spec.seed)
        }
        ScenarioKind::LongTail => {
            let (real, _) = gen_long_tail(spec)?;
            let (fake, _) = gen_long_tail_decayed(spec, long_tail_kept(spec))?;
            Ok((real, fake))
        }
    }
}

/// Minority class size of the decayed long-tail set at `spec.progress`.
pub fn long_tail_kept(spec: &ScenarioSpec) -> usize {
    let full = spec.long_tail.minor_count as f64;
    (full * (1.0 - 0.8 * spec.progress)).round() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn col_means(m: &FeatureMatrix) -> Vec<f64> {
        let mut means = vec![0.0; m.cols()];
        for row in m.row_iter() {
            for (a, v) in means.iter_mut().zip(row) {
                *a += v / m.rows() as f64;
            }
        }
        means
    }

    fn row_multiset(ms: &[&FeatureMatrix]) -> HashMap<Vec<u64>, usize> {
        let mut out = HashMap::new();
        for m in ms {
            for row in m.row_iter() {
                *out.entry(row.iter().map(|v| v.to_bits()).collect()).or_insert(0) += 1;
            }
        }
        out
    }

    #[test]
    fn shift_without_outliers_matches_in_distribution() {
        let spec = ScenarioSpec::new(ScenarioKind::Shift).sizes(2000, 2000).dim(8).outlier(None).seed(3);
        let (real, fake) = gen_shift_pair(&spec).unwrap();
        assert_eq!((real.rows(), fake.rows()), (2000, 2000));
        let bound = 5.0 * (2.0 / 2000f64).sqrt();
        for (a, b) in col_means(&real).iter().zip(col_means(&fake)) {
            assert!((a - b).abs() < bound, "{a} vs {b}");
        }
    }

    #[test]
    fn shift_by_one() {
        let n = 1000;
        let spec = ScenarioSpec::new(ScenarioKind::Shift).sizes(n, n).mu(1.0).outlier(None).seed(4);
        let (real, fake) = gen_shift_pair(&spec).unwrap();
        // five standard errors of a difference of two means
        let bound = 5.0 * (2.0 / n as f64).sqrt();
        for (a, b) in col_means(&real).iter().zip(col_means(&fake)) {
            assert!((b - a - 1.0).abs() < bound);
        }
    }

    #[test]
    fn outlier_rows_are_exact() {
        let spec = ScenarioSpec::new(ScenarioKind::Shift).sizes(50, 40).dim(5).mu(0.5);
        let (real, fake) = gen_shift_pair(&spec).unwrap();
        assert_eq!(real.rows(), 51);
        assert_eq!(fake.rows(), 41);
        assert_eq!(real.row(50), &[3.0; 5]);
        assert_eq!(fake.row(40), &[3.0; 5]);
    }

    #[test]
    fn shift_reuses_samples_across_mu() {
        let base = ScenarioSpec::new(ScenarioKind::Shift).sizes(10, 10).dim(3).outlier(None).seed(1);
        let (_, a) = gen_shift_pair(&base.clone().mu(0.0)).unwrap();
        let (_, b) = gen_shift_pair(&base.mu(0.5)).unwrap();
        for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
            assert!((y - x - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_specs() {
        let shift = ScenarioSpec::new(ScenarioKind::Shift);
        assert!(matches!(gen_shift_pair(&shift.clone().mu(1.5)), Err(Error::BadSpec(_))));
        assert!(matches!(gen_mode_drop_pair(&shift), Err(Error::BadSpec(_))));
        assert!(matches!(gen_long_tail(&shift), Err(Error::BadSpec(_))));
        let drop = ScenarioSpec::new(ScenarioKind::SimultaneousDrop);
        assert!(gen_mode_drop_pair(&drop.clone().progress(1.2)).is_err());
        assert!(gen_mode_drop_pair(&drop.sizes(0, 10)).is_err());
    }

    #[test]
    fn drop_weights() {
        for kind in [ScenarioKind::SequentialDrop, ScenarioKind::SimultaneousDrop] {
            let w = mode_drop_weights(kind, 0.0, 7);
            assert!(w.iter().all(|&x| (x - 1.0 / 7.0).abs() < 1e-15));
            let w = mode_drop_weights(kind, 1.0, 7);
            assert!((w[0] - 1.0).abs() < 1e-15 && w[1..].iter().all(|&x| x == 0.0));
        }
        // sequential at 0.5 with 5 modes: modes 1 and 2 gone, 3 and 4 intact
        let w = mode_drop_weights(ScenarioKind::SequentialDrop, 0.5, 5);
        assert_eq!(&w[1..], &[0.0, 0.0, 0.2, 0.2]);
    }

    #[test]
    fn diversity_reference_line() {
        for step in 0..=10 {
            let t = step as f64 / 10.0;
            let expect = 1.0 - t * 6.0 / 7.0;
            for kind in [ScenarioKind::SequentialDrop, ScenarioKind::SimultaneousDrop] {
                assert!((ground_truth_diversity(kind, t, 7) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mode_drop_counts() {
        let spec = ScenarioSpec::new(ScenarioKind::SequentialDrop).sizes(700, 700).dim(4);
        let (real, fake) = gen_mode_drop_pair(&spec.clone().progress(0.0)).unwrap();
        assert_eq!((real.rows(), fake.rows()), (700, 700));
        let (_, fake) = gen_mode_drop_pair(&spec.clone().progress(1.0)).unwrap();
        assert_eq!(fake.rows(), 700);
        // everything sits on mode 0, far from the other centres
        let c1 = mode_center(1, spec.mode_spacing, 4);
        assert!(fake.row_iter().all(|r| crate::matrix::sq_dist(r, &[0.0; 4]) < crate::matrix::sq_dist(r, &c1)));

        let counts = counts_for(&mode_drop_weights(ScenarioKind::SimultaneousDrop, 0.3, 7), 700);
        assert_eq!(counts.iter().sum::<usize>(), 700);
        assert_eq!(&counts[1..], &[70; 6]);
        assert_eq!(counts[0], 280);
    }

    #[test]
    fn mode_centers() {
        assert_eq!(mode_center(0, 30.0, 4), vec![0.0; 4]);
        assert_eq!(mode_center(1, 30.0, 4), vec![15.0; 4]);
        assert_eq!(mode_center(2, 30.0, 4), vec![-15.0; 4]);
        assert_eq!(mode_center(4, 30.0, 4), vec![-30.0; 4]);
    }

    #[test]
    fn scatter_counts() {
        let spec = ScenarioSpec::new(ScenarioKind::Shift).sizes(1000, 10).dim(3).outlier(None);
        let (x, _) = gen_shift_pair(&spec).unwrap();
        let bounds = NoiseBox::around(&x);
        assert_eq!(apply_scatter_noise(&x, 0.0, &bounds, 1).unwrap(), x);

        let noisy = apply_scatter_noise(&x, 0.15, &bounds, 1).unwrap();
        let changed = (0..1000).filter(|&i| noisy.row(i) != x.row(i)).count();
        assert_eq!(changed, 150);
        for row in noisy.row_iter() {
            for (j, v) in row.iter().enumerate() {
                assert!(*v >= bounds.lo[j] && *v <= bounds.hi[j]);
            }
        }

        let all = apply_scatter_noise(&x, 1.0, &bounds, 2).unwrap();
        let originals = row_multiset(&[&x]);
        assert!(all.row_iter().all(|r| !originals.contains_key(&r.iter().map(|v| v.to_bits()).collect::<Vec<_>>())));
        assert!(apply_scatter_noise(&x, 1.1, &bounds, 2).is_err());
    }

    #[test]
    fn swap_conserves_rows() {
        let spec = ScenarioSpec::new(ScenarioKind::Shift).sizes(1000, 1000).dim(2).mu(1.0).outlier(None);
        let (x, y) = gen_shift_pair(&spec).unwrap();
        let (sx, sy) = apply_swap_noise(&x, &y, 0.0, 5).unwrap();
        assert_eq!((&sx, &sy), (&x, &y));

        let (sx, sy) = apply_swap_noise(&x, &y, 0.1, 5).unwrap();
        assert_eq!(row_multiset(&[&x, &y]), row_multiset(&[&sx, &sy]));
        let from_y = row_multiset(&[&y]);
        let moved = sx
            .row_iter()
            .filter(|r| from_y.contains_key(&r.iter().map(|v| v.to_bits()).collect::<Vec<_>>()))
            .count();
        assert_eq!(moved, 100);

        let short = FeatureMatrix::new(3, 2, vec![0.0; 6]).unwrap();
        assert!(matches!(apply_swap_noise(&x, &short, 0.1, 0), Err(Error::RowCountMismatch { .. })));
    }

    #[test]
    fn long_tail_layout() {
        let spec = ScenarioSpec::new(ScenarioKind::LongTail).dim(4);
        let (x, labels) = gen_long_tail(&spec).unwrap();
        assert_eq!(x.rows(), 14_000);
        let mut hist = vec![0; 10];
        for l in labels {
            hist[l] += 1;
        }
        assert_eq!(hist, vec![2000, 2000, 2000, 2000, 2000, 2000, 500, 500, 500, 500]);

        let drop = 1.0 - long_tail_diversity(&spec.long_tail, 100);
        assert!((drop - 0.8 / 7.0).abs() < 1e-12);
        assert!((drop - 0.113).abs() < 0.0015);
    }

    #[test]
    fn long_tail_without_minorities_is_balanced() {
        let mut spec = ScenarioSpec::new(ScenarioKind::LongTail).dim(2);
        spec.long_tail = LongTailSpec {
            majors: 3,
            major_count: 10,
            minors: 0,
            minor_count: 500,
        };
        let (x, labels) = gen_long_tail(&spec).unwrap();
        assert_eq!(x.rows(), 30);
        assert_eq!(labels.iter().filter(|&&l| l == 2).count(), 10);
        assert_eq!(long_tail_diversity(&spec.long_tail, 0), 1.0);
    }

    #[test]
    fn generators_are_deterministic() {
        for kind in [
            ScenarioKind::Shift,
            ScenarioKind::SequentialDrop,
            ScenarioKind::SimultaneousDrop,
            ScenarioKind::ScatterNoise,
            ScenarioKind::SwapNoise,
        ] {
            let spec = ScenarioSpec::new(kind).sizes(60, 60).dim(3).progress(0.4).rho(0.2).seed(9);
            assert_eq!(gen_pair(&spec).unwrap(), gen_pair(&spec).unwrap(), "{kind}");
        }
    }

    #[test]
    fn kind_names() {
        for name in ["shift", "seq-drop", "sim-drop", "scatter", "swap", "long-tail"] {
            assert_eq!(name.parse::<ScenarioKind>().unwrap().name(), name);
        }
        assert!("bogus".parse::<ScenarioKind>().is_err());
    }
}
