//! Pairwise Euclidean distances and k-th nearest-neighbor radii.
//!
//! Distances are accumulated directly as `sum (a_k - b_k)^2` rather than via
//! the `|a|^2 + |b|^2 - 2 a.b` expansion; the blocked, parallel code then
//! agrees bit-for-bit with a naive triple loop and never goes negative.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{sq_dist, FeatureMatrix};

const ROW_BLOCK: usize = 32;
const COL_BLOCK: usize = 256;

/// Dense `rows x cols` table of squared distances.
#[derive(Clone, Debug, PartialEq)]
pub struct SqDistMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl SqDistMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> SqDistMatrix {
        let mut data = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                data[j * self.rows + i] = self.get(i, j);
            }
        }
        SqDistMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }
}

/// Entry `(i, j)` is `||a_i - b_j||^2`.
pub fn pairwise_sq_dists(a: &FeatureMatrix, b: &FeatureMatrix) -> Result<SqDistMatrix> {
    a.ensure_same_cols(b)?;
    let n = b.rows();
    let mut data = vec![0.0; a.rows() * n];
    data.par_chunks_mut(ROW_BLOCK * n)
        .enumerate()
        .for_each(|(block, out)| {
            let first = block * ROW_BLOCK;
            let rows_here = out.len() / n;
            for col_start in (0..n).step_by(COL_BLOCK) {
                let col_end = (col_start + COL_BLOCK).min(n);
                for r in 0..rows_here {
                    let ai = a.row(first + r);
                    let dst = &mut out[r * n..(r + 1) * n];
                    for j in col_start..col_end {
                        dst[j] = sq_dist(ai, b.row(j));
                    }
                }
            }
        });
    Ok(SqDistMatrix {
        rows: a.rows(),
        cols: n,
        data,
    })
}

/// Per-query distance to the k-th nearest reference row.
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborTable {
    pub k: usize,
    pub dists: Vec<f64>,
}

/// Distance from every query row to its `k`-th nearest reference row.
///
/// Ties count with multiplicity: two reference rows at the same distance
/// occupy two ranks. With `exclude_self`, query `i` skips reference row `i`
/// (by position, so duplicates of a point still count as neighbors).
pub fn knn_dist(
    reference: &FeatureMatrix,
    queries: &FeatureMatrix,
    k: usize,
    exclude_self: bool,
) -> Result<NeighborTable> {
    let sq = kth_sq_dists(reference, queries, k, exclude_self)?;
    Ok(NeighborTable {
        k,
        dists: sq.into_iter().map(f64::sqrt).collect(),
    })
}

/// Same as [`knn_dist`] but returns squared distances.
pub(crate) fn kth_sq_dists(
    reference: &FeatureMatrix,
    queries: &FeatureMatrix,
    k: usize,
    exclude_self: bool,
) -> Result<Vec<f64>> {
    reference.ensure_same_cols(queries)?;
    let available = reference.rows() - usize::from(exclude_self);
    if k == 0 || k > available {
        return Err(Error::KTooLarge {
            k,
            rows: reference.rows(),
        });
    }
    let out = (0..queries.rows())
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(reference.rows()),
            |buf: &mut Vec<f64>, i| {
                let q = queries.row(i);
                buf.clear();
                buf.extend(
                    reference
                        .row_iter()
                        .enumerate()
                        .filter(|&(j, _)| !(exclude_self && j == i))
                        .map(|(_, r)| sq_dist(q, r)),
                );
                let (_, kth, _) = buf.select_nth_unstable_by(k - 1, f64::total_cmp);
                *kth
            },
        )
        .collect();
    Ok(out)
}
