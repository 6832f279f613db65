//! Seeded Gaussian random projection.
//!
//! Entries are IID `N(0, 1/r)` for a target dimension `r`, which makes
//! squared distances unbiased: `E ||f(x) - f(y)||^2 = ||x - y||^2`. One map
//! is shared by the real and the generated set so that cross-set geometry is
//! preserved jointly.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::FeatureMatrix;
use crate::rng::{self, PROJECTION_STREAM};

/// Default target dimension.
pub const DEFAULT_PROJ_DIM: usize = 32;

#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionMap {
    source_dim: usize,
    target_dim: usize,
    seed: u64,
    /// `source_dim x target_dim`, row-major.
    matrix: Vec<f64>,
}

impl ProjectionMap {
    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn entries(&self) -> &[f64] {
        &self.matrix
    }
}

/// Draws the `source_dim x target_dim` map for `seed`, filling the matrix row by row.
pub fn make_projection(source_dim: usize, target_dim: usize, seed: u64) -> Result<ProjectionMap> {
    if target_dim == 0 || target_dim > source_dim {
        return Err(Error::BadDims {
            source_dim,
            target_dim,
        });
    }
    let scale = (target_dim as f64).sqrt();
    let mut rng = rng::stream(seed, PROJECTION_STREAM);
    let matrix = (0..source_dim * target_dim)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            z / scale
        })
        .collect();
    Ok(ProjectionMap {
        source_dim,
        target_dim,
        seed,
        matrix,
    })
}

/// Computes `x * map`, one output row per input row.
pub fn project(map: &ProjectionMap, x: &FeatureMatrix) -> Result<FeatureMatrix> {
    if x.cols() != map.source_dim {
        return Err(Error::DimMismatch {
            left: x.cols(),
            right: map.source_dim,
        });
    }
    let r = map.target_dim;
    let mut out = vec![0.0; x.rows() * r];
    out.par_chunks_mut(r).enumerate().for_each(|(i, dst)| {
        for (k, &xk) in x.row(i).iter().enumerate() {
            let m_row = &map.matrix[k * r..(k + 1) * r];
            for (o, &m) in dst.iter_mut().zip(m_row) {
                *o += xk * m;
            }
        }
    });
    // finite inputs times finite entries stay finite short of overflow
    FeatureMatrix::new(x.rows(), r, out)
}
