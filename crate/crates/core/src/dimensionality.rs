//! Genuine d-dimensionality of the X/Y pair.
//!
//! If `X` and `Y` could be block-diagonalized by one similarity transform,
//! some X eigenvector would be orthogonal to some Y eigenvector. The overlaps
//! `|⟨n|_x |m⟩_y|²` are computed numerically, compared with the closed form
//! `sin²(π/(N−1)) / (d² sin²(π(m − n + 1/(N−1))/d))` (for `N = 3` the
//! numerator is one), and irreducibility is confirmed by a scalar commutant.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{commutant_dimension, MAX_COMMUTANT_DIM};
use crate::observables::{
    build_x, build_y, check_dim, check_parties, eigenvector_x, eigenvector_y,
};

/// Tolerance for row sums, closed-form agreement and the 1/d comparison.
pub const OVERLAP_TOL: f64 = 1e-10;

/// `values[n][m] = |⟨n|_x |m⟩_y|²`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapMatrix {
    d: usize,
    n_parties: usize,
    values: Vec<f64>,
}

impl OverlapMatrix {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn parties(&self) -> usize {
        self.n_parties
    }

    pub fn get(&self, n: usize, m: usize) -> f64 {
        self.values[n * self.d + m]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.d)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Largest `|row sum − 1|`.
    pub fn max_row_sum_error(&self) -> f64 {
        self.rows()
            .map(|r| (r.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// True iff every entry equals `1/d` within [`OVERLAP_TOL`].
    pub fn is_complementary(&self) -> bool {
        let target = 1.0 / self.d as f64;
        self.values.iter().all(|v| (v - target).abs() < OVERLAP_TOL)
    }
}

pub fn overlap_matrix(d: usize, n_parties: usize) -> Result<OverlapMatrix> {
    check_dim(d)?;
    check_parties(n_parties)?;
    let xs = (0..d)
        .map(|n| eigenvector_x(d, n))
        .collect::<Result<Vec<_>>>()?;
    let ys = (0..d)
        .map(|m| eigenvector_y(d, m, n_parties))
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::with_capacity(d * d);
    for x in &xs {
        for y in &ys {
            values.push(x.inner(y)?.norm_sqr());
        }
    }
    Ok(OverlapMatrix {
        d,
        n_parties,
        values,
    })
}

fn check_pair(d: usize, n: usize, m: usize) -> Result<()> {
    check_dim(d)?;
    for k in [n, m] {
        if k >= d {
            return Err(Error::IndexOutOfRange { index: k, dim: d });
        }
    }
    Ok(())
}

/// `1 / (d² sin²(π(m − n + 1/2)/d))`, the three-party overlap.
pub fn closed_form_overlap(d: usize, n: usize, m: usize) -> Result<f64> {
    check_pair(d, n, m)?;
    let s = libm::sin(PI / d as f64 * (m as f64 - n as f64 + 0.5));
    Ok(1.0 / ((d * d) as f64 * s * s))
}

/// General-`N` overlap, `sin²(π/(N−1)) / (d² sin²(π(m − n + 1/(N−1))/d))`.
pub fn closed_form_overlap_general(d: usize, n: usize, m: usize, n_parties: usize) -> Result<f64> {
    check_pair(d, n, m)?;
    check_parties(n_parties)?;
    let shift = 1.0 / (n_parties - 1) as f64;
    let top = libm::sin(PI * shift);
    let s = libm::sin(PI / d as f64 * (m as f64 - n as f64 + shift));
    Ok(top * top / ((d * d) as f64 * s * s))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenuinenessReport {
    pub d: usize,
    pub n_parties: usize,
    pub min_overlap: f64,
    pub max_overlap: f64,
    /// Largest `|numeric − closed form|` over all `(n, m)`.
    pub max_closed_form_deviation: f64,
    pub max_row_sum_error: f64,
    pub commutant_dim: usize,
    pub complementary: bool,
    /// Positive overlaps, closed form and completeness within tolerance,
    /// and a one-dimensional commutant.
    pub passed: bool,
}

pub fn genuineness_report(d: usize, n_parties: usize) -> Result<GenuinenessReport> {
    if d > MAX_COMMUTANT_DIM {
        return Err(Error::SizeOverflow {
            requested: d as u128,
            limit: MAX_COMMUTANT_DIM as u128,
        });
    }
    let overlaps = overlap_matrix(d, n_parties)?;
    let mut deviation: f64 = 0.0;
    for n in 0..d {
        for m in 0..d {
            let closed = closed_form_overlap_general(d, n, m, n_parties)?;
            deviation = deviation.max((overlaps.get(n, m) - closed).abs());
        }
    }
    let commutant_dim = commutant_dimension(&[build_x(d)?, build_y(d, n_parties)?])?;
    let min_overlap = overlaps.min();
    let max_row_sum_error = overlaps.max_row_sum_error();
    let passed = min_overlap > 0.0
        && deviation < OVERLAP_TOL
        && max_row_sum_error < OVERLAP_TOL
        && commutant_dim == 1;
    Ok(GenuinenessReport {
        d,
        n_parties,
        min_overlap,
        max_overlap: overlaps.max(),
        max_closed_form_deviation: deviation,
        max_row_sum_error,
        commutant_dim,
        complementary: overlaps.is_complementary(),
        passed,
    })
}
