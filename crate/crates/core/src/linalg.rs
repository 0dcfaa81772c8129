//! Dense complex linear algebra over qudit product spaces.
//!
//! Composite indices are base-`d` digit strings with party 1 as the most
//! significant digit, so `tensor([A, B, C])` matches the Kronecker product
//! `A ⊗ B ⊗ C` in the usual matrix order.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Upper bound on the number of entries of any dense operator.
pub const MAX_OPERATOR_ENTRIES: u128 = 1 << 24;
/// Largest operator dimension accepted by [`commutant_dimension`].
pub const MAX_COMMUTANT_DIM: usize = 16;
/// Relative singular-value cutoff used for rank decisions.
pub const RANK_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<Complex64>) -> Self {
        StateVector { amplitudes }
    }

    pub fn zeros(dim: usize) -> Self {
        StateVector {
            amplitudes: vec![ZERO; dim],
        }
    }

    /// Computational basis ket `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        let mut s = Self::zeros(dim);
        s.amplitudes[k] = ONE;
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn scaled(&self, factor: Complex64) -> StateVector {
        StateVector {
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
        }
    }

    /// Euclidean distance `‖self − other‖₂`.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        let s: f64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok(libm::sqrt(s))
    }
}

impl Index<usize> for StateVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.amplitudes[i]
    }
}

/// Kronecker product of kets, party 1 most significant.
pub fn tensor_state(factors: &[StateVector]) -> Result<StateVector> {
    let total = factors
        .iter()
        .try_fold(1u128, |acc, f| Some(acc * f.dim() as u128))
        .unwrap_or(u128::MAX);
    if total > MAX_OPERATOR_ENTRIES {
        return Err(Error::SizeOverflow {
            requested: total,
            limit: MAX_OPERATOR_ENTRIES,
        });
    }
    let mut out = vec![ONE];
    for f in factors {
        let mut next = Vec::with_capacity(out.len() * f.dim());
        for a in &out {
            next.extend(f.amplitudes.iter().map(|b| a * b));
        }
        out = next;
    }
    Ok(StateVector::new(out))
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Operator {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Operator { dim, entries }
    }

    /// Builds from row-major entries; fails unless `entries.len()` is a square.
    pub fn from_rows(entries: Vec<Complex64>) -> Result<Self> {
        let dim = libm::sqrt(entries.len() as f64) as usize;
        let dim = (dim.saturating_sub(1)..=dim + 1)
            .find(|k| k * k == entries.len())
            .ok_or(Error::NotSquare)?;
        Ok(Operator { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Operator {
        Operator::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn scaled(&self, factor: Complex64) -> Operator {
        Operator {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, rhs: &Operator) -> Result<Operator> {
        check_dims(self.dim, rhs.dim)?;
        let n = self.dim;
        let mut out = Operator::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.entries[k * n..(k + 1) * n];
                for (o, b) in out.entries[r * n..(r + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Operator {
        let mut acc = Operator::identity(self.dim);
        for _ in 0..k {
            acc = acc.matmul(self).expect("same dimension");
        }
        acc
    }

    pub fn sub(&self, rhs: &Operator) -> Result<Operator> {
        check_dims(self.dim, rhs.dim)?;
        Ok(Operator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|e| e.norm_sqr()).sum())
    }

    /// Largest entrywise modulus of `self − rhs`.
    pub fn max_abs_diff(&self, rhs: &Operator) -> Result<f64> {
        check_dims(self.dim, rhs.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `‖U·U† − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.matmul(&self.adjoint()).expect("same dimension");
        p.max_abs_diff(&Operator::identity(self.dim))
            .expect("same dimension")
    }

    /// Column `c` as a ket.
    pub fn column(&self, c: usize) -> StateVector {
        StateVector::new((0..self.dim).map(|r| self[(r, c)]).collect())
    }

    /// Hilbert-Schmidt inner product `tr(self† · rhs)`.
    pub fn hs_inner(&self, rhs: &Operator) -> Result<Complex64> {
        check_dims(self.dim, rhs.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.entries[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[r * self.dim + c]
    }
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Kronecker product in left-to-right party order.
pub fn tensor(factors: &[Operator]) -> Result<Operator> {
    let mut dim = 1u128;
    for f in factors {
        dim = dim.saturating_mul(f.dim as u128);
    }
    let entries = dim.saturating_mul(dim);
    if entries > MAX_OPERATOR_ENTRIES {
        return Err(Error::SizeOverflow {
            requested: entries,
            limit: MAX_OPERATOR_ENTRIES,
        });
    }
    let mut acc = Operator::identity(1);
    for f in factors {
        let (n, m) = (acc.dim, f.dim);
        acc = Operator::from_fn(n * m, |r, c| {
            acc.entries[(r / m) * n + c / m] * f.entries[(r % m) * m + c % m]
        });
    }
    Ok(acc)
}

pub fn apply(op: &Operator, s: &StateVector) -> Result<StateVector> {
    check_dims(op.dim, s.dim())?;
    let n = op.dim;
    let out = (0..n)
        .map(|r| {
            op.entries[r * n..(r + 1) * n]
                .iter()
                .zip(s.amplitudes())
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect();
    Ok(StateVector::new(out))
}

/// `‖op·s − λ·s‖₂`.
pub fn eigen_residual(op: &Operator, s: &StateVector, lambda: Complex64) -> Result<f64> {
    apply(op, s)?.distance(&s.scaled(lambda))
}

/// Frobenius norm of `ab − ba`.
pub fn commutator_norm(a: &Operator, b: &Operator) -> Result<f64> {
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    Ok(ab.sub(&ba)?.frobenius_norm())
}

/// Applies a `d×d` operator to one party of an `N`-party state of local
/// dimension `d` (party indices start at 0).
pub fn apply_local(
    op: &Operator,
    party: usize,
    parties: usize,
    s: &StateVector,
) -> Result<StateVector> {
    let d = op.dim;
    if party >= parties {
        return Err(Error::IndexOutOfRange {
            index: party,
            dim: parties,
        });
    }
    let expected = (d as u128).checked_pow(parties as u32).unwrap_or(u128::MAX);
    if expected != s.dim() as u128 {
        return Err(Error::DimensionMismatch {
            left: usize::try_from(expected).unwrap_or(usize::MAX),
            right: s.dim(),
        });
    }
    let stride = d.pow((parties - party - 1) as u32);
    let block = stride * d;
    let src = s.amplitudes();
    let mut out = vec![ZERO; src.len()];
    let mut column = vec![ZERO; d];
    for base in (0..src.len()).step_by(block) {
        for offset in 0..stride {
            for (m, slot) in column.iter_mut().enumerate() {
                *slot = src[base + m * stride + offset];
            }
            for n in 0..d {
                let row = &op.entries[n * d..(n + 1) * d];
                out[base + n * stride + offset] = row.iter().zip(&column).map(|(a, b)| a * b).sum();
            }
        }
    }
    Ok(StateVector::new(out))
}

/// An operator held in factored form `c · (A_1 ⊗ … ⊗ A_N)`.
///
/// Composite observables on `d^N` dimensions are far too large to store
/// densely for `N = 5`; all checks that need them work on the factors.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductOperator {
    coefficient: Complex64,
    factors: Vec<Operator>,
}

impl ProductOperator {
    pub fn new(factors: Vec<Operator>) -> Result<Self> {
        Self::with_coefficient(ONE, factors)
    }

    pub fn with_coefficient(coefficient: Complex64, factors: Vec<Operator>) -> Result<Self> {
        if let Some(first) = factors.first() {
            for f in &factors[1..] {
                check_dims(first.dim, f.dim)?;
            }
        }
        Ok(ProductOperator {
            coefficient,
            factors,
        })
    }

    pub fn coefficient(&self) -> Complex64 {
        self.coefficient
    }

    pub fn factors(&self) -> &[Operator] {
        &self.factors
    }

    pub fn parties(&self) -> usize {
        self.factors.len()
    }

    pub fn local_dim(&self) -> usize {
        self.factors.first().map_or(1, Operator::dim)
    }

    /// Total dimension `d^N`, saturating.
    pub fn dim(&self) -> u128 {
        (self.local_dim() as u128)
            .checked_pow(self.parties() as u32)
            .unwrap_or(u128::MAX)
    }

    /// Dense form; subject to [`MAX_OPERATOR_ENTRIES`].
    pub fn to_dense(&self) -> Result<Operator> {
        Ok(tensor(&self.factors)?.scaled(self.coefficient))
    }

    pub fn adjoint(&self) -> ProductOperator {
        ProductOperator {
            coefficient: self.coefficient.conj(),
            factors: self.factors.iter().map(Operator::adjoint).collect(),
        }
    }

    /// Factorwise product `self · rhs`.
    pub fn compose(&self, rhs: &ProductOperator) -> Result<ProductOperator> {
        if self.parties() != rhs.parties() {
            return Err(Error::LengthMismatch {
                expected: self.parties(),
                got: rhs.parties(),
            });
        }
        let factors = self
            .factors
            .iter()
            .zip(&rhs.factors)
            .map(|(a, b)| a.matmul(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProductOperator {
            coefficient: self.coefficient * rhs.coefficient,
            factors,
        })
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        let n = self.parties();
        let mut out = s.clone();
        for (party, f) in self.factors.iter().enumerate() {
            out = apply_local(f, party, n, &out)?;
        }
        Ok(out.scaled(self.coefficient))
    }

    pub fn eigen_residual(&self, s: &StateVector, lambda: Complex64) -> Result<f64> {
        self.apply(s)?.distance(&s.scaled(lambda))
    }

    /// `tr(self† · rhs)`, factorised.
    pub fn hs_inner(&self, rhs: &ProductOperator) -> Result<Complex64> {
        if self.parties() != rhs.parties() {
            return Err(Error::LengthMismatch {
                expected: self.parties(),
                got: rhs.parties(),
            });
        }
        let mut acc = self.coefficient.conj() * rhs.coefficient;
        for (a, b) in self.factors.iter().zip(&rhs.factors) {
            acc *= a.hs_inner(b)?;
        }
        Ok(acc)
    }

    /// Frobenius norm of `ab − ba` without forming either product densely:
    /// `‖P − Q‖² = ‖P‖² + ‖Q‖² − 2·Re⟨P, Q⟩` with every term factorised.
    pub fn commutator_norm(&self, rhs: &ProductOperator) -> Result<f64> {
        let ab = self.compose(rhs)?;
        let ba = rhs.compose(self)?;
        let sq = ab.hs_inner(&ab)?.re + ba.hs_inner(&ba)?.re - 2.0 * ab.hs_inner(&ba)?.re;
        Ok(libm::sqrt(sq.max(0.0)))
    }
}

/// Dimension of `{M : M·op = op·M for every op}`.
///
/// Each `op` contributes the linear map `vec(M) ↦ vec(op·M − M·op)`; the maps
/// are stacked and the nullity is read off the singular values, counting
/// those below [`RANK_TOLERANCE`] times the largest as zero. When the largest
/// is itself negligible next to `max ‖op‖_F`, the latter sets the scale.
pub fn commutant_dimension(ops: &[Operator]) -> Result<usize> {
    let Some(first) = ops.first() else {
        return Err(Error::LengthMismatch {
            expected: 1,
            got: 0,
        });
    };
    let d = first.dim;
    for op in ops {
        check_dims(d, op.dim)?;
    }
    if d > MAX_COMMUTANT_DIM {
        return Err(Error::SizeOverflow {
            requested: d as u128,
            limit: MAX_COMMUTANT_DIM as u128,
        });
    }
    let n = d * d;
    let rows = ops.len() * n;
    // Column (a, b) of the stacked map is the image of the unit matrix E_ab:
    // op·E_ab − E_ab·op has column b equal to op[:, a] and row a equal to −op[b, :].
    let mut columns = vec![vec![ZERO; rows]; n];
    for a in 0..d {
        for b in 0..d {
            let col = &mut columns[a * d + b];
            for (k, op) in ops.iter().enumerate() {
                let block = &mut col[k * n..(k + 1) * n];
                for i in 0..d {
                    block[i * d + b] += op[(i, a)];
                }
                for j in 0..d {
                    block[a * d + j] -= op[(b, j)];
                }
            }
        }
    }
    let sv = singular_values(columns, rows);
    // A map that is zero up to rounding (e.g. a conjugated identity) has only
    // noise singular values; measure against the operator scale as well.
    let op_scale = ops.iter().map(Operator::frobenius_norm).fold(0.0, f64::max);
    let largest = sv.iter().copied().fold(0.0, f64::max);
    let cutoff = RANK_TOLERANCE * largest.max(op_scale);
    if cutoff == 0.0 {
        return Ok(n);
    }
    Ok(sv.iter().filter(|&&s| s < cutoff).count())
}

/// Singular values of a column-major `rows × columns.len()` complex matrix
/// with `rows >= columns.len()`, unsorted.
///
/// Householder QR reduces to a square triangle, then one-sided (Hestenes)
/// Jacobi orthogonalises its columns; the final column norms are the
/// singular values.
pub fn singular_values(mut columns: Vec<Vec<Complex64>>, rows: usize) -> Vec<f64> {
    let n = columns.len();
    assert!(rows >= n, "expected a tall matrix");
    assert!(columns.iter().all(|c| c.len() == rows));

    // Householder QR, keeping only R.
    for k in 0..n {
        let x = &columns[k][k..];
        let norm_x = libm::sqrt(x.iter().map(|z| z.norm_sqr()).sum());
        if norm_x == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            ONE
        } else {
            x[0] / x[0].norm()
        };
        let alpha = -phase * norm_x;
        let mut v: Vec<Complex64> = x.to_vec();
        v[0] -= alpha;
        let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr == 0.0 {
            continue;
        }
        for col in columns.iter_mut().skip(k) {
            let tail = &mut col[k..];
            let dot: Complex64 = v.iter().zip(tail.iter()).map(|(a, b)| a.conj() * b).sum();
            let f = dot * (2.0 / vnorm_sqr);
            for (t, vi) in tail.iter_mut().zip(&v) {
                *t -= f * vi;
            }
        }
    }
    for col in columns.iter_mut() {
        col.truncate(n);
    }

    let mut norms: Vec<f64> = columns
        .iter()
        .map(|c| c.iter().map(|z| z.norm_sqr()).sum())
        .collect();
    for _sweep in 0..80 {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let (alpha, beta) = (norms[i], norms[j]);
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma: Complex64 = columns[i]
                    .iter()
                    .zip(&columns[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let g = gamma.norm();
                if g <= 1e-15 * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                // Rotate (a_i, a_j·e^{-iφ}) as a real pair.
                let unit = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                let (left, right) = columns.split_at_mut(j);
                let (ci, cj) = (&mut left[i], &mut right[0]);
                for (ai, aj) in ci.iter_mut().zip(cj.iter_mut()) {
                    let bj = *aj * unit.conj();
                    let new_i = *ai * c - bj * s;
                    let new_j = *ai * s + bj * c;
                    *ai = new_i;
                    *aj = new_j;
                }
                norms[i] = ci.iter().map(|z| z.norm_sqr()).sum();
                norms[j] = cj.iter().map(|z| z.norm_sqr()).sum();
            }
        }
        if !rotated {
            break;
        }
    }
    norms.into_iter().map(libm::sqrt).collect()
}
