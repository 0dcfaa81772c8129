//! Generalized GHZ states, concurrency checks and exact measurement statistics.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{apply_local, StateVector};
use crate::observables::{
    check_dim, check_parties, composite_dim, eigenbasis, ObservableSet, Setting,
};

/// Pairwise commutator norms above this count as "incompatible".
pub const INCOMPATIBILITY_FLOOR: f64 = 1e-6;
/// Probabilities down to this much below zero are rounding noise.
pub const NEGATIVE_CLAMP: f64 = 1e-14;
/// Allowed deviation of total probability mass from one.
pub const NORMALIZATION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GhzSpec {
    d: usize,
    n_parties: usize,
}

impl GhzSpec {
    pub fn new(d: usize, n_parties: usize) -> Result<Self> {
        check_dim(d)?;
        check_parties(n_parties)?;
        composite_dim(d, n_parties)?;
        Ok(GhzSpec { d, n_parties })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn parties(&self) -> usize {
        self.n_parties
    }

    /// `d^N`.
    pub fn dim(&self) -> usize {
        self.d.pow(self.n_parties as u32)
    }

    /// Splits a flat index into per-party digits, party 1 first.
    pub fn decode(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.n_parties];
        for slot in digits.iter_mut().rev() {
            *slot = index % self.d;
            index /= self.d;
        }
        digits
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &x| acc * self.d + x)
    }
}

/// `(1/√d) Σ_n |n, n, …, n⟩`.
pub fn build_ghz(spec: &GhzSpec) -> StateVector {
    let dim = spec.dim();
    let d = spec.d;
    // index of |n,…,n⟩ is n·(d^N − 1)/(d − 1)
    let stride = (dim - 1) / (d - 1);
    let amp = Complex64::new(1.0 / libm::sqrt(d as f64), 0.0);
    let mut s = StateVector::zeros(dim);
    for n in 0..d {
        s.amplitudes_mut()[n * stride] = amp;
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairNorm {
    pub i: usize,
    pub j: usize,
    pub norm: f64,
}

/// Outcome of checking that a state is a common eigenstate of a set of
/// mutually non-commuting observables.
#[derive(Clone, Debug, PartialEq)]
pub struct ConcurrencyCheck {
    pub eigen_residuals: Vec<f64>,
    pub commutator_norms: Vec<PairNorm>,
    pub passed: bool,
}

impl ConcurrencyCheck {
    pub fn max_residual(&self) -> f64 {
        self.eigen_residuals.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_commutator_norm(&self) -> f64 {
        self.commutator_norms
            .iter()
            .map(|p| p.norm)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Passes iff every residual is below `tol` and every pair of distinct
/// observables has commutator norm above [`INCOMPATIBILITY_FLOOR`].
pub fn verify_concurrency(
    set: &ObservableSet,
    state: &StateVector,
    tol: f64,
) -> Result<ConcurrencyCheck> {
    let eigen_residuals = set
        .observables()
        .iter()
        .zip(set.expected_eigenvalues())
        .map(|(v, lambda)| v.eigen_residual(state, lambda.eval()))
        .collect::<Result<Vec<_>>>()?;
    let obs = set.observables();
    let mut commutator_norms = Vec::new();
    for i in 0..obs.len() {
        for j in (i + 1)..obs.len() {
            commutator_norms.push(PairNorm {
                i,
                j,
                norm: obs[i].commutator_norm(&obs[j])?,
            });
        }
    }
    let passed = eigen_residuals.iter().all(|&r| r < tol)
        && commutator_norms
            .iter()
            .all(|p| p.norm > INCOMPATIBILITY_FLOOR);
    Ok(ConcurrencyCheck {
        eigen_residuals,
        commutator_norms,
        passed,
    })
}

/// Exact joint outcome statistics for one choice of local settings.
///
/// Outcomes are exponent tuples `(n_1, …, n_N)`, meaning party `α` saw the
/// eigenvalue `ω^{n_α}`; probabilities are stored densely by flat index.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    spec: GhzSpec,
    settings: Vec<Setting>,
    probabilities: Vec<f64>,
}

impl JointDistribution {
    /// Clamps rounding negatives and renormalizes; larger defects are errors.
    pub fn from_raw(
        spec: GhzSpec,
        settings: Vec<Setting>,
        mut probabilities: Vec<f64>,
    ) -> Result<Self> {
        if settings.len() != spec.parties() {
            return Err(Error::LengthMismatch {
                expected: spec.parties(),
                got: settings.len(),
            });
        }
        if probabilities.len() != spec.dim() {
            return Err(Error::LengthMismatch {
                expected: spec.dim(),
                got: probabilities.len(),
            });
        }
        for p in probabilities.iter_mut() {
            if *p < -NEGATIVE_CLAMP || p.is_nan() {
                return Err(Error::NegativeProbability(*p));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized(total));
        }
        for p in probabilities.iter_mut() {
            *p /= total;
        }
        Ok(JointDistribution {
            spec,
            settings,
            probabilities,
        })
    }

    pub fn spec(&self) -> &GhzSpec {
        &self.spec
    }

    pub fn settings(&self) -> &[Setting] {
        &self.settings
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn probability(&self, outcome: &[usize]) -> f64 {
        self.probabilities[self.spec.encode(outcome)]
    }

    /// `(outcome, probability)` for every tuple, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(k, &p)| (self.spec.decode(k), p))
    }

    /// Total probability of outcomes whose exponent sum is `residue` mod d.
    pub fn mass_with_sum(&self, residue: usize) -> f64 {
        let d = self.spec.d;
        self.iter()
            .filter(|(t, _)| t.iter().sum::<usize>() % d == residue % d)
            .map(|(_, p)| p)
            .sum()
    }
}

/// Outcome-sum residue that every outcome of `settings` must satisfy on the
/// GHZ state: `0` for all-X, `d − 1` (i.e. `−1`) when exactly one party
/// measures X. Other patterns carry no such certainty.
pub fn expected_sum_residue(settings: &[Setting], d: usize) -> Option<usize> {
    let xs = settings.iter().filter(|&&s| s == Setting::X).count();
    if xs == settings.len() {
        Some(0)
    } else if xs == 1 {
        Some(d - 1)
    } else {
        None
    }
}

/// Born-rule probabilities `|(⟨n_1|_{s_1} ⊗ … ⊗ ⟨n_N|_{s_N}) |ψ⟩|²`.
pub fn joint_distribution(spec: &GhzSpec, settings: &[Setting]) -> Result<JointDistribution> {
    if settings.len() != spec.parties() {
        return Err(Error::LengthMismatch {
            expected: spec.parties(),
            got: settings.len(),
        });
    }
    let mut amps = build_ghz(spec);
    for (party, &s) in settings.iter().enumerate() {
        let basis_dagger = eigenbasis(s, spec.d, spec.n_parties)?.adjoint();
        amps = apply_local(&basis_dagger, party, spec.n_parties, &amps)?;
    }
    let probabilities = amps.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    JointDistribution::from_raw(*spec, settings.to_vec(), probabilities)
}

/// Seeded multinomial draw of `shots` outcomes; only outcomes that occurred
/// appear in the result.
pub fn sample_outcomes(
    dist: &JointDistribution,
    shots: u64,
    seed: u64,
) -> BTreeMap<Vec<usize>, u64> {
    let mut counts = BTreeMap::new();
    if shots == 0 {
        return counts;
    }
    let mut cumulative = Vec::with_capacity(dist.probabilities.len());
    let mut acc = 0.0;
    for &p in &dist.probabilities {
        acc += p;
        cumulative.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = vec![0u64; cumulative.len()];
    for _ in 0..shots {
        let u = rng.gen::<f64>() * total;
        let k = cumulative.partition_point(|&c| c <= u);
        tally[k.min(cumulative.len() - 1)] += 1;
    }
    for (k, &n) in tally.iter().enumerate() {
        if n > 0 {
            counts.insert(dist.spec.decode(k), n);
        }
    }
    counts
}
