//! Local observables, symmetry operators and concurrent composite sets.
//!
//! All matrices are assembled from exact [`RationalPhase`] entries. The local
//! observables are unitary with eigenvalues `1, ω, …, ω^{d−1}`:
//!
//! * `Z = Σ ω^n |n⟩⟨n|`
//! * `X = Σ |n⟩⟨n+1|` (periodic shift, `|0⟩ ↦ |d−1⟩`)
//! * `Y = ω^{−1/(N−1)} (Σ_{n<d−1} |n⟩⟨n+1| + ω^{d/(N−1)} |d−1⟩⟨0|)`
//!
//! `Y` depends on the party count; for `N = 3` the wraparound phase is `−1`
//! and `Y` is the antiperiodic shift.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Operator, ProductOperator, StateVector};
use crate::phase::RationalPhase;
use crate::{MAX_DIM, MAX_PARTIES};

/// Largest composite dimension `d^N` for states and factored observables.
pub const MAX_AMPLITUDES: u128 = 1 << 20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if !(2..=MAX_DIM).contains(&d) {
        return Err(Error::DimensionOutOfRange(d));
    }
    Ok(())
}

/// Party counts for which `Y` is defined: odd, `3 ≤ N ≤ 63`.
pub(crate) fn check_parties(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidPartyCount(n, "need at least 3 parties"));
    }
    if n.is_multiple_of(2) {
        return Err(Error::InvalidPartyCount(n, "party count must be odd"));
    }
    if n > MAX_PARTIES {
        return Err(Error::InvalidPartyCount(n, "at most 63 parties"));
    }
    Ok(())
}

pub(crate) fn composite_dim(d: usize, n: usize) -> Result<usize> {
    let total = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > MAX_AMPLITUDES {
        return Err(Error::SizeOverflow {
            requested: total,
            limit: MAX_AMPLITUDES,
        });
    }
    Ok(total as usize)
}

/// Local measurement choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Setting {
    X,
    Y,
}

impl Setting {
    pub fn as_char(self) -> char {
        match self {
            Setting::X => 'X',
            Setting::Y => 'Y',
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Parses strings such as `"XYY"` (case-insensitive).
pub fn parse_settings(s: &str) -> Result<Vec<Setting>> {
    if s.is_empty() {
        return Err(Error::MalformedSettings("empty settings string"));
    }
    s.chars()
        .map(|c| match c {
            'X' | 'x' => Ok(Setting::X),
            'Y' | 'y' => Ok(Setting::Y),
            _ => Err(Error::MalformedSettings(
                "settings may only contain X and Y",
            )),
        })
        .collect()
}

fn from_phases(d: usize, mut f: impl FnMut(usize, usize) -> Option<RationalPhase>) -> Operator {
    Operator::from_fn(d, |r, c| f(r, c).map_or(ZERO, |p| p.eval()))
}

pub fn build_z(d: usize) -> Result<Operator> {
    check_dim(d)?;
    Ok(from_phases(d, |r, c| {
        (r == c).then(|| RationalPhase::omega(d).pow(r as i64))
    }))
}

/// Quantum Fourier transform, `Q[m][n] = ω^{nm}/√d`.
pub fn build_qft(d: usize) -> Result<Operator> {
    check_dim(d)?;
    let norm = 1.0 / libm::sqrt(d as f64);
    Ok(Operator::from_fn(d, |m, n| {
        RationalPhase::omega(d).pow((n * m) as i64).eval() * norm
    }))
}

pub fn build_x(d: usize) -> Result<Operator> {
    check_dim(d)?;
    Ok(from_phases(d, |r, c| {
        (c == (r + 1) % d).then_some(RationalPhase::ZERO)
    }))
}

/// Exact phase of each nonzero entry of `Y` (row `r`, column `r+1 mod d`).
pub fn y_phase(d: usize, n_parties: usize, row: usize) -> RationalPhase {
    let k = n_parties as i64 - 1;
    if row + 1 == d {
        // ω^{−1/(N−1)} · ω^{d/(N−1)}
        RationalPhase::omega_pow(d, d as i64 - 1, k)
    } else {
        RationalPhase::omega_pow(d, -1, k)
    }
}

pub fn build_y(d: usize, n_parties: usize) -> Result<Operator> {
    check_dim(d)?;
    check_parties(n_parties)?;
    Ok(from_phases(d, |r, c| {
        (c == (r + 1) % d).then(|| y_phase(d, n_parties, r))
    }))
}

pub fn build_local(setting: Setting, d: usize, n_parties: usize) -> Result<Operator> {
    match setting {
        Setting::X => build_x(d),
        Setting::Y => build_y(d, n_parties),
    }
}

fn check_index(d: usize, n: usize) -> Result<()> {
    check_dim(d)?;
    if n >= d {
        return Err(Error::IndexOutOfRange { index: n, dim: d });
    }
    Ok(())
}

/// `|n⟩_x = Q|n⟩`, eigenvalue `ω^n` of `X`.
pub fn eigenvector_x(d: usize, n: usize) -> Result<StateVector> {
    check_index(d, n)?;
    let norm = 1.0 / libm::sqrt(d as f64);
    Ok(StateVector::new(
        (0..d)
            .map(|m| RationalPhase::omega(d).pow((n * m) as i64).eval() * norm)
            .collect(),
    ))
}

/// `|n⟩_y` with amplitudes `ω^{(n + 1/(N−1))m}/√d`, eigenvalue `ω^n` of `Y`.
pub fn eigenvector_y(d: usize, n: usize, n_parties: usize) -> Result<StateVector> {
    check_index(d, n)?;
    check_parties(n_parties)?;
    let k = n_parties as i64 - 1;
    let norm = 1.0 / libm::sqrt(d as f64);
    Ok(StateVector::new(
        (0..d)
            .map(|m| {
                let exponent = (n as i64 * k + 1) * m as i64;
                RationalPhase::omega_pow(d, exponent, k).eval() * norm
            })
            .collect(),
    ))
}

pub fn eigenvector(setting: Setting, d: usize, n: usize, n_parties: usize) -> Result<StateVector> {
    match setting {
        Setting::X => eigenvector_x(d, n),
        Setting::Y => eigenvector_y(d, n, n_parties),
    }
}

/// Matrix whose column `n` is the eigenvector of `setting` with eigenvalue `ω^n`.
pub fn eigenbasis(setting: Setting, d: usize, n_parties: usize) -> Result<Operator> {
    let cols = (0..d)
        .map(|n| eigenvector(setting, d, n, n_parties))
        .collect::<Result<Vec<_>>>()?;
    Ok(Operator::from_fn(d, |r, c| cols[c][r]))
}

fn check_permutation(d: usize, g: &[usize]) -> Result<()> {
    if g.len() != d {
        return Err(Error::LengthMismatch {
            expected: d,
            got: g.len(),
        });
    }
    let mut seen = vec![false; d];
    for &x in g {
        if x >= d || seen[x] {
            return Err(Error::NotAPermutation(d));
        }
        seen[x] = true;
    }
    Ok(())
}

/// `U = Σ_n ω^{f(n)} |n⟩⟨g(n)|`.
///
/// `phases[n]` holds the phase `ω^{f(n)}` itself, so fractional exponents
/// such as `f(n) = n/2` are written `RationalPhase::omega_pow(d, n, 2)`.
pub fn build_local_unitary(d: usize, phases: &[RationalPhase], g: &[usize]) -> Result<Operator> {
    check_dim(d)?;
    if phases.len() != d {
        return Err(Error::LengthMismatch {
            expected: d,
            got: phases.len(),
        });
    }
    check_permutation(d, g)?;
    let mut u = Operator::zeros(d);
    for n in 0..d {
        u[(n, g[n])] = phases[n].eval();
    }
    Ok(u)
}

/// Per-party phase functions sharing one permutation `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetrySpec {
    d: usize,
    permutation: Vec<usize>,
    phase_functions: Vec<Vec<RationalPhase>>,
}

impl SymmetrySpec {
    pub fn new(
        d: usize,
        permutation: Vec<usize>,
        phase_functions: Vec<Vec<RationalPhase>>,
    ) -> Result<Self> {
        check_dim(d)?;
        check_permutation(d, &permutation)?;
        if phase_functions.is_empty() {
            return Err(Error::InvalidPartyCount(0, "need at least one party"));
        }
        for f in &phase_functions {
            if f.len() != d {
                return Err(Error::LengthMismatch {
                    expected: d,
                    got: f.len(),
                });
            }
        }
        Ok(SymmetrySpec {
            d,
            permutation,
            phase_functions,
        })
    }

    /// Diagonal phase operators (`g` = identity).
    pub fn diagonal(d: usize, phase_functions: Vec<Vec<RationalPhase>>) -> Result<Self> {
        Self::new(d, (0..d).collect(), phase_functions)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn parties(&self) -> usize {
        self.phase_functions.len()
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn phase_functions(&self) -> &[Vec<RationalPhase>] {
        &self.phase_functions
    }

    pub fn local_unitaries(&self) -> Result<Vec<Operator>> {
        self.phase_functions
            .iter()
            .map(|f| build_local_unitary(self.d, f, &self.permutation))
            .collect()
    }

    /// `V = U_1 ⊗ … ⊗ U_N` in factored form.
    pub fn tensor_unitary(&self) -> Result<ProductOperator> {
        ProductOperator::new(self.local_unitaries()?)
    }
}

/// True iff `Σ_α f_α(n) ≡ 0 (mod d)` for every `n`, i.e. the phases
/// `ω^{f_α(n)}` multiply to exactly one.
pub fn check_invariance_condition(spec: &SymmetrySpec) -> bool {
    (0..spec.d).all(|n| {
        spec.phase_functions
            .iter()
            .fold(RationalPhase::ZERO, |acc, f| acc * f[n])
            .is_zero()
    })
}

/// `f_1(n) = (d−1)n`: phases `ω^{(d−1)n}`.
pub fn leading_phase_function(d: usize) -> Vec<RationalPhase> {
    (0..d)
        .map(|n| RationalPhase::omega(d).pow(((d - 1) * n) as i64))
        .collect()
}

/// `f_2(n) = n/(N−1)`: phases `ω^{n/(N−1)}`.
pub fn trailing_phase_function(d: usize, n_parties: usize) -> Vec<RationalPhase> {
    (0..d)
        .map(|n| RationalPhase::omega_pow(d, n as i64, n_parties as i64 - 1))
        .collect()
}

/// The symmetry `V_i` with `f_1` at party `i` (1-based) and `f_2` elsewhere;
/// it maps `v_0` to `ω·v_i` under conjugation.
pub fn concurrent_symmetry(d: usize, n_parties: usize, i: usize) -> Result<SymmetrySpec> {
    check_dim(d)?;
    check_parties(n_parties)?;
    if i == 0 || i > n_parties {
        return Err(Error::IndexOutOfRange {
            index: i,
            dim: n_parties + 1,
        });
    }
    let lead = leading_phase_function(d);
    let trail = trailing_phase_function(d, n_parties);
    let fs = (1..=n_parties)
        .map(|a| if a == i { lead.clone() } else { trail.clone() })
        .collect();
    SymmetrySpec::diagonal(d, fs)
}

/// `V · O · V†`.
pub fn conjugate_by_symmetry(
    observable: &ProductOperator,
    symmetry: &ProductOperator,
) -> Result<ProductOperator> {
    symmetry.compose(observable)?.compose(&symmetry.adjoint())
}

/// The `N+1` concurrent observables `v_0 = X^{⊗N}` and `v_i` with `X` at
/// party `i`, `Y` elsewhere, together with their eigenvalues on the GHZ state.
#[derive(Clone, Debug)]
pub struct ObservableSet {
    d: usize,
    n_parties: usize,
    observables: Vec<ProductOperator>,
    expected_eigenvalues: Vec<RationalPhase>,
    settings: Vec<Vec<Setting>>,
}

impl ObservableSet {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn parties(&self) -> usize {
        self.n_parties
    }

    pub fn observables(&self) -> &[ProductOperator] {
        &self.observables
    }

    /// Exact eigenvalues: `1` for `v_0`, `ω^{−1}` for the rest.
    pub fn expected_eigenvalues(&self) -> &[RationalPhase] {
        &self.expected_eigenvalues
    }

    pub fn settings(&self) -> &[Vec<Setting>] {
        &self.settings
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }
}

/// Setting pattern of `v_i`: all `X` for `i = 0`, else `X` at party `i` only.
pub fn concurrent_settings(n_parties: usize, i: usize) -> Vec<Setting> {
    (1..=n_parties)
        .map(|a| {
            if i == 0 || a == i {
                Setting::X
            } else {
                Setting::Y
            }
        })
        .collect()
}

pub fn concurrent_set(d: usize, n_parties: usize) -> Result<ObservableSet> {
    check_dim(d)?;
    check_parties(n_parties)?;
    composite_dim(d, n_parties)?;
    let x = build_x(d)?;
    let y = build_y(d, n_parties)?;
    let settings: Vec<Vec<Setting>> = (0..=n_parties)
        .map(|i| concurrent_settings(n_parties, i))
        .collect();
    let observables = settings
        .iter()
        .map(|pattern| {
            ProductOperator::new(
                pattern
                    .iter()
                    .map(|s| match s {
                        Setting::X => x.clone(),
                        Setting::Y => y.clone(),
                    })
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let inv_omega = RationalPhase::omega(d).inverse();
    let expected_eigenvalues = (0..=n_parties)
        .map(|i| {
            if i == 0 {
                RationalPhase::ZERO
            } else {
                inv_omega
            }
        })
        .collect();
    Ok(ObservableSet {
        d,
        n_parties,
        observables,
        expected_eigenvalues,
        settings,
    })
}
