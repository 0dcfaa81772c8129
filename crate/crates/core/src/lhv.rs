//! Local-hidden-variable assignments as modular constraint systems.
//!
//! A local realistic model predetermines exponents `x_α, y_α ∈ Z_d` for the
//! values `X_α = ω^{x_α}`, `Y_α = ω^{y_α}`. The concurrent eigenrelations
//! then demand
//!
//! ```text
//! x_i + Σ_{α≠i} y_α ≡ −1  (mod d)   for i = 1..N   (realism)
//! Σ_α x_α           ≡  0  (mod d)                  (quantum)
//! ```
//!
//! Summing the realism equations gives `Σx ≡ −(N−1)·Σy − N`, so the system is
//! solvable iff `(N−1)·S ≡ −N` has a solution `S`, i.e. iff
//! `gcd(N−1, d) | N`. For even `d` and odd `N` it never is.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::phase::{gcd, mod_solve_linear, ModInt};
use crate::{MAX_DIM, MAX_PARTIES};

/// Default cap on the number of `y` vectors enumerated.
pub const MAX_SEARCH_POINTS: u128 = 100_000_000;

/// `Σ_{k} coefficient_k · var_k ≡ rhs (mod d)` with unit coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    /// Parties whose `x` appears.
    pub x_terms: Vec<usize>,
    /// Parties whose `y` appears.
    pub y_terms: Vec<usize>,
    pub rhs: ModInt,
}

impl Equation {
    pub fn holds(&self, a: &LhvAssignment) -> bool {
        let d = self.rhs.modulus();
        let zero = ModInt::new(0, d);
        let lhs = self
            .x_terms
            .iter()
            .map(|&k| a.x[k])
            .chain(self.y_terms.iter().map(|&k| a.y[k]))
            .fold(zero, |acc, v| acc + v);
        lhs == self.rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    d: u64,
    n_parties: usize,
    realism: Vec<Equation>,
    quantum: Equation,
}

impl ConstraintSystem {
    /// The system for any modulus `d ≥ 1` and `N ≥ 1` parties.
    pub fn new(d: u64, n_parties: usize) -> Self {
        assert!(d >= 1 && n_parties >= 1);
        let realism = (0..n_parties)
            .map(|i| Equation {
                x_terms: vec![i],
                y_terms: (0..n_parties).filter(|&a| a != i).collect(),
                rhs: ModInt::new(-1, d),
            })
            .collect();
        let quantum = Equation {
            x_terms: (0..n_parties).collect(),
            y_terms: Vec::new(),
            rhs: ModInt::new(0, d),
        };
        ConstraintSystem {
            d,
            n_parties,
            realism,
            quantum,
        }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn parties(&self) -> usize {
        self.n_parties
    }

    pub fn realism_equations(&self) -> &[Equation] {
        &self.realism
    }

    pub fn quantum_equation(&self) -> &Equation {
        &self.quantum
    }

    /// Number of `y` vectors, `d^N`.
    pub fn y_space(&self) -> u128 {
        (self.d as u128)
            .checked_pow(self.n_parties as u32)
            .unwrap_or(u128::MAX)
    }
}

/// Checks `2 ≤ d ≤ 64` and `3 ≤ N ≤ 63`; both parities are accepted.
pub fn build_constraints(d: usize, n_parties: usize) -> Result<ConstraintSystem> {
    if !(2..=MAX_DIM).contains(&d) {
        return Err(Error::DimensionOutOfRange(d));
    }
    if n_parties < 3 {
        return Err(Error::InvalidPartyCount(
            n_parties,
            "need at least 3 parties",
        ));
    }
    if n_parties > MAX_PARTIES {
        return Err(Error::InvalidPartyCount(n_parties, "at most 63 parties"));
    }
    Ok(ConstraintSystem::new(d as u64, n_parties))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LhvAssignment {
    pub x: Vec<ModInt>,
    pub y: Vec<ModInt>,
}

impl LhvAssignment {
    pub fn from_values(d: u64, x: &[i64], y: &[i64]) -> Self {
        LhvAssignment {
            x: x.iter().map(|&v| ModInt::new(v, d)).collect(),
            y: y.iter().map(|&v| ModInt::new(v, d)).collect(),
        }
    }
}

/// True iff every realism equation and the quantum equation hold in `Z_d`.
pub fn verify_assignment(cs: &ConstraintSystem, a: &LhvAssignment) -> Result<bool> {
    for v in [&a.x, &a.y] {
        if v.len() != cs.n_parties {
            return Err(Error::LengthMismatch {
                expected: cs.n_parties,
                got: v.len(),
            });
        }
    }
    if a.x.iter().chain(&a.y).any(|m| m.modulus() != cs.d) {
        // Re-reduce into this system's modulus.
        let conv = |v: &Vec<ModInt>| {
            v.iter()
                .map(|m| ModInt::new(m.value() as i64, cs.d))
                .collect()
        };
        let a = LhvAssignment {
            x: conv(&a.x),
            y: conv(&a.y),
        };
        return verify_assignment(cs, &a);
    }
    Ok(cs.realism.iter().all(|e| e.holds(a)) && cs.quantum.holds(a))
}

fn check_space(cs: &ConstraintSystem, limit: u128) -> Result<()> {
    let space = cs.y_space();
    if space > limit {
        return Err(Error::SizeOverflow {
            requested: space,
            limit,
        });
    }
    Ok(())
}

/// Searches the `y` vectors with flat indices in `range` (party 1 most
/// significant). For each, the realism equations force
/// `x_i = −1 − Σ_{α≠i} y_α`; the candidate is accepted iff `Σ x ≡ 0`.
pub fn search_range(cs: &ConstraintSystem, range: Range<u64>) -> Option<LhvAssignment> {
    let d = cs.d;
    let n = cs.n_parties;
    if range.start >= range.end {
        return None;
    }
    let mut y = vec![0u64; n];
    let mut rest = range.start;
    for slot in y.iter_mut().rev() {
        *slot = rest % d;
        rest /= d;
    }
    let mut y_sum: u64 = y.iter().sum::<u64>() % d;
    let mut x = vec![0u64; n];
    for _ in range {
        let mut x_sum = 0u64;
        for (xi, &yi) in x.iter_mut().zip(&y) {
            // −1 − (S − y_i) mod d
            *xi = (2 * d - 1 - y_sum + yi) % d;
            x_sum += *xi;
        }
        if x_sum.is_multiple_of(d) {
            let to_mod = |v: &[u64]| v.iter().map(|&k| ModInt::new(k as i64, d)).collect();
            return Some(LhvAssignment {
                x: to_mod(&x),
                y: to_mod(&y),
            });
        }
        // odometer increment; a wrap d−1 → 0 also shifts the sum by +1 mod d
        for slot in y.iter_mut().rev() {
            *slot += 1;
            y_sum = (y_sum + 1) % d;
            if *slot < d {
                break;
            }
            *slot = 0;
        }
    }
    None
}

/// Exhaustive search over the `y` space with the default cap.
pub fn exhaustive_search(cs: &ConstraintSystem) -> Result<Option<LhvAssignment>> {
    exhaustive_search_with_limit(cs, MAX_SEARCH_POINTS)
}

pub fn exhaustive_search_with_limit(
    cs: &ConstraintSystem,
    limit: u128,
) -> Result<Option<LhvAssignment>> {
    check_space(cs, limit)?;
    Ok(search_range(cs, 0..cs.y_space() as u64))
}

/// Brute force over all `d^{2N}` assignments; only for tiny systems.
pub fn full_enumeration(cs: &ConstraintSystem, limit: u128) -> Result<Option<LhvAssignment>> {
    let space = cs.y_space().saturating_mul(cs.y_space());
    if space > limit {
        return Err(Error::SizeOverflow {
            requested: space,
            limit,
        });
    }
    let d = cs.d;
    let n = cs.n_parties;
    for k in 0..space as u64 {
        let mut rest = k;
        let mut digits = vec![0i64; 2 * n];
        for slot in digits.iter_mut().rev() {
            *slot = (rest % d) as i64;
            rest /= d;
        }
        let a = LhvAssignment::from_values(d, &digits[..n], &digits[n..]);
        if verify_assignment(cs, &a)? {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Witness that `(N−1)·S ≡ −N (mod d)` has no solution: `gcd(N−1, d)` does
/// not divide `N mod d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnsatCertificate {
    pub d: u64,
    pub n_parties: usize,
    /// `N − 1`, the coefficient of `S = Σ y_α` in the summed condition.
    pub coefficient: u64,
    /// `−N mod d`.
    pub rhs: u64,
    pub gcd: u64,
}

impl UnsatCertificate {
    /// Returns the certificate iff the summed condition is unsolvable.
    pub fn derive(d: u64, n_parties: usize) -> Option<Self> {
        let coefficient = n_parties as u64 - 1;
        let rhs = ModInt::new(-(n_parties as i64), d).value();
        let g = gcd(coefficient as u128, d as u128) as u64;
        (!rhs.is_multiple_of(g)).then_some(UnsatCertificate {
            d,
            n_parties,
            coefficient,
            rhs,
            gcd: g,
        })
    }

    /// Re-checks the witness from scratch.
    pub fn is_valid(&self) -> bool {
        self.coefficient == self.n_parties as u64 - 1
            && self.rhs == ModInt::new(-(self.n_parties as i64), self.d).value()
            && self.gcd == gcd(self.coefficient as u128, self.d as u128) as u64
            && !self.rhs.is_multiple_of(self.gcd)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Satisfiability {
    Sat,
    Unsat,
}

/// Analytic verdict: SAT iff `(N−1)·S ≡ −N (mod d)` is solvable.
pub fn gcd_criterion(d: u64, n_parties: usize) -> Satisfiability {
    let rhs = -(n_parties as i64);
    if mod_solve_linear(n_parties as i64 - 1, rhs, d).is_empty() {
        Satisfiability::Unsat
    } else {
        Satisfiability::Sat
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LhvVerdict {
    Sat(LhvAssignment),
    Unsat(Option<UnsatCertificate>),
}

impl LhvVerdict {
    pub fn satisfiability(&self) -> Satisfiability {
        match self {
            LhvVerdict::Sat(_) => Satisfiability::Sat,
            LhvVerdict::Unsat(_) => Satisfiability::Unsat,
        }
    }
}

/// Combines a search result with its certificate. The certificate is `None`
/// only if the search and the gcd criterion disagree.
pub fn verdict_from_search(cs: &ConstraintSystem, found: Option<LhvAssignment>) -> LhvVerdict {
    match found {
        Some(a) => LhvVerdict::Sat(a),
        None => LhvVerdict::Unsat(UnsatCertificate::derive(cs.d, cs.n_parties)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_examples() {
        let cs = build_constraints(2, 3).unwrap();
        assert_eq!(cs.realism_equations().len(), 3);
        assert!(cs.realism_equations().iter().all(|e| e.rhs.value() == 1));
        assert_eq!(cs.quantum_equation().rhs.value(), 0);
        assert_eq!(cs.quantum_equation().x_terms, [0, 1, 2]);

        let cs = build_constraints(4, 3).unwrap();
        assert!(cs.realism_equations().iter().all(|e| e.rhs.value() == 3));

        let cs = build_constraints(4, 5).unwrap();
        assert_eq!(cs.realism_equations().len(), 5);
        for (i, e) in cs.realism_equations().iter().enumerate() {
            assert_eq!(e.x_terms, [i]);
            assert_eq!(e.y_terms.len(), 4);
            assert!(!e.y_terms.contains(&i));
        }
        assert!(build_constraints(1, 3).is_err());
        assert!(build_constraints(4, 2).is_err());
        assert!(build_constraints(4, 4).is_ok());
    }

    #[test]
    fn assignment_examples() {
        let cs = build_constraints(3, 3).unwrap();
        let a = LhvAssignment::from_values(3, &[0, 0, 0], &[1, 1, 1]);
        assert!(verify_assignment(&cs, &a).unwrap());
        let cs = build_constraints(2, 3).unwrap();
        let a = LhvAssignment::from_values(2, &[0, 0, 0], &[0, 0, 0]);
        assert!(!verify_assignment(&cs, &a).unwrap());
        let trivial = ConstraintSystem::new(1, 3);
        for vals in [[0, 1, 2], [5, -3, 7]] {
            let a = LhvAssignment::from_values(1, &vals, &vals);
            assert!(verify_assignment(&trivial, &a).unwrap());
        }
        let short = LhvAssignment::from_values(2, &[0, 0], &[0, 0, 0]);
        assert!(verify_assignment(&cs, &short).is_err());
    }

    #[test]
    fn search_examples() {
        assert_eq!(
            exhaustive_search(&build_constraints(2, 3).unwrap()).unwrap(),
            None
        );
        assert_eq!(
            exhaustive_search(&build_constraints(4, 3).unwrap()).unwrap(),
            None
        );
        let cs = build_constraints(3, 3).unwrap();
        let a = exhaustive_search(&cs)
            .unwrap()
            .expect("odd d is satisfiable");
        assert!(verify_assignment(&cs, &a).unwrap());
        let cs = build_constraints(64, 5).unwrap();
        assert!(matches!(
            exhaustive_search(&cs),
            Err(Error::SizeOverflow { .. })
        ));
    }

    #[test]
    fn ranges_partition_the_space() {
        let cs = build_constraints(3, 3).unwrap();
        let whole = search_range(&cs, 0..27);
        assert!(whole.is_some());
        let hits: usize = (0..27)
            .filter(|&k| search_range(&cs, k..k + 1).is_some())
            .count();
        // S = Σy must solve 2S ≡ 0 (mod 3): one residue class of 27 vectors.
        assert_eq!(hits, 9);
        assert_eq!(search_range(&cs, 5..5), None);
    }

    #[test]
    fn forced_x_reduction_agrees_with_full_enumeration() {
        for d in 1..=3u64 {
            let cs = ConstraintSystem::new(d, 3);
            let reduced = exhaustive_search(&cs).unwrap();
            let full = full_enumeration(&cs, 1_000).unwrap();
            assert_eq!(reduced.is_some(), full.is_some(), "d={d}");
        }
    }

    #[test]
    fn criterion_examples() {
        for d in [2u64, 4, 6, 8, 10, 64] {
            for n in [3, 5, 7, 9] {
                assert_eq!(gcd_criterion(d, n), Satisfiability::Unsat);
                let cert = UnsatCertificate::derive(d, n).unwrap();
                assert!(cert.is_valid());
            }
        }
        assert_eq!(gcd_criterion(3, 3), Satisfiability::Sat);
        assert_eq!(gcd_criterion(9, 7), Satisfiability::Unsat);
        assert_eq!(UnsatCertificate::derive(9, 7).unwrap().gcd, 3);
        assert_eq!(UnsatCertificate::derive(3, 3), None);
    }

    #[test]
    fn nine_seven_confirmed_by_search() {
        let cs = build_constraints(9, 7).unwrap();
        assert_eq!(exhaustive_search(&cs).unwrap(), None);
    }

    #[test]
    fn criterion_matches_search_small() {
        for d in 2..=6u64 {
            for n in [3usize, 4, 5] {
                let cs = ConstraintSystem::new(d, n);
                let found = exhaustive_search(&cs).unwrap();
                if let Some(a) = &found {
                    assert!(verify_assignment(&cs, a).unwrap());
                }
                let want = if found.is_some() {
                    Satisfiability::Sat
                } else {
                    Satisfiability::Unsat
                };
                assert_eq!(gcd_criterion(d, n), want, "d={d} N={n}");
                assert_eq!(verdict_from_search(&cs, found).satisfiability(), want);
            }
        }
    }
}
