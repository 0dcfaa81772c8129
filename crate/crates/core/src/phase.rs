//! Exact phases and residues.
//!
//! A [`RationalPhase`] `p/q` stands for the unit complex number
//! `exp(2πi·p/q)`, kept in canonical form `0 <= p < q`, `gcd(p, q) = 1`.
//! Powers of `ω = exp(2πi/d)` with rational exponents become plain rationals,
//! so cancellations between phase functions can be decided exactly and
//! converted to `f64` only when a matrix is assembled.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg};

use num_complex::Complex64;

pub fn gcd(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid on signed values: returns `(g, s, t)` with `a·s + b·t = g`.
fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPhase {
    num: i64,
    den: i64,
}

impl RationalPhase {
    pub const ZERO: RationalPhase = RationalPhase { num: 0, den: 1 };

    /// `exp(2πi·num/den)` in canonical form.
    ///
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "phase denominator must be nonzero");
        Self::from_wide(num as i128, den as i128)
    }

    fn from_wide(num: i128, den: i128) -> Self {
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = gcd(num as u128, den as u128) as i128;
        RationalPhase {
            num: (num / g) as i64,
            den: (den / g) as i64,
        }
    }

    /// The primitive root `ω = exp(2πi/d)`.
    pub fn omega(d: usize) -> Self {
        Self::new(1, d as i64)
    }

    /// `ω^(p/q)` with `ω = exp(2πi/d)`; fractional powers use the principal
    /// branch `exp(2πi·p/(q·d))`.
    pub fn omega_pow(d: usize, p: i64, q: i64) -> Self {
        assert!(q != 0, "exponent denominator must be nonzero");
        Self::from_wide(p as i128, q as i128 * d as i128)
    }

    pub fn numer(&self) -> i64 {
        self.num
    }

    pub fn denom(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn inverse(self) -> Self {
        Self::from_wide(-(self.num as i128), self.den as i128)
    }

    pub fn pow(self, k: i64) -> Self {
        phase_pow(self, k)
    }

    /// Complex value of the phase. Quarter turns are exact; the residual
    /// angle is always below π/2 before the trig call.
    pub fn eval(&self) -> Complex64 {
        phase_eval(*self)
    }
}

impl fmt::Debug for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Display for RationalPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(2πi·{}/{})", self.num, self.den)
    }
}

impl Mul for RationalPhase {
    type Output = RationalPhase;

    fn mul(self, rhs: RationalPhase) -> RationalPhase {
        phase_mul(self, rhs)
    }
}

/// Product of two phases: exponents add modulo one.
pub fn phase_mul(a: RationalPhase, b: RationalPhase) -> RationalPhase {
    let (an, ad) = (a.num as i128, a.den as i128);
    let (bn, bd) = (b.num as i128, b.den as i128);
    RationalPhase::from_wide(an * bd + bn * ad, ad * bd)
}

pub fn phase_pow(a: RationalPhase, k: i64) -> RationalPhase {
    RationalPhase::from_wide(a.num as i128 * k as i128, a.den as i128)
}

pub fn phase_eval(a: RationalPhase) -> Complex64 {
    if a.num == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let num = a.num as i128;
    let den = a.den as i128;
    // exp(2πi·num/den) = i^quarter · exp(iπ/2 · rem/den)
    let quarter = (4 * num) / den;
    let rem = 4 * num - quarter * den;
    let theta = core::f64::consts::FRAC_PI_2 * (rem as f64 / den as f64);
    let (s, c) = if rem == 0 {
        (0.0, 1.0)
    } else {
        (libm::sin(theta), libm::cos(theta))
    };
    match quarter {
        0 => Complex64::new(c, s),
        1 => Complex64::new(-s, c),
        2 => Complex64::new(-c, -s),
        _ => Complex64::new(s, -c),
    }
}

/// A residue modulo a positive integer, always held in `0..modulus`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModInt {
    value: u64,
    modulus: u64,
}

impl ModInt {
    /// Panics if `modulus == 0`.
    pub fn new(value: i64, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        ModInt {
            value: (value as i128).rem_euclid(modulus as i128) as u64,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The phase `ω^value` with `ω = exp(2πi/modulus)`.
    pub fn to_phase(&self) -> RationalPhase {
        RationalPhase::new(self.value as i64, self.modulus as i64)
    }

    fn check(&self, other: &ModInt) {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
    }
}

impl fmt::Debug for ModInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for ModInt {
    type Output = ModInt;

    fn add(self, rhs: ModInt) -> ModInt {
        self.check(&rhs);
        let m = self.modulus as u128;
        ModInt {
            value: ((self.value as u128 + rhs.value as u128) % m) as u64,
            modulus: self.modulus,
        }
    }
}

impl Mul for ModInt {
    type Output = ModInt;

    fn mul(self, rhs: ModInt) -> ModInt {
        self.check(&rhs);
        let m = self.modulus as u128;
        ModInt {
            value: ((self.value as u128 * rhs.value as u128) % m) as u64,
            modulus: self.modulus,
        }
    }
}

impl Neg for ModInt {
    type Output = ModInt;

    fn neg(self) -> ModInt {
        ModInt {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

/// All `s` in `Z_d` with `a·s ≡ b (mod d)`, in increasing order.
///
/// Empty iff `gcd(a, d)` does not divide `b`; otherwise exactly `gcd(a, d)`
/// solutions spaced `d / gcd(a, d)` apart.
pub fn mod_solve_linear(a: i64, b: i64, d: u64) -> Vec<ModInt> {
    assert!(d >= 1, "modulus must be positive");
    let m = d as i128;
    let a = (a as i128).rem_euclid(m);
    let b = (b as i128).rem_euclid(m);
    let g = gcd(a as u128, m as u128) as i128;
    if b % g != 0 {
        return Vec::new();
    }
    let step = m / g;
    let base = if step == 1 {
        0
    } else {
        let (_, inv, _) = extended_gcd(a / g, step);
        ((b / g) * inv).rem_euclid(step)
    };
    (0..g)
        .map(|k| ModInt::new((base + k * step) as i64, d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn mul_examples() {
        let half = RationalPhase::new(1, 2);
        let quarter = RationalPhase::new(1, 4);
        assert_eq!(half * half, RationalPhase::ZERO);
        assert_eq!(quarter * quarter, half);
        assert_eq!(RationalPhase::new(3, 4) * half, quarter);
    }

    #[test]
    fn pow_examples() {
        for d in 1..=64 {
            assert_eq!(RationalPhase::omega(d).pow(d as i64), RationalPhase::ZERO);
        }
        assert_eq!(RationalPhase::new(1, 4).pow(-1), RationalPhase::new(3, 4));
        assert_eq!(RationalPhase::new(1, 6).pow(4), RationalPhase::new(2, 3));
    }

    #[test]
    fn canonical_form() {
        let p = RationalPhase::new(-6, 8);
        assert_eq!((p.numer(), p.denom()), (1, 4));
        let p = RationalPhase::new(3, -4);
        assert_eq!((p.numer(), p.denom()), (1, 4));
        assert_eq!(RationalPhase::new(10, 5), RationalPhase::ZERO);
        assert_eq!(RationalPhase::omega_pow(4, 1, 2), RationalPhase::new(1, 8));
        assert_eq!(RationalPhase::omega_pow(4, -1, 2), RationalPhase::new(7, 8));
    }

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(RationalPhase::new(1, 4).eval(), Complex64::new(0.0, 1.0));
        assert_eq!(RationalPhase::new(1, 2).eval(), Complex64::new(-1.0, 0.0));
        assert_eq!(RationalPhase::new(3, 4).eval(), Complex64::new(0.0, -1.0));
        assert_eq!(RationalPhase::ZERO.eval(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn eval_matches_float_roots() {
        for d in 1..=64usize {
            for n in 0..d {
                let exact = RationalPhase::omega(d).pow(n as i64).eval();
                // reference angle taken in (−π, π] to keep its own rounding small
                let m = if 2 * n <= d {
                    n as f64
                } else {
                    n as f64 - d as f64
                };
                let theta = 2.0 * core::f64::consts::PI * m / d as f64;
                let float = Complex64::new(libm::cos(theta), libm::sin(theta));
                assert!(close(exact, float, 1e-15), "d={d} n={n}");
            }
        }
    }

    #[test]
    fn solve_examples() {
        assert!(mod_solve_linear(2, 1, 4).is_empty());
        assert_eq!(mod_solve_linear(2, 1, 3), [ModInt::new(2, 3)]);
        let all: Vec<u64> = mod_solve_linear(0, 0, 5)
            .iter()
            .map(|m| m.value())
            .collect();
        assert_eq!(all, [0, 1, 2, 3, 4]);
        let v: Vec<u64> = mod_solve_linear(4, 2, 6)
            .iter()
            .map(|m| m.value())
            .collect();
        assert_eq!(v, [2, 5]);
    }

    #[test]
    fn mod_int_ops() {
        let a = ModInt::new(-1, 4);
        assert_eq!(a.value(), 3);
        assert_eq!((a + a).value(), 2);
        assert_eq!((-a).value(), 1);
        assert_eq!((a * a).value(), 1);
        assert_eq!(ModInt::new(5, 1).value(), 0);
    }

    proptest! {
        #[test]
        fn inverse_is_exact_identity(num in -1000i64..1000, den in 1i64..4032) {
            let a = RationalPhase::new(num, den);
            prop_assert_eq!(phase_mul(a, a.inverse()).eval(), Complex64::new(1.0, 0.0));
        }

        #[test]
        fn eval_has_unit_modulus(num in -5000i64..5000, den in 1i64..4032) {
            let z = RationalPhase::new(num, den).eval();
            prop_assert!((z.norm() - 1.0).abs() < 1e-15);
        }

        #[test]
        fn pow_agrees_with_repeated_mul(num in 0i64..100, den in 1i64..100, k in 0i64..20) {
            let a = RationalPhase::new(num, den);
            let mut acc = RationalPhase::ZERO;
            for _ in 0..k {
                acc = acc * a;
            }
            prop_assert_eq!(a.pow(k), acc);
        }

        #[test]
        fn solve_matches_brute_force(a in -200i64..200, b in -200i64..200, d in 1u64..60) {
            let brute: Vec<u64> = (0..d)
                .filter(|&s| (a as i128 * s as i128 - b as i128).rem_euclid(d as i128) == 0)
                .collect();
            let got: Vec<u64> = mod_solve_linear(a, b, d).iter().map(|m| m.value()).collect();
            prop_assert_eq!(&got, &brute);
            let g = gcd(a.rem_euclid(d as i64) as u128, d as u128) as u64;
            prop_assert_eq!(!got.is_empty(), (b.rem_euclid(d as i64) as u64).is_multiple_of(g));
            if !got.is_empty() {
                prop_assert_eq!(got.len() as u64, g);
            }
        }
    }
}
