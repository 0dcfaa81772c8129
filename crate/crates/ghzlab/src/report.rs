//! Machine-readable run reports.
//!
//! Reports serialize to pretty-printed JSON with a fixed field order. Every
//! real is rounded to 12 significant digits when the report is built, so a
//! report survives a serialize/parse/serialize cycle byte for byte.

use serde::{Deserialize, Serialize};

use crate::error::AppError;

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    pub d: usize,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableResidual {
    pub index: usize,
    pub settings: String,
    /// `k` with expected eigenvalue `ω^k`.
    pub eigenvalue_exponent: u64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorEntry {
    pub i: usize,
    pub j: usize,
    pub norm: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Sat,
    Unsat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentEntry {
    pub x: Vec<u64>,
    pub y: Vec<u64>,
}

/// `(N−1)·S ≡ rhs (mod d)` has no solution because `gcd ∤ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub condition: String,
    pub coefficient: u64,
    pub rhs: u64,
    pub modulus: u64,
    pub gcd: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LhvSection {
    pub verdict: Verdict,
    pub assignment: Option<AssignmentEntry>,
    pub certificate: Option<CertificateEntry>,
    pub gcd_criterion: Verdict,
    pub criterion_agrees: bool,
    pub search_points: u64,
    /// Even `d` with odd `N`: the case where no assignment may exist.
    pub contradiction_expected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapSummary {
    pub min: f64,
    pub max: f64,
    pub max_closed_form_deviation: f64,
    pub max_row_sum_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub parameters: Parameters,
    pub tolerance: f64,
    pub eigen_residuals: Vec<ObservableResidual>,
    pub commutator_norms: Vec<CommutatorEntry>,
    pub mutually_incompatible: bool,
    pub lhv_verdict: LhvSection,
    pub overlap_summary: OverlapSummary,
    /// Absent for `d > 16`.
    pub commutant_dim: Option<usize>,
    pub complementary: bool,
    pub pass: bool,
    pub tool_version: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountEntry {
    pub outcome: Vec<usize>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleReport {
    pub parameters: Parameters,
    pub settings: String,
    pub shots: u64,
    /// Residue every outcome sum must have, when the pattern fixes one.
    pub expected_sum_residue: Option<usize>,
    pub counts: Vec<CountEntry>,
    pub off_support_counts: u64,
    pub pass: bool,
    pub tool_version: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub parameters: Parameters,
    pub overlaps: Vec<Vec<f64>>,
    pub closed_form: Vec<Vec<f64>>,
    pub summary: OverlapSummary,
    pub commutant_dim: Option<usize>,
    pub complementary: bool,
    pub pass: bool,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationEntry {
    pub x_terms: Vec<usize>,
    pub y_terms: Vec<usize>,
    pub rhs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LhvReport {
    pub parameters: Parameters,
    pub realism_equations: Vec<EquationEntry>,
    pub quantum_equation: EquationEntry,
    pub result: LhvSection,
    pub pass: bool,
    pub tool_version: String,
}

pub trait Report: Serialize {
    fn pass(&self) -> bool;

    fn to_text(&self) -> Result<String, AppError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

macro_rules! impl_report {
    ($($t:ty),*) => {$(
        impl Report for $t {
            fn pass(&self) -> bool {
                self.pass
            }
        }
    )*};
}

impl_report!(VerificationReport, SampleReport, OverlapReport, LhvReport);

pub fn from_text<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, AppError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_is_idempotent_and_close() {
        let samples = [
            0.0,
            1.0,
            -1.0,
            1e-300,
            std::f64::consts::PI,
            0.1 + 0.2,
            123_456_789.123_456_79,
            -2.5e-17,
            6.02214076e23,
        ];
        for x in samples {
            let r = sig12(x);
            assert_eq!(sig12(r), r);
            assert!((r - x).abs() <= 1e-11 * x.abs());
            let text = serde_json::to_string(&r).unwrap();
            assert_eq!(serde_json::from_str::<f64>(&text).unwrap(), r);
        }
        assert_eq!(format!("{}", sig12(1.0 / 3.0)), "0.333333333333");
    }
}
