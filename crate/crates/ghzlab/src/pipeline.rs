//! End-to-end runs behind each CLI subcommand.

use ghzlab_core::dimensionality::{
    closed_form_overlap_general, genuineness_report, overlap_matrix, OverlapMatrix, OVERLAP_TOL,
};
use ghzlab_core::ghz_model::{
    build_ghz, expected_sum_residue, joint_distribution, sample_outcomes, verify_concurrency,
    GhzSpec, INCOMPATIBILITY_FLOOR,
};
use ghzlab_core::lhv::{
    build_constraints, gcd_criterion, verdict_from_search, verify_assignment, ConstraintSystem,
    Equation, LhvVerdict, Satisfiability,
};
use ghzlab_core::linalg::MAX_COMMUTANT_DIM;
use ghzlab_core::observables::{concurrent_set, parse_settings, Setting};

use crate::error::AppError;
use crate::limits::Limits;
use crate::report::{
    sig12, AssignmentEntry, CertificateEntry, CommutatorEntry, CountEntry, EquationEntry,
    LhvReport, LhvSection, ObservableResidual, OverlapReport, OverlapSummary, Parameters,
    SampleReport, Verdict, VerificationReport,
};
use crate::search::parallel_search;
use crate::TOOL_VERSION;

fn verdict(s: Satisfiability) -> Verdict {
    match s {
        Satisfiability::Sat => Verdict::Sat,
        Satisfiability::Unsat => Verdict::Unsat,
    }
}

fn settings_string(settings: &[Setting]) -> String {
    settings.iter().map(|s| s.as_char()).collect()
}

/// Runs the search, cross-checks it against the gcd criterion and packages
/// the verdict with its assignment or certificate.
pub fn lhv_section(cs: &ConstraintSystem, limits: &Limits) -> Result<LhvSection, AppError> {
    let found = parallel_search(cs, limits)?;
    if let Some(a) = &found {
        if !verify_assignment(cs, a)? {
            return Err(AppError::Internal(
                "search returned an assignment that violates the constraints".into(),
            ));
        }
    }
    let v = verdict_from_search(cs, found);
    let analytic = gcd_criterion(cs.d(), cs.parties());
    let (assignment, certificate) = match &v {
        LhvVerdict::Sat(a) => (
            Some(AssignmentEntry {
                x: a.x.iter().map(|m| m.value()).collect(),
                y: a.y.iter().map(|m| m.value()).collect(),
            }),
            None,
        ),
        LhvVerdict::Unsat(cert) => (
            None,
            cert.filter(|c| c.is_valid()).map(|c| CertificateEntry {
                condition: format!(
                    "{}*S + {} = 0 (mod {}) with S = sum of y",
                    c.coefficient, c.n_parties, c.d
                ),
                coefficient: c.coefficient,
                rhs: c.rhs,
                modulus: c.d,
                gcd: c.gcd,
            }),
        ),
    };
    Ok(LhvSection {
        verdict: verdict(v.satisfiability()),
        assignment,
        certificate,
        gcd_criterion: verdict(analytic),
        criterion_agrees: v.satisfiability() == analytic,
        search_points: cs.y_space() as u64,
        contradiction_expected: cs.d().is_multiple_of(2) && cs.parties() % 2 == 1,
    })
}

fn lhv_ok(section: &LhvSection) -> bool {
    let unsat_ok = section.verdict == Verdict::Sat || section.certificate.is_some();
    let theorem_ok = !section.contradiction_expected || section.verdict == Verdict::Unsat;
    section.criterion_agrees && unsat_ok && theorem_ok
}

fn overlap_summary(
    d: usize,
    n: usize,
    overlaps: &OverlapMatrix,
) -> Result<OverlapSummary, AppError> {
    let mut deviation: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            let c = closed_form_overlap_general(d, a, b, n)?;
            deviation = deviation.max((overlaps.get(a, b) - c).abs());
        }
    }
    Ok(OverlapSummary {
        min: sig12(overlaps.min()),
        max: sig12(overlaps.max()),
        max_closed_form_deviation: sig12(deviation),
        max_row_sum_error: sig12(overlaps.max_row_sum_error()),
    })
}

fn overlap_ok(s: &OverlapSummary) -> bool {
    s.min > 0.0 && s.max_closed_form_deviation < OVERLAP_TOL && s.max_row_sum_error < OVERLAP_TOL
}

fn commutant(d: usize, n: usize) -> Result<Option<usize>, AppError> {
    if d > MAX_COMMUTANT_DIM {
        return Ok(None);
    }
    Ok(Some(genuineness_report(d, n)?.commutant_dim))
}

/// Full verification of one `(d, N)` pair.
///
/// `pass` requires: every eigenrelation residual below `tol`; pairwise
/// incompatibility for `d > 2` (the qubit set commutes); an LHV verdict that
/// agrees with the gcd criterion and is UNSAT for even `d`; strictly positive
/// overlaps matching the closed form; and a scalar commutant when `d ≤ 16`.
pub fn run_verify(
    d: usize,
    n: usize,
    tol: f64,
    seed: u64,
    limits: &Limits,
) -> Result<VerificationReport, AppError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(AppError::Param(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let spec = GhzSpec::new(d, n)?;
    limits.check_amplitudes(d, n)?;
    let set = concurrent_set(d, n)?;
    let psi = build_ghz(&spec);
    let check = verify_concurrency(&set, &psi, tol)?;

    let eigen_residuals: Vec<ObservableResidual> = check
        .eigen_residuals
        .iter()
        .zip(set.expected_eigenvalues())
        .zip(set.settings())
        .enumerate()
        .map(|(index, ((&r, lambda), settings))| ObservableResidual {
            index,
            settings: settings_string(settings),
            eigenvalue_exponent: (lambda.numer() * d as i64 / lambda.denom()) as u64,
            residual: sig12(r),
        })
        .collect();
    let commutator_norms: Vec<CommutatorEntry> = check
        .commutator_norms
        .iter()
        .map(|p| CommutatorEntry {
            i: p.i,
            j: p.j,
            norm: sig12(p.norm),
        })
        .collect();
    let mutually_incompatible = check
        .commutator_norms
        .iter()
        .all(|p| p.norm > INCOMPATIBILITY_FLOOR);

    let cs = build_constraints(d, n)?;
    let lhv = lhv_section(&cs, limits)?;

    let overlaps = overlap_matrix(d, n)?;
    let overlap = overlap_summary(d, n, &overlaps)?;
    let commutant_dim = commutant(d, n)?;

    let residuals_ok = check.eigen_residuals.iter().all(|&r| r < tol);
    let pass = residuals_ok
        && (mutually_incompatible || d == 2)
        && lhv_ok(&lhv)
        && overlap_ok(&overlap)
        && commutant_dim.is_none_or(|c| c == 1);

    Ok(VerificationReport {
        parameters: Parameters { d, n },
        tolerance: sig12(tol),
        eigen_residuals,
        commutator_norms,
        mutually_incompatible,
        lhv_verdict: lhv,
        overlap_summary: overlap,
        commutant_dim,
        complementary: overlaps.is_complementary(),
        pass,
        tool_version: TOOL_VERSION.to_string(),
        seed,
    })
}

/// Samples one setting pattern and checks every outcome against the
/// eigenrelation support, when the pattern has one.
pub fn run_sample(
    d: usize,
    n: usize,
    settings: &str,
    shots: u64,
    seed: u64,
    limits: &Limits,
) -> Result<SampleReport, AppError> {
    let parsed = parse_settings(settings)?;
    if parsed.len() != n {
        return Err(AppError::Param(format!(
            "settings {settings:?} has {} entries, expected {n}",
            parsed.len()
        )));
    }
    let spec = GhzSpec::new(d, n)?;
    limits.check_amplitudes(d, n)?;
    let dist = joint_distribution(&spec, &parsed)?;
    let counts = sample_outcomes(&dist, shots, seed);
    let residue = expected_sum_residue(&parsed, d);
    let off_support_counts = match residue {
        Some(r) => counts
            .iter()
            .filter(|(t, _)| t.iter().sum::<usize>() % d != r)
            .map(|(_, &c)| c)
            .sum(),
        None => 0,
    };
    Ok(SampleReport {
        parameters: Parameters { d, n },
        settings: settings_string(&parsed),
        shots,
        expected_sum_residue: residue,
        counts: counts
            .into_iter()
            .map(|(outcome, count)| CountEntry { outcome, count })
            .collect(),
        off_support_counts,
        pass: off_support_counts == 0,
        tool_version: TOOL_VERSION.to_string(),
        seed,
    })
}

pub fn run_overlap(d: usize, n: usize) -> Result<OverlapReport, AppError> {
    let overlaps = overlap_matrix(d, n)?;
    let closed_form = (0..d)
        .map(|a| {
            (0..d)
                .map(|b| closed_form_overlap_general(d, a, b, n).map(sig12))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let summary = overlap_summary(d, n, &overlaps)?;
    let commutant_dim = commutant(d, n)?;
    let pass = overlap_ok(&summary) && commutant_dim.is_none_or(|c| c == 1);
    Ok(OverlapReport {
        parameters: Parameters { d, n },
        overlaps: overlaps
            .rows()
            .map(|r| r.iter().copied().map(sig12).collect())
            .collect(),
        closed_form,
        summary,
        commutant_dim,
        complementary: overlaps.is_complementary(),
        pass,
        tool_version: TOOL_VERSION.to_string(),
    })
}

fn equation_entry(e: &Equation) -> EquationEntry {
    EquationEntry {
        x_terms: e.x_terms.clone(),
        y_terms: e.y_terms.clone(),
        rhs: e.rhs.value(),
    }
}

pub fn run_lhv(d: usize, n: usize, limits: &Limits) -> Result<LhvReport, AppError> {
    let cs = build_constraints(d, n)?;
    let result = lhv_section(&cs, limits)?;
    Ok(LhvReport {
        parameters: Parameters { d, n },
        realism_equations: cs.realism_equations().iter().map(equation_entry).collect(),
        quantum_equation: equation_entry(cs.quantum_equation()),
        pass: lhv_ok(&result),
        result,
        tool_version: TOOL_VERSION.to_string(),
    })
}
