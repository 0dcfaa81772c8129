//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ghzlab_core::dimensionality::{closed_form_overlap, overlap_matrix};
use ghzlab_core::ghz_model::{
    build_ghz, expected_sum_residue, joint_distribution, verify_concurrency, GhzSpec,
};
use ghzlab_core::lhv::{
    build_constraints, exhaustive_search, gcd_criterion, verify_assignment, Satisfiability,
};
use ghzlab_core::linalg::commutant_dimension;
use ghzlab_core::observables::{
    build_x, build_y, check_invariance_condition, concurrent_set, concurrent_settings, Setting,
    SymmetrySpec,
};
use ghzlab_core::phase::RationalPhase;
use ghzlab_core::{Complex64, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    pass: bool,
    detail: String,
}

impl Check {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Check {
            pass,
            detail: detail.into(),
        }
    }
}

/// Residuals of the concurrent set on the GHZ state, plus the minimum
/// pairwise commutator norm.
fn concurrency(d: usize, n: usize) -> Result<(Vec<f64>, f64)> {
    let set = concurrent_set(d, n)?;
    let psi = build_ghz(&GhzSpec::new(d, n)?);
    let c = verify_concurrency(&set, &psi, 1.0)?;
    Ok((c.eigen_residuals.clone(), c.min_commutator_norm()))
}

fn unsat(d: usize, n: usize) -> Result<bool> {
    Ok(exhaustive_search(&build_constraints(d, n)?)?.is_none())
}

fn qubit_reduction() -> Result<Check> {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let sx = [zero, one, one, zero];
    let sy = [zero, -i, i, zero];
    let x = build_x(2)?;
    let y = build_y(2, 3)?;
    let dev = |a: &[Complex64], b: &[Complex64]| {
        a.iter()
            .zip(b)
            .map(|(p, q)| (p - q).norm())
            .fold(0.0, f64::max)
    };
    let dx = dev(x.entries(), &sx);
    let dy = dev(y.entries(), &sy);

    let set = concurrent_set(2, 3)?;
    let eig: Vec<Complex64> = set
        .expected_eigenvalues()
        .iter()
        .map(|p| p.eval())
        .collect();
    let target = [one, -one, -one, -one];
    let eig_dev = dev(&eig, &target);
    let (res, _) = concurrency(2, 3)?;
    let max_res = res.iter().copied().fold(0.0, f64::max);
    Ok(Check::new(
        dx < 1e-14 && dy < 1e-14 && eig_dev < 1e-14 && max_res < 1e-12,
        format!("|X-sx|={dx:.1e} |Y-sy|={dy:.1e} eigenvalues (1,-1,-1,-1) dev={eig_dev:.1e} residual={max_res:.1e}"),
    ))
}

fn tripartite_even() -> Result<Check> {
    let mut pass = true;
    let mut parts = Vec::new();
    for d in [2, 4, 6, 8] {
        let (res, min_norm) = concurrency(d, 3)?;
        let max_res = res.iter().copied().fold(0.0, f64::max);
        let u = unsat(d, 3)?;
        let ok = max_res < 1e-12 && min_norm > 1e-6 && u;
        pass &= ok;
        parts.push(format!(
            "d={d}: residual={max_res:.1e} min|[vi,vj]|={min_norm:.3e} {} {}",
            if u { "UNSAT" } else { "SAT" },
            if ok { "ok" } else { "FAIL" }
        ));
    }
    Ok(Check::new(pass, parts.join("; ")))
}

fn multipartite() -> Result<Check> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, n) in [(2, 5), (4, 5), (6, 5)] {
        let (res, _) = concurrency(d, n)?;
        let max_res = res.iter().copied().fold(0.0, f64::max);
        let u = unsat(d, n)?;
        let ok = res.len() == n + 1 && max_res < 1e-11 && u;
        pass &= ok;
        parts.push(format!(
            "(d,N)=({d},{n}): {} relations residual={max_res:.1e} {}",
            res.len(),
            if u { "UNSAT" } else { "SAT" }
        ));
    }
    Ok(Check::new(pass, parts.join("; ")))
}

fn odd_control() -> Result<Check> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (d, n) in [(3, 3), (5, 3)] {
        let cs = build_constraints(d, n)?;
        match exhaustive_search(&cs)? {
            Some(a) => {
                let ok = verify_assignment(&cs, &a)?;
                pass &= ok;
                let x: Vec<u64> = a.x.iter().map(|v| v.value()).collect();
                let y: Vec<u64> = a.y.iter().map(|v| v.value()).collect();
                parts.push(format!("d={d}: SAT x={x:?} y={y:?} verified={ok}"));
            }
            None => {
                pass = false;
                parts.push(format!("d={d}: UNSAT"));
            }
        }
    }
    Ok(Check::new(pass, parts.join("; ")))
}

fn oracle_equivalence() -> Result<Check> {
    let mut cases = 0;
    let mut disagreements = Vec::new();
    for d in 2..=6usize {
        for n in 3..=6usize {
            let cs = build_constraints(d, n)?;
            let search = match exhaustive_search(&cs)? {
                Some(_) => Satisfiability::Sat,
                None => Satisfiability::Unsat,
            };
            cases += 1;
            if search != gcd_criterion(d as u64, n) {
                disagreements.push((d, n));
            }
        }
    }
    Ok(Check::new(
        cases == 20 && disagreements.is_empty(),
        format!("{cases} cases (d 2..=6, N 3..=6), disagreements {disagreements:?}"),
    ))
}

fn overlap_formula() -> Result<Check> {
    let (mut dev, mut min, mut row): (f64, f64, f64) = (0.0, f64::INFINITY, 0.0);
    for d in 2..=16 {
        let o = overlap_matrix(d, 3)?;
        for a in 0..d {
            for b in 0..d {
                dev = dev.max((o.get(a, b) - closed_form_overlap(d, a, b)?).abs());
            }
        }
        min = min.min(o.min());
        row = row.max(o.max_row_sum_error());
    }
    Ok(Check::new(
        dev < 1e-10 && min > 0.0 && row < 1e-10,
        format!(
            "N=3, d 2..=16: max deviation={dev:.1e} min overlap={min:.3e} row-sum error={row:.1e}"
        ),
    ))
}

fn genuine_dimensionality() -> Result<Check> {
    let mut bad = Vec::new();
    for n in [3, 5] {
        for d in 2..=16 {
            let c = commutant_dimension(&[build_x(d)?, build_y(d, n)?])?;
            if c != 1 {
                bad.push((d, n, c));
            }
        }
    }
    let qubit = overlap_matrix(2, 3)?.is_complementary();
    let mut complementary_above = Vec::new();
    for d in 4..=16 {
        if overlap_matrix(d, 3)?.is_complementary() {
            complementary_above.push(d);
        }
    }
    Ok(Check::new(
        bad.is_empty() && qubit && complementary_above.is_empty(),
        format!(
            "commutant != 1 at {bad:?}; complementary at (2,3)={qubit}; complementary for N=3, d 4..=16 at {complementary_above:?}"
        ),
    ))
}

fn statistics_support() -> Result<Check> {
    let mut worst: f64 = 0.0;
    let mut patterns = 0;
    for d in [2, 4] {
        for n in [3, 5] {
            let spec = GhzSpec::new(d, n)?;
            let mut settings = vec![vec![Setting::X; n]];
            settings.extend((1..=n).map(|i| concurrent_settings(n, i)));
            for s in settings {
                let r = expected_sum_residue(&s, d).expect("pattern fixes a residue");
                let dist = joint_distribution(&spec, &s)?;
                let off: f64 = dist
                    .iter()
                    .filter(|(t, _)| t.iter().sum::<usize>() % d != r)
                    .map(|(_, p)| p)
                    .sum();
                worst = worst.max(off);
                patterns += 1;
            }
        }
    }
    Ok(Check::new(
        worst < 1e-10,
        format!(
            "{patterns} patterns over d in {{2,4}}, N in {{3,5}}: max off-support mass={worst:.1e}"
        ),
    ))
}

fn random_phase(rng: &mut ChaCha8Rng) -> RationalPhase {
    let den = rng.gen_range(1..=24i64);
    RationalPhase::new(rng.gen_range(0..den), den)
}

fn symmetry_invariance() -> Result<Check> {
    let (d, n) = (4, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let psi = build_ghz(&GhzSpec::new(d, n)?);
    let mut worst: f64 = 0.0;
    let mut all_satisfy = true;
    for _ in 0..100 {
        let f1: Vec<RationalPhase> = (0..d).map(|_| random_phase(&mut rng)).collect();
        let f2: Vec<RationalPhase> = (0..d).map(|_| random_phase(&mut rng)).collect();
        let f3: Vec<RationalPhase> = f1
            .iter()
            .zip(&f2)
            .map(|(a, b)| (*a * *b).inverse())
            .collect();
        let mut g: Vec<usize> = (0..d).collect();
        g.shuffle(&mut rng);
        let spec = SymmetrySpec::new(d, g, vec![f1, f2, f3])?;
        all_satisfy &= check_invariance_condition(&spec);
        let moved = spec.tensor_unitary()?.apply(&psi)?;
        worst = worst.max(moved.distance(&psi)?);
    }
    Ok(Check::new(
        all_satisfy && worst < 1e-11,
        format!(
            "100 specs at d=4, N=3: condition holds={all_satisfy} max |V psi - psi|={worst:.1e}"
        ),
    ))
}

type Criterion = (u8, &'static str, fn() -> Result<Check>, Option<Duration>);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            1,
            "qubit reduction",
            qubit_reduction,
            Some(Duration::from_secs(1)),
        ),
        (
            2,
            "tripartite even d",
            tripartite_even,
            Some(Duration::from_secs(10)),
        ),
        (
            3,
            "multipartite extension",
            multipartite,
            Some(Duration::from_secs(120)),
        ),
        (
            4,
            "odd d negative control",
            odd_control,
            Some(Duration::from_secs(1)),
        ),
        (5, "gcd criterion vs search", oracle_equivalence, None),
        (6, "overlap closed form", overlap_formula, None),
        (7, "genuine dimensionality", genuine_dimensionality, None),
        (8, "measurement support", statistics_support, None),
        (9, "symmetry invariance", symmetry_invariance, None),
    ];
    let mut failures = 0;
    for (id, name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(c) => {
                let in_time = budget.is_none_or(|b| elapsed < b);
                let timing = if in_time { "" } else { " [over time budget]" };
                (c.pass && in_time, format!("{}{timing}", c.detail))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "{} criterion {id} ({name}) [{:.3}s]: {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failures} failed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
