//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails at the end if any criterion failed.

mod common;

use std::time::{Duration, Instant};

use common::*;
use faer::c64;
use ncfield::linalg::{self, CMat};
use ncfield::ncpoly::hollow_check;
use ncfield::ncrank::{
    fullness_scaling, ncrank, rank_by_substitution, SubstitutionConfig, Witness,
};
use ncfield::randmat::{
    atiyah_integrality_scan, dykema_pascoe_matrix, dykema_pascoe_model, empirical_rank, esd,
    integrality_corpus, numeric_kernel, MatrixModel, ModelKind, TolPolicy,
};
use ncfield::ratexpr::{parse, parse_matrix};
use ncfield::realization::{eval_rep, realize};
use ncfield::spectra::{atom_masses, central_eigs_pencil, entropy_dimension};
use ncfield::{Error, ExactMatrix, ExactScalar, LinearPencil, NcMatrix};
use num_rational::Rational64;
use proptest::test_runner::{Config, TestRunner};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut out = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        if took > limit {
            out.pass = false;
            out.detail += &format!("; over time budget {limit:?}");
        }
    }
    (out, took)
}

fn dykema_pascoe_gap() -> Outcome {
    let p = dykema_pascoe_matrix();
    let formal = ncrank(&p).expect("ncrank").rho;
    let model = dykema_pascoe_model(300, 1).expect("model");
    let rep = empirical_rank(&p.evaluate(&model).expect("eval"), TolPolicy::default()).expect("rank");
    let ratio = rep.rank as f64 / 300.0;
    outcome(
        formal == 2 && (0.98..=1.02).contains(&ratio),
        format!("formal rank {formal}, rank/d = {ratio:.4} (gap ok: {})", rep.gap_ok),
    )
}

fn free_field_identity() -> Outcome {
    let e = parse("x2*inv(x1*x2)*x1", 2).unwrap();
    let rep = realize(&e, 2).unwrap();
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        let model = MatrixModel::sample(ModelKind::Ginibre, 50, 2, 100 + trial).unwrap();
        match eval_rep(&rep, &model) {
            Ok(m) => worst = worst.max(linalg::max_abs(&(m - linalg::identity(50)))),
            Err(err) => return outcome(false, format!("trial {trial}: {err}")),
        }
    }
    outcome(worst < 1e-9, format!("worst residual {worst:.2e} over 20 trials"))
}

fn atom_formula() -> Outcome {
    let p = parse_matrix("x1, 0; 0, 0", 1).unwrap();
    let mass = atom_masses(&p, &[ExactScalar::zero()]).unwrap()[0];
    let entropy = entropy_dimension(&p).unwrap();
    let model = MatrixModel::sample(ModelKind::Gue, 500, 1, 7).unwrap();
    let spectrum = esd(&p, &model, 40).unwrap();
    let size = 1000.0;
    let near = spectrum.mass_near(c64::new(0.0, 0.0), 1.0 / size);
    let wide = spectrum.mass_near(c64::new(0.0, 0.0), 2.0 / 500f64.sqrt());
    outcome(
        mass == Rational64::new(1, 2) && entropy == Rational64::new(3, 4) && (near - 0.5).abs() <= 0.02,
        format!("mass {mass}, entropy {entropy}, ESD mass {near:.4} (radius 1/D; {wide:.4} at radius 2/sqrt d)"),
    )
}

fn singular_at(a0: &ExactMatrix, lambda: &ExactScalar) -> bool {
    let n = a0.nrows();
    a0.sub(&ExactMatrix::identity(n).scale(lambda)).unwrap().rank() < n
}

fn central_eigenvalue_containment() -> Outcome {
    let mut rng = rng(2024);
    let mut violations = Vec::new();
    let (mut with_atoms, mut full_parts) = (0, 0);
    for k in 0..200 {
        let pencil = random_affine_pencil(&mut rng, k);
        let n = pencil.nrows();
        let report = match central_eigs_pencil(&pencil) {
            Ok(r) => r,
            Err(err) => {
                violations.push(format!("pencil {k}: {err}"));
                continue;
            }
        };
        let homogeneous_full = ncrank(&pencil.homogeneous_part().to_matrix()).map(|r| r.is_full());
        if let Ok(true) = homogeneous_full {
            full_parts += 1;
            if !report.atoms.is_empty() || !report.uncertified.is_empty() {
                violations.push(format!("pencil {k}: full homogeneous part but nonempty spectrum"));
            }
        }
        if report.atoms.len() + report.uncertified.len() > n {
            violations.push(format!("pencil {k}: more than {n} central eigenvalues"));
        }
        let total: Rational64 = report.masses().iter().sum();
        if total > Rational64::from_integer(1) {
            violations.push(format!("pencil {k}: total mass {total}"));
        }
        for atom in report.atoms.iter().filter(|a| a.certified) {
            if !singular_at(pencil.constant(), &atom.lambda) {
                violations.push(format!("pencil {k}: {} is not an eigenvalue of A0", atom.lambda));
            }
        }
        with_atoms += usize::from(!report.atoms.is_empty());
    }
    outcome(
        violations.is_empty(),
        format!(
            "{} violations; {with_atoms} pencils with atoms, {full_parts} with full homogeneous part{}",
            violations.len(),
            violations.first().map(|v| format!("; first: {v}")).unwrap_or_default()
        ),
    )
}

fn engine_agreement() -> Outcome {
    let mut rng = rng(77);
    let (mut agree, mut inconclusive, mut nonfull) = (0, 0, 0);
    let mut problems = Vec::new();
    for k in 0..100 {
        let pencil = random_homogeneous_pencil(&mut rng, k);
        let n = pencil.nrows();
        let scaling = fullness_scaling(&pencil);
        let sub = rank_by_substitution(&pencil.to_matrix(), &SubstitutionConfig::default());
        match (scaling, sub) {
            (Ok(cert), Ok(sub)) => {
                if cert.is_full() != (sub.rho == n) {
                    problems.push(format!("pencil {k}: scaling {:?}, substitution rank {}", cert.verdict, sub.rho));
                    continue;
                }
                agree += 1;
                if !cert.is_full() {
                    nonfull += 1;
                    let verified = match &cert.witness {
                        Some(Witness::RankDecreasing { .. }) => cert.reverify(&pencil),
                        Some(Witness::Hollow(block)) => block.verify(&pencil.to_matrix()),
                        _ => false,
                    };
                    if !verified {
                        problems.push(format!("pencil {k}: witness does not re-verify"));
                    }
                }
            }
            (Err(Error::Inconclusive { .. }), _) | (_, Err(Error::NoConsensus(_))) => inconclusive += 1,
            (Err(e), _) | (_, Err(e)) => problems.push(format!("pencil {k}: {e}")),
        }
    }
    outcome(
        problems.is_empty() && inconclusive < 10,
        format!(
            "{agree} agree ({nonfull} nonfull, all witnesses checked), {inconclusive} inconclusive, {} problems{}",
            problems.len(),
            problems.first().map(|v| format!("; first: {v}")).unwrap_or_default()
        ),
    )
}

fn hollow_soundness() -> Outcome {
    let mut rng = rng(31);
    let mut failures = Vec::new();
    for k in 0..100 {
        let p: NcMatrix = hollow_matrix(&mut rng);
        let detected = hollow_check(&p).unwrap().is_some();
        match ncrank(&p) {
            Ok(r) if !r.is_full() && detected => {}
            Ok(r) => failures.push(format!("matrix {k}: rank {} detected {detected}", r.rho)),
            Err(e) => failures.push(format!("matrix {k}: {e}")),
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{} of 100 certified nonfull{}",
            100 - failures.len(),
            failures.first().map(|v| format!("; first: {v}")).unwrap_or_default()
        ),
    )
}

fn dual_system() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (n, radius) in [(2, 6), (1, 4), (3, 4)] {
        match ncfield::freegroup::dual_check(n, radius) {
            Ok(r) => {
                let exact = r.all_pass && r.pairs.iter().all(|p| p.defect == 0.0);
                pass &= exact && r.pairs.len() == n * n;
                parts.push(format!("n={n} R={radius}: {} pairs exact on {} interior vectors", r.pairs.len(), r.interior_count));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("n={n} R={radius}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn strong_atiyah() -> Outcome {
    let corpus = integrality_corpus(20, 2, 11);
    let mut parts = Vec::new();
    let mut pass = true;
    for kind in [ModelKind::Gue, ModelKind::HaarUnitary] {
        let report = atiyah_integrality_scan(&corpus, 400, 3, kind).unwrap();
        let worst = report.entries.iter().map(|e| e.distance).fold(0.0, f64::max);
        pass &= report.flagged == 0 && worst <= 0.02;
        parts.push(format!("{kind}: worst distance {worst:.4}, {} flagged", report.flagged));
    }
    outcome(pass, parts.join("; "))
}

/// `Q = U·diag(1..2)`, with condition number at most 2.
fn well_conditioned(size: usize, seed: u64) -> CMat {
    let u = MatrixModel::sample(ModelKind::HaarUnitary, size, 1, seed).unwrap().matrices()[0].clone();
    let diag = CMat::from_fn(size, size, |i, j| {
        if i == j {
            c64::new(1.0 + i as f64 / size as f64, 0.0)
        } else {
            c64::new(0.0, 0.0)
        }
    });
    u * diag
}

fn rank_invariances() -> Outcome {
    let corpus = integrality_corpus(50, 2, 19);
    let mut failures = Vec::new();
    for (k, p) in corpus.iter().enumerate() {
        let model = MatrixModel::sample(ModelKind::Gue, 30, 2, 500 + k as u64).unwrap();
        let m = p.evaluate(&model).unwrap();
        let size = m.nrows();
        let q = well_conditioned(size, 900 + k as u64);
        let policy = TolPolicy::default();
        let r = empirical_rank(&m, policy).unwrap().rank;
        let rq = empirical_rank(&(&q * &m), policy).unwrap().rank;
        let kernel = numeric_kernel(&m, policy).unwrap().ncols();
        if r != rq {
            failures.push(format!("matrix {k}: rank {r} vs {rq} after Q"));
        }
        if r + kernel != size {
            failures.push(format!("matrix {k}: rank {r} + kernel {kernel} != {size}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "50 matrices, {} failures{}",
            failures.len(),
            failures.first().map(|v| format!("; first: {v}")).unwrap_or_default()
        ),
    )
}

fn property_suites() -> Outcome {
    // A runner counts successes across runs, so each suite gets its own.
    let runner = || {
        TestRunner::new(Config {
            cases: 64,
            failure_persistence: None,
            ..Config::default()
        })
    };
    let mut failures = Vec::new();
    let mut record = |name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };
    let fail = proptest::test_runner::TestCaseError::fail;
    let r = runner().run(&(arb_poly(2), arb_poly(2), arb_poly(2)), |(p, q, r)| ring_axioms(&p, &q, &r).map_err(fail));
    record("ring axioms", r.map_err(|e| e.to_string()));
    let r = runner().run(&(arb_poly(3), arb_poly(3), arb_scalar()), |(p, q, c)| involution(&p, &q, &c).map_err(fail));
    record("involution", r.map_err(|e| e.to_string()));
    let r = runner().run(&arb_expr(3), |e| expr_round_trip(&e, 3).map_err(fail));
    record("parser round trip", r.map_err(|e| e.to_string()));
    let r = runner().run(&arb_poly(2), |p| poly_round_trip(&p).map_err(fail));
    record("polynomial round trip", r.map_err(|e| e.to_string()));
    let r = runner().run(&(arb_safe_expr(2), 0u64..1000), |(e, s)| realization_identity(&e, 2, 6, s, 1e-8).map_err(fail));
    record("realization identity", r.map_err(|e| e.to_string()));
    let r = runner().run(&(0u64..1_000_000), |s| deterministic(s).map_err(fail));
    record("determinism", r.map_err(|e| e.to_string()));
    outcome(failures.is_empty(), if failures.is_empty() { "6 suites green".to_string() } else { failures.join("; ") })
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, Option<u64>, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("Dykema-Pascoe gap", Some(60), dykema_pascoe_gap),
        ("free-field identity", Some(10), free_field_identity),
        ("atom formula", Some(30), atom_formula),
        ("central-eigenvalue containment", None, central_eigenvalue_containment),
        ("engine agreement", None, engine_agreement),
        ("hollow soundness", None, hollow_soundness),
        ("dual system", Some(30), dual_system),
        ("strong Atiyah integrality", None, strong_atiyah),
        ("rank invariances", None, rank_invariances),
        ("property suites", Some(600), property_suites),
    ];
    let mut failed = Vec::new();
    for (k, (name, limit, run)) in criteria.into_iter().enumerate() {
        let (out, took) = timed(limit.map(Duration::from_secs), run);
        println!(
            "criterion {:>2}: {} {name} [{:.2}s] {}",
            k + 1,
            if out.pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            out.detail
        );
        if !out.pass {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn pencil_spectrum_sanity() {
    let a0 = ExactMatrix::from_int_rows(&[&[1, 0], &[0, 1]]);
    let alone = LinearPencil::new(vec![a0.clone(), ExactMatrix::zeros(2, 2)]).unwrap();
    let report = central_eigs_pencil(&alone).unwrap();
    assert_eq!(report.atoms.len(), 1);
    assert_eq!(report.atoms[0].mass, Rational64::from_integer(1));
}
