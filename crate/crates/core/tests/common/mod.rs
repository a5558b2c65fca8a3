//! Generators shared by the integration tests.
#![allow(dead_code)]

use ncfield::ncpoly::{Letter, Word};
use ncfield::ratexpr::RatExpr;
use ncfield::{ExactMatrix, ExactScalar, LinearPencil, NcMatrix, NcPoly};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, range: i64) -> ExactMatrix {
    ExactMatrix::from_fn(rows, cols, |_, _| ExactScalar::from_int(rng.random_range(-range..=range)))
}

/// Unimodular integer matrix: product of a random unit lower and a random
/// unit upper triangular matrix.
pub fn unimodular(rng: &mut ChaCha8Rng, n: usize) -> ExactMatrix {
    let lower = ExactMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => ExactScalar::one(),
        std::cmp::Ordering::Greater => ExactScalar::from_int(rng.random_range(-2..=2)),
        std::cmp::Ordering::Less => ExactScalar::zero(),
    });
    let upper = ExactMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => ExactScalar::one(),
        std::cmp::Ordering::Less => ExactScalar::from_int(rng.random_range(-2..=2)),
        std::cmp::Ordering::Greater => ExactScalar::zero(),
    });
    lower.mul(&upper).unwrap()
}

/// Homogeneous pencil whose coefficients all vanish on an `r × s` block
/// with `r + s > n`, disguised by unimodular row and column mixing.
pub fn hidden_hollow_pencil(rng: &mut ChaCha8Rng, n: usize, n_vars: usize) -> LinearPencil {
    let r = rng.random_range(1..=n);
    let s = n + 1 - r;
    let coeffs: Vec<ExactMatrix> = (0..n_vars)
        .map(|_| {
            let mut a = int_matrix(rng, n, n, 2);
            for i in 0..r {
                for j in 0..s {
                    a[(i, j)] = ExactScalar::zero();
                }
            }
            a
        })
        .collect();
    let (u, v) = (unimodular(rng, n), unimodular(rng, n));
    LinearPencil::homogeneous(coeffs).unwrap().congruence(&u, &v).unwrap()
}

/// Homogeneous pencil of mixed character: plain random (usually full),
/// hidden hollow (nonfull), common rank deficiency (nonfull) or a
/// structured full example. Never the zero pencil.
pub fn random_homogeneous_pencil(rng: &mut ChaCha8Rng, index: usize) -> LinearPencil {
    loop {
        let p = homogeneous_candidate(rng, index);
        if !p.is_zero() {
            return p;
        }
    }
}

fn homogeneous_candidate(rng: &mut ChaCha8Rng, index: usize) -> LinearPencil {
    let n = rng.random_range(1..=5);
    let n_vars = rng.random_range(1..=3);
    match index % 4 {
        0 => LinearPencil::homogeneous((0..n_vars).map(|_| int_matrix(rng, n, n, 3)).collect()).unwrap(),
        1 if n >= 2 => hidden_hollow_pencil(rng, n, n_vars),
        2 if n >= 2 => {
            // A_i = B_i·C with a common right factor of rank n-1
            let c = int_matrix(rng, n - 1, n, 2);
            let coeffs = (0..n_vars)
                .map(|_| int_matrix(rng, n, n - 1, 2).mul(&c).unwrap())
                .collect();
            LinearPencil::homogeneous(coeffs).unwrap()
        }
        _ => {
            // identity plus sparse nilpotent pieces: full
            let mut coeffs = vec![ExactMatrix::identity(n)];
            for _ in 1..n_vars {
                coeffs.push(ExactMatrix::from_fn(n, n, |i, j| {
                    if j > i {
                        ExactScalar::from_int(rng.random_range(-2..=2))
                    } else {
                        ExactScalar::zero()
                    }
                }));
            }
            let (u, v) = (unimodular(rng, n), unimodular(rng, n));
            LinearPencil::homogeneous(coeffs).unwrap().congruence(&u, &v).unwrap()
        }
    }
}

/// Square hollow polynomial matrix with linear entries, rows and columns
/// shuffled.
pub fn hollow_matrix(rng: &mut ChaCha8Rng) -> NcMatrix {
    let n = rng.random_range(2..=5);
    let n_vars = rng.random_range(1..=3);
    let r = rng.random_range(1..=n);
    let s = n + 1 - r;
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    for k in (1..n).rev() {
        rows.swap(k, rng.random_range(0..=k));
        cols.swap(k, rng.random_range(0..=k));
    }
    let zero_rows = &rows[..r];
    let zero_cols = &cols[..s];
    let mut entries = Vec::new();
    for i in 0..n {
        let mut row = Vec::new();
        for j in 0..n {
            if zero_rows.contains(&i) && zero_cols.contains(&j) {
                row.push(NcPoly::zero(n_vars));
                continue;
            }
            let mut p = NcPoly::constant(n_vars, ExactScalar::from_int(rng.random_range(-2..=2)));
            for v in 1..=n_vars {
                let c = ExactScalar::from_int(rng.random_range(-2..=2));
                p = p.checked_add(&NcPoly::var(n_vars, v).unwrap().scale(&c)).unwrap();
            }
            if p.is_zero() {
                p = NcPoly::var(n_vars, 1).unwrap();
            }
            row.push(p);
        }
        entries.push(row);
    }
    NcMatrix::from_rows(entries).unwrap()
}

/// Affine pencil with rational spectrum of `A₀` (similar to a triangular
/// integer matrix) and a homogeneous part that is full or not.
pub fn random_affine_pencil(rng: &mut ChaCha8Rng, index: usize) -> LinearPencil {
    let n = rng.random_range(1..=4);
    let n_vars = rng.random_range(1..=3);
    let triangular = ExactMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => ExactScalar::from_fraction(rng.random_range(-3..=3), rng.random_range(-1..=1), 2),
        std::cmp::Ordering::Less => ExactScalar::from_int(rng.random_range(-1..=1)),
        std::cmp::Ordering::Greater => ExactScalar::zero(),
    });
    let s = unimodular(rng, n);
    let a0 = s.mul(&triangular).unwrap().mul(&s.inverse().unwrap()).unwrap();
    let linear = match index % 3 {
        0 => (0..n_vars).map(|_| int_matrix(rng, n, n, 2)).collect::<Vec<_>>(),
        1 if n >= 2 => hidden_hollow_pencil(rng, n, n_vars).linear().to_vec(),
        _ => {
            // a single nonzero row: homogeneous part of inner rank 1
            (0..n_vars)
                .map(|_| {
                    let mut a = ExactMatrix::zeros(n, n);
                    for j in 0..n {
                        a[(0, j)] = ExactScalar::from_int(rng.random_range(-2..=2));
                    }
                    a
                })
                .collect()
        }
    };
    let mut coeffs = vec![a0];
    coeffs.extend(linear);
    LinearPencil::new(coeffs).unwrap()
}

pub fn arb_scalar() -> impl Strategy<Value = ExactScalar> {
    (-4i64..=4, -2i64..=2, 1i64..=3).prop_map(|(a, b, q)| ExactScalar::from_fraction(a, b, q))
}

pub fn arb_letter(n_vars: usize) -> impl Strategy<Value = Letter> {
    (1..=n_vars, any::<bool>()).prop_map(|(var, starred)| Letter { var, starred })
}

pub fn arb_poly(n_vars: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((prop::collection::vec(arb_letter(n_vars), 0..=3), arb_scalar()), 0..=4)
        .prop_map(move |terms| NcPoly::from_terms(n_vars, terms.into_iter().map(|(w, c)| (Word(w), c))).unwrap())
}

pub fn arb_expr(n_vars: usize) -> impl Strategy<Value = RatExpr> {
    let leaf = prop_oneof![
        (1..=n_vars).prop_map(RatExpr::var),
        arb_scalar().prop_map(RatExpr::constant),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(RatExpr::adjoint_of),
            inner.clone().prop_map(RatExpr::neg),
            inner.clone().prop_map(RatExpr::inv),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RatExpr::add(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| RatExpr::mul(a, b)),
        ]
    })
}

/// Expressions whose inverses are applied only to `1 + x·x*`-shaped
/// positive definite arguments, so every random evaluation is in domain.
pub fn arb_safe_expr(n_vars: usize) -> impl Strategy<Value = RatExpr> {
    let leaf = prop_oneof![
        (1..=n_vars).prop_map(RatExpr::var),
        arb_scalar().prop_map(RatExpr::constant),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(RatExpr::adjoint_of),
            inner.clone().prop_map(RatExpr::neg),
            inner.clone().prop_map(|e| {
                let gram = RatExpr::mul(e.clone(), RatExpr::adjoint_of(e));
                RatExpr::inv(RatExpr::add(RatExpr::constant(ExactScalar::one()), gram))
            }),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| RatExpr::add(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| RatExpr::mul(a, b)),
        ]
    })
}

// Property checks shared by the proptest suites and the acceptance run.
// Each returns a description of the first failure.

pub type Check = Result<(), String>;

fn expect(ok: bool, what: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

pub fn ring_axioms(p: &NcPoly, q: &NcPoly, r: &NcPoly) -> Check {
    let n = p.n_vars();
    let add = |a: &NcPoly, b: &NcPoly| a.checked_add(b).unwrap();
    let mul = |a: &NcPoly, b: &NcPoly| a.checked_mul(b).unwrap();
    expect(add(p, q) == add(q, p), || format!("p+q != q+p for {p}, {q}"))?;
    expect(add(&add(p, q), r) == add(p, &add(q, r)), || "addition not associative".into())?;
    expect(mul(&mul(p, q), r) == mul(p, &mul(q, r)), || format!("product not associative for {p}, {q}, {r}"))?;
    expect(mul(p, &add(q, r)) == add(&mul(p, q), &mul(p, r)), || "left distributivity".into())?;
    expect(mul(&add(p, q), r) == add(&mul(p, r), &mul(q, r)), || "right distributivity".into())?;
    expect(mul(&NcPoly::one(n), p) == *p && mul(p, &NcPoly::one(n)) == *p, || "unit".into())?;
    expect(add(p, &p.neg()).is_zero(), || "additive inverse".into())?;
    if !p.is_zero() && !q.is_zero() {
        expect(mul(p, q).degree() == p.degree() + q.degree(), || "degree of product".into())?;
    }
    Ok(())
}

pub fn involution(p: &NcPoly, q: &NcPoly, c: &ExactScalar) -> Check {
    let pq = p.checked_mul(q).unwrap();
    expect(pq.adjoint() == q.adjoint().checked_mul(&p.adjoint()).unwrap(), || {
        format!("(pq)* != q*p* for {p}, {q}")
    })?;
    expect(p.adjoint().adjoint() == *p, || "p** != p".into())?;
    expect(p.scale(c).adjoint() == p.adjoint().scale(&c.conj()), || "star is not antilinear".into())?;
    expect(
        p.checked_add(q).unwrap().adjoint() == p.adjoint().checked_add(&q.adjoint()).unwrap(),
        || "star is not additive".into(),
    )
}

pub fn expr_round_trip(e: &RatExpr, n_vars: usize) -> Check {
    let text = e.to_string();
    match ncfield::ratexpr::parse(&text, n_vars) {
        Ok(back) if back == *e => Ok(()),
        Ok(back) => Err(format!("{text} reparsed as {back}")),
        Err(err) => Err(format!("{text} failed to parse: {err}")),
    }
}

pub fn poly_round_trip(p: &NcPoly) -> Check {
    let text = p.to_string();
    match ncfield::ratexpr::parse_poly(&text, p.n_vars()) {
        Ok(back) if back == *p => Ok(()),
        Ok(back) => Err(format!("{text} reparsed as {back}")),
        Err(err) => Err(format!("{text} failed to parse: {err}")),
    }
}

/// `eval_rep` against direct evaluation of the tree, relative to the size
/// of the value. Points outside the domain of either are skipped.
pub fn realization_identity(e: &RatExpr, n_vars: usize, d: usize, seed: u64, tol: f64) -> Check {
    use ncfield::randmat::{MatrixModel, ModelKind};
    use ncfield::realization::{eval_rep, realize};
    let rep = realize(e, n_vars).map_err(|err| format!("realize {e}: {err}"))?;
    let model = MatrixModel::sample(ModelKind::Gue, d, n_vars, seed).unwrap();
    let direct = match ncfield::ratexpr::eval_numeric(e, model.matrices(), d) {
        Ok(m) => m,
        Err(ncfield::Error::OutOfDomain { .. }) => return Ok(()),
        Err(err) => return Err(err.to_string()),
    };
    let via_rep = match eval_rep(&rep, &model) {
        Ok(m) => m,
        Err(ncfield::Error::OutOfDomain { .. }) => return Ok(()),
        Err(err) => return Err(err.to_string()),
    };
    let scale = ncfield::linalg::frobenius(&direct).max(1.0);
    let err = ncfield::linalg::frobenius(&(&direct - &via_rep)) / scale;
    expect(err < tol, || format!("{e}: relative error {err:e}"))
}

/// Same seed, same answer, across the randomized entry points.
pub fn deterministic(seed: u64) -> Check {
    use ncfield::randmat::{MatrixModel, ModelKind};
    for kind in [ModelKind::Gue, ModelKind::Ginibre, ModelKind::HaarUnitary] {
        let a = MatrixModel::sample(kind, 12, 2, seed).unwrap();
        let b = MatrixModel::sample(kind, 12, 2, seed).unwrap();
        expect(a == b, || format!("{kind} sample differs under seed {seed}"))?;
    }
    let p = ncfield::randmat::dykema_pascoe_matrix();
    let mut cfg = ncfield::ncrank::RankConfig::default();
    cfg.substitution.seed = seed;
    let r1 = ncfield::ncrank::ncrank_with(&p, &cfg).unwrap();
    let r2 = ncfield::ncrank::ncrank_with(&p, &cfg).unwrap();
    expect(r1 == r2, || "ncrank differs under equal seeds".into())?;
    let c1 = ncfield::randmat::integrality_corpus(4, 2, seed);
    let c2 = ncfield::randmat::integrality_corpus(4, 2, seed);
    expect(c1 == c2, || "corpus differs under equal seeds".into())
}
