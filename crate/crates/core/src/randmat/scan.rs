use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::ncpoly::{Letter, NcMatrix, NcPoly, Word};
use crate::scalar::ExactScalar;

use super::{empirical_rank, MatrixModel, ModelKind, TolPolicy};

/// Largest accepted distance between `rank/d` and the nearest integer.
pub const INTEGRALITY_TOLERANCE: f64 = 0.02;

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ConvergenceRow {
    pub d: usize,
    pub rank: usize,
    pub rank_over_d: f64,
    pub gap_ok: bool,
}

/// `rank(P(X))/d` for each dimension, with `X` drawn from `kind` and seed
/// `seed + index`.
pub fn rank_convergence(
    p: &NcMatrix,
    dims: &[usize],
    seed: u64,
    kind: ModelKind,
) -> Result<Vec<ConvergenceRow>> {
    let n_vars = p.n_vars();
    rank_convergence_with(p, dims, seed, |d, s| MatrixModel::sample(kind, d, n_vars, s))
}

/// Like [`rank_convergence`] with a caller-supplied model builder.
pub fn rank_convergence_with<F>(
    p: &NcMatrix,
    dims: &[usize],
    seed: u64,
    build: F,
) -> Result<Vec<ConvergenceRow>>
where
    F: Fn(usize, u64) -> Result<MatrixModel> + Sync,
{
    dims.par_iter()
        .enumerate()
        .map(|(k, &d)| {
            let model = build(d, seed.wrapping_add(k as u64))?;
            let rep = empirical_rank(&p.evaluate(&model)?, TolPolicy::default())?;
            Ok(ConvergenceRow {
                d,
                rank: rep.rank,
                rank_over_d: rep.rank as f64 / d as f64,
                gap_ok: rep.gap_ok,
            })
        })
        .collect()
}

/// `[[x1, x2], [x2, x3]]` in three variables.
pub fn dykema_pascoe_matrix() -> NcMatrix {
    let x = |i| NcPoly::var(3, i).expect("index in range");
    NcMatrix::from_rows(vec![vec![x(1), x(2)], vec![x(2), x(3)]]).expect("2x2")
}

/// The substitution `(Y², YXY, YX²Y)` with `X`, `Y` independent GUE.
pub fn dykema_pascoe_model(d: usize, seed: u64) -> Result<MatrixModel> {
    let base = MatrixModel::sample(ModelKind::Gue, d, 2, seed)?;
    let (x, y) = (&base.matrices()[0], &base.matrices()[1]);
    let yx = y * x;
    let a = y * y;
    let b = &yx * y;
    let c = &yx * &(x * y);
    MatrixModel::custom(vec![a, b, c], d)
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct IntegralityEntry {
    pub index: usize,
    pub size: usize,
    pub rank: usize,
    pub rank_over_d: f64,
    pub nearest: usize,
    pub distance: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct IntegralityReport {
    pub d: usize,
    pub kind: ModelKind,
    pub seed: u64,
    pub tolerance: f64,
    pub entries: Vec<IntegralityEntry>,
    pub flagged: usize,
}

/// Distance of `rank(P(X))/d` to the nearest integer for each matrix, with
/// matrix `i` evaluated at a model seeded `seed + i`.
pub fn atiyah_integrality_scan(
    ps: &[NcMatrix],
    d: usize,
    seed: u64,
    kind: ModelKind,
) -> Result<IntegralityReport> {
    let entries = ps
        .par_iter()
        .enumerate()
        .map(|(index, p)| {
            let model = MatrixModel::sample(kind, d, p.n_vars(), seed.wrapping_add(index as u64))?;
            let rank = empirical_rank(&p.evaluate(&model)?, TolPolicy::default())?.rank;
            let rank_over_d = rank as f64 / d as f64;
            let nearest = rank_over_d.round() as usize;
            let distance = (rank_over_d - nearest as f64).abs();
            Ok(IntegralityEntry {
                index,
                size: p.nrows(),
                rank,
                rank_over_d,
                nearest,
                distance,
                flagged: distance > INTEGRALITY_TOLERANCE,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntegralityReport {
        d,
        kind,
        seed,
        tolerance: INTEGRALITY_TOLERANCE,
        flagged: entries.iter().filter(|e| e.flagged).count(),
        entries,
    })
}

/// Deterministic corpus of square polynomial matrices of size 2 or 3 and
/// degree at most 2 in `n_vars` variables. Every third matrix is a sum of
/// fewer outer products than its size, so the corpus mixes full and
/// rank-deficient cases.
pub fn integrality_corpus(count: usize, n_vars: usize, seed: u64) -> Vec<NcMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let n = 2 + k % 2;
            if k % 3 == 2 {
                low_rank(&mut rng, n, n_vars)
            } else {
                NcMatrix::from_fn(n, n, n_vars, |_, _| {
                    if rng.random_bool(0.3) {
                        NcPoly::zero(n_vars)
                    } else {
                        random_poly(&mut rng, n_vars, 2)
                    }
                })
                .expect("shared n_vars")
            }
        })
        .collect()
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> ExactScalar {
    let c = rng.random_range(1..=3) * if rng.random_bool(0.5) { 1 } else { -1 };
    ExactScalar::from_int(c)
}

fn random_poly(rng: &mut ChaCha8Rng, n_vars: usize, max_degree: usize) -> NcPoly {
    let terms = rng.random_range(1..=3);
    let words: Vec<(Word, ExactScalar)> = (0..terms)
        .map(|_| {
            let len = rng.random_range(0..=max_degree);
            let w = Word((0..len).map(|_| Letter::new(rng.random_range(1..=n_vars))).collect());
            (w, random_coefficient(rng))
        })
        .collect();
    NcPoly::from_terms(n_vars, words).expect("letters in range")
}

fn low_rank(rng: &mut ChaCha8Rng, n: usize, n_vars: usize) -> NcMatrix {
    let k = rng.random_range(1..n);
    let mut acc = NcMatrix::zeros(n, n, n_vars);
    for _ in 0..k {
        let col = NcMatrix::from_fn(n, 1, n_vars, |_, _| random_poly(rng, n_vars, 1))
            .expect("shared n_vars");
        let row = NcMatrix::from_fn(1, n, n_vars, |_, _| random_poly(rng, n_vars, 1))
            .expect("shared n_vars");
        acc = acc
            .checked_add(&col.checked_mul(&row).expect("n x 1 times 1 x n"))
            .expect("same shape");
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_matrix_converges_to_zero() {
        let p = NcMatrix::zeros(2, 2, 1);
        let rows = rank_convergence(&p, &[4, 8], 1, ModelKind::Gue).unwrap();
        assert!(rows.iter().all(|r| r.rank == 0));
    }

    #[test]
    fn constant_invertible_is_exactly_integral() {
        let p = NcMatrix::identity(2, 2);
        let rep = atiyah_integrality_scan(&[p], 50, 0, ModelKind::Gue).unwrap();
        assert_eq!(rep.entries[0].distance, 0.0);
        assert_eq!(rep.entries[0].nearest, 2);
    }

    #[test]
    fn corpus_is_deterministic_and_bounded() {
        let a = integrality_corpus(9, 2, 5);
        assert_eq!(a, integrality_corpus(9, 2, 5));
        assert!(a.iter().all(|p| p.degree() <= 2 && (2..=3).contains(&p.nrows())));
    }

    #[test]
    fn empty_corpus_gives_empty_report() {
        let rep = atiyah_integrality_scan(&[], 10, 0, ModelKind::Gue).unwrap();
        assert!(rep.entries.is_empty());
        assert_eq!(rep.flagged, 0);
    }
}
