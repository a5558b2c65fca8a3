//! Exact shrunk-subspace witnesses for nonfull homogeneous pencils.
//!
//! A subspace `U` with `dim Σᵢ AᵢU < dim U` certifies nonfullness; the
//! projector `B = VV*` onto it satisfies `rank L(B) < rank B` for the
//! quantum operator `L(B) = Σ AᵢBAᵢ*`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::ExactMatrix;
use crate::ncpoly::LinearPencil;
use crate::scalar::ExactScalar;

/// Largest blow-up size `N·d` attempted by the exact search.
pub const MAX_BLOWUP: usize = 64;

/// `[A₁V, …, AₙV]`, whose column space is `Σ AᵢU`.
fn image_of(pencil: &LinearPencil, basis: &ExactMatrix) -> ExactMatrix {
    let blocks: Vec<ExactMatrix> = pencil
        .linear()
        .iter()
        .map(|a| a.mul(basis).expect("shapes agree"))
        .collect();
    let refs: Vec<&ExactMatrix> = blocks.iter().collect();
    ExactMatrix::hcat(&refs).expect("same row count")
}

/// `Σ AᵢBAᵢ*` in exact arithmetic.
pub fn quantum_op_exact(pencil: &LinearPencil, b: &ExactMatrix) -> ExactMatrix {
    let n = pencil.nrows();
    pencil.linear().iter().fold(ExactMatrix::zeros(n, n), |acc, a| {
        let term = a.mul(b).and_then(|ab| ab.mul(&a.adjoint())).expect("square");
        acc.add(&term).expect("square")
    })
}

/// Re-checks `rank L(B) < rank B` from scratch.
pub fn verify_witness(pencil: &LinearPencil, b: &ExactMatrix) -> bool {
    b.shape() == (pencil.nrows(), pencil.nrows()) && quantum_op_exact(pencil, b).rank() < b.rank()
}

/// `VV*` for a basis `V` given as columns.
pub fn projector_form(basis: &ExactMatrix) -> ExactMatrix {
    basis.mul(&basis.adjoint()).expect("conformable")
}

/// A nonzero vector in the common kernel of all coefficients.
pub fn common_kernel(pencil: &LinearPencil) -> Option<ExactMatrix> {
    let n = pencil.ncols();
    let stacked: Vec<ExactMatrix> = pencil.linear().iter().map(ExactMatrix::transpose).collect();
    let refs: Vec<&ExactMatrix> = stacked.iter().collect();
    let vertical = ExactMatrix::hcat(&refs).ok()?.transpose();
    let ker = vertical.nullspace();
    (ker.ncols() > 0).then(|| ExactMatrix::from_fn(n, 1, |i, _| ker[(i, 0)].clone()))
}

/// Whether the joint image `Σ Aᵢ Cᴺ` is a proper subspace.
pub fn image_is_proper(pencil: &LinearPencil) -> bool {
    let n = pencil.nrows();
    image_of(pencil, &ExactMatrix::identity(n)).rank() < n
}

fn random_gaussian_integer_matrix(d: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    ExactMatrix::from_fn(d, d, |_, _| {
        ExactScalar::from_ints(rng.random_range(-4..=4), rng.random_range(-4..=4))
    })
}

/// Left annihilator rows: `C` with `C·W = 0` and `ker C = span W`.
fn annihilator(w: &ExactMatrix, dim: usize) -> ExactMatrix {
    if w.ncols() == 0 {
        return ExactMatrix::identity(dim);
    }
    w.transpose().nullspace().transpose()
}

/// Span of all `d` slices of the vectors in `basis` (index `i·d + a`).
fn slice_span(basis: &ExactMatrix, n: usize, d: usize) -> ExactMatrix {
    let mut cols = Vec::new();
    for k in 0..basis.ncols() {
        for a in 0..d {
            cols.push(ExactMatrix::from_fn(n, 1, |i, _| basis[(i * d + a, k)].clone()));
        }
    }
    if cols.is_empty() {
        return ExactMatrix::zeros(n, 0);
    }
    let refs: Vec<&ExactMatrix> = cols.iter().collect();
    ExactMatrix::hcat(&refs).expect("same rows").column_basis()
}

/// Searches for a shrunk subspace through the second Wong sequence of a
/// random blow-up `T = Σ Aₖ ⊗ Xₖ`.
///
/// With `Vₜ ⊆ Cᴺ`, the sequence is `Uₜ = slices(T⁻¹(Vₜ ⊗ Cᵈ))` and
/// `Vₜ₊₁ = Σ AₖUₜ`. When it stabilizes while `V ⊗ Cᵈ` stays inside
/// `im T`, the final `U` has `dim U > dim V = dim Σ AₖU`. Several blow-up
/// sizes and random draws are tried; the result is re-verified exactly.
pub fn shrunk_subspace(pencil: &LinearPencil, seed: u64) -> Option<ExactMatrix> {
    let n = pencil.nrows();
    if n == 0 || !pencil.is_square() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_d = n.max(2);
    for d in 1..=max_d {
        if n * d > MAX_BLOWUP {
            break;
        }
        for _attempt in 0..2 {
            let xs: Vec<ExactMatrix> = (0..pencil.n_vars())
                .map(|_| random_gaussian_integer_matrix(d, &mut rng))
                .collect();
            let t = pencil.homogeneous_part().evaluate_exact(&xs, d).ok()?;
            if let Some(u) = wong_limit(pencil, &t, n, d) {
                if image_of(pencil, &u).rank() < u.ncols() {
                    return Some(u);
                }
            }
        }
    }
    None
}

fn wong_limit(pencil: &LinearPencil, t: &ExactMatrix, n: usize, d: usize) -> Option<ExactMatrix> {
    let nd = n * d;
    let image_t = t.column_basis();
    if image_t.ncols() == nd {
        return None;
    }
    let mut v = ExactMatrix::zeros(n, 0);
    for _ in 0..=n {
        let w = v.kron(&ExactMatrix::identity(d));
        if !image_t.spans(&w) {
            return None;
        }
        let preimage = annihilator(&w, nd).mul(t).ok()?.nullspace();
        let u = slice_span(&preimage, n, d);
        let next = image_of(pencil, &u).column_basis();
        if next.ncols() == v.ncols() {
            return Some(u);
        }
        v = next;
    }
    None
}
