//! Dual systems for the left regular representation of a free group.
//!
//! On `ℓ²(F_n)` the generators act by `Uᵢ δ_h = δ_{gᵢh}`. The operators
//! `Vᵢ δ_h = δ_{hgᵢ⁻¹}` when the reduced word `h` ends in `gᵢ` (and `0`
//! otherwise) satisfy `[Uᵢ, Vⱼ] = −δᵢⱼ P_e`, where `P_e` projects onto
//! `δ_e`, so `Dⱼ = −Vⱼ` is a dual system: `[Uᵢ, Dⱼ] = δᵢⱼ P_e`. At `h = e`
//! the commutator gives `0 − Vⱼδ_{gᵢ} = −δᵢⱼ δ_e`. A dual system forces
//! the generators to have the maximal dimension `n`, and from there the
//! rational closure of the group ring is the free field.
//!
//! Everything here works on a finite ball of radius `R`. Vectors `δ_h`
//! with `|h| ≤ R − 1` are interior: `Uᵢ` and `Vⱼ` never push them out of
//! the ball, so the commutator identity can be checked there exactly.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

/// Largest ball that will be enumerated.
pub const MAX_BALL: u128 = 1_000_000;

/// A letter: `+k` is `g_k`, `-k` is `g_k⁻¹` (with `k ≥ 1`).
pub type Letter = i32;

/// Sort key of a letter: `g₁ < g₁⁻¹ < g₂ < g₂⁻¹ < …`.
fn letter_key(l: Letter) -> u32 {
    2 * (l.unsigned_abs() - 1) + u32::from(l < 0)
}

/// Reduced words of length at most `R`, ordered by length and then
/// lexicographically.
#[derive(Clone, Debug)]
pub struct GroupBall {
    n: usize,
    radius: usize,
    words: Vec<Vec<Letter>>,
    index: HashMap<Vec<Letter>, usize>,
}

/// `1 + Σ_{k=1..R} 2n(2n−1)^{k−1}`, saturating.
pub fn ball_count(n: usize, radius: usize) -> u128 {
    let (n, r) = (n as u128, radius as u128);
    let mut total: u128 = 1;
    let mut layer: u128 = 2 * n;
    for _ in 0..r {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul((2 * n).saturating_sub(1));
    }
    total
}

impl GroupBall {
    pub fn build(n: usize, radius: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("the free group needs at least one generator".into()));
        }
        if radius == 0 {
            return Err(Error::InvalidArgument("the ball radius must be at least 1".into()));
        }
        let count = ball_count(n, radius);
        if count > MAX_BALL {
            return Err(Error::BallTooLarge { count });
        }
        let mut letters: Vec<Letter> = (1..=n as Letter).flat_map(|k| [k, -k]).collect();
        letters.sort_by_key(|&l| letter_key(l));

        let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut layer_start = 0;
        for _ in 0..radius {
            let layer_end = words.len();
            for w in layer_start..layer_end {
                for &l in &letters {
                    if words[w].last() == Some(&-l) {
                        continue;
                    }
                    let mut next = words[w].clone();
                    next.push(l);
                    words.push(next);
                }
            }
            layer_start = layer_end;
        }
        let index = words.iter().enumerate().map(|(k, w)| (w.clone(), k)).collect();
        Ok(Self {
            n,
            radius,
            words,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Vec<Letter>] {
        &self.words
    }

    pub fn word(&self, k: usize) -> &[Letter] {
        &self.words[k]
    }

    pub fn index_of(&self, w: &[Letter]) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Indices of words with `|h| ≤ R − 1`.
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&k| self.words[k].len() < self.radius)
    }

    fn check_generator(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::InvalidArgument(format!("generator {i} is not in 1..={}", self.n)));
        }
        Ok(())
    }
}

/// Reduced product `l·w`.
pub fn left_mul(l: Letter, w: &[Letter]) -> Vec<Letter> {
    match w.first() {
        Some(&f) if f == -l => w[1..].to_vec(),
        _ => std::iter::once(l).chain(w.iter().copied()).collect(),
    }
}

/// Reduced product `w·l`.
pub fn right_mul(w: &[Letter], l: Letter) -> Vec<Letter> {
    match w.last() {
        Some(&last) if last == -l => w[..w.len() - 1].to_vec(),
        _ => w.iter().copied().chain(std::iter::once(l)).collect(),
    }
}

/// Sparse vector indexed by ball positions.
pub type SparseVec = BTreeMap<usize, ExactScalar>;

pub fn basis_vector(k: usize) -> SparseVec {
    SparseVec::from([(k, ExactScalar::one())])
}

/// Finitely supported operator on the ball, stored by columns.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseOp {
    dim: usize,
    columns: Vec<SparseVec>,
}

impl SparseOp {
    /// Operator sending each `δ_k` to `δ_{f(k)}` or to zero.
    fn from_map(dim: usize, f: impl Fn(usize) -> Option<usize>) -> Self {
        let columns = (0..dim).map(|k| f(k).map(basis_vector).unwrap_or_default()).collect();
        Self { dim, columns }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero entries as `((row, col), value)`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &ExactScalar)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(&r, v)| ((r, c), v)))
    }

    pub fn column(&self, k: usize) -> &SparseVec {
        &self.columns[k]
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&k, a) in v {
            for (&r, b) in &self.columns[k] {
                *out.entry(r).or_insert_with(ExactScalar::zero) += &(a * b);
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }
}

/// `Uᵢ = λ(gᵢ)`, truncated: images outside the ball are dropped.
pub fn left_regular(i: usize, ball: &GroupBall) -> Result<SparseOp> {
    ball.check_generator(i)?;
    let g = i as Letter;
    Ok(SparseOp::from_map(ball.len(), |k| ball.index_of(&left_mul(g, ball.word(k)))))
}

/// Right multiplication `δ_h ↦ δ_{hgᵢ}`, truncated.
pub fn right_regular(i: usize, ball: &GroupBall) -> Result<SparseOp> {
    ball.check_generator(i)?;
    let g = i as Letter;
    Ok(SparseOp::from_map(ball.len(), |k| ball.index_of(&right_mul(ball.word(k), g))))
}

/// `Vᵢ`: `δ_h ↦ δ_{hgᵢ⁻¹}` if `h` ends in `gᵢ`, else zero.
pub fn dual_op(i: usize, ball: &GroupBall) -> Result<SparseOp> {
    ball.check_generator(i)?;
    let g = i as Letter;
    Ok(SparseOp::from_map(ball.len(), |k| {
        let w = ball.word(k);
        (w.last() == Some(&g)).then(|| ball.index_of(&w[..w.len() - 1]).expect("prefix is in the ball"))
    }))
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PairReport {
    pub i: usize,
    pub j: usize,
    /// Largest entry of `(UᵢVⱼ − VⱼUᵢ)δ_h + δᵢⱼ⟨δ_h, δ_e⟩δ_e` over the interior.
    pub defect: f64,
    pub pass: bool,
}

/// Exact check of `[Uᵢ, Vⱼ] = −δᵢⱼ P_e` on every interior basis vector.
pub fn commutator_defect(i: usize, j: usize, ball: &GroupBall) -> Result<PairReport> {
    let u = left_regular(i, ball)?;
    let v = dual_op(j, ball)?;
    let mut worst = num_rational::BigRational::from_integer(0.into());
    for h in ball.interior() {
        let e = basis_vector(h);
        let mut out = u.apply(&v.apply(&e));
        for (k, x) in v.apply(&u.apply(&e)) {
            *out.entry(k).or_insert_with(ExactScalar::zero) -= &x;
        }
        if i == j && h == 0 {
            *out.entry(0).or_insert_with(ExactScalar::zero) += &ExactScalar::one();
        }
        for x in out.values() {
            worst = worst.max(x.max_abs());
        }
    }
    let pass = num_traits::Zero::is_zero(&worst);
    Ok(PairReport {
        i,
        j,
        defect: num_traits::ToPrimitive::to_f64(&worst).unwrap_or(f64::INFINITY),
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct DualCheckReport {
    pub n: usize,
    #[serde(rename = "R")]
    pub radius: usize,
    pub ball_size: usize,
    pub interior_count: usize,
    pub pairs: Vec<PairReport>,
    pub all_pass: bool,
    pub truncation: &'static str,
    pub implication: &'static str,
}

/// Checks every pair `(i, j)` on the ball of radius `R` in `F_n`.
pub fn dual_check(n: usize, radius: usize) -> Result<DualCheckReport> {
    let ball = GroupBall::build(n, radius)?;
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
    let pairs = pairs
        .par_iter()
        .map(|&(i, j)| commutator_defect(i, j, &ball))
        .collect::<Result<Vec<_>>>()?;
    Ok(DualCheckReport {
        n,
        radius,
        ball_size: ball.len(),
        interior_count: ball.interior().count(),
        all_pass: pairs.iter().all(|p| p.pass),
        pairs,
        truncation: "identities are tested on basis vectors of length at most R-1, whose images stay inside the ball",
        implication: "a dual system for U_1..U_n gives them maximal dimension n, so the rational closure of the group ring is the free field",
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_sizes() {
        let b = GroupBall::build(1, 2).unwrap();
        assert_eq!(b.words(), &[vec![], vec![1], vec![-1], vec![1, 1], vec![-1, -1]]);
        assert_eq!(GroupBall::build(2, 1).unwrap().len(), 5);
        assert_eq!(GroupBall::build(2, 6).unwrap().len(), 1457);
        for n in 1..=3 {
            for r in 1..=7 {
                let closed = 1 + (1..=r).map(|k| 2 * n * (2 * n - 1usize).pow(k as u32 - 1)).sum::<usize>();
                assert_eq!(GroupBall::build(n, r).unwrap().len(), closed);
            }
        }
    }

    #[test]
    fn ordering_and_reduction() {
        let b = GroupBall::build(2, 2).unwrap();
        assert_eq!(&b.words()[1..5], &[vec![1], vec![-1], vec![2], vec![-2]]);
        assert!(b.words().iter().all(|w| w.windows(2).all(|p| p[0] != -p[1])));
        assert_eq!(b.index_of(&[]), Some(0));
    }

    #[test]
    fn guards() {
        assert!(matches!(GroupBall::build(2, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(GroupBall::build(0, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(GroupBall::build(3, 20), Err(Error::BallTooLarge { .. })));
    }

    #[test]
    fn operator_examples() {
        let b = GroupBall::build(2, 3).unwrap();
        let u1 = left_regular(1, &b).unwrap();
        let v1 = dual_op(1, &b).unwrap();
        let at = |w: &[Letter]| b.index_of(w).unwrap();
        assert_eq!(u1.apply(&basis_vector(0)), basis_vector(at(&[1])));
        assert_eq!(u1.apply(&basis_vector(at(&[-1]))), basis_vector(0));
        assert_eq!(v1.apply(&basis_vector(at(&[1]))), basis_vector(0));
        assert!(v1.apply(&basis_vector(at(&[2]))).is_empty());
        assert_eq!(v1.apply(&basis_vector(at(&[2, 1]))), basis_vector(at(&[2])));
        for k in 0..b.len() {
            let col = u1.column(k);
            assert!(col.len() <= 1 && col.values().all(ExactScalar::is_one));
        }
    }

    #[test]
    fn commutators_vanish_on_the_interior() {
        let b = GroupBall::build(2, 6).unwrap();
        assert_eq!(b.interior().count(), 485);
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let r = commutator_defect(i, j, &b).unwrap();
            assert!(r.pass, "pair {i},{j}");
            assert_eq!(r.defect, 0.0);
        }
    }

    #[test]
    fn commutator_at_identity_is_the_projection() {
        let b = GroupBall::build(2, 3).unwrap();
        let (u, v) = (left_regular(2, &b).unwrap(), dual_op(2, &b).unwrap());
        let e = basis_vector(0);
        let mut out = u.apply(&v.apply(&e));
        for (k, x) in v.apply(&u.apply(&e)) {
            *out.entry(k).or_insert_with(ExactScalar::zero) -= &x;
        }
        out.retain(|_, x| !x.is_zero());
        assert_eq!(out, SparseVec::from([(0, -ExactScalar::one())]));
        // off the diagonal it vanishes
        let v1 = dual_op(1, &b).unwrap();
        let mut out = u.apply(&v1.apply(&e));
        for (k, x) in v1.apply(&u.apply(&e)) {
            *out.entry(k).or_insert_with(ExactScalar::zero) -= &x;
        }
        out.retain(|_, x| !x.is_zero());
        assert!(out.is_empty());
    }

    #[test]
    fn left_regular_is_injective_on_the_interior() {
        let b = GroupBall::build(3, 4).unwrap();
        for i in 1..=3 {
            let u = left_regular(i, &b).unwrap();
            let mut seen = std::collections::HashSet::new();
            for h in b.interior() {
                let img = u.apply(&basis_vector(h));
                assert_eq!(img.len(), 1);
                assert!(seen.insert(*img.keys().next().unwrap()));
            }
        }
    }

    #[test]
    fn dual_inverts_right_multiplication() {
        // Vᵢ undoes right multiplication by gᵢ on interior words that do not
        // end in gᵢ⁻¹.
        let b = GroupBall::build(2, 5).unwrap();
        for i in 1..=2 {
            let (v, r) = (dual_op(i, &b).unwrap(), right_regular(i, &b).unwrap());
            for h in b.interior().filter(|&h| b.word(h).last() != Some(&-(i as Letter))) {
                assert_eq!(v.apply(&r.apply(&basis_vector(h))), basis_vector(h));
            }
        }
    }

    #[test]
    fn dual_inverts_left_multiplication_only_for_one_generator() {
        let b = GroupBall::build(1, 5).unwrap();
        let (v, u) = (dual_op(1, &b).unwrap(), left_regular(1, &b).unwrap());
        for h in b.interior().filter(|&h| b.word(h).last() != Some(&-1)) {
            assert_eq!(v.apply(&u.apply(&basis_vector(h))), basis_vector(h));
        }
        // with two generators V₁U₁δ_{g₂} = V₁δ_{g₁g₂} = 0
        let b = GroupBall::build(2, 3).unwrap();
        let (v, u) = (dual_op(1, &b).unwrap(), left_regular(1, &b).unwrap());
        let g2 = b.index_of(&[2]).unwrap();
        assert!(v.apply(&u.apply(&basis_vector(g2))).is_empty());
    }

    #[test]
    fn report() {
        let r = dual_check(1, 3).unwrap();
        assert!(r.all_pass);
        assert_eq!(r.pairs.len(), 1);
        let json = serde_json::to_value(dual_check(2, 6).unwrap()).unwrap();
        assert_eq!(json["R"], 6);
        assert_eq!(json["interior_count"], 485);
        assert_eq!(json["pairs"].as_array().unwrap().len(), 4);
    }
}
