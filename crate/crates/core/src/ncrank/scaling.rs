use crate::error::{Error, Result};
use crate::exact::ExactMatrix;
use crate::linalg::{self, CMat};
use crate::ncpoly::{HollowBlock, LinearPencil};

use super::witness;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Full,
    Nonfull,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Scaling,
    Substitution,
    Hollow,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Positive semidefinite `B` with `rank L(B) < rank B`.
    RankDecreasing {
        b: ExactMatrix,
        rank_b: usize,
        rank_lb: usize,
    },
    Hollow(HollowBlock),
    /// Final doubly-stochastic defect of a successful scaling run.
    Defect { value: f64 },
    /// Observed `(d, rank)` pairs from substitution.
    SubstitutionRanks { ranks: Vec<(usize, usize)> },
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct FullnessCertificate {
    pub verdict: Verdict,
    pub method: Method,
    pub witness: Option<Witness>,
    pub iterations: usize,
}

impl FullnessCertificate {
    pub fn is_full(&self) -> bool {
        self.verdict == Verdict::Full
    }

    /// Re-checks a rank-decreasing witness in exact arithmetic, computing
    /// both ranks from scratch. Other witness kinds report `true`.
    pub fn reverify(&self, pencil: &LinearPencil) -> bool {
        match &self.witness {
            Some(Witness::RankDecreasing { b, .. }) => witness::verify_witness(pencil, b),
            _ => true,
        }
    }
}

fn check_homogeneous(pencil: &LinearPencil) -> Result<()> {
    if !pencil.is_square() {
        return Err(Error::NotSquare {
            rows: pencil.nrows(),
            cols: pencil.ncols(),
        });
    }
    if !pencil.is_homogeneous() {
        return Err(Error::NonHomogeneous);
    }
    Ok(())
}

/// `L(B) = Σ AᵢBAᵢ*` for a homogeneous square pencil.
pub fn quantum_op_apply(pencil: &LinearPencil, b: &CMat) -> Result<CMat> {
    check_homogeneous(pencil)?;
    let n = pencil.nrows();
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::ShapeMismatch(format!("B must be {n}x{n}")));
    }
    let mut out = linalg::zeros(n, n);
    for a in pencil.linear() {
        let a = a.to_c64();
        out += &a * b * a.adjoint();
    }
    Ok(out)
}

fn row_sum(tuple: &[CMat]) -> CMat {
    let n = tuple[0].nrows();
    tuple.iter().fold(linalg::zeros(n, n), |acc, a| acc + a * a.adjoint())
}

fn col_sum(tuple: &[CMat]) -> CMat {
    let n = tuple[0].nrows();
    tuple.iter().fold(linalg::zeros(n, n), |acc, a| acc + a.adjoint() * a)
}

fn defect(m: &CMat) -> f64 {
    let d = m - linalg::identity(m.nrows());
    let f = linalg::frobenius(&d);
    f * f
}

/// Iteration limits for [`fullness_scaling`].
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct ScalingConfig {
    /// Budget is `budget_factor · N²` iterations.
    pub budget_factor: usize,
    /// Stop early when the defect fails to shrink by this ratio over
    /// `stall_window` iterations.
    pub stall_ratio: f64,
    pub stall_window: usize,
    pub seed: u64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            budget_factor: 200,
            stall_ratio: 0.995,
            stall_window: 100,
            seed: 0,
        }
    }
}

/// Decides fullness of a homogeneous square pencil by operator scaling.
///
/// The coefficient tuple is alternately normalized so that `Σ AᵢAᵢ* = 1`
/// and `Σ Aᵢ*Aᵢ = 1`. A squared Frobenius defect below `1/(N+1)` means
/// full. When the iteration exhausts its budget, stalls, or hits a
/// singular normalizer, an exact shrunk subspace is sought and returned as
/// a rank-decreasing witness; if none is found the result is
/// `Inconclusive`.
pub fn fullness_scaling(pencil: &LinearPencil) -> Result<FullnessCertificate> {
    fullness_scaling_with(pencil, &ScalingConfig::default())
}

pub fn fullness_scaling_with(pencil: &LinearPencil, cfg: &ScalingConfig) -> Result<FullnessCertificate> {
    check_homogeneous(pencil)?;
    if pencil.is_zero() {
        return Err(Error::ZeroPencil);
    }
    let n = pencil.nrows();

    // Exact shortcuts: a common kernel vector v gives L(vv*) = 0, and a
    // proper joint image gives rank L(I) < N.
    if let Some(v) = witness::common_kernel(pencil) {
        return Ok(nonfull(pencil, witness::projector_form(&v), 0));
    }
    if witness::image_is_proper(pencil) {
        return Ok(nonfull(pencil, ExactMatrix::identity(n), 0));
    }

    let threshold = 1.0 / (n as f64 + 1.0);
    let budget = cfg.budget_factor * n * n;
    let original: Vec<CMat> = pencil.linear().iter().map(ExactMatrix::to_c64).collect();
    let mut tuple = original.clone();
    let mut left = linalg::identity(n);
    let mut right = linalg::identity(n);
    let mut history: Vec<f64> = Vec::new();
    let mut iterations = 0;
    let mut last = f64::INFINITY;
    while iterations < budget {
        iterations += 1;
        let Some(r) = linalg::inv_sqrt_psd(&row_sum(&tuple), 1e-13)? else {
            break;
        };
        for a in tuple.iter_mut() {
            *a = &r * &*a;
        }
        left = &r * &left;
        let c = col_sum(&tuple);
        last = defect(&c);
        if last < threshold {
            if let Some(v) = confirm_full(&original, &left, &right, threshold)? {
                return Ok(full(v, iterations));
            }
            break;
        }
        let Some(s) = linalg::inv_sqrt_psd(&c, 1e-13)? else {
            break;
        };
        for a in tuple.iter_mut() {
            *a = &*a * &s;
        }
        right = &right * &s;
        last = last.min(defect(&row_sum(&tuple)));
        if last < threshold {
            if let Some(v) = confirm_full(&original, &left, &right, threshold)? {
                return Ok(full(v, iterations));
            }
            break;
        }
        history.push(last);
        if history.len() > cfg.stall_window {
            let old = history[history.len() - 1 - cfg.stall_window];
            if last > cfg.stall_ratio * old {
                break;
            }
        }
    }

    match witness::shrunk_subspace(pencil, cfg.seed) {
        Some(u) => Ok(nonfull(pencil, witness::projector_form(&u), iterations)),
        None => Err(Error::Inconclusive {
            iterations,
            defect: last,
        }),
    }
}

/// Largest accepted condition number of the accumulated scalings. Scaling a
/// nonfull operator drives them to infinity, and past this point rounding
/// alone can fake a small defect.
const MAX_SCALING_CONDITION: f64 = 1e8;

/// Rebuilds the scaled tuple from the original coefficients and accepts a
/// full verdict only if both normalizations are well conditioned and the
/// recomputed two-sided defect is still below the threshold.
fn confirm_full(original: &[CMat], left: &CMat, right: &CMat, threshold: f64) -> Result<Option<f64>> {
    for m in [left, right] {
        let sv = linalg::singular_values(m)?;
        let (hi, lo) = (sv[0], sv[sv.len() - 1]);
        if !(lo > 0.0 && hi / lo < MAX_SCALING_CONDITION) {
            return Ok(None);
        }
    }
    let tuple: Vec<CMat> = original.iter().map(|a| left * a * right).collect();
    let value = defect(&row_sum(&tuple)).min(defect(&col_sum(&tuple)));
    Ok((value < threshold).then_some(value))
}

fn full(defect: f64, iterations: usize) -> FullnessCertificate {
    FullnessCertificate {
        verdict: Verdict::Full,
        method: Method::Scaling,
        witness: Some(Witness::Defect { value: defect }),
        iterations,
    }
}

fn nonfull(pencil: &LinearPencil, b: ExactMatrix, iterations: usize) -> FullnessCertificate {
    let rank_b = b.rank();
    let rank_lb = witness::quantum_op_exact(pencil, &b).rank();
    FullnessCertificate {
        verdict: Verdict::Nonfull,
        method: Method::Scaling,
        witness: Some(Witness::RankDecreasing { b, rank_b, rank_lb }),
        iterations,
    }
}
