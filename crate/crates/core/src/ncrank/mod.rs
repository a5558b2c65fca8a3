//! Inner rank and fullness over the free field.
//!
//! Two independent engines answer every query: random substitution
//! (`rank P(X) / d` at GUE tuples) and operator scaling of the quantum
//! operator attached to a homogeneous pencil. Their verdicts are compared
//! on every call and a disagreement is an error.
//!
//! Finite-dimensional substitution is a surrogate for the operator limit:
//! the estimate is accepted when every dimension and trial rounds to the
//! same integer with a clean singular value gap.

mod linearize;
mod scaling;
mod substitution;
pub mod witness;

pub use linearize::linearize;
pub use scaling::{
    fullness_scaling, fullness_scaling_with, quantum_op_apply, FullnessCertificate, Method,
    ScalingConfig, Verdict, Witness,
};
pub use substitution::{default_dims, rank_by_substitution, SubstitutionConfig, SubstitutionEstimate};

use crate::error::{Error, Result};
use crate::ncpoly::{hollow_check, HollowBlock, LinearPencil, NcMatrix};

/// Outcome of the scaling cross-check inside [`ncrank`].
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScalingStatus {
    Agrees { certificate: FullnessCertificate },
    /// Scaling could not decide; the substitution answer stands alone.
    Inconclusive { iterations: usize, defect: f64 },
    Skipped,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct RankResult {
    pub rho: usize,
    pub matrix_size: (usize, usize),
    pub evidence: Vec<SubstitutionEstimate>,
    /// Number of substitution estimates that agree on `rho`.
    pub confidence: usize,
    /// Rows added by linearization; the linear matrix has rank `rho` plus this.
    pub linearization_rows: usize,
    pub scaling: ScalingStatus,
    pub hollow: Option<HollowBlock>,
}

impl RankResult {
    pub fn is_full(&self) -> bool {
        self.matrix_size.0 == self.matrix_size.1 && self.rho == self.matrix_size.0
    }
}

#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct RankConfig {
    pub substitution: SubstitutionConfig,
    pub scaling: ScalingConfig,
    /// Skip the scaling engine (substitution and hollow checks still run).
    pub skip_scaling: bool,
}

/// Inner rank with default settings.
pub fn ncrank(p: &NcMatrix) -> Result<RankResult> {
    ncrank_with(p, &RankConfig::default())
}

/// Cross-validated inner rank.
///
/// Rectangular input is padded with zeros. Entries of degree ≥ 2 are
/// linearized first; substitution runs on the linear matrix, scaling on
/// its homogenization, and a hollow zero pattern of the input must agree
/// with a non-maximal answer.
pub fn ncrank_with(p: &NcMatrix, cfg: &RankConfig) -> Result<RankResult> {
    if let Some(k) = p.entries().iter().position(|e| e.has_star()) {
        return Err(Error::StarredLetter {
            row: k / p.ncols(),
            col: k % p.ncols(),
        });
    }
    let q = p.pad_square();
    let n = q.nrows();
    let (linear, added) = linearize(&q)?;
    let size = linear.nrows();
    let sub = rank_by_substitution(&linear, &cfg.substitution)?;
    if sub.rho < added || sub.rho - added > n {
        return Err(Error::InvariantViolation(format!(
            "linear matrix of size {size} with {added} added rows has rank {}",
            sub.rho
        )));
    }
    let rho = sub.rho - added;

    let hollow = hollow_check(&q)?;
    if hollow.is_some() && rho == n {
        return Err(Error::Disagreement(format!(
            "hollow {n}x{n} matrix reported full by substitution"
        )));
    }

    let pencil = LinearPencil::from_matrix(&linear)?;
    let scaling = if cfg.skip_scaling || pencil.is_zero() {
        ScalingStatus::Skipped
    } else {
        match fullness_scaling_with(&pencil.homogenize()?, &cfg.scaling) {
            Ok(certificate) => {
                if certificate.is_full() != (sub.rho == size) {
                    return Err(Error::Disagreement(format!(
                        "scaling says {:?}, substitution gives rank {} of {size}",
                        certificate.verdict, sub.rho
                    )));
                }
                ScalingStatus::Agrees { certificate }
            }
            Err(Error::Inconclusive { iterations, defect }) => ScalingStatus::Inconclusive { iterations, defect },
            Err(e) => return Err(e),
        }
    };

    Ok(RankResult {
        rho,
        matrix_size: (p.nrows(), p.ncols()),
        confidence: sub.confidence,
        evidence: sub.evidence,
        linearization_rows: added,
        scaling,
        hollow,
    })
}
