use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ncpoly::NcMatrix;
use crate::randmat::{empirical_rank, MatrixModel, ModelKind, TolPolicy};

use super::{RankResult, ScalingStatus};

/// Settings for the random substitution oracle.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SubstitutionConfig {
    /// Dimensions to test; empty means `{N+1, 2(N+1)}` for `N = max(rows, cols)`.
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub kind: ModelKind,
    pub tol: TolPolicy,
}

impl Default for SubstitutionConfig {
    fn default() -> Self {
        Self {
            dims: Vec::new(),
            trials: 2,
            seed: 0,
            kind: ModelKind::Gue,
            tol: TolPolicy::default(),
        }
    }
}

/// One evaluation of the matrix at a random tuple.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SubstitutionEstimate {
    pub d: usize,
    pub trial: usize,
    pub seed: u64,
    pub rank: usize,
    pub estimate: usize,
    pub gap_ratio: f64,
    pub gap_ok: bool,
}

pub fn default_dims(size: usize) -> Vec<usize> {
    vec![size + 1, 2 * (size + 1)]
}

/// Evaluates `P` at independent random tuples for every `(d, trial)` pair
/// and returns the common value of `round(rank/d)` with its evidence.
///
/// Job `k` (dimensions outer, trials inner) uses seed `seed + k`.
pub fn rank_by_substitution(p: &NcMatrix, cfg: &SubstitutionConfig) -> Result<RankResult> {
    let size = p.nrows().max(p.ncols());
    let dims = if cfg.dims.is_empty() {
        default_dims(size)
    } else {
        cfg.dims.clone()
    };
    if let Some(&d) = dims.iter().find(|&&d| d < size + 1) {
        return Err(Error::InvalidArgument(format!(
            "substitution dimension {d} is below {}",
            size + 1
        )));
    }
    if cfg.trials < 2 {
        return Err(Error::InvalidArgument("at least two trials are required".into()));
    }
    let jobs: Vec<(usize, usize)> = dims
        .iter()
        .flat_map(|&d| (0..cfg.trials).map(move |t| (d, t)))
        .collect();
    let evidence = jobs
        .par_iter()
        .enumerate()
        .map(|(k, &(d, trial))| {
            let seed = cfg.seed.wrapping_add(k as u64);
            let model = MatrixModel::sample(cfg.kind, d, p.n_vars(), seed)?;
            let rep = empirical_rank(&p.evaluate(&model)?, cfg.tol)?;
            Ok(SubstitutionEstimate {
                d,
                trial,
                seed,
                rank: rep.rank,
                estimate: (rep.rank as f64 / d as f64).round() as usize,
                gap_ratio: rep.gap_ratio,
                gap_ok: rep.gap_ok,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let summary = || {
        evidence
            .iter()
            .map(|e| format!("d={} trial={} rank={} gap={:.2e}", e.d, e.trial, e.rank, e.gap_ratio))
            .collect::<Vec<_>>()
            .join("; ")
    };
    if evidence.iter().any(|e| !e.gap_ok) {
        return Err(Error::NoConsensus(format!("insufficient singular value gap: {}", summary())));
    }
    let first = evidence[0].estimate;
    if evidence.iter().any(|e| e.estimate != first) {
        return Err(Error::NoConsensus(summary()));
    }
    Ok(RankResult {
        rho: first,
        matrix_size: (p.nrows(), p.ncols()),
        confidence: evidence.len(),
        evidence,
        linearization_rows: 0,
        scaling: ScalingStatus::Skipped,
        hollow: None,
    })
}
