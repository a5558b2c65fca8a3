//! Random matrix models standing in for operator tuples, empirical ranks and
//! empirical spectral distributions.
//!
//! Normalization: GUE matrices have `E|H_ij|² = 1/d`, so the spectrum of a
//! single GUE matrix fills `[-2, 2]`. Ginibre matrices have `E|Z_ij|² = 1/d`
//! (unit disk). Haar unitaries are exactly unitary. Rank thresholds are
//! relative to the largest singular value, so they do not depend on this
//! choice, but atom windows and histogram ranges do.

mod esd;
mod rank;
mod scan;

pub use esd::{esd, Eigenvalues, Esd, Histogram};
pub use rank::{empirical_rank, numeric_kernel, RankReport, TolPolicy};
pub use scan::{
    atiyah_integrality_scan, dykema_pascoe_matrix, dykema_pascoe_model, integrality_corpus,
    rank_convergence, rank_convergence_with, ConvergenceRow, IntegralityEntry,
    IntegralityReport, INTEGRALITY_TOLERANCE,
};

use std::fmt;
use std::str::FromStr;

use faer::{c64, Mat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Gue,
    HaarUnitary,
    Ginibre,
    Custom,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Gue => "gue",
            ModelKind::HaarUnitary => "haar",
            ModelKind::Ginibre => "ginibre",
            ModelKind::Custom => "custom",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gue" => Ok(ModelKind::Gue),
            "haar" | "haar_unitary" => Ok(ModelKind::HaarUnitary),
            "ginibre" => Ok(ModelKind::Ginibre),
            other => Err(Error::InvalidArgument(format!("unknown model kind `{other}`"))),
        }
    }
}

/// A tuple of `d×d` complex matrices, one per variable.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixModel {
    kind: ModelKind,
    d: usize,
    seed: u64,
    matrices: Vec<CMat>,
}

impl MatrixModel {
    /// Draws `n_vars` independent matrices of the given ensemble.
    /// Deterministic in `(kind, d, n_vars, seed)`.
    pub fn sample(kind: ModelKind, d: usize, n_vars: usize, seed: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidArgument("model dimension must be >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let matrices = (0..n_vars)
            .map(|_| match kind {
                ModelKind::Gue => Ok(gue(d, &mut rng)),
                ModelKind::Ginibre => Ok(ginibre(d, &mut rng)),
                ModelKind::HaarUnitary => Ok(haar_unitary(d, &mut rng)),
                ModelKind::Custom => Err(Error::InvalidArgument(
                    "custom models are built with MatrixModel::custom".into(),
                )),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            kind,
            d,
            seed,
            matrices,
        })
    }

    /// Wraps user-supplied matrices.
    pub fn custom(matrices: Vec<CMat>, d: usize) -> Result<Self> {
        if matrices.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::ShapeMismatch(format!("model matrices must be {d}x{d}")));
        }
        Ok(Self {
            kind: ModelKind::Custom,
            d,
            seed: 0,
            matrices,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n_vars(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    /// The entrywise conjugate-transpose tuple `X* = (X₁*, …, Xₙ*)`.
    pub fn adjoint_tuple(&self) -> Self {
        Self {
            kind: self.kind,
            d: self.d,
            seed: self.seed,
            matrices: self.matrices.iter().map(linalg::adjoint).collect(),
        }
    }

    /// `(X₁, …, Xₙ, X₁*, …, Xₙ*)`, the substitution for a pencil over the
    /// widened alphabet of variables and their adjoints.
    pub fn with_adjoints(&self) -> Vec<CMat> {
        let mut out = self.matrices.clone();
        out.extend(self.matrices.iter().map(linalg::adjoint));
        out
    }
}

fn complex_gaussian(rng: &mut ChaCha8Rng, variance: f64) -> c64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    c64::new(re * s, im * s)
}

fn gue(d: usize, rng: &mut ChaCha8Rng) -> CMat {
    let mut h = linalg::zeros(d, d);
    let var = 1.0 / d as f64;
    for i in 0..d {
        let x: f64 = StandardNormal.sample(rng);
        h[(i, i)] = c64::new(x * var.sqrt(), 0.0);
        for j in (i + 1)..d {
            let z = complex_gaussian(rng, var);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

fn ginibre(d: usize, rng: &mut ChaCha8Rng) -> CMat {
    let var = 1.0 / d as f64;
    let mut z = linalg::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            z[(i, j)] = complex_gaussian(rng, var);
        }
    }
    z
}

/// QR of a Ginibre matrix with the phases of `diag(R)` divided out.
fn haar_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMat {
    let z = ginibre(d, rng);
    let qr = z.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    let phases: Vec<c64> = (0..d)
        .map(|k| {
            let x = r[(k, k)];
            let a = x.norm();
            if a == 0.0 {
                c64::new(1.0, 0.0)
            } else {
                x / a
            }
        })
        .collect();
    Mat::from_fn(d, d, |i, j| q[(i, j)] * phases[j])
}
