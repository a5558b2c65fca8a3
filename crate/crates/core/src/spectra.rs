//! Central eigenvalues, atoms and entropy dimension.
//!
//! For a square matrix `P` of size `N`, a point `λ` is a central eigenvalue
//! when `P − λ·1` is not full. The atom of the spectral distribution at `λ`
//! then has mass `(N − ρ(P − λ))/N` and the entropy dimension is
//! `1 − Σ (N − ρ(P − λ))² / N²` over all central eigenvalues.

use faer::c64;
use num_rational::Rational64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::ncpoly::{LinearPencil, NcMatrix};
use crate::ncrank::{ncrank_with, quantum_op_apply, rank_by_substitution, RankConfig, RankResult};
use crate::randmat::{Esd, MatrixModel, ModelKind};
use crate::scalar::ExactScalar;

/// Relative normality defect above which a warning is attached.
pub const NORMALITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CandidateSource {
    ConstantTerm,
    NumericDetection,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_ratio<S: serde::Serializer>(r: &Option<Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Atom {
    pub lambda: ExactScalar,
    pub rho: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub mass: Rational64,
    /// `false` when only the substitution engine was consulted.
    pub certified: bool,
}

/// A numeric candidate that could not be settled exactly.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Candidate {
    pub re: f64,
    pub im: f64,
    /// Eigenvalues in the detected cluster (0 for constant-term candidates).
    pub cluster_size: usize,
    pub reason: String,
    /// Substitution estimate of `ρ(P − λ)` at the floating point `λ`.
    pub rho_estimate: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, serde::Serialize)]
pub struct Diagnostics {
    pub normality_defect: Option<f64>,
    /// Candidates that turned out not to be central (`ρ = N`).
    pub rejected: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SpectrumReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub atoms: Vec<Atom>,
    pub uncertified: Vec<Candidate>,
    /// Present when every candidate was settled.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub entropy_dimension: Option<Rational64>,
    pub candidate_source: CandidateSource,
    pub diagnostics: Diagnostics,
}

impl SpectrumReport {
    fn new(n: usize, source: CandidateSource) -> Self {
        Self {
            n,
            atoms: Vec::new(),
            uncertified: Vec::new(),
            entropy_dimension: Some(Rational64::from_integer(1)),
            candidate_source: source,
            diagnostics: Diagnostics::default(),
        }
    }

    fn finish(mut self) -> Result<Self> {
        if self.atoms.len() > self.n {
            return Err(Error::InvariantViolation(format!(
                "{} central eigenvalues for a {n}x{n} matrix",
                self.atoms.len(),
                n = self.n
            )));
        }
        let total: Rational64 = self.atoms.iter().map(|a| a.mass).sum();
        if total > Rational64::from_integer(1) {
            return Err(Error::InvariantViolation(format!("atom masses sum to {total}")));
        }
        self.atoms.sort_by(|a, b| {
            let (x, y) = (a.lambda.to_c64(), b.lambda.to_c64());
            x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im))
        });
        self.entropy_dimension = self
            .uncertified
            .is_empty()
            .then(|| dimension_from_ranks(self.n, self.atoms.iter().map(|a| a.rho)));
        Ok(self)
    }

    pub fn masses(&self) -> Vec<Rational64> {
        self.atoms.iter().map(|a| a.mass).collect()
    }
}

/// Settings shared by the spectral routines.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct SpectraConfig {
    /// Block size of the random evaluation used for detection and normality.
    pub d: usize,
    pub seed: u64,
    pub kind: ModelKind,
    pub snap_denominator: i64,
    pub snap_tolerance: f64,
    /// Use the cross-validated rank (substitution, scaling and hollow
    /// checks). When off, substitution alone decides.
    pub certify: bool,
    pub rank: RankConfig,
}

impl Default for SpectraConfig {
    fn default() -> Self {
        Self {
            d: 500,
            seed: 0,
            kind: ModelKind::Gue,
            snap_denominator: 64,
            snap_tolerance: 1e-3,
            certify: true,
            rank: RankConfig::default(),
        }
    }
}

fn mass(n: usize, rho: usize) -> Rational64 {
    Rational64::new((n - rho) as i64, n as i64)
}

fn dimension_from_ranks(n: usize, ranks: impl Iterator<Item = usize>) -> Rational64 {
    let n2 = (n * n) as i64;
    let defect: i64 = ranks.map(|r| ((n - r) * (n - r)) as i64).sum();
    Rational64::new(n2 - defect, n2)
}

fn rank_of(p: &NcMatrix, cfg: &SpectraConfig) -> Result<RankResult> {
    if cfg.certify {
        ncrank_with(p, &cfg.rank)
    } else {
        rank_by_substitution(&crate::ncrank::linearize(p)?.0, &cfg.rank.substitution).map(|mut r| {
            let added = r.matrix_size.0 - p.nrows();
            r.rho -= added;
            r.matrix_size = (p.nrows(), p.ncols());
            r
        })
    }
}

fn require_square(p: &NcMatrix) -> Result<usize> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            rows: p.nrows(),
            cols: p.ncols(),
        });
    }
    Ok(p.nrows())
}

/// Substitution estimate of `ρ(P − λ)` for a floating point `λ`.
fn float_shift_rank(p: &NcMatrix, lambda: c64, cfg: &SpectraConfig) -> Option<usize> {
    let n = p.nrows();
    let dims = crate::ncrank::default_dims(n);
    let estimates: Vec<usize> = (0..dims.len() * 2)
        .filter_map(|k| {
            let d = dims[k / 2];
            let model = MatrixModel::sample(cfg.kind, d, p.n_vars(), cfg.seed.wrapping_add(k as u64)).ok()?;
            let mut m = p.evaluate(&model).ok()?;
            for i in 0..n * d {
                m[(i, i)] -= lambda;
            }
            let rep = crate::randmat::empirical_rank(&m, cfg.rank.substitution.tol).ok()?;
            rep.gap_ok.then(|| (rep.rank as f64 / d as f64).round() as usize)
        })
        .collect();
    (estimates.len() == dims.len() * 2 && estimates.iter().all(|&e| e == estimates[0])).then(|| estimates[0])
}

/// `(N − ρ(P − λ))/N` for each `λ`.
pub fn atom_masses(p: &NcMatrix, lambdas: &[ExactScalar]) -> Result<Vec<Rational64>> {
    atom_masses_with(p, lambdas, &SpectraConfig::default())
}

pub fn atom_masses_with(p: &NcMatrix, lambdas: &[ExactScalar], cfg: &SpectraConfig) -> Result<Vec<Rational64>> {
    let n = require_square(p)?;
    lambdas
        .par_iter()
        .map(|l| Ok(mass(n, rank_of(&p.shift(l)?, cfg)?.rho)))
        .collect()
}

/// Central eigenvalues of an affine pencil `A₀ + Σ Aᵢxᵢ`.
///
/// They lie among the eigenvalues of `A₀`, and there are none at all when
/// the homogeneous part is full. Each eigenvalue of `A₀` that snaps to a
/// Gaussian rational is tested exactly; the rest are reported as
/// uncertified with a floating point rank estimate.
pub fn central_eigs_pencil(pencil: &LinearPencil) -> Result<SpectrumReport> {
    central_eigs_pencil_with(pencil, &SpectraConfig::default())
}

pub fn central_eigs_pencil_with(pencil: &LinearPencil, cfg: &SpectraConfig) -> Result<SpectrumReport> {
    if !pencil.is_square() {
        return Err(Error::NotSquare {
            rows: pencil.nrows(),
            cols: pencil.ncols(),
        });
    }
    let n = pencil.nrows();
    let mut report = SpectrumReport::new(n, CandidateSource::ConstantTerm);
    let matrix = pencil.to_matrix();
    let homogeneous = pencil.homogeneous_part();
    if !homogeneous.is_zero() && rank_of(&homogeneous.to_matrix(), cfg)?.rho == n {
        return report.finish();
    }

    let a0 = pencil.constant();
    let mut exact: Vec<ExactScalar> = Vec::new();
    let mut floating: Vec<c64> = Vec::new();
    for z in linalg::eigenvalues(&a0.to_c64())? {
        let snapped = ExactScalar::snap(z, cfg.snap_denominator, cfg.snap_tolerance)
            .filter(|l| a0.sub(&crate::exact::ExactMatrix::identity(n).scale(l)).map(|m| m.rank() < n).unwrap_or(false));
        match snapped {
            Some(l) => {
                if !exact.contains(&l) {
                    exact.push(l);
                }
            }
            None => {
                if !floating.iter().any(|w| (w - z).norm() <= cfg.snap_tolerance) {
                    floating.push(z);
                }
            }
        }
    }

    let ranks = exact
        .par_iter()
        .map(|l| rank_of(&matrix.shift(l)?, cfg).map(|r| r.rho))
        .collect::<Result<Vec<_>>>()?;
    for (l, rho) in exact.into_iter().zip(ranks) {
        if rho < n {
            report.atoms.push(Atom {
                mass: mass(n, rho),
                lambda: l,
                rho,
                certified: cfg.certify,
            });
        } else {
            report.diagnostics.rejected.push(l.to_string());
        }
    }
    for z in floating {
        let rho_estimate = float_shift_rank(&matrix, z, cfg);
        if rho_estimate == Some(n) {
            report.diagnostics.rejected.push(format!("{:.6}{:+.6}i", z.re, z.im));
            continue;
        }
        report.uncertified.push(Candidate {
            re: z.re,
            im: z.im,
            cluster_size: 0,
            reason: "eigenvalue of the constant term is not a Gaussian rational".into(),
            rho_estimate,
        });
    }
    report.finish()
}

/// A group of nearly equal eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub center: c64,
    pub size: usize,
}

/// Finds groups of at least `min_size` eigenvalues inside a disc of
/// diameter `width`, greedily from the most populated disc.
pub fn detect_clusters(eigenvalues: &[c64], width: f64, min_size: usize) -> Vec<Cluster> {
    let radius = width / 2.0;
    let mut alive: Vec<c64> = eigenvalues.to_vec();
    alive.sort_by(|a, b| a.re.total_cmp(&b.re));
    let mut out = Vec::new();
    loop {
        let mut best: Option<(usize, usize)> = None;
        let mut lo = 0;
        for (k, z) in alive.iter().enumerate() {
            while alive[lo].re < z.re - radius {
                lo += 1;
            }
            let count = alive[lo..]
                .iter()
                .take_while(|w| w.re <= z.re + radius)
                .filter(|w| (**w - z).norm() <= radius)
                .count();
            if best.is_none_or(|(_, c)| count > c) {
                best = Some((k, count));
            }
        }
        let Some((k, count)) = best else { break };
        if count < min_size {
            break;
        }
        let z = alive[k];
        let (members, rest): (Vec<c64>, Vec<c64>) = alive.into_iter().partition(|w| (w - z).norm() <= radius);
        alive = rest;
        out.push(Cluster {
            center: median(&members),
            size: members.len(),
        });
        if alive.is_empty() {
            break;
        }
    }
    out
}

fn median(zs: &[c64]) -> c64 {
    let mid = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    c64::new(mid(zs.iter().map(|z| z.re).collect()), mid(zs.iter().map(|z| z.im).collect()))
}

/// Central eigenvalues of a square polynomial matrix, found as atoms of the
/// spectral distribution of `P(X)` at a random tuple and then certified.
///
/// With `D = N·d` eigenvalues, a candidate is a disc of diameter
/// `4/√D` holding at least `0.6·d` of them. Candidates are snapped to
/// Gaussian rationals and tested through `ρ(P − λ) < N`.
pub fn central_eigs_polymatrix(p: &NcMatrix) -> Result<SpectrumReport> {
    central_eigs_polymatrix_with(p, &SpectraConfig::default())
}

pub fn central_eigs_polymatrix_with(p: &NcMatrix, cfg: &SpectraConfig) -> Result<SpectrumReport> {
    let n = require_square(p)?;
    if p.has_star() {
        return Err(Error::InvalidArgument(
            "spectral detection needs a matrix without starred letters".into(),
        ));
    }
    let mut report = SpectrumReport::new(n, CandidateSource::NumericDetection);
    let model = MatrixModel::sample(cfg.kind, cfg.d, p.n_vars(), cfg.seed)?;
    let m = p.evaluate(&model)?;
    let nd = linalg::normality_defect(&m);
    report.diagnostics.normality_defect = Some(nd);
    if nd > NORMALITY_TOL {
        report.diagnostics.warnings.push(format!(
            "evaluated matrix is not normal (defect {nd:.2e}); atom masses describe the rank, not the spectral measure"
        ));
    }
    let esd = Esd::from_matrix(&m, n, cfg.d, 1)?;
    let total = (n * cfg.d) as f64;
    let clusters = detect_clusters(&esd.eigenvalues.as_complex(), 4.0 / total.sqrt(), (0.6 * cfg.d as f64).ceil() as usize);

    let mut exact: Vec<(ExactScalar, Cluster)> = Vec::new();
    for c in clusters {
        match ExactScalar::snap(c.center, cfg.snap_denominator, cfg.snap_tolerance) {
            Some(l) if !exact.iter().any(|(x, _)| x == &l) => exact.push((l, c)),
            Some(_) => {}
            None => report.uncertified.push(Candidate {
                re: c.center.re,
                im: c.center.im,
                cluster_size: c.size,
                reason: "no Gaussian rational nearby".into(),
                rho_estimate: float_shift_rank(p, c.center, cfg),
            }),
        }
    }
    let outcomes: Vec<Result<RankResult>> = exact.par_iter().map(|(l, _)| rank_of(&p.shift(l)?, cfg)).collect();
    for ((l, c), outcome) in exact.into_iter().zip(outcomes) {
        match outcome {
            Ok(r) if r.rho < n => report.atoms.push(Atom {
                mass: mass(n, r.rho),
                lambda: l,
                rho: r.rho,
                certified: cfg.certify,
            }),
            Ok(_) => report.diagnostics.rejected.push(l.to_string()),
            Err(e @ (Error::NoConsensus(_) | Error::Inconclusive { .. } | Error::Disagreement(_))) => {
                report.uncertified.push(Candidate {
                    re: c.center.re,
                    im: c.center.im,
                    cluster_size: c.size,
                    reason: e.to_string(),
                    rho_estimate: None,
                })
            }
            Err(e) => return Err(e),
        }
    }
    report.finish()
}

/// Entropy dimension `1 − Σ (N − ρ(P − λ))² / N²`.
///
/// Fails with `UncertifiedCandidates` when some numeric atom could not be
/// settled.
pub fn entropy_dimension(p: &NcMatrix) -> Result<Rational64> {
    entropy_dimension_with(p, &SpectraConfig::default())
}

pub fn entropy_dimension_with(p: &NcMatrix, cfg: &SpectraConfig) -> Result<Rational64> {
    let report = central_eigs_polymatrix_with(p, cfg)?;
    report
        .entropy_dimension
        .ok_or(Error::UncertifiedCandidates(report.uncertified.len()))
}

/// Best constants of `c₁·tr(b)·1 ≤ L(b) ≤ c₂·tr(b)·1` over rank-one
/// projectors onto `eᵢ`, `(eᵢ+eⱼ)/√2` and `(eᵢ+i·eⱼ)/√2`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Flatness {
    pub c1: f64,
    pub c2: f64,
}

impl Flatness {
    pub fn is_flat(&self) -> bool {
        self.c1 > 0.0
    }
}

/// Informational flatness diagnostic for the homogeneous part of a pencil.
pub fn flatness(pencil: &LinearPencil) -> Result<Flatness> {
    let h = pencil.homogeneous_part();
    let n = h.nrows();
    let mut vectors: Vec<Vec<c64>> = Vec::new();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        let mut e = vec![c64::new(0.0, 0.0); n];
        e[i] = c64::new(1.0, 0.0);
        vectors.push(e);
        for j in i + 1..n {
            for phase in [c64::new(s, 0.0), c64::new(0.0, s)] {
                let mut v = vec![c64::new(0.0, 0.0); n];
                v[i] = c64::new(s, 0.0);
                v[j] = phase;
                vectors.push(v);
            }
        }
    }
    let (mut c1, mut c2) = (f64::INFINITY, 0.0_f64);
    for v in vectors {
        let b = CMat::from_fn(n, n, |i, j| v[i] * v[j].conj());
        let lb = quantum_op_apply(&h, &b)?;
        let ev = linalg::hermitian_eigenvalues(&lb)?;
        c1 = c1.min(ev[0]);
        c2 = c2.max(ev[ev.len() - 1]);
    }
    Ok(Flatness { c1: c1.max(0.0), c2 })
}
