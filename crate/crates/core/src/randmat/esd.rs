use std::f64::consts::PI;

use faer::c64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::ncpoly::NcMatrix;

use super::MatrixModel;

/// Relative Hermitian defect below which the real eigenvalue path is used.
const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
#[serde(tag = "kind", content = "values", rename_all = "snake_case")]
pub enum Eigenvalues {
    Real(Vec<f64>),
    Complex(Vec<(f64, f64)>),
}

impl Eigenvalues {
    pub fn len(&self) -> usize {
        match self {
            Eigenvalues::Real(v) => v.len(),
            Eigenvalues::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_complex(&self) -> Vec<c64> {
        match self {
            Eigenvalues::Real(v) => v.iter().map(|&x| c64::new(x, 0.0)).collect(),
            Eigenvalues::Complex(v) => v.iter().map(|&(re, im)| c64::new(re, im)).collect(),
        }
    }
}

/// Equal-width bins over the real parts; `mass` sums to 1.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub mass: Vec<f64>,
}

impl Histogram {
    fn build(values: &[f64], bins: usize) -> Self {
        let bins = bins.max(1);
        if values.is_empty() {
            return Self {
                edges: vec![0.0; bins + 1],
                mass: vec![0.0; bins],
            };
        }
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = if hi - lo < 1e-12 { (lo - 0.5, hi + 0.5) } else { (lo, hi) };
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|k| lo + width * k as f64).collect();
        let mut counts = vec![0usize; bins];
        for &x in values {
            let k = (((x - lo) / width) as usize).min(bins - 1);
            counts[k] += 1;
        }
        let total = values.len() as f64;
        Self {
            edges,
            mass: counts.into_iter().map(|c| c as f64 / total).collect(),
        }
    }
}

/// Empirical spectral distribution of an `(N·d) × (N·d)` evaluated matrix.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Esd {
    pub eigenvalues: Eigenvalues,
    pub histogram: Histogram,
    pub d: usize,
    pub n: usize,
    pub hermitian: bool,
}

impl Esd {
    /// Builds the ESD of a square matrix made of `n × n` blocks of size `d`.
    pub fn from_matrix(m: &CMat, n: usize, d: usize, bins: usize) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.nrows() != n * d {
            return Err(Error::ShapeMismatch(format!(
                "matrix of size {} is not {n} blocks of {d}",
                m.nrows()
            )));
        }
        let hermitian = linalg::hermitian_defect(m) <= HERMITIAN_TOL;
        let eigenvalues = if hermitian {
            let h = CMat::from_fn(m.nrows(), m.ncols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
            Eigenvalues::Real(linalg::hermitian_eigenvalues(&h)?)
        } else {
            let mut ev = linalg::eigenvalues(m)?;
            ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
            Eigenvalues::Complex(ev.into_iter().map(|z| (z.re, z.im)).collect())
        };
        let reals: Vec<f64> = eigenvalues.as_complex().iter().map(|z| z.re).collect();
        Ok(Self {
            histogram: Histogram::build(&reals, bins),
            eigenvalues,
            d,
            n,
            hermitian,
        })
    }

    /// Fraction of eigenvalues within `radius` of `lambda`.
    pub fn mass_near(&self, lambda: c64, radius: f64) -> f64 {
        let ev = self.eigenvalues.as_complex();
        if ev.is_empty() {
            return 0.0;
        }
        let hits = ev.iter().filter(|z| (**z - lambda).norm() <= radius).count();
        hits as f64 / ev.len() as f64
    }

    /// Kolmogorov distance between the empirical CDF of the real
    /// eigenvalues and the standard semicircle law on `[-2, 2]`.
    pub fn kolmogorov_to_semicircle(&self) -> f64 {
        let mut xs: Vec<f64> = self.eigenvalues.as_complex().iter().map(|z| z.re).collect();
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(k, &x)| {
                let f = semicircle_cdf(x);
                (f - k as f64 / n).abs().max((f - (k + 1) as f64 / n).abs())
            })
            .fold(0.0, f64::max)
    }

    /// One eigenvalue per line; complex values as `re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.eigenvalues {
            Eigenvalues::Real(v) => {
                out.push_str("eigenvalue\n");
                for x in v {
                    out.push_str(&format!("{x:.17e}\n"));
                }
            }
            Eigenvalues::Complex(v) => {
                out.push_str("re,im\n");
                for (re, im) in v {
                    out.push_str(&format!("{re:.17e},{im:.17e}\n"));
                }
            }
        }
        out
    }
}

pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        return 0.0;
    }
    if x >= 2.0 {
        return 1.0;
    }
    0.5 + x * (4.0 - x * x).sqrt() / (4.0 * PI) + (x / 2.0).asin() / PI
}

/// ESD of `P(X)` for a square polynomial matrix.
pub fn esd(p: &NcMatrix, model: &MatrixModel, bins: usize) -> Result<Esd> {
    if !p.is_square() {
        return Err(Error::NotSquare {
            rows: p.nrows(),
            cols: p.ncols(),
        });
    }
    let m = p.evaluate(model)?;
    Esd::from_matrix(&m, p.nrows(), model.d(), bins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::NcPoly;
    use crate::randmat::ModelKind;
    use crate::scalar::ExactScalar;

    #[test]
    fn semicircle_cdf_endpoints() {
        assert_eq!(semicircle_cdf(-3.0), 0.0);
        assert!((semicircle_cdf(0.0) - 0.5).abs() < 1e-15);
        assert!((semicircle_cdf(2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_gives_point_mass() {
        let c = ExactScalar::from_int(3);
        let p = NcMatrix::scalar(NcPoly::constant(1, c));
        let model = MatrixModel::sample(ModelKind::Gue, 40, 1, 1).unwrap();
        let e = esd(&p, &model, 10).unwrap();
        assert_eq!(e.eigenvalues.len(), 40);
        assert!((e.mass_near(c64::new(3.0, 0.0), 1e-9) - 1.0).abs() < 1e-15);
        let total: f64 = e.histogram.mass.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_path() {
        let p = NcMatrix::scalar(NcPoly::var(1, 1).unwrap());
        let model = MatrixModel::sample(ModelKind::Ginibre, 30, 1, 2).unwrap();
        let e = esd(&p, &model, 8).unwrap();
        assert!(!e.hermitian);
        assert!(matches!(e.eigenvalues, Eigenvalues::Complex(_)));
    }
}
