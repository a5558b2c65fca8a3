//! Linear representations `r = u·A⁻¹·v` of rational expressions.
//!
//! The pencil `A` lives over the widened alphabet `x₁,…,xₙ,x₁*,…,xₙ*`:
//! pencil variable `n + i` stands for `xᵢ*`, and evaluation substitutes
//! `Xᵢ*` for it.

use faer::c64;

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;
use crate::linalg::{self, CMat};
use crate::ncpoly::LinearPencil;
use crate::randmat::MatrixModel;
use crate::ratexpr::RatExpr;
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRepresentation {
    n_vars: usize,
    u: ExactMatrix,
    pencil: LinearPencil,
    v: ExactMatrix,
}

impl LinearRepresentation {
    pub fn new(n_vars: usize, u: ExactMatrix, pencil: LinearPencil, v: ExactMatrix) -> Result<Self> {
        let k = pencil.nrows();
        if !pencil.is_square() || u.shape() != (1, k) || v.shape() != (k, 1) {
            return Err(Error::ShapeMismatch(format!(
                "representation needs u 1x{k}, square pencil, v {k}x1"
            )));
        }
        if pencil.n_vars() != 2 * n_vars {
            return Err(Error::VariableCountMismatch {
                left: 2 * n_vars,
                right: pencil.n_vars(),
            });
        }
        Ok(Self { n_vars, u, pencil, v })
    }

    pub fn dim(&self) -> usize {
        self.pencil.nrows()
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn u(&self) -> &ExactMatrix {
        &self.u
    }

    pub fn v(&self) -> &ExactMatrix {
        &self.v
    }

    /// The `k×k` pencil in `2n` letters.
    pub fn pencil(&self) -> &LinearPencil {
        &self.pencil
    }

    /// `A(X)` at the tuple `(X₁,…,Xₙ,X₁*,…,Xₙ*)`.
    pub fn pencil_at(&self, model: &MatrixModel) -> Result<CMat> {
        if model.n_vars() < self.n_vars {
            return Err(Error::VariableCountMismatch {
                left: self.n_vars,
                right: model.n_vars(),
            });
        }
        let mut mats: Vec<CMat> = model.matrices()[..self.n_vars].to_vec();
        mats.extend(mats.clone().iter().map(linalg::adjoint));
        self.pencil.evaluate_at(&mats, model.d())
    }
}

impl serde::Serialize for LinearRepresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LinearRepresentation", 4)?;
        st.serialize_field("k", &self.dim())?;
        st.serialize_field("u", &self.u)?;
        st.serialize_field("v", &self.v)?;
        st.serialize_field("pencil", &crate::cli::PencilFile::from_pencil(&self.pencil))?;
        st.end()
    }
}

fn letter_matrix(k: usize, i: usize, j: usize, c: ExactScalar) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(k, k);
    m[(i, j)] = c;
    m
}

fn block_diag(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let (r, c) = (a.nrows() + b.nrows(), a.ncols() + b.ncols());
    ExactMatrix::from_fn(r, c, |i, j| {
        if i < a.nrows() && j < a.ncols() {
            a[(i, j)].clone()
        } else if i >= a.nrows() && j >= a.ncols() {
            b[(i - a.nrows(), j - a.ncols())].clone()
        } else {
            ExactScalar::zero()
        }
    })
}

/// Builds a representation by structural recursion.
///
/// Sizes: constants 1, variables 2, sums and products add sizes, an
/// inverse adds one border row and column.
pub fn realize(e: &RatExpr, n_vars: usize) -> Result<LinearRepresentation> {
    if e.max_var() > n_vars {
        return Err(Error::VariableOutOfRange {
            index: e.max_var(),
            n_vars,
        });
    }
    let m = 2 * n_vars;
    match e {
        RatExpr::Const(c) => {
            let mut coeffs = vec![ExactMatrix::zeros(1, 1); m + 1];
            coeffs[0] = ExactMatrix::identity(1);
            LinearRepresentation::new(
                n_vars,
                ExactMatrix::identity(1),
                LinearPencil::new(coeffs)?,
                ExactMatrix::column(vec![c.clone()]),
            )
        }
        RatExpr::Var(i) => letter_rep(n_vars, *i),
        RatExpr::Adjoint(a) => {
            if let RatExpr::Var(i) = a.as_ref() {
                return letter_rep(n_vars, n_vars + i);
            }
            Ok(adjoint_rep(&realize(a, n_vars)?))
        }
        RatExpr::Neg(a) => {
            let r = realize(a, n_vars)?;
            Ok(LinearRepresentation {
                u: r.u.scale(&-ExactScalar::one()),
                ..r
            })
        }
        RatExpr::Add(a, b) => {
            let (r1, r2) = (realize(a, n_vars)?, realize(b, n_vars)?);
            let coeffs = r1
                .pencil
                .coeffs()
                .iter()
                .zip(r2.pencil.coeffs())
                .map(|(x, y)| block_diag(x, y))
                .collect();
            let u = ExactMatrix::hcat(&[&r1.u, &r2.u])?;
            let v = ExactMatrix::hcat(&[&r1.v.transpose(), &r2.v.transpose()])?.transpose();
            LinearRepresentation::new(n_vars, u, LinearPencil::new(coeffs)?, v)
        }
        RatExpr::Mul(a, b) => {
            let (r1, r2) = (realize(a, n_vars)?, realize(b, n_vars)?);
            let (k1, k2) = (r1.dim(), r2.dim());
            // [[A1, -v1 u2], [0, A2]]
            let coupling = r1.v.mul(&r2.u)?.scale(&-ExactScalar::one());
            let coeffs = r1
                .pencil
                .coeffs()
                .iter()
                .zip(r2.pencil.coeffs())
                .enumerate()
                .map(|(idx, (x, y))| {
                    let mut blk = block_diag(x, y);
                    if idx == 0 {
                        for i in 0..k1 {
                            for j in 0..k2 {
                                blk[(i, k1 + j)] = coupling[(i, j)].clone();
                            }
                        }
                    }
                    blk
                })
                .collect();
            let u = ExactMatrix::hcat(&[&r1.u, &ExactMatrix::zeros(1, k2)])?;
            let v = ExactMatrix::hcat(&[&ExactMatrix::zeros(1, k1), &r2.v.transpose()])?.transpose();
            LinearRepresentation::new(n_vars, u, LinearPencil::new(coeffs)?, v)
        }
        RatExpr::Inv(a) => {
            let r = realize(a, n_vars)?;
            let k = r.dim();
            // [[0, -u], [v, A]]; the (1,1) entry of its inverse is (uA⁻¹v)⁻¹
            let coeffs = r
                .pencil
                .coeffs()
                .iter()
                .enumerate()
                .map(|(idx, x)| {
                    ExactMatrix::from_fn(k + 1, k + 1, |i, j| match (i, j) {
                        (0, 0) => ExactScalar::zero(),
                        (0, j) if idx == 0 => -&r.u[(0, j - 1)],
                        (i, 0) if idx == 0 => r.v[(i - 1, 0)].clone(),
                        (0, _) | (_, 0) => ExactScalar::zero(),
                        (i, j) => x[(i - 1, j - 1)].clone(),
                    })
                })
                .collect();
            let e1 = ExactMatrix::from_fn(k + 1, 1, |i, _| {
                if i == 0 {
                    ExactScalar::one()
                } else {
                    ExactScalar::zero()
                }
            });
            LinearRepresentation::new(n_vars, e1.transpose(), LinearPencil::new(coeffs)?, e1)
        }
    }
}

/// `u = [1, 0]`, `A = [[1, -x], [0, 1]]`, `v = [0, 1]ᵀ`; `letter` indexes
/// the widened alphabet.
fn letter_rep(n_vars: usize, letter: usize) -> Result<LinearRepresentation> {
    let mut coeffs = vec![ExactMatrix::zeros(2, 2); 2 * n_vars + 1];
    coeffs[0] = ExactMatrix::identity(2);
    coeffs[letter] = letter_matrix(2, 0, 1, -ExactScalar::one());
    LinearRepresentation::new(
        n_vars,
        ExactMatrix::from_int_rows(&[&[1, 0]]),
        LinearPencil::new(coeffs)?,
        ExactMatrix::from_int_rows(&[&[0], &[1]]),
    )
}

/// `(v*, A*, u*)` where `A*` takes the conjugate transpose of every
/// coefficient and swaps each letter with its adjoint.
fn adjoint_rep(r: &LinearRepresentation) -> LinearRepresentation {
    let n = r.n_vars;
    let c = r.pencil.coeffs();
    let coeffs: Vec<ExactMatrix> = (0..=2 * n)
        .map(|idx| {
            let src = match idx {
                0 => 0,
                i if i <= n => i + n,
                i => i - n,
            };
            c[src].adjoint()
        })
        .collect();
    LinearRepresentation {
        n_vars: n,
        u: r.v.adjoint(),
        pencil: LinearPencil::new(coeffs).expect("same shapes"),
        v: r.u.adjoint(),
    }
}

/// Outcome of the numeric invertibility test for `A(X)`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct DomainReport {
    pub in_domain: bool,
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub threshold: f64,
    pub size: usize,
}

/// Default multiplier on `k·d·ε·‖A(X)‖₂`.
pub const DEFAULT_DOMAIN_FACTOR: f64 = 1.0;

/// `A(X)` is treated as invertible when
/// `σ_min > factor · k · d · ε · σ_max`.
pub fn domain_check(rep: &LinearRepresentation, model: &MatrixModel, factor: f64) -> Result<DomainReport> {
    let a = rep.pencil_at(model)?;
    domain_of(&a, rep.dim(), model.d(), factor)
}

fn domain_of(a: &CMat, k: usize, d: usize, factor: f64) -> Result<DomainReport> {
    let sv = linalg::singular_values(a)?;
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let sigma_min = sv.last().copied().unwrap_or(0.0);
    let threshold = factor * (k * d) as f64 * f64::EPSILON * sigma_max;
    Ok(DomainReport {
        in_domain: sigma_min > threshold && sigma_max > 0.0,
        sigma_min,
        sigma_max,
        threshold,
        size: k * d,
    })
}

/// `(u ⊗ 1) · A(X)⁻¹ · (v ⊗ 1)`, a `d×d` matrix.
pub fn eval_rep(rep: &LinearRepresentation, model: &MatrixModel) -> Result<CMat> {
    eval_rep_with(rep, model, DEFAULT_DOMAIN_FACTOR)
}

pub fn eval_rep_with(rep: &LinearRepresentation, model: &MatrixModel, factor: f64) -> Result<CMat> {
    let d = model.d();
    let k = rep.dim();
    let a = rep.pencil_at(model)?;
    let report = domain_of(&a, k, d, factor)?;
    if !report.in_domain {
        return Err(Error::OutOfDomain {
            sigma_min: report.sigma_min,
            threshold: report.threshold,
        });
    }
    let v = rep.v.to_c64();
    let rhs = linalg::kron(&v, &linalg::identity(d));
    let y = linalg::solve(&a, &rhs);
    let u = rep.u.to_c64();
    let mut out = linalg::zeros(d, d);
    for j in 0..k {
        let c = u[(0, j)];
        if c == c64::new(0.0, 0.0) {
            continue;
        }
        for r in 0..d {
            for s in 0..d {
                out[(r, s)] += c * y[(j * d + r, s)];
            }
        }
    }
    Ok(out)
}
