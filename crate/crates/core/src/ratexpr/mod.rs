//! Noncommutative rational expressions.
//!
//! Expressions are kept exactly as written: no identity such as
//! `y(xy)⁻¹x = 1` is applied by rewriting. Whether two expressions define
//! the same rational function is decided downstream by evaluation.

mod parser;

pub use parser::{infer_n_vars, parse, parse_matrix, parse_poly};

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::ncpoly::{Letter, NcPoly};
use crate::scalar::ExactScalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RatExpr {
    Const(ExactScalar),
    /// 1-based variable index.
    Var(usize),
    Adjoint(Box<RatExpr>),
    Neg(Box<RatExpr>),
    Inv(Box<RatExpr>),
    Add(Box<RatExpr>, Box<RatExpr>),
    Mul(Box<RatExpr>, Box<RatExpr>),
}

impl RatExpr {
    pub fn constant(c: impl Into<ExactScalar>) -> Self {
        RatExpr::Const(c.into())
    }

    pub fn var(i: usize) -> Self {
        RatExpr::Var(i)
    }

    pub fn adjoint_of(e: RatExpr) -> Self {
        RatExpr::Adjoint(Box::new(e))
    }

    pub fn neg(e: RatExpr) -> Self {
        RatExpr::Neg(Box::new(e))
    }

    pub fn inv(e: RatExpr) -> Self {
        RatExpr::Inv(Box::new(e))
    }

    pub fn add(a: RatExpr, b: RatExpr) -> Self {
        RatExpr::Add(Box::new(a), Box::new(b))
    }

    pub fn mul(a: RatExpr, b: RatExpr) -> Self {
        RatExpr::Mul(Box::new(a), Box::new(b))
    }

    /// Largest variable index used, 0 if none.
    pub fn max_var(&self) -> usize {
        match self {
            RatExpr::Const(_) => 0,
            RatExpr::Var(i) => *i,
            RatExpr::Adjoint(a) | RatExpr::Neg(a) | RatExpr::Inv(a) => a.max_var(),
            RatExpr::Add(a, b) | RatExpr::Mul(a, b) => a.max_var().max(b.max_var()),
        }
    }

    /// Number of `Const` and `Var` nodes.
    pub fn leaves(&self) -> usize {
        match self {
            RatExpr::Const(_) | RatExpr::Var(_) => 1,
            RatExpr::Adjoint(a) | RatExpr::Neg(a) | RatExpr::Inv(a) => a.leaves(),
            RatExpr::Add(a, b) | RatExpr::Mul(a, b) => a.leaves() + b.leaves(),
        }
    }

    pub fn inv_count(&self) -> usize {
        match self {
            RatExpr::Const(_) | RatExpr::Var(_) => 0,
            RatExpr::Inv(a) => 1 + a.inv_count(),
            RatExpr::Adjoint(a) | RatExpr::Neg(a) => a.inv_count(),
            RatExpr::Add(a, b) | RatExpr::Mul(a, b) => a.inv_count() + b.inv_count(),
        }
    }

    /// Whether any variable appears under an adjoint.
    pub fn has_adjoint(&self) -> bool {
        match self {
            RatExpr::Const(_) | RatExpr::Var(_) => false,
            RatExpr::Adjoint(_) => true,
            RatExpr::Neg(a) | RatExpr::Inv(a) => a.has_adjoint(),
            RatExpr::Add(a, b) | RatExpr::Mul(a, b) => a.has_adjoint() || b.has_adjoint(),
        }
    }
}

/// Structural adjoint with the star pushed down to the variables: sums map
/// to sums, products reverse, inverses commute with the star and constants
/// are conjugated.
pub fn expr_adjoint(e: &RatExpr) -> RatExpr {
    match e {
        RatExpr::Const(c) => RatExpr::Const(c.conj()),
        RatExpr::Var(i) => RatExpr::adjoint_of(RatExpr::Var(*i)),
        RatExpr::Adjoint(a) => normalize(a),
        RatExpr::Neg(a) => RatExpr::neg(expr_adjoint(a)),
        RatExpr::Inv(a) => RatExpr::inv(expr_adjoint(a)),
        RatExpr::Add(a, b) => RatExpr::add(expr_adjoint(a), expr_adjoint(b)),
        RatExpr::Mul(a, b) => RatExpr::mul(expr_adjoint(b), expr_adjoint(a)),
    }
}

/// Removes `Adjoint` nodes everywhere except directly above a variable.
pub fn normalize(e: &RatExpr) -> RatExpr {
    match e {
        RatExpr::Const(_) | RatExpr::Var(_) => e.clone(),
        RatExpr::Adjoint(a) => expr_adjoint(a),
        RatExpr::Neg(a) => RatExpr::neg(normalize(a)),
        RatExpr::Inv(a) => RatExpr::inv(normalize(a)),
        RatExpr::Add(a, b) => RatExpr::add(normalize(a), normalize(b)),
        RatExpr::Mul(a, b) => RatExpr::mul(normalize(a), normalize(b)),
    }
}

/// The expanded polynomial when the expression has no inverse.
pub fn is_polynomial(e: &RatExpr, n_vars: usize) -> Option<NcPoly> {
    to_poly(e, n_vars).ok().flatten()
}

fn to_poly(e: &RatExpr, n: usize) -> Result<Option<NcPoly>> {
    Ok(Some(match e {
        RatExpr::Const(c) => NcPoly::constant(n, c.clone()),
        RatExpr::Var(i) => NcPoly::letter(n, Letter::new(*i))?,
        RatExpr::Adjoint(a) => match to_poly(a, n)? {
            Some(p) => p.adjoint(),
            None => return Ok(None),
        },
        RatExpr::Neg(a) => match to_poly(a, n)? {
            Some(p) => p.neg(),
            None => return Ok(None),
        },
        RatExpr::Inv(_) => return Ok(None),
        RatExpr::Add(a, b) | RatExpr::Mul(a, b) => {
            let (Some(p), Some(q)) = (to_poly(a, n)?, to_poly(b, n)?) else {
                return Ok(None);
            };
            if matches!(e, RatExpr::Add(..)) {
                p.checked_add(&q)?
            } else {
                p.checked_mul(&q)?
            }
        }
    }))
}

/// Direct numeric evaluation of the tree at `d×d` matrices, inverting
/// every `Inv` node with an LU solve. Fails with `OutOfDomain` when an
/// inverted matrix is numerically singular.
pub fn eval_numeric(e: &RatExpr, mats: &[CMat], d: usize) -> Result<CMat> {
    match e {
        RatExpr::Const(c) => Ok(linalg::scale(&linalg::identity(d), c.to_c64())),
        RatExpr::Var(i) => mats
            .get(i.wrapping_sub(1))
            .cloned()
            .ok_or(Error::VariableOutOfRange {
                index: *i,
                n_vars: mats.len(),
            }),
        RatExpr::Adjoint(a) => Ok(linalg::adjoint(&eval_numeric(a, mats, d)?)),
        RatExpr::Neg(a) => Ok(-eval_numeric(a, mats, d)?),
        RatExpr::Inv(a) => {
            let m = eval_numeric(a, mats, d)?;
            let sv = linalg::singular_values(&m)?;
            let (top, bottom) = (sv[0], sv[sv.len() - 1]);
            let threshold = d as f64 * f64::EPSILON * top;
            if !(bottom > threshold) {
                return Err(Error::OutOfDomain {
                    sigma_min: bottom,
                    threshold,
                });
            }
            Ok(linalg::inverse(&m))
        }
        RatExpr::Add(a, b) => Ok(eval_numeric(a, mats, d)? + eval_numeric(b, mats, d)?),
        RatExpr::Mul(a, b) => Ok(eval_numeric(a, mats, d)? * eval_numeric(b, mats, d)?),
    }
}

const SUM: u8 = 0;
const PRODUCT: u8 = 1;
const UNARY: u8 = 2;

fn fmt_const(c: &ExactScalar, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if !c.is_real() && !c.re().is_zero() {
        write!(f, "({c})")
    } else {
        write!(f, "{c}")
    }
}

fn fmt_at(e: &RatExpr, level: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let wrap = match e {
        RatExpr::Add(..) => level > SUM,
        RatExpr::Mul(..) => level > PRODUCT,
        _ => false,
    };
    if wrap {
        write!(f, "(")?;
    }
    match e {
        RatExpr::Const(c) => fmt_const(c, f)?,
        RatExpr::Var(i) => write!(f, "x{i}")?,
        RatExpr::Inv(a) => {
            write!(f, "inv(")?;
            fmt_at(a, SUM, f)?;
            write!(f, ")")?;
        }
        RatExpr::Adjoint(a) => {
            match a.as_ref() {
                RatExpr::Var(_) | RatExpr::Inv(_) | RatExpr::Adjoint(_) => fmt_at(a, UNARY, f)?,
                other => {
                    write!(f, "(")?;
                    fmt_at(other, SUM, f)?;
                    write!(f, ")")?;
                }
            }
            write!(f, "'")?;
        }
        RatExpr::Neg(a) => {
            write!(f, "-")?;
            if let RatExpr::Const(c) = a.as_ref() {
                // parenthesized so it does not read back as a negative literal
                write!(f, "(")?;
                fmt_const(c, f)?;
                write!(f, ")")?;
            } else {
                fmt_at(a, UNARY, f)?;
            }
        }
        RatExpr::Add(a, b) => {
            fmt_at(a, SUM, f)?;
            write!(f, " + ")?;
            fmt_at(b, PRODUCT, f)?;
        }
        RatExpr::Mul(a, b) => {
            fmt_at(a, PRODUCT, f)?;
            write!(f, "*")?;
            fmt_at(b, UNARY, f)?;
        }
    }
    if wrap {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for RatExpr {
    /// Canonical text that [`parse`] reads back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_at(self, SUM, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randmat::{MatrixModel, ModelKind};

    fn x(i: usize) -> RatExpr {
        RatExpr::var(i)
    }

    #[test]
    fn adjoint_of_variable_and_product() {
        assert_eq!(expr_adjoint(&x(1)), RatExpr::adjoint_of(x(1)));
        let p = RatExpr::mul(x(1), x(2));
        assert_eq!(
            expr_adjoint(&p),
            RatExpr::mul(RatExpr::adjoint_of(x(2)), RatExpr::adjoint_of(x(1)))
        );
    }

    #[test]
    fn adjoint_of_inverse_of_selfadjoint_sum() {
        let e = RatExpr::inv(RatExpr::add(x(1), RatExpr::adjoint_of(x(1))));
        let expected = RatExpr::inv(RatExpr::add(RatExpr::adjoint_of(x(1)), x(1)));
        assert_eq!(expr_adjoint(&e), expected);
        assert_eq!(expr_adjoint(&expr_adjoint(&e)), normalize(&e));
    }

    #[test]
    fn polynomial_bridge() {
        let e = parse("x1*x2+1", 2).unwrap();
        assert_eq!(is_polynomial(&e, 2).unwrap().n_terms(), 2);
        assert!(is_polynomial(&parse("inv(x1)", 1).unwrap(), 1).is_none());
        let sq = is_polynomial(&parse("(x1+1)*(x1-1)", 1).unwrap(), 1).unwrap();
        let one = NcPoly::one(1);
        let x1 = NcPoly::var(1, 1).unwrap();
        assert_eq!(sq, &(&x1 * &x1) - &one);
    }

    #[test]
    fn numeric_matches_polynomial() {
        let e = parse("x1*x2' - (2+3i)*x2*x2 + x1'", 2).unwrap();
        let p = is_polynomial(&e, 2).unwrap();
        let model = MatrixModel::sample(ModelKind::Ginibre, 12, 2, 4).unwrap();
        let a = eval_numeric(&e, model.matrices(), 12).unwrap();
        let b = p.evaluate_at(model.matrices(), 12).unwrap();
        assert!(linalg::max_abs(&(&a - &b)) < 1e-12);
    }

    #[test]
    fn singular_inverse_is_out_of_domain() {
        let e = parse("inv(x1)", 1).unwrap();
        let z = linalg::zeros(3, 3);
        assert!(matches!(eval_numeric(&e, &[z], 3), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn counts() {
        let e = parse("x2*inv(x1*x2)*x1", 2).unwrap();
        assert_eq!(e.leaves(), 4);
        assert_eq!(e.inv_count(), 1);
        assert_eq!(e.max_var(), 2);
    }
}
