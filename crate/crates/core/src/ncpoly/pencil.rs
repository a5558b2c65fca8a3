use crate::error::{Error, Result};
use crate::exact::ExactMatrix;
use crate::linalg::{self, CMat};
use crate::scalar::ExactScalar;

use super::{Letter, NcMatrix, NcPoly, Word};

/// `A₀ + A₁x₁ + ⋯ + Aₙxₙ` with exact scalar coefficient matrices.
///
/// `coeffs[0]` is the constant term and `coeffs[k]` multiplies `x_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearPencil {
    rows: usize,
    cols: usize,
    coeffs: Vec<ExactMatrix>,
}

impl LinearPencil {
    pub fn new(coeffs: Vec<ExactMatrix>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::ShapeMismatch("pencil needs a constant term".into()));
        };
        let (rows, cols) = first.shape();
        if rows == 0 || cols == 0 {
            return Err(Error::ShapeMismatch("empty pencil".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| c.shape() != (rows, cols)) {
            return Err(Error::ShapeMismatch(format!(
                "coefficient {:?} differs from {:?}",
                bad.shape(),
                (rows, cols)
            )));
        }
        Ok(Self { rows, cols, coeffs })
    }

    /// Homogeneous pencil `A₁x₁ + ⋯ + Aₙxₙ`.
    pub fn homogeneous(linear: Vec<ExactMatrix>) -> Result<Self> {
        let Some(first) = linear.first() else {
            return Err(Error::ShapeMismatch("no coefficients".into()));
        };
        let mut coeffs = vec![ExactMatrix::zeros(first.nrows(), first.ncols())];
        coeffs.extend(linear);
        Self::new(coeffs)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn coeffs(&self) -> &[ExactMatrix] {
        &self.coeffs
    }

    pub fn constant(&self) -> &ExactMatrix {
        &self.coeffs[0]
    }

    pub fn linear(&self) -> &[ExactMatrix] {
        &self.coeffs[1..]
    }

    pub fn is_homogeneous(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(ExactMatrix::is_zero)
    }

    /// The pencil with its constant term removed.
    pub fn homogeneous_part(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = ExactMatrix::zeros(self.rows, self.cols);
        Self {
            rows: self.rows,
            cols: self.cols,
            coeffs,
        }
    }

    /// Moves `A₀` onto a fresh variable placed first: the result is
    /// `A₀x₁ + A₁x₂ + ⋯ + Aₙx_{n+1}`.
    pub fn homogenize(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut coeffs = vec![ExactMatrix::zeros(self.rows, self.cols)];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    /// `self − λ·1`.
    pub fn shift(&self, lambda: &ExactScalar) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = coeffs[0].sub(&ExactMatrix::identity(self.rows).scale(lambda))?;
        Self::new(coeffs)
    }

    /// `U · self · V` coefficientwise.
    pub fn congruence(&self, u: &ExactMatrix, v: &ExactMatrix) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| u.mul(a)?.mul(v))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }

    /// Reads off the coefficient matrices of a matrix of degree ≤ 1.
    pub fn from_matrix(p: &NcMatrix) -> Result<Self> {
        let (rows, cols) = (p.nrows(), p.ncols());
        let mut coeffs = vec![ExactMatrix::zeros(rows, cols); p.n_vars() + 1];
        for i in 0..rows {
            for j in 0..cols {
                let e = p.get(i, j);
                if e.has_star() {
                    return Err(Error::StarredLetter { row: i, col: j });
                }
                if e.degree() > 1 {
                    return Err(Error::DegreeTooHigh {
                        row: i,
                        col: j,
                        degree: e.degree(),
                    });
                }
                for (w, c) in e.terms() {
                    let k = w.letters().first().map_or(0, |l| l.var);
                    coeffs[k][(i, j)] = c.clone();
                }
            }
        }
        Self::new(coeffs)
    }

    pub fn to_matrix(&self) -> NcMatrix {
        let n = self.n_vars();
        NcMatrix::from_fn(self.rows, self.cols, n, |i, j| {
            let terms = self.coeffs.iter().enumerate().map(|(k, a)| {
                let w = if k == 0 {
                    Word::unit()
                } else {
                    Word(vec![Letter::new(k)])
                };
                (w, a[(i, j)].clone())
            });
            NcPoly::from_terms(n, terms).expect("letters within range")
        })
        .expect("same n_vars")
    }

    /// `A₀ ⊗ 1 + Σ A_k ⊗ X_k`, with `mats[k-1]` substituted for `x_k`.
    pub fn evaluate_at(&self, mats: &[CMat], d: usize) -> Result<CMat> {
        if mats.len() < self.n_vars() {
            return Err(Error::VariableCountMismatch {
                left: self.n_vars(),
                right: mats.len(),
            });
        }
        let mut out = linalg::zeros(self.rows * d, self.cols * d);
        let eye = linalg::identity(d);
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let x = if k == 0 { &eye } else { &mats[k - 1] };
            linalg::add_kron_into(&mut out, &a.to_c64(), x);
        }
        Ok(out)
    }

    /// The blow-up `Σ A_k ⊗ X_k` at exact scalar matrices.
    pub fn evaluate_exact(&self, mats: &[ExactMatrix], d: usize) -> Result<ExactMatrix> {
        if mats.len() < self.n_vars() {
            return Err(Error::VariableCountMismatch {
                left: self.n_vars(),
                right: mats.len(),
            });
        }
        let mut out = ExactMatrix::zeros(self.rows * d, self.cols * d);
        let eye = ExactMatrix::identity(d);
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let x = if k == 0 { &eye } else { &mats[k - 1] };
            out = out.add(&a.kron(x))?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> NcPoly {
        NcPoly::var(2, i).unwrap()
    }

    #[test]
    fn coefficient_reading() {
        let m = NcMatrix::from_rows(vec![
            vec![x(1), NcPoly::zero(2)],
            vec![x(2), NcPoly::one(2)],
        ])
        .unwrap();
        let p = LinearPencil::from_matrix(&m).unwrap();
        assert_eq!(p.coeffs()[0], ExactMatrix::from_int_rows(&[&[0, 0], &[0, 1]]));
        assert_eq!(p.coeffs()[1], ExactMatrix::from_int_rows(&[&[1, 0], &[0, 0]]));
        assert_eq!(p.coeffs()[2], ExactMatrix::from_int_rows(&[&[0, 0], &[1, 0]]));
        assert_eq!(p.to_matrix(), m);
    }

    #[test]
    fn zero_matrix_gives_zero_coefficients() {
        let p = LinearPencil::from_matrix(&NcMatrix::zeros(2, 3, 2)).unwrap();
        assert_eq!(p.coeffs().len(), 3);
        assert!(p.is_zero());
    }

    #[test]
    fn guards() {
        let sq = NcMatrix::scalar(&x(1) * &x(1));
        assert!(matches!(
            LinearPencil::from_matrix(&sq),
            Err(Error::DegreeTooHigh { row: 0, col: 0, degree: 2 })
        ));
        let st = NcMatrix::scalar(NcPoly::letter(2, Letter::star(1)).unwrap());
        assert!(matches!(LinearPencil::from_matrix(&st), Err(Error::StarredLetter { .. })));
    }

    #[test]
    fn homogenize_moves_constant_first() {
        let m = NcMatrix::scalar(&NcPoly::one(1) + &NcPoly::var(1, 1).unwrap());
        let p = LinearPencil::from_matrix(&m).unwrap();
        let h = p.homogenize().unwrap();
        assert!(h.is_homogeneous());
        assert_eq!(h.n_vars(), 2);
        assert_eq!(h.coeffs()[1], ExactMatrix::from_int_rows(&[&[1]]));
        assert_eq!(h.coeffs()[2], ExactMatrix::from_int_rows(&[&[1]]));
    }
}
