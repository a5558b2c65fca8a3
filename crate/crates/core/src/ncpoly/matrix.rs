use std::fmt;

use crate::error::{Error, Result};
use crate::exact::ExactMatrix;
use crate::linalg::CMat;
use crate::scalar::ExactScalar;

use super::NcPoly;

/// A dense `rows × cols` matrix over the free algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NcMatrix {
    rows: usize,
    cols: usize,
    n_vars: usize,
    entries: Vec<NcPoly>,
}

impl NcMatrix {
    pub fn zeros(rows: usize, cols: usize, n_vars: usize) -> Self {
        Self {
            rows,
            cols,
            n_vars,
            entries: vec![NcPoly::zero(n_vars); rows * cols],
        }
    }

    pub fn identity(n: usize, n_vars: usize) -> Self {
        let mut m = Self::zeros(n, n, n_vars);
        for i in 0..n {
            m.entries[i * n + i] = NcPoly::one(n_vars);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<NcPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::ShapeMismatch("matrix needs at least one entry".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        let n_vars = rows[0][0].n_vars();
        let entries: Vec<NcPoly> = rows.into_iter().flatten().collect();
        if let Some(p) = entries.iter().find(|p| p.n_vars() != n_vars) {
            return Err(Error::VariableCountMismatch {
                left: n_vars,
                right: p.n_vars(),
            });
        }
        Ok(Self {
            rows: r,
            cols: c,
            n_vars,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        n_vars: usize,
        mut f: impl FnMut(usize, usize) -> NcPoly,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let p = f(i, j);
                if p.n_vars() != n_vars {
                    return Err(Error::VariableCountMismatch {
                        left: n_vars,
                        right: p.n_vars(),
                    });
                }
                entries.push(p);
            }
        }
        Ok(Self {
            rows,
            cols,
            n_vars,
            entries,
        })
    }

    /// Scalar matrix embedded as constant polynomials.
    pub fn from_exact(m: &ExactMatrix, n_vars: usize) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), n_vars, |i, j| {
            NcPoly::constant(n_vars, m[(i, j)].clone())
        })
        .expect("constants share n_vars")
    }

    /// A 1×1 matrix.
    pub fn scalar(p: NcPoly) -> Self {
        Self {
            rows: 1,
            cols: 1,
            n_vars: p.n_vars(),
            entries: vec![p],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &NcPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: NcPoly) -> Result<()> {
        if p.n_vars() != self.n_vars {
            return Err(Error::VariableCountMismatch {
                left: self.n_vars,
                right: p.n_vars(),
            });
        }
        self.entries[i * self.cols + j] = p;
        Ok(())
    }

    pub fn entries(&self) -> &[NcPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(NcPoly::is_zero)
    }

    pub fn degree(&self) -> usize {
        self.entries.iter().map(NcPoly::degree).max().unwrap_or(0)
    }

    pub fn has_star(&self) -> bool {
        self.entries.iter().any(NcPoly::has_star)
    }

    /// Same matrix viewed in a larger variable set.
    pub fn with_n_vars(&self, n_vars: usize) -> Result<Self> {
        Self::from_fn(self.rows, self.cols, n_vars, |i, j| {
            self.get(i, j).with_n_vars(n_vars).expect("n_vars only grows")
        })
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::VariableCountMismatch {
                left: self.n_vars,
                right: other.n_vars,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::ShapeMismatch("matrix sum".into()));
        }
        Self::from_fn(self.rows, self.cols, self.n_vars, |i, j| {
            self.get(i, j) + other.get(i, j)
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Self::from_fn(self.rows, other.cols, self.n_vars, |i, j| {
            (0..self.cols).fold(NcPoly::zero(self.n_vars), |acc, k| {
                &acc + &(self.get(i, k) * other.get(k, j))
            })
        })
    }

    /// `U · self · V` for scalar matrices `U`, `V`.
    pub fn congruence(&self, u: &ExactMatrix, v: &ExactMatrix) -> Result<Self> {
        let left = Self::from_exact(u, self.n_vars);
        let right = Self::from_exact(v, self.n_vars);
        left.checked_mul(self)?.checked_mul(&right)
    }

    /// Conjugate transpose, entrywise adjoint.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.n_vars, |i, j| self.get(j, i).adjoint())
            .expect("same n_vars")
    }

    pub fn is_selfadjoint(&self) -> bool {
        self.is_square() && self.adjoint() == *self
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Self::from_fn(r, c, self.n_vars, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                NcPoly::zero(self.n_vars)
            }
        })
    }

    /// `self − λ·1`.
    pub fn shift(&self, lambda: &ExactScalar) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut out = self.clone();
        let shift = NcPoly::constant(self.n_vars, -lambda);
        for i in 0..self.rows {
            out.entries[i * self.cols + i] = self.get(i, i) + &shift;
        }
        Ok(out)
    }

    /// Pads with zero rows or columns to a square matrix; inner rank is unchanged.
    pub fn pad_square(&self) -> Self {
        let n = self.rows.max(self.cols);
        Self::from_fn(n, n, self.n_vars, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else {
                NcPoly::zero(self.n_vars)
            }
        })
        .expect("same n_vars")
    }

    /// Evaluates at one `d×d` matrix per variable, producing the
    /// `(rows·d) × (cols·d)` block matrix whose `(i, j)` block is `P_ij(X)`.
    pub fn evaluate_at(&self, mats: &[CMat], d: usize) -> Result<CMat> {
        let mut out = crate::linalg::zeros(self.rows * d, self.cols * d);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = self.get(i, j);
                if p.is_zero() {
                    continue;
                }
                let block = p.evaluate_at(mats, d)?;
                out.as_mut()
                    .submatrix_mut(i * d, j * d, d, d)
                    .copy_from(block.as_ref());
            }
        }
        Ok(out)
    }

    /// Evaluates at a sampled matrix model.
    pub fn evaluate(&self, model: &crate::randmat::MatrixModel) -> Result<CMat> {
        if model.n_vars() < self.n_vars {
            return Err(Error::VariableCountMismatch {
                left: self.n_vars,
                right: model.n_vars(),
            });
        }
        self.evaluate_at(model.matrices(), model.d())
    }
}

impl fmt::Display for NcMatrix {
    /// Rows separated by `;`, entries by `,` — the format accepted by
    /// [`crate::ratexpr::parse_matrix`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize, n: usize) -> NcPoly {
        NcPoly::var(n, i).unwrap()
    }

    #[test]
    fn direct_sum_and_shift() {
        let a = NcMatrix::scalar(x(1, 1));
        let z = NcMatrix::zeros(1, 1, 1);
        let d = a.direct_sum(&z).unwrap();
        assert_eq!(d.nrows(), 2);
        assert!(d.get(0, 1).is_zero());
        let s = d.shift(&ExactScalar::from_int(2)).unwrap();
        assert_eq!(s.get(1, 1), &NcPoly::constant(1, ExactScalar::from_int(-2)));
    }

    #[test]
    fn padding_keeps_entries() {
        let m = NcMatrix::from_rows(vec![vec![x(1, 2), x(2, 2)]]).unwrap();
        let p = m.pad_square();
        assert_eq!((p.nrows(), p.ncols()), (2, 2));
        assert_eq!(p.get(0, 1), &x(2, 2));
        assert!(p.get(1, 0).is_zero());
    }

    #[test]
    fn adjoint_of_matrix() {
        let m = NcMatrix::from_rows(vec![vec![x(1, 2), (&x(1, 2) * &x(2, 2)).scale(&ExactScalar::i())]]).unwrap();
        let a = m.adjoint();
        assert_eq!((a.nrows(), a.ncols()), (2, 1));
        assert_eq!(a.adjoint(), m);
    }
}
