//! The free algebra `C⟨x₁,…,xₙ⟩` with a formal involution, matrices over it,
//! and linear pencils.
//!
//! Variables are numbered from 1, matching the text syntax `x1, x2, …`.
//! A starred letter `xᵢ'` stands for the formal adjoint of `xᵢ`.

mod hollow;
mod matrix;
mod pencil;

pub use hollow::{hollow_check, HollowBlock};
pub use matrix::NcMatrix;
pub use pencil::LinearPencil;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};
use crate::scalar::ExactScalar;

/// One variable or its formal adjoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    /// 1-based variable index.
    pub var: usize,
    pub starred: bool,
}

impl Letter {
    pub fn new(var: usize) -> Self {
        Self { var, starred: false }
    }

    pub fn star(var: usize) -> Self {
        Self { var, starred: true }
    }

    pub fn adjoint(self) -> Self {
        Self {
            var: self.var,
            starred: !self.starred,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.var)?;
        if self.starred {
            write!(f, "'")?;
        }
        Ok(())
    }
}

/// A monomial; the empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Reversed word with every star flag toggled.
    pub fn adjoint(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.adjoint()).collect())
    }

    pub fn has_star(&self) -> bool {
        self.0.iter().any(|l| l.starred)
    }
}

/// Graded lexicographic: shorter words first, then letter by letter with
/// `x1 < x1' < x2 < …`.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A noncommutative polynomial with Gaussian-rational coefficients.
///
/// Zero coefficients are never stored, so the zero polynomial is the empty
/// map and structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NcPoly {
    n_vars: usize,
    terms: BTreeMap<Word, ExactScalar>,
}

impl NcPoly {
    pub fn zero(n_vars: usize) -> Self {
        Self {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: ExactScalar) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(Word::unit(), c);
        p
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, ExactScalar::one())
    }

    /// The variable `x_var` (1-based).
    pub fn var(n_vars: usize, var: usize) -> Result<Self> {
        Self::letter(n_vars, Letter::new(var))
    }

    pub fn letter(n_vars: usize, letter: Letter) -> Result<Self> {
        if letter.var == 0 || letter.var > n_vars {
            return Err(Error::VariableOutOfRange {
                index: letter.var,
                n_vars,
            });
        }
        let mut p = Self::zero(n_vars);
        p.add_term(Word(vec![letter]), ExactScalar::one());
        Ok(p)
    }

    /// Builds a polynomial from `(word, coefficient)` pairs, merging repeats.
    pub fn from_terms(
        n_vars: usize,
        terms: impl IntoIterator<Item = (Word, ExactScalar)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n_vars);
        for (w, c) in terms {
            if let Some(l) = w.0.iter().find(|l| l.var == 0 || l.var > n_vars) {
                return Err(Error::VariableOutOfRange {
                    index: l.var,
                    n_vars,
                });
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, w: Word, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Same polynomial viewed in a larger variable set.
    pub fn with_n_vars(&self, n_vars: usize) -> Result<Self> {
        Self::from_terms(n_vars, self.terms.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Length of the longest word; 0 for constants and for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> ExactScalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> ExactScalar {
        self.coefficient(&Word::unit())
    }

    pub fn has_star(&self) -> bool {
        self.terms.keys().any(Word::has_star)
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
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    /// Free-algebra product: bilinear extension of word concatenation.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.n_vars);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-ExactScalar::one())
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    /// Anti-linear involution: conjugate coefficients, reverse words, toggle stars.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (w, c) in &self.terms {
            out.add_term(w.adjoint(), c.conj());
        }
        out
    }

    /// Numeric evaluation at `d×d` matrices, one per variable (1-based
    /// variable `k` reads `mats[k-1]`); starred letters use the conjugate
    /// transpose.
    pub fn evaluate_at(&self, mats: &[CMat], d: usize) -> Result<CMat> {
        if mats.len() < self.n_vars {
            return Err(Error::VariableCountMismatch {
                left: self.n_vars,
                right: mats.len(),
            });
        }
        let mut out = linalg::zeros(d, d);
        let mut adjoints: Vec<Option<CMat>> = vec![None; mats.len()];
        for (w, c) in &self.terms {
            let c = c.to_c64();
            if w.is_empty() {
                for i in 0..d {
                    out[(i, i)] += c;
                }
                continue;
            }
            let mut prod: Option<CMat> = None;
            for l in w.letters() {
                let m = if l.starred {
                    adjoints[l.var - 1].get_or_insert_with(|| linalg::adjoint(&mats[l.var - 1]))
                } else {
                    &mats[l.var - 1]
                };
                prod = Some(match prod {
                    None => m.clone(),
                    Some(p) => &p * m,
                });
            }
            let prod = prod.expect("nonempty word");
            out += linalg::scale(&prod, c);
        }
        Ok(out)
    }
}

impl std::ops::Add for &NcPoly {
    type Output = NcPoly;
    /// Panics on a variable-count mismatch; see [`NcPoly::checked_add`].
    fn add(self, rhs: &NcPoly) -> NcPoly {
        self.checked_add(rhs).expect("variable count mismatch")
    }
}

impl std::ops::Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        self.checked_sub(rhs).expect("variable count mismatch")
    }
}

impl std::ops::Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        self.checked_mul(rhs).expect("variable count mismatch")
    }
}

impl std::ops::Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly::neg(self)
    }
}

/// Sign-extractable coefficients print as `- x1` instead of `+ -1*x1`.
fn split_sign(c: &ExactScalar) -> (bool, ExactScalar) {
    use num_traits::Signed;
    let negative = if c.is_real() {
        c.re().is_negative()
    } else if c.re().is_zero() {
        c.im().is_negative()
    } else {
        false
    };
    if negative {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

fn fmt_coefficient(c: &ExactScalar) -> String {
    if !c.is_real() && !c.re().is_zero() {
        format!("({c})")
    } else {
        c.to_string()
    }
}

impl fmt::Display for NcPoly {
    /// Canonical text form, highest word first, e.g. `(3/2+1/2i)*x1*x2' + 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = split_sign(c);
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.is_empty() {
                write!(f, "{}", fmt_coefficient(&mag))?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{}*{w}", fmt_coefficient(&mag))?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for NcPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> NcPoly {
        NcPoly::var(2, i).unwrap()
    }

    #[test]
    fn additive_inverse_and_sum() {
        assert!((&x(1) + &x(1).neg()).is_zero());
        let s = &x(1) + &x(2);
        assert_eq!(s.n_terms(), 2);
        assert!(s.terms().all(|(_, c)| c.is_one()));
    }

    #[test]
    fn hand_expanded_sum() {
        let x1x2 = &x(1) * &x(2);
        let lhs = &(&x1x2 + &NcPoly::one(2)) + &x1x2;
        let expected = &x1x2.scale(&ExactScalar::from_int(2)) + &NcPoly::one(2);
        assert_eq!(lhs, expected);
    }

    #[test]
    fn product_is_noncommutative() {
        let a = &x(1) * &x(2);
        let b = &x(2) * &x(1);
        assert_ne!(a, b);
        assert_eq!(a.terms().next().unwrap().0, &Word(vec![Letter::new(1), Letter::new(2)]));
        assert_eq!(&NcPoly::one(2) * &a, a);
    }

    #[test]
    fn difference_of_squares() {
        let one = NcPoly::one(2);
        let p = &(&x(1) + &one) * &(&x(1) - &one);
        let expected = &(&x(1) * &x(1)) - &one;
        assert_eq!(p, expected);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn adjoint_examples() {
        let p = (&x(1) * &x(2)).scale(&ExactScalar::i());
        let expected = NcPoly::from_terms(
            2,
            [(Word(vec![Letter::star(2), Letter::star(1)]), -ExactScalar::i())],
        )
        .unwrap();
        assert_eq!(p.adjoint(), expected);
        let xs = NcPoly::letter(2, Letter::star(1)).unwrap();
        assert_eq!(xs.adjoint().adjoint(), xs);
        assert_eq!(xs.adjoint(), x(1));
        let sa = &x(1) + &xs;
        assert_eq!(sa.adjoint(), sa);
    }

    #[test]
    fn mismatched_variable_counts() {
        let a = NcPoly::var(1, 1).unwrap();
        let b = NcPoly::var(2, 1).unwrap();
        assert!(matches!(
            a.checked_add(&b),
            Err(Error::VariableCountMismatch { left: 1, right: 2 })
        ));
        assert!(a.checked_mul(&b).is_err());
        assert!(NcPoly::var(2, 3).is_err());
    }

    #[test]
    fn canonical_text() {
        let c = ExactScalar::from_fraction(3, 1, 2);
        let w = Word(vec![Letter::new(1), Letter::star(2)]);
        let p = NcPoly::from_terms(2, [(w, c), (Word::unit(), ExactScalar::one())]).unwrap();
        assert_eq!(p.to_string(), "(3/2+1/2i)*x1*x2' + 1");
        let q = &x(2).neg() + &NcPoly::constant(2, ExactScalar::from_int(-3));
        assert_eq!(q.to_string(), "-x2 - 3");
        assert_eq!(NcPoly::zero(2).to_string(), "0");
    }

    #[test]
    fn word_order_is_graded() {
        let short = Word(vec![Letter::new(2)]);
        let long = Word(vec![Letter::new(1), Letter::new(1)]);
        assert!(short < long);
        assert!(Word(vec![Letter::new(1)]) < Word(vec![Letter::star(1)]));
        assert!(Word(vec![Letter::star(1)]) < Word(vec![Letter::new(2)]));
    }
}
