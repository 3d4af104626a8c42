use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::{ExpVec, VCoeff};
use crate::error::{Error, Result};

/// The skew form `lambda(g, g') = g^T Lambda g'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearForm {
    mat: Vec<Vec<i64>>,
}

impl BilinearForm {
    pub fn new(mat: Vec<Vec<i64>>) -> Self {
        Self { mat }
    }

    pub fn zero(n: usize) -> Self {
        Self { mat: vec![vec![0; n]; n] }
    }

    pub fn dim(&self) -> usize {
        self.mat.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.mat
    }

    pub fn is_skew(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| self.mat[i].len() == n && (0..n).all(|j| self.mat[i][j] == -self.mat[j][i]))
    }

    pub fn eval(&self, g: &ExpVec, h: &ExpVec) -> i64 {
        let mut acc = 0;
        for (i, row) in self.mat.iter().enumerate() {
            if g[i] == 0 {
                continue;
            }
            let r: i64 = row.iter().zip(h.iter()).map(|(a, b)| a * b).sum();
            acc += g[i] * r;
        }
        acc
    }

    /// `Lambda h`, so that `eval(g, h) = g . apply(h)`.
    pub fn apply(&self, h: &ExpVec) -> ExpVec {
        ExpVec(
            self.mat
                .iter()
                .map(|row| row.iter().zip(h.iter()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    pub fn negated(&self) -> Self {
        Self {
            mat: self.mat.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
        }
    }
}

/// Sparse element of the quantum torus, written in the commutative presentation
/// `sum c_m X^m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QTElem {
    dim: usize,
    terms: BTreeMap<ExpVec, VCoeff>,
}

impl QTElem {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(ExpVec::zero(dim))
    }

    pub fn monomial(m: ExpVec) -> Self {
        Self::term(m, VCoeff::one())
    }

    pub fn term(m: ExpVec, c: VCoeff) -> Self {
        let mut out = Self::zero(m.dim());
        out.add_term(m, c);
        out
    }

    pub fn from_terms<I>(dim: usize, it: I) -> Self
    where
        I: IntoIterator<Item = (ExpVec, VCoeff)>,
    {
        let mut out = Self::zero(dim);
        for (m, c) in it {
            assert_eq!(m.dim(), dim, "exponent has wrong dimension");
            out.add_term(m, c);
        }
        out
    }

    /// Convenience for tests and examples: unit-coefficient monomials from slices.
    pub fn from_exps(dim: usize, exps: &[&[i64]]) -> Self {
        Self::from_terms(dim, exps.iter().map(|e| (ExpVec::from_slice(e), VCoeff::one())))
    }

    pub fn add_term(&mut self, m: ExpVec, c: VCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += &c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExpVec, &VCoeff)> + '_ {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExpVec> + '_ {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &ExpVec) -> VCoeff {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn get(&self, m: &ExpVec) -> Option<&VCoeff> {
        self.terms.get(m)
    }

    /// Lexicographically largest term.
    pub fn lead(&self) -> Option<(&ExpVec, &VCoeff)> {
        self.terms.iter().next_back()
    }

    /// If this is a single term `c X^m`, return it.
    pub fn as_single_term(&self) -> Option<(&ExpVec, &VCoeff)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &VCoeff) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        let mut out = Self::zero(self.dim);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    /// Multiply every coefficient by `v^e`.
    pub fn shift_v(&self, e: i64) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.shift(e))).collect(),
        }
    }

    /// Multiply by the commutative monomial `X^m` (no v-twist).
    pub fn shift_exp(&self, m: &ExpVec) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, c)| (k + m, c.clone())).collect(),
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self + other)
    }

    pub fn checked_commutative_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.commutative_mul(other))
    }

    pub fn checked_twisted_mul(&self, other: &Self, form: &BilinearForm) -> Result<Self> {
        self.check_dim(other)?;
        if form.dim() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: form.dim() });
        }
        Ok(self.twisted_mul(other, form))
    }

    /// The product `X^m . X^m' = X^(m+m')`.
    pub fn commutative_mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = Self::zero(self.dim);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1 + m2, c1 * c2);
            }
        }
        out
    }

    /// The twisted product `X^m * X^m' = v^lambda(m,m') X^(m+m')`.
    pub fn twisted_mul(&self, other: &Self, form: &BilinearForm) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = Self::zero(self.dim);
        let rhs: Vec<(ExpVec, &ExpVec, &VCoeff)> =
            other.terms.iter().map(|(m, c)| (form.apply(m), m, c)).collect();
        for (m1, c1) in &self.terms {
            for (lm2, m2, c2) in &rhs {
                let tw = m1.dot(lm2);
                out.add_term(m1 + m2, (c1 * c2).shift(tw));
            }
        }
        out
    }

    /// Twisted power, `self^0 = 1`.
    pub fn twisted_pow(&self, k: u32, form: &BilinearForm) -> Self {
        let mut acc = Self::one(self.dim);
        for _ in 0..k {
            acc = acc.twisted_mul(self, form);
        }
        acc
    }

    /// `v -> v^-1` on coefficients of the commutative presentation.
    pub fn bar(&self) -> Self {
        Self {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.bar())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms.values().all(VCoeff::is_bar_invariant)
    }

    /// Apply a linear map to exponents: `X^m -> X^(A m)`, where `cols[i]` is the image of `f_i`.
    /// Terms landing on the same exponent are summed.
    pub fn map_exponents(&self, cols: &[ExpVec]) -> Self {
        let out_dim = cols.first().map_or(self.dim, ExpVec::dim);
        let mut out = Self::zero(out_dim);
        for (m, c) in &self.terms {
            let mut img = ExpVec::zero(out_dim);
            for (i, &mi) in m.iter().enumerate() {
                if mi != 0 {
                    img = &img + &cols[i].scaled(mi);
                }
            }
            out.add_term(img, c.clone());
        }
        out
    }
}

impl Add<&QTElem> for &QTElem {
    type Output = QTElem;
    fn add(self, rhs: &QTElem) -> QTElem {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub<&QTElem> for &QTElem {
    type Output = QTElem;
    fn sub(self, rhs: &QTElem) -> QTElem {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Add for QTElem {
    type Output = QTElem;
    fn add(self, rhs: QTElem) -> QTElem {
        &self + &rhs
    }
}

impl Sub for QTElem {
    type Output = QTElem;
    fn sub(self, rhs: QTElem) -> QTElem {
        &self - &rhs
    }
}

impl Neg for &QTElem {
    type Output = QTElem;
    fn neg(self) -> QTElem {
        QTElem {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for QTElem {
    type Output = QTElem;
    fn neg(self) -> QTElem {
        -&self
    }
}

/// Terms in ascending lex order, e.g. `X[-1,0] + (v^-1)*X[0,1]`.
impl fmt::Display for QTElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "X{m}")?;
            } else {
                write!(f, "({c})*X{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QTElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QTElem({self})")
    }
}
