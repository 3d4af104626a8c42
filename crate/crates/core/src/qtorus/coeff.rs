use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// An element of `Z[v, v^-1]`, stored sparsely as exponent -> nonzero coefficient.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VCoeff {
    terms: BTreeMap<i64, BigInt>,
}

impl VCoeff {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::v_pow(0)
    }

    /// The unit `v^e`.
    pub fn v_pow(e: i64) -> Self {
        Self::monomial(BigInt::one(), e)
    }

    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I, C>(it: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (e, c) in it {
            out.add_term(e, c.into());
        }
        out
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiplication by `v^e`.
    pub fn shift(&self, e: i64) -> Self {
        if e == 0 {
            return self.clone();
        }
        Self {
            terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// If this is `±v^a`, returns `(±1, a)`.
    pub fn as_unit(&self) -> Option<(i8, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if c.is_one() {
            Some((1, *e))
        } else if (-c).is_one() {
            Some((-1, *e))
        } else {
            None
        }
    }

    /// If this is `v^a` (sign +1), returns `a`.
    pub fn as_v_power(&self) -> Option<i64> {
        match self.as_unit() {
            Some((1, a)) => Some(a),
            _ => None,
        }
    }

    /// Inverse of a unit `±v^a`.
    pub fn unit_inverse(&self) -> Option<Self> {
        self.as_unit()
            .map(|(sgn, a)| Self::monomial(BigInt::from(sgn), -a))
    }

    /// Exact quotient in `Z[v, v^-1]`, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, d: &VCoeff) -> Option<VCoeff> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (de, dc) = d.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))?;
        // lowest exponent any quotient term can have
        let floor = self.min_exp()? - d.min_exp()?;
        let mut rem = self.clone();
        let mut q = Self::zero();
        while let Some((re, rc)) = rem.terms.iter().next_back().map(|(e, c)| (*e, c.clone())) {
            let qe = re - de;
            if qe < floor {
                return None;
            }
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let step = d.scale(&qc).shift(qe);
            rem -= &step;
            q.add_term(qe, qc);
        }
        Some(q)
    }

    /// True iff every exponent is at most -1, i.e. the element lies in `v^-1 Z[v^-1]`.
    pub fn in_m(&self) -> bool {
        self.terms.keys().all(|&e| e <= -1)
    }

    /// True iff every exponent lies in `[lo, hi]`. Vacuously true for zero.
    pub fn in_window(&self, lo: i64, hi: i64) -> bool {
        self.terms.keys().all(|&e| lo <= e && e <= hi)
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }
}

pub fn in_m(c: &VCoeff) -> bool {
    c.in_m()
}

pub fn in_window(c: &VCoeff, lo: i64, hi: i64) -> bool {
    c.in_window(lo, hi)
}

impl From<i64> for VCoeff {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl Add<&VCoeff> for &VCoeff {
    type Output = VCoeff;
    fn add(self, rhs: &VCoeff) -> VCoeff {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for VCoeff {
    type Output = VCoeff;
    fn add(mut self, rhs: VCoeff) -> VCoeff {
        self += &rhs;
        self
    }
}

impl AddAssign<&VCoeff> for VCoeff {
    fn add_assign(&mut self, rhs: &VCoeff) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&VCoeff> for VCoeff {
    fn sub_assign(&mut self, rhs: &VCoeff) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Sub<&VCoeff> for &VCoeff {
    type Output = VCoeff;
    fn sub(self, rhs: &VCoeff) -> VCoeff {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for VCoeff {
    type Output = VCoeff;
    fn sub(mut self, rhs: VCoeff) -> VCoeff {
        self -= &rhs;
        self
    }
}

impl Neg for &VCoeff {
    type Output = VCoeff;
    fn neg(self) -> VCoeff {
        VCoeff {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for VCoeff {
    type Output = VCoeff;
    fn neg(self) -> VCoeff {
        -&self
    }
}

impl Mul<&VCoeff> for &VCoeff {
    type Output = VCoeff;
    fn mul(self, rhs: &VCoeff) -> VCoeff {
        let mut out = VCoeff::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for VCoeff {
    type Output = VCoeff;
    fn mul(self, rhs: VCoeff) -> VCoeff {
        &self * &rhs
    }
}

/// Ascending exponents, e.g. `v^-1 + 2*v^3`; zero prints as `0`.
impl fmt::Display for VCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match (*e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "v")?,
                (1, false) => write!(f, "{a}*v")?,
                (e, true) => write!(f, "v^{e}")?,
                (e, false) => write!(f, "{a}*v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for VCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VCoeff({self})")
    }
}
