use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

/// Integer exponent vector in `Z^I`. Ordered lexicographically by entries, which is the
/// term order used by division.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExpVec(pub Vec<i64>);

impl ExpVec {
    pub fn zero(n: usize) -> Self {
        ExpVec(vec![0; n])
    }

    /// The unit vector `f_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExpVec(v)
    }

    pub fn from_slice(s: &[i64]) -> Self {
        ExpVec(s.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn scaled(&self, c: i64) -> Self {
        ExpVec(self.0.iter().map(|x| x * c).collect())
    }

    /// Componentwise `[x]_+`.
    pub fn pos_part(&self) -> Self {
        ExpVec(self.0.iter().map(|&x| x.max(0)).collect())
    }

    pub fn dot(&self, other: &ExpVec) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, i64> {
        self.0.iter()
    }
}

impl From<Vec<i64>> for ExpVec {
    fn from(v: Vec<i64>) -> Self {
        ExpVec(v)
    }
}

impl Index<usize> for ExpVec {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for ExpVec {
    fn index_mut(&mut self, i: usize) -> &mut i64 {
        &mut self.0[i]
    }
}

impl Add<&ExpVec> for &ExpVec {
    type Output = ExpVec;
    fn add(self, rhs: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        ExpVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&ExpVec> for &ExpVec {
    type Output = ExpVec;
    fn sub(self, rhs: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.dim(), rhs.dim());
        ExpVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for ExpVec {
    type Output = ExpVec;
    fn add(self, rhs: ExpVec) -> ExpVec {
        &self + &rhs
    }
}

impl Sub for ExpVec {
    type Output = ExpVec;
    fn sub(self, rhs: ExpVec) -> ExpVec {
        &self - &rhs
    }
}

impl Neg for &ExpVec {
    type Output = ExpVec;
    fn neg(self) -> ExpVec {
        ExpVec(self.0.iter().map(|x| -x).collect())
    }
}

impl Neg for ExpVec {
    type Output = ExpVec;
    fn neg(self) -> ExpVec {
        -&self
    }
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
