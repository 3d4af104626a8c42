//! Quantum seeds `(B~, Lambda)` with skew-symmetrizer `D`, and their mutation.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::lattice::{self, IMat};
use crate::qtorus::{BilinearForm, ExpVec, QTElem};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuantumSeed {
    n: usize,
    unfrozen: Vec<usize>,
    /// `n x |unfrozen|`, column `c` belongs to vertex `unfrozen[c]`.
    b: IMat,
    lambda: IMat,
    d: Vec<i64>,
}

/// Outcome of the compatibility test `B~^T Lambda = (D 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compatibility {
    pub ok: bool,
    pub diagnostic: Option<String>,
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

impl QuantumSeed {
    /// Validates shapes only; see [`QuantumSeed::new`] for the full invariant.
    pub fn from_parts(n: usize, unfrozen: Vec<usize>, b: IMat, lambda: IMat, d: Vec<i64>) -> Result<Self> {
        let r = unfrozen.len();
        if unfrozen.iter().any(|&k| k >= n) {
            return Err(Error::Shape(format!("unfrozen vertex out of range 1..={n}")));
        }
        let mut sorted = unfrozen.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != r {
            return Err(Error::Shape("repeated unfrozen vertex".into()));
        }
        if b.len() != n || b.iter().any(|row| row.len() != r) {
            return Err(Error::Shape(format!("B must be {n} x {r}")));
        }
        if lambda.len() != n || lambda.iter().any(|row| row.len() != n) {
            return Err(Error::Shape(format!("Lambda must be {n} x {n}")));
        }
        if !BilinearForm::new(lambda.clone()).is_skew() {
            return Err(Error::Shape("Lambda is not skew-symmetric".into()));
        }
        if d.len() != r || d.iter().any(|&x| x <= 0) {
            return Err(Error::Shape(format!("D must have {r} positive entries")));
        }
        Ok(Self { n, unfrozen, b, lambda, d })
    }

    /// Shape checks plus full column rank and compatibility.
    pub fn new(n: usize, unfrozen: Vec<usize>, b: IMat, lambda: IMat, d: Vec<i64>) -> Result<Self> {
        let s = Self::from_parts(n, unfrozen, b, lambda, d)?;
        if lattice::rank(&s.b) < s.rank() {
            return Err(Error::NotFullRank);
        }
        let c = s.check_compatible();
        if !c.ok {
            return Err(Error::IncompatibleResult(c.diagnostic.unwrap_or_default()));
        }
        Ok(s)
    }

    /// Builds a seed from `B~` alone, synthesizing `Lambda` and `D`.
    pub fn with_synthesized_lambda(n: usize, unfrozen: Vec<usize>, b: IMat) -> Result<Self> {
        let (lambda, d) = find_compatible_lambda(n, &unfrozen, &b)?;
        Self::new(n, unfrozen, b, lambda, d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of unfrozen vertices.
    pub fn rank(&self) -> usize {
        self.unfrozen.len()
    }

    pub fn unfrozen(&self) -> &[usize] {
        &self.unfrozen
    }

    pub fn frozen(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.unfrozen.contains(i)).collect()
    }

    pub fn is_unfrozen(&self, i: usize) -> bool {
        self.unfrozen.contains(&i)
    }

    /// Column of `B~` belonging to vertex `k`.
    pub fn uf_pos(&self, k: usize) -> Option<usize> {
        self.unfrozen.iter().position(|&u| u == k)
    }

    pub fn b(&self) -> &IMat {
        &self.b
    }

    pub fn lambda(&self) -> &IMat {
        &self.lambda
    }

    pub fn d(&self) -> &[i64] {
        &self.d
    }

    /// `b_ik` for `i` in `I` and unfrozen vertex `k`.
    pub fn b_entry(&self, i: usize, k: usize) -> i64 {
        let c = self.uf_pos(k).expect("column vertex must be unfrozen");
        self.b[i][c]
    }

    /// Principal part `B`, indexed by positions in `unfrozen`.
    pub fn principal(&self) -> IMat {
        self.unfrozen.iter().map(|&i| self.b[i].clone()).collect()
    }

    pub fn form(&self) -> BilinearForm {
        BilinearForm::new(self.lambda.clone())
    }

    pub fn lambda_eval(&self, g: &ExpVec, h: &ExpVec) -> i64 {
        self.form().eval(g, h)
    }

    pub fn check_compatible(&self) -> Compatibility {
        let bt_l = lattice::mat_mul(&lattice::transpose(&self.b), &self.lambda);
        for (a, row) in bt_l.iter().enumerate() {
            for (l, &x) in row.iter().enumerate() {
                let want = if l == self.unfrozen[a] { self.d[a] } else { 0 };
                if x != want {
                    return Compatibility {
                        ok: false,
                        diagnostic: Some(format!(
                            "(B^T Lambda)[{},{}] = {x}, expected {want}",
                            self.unfrozen[a] + 1,
                            l + 1
                        )),
                    };
                }
            }
        }
        Compatibility { ok: true, diagnostic: None }
    }

    fn check_vertex(&self, k: usize) -> Result<usize> {
        if k >= self.n {
            return Err(Error::BadVertex(k));
        }
        self.uf_pos(k).ok_or(Error::NotUnfrozen(k))
    }

    /// Mutation `mu_k`. Lambda is mutated with both sign conventions and the results compared.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        let kc = self.check_vertex(k)?;
        let b = mutate_matrix(&self.b, &self.unfrozen, k, kc);

        let lam = |eps: i64| {
            let mut e = lattice::identity(self.n);
            for i in 0..self.n {
                e[i][k] = if i == k { -1 } else { pos(-eps * self.b[i][kc]) };
            }
            lattice::mat_mul(&lattice::mat_mul(&lattice::transpose(&e), &self.lambda), &e)
        };
        let plus = lam(1);
        if plus != lam(-1) {
            return Err(Error::IncompatibleResult(format!(
                "Lambda mutation at vertex {} depends on the sign convention",
                k + 1
            )));
        }
        let out = Self { n: self.n, unfrozen: self.unfrozen.clone(), b, lambda: plus, d: self.d.clone() };
        let c = out.check_compatible();
        if !c.ok {
            return Err(Error::IncompatibleResult(c.diagnostic.unwrap_or_default()));
        }
        Ok(out)
    }

    /// A mutation word after which the principal part has an entry pair with `|b_ij b_ji| >= 4`,
    /// which rules out finite type. At most `cap` distinct principal parts are visited.
    pub fn two_finite_obstruction(&self, cap: usize) -> Option<(Vec<usize>, i64)> {
        let r = self.rank();
        let square: Vec<usize> = (0..r).collect();
        let bad = |m: &IMat| {
            (0..r)
                .flat_map(|i| (0..r).map(move |j| (i, j)))
                .map(|(i, j)| (m[i][j] * m[j][i]).abs())
                .find(|&x| x >= 4)
        };
        let start = self.principal();
        let mut seen = std::collections::HashSet::from([start.clone()]);
        let mut queue = std::collections::VecDeque::from([(start, Vec::new())]);
        while let Some((m, word)) = queue.pop_front() {
            if let Some(x) = bad(&m) {
                return Some((word.iter().map(|&c| self.unfrozen[c]).collect(), x));
            }
            for c in 0..r {
                if word.last() == Some(&c) || seen.len() >= cap {
                    continue;
                }
                let next = mutate_matrix(&m, &square, c, c);
                if seen.insert(next.clone()) {
                    let mut w = word.clone();
                    w.push(c);
                    queue.push_back((next, w));
                }
            }
        }
        None
    }

    pub fn mutate_word(&self, word: &[usize]) -> Result<Self> {
        word.iter().try_fold(self.clone(), |s, &k| s.mutate(k))
    }

    /// `p* n = B~ n` for `n` supported on the unfrozen vertices (given as a length-`|I|` vector).
    pub fn p_star(&self, n: &ExpVec) -> Result<ExpVec> {
        if n.dim() != self.n {
            return Err(Error::DimensionMismatch { left: n.dim(), right: self.n });
        }
        if self.frozen().iter().any(|&i| n[i] != 0) {
            return Err(Error::SupportViolation(n.clone()));
        }
        let coords: Vec<i64> = self.unfrozen.iter().map(|&k| n[k]).collect();
        Ok(self.p_star_uf(&coords))
    }

    /// `B~ n` with `n` indexed by positions in `unfrozen`.
    pub fn p_star_uf(&self, n: &[i64]) -> ExpVec {
        ExpVec(lattice::mat_vec(&self.b, n))
    }

    /// `Y^n = X^(p* n)`.
    pub fn y_variable(&self, n: &ExpVec) -> Result<QTElem> {
        Ok(QTElem::monomial(self.p_star(n)?))
    }

    /// `iota(t) = (-B~, -Lambda)` with the same `D`.
    pub fn opposite(&self) -> Self {
        let neg = |m: &IMat| m.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
        Self {
            n: self.n,
            unfrozen: self.unfrozen.clone(),
            b: neg(&self.b),
            lambda: neg(&self.lambda),
            d: self.d.clone(),
        }
    }

    /// The same seed with vertices relabelled: new vertex `i` is old vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let inv = invert_perm(perm);
        let unfrozen: Vec<usize> = self.unfrozen.iter().map(|&u| inv[u]).collect();
        let b = perm
            .iter()
            .map(|&pi| unfrozen.iter().map(|&u| self.b_entry(pi, perm[u])).collect())
            .collect();
        let lambda = perm
            .iter()
            .map(|&pi| perm.iter().map(|&pj| self.lambda[pi][pj]).collect())
            .collect();
        let d = unfrozen.iter().map(|&u| self.d[self.uf_pos(perm[u]).unwrap()]).collect();
        Self { n: self.n, unfrozen, b, lambda, d }
    }

    /// Equality as seeds: same unfrozen set and the same entries vertex by vertex.
    pub fn equivalent(&self, other: &Self) -> bool {
        if self.n != other.n || self.lambda != other.lambda {
            return false;
        }
        let mut a = self.unfrozen.clone();
        let mut b = other.unfrozen.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
            && self.unfrozen.iter().all(|&k| {
                self.d[self.uf_pos(k).unwrap()] == other.d[other.uf_pos(k).unwrap()]
                    && (0..self.n).all(|i| self.b_entry(i, k) == other.b_entry(i, k))
            })
    }
}

pub fn invert_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// Matrix mutation of `B~` at vertex `k` (column `kc`).
pub fn mutate_matrix(b: &[Vec<i64>], unfrozen: &[usize], k: usize, kc: usize) -> IMat {
    let n = b.len();
    let r = unfrozen.len();
    let mut out = vec![vec![0; r]; n];
    for i in 0..n {
        for (jc, &j) in unfrozen.iter().enumerate() {
            out[i][jc] = if i == k || j == k {
                -b[i][jc]
            } else {
                b[i][jc] + pos(b[i][kc]) * b[k][jc] + b[i][kc] * pos(-b[k][jc])
            };
        }
    }
    out
}

/// Largest diagonal entry tried when synthesizing `D`.
pub const D_SEARCH_BOUND: i64 = 6;

/// Finds a skew-symmetric integer `Lambda` and positive `D` with `B~^T Lambda = (D 0)`.
/// Candidates `D` are tried in lexicographic order; free unknowns are set to zero.
pub fn find_compatible_lambda(n: usize, unfrozen: &[usize], b: &[Vec<i64>]) -> Result<(IMat, Vec<i64>)> {
    let r = unfrozen.len();
    if b.len() != n || b.iter().any(|row| row.len() != r) {
        return Err(Error::Shape(format!("B must be {n} x {r}")));
    }
    if lattice::rank(b) < r {
        return Err(Error::NotFullRank);
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let var = |i: usize, j: usize| -> Option<(usize, i64)> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => Some((pairs.iter().position(|&p| p == (i, j)).unwrap(), 1)),
            Greater => Some((pairs.iter().position(|&p| p == (j, i)).unwrap(), -1)),
            Equal => None,
        }
    };
    // rows of the linear system: (a, l) -> sum_i b[i][a] Lambda[i][l]
    let mut sys: Vec<Vec<BigInt>> = Vec::with_capacity(r * n);
    for a in 0..r {
        for l in 0..n {
            let mut row = vec![BigInt::from(0); pairs.len()];
            for (i, brow) in b.iter().enumerate() {
                if let Some((x, s)) = var(i, l) {
                    row[x] += brow[a] * s;
                }
            }
            sys.push(row);
        }
    }

    let symmetrizable = |d: &[i64]| {
        (0..r).all(|x| (0..r).all(|y| d[x] * b[unfrozen[x]][y] == -d[y] * b[unfrozen[y]][x]))
    };
    let mut d = vec![1i64; r];
    loop {
        if symmetrizable(&d) {
            let rhs: Vec<BigInt> = (0..r)
                .flat_map(|a| (0..n).map(move |l| (a, l)))
                .map(|(a, l)| BigInt::from(if l == unfrozen[a] { d[a] } else { 0 }))
                .collect();
            if let Some(x) = lattice::solve_integer(&sys, &rhs) {
                let mut lam = vec![vec![0i64; n]; n];
                let mut fits = true;
                for (idx, &(i, j)) in pairs.iter().enumerate() {
                    match x[idx].to_i64() {
                        Some(v) => {
                            lam[i][j] = v;
                            lam[j][i] = -v;
                        }
                        None => fits = false,
                    }
                }
                if fits {
                    return Ok((lam, d));
                }
            }
        }
        // next D in lexicographic order
        let mut idx = r;
        loop {
            if idx == 0 {
                return Err(Error::NoneFound(D_SEARCH_BOUND));
            }
            idx -= 1;
            if d[idx] < D_SEARCH_BOUND {
                d[idx] += 1;
                for x in d.iter_mut().skip(idx + 1) {
                    *x = 1;
                }
                break;
            }
        }
    }
}
