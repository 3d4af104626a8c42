//! Dominance order, degrees and codegrees, normalization, and unitriangular decomposition.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lattice::{self, IMat};
use crate::qtorus::{ExpVec, QTElem, VCoeff};
use crate::seed::QuantumSeed;

/// `g' <= g` iff `g' - g = B~ n` with `n >= 0`.
///
/// `B~` has full column rank, so `n` is recovered from a left inverse `Q B~ = det I`.
/// The functional `w = -Lambda 1_uf` satisfies `B~^T w = -D 1`, so it strictly decreases
/// along the order and is used to sort supports.
#[derive(Clone, Debug)]
pub struct DominanceOrder {
    b: IMat,
    q: IMat,
    det: i64,
    w: Vec<i64>,
}

impl DominanceOrder {
    pub fn new(seed: &QuantumSeed) -> Result<Self> {
        let (q, det) = lattice::left_inverse(seed.b()).ok_or(Error::NotFullRank)?;
        let n = seed.n();
        let w = (0..n)
            .map(|i| -seed.unfrozen().iter().map(|&k| seed.lambda()[i][k]).sum::<i64>())
            .collect();
        Ok(Self { b: seed.b().clone(), q, det, w })
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    /// The unique integer `n` with `B~ n = diff`, if any (no sign condition).
    pub fn solve(&self, diff: &ExpVec) -> Option<Vec<i64>> {
        let scaled = lattice::mat_vec(&self.q, diff.as_slice());
        let mut n = Vec::with_capacity(scaled.len());
        for x in scaled {
            if x % self.det != 0 {
                return None;
            }
            n.push(x / self.det);
        }
        (lattice::mat_vec(&self.b, &n) == diff.as_slice()).then_some(n)
    }

    /// `n >= 0` with `lower = upper + B~ n`, when `lower <= upper`.
    pub fn witness(&self, lower: &ExpVec, upper: &ExpVec) -> Option<Vec<i64>> {
        if self.grade(lower) > self.grade(upper) {
            return None;
        }
        self.solve(&(lower - upper)).filter(|n| n.iter().all(|&x| x >= 0))
    }

    pub fn leq(&self, lower: &ExpVec, upper: &ExpVec) -> bool {
        lower == upper || self.witness(lower, upper).is_some()
    }

    pub fn lt(&self, lower: &ExpVec, upper: &ExpVec) -> bool {
        lower != upper && self.leq(lower, upper)
    }

    pub fn grade(&self, g: &ExpVec) -> i64 {
        self.w.iter().zip(g.iter()).map(|(a, b)| a * b).sum()
    }

    /// Maximal elements of `items`, in lexicographic order.
    pub fn maximal<'a, I: IntoIterator<Item = &'a ExpVec>>(&self, items: I) -> Vec<ExpVec> {
        self.extremal(items, true)
    }

    /// Minimal elements of `items`, in lexicographic order.
    pub fn minimal<'a, I: IntoIterator<Item = &'a ExpVec>>(&self, items: I) -> Vec<ExpVec> {
        self.extremal(items, false)
    }

    fn extremal<'a, I: IntoIterator<Item = &'a ExpVec>>(&self, items: I, top: bool) -> Vec<ExpVec> {
        let mut graded: Vec<(i64, &ExpVec)> = items.into_iter().map(|g| (self.grade(g), g)).collect();
        if top {
            graded.sort_by_key(|x| std::cmp::Reverse(x.0));
        } else {
            graded.sort_by_key(|x| x.0);
        }
        // anything above (below) an element is above (below) some extremal one seen earlier
        let mut out: Vec<&ExpVec> = Vec::new();
        for (_, g) in graded {
            let covered = out
                .iter()
                .any(|m| if top { self.leq(g, m) } else { self.leq(m, g) });
            if !covered {
                out.push(g);
            }
        }
        let mut out: Vec<ExpVec> = out.into_iter().cloned().collect();
        out.sort();
        out
    }

    /// All `g''` with `lower <= g'' <= upper`; `None` unless `lower <= upper`.
    pub fn interval(&self, lower: &ExpVec, upper: &ExpVec) -> Option<Vec<ExpVec>> {
        let n = self.witness(lower, upper).or_else(|| (lower == upper).then(|| vec![0; self.q.len()]))?;
        let mut out = Vec::new();
        let mut cur = vec![0i64; n.len()];
        loop {
            out.push(ExpVec(lattice::mat_vec(&self.b, &cur)) + upper.clone());
            let mut idx = 0;
            loop {
                if idx == n.len() {
                    out.sort();
                    return Some(out);
                }
                if cur[idx] < n[idx] {
                    cur[idx] += 1;
                    break;
                }
                cur[idx] = 0;
                idx += 1;
            }
        }
    }
}

pub fn dominance_leq(seed: &QuantumSeed, lower: &ExpVec, upper: &ExpVec) -> Result<bool> {
    Ok(DominanceOrder::new(seed)?.leq(lower, upper))
}

/// `(degree, codegree)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub deg: ExpVec,
    pub codeg: ExpVec,
}

impl DominanceOrder {
    pub fn degree(&self, z: &QTElem) -> Result<ExpVec> {
        if z.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut top = self.maximal(z.support());
        if top.len() == 1 {
            Ok(top.pop().unwrap())
        } else {
            Err(Error::NoDegree)
        }
    }

    pub fn codegree(&self, z: &QTElem) -> Result<ExpVec> {
        if z.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut bottom = self.minimal(z.support());
        if bottom.len() == 1 {
            Ok(bottom.pop().unwrap())
        } else {
            Err(Error::NoCodegree)
        }
    }

    pub fn bidegree(&self, z: &QTElem) -> Result<Bidegree> {
        Ok(Bidegree { deg: self.degree(z)?, codeg: self.codegree(z)? })
    }

    /// `[z]`: scale so the coefficient at the degree is 1.
    pub fn normalize_deg(&self, z: &QTElem) -> Result<QTElem> {
        let g = self.degree(z)?;
        normalize_at(z, &g)
    }

    /// `{z}`: scale so the coefficient at the codegree is 1.
    pub fn normalize_codeg(&self, z: &QTElem) -> Result<QTElem> {
        let g = self.codegree(z)?;
        normalize_at(z, &g)
    }

    pub fn is_pointed_at(&self, z: &QTElem, g: &ExpVec) -> bool {
        self.degree(z).is_ok_and(|d| &d == g) && z.coeff(g).is_one()
    }

    pub fn is_copointed_at(&self, z: &QTElem, g: &ExpVec) -> bool {
        self.codegree(z).is_ok_and(|d| &d == g) && z.coeff(g).is_one()
    }
}

fn normalize_at(z: &QTElem, g: &ExpVec) -> Result<QTElem> {
    let c = z.coeff(g);
    let inv = c.unit_inverse().ok_or_else(|| Error::NonUnitLeading(c.to_string()))?;
    Ok(z.scale(&inv))
}

/// Source of basis elements by (co)degree.
pub trait BasisLookup {
    fn lookup(&self, key: &ExpVec) -> Option<QTElem>;
}

/// Elements keyed by their degree (or codegree); each value is pointed (copointed) at its key.
#[derive(Clone, Debug, Default)]
pub struct PointedSet {
    elements: BTreeMap<ExpVec, QTElem>,
}

impl PointedSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `z` under `key`. Re-inserting the same element is a no-op; a different one is a conflict.
    pub fn insert(&mut self, key: ExpVec, z: QTElem) -> Result<()> {
        if let Some(old) = self.elements.get(&key) {
            if *old != z {
                return Err(Error::DuplicateDegreeConflict {
                    degree: key,
                    witnesses: vec![old.to_string(), z.to_string()],
                });
            }
            return Ok(());
        }
        self.elements.insert(key, z);
        Ok(())
    }

    pub fn get(&self, key: &ExpVec) -> Option<&QTElem> {
        self.elements.get(key)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ExpVec, &QTElem)> + '_ {
        self.elements.iter()
    }
}

impl BasisLookup for PointedSet {
    fn lookup(&self, key: &ExpVec) -> Option<QTElem> {
        self.elements.get(key).cloned()
    }
}

impl<T: BasisLookup + ?Sized> BasisLookup for &T {
    fn lookup(&self, key: &ExpVec) -> Option<QTElem> {
        (**self).lookup(key)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompStatus {
    Exact,
    Indeterminate(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompTerm {
    pub key: ExpVec,
    pub coeff: VCoeff,
    pub element: QTElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub terms: Vec<DecompTerm>,
    pub status: DecompStatus,
}

impl Decomposition {
    pub fn is_exact(&self) -> bool {
        self.status == DecompStatus::Exact
    }

    pub fn coeff_at(&self, key: &ExpVec) -> Option<&VCoeff> {
        self.terms.iter().find(|t| &t.key == key).map(|t| &t.coeff)
    }

    /// `sum coeff * element`.
    pub fn reconstruct(&self, dim: usize) -> QTElem {
        self.terms
            .iter()
            .fold(QTElem::zero(dim), |acc, t| &acc + &t.element.scale(&t.coeff))
    }

    /// Terms as `(key, coeff)`, sorted by key.
    pub fn sorted_pairs(&self) -> Vec<(ExpVec, VCoeff)> {
        let mut v: Vec<_> = self.terms.iter().map(|t| (t.key.clone(), t.coeff.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }
}

pub const DECOMPOSE_ITERATION_CAP: usize = 100_000;

/// Which extremal end drives the elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Degree,
    Codegree,
}

/// Degree-unitriangular decomposition of `z` against `basis` (keyed by degree), with every
/// visited degree confined to `[window.codeg, window.deg]`.
pub fn decompose(order: &DominanceOrder, z: &QTElem, basis: &impl BasisLookup, window: &Bidegree) -> Decomposition {
    decompose_with(order, z, basis, window, Side::Degree, |c| c[0].clone())
}

/// Codegree mirror of [`decompose`]; `basis` is keyed by codegree.
pub fn decompose_co(order: &DominanceOrder, z: &QTElem, basis: &impl BasisLookup, window: &Bidegree) -> Decomposition {
    decompose_with(order, z, basis, window, Side::Codegree, |c| c[0].clone())
}

/// Greedy elimination; `pick` chooses among incomparable extremal exponents (given sorted).
pub fn decompose_with(
    order: &DominanceOrder,
    z: &QTElem,
    basis: &impl BasisLookup,
    window: &Bidegree,
    side: Side,
    mut pick: impl FnMut(&[ExpVec]) -> ExpVec,
) -> Decomposition {
    let mut rem = z.clone();
    let mut terms: Vec<DecompTerm> = Vec::new();
    let stop = |terms: Vec<DecompTerm>, why: String| Decomposition { terms, status: DecompStatus::Indeterminate(why) };
    for _ in 0..DECOMPOSE_ITERATION_CAP {
        if rem.is_zero() {
            return Decomposition { terms, status: DecompStatus::Exact };
        }
        let cands = match side {
            Side::Degree => order.maximal(rem.support()),
            Side::Codegree => order.minimal(rem.support()),
        };
        let g = pick(&cands);
        if !(order.leq(&window.codeg, &g) && order.leq(&g, &window.deg)) {
            return stop(terms, format!("exponent {g} lies outside the window [{}, {}]", window.codeg, window.deg));
        }
        let Some(el) = basis.lookup(&g) else {
            return stop(terms, format!("no basis element at {g}"));
        };
        let c = rem.coeff(&g);
        let lead = el.coeff(&g);
        if !lead.is_one() {
            return stop(terms, format!("basis element at {g} has coefficient {lead} there"));
        }
        rem = &rem - &el.scale(&c);
        match terms.iter_mut().find(|t| t.key == g) {
            Some(t) => t.coeff += &c,
            None => terms.push(DecompTerm { key: g, coeff: c, element: el }),
        }
    }
    stop(terms, format!("iteration cap {DECOMPOSE_ITERATION_CAP} reached"))
}

/// Pivot coefficient 1 and every other coefficient in `v^-1 Z[v^-1]`.
pub fn is_m_unitriangular(d: &Decomposition, pivot: &ExpVec) -> bool {
    d.is_exact()
        && d.coeff_at(pivot).is_some_and(VCoeff::is_one)
        && d.terms.iter().all(|t| &t.key == pivot || t.coeff.in_m())
}
