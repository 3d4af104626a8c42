//! Cluster-monomial candidate bases, triangularity checks, and verification of the
//! two-extremal-term structure of `R * V` for cluster monomials `R` and basis elements `V`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{Atlas, Chart, MonomialRef};
use crate::lattice;
use crate::pointed::{
    decompose, decompose_co, is_m_unitriangular, BasisLookup, Bidegree, DecompStatus, Decomposition,
    PointedSet,
};
use crate::qtorus::{ExpVec, QTElem, VCoeff};

/// Normalized localized cluster monomials with bounded exponents, in the reference torus.
#[derive(Clone, Debug)]
pub struct CandidateBasis {
    pub by_degree: PointedSet,
    pub by_codegree: PointedSet,
    /// One monomial per degree, the first found in node order.
    pub provenance: BTreeMap<ExpVec, MonomialRef>,
}

impl CandidateBasis {
    pub fn len(&self) -> usize {
        self.by_degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_degree.is_empty()
    }

    pub fn refs(&self) -> Vec<MonomialRef> {
        let mut v: Vec<_> = self.provenance.values().cloned().collect();
        v.sort();
        v
    }
}

/// Every exponent vector with unfrozen entries in `0..=cap` and frozen entries in `-fw..=fw`.
fn exponent_box(n: usize, unfrozen: &[usize], cap: i64, fw: i64) -> Vec<ExpVec> {
    let ranges: Vec<(i64, i64)> = (0..n)
        .map(|i| if unfrozen.contains(&i) { (0, cap) } else { (-fw, fw) })
        .collect();
    let mut out = vec![ExpVec::zero(n)];
    for (i, &(lo, hi)) in ranges.iter().enumerate() {
        out = out
            .into_iter()
            .flat_map(|m| {
                (lo..=hi).map(move |x| {
                    let mut m = m.clone();
                    m[i] = x;
                    m
                })
            })
            .collect();
    }
    out
}

pub fn enumerate_basis(atlas: &Atlas, unfrozen_cap: i64, frozen_window: i64) -> Result<CandidateBasis> {
    atlas.graph.require_closed()?;
    let g = &atlas.graph;
    let seed = &g.frame.seed;
    let exps = exponent_box(seed.n(), seed.unfrozen(), unfrozen_cap, frozen_window);
    let mut by_degree = PointedSet::new();
    let mut by_codegree = PointedSet::new();
    let mut provenance = BTreeMap::new();
    for (x, t) in g.nodes.iter().enumerate() {
        for m in &exps {
            let deg = t.monomial_degree(m);
            if provenance.contains_key(&deg) {
                // same degree: must be the same element
                let z = t.cluster_monomial(m)?;
                by_degree.insert(deg, z)?;
                continue;
            }
            let z = t.cluster_monomial(m)?;
            let codeg = t.monomial_codegree(m);
            by_degree.insert(deg.clone(), z.clone())?;
            by_codegree.insert(codeg, z)?;
            provenance.insert(deg, MonomialRef { node: x, exponent: m.clone() });
        }
    }
    Ok(CandidateBasis { by_degree, by_codegree, provenance })
}

/// Unbounded cluster-monomial lookup in one chart: `g` is resolved by solving
/// `g = sum m_i deg X_i(x)` at each node `x` for integral `m` with `m_uf >= 0`.
#[derive(Debug)]
pub struct MonomialResolver<'a> {
    chart: &'a Chart,
    deg_inv: Vec<Vec<Vec<BigRational>>>,
    codeg_inv: Vec<Vec<Vec<BigRational>>>,
    cache: Mutex<HashMap<(bool, ExpVec), Option<QTElem>>>,
}

fn inverse_of_cols(cols: &[ExpVec]) -> Result<Vec<Vec<BigRational>>> {
    let m = lattice::transpose(&cols.iter().map(|c| c.0.clone()).collect::<Vec<_>>());
    lattice::rational_inverse(&m).ok_or_else(|| Error::ExpansionUnavailable("degree matrix is singular".into()))
}

impl<'a> MonomialResolver<'a> {
    pub fn new(chart: &'a Chart) -> Result<Self> {
        let deg_inv = chart.nodes.iter().map(|t| inverse_of_cols(&t.degrees())).collect::<Result<_>>()?;
        let codeg_inv = chart.nodes.iter().map(|t| inverse_of_cols(&t.codegrees())).collect::<Result<_>>()?;
        Ok(Self { chart, deg_inv, codeg_inv, cache: Mutex::new(HashMap::new()) })
    }

    /// The cluster monomial with the given degree (`co = false`) or codegree (`co = true`).
    pub fn resolve(&self, key: &ExpVec, co: bool) -> Option<MonomialRef> {
        let invs = if co { &self.codeg_inv } else { &self.deg_inv };
        for (x, inv) in invs.iter().enumerate() {
            let Some(m) = lattice::integral(&lattice::solve_rational(inv, key.as_slice())) else {
                continue;
            };
            let t = &self.chart.nodes[x];
            if t.seed.unfrozen().iter().all(|&k| m[k] >= 0) {
                return Some(MonomialRef { node: x, exponent: ExpVec(m) });
            }
        }
        None
    }

    fn element(&self, key: &ExpVec, co: bool) -> Option<QTElem> {
        let ck = (co, key.clone());
        if let Some(hit) = self.cache.lock().unwrap().get(&ck) {
            return hit.clone();
        }
        let z = self.resolve(key, co).and_then(|r| self.chart.monomial(&r).ok());
        self.cache.lock().unwrap().insert(ck, z.clone());
        z
    }

    pub fn by_degree(&self) -> DegreeLookup<'_, 'a> {
        DegreeLookup(self)
    }

    pub fn by_codegree(&self) -> CodegreeLookup<'_, 'a> {
        CodegreeLookup(self)
    }
}

pub struct DegreeLookup<'r, 'a>(&'r MonomialResolver<'a>);
pub struct CodegreeLookup<'r, 'a>(&'r MonomialResolver<'a>);

impl BasisLookup for DegreeLookup<'_, '_> {
    fn lookup(&self, key: &ExpVec) -> Option<QTElem> {
        self.0.element(key, false)
    }
}

impl BasisLookup for CodegreeLookup<'_, '_> {
    fn lookup(&self, key: &ExpVec) -> Option<QTElem> {
        self.0.element(key, true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Case {
    /// `R * V = v^s L` for a basis element `L`.
    InBasis { s: i64 },
    TwoTail {
        s: i64,
        h: i64,
        s_deg: ExpVec,
        h_deg: ExpVec,
        middle: Vec<(ExpVec, VCoeff)>,
    },
    Indeterminate { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeclercVerdict {
    pub case: Case,
    pub checks: Vec<(&'static str, bool)>,
}

impl LeclercVerdict {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect()
    }

    fn indeterminate(reason: impl Into<String>) -> Self {
        Self { case: Case::Indeterminate { reason: reason.into() }, checks: Vec::new() }
    }
}

/// Shared state for sweeps: the atlas, the basis, and every basis element in every chart.
pub struct LeclercContext<'a> {
    pub atlas: &'a Atlas,
    pub basis: &'a CandidateBasis,
    resolvers: Vec<MonomialResolver<'a>>,
    /// `local[chart][basis index]`.
    local: Vec<Vec<QTElem>>,
    refs: Vec<MonomialRef>,
}

impl<'a> LeclercContext<'a> {
    pub fn new(atlas: &'a Atlas, basis: &'a CandidateBasis) -> Result<Self> {
        let refs = basis.refs();
        let resolvers = atlas.charts.iter().map(MonomialResolver::new).collect::<Result<Vec<_>>>()?;
        let local = atlas
            .charts
            .par_iter()
            .map(|c| refs.iter().map(|r| c.monomial(r)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { atlas, basis, resolvers, local, refs })
    }

    pub fn refs(&self) -> &[MonomialRef] {
        &self.refs
    }

    pub fn resolver(&self, node: usize) -> &MonomialResolver<'a> {
        &self.resolvers[node]
    }

    fn element_in(&self, chart: usize, r: &MonomialRef) -> Result<QTElem> {
        match self.refs.binary_search(r) {
            Ok(i) => Ok(self.local[chart][i].clone()),
            _ => self.atlas.charts[chart].monomial(r),
        }
    }
}

/// Analyses `R * V`, working in the torus of the node where `R` is a monomial.
pub fn verify_pair(ctx: &LeclercContext, r: &MonomialRef, v: &MonomialRef) -> LeclercVerdict {
    match verify_pair_inner(ctx, r, v) {
        Ok(x) => x,
        Err(e) => LeclercVerdict::indeterminate(e.to_string()),
    }
}

fn verify_pair_inner(ctx: &LeclercContext, r: &MonomialRef, v: &MonomialRef) -> Result<LeclercVerdict> {
    let w = r.node;
    let chart = &ctx.atlas.charts[w];
    let frame = &chart.frame;
    let order = &frame.order;
    let seed = &frame.seed;
    let m = &r.exponent;
    let rz = chart.monomial(r)?;
    let vz = ctx.element_in(w, v)?;
    let Bidegree { deg: gamma, codeg: eta } = order.bidegree(&vz)?;
    let p = frame.mul(&rz, &vz);
    let deg_p = order.degree(&p)?;
    let codeg_p = order.codegree(&p)?;

    let Some(s) = p.coeff(&deg_p).as_v_power() else {
        return Ok(LeclercVerdict::indeterminate(format!("leading coefficient {} is not a power of v", p.coeff(&deg_p))));
    };
    let n_vec = order.witness(&eta, &gamma);
    let single_var = (m.iter().filter(|&&x| x != 0).count() == 1 && m.iter().any(|&x| x == 1))
        .then(|| m.iter().position(|&x| x == 1).unwrap());
    let n_at = |i: usize| -> i64 {
        match (&n_vec, seed.uf_pos(i)) {
            (Some(n), Some(c)) => n[c],
            _ => 0,
        }
    };

    let res = ctx.resolver(w);
    let lookup = res.by_degree();
    if let Some(el) = lookup.lookup(&deg_p) {
        if p == el.scale(&VCoeff::v_pow(s)) {
            let mut checks = vec![("s_matches_lambda", s == seed.lambda_eval(m, &gamma))];
            if let Some(i) = single_var {
                checks.push(("in_basis_iff_n_i_zero", n_at(i) == 0));
            }
            return Ok(LeclercVerdict { case: Case::InBasis { s }, checks });
        }
    }

    let window = Bidegree { deg: deg_p.clone(), codeg: codeg_p.clone() };
    let dec = decompose(order, &p, &lookup, &window);
    if !dec.is_exact() {
        let why = match &dec.status {
            DecompStatus::Indeterminate(w) => w.clone(),
            DecompStatus::Exact => unreachable!(),
        };
        return Ok(LeclercVerdict::indeterminate(why));
    }
    let mut checks: Vec<(&'static str, bool)> = Vec::new();
    checks.push(("roundtrip", dec.reconstruct(p.dim()) == p));

    let s_term = dec.terms.iter().find(|t| t.key == deg_p);
    let h_terms: Vec<_> = dec
        .terms
        .iter()
        .filter(|t| order.codegree(&t.element).is_ok_and(|c| c == codeg_p))
        .collect();
    let (Some(s_term), [h_term]) = (s_term, h_terms.as_slice()) else {
        return Ok(LeclercVerdict::indeterminate(format!(
            "expected unique terms at degree {deg_p} and codegree {codeg_p}"
        )));
    };
    let h_expected = seed.lambda_eval(m, &eta);
    let h = h_term.coeff.as_v_power().unwrap_or(h_expected);
    checks.push(("s_matches_lambda", s == seed.lambda_eval(m, &gamma) && s_term.coeff == VCoeff::v_pow(s)));
    checks.push(("h_matches_lambda", h_term.coeff == VCoeff::v_pow(h_expected)));
    checks.push(("two_distinct_tails", s_term.key != h_term.key));

    let s_bi = order.bidegree(&s_term.element)?;
    let h_bi = order.bidegree(&h_term.element)?;
    let middle: Vec<_> = dec
        .terms
        .iter()
        .filter(|t| t.key != s_term.key && t.key != h_term.key)
        .collect();
    let mut deg_ok = order.lt(&h_bi.deg, &s_bi.deg);
    let mut codeg_ok = order.lt(&h_bi.codeg, &s_bi.codeg);
    let mut window_ok = true;
    for t in &middle {
        let bi = order.bidegree(&t.element)?;
        deg_ok &= order.lt(&bi.deg, &s_bi.deg);
        codeg_ok &= order.lt(&h_bi.codeg, &bi.codeg);
        window_ok &= t.coeff.in_window(h + 1, s - 1);
    }
    checks.push(("deg_dominance", deg_ok));
    checks.push(("codeg_dominance", codeg_ok));
    checks.push(("coeff_window", window_ok));
    checks.push(("s_greater_than_h", s > h));
    let gap_ok = match &n_vec {
        Some(n) => s - h == -seed.lambda_eval(m, &seed.p_star_uf(n)),
        None => false,
    };
    checks.push(("s_minus_h_formula", gap_ok));
    if let Some(i) = single_var {
        checks.push(("in_basis_iff_n_i_zero", n_at(i) != 0));
    }

    // conjugate: v^{s+h} bar(R*V) swaps the extremal coefficients
    let conj = p.bar().scale(&VCoeff::v_pow(s + h));
    let dec_bar = decompose(order, &conj, &lookup, &window);
    let bar_ok = dec_bar.is_exact()
        && dec_bar.coeff_at(&s_term.key) == Some(&VCoeff::v_pow(h))
        && dec_bar.coeff_at(&h_term.key) == Some(&VCoeff::v_pow(s));
    checks.push(("bar_consistency", bar_ok));

    Ok(LeclercVerdict {
        case: Case::TwoTail {
            s,
            h,
            s_deg: s_term.key.clone(),
            h_deg: h_term.key.clone(),
            middle: middle.iter().map(|t| (t.key.clone(), t.coeff.clone())).collect(),
        },
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub r: MonomialRef,
    pub v: MonomialRef,
    pub verdict: LeclercVerdict,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TheoremSummary {
    pub in_basis: usize,
    pub two_tail_pass: usize,
    pub two_tail_fail: usize,
    pub in_basis_fail: usize,
    pub indeterminate: usize,
    pub pairs: Vec<PairReport>,
}

/// Which monomials play the role of `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RScope {
    /// Every variable (frozen included) of each listed node.
    Variables(Vec<usize>),
    /// Every basis element, labelled conjecture mode by callers.
    BasisElements,
}

pub fn verify_theorem(ctx: &LeclercContext, scope: &RScope) -> TheoremSummary {
    let rs: Vec<MonomialRef> = match scope {
        RScope::Variables(nodes) => nodes
            .iter()
            .flat_map(|&x| {
                let n = ctx.atlas.graph.frame.dim();
                (0..n).map(move |i| MonomialRef { node: x, exponent: ExpVec::unit(n, i) })
            })
            .collect(),
        RScope::BasisElements => ctx.refs().to_vec(),
    };
    let jobs: Vec<(MonomialRef, MonomialRef)> = rs
        .iter()
        .flat_map(|r| ctx.refs().iter().map(move |v| (r.clone(), v.clone())))
        .collect();
    let mut pairs: Vec<PairReport> = jobs
        .par_iter()
        .map(|(r, v)| PairReport { r: r.clone(), v: v.clone(), verdict: verify_pair(ctx, r, v) })
        .collect();
    pairs.sort_by(|a, b| (&a.r, &a.v).cmp(&(&b.r, &b.v)));
    let mut out = TheoremSummary::default();
    for p in &pairs {
        match (&p.verdict.case, p.verdict.passed()) {
            (Case::InBasis { .. }, true) => out.in_basis += 1,
            (Case::InBasis { .. }, false) => out.in_basis_fail += 1,
            (Case::TwoTail { .. }, true) => out.two_tail_pass += 1,
            (Case::TwoTail { .. }, false) => out.two_tail_fail += 1,
            (Case::Indeterminate { .. }, _) => out.indeterminate += 1,
        }
    }
    out.pairs = pairs;
    out
}

/// One product checked for (`M`-)unitriangularity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularEntry {
    pub var: usize,
    pub element: MonomialRef,
    pub pivot: ExpVec,
    pub decomposition: Decomposition,
    /// `sum coeff * element` reproduces the product.
    pub roundtrip: bool,
    pub unitriangular: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriangularReport {
    pub node: usize,
    pub pass: usize,
    pub fail: usize,
    pub indeterminate: usize,
    pub roundtrips: usize,
    pub entries: Vec<TriangularEntry>,
}

impl TriangularReport {
    pub fn failures(&self) -> impl Iterator<Item = &TriangularEntry> + '_ {
        self.entries.iter().filter(|e| e.decomposition.is_exact() && !e.unitriangular)
    }
}

/// `[X_i * L]^t` against the degree-keyed basis for every `i` and basis element `L`.
pub fn check_degree_triangular(ctx: &LeclercContext, node: usize) -> Result<TriangularReport> {
    triangular(ctx, node, false)
}

/// `{L * X_i}^t` against the codegree-keyed basis.
pub fn check_codegree_triangular(ctx: &LeclercContext, node: usize) -> Result<TriangularReport> {
    triangular(ctx, node, true)
}

fn triangular(ctx: &LeclercContext, node: usize, co: bool) -> Result<TriangularReport> {
    let chart = &ctx.atlas.charts[node];
    let frame = &chart.frame;
    let order = &frame.order;
    let n = frame.dim();
    let res = ctx.resolver(node);
    let jobs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..ctx.refs.len()).map(move |b| (i, b))).collect();
    let entries: Vec<TriangularEntry> = jobs
        .par_iter()
        .map(|&(i, b)| -> Result<TriangularEntry> {
            let x = QTElem::monomial(ExpVec::unit(n, i));
            let l = &ctx.local[node][b];
            let (z, pivot) = if co {
                let z = order.normalize_codeg(&frame.mul(l, &x))?;
                (z, &order.codegree(l)? + &ExpVec::unit(n, i))
            } else {
                let z = order.normalize_deg(&frame.mul(&x, l))?;
                (z, &order.degree(l)? + &ExpVec::unit(n, i))
            };
            let window = order.bidegree(&z)?;
            let decomposition = if co {
                decompose_co(order, &z, &res.by_codegree(), &window)
            } else {
                decompose(order, &z, &res.by_degree(), &window)
            };
            let roundtrip = decomposition.is_exact() && decomposition.reconstruct(n) == z;
            let unitriangular = roundtrip && is_m_unitriangular(&decomposition, &pivot);
            Ok(TriangularEntry { var: i, element: ctx.refs[b].clone(), pivot, decomposition, roundtrip, unitriangular })
        })
        .collect::<Result<_>>()?;
    let mut rep = TriangularReport { node, ..Default::default() };
    for e in &entries {
        if !e.decomposition.is_exact() {
            rep.indeterminate += 1;
            continue;
        }
        if e.roundtrip {
            rep.roundtrips += 1;
        }
        if e.unitriangular {
            rep.pass += 1;
        } else {
            rep.fail += 1;
        }
    }
    rep.entries = entries;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::DEFAULT_NODE_CAP;
    use crate::instances;

    #[test]
    fn a2_basis_counts() {
        let atlas = Atlas::build(&instances::a2(), DEFAULT_NODE_CAP).unwrap();
        assert_eq!(enumerate_basis(&atlas, 0, 0).unwrap().len(), 1);
        assert_eq!(enumerate_basis(&atlas, 1, 0).unwrap().len(), 11);
        assert_eq!(enumerate_basis(&atlas, 2, 0).unwrap().len(), 31);
    }
}
