//! Tropical transformations of (co)degrees, the linear maps psi, shifted seeds `t[1]` and
//! `t[-1]`, and the distinguished functions built from them.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expansion::{initial_tracked, simplify_word, Atlas, Chart, Frame, MonomialRef, TrackedSeed};
use crate::lattice;
use crate::qtorus::{ExpVec, QTElem};
use crate::seed::{invert_perm, mutate_matrix, QuantumSeed};

fn pos(x: i64) -> i64 {
    x.max(0)
}

/// Degree tropical transformation at unfrozen `k`, from `M(t)` to `M(mu_k t)`.
pub fn trop_deg(s: &QuantumSeed, k: usize, g: &ExpVec) -> ExpVec {
    let gk = g[k];
    let mut out = g.clone();
    for i in 0..s.n() {
        if i == k {
            out[i] = -gk;
            continue;
        }
        let b = s.b_entry(i, k);
        out[i] += if b >= 0 { b * pos(gk) } else { b * pos(-gk) };
    }
    out
}

/// Codegree tropical transformation at unfrozen `k`.
pub fn trop_codeg(s: &QuantumSeed, k: usize, g: &ExpVec) -> ExpVec {
    let gk = g[k];
    let mut out = g.clone();
    for i in 0..s.n() {
        if i == k {
            out[i] = -gk;
            continue;
        }
        let b = s.b_entry(i, k);
        out[i] -= if b <= 0 { b * pos(gk) } else { b * pos(-gk) };
    }
    out
}

/// Composition of [`trop_deg`] along `word` starting at `s`.
pub fn phi_along(s: &QuantumSeed, word: &[usize], g: &ExpVec) -> Result<ExpVec> {
    let mut cur = s.clone();
    let mut g = g.clone();
    for &k in word {
        g = trop_deg(&cur, k, &g);
        cur = cur.mutate(k)?;
    }
    Ok(g)
}

/// Composition of [`trop_codeg`] along `word` starting at `s`.
pub fn phi_op_along(s: &QuantumSeed, word: &[usize], g: &ExpVec) -> Result<ExpVec> {
    let mut cur = s.clone();
    let mut g = g.clone();
    for &k in word {
        g = trop_codeg(&cur, k, &g);
        cur = cur.mutate(k)?;
    }
    Ok(g)
}

fn node_word(atlas: &Atlas, from: usize, to: usize) -> Vec<usize> {
    let nodes = &atlas.graph.nodes;
    let rev: Vec<usize> = nodes[from].path.iter().rev().copied().collect();
    simplify_word(&[rev.as_slice(), nodes[to].path.as_slice()].concat())
}

/// `phi_{to,from}` between graph nodes, in the graph's labelling.
pub fn phi_nodes(atlas: &Atlas, from: usize, to: usize, g: &ExpVec) -> Result<ExpVec> {
    phi_along(atlas.seed(from), &node_word(atlas, from, to), g)
}

/// `phi^op_{to,from}` between graph nodes.
pub fn phi_op_nodes(atlas: &Atlas, from: usize, to: usize, g: &ExpVec) -> Result<ExpVec> {
    phi_op_along(atlas.seed(from), &node_word(atlas, from, to), g)
}

/// Columns of `psi_{t',t}`: column `i` is `deg^{t'}` of `X_i(t)`, with `t'` the chart's base.
pub fn psi(chart: &Chart, t: usize) -> Vec<ExpVec> {
    chart.nodes[t].degrees()
}

pub fn apply_cols(cols: &[ExpVec], g: &ExpVec) -> ExpVec {
    let n = cols.first().map_or(g.dim(), ExpVec::dim);
    g.iter()
        .enumerate()
        .fold(ExpVec::zero(n), |acc, (i, &c)| &acc + &cols[i].scaled(c))
}

/// `psi_{t',t}` as a map, `t'` the chart base.
pub fn psi_apply(chart: &Chart, t: usize, g: &ExpVec) -> ExpVec {
    apply_cols(&psi(chart, t), g)
}

/// Which shifted seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Plus,
    Minus,
}

impl Direction {
    pub fn sign(self) -> i64 {
        match self {
            Direction::Plus => 1,
            Direction::Minus => -1,
        }
    }
}

/// Data of `t[1]` or `t[-1]`.
///
/// The `k`-th distinguished variable (`I_k` for `Plus`, `P_k` for `Minus`) is
/// `X_{sigma[k]}` of the shifted seed, reached from `t` by `word`. Its degree (for `Plus`) or
/// codegree (for `Minus`) in `t` is `-f_k + u[k]` with `u[k]` frozen-supported.
/// `sigma` fixes frozen vertices; `u` is zero there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftData {
    pub node: usize,
    pub direction: Direction,
    pub word: Vec<usize>,
    pub sigma: Vec<usize>,
    pub u: Vec<ExpVec>,
}

/// A shift together with the shifted seed expanded in the torus of `t`.
#[derive(Clone, Debug)]
pub struct Shift {
    pub data: ShiftData,
    pub shifted: TrackedSeed,
    /// Graph node of the shifted seed.
    pub target: usize,
}

pub const GREEN_STEP_CAP: usize = 1000;

/// Greedy green-to-red sequence: repeatedly mutate the largest green vertex of the principal
/// extension `[B~; I]`. Returns `None` if red is not reached within the step cap.
pub fn green_to_red(s: &QuantumSeed) -> Option<Vec<usize>> {
    let n = s.n();
    let r = s.rank();
    let unfrozen = s.unfrozen().to_vec();
    let mut b = s.b().clone();
    for c in 0..r {
        let mut row = vec![0; r];
        row[c] = 1;
        b.push(row);
    }
    let green = |b: &[Vec<i64>], c: usize| (n..n + r).all(|i| b[i][c] >= 0);
    let mut word = Vec::new();
    for _ in 0..GREEN_STEP_CAP {
        let Some(c) = (0..r).filter(|&c| green(&b, c)).max_by_key(|&c| unfrozen[c]) else {
            return Some(word);
        };
        b = mutate_matrix(&b, &unfrozen, unfrozen[c], c);
        word.push(unfrozen[c]);
    }
    None
}

/// Matches the `+1` pattern: `deg^t X_{sigma k}(t') = -f_k + u_k`, frozen variables `f_j`.
fn match_pattern(t: &QuantumSeed, shifted: &TrackedSeed, extremal: &[ExpVec]) -> Option<(Vec<usize>, Vec<ExpVec>)> {
    let n = t.n();
    let frozen = t.frozen();
    let mut sigma = vec![usize::MAX; n];
    let mut u = vec![ExpVec::zero(n); n];
    for &j in &frozen {
        if extremal[j] != ExpVec::unit(n, j) {
            return None;
        }
        sigma[j] = j;
    }
    for (v, g) in extremal.iter().enumerate() {
        if !shifted.seed.is_unfrozen(v) {
            continue;
        }
        // unfrozen part must be -e_k
        let hits: Vec<usize> = t.unfrozen().iter().copied().filter(|&k| g[k] != 0).collect();
        if hits.len() != 1 || g[hits[0]] != -1 {
            return None;
        }
        let k = hits[0];
        if sigma[k] != usize::MAX {
            return None;
        }
        sigma[k] = v;
        let mut uk = g + &ExpVec::unit(n, k);
        for &i in t.unfrozen() {
            uk[i] = 0;
        }
        u[k] = uk;
    }
    if sigma.contains(&usize::MAX) {
        return None;
    }
    // b_{sigma i, sigma j}(t') = b_ij(t)
    let ok = t.unfrozen().iter().all(|&i| {
        t.unfrozen().iter().all(|&j| shifted.seed.b_entry(sigma[i], sigma[j]) == t.b_entry(i, j))
    });
    ok.then_some((sigma, u))
}

fn plus_candidate(t: &QuantumSeed, word: &[usize]) -> Result<Option<(TrackedSeed, Vec<usize>, Vec<ExpVec>)>> {
    let frame = Frame::new(t.clone())?;
    let shifted = initial_tracked(&frame).apply_word(word)?;
    Ok(match_pattern(t, &shifted, &shifted.degrees()).map(|(s, u)| (shifted, s, u)))
}

/// Finds `t[1]` (direction `Plus`) or `t[-1]` (`Minus`) for graph node `node`.
pub fn detect_shift(atlas: &Atlas, node: usize, direction: Direction) -> Result<Shift> {
    let t = atlas.seed(node).clone();
    let plus = find_plus_word(atlas, node)?;
    let (word, shifted, sigma, u) = match direction {
        Direction::Plus => {
            let (shifted, sigma, u) = plus_candidate(&t, &plus)?
                .ok_or_else(|| Error::NotFound("shift word lost its pattern".into()))?;
            (plus, shifted, sigma, u)
        }
        Direction::Minus => minus_from_plus(&t, &plus)?,
    };
    let target = atlas
        .graph
        .walk(node, &word)
        .ok_or_else(|| Error::NotFound("shifted seed is not a node of the graph".into()))?;
    Ok(Shift { data: ShiftData { node, direction, word, sigma, u }, shifted, target })
}

fn find_plus_word(atlas: &Atlas, node: usize) -> Result<Vec<usize>> {
    let t = atlas.seed(node);
    if let Some(w) = green_to_red(t) {
        if plus_candidate(t, &w)?.is_some() {
            return Ok(w);
        }
    }
    // fall back to a search over the graph
    let chart = &atlas.charts[node];
    for (x, tracked) in chart.nodes.iter().enumerate() {
        if match_pattern(t, tracked, &tracked.degrees()).is_some() {
            let rev: Vec<usize> = atlas.graph.nodes[node].path.iter().rev().copied().collect();
            let w = simplify_word(&[rev.as_slice(), atlas.graph.nodes[x].path.as_slice()].concat());
            if plus_candidate(t, &w)?.is_some() {
                return Ok(w);
            }
        }
    }
    Err(Error::NotFound(format!("no injective-reachable shift from node {node} within the graph")))
}

/// `t[-1]` from the `t[1]` word: mutate along `reverse(sigma^-1 (word))`, then confirm
/// `t = t[-1][1]` with the same permutation.
fn minus_from_plus(t: &QuantumSeed, plus: &[usize]) -> Result<(Vec<usize>, TrackedSeed, Vec<usize>, Vec<ExpVec>)> {
    let (_, sigma, _) = plus_candidate(t, plus)?
        .ok_or_else(|| Error::NotFound("shift word lost its pattern".into()))?;
    let sinv = invert_perm(&sigma);
    let word: Vec<usize> = plus.iter().rev().map(|&k| sinv[k]).collect();
    let frame = Frame::new(t.clone())?;
    let shifted = initial_tracked(&frame).apply_word(&word)?;

    // t expanded in t[-1] must show the +1 pattern with the same sigma
    let back: Vec<usize> = word.iter().rev().copied().collect();
    let (_, sigma_back, _) = plus_candidate(&shifted.seed, &back)?
        .ok_or_else(|| Error::NotFound("t is not the shift of the candidate t[-1]".into()))?;
    if sigma_back != sigma {
        return Err(Error::NotFound("t[-1] found with a different permutation".into()));
    }
    // P_k = X_{sigma^-1 k}(t[-1]) has codegree -f_k + u_k in t
    let n = t.n();
    let mut u = vec![ExpVec::zero(n); n];
    for &k in t.unfrozen() {
        let c = &shifted.bidegrees[sinv[k]].codeg;
        let mut uk = c + &ExpVec::unit(n, k);
        if t.unfrozen().iter().any(|&i| uk[i] != 0) {
            return Err(Error::NotFound(format!("codegree of P_{} is {c}, not -f_{} plus frozen", k + 1, k + 1)));
        }
        for &i in t.unfrozen() {
            uk[i] = 0;
        }
        u[k] = uk;
    }
    Ok((word, shifted, sinv, u))
}

impl Shift {
    /// `I_k` or `P_k` for unfrozen `k`, expanded in `t`.
    pub fn var(&self, k: usize) -> &QTElem {
        &self.shifted.vars[self.data.sigma[k]]
    }

    /// All distinguished variables, keyed by unfrozen vertex.
    pub fn vars(&self) -> BTreeMap<usize, QTElem> {
        self.shifted
            .seed
            .unfrozen()
            .iter()
            .map(|&k| (k, self.var(k).clone()))
            .collect()
    }

    /// `I^d` (or `P^d`): the cluster monomial of the shifted seed with `m_{sigma k} = d_k`.
    pub fn monomial(&self, d: &ExpVec) -> Result<QTElem> {
        let n = self.shifted.n();
        let mut m = ExpVec::zero(n);
        for &k in self.shifted.seed.unfrozen() {
            m[self.data.sigma[k]] = d[k];
        }
        self.shifted.cluster_monomial(&m)
    }

    /// `sum_k d_k (-f_k + u_k)`.
    pub fn shifted_extremal(&self, d: &ExpVec) -> ExpVec {
        let n = self.shifted.n();
        self.shifted.seed.unfrozen().iter().fold(ExpVec::zero(n), |acc, &k| {
            &acc + &(&self.data.u[k] - &ExpVec::unit(n, k)).scaled(d[k])
        })
    }
}

fn split(t: &QuantumSeed, g: &ExpVec) -> (ExpVec, ExpVec) {
    let n = t.n();
    let mut plus = ExpVec::zero(n);
    let mut minus = ExpVec::zero(n);
    for &k in t.unfrozen() {
        plus[k] = pos(g[k]);
        minus[k] = pos(-g[k]);
    }
    (plus, minus)
}

/// `Inj_g = [p_g * X^{[g]_+} * I^{[-g]_+}]` with the frozen factor `p_g = X^u` forced by the degree.
pub fn inj_element(frame: &Frame, shift: &Shift, g: &ExpVec) -> Result<QTElem> {
    assert_eq!(shift.data.direction, Direction::Plus, "Inj needs t[1]");
    let t = &frame.seed;
    let (a, d) = split(t, g);
    let base = &a + &shift.shifted_extremal(&d);
    let u = g - &base;
    if t.unfrozen().iter().any(|&k| u[k] != 0) {
        return Err(Error::FrozenFactorNotFrozen(u));
    }
    let z = frame.mul(&frame.mul(&QTElem::monomial(u), &QTElem::monomial(a)), &shift.monomial(&d)?);
    frame.order.normalize_deg(&z)
}

/// `Proj^eta = {P^{[-eta]_+} * X^{[eta]_+} * p^eta}` with `p^eta` forced by the codegree.
pub fn proj_element(frame: &Frame, shift: &Shift, eta: &ExpVec) -> Result<QTElem> {
    assert_eq!(shift.data.direction, Direction::Minus, "Proj needs t[-1]");
    let t = &frame.seed;
    let (a, d) = split(t, eta);
    let base = &a + &shift.shifted_extremal(&d);
    let u = eta - &base;
    if t.unfrozen().iter().any(|&k| u[k] != 0) {
        return Err(Error::FrozenFactorNotFrozen(u));
    }
    let z = frame.mul(&frame.mul(&shift.monomial(&d)?, &QTElem::monomial(a)), &QTElem::monomial(u));
    frame.order.normalize_codeg(&z)
}

/// All `+-f_i` followed by `count` vectors with entries in `[-3, 3]` from a fixed ChaCha seed.
pub fn default_samples(n: usize, count: usize, rng_seed: u64) -> Vec<ExpVec> {
    let mut out = Vec::with_capacity(2 * n + count);
    for i in 0..n {
        out.push(ExpVec::unit(n, i));
        out.push(-ExpVec::unit(n, i));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..count {
        out.push(ExpVec((0..n).map(|_| rng.gen_range(-3..=3)).collect()));
    }
    out
}

pub const DEFAULT_SAMPLE_COUNT: usize = 20;
pub const DEFAULT_RNG_SEED: u64 = 0x5eed;

/// Swap property for one monomial: `z` is `eta`-copointed in `t` iff its expansion in
/// `t[-1]` is pointed at `psi_{t[-1],t}(eta)`. Returns both sides.
pub fn check_swap(atlas: &Atlas, shift_minus: &Shift, z: &MonomialRef) -> Result<(bool, bool)> {
    let t = shift_minus.data.node;
    let tm = shift_minus.target;
    let here = &atlas.charts[t];
    let there = &atlas.charts[tm];
    let zt = here.monomial(z)?;
    let eta = here.order().codegree(&zt)?;
    let lhs = here.order().is_copointed_at(&zt, &eta);
    let ztm = there.monomial(z)?;
    let image = psi_apply(there, t, &eta);
    let rhs = there.order().is_pointed_at(&ztm, &image);
    Ok((lhs, rhs))
}

/// Order half of the swap property: `eta <=_t g` iff `psi(eta) >=_{t[-1]} psi(g)`.
pub fn check_swap_order(atlas: &Atlas, shift_minus: &Shift, eta: &ExpVec, g: &ExpVec) -> bool {
    let t = shift_minus.data.node;
    let there = &atlas.charts[shift_minus.target];
    let lhs = atlas.charts[t].order().leq(eta, g);
    let rhs = there.order().leq(&psi_apply(there, t, g), &psi_apply(there, t, eta));
    lhs == rhs
}

/// `phi_{t',t} . psi_{t,t[1]} = psi_{t',t'[1]} . phi^op_{t'[1],t[1]}` on every sample.
/// Returns the samples on which the two sides differ.
pub fn check_trop_commute(
    atlas: &Atlas,
    shift_t: &Shift,
    shift_tp: &Shift,
    samples: &[ExpVec],
) -> Result<Vec<ExpVec>> {
    let (t, t1) = (shift_t.data.node, shift_t.target);
    let (tp, tp1) = (shift_tp.data.node, shift_tp.target);
    let mut bad = Vec::new();
    for g in samples {
        let left = phi_nodes(atlas, t, tp, &psi_apply(&atlas.charts[t], t1, g))?;
        let right = psi_apply(&atlas.charts[tp], tp1, &phi_op_nodes(atlas, t1, tp1, g)?);
        if left != right {
            bad.push(g.clone());
        }
    }
    Ok(bad)
}

/// Degrees of `z` at every node agree with `phi` transport from every other node.
/// Returns violating `(t, t')` pairs.
pub fn check_compatibly_pointed(atlas: &Atlas, z: &MonomialRef) -> Result<Vec<(usize, usize)>> {
    compat(atlas, z, false)
}

/// Codegree mirror of [`check_compatibly_pointed`] using `phi^op`.
pub fn check_compatibly_copointed(atlas: &Atlas, z: &MonomialRef) -> Result<Vec<(usize, usize)>> {
    compat(atlas, z, true)
}

fn compat(atlas: &Atlas, z: &MonomialRef, co: bool) -> Result<Vec<(usize, usize)>> {
    let ext: Vec<ExpVec> = atlas
        .charts
        .iter()
        .map(|c| {
            let b = c.monomial_bidegree(z);
            if co { b.codeg } else { b.deg }
        })
        .collect();
    let mut bad = Vec::new();
    for t in 0..atlas.len() {
        for tp in 0..atlas.len() {
            let moved = if co {
                phi_op_nodes(atlas, t, tp, &ext[t])?
            } else {
                phi_nodes(atlas, t, tp, &ext[t])?
            };
            if moved != ext[tp] {
                bad.push((t, tp));
            }
        }
    }
    Ok(bad)
}

/// For every edge `(u, k, w)`, the single-step `trop_deg` (relabelled into `w`) must agree with
/// `phi` along the reference paths. Returns descriptions of disagreements.
pub fn check_phi_word_independence(atlas: &Atlas, samples: &[ExpVec]) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for &(u, k, w) in &atlas.graph.edges {
        let fresh = atlas.graph.nodes[u].mutate(k)?;
        let perm = fresh
            .matching(&atlas.graph.nodes[w])
            .ok_or_else(|| Error::NotFound("edge endpoints do not match".into()))?;
        for g in samples {
            let step = trop_deg(atlas.seed(u), k, g);
            let relabelled = ExpVec(perm.iter().map(|&p| step[p]).collect());
            if relabelled != phi_nodes(atlas, u, w, g)? {
                bad.push(format!("edge ({u}, {}, {w}) at {g}", k + 1));
            }
        }
    }
    Ok(bad)
}

/// Every `psi_{t',t}` is unimodular, so `psi^{-1}` is again integral; returns failing pairs.
///
/// `psi_{t,t'}` and `psi_{t',t}` are not mutually inverse: for `t' = mu_k t` the composite
/// sends `f_k` to `f_k + sum_i b_ik f_i`.
pub fn check_psi_unimodular(atlas: &Atlas) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    for tp in 0..atlas.len() {
        for t in 0..atlas.len() {
            let cols = psi(&atlas.charts[tp], t);
            let m = lattice::transpose(&cols.iter().map(|c| c.0.clone()).collect::<Vec<_>>());
            let unimodular = lattice::rational_inverse(&m)
                .is_some_and(|inv| inv.iter().all(|row| lattice::integral(row).is_some()));
            if !unimodular {
                bad.push((tp, t));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;

    fn e(x: &[i64]) -> ExpVec {
        ExpVec::from_slice(x)
    }

    #[test]
    fn tropical_examples() {
        let s = instances::a2();
        assert_eq!(trop_deg(&s, 0, &e(&[1, 0])), e(&[-1, 1]));
        assert_eq!(trop_deg(&s, 0, &e(&[0, 1])), e(&[0, 1]));
        assert_eq!(trop_codeg(&s, 0, &e(&[1, 0])), e(&[-1, 0]));
    }

    #[test]
    fn green_sequence_a2() {
        assert_eq!(green_to_red(&instances::a2()), Some(vec![1, 0, 1]));
    }
}
