//! Laurent expansions of cluster variables in a fixed reference torus, and the exchange graph.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::pointed::{Bidegree, DominanceOrder};
use crate::qtorus::{exact_divide, BilinearForm, ExpVec, QTElem, VCoeff};
use crate::seed::QuantumSeed;

/// A reference seed together with its twisted product and dominance order.
#[derive(Clone, Debug)]
pub struct Frame {
    pub seed: QuantumSeed,
    pub form: BilinearForm,
    pub order: DominanceOrder,
}

impl Frame {
    pub fn new(seed: QuantumSeed) -> Result<Arc<Self>> {
        let form = seed.form();
        let order = DominanceOrder::new(&seed)?;
        Ok(Arc::new(Self { seed, form, order }))
    }

    pub fn dim(&self) -> usize {
        self.seed.n()
    }

    pub fn mul(&self, a: &QTElem, b: &QTElem) -> QTElem {
        a.twisted_mul(b, &self.form)
    }
}

/// A seed reached from the reference by mutations, with the expansion of each of its
/// variables in the reference torus.
#[derive(Clone, Debug)]
pub struct TrackedSeed {
    pub frame: Arc<Frame>,
    pub seed: QuantumSeed,
    pub vars: Vec<QTElem>,
    pub bidegrees: Vec<Bidegree>,
    pub path: Vec<usize>,
}

pub fn initial_tracked(frame: &Arc<Frame>) -> TrackedSeed {
    let n = frame.dim();
    let vars: Vec<QTElem> = (0..n).map(|i| QTElem::monomial(ExpVec::unit(n, i))).collect();
    let bidegrees = (0..n)
        .map(|i| Bidegree { deg: ExpVec::unit(n, i), codeg: ExpVec::unit(n, i) })
        .collect();
    TrackedSeed { frame: frame.clone(), seed: frame.seed.clone(), vars, bidegrees, path: Vec::new() }
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

impl TrackedSeed {
    pub fn n(&self) -> usize {
        self.vars.len()
    }

    pub fn degrees(&self) -> Vec<ExpVec> {
        self.bidegrees.iter().map(|b| b.deg.clone()).collect()
    }

    pub fn codegrees(&self) -> Vec<ExpVec> {
        self.bidegrees.iter().map(|b| b.codeg.clone()).collect()
    }

    /// Sorted degree vectors; identifies the seed up to relabelling.
    pub fn key(&self) -> Vec<ExpVec> {
        let mut k = self.degrees();
        k.sort();
        k
    }

    /// `X(t)^m` for this seed's normalized monomial, expanded in the reference torus:
    /// `v^(-sum_{i<j} Lambda_ij m_i m_j) X_1^m_1 * ... * X_n^m_n`.
    /// Negative exponents are allowed only on variables that are monomials in the reference.
    pub fn raw_monomial(&self, m: &ExpVec) -> Result<QTElem> {
        let n = self.n();
        let lam = self.seed.lambda();
        let mut twist = 0;
        for i in 0..n {
            for j in i + 1..n {
                twist += lam[i][j] * m[i] * m[j];
            }
        }
        let mut acc = QTElem::one(n).shift_v(-twist);
        for (i, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let factor = if e > 0 {
                self.vars[i].twisted_pow(e as u32, &self.frame.form)
            } else {
                let (g, c) = self.vars[i]
                    .as_single_term()
                    .filter(|(_, c)| c.is_one())
                    .ok_or_else(|| Error::ExponentSign(m.clone()))?;
                QTElem::term(g.scaled(e), c.clone())
            };
            acc = self.frame.mul(&acc, &factor);
        }
        Ok(acc)
    }

    /// Localized cluster monomial `[X(t)^m]`, `m_k >= 0` on unfrozen `k`.
    pub fn cluster_monomial(&self, m: &ExpVec) -> Result<QTElem> {
        if m.dim() != self.n() {
            return Err(Error::DimensionMismatch { left: m.dim(), right: self.n() });
        }
        if self.seed.unfrozen().iter().any(|&k| m[k] < 0) {
            return Err(Error::ExponentSign(m.clone()));
        }
        let raw = self.raw_monomial(m)?;
        self.frame.order.normalize_deg(&raw)
    }

    /// Degree of `X(t)^m` in the reference seed: `sum m_i deg X_i`.
    pub fn monomial_degree(&self, m: &ExpVec) -> ExpVec {
        m.iter()
            .enumerate()
            .fold(ExpVec::zero(self.n()), |acc, (i, &e)| &acc + &self.bidegrees[i].deg.scaled(e))
    }

    pub fn monomial_codegree(&self, m: &ExpVec) -> ExpVec {
        m.iter()
            .enumerate()
            .fold(ExpVec::zero(self.n()), |acc, (i, &e)| &acc + &self.bidegrees[i].codeg.scaled(e))
    }

    /// Right quotient `N / X_k` of the exchange relation, before normalization.
    pub fn exchange_quotient(&self, k: usize) -> Result<QTElem> {
        if k >= self.n() {
            return Err(Error::BadVertex(k));
        }
        let kc = self.seed.uf_pos(k).ok_or(Error::NotUnfrozen(k))?;
        let n = self.n();
        let b = self.seed.b();
        let up = ExpVec((0..n).map(|i| pos(b[i][kc])).collect());
        let down = ExpVec((0..n).map(|i| pos(-b[i][kc])).collect());
        let fk = ExpVec::unit(n, k);
        let form = self.seed.form();
        // X'_k * X_k = v^lambda(a, f_k) X^a + v^lambda(b, f_k) X^b in this seed's torus
        let num = &self.raw_monomial(&down)?.shift_v(form.eval(&down, &fk))
            + &self.raw_monomial(&up)?.shift_v(form.eval(&up, &fk));
        exact_divide(&num, &self.vars[k], &self.frame.form)
    }

    /// `mu_k`, with the new variable obtained by exact division of the exchange relation.
    pub fn mutate(&self, k: usize) -> Result<TrackedSeed> {
        let q = self.exchange_quotient(k)?;
        let order = &self.frame.order;
        let new_var = order.normalize_deg(&q)?;
        let bideg = order.bidegree(&new_var)?;
        let seed = self.seed.mutate(k)?;
        let mut vars = self.vars.clone();
        vars[k] = new_var;
        let mut bidegrees = self.bidegrees.clone();
        bidegrees[k] = bideg;
        let mut path = self.path.clone();
        path.push(k);
        Ok(TrackedSeed { frame: self.frame.clone(), seed, vars, bidegrees, path })
    }

    pub fn apply_word(&self, word: &[usize]) -> Result<TrackedSeed> {
        word.iter().try_fold(self.clone(), |t, &k| t.mutate(k))
    }

    /// `perm` with `other.degrees[i] == self.degrees[perm[i]]`, if the degree sets agree.
    pub fn matching(&self, other: &TrackedSeed) -> Option<Vec<usize>> {
        let mine = self.degrees();
        other
            .degrees()
            .iter()
            .map(|g| mine.iter().position(|h| h == g))
            .collect()
    }
}

/// Concatenation with adjacent repeated letters cancelled (`mu_k mu_k = id`).
pub fn simplify_word(word: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::with_capacity(word.len());
    for &k in word {
        if out.last() == Some(&k) {
            out.pop();
        } else {
            out.push(k);
        }
    }
    out
}

pub const DEFAULT_NODE_CAP: usize = 10_000;

/// Seeds reachable from the reference, deduplicated by degree sets, in BFS order.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    pub frame: Arc<Frame>,
    pub nodes: Vec<TrackedSeed>,
    /// `(from, vertex, to)`, each undirected edge once.
    pub edges: Vec<(usize, usize, usize)>,
    /// `neighbors[node][vertex]`.
    pub neighbors: Vec<Vec<Option<usize>>>,
    pub truncated: bool,
    pub node_cap: usize,
    /// Inconsistencies found when an edge closes onto a known node.
    pub violations: Vec<String>,
    index: HashMap<Vec<ExpVec>, usize>,
}

pub fn build_exchange_graph(seed: &QuantumSeed, node_cap: usize) -> Result<ExchangeGraph> {
    let frame = Frame::new(seed.clone())?;
    let root = initial_tracked(&frame);
    let n = seed.n();
    let mut g = ExchangeGraph {
        frame,
        nodes: Vec::new(),
        edges: Vec::new(),
        neighbors: Vec::new(),
        truncated: false,
        node_cap,
        violations: Vec::new(),
        index: HashMap::new(),
    };
    g.push_node(root);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &k in seed.unfrozen() {
            if g.neighbors[u][k].is_some() {
                continue;
            }
            let next = g.nodes[u].mutate(k)?;
            let key = next.key();
            let w = match g.index.get(&key) {
                Some(&w) => {
                    g.check_closure(&next, w);
                    w
                }
                None => {
                    if g.nodes.len() >= node_cap {
                        g.truncated = true;
                        continue;
                    }
                    let w = g.push_node(next);
                    queue.push_back(w);
                    w
                }
            };
            // the vertex carrying the new variable at w
            let back = g.nodes[w]
                .degrees()
                .iter()
                .position(|d| *d == g.nodes[u].mutate_degree_hint(k, &key))
                .unwrap_or(k);
            g.neighbors[u][k] = Some(w);
            if g.neighbors[w][back].is_none() {
                g.neighbors[w][back] = Some(u);
            }
            g.edges.push((u, k, w));
        }
    }
    debug_assert!(g.neighbors.iter().all(|r| r.len() == n));
    Ok(g)
}

impl TrackedSeed {
    /// The degree of the variable that `mu_k` introduces, looked up in `key`.
    fn mutate_degree_hint(&self, k: usize, key: &[ExpVec]) -> ExpVec {
        let mine = self.degrees();
        key.iter()
            .find(|g| !mine.contains(g))
            .cloned()
            .unwrap_or_else(|| mine[k].clone())
    }
}

impl ExchangeGraph {
    fn push_node(&mut self, t: TrackedSeed) -> usize {
        let id = self.nodes.len();
        let degs = t.degrees();
        let mut sorted = degs.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != degs.len() {
            self.violations.push(format!("node {id}: repeated degree vector in {:?}", degs));
        }
        self.index.insert(t.key(), id);
        self.neighbors.push(vec![None; t.n()]);
        self.nodes.push(t);
        id
    }

    /// Compares a freshly mutated seed with the stored node of the same degree set.
    fn check_closure(&mut self, fresh: &TrackedSeed, w: usize) {
        let stored = &self.nodes[w];
        let Some(perm) = fresh.matching(stored) else {
            self.violations.push(format!("node {w}: degree sets agree but matching failed"));
            return;
        };
        for (i, &p) in perm.iter().enumerate() {
            if fresh.vars[p] != stored.vars[i] {
                self.violations.push(format!(
                    "node {w}: variable {} differs along path {:?}",
                    i + 1,
                    fresh.path.iter().map(|k| k + 1).collect::<Vec<_>>()
                ));
            }
        }
        if !fresh.seed.permuted(&perm).equivalent(&stored.seed) {
            self.violations.push(format!(
                "node {w}: exchange matrix or Lambda disagree under the matched relabelling (path {:?})",
                fresh.path.iter().map(|k| k + 1).collect::<Vec<_>>()
            ));
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_of_key(&self, key: &[ExpVec]) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn require_closed(&self) -> Result<()> {
        if self.truncated {
            Err(Error::Truncated(self.node_cap))
        } else {
            Ok(())
        }
    }

    /// Distinct unfrozen cluster variables, sorted by degree.
    pub fn cluster_variables(&self) -> Vec<(ExpVec, QTElem)> {
        let mut seen: std::collections::BTreeMap<ExpVec, QTElem> = Default::default();
        for t in &self.nodes {
            for &k in t.seed.unfrozen() {
                seen.entry(t.bidegrees[k].deg.clone()).or_insert_with(|| t.vars[k].clone());
            }
        }
        seen.into_iter().collect()
    }

    /// The node's seed re-expanded in the torus of node `base`.
    pub fn expand_in(&self, base: usize, target: usize) -> Result<TrackedSeed> {
        let frame = Frame::new(self.nodes[base].seed.clone())?;
        expand_word_in(&frame, &self.nodes[base].path, &self.nodes[target].path)
    }

    /// Every node expanded in the torus of `base`.
    pub fn chart(&self, base: usize) -> Result<Chart> {
        let frame = Frame::new(self.nodes[base].seed.clone())?;
        let start = initial_tracked(&frame);
        let mut memo: HashMap<Vec<usize>, TrackedSeed> = HashMap::new();
        memo.insert(Vec::new(), start);
        let mut nodes = Vec::with_capacity(self.len());
        let rev: Vec<usize> = self.nodes[base].path.iter().rev().copied().collect();
        for t in &self.nodes {
            let word = simplify_word(&[rev.as_slice(), t.path.as_slice()].concat());
            let mut cut = word.len();
            while !memo.contains_key(&word[..cut]) {
                cut -= 1;
            }
            let mut cur = memo[&word[..cut]].clone();
            for (i, &k) in word.iter().enumerate().skip(cut) {
                cur = cur.mutate(k)?;
                memo.insert(word[..=i].to_vec(), cur.clone());
            }
            cur.path = t.path.clone();
            nodes.push(cur);
        }
        Ok(Chart { base, frame, nodes })
    }

    pub fn charts(&self) -> Result<Vec<Chart>> {
        use rayon::prelude::*;
        (0..self.len()).into_par_iter().map(|b| self.chart(b)).collect()
    }

    /// Parent word of a node, in 1-based letters.
    pub fn word_of(&self, node: usize) -> Vec<usize> {
        self.nodes[node].path.iter().map(|k| k + 1).collect()
    }

    /// Nodes reachable by following `word` from `from` along graph edges.
    pub fn walk(&self, from: usize, word: &[usize]) -> Option<usize> {
        let mut cur = self.nodes[from].clone();
        for &k in word {
            cur = cur.mutate(k).ok()?;
        }
        self.node_of_key(&cur.key())
    }
}

/// An exchange graph together with every node's chart.
#[derive(Clone, Debug)]
pub struct Atlas {
    pub graph: ExchangeGraph,
    pub charts: Vec<Chart>,
}

impl Atlas {
    pub fn new(graph: ExchangeGraph) -> Result<Self> {
        let charts = graph.charts()?;
        Ok(Self { graph, charts })
    }

    pub fn build(seed: &QuantumSeed, node_cap: usize) -> Result<Self> {
        let g = build_exchange_graph(seed, node_cap)?;
        g.require_closed()?;
        Self::new(g)
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn seed(&self, node: usize) -> &QuantumSeed {
        &self.graph.nodes[node].seed
    }
}

/// Starting at the seed reached by `base_word` (taken as reference), apply
/// `reverse(base_word) ++ target_word`, with cancellations.
pub fn expand_word_in(frame: &Arc<Frame>, base_word: &[usize], target_word: &[usize]) -> Result<TrackedSeed> {
    let rev: Vec<usize> = base_word.iter().rev().copied().collect();
    let word = simplify_word(&[rev.as_slice(), target_word].concat());
    let mut t = initial_tracked(frame).apply_word(&word)?;
    t.path = target_word.to_vec();
    Ok(t)
}

/// All nodes of a graph expanded in the torus of one node.
#[derive(Clone, Debug)]
pub struct Chart {
    pub base: usize,
    pub frame: Arc<Frame>,
    /// Indexed like the graph's nodes, with the graph's labelling of variables.
    pub nodes: Vec<TrackedSeed>,
}

impl Chart {
    pub fn order(&self) -> &DominanceOrder {
        &self.frame.order
    }

    pub fn seed(&self) -> &QuantumSeed {
        &self.frame.seed
    }

    pub fn monomial(&self, r: &MonomialRef) -> Result<QTElem> {
        self.nodes[r.node].cluster_monomial(&r.exponent)
    }

    pub fn monomial_bidegree(&self, r: &MonomialRef) -> Bidegree {
        let t = &self.nodes[r.node];
        Bidegree { deg: t.monomial_degree(&r.exponent), codeg: t.monomial_codegree(&r.exponent) }
    }
}

/// A localized cluster monomial `X(t)^m` named by its node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialRef {
    pub node: usize,
    pub exponent: ExpVec,
}

/// Coefficient-1 check at both ends.
pub fn is_bipointed(order: &DominanceOrder, z: &QTElem) -> bool {
    match order.bidegree(z) {
        Ok(b) => z.coeff(&b.deg).is_one() && z.coeff(&b.codeg).is_one(),
        Err(_) => false,
    }
}

/// `a * b == v^(2 e) b * a`.
pub fn quasi_commute(form: &BilinearForm, a: &QTElem, b: &QTElem, e: i64) -> bool {
    a.twisted_mul(b, form) == b.twisted_mul(a, form).scale(&VCoeff::v_pow(2 * e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> QuantumSeed {
        let b = vec![vec![0, -1], vec![1, 0]];
        QuantumSeed::new(2, vec![0, 1], b.clone(), b, vec![1, 1]).unwrap()
    }

    fn el(x: &[&[i64]]) -> QTElem {
        QTElem::from_exps(2, x)
    }

    #[test]
    fn first_mutations() {
        let f = Frame::new(a2()).unwrap();
        let t0 = initial_tracked(&f);
        assert_eq!(t0.mutate(0).unwrap().vars[0], el(&[&[-1, 0], &[-1, 1]]));
        assert_eq!(t0.mutate(1).unwrap().vars[1], el(&[&[1, -1], &[0, -1]]));
        assert!(t0.exchange_quotient(1).unwrap().coeff(&ExpVec::from_slice(&[1, -1])).is_one());
    }

    #[test]
    fn shift_word() {
        let f = Frame::new(a2()).unwrap();
        let t = initial_tracked(&f).apply_word(&[1, 0, 1]).unwrap();
        let i2 = el(&[&[0, -1], &[-1, -1], &[-1, 0]]);
        let i1 = el(&[&[-1, 0], &[-1, 1]]);
        assert_eq!(t.vars, vec![i2.clone(), i1]);
        assert_eq!(t.cluster_monomial(&ExpVec::from_slice(&[1, 0])).unwrap(), i2);
    }

    #[test]
    fn pentagon() {
        let g = build_exchange_graph(&a2(), DEFAULT_NODE_CAP).unwrap();
        assert_eq!(g.len(), 5);
        assert_eq!(g.cluster_variables().len(), 5);
        assert!(!g.truncated);
        assert!(g.violations.is_empty(), "{:?}", g.violations);
        assert_eq!(g.edges.len(), 5);
    }

    #[test]
    fn simplify() {
        assert_eq!(simplify_word(&[1, 2, 2, 1, 3]), vec![3]);
        assert_eq!(simplify_word(&[]), Vec::<usize>::new());
    }

    #[test]
    fn cap_truncates() {
        let g = build_exchange_graph(&a2(), 3).unwrap();
        assert!(g.truncated);
        assert_eq!(g.require_closed(), Err(Error::Truncated(3)));
    }
}
