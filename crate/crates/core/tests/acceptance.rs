//! Acceptance gate. Runs the six criteria in order, prints one line per criterion, and fails
//! if any criterion fails or exceeds its time budget. All comparisons are exact.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcluster::expansion::{is_bipointed, quasi_commute, Atlas, MonomialRef, DEFAULT_NODE_CAP};
use qcluster::instances;
use qcluster::leclerc::{
    check_codegree_triangular, check_degree_triangular, enumerate_basis, verify_theorem, Case, LeclercContext,
    RScope,
};
use qcluster::pointed::{dominance_leq, Bidegree, DominanceOrder};
use qcluster::qtorus::exact_divide;
use qcluster::seed::QuantumSeed;
use qcluster::tropical::{self, Direction};
use qcluster::{BilinearForm, Error, ExpVec, QTElem, VCoeff};

const RNG_SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn el(terms: &[(&[i64], i64)]) -> QTElem {
    QTElem::from_terms(terms[0].0.len(), terms.iter().map(|(e, v)| (ExpVec::from_slice(e), VCoeff::v_pow(*v))))
}

fn instances4() -> Vec<(&'static str, QuantumSeed)> {
    instances::all().unwrap()
}

/// Decompositions produced by criteria 1 to 5, checked again by criterion 6.
#[derive(Default)]
struct Roundtrips {
    exact: usize,
    reproduced: usize,
}

fn criterion1() -> Outcome {
    let atlas = Atlas::build(&instances::a2(), DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
    let f = &atlas.charts[0].frame;
    let o = &f.order;

    let x1 = el(&[(&[1, 0], 0)]);
    let x2 = el(&[(&[0, 1], 0)]);
    let p2 = el(&[(&[1, -1], 0), (&[0, -1], 0)]);
    let i2 = el(&[(&[0, -1], 0), (&[-1, -1], 0), (&[-1, 0], 0)]);
    let p1 = i2.clone();
    let i1 = el(&[(&[-1, 0], 0), (&[-1, 1], 0)]);
    let one = QTElem::one(2);

    let vars: Vec<QTElem> = atlas.graph.cluster_variables().into_iter().map(|(_, z)| z).collect();
    let mut want = vec![x1.clone(), x2.clone(), p2.clone(), i2.clone(), i1.clone()];
    let mut got = vars.clone();
    want.sort_by_key(|z| z.to_string());
    got.sort_by_key(|z| z.to_string());
    ensure(got == want, || format!("cluster variables {got:?}"))?;

    let bi = |d: &[i64], c: &[i64]| Bidegree { deg: ExpVec::from_slice(d), codeg: ExpVec::from_slice(c) };
    for (name, z, b) in [
        ("P2", &p2, bi(&[1, -1], &[0, -1])),
        ("P1", &p1, bi(&[0, -1], &[-1, 0])),
        ("I1", &i1, bi(&[-1, 0], &[-1, 1])),
    ] {
        let got = o.bidegree(z).map_err(|e| e.to_string())?;
        ensure(got == b, || format!("bidegree of {name} is {got:?}"))?;
    }

    let vi = |z: &QTElem| z.shift_v(-1);
    let deg = |a: &QTElem, b: &QTElem| o.normalize_deg(&f.mul(a, b)).map_err(|e| e.to_string());
    let codeg = |a: &QTElem, b: &QTElem| o.normalize_codeg(&f.mul(a, b)).map_err(|e| e.to_string());
    let products = [
        ("[X1*I1]", deg(&x1, &i1)?, &one + &vi(&x2)),
        ("[X1*I2]", deg(&x1, &i2)?, &p2 + &vi(&one)),
        ("[X2*I1]", deg(&x2, &i1)?, el(&[(&[-1, 1], 0), (&[-1, 2], 0)])),
        ("[X2*I2]", deg(&x2, &i2)?, &one + &vi(&i1)),
        ("{P1*X1}", codeg(&p1, &x1)?, &vi(&p2) + &one),
        ("{P1*X2}", codeg(&p1, &x2)?, &vi(&one) + &i1),
        ("{P2*X1}", codeg(&p2, &x1)?, el(&[(&[2, -1], 0), (&[1, -1], 0)])),
        ("{P2*X2}", codeg(&p2, &x2)?, &vi(&x1) + &one),
    ];
    for (name, got, want) in &products {
        ensure(got == want, || format!("{name} = {got}, expected {want}"))?;
    }
    Ok("5 variables, 3 bidegrees, 8 normalized products".into())
}

fn criterion2() -> Outcome {
    let mut parts = Vec::new();
    for (name, s, nodes, vars) in [
        ("A2", instances::a2(), 5, 5),
        ("B2", instances::b2(), 6, 6),
        ("A3", instances::a3(), 14, 9),
    ] {
        let g = qcluster::expansion::build_exchange_graph(&s, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
        g.require_closed().map_err(|e| e.to_string())?;
        let got = (g.len(), g.cluster_variables().len());
        ensure(got == (nodes, vars), || format!("{name}: {got:?} nodes/variables"))?;
        ensure(g.violations.is_empty(), || format!("{name}: {:?}", g.violations))?;
        parts.push(format!("{name} {}/{}", got.0, got.1));
    }
    Ok(parts.join(", "))
}

fn criterion3() -> Outcome {
    let mut checked = 0usize;
    for (name, s) in instances4() {
        let atlas = Atlas::build(&s, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
        let order = &atlas.charts[0].frame.order;
        let form = &atlas.charts[0].frame.form;
        for (x, t) in atlas.graph.nodes.iter().enumerate() {
            let seed = &t.seed;
            let c = seed.check_compatible();
            ensure(c.ok && seed.d() == s.d(), || format!("{name} node {}: {:?}", x + 1, c.diagnostic))?;
            for &k in seed.unfrozen() {
                let back = seed.mutate(k).and_then(|m| m.mutate(k)).map_err(|e| e.to_string())?;
                ensure(&back == seed, || format!("{name} node {}: mu_{} is not an involution", x + 1, k + 1))?;
                let lhs = seed.opposite().mutate(k).map_err(|e| e.to_string())?;
                let rhs = seed.mutate(k).map_err(|e| e.to_string())?.opposite();
                ensure(lhs == rhs, || format!("{name} node {}: iota does not commute with mu_{}", x + 1, k + 1))?;
            }
            for i in 0..seed.n() {
                for j in 0..seed.n() {
                    let e = seed.lambda()[i][j];
                    ensure(quasi_commute(form, &t.vars[i], &t.vars[j], e), || {
                        format!("{name} node {}: X_{} and X_{} do not quasi-commute", x + 1, i + 1, j + 1)
                    })?;
                }
                let z = &t.vars[i];
                ensure(z.is_bar_invariant() && is_bipointed(order, z), || {
                    format!("{name} node {}: X_{} = {z} is not bar-invariant and bipointed", x + 1, i + 1)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} variables across 4 instances"))
}

fn random_ref(rng: &mut ChaCha8Rng, atlas: &Atlas, cap: i64) -> MonomialRef {
    let s = atlas.seed(0);
    let node = rng.gen_range(0..atlas.len());
    let mut m = ExpVec::zero(s.n());
    for i in 0..s.n() {
        m[i] = if s.is_unfrozen(i) { rng.gen_range(0..=cap) } else { rng.gen_range(-1..=1) };
    }
    MonomialRef { node, exponent: m }
}

fn criterion4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
    let mut counts = [0usize; 4];
    for (name, s) in instances4() {
        let atlas = Atlas::build(&s, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
        let basis = enumerate_basis(&atlas, 2, 0).map_err(|e| e.to_string())?;
        for r in basis.refs() {
            for chart in &atlas.charts {
                let z = chart.monomial(&r).map_err(|e| e.to_string())?;
                let want = chart.monomial_bidegree(&r);
                let got = chart.order().bidegree(&z).map_err(|e| e.to_string())?;
                ensure(got == want && is_bipointed(chart.order(), &z), || {
                    format!("{name}: {r:?} in chart {} has bidegree {got:?}, expected {want:?}", chart.base + 1)
                })?;
            }
            let bad = tropical::check_compatibly_pointed(&atlas, &r).map_err(|e| e.to_string())?;
            ensure(bad.is_empty(), || format!("{name}: {r:?} not compatibly pointed at {bad:?}"))?;
            let bad = tropical::check_compatibly_copointed(&atlas, &r).map_err(|e| e.to_string())?;
            ensure(bad.is_empty(), || format!("{name}: {r:?} not compatibly copointed at {bad:?}"))?;
            counts[0] += 1;
        }

        let minus: Vec<_> = (0..atlas.len())
            .map(|t| tropical::detect_shift(&atlas, t, Direction::Minus))
            .collect::<Result<_, _>>()
            .map_err(|e: Error| e.to_string())?;
        let plus: Vec<_> = (0..atlas.len())
            .map(|t| tropical::detect_shift(&atlas, t, Direction::Plus))
            .collect::<Result<_, _>>()
            .map_err(|e: Error| e.to_string())?;
        for _ in 0..50 {
            let z = random_ref(&mut rng, &atlas, 2);
            for sh in &minus {
                let (l, r) = tropical::check_swap(&atlas, sh, &z).map_err(|e| e.to_string())?;
                ensure(l && r, || format!("{name}: swap fails for {z:?} at node {}", sh.data.node + 1))?;
            }
            counts[1] += 1;
        }
        let samples = tropical::default_samples(s.n(), tropical::DEFAULT_SAMPLE_COUNT, tropical::DEFAULT_RNG_SEED);
        let pairs: Vec<(usize, usize)> = if name == "A3" {
            (0..10).map(|_| (rng.gen_range(0..atlas.len()), rng.gen_range(0..atlas.len()))).collect()
        } else {
            (0..atlas.len()).flat_map(|a| (0..atlas.len()).map(move |b| (a, b))).collect()
        };
        for (t, tp) in pairs {
            let bad = tropical::check_trop_commute(&atlas, &plus[t], &plus[tp], &samples).map_err(|e| e.to_string())?;
            ensure(bad.is_empty(), || format!("{name}: diagram ({}, {}) fails on {bad:?}", t + 1, tp + 1))?;
            counts[2] += 1;
        }
        counts[3] += tropical::check_phi_word_independence(&atlas, &samples).map_err(|e| e.to_string())?.len();
    }
    ensure(counts[3] == 0, || format!("{} phi word-dependence witnesses", counts[3]))?;
    Ok(format!(
        "{} monomials compatibly bipointed, {} swap samples, {} diagram pairs",
        counts[0], counts[1], counts[2]
    ))
}

fn criterion5(rt: &mut Roundtrips) -> Outcome {
    let mut parts = Vec::new();
    for (name, s, cap, strict) in [
        ("A2", instances::a2(), 3, true),
        ("B2", instances::b2(), 2, true),
        ("A3", instances::a3(), 1, false),
    ] {
        let atlas = Atlas::build(&s, DEFAULT_NODE_CAP).map_err(|e| e.to_string())?;
        let basis = match enumerate_basis(&atlas, cap, 0) {
            Err(e @ Error::DuplicateDegreeConflict { .. }) => return Err(format!("{name}: {e}")),
            r => r.map_err(|e| e.to_string())?,
        };
        let ctx = LeclercContext::new(&atlas, &basis).map_err(|e| e.to_string())?;
        let rep = verify_theorem(&ctx, &RScope::Variables((0..atlas.len()).collect()));
        for p in &rep.pairs {
            match &p.verdict.case {
                Case::Indeterminate { reason } => {
                    println!("  {name}: indeterminate R={:?} V={:?}: {reason}", p.r, p.v);
                    ensure(!strict, || format!("{name}: indeterminate pair {:?} x {:?}: {reason}", p.r, p.v))?;
                }
                _ => {
                    ensure(p.verdict.passed(), || {
                        format!("{name}: R={:?} V={:?} fails {:?}", p.r, p.v, p.verdict.failed_checks())
                    })?;
                    if matches!(p.verdict.case, Case::TwoTail { .. }) {
                        rt.exact += 1;
                        rt.reproduced += usize::from(p.verdict.checks.contains(&("roundtrip", true)));
                    }
                }
            }
        }
        let mut tri = (0, 0);
        for t in 0..atlas.len() {
            for r in [check_degree_triangular(&ctx, t), check_codegree_triangular(&ctx, t)] {
                let r = r.map_err(|e| e.to_string())?;
                ensure(r.fail == 0 && r.indeterminate == 0, || {
                    format!("{name} node {}: triangularity fails {} indeterminate {}", t + 1, r.fail, r.indeterminate)
                })?;
                for e in &r.entries {
                    if e.decomposition.is_exact() {
                        rt.exact += 1;
                        rt.reproduced += usize::from(e.roundtrip);
                    }
                }
                tri.0 += r.pass;
            }
            tri.1 += 1;
        }
        parts.push(format!(
            "{name} cap {cap}: basis {}, {} in basis, {} two-tail, {} indeterminate, {} triangular",
            basis.len(),
            rep.in_basis,
            rep.two_tail_pass,
            rep.indeterminate,
            tri.0
        ));
    }
    Ok(parts.join("; "))
}

fn brute_leq(s: &QuantumSeed, lower: &ExpVec, upper: &ExpVec) -> bool {
    let r = s.rank();
    let mut n = vec![0i64; r];
    loop {
        if &(upper + &s.p_star_uf(&n)) == lower {
            return true;
        }
        let mut i = 0;
        while i < r && n[i] == 6 {
            n[i] = 0;
            i += 1;
        }
        if i == r {
            return false;
        }
        n[i] += 1;
    }
}

fn random_elem(rng: &mut ChaCha8Rng, n: usize) -> QTElem {
    let terms = rng.gen_range(1..=4);
    let mut z = QTElem::zero(n);
    while z.is_zero() {
        for _ in 0..terms {
            let e = ExpVec((0..n).map(|_| rng.gen_range(-3..=3)).collect());
            let c = VCoeff::from_terms([(rng.gen_range(-2..=2), rng.gen_range(-2..=2))]);
            z.add_term(e, c);
        }
    }
    z
}

fn criterion6(rt: &Roundtrips) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED ^ 6);
    let mut positives = 0;
    for (name, s) in instances4() {
        for i in 0..200 {
            let upper = ExpVec((0..s.n()).map(|_| rng.gen_range(-4..=4)).collect());
            let lower = if i % 2 == 0 {
                let n: Vec<i64> = (0..s.rank()).map(|_| rng.gen_range(0..=6)).collect();
                &upper + &s.p_star_uf(&n)
            } else {
                ExpVec((0..s.n()).map(|_| rng.gen_range(-4..=4)).collect())
            };
            // the brute force only sees witnesses in {0..6}^r
            let order = DominanceOrder::new(&s).map_err(|e| e.to_string())?;
            let leq = dominance_leq(&s, &lower, &upper).map_err(|e| e.to_string())?;
            let fast = leq && order.witness(&lower, &upper).is_some_and(|n| n.iter().all(|&x| x <= 6));
            let slow = brute_leq(&s, &lower, &upper);
            ensure(fast == slow, || format!("{name}: dominance {lower} <= {upper} is {fast}, brute force {slow}"))?;
            positives += usize::from(slow);
        }
    }
    let form = BilinearForm::new(vec![vec![0, 1, -2], vec![-1, 0, 1], vec![2, -1, 0]]);
    for _ in 0..200 {
        let q = random_elem(&mut rng, 3);
        let d = random_elem(&mut rng, 3);
        let n = q.twisted_mul(&d, &form);
        let back = exact_divide(&n, &d, &form).map_err(|e| e.to_string())?;
        ensure(back == q, || format!("({n}) / ({d}) = {back}, expected {q}"))?;
    }
    ensure(rt.exact > 0 && rt.exact == rt.reproduced, || {
        format!("{} of {} exact decompositions reproduce their input", rt.reproduced, rt.exact)
    })?;
    Ok(format!(
        "800 dominance pairs ({positives} related), 200 divisions, {} decompositions reproduced",
        rt.reproduced
    ))
}

#[test]
fn acceptance() {
    let mut rt = Roundtrips::default();
    let mut failures = Vec::new();
    let mut report = |n: usize, budget: u64, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let over = took > Duration::from_secs(budget);
        let (status, detail) = match (&out, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over the {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        println!("criterion {n}: {status} ({:.2} s, budget {budget} s) {detail}", took.as_secs_f64());
        if status == "FAIL" {
            failures.push(n);
        }
    };
    report(1, 1, &mut criterion1);
    report(2, 5, &mut criterion2);
    report(3, 30, &mut criterion3);
    report(4, 60, &mut criterion4);
    report(5, 120, &mut || criterion5(&mut rt));
    report(6, 30, &mut || criterion6(&rt));
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
