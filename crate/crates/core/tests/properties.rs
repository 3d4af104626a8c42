use proptest::prelude::*;

use qcluster::expansion::{Atlas, DEFAULT_NODE_CAP};
use qcluster::instances;
use qcluster::leclerc::MonomialResolver;
use qcluster::pointed::{decompose, decompose_with, BasisLookup, DominanceOrder, Side};
use qcluster::qtorus::{exact_divide, exact_divide_left};
use qcluster::seed::QuantumSeed;
use qcluster::{BilinearForm, ExpVec, QTElem, VCoeff};

const DIM: usize = 3;

fn exp() -> impl Strategy<Value = ExpVec> {
    prop::collection::vec(-3i64..=3, DIM).prop_map(ExpVec)
}

fn coeff() -> impl Strategy<Value = VCoeff> {
    prop::collection::vec((-3i64..=3, -2i64..=2), 1..3)
        .prop_map(VCoeff::from_terms)
        .prop_filter("nonzero", |c| !c.is_zero())
}

fn elem() -> impl Strategy<Value = QTElem> {
    prop::collection::vec((exp(), coeff()), 1..4)
        .prop_map(|ts| QTElem::from_terms(DIM, ts))
        .prop_filter("nonzero", |z| !z.is_zero())
}

fn form() -> impl Strategy<Value = BilinearForm> {
    (-2i64..=2, -2i64..=2, -2i64..=2).prop_map(|(a, b, c)| {
        BilinearForm::new(vec![vec![0, a, b], vec![-a, 0, c], vec![-b, -c, 0]])
    })
}

fn seeds() -> Vec<QuantumSeed> {
    vec![instances::a2(), instances::b2(), instances::a3(), instances::a2_principal()]
}

proptest! {
    #[test]
    fn quasi_commutation(l in form(), a in exp(), b in exp()) {
        let xa = QTElem::monomial(a.clone());
        let xb = QTElem::monomial(b.clone());
        let lhs = xa.twisted_mul(&xb, &l);
        let rhs = xb.twisted_mul(&xa, &l).shift_v(2 * l.eval(&a, &b));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn twisted_product_is_associative(l in form(), a in elem(), b in elem(), c in elem()) {
        let left = a.twisted_mul(&b, &l).twisted_mul(&c, &l);
        let right = a.twisted_mul(&b.twisted_mul(&c, &l), &l);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn bar_is_an_antiautomorphism(l in form(), a in elem(), b in elem()) {
        prop_assert_eq!(a.twisted_mul(&b, &l).bar(), b.bar().twisted_mul(&a.bar(), &l));
        prop_assert_eq!(a.bar().bar(), a);
    }

    #[test]
    fn division_inverts_multiplication(l in form(), q in elem(), d in elem()) {
        let n = q.twisted_mul(&d, &l);
        prop_assert_eq!(exact_divide(&n, &d, &l).unwrap(), q.clone());
        let n = d.twisted_mul(&q, &l);
        prop_assert_eq!(exact_divide_left(&n, &d, &l).unwrap(), q);
    }

    #[test]
    fn dominance_is_a_partial_order(which in 0usize..4, a in exp4(), b in exp4(), c in exp4()) {
        let s = &seeds()[which];
        let o = DominanceOrder::new(s).unwrap();
        let (a, b, c) = (trim(&a, s.n()), trim(&b, s.n()), trim(&c, s.n()));
        prop_assert!(o.leq(&a, &a));
        if o.leq(&a, &b) && o.leq(&b, &a) {
            prop_assert_eq!(&a, &b);
        }
        if o.leq(&a, &b) && o.leq(&b, &c) {
            prop_assert!(o.leq(&a, &c));
        }
    }

    #[test]
    fn dominance_matches_brute_force(which in 0usize..4, g in exp4(), n in prop::collection::vec(0i64..=3, 3)) {
        let s = &seeds()[which];
        let o = DominanceOrder::new(s).unwrap();
        let g = trim(&g, s.n());
        let n: Vec<i64> = n[..s.rank()].to_vec();
        let lower = &g + &s.p_star_uf(&n);
        prop_assert!(o.leq(&lower, &g));
        prop_assert_eq!(o.witness(&lower, &g), Some(n.clone()));
        let brute: Vec<ExpVec> = boxes(&n).into_iter().map(|m| &g + &s.p_star_uf(&m)).collect();
        let mut got = o.interval(&lower, &g).unwrap();
        let mut want = brute;
        got.sort();
        want.sort();
        want.dedup();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn mutation_is_an_involution(which in 0usize..4, word in prop::collection::vec(0usize..3, 0..6), k in 0usize..3) {
        let s = &seeds()[which];
        let word: Vec<usize> = word.into_iter().filter_map(|x| s.unfrozen().get(x % s.rank()).copied()).collect();
        let k = s.unfrozen()[k % s.rank()];
        let t = s.mutate_word(&word).unwrap();
        prop_assert_eq!(t.mutate(k).unwrap().mutate(k).unwrap(), t.clone());
        prop_assert_eq!(t.opposite().mutate(k).unwrap(), t.mutate(k).unwrap().opposite());
        for &i in t.unfrozen() {
            for (c, &kk) in t.unfrozen().iter().enumerate() {
                let mut e = vec![0; t.rank()];
                e[c] = 1;
                let want = if i == kk { -t.d()[c] } else { 0 };
                prop_assert_eq!(t.lambda_eval(&ExpVec::unit(t.n(), i), &t.p_star_uf(&e)), want);
            }
        }
    }

    #[test]
    fn decomposition_ignores_tie_breaking(node in 0usize..5, var in 0usize..2, l in 0usize..5, li in 0usize..2, picks in prop::collection::vec(any::<u8>(), 64)) {
        let atlas = Atlas::build(&instances::a2(), DEFAULT_NODE_CAP).unwrap();
        let chart = &atlas.charts[node];
        let frame = &chart.frame;
        let o = &frame.order;
        let res = MonomialResolver::new(chart).unwrap();
        let lz = chart.nodes[l].cluster_monomial(&ExpVec::unit(2, li)).unwrap();
        let z = frame.mul(&QTElem::monomial(ExpVec::unit(2, var)), &lz.twisted_mul(&lz, &frame.form));
        let window = o.bidegree(&z).unwrap();
        let base = decompose(o, &z, &res.by_degree(), &window);
        prop_assert!(base.is_exact());
        let mut i = 0;
        let shuffled = decompose_with(o, &z, &res.by_degree(), &window, Side::Degree, |c| {
            i += 1;
            c[picks[i % picks.len()] as usize % c.len()].clone()
        });
        prop_assert_eq!(shuffled.sorted_pairs(), base.sorted_pairs());
        prop_assert_eq!(base.reconstruct(2), z);
        for t in &base.terms {
            prop_assert_eq!(res.by_degree().lookup(&t.key), Some(t.element.clone()));
        }
    }
}

fn exp4() -> impl Strategy<Value = ExpVec> {
    prop::collection::vec(-4i64..=4, 4).prop_map(ExpVec)
}

fn trim(g: &ExpVec, n: usize) -> ExpVec {
    ExpVec(g.0[..n].to_vec())
}

fn boxes(n: &[i64]) -> Vec<Vec<i64>> {
    n.iter().fold(vec![vec![]], |acc, &x| {
        acc.into_iter()
            .flat_map(|v| (0..=x).map(move |y| {
                let mut v = v.clone();
                v.push(y);
                v
            }))
            .collect()
    })
}
