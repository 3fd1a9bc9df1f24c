//! Randomized invariants across the library.

use hvir::algebra::{AlgebraElement, BasisKey, PhiVariant, RescalingMap};
use hvir::analysis::{closure, recover_params, restriction_report, ActionTable, Window};
use hvir::groups::{normalize_alpha, Exponent, SubgroupSpec};
use hvir::intermediate::{act, iso_check, ModuleParams, WeightVector};
use hvir::parse::{parse_element, parse_params};
use hvir::scalar::{q, Rational};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn rational(max: i64, denoms: &'static [i64]) -> impl Strategy<Value = Rational> {
    (-max..=max, proptest::sample::select(denoms)).prop_map(|(n, d)| q(n, d))
}

fn positive(max: i64) -> impl Strategy<Value = Rational> {
    (1..=max, 1..=max).prop_map(|(n, d)| q(n, d))
}

fn cyclic() -> impl Strategy<Value = SubgroupSpec> {
    positive(12).prop_map(|g| SubgroupSpec::cyclic(g).unwrap())
}

fn group() -> impl Strategy<Value = SubgroupSpec> {
    let sn = proptest::collection::btree_map(
        proptest::sample::select(&[2u64, 3, 5, 7][..]),
        prop_oneof![(1u32..3).prop_map(Exponent::Finite), Just(Exponent::Infinite)],
        1..3,
    )
    .prop_map(|mut m| {
        let first = *m.keys().next().unwrap();
        m.insert(first, Exponent::Infinite);
        SubgroupSpec::supernatural(m).unwrap()
    });
    prop_oneof![
        4 => cyclic(),
        2 => sn,
        1 => Just(SubgroupSpec::FullQ),
        1 => Just(SubgroupSpec::Trivial),
    ]
}

const SIXTHS: &[i64] = &[1, 2, 3, 6];

fn key() -> impl Strategy<Value = BasisKey> {
    prop_oneof![
        4 => rational(12, SIXTHS).prop_map(BasisKey::D),
        4 => rational(12, SIXTHS).prop_map(BasisKey::I),
        1 => Just(BasisKey::CD),
        1 => Just(BasisKey::CDI),
        1 => Just(BasisKey::CI),
    ]
}

fn element_with(keys: impl Strategy<Value = BasisKey>) -> impl Strategy<Value = AlgebraElement> {
    proptest::collection::vec((keys, rational(9, &[1, 2, 5])), 0..5).prop_map(AlgebraElement::from_terms)
}

fn element() -> impl Strategy<Value = AlgebraElement> {
    element_with(key())
}

fn integral_element(central: bool) -> impl Strategy<Value = AlgebraElement> {
    let n = || (-10i64..=10).prop_map(Rational::from);
    let keys = if central {
        prop_oneof![
            n().prop_map(BasisKey::D),
            n().prop_map(BasisKey::I),
            Just(BasisKey::CD),
            Just(BasisKey::CDI),
            Just(BasisKey::CI)
        ]
        .boxed()
    } else {
        prop_oneof![n().prop_map(BasisKey::D), n().prop_map(BasisKey::I)].boxed()
    };
    element_with(keys)
}

fn params_over(group: SubgroupSpec) -> impl Strategy<Value = ModuleParams> {
    (rational(6, &[1, 2, 3, 5]), rational(6, &[1, 2, 3]), rational(4, &[1, 2]))
        .prop_map(move |(a, b, f)| ModuleParams::new(a, b, f, group.clone()).unwrap())
}

/// Structure constants written out directly, independent of the library.
fn oracle_bracket(x: &BasisKey, y: &BasisKey) -> AlgebraElement {
    use BasisKey::*;
    let delta = |s: &Rational| s.is_zero();
    let mut out = AlgebraElement::zero();
    match (x, y) {
        (D(g), D(h)) => {
            out.add_term(D(g + h), &(h - g));
            if delta(&(g + h)) {
                out.add_term(CD, &((g * g * g - g) / Rational::from(12)));
            }
        }
        (D(g), I(h)) => {
            out.add_term(I(g + h), h);
            if delta(&(g + h)) {
                out.add_term(CDI, &(g * g + g));
            }
        }
        (I(_), D(_)) => return -oracle_bracket(y, x),
        (I(g), I(h)) if delta(&(g + h)) => out.add_term(CI, g),
        _ => {}
    }
    out
}

fn in_window(v: &WeightVector, w: &Window) -> bool {
    v.indices().all(|q| w.contains(q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lattice_laws(g in cyclic(), h in cyclic(), k in cyclic()) {
        prop_assert_eq!(g.sum(&h), h.sum(&g));
        prop_assert_eq!(g.intersect(&h), h.intersect(&g));
        prop_assert_eq!(g.sum(&h).sum(&k), g.sum(&h.sum(&k)));
        prop_assert_eq!(g.intersect(&h).intersect(&k), g.intersect(&h.intersect(&k)));
        prop_assert_eq!(g.sum(&g), g.clone());
        prop_assert_eq!(g.intersect(&g), g.clone());
        prop_assert_eq!(g.sum(&g.intersect(&h)), g.clone());
        prop_assert_eq!(g.intersect(&g.sum(&h)), g);
    }

    #[test]
    fn membership_is_consistent(g in group(), h in group(), x in rational(40, &[1, 2, 3, 4, 8, 9, 25, 49])) {
        if g.contains(&x) || h.contains(&x) {
            prop_assert!(g.sum(&h).contains(&x));
        }
        prop_assert_eq!(g.intersect(&h).contains(&x), g.contains(&x) && h.contains(&x));
        prop_assert!(g.is_subgroup_of(&g.sum(&h)));
        prop_assert!(g.intersect(&h).is_subgroup_of(&g));
        prop_assert_eq!(g.is_subgroup_of(&h), g.sum(&h) == h);
        prop_assert_eq!(g.finitely_generated(), matches!(g, SubgroupSpec::Trivial | SubgroupSpec::Cyclic(_)));
        prop_assert_eq!(g.rank(), if g.is_trivial() { 0 } else { 1 });
    }

    #[test]
    fn normalize_alpha_is_idempotent(g in group(), a in rational(30, &[1, 2, 3, 7, 12])) {
        let n = normalize_alpha(&a, &g);
        prop_assert_eq!(normalize_alpha(&n, &g), n.clone());
        prop_assert!(g.contains(&(&a - &n)));
    }

    #[test]
    fn qk_chain(k in 1u32..7, n in -200i64..200) {
        let x = &Rational::from(n) / &Rational::factorial(k);
        prop_assert_eq!(SubgroupSpec::qk(k), SubgroupSpec::cyclic(Rational::factorial(k).recip()).unwrap());
        prop_assert!(SubgroupSpec::qk(k).contains(&x));
        prop_assert!(SubgroupSpec::qk(k + 1).contains(&x));
        prop_assert!(SubgroupSpec::qk(k).is_subgroup_of(&SubgroupSpec::qk(k + 1)));
    }

    #[test]
    fn bracket_matches_structure_constants(x in key(), y in key()) {
        let lib = AlgebraElement::basis(x.clone()).bracket(&AlgebraElement::basis(y.clone()));
        prop_assert_eq!(lib, oracle_bracket(&x, &y));
    }

    #[test]
    fn bracket_is_alternating_and_bilinear(x in element(), y in element(), z in element(), c in rational(5, &[1, 3])) {
        prop_assert!(x.bracket(&x).is_zero());
        prop_assert_eq!(x.bracket(&y), -y.bracket(&x));
        prop_assert_eq!(
            x.bracket(&(y.clone() + z.scale(&c))),
            x.bracket(&y) + x.bracket(&z).scale(&c)
        );
    }

    #[test]
    fn jacobi_identity(x in element(), y in element(), z in element()) {
        prop_assert!(AlgebraElement::jacobiator(&x, &y, &z).is_zero());
    }

    #[test]
    fn bracket_respects_grading(x in key(), y in key()) {
        let z = AlgebraElement::basis(x.clone()).bracket(&AlgebraElement::basis(y.clone()));
        let w = x.weight() + y.weight();
        for (k, _) in z.terms() {
            prop_assert_eq!(k.weight(), w.clone());
        }
    }

    #[test]
    fn subalgebras_are_closed(g in cyclic(), x in element(), y in element()) {
        if x.in_subalgebra(&g) && y.in_subalgebra(&g) {
            prop_assert!(x.bracket(&y).in_subalgebra(&g));
        }
    }

    #[test]
    fn centerless_phi_is_homomorphic_mod_center(m in 1u32..4, x in integral_element(false), y in integral_element(false)) {
        let phi = RescalingMap::new(m, PhiVariant::Centerless).unwrap();
        let lhs = phi.apply(&x.bracket(&y).drop_central()).unwrap();
        let rhs = phi.apply(&x).unwrap().bracket(&phi.apply(&y).unwrap());
        prop_assert_eq!(lhs, rhs.drop_central());
    }

    #[test]
    fn exact_phi_is_homomorphic(m in 1u32..4, x in integral_element(true), y in integral_element(true)) {
        let phi = RescalingMap::new(m, PhiVariant::ExactCentral).unwrap();
        let lhs = phi.apply(&x.bracket(&y)).unwrap();
        let rhs = phi.apply(&x).unwrap().bracket(&phi.apply(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_is_a_representation(
        p in params_over(SubgroupSpec::cyclic(q(1, 6)).unwrap()),
        x in element(),
        y in element(),
        h in rational(12, SIXTHS),
    ) {
        let v = WeightVector::basis(h);
        let lhs = act(&p, &x.bracket(&y), &v).unwrap();
        let xy = act(&p, &x, &act(&p, &y, &v).unwrap()).unwrap();
        let yx = act(&p, &y, &act(&p, &x, &v).unwrap()).unwrap();
        let mut rhs = xy;
        rhs.add_scaled(&yx, &-Rational::one());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn iso_check_is_an_equivalence(
        a in proptest::collection::vec(rational(3, &[1, 2, 3]), 3),
        b in proptest::sample::select(&[0i64, 1, 2][..]),
        f in proptest::sample::select(&[0i64, 2][..]),
    ) {
        let ps: Vec<_> = a
            .iter()
            .map(|a| ModuleParams::new(a.clone(), Rational::from(b), Rational::from(f), SubgroupSpec::integers()).unwrap())
            .collect();
        let iso = |i: usize, j: usize| iso_check(&ps[i], &ps[j]).unwrap().is_some();
        for i in 0..3 {
            prop_assert!(iso(i, i));
            for j in 0..3 {
                prop_assert_eq!(iso(i, j), iso(j, i));
                for k in 0..3 {
                    if iso(i, j) && iso(j, k) {
                        prop_assert!(iso(i, k));
                    }
                }
            }
        }
    }

    #[test]
    fn closure_is_monotone_and_idempotent(
        p in params_over(SubgroupSpec::integers()),
        s in proptest::collection::vec(-4i64..=4, 1..3),
        t in -4i64..=4,
    ) {
        let w = Window::integers(4).unwrap();
        let seeds: Vec<_> = s.iter().map(|&n| WeightVector::basis(Rational::from(n))).collect();
        let small = closure(&p, &w, &seeds).unwrap();
        let mut more = seeds.clone();
        more.push(WeightVector::basis(Rational::from(t)));
        let big = closure(&p, &w, &more).unwrap();
        prop_assert!(small.rows().iter().all(|r| big.contains(r)));
        prop_assert_eq!(closure(&p, &w, small.rows()).unwrap(), small.clone());
        for g in w.generators() {
            for r in small.rows() {
                let image = hvir::analysis::act_truncated(&p, &g, r, &w);
                prop_assert!(in_window(&image, &w));
                prop_assert!(small.contains(&image));
            }
        }
    }

    #[test]
    fn restriction_reassembles(p in params_over(SubgroupSpec::cyclic(q(1, 6)).unwrap()), sub in 1i64..4) {
        let sub = SubgroupSpec::cyclic(Rational::from(sub)).unwrap();
        let w = Window::new(p.group().clone(), 8).unwrap();
        let cosets = restriction_report(&p, &sub, &w).unwrap();
        let mut seen: Vec<Rational> = cosets.iter().flat_map(|c| c.indices.clone()).collect();
        seen.sort();
        prop_assert_eq!(seen, w.indices());
        for c in &cosets {
            // v_h ↦ u_{h - rep + delta} identifies the coset with the component module.
            let delta = p.alpha() + &c.representative - c.params.alpha();
            prop_assert!(sub.contains(&delta));
            for h in &c.indices {
                prop_assert!(sub.contains(&(h - &c.representative)));
                let k = h - &c.representative + &delta;
                for g in [-2i64, -1, 1, 3] {
                    let g = Rational::from(g) * sub.cyclic_generator().unwrap();
                    prop_assert_eq!(p.d_coeff(&g, h), c.params.d_coeff(&g, &k));
                }
            }
        }
    }

    #[test]
    fn recovery_inverts_table_construction(
        p in params_over(SubgroupSpec::integers()),
        scales in proptest::collection::vec(rational(7, &[1, 2, 3]).prop_filter("nonzero", |c| !c.is_zero()), 11),
    ) {
        let w = Window::integers(5).unwrap();
        let scales: BTreeMap<Rational, Rational> = w.indices().into_iter().zip(scales).collect();
        let table = ActionTable::of_module(&p, &w).unwrap().rescaled(&scales);
        let text = table.to_text();
        prop_assert_eq!(text.parse::<ActionTable>().unwrap(), table.clone());
        let rec = recover_params(&table).unwrap();
        prop_assert_eq!(rec.params.alpha(), p.alpha());
        prop_assert_eq!(rec.params.big_f(), p.big_f());
        if !p.big_f().is_zero() {
            prop_assert_eq!(rec.params.beta(), p.beta());
        } else {
            let one_minus = Rational::one() - p.beta();
            prop_assert!(rec.params.beta() == p.beta() || *rec.params.beta() == one_minus);
        }
        let rebuilt = ActionTable::of_module(&rec.params, &w).unwrap().rescaled(&rec.scales);
        prop_assert_eq!(rebuilt, table);
    }

    #[test]
    fn element_text_round_trips(x in element()) {
        prop_assert_eq!(parse_element(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn group_and_params_text_round_trip(g in group(), p in params_over(SubgroupSpec::cyclic(q(1, 6)).unwrap())) {
        prop_assert_eq!(g.to_string().parse::<SubgroupSpec>().unwrap(), g);
        prop_assert_eq!(parse_params(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn rational_text_round_trips(x in rational(10_000, &[1, 7, 12, 360])) {
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }
}
