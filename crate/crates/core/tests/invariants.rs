//! Property tests: fast algebra paths against naive oracles, and
//! symmetries of the classification pipeline.

use proptest::prelude::*;

use quadwalk_core::algebra::linsolve::{solve_ratfunc, LinearSolution};
use quadwalk_core::algebra::modsolve::solve_ratfunc_particular;
use quadwalk_core::algebra::{format_rational, parse_rational, rat, Field, GcdDomain, QPoly, RatFuncT, Rational, Ring, UPoly};
use quadwalk_core::classify::{classify, Bounds};
use quadwalk_core::curve::genus;
use quadwalk_core::decouple::{decouple_xy, DenominatorMode, SearchBounds};
use quadwalk_core::enumerate::{enumerate, verify_feq};
use quadwalk_core::group::{group_report, involutions, preserves_kernel, theta};
use quadwalk_core::model::{build_kernel, degeneracy, DegeneracyStatus, WeightedModel};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn qpoly(max_len: usize) -> impl Strategy<Value = QPoly> {
    prop::collection::vec(small_rat(), 0..=max_len).prop_map(QPoly::new)
}

fn ratfunc() -> impl Strategy<Value = RatFuncT> {
    (qpoly(3), qpoly(2)).prop_map(|(n, d)| {
        if d.is_zero() {
            RatFuncT::from_base(n)
        } else {
            RatFuncT::new(n, d)
        }
    })
}

fn upoly(max_len: usize) -> impl Strategy<Value = UPoly> {
    prop::collection::vec(ratfunc(), 0..=max_len).prop_map(UPoly::new)
}

fn school<C: Ring>(a: &[C], b: &[C]) -> Vec<C> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![C::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] = v[i + j].add(&x.mul(y));
        }
    }
    v
}

/// Euclid's algorithm over a field, made monic.
fn euclid<C: Field + GcdDomain>(a: &quadwalk_core::algebra::UniPoly<C>, b: &quadwalk_core::algebra::UniPoly<C>) -> quadwalk_core::algebra::UniPoly<C> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    if a.is_zero() {
        a
    } else {
        a.monic()
    }
}

fn model() -> impl Strategy<Value = WeightedModel> {
    let weight = (1i64..=3, 1i64..=3).prop_map(|(n, d)| rat(n, d));
    (1u8..=255, prop::collection::vec(weight, 8)).prop_filter_map("nondegenerate", |(mask, ws)| {
        let base = WeightedModel::from_mask(mask)?;
        let steps: Vec<_> = base
            .steps()
            .zip(ws)
            .map(|((s, _), w)| ((s.dx as i64, s.dy as i64), w))
            .collect();
        let m = WeightedModel::new(steps).ok()?;
        (degeneracy(&m).status == DegeneracyStatus::NonDegenerate).then_some(m)
    })
}

fn quick() -> Bounds {
    Bounds {
        series_order: 0,
        decouple_degree: 3,
        group_n: 6,
        ..Bounds::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_strings_round_trip(r in small_rat()) {
        prop_assert_eq!(parse_rational(&format_rational(&r)), Some(r));
    }

    #[test]
    fn rational_products_match_schoolbook(a in qpoly(12), b in qpoly(12)) {
        prop_assert_eq!(a.mul(&b), QPoly::new(school(a.coeffs(), b.coeffs())));
    }

    #[test]
    fn bivariate_products_match_schoolbook(
        a in prop::collection::vec(qpoly(6), 1..6),
        b in prop::collection::vec(qpoly(6), 1..6),
    ) {
        use quadwalk_core::algebra::UniPoly;
        let (pa, pb) = (UniPoly::new(a.clone()), UniPoly::new(b.clone()));
        prop_assert_eq!(pa.mul(&pb), UniPoly::new(school(&a, &b)));
    }

    #[test]
    fn rational_gcd_matches_euclid(a in qpoly(5), b in qpoly(5), c in qpoly(4)) {
        let (x, y) = (a.mul(&c), b.mul(&c));
        let g = x.gcd(&y);
        prop_assert_eq!(g.clone(), euclid(&x, &y));
        if !c.is_zero() {
            prop_assert!(g.rem(&c).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ratfunc_gcd_matches_euclid(a in upoly(3), b in upoly(3), c in upoly(3)) {
        let (x, y) = (a.mul(&c), b.mul(&c));
        let g = x.gcd(&y);
        prop_assert_eq!(g.clone(), euclid(&x, &y));
        if !c.is_zero() {
            prop_assert!(g.rem(&c).is_zero());
        }
    }

    #[test]
    fn modular_solver_matches_bareiss(
        rows in 1usize..5,
        cols in 1usize..5,
        entries in prop::collection::vec(ratfunc(), 25),
        z in prop::collection::vec(ratfunc(), 5),
        junk in ratfunc(),
        consistent in any::<bool>(),
    ) {
        let m: Vec<Vec<RatFuncT>> = (0..rows).map(|i| entries[i * 5..i * 5 + cols].to_vec()).collect();
        let mut rhs: Vec<RatFuncT> = m
            .iter()
            .map(|r| r.iter().zip(&z).fold(RatFuncT::zero(), |acc, (a, b)| acc.add(&a.mul(b))))
            .collect();
        if !consistent {
            rhs[0] = rhs[0].add(&junk);
        }
        let fast = solve_ratfunc_particular(&m, &rhs);
        match solve_ratfunc(&m, &rhs) {
            LinearSolution::Inconsistent => prop_assert!(fast.is_none()),
            LinearSolution::Solved { particular, .. } => prop_assert_eq!(fast, Some(particular)),
        }
    }

    #[test]
    fn involutions_fix_the_kernel(m in model()) {
        let k = build_kernel(&m);
        let (i1, i2) = involutions(&k);
        prop_assert!(i1.compose(&i1).is_identity());
        prop_assert!(i2.compose(&i2).is_identity());
        prop_assert!(preserves_kernel(&k, &i1));
        prop_assert!(preserves_kernel(&k, &i2));
        prop_assert!(preserves_kernel(&k, &theta(&k)));
    }

    #[test]
    fn functional_equation_holds(m in model()) {
        prop_assert!(verify_feq(&m, 8).holds());
    }

    #[test]
    fn transposition_swaps_coordinates(m in model()) {
        let (a, b) = (enumerate(&m, 6), enumerate(&m.transpose(), 6));
        for n in 0..=6 {
            for i in 0..=n {
                for j in 0..=n {
                    prop_assert_eq!(a.q(i, j, n), b.q(j, i, n));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn verdicts_are_transposition_invariant(m in model()) {
        let (a, b) = (classify(&m, quick()), classify(&m.transpose(), quick()));
        prop_assert_eq!(a.verdict.outcome, b.verdict.outcome);
        prop_assert_eq!(a.verdict.certainty, b.verdict.certainty);
    }

    #[test]
    fn scaling_the_weights_keeps_the_structure(m in model(), c in (1i64..=5, 1i64..=5)) {
        let scaled = m.scale(&rat(c.0, c.1));
        let (k, ks) = (build_kernel(&m), build_kernel(&scaled));
        let (g, gs) = (genus(&k).map(|r| r.genus), genus(&ks).map(|r| r.genus));
        prop_assert_eq!(g.clone(), gs);
        if g == Ok(quadwalk_core::curve::Genus::One) {
            prop_assert_eq!(group_report(&k, 6, 20).order_curve, group_report(&ks, 6, 20).order_curve);
            let b = SearchBounds::new(3, DenominatorMode::DiscriminantFactors);
            prop_assert_eq!(
                decouple_xy(&k, b).certificate().is_some(),
                decouple_xy(&ks, b).certificate().is_some()
            );
        }
    }

    #[test]
    fn reports_are_reproducible(m in model()) {
        prop_assert_eq!(classify(&m, quick()).to_json(), classify(&m, quick()).to_json());
    }
}
