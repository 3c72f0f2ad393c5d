//! Property suites: randomized checks of the arithmetic core against exact
//! rational computation and an independent logarithm oracle.

mod common;

use arithdist::matrix::{adjugate_bigint, determinant_bigint, mat_mul_bigint};
use arithdist::monomial::{monomial_count, monomials, HomPoly};
use arithdist::{
    enumerate_points, ln_interval, log_enclosure, Dyadic, HeightInterval, Morphism, ProjPoint,
    Round, VerifiedMorphism,
};
use common::ln_oracle;
use num::{BigInt, BigRational, One, Signed, Zero};
use proptest::prelude::*;
use std::collections::HashSet;

fn rational() -> impl Strategy<Value = BigRational> {
    (-9_000i64..=9_000, 1i64..=9_000)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("nonzero", |q| !q.is_zero())
}

fn positive_rational() -> impl Strategy<Value = BigRational> {
    (1i64..=1_000_000, 1i64..=1_000_000)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn dyadic() -> impl Strategy<Value = Dyadic> {
    (-(1i64 << 40)..(1i64 << 40), -30i64..30)
        .prop_map(|(m, e)| Dyadic::new(BigInt::from(m), e))
}

prop_compose! {
    fn point_tuple()(len in 2usize..=3, coords in proptest::collection::vec(rational(), 3))
        -> Vec<BigRational>
    {
        coords.into_iter().take(len).collect()
    }
}

fn overlaps_rational(iv: &HeightInterval, lo: &BigRational, hi: &BigRational) -> bool {
    iv.lo().to_rational() <= *hi && *lo <= iv.hi().to_rational()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn log_enclosure_agrees_with_the_series_oracle(n in 2u64..=1_000_000) {
        let iv = log_enclosure(&BigInt::from(n), 64).unwrap();
        let (lo, hi) = ln_oracle(&BigRational::from_integer(n.into()), 50);
        prop_assert!(overlaps_rational(&iv, &lo, &hi), "disjoint from oracle at n = {n}");
        prop_assert!(hi.clone() - lo <= BigRational::new(1.into(), BigInt::from(1u64 << 60)));
        let width = iv.hi().to_rational() - iv.lo().to_rational();
        prop_assert!(width <= BigRational::new(1.into(), BigInt::from(1u64 << 40)));
    }

    #[test]
    fn ln_interval_agrees_with_the_series_oracle(q in positive_rational()) {
        let x = HeightInterval::from_rational(&q, 96);
        let iv = ln_interval(&x, 96);
        let (lo, hi) = ln_oracle(&q, 50);
        prop_assert!(overlaps_rational(&iv, &lo, &hi));
    }

    #[test]
    fn directed_dyadic_ops_bracket_exact_arithmetic(a in dyadic(), b in dyadic()) {
        let (ra, rb) = (a.to_rational(), b.to_rational());
        for prec in [8u32, 24, 53] {
            let cases: [(&str, Dyadic, Dyadic, BigRational); 3] = [
                ("add", a.add_round(&b, prec, Round::Floor), a.add_round(&b, prec, Round::Ceil), &ra + &rb),
                ("sub", a.sub_round(&b, prec, Round::Floor), a.sub_round(&b, prec, Round::Ceil), &ra - &rb),
                ("mul", a.mul_round(&b, prec, Round::Floor), a.mul_round(&b, prec, Round::Ceil), &ra * &rb),
            ];
            for (name, lo, hi, exact) in cases {
                prop_assert!(lo.to_rational() <= exact, "{name} floor at {prec}");
                prop_assert!(exact <= hi.to_rational(), "{name} ceil at {prec}");
            }
            if !b.is_zero() {
                let exact = &ra / &rb;
                prop_assert!(a.div_round(&b, prec, Round::Floor).to_rational() <= exact);
                prop_assert!(exact <= a.div_round(&b, prec, Round::Ceil).to_rational());
            }
        }
    }

    #[test]
    fn interval_operations_contain_exact_results(x in rational(), y in rational(), s in rational()) {
        let prec = 48;
        let ix = HeightInterval::from_rational(&x, prec);
        let iy = HeightInterval::from_rational(&y, prec);
        prop_assert!(ix.add(&iy, prec).contains_rational(&(&x + &y)));
        prop_assert!(ix.sub(&iy, prec).contains_rational(&(&x - &y)));
        prop_assert!(ix.mul(&iy, prec).contains_rational(&(&x * &y)));
        let diff = (&x - &y).abs();
        prop_assert!(ix.abs_diff(&iy, prec).contains_rational(&diff));
        prop_assert!(ix.scale_rational(&s, prec).contains_rational(&(&x * &s)));
        prop_assert!(ix.max_with(&iy).contains_rational(&x.clone().max(y.clone())));
    }

    #[test]
    fn normalization_is_idempotent_and_scaling_invariant(
        raw in point_tuple().prop_filter("not all zero", |v| v.iter().any(|c| !c.is_zero())),
        lambda in nonzero_rational(),
    ) {
        let p = ProjPoint::normalize(&raw).unwrap();
        let again = ProjPoint::normalize(
            &p.coords().iter().map(|c| BigRational::from_integer(c.clone())).collect::<Vec<_>>(),
        ).unwrap();
        prop_assert_eq!(&again, &p);
        let scaled: Vec<BigRational> = raw.iter().map(|c| c * &lambda).collect();
        prop_assert_eq!(&ProjPoint::normalize(&scaled).unwrap(), &p);

        let unit_box = p.coords().iter().all(|c| c.abs() <= BigInt::one());
        prop_assert_eq!(p.weil_height(48).is_exact_zero(), unit_box);
    }

    #[test]
    fn adjugate_identity(size in 2usize..=4, seed in proptest::collection::vec(-6i64..=6, 16)) {
        let a: Vec<Vec<BigInt>> = (0..size)
            .map(|i| (0..size).map(|j| BigInt::from(seed[i * 4 + j])).collect())
            .collect();
        let det = determinant_bigint(&a);
        let prod = mat_mul_bigint(&a, &adjugate_bigint(&a));
        for (i, row) in prod.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let expect = if i == j { det.clone() } else { BigInt::zero() };
                prop_assert_eq!(entry, &expect);
            }
        }
    }

    #[test]
    fn polynomial_products_commute_with_evaluation(
        nvars in 2usize..=3,
        da in 1u32..=2,
        db in 1u32..=2,
        coeffs in proptest::collection::vec(-9i64..=9, 40),
        coords in proptest::collection::vec(-7i64..=7, 3),
    ) {
        let take = |offset: usize, d: u32| {
            let k = monomial_count(nvars, d);
            HomPoly::from_coeffs(
                nvars,
                d,
                (0..k).map(|i| BigInt::from(coeffs[(offset + i) % coeffs.len()])).collect(),
            )
        };
        let f = take(0, da);
        let g = take(17, db);
        let xs: Vec<BigInt> = coords.iter().take(nvars).map(|&c| BigInt::from(c)).collect();
        let fg = f.mul(&g);
        prop_assert_eq!(fg.eval_bigint(&xs), f.eval_bigint(&xs) * g.eval_bigint(&xs));
        prop_assert_eq!(&g.mul(&f), &fg);
        if da == db {
            let sum = f.add(&g);
            prop_assert_eq!(sum.eval_bigint(&xs), f.eval_bigint(&xs) + g.eval_bigint(&xs));
        }
    }

    #[test]
    fn morphism_serialization_round_trips(
        degree in 1u32..=3,
        coeffs in proptest::collection::vec(-9i64..=9, 20),
    ) {
        let k = monomial_count(2, degree);
        let rows: Vec<Vec<BigInt>> = (0..2)
            .map(|i| (0..k).map(|j| BigInt::from(coeffs[(i * k + j) % coeffs.len()])).collect())
            .collect();
        prop_assume!(rows.iter().flatten().any(|c| !c.is_zero()));
        let m = Morphism::from_coeff_rows(1, degree, rows).unwrap();
        let js = serde_json::to_string(&m).unwrap();
        let back: Morphism = serde_json::from_str(&js).unwrap();
        prop_assert_eq!(back, m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn iteration_is_a_semigroup_action(
        which in 0usize..=3,
        x in -20i64..=20,
        y in -20i64..=20,
        z in -20i64..=20,
        a in 1u32..=2,
        b in 1u32..=2,
    ) {
        let pool = verified_pool();
        let map = pool[which].map();
        let coords: Vec<BigInt> = if map.dim() == 1 {
            vec![BigInt::from(x), BigInt::from(y)]
        } else {
            vec![BigInt::from(x), BigInt::from(y), BigInt::from(z)]
        };
        prop_assume!(coords.iter().any(|c| !c.is_zero()));
        let p = ProjPoint::from_integers(&coords).unwrap();
        let joined = map.evaluate(&p, a + b).unwrap().0;
        let staged = map.evaluate(&map.evaluate(&p, a).unwrap().0, b).unwrap().0;
        prop_assert_eq!(joined, staged);
    }
}

fn verified_pool() -> Vec<VerifiedMorphism> {
    [
        Morphism::power(1, 2),
        Morphism::construct(1, 2, &["x0^2 + x1^2", "x0*x1"]).unwrap(),
        Morphism::phi_a(2, &BigInt::from(3)).unwrap(),
        Morphism::power(2, 2),
    ]
    .into_iter()
    .map(|m| VerifiedMorphism::new(m).unwrap())
    .collect()
}

#[test]
fn point_enumeration_grows_strictly_and_without_duplicates() {
    let mut last = 0usize;
    for bound in 1..=6u32 {
        let points = enumerate_points(1, bound);
        assert!(points.len() > last, "not strictly increasing at bound {bound}");
        last = points.len();
        let set: HashSet<_> = points.iter().collect();
        assert_eq!(set.len(), points.len(), "duplicates at bound {bound}");
        assert!(points
            .iter()
            .all(|p| p.max_abs_coord() <= BigInt::from(bound)));
    }
}

#[test]
fn monomial_order_is_strictly_descending_lex() {
    for nvars in 2..=4usize {
        for degree in 1..=4u32 {
            let ms = monomials(nvars, degree);
            assert_eq!(ms.len(), monomial_count(nvars, degree));
            for pair in ms.windows(2) {
                assert!(pair[0] > pair[1], "order violated: {:?} !> {:?}", pair[0], pair[1]);
            }
            assert!(ms.iter().all(|m| m.iter().sum::<u32>() == degree));
        }
    }
}
