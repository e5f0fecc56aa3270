use gaudin_core::diffop::DiffOp;
use gaudin_core::io::{operator_from_json, operator_to_json};
use gaudin_core::pipeline::{abs_cosine, puiseux_leading};
use gaudin_core::schubert::RootCoordinates;
use gaudin_core::weight::{bijection_families, omega_j, omega_term};
use gaudin_core::{CFloat, Polynomial, Rational, RationalFunction};
use proptest::prelude::*;

fn poly(c: &[i64]) -> Polynomial<Rational> {
    Polynomial::new(c.iter().map(|&x| Rational::from(x)).collect())
}

fn ratfun() -> impl Strategy<Value = RationalFunction<Rational>> {
    (prop::collection::vec(-5i64..=5, 1..4), 0i64..4, -3i64..=3).prop_map(|(num, pole_order, pole)| {
        let mut den = poly(&[1]);
        for _ in 0..pole_order {
            den = &den * &poly(&[-pole, 1]);
        }
        RationalFunction::new(poly(&num), den)
    })
}

fn operator() -> impl Strategy<Value = DiffOp<Rational>> {
    prop::collection::vec(ratfun(), 1..4).prop_map(DiffOp::monic)
}

/// A tuple `J` and root coordinates with the matching level sizes; levels
/// use disjoint integer ranges so no difference vanishes.
fn coordinates() -> impl Strategy<Value = (Vec<usize>, RootCoordinates<Rational>)> {
    (2usize..=4)
        .prop_flat_map(|rank| (Just(rank), prop::collection::vec(1..=rank, 1..=4), any::<u64>()))
        .prop_map(|(rank, j, salt)| {
            let levels = (0..rank)
                .map(|i| {
                    let size = j.iter().filter(|&&x| x > i).count();
                    (0..size)
                        .map(|k| Rational::from(100 * i as i64 + 7 * k as i64 + (salt % 5) as i64 + i as i64 * (k as i64 % 3)))
                        .collect()
                })
                .collect();
            (j, RootCoordinates::new(levels))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn memoized_weight_component_matches_the_bijection_sum((j, t) in coordinates()) {
        let rank = t.rank();
        let l: Vec<usize> = (1..rank).map(|i| t.level(i).len()).collect();
        let slots: Vec<usize> = (1..=j.len()).filter(|&s| j[s - 1] >= 2).collect();
        let mut naive = Rational::from(0);
        for beta in bijection_families(&j, &l, 10_000).unwrap() {
            let mut prod = Rational::from(1);
            for &s in &slots {
                prod *= omega_term(s, &beta, &t, &j).unwrap();
            }
            naive += prod;
        }
        prop_assert_eq!(omega_j(&t, &j, 10_000).unwrap(), naive);
    }

    #[test]
    fn operator_json_round_trip(d in operator()) {
        prop_assert_eq!(operator_from_json(&operator_to_json(&d)).unwrap(), d);
    }

    #[test]
    fn composition_is_associative_with_unit(a in operator(), b in operator(), c in operator()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&DiffOp::identity()), a.clone());
        prop_assert_eq!(DiffOp::identity().compose(&a), a.clone());
        prop_assert_eq!(a.compose(&b).order(), a.order() + b.order());
    }

    #[test]
    fn puiseux_recovers_a_synthetic_leading_term(
        lead in prop::collection::vec((-4i32..=4, -4i32..=4), 2..5),
        tail in prop::collection::vec((-4i32..=4, -4i32..=4), 2..5),
        exponent in -3i32..=3,
    ) {
        prop_assume!(lead.iter().any(|&(re, im)| re != 0 || im != 0));
        let n = lead.len().min(tail.len());
        let prec = 256;
        let c = |(re, im): (i32, i32)| CFloat::new(prec, re as f64, im as f64);
        let samples: Vec<(Rational, Vec<CFloat>)> = (0..10)
            .map(|k| {
                let eps = Rational::from((1, 1000)) / Rational::from(1u64 << k);
                let e = CFloat::new(prec, eps.to_f64(), 0.0);
                let scale = CFloat::new(prec, eps.to_f64().powi(exponent), 0.0);
                let v = (0..n).map(|i| (c(lead[i]) + c(tail[i]) * e.clone()) * scale.clone()).collect();
                (eps, v)
            })
            .collect();
        let limit = puiseux_leading(&samples, 1e-7).unwrap();
        let target: Vec<CFloat> = lead[..n].iter().map(|&x| c(x)).collect();
        prop_assert!(abs_cosine(&limit.direction, &target) > 1.0 - 1e-9);
        prop_assert!((limit.exponent - exponent as f64).abs() < 1e-2);
    }
}
