use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use supergas::grassmann::GExpr;
use supergas::parse::parse_expr;
use supergas::sample::*;
use supergas::superspace::{operator_algebra_check, std as coords, total_derivative, Calculus, Coord, Total};

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn graded_leibniz(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, oa) = random_any(&mut r);
        let (b, _) = random_any(&mut r);
        prop_assert!(leibniz_holds(&a, oa, &b).unwrap());
    }

    #[test]
    fn associative_and_graded_commutative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, oa) = random_any(&mut r);
        let (b, ob) = random_any(&mut r);
        let (c, _) = random_any(&mut r);
        prop_assert!(algebra_holds((&a, oa), (&b, ob), &c));
    }

    #[test]
    fn odd_elements_are_nilpotent(seed in any::<u64>()) {
        let mut r = rng(seed);
        let odd = random_expr(&mut r, true);
        let (a, _) = random_any(&mut r);
        prop_assert!(nilpotency_holds(&odd, &a));
    }

    #[test]
    fn derivatives_graded_commute(seed in any::<u64>()) {
        let (e, _) = random_any(&mut rng(seed));
        prop_assert!(derivatives_commute(&e));
    }

    #[test]
    fn normalization_is_idempotent(seed in any::<u64>()) {
        let (e, _) = random_any(&mut rng(seed));
        prop_assert!(normalize_idempotent(&e).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn operator_relations(seed in any::<u64>()) {
        let (e, _) = random_any(&mut rng(seed));
        prop_assert!(operator_algebra_check(&e).unwrap().is_empty());
    }
}

/// `D1` with the sign of its second term flipped: the relation
/// `{D1, D1} = 2 d/dx` must fail on a generic superfield.
#[test]
fn corrupted_d1_is_detected() {
    let s = coords();
    let bad_d1 = |e: &GExpr| {
        Total
            .d(e, Coord::Theta1)
            .unwrap()
            .sub(&GExpr::symbol(s.theta1).mul(&total_derivative(e, s.x)))
    };
    let mut r = rng(11);
    let mut caught = 0;
    for _ in 0..100 {
        let (e, _) = random_any(&mut r);
        let lhs = bad_d1(&bad_d1(&e)).scale_int(2);
        let rhs = total_derivative(&e, s.x).scale_int(2);
        if lhs != rhs {
            caught += 1;
        }
    }
    assert!(caught > 50, "caught {caught}");
    let w = parse_expr("W").unwrap();
    assert_ne!(bad_d1(&bad_d1(&w)).scale_int(2), total_derivative(&w, s.x).scale_int(2));
}
