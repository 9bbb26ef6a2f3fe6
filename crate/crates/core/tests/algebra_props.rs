use proptest::prelude::*;
use supergas::grassmann::GExpr;
use supergas::parse::parse_expr;
use supergas::salg::{algebra_params, graded_bracket, Basis, Element};

fn coefficient(odd: bool, pick: u8) -> GExpr {
    algebra_params();
    let src = if odd {
        ["eta", "mu", "nu", "a2"][pick as usize % 4]
    } else {
        ["1", "alpha", "-2", "k", "beta", "1/3"][pick as usize % 6]
    };
    parse_expr(src).unwrap()
}

fn element(picks: &[u8]) -> Element {
    let mut e = Element::zero();
    for (b, p) in Basis::ALL.iter().zip(picks) {
        if p % 3 != 0 {
            e = e.add(&Element::term(coefficient(b.is_odd(), *p / 3), *b));
        }
    }
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Even elements (odd basis vectors carry odd coefficients) have an
    /// antisymmetric bracket.
    #[test]
    fn bracket_is_antisymmetric(a in proptest::collection::vec(any::<u8>(), 6), b in proptest::collection::vec(any::<u8>(), 6)) {
        let (x, y) = (element(&a), element(&b));
        let xy = graded_bracket(&x, &y).unwrap();
        let yx = graded_bracket(&y, &x).unwrap();
        prop_assert_eq!(xy, yx.scale(&GExpr::int(-1)));
    }
}
