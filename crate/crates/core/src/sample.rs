//! Seeded random expressions and the kernel properties checked on them.

use crate::error::Result;
use crate::grassmann::GExpr;
use crate::model::superfields;
use crate::parse::parse_expr;
use crate::print::gexpr_string;
use crate::salg::algebra_params;
use crate::superspace::{operator_algebra_check, std, total_derivative, Op, Total};
use crate::symbol::{Function, Symbol};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

const EVEN_FACTORS: &[&str] = &[
    "x", "t", "x^2", "t^3", "x^(1/2)", "exp(x)", "ln(t)", "W", "P", "W_x", "P_t", "W_theta1theta2", "smp(x, t)",
];
const ODD_FACTORS: &[&str] = &["theta1", "theta2", "eta", "mu", "W_theta1", "P_theta2"];
const COEFS: &[&str] = &["1", "-1", "2", "-3", "1/2", "-2/3", "5"];

fn setup() {
    superfields();
    algebra_params();
    Function::declare("smp", false, 2).expect("sample function");
}

/// A random sum of terms, each a coefficient times bosonic factors times
/// odd factors; `odd` fixes the parity of every term.
pub fn random_expr(rng: &mut StdRng, odd: bool) -> GExpr {
    setup();
    let terms = rng.gen_range(1..=4);
    let mut parts = Vec::with_capacity(terms);
    for _ in 0..terms {
        let mut f = vec![COEFS.choose(rng).unwrap().to_string()];
        for _ in 0..rng.gen_range(0..=2) {
            f.push(EVEN_FACTORS.choose(rng).unwrap().to_string());
        }
        let mut n_odd = rng.gen_range(0..=3);
        if (n_odd % 2 == 1) != odd {
            n_odd += 1;
        }
        for _ in 0..n_odd {
            f.push(ODD_FACTORS.choose(rng).unwrap().to_string());
        }
        parts.push(format!("({})", f.join("*")));
    }
    parse_expr(&parts.join(" + ")).expect("sample expressions parse")
}

/// A random expression of random parity.
pub fn random_any(rng: &mut StdRng) -> (GExpr, bool) {
    let odd = rng.gen_bool(0.5);
    (random_expr(rng, odd), odd)
}

fn sign(odd_a: bool, odd_b: bool) -> i64 {
    if odd_a && odd_b {
        -1
    } else {
        1
    }
}

fn coords() -> [Symbol; 4] {
    let s = std();
    [s.x, s.t, s.theta1, s.theta2]
}

/// `d(ab) = d(a) b + (-1)^{|d||a|} a d(b)` for the partial and total
/// derivatives and the four odd superspace operators.
pub fn leibniz_holds(a: &GExpr, odd_a: bool, b: &GExpr) -> Result<bool> {
    let ab = a.mul(b);
    for y in coords() {
        let d = |e: &GExpr| e.partial(y);
        let rhs = d(a).mul(b).add(&a.mul(&d(b)).scale_int(sign(y.is_odd(), odd_a)));
        if d(&ab) != rhs {
            return Ok(false);
        }
        let dt = |e: &GExpr| total_derivative(e, y);
        let rhs = dt(a).mul(b).add(&a.mul(&dt(b)).scale_int(sign(y.is_odd(), odd_a)));
        if dt(&ab) != rhs {
            return Ok(false);
        }
    }
    for op in [Op::D1, Op::D2, Op::Q1, Op::Q2] {
        let rhs = op.apply(&Total, a)?.mul(b).add(&a.mul(&op.apply(&Total, b)?).scale_int(sign(true, odd_a)));
        if op.apply(&Total, &ab)? != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Associativity, distributivity and `ab = (-1)^{|a||b|} ba`.
pub fn algebra_holds(a: (&GExpr, bool), b: (&GExpr, bool), c: &GExpr) -> bool {
    let (a, oa) = a;
    let (b, ob) = b;
    a.mul(b).mul(c) == a.mul(&b.mul(c))
        && a.mul(&b.add(c)) == a.mul(b).add(&a.mul(c))
        && a.mul(b) == b.mul(a).scale_int(sign(oa, ob))
}

/// Odd elements square to zero, and so does every product of one.
pub fn nilpotency_holds(odd: &GExpr, any: &GExpr) -> bool {
    odd.mul(odd).is_zero() && odd.mul(any).mul(odd).is_zero()
}

/// Partial and total derivatives in two coordinates graded-commute.
pub fn derivatives_commute(e: &GExpr) -> bool {
    for u in coords() {
        for v in coords() {
            let s = sign(u.is_odd(), v.is_odd());
            if e.partial(v).partial(u) != e.partial(u).partial(v).scale_int(s) {
                return false;
            }
            let tuv = total_derivative(&total_derivative(e, v), u);
            let tvu = total_derivative(&total_derivative(e, u), v);
            if tuv != tvu.scale_int(s) {
                return false;
            }
        }
    }
    true
}

/// Re-normalizing a normal form changes nothing: rebuilding from the
/// terms, and printing then parsing, both return the same expression.
pub fn normalize_idempotent(e: &GExpr) -> Result<bool> {
    let mut rebuilt = GExpr::zero();
    for (m, s) in &e.terms {
        rebuilt.add_assign(&GExpr::monomial(m).mul_scalar(s));
    }
    Ok(rebuilt == *e && parse_expr(&gexpr_string(e))? == *e)
}

/// Outcome of one property over a batch of random cases.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
}

pub const KERNEL_PROPERTIES: [&str; 5] = [
    "graded Leibniz",
    "associativity and graded commutativity",
    "nilpotency",
    "derivative commutation",
    "normalize idempotence",
];

/// Run every kernel property on `cases` random inputs from `seed`.
pub fn kernel_properties(cases: usize, seed: u64) -> Result<Vec<PropertyReport>> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut fails = [0usize; 5];
    for _ in 0..cases {
        let (a, oa) = random_any(&mut rng);
        let (b, ob) = random_any(&mut rng);
        let (c, _) = random_any(&mut rng);
        let odd = random_expr(&mut rng, true);
        fails[0] += usize::from(!leibniz_holds(&a, oa, &b)?);
        fails[1] += usize::from(!algebra_holds((&a, oa), (&b, ob), &c));
        fails[2] += usize::from(!nilpotency_holds(&odd, &a));
        fails[3] += usize::from(!derivatives_commute(&a));
        fails[4] += usize::from(!normalize_idempotent(&a)?);
    }
    Ok(KERNEL_PROPERTIES
        .iter()
        .zip(fails)
        .map(|(name, failures)| PropertyReport { name, cases, failures })
        .collect())
}

/// The ten operator relations on `n` random superfields; returns the
/// number of superfields with at least one failing relation.
pub fn operator_suite(n: usize, seed: u64) -> Result<usize> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..n {
        let (e, _) = random_any(&mut rng);
        if !operator_algebra_check(&e)?.is_empty() {
            bad += 1;
        }
    }
    Ok(bad)
}

/// Print/parse round trip on `n` random expressions; returns failures.
pub fn round_trip_suite(n: usize, seed: u64) -> Result<usize> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..n {
        let (e, _) = random_any(&mut rng);
        if parse_expr(&gexpr_string(&e))? != e {
            bad += 1;
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_have_the_requested_parity() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let e = random_expr(&mut rng, true);
            assert!(e.is_zero() || e.is_odd());
            let e = random_expr(&mut rng, false);
            assert!(e.is_zero() || e.is_even());
        }
    }

    #[test]
    fn small_batch_passes() {
        for r in kernel_properties(30, 1).unwrap() {
            assert_eq!(r.failures, 0, "{}", r.name);
        }
        assert_eq!(operator_suite(20, 2).unwrap(), 0);
    }
}
