//! The supersymmetric polytropic gas system and its thirteen-parameter
//! generalisation.

use crate::error::{Error, Result};
use crate::grassmann::GExpr;
use crate::poly::RatFunc;
use crate::scalar::Scalar;
use crate::superspace::{d1, d2, std, Calculus, Coord, Total};
use crate::symbol::{Family, FamilyKind, Kind, Symbol};

pub use crate::superspace::component_expand;

/// Polytropic exponent and the pressure constant.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    pub gamma: RatFunc,
    pub a: RatFunc,
}

impl ModelParams {
    pub fn new(gamma: RatFunc, a: RatFunc) -> Result<ModelParams> {
        if gamma.add(&RatFunc::int(1)).is_zero() {
            return Err(Error::Invalid("gamma = -1 is excluded".into()));
        }
        Ok(ModelParams { gamma, a })
    }

    /// `gamma` and `A` both left as parameters.
    pub fn symbolic() -> ModelParams {
        let s = std();
        ModelParams {
            gamma: RatFunc::param(s.gamma),
            a: RatFunc::param(s.a),
        }
    }

    /// Sampled mode: `gamma` bound to an integer, `A` symbolic.
    pub fn with_gamma(g: i64) -> Result<ModelParams> {
        ModelParams::new(RatFunc::int(g), RatFunc::param(std().a))
    }

    /// `(-1)^(gamma+1) A`
    pub fn pressure_coefficient(&self) -> GExpr {
        let sign = Scalar::sign_pow(&self.gamma.add(&RatFunc::int(1)));
        GExpr::scalar(sign).scale(&self.a)
    }
}

/// The thirteen coefficients `a..m` of the general family.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralFamilyParams(pub [RatFunc; 13]);

pub const GENERAL_NAMES: [&str; 13] = [
    "ka", "kb", "kc", "kd", "ke", "kf", "kg", "kh", "ki", "kj", "kk", "kl", "km",
];

impl GeneralFamilyParams {
    pub fn zero() -> GeneralFamilyParams {
        GeneralFamilyParams(std::array::from_fn(|_| RatFunc::zero()))
    }

    /// All thirteen as fresh bosonic parameters `ka..km`.
    pub fn symbolic() -> GeneralFamilyParams {
        GeneralFamilyParams(std::array::from_fn(|i| {
            RatFunc::param(Symbol::new(GENERAL_NAMES[i], Kind::BosonicParameter).unwrap())
        }))
    }

    fn get(&self, c: char) -> &RatFunc {
        &self.0[(c as u8 - b'a') as usize]
    }
}

/// Values of the two equations.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub delta1: GExpr,
    pub delta2: GExpr,
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        self.delta1.is_zero() && self.delta2.is_zero()
    }
}

/// Generic jet superfields `W` and `P` over `(x, t, theta1, theta2)`.
pub fn superfields() -> (GExpr, GExpr) {
    let s = std();
    let args = [s.x, s.t, s.theta1, s.theta2];
    let w = Family::declare("W", false, FamilyKind::Jet, &args).unwrap();
    let p = Family::declare("P", false, FamilyKind::Jet, &args).unwrap();
    (GExpr::symbol(w.base()), GExpr::symbol(p.base()))
}

/// The derivatives of one superfield that the equations use.
struct Parts {
    f: GExpr,
    x: GExpr,
    t: GExpr,
    d1: GExpr,
    d2: GExpr,
    d12: GExpr,
    d1x: GExpr,
    d2x: GExpr,
    d12x: GExpr,
}

impl Parts {
    fn new(cal: &dyn Calculus, f: &GExpr) -> Result<Parts> {
        let d1f = d1(cal, f)?;
        let d2f = d2(cal, f)?;
        let d12 = d1(cal, &d2f)?;
        Ok(Parts {
            x: cal.d(f, Coord::X)?,
            t: cal.d(f, Coord::T)?,
            d1x: cal.d(&d1f, Coord::X)?,
            d2x: cal.d(&d2f, Coord::X)?,
            d12x: cal.d(&d12, Coord::X)?,
            f: f.clone(),
            d1: d1f,
            d2: d2f,
            d12,
        })
    }
}

fn check_even(w: &GExpr, p: &GExpr) -> Result<()> {
    for (n, e) in [("W", w), ("P", p)] {
        if !e.is_even() {
            return Err(Error::ParityMismatch(format!("superfield {n} must be even")));
        }
    }
    Ok(())
}

/// `coef * base^e * rest`, where the power is only formed when the rest
/// and the coefficient are nonzero.
fn lazy_power_term(coef: &GExpr, base: &GExpr, e: &RatFunc, rest: &GExpr) -> Result<GExpr> {
    if coef.is_zero() || rest.is_zero() {
        return Ok(GExpr::zero());
    }
    let prod = coef.mul(rest);
    if prod.is_zero() {
        return Ok(prod);
    }
    Ok(base.pow(e)?.mul(&prod))
}

/// Residual with derivatives taken by `cal`; `W`, `P` may be written in
/// any coordinates that `cal` understands.
pub fn residual_with(cal: &dyn Calculus, w: &GExpr, p: &GExpr, params: &ModelParams) -> Result<Residual> {
    check_even(w, p)?;
    let wp = Parts::new(cal, w)?;
    let pp = Parts::new(cal, p)?;
    let delta1 = pp.t.sub(&pp.x.mul(&wp.d12)).sub(&pp.d12.mul(&wp.x));
    let rest = pp.d1.mul(&pp.d2).mul(&pp.d12x);
    let g2 = params.gamma.sub(&RatFunc::int(2));
    let pressure = lazy_power_term(&params.pressure_coefficient(), &pp.d12, &g2, &rest)?;
    let delta2 = wp.t.sub(&wp.d12.mul(&wp.x)).add(&pressure);
    Ok(Residual { delta1, delta2 })
}

pub fn residual(w: &GExpr, p: &GExpr, params: &ModelParams) -> Result<Residual> {
    residual_with(&Total, w, p, params)
}

/// Residual of the general thirteen-parameter family.
pub fn general_residual_with(
    cal: &dyn Calculus,
    w: &GExpr,
    p: &GExpr,
    params: &ModelParams,
    q: &GeneralFamilyParams,
) -> Result<Residual> {
    check_even(w, p)?;
    let wp = Parts::new(cal, w)?;
    let pp = Parts::new(cal, p)?;
    let k = |c: char| GExpr::constant(q.get(c).clone());
    let one = GExpr::one();

    let mut delta1 = pp.t.clone();
    delta1.add_assign(&k('a').mul(&pp.d12x).mul(&wp.f));
    delta1.add_assign(&k('b').mul(&pp.d2x).mul(&wp.d1));
    delta1.add_assign(&k('c').mul(&pp.d1x).mul(&wp.d2));
    let c4 = k('c').sub(&k('b')).sub(&k('a')).sub(&one);
    delta1.add_assign(&c4.mul(&pp.x).mul(&wp.d12));
    delta1.add_assign(&k('d').mul(&pp.f).mul(&wp.d12x));
    delta1.add_assign(&k('e').mul(&pp.d1).mul(&wp.d2x));
    delta1.add_assign(&k('f').mul(&pp.d2).mul(&wp.d1x));
    let c8 = k('e').sub(&k('f')).sub(&k('d')).sub(&one);
    delta1.add_assign(&c8.mul(&pp.d12).mul(&wp.x));

    let mut delta2 = wp.t.clone();
    delta2.add_assign(&k('g').mul(&wp.f).mul(&wp.d12x));
    delta2.add_assign(&k('h').mul(&wp.d1).mul(&wp.d2x));
    delta2.add_assign(&k('i').mul(&wp.d2).mul(&wp.d1x));
    let c4 = k('h').sub(&k('i')).sub(&k('g')).sub(&one);
    delta2.add_assign(&c4.mul(&wp.d12).mul(&wp.x));
    let g = &params.gamma;
    let g1 = g.sub(&RatFunc::int(1));
    let g2 = g.sub(&RatFunc::int(2));
    delta2.add_assign(&lazy_power_term(&k('j'), &pp.d12, g, &pp.x)?);
    delta2.add_assign(&lazy_power_term(&k('k'), &pp.d12, &g1, &pp.d2.mul(&pp.d1x))?);
    delta2.add_assign(&lazy_power_term(&k('l'), &pp.d12, &g1, &pp.d1.mul(&pp.d2x))?);
    delta2.add_assign(&lazy_power_term(&k('m'), &pp.d12, &g1, &pp.f.mul(&pp.d12x))?);
    let last = params
        .pressure_coefficient()
        .add(&k('j'))
        .add(&k('k'))
        .add(&k('m'))
        .sub(&k('l'));
    let rest = pp.d1.mul(&pp.d2).mul(&pp.d12x);
    delta2.add_assign(&lazy_power_term(&last, &pp.d12, &g2, &rest)?);
    Ok(Residual { delta1, delta2 })
}

pub fn general_residual(w: &GExpr, p: &GExpr, params: &ModelParams, q: &GeneralFamilyParams) -> Result<Residual> {
    general_residual_with(&Total, w, p, params, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn setup() {
        superfields();
        for s in ["C1", "C4", "C5", "C8"] {
            Symbol::new(s, Kind::BosonicParameter).unwrap();
        }
        for s in ["Cf2", "Cf3", "Cf6", "Cf7", "mu", "nu"] {
            Symbol::new(s, Kind::FermionicParameter).unwrap();
        }
    }

    #[test]
    fn constants_solve_the_system() {
        setup();
        let r = residual(&parse_expr("C1").unwrap(), &parse_expr("C5").unwrap(), &ModelParams::symbolic()).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn constant_superfields_in_both_fermionic_variables() {
        setup();
        let w = parse_expr("C1 + Cf2*theta1 + Cf3*theta2 + C4*theta1*theta2").unwrap();
        let p = parse_expr("C5 + Cf6*theta1 + Cf7*theta2 + C8*theta1*theta2").unwrap();
        let r = residual(&w, &p, &ModelParams::symbolic()).unwrap();
        assert!(r.is_zero(), "{r:?}");
        let comps = component_expand(&w);
        assert_eq!(comps[0], parse_expr("C1").unwrap());
        assert_eq!(comps[3], parse_expr("C4").unwrap());
    }

    #[test]
    fn nilpotent_power_law_pair() {
        setup();
        let w = parse_expr("x^(3/2)*mu*theta2").unwrap();
        let p = parse_expr("x^((gamma+5)/(2*gamma+2))*nu*theta2").unwrap();
        let r = residual(&w, &p, &ModelParams::symbolic()).unwrap();
        assert!(r.is_zero(), "{r:?}");
    }

    #[test]
    fn reorder_sign_in_components() {
        let c = component_expand(&parse_expr("theta2*theta1").unwrap());
        assert_eq!(c[3], GExpr::int(-1));
        assert!(c[..3].iter().all(GExpr::is_zero));
    }

    #[test]
    fn general_family_reduces_at_zero() {
        setup();
        let (w, p) = superfields();
        let m = ModelParams::symbolic();
        let g = general_residual(&w, &p, &m, &GeneralFamilyParams::zero()).unwrap();
        assert_eq!(g, residual(&w, &p, &m).unwrap());
        let zero = general_residual(&GExpr::zero(), &GExpr::zero(), &m, &GeneralFamilyParams::symbolic()).unwrap();
        assert!(zero.is_zero());
        let mut q = GeneralFamilyParams::zero();
        q.0[0] = RatFunc::int(1);
        let c = general_residual(&parse_expr("C1").unwrap(), &parse_expr("C5").unwrap(), &m, &q).unwrap();
        assert!(c.is_zero());
    }

    #[test]
    fn gamma_minus_one_is_rejected() {
        assert!(ModelParams::with_gamma(-1).is_err());
        assert!(ModelParams::with_gamma(3).is_ok());
    }

    #[test]
    fn odd_superfield_is_rejected() {
        let r = residual(&parse_expr("theta1").unwrap(), &GExpr::zero(), &ModelParams::symbolic());
        assert!(matches!(r, Err(Error::ParityMismatch(_))));
    }
}
