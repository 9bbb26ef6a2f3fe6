//! Graded jet space, prolongation of vector fields and the symmetry
//! criterion for the gas system.

use crate::diff::{term_diff, TermDiff};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::grassmann::{GExpr, Gen};
use crate::model::{residual, superfields, ModelParams};
use crate::print::gexpr_string;
use crate::scalar::{Atom, Mono, Scalar};
use crate::superspace::{jet_symbols, std, total_derivative, Coord};
use crate::symbol::{resolve_name, Family, FamilyKind, MemberDeriv, Symbol};
use std::collections::{BTreeMap, HashMap};

/// `xi d_x + tau d_t + rho1 d_theta1 + rho2 d_theta2 + Lambda d_W + Omega d_P`
/// with the odd coefficients written to the left of their derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub xi: GExpr,
    pub tau: GExpr,
    pub rho1: GExpr,
    pub rho2: GExpr,
    pub lambda: GExpr,
    pub omega: GExpr,
}

/// Base symbols of the two dependent superfields.
pub fn field_symbols() -> (Symbol, Symbol) {
    let (w, p) = superfields();
    let sym = |e: &GExpr| *e.symbols().iter().next().unwrap();
    (sym(&w), sym(&p))
}

impl Coord {
    pub fn of(s: Symbol) -> Option<Coord> {
        Coord::ALL.into_iter().find(|c| c.symbol() == s)
    }
}

impl VectorField {
    pub fn new(xi: GExpr, tau: GExpr, rho1: GExpr, rho2: GExpr, lambda: GExpr, omega: GExpr) -> Result<VectorField> {
        let v = VectorField {
            xi,
            tau,
            rho1,
            rho2,
            lambda,
            omega,
        };
        for (name, c, odd) in v.named() {
            let ok = c.is_zero() || if odd { c.is_odd() } else { c.is_even() };
            if !ok {
                return Err(Error::ParityMismatch(format!("component {name} has the wrong parity")));
            }
        }
        Ok(v)
    }

    pub fn zero() -> VectorField {
        VectorField {
            xi: GExpr::zero(),
            tau: GExpr::zero(),
            rho1: GExpr::zero(),
            rho2: GExpr::zero(),
            lambda: GExpr::zero(),
            omega: GExpr::zero(),
        }
    }

    /// Every component an arbitrary function of `(x, t, theta1, theta2, W, P)`.
    pub fn general() -> VectorField {
        let s = std();
        let (w, p) = field_symbols();
        let args = [s.x, s.t, s.theta1, s.theta2, w, p];
        let f = |name: &str, odd: bool| {
            let fam = Family::declare(name, odd, FamilyKind::Explicit, &args).unwrap();
            GExpr::symbol(fam.base())
        };
        VectorField {
            xi: f("xi", false),
            tau: f("tau", false),
            rho1: f("rho1", true),
            rho2: f("rho2", true),
            lambda: f("Lambda", false),
            omega: f("Omega", false),
        }
    }

    fn named(&self) -> [(&'static str, &GExpr, bool); 6] {
        [
            ("xi", &self.xi, false),
            ("tau", &self.tau, false),
            ("rho1", &self.rho1, true),
            ("rho2", &self.rho2, true),
            ("Lambda", &self.lambda, false),
            ("Omega", &self.omega, false),
        ]
    }

    pub fn components(&self) -> [&GExpr; 6] {
        [&self.xi, &self.tau, &self.rho1, &self.rho2, &self.lambda, &self.omega]
    }

    pub fn from_components(c: [GExpr; 6]) -> VectorField {
        let [xi, tau, rho1, rho2, lambda, omega] = c;
        VectorField {
            xi,
            tau,
            rho1,
            rho2,
            lambda,
            omega,
        }
    }

    pub fn zeta(&self, c: Coord) -> &GExpr {
        match c {
            Coord::X => &self.xi,
            Coord::T => &self.tau,
            Coord::Theta1 => &self.rho1,
            Coord::Theta2 => &self.rho2,
        }
    }

    fn map(&self, f: impl Fn(&GExpr) -> GExpr) -> VectorField {
        VectorField::from_components(self.components().map(f))
    }

    /// Left multiplication of every component.
    pub fn scale(&self, c: &GExpr) -> VectorField {
        self.map(|e| c.mul(e))
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        let a = self.components();
        let b = o.components();
        VectorField::from_components(std::array::from_fn(|i| a[i].add(b[i])))
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }

    /// Action on a function of the coordinates and the undifferentiated
    /// fields.
    pub fn apply(&self, e: &GExpr) -> GExpr {
        let (w, p) = field_symbols();
        let mut out = GExpr::zero();
        for c in Coord::ALL {
            let z = self.zeta(c);
            if !z.is_zero() {
                out.add_assign(&z.mul(&e.partial(c.symbol())));
            }
        }
        out.add_assign(&self.lambda.mul(&e.partial(w)));
        out.add_assign(&self.omega.mul(&e.partial(p)));
        out
    }
}

/// True for a jet coordinate carrying at least one derivative.
pub fn is_derivative_jet(s: Symbol) -> bool {
    match s.member() {
        Some((f, idx)) => f.kind() == FamilyKind::Jet && idx.iter().any(|n| *n > 0),
        None => false,
    }
}

/// Write a jet coordinate as `sign * D_c(lower)`.
fn lower(u: Symbol) -> Option<(Symbol, Coord, i8)> {
    let (fam, idx) = u.member()?;
    let pos = idx.iter().rposition(|n| *n > 0)?;
    let mut next = idx.to_vec();
    next[pos] -= 1;
    let low = fam.member(&next)?;
    let arg = fam.args()[pos];
    match low.derive_member(arg) {
        MemberDeriv::Member(sign, s) if s == u => Some((low, Coord::of(arg)?, sign)),
        _ => None,
    }
}

/// Prolongation of one vector field, with coefficients memoised per jet
/// coordinate.
pub struct Prolongation<'a> {
    v: &'a VectorField,
    fields: (Symbol, Symbol),
    cache: HashMap<Symbol, GExpr>,
}

impl<'a> Prolongation<'a> {
    pub fn new(v: &'a VectorField) -> Prolongation<'a> {
        Prolongation {
            v,
            fields: field_symbols(),
            cache: HashMap::new(),
        }
    }

    /// Coefficient of `d/du` for a jet coordinate `u`.
    pub fn coefficient(&mut self, u: Symbol) -> Result<GExpr> {
        if let Some(c) = self.cache.get(&u) {
            return Ok(c.clone());
        }
        let val = if u == self.fields.0 {
            self.v.lambda.clone()
        } else if u == self.fields.1 {
            self.v.omega.clone()
        } else {
            let (low, dir, sign) =
                lower(u).ok_or_else(|| Error::Unsupported(format!("`{u}` is not a jet coordinate")))?;
            let phi = self.coefficient(low)?;
            let y = dir.symbol();
            let mut out = total_derivative(&phi, y);
            let low_e = GExpr::symbol(low);
            for b in Coord::ALL {
                let dz = total_derivative(self.v.zeta(b), y);
                if dz.is_zero() {
                    continue;
                }
                out = out.sub(&dz.mul(&total_derivative(&low_e, b.symbol())));
            }
            if sign < 0 {
                out.neg()
            } else {
                out
            }
        };
        self.cache.insert(u, val.clone());
        Ok(val)
    }

    /// `pr v (e)` over every coordinate and jet coordinate `e` involves.
    pub fn apply(&mut self, e: &GExpr) -> Result<GExpr> {
        let mut out = GExpr::zero();
        for c in Coord::ALL {
            let z = self.v.zeta(c);
            if z.is_zero() {
                continue;
            }
            let d = e.partial(c.symbol());
            if !d.is_zero() {
                out.add_assign(&z.mul(&d));
            }
        }
        for u in jet_symbols(e) {
            let d = e.partial(u);
            if d.is_zero() {
                continue;
            }
            let phi = self.coefficient(u)?;
            if !phi.is_zero() {
                out.add_assign(&phi.mul(&d));
            }
        }
        Ok(out)
    }
}

/// The ten coefficients entering the criterion as named jet coordinates.
pub const NAMED_COEFFICIENTS: [&str; 10] = [
    "P_x",
    "P_t",
    "W_xt",
    "W_ttheta1",
    "W_xtheta2",
    "W_theta1theta2",
    "P_xt",
    "P_ttheta1",
    "P_xtheta2",
    "P_theta1theta2",
];

fn jet(name: &str) -> Symbol {
    field_symbols();
    match resolve_name(name) {
        Some((1, Some(s))) => s,
        _ => panic!("`{name}` is not a canonical jet coordinate"),
    }
}

pub fn prolong_coeffs(v: &VectorField) -> Result<Vec<(&'static str, GExpr)>> {
    let mut pr = Prolongation::new(v);
    NAMED_COEFFICIENTS
        .iter()
        .map(|n| Ok((*n, pr.coefficient(jet(n))?)))
        .collect()
}

/// Replace `P_t`, then `W_t`, by their values on solutions.
pub struct OnShell {
    p_t: Symbol,
    w_t: Symbol,
    p_val: GExpr,
    w_val: GExpr,
}

impl OnShell {
    pub fn new(params: &ModelParams) -> Result<OnShell> {
        let (w, p) = superfields();
        let r = residual(&w, &p, params)?;
        let p_t = jet("P_t");
        let w_t = jet("W_t");
        let p_val = GExpr::symbol(p_t).sub(&r.delta1);
        let w_val = GExpr::symbol(w_t).sub(&r.delta2).subst1(p_t, &p_val)?;
        Ok(OnShell { p_t, w_t, p_val, w_val })
    }

    pub fn apply(&self, e: &GExpr) -> Result<GExpr> {
        e.subst1(self.p_t, &self.p_val)?.subst1(self.w_t, &self.w_val)
    }
}

/// Coefficient of one independent jet monomial in one equation.
#[derive(Clone, Debug, PartialEq)]
pub struct DeterminingEquation {
    pub equation: usize,
    pub monomial: String,
    pub coefficient: GExpr,
}

/// Group an expression by its product of derivative jet coordinates.
/// Powers with different exponents are different monomials.
pub fn split_by_jets(e: &GExpr) -> BTreeMap<String, GExpr> {
    let mut groups: BTreeMap<String, GExpr> = BTreeMap::new();
    for (word, s) in &e.terms {
        let mut odd_jets = Vec::new();
        let mut rest_gens = Vec::new();
        let mut flips = 0usize;
        for g in word {
            match g {
                Gen::Sym(u) if is_derivative_jet(*u) => {
                    flips += rest_gens.len();
                    odd_jets.push(g.clone());
                }
                _ => rest_gens.push(g.clone()),
            }
        }
        for (m, c) in &s.terms {
            let mut jet_mono = Mono::one();
            let mut rest = m.clone();
            for (a, ex) in &m.factors {
                if let Atom::Var(u) = a {
                    if is_derivative_jet(*u) {
                        jet_mono.factors.insert(a.clone(), ex.clone());
                        rest.factors.remove(a);
                    }
                }
            }
            let key_e = GExpr::monomial(&odd_jets).mul_scalar(&Scalar::from_term(jet_mono, crate::RatFunc::one()));
            let key = if key_e == GExpr::one() {
                "1".to_string()
            } else {
                gexpr_string(&key_e)
            };
            let mut val = GExpr::monomial(&rest_gens).mul_scalar(&Scalar::from_term(rest, c.clone()));
            if flips % 2 == 1 {
                val = val.neg();
            }
            groups.entry(key).or_insert_with(GExpr::zero).add_assign(&val);
        }
    }
    groups.retain(|_, v| !v.is_zero());
    groups
}

/// Apply the prolongation to both equations, restrict to solutions and
/// split by jet monomials. Only nonvanishing coefficients are returned.
pub fn determining_equations(v: &VectorField, params: &ModelParams) -> Result<Vec<DeterminingEquation>> {
    let (w, p) = superfields();
    let r = residual(&w, &p, params)?;
    let shell = OnShell::new(params)?;
    let mut pr = Prolongation::new(v);
    let mut out = Vec::new();
    for (k, delta) in [r.delta1, r.delta2].iter().enumerate() {
        let e = shell.apply(&pr.apply(delta)?)?;
        for (monomial, coefficient) in split_by_jets(&e) {
            out.push(DeterminingEquation {
                equation: k + 1,
                monomial,
                coefficient,
            });
        }
    }
    Ok(out)
}

pub fn verify_symmetry(v: &VectorField, params: &ModelParams) -> Result<bool> {
    Ok(determining_equations(v, params)?.is_empty())
}

/// Jet coordinates of the two fields up to the given order.
pub fn jet_coordinates(order: u32) -> Vec<Symbol> {
    let (w, p) = field_symbols();
    let mut out = Vec::new();
    for base in [w, p] {
        let fam = base.family().unwrap();
        for nx in 0..=order {
            for nt in 0..=order - nx {
                for a in 0..=1u32 {
                    for b in 0..=1u32 {
                        if nx + nt + a + b <= order {
                            if let Some(s) = fam.member(&[nx, nt, a, b]) {
                                out.push(s);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn keyed_listing(name: &str) -> Result<(Coord, HashMap<Symbol, GExpr>)> {
    let doc = fixtures::document(name)?;
    let dir = doc
        .meta
        .get("direction")
        .and_then(|d| Symbol::lookup(d))
        .and_then(Coord::of)
        .ok_or_else(|| Error::Fixture(format!("{name}: missing direction")))?;
    let mut map = HashMap::new();
    for (k, v) in &doc.defs {
        match resolve_name(k) {
            Some((sign, Some(s))) => {
                map.insert(s, v.scale_int(sign as i64));
            }
            _ => return Err(Error::Fixture(format!("{name}: `{k}` is not a coordinate"))),
        }
    }
    Ok((dir, map))
}

pub const TOTAL_DERIVATIVE_LISTINGS: [&str; 4] = [
    "prolong/total_derivative_x.sg",
    "prolong/total_derivative_t.sg",
    "prolong/total_derivative_theta1.sg",
    "prolong/total_derivative_theta2.sg",
];

/// Compare a generated total derivative with a reference listing over the
/// coordinates and every jet coordinate up to second order. Returns one
/// line per disagreement.
pub fn total_derivative_report(listing: &str) -> Result<Vec<String>> {
    let (dir, reference) = keyed_listing(listing)?;
    let mut coords: Vec<Symbol> = Coord::ALL.iter().map(|c| c.symbol()).collect();
    coords.extend(jet_coordinates(2));
    let mut lines = Vec::new();
    for u in &coords {
        let generated = total_derivative(&GExpr::symbol(*u), dir.symbol());
        let expected = reference.get(u).cloned().unwrap_or_else(GExpr::zero);
        if generated != expected {
            lines.push(format!("d/d{u}: expected {expected}, generated {generated}"));
        }
    }
    for u in reference.keys() {
        if !coords.contains(u) {
            lines.push(format!("d/d{u}: outside the second-order jet space"));
        }
    }
    Ok(lines)
}

pub const COEFFICIENT_LISTINGS: [&str; 4] = [
    "prolong/omega_x.sg",
    "prolong/omega_t.sg",
    "prolong/lambda_theta1theta2.sg",
    "prolong/omega_theta1theta2.sg",
];

/// Per-term comparison of one generated prolongation coefficient of the
/// general field with its reference listing.
pub fn coefficient_report(listing: &str) -> Result<TermDiff> {
    let v = VectorField::general();
    let doc = fixtures::document(listing)?;
    let coord = doc
        .meta
        .get("coordinate")
        .ok_or_else(|| Error::Fixture(format!("{listing}: missing coordinate")))?;
    let u = match resolve_name(coord) {
        Some((1, Some(s))) => s,
        _ => return Err(Error::Fixture(format!("{listing}: bad coordinate `{coord}`"))),
    };
    let generated = Prolongation::new(&v).coefficient(u)?;
    Ok(term_diff(&generated, doc.def("coefficient")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    fn field(src: [&str; 6]) -> VectorField {
        let c = src.map(|s| parse_expr(s).unwrap());
        let [a, b, c1, d, e, f] = c;
        VectorField::new(a, b, c1, d, e, f).unwrap()
    }

    fn dilation1() -> VectorField {
        superfields();
        field(["2*x", "0", "theta1", "0", "3*W", "(gamma+5)/(gamma+1)*P"])
    }

    #[test]
    fn total_derivative_examples() {
        superfields();
        let p = parse_expr("P").unwrap();
        assert_eq!(total_derivative(&p, std().x), parse_expr("P_x").unwrap());
        let w2 = parse_expr("W_theta2").unwrap();
        assert_eq!(total_derivative(&w2, std().theta1), parse_expr("-W_theta1theta2").unwrap());
        let e = parse_expr("theta2*P_x").unwrap();
        assert_eq!(total_derivative(&e, std().t), parse_expr("theta2*P_xt").unwrap());
    }

    #[test]
    fn translation_has_vanishing_coefficients() {
        superfields();
        let v = field(["1", "0", "0", "0", "0", "0"]);
        for (_, c) in prolong_coeffs(&v).unwrap() {
            assert!(c.is_zero());
        }
        assert!(determining_equations(&v, &ModelParams::symbolic()).unwrap().is_empty());
    }

    #[test]
    fn dilation_first_coefficient() {
        let v = dilation1();
        let c = prolong_coeffs(&v).unwrap();
        assert_eq!(c[0].1, parse_expr("(3-gamma)/(gamma+1)*P_x").unwrap());
        assert!(verify_symmetry(&v, &ModelParams::symbolic()).unwrap());
    }

    #[test]
    fn wrong_weight_fails() {
        superfields();
        let v = field(["2*x", "0", "theta1", "0", "3*W", "P"]);
        assert!(!determining_equations(&v, &ModelParams::symbolic()).unwrap().is_empty());
        let v = field(["x", "0", "0", "0", "0", "0"]);
        assert!(!verify_symmetry(&v, &ModelParams::symbolic()).unwrap());
    }

    #[test]
    fn rescaling_keeps_the_verdict() {
        let v = dilation1();
        let s = v.scale(&GExpr::int(-7));
        assert!(verify_symmetry(&s, &ModelParams::symbolic()).unwrap());
    }

    #[test]
    fn listings_of_total_derivatives_agree() {
        for l in TOTAL_DERIVATIVE_LISTINGS {
            let r = total_derivative_report(l).unwrap();
            assert!(r.is_empty(), "{l}: {r:#?}");
        }
    }

    #[test]
    fn first_order_coefficients_agree_with_listings() {
        for l in &COEFFICIENT_LISTINGS[..2] {
            let d = coefficient_report(l).unwrap();
            assert!(d.is_empty(), "{l}: {:#?}", d.lines());
        }
    }
}
