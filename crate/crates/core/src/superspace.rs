//! The (2|2) superspace: coordinates, covariant and supercharge
//! operators, component expansion and changes of variables.

use crate::error::{Error, Result};
use crate::grassmann::{GExpr, Gen};
use crate::symbol::{FamilyKind, Kind, MemberDeriv, Symbol};
use once_cell::sync::Lazy;
use std::collections::{BTreeSet, HashMap};

/// The standard coordinates and model constants.
pub struct Std {
    pub x: Symbol,
    pub t: Symbol,
    pub theta1: Symbol,
    pub theta2: Symbol,
    pub gamma: Symbol,
    pub a: Symbol,
}

static STD: Lazy<Std> = Lazy::new(|| Std {
    x: Symbol::new("x", Kind::BosonicVariable).unwrap(),
    t: Symbol::new("t", Kind::BosonicVariable).unwrap(),
    theta1: Symbol::new("theta1", Kind::FermionicVariable).unwrap(),
    theta2: Symbol::new("theta2", Kind::FermionicVariable).unwrap(),
    gamma: Symbol::new("gamma", Kind::BosonicParameter).unwrap(),
    a: Symbol::new("A", Kind::BosonicParameter).unwrap(),
});

pub fn std() -> &'static Std {
    &STD
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    X,
    T,
    Theta1,
    Theta2,
}

impl Coord {
    pub const ALL: [Coord; 4] = [Coord::X, Coord::T, Coord::Theta1, Coord::Theta2];

    pub fn symbol(self) -> Symbol {
        let s = std();
        match self {
            Coord::X => s.x,
            Coord::T => s.t,
            Coord::Theta1 => s.theta1,
            Coord::Theta2 => s.theta2,
        }
    }
}

/// Derivatives along the original superspace coordinates.
pub trait Calculus: Sync {
    fn d(&self, e: &GExpr, c: Coord) -> Result<GExpr>;
}

fn is_jet(s: Symbol) -> bool {
    s.family().is_some_and(|f| f.kind() == FamilyKind::Jet)
}

/// Jet coordinates an expression depends on, including those that are
/// arguments of explicit families occurring in it.
pub fn jet_symbols(e: &GExpr) -> BTreeSet<Symbol> {
    let mut jets = BTreeSet::new();
    for s in e.symbols() {
        match s.family() {
            Some(f) if f.kind() == FamilyKind::Jet => {
                jets.insert(s);
            }
            Some(f) => jets.extend(f.args().iter().copied().filter(|a| is_jet(*a))),
            None => {}
        }
    }
    jets
}

/// Total derivative: explicit dependence plus the chain rule through
/// every jet coordinate whose family depends on `y`.
pub fn total_derivative(e: &GExpr, y: Symbol) -> GExpr {
    let mut out = e.partial(y);
    let jets = jet_symbols(e);
    for u in jets {
        if let MemberDeriv::Member(sign, m) = u.derive_member(y) {
            let du = e.partial(u);
            if du.is_zero() {
                continue;
            }
            let uy = GExpr::symbol(m).scale_int(sign as i64);
            out.add_assign(&uy.mul(&du));
        }
    }
    out
}

/// Calculus in the original coordinates.
pub struct Total;

impl Calculus for Total {
    fn d(&self, e: &GExpr, c: Coord) -> Result<GExpr> {
        Ok(total_derivative(e, c.symbol()))
    }
}

fn theta(c: Coord) -> GExpr {
    GExpr::symbol(c.symbol())
}

/// `D1 = d/dtheta1 + theta1 d/dx`
pub fn d1(cal: &dyn Calculus, e: &GExpr) -> Result<GExpr> {
    Ok(cal.d(e, Coord::Theta1)?.add(&theta(Coord::Theta1).mul(&cal.d(e, Coord::X)?)))
}

/// `D2 = d/dtheta2 + theta2 d/dt`
pub fn d2(cal: &dyn Calculus, e: &GExpr) -> Result<GExpr> {
    Ok(cal.d(e, Coord::Theta2)?.add(&theta(Coord::Theta2).mul(&cal.d(e, Coord::T)?)))
}

/// `Q1 = d/dtheta1 - theta1 d/dx`
pub fn q1(cal: &dyn Calculus, e: &GExpr) -> Result<GExpr> {
    Ok(cal.d(e, Coord::Theta1)?.sub(&theta(Coord::Theta1).mul(&cal.d(e, Coord::X)?)))
}

/// `Q2 = d/dtheta2 - theta2 d/dt`
pub fn q2(cal: &dyn Calculus, e: &GExpr) -> Result<GExpr> {
    Ok(cal.d(e, Coord::Theta2)?.sub(&theta(Coord::Theta2).mul(&cal.d(e, Coord::T)?)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    D1,
    D2,
    Q1,
    Q2,
    Dx,
    Dt,
}

impl Op {
    pub fn apply(self, cal: &dyn Calculus, e: &GExpr) -> Result<GExpr> {
        match self {
            Op::D1 => d1(cal, e),
            Op::D2 => d2(cal, e),
            Op::Q1 => q1(cal, e),
            Op::Q2 => q2(cal, e),
            Op::Dx => cal.d(e, Coord::X),
            Op::Dt => cal.d(e, Coord::T),
        }
    }

    pub fn is_odd(self) -> bool {
        !matches!(self, Op::Dx | Op::Dt)
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::D1 => "D1",
            Op::D2 => "D2",
            Op::Q1 => "Q1",
            Op::Q2 => "Q2",
            Op::Dx => "dx",
            Op::Dt => "dt",
        }
    }
}

/// Expected graded commutator of two superspace operators, as
/// `(coefficient, operator)`; `None` when it vanishes.
pub fn expected_bracket(a: Op, b: Op) -> Option<(i64, Op)> {
    use Op::*;
    match (a, b) {
        (D1, D1) => Some((2, Dx)),
        (D2, D2) => Some((2, Dt)),
        (Q1, Q1) => Some((-2, Dx)),
        (Q2, Q2) => Some((-2, Dt)),
        _ => None,
    }
}

/// Graded commutator `[a, b] f = a(b f) - (-1)^{|a||b|} b(a f)`.
pub fn bracket_apply(cal: &dyn Calculus, a: Op, b: Op, e: &GExpr) -> Result<GExpr> {
    let ab = a.apply(cal, &b.apply(cal, e)?)?;
    let ba = b.apply(cal, &a.apply(cal, e)?)?;
    Ok(if a.is_odd() && b.is_odd() { ab.add(&ba) } else { ab.sub(&ba) })
}

/// Check every operator relation on one superfield; returns the failing
/// pairs.
pub fn operator_algebra_check(e: &GExpr) -> Result<Vec<(Op, Op)>> {
    let ops = [Op::D1, Op::D2, Op::Q1, Op::Q2];
    let mut failures = Vec::new();
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i..] {
            let lhs = bracket_apply(&Total, *a, *b, e)?;
            let rhs = match expected_bracket(*a, *b) {
                Some((c, op)) => op.apply(&Total, e)?.scale_int(c),
                None => GExpr::zero(),
            };
            if lhs != rhs {
                failures.push((*a, *b));
            }
        }
    }
    Ok(failures)
}

/// Components of `e = e0 + theta1 e1 + theta2 e2 + theta1 theta2 e12`.
pub fn component_expand(e: &GExpr) -> [GExpr; 4] {
    let s = std();
    let (t1, t2) = (Gen::Sym(s.theta1), Gen::Sym(s.theta2));
    let mut out: [GExpr; 4] = Default::default();
    for (m, c) in &e.terms {
        let has1 = m.contains(&t1);
        let has2 = m.contains(&t2);
        let rest: Vec<Gen> = m.iter().filter(|g| **g != t1 && **g != t2).cloned().collect();
        let mut passed = 0;
        let mut others = 0;
        for g in m {
            if *g == t1 || *g == t2 {
                passed += others;
            } else {
                others += 1;
            }
        }
        let slot = match (has1, has2) {
            (false, false) => 0,
            (true, false) => 1,
            (false, true) => 2,
            (true, true) => 3,
        };
        let piece = GExpr::monomial(&rest).mul_scalar(c);
        out[slot].add_assign(&if passed % 2 == 1 { piece.neg() } else { piece });
    }
    out
}

/// Rebuild an expression from its components.
pub fn component_join(c: &[GExpr; 4]) -> GExpr {
    let s = std();
    let t1 = GExpr::symbol(s.theta1);
    let t2 = GExpr::symbol(s.theta2);
    c[0].add(&t1.mul(&c[1]))
        .add(&t2.mul(&c[2]))
        .add(&t1.mul(&t2).mul(&c[3]))
}

/// A change of variables from the original superspace coordinates to a
/// new set of four coordinates, given in both directions.
#[derive(Clone, Debug)]
pub struct InvariantMap {
    /// New coordinates, in the order bosonic, bosonic, odd, odd.
    pub new_coords: Vec<Symbol>,
    /// Each new coordinate as a function of `x, t, theta1, theta2`.
    pub forward: Vec<GExpr>,
    /// `x, t, theta1, theta2` as functions of the new coordinates.
    pub inverse: Vec<GExpr>,
}

impl InvariantMap {
    pub fn new(new_coords: Vec<Symbol>, forward: Vec<GExpr>, inverse: Vec<GExpr>) -> Result<InvariantMap> {
        if new_coords.len() != 4 || forward.len() != 4 || inverse.len() != 4 {
            return Err(Error::Invalid("a change of variables needs four coordinates".into()));
        }
        for (y, f) in new_coords.iter().zip(&forward) {
            let p = f.parity();
            if p != Some(y.is_odd()) {
                return Err(Error::ParityMismatch(format!("coordinate `{y}` has the wrong parity")));
            }
        }
        Ok(InvariantMap {
            new_coords,
            forward,
            inverse,
        })
    }

    fn inverse_map(&self) -> HashMap<Symbol, GExpr> {
        Coord::ALL
            .iter()
            .zip(&self.inverse)
            .map(|(c, e)| (c.symbol(), e.clone()))
            .collect()
    }

    fn forward_map(&self) -> HashMap<Symbol, GExpr> {
        self.new_coords.iter().cloned().zip(self.forward.iter().cloned()).collect()
    }

    /// Express an expression in the original coordinates in the new ones.
    pub fn change_variables(&self, e: &GExpr) -> Result<GExpr> {
        e.substitute(&self.inverse_map())
    }

    /// Check that the two directions compose to the identity both ways.
    pub fn check_inverse(&self) -> Result<bool> {
        let inv = self.inverse_map();
        for (y, f) in self.new_coords.iter().zip(&self.forward) {
            if f.substitute(&inv)? != GExpr::symbol(*y) {
                return Ok(false);
            }
        }
        let fwd = self.forward_map();
        for (c, g) in Coord::ALL.iter().zip(&self.inverse) {
            if g.substitute(&fwd)? != GExpr::symbol(c.symbol()) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Calculus that applies original-coordinate derivatives to
    /// expressions written in the new coordinates.
    pub fn pushforward(&self) -> Result<Pushforward> {
        let inv = self.inverse_map();
        let mut jac = Vec::with_capacity(4);
        for c in Coord::ALL {
            let mut row = Vec::with_capacity(4);
            for f in &self.forward {
                row.push(f.partial(c.symbol()).substitute(&inv)?);
            }
            jac.push(row);
        }
        Ok(Pushforward {
            new_coords: self.new_coords.clone(),
            jac,
        })
    }
}

/// `d/dA = sum_y (dy/dA) D_y` with the Jacobian written in the new
/// coordinates and `D_y` the total derivative there.
pub struct Pushforward {
    new_coords: Vec<Symbol>,
    jac: Vec<Vec<GExpr>>,
}

impl Calculus for Pushforward {
    fn d(&self, e: &GExpr, c: Coord) -> Result<GExpr> {
        let row = &self.jac[c as usize];
        let mut out = GExpr::zero();
        for (y, j) in self.new_coords.iter().zip(row) {
            if j.is_zero() {
                continue;
            }
            let dy = total_derivative(e, *y);
            if !dy.is_zero() {
                out.add_assign(&j.mul(&dy));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{qf, RatFunc};
    use crate::symbol::Family;

    fn superfield() -> GExpr {
        let s = std();
        let f = Family::declare("Wss", false, FamilyKind::Jet, &[s.x, s.t, s.theta1, s.theta2]).unwrap();
        GExpr::symbol(f.base())
    }

    #[test]
    fn operator_relations_hold_on_a_jet_superfield() {
        assert!(operator_algebra_check(&superfield()).unwrap().is_empty());
    }

    #[test]
    fn d1_d2_of_superfield() {
        let w = superfield();
        let e = d1(&Total, &d2(&Total, &w).unwrap()).unwrap();
        // D1 D2 W = W_theta2theta1 + theta1 W_xtheta2 - theta2 W_ttheta1 + theta1 theta2 W_xt
        assert_eq!(e.len(), 4);
        let comps = component_expand(&e);
        assert_eq!(component_join(&comps), e);
    }

    #[test]
    fn pushforward_matches_direct_differentiation() {
        let s = std();
        let tau2 = Symbol::new("tau2", Kind::FermionicVariable).unwrap();
        let half = RatFunc::constant(qf(-1, 2));
        let t = GExpr::symbol(s.t);
        let fwd = t.pow(&half).unwrap().mul(&GExpr::symbol(s.theta2));
        let inv = t.pow(&RatFunc::constant(qf(1, 2))).unwrap().mul(&GExpr::symbol(tau2));
        let map = InvariantMap::new(
            vec![s.x, s.t, s.theta1, tau2],
            vec![GExpr::symbol(s.x), t.clone(), GExpr::symbol(s.theta1), fwd.clone()],
            vec![GExpr::symbol(s.x), t.clone(), GExpr::symbol(s.theta1), inv],
        )
        .unwrap();
        assert!(map.check_inverse().unwrap());
        let push = map.pushforward().unwrap();
        // f = t * theta2 written in old coordinates; compare derivatives
        let f_old = t.mul(&GExpr::symbol(s.theta2));
        let f_new = map.change_variables(&f_old).unwrap();
        for c in Coord::ALL {
            let direct = map.change_variables(&Total.d(&f_old, c).unwrap()).unwrap();
            assert_eq!(push.d(&f_new, c).unwrap(), direct);
        }
    }
}
