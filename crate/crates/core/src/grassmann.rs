//! Grassmann-valued expressions.
//!
//! An expression is a sum of terms `c * g1 g2 ... gn` where `c` is a
//! commuting scalar and the `gi` are odd generators (odd symbols or odd
//! function applications) stored in canonical order. Reordering a product
//! of generators picks up the sign of the permutation; a repeated
//! generator kills the term.

use crate::error::{Error, Result};
use crate::poly::{q, RatFunc, Q};
use crate::scalar::{Atom, FuncApp, Mono, Scalar};
use crate::symbol::{FamilyKind, Function, Kind, MemberDeriv, Symbol};
use std::collections::{BTreeMap, BTreeSet, HashMap};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Gen {
    Sym(Symbol),
    App(FuncApp),
}

pub type GMono = Vec<Gen>;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct GExpr {
    pub terms: BTreeMap<GMono, Scalar>,
}

/// Merge two sorted generator lists; `None` if a generator repeats.
/// The flag is true when the merge is an odd permutation.
fn merge(a: &[Gen], b: &[Gen]) -> Option<(GMono, bool)> {
    if a.is_empty() {
        return Some((b.to_vec(), false));
    }
    if b.is_empty() {
        return Some((a.to_vec(), false));
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut odd = false;
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                if (a.len() - i) % 2 == 1 {
                    odd = !odd;
                }
                j += 1;
            }
            std::cmp::Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, odd))
}

/// Sort an arbitrary generator word, returning the sign.
pub fn sort_word(word: &[Gen]) -> Option<(GMono, bool)> {
    let mut acc: GMono = Vec::new();
    let mut odd = false;
    for g in word {
        let (m, s) = merge(&acc, std::slice::from_ref(g))?;
        acc = m;
        odd ^= s;
    }
    Some((acc, odd))
}

impl GExpr {
    pub fn zero() -> GExpr {
        GExpr::default()
    }

    pub fn one() -> GExpr {
        GExpr::scalar(Scalar::one())
    }

    pub fn int(n: i64) -> GExpr {
        GExpr::scalar(Scalar::int(n))
    }

    pub fn rational(c: Q) -> GExpr {
        GExpr::scalar(Scalar::rational(c))
    }

    pub fn constant(c: RatFunc) -> GExpr {
        GExpr::scalar(Scalar::constant(c))
    }

    pub fn scalar(s: Scalar) -> GExpr {
        let mut g = GExpr::zero();
        if !s.is_zero() {
            g.terms.insert(Vec::new(), s);
        }
        g
    }

    pub fn gen(g: Gen) -> GExpr {
        let mut e = GExpr::zero();
        e.terms.insert(vec![g], Scalar::one());
        e
    }

    /// The expression denoted by a symbol of any kind.
    pub fn symbol(s: Symbol) -> GExpr {
        match s.kind() {
            Kind::FermionicVariable | Kind::FermionicParameter => GExpr::gen(Gen::Sym(s)),
            Kind::BosonicParameter => GExpr::constant(RatFunc::param(s)),
            Kind::BosonicVariable => GExpr::scalar(Scalar::var(s)),
        }
    }

    pub fn app(f: FuncApp) -> GExpr {
        if f.is_odd() {
            GExpr::gen(Gen::App(f))
        } else {
            GExpr::scalar(Scalar::app(f))
        }
    }

    pub fn monomial(m: &[Gen]) -> GExpr {
        let mut e = GExpr::zero();
        e.terms.insert(m.to_vec(), Scalar::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.values().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: GMono, c: Scalar) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                let v = o.get().add(&c);
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &GExpr) -> GExpr {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &GExpr) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> GExpr {
        GExpr {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &GExpr) -> GExpr {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &GExpr) -> GExpr {
        let mut out = GExpr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let Some((m, odd)) = merge(ma, mb) else { continue };
                let c = ca.mul(cb);
                out.add_term(m, if odd { c.neg() } else { c });
            }
        }
        out
    }

    pub fn mul_scalar(&self, s: &Scalar) -> GExpr {
        let mut out = GExpr::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.mul(s));
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> GExpr {
        let mut out = GExpr::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.scale(c));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> GExpr {
        self.scale(&RatFunc::int(n))
    }

    pub fn body(&self) -> Scalar {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    pub fn soul(&self) -> GExpr {
        let mut s = self.clone();
        s.terms.remove(&Vec::new());
        s
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<RatFunc> {
        self.as_scalar()?.as_constant()
    }

    /// `Some(false)` for even, `Some(true)` for odd, `None` for mixed.
    /// Zero counts as even.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| m.len() % 2 == 1);
        let first = match it.next() {
            None => return Some(false),
            Some(p) => p,
        };
        if it.all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Some(false)
    }

    pub fn is_odd(&self) -> bool {
        !self.is_zero() && self.parity() == Some(true)
    }

    pub fn pow_int(&self, n: u32) -> GExpr {
        let mut out = GExpr::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// `self^p` through the body/soul split.
    pub fn pow(&self, p: &RatFunc) -> Result<GExpr> {
        if p.is_zero() {
            return Ok(GExpr::one());
        }
        if self.parity() != Some(false) {
            return Err(Error::ParityMismatch("power of a non-even expression".into()));
        }
        let body = self.body();
        let soul = self.soul();
        if soul.is_zero() {
            return Ok(GExpr::scalar(body.pow(p)?));
        }
        if body.is_zero() {
            return match p.as_integer() {
                Some(n) if n > 0 => Ok(self.pow_int(n as u32)),
                _ => Err(Error::NonInvertibleBody(
                    "nilpotent expression raised to a non-positive-integer power".into(),
                )),
            };
        }
        if let Some(n) = p.as_integer() {
            if n > 0 {
                return Ok(self.pow_int(n as u32));
            }
        }
        let ratio = soul.mul_scalar(&body.inv()?);
        let mut out = GExpr::one();
        let mut binom = RatFunc::one();
        let mut power = GExpr::one();
        let mut k = 0i64;
        loop {
            power = power.mul(&ratio);
            if power.is_zero() {
                break;
            }
            binom = binom.mul(&p.sub(&RatFunc::int(k))).scale(&(Q::from_integer(1.into()) / q(k + 1)));
            k += 1;
            out = out.add(&power.scale(&binom));
        }
        Ok(out.mul_scalar(&body.pow(p)?))
    }

    pub fn inv(&self) -> Result<GExpr> {
        self.pow(&RatFunc::int(-1))
    }

    pub fn exp(&self) -> Result<GExpr> {
        if self.parity() != Some(false) {
            return Err(Error::ParityMismatch("exp of a non-even expression".into()));
        }
        let body = self.body();
        let soul = self.soul();
        let mut series = GExpr::one();
        let mut power = GExpr::one();
        let mut fact = Q::from_integer(1.into());
        let mut k = 1;
        loop {
            power = power.mul(&soul);
            if power.is_zero() {
                break;
            }
            fact *= q(k);
            series = series.add(&power.scale(&RatFunc::constant(Q::from_integer(1.into()) / &fact)));
            k += 1;
        }
        Ok(series.mul_scalar(&Scalar::exp(&body)))
    }

    pub fn ln(&self) -> Result<GExpr> {
        if self.parity() != Some(false) {
            return Err(Error::ParityMismatch("ln of a non-even expression".into()));
        }
        let body = self.body();
        let soul = self.soul();
        let mut out = GExpr::scalar(Scalar::ln(&body)?);
        if soul.is_zero() {
            return Ok(out);
        }
        let ratio = soul.mul_scalar(&body.inv()?);
        let mut power = GExpr::one();
        let mut k = 1i64;
        loop {
            power = power.mul(&ratio);
            if power.is_zero() {
                break;
            }
            let c = if k % 2 == 1 { q(1) } else { q(-1) } / q(k);
            out = out.add(&power.scale(&RatFunc::constant(c)));
            k += 1;
        }
        Ok(out)
    }

    /// Every generator that occurs.
    pub fn generators(&self) -> BTreeSet<Gen> {
        self.terms.keys().flat_map(|m| m.iter().cloned()).collect()
    }

    /// Every even variable and every odd symbol that occurs.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for (m, c) in &self.terms {
            c.collect_vars(&mut out);
            for g in m {
                match g {
                    Gen::Sym(s) => {
                        out.insert(*s);
                    }
                    Gen::App(f) => f.args.iter().for_each(|a| a.collect_vars(&mut out)),
                }
            }
        }
        out
    }

    pub fn params(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for (m, c) in &self.terms {
            c.collect_params(&mut out);
            for g in m {
                if let Gen::App(f) = g {
                    f.args.iter().for_each(|a| a.collect_params(&mut out));
                }
            }
        }
        out
    }

    /// Left partial derivative with respect to a symbol of either parity.
    pub fn partial(&self, v: Symbol) -> GExpr {
        let mut out = GExpr::zero();
        for (m, c) in &self.terms {
            let dc = scalar_partial(c, v);
            if !dc.is_zero() {
                out.add_assign(&dc.mul(&GExpr::monomial(m)));
            }
            for (i, g) in m.iter().enumerate() {
                let dg = gen_partial(g, v);
                if dg.is_zero() {
                    continue;
                }
                let mut left = GExpr::monomial(&m[..i]).mul_scalar(c);
                if v.is_odd() && i % 2 == 1 {
                    left = left.neg();
                }
                let piece = left.mul(&dg).mul(&GExpr::monomial(&m[i + 1..]));
                out.add_assign(&piece);
            }
        }
        out
    }

    /// Substitute parameters by rational functions.
    pub fn bind_params(&self, env: &HashMap<Symbol, RatFunc>) -> Result<GExpr> {
        if env.is_empty() {
            return Ok(self.clone());
        }
        let mut out = GExpr::zero();
        for (m, c) in &self.terms {
            let c2 = c.bind_params(env)?;
            let mut word = Vec::with_capacity(m.len());
            for g in m {
                word.push(match g {
                    Gen::Sym(s) => Gen::Sym(*s),
                    Gen::App(f) => Gen::App(FuncApp {
                        func: f.func,
                        deriv: f.deriv.clone(),
                        args: f
                            .args
                            .iter()
                            .map(|a| a.bind_params(env))
                            .collect::<Result<Vec<_>>>()?,
                    }),
                });
            }
            match sort_word(&word) {
                Some((w, odd)) => out.add_term(w, if odd { c2.neg() } else { c2 }),
                None => {}
            }
        }
        Ok(out)
    }

    /// Simultaneous substitution of symbols (variables or parameters) by
    /// expressions of the same parity. Bosonic parameters must map to
    /// constants.
    pub fn substitute(&self, map: &HashMap<Symbol, GExpr>) -> Result<GExpr> {
        let mut params = HashMap::new();
        for (k, v) in map {
            let vp = v.parity().unwrap_or(true);
            if vp != k.is_odd() && !v.is_zero() {
                return Err(Error::ParityMismatch(format!("substitution for `{k}` has the wrong parity")));
            }
            if k.kind() == Kind::BosonicParameter {
                let c = v
                    .as_constant()
                    .ok_or_else(|| Error::Invalid(format!("parameter `{k}` must be bound to a constant")))?;
                params.insert(*k, c);
            }
        }
        let sub = Substituter { map, params };
        sub.expr(self)
    }

    /// Substitute a single symbol.
    pub fn subst1(&self, v: Symbol, value: &GExpr) -> Result<GExpr> {
        let mut map = HashMap::new();
        map.insert(v, value.clone());
        self.substitute(&map)
    }

    /// Component along a product of leading generators, e.g. the
    /// coefficient of `theta1 theta2` after moving them to the front.
    pub fn coefficient_of(&self, lead: &[Gen]) -> GExpr {
        let mut out = GExpr::zero();
        for (m, c) in &self.terms {
            if m.len() >= lead.len() && &m[..lead.len()] == lead {
                out.add_term(m[lead.len()..].to_vec(), c.clone());
            }
        }
        out
    }
}

/// Derivative of a scalar with respect to a symbol of either parity.
pub fn scalar_partial(c: &Scalar, v: Symbol) -> GExpr {
    if !v.is_odd() {
        return GExpr::scalar(c.deriv_even(v));
    }
    if !c.depends_on(v) {
        return GExpr::zero();
    }
    let mut out = GExpr::zero();
    for (m, coef) in &c.terms {
        for (a, e) in &m.factors {
            let da = atom_partial_odd(a, v);
            if da.is_zero() {
                continue;
            }
            let mut rest = m.clone();
            rest.factors.insert(a.clone(), e.sub(&RatFunc::one()));
            let piece = mono_scalar(rest, coef.mul(e));
            out.add_assign(&da.mul_scalar(&piece));
        }
        if let Some(arg) = &m.exp {
            let da = scalar_partial(arg, v);
            if !da.is_zero() {
                out.add_assign(&da.mul_scalar(&mono_scalar(m.clone(), coef.clone())));
            }
        }
    }
    out
}

fn mono_scalar(m: Mono, c: RatFunc) -> Scalar {
    Scalar::from_term(m, c)
}

fn member_partial(s: Symbol, v: Symbol) -> GExpr {
    match s.family() {
        Some(f) if f.kind() == FamilyKind::Explicit => match s.derive_member(v) {
            MemberDeriv::Member(sign, m) => GExpr::symbol(m).scale_int(sign as i64),
            _ => GExpr::zero(),
        },
        _ => GExpr::zero(),
    }
}

fn atom_partial_odd(a: &Atom, v: Symbol) -> GExpr {
    match a {
        Atom::Var(s) => member_partial(*s, v),
        Atom::App(f) => app_partial(f, v, false),
        Atom::Ln(s) => {
            let d = scalar_partial(s, v);
            if d.is_zero() {
                d
            } else {
                d.mul_scalar(&s.inv().expect("ln argument is nonzero"))
            }
        }
        Atom::Sum(s) => scalar_partial(s, v),
        Atom::Coeff(_) | Atom::Num(_) => GExpr::zero(),
    }
}

fn app_partial(f: &FuncApp, v: Symbol, odd_valued: bool) -> GExpr {
    let mut out = GExpr::zero();
    for (i, arg) in f.args.iter().enumerate() {
        let d = scalar_partial(arg, v);
        if d.is_zero() {
            continue;
        }
        let fd = f.derived(i);
        let val = if odd_valued {
            GExpr::gen(Gen::App(fd))
        } else {
            GExpr::scalar(Scalar::app(fd))
        };
        out.add_assign(&d.mul(&val));
    }
    out
}

fn gen_partial(g: &Gen, v: Symbol) -> GExpr {
    match g {
        Gen::Sym(s) => {
            if *s == v {
                GExpr::one()
            } else {
                member_partial(*s, v)
            }
        }
        Gen::App(f) => app_partial(f, v, true),
    }
}

struct Substituter<'a> {
    map: &'a HashMap<Symbol, GExpr>,
    params: HashMap<Symbol, RatFunc>,
}

impl Substituter<'_> {
    fn ratfunc(&self, r: &RatFunc) -> Result<RatFunc> {
        if self.params.is_empty() {
            Ok(r.clone())
        } else {
            r.subst(&self.params)
        }
    }

    fn expr(&self, e: &GExpr) -> Result<GExpr> {
        let mut out = GExpr::zero();
        for (m, c) in &e.terms {
            let mut term = self.scalar(c)?;
            for g in m {
                let v = match g {
                    Gen::Sym(s) => self.map.get(s).cloned().unwrap_or_else(|| GExpr::gen(g.clone())),
                    Gen::App(f) => {
                        let args = f
                            .args
                            .iter()
                            .map(|a| self.scalar(a))
                            .collect::<Result<Vec<_>>>()?;
                        taylor(f.func, &f.deriv, &args, true)?
                    }
                };
                term = term.mul(&v);
                if term.is_zero() {
                    break;
                }
            }
            out.add_assign(&term);
        }
        Ok(out)
    }

    fn scalar(&self, c: &Scalar) -> Result<GExpr> {
        let mut out = GExpr::zero();
        for (m, coef) in &c.terms {
            let mut term = GExpr::constant(self.ratfunc(coef)?);
            for (a, e) in &m.factors {
                let e = self.ratfunc(e)?;
                let piece = match a {
                    Atom::Var(s) => match self.map.get(s) {
                        Some(v) => v.pow(&e)?,
                        None => GExpr::scalar(Scalar::atom_pow(a, &e)?),
                    },
                    Atom::App(f) => {
                        let args = f
                            .args
                            .iter()
                            .map(|x| self.scalar(x))
                            .collect::<Result<Vec<_>>>()?;
                        taylor(f.func, &f.deriv, &args, false)?.pow(&e)?
                    }
                    Atom::Ln(s) => self.scalar(s)?.ln()?.pow(&e)?,
                    Atom::Sum(s) => self.scalar(s)?.pow(&e)?,
                    Atom::Coeff(p) => GExpr::scalar(Scalar::ratfunc_pow(&self.ratfunc(&RatFunc::from_poly(p.clone()))?, &e)?),
                    Atom::Num(_) => GExpr::scalar(Scalar::atom_pow(a, &e)?),
                };
                term = term.mul(&piece);
            }
            if let Some(arg) = &m.exp {
                term = term.mul(&self.scalar(arg)?.exp()?);
            }
            if !m.sign.is_zero() {
                term = term.mul(&GExpr::scalar(Scalar::sign_pow(&self.ratfunc(&m.sign)?)));
            }
            out.add_assign(&term);
        }
        Ok(out)
    }
}

/// Expand `f^(deriv)(b1 + s1, ..., bn + sn)` in the even souls `si`.
fn taylor(f: Function, deriv: &[u32], args: &[GExpr], odd_valued: bool) -> Result<GExpr> {
    let mut bodies = Vec::with_capacity(args.len());
    let mut souls = Vec::with_capacity(args.len());
    for a in args {
        if a.parity() != Some(false) {
            return Err(Error::ParityMismatch(format!(
                "argument of `{}` became odd under substitution",
                f.name()
            )));
        }
        bodies.push(a.body());
        souls.push(a.soul());
    }
    let base = FuncApp {
        func: f,
        deriv: deriv.to_vec(),
        args: bodies,
    };
    Ok(taylor_rec(&base, &souls, 0, odd_valued))
}

fn taylor_rec(f: &FuncApp, souls: &[GExpr], slot: usize, odd_valued: bool) -> GExpr {
    if slot == souls.len() {
        return if odd_valued {
            GExpr::gen(Gen::App(f.clone()))
        } else {
            GExpr::scalar(Scalar::app(f.clone()))
        };
    }
    let s = &souls[slot];
    let mut out = taylor_rec(f, souls, slot + 1, odd_valued);
    if s.is_zero() {
        return out;
    }
    let mut power = GExpr::one();
    let mut fact = Q::from_integer(1.into());
    let mut g = f.clone();
    let mut k = 1;
    loop {
        power = power.mul(s);
        if power.is_zero() {
            break;
        }
        fact *= q(k);
        g = g.derived(slot);
        let inner = taylor_rec(&g, souls, slot + 1, odd_valued);
        out = out.add(&power.scale(&RatFunc::constant(Q::from_integer(1.into()) / &fact)).mul(&inner));
        k += 1;
    }
    out
}

/// Apply a declared function to arguments. Odd arguments are expanded
/// into component functions of the even arguments, named `<f>c<digits>`
/// after the odd slots present; even arguments are Taylor-expanded about
/// their bodies.
pub fn apply_function(f: Function, args: &[GExpr]) -> Result<GExpr> {
    if args.len() != f.arity() {
        return Err(Error::Invalid(format!(
            "`{}` expects {} arguments, got {}",
            f.name(),
            f.arity(),
            args.len()
        )));
    }
    let mut odd_slots = Vec::new();
    let mut even_args = Vec::new();
    for (i, a) in args.iter().enumerate() {
        match a.parity() {
            Some(true) => odd_slots.push(i),
            Some(false) => even_args.push(a.clone()),
            None => {
                return Err(Error::ParityMismatch(format!(
                    "argument {} of `{}` has mixed parity",
                    i + 1,
                    f.name()
                )))
            }
        }
    }
    if odd_slots.is_empty() {
        return taylor(f, &vec![0; args.len()], args, f.is_odd());
    }
    fermionic_taylor(f, args, &odd_slots, &even_args)
}

fn fermionic_taylor(f: Function, args: &[GExpr], odd_slots: &[usize], even_args: &[GExpr]) -> Result<GExpr> {
    let n = odd_slots.len();
    let mut out = GExpr::zero();
    for mask in 0u32..(1 << n) {
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let digits: String = if subset.is_empty() {
            "0".into()
        } else {
            subset.iter().map(|i| (i + 1).to_string()).collect()
        };
        let name = format!("{}c{}", f.name(), digits);
        let odd = f.is_odd() ^ (subset.len() % 2 == 1);
        let component = if even_args.is_empty() {
            let kind = if odd {
                Kind::FermionicParameter
            } else {
                Kind::BosonicParameter
            };
            GExpr::symbol(Symbol::new(&name, kind)?)
        } else {
            let g = Function::declare(&name, odd, even_args.len())?;
            taylor(g, &vec![0; even_args.len()], even_args, odd)?
        };
        let mut prefix = GExpr::one();
        for i in &subset {
            prefix = prefix.mul(&args[odd_slots[*i]]);
        }
        out.add_assign(&prefix.mul(&component));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{Family, FamilyKind};

    fn th(n: u8) -> Symbol {
        Symbol::new(&format!("theta{n}"), Kind::FermionicVariable).unwrap()
    }

    #[test]
    fn anticommutation_and_nilpotency() {
        let a = GExpr::symbol(th(1));
        let b = GExpr::symbol(th(2));
        assert_eq!(a.mul(&b), b.mul(&a).neg());
        assert!(a.mul(&a).is_zero());
        let mu = GExpr::symbol(Symbol::new("mu", Kind::FermionicParameter).unwrap());
        let abm = a.mul(&b).mul(&mu);
        assert_eq!(mu.mul(&a).mul(&b), abm);
        assert_eq!(b.mul(&mu).mul(&a), abm);
        assert_eq!(a.mul(&mu).mul(&b), abm.neg());
    }

    #[test]
    fn left_derivative_signs() {
        let (a, b) = (th(1), th(2));
        let ab = GExpr::symbol(a).mul(&GExpr::symbol(b));
        assert_eq!(ab.partial(a), GExpr::symbol(b));
        assert_eq!(ab.partial(b), GExpr::symbol(a).neg());
    }

    #[test]
    fn explicit_family_derivatives() {
        let x = Symbol::new("x", Kind::BosonicVariable).unwrap();
        let f = Family::declare("gtest", false, FamilyKind::Explicit, &[x, th(1), th(2)]).unwrap();
        let g = GExpr::symbol(f.base());
        let d12 = g.partial(th(2)).partial(th(1));
        let d21 = g.partial(th(1)).partial(th(2));
        assert_eq!(d12, d21.neg());
        assert!(!d12.is_zero());
    }

    #[test]
    fn power_series_inverts() {
        let x = Symbol::new("x", Kind::BosonicVariable).unwrap();
        let u = GExpr::symbol(x).add(&GExpr::symbol(th(1)).mul(&GExpr::symbol(th(2))));
        let inv = u.inv().unwrap();
        assert_eq!(u.mul(&inv), GExpr::one());
        let g = RatFunc::param(Symbol::new("gamma", Kind::BosonicParameter).unwrap());
        let a = u.pow(&g).unwrap();
        let b = u.pow(&g.neg()).unwrap();
        assert_eq!(a.mul(&b), GExpr::one());
        let l = u.ln().unwrap();
        assert_eq!(l.exp().unwrap(), u);
    }

    #[test]
    fn odd_argument_expansion() {
        let f = Function::declare("gfer", false, 1).unwrap();
        let z = GExpr::symbol(th(1));
        let e = apply_function(f, &[z.clone()]).unwrap();
        assert_eq!(e.terms.len(), 2);
        assert_eq!(e.partial(th(1)).partial(th(1)), GExpr::zero());
    }
}
