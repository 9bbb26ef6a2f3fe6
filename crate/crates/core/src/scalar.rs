//! Commuting (bosonic) expressions.
//!
//! A scalar is a sum of monomials with coefficients in the rational
//! function field of the bosonic parameters. A monomial is a product of
//! atoms raised to rational-function exponents, an optional exponential
//! factor and a sign power `(-1)^s`.
//!
//! Normal form rules:
//! * atoms with zero exponent are dropped;
//! * powers of a parameter factor or a prime that also divide the
//!   coefficient are folded into the atom, and integer powers of such atoms
//!   are folded back into the coefficient;
//! * an opaque sum atom has a leading coefficient of one and no common
//!   variable factor, and never carries a positive integer exponent;
//! * `exp(c ln v)` becomes `v^c`;
//! * sign exponents keep their constant part in `[0, 1)` and integer
//!   coefficients of parameters reduced mod 2, treating parameters that
//!   appear in sign exponents as integers.

use crate::error::{Error, Result};
use crate::poly::{q, Poly, RatFunc, Q};
use crate::symbol::{FamilyKind, Function, MemberDeriv, Symbol};
use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FuncApp {
    pub func: Function,
    /// Derivative order in each argument slot.
    pub deriv: Vec<u32>,
    pub args: Vec<Scalar>,
}

impl FuncApp {
    pub fn new(func: Function, args: Vec<Scalar>) -> FuncApp {
        FuncApp {
            func,
            deriv: vec![0; args.len()],
            args,
        }
    }

    pub fn derived(&self, slot: usize) -> FuncApp {
        let mut d = self.clone();
        d.deriv[slot] += 1;
        d
    }

    pub fn is_odd(&self) -> bool {
        self.func.is_odd()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Atom {
    Var(Symbol),
    App(FuncApp),
    Ln(Box<Scalar>),
    Sum(Box<Scalar>),
    /// Normalized parameter polynomial.
    Coeff(Poly),
    /// Positive prime.
    Num(BigInt),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono {
    pub factors: BTreeMap<Atom, RatFunc>,
    pub exp: Option<Box<Scalar>>,
    pub sign: RatFunc,
}

impl Mono {
    pub fn one() -> Mono {
        Mono::default()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.exp.is_none() && self.sign.is_zero()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Scalar {
    pub terms: BTreeMap<Mono, RatFunc>,
}

fn is_int(r: &RatFunc) -> Option<i64> {
    r.as_integer()
}

fn prime_factors(n: &BigInt) -> Vec<(BigInt, i64)> {
    let mut out = Vec::new();
    let mut n = n.abs();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000u32);
    while &p * &p <= n && p < limit {
        let mut k = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        if k > 0 {
            out.push((p.clone(), k));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

fn valuation(c: &Q, p: &BigInt) -> i64 {
    let mut v = 0;
    let mut n = c.numer().abs();
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    let mut d = c.denom().abs();
    while (&d % p).is_zero() {
        d /= p;
        v -= 1;
    }
    v
}

fn bigpow(p: &BigInt, n: i64) -> Q {
    let b = num::pow(p.clone(), n.unsigned_abs() as usize);
    if n >= 0 {
        Q::from_integer(b)
    } else {
        Q::new(BigInt::one(), b)
    }
}

/// Reduce a sign exponent; returns the reduced exponent and whether the
/// coefficient must flip.
fn reduce_sign(s: &RatFunc) -> (RatFunc, bool) {
    if !s.denom_factors().is_empty() {
        return (s.clone(), false);
    }
    let mut flip = false;
    let mut out = Poly::zero();
    for (m, c) in &s.numer().0 {
        let two = q(2);
        let mut r = c - (c / &two).floor() * &two;
        if m.0.is_empty() && r >= Q::one() {
            r -= Q::one();
            flip = !flip;
        }
        if !r.is_zero() {
            out.0.insert(m.clone(), r);
        }
    }
    (RatFunc::from_poly(out), flip)
}

/// Bring a monomial and its coefficient to normal form.
fn finish(mut m: Mono, mut c: RatFunc) -> Option<(Mono, RatFunc)> {
    if c.is_zero() {
        return None;
    }
    if let Some(arg) = m.exp.take() {
        let mut rest = Scalar::zero();
        for (am, ac) in arg.terms {
            let ln_var = if am.exp.is_none() && am.sign.is_zero() && am.factors.len() == 1 {
                match am.factors.iter().next() {
                    Some((Atom::Ln(inner), e)) if e.is_one() => inner.single_var(),
                    _ => None,
                }
            } else {
                None
            };
            match ln_var {
                Some(v) => {
                    let e = m.factors.entry(Atom::Var(v)).or_insert_with(RatFunc::zero);
                    *e = e.add(&ac);
                    if e.is_zero() {
                        m.factors.remove(&Atom::Var(v));
                    }
                }
                None => {
                    rest.terms.insert(am, ac);
                }
            }
        }
        if !rest.is_zero() {
            m.exp = Some(Box::new(rest));
        }
    }
    m.factors.retain(|_, e| !e.is_zero());
    let special: Vec<Atom> = m
        .factors
        .keys()
        .filter(|a| matches!(a, Atom::Coeff(_) | Atom::Num(_)))
        .cloned()
        .collect();
    for a in special {
        let mut e = m.factors.remove(&a).unwrap();
        match &a {
            Atom::Coeff(f) => {
                let (_, fs) = c.factors();
                if let Some((_, v)) = fs.iter().find(|(g, _)| g == f) {
                    let fr = RatFunc::from_poly(f.clone());
                    c = c.mul(&fr.pow_int(-*v).expect("nonzero factor"));
                    e = e.add(&RatFunc::int(*v));
                }
                if let Some(n) = is_int(&e) {
                    let fr = RatFunc::from_poly(f.clone());
                    c = c.mul(&fr.pow_int(n).expect("nonzero factor"));
                    continue;
                }
            }
            Atom::Num(p) => {
                let (content, _) = c.factors();
                let v = valuation(&content, p);
                if v != 0 {
                    c = c.scale(&bigpow(p, -v));
                    e = e.add(&RatFunc::int(v));
                }
                if let Some(n) = is_int(&e) {
                    c = c.scale(&bigpow(p, n));
                    continue;
                }
            }
            _ => unreachable!(),
        }
        if !e.is_zero() {
            m.factors.insert(a, e);
        }
    }
    let (s, flip) = reduce_sign(&m.sign);
    m.sign = s;
    if flip {
        c = c.neg();
    }
    Some((m, c))
}

/// Normalize and add a term, expanding any sum atom that ended up with a
/// positive integer exponent.
fn push_term(out: &mut Scalar, m: Mono, c: RatFunc) {
    let Some((mut m, c)) = finish(m, c) else {
        return;
    };
    let expand = m.factors.iter().find_map(|(a, e)| match (a, is_int(e)) {
        (Atom::Sum(_), Some(n)) if n > 0 => Some(a.clone()),
        _ => None,
    });
    match expand {
        None => out.add_term(m, c),
        Some(a) => {
            let n = is_int(&m.factors.remove(&a).unwrap()).unwrap();
            let Atom::Sum(body) = a else { unreachable!() };
            let mut rest = Scalar::zero();
            push_term(&mut rest, m, c);
            let mut prod = rest;
            for _ in 0..n {
                prod = prod.mul(&body);
            }
            for (m2, c2) in prod.terms {
                out.add_term(m2, c2);
            }
        }
    }
}

fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut factors = a.factors.clone();
    for (k, e) in &b.factors {
        match factors.get_mut(k) {
            Some(x) => *x = x.add(e),
            None => {
                factors.insert(k.clone(), e.clone());
            }
        }
    }
    let exp = match (&a.exp, &b.exp) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => {
            let s = x.add(y);
            (!s.is_zero()).then(|| Box::new(s))
        }
    };
    Mono {
        factors,
        exp,
        sign: a.sign.add(&b.sign),
    }
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::default()
    }

    pub fn one() -> Scalar {
        Scalar::constant(RatFunc::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::constant(RatFunc::int(n))
    }

    pub fn rational(c: Q) -> Scalar {
        Scalar::constant(RatFunc::constant(c))
    }

    pub fn constant(c: RatFunc) -> Scalar {
        let mut s = Scalar::zero();
        if !c.is_zero() {
            s.terms.insert(Mono::one(), c);
        }
        s
    }

    pub fn param(p: Symbol) -> Scalar {
        Scalar::constant(RatFunc::param(p))
    }

    pub fn var(v: Symbol) -> Scalar {
        Scalar::atom_raw(Atom::Var(v))
    }

    pub fn app(f: FuncApp) -> Scalar {
        Scalar::atom_raw(Atom::App(f))
    }

    fn atom_raw(a: Atom) -> Scalar {
        let mut m = Mono::one();
        m.factors.insert(a, RatFunc::one());
        let mut s = Scalar::zero();
        s.terms.insert(m, RatFunc::one());
        s
    }

    pub fn from_term(m: Mono, c: RatFunc) -> Scalar {
        let mut s = Scalar::zero();
        push_term(&mut s, m, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Pure coefficient value, if the scalar contains no atoms.
    pub fn as_constant(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => self.terms.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn single_var(&self) -> Option<Symbol> {
        let (m, c) = self.single_term()?;
        if !c.is_one() || m.exp.is_some() || !m.sign.is_zero() || m.factors.len() != 1 {
            return None;
        }
        match m.factors.iter().next() {
            Some((Atom::Var(v), e)) if e.is_one() => Some(*v),
            _ => None,
        }
    }

    pub fn single_term(&self) -> Option<(&Mono, &RatFunc)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, m: Mono, c: RatFunc) {
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

    pub fn add(&self, other: &Scalar) -> Scalar {
        let (mut out, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RatFunc) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        let mut out = Scalar::zero();
        for (m, v) in &self.terms {
            push_term(&mut out, m.clone(), v.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca.mul(cb);
                let m = if ma.is_one() {
                    mb.clone()
                } else if mb.is_one() {
                    ma.clone()
                } else {
                    mono_mul(ma, mb)
                };
                push_term(&mut out, m, c);
            }
        }
        out
    }

    /// `(-1)^e`.
    pub fn sign_pow(e: &RatFunc) -> Scalar {
        let m = Mono {
            sign: e.clone(),
            ..Mono::one()
        };
        Scalar::from_term(m, RatFunc::one())
    }

    pub fn exp(arg: &Scalar) -> Scalar {
        if arg.is_zero() {
            return Scalar::one();
        }
        let m = Mono {
            exp: Some(Box::new(arg.clone())),
            ..Mono::one()
        };
        Scalar::from_term(m, RatFunc::one())
    }

    pub fn ln(arg: &Scalar) -> Result<Scalar> {
        if arg.is_zero() {
            return Err(Error::NonInvertibleBody("ln(0)".into()));
        }
        if let Some((m, c)) = arg.single_term() {
            if c.is_one() && m.exp.is_none() && m.sign.is_zero() {
                let mut out = Scalar::zero();
                let mut opaque = false;
                for (a, e) in &m.factors {
                    match a {
                        Atom::Var(v) => out = out.add(&Scalar::atom_raw(Atom::Ln(Box::new(Scalar::var(*v)))).scale(e)),
                        _ => opaque = true,
                    }
                }
                if !opaque {
                    return Ok(out);
                }
            }
            if m.is_one() && c.is_one() {
                return Ok(Scalar::zero());
            }
        }
        Ok(Scalar::atom_raw(Atom::Ln(Box::new(arg.clone()))))
    }

    /// Raise a coefficient to a (possibly symbolic) power.
    pub fn ratfunc_pow(c: &RatFunc, p: &RatFunc) -> Result<Scalar> {
        if let Some(n) = is_int(p) {
            return Ok(Scalar::constant(c.pow_int(n)?));
        }
        if c.is_zero() {
            return Err(Error::NonInvertibleBody("0 raised to a symbolic power".into()));
        }
        let (content, fs) = c.factors();
        let mut m = Mono::one();
        if content.is_negative() {
            m.sign = p.clone();
        }
        let abs = content.abs();
        for (pr, k) in prime_factors(abs.numer()) {
            m.factors.insert(Atom::Num(pr), p.scale(&q(k)));
        }
        for (pr, k) in prime_factors(abs.denom()) {
            let e = p.scale(&q(-k));
            let entry = m.factors.entry(Atom::Num(pr)).or_insert_with(RatFunc::zero);
            *entry = entry.add(&e);
        }
        for (f, e) in fs {
            m.factors.insert(Atom::Coeff(f), p.scale(&q(e)));
        }
        Ok(Scalar::from_term(m, RatFunc::one()))
    }

    /// Split a multi-term sum as `c * mono * rest` where `rest` has leading
    /// coefficient one and no common variable factor.
    fn normalize_sum(&self) -> (RatFunc, Mono, Scalar) {
        let lead = self.terms.values().next().cloned().unwrap();
        let inv = lead.inv().expect("nonzero coefficient");
        let mut common: Option<BTreeMap<Atom, RatFunc>> = None;
        for m in self.terms.keys() {
            let vars: BTreeMap<Atom, RatFunc> = m
                .factors
                .iter()
                .filter(|(a, e)| matches!(a, Atom::Var(_)) && e.as_constant().is_some())
                .map(|(a, e)| (a.clone(), e.clone()))
                .collect();
            common = Some(match common {
                None => vars,
                Some(c) => c
                    .into_iter()
                    .filter_map(|(a, e)| {
                        let f = vars.get(&a)?;
                        let (x, y) = (e.as_constant().unwrap(), f.as_constant().unwrap());
                        Some((a, if x <= y { e } else { f.clone() }))
                    })
                    .collect(),
            });
        }
        let common = Mono {
            factors: common.unwrap_or_default(),
            ..Mono::one()
        };
        let mut inv_common = common.clone();
        for e in inv_common.factors.values_mut() {
            *e = e.neg();
        }
        let mut rest = Scalar::zero();
        for (m, c) in &self.terms {
            push_term(&mut rest, mono_mul(m, &inv_common), c.mul(&inv));
        }
        (lead, common, rest)
    }

    pub fn pow(&self, p: &RatFunc) -> Result<Scalar> {
        if p.is_zero() {
            return Ok(Scalar::one());
        }
        if self.is_zero() {
            return match is_int(p) {
                Some(n) if n > 0 => Ok(Scalar::zero()),
                _ => Err(Error::NonInvertibleBody("0 raised to a non-positive power".into())),
            };
        }
        if let Some(n) = is_int(p) {
            if n > 0 {
                let mut out = Scalar::one();
                for _ in 0..n {
                    out = out.mul(self);
                }
                return Ok(out);
            }
        }
        if let Some((m, c)) = self.single_term() {
            let mut m2 = m.clone();
            for e in m2.factors.values_mut() {
                *e = e.mul(p);
            }
            if let Some(arg) = m2.exp.take() {
                let a = arg.scale(p);
                if !a.is_zero() {
                    m2.exp = Some(Box::new(a));
                }
            }
            m2.sign = m2.sign.mul(p);
            let cp = Scalar::ratfunc_pow(c, p)?;
            return Ok(Scalar::from_term(m2, RatFunc::one()).mul(&cp));
        }
        let (lead, common, rest) = self.normalize_sum();
        let head = Scalar::from_term(common, lead).pow(p)?;
        let mut m = Mono::one();
        m.factors.insert(Atom::Sum(Box::new(rest)), p.clone());
        Ok(head.mul(&Scalar::from_term(m, RatFunc::one())))
    }

    pub fn inv(&self) -> Result<Scalar> {
        self.pow(&RatFunc::int(-1))
    }

    /// The atom as a scalar in its own right.
    pub fn of_atom(a: &Atom) -> Scalar {
        match a {
            Atom::Sum(s) => (**s).clone(),
            Atom::Coeff(f) => Scalar::constant(RatFunc::from_poly(f.clone())),
            Atom::Num(p) => Scalar::rational(Q::from_integer(p.clone())),
            _ => Scalar::atom_raw(a.clone()),
        }
    }

    /// Build `a^e` from an atom.
    pub fn atom_pow(a: &Atom, e: &RatFunc) -> Result<Scalar> {
        match a {
            Atom::Var(_) | Atom::App(_) | Atom::Ln(_) => {
                let mut m = Mono::one();
                m.factors.insert(a.clone(), e.clone());
                Ok(Scalar::from_term(m, RatFunc::one()))
            }
            Atom::Coeff(f) => Scalar::ratfunc_pow(&RatFunc::from_poly(f.clone()), e),
            Atom::Num(p) => Scalar::ratfunc_pow(&RatFunc::constant(Q::from_integer(p.clone())), e),
            Atom::Sum(s) => s.pow(e),
        }
    }

    /// Whether any atom mentions `v`, directly or through an explicit
    /// family member depending on it.
    pub fn depends_on(&self, v: Symbol) -> bool {
        self.terms.keys().any(|m| mono_depends(m, v))
    }

    /// Derivative with respect to an even symbol.
    pub fn deriv_even(&self, v: Symbol) -> Scalar {
        debug_assert!(!v.is_odd());
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            if !mono_depends(m, v) {
                continue;
            }
            for (a, e) in &m.factors {
                let da = atom_deriv_even(a, v);
                if da.is_zero() {
                    continue;
                }
                let mut rest = m.clone();
                rest.factors.insert(a.clone(), e.sub(&RatFunc::one()));
                let piece = Scalar::from_term(rest, c.mul(e));
                out = out.add(&piece.mul(&da));
            }
            if let Some(arg) = &m.exp {
                let da = arg.deriv_even(v);
                if !da.is_zero() {
                    let whole = Scalar::from_term(m.clone(), c.clone());
                    out = out.add(&whole.mul(&da));
                }
            }
        }
        out
    }

    /// Collect every even variable atom, recursively.
    pub fn collect_vars(&self, out: &mut BTreeSet<Symbol>) {
        for m in self.terms.keys() {
            for a in m.factors.keys() {
                match a {
                    Atom::Var(v) => {
                        out.insert(*v);
                    }
                    Atom::App(f) => f.args.iter().for_each(|s| s.collect_vars(out)),
                    Atom::Ln(s) | Atom::Sum(s) => s.collect_vars(out),
                    _ => {}
                }
            }
            if let Some(e) = &m.exp {
                e.collect_vars(out);
            }
        }
    }

    /// Collect every parameter mentioned in coefficients and exponents.
    pub fn collect_params(&self, out: &mut BTreeSet<Symbol>) {
        for (m, c) in &self.terms {
            out.extend(c.symbols());
            out.extend(m.sign.symbols());
            for (a, e) in &m.factors {
                out.extend(e.symbols());
                match a {
                    Atom::App(f) => f.args.iter().for_each(|s| s.collect_params(out)),
                    Atom::Ln(s) | Atom::Sum(s) => s.collect_params(out),
                    Atom::Coeff(p) => out.extend(p.symbols()),
                    _ => {}
                }
            }
            if let Some(e) = &m.exp {
                e.collect_params(out);
            }
        }
    }

    /// Substitute parameters by rational functions.
    pub fn bind_params(&self, env: &std::collections::HashMap<Symbol, RatFunc>) -> Result<Scalar> {
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = Scalar::constant(c.subst(env)?);
            for (a, e) in &m.factors {
                let e2 = e.subst(env)?;
                let piece = match a {
                    Atom::Var(_) => Scalar::atom_pow(a, &e2)?,
                    Atom::App(f) => {
                        let args = f
                            .args
                            .iter()
                            .map(|s| s.bind_params(env))
                            .collect::<Result<Vec<_>>>()?;
                        let f2 = FuncApp {
                            func: f.func,
                            deriv: f.deriv.clone(),
                            args,
                        };
                        Scalar::atom_pow(&Atom::App(f2), &e2)?
                    }
                    Atom::Ln(s) => Scalar::ln(&s.bind_params(env)?)?.pow(&e2)?,
                    Atom::Sum(s) => s.bind_params(env)?.pow(&e2)?,
                    Atom::Coeff(p) => Scalar::ratfunc_pow(&p.subst(env)?, &e2)?,
                    Atom::Num(_) => Scalar::atom_pow(a, &e2)?,
                };
                term = term.mul(&piece);
            }
            if let Some(arg) = &m.exp {
                term = term.mul(&Scalar::exp(&arg.bind_params(env)?));
            }
            if !m.sign.is_zero() {
                term = term.mul(&Scalar::sign_pow(&m.sign.subst(env)?));
            }
            out = out.add(&term);
        }
        Ok(out)
    }
}

fn mono_depends(m: &Mono, v: Symbol) -> bool {
    m.factors.keys().any(|a| atom_depends(a, v)) || m.exp.as_ref().is_some_and(|e| e.depends_on(v))
}

fn atom_depends(a: &Atom, v: Symbol) -> bool {
    match a {
        Atom::Var(s) => {
            *s == v
                || s.family().is_some_and(|f| f.kind() == FamilyKind::Explicit && f.args().contains(&v))
        }
        Atom::App(f) => f.args.iter().any(|s| s.depends_on(v)),
        Atom::Ln(s) | Atom::Sum(s) => s.depends_on(v),
        Atom::Coeff(_) | Atom::Num(_) => false,
    }
}

fn atom_deriv_even(a: &Atom, v: Symbol) -> Scalar {
    match a {
        Atom::Var(s) => {
            if *s == v {
                return Scalar::one();
            }
            match s.family() {
                Some(f) if f.kind() == FamilyKind::Explicit => match s.derive_member(v) {
                    MemberDeriv::Member(sign, m) => Scalar::var(m).scale(&RatFunc::int(sign as i64)),
                    _ => Scalar::zero(),
                },
                _ => Scalar::zero(),
            }
        }
        Atom::App(f) => {
            let mut out = Scalar::zero();
            for (i, arg) in f.args.iter().enumerate() {
                let d = arg.deriv_even(v);
                if !d.is_zero() {
                    out = out.add(&d.mul(&Scalar::app(f.derived(i))));
                }
            }
            out
        }
        Atom::Ln(s) => {
            let d = s.deriv_even(v);
            if d.is_zero() {
                d
            } else {
                d.mul(&s.inv().expect("ln argument is nonzero"))
            }
        }
        Atom::Sum(s) => s.deriv_even(v),
        Atom::Coeff(_) | Atom::Num(_) => Scalar::zero(),
    }
}

/// Integer value of a sign exponent if it is a plain integer.
pub fn sign_value(e: &RatFunc) -> Option<i64> {
    e.as_integer().map(|n| if n.is_even() { 1 } else { -1 })
}

pub fn to_f64(c: &Q) -> f64 {
    c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qf;
    use crate::symbol::Kind;

    fn x() -> Symbol {
        Symbol::new("x", Kind::BosonicVariable).unwrap()
    }
    fn gamma() -> RatFunc {
        RatFunc::param(Symbol::new("gamma", Kind::BosonicParameter).unwrap())
    }

    #[test]
    fn powers_combine() {
        let x = Scalar::var(x());
        let a = x.pow(&RatFunc::constant(qf(3, 2))).unwrap();
        let b = x.pow(&RatFunc::constant(qf(-1, 2))).unwrap();
        assert_eq!(a.mul(&b), x);
        let g = x.pow(&gamma()).unwrap();
        let gi = x.pow(&gamma().neg()).unwrap();
        assert_eq!(g.mul(&gi), Scalar::one());
    }

    #[test]
    fn sign_powers_reduce() {
        let s = Scalar::sign_pow(&gamma());
        let s1 = Scalar::sign_pow(&gamma().add(&RatFunc::one()));
        assert_eq!(s.mul(&s1), Scalar::int(-1));
        assert_eq!(s.mul(&s), Scalar::one());
    }

    #[test]
    fn parameter_powers_absorb_coefficients() {
        let c8 = RatFunc::param(Symbol::new("C8", Kind::BosonicParameter).unwrap());
        let p = gamma().sub(&RatFunc::int(2));
        let a = Scalar::ratfunc_pow(&c8, &p).unwrap();
        let b = a.scale(&c8);
        let direct = Scalar::ratfunc_pow(&c8, &gamma().sub(&RatFunc::int(1))).unwrap();
        assert_eq!(b, direct);
        let back = b.scale(&c8.inv().unwrap());
        assert_eq!(back, a);
        let two = Scalar::ratfunc_pow(&RatFunc::int(-2), &gamma()).unwrap();
        let twice = two.scale(&RatFunc::int(-2));
        assert_eq!(twice, Scalar::ratfunc_pow(&RatFunc::int(-2), &gamma().add(&RatFunc::one())).unwrap());
    }

    #[test]
    fn exp_of_log_becomes_power() {
        let x = Scalar::var(x());
        let l = Scalar::ln(&x).unwrap();
        let e = Scalar::exp(&l.scale(&RatFunc::constant(qf(1, 2))));
        assert_eq!(e, x.pow(&RatFunc::constant(qf(1, 2))).unwrap());
    }

    #[test]
    fn derivative_of_power_and_log() {
        let xs = x();
        let x = Scalar::var(xs);
        let d = x.pow(&gamma()).unwrap().deriv_even(xs);
        let expect = x.pow(&gamma().sub(&RatFunc::one())).unwrap().scale(&gamma());
        assert_eq!(d, expect);
        let dl = Scalar::ln(&x).unwrap().deriv_even(xs);
        assert_eq!(dl, x.inv().unwrap());
    }

    #[test]
    fn sums_become_atoms_under_symbolic_powers() {
        let xs = x();
        let y = Symbol::new("y", Kind::BosonicVariable).unwrap();
        let s = Scalar::var(xs).add(&Scalar::var(y)).scale(&RatFunc::int(2));
        let p = s.pow(&gamma()).unwrap();
        let d = p.deriv_even(xs);
        let expect = s.pow(&gamma().sub(&RatFunc::one())).unwrap().scale(&gamma().scale(&q(2)));
        assert_eq!(d, expect);
    }
}
