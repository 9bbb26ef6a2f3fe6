//! Multivariate polynomials and rational functions over Q in the bosonic
//! parameters. These form the coefficient field of every expression.
//!
//! A rational function keeps its denominator as a product of normalized
//! factors (monic, no monomial content), which is enough to decide
//! equality after cancelling any factor that divides the numerator.

use crate::error::{Error, Result};
use crate::symbol::Symbol;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Sorted list of (parameter, exponent) pairs.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct PMono(pub Vec<(Symbol, u32)>);

impl PMono {
    pub fn one() -> Self {
        PMono(Vec::new())
    }

    pub fn var(s: Symbol) -> Self {
        PMono(vec![(s, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn mul(&self, other: &PMono) -> PMono {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, ea) = self.0[i];
            let (b, eb) = other.0[j];
            match a.cmp(&b) {
                Ordering::Less => {
                    out.push((a, ea));
                    i += 1
                }
                Ordering::Greater => {
                    out.push((b, eb));
                    j += 1
                }
                Ordering::Equal => {
                    out.push((a, ea + eb));
                    i += 1;
                    j += 1
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        PMono(out)
    }

    pub fn div(&self, other: &PMono) -> Option<PMono> {
        let mut out = self.0.clone();
        for &(s, e) in &other.0 {
            let pos = out.iter().position(|(a, _)| *a == s)?;
            if out[pos].1 < e {
                return None;
            }
            out[pos].1 -= e;
            if out[pos].1 == 0 {
                out.remove(pos);
            }
        }
        Some(PMono(out))
    }

    fn exp_of(&self, s: Symbol) -> u32 {
        self.0.iter().find(|(a, _)| *a == s).map_or(0, |(_, e)| *e)
    }

    /// Monomial gcd.
    pub fn gcd(&self, other: &PMono) -> PMono {
        PMono(
            self.0
                .iter()
                .filter_map(|&(s, e)| {
                    let f = other.exp_of(s);
                    (f > 0).then(|| (s, e.min(f)))
                })
                .collect(),
        )
    }

    /// Lexicographic monomial order (smallest symbol most significant).
    fn lex_cmp(&self, other: &PMono) -> Ordering {
        let mut i = 0;
        let mut j = 0;
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(a, ea)), Some(&(b, eb))) => match a.cmp(&b) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Poly(pub BTreeMap<PMono, Q>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn constant(c: Q) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(PMono::one(), c);
        }
        Poly(m)
    }

    pub fn var(s: Symbol) -> Self {
        let mut m = BTreeMap::new();
        m.insert(PMono::var(s), Q::one());
        Poly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.0.len() {
            0 => Some(Q::zero()),
            1 => self.0.get(&PMono::one()).cloned(),
            _ => None,
        }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self.0.keys().flat_map(|m| m.0.iter().map(|(s, _)| *s)).collect();
        v.sort();
        v.dedup();
        v
    }

    fn add_term(&mut self, m: PMono, c: Q) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|(m, c)| (m.clone(), -c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, v)| (m.clone(), v * c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_mono(&self, m: &PMono) -> Poly {
        Poly(self.0.iter().map(|(k, c)| (k.mul(m), c.clone())).collect())
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::constant(Q::one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    fn leading(&self) -> Option<(&PMono, &Q)> {
        self.0.iter().max_by(|a, b| a.0.lex_cmp(b.0))
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?;
        let mut rem = self.clone();
        let mut quo = Poly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().map(|(m, c)| (m.clone(), c.clone()))?;
            let m = rm.div(lm)?;
            let c = rc / lc;
            rem = rem.sub(&d.mul_mono(&m).scale(&c));
            quo.add_term(m, c);
        }
        Some(quo)
    }

    /// Split into `c * mono * rest` with `rest` monic and free of monomial
    /// content. `rest` is `None` when it would be 1.
    pub fn split(&self) -> (Q, PMono, Option<Poly>) {
        if self.is_zero() {
            return (Q::zero(), PMono::one(), None);
        }
        let mut g: Option<PMono> = None;
        for m in self.0.keys() {
            g = Some(match g {
                None => m.clone(),
                Some(h) => h.gcd(m),
            });
        }
        let g = g.unwrap();
        let reduced: Poly = Poly(
            self.0
                .iter()
                .map(|(m, c)| (m.div(&g).unwrap(), c.clone()))
                .collect(),
        );
        let lc = reduced.leading().unwrap().1.clone();
        let rest = reduced.scale(&(Q::one() / &lc));
        if rest.as_constant().is_some() {
            (lc, g, None)
        } else {
            (lc, g, Some(rest))
        }
    }

    pub fn eval(&self, env: &HashMap<Symbol, Q>) -> Option<Q> {
        let mut total = Q::zero();
        for (m, c) in &self.0 {
            let mut v = c.clone();
            for (s, e) in &m.0 {
                let x = env.get(s)?;
                v *= num::pow(x.clone(), *e as usize);
            }
            total += v;
        }
        Some(total)
    }

    pub fn subst(&self, env: &HashMap<Symbol, RatFunc>) -> Result<RatFunc> {
        let mut total = RatFunc::zero();
        for (m, c) in &self.0 {
            let mut v = RatFunc::constant(c.clone());
            for (s, e) in &m.0 {
                let x = env.get(s).cloned().unwrap_or_else(|| RatFunc::param(*s));
                v = v.mul(&x.pow_int(*e as i64)?);
            }
            total = total.add(&v);
        }
        Ok(total)
    }

    pub fn deriv(&self, s: Symbol) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            let e = m.exp_of(s);
            if e > 0 {
                let mut mm = m.clone();
                let pos = mm.0.iter().position(|(a, _)| *a == s).unwrap();
                mm.0[pos].1 -= 1;
                if mm.0[pos].1 == 0 {
                    mm.0.remove(pos);
                }
                out.add_term(mm, c * q(e as i64));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&PMono, &Q)> = self.0.iter().collect();
        terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| b.0.lex_cmp(a.0)));
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || m.0.is_empty() {
                parts.push(fmt_q(&a));
            }
            for (s, e) in &m.0 {
                if *e == 1 {
                    parts.push(s.name().to_string());
                } else {
                    parts.push(format!("{}^{}", s.name(), e));
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Rational function: numerator over a product of normalized factors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RatFunc {
    num: Poly,
    den: BTreeMap<Poly, u32>,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: Poly::zero(),
            den: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        RatFunc::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        RatFunc {
            num: Poly::constant(c),
            den: BTreeMap::new(),
        }
    }

    pub fn int(n: i64) -> Self {
        RatFunc::constant(q(n))
    }

    pub fn param(s: Symbol) -> Self {
        RatFunc::from_poly(Poly::var(s))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc {
            num: p,
            den: BTreeMap::new(),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom_factors(&self) -> &BTreeMap<Poly, u32> {
        &self.den
    }

    pub fn denom(&self) -> Poly {
        let mut d = Poly::constant(Q::one());
        for (f, m) in &self.den {
            d = d.mul(&f.pow(*m));
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.as_constant()
            .filter(|c| c.is_integer())
            .and_then(|c| c.numer().to_i64())
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v = self.num.symbols();
        for f in self.den.keys() {
            v.extend(f.symbols());
        }
        v.sort();
        v.dedup();
        v
    }

    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            return RatFunc::zero();
        }
        let keys: Vec<Poly> = self.den.keys().cloned().collect();
        for f in keys {
            let mut m = self.den[&f];
            while m > 0 {
                match self.num.div_exact(&f) {
                    Some(qt) => {
                        self.num = qt;
                        m -= 1;
                    }
                    None => break,
                }
            }
            if m == 0 {
                self.den.remove(&f);
            } else {
                self.den.insert(f, m);
            }
        }
        self
    }

    fn push_den(den: &mut BTreeMap<Poly, u32>, num: &mut Poly, p: &Poly, mult: u32) -> Result<()> {
        let (c, mono, rest) = p.split();
        if c.is_zero() {
            return Err(Error::DivisionByZero);
        }
        *num = num.scale(&num::pow(Q::one() / c, mult as usize));
        for (s, e) in &mono.0 {
            *den.entry(Poly::var(*s)).or_insert(0) += e * mult;
        }
        if let Some(r) = rest {
            *den.entry(r).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFunc {
                num: self.num.add(&other.num),
                den: self.den.clone(),
            }
            .reduce();
        }
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            let e = den.entry(f.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let cofactor = |d: &BTreeMap<Poly, u32>| {
            let mut p = Poly::constant(Q::one());
            for (f, m) in &den {
                let have = d.get(f).copied().unwrap_or(0);
                p = p.mul(&f.pow(m - have));
            }
            p
        };
        let num = self
            .num
            .mul(&cofactor(&self.den))
            .add(&other.num.mul(&cofactor(&other.den)));
        RatFunc { num, den }.reduce()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        let mut den = self.den.clone();
        for (f, m) in &other.den {
            *den.entry(f.clone()).or_insert(0) += m;
        }
        RatFunc {
            num: self.num.mul(&other.num),
            den,
        }
        .reduce()
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
        .reduce()
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = Poly::constant(Q::one());
        for (f, m) in &self.den {
            num = num.mul(&f.pow(*m));
        }
        let mut den = BTreeMap::new();
        RatFunc::push_den(&mut den, &mut num, &self.num, 1)?;
        Ok(RatFunc { num, den }.reduce())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow_int(&self, n: i64) -> Result<RatFunc> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut out = RatFunc::one();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    pub fn eval(&self, env: &HashMap<Symbol, Q>) -> Option<Q> {
        let n = self.num.eval(env)?;
        let d = self.denom().eval(env)?;
        if d.is_zero() {
            None
        } else {
            Some(n / d)
        }
    }

    pub fn subst(&self, env: &HashMap<Symbol, RatFunc>) -> Result<RatFunc> {
        let n = self.num.subst(env)?;
        let d = self.denom().subst(env)?;
        n.div(&d)
    }

    pub fn deriv(&self, s: Symbol) -> RatFunc {
        // (n/d)' = n'/d - n d'/d^2
        let d = self.denom();
        let a = RatFunc {
            num: self.num.deriv(s),
            den: self.den.clone(),
        }
        .reduce();
        let mut den2 = self.den.clone();
        for v in den2.values_mut() {
            *v *= 2;
        }
        let b = RatFunc {
            num: self.num.mul(&d.deriv(s)),
            den: den2,
        }
        .reduce();
        a.sub(&b)
    }

    /// Factored view `c * prod f_i^{e_i}` with every `f_i` normalized
    /// (monic, single parameters for monomial content).
    pub fn factors(&self) -> (Q, Vec<(Poly, i64)>) {
        let (c, mono, rest) = self.num.split();
        let mut out: BTreeMap<Poly, i64> = BTreeMap::new();
        for (s, e) in &mono.0 {
            *out.entry(Poly::var(*s)).or_insert(0) += *e as i64;
        }
        if let Some(r) = rest {
            *out.entry(r).or_insert(0) += 1;
        }
        for (f, m) in &self.den {
            *out.entry(f.clone()).or_insert(0) -= *m as i64;
        }
        (c, out.into_iter().filter(|(_, e)| *e != 0).collect())
    }

    /// Numerator leading sign is negative, used to print `-` in front.
    pub fn is_negative_lead(&self) -> bool {
        self.num.leading().is_some_and(|(_, c)| c.is_negative())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = &self.num;
        let nt = n.0.len();
        if self.den.is_empty() {
            return write!(f, "{n}");
        }
        if nt > 1 {
            write!(f, "({n})")?;
        } else {
            write!(f, "{n}")?;
        }
        let d = self.denom();
        if d.0.len() > 1 || d.0.keys().next().is_some_and(|m| m.0.len() > 1 || m.0[0].1 > 1) {
            write!(f, "/({d})")
        } else {
            write!(f, "/{d}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Kind;

    fn g() -> Symbol {
        Symbol::new("gamma", Kind::BosonicParameter).unwrap()
    }

    #[test]
    fn cancellation_gives_canonical_form() {
        let gm = RatFunc::param(g());
        let a = gm.add(&RatFunc::int(5)).div(&gm.add(&RatFunc::int(1)).scale(&q(2))).unwrap();
        let b = a.scale(&q(2));
        let c = gm.add(&RatFunc::int(5)).div(&gm.add(&RatFunc::int(1))).unwrap();
        assert_eq!(b, c);
        let one = c.mul(&c.inv().unwrap());
        assert!(one.is_one());
        let diff = c.sub(&c);
        assert!(diff.is_zero());
    }

    #[test]
    fn sum_of_fractions() {
        let gm = RatFunc::param(g());
        let gp1 = gm.add(&RatFunc::int(1));
        let x = gm.add(&RatFunc::int(5)).div(&gp1).unwrap();
        let y = gm.sub(&RatFunc::int(3)).div(&gp1).unwrap();
        // (g+5)/(g+1) - (g-3)/(g+1) = 8/(g+1)
        let d = x.sub(&y);
        assert_eq!(d, RatFunc::int(8).div(&gp1).unwrap());
        let mut env = HashMap::new();
        env.insert(g(), q(3));
        assert_eq!(d.eval(&env), Some(q(2)));
    }

    #[test]
    fn exact_division() {
        let gm = Poly::var(g());
        let p = gm.add(&Poly::constant(q(1))).mul(&gm.sub(&Poly::constant(q(2))));
        assert!(p.div_exact(&gm.add(&Poly::constant(q(1)))).is_some());
        assert!(p.div_exact(&gm.add(&Poly::constant(q(3)))).is_none());
    }
}
