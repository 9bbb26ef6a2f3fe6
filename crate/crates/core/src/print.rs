//! Textual form of expressions in the same grammar the parser accepts,
//! so that printing and re-parsing is the identity on normal forms.

use crate::grassmann::{GExpr, Gen};
use crate::poly::{fmt_q, Poly, RatFunc};
use crate::scalar::{Atom, FuncApp, Mono, Scalar};
use num::Signed;
use std::fmt;

fn paren_poly(p: &Poly) -> String {
    let s = p.to_string();
    if p.0.len() > 1 || s.contains('*') || s.contains('/') || s.starts_with('-') {
        format!("({s})")
    } else {
        s
    }
}

/// A rational function as a self-contained factor.
pub fn ratfunc_factor(r: &RatFunc) -> String {
    if let Some(c) = r.as_constant() {
        let s = fmt_q(&c);
        return if s.contains('/') || s.starts_with('-') {
            format!("({s})")
        } else {
            s
        };
    }
    let num = paren_poly(r.numer());
    if r.denom_factors().is_empty() {
        return num;
    }
    format!("({}/{})", num, paren_poly(&r.denom()))
}

fn exponent(e: &RatFunc) -> String {
    match e.as_integer() {
        Some(n) if n >= 0 => format!("^{n}"),
        _ => format!("^({})", ratfunc_plain(e)),
    }
}

fn ratfunc_plain(r: &RatFunc) -> String {
    if let Some(c) = r.as_constant() {
        return fmt_q(&c);
    }
    if r.denom_factors().is_empty() {
        return r.numer().to_string();
    }
    format!("{}/{}", paren_poly(r.numer()), paren_poly(&r.denom()))
}

fn func_name(f: &FuncApp) -> String {
    let mut name = f.func.name().to_string();
    if f.deriv.iter().any(|d| *d > 0) {
        name.push('\'');
        for (i, d) in f.deriv.iter().enumerate() {
            for _ in 0..*d {
                name.push_str(&(i + 1).to_string());
            }
        }
    }
    name
}

fn app(f: &FuncApp) -> String {
    let args: Vec<String> = f.args.iter().map(scalar_string).collect();
    format!("{}({})", func_name(f), args.join(", "))
}

fn atom(a: &Atom) -> String {
    match a {
        Atom::Var(v) => v.name().to_string(),
        Atom::App(f) => app(f),
        Atom::Ln(s) => format!("ln({})", scalar_string(s)),
        Atom::Sum(s) => format!("({})", scalar_string(s)),
        Atom::Coeff(p) => format!("({p})"),
        Atom::Num(n) => n.to_string(),
    }
}

/// Factors of a monomial (without the coefficient).
fn mono_factors(m: &Mono) -> Vec<String> {
    let mut parts = Vec::new();
    for (a, e) in &m.factors {
        if e.is_one() {
            parts.push(atom(a));
        } else {
            parts.push(format!("{}{}", atom(a), exponent(e)));
        }
    }
    if let Some(arg) = &m.exp {
        parts.push(format!("exp({})", scalar_string(arg)));
    }
    if !m.sign.is_zero() {
        parts.push(format!("(-1){}", exponent(&m.sign)));
    }
    parts
}

fn gen_string(g: &Gen) -> String {
    match g {
        Gen::Sym(s) => s.name().to_string(),
        Gen::App(f) => app(f),
    }
}

/// One signed term; returns (negative, body).
fn term_string(coef: &RatFunc, factors: Vec<String>) -> (bool, String) {
    let (neg, c) = match coef.as_constant() {
        Some(q) => (q.is_negative(), RatFunc::constant(q.abs())),
        None if coef.numer().0.len() == 1 && coef.is_negative_lead() => (true, coef.neg()),
        None => (false, coef.clone()),
    };
    let mut parts = Vec::new();
    if !c.is_one() || factors.is_empty() {
        let s = if c.as_constant().is_some() {
            fmt_q(&c.as_constant().unwrap())
        } else {
            ratfunc_factor(&c)
        };
        parts.push(s);
    }
    parts.extend(factors);
    (neg, parts.join("*"))
}

fn join_terms(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, body)) in terms.into_iter().enumerate() {
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

pub fn scalar_string(s: &Scalar) -> String {
    let terms = s.terms.iter().map(|(m, c)| term_string(c, mono_factors(m))).collect();
    join_terms(terms)
}

pub fn gexpr_string(e: &GExpr) -> String {
    let mut terms = Vec::new();
    for (gens, s) in &e.terms {
        let gs: Vec<String> = gens.iter().map(gen_string).collect();
        for (m, c) in &s.terms {
            let mut f = mono_factors(m);
            f.extend(gs.iter().cloned());
            terms.push(term_string(c, f));
        }
    }
    join_terms(terms)
}

impl fmt::Display for GExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&gexpr_string(self))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&scalar_string(self))
    }
}
