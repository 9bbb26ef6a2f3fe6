//! Infix expression grammar and the declaration file format.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := unary (('*'|'/') unary)*
//! unary  := '-' unary | power
//! power  := atom ['^' unary]
//! atom   := number | '(' expr ')' | name ['(' expr (',' expr)* ')']
//! ```
//!
//! Names resolve, in order, to `let` bindings, builtins (`exp`, `ln`,
//! `d`, `D`, `subst`, `D1`, `D2`, `Q1`, `Q2`), declared functions, and
//! symbols including jet subscripts such as `W_xtheta1`. A name made of
//! operator prefixes followed by a symbol, e.g. `D1D2P`, applies the
//! operators right to left. Function derivatives are written `f'12(..)`.
//!
//! A declaration file holds one statement per line; `#` starts a comment.
//!
//! ```text
//! boson x t            fermion theta1 theta2
//! param gamma A        fconst mu nu
//! func f even 2        jet W even x t theta1 theta2
//! family xi even x t theta1 theta2 W P
//! let u = <expr>       def key = <expr>       meta key value...
//! ```

use crate::error::{Error, Result};
use crate::grassmann::{apply_function, GExpr};
use crate::poly::{q, RatFunc};
use crate::scalar::FuncApp;
use crate::superspace::{total_derivative, Op, Total};
use crate::symbol::{resolve_name, Family, FamilyKind, Function, Kind, Symbol};
use num::BigInt;
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Sym(char),
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
}

fn lex(src: &str, line: usize) -> Result<Lexer> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Num(s.parse().unwrap()), start + 1));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            if i < chars.len() && chars[i] == '\'' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            toks.push((Tok::Name(chars[start..i].iter().collect()), start + 1));
        } else if "+-*/^(),=".contains(c) {
            toks.push((Tok::Sym(c), i + 1));
            i += 1;
        } else {
            return Err(Error::Parse {
                line,
                col: i + 1,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    Ok(Lexer { toks })
}

/// Parsing environment: `let` bindings.
#[derive(Default, Clone, Debug)]
pub struct Context {
    pub lets: HashMap<String, GExpr>,
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    ctx: &'a Context,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let col = self.toks.get(self.pos).map_or_else(
            || self.toks.last().map_or(1, |t| t.1 + 1),
            |t| t.1,
        );
        Err(Error::Parse {
            line: self.line,
            col,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn wrap<T>(&self, r: Result<T>) -> Result<T> {
        r.or_else(|e| match e {
            Error::Parse { .. } => Err(e),
            other => self.err(other.to_string()),
        })
    }

    fn expr(&mut self) -> Result<GExpr> {
        let mut neg = false;
        if self.eat('-') {
            neg = true;
        } else {
            self.eat('+');
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<GExpr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                let inv = self.wrap(d.inv())?;
                acc = acc.mul(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<GExpr> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<GExpr> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.unary()?;
            let Some(p) = e.as_constant() else {
                return self.err("exponent must be a constant");
            };
            return self.wrap(base.pow(&p));
        }
        Ok(base)
    }

    fn args(&mut self) -> Result<Vec<GExpr>> {
        self.expect('(')?;
        let mut out = vec![self.expr()?];
        while self.eat(',') {
            out.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn symbol_arg(&self, e: &GExpr) -> Result<Symbol> {
        let syms = e.symbols();
        if syms.len() == 1 {
            let s = *syms.iter().next().unwrap();
            if *e == GExpr::symbol(s) {
                return Ok(s);
            }
        }
        self.err("expected a variable")
    }

    fn atom(&mut self) -> Result<GExpr> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(GExpr::rational(crate::poly::Q::from_integer(n)))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Name(name)) => {
                self.pos += 1;
                self.name(&name)
            }
            _ => self.err("expected an expression"),
        }
    }

    fn name(&mut self, name: &str) -> Result<GExpr> {
        let call = self.peek() == Some(&Tok::Sym('('));
        if !call {
            if let Some(v) = self.ctx.lets.get(name) {
                return Ok(v.clone());
            }
        }
        if call {
            match name {
                "exp" => {
                    let a = self.args()?;
                    return self.wrap(single(a).and_then(|a| a.exp()));
                }
                "ln" => {
                    let a = self.args()?;
                    return self.wrap(single(a).and_then(|a| a.ln()));
                }
                "d" | "D" => {
                    let a = self.args()?;
                    if a.len() != 2 {
                        return self.err(format!("`{name}` takes an expression and a variable"));
                    }
                    let v = self.symbol_arg(&a[1])?;
                    return Ok(if name == "d" {
                        a[0].partial(v)
                    } else {
                        total_derivative(&a[0], v)
                    });
                }
                "subst" => {
                    let a = self.args()?;
                    if a.len() != 3 {
                        return self.err("`subst` takes an expression, a variable and a value");
                    }
                    let v = self.symbol_arg(&a[1])?;
                    return self.wrap(a[0].subst1(v, &a[2]));
                }
                "D1" | "D2" | "Q1" | "Q2" => {
                    let a = self.args()?;
                    let op = op_named(name).unwrap();
                    return self.wrap(single(a).and_then(|a| op.apply(&Total, &a)));
                }
                _ => {}
            }
            let (fname, deriv) = match name.split_once('\'') {
                Some((f, d)) => (f, d),
                None => (name, ""),
            };
            let Some(f) = Function::lookup(fname) else {
                return self.err(format!("unknown function `{fname}`"));
            };
            let args = self.args()?;
            if deriv.is_empty() {
                return self.wrap(apply_function(f, &args));
            }
            let mut d = vec![0u32; f.arity()];
            for ch in deriv.chars() {
                let slot = ch.to_digit(10).unwrap_or(0) as usize;
                if slot == 0 || slot > f.arity() {
                    return self.err(format!("bad derivative slot in `{name}`"));
                }
                d[slot - 1] += 1;
            }
            let mut scalars = Vec::new();
            for a in &args {
                match a.as_scalar() {
                    Some(s) if a.parity() == Some(false) => scalars.push(s),
                    _ => return self.err("derivative forms take scalar arguments"),
                }
            }
            if scalars.len() != f.arity() {
                return self.err(format!("`{fname}` expects {} arguments", f.arity()));
            }
            return Ok(GExpr::app(FuncApp {
                func: f,
                deriv: d,
                args: scalars,
            }));
        }
        if let Some((sign, sym)) = resolve_name(name) {
            return Ok(match sym {
                Some(s) => GExpr::symbol(s).scale_int(sign as i64),
                None => GExpr::zero(),
            });
        }
        if let Some((ops, rest)) = split_ops(name) {
            let mut e = self.name_value(rest)?;
            for op in ops.iter().rev() {
                e = self.wrap(op.apply(&Total, &e))?;
            }
            return Ok(e);
        }
        self.err(format!("unknown symbol `{name}`"))
    }

    fn name_value(&self, name: &str) -> Result<GExpr> {
        if let Some(v) = self.ctx.lets.get(name) {
            return Ok(v.clone());
        }
        match resolve_name(name) {
            Some((sign, Some(s))) => Ok(GExpr::symbol(s).scale_int(sign as i64)),
            Some((_, None)) => Ok(GExpr::zero()),
            None => self.err(format!("unknown symbol `{name}`")),
        }
    }
}

fn op_named(name: &str) -> Option<Op> {
    Some(match name {
        "D1" => Op::D1,
        "D2" => Op::D2,
        "Q1" => Op::Q1,
        "Q2" => Op::Q2,
        _ => return None,
    })
}

fn split_ops(name: &str) -> Option<(Vec<Op>, &str)> {
    let mut ops = Vec::new();
    let mut rest = name;
    while rest.len() > 2 {
        match op_named(&rest[..2]) {
            Some(op) => {
                ops.push(op);
                rest = &rest[2..];
            }
            None => break,
        }
    }
    if ops.is_empty() {
        None
    } else {
        Some((ops, rest))
    }
}

fn single(mut a: Vec<GExpr>) -> Result<GExpr> {
    if a.len() == 1 {
        Ok(a.pop().unwrap())
    } else {
        Err(Error::Invalid("expected one argument".into()))
    }
}

/// Parse a single expression.
pub fn parse_expr(src: &str) -> Result<GExpr> {
    parse_expr_in(src, &Context::default())
}

pub fn parse_expr_in(src: &str, ctx: &Context) -> Result<GExpr> {
    crate::superspace::std();
    parse_line_expr(src, ctx, 1)
}

fn parse_line_expr(src: &str, ctx: &Context, line: usize) -> Result<GExpr> {
    let lx = lex(src, line)?;
    let mut p = Parser {
        toks: lx.toks,
        pos: 0,
        line,
        ctx,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// A parsed declaration file.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub defs: BTreeMap<String, GExpr>,
    pub def_order: Vec<String>,
    pub meta: BTreeMap<String, String>,
    pub ctx: Context,
}

impl Document {
    pub fn def(&self, key: &str) -> Result<&GExpr> {
        self.defs
            .get(key)
            .ok_or_else(|| Error::Fixture(format!("missing definition `{key}`")))
    }

    pub fn meta_int(&self, key: &str) -> Option<i64> {
        self.meta.get(key).and_then(|v| v.trim().parse().ok())
    }
}

fn parity_word(w: &str, line: usize) -> Result<bool> {
    match w {
        "even" => Ok(false),
        "odd" => Ok(true),
        _ => Err(Error::Parse {
            line,
            col: 1,
            msg: format!("expected `even` or `odd`, found `{w}`"),
        }),
    }
}

fn lookup_var(name: &str, line: usize) -> Result<Symbol> {
    match resolve_name(name) {
        Some((1, Some(s))) => Ok(s),
        _ => Err(Error::Parse {
            line,
            col: 1,
            msg: format!("unknown variable `{name}`"),
        }),
    }
}

/// Parse a declaration file.
///
/// Indented lines continue the statement above them.
pub fn parse_document(src: &str) -> Result<Document> {
    crate::superspace::std();
    let mut logical: Vec<(usize, String)> = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let text = raw.split('#').next().unwrap();
        if text.trim().is_empty() {
            continue;
        }
        let indented = text.starts_with(char::is_whitespace);
        match logical.last_mut() {
            Some((_, prev)) if indented => {
                prev.push(' ');
                prev.push_str(text.trim());
            }
            _ => logical.push((i + 1, text.trim().to_string())),
        }
    }
    let mut doc = Document::default();
    for (line, text) in &logical {
        let (line, text) = (*line, text.as_str());
        let (head, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let words: Vec<&str> = rest.split_whitespace().collect();
        let perr = |msg: String| Error::Parse { line, col: 1, msg };
        match head {
            "boson" | "fermion" | "param" | "fconst" => {
                let kind = match head {
                    "boson" => Kind::BosonicVariable,
                    "fermion" => Kind::FermionicVariable,
                    "param" => Kind::BosonicParameter,
                    _ => Kind::FermionicParameter,
                };
                for w in &words {
                    Symbol::new(w, kind).map_err(|e| perr(e.to_string()))?;
                }
            }
            "func" => {
                if words.len() < 2 {
                    return Err(perr("usage: func NAME even|odd [ARITY]".into()));
                }
                let odd = parity_word(words[1], line)?;
                let arity = words.get(2).map_or(Ok(1), |w| w.parse::<usize>()).map_err(|e| perr(e.to_string()))?;
                Function::declare(words[0], odd, arity).map_err(|e| perr(e.to_string()))?;
            }
            "jet" | "family" => {
                if words.len() < 2 {
                    return Err(perr(format!("usage: {head} NAME even|odd ARGS...")));
                }
                let odd = parity_word(words[1], line)?;
                let args = words[2..]
                    .iter()
                    .map(|w| lookup_var(w, line))
                    .collect::<Result<Vec<_>>>()?;
                let kind = if head == "jet" {
                    FamilyKind::Jet
                } else {
                    FamilyKind::Explicit
                };
                Family::declare(words[0], odd, kind, &args).map_err(|e| perr(e.to_string()))?;
            }
            "let" | "def" => {
                let Some((name, body)) = rest.split_once('=') else {
                    return Err(perr(format!("usage: {head} NAME = EXPR")));
                };
                let name = name.trim().to_string();
                let value = parse_line_expr(body, &doc.ctx, line)?;
                if head == "let" {
                    doc.ctx.lets.insert(name, value);
                } else {
                    if !doc.defs.contains_key(&name) {
                        doc.def_order.push(name.clone());
                    }
                    doc.defs.insert(name, value);
                }
            }
            "meta" => {
                let (k, v) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                doc.meta.insert(k.trim().to_string(), v.trim().to_string());
            }
            _ => return Err(perr(format!("unknown statement `{head}`"))),
        }
    }
    Ok(doc)
}

/// Parse a bare rational constant such as `3/2` or `-1`.
pub fn parse_constant(src: &str) -> Result<RatFunc> {
    parse_expr(src)?
        .as_constant()
        .ok_or_else(|| Error::Invalid(format!("`{src}` is not a constant")))
}

pub fn half() -> RatFunc {
    RatFunc::constant(crate::poly::qf(1, 2))
}

pub fn int(n: i64) -> RatFunc {
    RatFunc::constant(q(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::print::gexpr_string;
    use crate::superspace::std;

    fn setup() {
        let s = std();
        Family::declare("W", false, FamilyKind::Jet, &[s.x, s.t, s.theta1, s.theta2]).unwrap();
        Family::declare("P", false, FamilyKind::Jet, &[s.x, s.t, s.theta1, s.theta2]).unwrap();
    }

    #[test]
    fn operators_and_shorthand_agree() {
        setup();
        let a = parse_expr("D1(D2(P))").unwrap();
        let b = parse_expr("D1D2P").unwrap();
        assert_eq!(a, b);
        let c = parse_expr("(D1D2P)^(gamma-2)").unwrap();
        assert!(!c.is_zero());
    }

    #[test]
    fn round_trip() {
        setup();
        let srcs = [
            "W_x + 2*theta1*theta2*P_t",
            "x^(3/2)*W_theta1 - (gamma+5)/(2*gamma+2)*theta2",
            "(-1)^gamma*A*(P_theta1theta2)^(gamma-2)",
            "exp(-2*x)*ln(t) + (x + t)^(gamma)",
        ];
        for s in srcs {
            let e = parse_expr(s).unwrap();
            let printed = gexpr_string(&e);
            let back = parse_expr(&printed).unwrap();
            assert_eq!(back, e, "{s} -> {printed}");
        }
    }

    #[test]
    fn jet_subscript_order_matters() {
        setup();
        let a = parse_expr("W_theta1theta2").unwrap();
        let b = parse_expr("W_theta2theta1").unwrap();
        assert_eq!(a, b.neg());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expr("x + * t").unwrap_err();
        assert!(matches!(e, Error::Parse { col: 5, .. }), "{e:?}");
        assert!(parse_expr("nosuchthing_q").is_err());
    }

    #[test]
    fn documents() {
        let doc = parse_document(
            "boson x t\nfconst mu\nlet u = x*t\ndef e = u + mu*theta1\nmeta anchor L1\n",
        );
        let doc = match doc {
            Ok(d) => d,
            Err(e) => panic!("{e}"),
        };
        assert_eq!(doc.meta["anchor"], "L1");
        assert_eq!(doc.defs["e"].len(), 2);
    }
}
