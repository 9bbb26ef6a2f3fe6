//! The six-generator Lie superalgebra of the gas system: graded brackets
//! from vector-field composition, the stored commutation table, exact
//! adjoint orbits and the list of one-dimensional subalgebras.

use crate::error::{Error, Result};
use crate::fixtures;
use crate::grassmann::GExpr;
use crate::model::{superfields, ModelParams};
use crate::parse::parse_expr;
use crate::poly::RatFunc;
use crate::print::gexpr_string;
use crate::prolong::VectorField;
use crate::scalar::Scalar;
use crate::superspace::std;
use crate::symbol::{Kind, Symbol};
use once_cell::sync::Lazy;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    L1,
    P1,
    Q1,
    L2,
    P2,
    Q2,
}

impl Basis {
    pub const ALL: [Basis; 6] = [Basis::L1, Basis::P1, Basis::Q1, Basis::L2, Basis::P2, Basis::Q2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["L1", "P1", "Q1", "L2", "P2", "Q2"][self.index()]
    }

    pub fn is_odd(self) -> bool {
        matches!(self, Basis::Q1 | Basis::Q2)
    }

    pub fn from_name(s: &str) -> Option<Basis> {
        Basis::ALL.into_iter().find(|b| b.name() == s)
    }

    /// Whether the generator lies in the `{L1, P1, Q1}` block.
    pub fn first_block(self) -> bool {
        self.index() < 3
    }
}

/// Group and family parameters used by the classification.
pub struct AlgebraParams {
    pub alpha: Symbol,
    pub beta: Symbol,
    pub eta: Symbol,
    pub mu: Symbol,
    pub nu: Symbol,
    pub eps: Symbol,
    pub k: Symbol,
    pub a1: Symbol,
    pub a2: Symbol,
}

static PARAMS: Lazy<AlgebraParams> = Lazy::new(|| {
    std();
    let b = |n: &str| Symbol::new(n, Kind::BosonicParameter).unwrap();
    let f = |n: &str| Symbol::new(n, Kind::FermionicParameter).unwrap();
    AlgebraParams {
        alpha: b("alpha"),
        beta: b("beta"),
        eta: f("eta"),
        mu: f("mu"),
        nu: f("nu"),
        eps: b("eps"),
        k: b("k"),
        a1: b("a1"),
        a2: f("a2"),
    }
});

pub fn algebra_params() -> &'static AlgebraParams {
    &PARAMS
}

/// `sum c_i e_i` with Grassmann coefficients written to the left.
#[derive(Clone, Debug, PartialEq)]
pub struct Element(pub [GExpr; 6]);

impl Element {
    pub fn zero() -> Element {
        Element(std::array::from_fn(|_| GExpr::zero()))
    }

    pub fn basis(b: Basis) -> Element {
        Element::term(GExpr::one(), b)
    }

    pub fn term(c: GExpr, b: Basis) -> Element {
        let mut e = Element::zero();
        e.0[b.index()] = c;
        e
    }

    /// Sum of `coef*B` terms, e.g. `L2 + eps*P1 + mu*Q1` or `-2*P1`.
    /// Coefficients must not contain a top-level `+` or `-`.
    pub fn parse(src: &str) -> Result<Element> {
        algebra_params();
        let src = src.trim();
        if src == "0" {
            return Ok(Element::zero());
        }
        let mut out = Element::zero();
        let mut pieces = Vec::new();
        let (mut depth, mut start, mut neg) = (0i32, 0usize, false);
        let bytes = src.as_bytes();
        for (i, &ch) in bytes.iter().enumerate() {
            match ch {
                b'(' => depth += 1,
                b')' => depth -= 1,
                b'+' | b'-' if depth == 0 => {
                    let piece = src[start..i].trim();
                    if !piece.is_empty() {
                        pieces.push((neg, piece.to_string()));
                    }
                    neg = ch == b'-';
                    start = i + 1;
                }
                _ => {}
            }
        }
        pieces.push((neg, src[start..].trim().to_string()));
        for (neg, piece) in pieces {
            let (coef, name) = match piece.rfind('*') {
                Some(i) => (parse_expr(&piece[..i])?, piece[i + 1..].trim()),
                None => (GExpr::one(), piece.as_str()),
            };
            let b = Basis::from_name(name).ok_or_else(|| Error::Invalid(format!("`{name}` is not a generator")))?;
            let c = if neg { coef.neg() } else { coef };
            out.0[b.index()].add_assign(&c);
        }
        Ok(out)
    }

    pub fn coeff(&self, b: Basis) -> &GExpr {
        &self.0[b.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, o: &Element) -> Element {
        Element(std::array::from_fn(|i| self.0[i].add(&o.0[i])))
    }

    pub fn sub(&self, o: &Element) -> Element {
        Element(std::array::from_fn(|i| self.0[i].sub(&o.0[i])))
    }

    /// Left multiplication of every coefficient.
    pub fn scale(&self, c: &GExpr) -> Element {
        Element(std::array::from_fn(|i| c.mul(&self.0[i])))
    }

    /// `Some(true)` for an odd element; `None` when the parity is mixed.
    pub fn parity(&self) -> Option<bool> {
        let mut out = None;
        for b in Basis::ALL {
            let c = self.coeff(b);
            if c.is_zero() {
                continue;
            }
            let p = c.parity()? ^ b.is_odd();
            if *out.get_or_insert(p) != p {
                return None;
            }
        }
        Some(out.unwrap_or(false))
    }

    fn pure_parity(&self) -> Result<bool> {
        self.parity()
            .ok_or_else(|| Error::ParityMismatch(format!("`{self}` has mixed parity")))
    }

    pub fn bind_params(&self, env: &HashMap<Symbol, RatFunc>) -> Result<Element> {
        let mut out = Element::zero();
        for i in 0..6 {
            out.0[i] = self.0[i].bind_params(env)?;
        }
        Ok(out)
    }

    pub fn substitute(&self, map: &HashMap<Symbol, GExpr>) -> Result<Element> {
        let mut out = Element::zero();
        for i in 0..6 {
            out.0[i] = self.0[i].substitute(map)?;
        }
        Ok(out)
    }

    /// Concrete vector field; odd elements give odd fields.
    pub fn vector_field(&self, gamma: &RatFunc) -> VectorField {
        let mut v = VectorField::zero();
        for b in Basis::ALL {
            let c = self.coeff(b);
            if !c.is_zero() {
                v = v.add(&basis_field(b, gamma).scale(c));
            }
        }
        v
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for b in Basis::ALL {
            let c = self.coeff(b);
            if c.is_zero() {
                continue;
            }
            let s = gexpr_string(c);
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) if !rest.contains(" + ") && !rest.contains(" - ") => (true, rest.to_string()),
                _ => (false, s),
            };
            let body = if body == "1" {
                b.name().to_string()
            } else if body.contains(' ') {
                format!("({body})*{}", b.name())
            } else {
                format!("{body}*{}", b.name())
            };
            match (parts.is_empty(), neg) {
                (true, true) => parts.push(format!("-{body}")),
                (true, false) => parts.push(body),
                (false, true) => parts.push(format!("- {body}")),
                (false, false) => parts.push(format!("+ {body}")),
            }
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" "))
        }
    }
}

/// The generator as a vector field with unit coefficients.
pub fn basis_field(b: Basis, gamma: &RatFunc) -> VectorField {
    superfields();
    let p = |s: &str| parse_expr(s).unwrap();
    let g = GExpr::constant;
    let one = RatFunc::int(1);
    let over = |shift: i64| {
        gamma
            .add(&RatFunc::int(shift))
            .div(&gamma.add(&one))
            .expect("gamma = -1 is excluded")
    };
    let z = GExpr::zero;
    let c = match b {
        Basis::L1 => [p("2*x"), z(), p("theta1"), z(), p("3*W"), g(over(5)).mul(&p("P"))],
        Basis::P1 => [GExpr::one(), z(), z(), z(), z(), z()],
        Basis::Q1 => [p("-theta1"), z(), GExpr::one(), z(), z(), z()],
        Basis::L2 => [z(), p("2*t"), z(), p("theta2"), p("-W"), g(over(-3)).mul(&p("P"))],
        Basis::P2 => [z(), GExpr::one(), z(), z(), z(), z()],
        Basis::Q2 => [z(), p("-theta2"), z(), GExpr::one(), z(), z()],
    };
    VectorField::from_components(c)
}

/// Even field for each generator; the odd ones carry the fermionic
/// parameter `eta` in front.
pub fn generator_field(b: Basis, params: &ModelParams) -> VectorField {
    let v = basis_field(b, &params.gamma);
    if b.is_odd() {
        v.scale(&GExpr::symbol(algebra_params().eta))
    } else {
        v
    }
}

fn at_origin(e: &GExpr) -> Result<GExpr> {
    let s = std();
    let map: HashMap<Symbol, GExpr> = [s.x, s.t, s.theta1, s.theta2]
        .into_iter()
        .map(|v| (v, GExpr::zero()))
        .collect();
    e.substitute(&map)
}

/// Coordinates of a vector field in the basis, or `NotInSpan`.
pub fn decompose(v: &VectorField, gamma: &RatFunc) -> Result<Element> {
    let s = std();
    let half = RatFunc::constant(crate::poly::qf(1, 2));
    let el = Element([
        at_origin(&v.xi.partial(s.x).scale(&half))?,
        at_origin(&v.xi)?,
        at_origin(&v.rho1)?,
        at_origin(&v.tau.partial(s.t).scale(&half))?,
        at_origin(&v.tau)?,
        at_origin(&v.rho2)?,
    ]);
    if el.vector_field(gamma) != *v {
        return Err(Error::NotInSpan(format!(
            "xi = {}, tau = {}, rho1 = {}, rho2 = {}, Lambda = {}, Omega = {}",
            v.xi, v.tau, v.rho1, v.rho2, v.lambda, v.omega
        )));
    }
    Ok(el)
}

/// `[X, Y]` from the composition of the two vector fields on the
/// coordinate functions: `[X,Y]^b = X(Y^b) - (-1)^(|X||Y|) Y(X^b)`.
pub fn bracket_with(x: &Element, y: &Element, gamma: &RatFunc) -> Result<Element> {
    let sign = if x.pure_parity()? && y.pure_parity()? { -1 } else { 1 };
    let vx = x.vector_field(gamma);
    let vy = y.vector_field(gamma);
    let a = vx.components();
    let b = vy.components();
    let c: [GExpr; 6] = std::array::from_fn(|i| vx.apply(b[i]).add(&vy.apply(a[i]).scale_int(-sign)));
    decompose(&VectorField::from_components(c), gamma)
}

/// Graded bracket with `gamma` left symbolic.
pub fn graded_bracket(x: &Element, y: &Element) -> Result<Element> {
    bracket_with(x, y, &RatFunc::param(std().gamma))
}

/// Structure constants: `table[i][j] = [e_i, e_j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table(pub Vec<Vec<Element>>);

impl Table {
    pub fn entry(&self, x: Basis, y: Basis) -> &Element {
        &self.0[x.index()][y.index()]
    }
}

/// The stored commutation table.
pub fn stored_table() -> Result<Table> {
    let text = fixtures::text("salg/table.txt")?;
    let mut rows = vec![Vec::new(); 6];
    let mut header: Option<Vec<Basis>> = None;
    for line in text.lines() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Fixture(format!("salg/table.txt: bad line `{line}`"));
        match &header {
            None => {
                let h: Option<Vec<Basis>> = toks.iter().map(|t| Basis::from_name(t)).collect();
                header = Some(h.filter(|h| *h == Basis::ALL).ok_or_else(bad)?);
            }
            Some(_) => {
                let row = Basis::from_name(toks[0]).ok_or_else(bad)?;
                if toks.len() != 7 {
                    return Err(bad());
                }
                rows[row.index()] = toks[1..].iter().map(|t| Element::parse(t)).collect::<Result<_>>()?;
            }
        }
    }
    if rows.iter().any(|r| r.len() != 6) {
        return Err(Error::Fixture("salg/table.txt: incomplete table".into()));
    }
    Ok(Table(rows))
}

/// `[X, Y]` by graded bilinearity from structure constants:
/// `[a e_i, b e_j] = a (-1)^(|e_i||b|) b [e_i, e_j]`.
pub fn bracket_by_table(table: &Table, x: &Element, y: &Element) -> Result<Element> {
    x.pure_parity()?;
    y.pure_parity()?;
    let mut out = Element::zero();
    for bi in Basis::ALL {
        let a = x.coeff(bi);
        if a.is_zero() {
            continue;
        }
        for bj in Basis::ALL {
            let b = y.coeff(bj);
            if b.is_zero() {
                continue;
            }
            let mut c = a.mul(b);
            if bi.is_odd() && b.is_odd() {
                c = c.neg();
            }
            out = out.add(&table.entry(bi, bj).scale(&c));
        }
    }
    Ok(out)
}

/// One cell of the regenerated table.
#[derive(Clone, Debug)]
pub struct TableEntry {
    pub row: Basis,
    pub col: Basis,
    pub computed: Element,
    pub stored: Element,
    pub via_constants: Element,
}

impl TableEntry {
    pub fn matches(&self) -> bool {
        self.computed == self.stored
    }

    pub fn paths_agree(&self) -> bool {
        self.computed == self.via_constants
    }
}

pub struct TableReport {
    pub entries: Vec<TableEntry>,
}

impl TableReport {
    pub fn matched(&self) -> usize {
        self.entries.iter().filter(|e| e.matches()).count()
    }

    pub fn mismatches(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| !e.matches())
            .map(|e| format!("[{}, {}]: computed {}, stored {}", e.row.name(), e.col.name(), e.computed, e.stored))
            .collect()
    }

    pub fn path_disagreements(&self) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| !e.paths_agree())
            .map(|e| {
                format!(
                    "[{}, {}]: composition {}, structure constants {}",
                    e.row.name(),
                    e.col.name(),
                    e.computed,
                    e.via_constants
                )
            })
            .collect()
    }
}

/// All 36 brackets of basis elements by composition, next to the stored
/// table and the structure-constant path evaluated on the same pair.
pub fn build_table_with(gamma: &RatFunc) -> Result<TableReport> {
    let stored = stored_table()?;
    superfields();
    algebra_params();
    let pairs: Vec<(Basis, Basis)> = Basis::ALL
        .into_iter()
        .flat_map(|a| Basis::ALL.into_iter().map(move |b| (a, b)))
        .collect();
    let entries = pairs
        .into_par_iter()
        .map(|(r, c)| {
            let (x, y) = (Element::basis(r), Element::basis(c));
            Ok(TableEntry {
                row: r,
                col: c,
                computed: bracket_with(&x, &y, gamma)?,
                stored: stored.entry(r, c).clone(),
                via_constants: bracket_by_table(&stored, &x, &y)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableReport { entries })
}

pub fn build_table() -> Result<TableReport> {
    build_table_with(&RatFunc::param(std().gamma))
}

/// Terms `coef * s^m * exp(rate*s)`.
#[derive(Clone, Debug, Default)]
struct QuasiPoly(Vec<(GExpr, u32, RatFunc)>);

impl QuasiPoly {
    fn push(&mut self, c: GExpr, m: u32, rate: RatFunc) {
        if c.is_zero() {
            return;
        }
        if let Some(t) = self.0.iter_mut().find(|t| t.1 == m && t.2 == rate) {
            t.0.add_assign(&c);
        } else {
            self.0.push((c, m, rate));
        }
        self.0.retain(|t| !t.0.is_zero());
    }

    fn at_one(&self) -> GExpr {
        let mut out = GExpr::zero();
        for (c, _, r) in &self.0 {
            out.add_assign(&c.mul_scalar(&Scalar::exp(&Scalar::constant(r.clone()))));
        }
        out
    }
}

fn factorial(n: u32) -> i64 {
    (1..=n as i64).product()
}

/// `exp(ad_Y) X` in closed form. `Y` must be even and its adjoint matrix
/// triangular up to reordering with scalar diagonal, which holds on this
/// algebra; the flow `x' = [Y, x]` is then solved exactly one coordinate
/// at a time and evaluated at time 1.
pub fn adjoint_orbit(y: &Element, x: &Element) -> Result<Element> {
    if y.pure_parity()? {
        return Err(Error::ParityMismatch(format!("`{y}` is odd")));
    }
    let cols: Vec<Element> = Basis::ALL
        .into_iter()
        .map(|b| graded_bracket(y, &Element::basis(b)))
        .collect::<Result<_>>()?;
    // m[k][j]: coefficient of e_k in [Y, e_j]
    let m = |k: usize, j: usize| &cols[j].0[k];
    let mut order = Vec::new();
    let mut done = [false; 6];
    while order.len() < 6 {
        let next = (0..6).find(|&k| !done[k] && (0..6).all(|j| j == k || done[j] || m(k, j).is_zero()));
        let k = next.ok_or_else(|| Error::Unsupported(format!("adjoint action of `{y}` is not triangular")))?;
        done[k] = true;
        order.push(k);
    }
    let mut sol: Vec<QuasiPoly> = vec![QuasiPoly::default(); 6];
    for k in order {
        let d = m(k, k)
            .as_constant()
            .ok_or_else(|| Error::Unsupported(format!("non-scalar diagonal {} in the adjoint action", m(k, k))))?;
        let mut qp = QuasiPoly::default();
        qp.push(x.0[k].clone(), 0, d.clone());
        for j in 0..6 {
            if j == k || m(k, j).is_zero() {
                continue;
            }
            for (c, pow, rate) in sol[j].0.clone() {
                let coef = c.mul(m(k, j));
                let nu = rate.sub(&d);
                if nu.is_zero() {
                    qp.push(coef.scale(&RatFunc::constant(crate::poly::qf(1, pow as i64 + 1))), pow + 1, d.clone());
                    continue;
                }
                // integral of u^pow e^(nu u) from 0 to s, times e^(d s)
                let mut nu_pow = RatFunc::one();
                for i in 0..=pow {
                    nu_pow = nu_pow.mul(&nu);
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    let c_i = RatFunc::int(sign * factorial(pow) / factorial(pow - i)).div(&nu_pow)?;
                    qp.push(coef.scale(&c_i), pow - i, rate.clone());
                }
                let sign = if pow % 2 == 0 { -1 } else { 1 };
                qp.push(coef.scale(&RatFunc::int(sign * factorial(pow)).div(&nu_pow)?), 0, d.clone());
            }
        }
        sol[k] = qp;
    }
    Ok(Element(std::array::from_fn(|k| sol[k].at_one())))
}

/// A scalar `u` with `a = u * b`, read off the coefficients that are
/// single words; equal up to `u` means the two span the same subalgebra.
pub fn proportionality(a: &Element, b: &Element) -> Option<Scalar> {
    for i in 0..6 {
        let Some((bg, bs)) = single_word(&b.0[i]) else {
            continue;
        };
        let Some((ag, as_)) = single_word(&a.0[i]) else {
            continue;
        };
        let Ok(inv) = bs.inv() else {
            continue;
        };
        if ag == bg {
            let u = as_.mul(&inv);
            if b.scale(&GExpr::scalar(u.clone())) == *a {
                return Some(u);
            }
        }
    }
    None
}

fn single_word(e: &GExpr) -> Option<(Vec<crate::grassmann::Gen>, Scalar)> {
    if e.terms.len() != 1 {
        return None;
    }
    let (g, s) = e.terms.iter().next()?;
    Some((g.clone(), s.clone()))
}

/// Conjugate `L1 + a1 P1 + a2 Q1` by `exp(ad_Z)` with
/// `Z = -a1/2 P1 - a2 Q1`.
pub fn cocycle_reduce(v: &Element) -> Result<Element> {
    let ok = *v.coeff(Basis::L1) == GExpr::one()
        && [Basis::L2, Basis::P2, Basis::Q2].iter().all(|b| v.coeff(*b).is_zero());
    if !ok {
        return Err(Error::Invalid(format!("`{v}` is not of the form L1 + a1*P1 + a2*Q1")));
    }
    let lambda1 = v.coeff(Basis::P1).scale(&RatFunc::constant(crate::poly::qf(-1, 2)));
    let lambda2 = v.coeff(Basis::Q1).neg();
    let z = Element::term(lambda1, Basis::P1).add(&Element::term(lambda2, Basis::Q1));
    adjoint_orbit(&z, v)
}

/// One displayed conjugation result checked against the engine.
#[derive(Clone, Debug)]
pub struct OrbitCheck {
    pub name: &'static str,
    pub acting: Element,
    pub input: Element,
    pub printed: Element,
    pub computed: Element,
    /// `Some(u)` when the computed element is `u` times the printed one.
    pub factor: Option<Scalar>,
    /// The printed form with its odd correction doubled, as forced by the
    /// commutation table; `Some(u)` when the computed element is `u` times it.
    pub doubled_factor: Option<Scalar>,
}

impl OrbitCheck {
    pub fn exact(&self) -> bool {
        self.computed == self.printed
    }

    pub fn same_subalgebra(&self) -> bool {
        self.factor.is_some()
    }

    /// Matches only after doubling the printed odd correction.
    pub fn matches_doubled(&self) -> bool {
        self.factor.is_none() && self.doubled_factor.is_some()
    }
}

fn orbit_check(name: &'static str, acting: &str, input: &str, printed: &str) -> Result<OrbitCheck> {
    let acting = Element::parse(acting)?;
    let input = Element::parse(input)?;
    let printed = Element::parse(printed)?;
    let computed = adjoint_orbit(&acting, &input)?;
    let factor = proportionality(&computed, &printed);
    let mut doubled = printed.clone();
    let p1 = Basis::P1.index();
    let correction = printed.0[p1].soul();
    doubled.0[p1] = printed.0[p1].add(&correction);
    let doubled_factor = proportionality(&computed, &doubled);
    Ok(OrbitCheck {
        name,
        acting,
        input,
        printed,
        computed,
        factor,
        doubled_factor,
    })
}

/// The displayed orbit formulas of the `{L1, P1, Q1}` block.
pub fn orbit_checks() -> Result<Vec<OrbitCheck>> {
    Ok(vec![
        orbit_check("translation under the block group", "alpha*L1 + beta*P1 + eta*Q1", "P1", "exp(-2*alpha)*P1")?,
        orbit_check(
            "odd generator, alpha nonzero",
            "alpha*L1 + beta*P1 + eta*Q1",
            "mu*Q1",
            "mu*Q1 + (1/alpha)*(1 - exp(-alpha))*eta*mu*P1",
        )?,
        orbit_check("odd generator, alpha zero", "beta*P1 + eta*Q1", "mu*Q1", "mu*Q1 + eta*mu*P1")?,
    ])
}

/// Brackets between the two blocks; all must vanish.
pub fn cross_brackets() -> Result<Vec<(Basis, Basis, Element)>> {
    let mut out = Vec::new();
    for a in Basis::ALL.into_iter().filter(|b| b.first_block()) {
        for b in Basis::ALL.into_iter().filter(|b| !b.first_block()) {
            out.push((a, b, graded_bracket(&Element::basis(a), &Element::basis(b))?));
        }
    }
    Ok(out)
}

/// A representative one-dimensional subalgebra.
#[derive(Clone, Debug)]
pub struct SubalgebraSpec {
    pub id: &'static str,
    pub generator: Element,
    pub params: Vec<Symbol>,
    pub constraint: &'static str,
    pub provenance: &'static str,
}

static CATALOG: &[(&str, &str, &str, &str)] = &[
    ("L1", "P1", "", "a1"),
    ("L2", "mu*Q1", "", "a2"),
    ("L3", "P1 + mu*Q1", "", "a3"),
    ("L4", "L1", "", "a4"),
    ("L5", "P2", "", "b1"),
    ("L6", "nu*Q2", "", "b2"),
    ("L7", "P2 + nu*Q2", "", "b3"),
    ("L8", "L2", "", "b4"),
    ("L9", "P1 + eps*P2", "eps = 1 or -1", "twist of a1 with b1: P1 -> k P2, k can be rescaled by any positive real number"),
    ("L10", "P1 + nu*Q2", "", "twist of a1 with b2"),
    ("L11", "P1 + eps*P2 + nu*Q2", "eps = 1 or -1", "twist of a1 with b3"),
    ("L12", "L2 + eps*P1", "eps = 1 or -1", "twist of a1 with b4"),
    ("L13", "P2 + mu*Q1", "", "twist of a2 with b1"),
    ("L14", "mu*Q1 + nu*Q2", "", "twist of a2 with b2"),
    ("L15", "P2 + mu*Q1 + nu*Q2", "", "twist of a2 with b3"),
    ("L16", "L2 + mu*Q1", "", "twist of a2 with b4"),
    ("L17", "P1 + eps*P2 + mu*Q1", "eps = 1 or -1", "twist of a3 with b1"),
    ("L18", "P1 + mu*Q1 + nu*Q2", "", "twist of a3 with b2"),
    ("L19", "P1 + eps*P2 + mu*Q1 + nu*Q2", "eps = 1 or -1", "twist of a3 with b3"),
    ("L20", "L2 + eps*P1 + mu*Q1", "eps = 1 or -1", "twist of a3 with b4"),
    ("L21", "L1 + eps*P2", "eps = 1 or -1", "twist of a4 with b1"),
    ("L22", "L1 + nu*Q2", "", "twist of a4 with b2"),
    ("L23", "L1 + eps*P2 + nu*Q2", "eps = 1 or -1", "twist of a4 with b3"),
    ("L24", "L1 + k*L2", "k != 0", "twist of a4 with b4"),
];

/// Block subalgebras: a1 = {P1}, a2 = {mu Q1}, a3 = {P1 + mu Q1},
/// a4 = {L1}, and b1..b4 likewise in the second block.
pub fn catalog() -> Result<Vec<SubalgebraSpec>> {
    CATALOG
        .iter()
        .map(|(id, g, constraint, provenance)| {
            let generator = Element::parse(g)?;
            let mut params: Vec<Symbol> = generator.0.iter().flat_map(|c| c.params()).collect();
            params.sort();
            params.dedup();
            Ok(SubalgebraSpec {
                id,
                generator,
                params,
                constraint,
                provenance,
            })
        })
        .collect()
}

pub fn catalog_entry(id: &str) -> Result<SubalgebraSpec> {
    catalog()?
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::Invalid(format!("no subalgebra `{id}`")))
}

#[derive(Serialize)]
pub struct CatalogRecord {
    pub id: String,
    pub generator: String,
    pub parameters: Vec<String>,
    pub constraint: String,
    pub provenance: String,
}

pub fn catalog_records() -> Result<Vec<CatalogRecord>> {
    Ok(catalog()?
        .into_iter()
        .map(|s| CatalogRecord {
            id: s.id.to_string(),
            generator: s.generator.to_string(),
            parameters: s.params.iter().map(|p| format!("{} ({})", p.name(), p.kind().name())).collect(),
            constraint: s.constraint.to_string(),
            provenance: s.provenance.to_string(),
        })
        .collect())
}

/// The five-constant general symmetry as listed.
pub fn general_symmetry() -> Result<VectorField> {
    superfields();
    let doc = fixtures::document("salg/general_symmetry.sg")?;
    let c = ["xi", "tau", "rho1", "rho2", "Lambda", "Omega"].map(|k| doc.def(k).cloned());
    let [a, b, c1, d, e, f] = c;
    VectorField::new(a?, b?, c1?, d?, e?, f?)
}

/// The general symmetry with `gamma` bound, for sampled checks.
pub fn general_symmetry_at(params: &ModelParams) -> Result<VectorField> {
    let v = general_symmetry()?;
    let env: HashMap<Symbol, RatFunc> = [(std().gamma, params.gamma.clone())].into_iter().collect();
    let c = v.components().map(|e| e.bind_params(&env));
    let [a, b, c1, d, e, f] = c;
    Ok(VectorField::from_components([a?, b?, c1?, d?, e?, f?]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> Element {
        Element::parse(s).unwrap()
    }

    fn br(a: &str, b: &str) -> Element {
        graded_bracket(&el(a), &el(b)).unwrap()
    }

    #[test]
    fn bracket_examples() {
        assert_eq!(br("Q1", "Q1"), el("-2*P1"));
        assert_eq!(br("L1", "Q1"), el("-Q1"));
        assert_eq!(br("L1", "L2"), Element::zero());
        assert_eq!(br("P1", "L1"), el("2*P1"));
        assert_eq!(br("Q2", "Q2"), el("-2*P2"));
    }

    #[test]
    fn full_table_matches_both_ways() {
        let r = build_table().unwrap();
        assert_eq!(r.entries.len(), 36);
        assert!(r.mismatches().is_empty(), "{:#?}", r.mismatches());
        assert!(r.path_disagreements().is_empty(), "{:#?}", r.path_disagreements());
    }

    #[test]
    fn table_does_not_depend_on_gamma() {
        for g in [2, 3, -3] {
            let r = build_table_with(&RatFunc::int(g)).unwrap();
            assert_eq!(r.matched(), 36);
        }
    }

    #[test]
    fn fermionic_coefficients_pick_up_the_graded_sign() {
        // [eta Q1, mu Q1] = -eta mu {Q1, Q1} = 2 eta mu P1
        let got = br("eta*Q1", "mu*Q1");
        assert_eq!(got, el("2*eta*mu*P1"));
        let t = stored_table().unwrap();
        assert_eq!(bracket_by_table(&t, &el("eta*Q1"), &el("mu*Q1")).unwrap(), got);
    }

    #[test]
    fn not_in_span() {
        let v = VectorField::from_components([parse_expr("x^2").unwrap(), GExpr::zero(), GExpr::zero(), GExpr::zero(), GExpr::zero(), GExpr::zero()]);
        assert!(matches!(decompose(&v, &RatFunc::int(2)), Err(Error::NotInSpan(_))));
    }

    #[test]
    fn orbit_of_translation() {
        let got = adjoint_orbit(&el("alpha*L1"), &el("P1")).unwrap();
        assert_eq!(got, el("exp(-2*alpha)*P1"));
    }

    #[test]
    fn orbit_under_translation_is_one_bracket() {
        let y = el("beta*P1");
        for x in ["L1", "L1 + mu*Q1 + 5*P1", "eta*Q1"] {
            let x = el(x);
            let expect = x.add(&graded_bracket(&y, &x).unwrap());
            assert_eq!(adjoint_orbit(&y, &x).unwrap(), expect);
        }
    }

    #[test]
    fn orbit_of_odd_generator_is_twice_the_printed_correction() {
        let checks = orbit_checks().unwrap();
        assert!(checks[0].exact());
        let c = &checks[1];
        let u = GExpr::scalar(Scalar::exp(&Scalar::constant(RatFunc::param(algebra_params().alpha).neg())));
        let expect = el("mu*Q1 + (2/alpha)*(1 - exp(-alpha))*eta*mu*P1").scale(&u);
        assert_eq!(c.computed, expect);
        assert!(!c.same_subalgebra());
        assert!(c.matches_doubled() && checks[2].matches_doubled());
        assert!(!checks[0].matches_doubled());
        assert_eq!(checks[2].computed, el("mu*Q1 + 2*eta*mu*P1"));
    }

    #[test]
    fn orbit_preserves_brackets() {
        let y = el("alpha*L1 + beta*P1 + eta*Q1");
        for (a, b) in [("mu*Q1", "nu*Q1"), ("L1", "mu*Q1"), ("L1", "P1"), ("mu*Q1", "L1 + 3*P1")] {
            let (a, b) = (el(a), el(b));
            let lhs = adjoint_orbit(&y, &graded_bracket(&a, &b).unwrap()).unwrap();
            let rhs = graded_bracket(&adjoint_orbit(&y, &a).unwrap(), &adjoint_orbit(&y, &b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cocycle_examples() {
        for v in ["L1 + 3*P1", "L1", "L1 + a2*Q1", "L1 + a1*P1 + a2*Q1", "L1 - 7/3*P1 + mu*Q1"] {
            assert_eq!(cocycle_reduce(&el(v)).unwrap(), el("L1"), "{v}");
        }
        assert!(cocycle_reduce(&el("L2 + P1")).is_err());
    }

    #[test]
    fn blocks_commute() {
        for (a, b, c) in cross_brackets().unwrap() {
            assert!(c.is_zero(), "[{a:?}, {b:?}] = {c}");
        }
    }

    #[test]
    fn graded_jacobi_on_basis() {
        let sgn = |a: Basis, b: Basis| if a.is_odd() && b.is_odd() { -1 } else { 1 };
        for a in Basis::ALL {
            for b in Basis::ALL {
                for c in Basis::ALL {
                    let (x, y, z) = (Element::basis(a), Element::basis(b), Element::basis(c));
                    let br = |p: &Element, q: &Element| graded_bracket(p, q).unwrap();
                    let s = br(&x, &br(&y, &z))
                        .scale(&GExpr::int(sgn(a, c)))
                        .add(&br(&y, &br(&z, &x)).scale(&GExpr::int(sgn(b, a))))
                        .add(&br(&z, &br(&x, &y)).scale(&GExpr::int(sgn(c, b))));
                    assert!(s.is_zero(), "{a:?} {b:?} {c:?}");
                }
            }
        }
    }

    #[test]
    fn catalog_shape() {
        let c = catalog().unwrap();
        assert_eq!(c.len(), 24);
        assert_eq!(catalog_entry("L14").unwrap().generator, el("mu*Q1 + nu*Q2"));
        for s in &c {
            assert_eq!(s.generator.parity(), Some(false), "{}", s.id);
        }
        assert!(catalog_entry("L9").unwrap().provenance.contains("rescaled"));
        assert_eq!(catalog_records().unwrap()[23].generator, "L1 + k*L2");
    }

    #[test]
    fn generators_and_general_symmetry_verify() {
        use crate::prolong::verify_symmetry;
        let p = ModelParams::symbolic();
        for b in [Basis::L1, Basis::Q2] {
            assert!(verify_symmetry(&generator_field(b, &p), &p).unwrap(), "{b:?}");
        }
        assert!(verify_symmetry(&general_symmetry().unwrap(), &p).unwrap());
    }
}
