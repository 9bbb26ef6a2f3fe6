//! Global symbol registry.
//!
//! Symbols are interned once and never removed, so a `Symbol` is a cheap
//! copyable handle. Families of derivative symbols (jet coordinates and
//! arbitrary coefficient functions) are registered here too: every member
//! of a family is an ordinary symbol carrying its derivative multi-index.

use crate::error::{Error, Result};
use once_cell::sync::Lazy;
use parking_lot::RwLock;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    BosonicVariable,
    BosonicParameter,
    FermionicVariable,
    FermionicParameter,
}

impl Kind {
    pub fn is_odd(self) -> bool {
        matches!(self, Kind::FermionicVariable | Kind::FermionicParameter)
    }

    pub fn is_parameter(self) -> bool {
        matches!(self, Kind::BosonicParameter | Kind::FermionicParameter)
    }

    pub fn name(self) -> &'static str {
        match self {
            Kind::BosonicVariable => "bosonic variable",
            Kind::BosonicParameter => "bosonic parameter",
            Kind::FermionicVariable => "fermionic variable",
            Kind::FermionicParameter => "fermionic parameter",
        }
    }
}

/// Jet families only change under total derivatives; explicit families
/// respond to partial derivatives in their arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Jet,
    Explicit,
}

pub struct FamilyInfo {
    id: u32,
    pub name: String,
    pub odd: bool,
    pub kind: FamilyKind,
    pub args: Vec<Symbol>,
}

#[derive(Clone, Copy)]
pub struct Family(&'static FamilyInfo);

pub struct SymbolInfo {
    id: u32,
    name: String,
    kind: Kind,
    member: Option<(Family, Vec<u32>)>,
}

#[derive(Clone, Copy)]
pub struct Symbol(&'static SymbolInfo);

pub struct FunctionInfo {
    id: u32,
    pub name: String,
    pub odd: bool,
    pub arity: usize,
}

/// An arbitrary function symbol, applied to scalar arguments.
#[derive(Clone, Copy)]
pub struct Function(&'static FunctionInfo);

#[derive(Default)]
struct Registry {
    next_id: u32,
    symbols: HashMap<String, Symbol>,
    families: HashMap<String, Family>,
    members: HashMap<(u32, Vec<u32>), Symbol>,
    functions: HashMap<String, Function>,
}

static REGISTRY: Lazy<RwLock<Registry>> = Lazy::new(|| RwLock::new(Registry::default()));

fn leak<T>(v: T) -> &'static T {
    Box::leak(Box::new(v))
}

impl Registry {
    fn fresh_id(&mut self) -> u32 {
        self.next_id += 1;
        self.next_id
    }
}

impl Symbol {
    /// Get or create a plain symbol. Re-registering with another kind fails.
    pub fn new(name: &str, kind: Kind) -> Result<Symbol> {
        if let Some(s) = Symbol::lookup(name) {
            return if s.kind() == kind && s.member().is_none() {
                Ok(s)
            } else {
                Err(Error::KindConflict {
                    name: name.to_string(),
                    existing: s.describe(),
                    requested: kind.name().to_string(),
                })
            };
        }
        let mut reg = REGISTRY.write();
        if reg.symbols.contains_key(name) {
            drop(reg);
            return Symbol::new(name, kind);
        }
        let id = reg.fresh_id();
        let sym = Symbol(leak(SymbolInfo {
            id,
            name: name.to_string(),
            kind,
            member: None,
        }));
        reg.symbols.insert(name.to_string(), sym);
        Ok(sym)
    }

    pub fn lookup(name: &str) -> Option<Symbol> {
        REGISTRY.read().symbols.get(name).copied()
    }

    pub fn name(self) -> &'static str {
        &self.0.name
    }

    pub fn kind(self) -> Kind {
        self.0.kind
    }

    pub fn is_odd(self) -> bool {
        self.0.kind.is_odd()
    }

    pub fn is_parameter(self) -> bool {
        self.0.kind.is_parameter()
    }

    pub fn member(self) -> Option<(Family, &'static [u32])> {
        self.0.member.as_ref().map(|(f, ix)| (*f, ix.as_slice()))
    }

    pub fn family(self) -> Option<Family> {
        self.0.member.as_ref().map(|(f, _)| *f)
    }

    fn tier(self) -> u8 {
        if self.0.member.is_some() {
            2
        } else if self.0.kind.is_parameter() {
            1
        } else {
            0
        }
    }

    fn describe(self) -> String {
        match self.member() {
            Some((f, _)) => format!("member of family `{}`", f.name()),
            None => self.kind().name().to_string(),
        }
    }

    /// Partial derivative of a family member with respect to one of the
    /// family arguments.
    pub fn derive_member(self, arg: Symbol) -> MemberDeriv {
        let Some((fam, index)) = self.member() else {
            return MemberDeriv::Independent;
        };
        let Some(pos) = fam.args().iter().position(|a| *a == arg) else {
            return MemberDeriv::Independent;
        };
        fam.step(index, pos)
    }
}

/// Outcome of differentiating a family member.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemberDeriv {
    Independent,
    Zero,
    Member(i8, Symbol),
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for Symbol {}
impl Hash for Symbol {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}
impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0.id == other.0.id {
            return Ordering::Equal;
        }
        (self.tier(), self.name()).cmp(&(other.tier(), other.name()))
    }
}
impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Family {
    /// Declare a family. Redeclaring with the same signature returns the
    /// existing family.
    pub fn declare(name: &str, odd: bool, kind: FamilyKind, args: &[Symbol]) -> Result<Family> {
        if let Some(f) = Family::lookup(name) {
            if f.is_odd() == odd && f.kind() == kind && f.args() == args {
                return Ok(f);
            }
            return Err(Error::KindConflict {
                name: name.to_string(),
                existing: "family with another signature".into(),
                requested: "family".into(),
            });
        }
        if let Some(s) = Symbol::lookup(name) {
            if s.member().is_none() {
                return Err(Error::KindConflict {
                    name: name.to_string(),
                    existing: s.describe(),
                    requested: "family".into(),
                });
            }
        }
        for a in args {
            if a.is_parameter() || a.member().is_some() && kind == FamilyKind::Jet {
                return Err(Error::Invalid(format!(
                    "family `{name}` argument `{a}` must be a variable"
                )));
            }
        }
        let fam = {
            let mut reg = REGISTRY.write();
            if let Some(f) = reg.families.get(name).copied() {
                f
            } else {
                let id = reg.fresh_id();
                let f = Family(leak(FamilyInfo {
                    id,
                    name: name.to_string(),
                    odd,
                    kind,
                    args: args.to_vec(),
                }));
                reg.families.insert(name.to_string(), f);
                f
            }
        };
        fam.base();
        Ok(fam)
    }

    pub fn lookup(name: &str) -> Option<Family> {
        REGISTRY.read().families.get(name).copied()
    }

    pub fn name(self) -> &'static str {
        &self.0.name
    }

    pub fn is_odd(self) -> bool {
        self.0.odd
    }

    pub fn kind(self) -> FamilyKind {
        self.0.kind
    }

    pub fn args(self) -> &'static [Symbol] {
        &self.0.args
    }

    pub fn base(self) -> Symbol {
        self.member(&vec![0; self.args().len()]).expect("zero index is valid")
    }

    /// Member for a canonical multi-index. Odd arguments take order 0 or 1.
    pub fn member(self, index: &[u32]) -> Option<Symbol> {
        assert_eq!(index.len(), self.args().len());
        for (a, &n) in self.args().iter().zip(index) {
            if a.is_odd() && n > 1 {
                return None;
            }
        }
        let key = (self.0.id, index.to_vec());
        if let Some(s) = REGISTRY.read().members.get(&key) {
            return Some(*s);
        }
        let name = self.member_name(index);
        let mut reg = REGISTRY.write();
        if let Some(s) = reg.members.get(&key) {
            return Some(*s);
        }
        let odd_count = self
            .args()
            .iter()
            .zip(index)
            .filter(|(a, &n)| a.is_odd() && n == 1)
            .count();
        let odd = self.is_odd() ^ (odd_count % 2 == 1);
        let kind = if odd {
            Kind::FermionicVariable
        } else {
            Kind::BosonicVariable
        };
        let id = reg.fresh_id();
        let sym = Symbol(leak(SymbolInfo {
            id,
            name: name.clone(),
            kind,
            member: Some((self, index.to_vec())),
        }));
        reg.members.insert(key, sym);
        reg.symbols.insert(name, sym);
        Some(sym)
    }

    fn member_name(self, index: &[u32]) -> String {
        let mut subs = String::new();
        for (a, &n) in self.args().iter().zip(index) {
            if !a.is_odd() {
                for _ in 0..n {
                    subs.push_str(a.name());
                }
            }
        }
        for (a, &n) in self.args().iter().zip(index) {
            if a.is_odd() && n == 1 {
                subs.push_str(a.name());
            }
        }
        if subs.is_empty() {
            self.name().to_string()
        } else {
            format!("{}_{}", self.name(), subs)
        }
    }

    /// Apply the left derivative in argument `pos` to the member `index`.
    ///
    /// Canonical members apply odd derivatives in argument order, the first
    /// odd argument innermost, so moving a new odd derivative into place
    /// passes every present odd derivative that sits after it.
    fn step(self, index: &[u32], pos: usize) -> MemberDeriv {
        let args = self.args();
        let mut next = index.to_vec();
        let mut sign = 1i8;
        if args[pos].is_odd() {
            if index[pos] == 1 {
                return MemberDeriv::Zero;
            }
            let passed = (pos + 1..args.len())
                .filter(|&j| args[j].is_odd() && index[j] == 1)
                .count();
            if passed % 2 == 1 {
                sign = -1;
            }
        }
        next[pos] += 1;
        match self.member(&next) {
            Some(s) => MemberDeriv::Member(sign, s),
            None => MemberDeriv::Zero,
        }
    }

    /// Resolve a subscript string such as `xtheta1` applied left to right.
    pub fn resolve_subscript(self, subs: &str) -> Option<(i8, Option<Symbol>)> {
        let args = self.args();
        let mut index = vec![0u32; args.len()];
        let mut sign = 1i8;
        let mut rest = subs;
        let mut zero = false;
        while !rest.is_empty() {
            let (pos, len) = args
                .iter()
                .enumerate()
                .filter(|(_, a)| rest.starts_with(a.name()))
                .map(|(i, a)| (i, a.name().len()))
                .max_by_key(|(_, l)| *l)?;
            rest = &rest[len..];
            if zero {
                continue;
            }
            match self.step(&index, pos) {
                MemberDeriv::Member(s, _) => {
                    sign *= s;
                    index[pos] += 1;
                }
                MemberDeriv::Zero => zero = true,
                MemberDeriv::Independent => unreachable!(),
            }
        }
        if zero {
            Some((1, None))
        } else {
            Some((sign, self.member(&index)))
        }
    }
}

impl PartialEq for Family {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for Family {}
impl Hash for Family {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}
impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Function {
    pub fn declare(name: &str, odd: bool, arity: usize) -> Result<Function> {
        if let Some(f) = Function::lookup(name) {
            if f.is_odd() == odd && f.arity() == arity {
                return Ok(f);
            }
            return Err(Error::KindConflict {
                name: name.to_string(),
                existing: format!("function of arity {}", f.arity()),
                requested: format!("function of arity {arity}"),
            });
        }
        let mut reg = REGISTRY.write();
        if let Some(f) = reg.functions.get(name) {
            return Ok(*f);
        }
        let id = reg.fresh_id();
        let f = Function(leak(FunctionInfo {
            id,
            name: name.to_string(),
            odd,
            arity,
        }));
        reg.functions.insert(name.to_string(), f);
        Ok(f)
    }

    pub fn lookup(name: &str) -> Option<Function> {
        REGISTRY.read().functions.get(name).copied()
    }

    pub fn name(self) -> &'static str {
        &self.0.name
    }

    pub fn is_odd(self) -> bool {
        self.0.odd
    }

    pub fn arity(self) -> usize {
        self.0.arity
    }
}

impl PartialEq for Function {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}
impl Eq for Function {}
impl Hash for Function {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}
impl Ord for Function {
    fn cmp(&self, other: &Self) -> Ordering {
        self.name().cmp(other.name())
    }
}
impl PartialOrd for Function {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl fmt::Debug for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Resolve a name to a symbol, including derivative subscripts of a
/// declared family (`W_xtheta1`). The sign accounts for reordering odd
/// derivatives; `None` means the derivative vanishes identically.
pub fn resolve_name(name: &str) -> Option<(i8, Option<Symbol>)> {
    if let Some(s) = Symbol::lookup(name) {
        return Some((1, Some(s)));
    }
    let mut best = None;
    for (i, _) in name.match_indices('_') {
        if let Some(f) = Family::lookup(&name[..i]) {
            best = Some((f, &name[i + 1..]));
        }
    }
    let (fam, subs) = best?;
    fam.resolve_subscript(subs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords() -> (Symbol, Symbol, Symbol, Symbol) {
        (
            Symbol::new("x", Kind::BosonicVariable).unwrap(),
            Symbol::new("t", Kind::BosonicVariable).unwrap(),
            Symbol::new("theta1", Kind::FermionicVariable).unwrap(),
            Symbol::new("theta2", Kind::FermionicVariable).unwrap(),
        )
    }

    #[test]
    fn kind_conflict_is_rejected() {
        Symbol::new("symtest_a", Kind::BosonicParameter).unwrap();
        assert!(Symbol::new("symtest_a", Kind::FermionicParameter).is_err());
        assert!(Symbol::new("symtest_a", Kind::BosonicParameter).is_ok());
    }

    #[test]
    fn odd_derivatives_anticommute() {
        let (x, t, th1, th2) = coords();
        let w = Family::declare("Wsym", false, FamilyKind::Jet, &[x, t, th1, th2]).unwrap();
        let (s12, a) = w.resolve_subscript("theta1theta2").unwrap();
        let (s21, b) = w.resolve_subscript("theta2theta1").unwrap();
        assert_eq!(a, b);
        assert_eq!(s12, -s21);
        assert_eq!(a.unwrap().name(), "Wsym_theta1theta2");
        assert!(!a.unwrap().is_odd());
        let (_, c) = w.resolve_subscript("theta1").unwrap();
        assert!(c.unwrap().is_odd());
        assert_eq!(w.resolve_subscript("theta1theta1"), Some((1, None)));
        assert_eq!(resolve_name("Wsym_xtheta1").unwrap().1.unwrap().name(), "Wsym_xtheta1");
        assert_eq!(resolve_name("Wsym_theta1x").unwrap().1.unwrap().name(), "Wsym_xtheta1");
    }

    #[test]
    fn generator_order_puts_coordinates_first() {
        let (_, _, th1, th2) = coords();
        let mu = Symbol::new("mu", Kind::FermionicParameter).unwrap();
        assert!(th1 < th2);
        assert!(th2 < mu);
    }
}
