//! Term-by-term comparison of two expressions.

use crate::grassmann::{GExpr, GMono};
use crate::poly::RatFunc;
use crate::print::gexpr_string;
use crate::scalar::{Mono, Scalar};
use std::collections::BTreeMap;

/// Terms present on only one side, and terms whose coefficients differ.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TermDiff {
    pub missing: Vec<String>,
    pub extra: Vec<String>,
    pub changed: Vec<String>,
}

impl TermDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty() && self.changed.is_empty()
    }

    pub fn len(&self) -> usize {
        self.missing.len() + self.extra.len() + self.changed.len()
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        out.extend(self.missing.iter().map(|s| format!("missing {s}")));
        out.extend(self.extra.iter().map(|s| format!("extra {s}")));
        out.extend(self.changed.iter().map(|s| format!("changed {s}")));
        out
    }
}

fn flatten(e: &GExpr) -> BTreeMap<(GMono, Mono), RatFunc> {
    let mut out = BTreeMap::new();
    for (g, s) in &e.terms {
        for (m, c) in &s.terms {
            out.insert((g.clone(), m.clone()), c.clone());
        }
    }
    out
}

fn show(key: &(GMono, Mono), c: &RatFunc) -> String {
    let e = GExpr::monomial(&key.0).mul_scalar(&Scalar::from_term(key.1.clone(), c.clone()));
    gexpr_string(&e)
}

/// Compare `actual` against `reference`. `missing` lists reference terms
/// the actual expression lacks.
pub fn term_diff(actual: &GExpr, reference: &GExpr) -> TermDiff {
    let a = flatten(actual);
    let r = flatten(reference);
    let mut d = TermDiff::default();
    for (k, rc) in &r {
        match a.get(k) {
            None => d.missing.push(show(k, rc)),
            Some(ac) if ac != rc => d.changed.push(format!("{} (expected {})", show(k, ac), show(k, rc))),
            _ => {}
        }
    }
    for (k, ac) in &a {
        if !r.contains_key(k) {
            d.extra.push(show(k, ac));
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_expr;

    #[test]
    fn sign_flip_shows_as_changed() {
        let a = parse_expr("x + 2*t - theta1*theta2").unwrap();
        let b = parse_expr("x - 2*t + x^2").unwrap();
        let d = term_diff(&a, &b);
        assert_eq!(d.changed.len(), 1);
        assert_eq!(d.missing.len(), 1);
        assert_eq!(d.extra.len(), 1);
        assert!(term_diff(&a, &a).is_empty());
    }
}
