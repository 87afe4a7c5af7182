//! Brzozowski derivatives and Antimirov partial derivatives.
//!
//! [`deriv`] is the raw syntactic derivative with no simplification; state
//! canonicalization happens separately in [`crate::simplify`] so that
//! injection can rely on the exact shape of the derivative.

use std::sync::Arc;

use crate::syntax::{nullable, Regex, Symbol};

pub fn deriv(r: &Regex, x: Symbol) -> Regex {
    match r {
        Regex::Phi | Regex::Eps => Regex::Phi,
        Regex::Sym(y) => {
            if *y == x {
                Regex::Eps
            } else {
                Regex::Phi
            }
        }
        Regex::Alt(a, b) => Regex::alt(deriv(a, x), deriv(b, x)),
        Regex::Star(a) => Regex::Cat(Arc::new(deriv(a, x)), Arc::new(r.clone())),
        Regex::Cat(a, b) => {
            let left = Regex::Cat(Arc::new(deriv(a, x)), b.clone());
            if nullable(a) {
                Regex::alt(left, deriv(b, x))
            } else {
                left
            }
        }
    }
}

pub fn deriv_word(r: &Regex, w: &[Symbol]) -> Regex {
    w.iter().fold(r.clone(), |acc, &x| deriv(&acc, x))
}

/// `w ∈ L(r)`, decided by nullability of the word derivative.
pub fn matches(r: &Regex, w: &[Symbol]) -> bool {
    nullable(&deriv_word(r, w))
}

/// Ordered set of expressions; insertion keeps the first occurrence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct RegexSet(Vec<Regex>);

impl RegexSet {
    pub fn new() -> RegexSet {
        RegexSet(Vec::new())
    }

    /// Appends `r` unless an equal expression is already present.
    pub fn insert(&mut self, r: Regex) -> bool {
        if self.0.contains(&r) {
            false
        } else {
            self.0.push(r);
            true
        }
    }

    pub fn extend(&mut self, other: RegexSet) {
        for r in other.0 {
            self.insert(r);
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Regex> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Regex] {
        &self.0
    }
}

impl FromIterator<Regex> for RegexSet {
    fn from_iter<I: IntoIterator<Item = Regex>>(iter: I) -> Self {
        let mut set = RegexSet::new();
        for r in iter {
            set.insert(r);
        }
        set
    }
}

impl IntoIterator for RegexSet {
    type Item = Regex;
    type IntoIter = std::vec::IntoIter<Regex>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

pub fn pderiv(r: &Regex, x: Symbol) -> RegexSet {
    match r {
        Regex::Phi | Regex::Eps => RegexSet::new(),
        Regex::Sym(y) => {
            if *y == x {
                std::iter::once(Regex::Eps).collect()
            } else {
                RegexSet::new()
            }
        }
        Regex::Alt(a, b) => {
            let mut out = pderiv(a, x);
            out.extend(pderiv(b, x));
            out
        }
        Regex::Star(a) => {
            let star = Arc::new(r.clone());
            pderiv(a, x)
                .into_iter()
                .map(|p| Regex::Cat(Arc::new(p), star.clone()))
                .collect()
        }
        Regex::Cat(a, b) => {
            let mut out: RegexSet = pderiv(a, x)
                .into_iter()
                .map(|p| Regex::Cat(Arc::new(p), b.clone()))
                .collect();
            if nullable(a) {
                out.extend(pderiv(b, x));
            }
            out
        }
    }
}

/// Right-nested alternation of the elements; `#` when empty.
pub fn sum_of(set: &RegexSet) -> Regex {
    let mut items = set.iter().rev();
    match items.next() {
        None => Regex::Phi,
        Some(last) => items.fold(last.clone(), |acc, r| Regex::alt(r.clone(), acc)),
    }
}
