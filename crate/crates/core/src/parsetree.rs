//! Parse trees as values typed by expressions.
//!
//! Notation used for printing and parsing trees: `()` unit, a bare symbol for
//! a literal, `(t1,t2)` pairs, `L t` / `R t` injections and `[t1,t2,...]` for
//! star iterations.

use std::cmp::Ordering;
use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::syntax::{Regex, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ParseTree {
    Unit,
    Lit(Symbol),
    Pair(Box<ParseTree>, Box<ParseTree>),
    InL(Box<ParseTree>),
    InR(Box<ParseTree>),
    /// Star iterations, first iteration at the front. A deque so that
    /// injection can prepend in constant time.
    Seq(VecDeque<ParseTree>),
}

/// Ordered, duplicate-free tree sequence; the head has the highest priority.
pub type TreeSeq = Vec<ParseTree>;

impl ParseTree {
    pub fn pair(a: ParseTree, b: ParseTree) -> ParseTree {
        ParseTree::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(v: ParseTree) -> ParseTree {
        ParseTree::InL(Box::new(v))
    }

    pub fn inr(v: ParseTree) -> ParseTree {
        ParseTree::InR(Box::new(v))
    }

    pub fn seq(items: impl IntoIterator<Item = ParseTree>) -> ParseTree {
        ParseTree::Seq(items.into_iter().collect())
    }

    pub fn lit(c: char) -> ParseTree {
        ParseTree::Lit(Symbol::new(c).expect("symbol outside the alphabet"))
    }
}

/// Removes later duplicates, keeping each tree at its first position.
pub fn dedup_trees(trees: Vec<ParseTree>) -> TreeSeq {
    if trees.len() < 2 {
        return trees;
    }
    let mut seen = HashSet::with_capacity(trees.len());
    let mut out = Vec::with_capacity(trees.len());
    for t in trees {
        if !seen.contains(&t) {
            seen.insert(t.clone());
            out.push(t);
        }
    }
    out
}

/// `⊢ v : r`.
pub fn typecheck(v: &ParseTree, r: &Regex) -> bool {
    match (v, r) {
        (ParseTree::Unit, Regex::Eps) => true,
        (ParseTree::Lit(a), Regex::Sym(b)) => a == b,
        (ParseTree::Pair(a, b), Regex::Cat(ra, rb)) => typecheck(a, ra) && typecheck(b, rb),
        (ParseTree::InL(a), Regex::Alt(ra, _)) => typecheck(a, ra),
        (ParseTree::InR(b), Regex::Alt(_, rb)) => typecheck(b, rb),
        (ParseTree::Seq(items), Regex::Star(body)) => items.iter().all(|v| typecheck(v, body)),
        _ => false,
    }
}

pub fn flatten(v: &ParseTree) -> Word {
    let mut out = Vec::new();
    flatten_into(v, &mut out);
    out
}

fn flatten_into(v: &ParseTree, out: &mut Word) {
    match v {
        ParseTree::Unit => {}
        ParseTree::Lit(s) => out.push(*s),
        ParseTree::Pair(a, b) => {
            flatten_into(a, out);
            flatten_into(b, out);
        }
        ParseTree::InL(a) | ParseTree::InR(a) => flatten_into(a, out),
        ParseTree::Seq(items) => items.iter().for_each(|v| flatten_into(v, out)),
    }
}

/// All empty parse trees of `r` in priority order: left alternatives before
/// right ones, pairs as an ordered cross product, `[]` for a star.
pub fn all_eps(r: &Regex) -> TreeSeq {
    match r {
        Regex::Eps => vec![ParseTree::Unit],
        Regex::Phi | Regex::Sym(_) => Vec::new(),
        Regex::Star(_) => vec![ParseTree::Seq(VecDeque::new())],
        Regex::Cat(a, b) => {
            let left = all_eps(a);
            if left.is_empty() {
                return left;
            }
            let right = all_eps(b);
            let mut out = Vec::with_capacity(left.len() * right.len());
            for v1 in &left {
                for v2 in &right {
                    out.push(ParseTree::pair(v1.clone(), v2.clone()));
                }
            }
            out
        }
        Regex::Alt(a, b) => all_eps(a)
            .into_iter()
            .map(ParseTree::inl)
            .chain(all_eps(b).into_iter().map(ParseTree::inr))
            .collect(),
    }
}

/// Head of [`all_eps`] without materializing the rest.
pub fn first_eps(r: &Regex) -> Option<ParseTree> {
    match r {
        Regex::Eps => Some(ParseTree::Unit),
        Regex::Phi | Regex::Sym(_) => None,
        Regex::Star(_) => Some(ParseTree::Seq(VecDeque::new())),
        Regex::Cat(a, b) => Some(ParseTree::pair(first_eps(a)?, first_eps(b)?)),
        Regex::Alt(a, b) => first_eps(a)
            .map(ParseTree::inl)
            .or_else(|| first_eps(b).map(ParseTree::inr)),
    }
}

/// `|all_eps(r)|`, saturating.
pub fn count_eps(r: &Regex) -> usize {
    match r {
        Regex::Eps | Regex::Star(_) => 1,
        Regex::Phi | Regex::Sym(_) => 0,
        Regex::Cat(a, b) => match count_eps(a) {
            0 => 0,
            n => n.saturating_mul(count_eps(b)),
        },
        Regex::Alt(a, b) => count_eps(a).saturating_add(count_eps(b)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot compare `{left}` with `{right}`: trees are not typed by the same expression")]
pub struct IncomparableTrees {
    pub left: String,
    pub right: String,
}

/// Greedy order: `L` before `R`, pairs left component first, star sequences
/// head first with a further iteration preferred over stopping.
pub fn greedy_cmp(a: &ParseTree, b: &ParseTree) -> Result<Ordering, IncomparableTrees> {
    use ParseTree::*;
    match (a, b) {
        (Unit, Unit) => Ok(Ordering::Equal),
        (Lit(x), Lit(y)) if x == y => Ok(Ordering::Equal),
        (InL(x), InL(y)) | (InR(x), InR(y)) => greedy_cmp(x, y),
        (InL(_), InR(_)) => Ok(Ordering::Less),
        (InR(_), InL(_)) => Ok(Ordering::Greater),
        (Pair(a1, a2), Pair(b1, b2)) => match greedy_cmp(a1, b1)? {
            Ordering::Equal => greedy_cmp(a2, b2),
            other => Ok(other),
        },
        (Seq(xs), Seq(ys)) => {
            let mut xs = xs.iter();
            let mut ys = ys.iter();
            loop {
                match (xs.next(), ys.next()) {
                    (None, None) => return Ok(Ordering::Equal),
                    (Some(_), None) => return Ok(Ordering::Less),
                    (None, Some(_)) => return Ok(Ordering::Greater),
                    (Some(x), Some(y)) => match greedy_cmp(x, y)? {
                        Ordering::Equal => continue,
                        other => return Ok(other),
                    },
                }
            }
        }
        _ => Err(IncomparableTrees {
            left: a.to_string(),
            right: b.to_string(),
        }),
    }
}

pub fn greedy_less(a: &ParseTree, b: &ParseTree) -> Result<bool, IncomparableTrees> {
    Ok(greedy_cmp(a, b)? == Ordering::Less)
}

/// The greedy-least tree of a set, `None` when empty.
pub fn greedy_min<'a>(
    trees: impl IntoIterator<Item = &'a ParseTree>,
) -> Result<Option<&'a ParseTree>, IncomparableTrees> {
    let mut best: Option<&ParseTree> = None;
    for t in trees {
        best = match best {
            Some(b) if greedy_cmp(b, t)? != Ordering::Greater => Some(b),
            _ => Some(t),
        };
    }
    Ok(best)
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseTree::Unit => f.write_str("()"),
            ParseTree::Lit(s) => write!(f, "{s}"),
            ParseTree::Pair(a, b) => write!(f, "({a},{b})"),
            ParseTree::InL(v) | ParseTree::InR(v) => {
                let tag = if matches!(self, ParseTree::InL(_)) {
                    'L'
                } else {
                    'R'
                };
                match **v {
                    ParseTree::InL(_) | ParseTree::InR(_) => write!(f, "{tag} ({v})"),
                    _ => write!(f, "{tag} {v}"),
                }
            }
            ParseTree::Seq(items) => {
                f.write_str("[")?;
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("]")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed parse tree at position {pos}: {msg}")]
pub struct TreeSyntaxError {
    pub pos: usize,
    pub msg: &'static str,
}

impl FromStr for ParseTree {
    type Err = TreeSyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = TreeParser {
            chars: s.chars().collect(),
            at: 0,
        };
        let t = p.tree()?;
        p.skip_ws();
        if p.at != p.chars.len() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }
}

struct TreeParser {
    chars: Vec<char>,
    at: usize,
}

impl TreeParser {
    fn error(&self, msg: &'static str) -> TreeSyntaxError {
        TreeSyntaxError { pos: self.at, msg }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.at).is_some_and(|c| c.is_whitespace()) {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.at).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), TreeSyntaxError> {
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.error("unexpected character"))
        }
    }

    fn tree(&mut self) -> Result<ParseTree, TreeSyntaxError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('(') => {
                self.at += 1;
                if self.peek() == Some(')') {
                    self.at += 1;
                    return Ok(ParseTree::Unit);
                }
                let a = self.tree()?;
                match self.peek() {
                    Some(',') => {
                        self.at += 1;
                        let b = self.tree()?;
                        self.expect(')')?;
                        Ok(ParseTree::pair(a, b))
                    }
                    // parenthesized operand of an injection
                    Some(')') => {
                        self.at += 1;
                        Ok(a)
                    }
                    _ => Err(self.error("expected `,` or `)`")),
                }
            }
            Some('[') => {
                self.at += 1;
                let mut items = VecDeque::new();
                if self.peek() == Some(']') {
                    self.at += 1;
                    return Ok(ParseTree::Seq(items));
                }
                loop {
                    items.push_back(self.tree()?);
                    match self.peek() {
                        Some(',') => self.at += 1,
                        Some(']') => {
                            self.at += 1;
                            return Ok(ParseTree::Seq(items));
                        }
                        _ => return Err(self.error("expected `,` or `]`")),
                    }
                }
            }
            Some(c @ ('L' | 'R')) => {
                self.at += 1;
                // `L` is also a legal literal; it is a tag only when an
                // operand follows
                let operand_follows = self
                    .peek()
                    .is_some_and(|n| n == '(' || n == '[' || Symbol::in_alphabet(n));
                if !operand_follows {
                    return Ok(ParseTree::Lit(Symbol::new(c).expect("alphabet letter")));
                }
                let v = self.tree()?;
                Ok(if c == 'L' {
                    ParseTree::inl(v)
                } else {
                    ParseTree::inr(v)
                })
            }
            Some(c) if Symbol::in_alphabet(c) => {
                self.at += 1;
                Ok(ParseTree::Lit(Symbol::new(c).expect("alphabet symbol")))
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }
}

impl Serialize for ParseTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ParseTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
