//! Regular expression abstract syntax.
//!
//! Expressions are immutable trees over a fixed alphabet of ASCII letters and
//! digits. Alternation and concatenation are binary and right-nested by the
//! parser, so `x|y|z` reads as `x|(y|z)` and `xyz` as `x(yz)`.
//!
//! Concrete syntax, lowest to highest precedence:
//!
//! ```text
//! alt     := cat ('|' alt)?
//! cat     := postfix cat?
//! postfix := atom '*'*
//! atom    := symbol | '~' | '#' | '(' alt ')'
//! ```
//!
//! `~` is the empty word and `#` the empty language. Whitespace is ignored.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A single alphabet symbol: an ASCII letter or digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(char);

impl Symbol {
    pub fn new(c: char) -> Result<Symbol, SyntaxError> {
        if Symbol::in_alphabet(c) {
            Ok(Symbol(c))
        } else {
            Err(SyntaxError::UnknownSymbol { pos: 0, found: c })
        }
    }

    pub fn in_alphabet(c: char) -> bool {
        c.is_ascii_alphanumeric()
    }

    pub fn as_char(self) -> char {
        self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Input words are plain symbol sequences.
pub type Word = Vec<Symbol>;

/// Parses a word, rejecting characters outside the alphabet.
pub fn parse_word(text: &str) -> Result<Word, SyntaxError> {
    text.chars()
        .enumerate()
        .map(|(pos, c)| {
            if Symbol::in_alphabet(c) {
                Ok(Symbol(c))
            } else {
                Err(SyntaxError::UnknownSymbol { pos, found: c })
            }
        })
        .collect()
}

pub fn word_to_string(w: &[Symbol]) -> String {
    w.iter().map(|s| s.0).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("unexpected `{found}` at position {pos}")]
    Unexpected { pos: usize, found: char },
    #[error("unexpected end of input at position {pos}")]
    UnexpectedEnd { pos: usize },
    #[error(
        "symbol `{found}` at position {pos} is not in the alphabet (ASCII letters and digits)"
    )]
    UnknownSymbol { pos: usize, found: char },
}

/// Regular expression AST. Structural equality is state identity in the
/// transducer, so the derived `Eq`/`Hash`/`Ord` are load-bearing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regex {
    Phi,
    Eps,
    Sym(Symbol),
    Star(Arc<Regex>),
    Cat(Arc<Regex>, Arc<Regex>),
    Alt(Arc<Regex>, Arc<Regex>),
}

impl Regex {
    pub fn sym(c: char) -> Regex {
        Regex::Sym(Symbol::new(c).expect("symbol outside the alphabet"))
    }

    pub fn star(r: Regex) -> Regex {
        Regex::Star(Arc::new(r))
    }

    pub fn cat(a: Regex, b: Regex) -> Regex {
        Regex::Cat(Arc::new(a), Arc::new(b))
    }

    pub fn alt(a: Regex, b: Regex) -> Regex {
        Regex::Alt(Arc::new(a), Arc::new(b))
    }

    /// Nesting depth; atoms have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Regex::Phi | Regex::Eps | Regex::Sym(_) => 1,
            Regex::Star(r) => 1 + r.depth(),
            Regex::Cat(a, b) | Regex::Alt(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Regex::Phi | Regex::Eps | Regex::Sym(_) => 1,
            Regex::Star(r) => 1 + r.size(),
            Regex::Cat(a, b) | Regex::Alt(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Sorted, deduplicated symbols occurring in the expression.
    pub fn symbols(&self) -> Vec<Symbol> {
        fn walk(r: &Regex, out: &mut Vec<Symbol>) {
            match r {
                Regex::Phi | Regex::Eps => {}
                Regex::Sym(s) => out.push(*s),
                Regex::Star(a) => walk(a, out),
                Regex::Cat(a, b) | Regex::Alt(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

/// One step from a node to a child: `Left`/`Right` for the operands of
/// `Cat` and `Alt`, `Body` for the operand of `Star`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Left,
    Right,
    Body,
}

/// Renders a path as `l`, `r` and `*` characters, `.` for the root.
pub fn path_to_string(path: &[Step]) -> String {
    if path.is_empty() {
        return ".".to_string();
    }
    path.iter()
        .map(|s| match s {
            Step::Left => 'l',
            Step::Right => 'r',
            Step::Body => '*',
        })
        .collect()
}

/// The subterm reached by following `path` from `r`.
pub fn subterm_at<'a>(r: &'a Regex, path: &[Step]) -> Option<&'a Regex> {
    let Some((step, rest)) = path.split_first() else {
        return Some(r);
    };
    match (r, step) {
        (Regex::Cat(a, _) | Regex::Alt(a, _), Step::Left) => subterm_at(a, rest),
        (Regex::Cat(_, b) | Regex::Alt(_, b), Step::Right) => subterm_at(b, rest),
        (Regex::Star(a), Step::Body) => subterm_at(a, rest),
        _ => None,
    }
}

/// `ε ∈ L(r)`.
pub fn nullable(r: &Regex) -> bool {
    match r {
        Regex::Eps | Regex::Star(_) => true,
        Regex::Phi | Regex::Sym(_) => false,
        Regex::Cat(a, b) => nullable(a) && nullable(b),
        Regex::Alt(a, b) => nullable(a) || nullable(b),
    }
}

/// `L(r) = ∅`.
pub fn is_empty_lang(r: &Regex) -> bool {
    match r {
        Regex::Phi => true,
        Regex::Eps | Regex::Sym(_) | Regex::Star(_) => false,
        Regex::Cat(a, b) => is_empty_lang(a) || is_empty_lang(b),
        Regex::Alt(a, b) => is_empty_lang(a) && is_empty_lang(b),
    }
}

pub fn is_problematic(r: &Regex) -> bool {
    problematic_subterm(r).is_some()
}

/// The left-most outermost `s*` with nullable `s`, if any.
pub fn problematic_subterm(r: &Regex) -> Option<&Regex> {
    match r {
        Regex::Phi | Regex::Eps | Regex::Sym(_) => None,
        Regex::Star(s) if nullable(s) => Some(r),
        Regex::Star(s) => problematic_subterm(s),
        Regex::Cat(a, b) | Regex::Alt(a, b) => {
            problematic_subterm(a).or_else(|| problematic_subterm(b))
        }
    }
}

pub fn parse_regex(text: &str) -> Result<Regex, SyntaxError> {
    let mut p = Parser {
        chars: text
            .chars()
            .enumerate()
            .filter(|(_, c)| !c.is_whitespace())
            .collect(),
        at: 0,
        len: text.chars().count(),
    };
    let r = p.alt()?;
    match p.peek() {
        None => Ok(r),
        Some((pos, found)) => Err(SyntaxError::Unexpected { pos, found }),
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<(usize, char)> {
        self.chars.get(self.at).copied()
    }

    fn end_pos(&self) -> usize {
        self.len
    }

    fn alt(&mut self) -> Result<Regex, SyntaxError> {
        let left = self.cat()?;
        if let Some((_, '|')) = self.peek() {
            self.at += 1;
            let right = self.alt()?;
            return Ok(Regex::alt(left, right));
        }
        Ok(left)
    }

    fn cat(&mut self) -> Result<Regex, SyntaxError> {
        let mut items = vec![self.postfix()?];
        while let Some((_, c)) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            items.push(self.postfix()?);
        }
        let mut acc = items.pop().expect("at least one factor");
        while let Some(prev) = items.pop() {
            acc = Regex::cat(prev, acc);
        }
        Ok(acc)
    }

    fn postfix(&mut self) -> Result<Regex, SyntaxError> {
        let mut r = self.atom()?;
        while let Some((_, '*')) = self.peek() {
            self.at += 1;
            r = Regex::star(r);
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex, SyntaxError> {
        let Some((pos, c)) = self.peek() else {
            return Err(SyntaxError::UnexpectedEnd {
                pos: self.end_pos(),
            });
        };
        self.at += 1;
        match c {
            '~' => Ok(Regex::Eps),
            '#' => Ok(Regex::Phi),
            '(' => {
                let inner = self.alt()?;
                match self.peek() {
                    Some((_, ')')) => {
                        self.at += 1;
                        Ok(inner)
                    }
                    Some((pos, found)) => Err(SyntaxError::Unexpected { pos, found }),
                    None => Err(SyntaxError::UnexpectedEnd {
                        pos: self.end_pos(),
                    }),
                }
            }
            c if Symbol::in_alphabet(c) => Ok(Regex::Sym(Symbol(c))),
            '|' | ')' | '*' => Err(SyntaxError::Unexpected { pos, found: c }),
            found => Err(SyntaxError::UnknownSymbol { pos, found }),
        }
    }
}

/// Prints with minimal parentheses: `*` binds tightest, then juxtaposition,
/// then `|`; both binary operators associate to the right.
pub fn print_regex(r: &Regex) -> String {
    let mut out = String::new();
    write_regex(r, Prec::Alt, &mut out);
    out
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Prec {
    Alt,
    Cat,
    Star,
}

fn write_regex(r: &Regex, ctx: Prec, out: &mut String) {
    let own = match r {
        Regex::Alt(..) => Prec::Alt,
        Regex::Cat(..) => Prec::Cat,
        _ => Prec::Star,
    };
    let wrap = own < ctx;
    if wrap {
        out.push('(');
    }
    match r {
        Regex::Phi => out.push('#'),
        Regex::Eps => out.push('~'),
        Regex::Sym(s) => out.push(s.0),
        Regex::Star(a) => {
            write_regex(a, Prec::Star, out);
            out.push('*');
        }
        Regex::Cat(a, b) => {
            // a left-nested Cat needs parentheses to survive the round trip
            write_regex(a, Prec::Star, out);
            write_regex(b, Prec::Cat, out);
        }
        Regex::Alt(a, b) => {
            write_regex(a, Prec::Cat, out);
            out.push('|');
            write_regex(b, Prec::Alt, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_regex(self))
    }
}

impl FromStr for Regex {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_regex(s)
    }
}

impl Serialize for Regex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&print_regex(self))
    }
}

impl<'de> Deserialize<'de> for Regex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_regex(&text).map_err(serde::de::Error::custom)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_char(self.0)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let c = char::deserialize(d)?;
        Symbol::new(c).map_err(serde::de::Error::custom)
    }
}
