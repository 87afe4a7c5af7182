//! Brute-force parse-tree enumeration by word splitting, plus seeded corpus
//! generation for property tests.
//!
//! Nothing here uses derivatives, so it can serve as an independent check of
//! [`crate::engine`] and [`crate::fst`].

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::parsetree::{dedup_trees, ParseTree, TreeSeq};
use crate::syntax::{print_regex, problematic_subterm, Regex, Symbol, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("`{subterm}` is a star over a nullable expression; parse trees are not finite")]
    Problematic { subterm: String },
}

/// All parse trees of `w` against `r`, trying splits left to right.
pub fn enumerate(r: &Regex, w: &[Symbol]) -> Result<TreeSeq, OracleError> {
    if let Some(s) = problematic_subterm(r) {
        return Err(OracleError::Problematic {
            subterm: print_regex(s),
        });
    }
    Ok(dedup_trees(trees(r, w)))
}

fn trees(r: &Regex, w: &[Symbol]) -> TreeSeq {
    match r {
        Regex::Phi => Vec::new(),
        Regex::Eps => {
            if w.is_empty() {
                vec![ParseTree::Unit]
            } else {
                Vec::new()
            }
        }
        Regex::Sym(x) => {
            if w == [*x] {
                vec![ParseTree::Lit(*x)]
            } else {
                Vec::new()
            }
        }
        Regex::Alt(a, b) => trees(a, w)
            .into_iter()
            .map(ParseTree::inl)
            .chain(trees(b, w).into_iter().map(ParseTree::inr))
            .collect(),
        Regex::Cat(a, b) => {
            let mut out = Vec::new();
            for k in 0..=w.len() {
                let lefts = trees(a, &w[..k]);
                if lefts.is_empty() {
                    continue;
                }
                let rights = trees(b, &w[k..]);
                for l in &lefts {
                    for r in &rights {
                        out.push(ParseTree::pair(l.clone(), r.clone()));
                    }
                }
            }
            out
        }
        Regex::Star(body) => {
            if w.is_empty() {
                return vec![ParseTree::Seq(VecDeque::new())];
            }
            let mut out = Vec::new();
            for k in 1..=w.len() {
                let heads = trees(body, &w[..k]);
                if heads.is_empty() {
                    continue;
                }
                for tail in trees(r, &w[k..]) {
                    let ParseTree::Seq(items) = tail else {
                        unreachable!("star trees are lists")
                    };
                    for h in &heads {
                        let mut items = items.clone();
                        items.push_front(h.clone());
                        out.push(ParseTree::Seq(items));
                    }
                }
            }
            out
        }
    }
}

/// All words over `alphabet` of length at most `max_len`, shortest first,
/// then in alphabet order.
pub fn all_words(alphabet: &[Symbol], max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for &x in alphabet {
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `n` pseudo-random expressions of depth at most `max_depth`, reproducible
/// from `seed`. Leaves are symbols, `~` and `#`.
pub fn gen_corpus(max_depth: usize, alphabet: &[Symbol], n: usize, seed: u64) -> Vec<Regex> {
    assert!(max_depth >= 1, "depth bound must be at least 1");
    assert!(!alphabet.is_empty(), "alphabet must not be empty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| gen_regex(&mut rng, max_depth, alphabet))
        .collect()
}

/// The first `n` non-problematic expressions drawn as in [`gen_corpus`].
pub fn gen_non_problematic(
    max_depth: usize,
    alphabet: &[Symbol],
    n: usize,
    seed: u64,
) -> Vec<Regex> {
    assert!(max_depth >= 1, "depth bound must be at least 1");
    assert!(!alphabet.is_empty(), "alphabet must not be empty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    std::iter::repeat_with(|| gen_regex(&mut rng, max_depth, alphabet))
        .filter(|r| problematic_subterm(r).is_none())
        .take(n)
        .collect()
}

pub fn gen_regex<R: Rng>(rng: &mut R, max_depth: usize, alphabet: &[Symbol]) -> Regex {
    if max_depth <= 1 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Regex::Phi,
            1 | 2 => Regex::Eps,
            _ => Regex::Sym(alphabet[rng.gen_range(0..alphabet.len())]),
        };
    }
    let d = max_depth - 1;
    match rng.gen_range(0..5) {
        0 => Regex::star(gen_regex(rng, d, alphabet)),
        1 | 2 => Regex::cat(gen_regex(rng, d, alphabet), gen_regex(rng, d, alphabet)),
        _ => Regex::alt(gen_regex(rng, d, alphabet), gen_regex(rng, d, alphabet)),
    }
}
