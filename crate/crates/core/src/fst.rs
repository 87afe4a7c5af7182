//! Finite state transducer over dissimilar descendants.
//!
//! States are expressions: the input expression as start state and the
//! normalized derivatives reachable from it. Each transition carries the
//! transformer that maps parse trees of its target back to parse trees of
//! its source, so running a word and folding the transformers over the
//! empty trees of the final state yields the parse trees of the word.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::deriv::deriv;
use crate::engine::TransformError;
use crate::parsetree::{all_eps, dedup_trees, first_eps, ParseTree, TreeSeq};
use crate::simplify::{canonicalize_pruned, pd_normalize, IdempSite, RewriteResult, Transformer};
use crate::syntax::{nullable, Regex, Symbol};

pub const DEFAULT_MAX_STATES: usize = 10_000;

/// Disambiguation policy realized by the transducer's first parse tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// States are canonical derivatives; the first tree is the POSIX parse.
    #[default]
    Posix,
    /// States are sums of partial derivatives; the first tree is the Greedy
    /// parse.
    Greedy,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Posix => "posix",
            Mode::Greedy => "greedy",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("transducer exceeds the limit of {limit} states")]
    TooManyStates { limit: usize },
}

#[derive(Debug, Clone)]
pub struct Transition {
    pub target: usize,
    /// Maps trees of the target state to trees of the source state: first
    /// the normalization back-transformer, then injection of the symbol.
    pub back: Transformer,
    /// Rule Idemp fired while normalizing the derivative.
    pub used_idemp: bool,
    /// Where Idemp fired, relative to the raw derivative.
    pub idemp_sites: Vec<IdempSite>,
    /// The raw derivative before normalization.
    pub derivative: Regex,
}

impl Transition {
    /// Idemp removed an alternative that carries parse trees.
    pub fn live_idemp(&self) -> bool {
        self.idemp_sites.iter().any(|s| s.live)
    }
}

#[derive(Debug, Clone)]
pub struct Transducer {
    mode: Mode,
    states: Vec<Regex>,
    finals: Vec<bool>,
    alphabet: Vec<Symbol>,
    /// `transitions[q][i]` is the transition on `alphabet[i]`.
    transitions: Vec<Vec<Transition>>,
    sink: usize,
}

/// The state reached by a word plus the transitions taken, so that the
/// composed transformer is evaluated lazily.
#[derive(Debug, Clone)]
pub struct Run<'t> {
    pub state: usize,
    steps: Vec<&'t Transition>,
}

impl Run<'_> {
    /// The composed transformer from trees of the final state to trees of
    /// the start state.
    pub fn transformer(&self) -> Transformer {
        Transformer::chain(self.steps.iter().rev().map(|t| t.back.clone()))
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

pub fn build(r: &Regex, mode: Mode) -> Result<Transducer, BuildError> {
    build_with_limit(r, mode, DEFAULT_MAX_STATES)
}

/// Worklist closure of the start expression under normalized derivatives.
/// Symbols not occurring in `r` lead to the `#` sink.
pub fn build_with_limit(
    r: &Regex,
    mode: Mode,
    max_states: usize,
) -> Result<Transducer, BuildError> {
    let alphabet = r.symbols();
    let mut states: Vec<Regex> = Vec::new();
    let mut index: HashMap<Regex, usize> = HashMap::new();
    let mut transitions: Vec<Vec<Transition>> = Vec::new();

    let intern = |s: Regex,
                  states: &mut Vec<Regex>,
                  index: &mut HashMap<Regex, usize>|
     -> Result<usize, BuildError> {
        if let Some(&q) = index.get(&s) {
            return Ok(q);
        }
        if states.len() >= max_states {
            return Err(BuildError::TooManyStates { limit: max_states });
        }
        index.insert(s.clone(), states.len());
        states.push(s);
        Ok(states.len() - 1)
    };

    intern(r.clone(), &mut states, &mut index)?;
    let mut next = 0;
    while next < states.len() {
        let source = Arc::new(states[next].clone());
        let mut row = Vec::with_capacity(alphabet.len());
        for &x in &alphabet {
            let d = deriv(&source, x);
            let RewriteResult {
                target,
                back,
                used_idemp,
                idemp_sites,
                ..
            } = match mode {
                Mode::Posix => canonicalize_pruned(&d),
                Mode::Greedy => pd_normalize(&d),
            };
            let q = intern(target, &mut states, &mut index)?;
            row.push(Transition {
                target: q,
                back: Transformer::chain([
                    back,
                    Transformer::Inject {
                        source: source.clone(),
                        symbol: x,
                    },
                ]),
                used_idemp,
                idemp_sites,
                derivative: d,
            });
        }
        transitions.push(row);
        next += 1;
    }

    let sink = match index.get(&Regex::Phi) {
        Some(&q) => q,
        None => {
            let q = intern(Regex::Phi, &mut states, &mut index)?;
            transitions.push(
                alphabet
                    .iter()
                    .map(|&x| Transition {
                        target: q,
                        back: Transformer::Inject {
                            source: Arc::new(Regex::Phi),
                            symbol: x,
                        },
                        used_idemp: false,
                        idemp_sites: Vec::new(),
                        derivative: Regex::Phi,
                    })
                    .collect(),
            );
            q
        }
    };
    let finals = states.iter().map(nullable).collect();
    Ok(Transducer {
        mode,
        states,
        finals,
        alphabet,
        transitions,
        sink,
    })
}

impl Transducer {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn start(&self) -> usize {
        0
    }

    /// The `#` state. Always present; symbols outside the alphabet lead here.
    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Regex] {
        &self.states
    }

    pub fn state(&self, q: usize) -> &Regex {
        &self.states[q]
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals[q]
    }

    /// Symbols of the input expression in ascending order.
    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    /// The transition on `x` out of `q`, or `None` when `x` is outside the
    /// alphabet (the run then drops into the sink).
    pub fn transition(&self, q: usize, x: Symbol) -> Option<&Transition> {
        let i = self.alphabet.binary_search(&x).ok()?;
        Some(&self.transitions[q][i])
    }

    /// All transitions in state order, then alphabet order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, Symbol, &Transition)> + '_ {
        self.transitions
            .iter()
            .enumerate()
            .flat_map(move |(q, row)| row.iter().zip(&self.alphabet).map(move |(t, &x)| (q, x, t)))
    }

    pub fn run(&self, w: &[Symbol]) -> Run<'_> {
        let mut state = self.start();
        let mut steps = Vec::with_capacity(w.len());
        for &x in w {
            match self.transition(state, x) {
                Some(t) => {
                    steps.push(t);
                    state = t.target;
                }
                None => {
                    return Run {
                        state: self.sink,
                        steps: Vec::new(),
                    }
                }
            }
        }
        Run { state, steps }
    }

    /// All parse trees of `w`, highest priority first.
    pub fn parse_all(&self, w: &[Symbol]) -> Result<TreeSeq, TransformError> {
        let run = self.run(w);
        if !self.is_final(run.state) {
            return Ok(Vec::new());
        }
        let mut trees = all_eps(&self.states[run.state]);
        for step in run.steps.iter().rev() {
            let mut next = Vec::with_capacity(trees.len());
            for v in trees {
                next.extend(step.back.apply(v)?);
            }
            trees = dedup_trees(next);
        }
        Ok(trees)
    }

    /// The first parse tree of `w`: the POSIX parse in [`Mode::Posix`], the
    /// Greedy parse in [`Mode::Greedy`]. Linear in `|w|` for a fixed
    /// transducer.
    pub fn parse_first(&self, w: &[Symbol]) -> Result<Option<ParseTree>, TransformError> {
        let run = self.run(w);
        if !self.is_final(run.state) {
            return Ok(None);
        }
        let mut v = first_eps(&self.states[run.state]);
        for step in run.steps.iter().rev() {
            match v {
                Some(u) => v = step.back.apply_first(u)?,
                None => break,
            }
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::all_parse;
    use crate::syntax::{parse_regex, parse_word, print_regex};

    fn re(s: &str) -> Regex {
        parse_regex(s).unwrap()
    }
    fn w(s: &str) -> Vec<Symbol> {
        parse_word(s).unwrap()
    }
    fn t(s: &str) -> ParseTree {
        s.parse().unwrap()
    }

    #[test]
    fn phi_is_a_single_sink() {
        let fst = build(&Regex::Phi, Mode::Posix).unwrap();
        assert_eq!(fst.len(), 1);
        assert_eq!(fst.sink(), fst.start());
        assert!(!fst.is_final(0));
        let run = fst.run(&w("x"));
        assert_eq!(run.state, fst.sink());
        assert_eq!(fst.parse_all(&w("x")).unwrap(), Vec::<ParseTree>::new());
    }

    #[test]
    fn empty_run_is_identity() {
        let fst = build(&re("(x|y)*"), Mode::Posix).unwrap();
        let run = fst.run(&[]);
        assert_eq!(run.state, fst.start());
        assert_eq!(run.transformer(), Transformer::Identity);
    }

    #[test]
    fn symbol_star_states() {
        let fst = build(&re("(x|y)*"), Mode::Posix).unwrap();
        let labels: Vec<_> = fst.states().iter().map(print_regex).collect();
        assert_eq!(labels, ["(x|y)*", "~(x|y)*", "#"]);
        let run = fst.run(&w("xy"));
        let composed = run.transformer();
        let mut via_composed = Vec::new();
        for v in all_eps(fst.state(run.state)) {
            via_composed.extend(composed.apply(v).unwrap());
        }
        assert_eq!(via_composed, all_parse(&re("(x|y)*"), &w("xy")));
        assert_eq!(fst.parse_all(&w("xy")).unwrap(), vec![t("[L x,R y]")]);
    }

    #[test]
    fn two_trees_for_overlapping_alternatives() {
        let fst = build(&re("(xy|x|y)*"), Mode::Posix).unwrap();
        assert_eq!(
            fst.parse_all(&w("xy")).unwrap(),
            vec![t("[L (x,y)]"), t("[R (L x),R (R y)]")]
        );
        assert_eq!(fst.parse_all(&w("xx")).unwrap().len(), 1);
        assert!(fst.parse_all(&w("yx")).unwrap().len() == 1);
        assert!(fst.parse_all(&w("z")).unwrap().is_empty());
    }

    #[test]
    fn posix_and_greedy_first_trees() {
        let r = re("(xx*|yx|xyx)*y");
        let posix = build(&r, Mode::Posix).unwrap();
        let greedy = build(&r, Mode::Greedy).unwrap();
        let all = posix.parse_all(&w("xyxy")).unwrap();
        assert!(all.len() >= 2);
        let p = posix.parse_first(&w("xyxy")).unwrap().unwrap();
        assert_eq!(p, t("([R (R (x,(y,x)))],y)"));
        let g = greedy.parse_first(&w("xyxy")).unwrap().unwrap();
        assert_ne!(g, p);
        assert!(all.contains(&g));
        assert_eq!(posix.parse_first(&w("xx")).unwrap(), None);
    }

    #[test]
    fn idemp_fires_on_y_after_x() {
        let r = re("(xx*|yx|xyx)*y");
        let fst = build(&r, Mode::Posix).unwrap();
        let q = fst.run(&w("x")).state;
        let t = fst.transition(q, Symbol::new('y').unwrap()).unwrap();
        assert!(t.used_idemp);
    }

    #[test]
    fn state_cap() {
        assert_eq!(
            build_with_limit(&re("(x|y)*"), Mode::Posix, 2).unwrap_err(),
            BuildError::TooManyStates { limit: 2 }
        );
    }
}
