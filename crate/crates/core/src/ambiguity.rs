//! Static ambiguity diagnosis on the POSIX transducer.
//!
//! Three criteria are checked at every realizable state `s`:
//!
//! * A1: `s` is final and has more than one empty parse tree.
//! * A2: some concatenation `t1·t2` that a derivative can reach has a left
//!   operand with more than one empty parse tree, and `t2` can consume the
//!   next symbol.
//! * A3: normalizing `∂x(s)` merged two copies of an alternative that both
//!   carry parse trees.
//!
//! Every hit is turned into a shortest witness word, and the POSIX and
//! Greedy first trees of the witness are compared.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deriv::deriv;
use crate::engine::TransformError;
use crate::fst::{build_with_limit, BuildError, Mode, Transducer, DEFAULT_MAX_STATES};
use crate::parsetree::{count_eps, ParseTree, TreeSeq};
use crate::syntax::{
    is_empty_lang, nullable, print_regex, problematic_subterm, subterm_at, Regex, Step, Symbol,
    Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("`{subterm}` is a star over a nullable expression; ambiguity analysis needs a non-problematic expression")]
    Problematic { subterm: String },
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Criterion {
    A1,
    A2,
    A3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum HitDetail {
    /// A1: number of empty parse trees of the state.
    EmptyTrees { count: usize },
    /// A2: position of `t1·t2` in the state.
    Concatenation { path: Vec<Step>, subterm: Regex },
    /// A3: where Idemp merged a live duplicate in `∂x(s)`.
    Idemp {
        target: usize,
        path: Vec<Step>,
        duplicate: Regex,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionHit {
    pub kind: Criterion,
    pub state: usize,
    pub state_label: Regex,
    /// The symbol read next, for A2 and A3.
    pub symbol: Option<Symbol>,
    pub detail: HitDetail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterExample {
    #[serde(with = "word_text")]
    pub word: Word,
    /// Shortest word reaching the point where the criterion fires.
    #[serde(with = "word_text")]
    pub prefix: Word,
    pub trees: TreeSeq,
    pub posix: ParseTree,
    pub greedy: ParseTree,
    pub policies_differ: bool,
    pub criterion: CriterionHit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ambiguous,
    Unambiguous,
    RejectedProblematic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolicyDiff {
    #[serde(with = "word_text")]
    pub word: Word,
    pub posix: ParseTree,
    pub greedy: ParseTree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityReport {
    pub regex: Regex,
    pub verdict: Verdict,
    pub hits: Vec<CriterionHit>,
    pub counter_examples: Vec<CounterExample>,
    pub posix_greedy_diff: Vec<PolicyDiff>,
    /// The star over a nullable expression that caused rejection.
    pub rejected_subterm: Option<Regex>,
}

/// Shortest words (ties broken by alphabet order) reaching each state
/// through states with non-empty language; `None` for other states.
pub fn shortest_prefixes(t: &Transducer) -> Vec<Option<Word>> {
    let mut prefix: Vec<Option<Word>> = vec![None; t.len()];
    if is_empty_lang(t.state(t.start())) {
        return prefix;
    }
    prefix[t.start()] = Some(Vec::new());
    let mut queue = VecDeque::from([t.start()]);
    while let Some(q) = queue.pop_front() {
        for &x in t.alphabet() {
            let target = t.transition(q, x).expect("alphabet symbol").target;
            if prefix[target].is_some() || is_empty_lang(t.state(target)) {
                continue;
            }
            let mut w = prefix[q].clone().expect("visited");
            w.push(x);
            prefix[target] = Some(w);
            queue.push_back(target);
        }
    }
    prefix
}

/// States reachable from the start along states whose language is
/// non-empty, the state itself included.
pub fn realizable_states(t: &Transducer) -> BTreeSet<usize> {
    shortest_prefixes(t)
        .iter()
        .enumerate()
        .filter_map(|(q, p)| p.as_ref().map(|_| q))
        .collect()
}

/// Evaluates A1, A2 and A3 on every realizable state, in state order.
pub fn detect(t: &Transducer) -> Result<Vec<CriterionHit>, AnalysisError> {
    reject_problematic(t.state(t.start()))?;
    let mut hits = Vec::new();
    for q in realizable_states(t) {
        let s = t.state(q);
        let count = count_eps(s);
        if t.is_final(q) && count > 1 {
            hits.push(CriterionHit {
                kind: Criterion::A1,
                state: q,
                state_label: s.clone(),
                symbol: None,
                detail: HitDetail::EmptyTrees { count },
            });
        }
        let mut sites = Vec::new();
        concat_sites(s, &mut Vec::new(), &mut sites);
        for &x in t.alphabet() {
            for path in &sites {
                let Some(Regex::Cat(_, t2)) = subterm_at(s, path) else {
                    unreachable!("site paths point at concatenations")
                };
                if !is_empty_lang(&deriv(t2, x)) {
                    hits.push(CriterionHit {
                        kind: Criterion::A2,
                        state: q,
                        state_label: s.clone(),
                        symbol: Some(x),
                        detail: HitDetail::Concatenation {
                            path: path.clone(),
                            subterm: subterm_at(s, path).expect("site").clone(),
                        },
                    });
                }
            }
            let tr = t.transition(q, x).expect("alphabet symbol");
            if is_empty_lang(t.state(tr.target)) {
                continue;
            }
            if let Some(site) = tr.idemp_sites.iter().find(|site| site.live) {
                hits.push(CriterionHit {
                    kind: Criterion::A3,
                    state: q,
                    state_label: s.clone(),
                    symbol: Some(x),
                    detail: HitDetail::Idemp {
                        target: tr.target,
                        path: site.path.clone(),
                        duplicate: site.element.clone(),
                    },
                });
            }
        }
    }
    hits.sort_by_key(|h| (h.state, h.kind, h.symbol));
    Ok(hits)
}

fn reject_problematic(r: &Regex) -> Result<(), AnalysisError> {
    match problematic_subterm(r) {
        Some(s) => Err(AnalysisError::Problematic {
            subterm: print_regex(s),
        }),
        None => Ok(()),
    }
}

/// Collects the paths of concatenations `t1·t2` with more than one empty
/// tree for `t1`, at positions a derivative can reach with the rest of the
/// expression still matchable.
fn concat_sites(r: &Regex, path: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
    fn visit(step: Step, child: &Regex, path: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
        path.push(step);
        concat_sites(child, path, out);
        path.pop();
    }
    match r {
        Regex::Phi | Regex::Eps | Regex::Sym(_) => {}
        Regex::Star(a) => visit(Step::Body, a, path, out),
        Regex::Alt(a, b) => {
            visit(Step::Left, a, path, out);
            visit(Step::Right, b, path, out);
        }
        Regex::Cat(a, b) => {
            if count_eps(a) > 1 {
                out.push(path.clone());
            }
            if !is_empty_lang(b) {
                visit(Step::Left, a, path, out);
            }
            if nullable(a) {
                visit(Step::Right, b, path, out);
            }
        }
    }
}

/// Shortest word of `L(r)`, ties broken by alphabet order.
pub fn shortest_word(r: &Regex) -> Option<Word> {
    match r {
        Regex::Phi => None,
        Regex::Eps | Regex::Star(_) => Some(Vec::new()),
        Regex::Sym(x) => Some(vec![*x]),
        Regex::Cat(a, b) => {
            let mut w = shortest_word(a)?;
            w.extend(shortest_word(b)?);
            Some(w)
        }
        Regex::Alt(a, b) => match (shortest_word(a), shortest_word(b)) {
            (Some(u), Some(v)) => Some(if length_lex(&v, &u) == Ordering::Less {
                v
            } else {
                u
            }),
            (u, v) => u.or(v),
        },
    }
}

fn length_lex(u: &[Symbol], v: &[Symbol]) -> Ordering {
    u.len().cmp(&v.len()).then_with(|| u.cmp(v))
}

/// Restricts `r` to the words whose parse passes through the node at
/// `path`, which is replaced by `site`. Alternation siblings are dropped,
/// concatenation siblings kept, nullable left operands skipped.
fn focus(r: &Regex, path: &[Step], site: Regex, skip_nullable_left: bool) -> Regex {
    let Some((step, rest)) = path.split_first() else {
        return site;
    };
    match (r, step) {
        (Regex::Alt(a, _), Step::Left) => focus(a, rest, site, skip_nullable_left),
        (Regex::Alt(_, b), Step::Right) => focus(b, rest, site, skip_nullable_left),
        (Regex::Cat(a, b), Step::Left) => Regex::Cat(
            Arc::new(focus(a, rest, site, skip_nullable_left)),
            b.clone(),
        ),
        (Regex::Cat(a, b), Step::Right) => {
            let inner = focus(b, rest, site, skip_nullable_left);
            if skip_nullable_left {
                inner
            } else {
                Regex::Cat(a.clone(), Arc::new(inner))
            }
        }
        (Regex::Star(a), Step::Body) => Regex::Cat(
            Arc::new(focus(a, rest, site, skip_nullable_left)),
            Arc::new(r.clone()),
        ),
        _ => unreachable!("path does not fit the expression"),
    }
}

/// The prefix reaching the hit and the full witness word.
fn witness(t: &Transducer, prefixes: &[Option<Word>], hit: &CriterionHit) -> Option<(Word, Word)> {
    let base = prefixes[hit.state].clone()?;
    let s = t.state(hit.state);
    match &hit.detail {
        HitDetail::EmptyTrees { .. } => Some((base.clone(), base)),
        HitDetail::Concatenation { path, .. } => {
            let x = hit.symbol?;
            let Some(Regex::Cat(_, t2)) = subterm_at(s, path) else {
                return None;
            };
            let site = Regex::Cat(Arc::new(Regex::Sym(x)), Arc::new(deriv(t2, x)));
            let suffix = shortest_word(&focus(s, path, site, true))?;
            let mut prefix = base.clone();
            prefix.push(x);
            let mut word = base;
            word.extend(suffix);
            Some((prefix, word))
        }
        HitDetail::Idemp {
            path, duplicate, ..
        } => {
            let x = hit.symbol?;
            let d = deriv(s, x);
            let suffix = shortest_word(&focus(&d, path, duplicate.clone(), false))?;
            let mut prefix = base;
            prefix.push(x);
            let mut word = prefix.clone();
            word.extend(suffix);
            Some((prefix, word))
        }
    }
}

/// One witness per hit, deduplicated by word, shortest first and then in
/// alphabet order. Builds the Greedy transducer from the start expression.
pub fn counter_examples(
    t: &Transducer,
    hits: &[CriterionHit],
) -> Result<Vec<CounterExample>, AnalysisError> {
    let greedy = build_with_limit(
        t.state(t.start()),
        Mode::Greedy,
        t.len().max(DEFAULT_MAX_STATES),
    )?;
    counter_examples_with(t, &greedy, hits)
}

/// [`counter_examples`] with an already built Greedy transducer.
pub fn counter_examples_with(
    posix: &Transducer,
    greedy: &Transducer,
    hits: &[CriterionHit],
) -> Result<Vec<CounterExample>, AnalysisError> {
    let prefixes = shortest_prefixes(posix);
    let mut out: Vec<CounterExample> = Vec::new();
    for hit in hits {
        let Some((prefix, word)) = witness(posix, &prefixes, hit) else {
            continue;
        };
        if out.iter().any(|c| c.word == word) {
            continue;
        }
        let trees = posix.parse_all(&word)?;
        if trees.len() < 2 {
            continue;
        }
        let first_posix = posix.parse_first(&word)?.expect("matching word");
        let first_greedy = greedy.parse_first(&word)?.expect("matching word");
        out.push(CounterExample {
            policies_differ: first_posix != first_greedy,
            word,
            prefix,
            trees,
            posix: first_posix,
            greedy: first_greedy,
            criterion: hit.clone(),
        });
    }
    out.sort_by(|a, b| length_lex(&a.word, &b.word));
    Ok(out)
}

/// Full pipeline: transducers in both modes, criteria, witnesses and the
/// words on which the POSIX and Greedy parses differ.
pub fn diff_policies(r: &Regex) -> Result<AmbiguityReport, AnalysisError> {
    diff_policies_with_limit(r, DEFAULT_MAX_STATES)
}

pub fn diff_policies_with_limit(
    r: &Regex,
    max_states: usize,
) -> Result<AmbiguityReport, AnalysisError> {
    if let Some(s) = problematic_subterm(r) {
        return Ok(AmbiguityReport {
            regex: r.clone(),
            verdict: Verdict::RejectedProblematic,
            hits: Vec::new(),
            counter_examples: Vec::new(),
            posix_greedy_diff: Vec::new(),
            rejected_subterm: Some(s.clone()),
        });
    }
    let posix = build_with_limit(r, Mode::Posix, max_states)?;
    let greedy = build_with_limit(r, Mode::Greedy, max_states)?;
    let hits = detect(&posix)?;
    let counter_examples = counter_examples_with(&posix, &greedy, &hits)?;
    let posix_greedy_diff = counter_examples
        .iter()
        .filter(|c| c.policies_differ)
        .map(|c| PolicyDiff {
            word: c.word.clone(),
            posix: c.posix.clone(),
            greedy: c.greedy.clone(),
        })
        .collect();
    Ok(AmbiguityReport {
        regex: r.clone(),
        verdict: if hits.is_empty() {
            Verdict::Unambiguous
        } else {
            Verdict::Ambiguous
        },
        hits,
        counter_examples,
        posix_greedy_diff,
        rejected_subterm: None,
    })
}

mod word_text {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::syntax::{parse_word, word_to_string, Symbol};

    pub fn serialize<S: Serializer>(w: &[Symbol], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&word_to_string(w))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Symbol>, D::Error> {
        let text = String::deserialize(d)?;
        parse_word(&text).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fst::build;
    use crate::syntax::{parse_regex, parse_word, word_to_string};

    fn re(s: &str) -> Regex {
        parse_regex(s).unwrap()
    }
    fn kinds(hits: &[CriterionHit]) -> BTreeSet<Criterion> {
        hits.iter().map(|h| h.kind).collect()
    }

    #[test]
    fn realizable() {
        let phi = build(&Regex::Phi, Mode::Posix).unwrap();
        assert!(realizable_states(&phi).is_empty());
        let t = build(&re("(x|y)*"), Mode::Posix).unwrap();
        let expected: BTreeSet<_> = (0..t.len()).filter(|&q| q != t.sink()).collect();
        assert_eq!(realizable_states(&t), expected);
    }

    #[test]
    fn empty_tree_ambiguity() {
        let t = build(&re("(x|xy)(y|~)"), Mode::Posix).unwrap();
        let hits = detect(&t).unwrap();
        assert!(hits
            .iter()
            .any(|h| h.kind == Criterion::A1 && t.is_final(h.state)));
        let ces = counter_examples(&t, &hits).unwrap();
        assert_eq!(word_to_string(&ces[0].word), "xy");
        assert_eq!(ces[0].trees.len(), 2);
    }

    #[test]
    fn concatenation_and_merge_ambiguity() {
        let report = diff_policies(&re("(xx*|yx|xyx)*y")).unwrap();
        assert_eq!(report.verdict, Verdict::Ambiguous);
        let k = kinds(&report.hits);
        assert!(k.contains(&Criterion::A2) && k.contains(&Criterion::A3));
        assert!(!k.contains(&Criterion::A1));
        let a3 = report
            .counter_examples
            .iter()
            .find(|c| word_to_string(&c.word) == "xyxy")
            .unwrap();
        assert_eq!(a3.criterion.kind, Criterion::A3);
        assert_eq!(word_to_string(&a3.prefix), "xy");
        assert_eq!(a3.trees.len(), 2);
        let diff = report
            .posix_greedy_diff
            .iter()
            .find(|d| d.word == parse_word("xyxy").unwrap())
            .unwrap();
        assert_eq!(diff.posix, "([R (R (x,(y,x)))],y)".parse().unwrap());
        assert_ne!(diff.greedy, diff.posix);
    }

    #[test]
    fn unambiguous_and_duplicate() {
        let report = diff_policies(&re("x|y")).unwrap();
        assert_eq!(report.verdict, Verdict::Unambiguous);
        assert!(report.hits.is_empty() && report.posix_greedy_diff.is_empty());

        let report = diff_policies(&re("(x|x)")).unwrap();
        assert_eq!(report.verdict, Verdict::Ambiguous);
        let ce = &report.counter_examples[0];
        assert_eq!(word_to_string(&ce.word), "x");
        let l: ParseTree = "L x".parse().unwrap();
        let r: ParseTree = "R x".parse().unwrap();
        assert_eq!(ce.trees, vec![l.clone(), r]);
        assert_eq!((ce.posix.clone(), ce.greedy.clone()), (l.clone(), l));
        assert!(report.posix_greedy_diff.is_empty());
    }

    #[test]
    fn problematic_is_rejected() {
        let report = diff_policies(&re("~*")).unwrap();
        assert_eq!(report.verdict, Verdict::RejectedProblematic);
        assert_eq!(report.rejected_subterm, Some(re("~*")));
        let t = build(&re("x(~|y)*"), Mode::Posix).unwrap();
        assert!(matches!(detect(&t), Err(AnalysisError::Problematic { .. })));
    }

    #[test]
    fn star_bodies_are_scanned() {
        let report = diff_policies(&re("((~|~)x)*")).unwrap();
        assert_eq!(report.verdict, Verdict::Ambiguous);
        assert_eq!(word_to_string(&report.counter_examples[0].word), "x");
    }

    #[test]
    fn shortest_words() {
        assert_eq!(shortest_word(&Regex::Phi), None);
        assert_eq!(
            shortest_word(&re("yx|xy|z")).unwrap(),
            parse_word("z").unwrap()
        );
        assert_eq!(
            shortest_word(&re("yx|xy")).unwrap(),
            parse_word("xy").unwrap()
        );
        assert_eq!(shortest_word(&re("x*y")).unwrap(), parse_word("y").unwrap());
    }

    #[test]
    fn report_round_trips() {
        let report = diff_policies(&re("(xx*|yx|xyx)*y")).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: AmbiguityReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, report);
    }
}
