//! Similarity rewriting with parse-tree transformers.
//!
//! Every rewrite `r ⇝ s` carries a [`Transformer`] mapping parse trees of `s`
//! back to parse trees of `r`. Transformers are plain data built from the
//! per-rule functions, so they can be compared, printed and applied lazily.

use std::fmt;
use std::sync::Arc;

use crate::engine::{inject, inject_first, TransformError};
use crate::parsetree::{dedup_trees, ParseTree, TreeSeq};
use crate::syntax::{is_empty_lang, Regex, Step, Symbol};

/// A parse-tree transformer. Applied to a tree of the rewritten (target)
/// expression it yields trees of the source expression, highest priority
/// first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Transformer {
    Identity,
    /// Applied left to right: the output of each stage feeds the next.
    Chain(Vec<Transformer>),
    /// `r + r ⇝ r`: `u ↦ [L u, R u]`.
    Idemp,
    /// `r1 + r2 ⇝ r2 + r1`: swaps the injections.
    Comm,
    /// `(r1 + r2) + r3 ⇝ r1 + (r2 + r3)`.
    Assoc,
    /// `r1 + (r2 + r3) ⇝ (r1 + r2) + r3`, the inverse of [`Transformer::Assoc`].
    AssocInv,
    /// `r·s ⇝ r·t` given the transformer for `s ⇝ t`.
    CatRight(Box<Transformer>),
    /// `s·r ⇝ t·r` given the transformer for `s ⇝ t`.
    CatLeft(Box<Transformer>),
    /// `r + s ⇝ r + t` given the transformer for `s ⇝ t`.
    AltRight(Box<Transformer>),
    /// `s + r ⇝ t + r` given the transformer for `s ⇝ t`.
    AltLeft(Box<Transformer>),
    /// `(r + s)·t ⇝ r·t + s·t`.
    Dist,
    /// `# + r ⇝ r`: `u ↦ R u`.
    ElimPhiAlt,
    /// `#·r ⇝ #`. The empty language has no trees, so applying this is an
    /// internal error.
    ElimPhiCat,
    /// Injection of `symbol` into trees of `deriv(source, symbol)`.
    Inject {
        source: Arc<Regex>,
        symbol: Symbol,
    },
}

impl Transformer {
    fn ctx(wrap: fn(Box<Transformer>) -> Transformer, inner: Transformer) -> Transformer {
        if inner == Transformer::Identity {
            Transformer::Identity
        } else {
            wrap(Box::new(inner))
        }
    }

    /// Sequential composition in application order, dropping identities.
    pub fn chain(stages: impl IntoIterator<Item = Transformer>) -> Transformer {
        let mut flat = Vec::new();
        for t in stages {
            match t {
                Transformer::Identity => {}
                Transformer::Chain(inner) => flat.extend(inner),
                t => flat.push(t),
            }
        }
        match flat.len() {
            0 => Transformer::Identity,
            1 => flat.pop().expect("one stage"),
            _ => Transformer::Chain(flat),
        }
    }

    pub fn apply(&self, v: ParseTree) -> Result<TreeSeq, TransformError> {
        use ParseTree::{InL, InR, Pair};
        Ok(match self {
            Transformer::Identity => vec![v],
            Transformer::Chain(stages) => {
                let mut current = vec![v];
                for stage in stages {
                    let mut next = Vec::new();
                    for u in current {
                        next.extend(stage.apply(u)?);
                    }
                    current = dedup_trees(next);
                }
                current
            }
            Transformer::Idemp => vec![ParseTree::inl(v.clone()), ParseTree::inr(v)],
            Transformer::CatLeft(f) => match v {
                Pair(ut, ur) => pair_left(f.apply(*ut)?, *ur),
                v => return Err(rule_shape("C2", &v)),
            },
            Transformer::CatRight(f) => match v {
                Pair(ur, ut) => pair_right(*ur, f.apply(*ut)?),
                v => return Err(rule_shape("C1", &v)),
            },
            Transformer::AltLeft(f) => match v {
                InL(ut) => f.apply(*ut)?.into_iter().map(ParseTree::inl).collect(),
                InR(ur) => vec![InR(ur)],
                v => return Err(rule_shape("C4", &v)),
            },
            Transformer::AltRight(f) => match v {
                InL(ur) => vec![InL(ur)],
                InR(ut) => f.apply(*ut)?.into_iter().map(ParseTree::inr).collect(),
                v => return Err(rule_shape("C3", &v)),
            },
            Transformer::Inject { source, symbol } => inject(source, *symbol, v)?,
            single => vec![single.rearrange(v)?],
        })
    }

    /// Head of [`Transformer::apply`] without building the other results.
    /// Rebuilds the tree in place, reusing its boxes.
    pub fn apply_first(&self, v: ParseTree) -> Result<Option<ParseTree>, TransformError> {
        use ParseTree::{InL, InR, Pair};
        match self {
            Transformer::Identity => Ok(Some(v)),
            Transformer::Chain(stages) => {
                let mut current = v;
                for stage in stages {
                    match stage.apply_first(current)? {
                        Some(u) => current = u,
                        None => return Ok(None),
                    }
                }
                Ok(Some(current))
            }
            Transformer::Idemp => Ok(Some(ParseTree::inl(v))),
            Transformer::CatLeft(f) => match v {
                Pair(ut, ur) => in_place(f, ut, |ut| Pair(ut, ur)),
                v => Err(rule_shape("C2", &v)),
            },
            Transformer::CatRight(f) => match v {
                Pair(ur, ut) => in_place(f, ut, |ut| Pair(ur, ut)),
                v => Err(rule_shape("C1", &v)),
            },
            Transformer::AltLeft(f) => match v {
                InL(ut) => in_place(f, ut, InL),
                v @ InR(_) => Ok(Some(v)),
                v => Err(rule_shape("C4", &v)),
            },
            Transformer::AltRight(f) => match v {
                v @ InL(_) => Ok(Some(v)),
                InR(ut) => in_place(f, ut, InR),
                v => Err(rule_shape("C3", &v)),
            },
            Transformer::Inject { source, symbol } => inject_first(source, *symbol, v),
            single => single.rearrange(v).map(Some),
        }
    }

    /// The rules that map each tree to exactly one tree.
    fn rearrange(&self, v: ParseTree) -> Result<ParseTree, TransformError> {
        use ParseTree::{InL, InR, Pair};
        Ok(match self {
            Transformer::Comm => match v {
                InL(u) => InR(u),
                InR(u) => InL(u),
                v => return Err(rule_shape("Comm", &v)),
            },
            Transformer::Assoc => match v {
                InL(u) => ParseTree::inl(InL(u)),
                InR(inner) => match *inner {
                    InL(u) => ParseTree::inl(InR(u)),
                    InR(u) => InR(u),
                    other => return Err(rule_shape("Assoc", &InR(Box::new(other)))),
                },
                v => return Err(rule_shape("Assoc", &v)),
            },
            Transformer::AssocInv => match v {
                InL(inner) => match *inner {
                    InL(u) => InL(u),
                    InR(u) => ParseTree::inr(InL(u)),
                    other => return Err(rule_shape("AssocInv", &InL(Box::new(other)))),
                },
                InR(u) => ParseTree::inr(InR(u)),
                v => return Err(rule_shape("AssocInv", &v)),
            },
            Transformer::Dist => match v {
                InL(inner) => match *inner {
                    Pair(ur, ut) => Pair(Box::new(InL(ur)), ut),
                    other => return Err(rule_shape("Dist", &InL(Box::new(other)))),
                },
                InR(inner) => match *inner {
                    Pair(us, ut) => Pair(Box::new(InR(us)), ut),
                    other => return Err(rule_shape("Dist", &InR(Box::new(other)))),
                },
                v => return Err(rule_shape("Dist", &v)),
            },
            Transformer::ElimPhiAlt => ParseTree::inr(v),
            Transformer::ElimPhiCat => {
                return Err(TransformError::Undefined {
                    tree: v.to_string(),
                })
            }
            other => unreachable!("{other} is not a single-result rule"),
        })
    }
}

fn rule_shape(rule: &'static str, v: &ParseTree) -> TransformError {
    TransformError::RuleShape {
        rule,
        tree: v.to_string(),
    }
}

/// Applies `f` to the subtree in `slot` and rebuilds the parent around the
/// same box.
fn in_place(
    f: &Transformer,
    mut slot: Box<ParseTree>,
    parent: impl FnOnce(Box<ParseTree>) -> ParseTree,
) -> Result<Option<ParseTree>, TransformError> {
    let tree = std::mem::replace(&mut *slot, ParseTree::Unit);
    Ok(f.apply_first(tree)?.map(|t| {
        *slot = t;
        parent(slot)
    }))
}

/// Applies `t` to `v`, a parse tree of the transformer's target expression.
pub fn apply_transformer(t: &Transformer, v: ParseTree) -> Result<TreeSeq, TransformError> {
    t.apply(v)
}

fn pair_left(lefts: TreeSeq, right: ParseTree) -> TreeSeq {
    match <[ParseTree; 1]>::try_from(lefts) {
        Ok([l]) => vec![ParseTree::pair(l, right)],
        Err(lefts) => lefts
            .into_iter()
            .map(|l| ParseTree::pair(l, right.clone()))
            .collect(),
    }
}

fn pair_right(left: ParseTree, rights: TreeSeq) -> TreeSeq {
    match <[ParseTree; 1]>::try_from(rights) {
        Ok([r]) => vec![ParseTree::pair(left, r)],
        Err(rights) => rights
            .into_iter()
            .map(|r| ParseTree::pair(left.clone(), r))
            .collect(),
    }
}

impl fmt::Display for Transformer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Transformer::Identity => f.write_str("id"),
            Transformer::Chain(stages) => {
                for (i, t) in stages.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ; ")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Transformer::Idemp => f.write_str("Idemp"),
            Transformer::Comm => f.write_str("Comm"),
            Transformer::Assoc => f.write_str("Assoc"),
            Transformer::AssocInv => f.write_str("Assoc⁻¹"),
            Transformer::CatRight(t) => write!(f, "C1({t})"),
            Transformer::CatLeft(t) => write!(f, "C2({t})"),
            Transformer::AltRight(t) => write!(f, "C3({t})"),
            Transformer::AltLeft(t) => write!(f, "C4({t})"),
            Transformer::Dist => f.write_str("Dist"),
            Transformer::ElimPhiAlt => f.write_str("ElimPhi1"),
            Transformer::ElimPhiCat => f.write_str("ElimPhi2"),
            Transformer::Inject { symbol, .. } => write!(f, "inj[{symbol}]"),
        }
    }
}

/// Where rule Idemp removed a duplicate alternative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempSite {
    /// Path from the root of the rewritten expression to the alternation
    /// that held both copies.
    pub path: Vec<Step>,
    /// The duplicated alternative.
    pub element: Regex,
    /// Some parse tree of the whole expression passes through the removed
    /// copy: the alternative is non-empty and no enclosing concatenation has
    /// an empty operand.
    pub live: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteResult {
    pub target: Regex,
    /// Maps trees of `target` to trees of the original expression.
    pub back: Transformer,
    pub used_idemp: bool,
    pub used_elim: bool,
    pub idemp_sites: Vec<IdempSite>,
}

impl RewriteResult {
    /// Rule Idemp fired on a duplicate that actually carries parse trees.
    pub fn live_idemp(&self) -> bool {
        self.idemp_sites.iter().any(|s| s.live)
    }
}

/// Canonical representative under associativity, commutativity and
/// idempotence of `|`: alternations right-nested, later duplicates merged
/// into their first occurrence, other alternatives kept in place. Never
/// rewrites below a star.
pub fn canonicalize(r: &Regex) -> RewriteResult {
    Rewriter::new(false).run(r, Rewriter::canon)
}

/// [`canonicalize`] plus elimination of `#` alternatives and `#·r` factors.
/// The transducer uses this form for its base (POSIX) states.
pub fn canonicalize_pruned(r: &Regex) -> RewriteResult {
    Rewriter::new(true).run(r, Rewriter::canon)
}

/// Normalizes the alternation/left-factor spine of `r` into a sum of
/// distinct summands using Dist, the `#` eliminations and the alternation
/// rules. Right operands of concatenations and star bodies are left alone.
/// For a raw derivative `deriv(s, x)` the target is exactly
/// `sum_of(pderiv(s, x))`.
pub fn pd_normalize(r: &Regex) -> RewriteResult {
    Rewriter::new(true).run(r, Rewriter::spine)
}

struct Rewriter {
    elim_phi: bool,
    used_idemp: bool,
    used_elim: bool,
    sites: Vec<IdempSite>,
    path: Vec<Step>,
}

impl Rewriter {
    fn new(elim_phi: bool) -> Rewriter {
        Rewriter {
            elim_phi,
            used_idemp: false,
            used_elim: false,
            sites: Vec::new(),
            path: Vec::new(),
        }
    }

    fn run(
        mut self,
        r: &Regex,
        pass: fn(&mut Rewriter, &Regex, bool) -> (Regex, Transformer),
    ) -> RewriteResult {
        let (target, back) = pass(&mut self, r, true);
        RewriteResult {
            target,
            back,
            used_idemp: self.used_idemp,
            used_elim: self.used_elim,
            idemp_sites: self.sites,
        }
    }

    fn descend(
        &mut self,
        step: Step,
        r: &Regex,
        live: bool,
        pass: fn(&mut Rewriter, &Regex, bool) -> (Regex, Transformer),
    ) -> (Regex, Transformer) {
        self.path.push(step);
        let out = pass(self, r, live);
        self.path.pop();
        out
    }

    fn canon(&mut self, r: &Regex, live: bool) -> (Regex, Transformer) {
        match r {
            Regex::Phi | Regex::Eps | Regex::Sym(_) | Regex::Star(_) => {
                (r.clone(), Transformer::Identity)
            }
            Regex::Cat(a, b) => {
                let (a2, ta) =
                    self.descend(Step::Left, a, live && !is_empty_lang(b), Rewriter::canon);
                let left = Transformer::ctx(Transformer::CatLeft, ta);
                if self.elim_phi && a2 == Regex::Phi {
                    self.used_elim = true;
                    return (
                        Regex::Phi,
                        Transformer::chain([Transformer::ElimPhiCat, left]),
                    );
                }
                let (b2, tb) =
                    self.descend(Step::Right, b, live && !is_empty_lang(a), Rewriter::canon);
                let right = Transformer::ctx(Transformer::CatRight, tb);
                (cat_of(&a2, a, b2, b), Transformer::chain([left, right]))
            }
            Regex::Alt(a, b) => {
                let (a2, ta) = self.descend(Step::Left, a, live, Rewriter::canon);
                let (b2, tb) = self.descend(Step::Right, b, live, Rewriter::canon);
                let children = Transformer::chain([
                    Transformer::ctx(Transformer::AltLeft, ta),
                    Transformer::ctx(Transformer::AltRight, tb),
                ]);
                let (out, t) = self.merge_alt(a2, b2, live);
                (out, Transformer::chain([t, children]))
            }
        }
    }

    fn spine(&mut self, r: &Regex, live: bool) -> (Regex, Transformer) {
        match r {
            Regex::Phi | Regex::Eps | Regex::Sym(_) | Regex::Star(_) => {
                (r.clone(), Transformer::Identity)
            }
            Regex::Cat(a, t) => {
                let (a2, ta) =
                    self.descend(Step::Left, a, live && !is_empty_lang(t), Rewriter::spine);
                let left = Transformer::ctx(Transformer::CatLeft, ta);
                if a2 == Regex::Phi {
                    self.used_elim = true;
                    return (
                        Regex::Phi,
                        Transformer::chain([Transformer::ElimPhiCat, left]),
                    );
                }
                let (out, dist) = distribute(&a2, t);
                (out, Transformer::chain([dist, left]))
            }
            Regex::Alt(a, b) => {
                let (a2, ta) = self.descend(Step::Left, a, live, Rewriter::spine);
                let (b2, tb) = self.descend(Step::Right, b, live, Rewriter::spine);
                let children = Transformer::chain([
                    Transformer::ctx(Transformer::AltLeft, ta),
                    Transformer::ctx(Transformer::AltRight, tb),
                ]);
                let (out, t) = self.merge_alt(a2, b2, live);
                (out, Transformer::chain([t, children]))
            }
        }
    }

    /// Combines two normalized operands of `|` into one normalized chain.
    /// Returns the back transformer in application order.
    fn merge_alt(&mut self, a: Regex, b: Regex, live: bool) -> (Regex, Transformer) {
        if self.elim_phi {
            if a == Regex::Phi {
                self.used_elim = true;
                return (b, Transformer::ElimPhiAlt);
            }
            if b == Regex::Phi {
                // r + # ⇝ # + r ⇝ r
                self.used_elim = true;
                return (
                    a,
                    Transformer::chain([Transformer::ElimPhiAlt, Transformer::Comm]),
                );
            }
        }
        let (flat, reassoc) = flatten_alt(a, b);
        let mut elems = chain_elems(&flat);
        let mut removals = Vec::new();
        while let Some((i, j)) = first_duplicate(&elems) {
            let element = elems[j].clone();
            self.used_idemp = true;
            self.sites.push(IdempSite {
                path: self.path.clone(),
                live: live && !is_empty_lang(&element),
                element,
            });
            removals.push(remove_duplicate(elems.len(), i, j));
            elems.remove(j);
        }
        if removals.is_empty() {
            return (flat, reassoc);
        }
        // later rewrites are undone first
        removals.reverse();
        let back = Transformer::chain(removals.into_iter().chain([reassoc]));
        (sum_chain(&elems), back)
    }
}

/// Rebuilds a `Cat` reusing the original operand allocation when unchanged.
fn cat_of(a2: &Regex, a: &Arc<Regex>, b2: Regex, b: &Arc<Regex>) -> Regex {
    let left = if a2 == a.as_ref() {
        a.clone()
    } else {
        Arc::new(a2.clone())
    };
    let right = if &b2 == b.as_ref() {
        b.clone()
    } else {
        Arc::new(b2)
    };
    Regex::Cat(left, right)
}

/// `(a1 + A) + b ⇝ a1 + (A + b)` repeatedly, so that the result is one
/// right-nested chain.
fn flatten_alt(a: Regex, b: Regex) -> (Regex, Transformer) {
    match a {
        Regex::Alt(a1, rest) => {
            let (inner, t) = flatten_alt(rest.as_ref().clone(), b);
            (
                Regex::Alt(a1, Arc::new(inner)),
                Transformer::chain([
                    Transformer::ctx(Transformer::AltRight, t),
                    Transformer::Assoc,
                ]),
            )
        }
        a => (Regex::alt(a, b), Transformer::Identity),
    }
}

/// `(e1 + ... + en)·t ⇝ e1·t + ... + en·t` by repeated Dist.
fn distribute(a: &Regex, t: &Arc<Regex>) -> (Regex, Transformer) {
    match a {
        Regex::Alt(e1, rest) => {
            let (inner, ti) = distribute(rest, t);
            (
                Regex::alt(Regex::Cat(e1.clone(), t.clone()), inner),
                Transformer::chain([
                    Transformer::ctx(Transformer::AltRight, ti),
                    Transformer::Dist,
                ]),
            )
        }
        a => (
            Regex::Cat(Arc::new(a.clone()), t.clone()),
            Transformer::Identity,
        ),
    }
}

fn chain_elems(r: &Regex) -> Vec<Regex> {
    let mut out = Vec::new();
    let mut cur = r;
    while let Regex::Alt(a, b) = cur {
        out.push(a.as_ref().clone());
        cur = b;
    }
    out.push(cur.clone());
    out
}

fn sum_chain(elems: &[Regex]) -> Regex {
    let (last, init) = elems.split_last().expect("non-empty chain");
    init.iter()
        .rev()
        .fold(last.clone(), |acc, e| Regex::alt(e.clone(), acc))
}

fn first_duplicate(elems: &[Regex]) -> Option<(usize, usize)> {
    (1..elems.len()).find_map(|j| {
        elems[..j]
            .iter()
            .position(|e| *e == elems[j])
            .map(|i| (i, j))
    })
}

/// Back transformer (application order) for deleting element `j` of a
/// right-nested chain of `len` elements whose element `i < j` is equal to
/// it: Comm/Assoc bubble the later copy next to the earlier one, then Idemp
/// merges them.
fn remove_duplicate(len: usize, i: usize, j: usize) -> Transformer {
    if i > 0 {
        return Transformer::ctx(
            Transformer::AltRight,
            remove_duplicate(len - 1, i - 1, j - 1),
        );
    }
    let bubble = Transformer::ctx(Transformer::AltRight, bubble_to_front(len - 1, j - 1));
    let merge = if len == 2 {
        Transformer::Idemp
    } else {
        // e + (e + rest) ⇝ (e + e) + rest ⇝ e + rest
        Transformer::chain([
            Transformer::AltLeft(Box::new(Transformer::Idemp)),
            Transformer::AssocInv,
        ])
    };
    Transformer::chain([merge, bubble])
}

/// Moves element `k` of a chain of `len` elements to the front.
fn bubble_to_front(len: usize, k: usize) -> Transformer {
    if k == 0 {
        return Transformer::Identity;
    }
    let inner = Transformer::ctx(Transformer::AltRight, bubble_to_front(len - 1, k - 1));
    let swap = if len == 2 {
        Transformer::Comm
    } else {
        // e0 + (e1 + rest) ⇝ (e0 + e1) + rest ⇝ (e1 + e0) + rest ⇝ e1 + (e0 + rest)
        Transformer::chain([
            Transformer::Assoc,
            Transformer::AltLeft(Box::new(Transformer::Comm)),
            Transformer::AssocInv,
        ])
    };
    Transformer::chain([swap, inner])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deriv::{deriv, pderiv, sum_of};
    use crate::parsetree::typecheck;
    use crate::syntax::{parse_regex, print_regex};

    fn re(s: &str) -> Regex {
        parse_regex(s).unwrap()
    }
    fn t(s: &str) -> ParseTree {
        s.parse().unwrap()
    }

    #[test]
    fn assoc_table() {
        let r = re("(a|b)|c");
        let res = canonicalize(&r);
        assert_eq!(res.target, re("a|b|c"));
        assert_eq!(res.back, Transformer::Assoc);
        assert_eq!(res.back.apply(t("L a")).unwrap(), vec![t("L (L a)")]);
        assert_eq!(res.back.apply(t("R (L b)")).unwrap(), vec![t("L (R b)")]);
        assert_eq!(res.back.apply(t("R (R c)")).unwrap(), vec![t("R c")]);
        assert!(!res.used_idemp);
    }

    #[test]
    fn rule_tables() {
        assert_eq!(
            Transformer::Idemp.apply(t("x")).unwrap(),
            vec![t("L x"), t("R x")]
        );
        assert_eq!(Transformer::Identity.apply(t("x")).unwrap(), vec![t("x")]);
        assert_eq!(Transformer::Comm.apply(t("L x")).unwrap(), vec![t("R x")]);
        assert_eq!(
            Transformer::Dist.apply(t("R (y,z)")).unwrap(),
            vec![t("(R y,z)")]
        );
        assert!(matches!(
            Transformer::ElimPhiCat.apply(t("x")),
            Err(TransformError::Undefined { .. })
        ));
        assert!(Transformer::Comm.apply(t("(x,y)")).is_err());
    }

    #[test]
    fn fixpoint_is_identity() {
        let r = re("x(y|z)*|y");
        let res = canonicalize(&r);
        assert_eq!(res.target, r);
        assert_eq!(res.back, Transformer::Identity);
    }

    #[test]
    fn idemp_keeps_first_occurrence() {
        let r = re("(x(xx*|yx|xyx)*)y|(x(xx*|yx|xyx)*)y|~");
        let res = canonicalize(&r);
        assert_eq!(res.target, re("(x(xx*|yx|xyx)*)y|~"));
        assert!(res.used_idemp);
        assert!(res.live_idemp());

        let r = re("a|b|c|b|d|a");
        let res = canonicalize(&r);
        assert_eq!(res.target, re("a|b|c|d"));
        assert_eq!(
            res.back.apply(t("L a")).unwrap(),
            vec![t("L a"), t("R (R (R (R (R a))))")]
        );
        assert_eq!(
            res.back.apply(t("R (L b)")).unwrap(),
            vec![t("R (L b)"), t("R (R (R (L b)))")]
        );
        assert_eq!(
            res.back.apply(t("R (R (R d))")).unwrap(),
            vec![t("R (R (R (R (L d))))")]
        );
        for v in ["L a", "R (L b)", "R (R (L c))", "R (R (R d))"] {
            for u in res.back.apply(t(v)).unwrap() {
                assert!(typecheck(&u, &r), "{u}");
            }
        }
    }

    #[test]
    fn dead_duplicates_are_not_live() {
        let res = canonicalize(&re("(#|#)(x|y)*"));
        assert!(res.used_idemp);
        assert!(!res.live_idemp());
        let res = canonicalize(&re("(x|x)#"));
        assert!(res.used_idemp && !res.live_idemp());
    }

    #[test]
    fn phi_elimination() {
        let res = pd_normalize(&Regex::cat(Regex::Phi, re("x*")));
        assert_eq!(res.target, Regex::Phi);
        let res = pd_normalize(&Regex::alt(Regex::Phi, re("x")));
        assert_eq!(res.target, re("x"));
        assert_eq!(res.back, Transformer::ElimPhiAlt);
        let res = canonicalize_pruned(&re("(~|#)(x|y)*"));
        assert_eq!(res.target, re("~(x|y)*"));
        assert_eq!(
            res.back.apply(t("((),[x])")).unwrap(),
            vec![t("(L (),[x])")]
        );
        // plain canonicalization keeps # alternatives
        assert_eq!(canonicalize(&re("(~|#)(x|y)*")).target, re("(~|#)(x|y)*"));
    }

    #[test]
    fn pd_normal_form_matches_partial_derivatives() {
        let x = Symbol::new('x').unwrap();
        for s in [
            "(x|y)*",
            "(x|xy)(y|~)",
            "(xx*|yx|xyx)*y",
            "x((x|y)|x)",
            "(x|x)*x",
        ] {
            let r = re(s);
            let d = deriv(&r, x);
            assert_eq!(pd_normalize(&d).target, sum_of(&pderiv(&r, x)), "{s}");
        }
        let d = deriv(&re("(x|y)*"), x);
        assert_eq!(print_regex(&pd_normalize(&d).target), "~(x|y)*");
    }

    #[test]
    fn dist_back_transformer() {
        let r = re("(a|b)c");
        let res = pd_normalize(&r);
        assert_eq!(res.target, re("ac|bc"));
        assert_eq!(res.back.apply(t("R (b,c)")).unwrap(), vec![t("(R b,c)")]);
    }

    #[test]
    fn idempotent() {
        for s in [
            "(a|b)|(b|a)",
            "((a|a)|a)b|c",
            "(#|x)|(x|#)",
            "((a|b)|c)((c|b)|a)",
        ] {
            let once = canonicalize_pruned(&re(s)).target;
            let twice = canonicalize_pruned(&once);
            assert_eq!(twice.target, once, "{s}");
            assert_eq!(twice.back, Transformer::Identity);
        }
    }
}
