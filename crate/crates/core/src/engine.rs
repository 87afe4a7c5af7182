//! Direct parse-tree construction by derivatives: build the empty trees of
//! the final derivative and inject the consumed symbols back one at a time.
//!
//! This is the reference semantics for the transducer in [`crate::fst`]. It
//! re-derives on every call and the raw derivatives grow with the word, so
//! it is meant for short inputs.

use thiserror::Error;

use crate::deriv::deriv;
use crate::parsetree::{all_eps, dedup_trees, first_eps, ParseTree, TreeSeq};
use crate::syntax::{nullable, print_regex, Regex, Symbol};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("tree `{tree}` does not fit the derivative of `{regex}`")]
    Shape { regex: String, tree: String },
    #[error("tree `{tree}` does not fit the shape expected by the {rule} transformer")]
    RuleShape { rule: &'static str, tree: String },
    #[error("undefined transformer invoked on `{tree}`; the empty language has no parse trees")]
    Undefined { tree: String },
}

fn shape(r: &Regex, v: &ParseTree) -> TransformError {
    TransformError::Shape {
        regex: print_regex(r),
        tree: v.to_string(),
    }
}

/// Maps a parse tree of `deriv(r, x)` to the parse trees of `r` obtained by
/// re-inserting `x`.
pub fn inject(r: &Regex, x: Symbol, v: ParseTree) -> Result<TreeSeq, TransformError> {
    match r {
        Regex::Phi | Regex::Eps => Ok(Vec::new()),
        Regex::Sym(y) if *y != x => Ok(Vec::new()),
        Regex::Sym(_) => match v {
            ParseTree::Unit => Ok(vec![ParseTree::Lit(x)]),
            v => Err(shape(r, &v)),
        },
        Regex::Star(body) => match v {
            ParseTree::Pair(head, rest) => match *rest {
                ParseTree::Seq(mut tail) => {
                    let mut heads = inject(body, x, *head)?;
                    if heads.len() == 1 {
                        tail.push_front(heads.pop().expect("one element"));
                        return Ok(vec![ParseTree::Seq(tail)]);
                    }
                    Ok(heads
                        .into_iter()
                        .map(|h| {
                            let mut items = tail.clone();
                            items.push_front(h);
                            ParseTree::Seq(items)
                        })
                        .collect())
                }
                rest => Err(shape(r, &ParseTree::Pair(head, Box::new(rest)))),
            },
            v => Err(shape(r, &v)),
        },
        Regex::Cat(a, b) => {
            let left_case = |v1: ParseTree, v2: ParseTree| -> Result<TreeSeq, TransformError> {
                let heads = inject(a, x, v1)?;
                Ok(pair_each(heads, v2))
            };
            if nullable(a) {
                match v {
                    ParseTree::InL(inner) => match *inner {
                        ParseTree::Pair(v1, v2) => left_case(*v1, *v2),
                        other => Err(shape(r, &ParseTree::InL(Box::new(other)))),
                    },
                    ParseTree::InR(v2) => {
                        let seeds = all_eps(a);
                        let mut tails = inject(b, x, *v2)?;
                        if seeds.len() == 1 && tails.len() == 1 {
                            let seed = seeds.into_iter().next().expect("one seed");
                            let tail = tails.pop().expect("one tail");
                            return Ok(vec![ParseTree::pair(seed, tail)]);
                        }
                        let mut out = Vec::with_capacity(seeds.len() * tails.len());
                        for e in &seeds {
                            for t in &tails {
                                out.push(ParseTree::pair(e.clone(), t.clone()));
                            }
                        }
                        Ok(out)
                    }
                    v => Err(shape(r, &v)),
                }
            } else {
                match v {
                    ParseTree::Pair(v1, v2) => left_case(*v1, *v2),
                    v => Err(shape(r, &v)),
                }
            }
        }
        Regex::Alt(a, b) => match v {
            ParseTree::InL(v1) => Ok(inject(a, x, *v1)?.into_iter().map(ParseTree::inl).collect()),
            ParseTree::InR(v2) => Ok(inject(b, x, *v2)?.into_iter().map(ParseTree::inr).collect()),
            v => Err(shape(r, &v)),
        },
    }
}

/// First element of [`inject`], computing nothing else. Rebuilds the tree in
/// place, reusing its boxes.
pub fn inject_first(
    r: &Regex,
    x: Symbol,
    v: ParseTree,
) -> Result<Option<ParseTree>, TransformError> {
    match r {
        Regex::Phi | Regex::Eps => Ok(None),
        Regex::Sym(y) if *y != x => Ok(None),
        Regex::Sym(_) => match v {
            ParseTree::Unit => Ok(Some(ParseTree::Lit(x))),
            v => Err(shape(r, &v)),
        },
        Regex::Star(body) => match v {
            ParseTree::Pair(head, rest) => match *rest {
                ParseTree::Seq(mut tail) => Ok(inject_first(body, x, *head)?.map(|h| {
                    tail.push_front(h);
                    ParseTree::Seq(tail)
                })),
                rest => Err(shape(r, &ParseTree::Pair(head, Box::new(rest)))),
            },
            v => Err(shape(r, &v)),
        },
        Regex::Cat(a, b) => {
            let nullable_a = nullable(a);
            match v {
                ParseTree::InL(inner) if nullable_a => match *inner {
                    ParseTree::Pair(v1, v2) => inject_first_left(a, x, v1, v2),
                    other => Err(shape(r, &ParseTree::InL(Box::new(other)))),
                },
                ParseTree::InR(mut v2) if nullable_a => {
                    let Some(seed) = first_eps(a) else {
                        return Ok(None);
                    };
                    let tree = std::mem::replace(&mut *v2, ParseTree::Unit);
                    Ok(inject_first(b, x, tree)?.map(|t| {
                        *v2 = t;
                        ParseTree::Pair(Box::new(seed), v2)
                    }))
                }
                ParseTree::Pair(v1, v2) if !nullable_a => inject_first_left(a, x, v1, v2),
                v => Err(shape(r, &v)),
            }
        }
        Regex::Alt(a, b) => match v {
            ParseTree::InL(mut v1) => {
                let tree = std::mem::replace(&mut *v1, ParseTree::Unit);
                Ok(inject_first(a, x, tree)?.map(|t| {
                    *v1 = t;
                    ParseTree::InL(v1)
                }))
            }
            ParseTree::InR(mut v2) => {
                let tree = std::mem::replace(&mut *v2, ParseTree::Unit);
                Ok(inject_first(b, x, tree)?.map(|t| {
                    *v2 = t;
                    ParseTree::InR(v2)
                }))
            }
            v => Err(shape(r, &v)),
        },
    }
}

fn inject_first_left(
    a: &Regex,
    x: Symbol,
    mut v1: Box<ParseTree>,
    v2: Box<ParseTree>,
) -> Result<Option<ParseTree>, TransformError> {
    let tree = std::mem::replace(&mut *v1, ParseTree::Unit);
    Ok(inject_first(a, x, tree)?.map(|h| {
        *v1 = h;
        ParseTree::Pair(v1, v2)
    }))
}

fn pair_each(heads: TreeSeq, right: ParseTree) -> TreeSeq {
    let n = heads.len();
    let mut right = Some(right);
    heads
        .into_iter()
        .enumerate()
        .map(|(i, h)| {
            let v2 = if i + 1 == n {
                right.take().expect("moved once")
            } else {
                right.clone().expect("still present")
            };
            ParseTree::pair(h, v2)
        })
        .collect()
}

/// All parse trees of `w` against `r`, highest priority first.
///
/// Complete for non-problematic `r`; for problematic input the result is a
/// finite, sound subset. Always terminates since it recurses on the word.
pub fn all_parse(r: &Regex, w: &[Symbol]) -> TreeSeq {
    let mut chain = Vec::with_capacity(w.len() + 1);
    chain.push(r.clone());
    for &x in w {
        let next = deriv(chain.last().expect("non-empty"), x);
        chain.push(next);
    }
    let mut trees = all_eps(chain.last().expect("non-empty"));
    for (i, &x) in w.iter().enumerate().rev() {
        let mut next = Vec::new();
        for v in trees {
            next.extend(inject(&chain[i], x, v).expect("derivative trees fit the injection"));
        }
        trees = dedup_trees(next);
    }
    trees
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_regex, parse_word};

    fn t(s: &str) -> ParseTree {
        s.parse().unwrap()
    }
    fn sym(c: char) -> Symbol {
        Symbol::new(c).unwrap()
    }

    #[test]
    fn injects_into_symbol_star() {
        let r = parse_regex("(x|y)*").unwrap();
        let d1 = deriv(&r, sym('x'));
        let got = inject(&d1, sym('y'), t("R (R (),[])")).unwrap();
        assert_eq!(got, vec![t("(L (),[R y])")]);
        assert_eq!(
            inject(&r, sym('x'), got[0].clone()).unwrap(),
            vec![t("[L x,R y]")]
        );
    }

    #[test]
    fn injection_clauses() {
        assert_eq!(
            inject(&Regex::sym('x'), sym('x'), ParseTree::Unit).unwrap(),
            vec![t("x")]
        );
        let r = Regex::cat(Regex::alt(Regex::Eps, Regex::Eps), Regex::sym('x'));
        assert_eq!(
            inject(&r, sym('x'), t("R ()")).unwrap(),
            vec![t("(L (),x)"), t("(R (),x)")]
        );
        assert_eq!(
            inject_first(&r, sym('x'), t("R ()")).unwrap(),
            Some(t("(L (),x)"))
        );
        assert!(inject(&Regex::sym('x'), sym('x'), t("L ()")).is_err());
        assert!(inject(&r, sym('x'), t("(x,x)")).is_err());
    }

    #[test]
    fn two_trees_for_overlapping_alternatives() {
        let r = parse_regex("(xy|x|y)*").unwrap();
        let trees = all_parse(&r, &parse_word("xy").unwrap());
        assert_eq!(trees, vec![t("[L (x,y)]"), t("[R (L x),R (R y)]")]);
        assert_eq!(all_parse(&r, &[]), all_eps(&r));
        assert!(all_parse(&Regex::sym('x'), &parse_word("y").unwrap()).is_empty());
    }

    #[test]
    fn optional_suffix_trees() {
        let r = parse_regex("(x|xy)(y|~)").unwrap();
        let trees = all_parse(&r, &parse_word("xy").unwrap());
        assert_eq!(trees, vec![t("(R (x,y),R ())"), t("(L x,L y)")]);
    }

    #[test]
    fn problematic_input_terminates() {
        let r = parse_regex("(~|x)*").unwrap();
        let trees = all_parse(&r, &parse_word("xx").unwrap());
        assert!(!trees.is_empty());
    }
}
