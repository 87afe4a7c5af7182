//! Line-oriented rendering of ambiguity reports.

use std::fmt::Write;

use derivamb::ambiguity::{AmbiguityReport, CriterionHit, HitDetail, Verdict};
use derivamb::syntax::{path_to_string, print_regex, word_to_string};

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Ambiguous => "ambiguous",
        Verdict::Unambiguous => "unambiguous",
        Verdict::RejectedProblematic => "rejected-problematic",
    }
}

fn quoted_word(w: &[derivamb::Symbol]) -> String {
    if w.is_empty() {
        "\"\"".to_string()
    } else {
        word_to_string(w)
    }
}

fn hit_line(h: &CriterionHit) -> String {
    let on = h.symbol.map(|x| format!(" on {x}")).unwrap_or_default();
    let what = match &h.detail {
        HitDetail::EmptyTrees { count } => format!("final state with {count} empty parse trees"),
        HitDetail::Concatenation { path, subterm } => format!(
            "left factor of `{}` at {} has several empty parse trees",
            print_regex(subterm),
            path_to_string(path)
        ),
        HitDetail::Idemp {
            target,
            path,
            duplicate,
        } => format!(
            "Idemp merged `{}` at {} on the way to state {target}",
            print_regex(duplicate),
            path_to_string(path)
        ),
    };
    format!(
        "  {:?} state {} `{}`{on}: {what}",
        h.kind,
        h.state,
        print_regex(&h.state_label)
    )
}

pub fn render_report(report: &AmbiguityReport) -> String {
    let mut out = String::new();
    writeln!(out, "expression: {}", print_regex(&report.regex)).unwrap();
    writeln!(out, "verdict: {}", verdict_name(report.verdict)).unwrap();
    if let Some(s) = &report.rejected_subterm {
        writeln!(
            out,
            "offending subterm: {} (star over a nullable expression)",
            print_regex(s)
        )
        .unwrap();
        return out;
    }
    if report.hits.is_empty() {
        return out;
    }
    writeln!(out, "hits:").unwrap();
    for h in &report.hits {
        writeln!(out, "{}", hit_line(h)).unwrap();
    }
    writeln!(out, "counter-examples:").unwrap();
    for c in &report.counter_examples {
        writeln!(
            out,
            "  {} (prefix {}, {:?}): {} parse trees",
            quoted_word(&c.word),
            quoted_word(&c.prefix),
            c.criterion.kind,
            c.trees.len()
        )
        .unwrap();
        writeln!(out, "    posix:  {}", c.posix).unwrap();
        writeln!(out, "    greedy: {}", c.greedy).unwrap();
        writeln!(
            out,
            "    policies differ: {}",
            if c.policies_differ { "yes" } else { "no" }
        )
        .unwrap();
    }
    out
}
