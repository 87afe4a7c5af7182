//! Graphviz export of the transducer with ambiguity annotations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use derivamb::ambiguity::{detect, Criterion};
use derivamb::fst::{build_with_limit, BuildError, Mode, DEFAULT_MAX_STATES};
use derivamb::syntax::{is_problematic, print_regex, Regex, Symbol};

/// Labels longer than this are cut and the full text moved to the tooltip.
pub const LABEL_LIMIT: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DotOptions {
    pub policy: Mode,
    pub show_sink: bool,
    pub max_states: usize,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions {
            policy: Mode::Posix,
            show_sink: false,
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn truncate(label: &str) -> String {
    if label.chars().count() <= LABEL_LIMIT {
        return label.to_string();
    }
    let mut cut: String = label.chars().take(LABEL_LIMIT - 1).collect();
    cut.push('…');
    cut
}

/// Nodes are numbered in discovery order. Final states are double circles,
/// states with an A1 hit are filled grey, and transitions with A2 or A3
/// hits are dotted and labeled `x / A2`. Annotations are computed on the
/// POSIX transducer and only drawn for it.
pub fn render_dot(r: &Regex, options: &DotOptions) -> Result<String, BuildError> {
    let t = build_with_limit(r, options.policy, options.max_states)?;
    let mut grey = BTreeSet::new();
    let mut marks: BTreeMap<(usize, Symbol), BTreeSet<Criterion>> = BTreeMap::new();
    if options.policy == Mode::Posix && !is_problematic(r) {
        for h in detect(&t).expect("non-problematic input") {
            match (h.kind, h.symbol) {
                (Criterion::A1, _) => {
                    grey.insert(h.state);
                }
                (kind, Some(x)) => {
                    marks.entry((h.state, x)).or_default().insert(kind);
                }
                (_, None) => {}
            }
        }
    }
    let hidden = |q: usize| q == t.sink() && !options.show_sink && q != t.start();

    let mut out = String::new();
    out.push_str("digraph fst {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=circle];\n");
    out.push_str("  start [shape=point];\n");
    writeln!(out, "  start -> {};", t.start()).unwrap();
    for (q, s) in t.states().iter().enumerate() {
        if hidden(q) {
            continue;
        }
        let full = print_regex(s);
        let mut attrs = vec![
            format!("label=\"{}: {}\"", q, escape(&truncate(&full))),
            format!("tooltip=\"{}\"", escape(&full)),
        ];
        if t.is_final(q) {
            attrs.push("shape=doublecircle".to_string());
        }
        if grey.contains(&q) {
            attrs.push("style=filled".to_string());
            attrs.push("fillcolor=grey".to_string());
        }
        writeln!(out, "  {} [{}];", q, attrs.join(", ")).unwrap();
    }
    for (q, x, tr) in t.transitions() {
        if hidden(q) || hidden(tr.target) {
            continue;
        }
        if q == t.sink() && tr.target == t.sink() && !options.show_sink {
            continue;
        }
        let kinds = marks.get(&(q, x));
        let label = match kinds {
            Some(k) => format!(
                "{x} / {}",
                k.iter()
                    .map(|c| format!("{c:?}"))
                    .collect::<Vec<_>>()
                    .join(",")
            ),
            None => x.to_string(),
        };
        let mut attrs = vec![
            format!("label=\"{}\"", escape(&label)),
            format!("tooltip=\"{}\"", escape(&tr.back.to_string())),
        ];
        if kinds.is_some() {
            attrs.push("style=dotted".to_string());
        }
        writeln!(out, "  {} -> {} [{}];", q, tr.target, attrs.join(", ")).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
