//! Command-line front end: parse trees, POSIX/Greedy matching, ambiguity
//! reports and DOT export.
//!
//! Every command returns an [`Output`] instead of printing, so the binary is
//! a thin wrapper and tests can inspect stdout, stderr and the exit code.

mod dot;
mod report;

use std::ffi::OsString;

use clap::{Parser, Subcommand, ValueEnum};
use derivamb::ambiguity::{diff_policies_with_limit, Verdict};
use derivamb::fst::{build_with_limit, Mode, DEFAULT_MAX_STATES};
use derivamb::syntax::{
    parse_regex, parse_word, print_regex, problematic_subterm, word_to_string, Regex, Word,
};
use derivamb::{all_parse, oracle, ParseTree};
use serde::Serialize;

pub use dot::{render_dot, DotOptions};
pub use report::render_report;

/// Longest word the `oracle` command accepts.
pub const ORACLE_MAX_WORD: usize = 12;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn ok(code: i32, stdout: String) -> Output {
        Output {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(message: impl std::fmt::Display) -> Output {
        Output {
            code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }

    fn warn(mut self, warning: Option<String>) -> Output {
        if let Some(w) = warning {
            self.stderr.insert_str(0, &format!("warning: {w}\n"));
        }
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Policy {
    #[default]
    Posix,
    Greedy,
}

impl From<Policy> for Mode {
    fn from(p: Policy) -> Mode {
        match p {
            Policy::Posix => Mode::Posix,
            Policy::Greedy => Mode::Greedy,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "derivamb",
    version,
    about = "Parse trees and ambiguity diagnosis for regular expressions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Disambiguation policy for `match` and `dot`.
    #[arg(long, value_enum, global = true, default_value_t = Policy::Posix)]
    pub policy: Policy,
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Upper bound on transducer states.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STATES)]
    pub max_states: usize,
    /// Draw the `#` sink state and the transitions into it.
    #[arg(long, global = true)]
    pub show_sink: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// All parse trees of WORD, highest priority first.
    Trees { regex: String, word: String },
    /// The POSIX or Greedy parse tree of WORD.
    Match { regex: String, word: String },
    /// Ambiguity verdict, criterion hits and counter-examples.
    Ambig { regex: String },
    /// The transducer as a Graphviz digraph.
    Dot { regex: String },
    /// All parse trees of WORD by brute-force enumeration.
    Oracle { regex: String, word: String },
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Output {
                    code: EXIT_ERROR,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Output::ok(EXIT_OK, text)
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Output {
    match &cli.command {
        Command::Trees { regex, word } => cmd_trees(regex, word, cli.format),
        Command::Match { regex, word } => {
            cmd_match(regex, word, cli.policy, cli.format, cli.max_states)
        }
        Command::Ambig { regex } => cmd_ambig(regex, cli.format, cli.max_states),
        Command::Dot { regex } => cmd_dot(
            regex,
            &DotOptions {
                policy: cli.policy.into(),
                show_sink: cli.show_sink,
                max_states: cli.max_states,
            },
        ),
        Command::Oracle { regex, word } => cmd_oracle(regex, word, cli.format),
    }
}

fn parse_inputs(regex: &str, word: &str) -> Result<(Regex, Word), Output> {
    let r = parse_regex(regex).map_err(|e| Output::error(format!("in expression: {e}")))?;
    let w = parse_word(word).map_err(|e| Output::error(format!("in word: {e}")))?;
    Ok((r, w))
}

fn problematic_warning(r: &Regex) -> Option<String> {
    problematic_subterm(r).map(|s| {
        format!(
            "`{}` is a star over a nullable expression; the result may be incomplete",
            print_regex(s)
        )
    })
}

#[derive(Serialize)]
struct TreeListing<'a> {
    regex: String,
    word: String,
    trees: &'a [ParseTree],
}

fn tree_listing(r: &Regex, w: &[derivamb::Symbol], trees: &[ParseTree], format: Format) -> Output {
    let code = if trees.is_empty() {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    };
    let stdout = match format {
        Format::Json => json(&TreeListing {
            regex: print_regex(r),
            word: word_to_string(w),
            trees,
        }),
        Format::Text => {
            let mut out = format!(
                "{} parse tree{}\n",
                trees.len(),
                if trees.len() == 1 { "" } else { "s" }
            );
            for t in trees {
                out.push_str(&format!("{t}\n"));
            }
            out
        }
    };
    Output::ok(code, stdout)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn cmd_trees(regex: &str, word: &str, format: Format) -> Output {
    let (r, w) = match parse_inputs(regex, word) {
        Ok(v) => v,
        Err(out) => return out,
    };
    tree_listing(&r, &w, &all_parse(&r, &w), format).warn(problematic_warning(&r))
}

#[derive(Serialize)]
struct MatchResult {
    regex: String,
    word: String,
    policy: String,
    tree: Option<ParseTree>,
}

pub fn cmd_match(
    regex: &str,
    word: &str,
    policy: Policy,
    format: Format,
    max_states: usize,
) -> Output {
    let (r, w) = match parse_inputs(regex, word) {
        Ok(v) => v,
        Err(out) => return out,
    };
    let mode = Mode::from(policy);
    let tree = match build_with_limit(&r, mode, max_states) {
        Ok(t) => match t.parse_first(&w) {
            Ok(tree) => tree,
            Err(e) => return Output::error(e),
        },
        Err(e) => return Output::error(e),
    };
    let code = if tree.is_some() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    let stdout = match format {
        Format::Json => json(&MatchResult {
            regex: print_regex(&r),
            word: word_to_string(&w),
            policy: mode.to_string(),
            tree,
        }),
        Format::Text => match tree {
            Some(t) => format!("{t}\n"),
            None => "no match\n".to_string(),
        },
    };
    Output::ok(code, stdout).warn(problematic_warning(&r))
}

pub fn cmd_ambig(regex: &str, format: Format, max_states: usize) -> Output {
    let r = match parse_regex(regex) {
        Ok(r) => r,
        Err(e) => return Output::error(format!("in expression: {e}")),
    };
    let report = match diff_policies_with_limit(&r, max_states) {
        Ok(report) => report,
        Err(e) => return Output::error(e),
    };
    let code = match report.verdict {
        Verdict::Unambiguous => EXIT_OK,
        Verdict::Ambiguous => EXIT_NEGATIVE,
        Verdict::RejectedProblematic => EXIT_ERROR,
    };
    let stdout = match format {
        Format::Json => json(&report),
        Format::Text => render_report(&report),
    };
    let stderr = match &report.rejected_subterm {
        Some(s) => format!(
            "error: rejected-problematic: `{}` is a star over a nullable expression\n",
            print_regex(s)
        ),
        None => String::new(),
    };
    Output {
        code,
        stdout,
        stderr,
    }
}

pub fn cmd_dot(regex: &str, options: &DotOptions) -> Output {
    let r = match parse_regex(regex) {
        Ok(r) => r,
        Err(e) => return Output::error(format!("in expression: {e}")),
    };
    match render_dot(&r, options) {
        Ok(text) => Output::ok(EXIT_OK, text)
            .warn(problematic_warning(&r).map(|w| format!("{w}; ambiguity annotations omitted"))),
        Err(e) => Output::error(e),
    }
}

pub fn cmd_oracle(regex: &str, word: &str, format: Format) -> Output {
    let (r, w) = match parse_inputs(regex, word) {
        Ok(v) => v,
        Err(out) => return out,
    };
    if w.len() > ORACLE_MAX_WORD {
        return Output::error(format!(
            "the oracle enumerates exhaustively and accepts words of at most {ORACLE_MAX_WORD} symbols"
        ));
    }
    match oracle::enumerate(&r, &w) {
        Ok(trees) => tree_listing(&r, &w, &trees, format),
        Err(e) => Output::error(e),
    }
}
