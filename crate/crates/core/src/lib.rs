//! Parse trees, POSIX and Greedy parsing, and ambiguity diagnosis for
//! regular expressions, all driven by Brzozowski derivatives.
//!
//! The pipeline: [`deriv::deriv`] computes raw derivatives,
//! [`simplify`] rewrites them to canonical states while recording
//! parse-tree transformers, [`fst::build`] closes an expression under these
//! steps into a transducer, and [`ambiguity::diff_policies`] checks the
//! transducer for the three static ambiguity criteria and produces witness
//! words. [`engine`] and [`oracle`] are slower reference implementations.

pub mod ambiguity;
pub mod deriv;
pub mod engine;
pub mod fst;
pub mod oracle;
pub mod parsetree;
pub mod simplify;
pub mod syntax;

pub use ambiguity::{
    counter_examples, detect, diff_policies, realizable_states, AmbiguityReport, AnalysisError,
    CounterExample, Criterion, CriterionHit, HitDetail, PolicyDiff, Verdict,
};
pub use deriv::{deriv, matches, pderiv, sum_of, RegexSet};
pub use engine::{all_parse, inject, TransformError};
pub use fst::{build, BuildError, Mode, Transducer, Transition};
pub use parsetree::{all_eps, flatten, greedy_less, typecheck, ParseTree, TreeSeq};
pub use simplify::{apply_transformer, canonicalize, pd_normalize, RewriteResult, Transformer};
pub use syntax::{
    is_empty_lang, is_problematic, nullable, parse_regex, parse_word, print_regex, Regex, Symbol,
    SyntaxError, Word,
};
