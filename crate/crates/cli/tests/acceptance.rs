//! Acceptance criteria, one test per criterion. Each test prints a single
//! `[acceptance] Cn ...: PASS` or `FAIL` line; run with `--nocapture` to
//! see them.

use std::time::{Duration, Instant};

use derivamb::ambiguity::{AmbiguityReport, Criterion, Verdict};
use derivamb::deriv::{deriv, pderiv, sum_of};
use derivamb::engine::all_parse;
use derivamb::fst::{build, Mode};
use derivamb::oracle::{all_words, enumerate, gen_non_problematic};
use derivamb::parsetree::{all_eps, flatten, greedy_min, typecheck, ParseTree};
use derivamb::simplify::pd_normalize;
use derivamb::syntax::{parse_regex, parse_word, print_regex, word_to_string, Regex, Symbol};
use derivamb_cli::run;

const CORPUS_SIZE: usize = 500;
const CORPUS_DEPTH: usize = 4;
const CORPUS_SEED: u64 = 2024;
/// Longest word for the tree-set comparisons.
const TREE_WORD_LEN: usize = 5;
/// Longest word for the brute-force ambiguity witness search.
const WITNESS_WORD_LEN: usize = 6;
const EXAMPLE_TIME_LIMIT: Duration = Duration::from_secs(1);
const CORPUS_TIME_LIMIT: Duration = Duration::from_secs(300);
/// Allowed ratio between parse times for words of length 10^5 and 10^3.
const LINEAR_RATIO_LIMIT: f64 = 100.0;
/// Timing rounds per size for the linear-time check; the best round counts.
const TIMING_ROUNDS: usize = 15;
/// Discrepancies listed in a failure message.
const SHOWN: usize = 5;

fn report(id: &str, title: &str, failures: &[String], summary: &str) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("[acceptance] {id} {title}: {status} ({summary})");
    for f in failures.iter().take(SHOWN) {
        println!("[acceptance] {id}   {f}");
    }
    assert!(
        failures.is_empty(),
        "{id} {title}: {} discrepancies, first: {:?}",
        failures.len(),
        failures.iter().take(SHOWN).collect::<Vec<_>>()
    );
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

fn alphabet() -> Vec<Symbol> {
    vec![Symbol::new('x').unwrap(), Symbol::new('y').unwrap()]
}

fn corpus() -> Vec<Regex> {
    gen_non_problematic(CORPUS_DEPTH, &alphabet(), CORPUS_SIZE, CORPUS_SEED)
}

fn sorted(mut trees: Vec<ParseTree>) -> Vec<ParseTree> {
    trees.sort();
    trees
}

fn cli(args: &[&str]) -> derivamb_cli::Output {
    run(std::iter::once("derivamb").chain(args.iter().copied()))
}

fn tree(s: &str) -> ParseTree {
    s.parse().unwrap()
}

#[test]
fn c01_star_of_overlapping_alternatives() {
    let start = Instant::now();
    let out = cli(&["trees", "(xy|x|y)*", "xy"]);
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    check(
        &mut failures,
        out.code == 0,
        format!("exit code {}", out.code),
    );
    check(
        &mut failures,
        out.stdout == "2 parse trees\n[L (x,y)]\n[R (L x),R (R y)]\n",
        format!("output {:?}", out.stdout),
    );
    let r = parse_regex("(xy|x|y)*").unwrap();
    let posix = build(&r, Mode::Posix)
        .unwrap()
        .parse_first(&parse_word("xy").unwrap())
        .unwrap();
    check(
        &mut failures,
        posix == Some(tree("[L (x,y)]")),
        format!("POSIX tree {posix:?}"),
    );
    check(
        &mut failures,
        elapsed < EXAMPLE_TIME_LIMIT,
        format!("took {elapsed:?}"),
    );
    report("C1", "two parse trees", &failures, &format!("{elapsed:?}"));
}

#[test]
fn c02_derivative_chain() {
    let r = parse_regex("(x|y)*").unwrap();
    let x = Symbol::new('x').unwrap();
    let y = Symbol::new('y').unwrap();
    let d1 = deriv(&r, x);
    let d2 = deriv(&d1, y);
    let mut failures = Vec::new();
    check(
        &mut failures,
        print_regex(&d1) == "(~|#)(x|y)*",
        format!("first derivative {d1}"),
    );
    check(
        &mut failures,
        print_regex(&d2) == "(#|#)(x|y)*|(#|~)(x|y)*",
        format!("second derivative {d2}"),
    );
    let eps = all_eps(&d2);
    check(
        &mut failures,
        eps == vec![tree("R (R (),[])")],
        format!("empty trees {eps:?}"),
    );
    report(
        "C2",
        "derivative chain",
        &failures,
        &format!("{d1} then {d2}"),
    );
}

#[test]
fn c03_empty_tree_ambiguity() {
    let mut failures = Vec::new();
    let out = cli(&["ambig", "(x|xy)(y|~)", "--format", "json"]);
    check(
        &mut failures,
        out.code == 1,
        format!("exit code {}", out.code),
    );
    let report_json: AmbiguityReport = serde_json::from_str(&out.stdout).unwrap();
    check(
        &mut failures,
        report_json.verdict == Verdict::Ambiguous,
        "verdict",
    );
    check(
        &mut failures,
        report_json.hits.iter().any(|h| h.kind == Criterion::A1),
        "no A1 hit",
    );
    let xy = report_json
        .counter_examples
        .iter()
        .find(|c| word_to_string(&c.word) == "xy");
    check(
        &mut failures,
        xy.is_some_and(|c| c.trees.len() == 2),
        format!("counter-example xy: {xy:?}"),
    );

    let dot = cli(&["dot", "(x|xy)(y|~)"]).stdout;
    let grey_finals = dot
        .lines()
        .filter(|l| l.contains("fillcolor=grey") && l.contains("doublecircle"))
        .count();
    let dotted = dot.lines().filter(|l| l.contains("style=dotted")).count();
    check(
        &mut failures,
        grey_finals == 1,
        format!("{grey_finals} grey final nodes"),
    );
    check(&mut failures, dotted == 0, format!("{dotted} dotted edges"));
    report(
        "C3",
        "empty-tree ambiguity",
        &failures,
        "A1 hit, witness xy",
    );
}

#[test]
fn c04_concatenation_and_merge_ambiguity() {
    let start = Instant::now();
    let out = cli(&["ambig", "(xx*|yx|xyx)*y", "--format", "json"]);
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    check(
        &mut failures,
        out.code == 1,
        format!("exit code {}", out.code),
    );
    let rep: AmbiguityReport = serde_json::from_str(&out.stdout).unwrap();
    let has = |k| rep.hits.iter().any(|h| h.kind == k);
    check(&mut failures, rep.verdict == Verdict::Ambiguous, "verdict");
    check(&mut failures, has(Criterion::A2), "no A2 hit");
    check(&mut failures, has(Criterion::A3), "no A3 hit");
    check(&mut failures, !has(Criterion::A1), "unexpected A1 hit");
    let ce = rep
        .counter_examples
        .iter()
        .find(|c| word_to_string(&c.word) == "xyxy");
    match ce {
        None => failures.push("no counter-example xyxy".into()),
        Some(c) => {
            check(
                &mut failures,
                word_to_string(&c.prefix) == "xy",
                format!("prefix {}", word_to_string(&c.prefix)),
            );
            // The printed tree omits the list brackets of the star; this is
            // its well-typed form.
            let expected = tree("([R (R (x,(y,x)))],y)");
            check(
                &mut failures,
                c.posix == expected,
                format!("POSIX tree {}", c.posix),
            );
            let r = parse_regex("(xx*|yx|xyx)*y").unwrap();
            check(
                &mut failures,
                !typecheck(&tree("(R (R (x,(y,x))),y)"), &r),
                "bracketless tree typechecks",
            );
            check(
                &mut failures,
                c.greedy != c.posix,
                "Greedy tree equals POSIX tree",
            );
            check(
                &mut failures,
                flatten(&c.greedy) == c.word,
                "Greedy tree flattens elsewhere",
            );
        }
    }
    check(
        &mut failures,
        elapsed < EXAMPLE_TIME_LIMIT,
        format!("took {elapsed:?}"),
    );
    report(
        "C4",
        "concatenation and merge ambiguity",
        &failures,
        &format!("{elapsed:?}"),
    );
}

#[test]
fn c05_oracle_equivalence() {
    let start = Instant::now();
    let words = all_words(&alphabet(), TREE_WORD_LEN);
    let mut failures = Vec::new();
    let mut pairs = 0;
    for r in corpus() {
        let fst = build(&r, Mode::Posix).unwrap();
        for w in &words {
            let oracle = sorted(enumerate(&r, w).unwrap());
            let engine = sorted(all_parse(&r, w));
            let via_fst = sorted(fst.parse_all(w).unwrap());
            pairs += 1;
            check(
                &mut failures,
                oracle == engine && oracle == via_fst,
                format!("{r} on {:?}", word_to_string(w)),
            );
        }
    }
    let elapsed = start.elapsed();
    check(
        &mut failures,
        elapsed < CORPUS_TIME_LIMIT,
        format!("took {elapsed:?}"),
    );
    report(
        "C5",
        "oracle equivalence",
        &failures,
        &format!("{pairs} pairs in {elapsed:?}"),
    );
}

#[test]
fn c06_soundness() {
    let words = all_words(&alphabet(), TREE_WORD_LEN);
    let mut failures = Vec::new();
    let mut trees = 0;
    for r in corpus() {
        let posix = build(&r, Mode::Posix).unwrap();
        let greedy = build(&r, Mode::Greedy).unwrap();
        for w in &words {
            let mut produced = all_parse(&r, w);
            produced.extend(posix.parse_all(w).unwrap());
            produced.extend(greedy.parse_all(w).unwrap());
            produced.extend(greedy.parse_first(w).unwrap());
            for v in produced {
                trees += 1;
                check(
                    &mut failures,
                    typecheck(&v, &r) && &flatten(&v) == w,
                    format!("{v} for {r} on {:?}", word_to_string(w)),
                );
            }
        }
    }
    report("C6", "soundness", &failures, &format!("{trees} trees"));
}

#[test]
fn c07_verdict_matches_witness_search() {
    let words = all_words(&alphabet(), WITNESS_WORD_LEN);
    let mut failures = Vec::new();
    let mut excluded = Vec::new();
    let mut ambiguous = 0;
    for r in corpus() {
        let rep = derivamb::ambiguity::diff_policies(&r).unwrap();
        let oracle_witness = words.iter().find(|w| enumerate(&r, w).unwrap().len() > 1);
        let engine_witness = words.iter().any(|w| all_parse(&r, w).len() > 1);
        check(
            &mut failures,
            oracle_witness.is_some() == engine_witness,
            format!("oracle and engine disagree on {r}"),
        );
        let says_ambiguous = rep.verdict == Verdict::Ambiguous;
        ambiguous += usize::from(says_ambiguous);
        if says_ambiguous && oracle_witness.is_none() {
            let shortest = rep.counter_examples.first().map(|c| c.word.len());
            if shortest.is_some_and(|n| n > WITNESS_WORD_LEN) {
                excluded.push(format!("{r} (witness length {})", shortest.unwrap()));
                continue;
            }
        }
        check(
            &mut failures,
            says_ambiguous == oracle_witness.is_some(),
            format!(
                "{r}: verdict {:?}, oracle witness {:?}",
                rep.verdict,
                oracle_witness.map(|w| word_to_string(w))
            ),
        );
    }
    for e in &excluded {
        println!("[acceptance] C7   excluded, witness beyond bound: {e}");
    }
    report(
        "C7",
        "verdict iff witness",
        &failures,
        &format!("{ambiguous} ambiguous, {} excluded", excluded.len()),
    );
}

#[test]
fn c08_greedy_first_tree() {
    let words = all_words(&alphabet(), TREE_WORD_LEN);
    let mut failures = Vec::new();
    let mut matching = 0;
    for r in corpus() {
        let greedy = build(&r, Mode::Greedy).unwrap();
        for w in &words {
            let trees = enumerate(&r, w).unwrap();
            let Some(min) = greedy_min(trees.iter()).unwrap() else {
                continue;
            };
            matching += 1;
            let got = greedy.parse_first(w).unwrap();
            check(
                &mut failures,
                got.as_ref() == Some(min),
                format!(
                    "{r} on {:?}: minimum {min}, transducer {}",
                    word_to_string(w),
                    got.map(|t| t.to_string()).unwrap_or_default()
                ),
            );
        }
    }
    report(
        "C8",
        "greedy first tree",
        &failures,
        &format!("{} of {matching} matching pairs differ", failures.len()),
    );
}

#[test]
fn c09_partial_derivative_normal_form() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for r in corpus() {
        for &x in &alphabet() {
            checked += 1;
            let got = pd_normalize(&deriv(&r, x)).target;
            let expected = sum_of(&pderiv(&r, x));
            check(
                &mut failures,
                got == expected,
                format!("{r} on {x}: {got} vs {expected}"),
            );
        }
    }
    report(
        "C9",
        "partial derivative normal form",
        &failures,
        &format!("{checked} derivatives"),
    );
}

#[test]
fn c10_linear_time() {
    let r = parse_regex("(x|y)*").unwrap();
    let fst = build(&r, Mode::Posix).unwrap();
    let xy = alphabet();
    let sizes = [1_000usize, 10_000, 100_000];
    let words: Vec<Vec<Symbol>> = sizes
        .iter()
        .map(|&n| (0..n).map(|i| xy[(i / 2) % 2]).collect())
        .collect();
    // Sizes are timed in interleaved rounds so background load hits all of
    // them alike; each sample covers the same number of symbols. Results are
    // checked and freed outside the timed region.
    let mut best = [f64::INFINITY; 3];
    for _ in 0..TIMING_ROUNDS {
        for (k, w) in words.iter().enumerate() {
            let reps = sizes[2] / sizes[k];
            let mut results = Vec::with_capacity(reps);
            let start = Instant::now();
            for _ in 0..reps {
                results.push(fst.parse_first(w));
            }
            best[k] = best[k].min(start.elapsed().as_secs_f64() / reps as f64);
            for v in results {
                let v = v.unwrap().unwrap();
                assert!(matches!(v, ParseTree::Seq(ref items) if items.len() == w.len()));
            }
        }
    }
    let times: Vec<(f64, f64)> = sizes.iter().map(|&n| n as f64).zip(best).collect();
    // least squares slope through the three points, for the summary line
    let mean_n = times.iter().map(|p| p.0).sum::<f64>() / 3.0;
    let mean_t = times.iter().map(|p| p.1).sum::<f64>() / 3.0;
    let slope = times
        .iter()
        .map(|p| (p.0 - mean_n) * (p.1 - mean_t))
        .sum::<f64>()
        / times.iter().map(|p| (p.0 - mean_n).powi(2)).sum::<f64>();
    let ratio = times[2].1 / times[0].1;
    let mut failures = Vec::new();
    check(
        &mut failures,
        ratio < LINEAR_RATIO_LIMIT,
        format!("ratio {ratio:.1}"),
    );
    report(
        "C10",
        "linear time",
        &failures,
        &format!(
            "{:.2e}s, {:.2e}s, {:.2e}s; ratio {ratio:.1}; {:.1} ns per symbol",
            times[0].1,
            times[1].1,
            times[2].1,
            slope * 1e9
        ),
    );
}

#[test]
fn c11_problematic_rejection() {
    let out = cli(&["ambig", "~*"]);
    let mut failures = Vec::new();
    check(
        &mut failures,
        out.code == 2,
        format!("exit code {}", out.code),
    );
    check(
        &mut failures,
        out.stdout.contains("rejected-problematic"),
        "verdict missing",
    );
    check(
        &mut failures,
        out.stderr.contains("`~*`"),
        format!("stderr {:?}", out.stderr),
    );
    let json = cli(&["ambig", "x(y|~)*", "--format", "json"]);
    let rep: AmbiguityReport = serde_json::from_str(&json.stdout).unwrap();
    check(
        &mut failures,
        json.code == 2,
        format!("exit code {}", json.code),
    );
    check(
        &mut failures,
        rep.rejected_subterm == Some(parse_regex("(y|~)*").unwrap()),
        format!("subterm {:?}", rep.rejected_subterm),
    );
    report("C11", "problematic rejection", &failures, "~* rejected");
}
