//! Acceptance gate: one PASS/FAIL line per criterion, written straight to
//! stderr so it shows up without `--nocapture`.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::{all_natural_posets, brute_isomorphisms, random_poset};
use deckpair_core::constructions::{build_r, check_q, check_r, find_q};
use deckpair_core::iso::{all_isomorphisms, find_isomorphism, is_rigid};
use deckpair_core::verify::{run_all, run_suite, seeded_relabel, Inputs, DEFAULT_Q_BUDGET, DEFAULT_SEED};
use deckpair_core::{Constraint, Suite, VerificationReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GADGET_LIMIT: Duration = Duration::from_secs(60);
const DECK_LIMIT: Duration = Duration::from_secs(10 * 60);
const FOLD_LIMIT: Duration = Duration::from_secs(15 * 60);
const RANDOM_PAIRS: usize = 10_000;
const EXHAUSTIVE_UP_TO: usize = 4;

struct Gate {
    results: Vec<(usize, bool)>,
}

impl Gate {
    fn record(&mut self, n: usize, passed: bool, detail: String) {
        let mark = if passed { "PASS" } else { "FAIL" };
        let _ = writeln!(std::io::stderr().lock(), "criterion {n}: {mark} {detail}");
        self.results.push((n, passed));
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn has_passing(report: &VerificationReport, ids: &[&str]) -> Vec<String> {
    ids.iter()
        .filter(|id| !report.claims.iter().any(|c| c.id == **id && c.passed))
        .map(|id| id.to_string())
        .collect()
}

fn suite_line(reports: &[&VerificationReport], missing: &[String], elapsed: Duration) -> String {
    let claims: usize = reports.iter().map(|r| r.claims.len()).sum();
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failed().into_iter().map(move |c| format!("{}/{}", r.suite, c.id)))
        .collect();
    format!(
        "{claims} claims, failed {failed:?}, missing {missing:?}, {:.1} s",
        elapsed.as_secs_f64()
    )
}

fn gadget_r(gate: &mut Gate) {
    let (built, elapsed) = timed(|| {
        let r = build_r()?;
        let (checks, _) = check_r(&r.poset, &r.named);
        Ok::<_, deckpair_core::Error>((r, checks))
    });
    let (ok, detail) = match built {
        Ok((r, checks)) => {
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect();
            let removal = ["center-removal-cb", "center-removal-ct"]
                .iter()
                .all(|id| checks.iter().any(|c| c.id == *id && c.passed));
            (
                r.poset.len() == 42 && failed.is_empty() && removal && elapsed < GADGET_LIMIT,
                format!(
                    "|R| = {}, {} checks, failed {failed:?}, center removals {}, {:.2} s",
                    r.poset.len(),
                    checks.len(),
                    if removal { "found" } else { "missing" },
                    elapsed.as_secs_f64()
                ),
            )
        }
        Err(e) => (false, format!("build failed: {e}")),
    };
    gate.record(1, ok, detail);
}

fn gadget_q(gate: &mut Gate) {
    let q = match find_q(DEFAULT_Q_BUDGET) {
        Ok(q) => q,
        Err(e) => return gate.record(2, false, format!("no Q within budget: {e}")),
    };
    let (checked, elapsed) = timed(|| check_q(&q.poset, &q.named));
    let (ok, detail) = match checked {
        Ok((checks, witnesses)) => {
            let failed: Vec<&str> = checks
                .iter()
                .filter(|c| !c.passed && !c.id.starts_with("filter-"))
                .map(|c| c.id.as_str())
                .collect();
            let maps = [
                "q-card-d-to-card-p",
                "q-automorphism-without-a",
                "q-automorphism-without-b",
            ]
            .iter()
            .all(|id| checks.iter().any(|c| c.id == *id && c.passed));
            let rigid = is_rigid(&q.poset);
            (
                failed.is_empty() && maps && witnesses.is_some() && rigid && elapsed < GADGET_LIMIT,
                format!(
                    "|Q| = {}, failed {failed:?}, witnesses {}, rigid {rigid}, checker {:.2} s",
                    q.poset.len(),
                    if maps { "verified" } else { "missing" },
                    elapsed.as_secs_f64()
                ),
            )
        }
        Err(e) => (false, format!("checker error: {e}")),
    };
    gate.record(2, ok, detail);
}

fn tower_pairs(gate: &mut Gate, inputs: &Inputs) {
    let (reports, elapsed) = timed(|| {
        [Suite::Tower, Suite::CenterRemoval, Suite::DeckPair]
            .map(|s| run_suite(s, inputs, DEFAULT_SEED).expect("suite runs"))
    });
    let deck = &reports[2];
    let mut want = Vec::new();
    for n in 1..=2 {
        for id in [
            "not-isomorphic",
            "marked-maximal-deck",
            "marked-minimal-deck",
            "matched-card-neighborhoods",
            "ranks-without-isomorphic-cards",
            "equal-card-ratio",
            "neighborhood-decks",
        ] {
            want.push(format!("n{n}/{id}"));
        }
        for i in 0..=n {
            let k = inputs.q.poset.height() + i * inputs.r.poset.height();
            want.push(format!("n{n}/marked-rank-{k}-deck"));
        }
    }
    let want: Vec<&str> = want.iter().map(String::as_str).collect();
    let missing = has_passing(deck, &want);
    let ok = reports.iter().all(|r| r.passed()) && missing.is_empty() && elapsed < DECK_LIMIT;
    gate.record(
        3,
        ok,
        suite_line(&reports.iter().collect::<Vec<_>>(), &missing, elapsed),
    );
}

fn folding(gate: &mut Gate, inputs: &Inputs) {
    let (reports, elapsed) =
        timed(|| [Suite::Fold, Suite::FoldedPair].map(|s| run_suite(s, inputs, DEFAULT_SEED).expect("suite runs")));
    let mut missing = has_passing(
        &reports[0],
        &[
            "tower-relabeled/isomorphism-carries-over",
            "tower-pair/isomorphism-carries-over",
            "tower-pair/spine-cards-after-fold",
            "tower-pair/neighborhoods-after-fold",
        ],
    );
    missing.extend(has_passing(
        &reports[1],
        &["not-isomorphic", "every-rank-has-matching-cards", "populated-levels"],
    ));
    if !reports[1].claims.iter().any(|c| c.id.starts_with("marked-rank-")) {
        missing.push("marked-rank-*-deck".into());
    }
    let ok = reports.iter().all(|r| r.passed()) && missing.is_empty() && elapsed < FOLD_LIMIT;
    gate.record(
        4,
        ok,
        suite_line(&reports.iter().collect::<Vec<_>>(), &missing, elapsed),
    );
}

fn disagrees(p: &deckpair_core::Poset, q: &deckpair_core::Poset) -> bool {
    let oracle = brute_isomorphisms(p, q, None, &[]);
    let found = find_isomorphism(p, q, &Constraint::none()).expect("search runs");
    let witness_ok = found.as_ref().map_or(oracle.is_empty(), |m| {
        oracle.iter().any(|o| o.as_slice() == m.as_slice())
    });
    let count = all_isomorphisms(p, q, &Constraint::none()).expect("search runs").len();
    !witness_ok || count != oracle.len()
}

fn oracle_sweep(gate: &mut Gate) {
    let (mut pairs, mut bad) = (0usize, 0usize);
    for n in 0..=EXHAUSTIVE_UP_TO {
        let all = all_natural_posets(n);
        for p in &all {
            for q in &all {
                pairs += 1;
                bad += disagrees(p, q) as usize;
            }
        }
    }
    let exhaustive = pairs;
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for _ in 0..RANDOM_PAIRS {
        let n = rng.random_range(1..=6);
        let density = rng.random_range(0.1..0.7);
        let p = random_poset(&mut rng, n, density);
        let q = if rng.random_bool(0.5) {
            seeded_relabel(&p, rng.random()).0
        } else {
            random_poset(&mut rng, n, density)
        };
        pairs += 1;
        bad += disagrees(&p, &q) as usize;
    }
    gate.record(
        5,
        bad == 0,
        format!(
            "{exhaustive} exhaustive pairs up to {EXHAUSTIVE_UP_TO} elements, {RANDOM_PAIRS} seeded pairs up to 6, {bad} disagreements of {pairs}"
        ),
    );
}

fn rigidity(gate: &mut Gate, inputs: &Inputs) {
    let (report, elapsed) = timed(|| run_suite(Suite::Rigidity, inputs, DEFAULT_SEED).expect("suite runs"));
    let missing = has_passing(
        &report,
        &[
            "level-cards/positive",
            "level-cards/every-check-violated",
            "separator/positive",
            "separator/gadget-separator",
            "separator/every-check-violated",
        ],
    );
    gate.record(
        6,
        report.passed() && missing.is_empty(),
        suite_line(&[&report], &missing, elapsed),
    );
}

fn determinism(gate: &mut Gate, inputs: &Inputs) {
    let run = || -> Vec<VerificationReport> {
        run_all(inputs, DEFAULT_SEED)
            .expect("suites run")
            .iter()
            .map(VerificationReport::without_timings)
            .collect()
    };
    let (first, second) = (run(), run());
    let claims: usize = first.iter().map(|r| r.claims.len()).sum();
    gate.record(
        7,
        first == second,
        format!(
            "{} suites, {claims} claims, reports identical: {}",
            first.len(),
            first == second
        ),
    );
}

#[test]
fn acceptance_criteria() {
    let mut gate = Gate { results: Vec::new() };
    gadget_r(&mut gate);
    gadget_q(&mut gate);
    let inputs = Inputs::build(DEFAULT_Q_BUDGET).expect("gadgets build");
    tower_pairs(&mut gate, &inputs);
    folding(&mut gate, &inputs);
    oracle_sweep(&mut gate);
    rigidity(&mut gate, &inputs);
    determinism(&mut gate, &inputs);
    let failed: Vec<usize> = gate.results.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
