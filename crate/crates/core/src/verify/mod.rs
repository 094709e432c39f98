//! Verification suites: each runs a family of claims about the constructions
//! and records pass/fail, a detail string and the wall time per claim.

mod folds;
mod towers;
mod toys;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constructions::{build_r, find_q, GadgetQ, GadgetR, PropertyCheck};
use crate::error::{Error, Result};
use crate::poset::{ElementId, Poset};

/// Candidate budget used when no Q is supplied.
pub const DEFAULT_Q_BUDGET: u64 = 1_000_000;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub id: String,
    pub passed: bool,
    pub detail: String,
    pub wall_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub seed: u64,
    pub claims: Vec<Claim>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&Claim> {
        self.claims.iter().filter(|c| !c.passed).collect()
    }

    /// The same report with every wall time zeroed, for comparing runs.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.claims {
            c.wall_ms = 0;
        }
        r
    }

    /// One line per claim plus a totals line.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{mark} {}/{} ({} ms): {}\n",
                self.suite, c.id, c.wall_ms, c.detail
            ));
        }
        let bad = self.failed().len();
        out.push_str(&format!(
            "{}: {} claims, {} failed\n",
            self.suite,
            self.claims.len(),
            bad
        ));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Gadget properties and the four conclusions about the tower pair.
    Tower,
    /// Automorphisms of the middle gadget without either center point.
    CenterRemoval,
    /// Every listed deck property of the tower pairs for n = 1, 2.
    DeckPair,
    /// Fold side conditions and what folds carry over.
    Fold,
    /// The folded pair for n = 1, s = 2.
    FoldedPair,
    /// Rigidity-based assembly on positive and single-defect inputs.
    Rigidity,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Tower,
        Suite::CenterRemoval,
        Suite::DeckPair,
        Suite::Fold,
        Suite::FoldedPair,
        Suite::Rigidity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Tower => "tower",
            Suite::CenterRemoval => "center-removal",
            Suite::DeckPair => "deck-pair",
            Suite::Fold => "fold",
            Suite::FoldedPair => "folded-pair",
            Suite::Rigidity => "rigidity",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite `{s}`")))
    }
}

/// The gadgets every suite builds on.
#[derive(Clone, Debug)]
pub struct Inputs {
    pub q: GadgetQ,
    pub r: GadgetR,
}

impl Inputs {
    /// Builds R and searches for Q.
    pub fn build(q_budget: u64) -> Result<Self> {
        Ok(Inputs {
            q: find_q(q_budget)?,
            r: build_r()?,
        })
    }
}

/// Collects claims, timing each one.
#[derive(Default)]
pub(crate) struct Recorder {
    claims: Vec<Claim>,
}

impl Recorder {
    /// Runs one claim; an error counts as a failure with the error as detail.
    pub fn claim(&mut self, id: impl Into<String>, f: impl FnOnce() -> Result<(bool, String)>) {
        let t = Instant::now();
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        self.claims.push(Claim {
            id: id.into(),
            passed,
            detail,
            wall_ms: t.elapsed().as_millis() as u64,
        });
    }

    /// Records property checks computed elsewhere, prefixing their ids.
    pub fn checks(&mut self, prefix: &str, checks: &[PropertyCheck]) {
        for c in checks {
            self.claims.push(Claim {
                id: format!("{prefix}/{}", c.id),
                passed: c.passed,
                detail: c.detail.clone(),
                wall_ms: 0,
            });
        }
    }

    pub fn finish(self, suite: Suite, seed: u64) -> VerificationReport {
        VerificationReport {
            suite,
            seed,
            claims: self.claims,
        }
    }
}

/// A seeded relabeling: the permuted poset and the permutation `old id → new id`.
pub fn seeded_relabel(p: &Poset, seed: u64) -> (Poset, Vec<ElementId>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<ElementId> = p.ids().collect();
    perm.shuffle(&mut rng);
    (p.permuted(&perm), perm)
}

pub fn run_suite(suite: Suite, inputs: &Inputs, seed: u64) -> Result<VerificationReport> {
    let mut rec = Recorder::default();
    match suite {
        Suite::Tower => towers::tower(&mut rec, inputs)?,
        Suite::CenterRemoval => towers::center_removal(&mut rec, inputs)?,
        Suite::DeckPair => towers::deck_pair(&mut rec, inputs)?,
        Suite::Fold => folds::fold_suite(&mut rec, inputs, seed)?,
        Suite::FoldedPair => folds::folded_pair(&mut rec, inputs)?,
        Suite::Rigidity => toys::rigidity(&mut rec, inputs, seed)?,
    }
    Ok(rec.finish(suite, seed))
}

pub fn run_all(inputs: &Inputs, seed: u64) -> Result<Vec<VerificationReport>> {
    Suite::ALL.iter().map(|&s| run_suite(s, inputs, seed)).collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("no-such-suite".parse::<Suite>().is_err());
    }

    #[test]
    fn relabel_is_seeded() {
        let p = Poset::chain(["a", "b", "c", "d"]).unwrap();
        assert_eq!(seeded_relabel(&p, 7).1, seeded_relabel(&p, 7).1);
    }
}
