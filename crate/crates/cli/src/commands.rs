use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use deckpair_core::constructions::{
    build_pair, build_r, build_r_adjacent, find_q, load_q, GadgetJson, GadgetQ, TowerSpec,
};
use deckpair_core::decks::ecr_with_matching;
use deckpair_core::dot::to_dot;
use deckpair_core::folding::{build_folded_pair, check_fold_pair, fold as fold_poset, seam_mode, SeamFold};
use deckpair_core::verify::{run_suite, Inputs, Suite, VerificationReport};
use deckpair_core::Poset;
use num_rational::Ratio;

use crate::{BuildKind, Format, QSource};

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Reads a poset file; gadget files with role maps are accepted too.
pub fn load_poset(path: &Path) -> Result<Poset> {
    let g: GadgetJson = read_json(path)?;
    Poset::from_json(&g.poset).with_context(|| format!("building the poset in {}", path.display()))
}

fn write_poset(
    dir: &Path,
    stem: &str,
    p: &Poset,
    named: Option<&BTreeMap<String, Vec<String>>>,
    format: Format,
) -> Result<()> {
    match format {
        Format::Json => write_json(
            &dir.join(format!("{stem}.json")),
            &GadgetJson {
                poset: p.to_json(),
                named: named.cloned().unwrap_or_default(),
            },
        ),
        Format::Dot => {
            let path = dir.join(format!("{stem}.dot"));
            fs::write(&path, to_dot(p)).with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn q_from(src: &QSource) -> Result<GadgetQ> {
    match &src.q {
        Some(path) => Ok(load_q(&read_json(path)?)?),
        None => Ok(find_q(src.budget)?),
    }
}

fn out_dir(out: &Path) -> Result<PathBuf> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    Ok(out.to_path_buf())
}

pub fn build(kind: BuildKind, n: usize, s: usize, q: &QSource, out: &Path, format: Format) -> Result<bool> {
    let dir = out_dir(out)?;
    match kind {
        BuildKind::R => {
            let r = build_r()?;
            write_poset(&dir, "r", &r.poset, Some(&r.named), format)?;
        }
        BuildKind::RAdjacent => {
            let r = build_r_adjacent()?;
            write_poset(&dir, "r-adjacent", &r.poset, Some(&r.named), format)?;
        }
        BuildKind::QSearch => {
            let q = find_q(q.budget)?;
            write_poset(&dir, "q", &q.poset, Some(&q.named), format)?;
        }
        BuildKind::Pair => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            let (q, r) = (q_from(q)?, build_r()?);
            let pair = build_pair(&TowerSpec { q: &q, r: &r, n })?;
            write_poset(&dir, "P1", &pair.p1, None, format)?;
            write_poset(&dir, "P2", &pair.p2, None, format)?;
            write_json(&dir.join("ranks.json"), &json!({ "n": n, "ranks": pair.ranks }))?;
        }
        BuildKind::FoldedPair => {
            let (q, r) = (q_from(q)?, build_r()?);
            let fp = build_folded_pair(&q, &r, n, s)?;
            write_poset(&dir, "Q1", &fp.q1, None, format)?;
            write_poset(&dir, "Q2", &fp.q2, None, format)?;
            write_json(
                &dir.join("ranks.json"),
                &json!({ "n": n, "s": s, "tower_n": fp.tower_n, "ranks": fp.ranks }),
            )?;
            write_json(&dir.join("folds.json"), &fp.steps)?;
        }
    }
    Ok(true)
}

pub fn verify(suite: &str, seed: u64, q: &QSource, out: Option<&Path>, json_out: bool) -> Result<bool> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse()?]
    };
    let inputs = Inputs {
        q: q_from(q)?,
        r: build_r()?,
    };
    let reports: Vec<VerificationReport> = suites
        .iter()
        .map(|&s| run_suite(s, &inputs, seed))
        .collect::<Result<_, _>>()?;
    if let Some(out) = out {
        let dir = out_dir(out)?;
        for r in &reports {
            write_json(&dir.join(format!("{}.report.json", r.suite)), r)?;
        }
    }
    if json_out {
        println!("{}", serde_json::to_string_pretty(&reports)?);
    } else {
        for r in &reports {
            print!("{}", r.summary());
        }
    }
    Ok(reports.iter().all(VerificationReport::passed))
}

pub fn ecr(p: &Path, q: &Path, n: Option<usize>, out: Option<&Path>) -> Result<bool> {
    let (a, b) = (load_poset(p)?, load_poset(q)?);
    let (value, m) = ecr_with_matching(&a, &b)?;
    println!("ecr {value} ({:.6})", *value.numer() as f64 / *value.denom() as f64);
    if let Some(out) = out {
        let dir = out_dir(out)?;
        let pairs: Vec<[&str; 2]> = m.pairs.iter().map(|&(i, j)| [a.label(i), b.label(j)]).collect();
        write_json(&dir.join("matching.json"), &pairs)?;
    }
    match n {
        Some(n) => {
            let bound = Ratio::new(4 * n as u64 + 6, a.len() as u64);
            let ok = value >= bound;
            println!("bound {bound}: {}", if ok { "met" } else { "NOT met" });
            Ok(ok)
        }
        None => Ok(true),
    }
}

pub fn export_dot(p: &Path, out: Option<&Path>) -> Result<bool> {
    let dot = to_dot(&load_poset(p)?);
    match out {
        Some(path) => fs::write(path, dot).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{dot}"),
    }
    Ok(true)
}

pub fn fold(p: &Path, seam: &Path, pair: Option<&[PathBuf]>, out: &Path) -> Result<bool> {
    let a = load_poset(p)?;
    let sf: SeamFold = read_json(seam)?;
    let (b, sf2) = match pair {
        Some([p2, s2]) => (load_poset(p2)?, read_json::<SeamFold>(s2)?),
        Some(_) => bail!("--pair takes a poset file and a seam file"),
        None => (a.clone(), sf.clone()),
    };
    let Some(first) = sf.seam.first() else {
        bail!("the seam is empty");
    };
    let k = a.ranks().rank[a.require(first)?];
    let ids = sf.seam.iter().map(|l| a.require(l)).collect::<Result<Vec<_>, _>>()?;
    let mode = seam_mode(&a, &ids)?;
    let checks = check_fold_pair(&a, &b, k, &sf, &sf2);

    let dir = out_dir(out)?;
    write_poset(&dir, "folded", &fold_poset(&a, &sf)?, None, Format::Json)?;
    if pair.is_some() {
        write_poset(&dir, "folded2", &fold_poset(&b, &sf2)?, None, Format::Json)?;
    }
    write_json(
        &dir.join("fold-report.json"),
        &json!({ "rank": k, "mode": mode, "checks": checks }),
    )?;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.detail);
    }
    // Without a second poset the checks compare the poset with itself, which is
    // informational only.
    Ok(pair.is_none() || checks.iter().all(|c| c.passed))
}
