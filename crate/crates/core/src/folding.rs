//! Seams, the fold operation and constructions built from repeated folds.
//!
//! A seam is an antichain `A` whose removal (together with every comparability
//! that passes over it) disconnects the poset. Folding keeps the part `S` as is
//! and reverses the part `F` together with `A`, so that `F` ends up hanging on
//! the same side of `A` as `S`.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::constructions::{build_pair, require_all, GadgetQ, GadgetR, PropertyCheck, TowerSpec};
use crate::error::{Error, Result};
use crate::iso::{find_isomorphism, invariant_fingerprint, Constraint};
use crate::poset::{ElementId, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeamMode {
    /// Every comparability over the seam passes through a seam element.
    Foldable,
    /// Everything below the seam is below everything above it.
    Breakable,
}

/// A seam together with the part to fold (`f_side`) and the part that stays (`s_side`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeamFold {
    pub seam: Vec<String>,
    pub f_side: Vec<String>,
    pub s_side: Vec<String>,
    pub mode: SeamMode,
}

/// Which side of a rank level gets folded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FoldSide {
    /// Fold the part above the level down.
    Upper,
    /// Fold the part below the level up.
    Lower,
}

fn bits(n: usize, xs: impl IntoIterator<Item = ElementId>) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    b.extend(xs);
    b
}

fn check_antichain(p: &Poset, a: &[ElementId]) -> Result<()> {
    if let Some(&x) = a.iter().find(|&&x| x >= p.len()) {
        return Err(Error::UnknownElement(x));
    }
    if p.is_antichain(a) {
        Ok(())
    } else {
        Err(Error::NotAntichain)
    }
}

/// Elements strictly below some seam element, and strictly above some seam element.
fn shadows(p: &Poset, a: &[ElementId]) -> (FixedBitSet, FixedBitSet) {
    let mut below = FixedBitSet::with_capacity(p.len());
    let mut above = FixedBitSet::with_capacity(p.len());
    for &x in a {
        below.union_with(p.below(x));
        above.union_with(p.above(x));
    }
    (below, above)
}

type Separation = (Vec<ElementId>, Vec<(ElementId, ElementId)>);

/// Surviving elements and comparabilities of the `A`-separation, in ids of `p`.
fn separation(p: &Poset, a: &[ElementId]) -> Result<Separation> {
    check_antichain(p, a)?;
    let seam = bits(p.len(), a.iter().copied());
    let (below, above) = shadows(p, a);
    let rest: Vec<_> = p.ids().filter(|&x| !seam[x]).collect();
    let mut pairs = Vec::new();
    for &x in &rest {
        for y in p.above(x).ones() {
            if !seam[y] && !(below[x] && above[y]) {
                pairs.push((x, y));
            }
        }
    }
    Ok((rest, pairs))
}

/// The `A`-separation: drop every comparability `x < y` with `x < a`, `b < y`
/// for seam elements `a`, `b`, then drop the seam. Labels are preserved.
pub fn a_separation(p: &Poset, a: &[ElementId]) -> Result<Poset> {
    let (rest, pairs) = separation(p, a)?;
    let mut new_id = vec![usize::MAX; p.len()];
    for (i, &x) in rest.iter().enumerate() {
        new_id[x] = i;
    }
    let labels = rest.iter().map(|&x| p.label(x).to_string()).collect();
    let pairs: Vec<_> = pairs.iter().map(|&(x, y)| (new_id[x], new_id[y])).collect();
    Poset::from_relation(labels, &pairs)
}

/// Components of the `A`-separation, in ids of `p`.
pub fn separation_components(p: &Poset, a: &[ElementId]) -> Result<Vec<Vec<ElementId>>> {
    let (rest, _) = separation(p, a)?;
    let sep = a_separation(p, a)?;
    Ok(sep
        .components()
        .into_iter()
        .map(|c| c.into_iter().map(|i| rest[i]).collect())
        .collect())
}

/// A connected poset in which removing `a` as described leaves several components.
pub fn is_seam(p: &Poset, a: &[ElementId]) -> Result<bool> {
    if !p.is_connected() {
        return Ok(false);
    }
    Ok(separation_components(p, a)?.len() >= 2)
}

fn foldable_condition(p: &Poset, a: &[ElementId]) -> bool {
    let seam = bits(p.len(), a.iter().copied());
    let (below, above) = shadows(p, a);
    below.ones().all(|x| {
        p.above(x)
            .ones()
            .filter(|&y| above[y])
            .all(|y| p.above(x).intersection(p.below(y)).any(|c| seam[c]))
    })
}

fn breakable_condition(p: &Poset, a: &[ElementId]) -> bool {
    let (below, above) = shadows(p, a);
    below.ones().all(|x| above.is_subset(p.above(x)))
}

pub fn is_foldable(p: &Poset, a: &[ElementId]) -> Result<bool> {
    Ok(is_seam(p, a)? && foldable_condition(p, a))
}

pub fn is_breakable(p: &Poset, a: &[ElementId]) -> Result<bool> {
    Ok(is_seam(p, a)? && breakable_condition(p, a))
}

/// Seam mode of `a`, preferring foldable, or `None` if `a` is neither kind of seam.
pub fn seam_mode(p: &Poset, a: &[ElementId]) -> Result<Option<SeamMode>> {
    if !is_seam(p, a)? {
        return Ok(None);
    }
    Ok(if foldable_condition(p, a) {
        Some(SeamMode::Foldable)
    } else if breakable_condition(p, a) {
        Some(SeamMode::Breakable)
    } else {
        None
    })
}

/// A seam fold resolved to ids.
struct Sides {
    a: Vec<ElementId>,
    f: FixedBitSet,
    s: FixedBitSet,
}

fn resolve(p: &Poset, sf: &SeamFold) -> Result<Sides> {
    let n = p.len();
    let ids = |ls: &[String]| ls.iter().map(|l| p.require(l)).collect::<Result<Vec<_>>>();
    let a = ids(&sf.seam)?;
    let f = ids(&sf.f_side)?;
    let s = ids(&sf.s_side)?;
    let mut seen = FixedBitSet::with_capacity(n);
    for &x in a.iter().chain(&f).chain(&s) {
        if seen.put(x) {
            return Err(Error::InvalidSeamFold(format!("`{}` is listed twice", p.label(x))));
        }
    }
    if seen.count_ones(..) != n {
        return Err(Error::InvalidSeamFold("seam and sides do not cover the poset".into()));
    }
    if a.is_empty() || f.is_empty() || s.is_empty() {
        return Err(Error::InvalidSeamFold("seam and both sides must be nonempty".into()));
    }
    Ok(Sides {
        a,
        f: bits(n, f),
        s: bits(n, s),
    })
}

fn validate(p: &Poset, sf: &SeamFold) -> Result<Sides> {
    let sides = resolve(p, sf)?;
    check_antichain(p, &sides.a)?;
    for comp in separation_components(p, &sides.a)? {
        let in_f = comp.iter().filter(|&&x| sides.f[x]).count();
        if in_f != 0 && in_f != comp.len() {
            return Err(Error::InvalidSeamFold(format!(
                "component of `{}` is split between the sides",
                p.label(comp[0])
            )));
        }
    }
    for x in sides.f.ones() {
        if let Some(y) = p.above(x).ones().find(|&y| sides.s[y]) {
            return Err(Error::InvalidSeamFold(format!(
                "`{}` stays but lies above `{}` of the folded part",
                p.label(y),
                p.label(x)
            )));
        }
    }
    let mode = seam_mode(p, &sides.a)?;
    let ok = match sf.mode {
        SeamMode::Foldable => mode == Some(SeamMode::Foldable),
        SeamMode::Breakable => breakable_condition(p, &sides.a) && mode.is_some(),
    };
    if !ok {
        return Err(Error::InvalidSeamFold(
            format!("seam is not {:?}", sf.mode).to_lowercase(),
        ));
    }
    Ok(sides)
}

/// Erases the comparabilities over the seam, keeps `S ∪ A` and reverses `F ∪ A`.
/// The result is checked to be a strict order.
pub fn fold(p: &Poset, sf: &SeamFold) -> Result<Poset> {
    let sides = validate(p, sf)?;
    let (below, above) = shadows(p, &sides.a);
    let n = p.len();
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for x in p.ids() {
        for y in p.above(x).ones() {
            if below[x] && above[y] {
                continue;
            }
            if !sides.f[x] && !sides.f[y] {
                up[x].insert(y);
            } else if !sides.s[x] && !sides.s[y] {
                up[y].insert(x);
            }
        }
    }
    Poset::from_closed_rows(p.labels().to_vec(), up)
        .map_err(|_| Error::InvalidSeamFold("folded relation is not a strict order".into()))
}

/// The dual fold: `F` lies below the seam and is folded up.
pub fn fold_dual(p: &Poset, sf: &SeamFold) -> Result<Poset> {
    Ok(fold(&p.dual(), sf)?.dual())
}

/// Seam fold at the full rank-`k` level, with `F` the components on the given side.
pub fn rank_level_fold(p: &Poset, k: usize, side: FoldSide) -> Result<SeamFold> {
    let a = p.rank_level(k);
    if a.is_empty() {
        return Err(Error::InvalidSeamFold(format!("rank {k} is empty")));
    }
    antichain_fold(p, &a, side)
}

/// Seam fold at an arbitrary antichain, with `F` the components on the given side.
pub fn antichain_fold(p: &Poset, a: &[ElementId], side: FoldSide) -> Result<SeamFold> {
    let names = |xs: &[ElementId]| -> String { xs.iter().map(|&x| p.label(x)).collect::<Vec<_>>().join(", ") };
    let Some(mode) = seam_mode(p, a)? else {
        return Err(Error::InvalidSeamFold(format!(
            "{{{}}} is not a foldable or breakable seam",
            names(a)
        )));
    };
    let (below, above) = shadows(p, a);
    let (mut f, mut s) = (Vec::new(), Vec::new());
    for comp in separation_components(p, a)? {
        let up = comp.iter().any(|&x| above[x]);
        let down = comp.iter().any(|&x| below[x]);
        if up && down {
            return Err(Error::InvalidSeamFold(format!(
                "a component meets both sides of {{{}}}",
                names(a)
            )));
        }
        let folded = match side {
            FoldSide::Upper => up,
            FoldSide::Lower => down,
        };
        if folded { &mut f } else { &mut s }.extend(comp);
    }
    if f.is_empty() || s.is_empty() {
        return Err(Error::InvalidSeamFold(format!(
            "{{{}}} has nothing on one side",
            names(a)
        )));
    }
    let sorted = |xs: Vec<ElementId>| -> Vec<String> {
        let mut v: Vec<String> = xs.into_iter().map(|x| p.label(x).to_string()).collect();
        v.sort();
        v
    };
    Ok(SeamFold {
        seam: sorted(a.to_vec()),
        f_side: sorted(f),
        s_side: sorted(s),
        mode,
    })
}

/// Applies the fold on the chosen side of the rank-`k` level.
pub fn fold_at_rank(p: &Poset, k: usize, side: FoldSide) -> Result<Poset> {
    let sf = rank_level_fold(p, k, side)?;
    match side {
        FoldSide::Upper => fold(p, &sf),
        FoldSide::Lower => fold_dual(p, &sf),
    }
}

fn dual_isomorphic(c: &Poset, d: &Poset) -> bool {
    let dd = d.dual();
    c.len() == dd.len()
        && invariant_fingerprint(c) == invariant_fingerprint(&dd)
        && find_isomorphism(c, &dd, &Constraint::none())
            .expect("unbudgeted search")
            .is_some()
}

/// Side conditions for folding a pair at rank `k` so that (non)isomorphism,
/// matching cards and matching neighborhoods carry over to the folded pair.
/// Every condition appears in the result, passed or not.
pub fn check_fold_pair(p: &Poset, p2: &Poset, k: usize, sf: &SeamFold, sf2: &SeamFold) -> Vec<PropertyCheck> {
    let mut out = Vec::new();
    let first = resolve(p, sf);
    let second = resolve(p2, sf2);
    let level = |q: &Poset| -> Vec<String> {
        let mut v: Vec<String> = q.rank_level(k).into_iter().map(|x| q.label(x).to_string()).collect();
        v.sort();
        v
    };
    let sorted = |v: &[String]| {
        let mut v = v.to_vec();
        v.sort();
        v
    };
    let levels_ok = level(p) == sorted(&sf.seam) && level(p2) == sorted(&sf2.seam);
    out.push(PropertyCheck::new(
        "seams-are-rank-levels",
        levels_ok,
        format!("both seams must be the full rank-{k} level"),
    ));
    let modes = (
        first.as_ref().ok().map(|s| seam_mode(p, &s.a).ok().flatten()),
        second.as_ref().ok().map(|s| seam_mode(p2, &s.a).ok().flatten()),
    );
    let kinds_ok = match modes {
        (Some(Some(_)), Some(Some(_))) => {
            let fa = first.as_ref().map(|s| foldable_condition(p, &s.a)).unwrap_or(false);
            let fb = second.as_ref().map(|s| foldable_condition(p2, &s.a)).unwrap_or(false);
            let ba = first.as_ref().map(|s| breakable_condition(p, &s.a)).unwrap_or(false);
            let bb = second.as_ref().map(|s| breakable_condition(p2, &s.a)).unwrap_or(false);
            (fa && fb) || (ba && bb)
        }
        _ => false,
    };
    out.push(PropertyCheck::new(
        "same-seam-kind",
        kinds_ok,
        "both seams foldable or both breakable",
    ));

    for (name, q, sides) in [("first", p, &first), ("second", p2, &second)] {
        let Ok(sides) = sides else {
            let e = sides.as_ref().err().map(|e| e.to_string()).unwrap_or_default();
            for id in ["sides", "dual-ranks"] {
                out.push(PropertyCheck::new(format!("{id}-{name}"), false, e.clone()));
            }
            continue;
        };
        let (below, above) = shadows(q, &sides.a);
        let unions = separation_components(q, &sides.a)
            .map(|cs| {
                cs.iter().all(|c| {
                    let in_f = c.iter().filter(|&&x| sides.f[x]).count();
                    in_f == 0 || in_f == c.len()
                })
            })
            .unwrap_or(false);
        let f_ok = sides.f.ones().all(|x| !below[x]);
        let s_ok = sides.s.ones().all(|x| !above[x]);
        out.push(PropertyCheck::new(
            format!("sides-{name}"),
            unions && f_ok && s_ok,
            format!(
                "F and S unions of separation components {unions}; F not below the seam {f_ok}; \
                 S not above the seam {s_ok}"
            ),
        ));
        let r = q.ranks();
        let high_ok = q.ids().filter(|&x| r.dual_rank[x] >= k).all(|x| !sides.f[x]);
        let low_ok = sides.s.ones().all(|x| r.rank[x] < k);
        out.push(PropertyCheck::new(
            format!("dual-ranks-{name}"),
            high_ok && low_ok,
            format!("dual rank >= {k} only in S and the seam {high_ok}; S below rank {k} {low_ok}"),
        ));
    }

    let parts = |q: &Poset, sides: &Sides, folded: bool| -> Vec<Poset> {
        let keep: Vec<ElementId> = q
            .ids()
            .filter(|&x| if folded { !sides.s[x] } else { !sides.f[x] })
            .collect();
        let sub = q.restrict(&keep);
        sub.components().iter().map(|c| sub.restrict(c)).collect()
    };
    for (name, (q, qs), (o, os)) in [
        ("first", (p, &first), (p2, &second)),
        ("second", (p2, &second), (p, &first)),
    ] {
        let id = format!("no-dual-crossover-{name}");
        let (Ok(qs), Ok(os)) = (qs, os) else {
            out.push(PropertyCheck::new(id, false, "sides could not be resolved"));
            continue;
        };
        let folded = parts(q, qs, true);
        let staying = parts(o, os, false);
        let clash = folded.iter().any(|c| staying.iter().any(|d| dual_isomorphic(c, d)));
        out.push(PropertyCheck::new(
            id,
            !clash,
            format!(
                "{} folded components against {} staying components of the other poset",
                folded.len(),
                staying.len()
            ),
        ));
    }
    out
}

/// One fold of a pair, with its side-condition report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldStep {
    pub rank: usize,
    pub side: FoldSide,
    pub mode: SeamMode,
    /// Whether the seam was a full rank level. Otherwise the rank-level side
    /// conditions are informational and non-isomorphism was checked by search.
    pub level_seam: bool,
    pub checks: Vec<PropertyCheck>,
}

/// A folded tower pair with many elements on its designated ranks.
#[derive(Clone, Debug)]
pub struct FoldedPair {
    pub q1: Poset,
    pub q2: Poset,
    /// Final ranks of the spine points `d1 ..= d{n+1}`.
    pub ranks: Vec<usize>,
    /// Number of middle gadgets in the unfolded towers.
    pub tower_n: usize,
    pub steps: Vec<FoldStep>,
}

/// Folds a pair at the spine pair `d{j}`, `p{j}`. Top-down folds use the full
/// rank level of the spine pair as seam. The final bottom fold uses the spine
/// pair itself: when that pair is not a full level, the side conditions do not
/// cover non-isomorphism, and it is established by search instead.
fn fold_pair_step(p: &Poset, p2: &Poset, side: FoldSide, j: usize) -> Result<(Poset, Poset, FoldStep)> {
    let (d, pp) = (format!("d{j}"), format!("p{j}"));
    let (a, b) = match side {
        FoldSide::Upper => (p.clone(), p2.clone()),
        FoldSide::Lower => (p.dual(), p2.dual()),
    };
    let k = a.ranks().rank[a.require(&d)?];
    let (sf, sf2) = match side {
        FoldSide::Upper => (rank_level_fold(&a, k, side)?, rank_level_fold(&b, k, side)?),
        FoldSide::Lower => {
            let pick = |q: &Poset| -> Result<SeamFold> {
                antichain_fold(q, &[q.require(&d)?, q.require(&pp)?], FoldSide::Upper)
            };
            (pick(&a)?, pick(&b)?)
        }
    };
    let mut checks = check_fold_pair(&a, &b, k, &sf, &sf2);
    let (fa, fb) = (fold(&a, &sf)?, fold(&b, &sf2)?);
    let (fa, fb) = match side {
        FoldSide::Upper => (fa, fb),
        FoldSide::Lower => (fa.dual(), fb.dual()),
    };
    let level_seam = checks.iter().any(|c| c.id == "seams-are-rank-levels" && c.passed);
    if level_seam {
        require_all(&checks)
    } else {
        let iso = find_isomorphism(&fa, &fb, &Constraint::none())?.is_some();
        checks.push(PropertyCheck::new(
            "folded-nonisomorphic",
            !iso,
            "seam is not a full level; exhaustive search on the folded pair",
        ));
        let needed: Vec<PropertyCheck> = checks
            .iter()
            .filter(|c| c.id != "seams-are-rank-levels" && !c.id.starts_with("dual-ranks-"))
            .cloned()
            .collect();
        require_all(&needed)
    }
    .map_err(|e| Error::InvalidSeamFold(format!("fold at `{d}`: {e}")))?;
    let rank = p.ranks().rank[p.require(&d)?];
    Ok((
        fa,
        fb,
        FoldStep {
            rank,
            side,
            mode: sf.mode,
            level_seam,
            checks,
        },
    ))
}

/// Builds the tower pair with `t = (s/2)(n+2)` middle gadgets, folds it top-down
/// at the spine points `d{i(n+2)}` for `i = s/2, ..., 1`, then folds the bottom
/// gadget up at `d0`.
pub fn build_folded_pair(q: &GadgetQ, r: &GadgetR, n: usize, s: usize) -> Result<FoldedPair> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if s == 0 || s % 2 != 0 {
        return Err(Error::InvalidParameter("s must be even and at least 2".into()));
    }
    let half = s / 2;
    let t = half * (n + 2);
    let pair = build_pair(&TowerSpec { q, r, n: t })?;
    let (mut h, mut k) = (pair.p1, pair.p2);
    let mut steps = Vec::new();
    for i in (1..=half).rev() {
        let (a, b, step) = fold_pair_step(&h, &k, FoldSide::Upper, i * (n + 2))?;
        (h, k) = (a, b);
        steps.push(step);
    }
    let (a, b, step) = fold_pair_step(&h, &k, FoldSide::Lower, 0)?;
    (h, k) = (a, b);
    steps.push(step);

    let (rh, rk) = (h.ranks(), k.ranks());
    let mut ranks = Vec::new();
    for i in 1..=n + 1 {
        let at =
            |q: &Poset, rp: &crate::poset::RankProfile, l: String| -> Result<usize> { Ok(rp.rank[q.require(&l)?]) };
        let rd = at(&h, &rh, format!("d{i}"))?;
        let same = [
            at(&h, &rh, format!("p{i}"))?,
            at(&k, &rk, format!("d{i}"))?,
            at(&k, &rk, format!("p{i}"))?,
        ];
        if same.iter().any(|&x| x != rd) {
            return Err(Error::InvalidSeamFold(format!(
                "spine point d{i} is not level after folding"
            )));
        }
        ranks.push(rd);
    }
    Ok(FoldedPair {
        q1: h,
        q2: k,
        ranks,
        tower_n: t,
        steps,
    })
}

/// Every cover joins consecutive ranks.
pub fn is_graded_by_rank(p: &Poset) -> bool {
    let r = p.ranks();
    p.covers().iter().all(|&(x, y)| r.rank[y] == r.rank[x] + 1)
}

/// Repeatedly folds the top level down until the height is at most `target`.
pub fn fold_to_height(p: &Poset, target: usize) -> Result<Poset> {
    if target == 0 {
        return Err(Error::InvalidParameter("target height must be at least 1".into()));
    }
    if !is_graded_by_rank(p) {
        return Err(Error::NotGraded);
    }
    let mut cur = p.clone();
    loop {
        let h = cur.height();
        if h <= target {
            return Ok(cur);
        }
        cur = fold_at_rank(&cur, h - 1, FoldSide::Upper)?;
    }
}

/// Ranks whose full level is a foldable or breakable seam with both sides nonempty.
pub fn rank_seams(p: &Poset) -> Vec<usize> {
    (0..=p.height())
        .filter(|&k| rank_level_fold(p, k, FoldSide::Upper).is_ok())
        .collect()
}

/// Folds away rank-level seams until at most one remains. The two consecutive
/// seams with the largest rank gap (lowest pair on ties) are kept until last.
pub fn fold_to_one_seam(p: &Poset) -> Result<Poset> {
    let mut cur = p.clone();
    for _ in 0..=p.len() {
        let seams = rank_seams(&cur);
        if seams.len() <= 1 {
            return Ok(cur);
        }
        let mut j = 0;
        for w in 1..seams.len() - 1 {
            if seams[w + 1] - seams[w] > seams[j + 1] - seams[j] {
                j = w;
            }
        }
        let (lo, hi) = (seams[j], seams[j + 1]);
        let top = *seams.last().expect("at least two seams");
        cur = if top > hi {
            fold_at_rank(&cur, top, FoldSide::Upper)?
        } else if seams[0] < lo {
            fold_at_rank(&cur, seams[0], FoldSide::Lower)?
        } else {
            fold_at_rank(&cur, hi, FoldSide::Upper)?
        };
    }
    Err(Error::InvalidSeamFold("seam folding did not terminate".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Poset {
        Poset::chain((0..n).map(|i| format!("c{i}"))).unwrap()
    }

    #[test]
    fn separation_of_a_chain() {
        let p = chain(3);
        let sep = a_separation(&p, &[1]).unwrap();
        assert_eq!(sep.labels(), ["c0", "c2"]);
        assert_eq!(sep.relation_count(), 0);
        assert_eq!(a_separation(&chain(2), &[1]).unwrap().len(), 1);
        assert!(matches!(a_separation(&p, &[0, 1]), Err(Error::NotAntichain)));
    }

    #[test]
    fn seam_kinds() {
        let p = chain(3);
        assert!(is_seam(&p, &[1]).unwrap());
        assert!(is_foldable(&p, &[1]).unwrap());
        assert!(is_breakable(&p, &[1]).unwrap());
        let a = Poset::antichain(["x", "y"]).unwrap();
        assert!(!is_seam(&a, &[0]).unwrap());
    }

    #[test]
    fn folding_a_chain_gives_a_wedge() {
        let p = chain(3);
        let sf = rank_level_fold(&p, 1, FoldSide::Upper).unwrap();
        assert_eq!(sf.f_side, ["c2"]);
        let f = fold(&p, &sf).unwrap();
        assert!(f.lt(0, 1) && f.lt(2, 1) && !f.comparable(0, 2));
        let g = fold_at_rank(&p, 1, FoldSide::Lower).unwrap();
        assert!(g.lt(1, 0) && g.lt(1, 2));
    }

    #[test]
    fn fold_rejects_bad_sides() {
        let p = chain(3);
        let mut sf = rank_level_fold(&p, 1, FoldSide::Upper).unwrap();
        std::mem::swap(&mut sf.f_side, &mut sf.s_side);
        assert!(matches!(fold(&p, &sf), Err(Error::InvalidSeamFold(_))));
        sf.s_side.clear();
        assert!(matches!(fold(&p, &sf), Err(Error::InvalidSeamFold(_))));
    }

    #[test]
    fn four_chain_folds_to_height_two() {
        let f = fold_to_height(&chain(4), 2).unwrap();
        assert_eq!(f.height(), 2);
        let v = Poset::from_covers(["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap();
        assert_eq!(fold_to_height(&v, 2).unwrap(), v);
        let skew = Poset::from_covers(["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("d", "c")]).unwrap();
        assert!(matches!(fold_to_height(&skew, 2), Err(Error::NotGraded)));
    }

    #[test]
    fn chain_folds_to_one_seam() {
        let f = fold_to_one_seam(&chain(8)).unwrap();
        assert!(rank_seams(&f).len() <= 1);
    }
}
