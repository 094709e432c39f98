//! The rigid bottom gadget, found by a bounded template search or loaded from JSON.
//!
//! Template: minimal `a`, `b`; maximal `d`, `p`; one `ct` below `d`, `p`; `cb0`
//! above `a` and `cb1` above `b`. V-shaped groups (one minimum above `a` and `b`,
//! two maxima) come in two families B and C = B with `d`/`p` swapped, and
//! Λ-shaped groups (two minima, one maximum below `d` and `p`) in families A and
//! D. B minima sit below all A maxima and C minima below all D maxima.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{label_map, require_all, role, GadgetJson, LabelMap, PropertyCheck};
use crate::error::{Error, Result};
use crate::iso::{find_isomorphism, is_rigid, Constraint};
use crate::poset::Poset;

/// Witness maps for the seven properties, stored by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QWitnesses {
    /// Isomorphism `Q \ {d} → Q \ {p}` with `p ↦ d`.
    pub psi: LabelMap,
    /// Automorphism of `Q \ {a}` swapping `d`, `p` and fixing `b`.
    pub psi_a: LabelMap,
    /// Automorphism of `Q \ {b}` swapping `d`, `p` and fixing `a`.
    pub psi_b: LabelMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetQ {
    pub poset: Poset,
    pub named: BTreeMap<String, Vec<String>>,
    pub witnesses: QWitnesses,
    /// Every property and filter result, including non-blocking ones.
    pub checks: Vec<PropertyCheck>,
}

impl GadgetQ {
    pub fn to_json(&self) -> GadgetJson {
        GadgetJson {
            poset: self.poset.to_json(),
            named: self.named.clone(),
        }
    }

    pub fn label_of(&self, role_name: &str) -> &str {
        role(&self.named, role_name).expect("validated roles")
    }
}

/// A group is a pair of 3-bit profiles, one per two-element side.
///
/// V groups: bits (above `cb*`, below `d`, below `p`) of each maximum.
/// Λ groups: bits (below `ct`, above `a`, above `b`) of each minimum.
pub type GroupProfile = (u8, u8);

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QTemplate {
    pub b: Vec<GroupProfile>,
    pub a: Vec<GroupProfile>,
    pub d: Vec<GroupProfile>,
}

/// Exchanges the two low bits (`d`/`p`, or `a`/`b`).
fn swap_bits(x: u8) -> u8 {
    (x & 4) | ((x & 2) >> 1) | ((x & 1) << 1)
}

fn swap_group((u, v): GroupProfile) -> GroupProfile {
    let (u, v) = (swap_bits(u), swap_bits(v));
    (u.min(v), u.max(v))
}

fn swap_family(f: &[GroupProfile]) -> Vec<GroupProfile> {
    let mut out: Vec<_> = f.iter().copied().map(swap_group).collect();
    out.sort_unstable();
    out
}

/// Builds the template poset together with its role map.
pub fn q_from_template(t: &QTemplate) -> (Poset, BTreeMap<String, Vec<String>>) {
    let mut labels: Vec<String> = ["a", "b", "d", "p", "ct", "cb0", "cb1"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut pairs: Vec<(String, String)> = vec![
        ("a".into(), "cb0".into()),
        ("b".into(), "cb1".into()),
        ("ct".into(), "d".into()),
        ("ct".into(), "p".into()),
    ];
    let c = swap_family(&t.b);
    let mut lt = |x: &str, y: &str| pairs.push((x.to_string(), y.to_string()));
    let mut v_minima = Vec::new();
    for (family, groups) in [("B", &t.b), ("C", &c)] {
        let mut mins = Vec::new();
        for (i, &(u, v)) in groups.iter().enumerate() {
            let g = format!("{family}{i}");
            let min = format!("{g}.min");
            labels.push(format!("{g}.max0"));
            labels.push(min.clone());
            labels.push(format!("{g}.max1"));
            lt("a", &min);
            lt("b", &min);
            for (slot, bits) in [("max0", u), ("max1", v)] {
                let max = format!("{g}.{slot}");
                lt(&min, &max);
                if bits & 4 != 0 {
                    lt("cb0", &max);
                    lt("cb1", &max);
                }
                if bits & 2 != 0 {
                    lt(&max, "d");
                }
                if bits & 1 != 0 {
                    lt(&max, "p");
                }
            }
            mins.push(min);
        }
        v_minima.push(mins);
    }
    for (k, (family, groups)) in [("A", &t.a), ("D", &t.d)].into_iter().enumerate() {
        for (i, &(u, v)) in groups.iter().enumerate() {
            let g = format!("{family}{i}");
            let max = format!("{g}.max");
            labels.push(format!("{g}.min0"));
            labels.push(max.clone());
            labels.push(format!("{g}.min1"));
            lt(&max, "d");
            lt(&max, "p");
            for (slot, bits) in [("min0", u), ("min1", v)] {
                let min = format!("{g}.{slot}");
                lt(&min, &max);
                if bits & 4 != 0 {
                    lt(&min, "ct");
                }
                if bits & 2 != 0 {
                    lt("a", &min);
                }
                if bits & 1 != 0 {
                    lt("b", &min);
                }
            }
            for vm in &v_minima[k] {
                lt(vm, &max);
            }
        }
    }
    let poset = Poset::from_covers(labels, &pairs).expect("template is acyclic");
    let named = ["a", "b", "d", "p"]
        .iter()
        .map(|r| (r.to_string(), vec![r.to_string()]))
        .collect();
    (poset, named)
}

fn n_poset() -> Poset {
    Poset::from_covers(["0", "1", "2", "3"], &[("0", "2"), ("1", "2"), ("1", "3")]).expect("valid N")
}

fn card_map(q: &Poset, remove_src: &str, remove_dst: &str, pins: &[(&str, &str)]) -> Result<Option<LabelMap>> {
    let src = q.remove(q.require(remove_src)?);
    let dst = q.remove(q.require(remove_dst)?);
    let c = Constraint::none().pin_labels(&src, &dst, pins)?;
    Ok(find_isomorphism(&src, &dst, &c)?.map(|m| label_map(&m, &src, &dst)))
}

fn sorted_labels(q: &Poset, ids: Vec<usize>) -> Vec<String> {
    let mut v: Vec<String> = ids.into_iter().map(|x| q.label(x).to_string()).collect();
    v.sort();
    v
}

/// Checks properties 1–7 (blocking) and the auxiliary filters used for the
/// tower's rank and neighborhood claims (ids prefixed `filter-`).
pub fn check_q(q: &Poset, named: &BTreeMap<String, Vec<String>>) -> Result<(Vec<PropertyCheck>, Option<QWitnesses>)> {
    run_checks(q, named, false)
}

fn run_checks(
    q: &Poset,
    named: &BTreeMap<String, Vec<String>>,
    stop_early: bool,
) -> Result<(Vec<PropertyCheck>, Option<QWitnesses>)> {
    let (a, b, d, p) = (
        role(named, "a")?,
        role(named, "b")?,
        role(named, "d")?,
        role(named, "p")?,
    );
    let mut checks = Vec::new();
    let expect_pair = |want: [&str; 2], got: Vec<String>| {
        let mut want: Vec<String> = want.iter().map(|s| s.to_string()).collect();
        want.sort();
        (want == got, format!("{got:?}"))
    };
    let (ok, detail) = expect_pair([d, p], sorted_labels(q, q.maximal_elements()));
    checks.push(PropertyCheck::new(
        "q-two-maximal",
        ok,
        format!("maximal elements {detail}"),
    ));
    let (ok_min, detail) = expect_pair([a, b], sorted_labels(q, q.minimal_elements()));
    let r = q.ranks();
    let (di, pi) = (q.require(d)?, q.require(p)?);
    checks.push(PropertyCheck::new(
        "q-maximal-same-rank",
        r.rank[di] == r.rank[pi],
        format!("rank(d) = {}, rank(p) = {}", r.rank[di], r.rank[pi]),
    ));
    let psi = card_map(q, d, p, &[(p, d)])?;
    checks.push(PropertyCheck::new(
        "q-card-d-to-card-p",
        psi.is_some(),
        "isomorphism Q∖{d} → Q∖{p} with p ↦ d",
    ));
    if stop_early && checks.iter().any(|c| !c.passed) {
        return Ok((checks, None));
    }
    checks.push(PropertyCheck::new(
        "q-two-minimal",
        ok_min,
        format!("minimal elements {detail}"),
    ));
    let psi_a = card_map(q, a, a, &[(p, d), (d, p), (b, b)])?;
    checks.push(PropertyCheck::new(
        "q-automorphism-without-a",
        psi_a.is_some(),
        "automorphism of Q∖{a} swapping d, p and fixing b",
    ));
    let psi_b = card_map(q, b, b, &[(p, d), (d, p), (a, a)])?;
    checks.push(PropertyCheck::new(
        "q-automorphism-without-b",
        psi_b.is_some(),
        "automorphism of Q∖{b} swapping d, p and fixing a",
    ));
    if stop_early && checks.iter().any(|c| !c.passed) {
        return Ok((checks, None));
    }
    checks.push(PropertyCheck::new(
        "q-rigid",
        is_rigid(q),
        "Q has only the identity automorphism",
    ));

    checks.push(PropertyCheck::new(
        "filter-height-3",
        r.height == 3,
        format!("height {}", r.height),
    ));
    let n = n_poset();
    let extremal = |x: usize| q.is_minimal(x) || q.is_maximal(x);
    if stop_early && checks.iter().any(|c| !c.passed) {
        return Ok((checks, None));
    }
    let n_shaped: Vec<String> = q
        .ids()
        .filter(|&x| !extremal(x))
        .filter(|&x| {
            let strict = q.restrict(&q.above(x).ones().collect::<Vec<_>>());
            strict.len() == 4
                && find_isomorphism(&strict, &n, &Constraint::none())
                    .ok()
                    .flatten()
                    .is_some()
        })
        .map(|x| q.label(x).to_string())
        .collect();
    checks.push(PropertyCheck::new(
        "filter-no-n-upper-bounds",
        n_shaped.is_empty(),
        format!("non-extremal elements with N-shaped strict upper bounds: {n_shaped:?}"),
    ));
    // A card of Q at ranks 1 or 2 must not carry a swap of d and p onto another
    // card of the same rank; otherwise the tower would match such cards.
    let mut swapping = Vec::new();
    for x in q.ids().filter(|&x| !extremal(x)) {
        for y in q.ids().filter(|&y| !extremal(y) && r.rank[y] == r.rank[x]) {
            if card_map(q, q.label(x), q.label(y), &[(d, p), (p, d)])?.is_some() {
                swapping.push((q.label(x).to_string(), q.label(y).to_string()));
            }
        }
    }
    checks.push(PropertyCheck::new(
        "filter-no-swapping-cards",
        swapping.is_empty(),
        format!("card pairs admitting a d/p swap: {swapping:?}"),
    ));

    let witnesses = match (psi, psi_a, psi_b) {
        (Some(psi), Some(psi_a), Some(psi_b)) => Some(QWitnesses { psi, psi_a, psi_b }),
        _ => None,
    };
    Ok((checks, witnesses))
}

fn blocking(checks: &[PropertyCheck]) -> Vec<PropertyCheck> {
    checks
        .iter()
        .filter(|c| !c.id.starts_with("filter-"))
        .cloned()
        .collect()
}

fn assemble(poset: Poset, named: BTreeMap<String, Vec<String>>, require_filters: bool) -> Result<GadgetQ> {
    let (checks, witnesses) = run_checks(&poset, &named, require_filters)?;
    if require_filters {
        require_all(&checks)?;
    } else {
        require_all(&blocking(&checks))?;
    }
    let witnesses = witnesses.ok_or_else(|| Error::gadget("q-witnesses", "missing witness"))?;
    Ok(GadgetQ {
        poset,
        named,
        witnesses,
        checks,
    })
}

/// Loads a user-supplied gadget; properties 1–7 must hold, filters are reported only.
pub fn load_q(json: &GadgetJson) -> Result<GadgetQ> {
    let poset = Poset::from_json(&json.poset)?;
    assemble(poset, json.named.clone(), false)
}

/// Group types with two distinct side profiles, in increasing order.
fn group_types(profiles: &[u8]) -> Vec<GroupProfile> {
    let mut out = Vec::new();
    for (i, &u) in profiles.iter().enumerate() {
        for &v in &profiles[i + 1..] {
            out.push((u, v));
        }
    }
    out
}

/// All k-subsets of `items` in lexicographic index order.
fn subsets<T: Copy>(items: &[T], k: usize) -> Vec<Vec<T>> {
    fn go<T: Copy>(items: &[T], k: usize, start: usize, cur: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

fn projected(f: &[GroupProfile], mask: u8) -> Vec<u8> {
    let mut v: Vec<u8> = f.iter().flat_map(|&(u, w)| [u & mask, w & mask]).collect();
    v.sort_unstable();
    v
}

/// Necessary conditions on the V families: the cards without `d` and without
/// `p` see the same (`cb`, top) incidence counts, and B is not self-symmetric.
fn top_family_plausible(b: &[GroupProfile]) -> bool {
    let with_d: Vec<u8> = projected(b, 0b110).into_iter().map(|x| x >> 1).collect();
    let mut with_p: Vec<u8> = projected(b, 0b101)
        .into_iter()
        .map(|x| ((x & 4) >> 1) | (x & 1))
        .collect();
    with_p.sort_unstable();
    b != swap_family(b).as_slice() && with_d == with_p
}

/// Necessary conditions on the Λ families.
fn bottom_families_plausible(a: &[GroupProfile], d: &[GroupProfile]) -> bool {
    projected(a, 0b110) == projected(d, 0b110)
        && projected(a, 0b101) == projected(d, 0b101)
        && a != d
        && a != swap_family(d).as_slice()
        && !(a == swap_family(a).as_slice() && d == swap_family(d).as_slice())
}

/// Cheap necessary conditions checked before the full property run.
fn quick_plausible(q: &Poset) -> bool {
    let r = q.ranks();
    let top: Vec<_> = ["d", "p"].iter().filter_map(|l| q.id(l)).collect();
    r.height == 3
        && q.maximal_elements().len() == 2
        && q.minimal_elements().len() == 2
        && top.len() == 2
        && r.rank[top[0]] == r.rank[top[1]]
        && is_rigid(q)
}

/// Searches templates in order of increasing group count and returns the first
/// one passing every check. `budget` caps the number of fully checked candidates.
pub fn find_q(budget: u64) -> Result<GadgetQ> {
    let profiles = [1u8, 2, 3, 5, 6, 7];
    let types = group_types(&profiles);
    let mut visited = 0u64;
    for total in 3..=3 * types.len() {
        for nb in 1..=total.saturating_sub(2).min(types.len()) {
            let tops: Vec<_> = subsets(&types, nb)
                .into_iter()
                .filter(|b| top_family_plausible(b))
                .collect();
            if tops.is_empty() {
                continue;
            }
            for na in 1..=(total - nb - 1).min(types.len()) {
                let nd = total - nb - na;
                if nd > types.len() {
                    continue;
                }
                let a_sets = subsets(&types, na);
                let d_sets = subsets(&types, nd);
                for a in &a_sets {
                    for d in &d_sets {
                        if !bottom_families_plausible(a, d) {
                            continue;
                        }
                        for b in &tops {
                            if visited >= budget {
                                return Err(Error::NotFound(budget));
                            }
                            visited += 1;
                            let t = QTemplate {
                                b: b.clone(),
                                a: a.clone(),
                                d: d.clone(),
                            };
                            let (poset, named) = q_from_template(&t);
                            if !quick_plausible(&poset) {
                                continue;
                            }
                            if let Ok(g) = assemble(poset, named, true) {
                                return Ok(g);
                            }
                        }
                    }
                }
            }
        }
    }
    Err(Error::NotFound(visited))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_bits_exchanges_low_bits() {
        assert_eq!(swap_bits(0b101), 0b110);
        assert_eq!(swap_bits(0b011), 0b011);
        assert_eq!(swap_group((0b001, 0b110)), (0b010, 0b101));
    }

    #[test]
    fn subsets_in_order() {
        assert_eq!(subsets(&[1, 2, 3], 2), vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    }
}
