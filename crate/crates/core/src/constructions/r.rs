//! The 42-element middle gadget and its adjacent-rank variant.

use std::collections::BTreeMap;

use super::{label_map, require_all, GadgetJson, LabelMap, PropertyCheck};
use crate::error::Result;
use crate::iso::{all_isomorphisms, automorphisms_with, find_isomorphism, is_rigid, Constraint};
use crate::poset::Poset;

/// Automorphisms of cards of the middle gadget, stored by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RWitnesses {
    /// Automorphism of `R \ {p̄}` fixing `d̄` and swapping `d`, `p`.
    pub psi_pbar: LabelMap,
    /// Automorphism of `R \ {d̄}` fixing `p̄` and swapping `d`, `p`.
    pub psi_dbar: LabelMap,
    /// Automorphism of `R` swapping `d`, `p` and `d̄`, `p̄`.
    pub phi: LabelMap,
    /// Automorphism of `R \ {c_b}` fixing `d̄`, `p̄` and swapping `d`, `p` (if any).
    pub without_cb: Option<LabelMap>,
    /// Same for `R \ {c_t}`.
    pub without_ct: Option<LabelMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetR {
    pub poset: Poset,
    pub named: BTreeMap<String, Vec<String>>,
    pub witnesses: RWitnesses,
}

impl GadgetR {
    pub fn to_json(&self) -> GadgetJson {
        GadgetJson {
            poset: self.poset.to_json(),
            named: self.named.clone(),
        }
    }
}

pub(crate) const D: &str = "d";
pub(crate) const P: &str = "p";
pub(crate) const DBAR: &str = "dbar";
pub(crate) const PBAR: &str = "pbar";
pub(crate) const CB: &str = "cb";
pub(crate) const CT: &str = "ct";

const GROUPS: [&str; 12] = [
    "A1", "A2", "A12", "B1", "B2", "B12", "C12", "C1", "C2", "D12", "D1", "D2",
];

/// Relation builder over string labels.
#[derive(Default)]
struct Builder {
    labels: Vec<String>,
    pairs: Vec<(String, String)>,
}

impl Builder {
    fn add(&mut self, l: impl Into<String>) {
        self.labels.push(l.into());
    }

    fn lt(&mut self, a: impl Into<String>, b: impl Into<String>) {
        self.pairs.push((a.into(), b.into()));
    }

    fn build(self) -> Poset {
        Poset::from_covers(self.labels, &self.pairs).expect("gadget encoding is acyclic")
    }
}

fn member(group: &str, slot: &str) -> String {
    format!("{group}.{slot}")
}

/// Group members in drawing order (left to right).
fn members(group: &str, v_shaped: bool) -> [String; 3] {
    if v_shaped {
        [member(group, "max0"), member(group, "min"), member(group, "max1")]
    } else {
        [member(group, "min0"), member(group, "max"), member(group, "min1")]
    }
}

fn named_roles(v_shaped: impl Fn(&str) -> bool) -> BTreeMap<String, Vec<String>> {
    let mut named = BTreeMap::new();
    for (role, l) in [
        ("d", D),
        ("p", P),
        ("d_bar", DBAR),
        ("p_bar", PBAR),
        ("c_b", CB),
        ("c_t", CT),
    ] {
        named.insert(role.to_string(), vec![l.to_string()]);
    }
    for g in GROUPS {
        named.insert(g.to_string(), members(g, v_shaped(g)).to_vec());
    }
    named
}

/// The middle gadget of height 3 with 42 elements.
///
/// B and C groups are V-shaped, A and D groups are Λ-shaped. `d` is above every
/// middle maximal element except the circled ones, `p` except the boxed ones;
/// dually `d̄`, `p̄` below the middle minimal elements.
pub fn encode_r() -> (Poset, BTreeMap<String, Vec<String>>) {
    let circled = [
        "B12.max1", "B2.max0", "C12.max1", "C1.max0", "A12.min1", "A2.min0", "D12.min1", "D1.min0",
    ];
    let boxed = [
        "B12.max0", "B1.max1", "C12.max0", "C2.max1", "A12.min0", "A1.min1", "D12.min0", "D2.min1",
    ];
    let below_cb = ["B1.max1", "B2.max1", "B12.max1", "C12.max0", "C1.max0", "C2.max0"];
    let above_ct = ["A1.min1", "A2.min1", "A12.min1", "D12.min0", "D1.min0", "D2.min0"];
    let v_shaped = |g: &str| g.starts_with('B') || g.starts_with('C');

    let mut b = Builder::default();
    for l in [D, P, DBAR, PBAR, CB, CT] {
        b.add(l);
    }
    for g in GROUPS {
        let m = members(g, v_shaped(g));
        for l in &m {
            b.add(l.clone());
        }
        let (maxes, mins): (Vec<&String>, Vec<&String>) = if v_shaped(g) {
            (vec![&m[0], &m[2]], vec![&m[1]])
        } else {
            (vec![&m[1]], vec![&m[0], &m[2]])
        };
        for lo in &mins {
            for hi in &maxes {
                b.lt(lo.as_str(), hi.as_str());
            }
        }
        for hi in maxes {
            if !circled.contains(&hi.as_str()) {
                b.lt(hi.as_str(), D);
            }
            if !boxed.contains(&hi.as_str()) {
                b.lt(hi.as_str(), P);
            }
        }
        for lo in mins {
            if !circled.contains(&lo.as_str()) {
                b.lt(DBAR, lo.as_str());
            }
            if !boxed.contains(&lo.as_str()) {
                b.lt(PBAR, lo.as_str());
            }
        }
    }
    for hi in below_cb {
        b.lt(CB, hi);
    }
    for lo in above_ct {
        b.lt(lo, CT);
    }
    b.lt(DBAR, CB);
    b.lt(PBAR, CB);
    b.lt(CT, D);
    b.lt(CT, P);
    // Complete bipartite links: B minima below A maxima, C minima below D maxima.
    for (low, high) in [("B", "A"), ("C", "D")] {
        for gl in GROUPS.iter().filter(|g| g.starts_with(low)) {
            for gh in GROUPS.iter().filter(|g| g.starts_with(high)) {
                b.lt(member(gl, "min"), member(gh, "max"));
            }
        }
    }
    (b.build(), named_roles(v_shaped))
}

/// The adjacent-rank variant: all twelve groups V-shaped, `d̄`, `p̄` above the
/// B and C maxima, `d`, `p` above the A and D maxima, and `d̄`, `p̄` below `d`, `p`.
pub fn encode_r_adjacent() -> (Poset, BTreeMap<String, Vec<String>>) {
    let circled = [
        "B12.max1", "B2.max0", "C12.max1", "C1.max0", "A12.max1", "A2.max0", "D12.max1", "D1.max0",
    ];
    let boxed = [
        "B12.max0", "B1.max1", "C12.max0", "C2.max1", "A12.max0", "A1.max1", "D12.max0", "D2.max1",
    ];
    let below_cb = ["B1.max1", "B2.max1", "B12.max1", "C12.max0", "C1.max0", "C2.max0"];
    let below_ct = ["A1.max1", "A2.max1", "A12.max1", "D12.max0", "D1.max0", "D2.max0"];

    let mut b = Builder::default();
    for l in [D, P, DBAR, PBAR, CB, CT] {
        b.add(l);
    }
    for g in GROUPS {
        let m = members(g, true);
        for l in &m {
            b.add(l.clone());
        }
        b.lt(m[1].as_str(), m[0].as_str());
        b.lt(m[1].as_str(), m[2].as_str());
        let (top_d, top_p) = if g.starts_with('B') || g.starts_with('C') {
            (DBAR, PBAR)
        } else {
            (D, P)
        };
        for hi in [&m[0], &m[2]] {
            if !circled.contains(&hi.as_str()) {
                b.lt(hi.as_str(), top_d);
            }
            if !boxed.contains(&hi.as_str()) {
                b.lt(hi.as_str(), top_p);
            }
        }
    }
    for hi in below_cb {
        b.lt(CB, hi);
    }
    for hi in below_ct {
        b.lt(CT, hi);
    }
    for lo in [DBAR, PBAR] {
        for hi in [D, P] {
            b.lt(lo, hi);
        }
    }
    for (low, high) in [("B", "A"), ("C", "D")] {
        for gl in GROUPS.iter().filter(|g| g.starts_with(low)) {
            for gh in GROUPS.iter().filter(|g| g.starts_with(high)) {
                b.lt(member(gl, "min"), member(gh, "max0"));
                b.lt(member(gl, "min"), member(gh, "max1"));
            }
        }
    }
    (b.build(), named_roles(|_| true))
}

fn sub(p: &Poset, named: &BTreeMap<String, Vec<String>>, parts: &[&str]) -> Poset {
    let mut keep = Vec::new();
    for part in parts {
        match named.get(*part) {
            Some(ls) => keep.extend(ls.iter().filter_map(|l| p.id(l))),
            None => {
                // A family letter stands for its three groups.
                for g in GROUPS.iter().filter(|g| g.starts_with(*part)) {
                    keep.extend(named[*g].iter().filter_map(|l| p.id(l)));
                }
            }
        }
    }
    p.restrict(&keep)
}

fn group_of(label: &str) -> &str {
    label.split('.').next().unwrap_or(label)
}

/// Automorphism of `p` minus `removed` satisfying label pins, as a label map.
fn card_automorphism(p: &Poset, removed: Option<&str>, pins: &[(&str, &str)]) -> Option<LabelMap> {
    let card = match removed {
        Some(l) => p.remove(p.id(l)?),
        None => p.clone(),
    };
    let c = Constraint::none().pin_labels(&card, &card, pins).ok()?;
    let m = find_isomorphism(&card, &card, &c).ok()??;
    Some(label_map(&m, &card, &card))
}

fn check_extremes(p: &Poset, checks: &mut Vec<PropertyCheck>, minimal_bars: bool) {
    let labels = |ids: Vec<usize>| -> Vec<String> {
        let mut v: Vec<String> = ids.into_iter().map(|x| p.label(x).to_string()).collect();
        v.sort();
        v
    };
    let maxima = labels(p.maximal_elements());
    checks.push(PropertyCheck::new(
        "two-maximal",
        maxima == [D, P],
        format!("maximal elements {maxima:?}"),
    ));
    let r = p.ranks();
    let (d, pp) = (p.id(D).unwrap(), p.id(P).unwrap());
    checks.push(PropertyCheck::new(
        "maximal-same-rank",
        r.rank[d] == r.rank[pp],
        format!("rank(d) = {}, rank(p) = {}", r.rank[d], r.rank[pp]),
    ));
    let minima = labels(p.minimal_elements());
    if minimal_bars {
        checks.push(PropertyCheck::new(
            "two-minimal",
            minima == [DBAR, PBAR],
            format!("minimal elements {minima:?}"),
        ));
    } else {
        let bars_minimal = minima.iter().any(|l| l == DBAR || l == PBAR);
        checks.push(PropertyCheck::new(
            "bars-not-minimal",
            !bars_minimal,
            format!("minimal elements {minima:?}"),
        ));
    }
}

/// Swap-type automorphisms shared by both variants; fills the witnesses.
fn check_symmetries(p: &Poset, checks: &mut Vec<PropertyCheck>) -> RWitnesses {
    let swap = [(D, P), (P, D)];
    let psi_pbar = card_automorphism(p, Some(PBAR), &[(D, P), (P, D), (DBAR, DBAR)]);
    checks.push(PropertyCheck::new(
        "automorphism-without-pbar",
        psi_pbar.is_some(),
        "card without p̄: fix d̄, swap d and p",
    ));
    let psi_dbar = card_automorphism(p, Some(DBAR), &[(D, P), (P, D), (PBAR, PBAR)]);
    checks.push(PropertyCheck::new(
        "automorphism-without-dbar",
        psi_dbar.is_some(),
        "card without d̄: fix p̄, swap d and p",
    ));
    let phi = card_automorphism(p, None, &[swap[0], swap[1], (DBAR, PBAR), (PBAR, DBAR)]);
    checks.push(PropertyCheck::new(
        "swap-automorphism",
        phi.is_some(),
        "swap d with p and d̄ with p̄",
    ));
    let fixing_bottom = Constraint::none()
        .pin_labels(p, p, &[(DBAR, DBAR), (PBAR, PBAR)])
        .expect("roles exist");
    let auts = automorphisms_with(p, &fixing_bottom).expect("valid constraint");
    let (d, pp) = (p.id(D).unwrap(), p.id(P).unwrap());
    let twisting = auts.iter().filter(|m| m.apply(d) != d || m.apply(pp) != pp).count();
    checks.push(PropertyCheck::new(
        "no-twist",
        twisting == 0,
        format!(
            "{} automorphisms fix d̄ and p̄, {twisting} of them move d or p",
            auts.len()
        ),
    ));
    let without_cb = card_automorphism(p, Some(CB), &[(DBAR, DBAR), (PBAR, PBAR), swap[0], swap[1]]);
    let without_ct = card_automorphism(p, Some(CT), &[(DBAR, DBAR), (PBAR, PBAR), swap[0], swap[1]]);
    RWitnesses {
        psi_pbar: psi_pbar.unwrap_or_default(),
        psi_dbar: psi_dbar.unwrap_or_default(),
        phi: phi.unwrap_or_default(),
        without_cb,
        without_ct,
    }
}

/// Exactly one isomorphism between the two sub-posets; returns it as group pairs.
fn unique_group_map(
    p: &Poset,
    named: &BTreeMap<String, Vec<String>>,
    from: &[&str],
    to: &[&str],
) -> Option<(BTreeMap<String, String>, LabelMap)> {
    let a = sub(p, named, from);
    let b = sub(p, named, to);
    let isos = all_isomorphisms(&a, &b, &Constraint::none()).ok()?;
    if isos.len() != 1 {
        return None;
    }
    let lm = label_map(&isos[0], &a, &b);
    let mut groups = BTreeMap::new();
    for (x, y) in &lm {
        if !x.contains('.') {
            continue;
        }
        let (gx, gy) = (group_of(x).to_string(), group_of(y).to_string());
        if let Some(prev) = groups.insert(gx, gy.clone()) {
            if prev != gy {
                return None;
            }
        }
    }
    Some((groups, lm))
}

fn expect_unique(
    p: &Poset,
    named: &BTreeMap<String, Vec<String>>,
    id: &str,
    from: &[&str],
    to: &[&str],
    singles: &[(&str, &str)],
    groups: &[(&str, &str)],
) -> PropertyCheck {
    match unique_group_map(p, named, from, to) {
        None => PropertyCheck::new(id, false, "isomorphism missing or not unique"),
        Some((gm, lm)) => {
            let singles_ok = singles.iter().all(|(a, b)| lm.get(*a).map(String::as_str) == Some(*b));
            let groups_ok = groups.iter().all(|(a, b)| gm.get(*a).map(String::as_str) == Some(*b));
            PropertyCheck::new(
                id,
                singles_ok && groups_ok,
                format!("unique isomorphism, group images {gm:?}"),
            )
        }
    }
}

/// Verifies the encoded middle gadget against its defining properties and the
/// structural facts behind them.
pub fn check_r(p: &Poset, named: &BTreeMap<String, Vec<String>>) -> (Vec<PropertyCheck>, RWitnesses) {
    let mut checks = vec![PropertyCheck::new(
        "size-42",
        p.len() == 42,
        format!("{} elements", p.len()),
    )];
    check_extremes(p, &mut checks, true);
    let witnesses = check_symmetries(p, &mut checks);
    checks.push(PropertyCheck::new(
        "center-removal-cb",
        witnesses.without_cb.is_some(),
        "card without c_b: fix d̄, p̄, swap d and p",
    ));
    checks.push(PropertyCheck::new(
        "center-removal-ct",
        witnesses.without_ct.is_some(),
        "card without c_t: fix d̄, p̄, swap d and p",
    ));

    let dual_pair = |a: &[&str], b: &[&str]| {
        let x = sub(p, named, a);
        let y = sub(p, named, b).dual();
        matches!(find_isomorphism(&x, &y, &Constraint::none()), Ok(Some(_)))
    };
    checks.push(PropertyCheck::new(
        "a-dual-to-b",
        dual_pair(&["A", "c_t", "d_bar", "p_bar"], &["B", "c_b", "d", "p"]),
        "A ∪ {c_t, d̄, p̄} dually isomorphic to B ∪ {c_b, d, p}",
    ));
    checks.push(PropertyCheck::new(
        "d-dual-to-c",
        dual_pair(&["D", "c_t", "d_bar", "p_bar"], &["C", "c_b", "d", "p"]),
        "D ∪ {c_t, d̄, p̄} dually isomorphic to C ∪ {c_b, d, p}",
    ));
    checks.push(PropertyCheck::new(
        "b-block-rigid",
        is_rigid(&sub(p, named, &["B", "c_b", "d", "p"])),
        "B ∪ {c_b, d, p} is rigid",
    ));
    checks.push(expect_unique(
        p,
        named,
        "b-to-c-unique",
        &["B", "c_b", "d", "p"],
        &["C", "c_b", "d", "p"],
        &[(D, P), (P, D), (CB, CB)],
        &[("B12", "C12"), ("B1", "C1"), ("B2", "C2")],
    ));
    checks.push(expect_unique(
        p,
        named,
        "b-to-c-unique-with-d",
        &["B", "c_b", "d"],
        &["C", "c_b", "d"],
        &[(D, D), (CB, CB)],
        &[("B12", "C1"), ("B2", "C12"), ("B1", "C2")],
    ));
    checks.push(expect_unique(
        p,
        named,
        "b-to-c-unique-with-p",
        &["B", "c_b", "p"],
        &["C", "c_b", "p"],
        &[(P, P), (CB, CB)],
        &[("B12", "C2"), ("B2", "C1"), ("B1", "C12")],
    ));
    (checks, witnesses)
}

/// Verifies the adjacent-rank variant.
pub fn check_r_adjacent(p: &Poset, named: &BTreeMap<String, Vec<String>>) -> (Vec<PropertyCheck>, RWitnesses) {
    let mut checks = vec![PropertyCheck::new(
        "size-42",
        p.len() == 42,
        format!("{} elements", p.len()),
    )];
    check_extremes(p, &mut checks, false);
    let witnesses = check_symmetries(p, &mut checks);
    let middle = sub(p, named, &["A", "B", "C", "D"]);
    let h = middle.height();
    checks.push(PropertyCheck::new(
        "middle-height-1",
        h == 1,
        format!("middle block has height {h}"),
    ));
    (checks, witnesses)
}

/// The verified middle gadget.
pub fn build_r() -> Result<GadgetR> {
    let (poset, named) = encode_r();
    let (checks, witnesses) = check_r(&poset, &named);
    require_all(&checks)?;
    Ok(GadgetR {
        poset,
        named,
        witnesses,
    })
}

/// The verified adjacent-rank variant.
pub fn build_r_adjacent() -> Result<GadgetR> {
    let (poset, named) = encode_r_adjacent();
    let (checks, witnesses) = check_r_adjacent(&poset, &named);
    require_all(&checks)?;
    Ok(GadgetR {
        poset,
        named,
        witnesses,
    })
}
