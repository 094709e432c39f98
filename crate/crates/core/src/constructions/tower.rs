//! Tower pairs: Q at the bottom, n middle gadgets, the dual of Q on top, with the
//! top identification either straight (P1) or twisted (P2).

use std::collections::BTreeMap;

use super::q::GadgetQ;
use super::r::{GadgetR, CB, CT, D, DBAR, P, PBAR};
use super::{stack, LabelMap};
use crate::error::{Error, Result};
use crate::iso::IsoMap;
use crate::poset::Poset;

/// Which building block of a tower an element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TowerPart {
    Bottom,
    Middle(usize),
    Top,
}

/// Label scheme of a tower with `n` middle gadgets.
///
/// Spine elements are `d{i}`, `p{i}`; other elements are prefixed by their
/// block: `Q.`, `R{i}.`, `Qt.`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerLayout {
    pub n: usize,
    /// Labels of `d`, `p` in the bottom gadget (and its dual on top).
    pub q_top: [String; 2],
}

impl TowerLayout {
    /// Tower label of a gadget element of the given block.
    pub fn label(&self, part: TowerPart, l: &str, twisted: bool) -> String {
        let [qd, qp] = &self.q_top;
        match part {
            TowerPart::Bottom if l == qd => "d0".into(),
            TowerPart::Bottom if l == qp => "p0".into(),
            TowerPart::Bottom => format!("Q.{l}"),
            TowerPart::Middle(i) => match l {
                DBAR => format!("d{}", i - 1),
                PBAR => format!("p{}", i - 1),
                D => format!("d{i}"),
                P => format!("p{i}"),
                _ => format!("R{i}.{l}"),
            },
            TowerPart::Top => {
                let n = self.n;
                let (to_d, to_p) = if twisted { ("p", "d") } else { ("d", "p") };
                if l == qd {
                    format!("{to_d}{n}")
                } else if l == qp {
                    format!("{to_p}{n}")
                } else {
                    format!("Qt.{l}")
                }
            }
        }
    }

    /// Every (block, gadget label) that a tower label stands for.
    pub fn parts_of(&self, label: &str, twisted: bool) -> Vec<(TowerPart, String)> {
        if let Some(l) = label.strip_prefix("Q.") {
            return vec![(TowerPart::Bottom, l.to_string())];
        }
        if let Some(l) = label.strip_prefix("Qt.") {
            return vec![(TowerPart::Top, l.to_string())];
        }
        if let Some(rest) = label.strip_prefix('R') {
            if let Some((i, l)) = rest.split_once('.') {
                if let Ok(i) = i.parse() {
                    return vec![(TowerPart::Middle(i), l.to_string())];
                }
            }
        }
        let (kind, idx) = label.split_at(1);
        let Ok(i) = idx.parse::<usize>() else {
            return Vec::new();
        };
        let is_d = match kind {
            "d" => true,
            "p" => false,
            _ => return Vec::new(),
        };
        let [qd, qp] = &self.q_top;
        let mut out = Vec::new();
        if i == 0 {
            out.push((TowerPart::Bottom, if is_d { qd } else { qp }.clone()));
        } else {
            out.push((TowerPart::Middle(i), if is_d { D } else { P }.to_string()));
        }
        if i < self.n {
            out.push((TowerPart::Middle(i + 1), if is_d { DBAR } else { PBAR }.to_string()));
        }
        if i == self.n {
            let top_is_d = is_d != twisted;
            out.push((TowerPart::Top, if top_is_d { qd } else { qp }.clone()));
        }
        out
    }
}

/// Inputs of a tower pair.
#[derive(Clone, Copy, Debug)]
pub struct TowerSpec<'a> {
    pub q: &'a GadgetQ,
    pub r: &'a GadgetR,
    pub n: usize,
}

/// Cards with explicitly constructed isomorphisms between the two towers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CardSpec {
    MinA,
    MinB,
    MaxA,
    MaxB,
    D(usize),
    P(usize),
    Cb(usize),
    Ct(usize),
}

impl CardSpec {
    /// The 4n + 6 cards whose isomorphisms are given by construction.
    pub fn all(n: usize) -> Vec<CardSpec> {
        let mut v = vec![CardSpec::MinA, CardSpec::MinB, CardSpec::MaxA, CardSpec::MaxB];
        for i in 0..=n {
            v.push(CardSpec::D(i));
            v.push(CardSpec::P(i));
        }
        for i in 1..=n {
            v.push(CardSpec::Cb(i));
            v.push(CardSpec::Ct(i));
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct TowerPair {
    pub p1: Poset,
    pub p2: Poset,
    /// Designated ranks `height(Q) + i·height(R)` for `i = 0..=n`.
    pub ranks: Vec<usize>,
    pub layout: TowerLayout,
    pub q: GadgetQ,
    pub r: GadgetR,
}

fn relabel(p: &Poset, f: impl Fn(&str) -> String) -> Poset {
    p.map_labels(|l| f(l)).expect("tower labels are distinct")
}

/// Builds one tower; `twisted` swaps the identification of the top gadget.
pub fn build_tower(spec: &TowerSpec<'_>, twisted: bool) -> Result<Poset> {
    if spec.n == 0 {
        return Err(Error::BadIdentification(
            "a tower needs at least one middle gadget".into(),
        ));
    }
    let layout = layout_of(spec);
    let mut tower = relabel(&spec.q.poset, |l| layout.label(TowerPart::Bottom, l, twisted));
    for i in 1..=spec.n {
        let ri = relabel(&spec.r.poset, |l| layout.label(TowerPart::Middle(i), l, twisted));
        let (d, p) = (format!("d{}", i - 1), format!("p{}", i - 1));
        tower = stack(&tower, &ri, &[(&d, &d), (&p, &p)])?;
    }
    let top = relabel(&spec.q.poset.dual(), |l| layout.label(TowerPart::Top, l, twisted));
    let (d, p) = (format!("d{}", spec.n), format!("p{}", spec.n));
    stack(&tower, &top, &[(&d, &d), (&p, &p)])
}

fn layout_of(spec: &TowerSpec<'_>) -> TowerLayout {
    TowerLayout {
        n: spec.n,
        q_top: [spec.q.label_of("d").to_string(), spec.q.label_of("p").to_string()],
    }
}

/// The straight and twisted towers with their designated ranks.
pub fn build_pair(spec: &TowerSpec<'_>) -> Result<TowerPair> {
    let p1 = build_tower(spec, false)?;
    let p2 = build_tower(spec, true)?;
    let hq = spec.q.poset.height();
    let hr = spec.r.poset.height();
    Ok(TowerPair {
        p1,
        p2,
        ranks: (0..=spec.n).map(|i| hq + i * hr).collect(),
        layout: layout_of(spec),
        q: spec.q.clone(),
        r: spec.r.clone(),
    })
}

fn apply(m: &LabelMap, l: &str) -> Option<String> {
    m.get(l).cloned()
}

fn inverse(m: &LabelMap) -> LabelMap {
    m.iter().map(|(a, b)| (b.clone(), a.clone())).collect()
}

impl TowerPair {
    pub fn n(&self) -> usize {
        self.layout.n
    }

    /// Tower label of the element removed by a card.
    pub fn removed_label(&self, card: CardSpec) -> String {
        let q = |r: &str| self.q.label_of(r).to_string();
        match card {
            CardSpec::MinA => format!("Q.{}", q("a")),
            CardSpec::MinB => format!("Q.{}", q("b")),
            CardSpec::MaxA => format!("Qt.{}", q("a")),
            CardSpec::MaxB => format!("Qt.{}", q("b")),
            CardSpec::D(i) => format!("d{i}"),
            CardSpec::P(i) => format!("p{i}"),
            CardSpec::Cb(i) => format!("R{i}.{CB}"),
            CardSpec::Ct(i) => format!("R{i}.{CT}"),
        }
    }

    /// The explicit isomorphism `P1 \ {x} → P2 \ {x}`, assembled block by block
    /// from the gadget witnesses. Blocks agree on shared spine elements or the
    /// assembly fails.
    pub fn card_isomorphism(&self, card: CardSpec) -> Result<IsoMap> {
        let n = self.n();
        let id = |l: &str| Some(l.to_string());
        let [qd, qp] = &self.layout.q_top;
        let top_inner = |l: &str| (l != qd && l != qp).then(|| l.to_string());
        let qw = &self.q.witnesses;
        let rw = &self.r.witnesses;
        let phi = |l: &str| apply(&rw.phi, l);
        let psi_inv = inverse(&qw.psi);
        let missing = |what: &str| Error::gadget("tower-card", format!("missing witness {what}"));
        let without_cb = rw.without_cb.as_ref().ok_or_else(|| missing("without c_b"))?;
        let without_ct = rw.without_ct.as_ref().ok_or_else(|| missing("without c_t"))?;

        let rule = |part: TowerPart, l: &str| -> Option<String> {
            match card {
                CardSpec::MinA | CardSpec::MinB => {
                    let w = if card == CardSpec::MinA { &qw.psi_a } else { &qw.psi_b };
                    match part {
                        TowerPart::Bottom => apply(w, l),
                        TowerPart::Middle(_) => phi(l),
                        TowerPart::Top => top_inner(l),
                    }
                }
                CardSpec::MaxA | CardSpec::MaxB => {
                    let w = if card == CardSpec::MaxA { &qw.psi_a } else { &qw.psi_b };
                    match part {
                        TowerPart::Top => apply(w, l),
                        _ => id(l),
                    }
                }
                CardSpec::D(i) | CardSpec::P(i) if i == n => match part {
                    TowerPart::Top if card == CardSpec::D(n) => apply(&qw.psi, l),
                    TowerPart::Top => apply(&psi_inv, l),
                    _ => id(l),
                },
                CardSpec::D(i) | CardSpec::P(i) => {
                    let w = if matches!(card, CardSpec::D(_)) {
                        &rw.psi_dbar
                    } else {
                        &rw.psi_pbar
                    };
                    match part {
                        TowerPart::Bottom => id(l),
                        TowerPart::Middle(j) if j <= i => id(l),
                        TowerPart::Middle(j) if j == i + 1 => apply(w, l),
                        TowerPart::Middle(_) => phi(l),
                        TowerPart::Top => top_inner(l),
                    }
                }
                CardSpec::Cb(i) | CardSpec::Ct(i) => {
                    let w = if matches!(card, CardSpec::Cb(_)) {
                        without_cb
                    } else {
                        without_ct
                    };
                    match part {
                        TowerPart::Bottom => id(l),
                        TowerPart::Middle(j) if j < i => id(l),
                        TowerPart::Middle(j) if j == i => apply(w, l),
                        TowerPart::Middle(_) => phi(l),
                        TowerPart::Top => top_inner(l),
                    }
                }
            }
        };

        let removed = self.removed_label(card);
        let c1 = self.p1.remove(self.p1.require(&removed)?);
        let c2 = self.p2.remove(self.p2.require(&removed)?);
        let mut map = BTreeMap::new();
        for x in c1.labels() {
            let mut image: Option<String> = None;
            for (part, gl) in self.layout.parts_of(x, false) {
                if let Some(img) = rule(part, &gl) {
                    let y = self.layout.label(part, &img, true);
                    match &image {
                        Some(prev) if *prev != y => {
                            return Err(Error::gadget(
                                "tower-card",
                                format!("blocks disagree on `{x}`: `{prev}` vs `{y}`"),
                            ))
                        }
                        _ => image = Some(y),
                    }
                }
            }
            let y = image.ok_or_else(|| Error::gadget("tower-card", format!("no block defines the image of `{x}`")))?;
            map.insert(x.clone(), y);
        }
        IsoMap::from_label_map(&c1, &c2, &map)
    }
}

/// Union of posets whose shared labels denote the same element.
fn glue(parts: &[Poset]) -> Result<Poset> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut pairs = Vec::new();
    for p in parts {
        let ids: Vec<usize> = p
            .labels()
            .iter()
            .map(|l| {
                *index.entry(l.clone()).or_insert_with(|| {
                    labels.push(l.clone());
                    labels.len() - 1
                })
            })
            .collect();
        for x in p.ids() {
            pairs.extend(p.above(x).ones().map(|y| (ids[x], ids[y])));
        }
    }
    Poset::from_relation(labels, &pairs)
}

/// `m` adjacent-rank gadgets over `base`, whose two maximal elements are `base_top`.
///
/// Copy `i` has its `d̄`, `p̄` fused with the `d`, `p` of copy `i - 1` (the first
/// copy's `d̄`, `p̄` are new spine points `db1`, `pb1`). All minimal elements of the
/// copies lie directly above the top of the base.
pub fn build_adjacent_tower(m: usize, base: &Poset, base_top: [&str; 2], r_adjacent: &GadgetR) -> Result<Poset> {
    if m == 0 {
        return Err(Error::BadIdentification("need at least one gadget copy".into()));
    }
    for l in base_top {
        if !base.is_maximal(base.require(l)?) {
            return Err(Error::BadIdentification(format!("`{l}` is not maximal in the base")));
        }
    }
    let base = relabel(base, |l| {
        if l == base_top[0] {
            "d0".into()
        } else if l == base_top[1] {
            "p0".into()
        } else {
            format!("base.{l}")
        }
    });
    let copies: Vec<Poset> = (1..=m)
        .map(|i| {
            relabel(&r_adjacent.poset, |l| match l {
                DBAR if i == 1 => "db1".into(),
                PBAR if i == 1 => "pb1".into(),
                DBAR => format!("d{}", i - 1),
                PBAR => format!("p{}", i - 1),
                D => format!("d{i}"),
                P => format!("p{i}"),
                _ => format!("R{i}.{l}"),
            })
        })
        .collect();
    let upper = glue(&copies)?;
    let stacked = stack(&base, &upper, &[])?;
    let mut pairs: Vec<(usize, usize)> = stacked
        .ids()
        .flat_map(|x| stacked.above(x).ones().map(move |y| (x, y)))
        .collect();
    let (d0, p0) = (stacked.require("d0")?, stacked.require("p0")?);
    for y in upper.minimal_elements() {
        let y = stacked.require(upper.label(y))?;
        pairs.push((d0, y));
        pairs.push((p0, y));
    }
    for l in ["db1", "pb1"] {
        let y = stacked.require(l)?;
        pairs.push((d0, y));
        pairs.push((p0, y));
    }
    Poset::from_relation(stacked.labels().to_vec(), &pairs)
}
