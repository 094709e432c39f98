//! Assembling an isomorphism of two posets from isomorphisms of a few cards,
//! when rigid pieces force those card isomorphisms to agree.
//!
//! The assemblers never search. They check their side conditions, combine the
//! supplied card maps, and verify the result.

use serde::{Deserialize, Serialize};

use crate::constructions::PropertyCheck;
use crate::decks::{card, card_isomorphism};
use crate::error::{Error, Result};
use crate::iso::{is_rigid, verify_isomorphism, Constraint, IsoMap};
use crate::poset::{ElementId, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SliceMode {
    At,
    AtMost,
    AtLeast,
}

fn slice_ids(p: &Poset, k: usize, mode: SliceMode) -> Vec<ElementId> {
    let r = p.ranks();
    p.ids()
        .filter(|&x| match mode {
            SliceMode::At => r.rank[x] == k,
            SliceMode::AtMost => r.rank[x] <= k,
            SliceMode::AtLeast => r.rank[x] >= k,
        })
        .collect()
}

/// Induced subposet on a rank filter.
pub fn rank_slice(p: &Poset, k: usize, mode: SliceMode) -> Poset {
    p.restrict(&slice_ids(p, k, mode))
}

/// The rank band `k ..= l` with `0 < k < l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RigidSeparatorSpec {
    pub k: usize,
    pub l: usize,
}

impl RigidSeparatorSpec {
    pub fn new(k: usize, l: usize) -> Result<Self> {
        if 0 < k && k < l {
            Ok(RigidSeparatorSpec { k, l })
        } else {
            Err(Error::InvalidParameter(format!("band {k}..={l} needs 0 < k < l")))
        }
    }

    /// Elements whose rank lies in the band.
    pub fn band(&self, p: &Poset) -> Vec<ElementId> {
        let r = p.ranks();
        p.ids().filter(|&x| (self.k..=self.l).contains(&r.rank[x])).collect()
    }
}

fn band_rigid(p: &Poset, spec: &RigidSeparatorSpec) -> bool {
    is_rigid(&p.restrict(&spec.band(p)))
}

fn has_elements_above(p: &Poset, spec: &RigidSeparatorSpec) -> bool {
    p.ranks().rank.iter().any(|&r| r > spec.l)
}

fn no_cover_over(p: &Poset, spec: &RigidSeparatorSpec) -> bool {
    let r = p.ranks();
    p.covers()
        .iter()
        .all(|&(x, y)| !(r.rank[x] < spec.k && r.rank[y] > spec.l))
}

/// The band is rigid, something lies above it, and no cover jumps over it.
pub fn is_rigid_separator(p: &Poset, spec: &RigidSeparatorSpec) -> bool {
    has_elements_above(p, spec) && no_cover_over(p, spec) && band_rigid(p, spec)
}

/// `core` with `below` new minimal elements under all of it and `above` new
/// maximal elements over all of it. The core lands on ranks
/// `1 ..= height(core) + 1`, a rigid separator whenever `core` is rigid.
pub fn sandwich(core: &Poset, below: usize, above: usize) -> Result<Poset> {
    let n = core.len();
    let mut labels: Vec<String> = core.labels().to_vec();
    labels.extend((0..below).map(|i| format!("bot{i}")));
    labels.extend((0..above).map(|i| format!("top{i}")));
    let mut pairs: Vec<(ElementId, ElementId)> = core
        .ids()
        .flat_map(|x| core.above(x).ones().map(move |y| (x, y)))
        .collect();
    for x in core.ids() {
        pairs.extend((n..n + below).map(|m| (m, x)));
        pairs.extend((n + below..n + below + above).map(|t| (x, t)));
    }
    Poset::from_relation(labels, &pairs)
}

/// The band occupied by the core of a [`sandwich`] with at least one element below.
pub fn sandwich_band(core: &Poset) -> Result<RigidSeparatorSpec> {
    RigidSeparatorSpec::new(1, core.height() + 1)
}

/// An isomorphism between the cards `p \ {removed.0}` and `q \ {removed.1}`,
/// in the ids of the cards.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardIso {
    pub removed: (ElementId, ElementId),
    pub map: IsoMap,
}

impl CardIso {
    /// Searches for a rank-preserving isomorphism between the two cards.
    pub fn find(p: &Poset, q: &Poset, x: ElementId, y: ElementId) -> Option<CardIso> {
        let map = card_isomorphism(&card(p, x, true), &card(q, y, true))?;
        Some(CardIso { removed: (x, y), map })
    }

    /// Restriction of an isomorphism `p → q` to the card at `x`.
    pub fn restrict(full: &IsoMap, x: ElementId) -> CardIso {
        let y = full.apply(x);
        let map = (0..full.len())
            .filter(|&u| u != x)
            .map(|u| {
                let v = full.apply(u);
                if v > y {
                    v - 1
                } else {
                    v
                }
            })
            .collect();
        CardIso {
            removed: (x, y),
            map: IsoMap::new(map),
        }
    }

    /// The map in parent ids; `None` at the removed element.
    pub fn lift(&self) -> Vec<Option<ElementId>> {
        let (x, y) = self.removed;
        let mut out = vec![None; self.map.len() + 1];
        for (j, &v) in self.map.as_slice().iter().enumerate() {
            let u = if j < x { j } else { j + 1 };
            out[u] = Some(if v < y { v } else { v + 1 });
        }
        out
    }

    /// Whether the map is an isomorphism of the cards preserving original ranks.
    pub fn is_valid(&self, p: &Poset, q: &Poset) -> bool {
        let (x, y) = self.removed;
        if x >= p.len() || y >= q.len() || self.map.len() + 1 != p.len() {
            return false;
        }
        let (c1, c2) = (card(p, x, true), card(q, y, true));
        let (Some(m1), Some(m2)) = (c1.marking, c2.marking) else {
            return false;
        };
        verify_isomorphism(
            &c1.poset,
            &c2.poset,
            &self.map,
            &Constraint::none().preserving(m1.values, m2.values),
        )
    }
}

/// Outcome of an assembly: every check, and the verified isomorphism if all passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assembly {
    pub checks: Vec<PropertyCheck>,
    pub iso: Option<IsoMap>,
}

impl Assembly {
    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.id.as_str())
            .collect()
    }

    fn finish(
        mut checks: Vec<PropertyCheck>,
        p: &Poset,
        q: &Poset,
        build: impl FnOnce() -> Option<Vec<ElementId>>,
    ) -> Self {
        if checks.iter().any(|c| !c.passed) {
            return Assembly { checks, iso: None };
        }
        let iso = build()
            .map(IsoMap::new)
            .filter(|m| verify_isomorphism(p, q, m, &Constraint::none()));
        checks.push(PropertyCheck::new(
            "assembled-isomorphism",
            iso.is_some(),
            "combined map verified on the full posets",
        ));
        Assembly { checks, iso }
    }
}

fn same_bounds(p: &Poset, x: ElementId, y: ElementId) -> bool {
    p.above(x) == p.above(y) && p.below(x) == p.below(y)
}

fn bounds_distinct(p: &Poset, level: &[ElementId]) -> bool {
    level
        .iter()
        .enumerate()
        .all(|(i, &x)| level[i + 1..].iter().all(|&y| !same_bounds(p, x, y)))
}

fn without(p: &Poset, drop: &[ElementId]) -> Poset {
    let keep: Vec<_> = p.ids().filter(|x| !drop.contains(x)).collect();
    p.restrict(&keep)
}

/// Isomorphism from two matched pairs of rank-`k` cards, assuming the rank-`k`
/// level has several elements with pairwise distinct strict bounds and the rest
/// of each poset is rigid. The result is `psi` off its removed element and
/// `phi` on it.
pub fn assemble_from_level_cards(p: &Poset, q: &Poset, k: usize, psi: &CardIso, phi: &CardIso) -> Assembly {
    let mut checks = Vec::new();
    let same_size = p.len() == q.len();
    checks.push(PropertyCheck::new(
        "same-size",
        same_size,
        format!("{} vs {} elements", p.len(), q.len()),
    ));
    let (pk, qk) = (slice_ids(p, k, SliceMode::At), slice_ids(q, k, SliceMode::At));
    let (rp, rq) = (p.ranks(), q.ranks());
    let at_k = |c: &CardIso| {
        let (x, y) = c.removed;
        x < p.len() && y < q.len() && rp.rank[x] == k && rq.rank[y] == k
    };
    let cards_ok = same_size && at_k(psi) && at_k(phi) && psi.is_valid(p, q) && phi.is_valid(p, q);
    checks.push(PropertyCheck::new(
        "card-isomorphisms",
        cards_ok,
        format!("both maps are rank-preserving isomorphisms of rank-{k} cards"),
    ));
    let distinct = psi.removed.0 != phi.removed.0 && psi.removed.1 != phi.removed.1;
    checks.push(PropertyCheck::new(
        "distinct-removals",
        distinct,
        "the two card pairs remove different elements on both sides",
    ));
    checks.push(PropertyCheck::new(
        "level-size",
        pk.len() > 1 && qk.len() > 1,
        format!("rank {k} has {} and {} elements", pk.len(), qk.len()),
    ));
    checks.push(PropertyCheck::new(
        "distinct-bounds",
        bounds_distinct(p, &pk) && bounds_distinct(q, &qk),
        format!("no two rank-{k} elements share strict upper and lower bounds"),
    ));
    checks.push(PropertyCheck::new(
        "complement-rigid",
        is_rigid(&without(p, &pk)) && is_rigid(&without(q, &qk)),
        format!("both posets without rank {k} are rigid"),
    ));
    if !(cards_ok && distinct) {
        return Assembly { checks, iso: None };
    }

    let (s, f) = (psi.lift(), phi.lift());
    let (pp, qq) = psi.removed;
    let (pp2, qq2) = phi.removed;
    let off_level = p.ids().filter(|&x| rp.rank[x] != k).all(|x| s[x] == f[x]);
    checks.push(PropertyCheck::new(
        "maps-agree-off-level",
        off_level,
        format!("both maps coincide outside rank {k}"),
    ));
    let on_level =
        s[pp2] == Some(qq2) && f[pp] == Some(qq) && pk.iter().filter(|&&x| x != pp && x != pp2).all(|&x| s[x] == f[x]);
    checks.push(PropertyCheck::new(
        "maps-agree-on-level",
        on_level,
        format!("both maps coincide on rank {k} wherever both are defined"),
    ));
    Assembly::finish(checks, p, q, || {
        p.ids().map(|x| if x == pp { f[x] } else { s[x] }).collect()
    })
}

/// Isomorphism from a card pair removing maximal elements above the band and a
/// card pair removing minimal elements, glued along a rigid band that no cover
/// jumps over. The result is `psi` above the band and `phi` on and below it.
pub fn assemble_across_separator(
    p: &Poset,
    q: &Poset,
    spec: &RigidSeparatorSpec,
    phi: &CardIso,
    psi: &CardIso,
) -> Assembly {
    let mut checks = Vec::new();
    let same_size = p.len() == q.len();
    checks.push(PropertyCheck::new(
        "same-size",
        same_size,
        format!("{} vs {} elements", p.len(), q.len()),
    ));
    let both = |f: &dyn Fn(&Poset) -> bool| f(p) && f(q);
    checks.push(PropertyCheck::new(
        "band-rigid",
        both(&|x| band_rigid(x, spec)),
        format!("ranks {}..={} induce rigid posets", spec.k, spec.l),
    ));
    checks.push(PropertyCheck::new(
        "elements-above-band",
        both(&|x| has_elements_above(x, spec)),
        format!("both posets have elements of rank > {}", spec.l),
    ));
    checks.push(PropertyCheck::new(
        "no-cover-over-band",
        both(&|x| no_cover_over(x, spec)),
        format!("no cover from rank < {} to rank > {}", spec.k, spec.l),
    ));
    let (rp, rq) = (p.ranks(), q.ranks());
    let removes = |c: &CardIso, f: &dyn Fn(&Poset, &crate::poset::RankProfile, ElementId) -> bool| {
        let (x, y) = c.removed;
        x < p.len() && y < q.len() && f(p, &rp, x) && f(q, &rq, y)
    };
    let high_max = removes(phi, &|s, r, x| s.is_maximal(x) && r.rank[x] > spec.l);
    checks.push(PropertyCheck::new(
        "phi-removes-high-maximal",
        high_max,
        format!("phi removes maximal elements of rank > {}", spec.l),
    ));
    let phi_ok = same_size && phi.is_valid(p, q);
    checks.push(PropertyCheck::new(
        "phi-rank-preserving",
        phi_ok,
        "phi is a rank-preserving isomorphism of its cards",
    ));
    let low_min = removes(psi, &|s, _, x| s.is_minimal(x));
    checks.push(PropertyCheck::new(
        "psi-removes-minimal",
        low_min,
        "psi removes minimal elements",
    ));
    let psi_ok = same_size && psi.is_valid(p, q);
    checks.push(PropertyCheck::new(
        "psi-rank-preserving",
        psi_ok,
        "psi is a rank-preserving isomorphism of its cards",
    ));
    if !(same_size && high_max && low_min && phi.map.len() + 1 == p.len() && psi.map.len() + 1 == p.len()) {
        return Assembly { checks, iso: None };
    }
    let (f, s) = (phi.lift(), psi.lift());
    let band = spec.band(p);
    checks.push(PropertyCheck::new(
        "maps-agree-on-band",
        band.iter().all(|&x| f[x].is_some() && f[x] == s[x]),
        "phi and psi coincide on the band",
    ));
    Assembly::finish(checks, p, q, || {
        p.ids().map(|x| if rp.rank[x] > spec.l { s[x] } else { f[x] }).collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> Poset {
        Poset::chain((0..n).map(|i| format!("c{i}"))).unwrap()
    }

    #[test]
    fn slices_of_a_chain() {
        let p = chain(4);
        assert_eq!(rank_slice(&p, 0, SliceMode::At).labels(), ["c0"]);
        assert_eq!(rank_slice(&p, 3, SliceMode::AtMost), p);
        assert_eq!(rank_slice(&p, 2, SliceMode::AtLeast).len(), 2);
    }

    #[test]
    fn separators() {
        let spec = RigidSeparatorSpec::new(1, 2).unwrap();
        assert!(is_rigid_separator(&chain(4), &spec));
        assert!(!is_rigid_separator(&chain(3), &spec));
        let jump = Poset::from_covers(
            ["c0", "c1", "c2", "c3", "w"],
            &[("c0", "c1"), ("c1", "c2"), ("c2", "c3"), ("w", "c3")],
        )
        .unwrap();
        assert!(!is_rigid_separator(&jump, &spec));
        assert!(RigidSeparatorSpec::new(0, 2).is_err());
        assert!(RigidSeparatorSpec::new(2, 2).is_err());
    }

    #[test]
    fn restricted_card_maps_lift_back() {
        let p = chain(4);
        let id = IsoMap::identity(4);
        let c = CardIso::restrict(&id, 2);
        assert!(c.is_valid(&p, &p));
        assert_eq!(c.lift(), vec![Some(0), Some(1), None, Some(3)]);
    }
}
