//! Constrained isomorphism search by color refinement and individualization.
//!
//! Both posets are colored simultaneously with hash colors that only depend on
//! structure, so a color means the same thing on either side. A search node
//! fails as soon as the two color histograms differ.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{ElementId, Poset};

/// A bijection from the elements of one poset to another, by id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsoMap {
    map: Vec<ElementId>,
}

impl IsoMap {
    pub fn new(map: Vec<ElementId>) -> Self {
        IsoMap { map }
    }

    pub fn identity(n: usize) -> Self {
        IsoMap { map: (0..n).collect() }
    }

    pub fn apply(&self, x: ElementId) -> ElementId {
        self.map[x]
    }

    pub fn as_slice(&self) -> &[ElementId] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> IsoMap {
        let mut inv = vec![0; self.map.len()];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        IsoMap { map: inv }
    }

    /// `self` followed by `then`.
    pub fn then(&self, then: &IsoMap) -> IsoMap {
        IsoMap {
            map: self.map.iter().map(|&y| then.map[y]).collect(),
        }
    }

    pub fn to_label_map(&self, source: &Poset, target: &Poset) -> BTreeMap<String, String> {
        self.map
            .iter()
            .enumerate()
            .map(|(x, &y)| (source.label(x).to_string(), target.label(y).to_string()))
            .collect()
    }

    pub fn from_label_map(source: &Poset, target: &Poset, labels: &BTreeMap<String, String>) -> Result<IsoMap> {
        if source.len() != target.len() || labels.len() != source.len() {
            return Err(Error::SizeMismatch(source.len(), target.len()));
        }
        let mut map = vec![0; source.len()];
        for (a, b) in labels {
            map[source.require(a)?] = target.require(b)?;
        }
        Ok(IsoMap { map })
    }
}

/// Restrictions an isomorphism must respect.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    /// Required images, `(source id, target id)`.
    pub pins: Vec<(ElementId, ElementId)>,
    /// Per-element marks on the source and target side; marks must be carried over.
    pub marks: Option<(Vec<u64>, Vec<u64>)>,
}

impl Constraint {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn pin(mut self, x: ElementId, y: ElementId) -> Self {
        self.pins.push((x, y));
        self
    }

    pub fn preserving(mut self, source: Vec<u64>, target: Vec<u64>) -> Self {
        self.marks = Some((source, target));
        self
    }

    /// Pins given by labels; both labels must exist.
    pub fn pin_labels(mut self, p: &Poset, q: &Poset, pairs: &[(&str, &str)]) -> Result<Self> {
        for (a, b) in pairs {
            self.pins.push((p.require(a)?, q.require(b)?));
        }
        Ok(self)
    }

    fn validate(&self, p: &Poset, q: &Poset) -> Result<()> {
        let mut seen_src = vec![false; p.len()];
        let mut seen_dst = vec![false; q.len()];
        for &(x, y) in &self.pins {
            if x >= p.len() || y >= q.len() {
                return Err(Error::UnknownElement(x.max(y)));
            }
            if seen_src[x] || seen_dst[y] {
                return Err(Error::InvalidConstraint("pins are not injective".into()));
            }
            seen_src[x] = true;
            seen_dst[y] = true;
        }
        if let Some((ms, mt)) = &self.marks {
            if ms.len() != p.len() || mt.len() != q.len() {
                return Err(Error::InvalidConstraint(
                    "mark vector length differs from poset size".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Search configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of search nodes; `None` searches exhaustively.
    pub node_budget: Option<u64>,
}

/// Checks every condition independently of the search: bijectivity, order in
/// both directions, pins, and marks.
pub fn verify_isomorphism(p: &Poset, q: &Poset, map: &IsoMap, c: &Constraint) -> bool {
    let n = p.len();
    if q.len() != n || map.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &y in map.as_slice() {
        if y >= n || hit[y] {
            return false;
        }
        hit[y] = true;
    }
    for x in 0..n {
        for y in 0..n {
            if p.lt(x, y) != q.lt(map.apply(x), map.apply(y)) {
                return false;
            }
        }
    }
    if c.pins.iter().any(|&(x, y)| map.apply(x) != y) {
        return false;
    }
    if let Some((ms, mt)) = &c.marks {
        if ms.len() != n || mt.len() != n {
            return false;
        }
        if (0..n).any(|x| ms[x] != mt[map.apply(x)]) {
            return false;
        }
    }
    true
}

#[inline]
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const SALT_UP: u64 = 0x51;
const SALT_DOWN: u64 = 0xa7;
const SALT_UCOV: u64 = 0x3c9;
const SALT_LCOV: u64 = 0x6e1;
const SALT_PIN: u64 = 0x0005_eed0_f917;
const SALT_SPLIT: u64 = 0x0dd_ba11;

/// Adjacency lists used by refinement.
struct Rel {
    up: Vec<Vec<u32>>,
    down: Vec<Vec<u32>>,
    ucov: Vec<Vec<u32>>,
    lcov: Vec<Vec<u32>>,
}

impl Rel {
    fn new(p: &Poset) -> Self {
        let n = p.len();
        let mut up = Vec::with_capacity(n);
        let mut down = Vec::with_capacity(n);
        let mut ucov = Vec::with_capacity(n);
        let mut lcov = Vec::with_capacity(n);
        for x in 0..n {
            up.push(p.above(x).ones().map(|y| y as u32).collect());
            down.push(p.below(x).ones().map(|y| y as u32).collect());
            ucov.push(p.upper_covers(x).into_iter().map(|y| y as u32).collect());
            lcov.push(p.lower_covers(x).into_iter().map(|y| y as u32).collect());
        }
        Rel { up, down, ucov, lcov }
    }

    fn step(&self, c: &[u64]) -> Vec<u64> {
        let sum = |list: &[u32], salt: u64| {
            list.iter()
                .fold(0u64, |acc, &y| acc.wrapping_add(mix(c[y as usize] ^ salt)))
        };
        (0..c.len())
            .map(|x| {
                let mut h = mix(c[x]);
                h = mix(h ^ sum(&self.up[x], SALT_UP));
                h = mix(h ^ sum(&self.down[x], SALT_DOWN));
                h = mix(h ^ sum(&self.ucov[x], SALT_UCOV));
                mix(h ^ sum(&self.lcov[x], SALT_LCOV))
            })
            .collect()
    }
}

fn sorted(c: &[u64]) -> Vec<u64> {
    let mut s = c.to_vec();
    s.sort_unstable();
    s
}

fn distinct(sorted: &[u64]) -> usize {
    if sorted.is_empty() {
        return 0;
    }
    1 + sorted.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Refines a single coloring to its stable partition.
fn refine_single(rel: &Rel, c: &mut Vec<u64>) {
    let mut classes = distinct(&sorted(c));
    loop {
        let next = rel.step(c);
        let k = distinct(&sorted(&next));
        *c = next;
        if k == classes {
            return;
        }
        classes = k;
    }
}

struct Matcher<'a> {
    p: &'a Poset,
    q: &'a Poset,
    rp: Rel,
    rq: Rel,
    constraint: &'a Constraint,
    budget: Option<u64>,
    nodes: u64,
    /// Twin class of each target element; interchangeable targets share a class.
    twin_q: Vec<usize>,
    enumerate_all: bool,
    /// Stop once this many maps are found.
    limit: usize,
    found: Vec<IsoMap>,
}

/// Twin classes: equal strict up-set, down-set and initial color.
fn twin_classes(q: &Poset, init: &[u64]) -> Vec<usize> {
    let mut keys: HashMap<(Vec<usize>, Vec<usize>, u64), usize> = HashMap::new();
    (0..q.len())
        .map(|x| {
            let key = (q.above(x).ones().collect(), q.below(x).ones().collect(), init[x]);
            let next = keys.len();
            *keys.entry(key).or_insert(next)
        })
        .collect()
}

impl<'a> Matcher<'a> {
    fn refine(&self, cp: &mut Vec<u64>, cq: &mut Vec<u64>) -> bool {
        let sp = sorted(cp);
        if sp != sorted(cq) {
            return false;
        }
        let mut classes = distinct(&sp);
        loop {
            let np = self.rp.step(cp);
            let nq = self.rq.step(cq);
            let sp = sorted(&np);
            if sp != sorted(&nq) {
                return false;
            }
            let k = distinct(&sp);
            *cp = np;
            *cq = nq;
            if k == classes {
                return true;
            }
            classes = k;
        }
    }

    /// Returns `Ok(true)` when the search should stop.
    fn search(&mut self, mut cp: Vec<u64>, mut cq: Vec<u64>) -> Result<bool> {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                return Err(Error::BudgetExceeded(b));
            }
        }
        if !self.refine(&mut cp, &mut cq) {
            return Ok(false);
        }
        let n = cp.len();
        let mut pp: Vec<(u64, usize)> = (0..n).map(|x| (cp[x], x)).collect();
        pp.sort_unstable();
        let mut qq: Vec<(u64, usize)> = (0..n).map(|x| (cq[x], x)).collect();
        qq.sort_unstable();

        // Pick the smallest non-singleton cell, ties by smallest member id.
        let mut best: Option<(usize, usize, usize)> = None; // (size, min id, start)
        let mut i = 0;
        while i < n {
            let mut j = i + 1;
            while j < n && pp[j].0 == pp[i].0 {
                j += 1;
            }
            let size = j - i;
            if size > 1 {
                let key = (size, pp[i].1, i);
                if best.map_or(true, |b| (key.0, key.1) < (b.0, b.1)) {
                    best = Some(key);
                }
            }
            i = j;
        }
        let Some((size, v, start)) = best else {
            let mut map = vec![0; n];
            for k in 0..n {
                map[pp[k].1] = qq[k].1;
            }
            let map = IsoMap::new(map);
            if verify_isomorphism(self.p, self.q, &map, self.constraint) {
                self.found.push(map);
                return Ok(self.found.len() >= self.limit);
            }
            return Ok(false);
        };
        let color = pp[start].0;
        let fresh = mix(color ^ SALT_SPLIT);
        let candidates: Vec<usize> = qq[start..start + size].iter().map(|&(_, w)| w).collect();
        let mut tried_twins: Vec<usize> = Vec::new();
        for w in candidates {
            if !self.enumerate_all {
                let t = self.twin_q[w];
                if tried_twins.contains(&t) {
                    continue;
                }
                tried_twins.push(t);
            }
            let mut np = cp.clone();
            let mut nq = cq.clone();
            np[v] = fresh;
            nq[w] = fresh;
            if self.search(np, nq)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn initial_colors(n: usize, marks: Option<&Vec<u64>>, pins: impl Iterator<Item = (usize, usize)>) -> Vec<u64> {
    let mut c: Vec<u64> = (0..n).map(|x| mix(marks.map_or(0, |m| m[x].wrapping_add(1)))).collect();
    for (i, x) in pins {
        c[x] = mix(SALT_PIN ^ (i as u64).wrapping_mul(0x1_0000_0001));
    }
    c
}

fn run(
    p: &Poset,
    q: &Poset,
    c: &Constraint,
    opts: SearchOptions,
    enumerate_all: bool,
    limit: usize,
) -> Result<Vec<IsoMap>> {
    c.validate(p, q)?;
    if p.len() != q.len() || p.relation_count() != q.relation_count() {
        return Ok(Vec::new());
    }
    let cp = initial_colors(
        p.len(),
        c.marks.as_ref().map(|m| &m.0),
        c.pins.iter().enumerate().map(|(i, &(x, _))| (i, x)),
    );
    let cq = initial_colors(
        q.len(),
        c.marks.as_ref().map(|m| &m.1),
        c.pins.iter().enumerate().map(|(i, &(_, y))| (i, y)),
    );
    let twin_q = twin_classes(q, &cq);
    let mut m = Matcher {
        p,
        q,
        rp: Rel::new(p),
        rq: Rel::new(q),
        constraint: c,
        budget: opts.node_budget,
        nodes: 0,
        twin_q,
        enumerate_all,
        limit,
        found: Vec::new(),
    };
    m.search(cp, cq)?;
    Ok(m.found)
}

/// Finds an isomorphism `p → q` satisfying `c`, or proves there is none.
pub fn find_isomorphism(p: &Poset, q: &Poset, c: &Constraint) -> Result<Option<IsoMap>> {
    find_isomorphism_with(p, q, c, SearchOptions::default())
}

pub fn find_isomorphism_with(p: &Poset, q: &Poset, c: &Constraint, opts: SearchOptions) -> Result<Option<IsoMap>> {
    Ok(run(p, q, c, opts, false, 1)?.into_iter().next())
}

pub fn is_isomorphic(p: &Poset, q: &Poset) -> bool {
    matches!(find_isomorphism(p, q, &Constraint::none()), Ok(Some(_)))
}

/// Every isomorphism `p → q` satisfying `c`.
pub fn all_isomorphisms(p: &Poset, q: &Poset, c: &Constraint) -> Result<Vec<IsoMap>> {
    run(p, q, c, SearchOptions::default(), true, usize::MAX)
}

/// The automorphism group as a list, identity first.
pub fn all_automorphisms(p: &Poset) -> Vec<IsoMap> {
    all_isomorphisms(p, p, &Constraint::none()).expect("unconstrained search cannot fail")
}

/// Automorphisms satisfying the constraint (pins and marks on both sides).
pub fn automorphisms_with(p: &Poset, c: &Constraint) -> Result<Vec<IsoMap>> {
    all_isomorphisms(p, p, c)
}

/// True when the identity is the only automorphism.
pub fn is_rigid(p: &Poset) -> bool {
    let found =
        run(p, p, &Constraint::none(), SearchOptions::default(), true, 2).expect("unconstrained search cannot fail");
    found.len() == 1
}

/// Isomorphism-invariant hash of a poset, optionally with per-element marks.
///
/// Equal posets (up to relabeling) always hash equal; the converse does not hold.
pub fn invariant_fingerprint(p: &Poset) -> u64 {
    fingerprint_marked(p, None)
}

pub fn fingerprint_marked(p: &Poset, marks: Option<&[u64]>) -> u64 {
    let r = p.ranks();
    let rel = Rel::new(p);
    let mut c: Vec<u64> = p
        .ids()
        .map(|x| {
            let mut h = mix(r.rank[x] as u64);
            h = mix(h ^ r.dual_rank[x] as u64);
            h = mix(h ^ rel.up[x].len() as u64);
            h = mix(h ^ ((rel.down[x].len() as u64) << 20));
            if let Some(m) = marks {
                h = mix(h ^ m[x].wrapping_mul(0x2545_f491_4f6c_dd1d));
            }
            h
        })
        .collect();
    refine_single(&rel, &mut c);
    let s = sorted(&c);
    s.iter().fold(mix(p.len() as u64), |acc, &v| mix(acc ^ v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn crown() -> Poset {
        Poset::from_covers(["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]).unwrap()
    }

    #[test]
    fn chains_are_isomorphic() {
        let p = Poset::chain(["a", "b", "c"]).unwrap();
        let q = Poset::chain(["x", "y", "z"]).unwrap();
        let m = find_isomorphism(&p, &q, &Constraint::none()).unwrap().unwrap();
        assert!(m.is_identity());
    }

    #[test]
    fn chain_vs_v() {
        let p = Poset::chain(["a", "b", "c"]).unwrap();
        let v = Poset::from_covers(["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap();
        assert!(find_isomorphism(&p, &v, &Constraint::none()).unwrap().is_none());
        assert_ne!(invariant_fingerprint(&p), invariant_fingerprint(&v));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(all_automorphisms(&Poset::chain(["a", "b", "c", "d"]).unwrap()).len(), 1);
        assert_eq!(
            all_automorphisms(&Poset::antichain(["a", "b", "c", "d"]).unwrap()).len(),
            24
        );
        let auts = all_automorphisms(&crown());
        assert_eq!(auts.len(), 4);
        assert!(auts[0].is_identity());
    }

    #[test]
    fn rigidity() {
        assert!(is_rigid(&Poset::chain(["a", "b", "c"]).unwrap()));
        assert!(!is_rigid(&Poset::antichain(["a", "b"]).unwrap()));
    }

    #[test]
    fn pins_and_marks() {
        let p = crown();
        let c = Constraint::none().pin(0, 1).pin(2, 2);
        let m = find_isomorphism(&p, &p, &c).unwrap().unwrap();
        assert_eq!(m.as_slice(), &[1, 0, 2, 3]);
        let c = Constraint::none().preserving(vec![1, 2, 0, 0], vec![1, 2, 0, 0]);
        assert_eq!(automorphisms_with(&p, &c).unwrap().len(), 2);
        let c = Constraint::none().pin(0, 2);
        assert!(find_isomorphism(&p, &p, &c).unwrap().is_none());
        let bad = Constraint::none().pin(0, 1).pin(1, 1);
        assert!(matches!(
            find_isomorphism(&p, &p, &bad),
            Err(Error::InvalidConstraint(_))
        ));
    }

    #[test]
    fn budget_is_reported() {
        let p = Poset::antichain((0..8).map(|i| i.to_string())).unwrap();
        let opts = SearchOptions { node_budget: Some(1) };
        let c = Constraint::none().pin(0, 1);
        let r = find_isomorphism_with(&p, &p, &c, opts);
        assert!(matches!(r, Err(Error::BudgetExceeded(1))));
    }

    #[test]
    fn label_maps_round_trip() {
        let p = crown();
        let m = IsoMap::new(vec![1, 0, 3, 2]);
        let labels = m.to_label_map(&p, &p);
        assert_eq!(labels["a"], "b");
        assert_eq!(IsoMap::from_label_map(&p, &p, &labels).unwrap(), m);
        assert!(m.then(&m.inverse()).is_identity());
    }
}
