use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense element index within one poset. Ids run `0..len()` without gaps.
pub type ElementId = usize;

/// A finite strict partial order on labeled elements.
///
/// The strict relation is stored in full (transitively closed) as one bit row
/// per element, in both directions. Covers are derived on demand.
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, ElementId>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

/// Longest-chain ranks of every element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub rank: Vec<usize>,
    pub dual_rank: Vec<usize>,
    pub height: usize,
}

/// Interchange format: labels plus the cover pairs `(lower, upper)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub labels: Vec<String>,
    pub covers: Vec<[String; 2]>,
}

impl PartialEq for Poset {
    /// Order-identical: same labels in the same id order and the same relation.
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.up == other.up
    }
}

impl Eq for Poset {}

fn index_labels(labels: &[String]) -> Result<HashMap<String, ElementId>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

impl Poset {
    /// Builds the transitive closure of the given cover (or any generating) pairs.
    pub fn from_covers<L, S>(labels: L, covers: &[(S, S)]) -> Result<Poset>
    where
        L: IntoIterator,
        L::Item: Into<String>,
        S: AsRef<str>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let index = index_labels(&labels)?;
        let mut pairs = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            let x = *index
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownLabel(a.as_ref().to_string()))?;
            let y = *index
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownLabel(b.as_ref().to_string()))?;
            pairs.push((x, y));
        }
        Self::closure_of(labels, index, &pairs)
    }

    /// Builds the transitive closure of `pairs` given as `(lower, upper)` ids.
    pub fn from_relation(labels: Vec<String>, pairs: &[(ElementId, ElementId)]) -> Result<Poset> {
        let index = index_labels(&labels)?;
        let n = labels.len();
        if let Some(&(x, y)) = pairs.iter().find(|(x, y)| *x >= n || *y >= n) {
            return Err(Error::UnknownElement(x.max(y)));
        }
        Self::closure_of(labels, index, pairs)
    }

    fn closure_of(
        labels: Vec<String>,
        index: HashMap<String, ElementId>,
        pairs: &[(ElementId, ElementId)],
    ) -> Result<Poset> {
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(x, y) in pairs {
            if x == y {
                return Err(Error::CycleDetected(labels[x].clone()));
            }
            succ[x].push(y);
            indeg[y] += 1;
        }
        // Kahn's algorithm; leftovers lie on or above a cycle.
        let mut order = Vec::with_capacity(n);
        let mut stack: Vec<_> = (0..n).rev().filter(|&x| indeg[x] == 0).collect();
        while let Some(x) = stack.pop() {
            order.push(x);
            for &y in &succ[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    stack.push(y);
                }
            }
        }
        if order.len() < n {
            let x = (0..n).find(|&x| indeg[x] > 0).unwrap_or(0);
            return Err(Error::CycleDetected(labels[x].clone()));
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for &x in order.iter().rev() {
            let mut row = FixedBitSet::with_capacity(n);
            for &y in &succ[x] {
                row.insert(y);
                row.union_with(&up[y]);
            }
            up[x] = row;
        }
        Ok(Self::from_up_rows(labels, index, up))
    }

    /// Assembles a poset from already transitively closed strict up-rows.
    pub(crate) fn from_up_rows(labels: Vec<String>, index: HashMap<String, ElementId>, up: Vec<FixedBitSet>) -> Poset {
        let n = labels.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (x, row) in up.iter().enumerate() {
            for y in row.ones() {
                down[y].insert(x);
            }
        }
        Poset {
            labels,
            index,
            up,
            down,
        }
    }

    /// Builds from a closed strict relation, checking that it is a strict order.
    pub(crate) fn from_closed_rows(labels: Vec<String>, up: Vec<FixedBitSet>) -> Result<Poset> {
        let index = index_labels(&labels)?;
        let p = Self::from_up_rows(labels, index, up);
        if let Some(x) = p.order_violation() {
            return Err(Error::CycleDetected(p.labels[x].clone()));
        }
        Ok(p)
    }

    /// An antichain with the given labels.
    pub fn antichain<L>(labels: L) -> Result<Poset>
    where
        L: IntoIterator,
        L::Item: Into<String>,
    {
        Self::from_covers::<_, &str>(labels, &[])
    }

    /// A chain `labels[0] < labels[1] < ...`.
    pub fn chain<L>(labels: L) -> Result<Poset>
    where
        L: IntoIterator,
        L::Item: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let pairs: Vec<_> = (1..labels.len()).map(|i| (i - 1, i)).collect();
        Self::from_relation(labels, &pairs)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, x: ElementId) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id(&self, label: &str) -> Option<ElementId> {
        self.index.get(label).copied()
    }

    /// Like [`Poset::id`] but reports a missing label as an error.
    pub fn require(&self, label: &str) -> Result<ElementId> {
        self.id(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn ids(&self) -> std::ops::Range<ElementId> {
        0..self.len()
    }

    pub fn lt(&self, x: ElementId, y: ElementId) -> bool {
        self.up[x].contains(y)
    }

    pub fn le(&self, x: ElementId, y: ElementId) -> bool {
        x == y || self.lt(x, y)
    }

    pub fn comparable(&self, x: ElementId, y: ElementId) -> bool {
        self.lt(x, y) || self.lt(y, x)
    }

    /// Strict upper bounds of `x` as a bit row.
    pub fn above(&self, x: ElementId) -> &FixedBitSet {
        &self.up[x]
    }

    /// Strict lower bounds of `x` as a bit row.
    pub fn below(&self, x: ElementId) -> &FixedBitSet {
        &self.down[x]
    }

    pub fn is_minimal(&self, x: ElementId) -> bool {
        self.down[x].is_clear()
    }

    pub fn is_maximal(&self, x: ElementId) -> bool {
        self.up[x].is_clear()
    }

    pub fn minimal_elements(&self) -> Vec<ElementId> {
        self.ids().filter(|&x| self.is_minimal(x)).collect()
    }

    pub fn maximal_elements(&self) -> Vec<ElementId> {
        self.ids().filter(|&x| self.is_maximal(x)).collect()
    }

    /// Elements covering `x`.
    pub fn upper_covers(&self, x: ElementId) -> Vec<ElementId> {
        self.up[x]
            .ones()
            .filter(|&y| self.up[x].is_disjoint(&self.down[y]))
            .collect()
    }

    /// Elements covered by `x`.
    pub fn lower_covers(&self, x: ElementId) -> Vec<ElementId> {
        self.down[x]
            .ones()
            .filter(|&y| self.down[x].is_disjoint(&self.up[y]))
            .collect()
    }

    /// All cover pairs `(x, y)` with `x < y` and nothing strictly between.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        self.ids()
            .flat_map(|x| self.upper_covers(x).into_iter().map(move |y| (x, y)))
            .collect()
    }

    /// Number of strict comparabilities `x < y`.
    pub fn relation_count(&self) -> usize {
        self.up.iter().map(|r| r.count_ones(..)).sum()
    }

    /// Ids sorted so that every element comes after all of its lower bounds.
    pub fn linear_extension(&self) -> Vec<ElementId> {
        let mut order: Vec<_> = self.ids().collect();
        order.sort_by_key(|&x| (self.down[x].count_ones(..), x));
        order
    }

    pub fn ranks(&self) -> RankProfile {
        let order = self.linear_extension();
        let n = self.len();
        let mut rank = vec![0; n];
        for &x in &order {
            rank[x] = self.down[x].ones().map(|y| rank[y] + 1).max().unwrap_or(0);
        }
        let mut dual_rank = vec![0; n];
        for &x in order.iter().rev() {
            dual_rank[x] = self.up[x].ones().map(|y| dual_rank[y] + 1).max().unwrap_or(0);
        }
        let height = rank.iter().copied().max().unwrap_or(0);
        RankProfile {
            rank,
            dual_rank,
            height,
        }
    }

    pub fn height(&self) -> usize {
        self.ranks().height
    }

    /// The same elements with every comparability reversed.
    pub fn dual(&self) -> Poset {
        Poset {
            labels: self.labels.clone(),
            index: self.index.clone(),
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// Induced subposet on `keep`, in increasing id order. Labels are preserved.
    pub fn restrict(&self, keep: &[ElementId]) -> Poset {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let m = keep.len();
        let mut new_id = vec![usize::MAX; self.len()];
        for (i, &x) in keep.iter().enumerate() {
            new_id[x] = i;
        }
        let labels: Vec<String> = keep.iter().map(|&x| self.labels[x].clone()).collect();
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let up = keep
            .iter()
            .map(|&x| {
                let mut row = FixedBitSet::with_capacity(m);
                for y in self.up[x].ones() {
                    if new_id[y] != usize::MAX {
                        row.insert(new_id[y]);
                    }
                }
                row
            })
            .collect();
        Self::from_up_rows(labels, index, up)
    }

    /// Induced subposet on the elements whose bit is set.
    pub fn restrict_bits(&self, keep: &FixedBitSet) -> Poset {
        self.restrict(&keep.ones().collect::<Vec<_>>())
    }

    /// The card `P \ {x}`.
    pub fn remove(&self, x: ElementId) -> Poset {
        let keep: Vec<_> = self.ids().filter(|&y| y != x).collect();
        self.restrict(&keep)
    }

    /// `↑x` including `x`.
    pub fn up_set(&self, x: ElementId) -> Poset {
        let mut bits = self.up[x].clone();
        bits.insert(x);
        self.restrict_bits(&bits)
    }

    /// `↓x` including `x`.
    pub fn down_set(&self, x: ElementId) -> Poset {
        let mut bits = self.down[x].clone();
        bits.insert(x);
        self.restrict_bits(&bits)
    }

    /// `↕x = ↑x ∪ ↓x`.
    pub fn neighborhood(&self, x: ElementId) -> Poset {
        let mut bits = self.up[x].clone();
        bits.union_with(&self.down[x]);
        bits.insert(x);
        self.restrict_bits(&bits)
    }

    /// Connected components of the comparability graph, each sorted, ordered by least id.
    pub fn components(&self) -> Vec<Vec<ElementId>> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut members = vec![s];
            comp[s] = c;
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                i += 1;
                for y in self.up[x].ones().chain(self.down[x].ones()) {
                    if comp[y] == usize::MAX {
                        comp[y] = c;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_antichain(&self, a: &[ElementId]) -> bool {
        a.iter().all(|&x| a.iter().all(|&y| !self.lt(x, y)))
    }

    /// Elements of the given rank.
    pub fn rank_level(&self, k: usize) -> Vec<ElementId> {
        let r = self.ranks();
        self.ids().filter(|&x| r.rank[x] == k).collect()
    }

    /// Returns an element witnessing a failure of irreflexivity or transitivity.
    pub fn order_violation(&self) -> Option<ElementId> {
        for x in self.ids() {
            if self.up[x].contains(x) {
                return Some(x);
            }
            for y in self.up[x].ones() {
                if !self.up[y].is_subset(&self.up[x]) {
                    return Some(x);
                }
            }
        }
        None
    }

    /// Same order with every label passed through `f`.
    pub fn map_labels(&self, mut f: impl FnMut(&str) -> String) -> Result<Poset> {
        let labels: Vec<String> = self.labels.iter().map(|l| f(l)).collect();
        let index = index_labels(&labels)?;
        Ok(Poset {
            labels,
            index,
            up: self.up.clone(),
            down: self.down.clone(),
        })
    }

    /// Reorders ids: element `x` of `self` becomes element `perm[x]` of the result.
    pub fn permuted(&self, perm: &[ElementId]) -> Poset {
        let n = self.len();
        assert_eq!(perm.len(), n, "permutation length");
        let mut labels = vec![String::new(); n];
        for x in self.ids() {
            labels[perm[x]] = self.labels[x].clone();
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for x in self.ids() {
            for y in self.up[x].ones() {
                up[perm[x]].insert(perm[y]);
            }
        }
        let index = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        Self::from_up_rows(labels, index, up)
    }

    /// Disjoint union; labels must not collide.
    pub fn disjoint_union(&self, other: &Poset) -> Result<Poset> {
        let n = self.len();
        let labels: Vec<String> = self.labels.iter().chain(&other.labels).cloned().collect();
        let mut pairs: Vec<_> = self
            .ids()
            .flat_map(|x| self.up[x].ones().map(move |y| (x, y)))
            .collect();
        pairs.extend(
            other
                .ids()
                .flat_map(|x| other.up[x].ones().map(move |y| (x + n, y + n))),
        );
        Self::from_relation(labels, &pairs)
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            labels: self.labels.clone(),
            covers: self
                .covers()
                .into_iter()
                .map(|(x, y)| [self.labels[x].clone(), self.labels[y].clone()])
                .collect(),
        }
    }

    pub fn from_json(j: &PosetJson) -> Result<Poset> {
        let covers: Vec<(&str, &str)> = j.covers.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        Self::from_covers(j.labels.iter().cloned(), &covers)
    }

    /// Label-indexed view of a per-element vector, for reports.
    pub fn by_label<T: Clone>(&self, values: &[T]) -> BTreeMap<String, T> {
        self.ids()
            .map(|x| (self.labels[x].clone(), values[x].clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_poset() -> Poset {
        Poset::from_covers(["a", "b", "c", "d"], &[("a", "c"), ("b", "c"), ("b", "d")]).unwrap()
    }

    #[test]
    fn chain_closure() {
        let p = Poset::from_covers(["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        assert!(p.lt(0, 2));
        assert_eq!(p.relation_count(), 3);
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Poset::from_covers(["a", "b"], &[("a", "b"), ("b", "a")]),
            Err(Error::CycleDetected(_))
        ));
        assert!(matches!(
            Poset::from_covers(["a", "a"], &[] as &[(&str, &str)]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            Poset::from_covers(["a"], &[("a", "z")]),
            Err(Error::UnknownLabel(_))
        ));
        assert!(matches!(
            Poset::from_covers(["a"], &[("a", "a")]),
            Err(Error::CycleDetected(_))
        ));
    }

    #[test]
    fn n_ranks() {
        let p = n_poset();
        let r = p.ranks();
        assert_eq!(r.rank, vec![0, 0, 1, 1]);
        assert_eq!(r.dual_rank, vec![1, 1, 0, 0]);
        assert_eq!(r.height, 1);
    }

    #[test]
    fn restrict_keeps_induced_order() {
        let p = Poset::chain(["a", "m", "z"]).unwrap();
        let q = p.remove(1);
        assert_eq!(q.labels(), ["a", "z"]);
        assert!(q.lt(0, 1));
        assert_eq!(p.restrict(&[0, 1, 2]), p);
    }

    #[test]
    fn neighborhoods() {
        let p = Poset::chain(["a", "b", "c"]).unwrap();
        assert_eq!(p.neighborhood(0).len(), 3);
        assert_eq!(p.up_set(2).len(), 1);
        let n = n_poset();
        assert_eq!(n.neighborhood(0).labels(), ["a", "c"]);
    }

    #[test]
    fn components_and_antichains() {
        let p = Poset::from_covers(["a", "b", "c"], &[("a", "b")]).unwrap();
        assert_eq!(p.components(), vec![vec![0, 1], vec![2]]);
        assert!(p.is_antichain(&[0, 2]));
        assert!(!p.is_antichain(&[0, 1]));
        assert_eq!(Poset::antichain(["x", "y", "z"]).unwrap().components().len(), 3);
    }

    #[test]
    fn four_crown_covers() {
        let p = Poset::from_covers(["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]).unwrap();
        assert_eq!(p.covers().len(), 4);
    }

    #[test]
    fn json_round_trip() {
        let p = n_poset();
        let j = serde_json::to_string(&p.to_json()).unwrap();
        let back: PosetJson = serde_json::from_str(&j).unwrap();
        assert_eq!(Poset::from_json(&back).unwrap(), p);
    }

    #[test]
    fn permuted_preserves_labels_and_order() {
        let p = n_poset();
        let q = p.permuted(&[3, 1, 0, 2]);
        assert_eq!(q.label(3), "a");
        assert!(q.lt(q.id("b").unwrap(), q.id("d").unwrap()));
        assert_eq!(q.relation_count(), 3);
    }
}
