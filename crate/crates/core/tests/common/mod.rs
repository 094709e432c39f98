//! Brute-force oracles shared by the integration tests. Nothing here calls the
//! search engine.

#![allow(dead_code)]

use deckpair_core::{ElementId, Poset};
use rand::Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// Random poset: each pair `i < j` of a random linear order is related with
/// probability `density`, then closed under transitivity.
pub fn random_poset(rng: &mut impl Rng, n: usize, density: f64) -> Poset {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(density) {
                pairs.push((order[i], order[j]));
            }
        }
    }
    Poset::from_relation(labels(n), &pairs).expect("acyclic by construction")
}

/// Every labeled poset on `n` elements whose relation respects the id order,
/// which covers every isomorphism type. Duplicates are not removed.
pub fn all_natural_posets(n: usize) -> Vec<Poset> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << slots.len()) {
        let pairs: Vec<_> = slots
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &s)| s)
            .collect();
        let p = Poset::from_relation(labels(n), &pairs).unwrap();
        // Keep only relations that were already transitively closed, so each
        // closed relation appears once.
        if p.relation_count() == pairs.len() {
            out.push(p);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Whether `map` is an order isomorphism `p → q`, checked pair by pair.
pub fn is_iso(p: &Poset, q: &Poset, map: &[ElementId]) -> bool {
    if p.len() != q.len() || map.len() != p.len() {
        return false;
    }
    let mut seen = vec![false; q.len()];
    for &y in map {
        if y >= q.len() || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    p.ids().all(|x| p.ids().all(|y| p.lt(x, y) == q.lt(map[x], map[y])))
}

/// Every bijection that is an isomorphism and respects marks and pins.
pub fn brute_isomorphisms(
    p: &Poset,
    q: &Poset,
    marks: Option<(&[u64], &[u64])>,
    pins: &[(ElementId, ElementId)],
) -> Vec<Vec<ElementId>> {
    if p.len() != q.len() {
        return Vec::new();
    }
    permutations(p.len())
        .into_iter()
        .filter(|m| pins.iter().all(|&(x, y)| m[x] == y))
        .filter(|m| marks.map_or(true, |(a, b)| p.ids().all(|x| a[x] == b[m[x]])))
        .filter(|m| is_iso(p, q, m))
        .collect()
}

/// Size of a maximum matching by trying every injective assignment.
pub fn brute_matching(adj: &[Vec<bool>]) -> usize {
    fn go(i: usize, adj: &[Vec<bool>], used: &mut [bool]) -> usize {
        if i == adj.len() {
            return 0;
        }
        let mut best = go(i + 1, adj, used);
        for j in 0..used.len() {
            if adj[i][j] && !used[j] {
                used[j] = true;
                best = best.max(1 + go(i + 1, adj, used));
                used[j] = false;
            }
        }
        best
    }
    let right = adj.first().map_or(0, Vec::len);
    go(0, adj, &mut vec![false; right])
}
