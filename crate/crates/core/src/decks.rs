use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iso::{find_isomorphism, fingerprint_marked, Constraint, IsoMap};
use crate::poset::{ElementId, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarkingKind {
    /// Rank of each survivor in the original poset.
    OriginalRank,
    /// 1 for survivors that were maximal in the original poset.
    MaximalFlag,
    /// 1 for survivors that were minimal in the original poset.
    MinimalFlag,
}

/// Values attached to the surviving elements of a card, indexed by card id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    pub kind: MarkingKind,
    pub values: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Card {
    pub poset: Poset,
    pub removed_label: String,
    pub removed_rank: usize,
    pub marking: Option<Marking>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeckKind {
    Maximal,
    Minimal,
    Rank(usize),
    Neighborhood(usize),
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deck {
    pub kind: DeckKind,
    pub cards: Vec<Card>,
}

/// A matching between two decks: card index pairs and the certifying isomorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeckMatching {
    pub pairs: Vec<(usize, usize)>,
    pub isos: Vec<IsoMap>,
}

fn marking_for(p: &Poset, keep: &[ElementId], kind: MarkingKind) -> Marking {
    let values = match kind {
        MarkingKind::OriginalRank => {
            let r = p.ranks();
            keep.iter().map(|&y| r.rank[y] as u64).collect()
        }
        MarkingKind::MaximalFlag => keep.iter().map(|&y| p.is_maximal(y) as u64).collect(),
        MarkingKind::MinimalFlag => keep.iter().map(|&y| p.is_minimal(y) as u64).collect(),
    };
    Marking { kind, values }
}

/// The card `p \ {x}`, optionally marked.
pub fn card_with(p: &Poset, x: ElementId, marking: Option<MarkingKind>) -> Card {
    let keep: Vec<_> = p.ids().filter(|&y| y != x).collect();
    Card {
        poset: p.restrict(&keep),
        removed_label: p.label(x).to_string(),
        removed_rank: p.ranks().rank[x],
        marking: marking.map(|k| marking_for(p, &keep, k)),
    }
}

/// The card `p \ {x}`; a marked card records original ranks.
pub fn card(p: &Poset, x: ElementId, marked: bool) -> Card {
    card_with(p, x, marked.then_some(MarkingKind::OriginalRank))
}

/// One card per qualifying element. Marked extremal decks carry extremal flags,
/// marked rank and full decks carry original ranks.
pub fn deck(p: &Poset, kind: DeckKind, marked: bool) -> Deck {
    let r = p.ranks();
    let (elements, marking): (Vec<ElementId>, _) = match kind {
        DeckKind::Maximal => (p.maximal_elements(), MarkingKind::MaximalFlag),
        DeckKind::Minimal => (p.minimal_elements(), MarkingKind::MinimalFlag),
        DeckKind::Rank(k) => (p.ids().filter(|&x| r.rank[x] == k).collect(), MarkingKind::OriginalRank),
        DeckKind::Full => (p.ids().collect(), MarkingKind::OriginalRank),
        DeckKind::Neighborhood(k) => return neighborhood_deck(p, k),
    };
    let marking = marked.then_some(marking);
    Deck {
        kind,
        cards: elements.into_iter().map(|x| card_with(p, x, marking)).collect(),
    }
}

/// Neighborhoods `↕x` of the rank-`k` elements, as unmarked cards.
pub fn neighborhood_deck(p: &Poset, k: usize) -> Deck {
    let r = p.ranks();
    let cards = p
        .ids()
        .filter(|&x| r.rank[x] == k)
        .map(|x| Card {
            poset: p.neighborhood(x),
            removed_label: p.label(x).to_string(),
            removed_rank: k,
            marking: None,
        })
        .collect();
    Deck {
        kind: DeckKind::Neighborhood(k),
        cards,
    }
}

pub fn card_fingerprint(c: &Card) -> u64 {
    let marks = c.marking.as_ref().map(|m| m.values.as_slice());
    fingerprint_marked(&c.poset, marks)
}

/// Marked (if both cards carry markings) isomorphism between two cards.
pub fn card_isomorphism(a: &Card, b: &Card) -> Option<IsoMap> {
    let constraint = match (&a.marking, &b.marking) {
        (Some(ma), Some(mb)) => {
            if ma.kind != mb.kind {
                return None;
            }
            Constraint::none().preserving(ma.values.clone(), mb.values.clone())
        }
        _ => Constraint::none(),
    };
    find_isomorphism(&a.poset, &b.poset, &constraint).expect("unbudgeted search")
}

/// Pairwise isomorphisms, filtered by fingerprint and computed in parallel.
fn compatibility(d1: &Deck, d2: &Deck) -> Vec<Vec<Option<IsoMap>>> {
    let f1: Vec<u64> = d1.cards.par_iter().map(card_fingerprint).collect();
    let f2: Vec<u64> = d2.cards.par_iter().map(card_fingerprint).collect();
    (0..d1.cards.len())
        .into_par_iter()
        .map(|i| {
            (0..d2.cards.len())
                .into_par_iter()
                .map(|j| {
                    if f1[i] != f2[j] {
                        None
                    } else {
                        card_isomorphism(&d1.cards[i], &d2.cards[j])
                    }
                })
                .collect()
        })
        .collect()
}

/// Maximum bipartite matching by augmenting paths, visiting edges in index order.
pub fn max_bipartite_matching(adj: &[Vec<usize>], right: usize) -> Vec<(usize, usize)> {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].map_or(true, |w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    for u in 0..adj.len() {
        let mut seen = vec![false; right];
        augment(u, adj, &mut seen, &mut owner);
    }
    let mut pairs: Vec<(usize, usize)> = owner
        .iter()
        .enumerate()
        .filter_map(|(v, o)| o.map(|u| (u, v)))
        .collect();
    pairs.sort_unstable();
    pairs
}

/// A maximum matching of pairwise isomorphic cards (not necessarily perfect).
pub fn max_card_matching(d1: &Deck, d2: &Deck) -> DeckMatching {
    let mut compat = compatibility(d1, d2);
    let adj: Vec<Vec<usize>> = compat
        .iter()
        .map(|row| (0..row.len()).filter(|&j| row[j].is_some()).collect())
        .collect();
    let pairs = max_bipartite_matching(&adj, d2.cards.len());
    let isos = pairs
        .iter()
        .map(|&(i, j)| compat[i][j].take().expect("matched pair has an isomorphism"))
        .collect();
    DeckMatching { pairs, isos }
}

/// A perfect matching of isomorphic cards, or `None` when the decks differ.
pub fn decks_equal(d1: &Deck, d2: &Deck) -> Option<DeckMatching> {
    if d1.kind != d2.kind || d1.cards.len() != d2.cards.len() {
        return None;
    }
    let m = max_card_matching(d1, d2);
    (m.pairs.len() == d1.cards.len()).then_some(m)
}

/// Equal card ratio: maximum matching of the full unmarked decks divided by the size.
pub fn ecr(p: &Poset, q: &Poset) -> Result<Ratio<u64>> {
    Ok(ecr_with_matching(p, q)?.0)
}

pub fn ecr_with_matching(p: &Poset, q: &Poset) -> Result<(Ratio<u64>, DeckMatching)> {
    if p.len() != q.len() {
        return Err(Error::SizeMismatch(p.len(), q.len()));
    }
    let m = max_card_matching(&deck(p, DeckKind::Full, false), &deck(q, DeckKind::Full, false));
    let ratio = if p.is_empty() {
        Ratio::from_integer(1)
    } else {
        Ratio::new(m.pairs.len() as u64, p.len() as u64)
    };
    Ok((ratio, m))
}

/// JSON view of a deck comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeckReport {
    pub kind: DeckKind,
    pub fingerprints_p: Vec<(String, String)>,
    pub fingerprints_q: Vec<(String, String)>,
    pub matching: Vec<(String, String)>,
}

impl DeckReport {
    pub fn new(d1: &Deck, d2: &Deck, m: &DeckMatching) -> Self {
        let prints = |d: &Deck| {
            d.cards
                .iter()
                .map(|c| (c.removed_label.clone(), format!("{:016x}", card_fingerprint(c))))
                .collect()
        };
        DeckReport {
            kind: d1.kind,
            fingerprints_p: prints(d1),
            fingerprints_q: prints(d2),
            matching: m
                .pairs
                .iter()
                .map(|&(i, j)| (d1.cards[i].removed_label.clone(), d2.cards[j].removed_label.clone()))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v() -> Poset {
        Poset::from_covers(["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap()
    }

    #[test]
    fn chain_card() {
        let p = Poset::chain(["a", "b", "c"]).unwrap();
        let c = card(&p, 2, true);
        assert_eq!(c.removed_rank, 2);
        assert_eq!(c.poset.len(), 2);
        assert_eq!(c.marking.unwrap().values, vec![0, 1]);
    }

    #[test]
    fn antichain_maximal_deck() {
        let p = Poset::antichain(["a", "b", "c"]).unwrap();
        let d = deck(&p, DeckKind::Maximal, false);
        assert_eq!(d.cards.len(), 3);
        assert!(d
            .cards
            .iter()
            .all(|c| c.poset.len() == 2 && c.poset.relation_count() == 0));
        assert_eq!(
            deck(&p, DeckKind::Rank(0), false).cards,
            deck(&p, DeckKind::Minimal, false).cards
        );
    }

    #[test]
    fn deck_equals_itself() {
        let d = deck(&v(), DeckKind::Full, true);
        let m = decks_equal(&d, &d).unwrap();
        assert_eq!(m.pairs.len(), 3);
    }

    #[test]
    fn ecr_chain_vs_v() {
        let p = Poset::chain(["a", "b", "c"]).unwrap();
        assert_eq!(ecr(&p, &v()).unwrap(), Ratio::new(2, 3));
        assert_eq!(ecr(&p, &p).unwrap(), Ratio::from_integer(1));
        assert!(matches!(
            ecr(&p, &Poset::chain(["a"]).unwrap()),
            Err(Error::SizeMismatch(3, 1))
        ));
    }

    #[test]
    fn neighborhood_decks() {
        let p = Poset::chain(["a", "b", "c"]).unwrap();
        let d = neighborhood_deck(&p, 1);
        assert_eq!(d.cards.len(), 1);
        assert_eq!(d.cards[0].poset.len(), 3);
        let a = Poset::antichain(["a", "b"]).unwrap();
        assert!(neighborhood_deck(&a, 0).cards.iter().all(|c| c.poset.len() == 1));
    }

    #[test]
    fn matching_is_maximum() {
        // Greedy 0-0 would block; augmenting paths recover a perfect matching.
        let adj = vec![vec![0, 1], vec![0]];
        assert_eq!(max_bipartite_matching(&adj, 2), vec![(0, 1), (1, 0)]);
    }
}
