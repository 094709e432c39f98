mod common;

use common::{brute_matching, is_iso, labels};
use deckpair_core::decks::{deck, decks_equal, ecr, max_bipartite_matching, DeckKind};
use deckpair_core::folding::{a_separation, fold, is_seam, rank_level_fold, separation_components};
use deckpair_core::iso::{find_isomorphism, invariant_fingerprint};
use deckpair_core::{Constraint, FoldSide, Poset};
use num_rational::Ratio;
use proptest::prelude::*;

/// A poset on up to `max` elements: random relation on a natural order, closed,
/// then shuffled so ids carry no order information.
fn poset(max: usize) -> impl Strategy<Value = Poset> {
    (0..=max)
        .prop_flat_map(|n| {
            let slots = n * n.saturating_sub(1) / 2;
            (
                Just(n),
                prop::collection::vec(prop::bool::weighted(0.35), slots),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, bits, perm)| {
            let mut pairs = Vec::new();
            let mut b = bits.iter();
            for i in 0..n {
                for j in i + 1..n {
                    if *b.next().unwrap() {
                        pairs.push((i, j));
                    }
                }
            }
            Poset::from_relation(labels(n), &pairs).unwrap().permuted(&perm)
        })
}

fn shuffled(p: &Poset) -> impl Strategy<Value = Poset> {
    let p = p.clone();
    Just((0..p.len()).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(move |perm| p.permuted(&perm))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn relation_is_a_strict_order(p in poset(10)) {
        for x in p.ids() {
            prop_assert!(!p.lt(x, x));
            for y in p.ids() {
                prop_assert!(!(p.lt(x, y) && p.lt(y, x)));
                for z in p.ids() {
                    prop_assert!(!(p.lt(x, y) && p.lt(y, z)) || p.lt(x, z));
                }
            }
        }
    }

    #[test]
    fn json_round_trip_is_order_identical(p in poset(10)) {
        prop_assert_eq!(Poset::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn dual_is_an_involution(p in poset(10)) {
        prop_assert_eq!(p.dual().dual(), p);
    }

    #[test]
    fn ranks_grow_along_the_order(p in poset(10)) {
        let r = p.ranks();
        for x in p.ids() {
            for y in p.ids() {
                if p.lt(x, y) {
                    prop_assert!(r.rank[x] < r.rank[y]);
                    prop_assert!(r.dual_rank[x] > r.dual_rank[y]);
                }
            }
        }
        let ext = p.linear_extension();
        let mut pos = vec![0; p.len()];
        for (i, &x) in ext.iter().enumerate() {
            pos[x] = i;
        }
        for (x, y) in p.covers() {
            prop_assert!(pos[x] < pos[y]);
        }
    }

    #[test]
    fn neighborhoods_hold_exactly_the_comparable_elements(p in poset(10)) {
        for x in p.ids() {
            let want = p.ids().filter(|&y| y == x || p.comparable(x, y)).count();
            prop_assert_eq!(p.neighborhood(x).len(), want);
        }
    }

    #[test]
    fn shuffled_copies_are_isomorphic((p, q) in poset(9).prop_flat_map(|p| (Just(p.clone()), shuffled(&p)))) {
        let m = find_isomorphism(&p, &q, &Constraint::none()).unwrap();
        prop_assert!(m.as_ref().is_some_and(|m| is_iso(&p, &q, m.as_slice())));
        prop_assert_eq!(invariant_fingerprint(&p), invariant_fingerprint(&q));
        if p.len() <= 7 {
            prop_assert_eq!(ecr(&p, &q).unwrap(), Ratio::from_integer(1));
        }
    }

    #[test]
    fn deck_equality_is_symmetric(p in poset(6), q in poset(6)) {
        for kind in [DeckKind::Maximal, DeckKind::Minimal, DeckKind::Full] {
            for marked in [false, true] {
                let (a, b) = (deck(&p, kind, marked), deck(&q, kind, marked));
                prop_assert_eq!(decks_equal(&a, &b).is_some(), decks_equal(&b, &a).is_some());
            }
        }
    }

    #[test]
    fn matching_is_maximum(adj in prop::collection::vec(prop::collection::vec(any::<bool>(), 6), 0..=6)) {
        let lists: Vec<Vec<usize>> = adj
            .iter()
            .map(|row| (0..row.len()).filter(|&j| row[j]).collect())
            .collect();
        let m = max_bipartite_matching(&lists, 6);
        prop_assert_eq!(m.len(), brute_matching(&adj));
        for &(i, j) in &m {
            prop_assert!(adj[i][j]);
        }
    }

    #[test]
    fn seams_split_connected_posets(p in poset(9)) {
        let r = p.ranks();
        for k in 0..=r.height {
            let level = p.rank_level(k);
            let comps = separation_components(&p, &level).unwrap();
            prop_assert_eq!(a_separation(&p, &level).unwrap().len(), p.len() - level.len());
            prop_assert_eq!(is_seam(&p, &level).unwrap(), p.is_connected() && comps.len() >= 2);
        }
    }

    #[test]
    fn folds_keep_one_side_and_reverse_the_other(p in poset(9)) {
        for k in 0..=p.height() {
            let Ok(sf) = rank_level_fold(&p, k, FoldSide::Upper) else { continue };
            let Ok(f) = fold(&p, &sf) else { continue };
            let id = |l: &String| p.require(l).unwrap();
            let a: Vec<usize> = sf.seam.iter().map(id).collect();
            let s: Vec<usize> = sf.s_side.iter().map(id).chain(a.iter().copied()).collect();
            let fa: Vec<usize> = sf.f_side.iter().map(id).chain(a.iter().copied()).collect();
            prop_assert_eq!(f.labels(), p.labels());
            for &x in &s {
                for &y in &s {
                    prop_assert_eq!(f.lt(x, y), p.lt(x, y));
                }
            }
            for &x in &fa {
                for &y in &fa {
                    prop_assert_eq!(f.lt(x, y), p.lt(y, x));
                }
            }
            for x in sf.s_side.iter().map(id) {
                for y in sf.f_side.iter().map(id) {
                    prop_assert!(!f.comparable(x, y));
                }
            }
        }
    }
}
