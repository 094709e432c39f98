mod common;

use common::random_poset;
use deckpair_core::iso::{find_isomorphism, verify_isomorphism};
use deckpair_core::rigidity::{
    assemble_across_separator, assemble_from_level_cards, is_rigid_separator, sandwich, sandwich_band,
};
use deckpair_core::verify::seeded_relabel;
use deckpair_core::{CardIso, Constraint, IsoMap, Poset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const HYPOTHESES: [&str; 6] = [
    "same-size",
    "card-isomorphisms",
    "distinct-removals",
    "level-size",
    "distinct-bounds",
    "complement-rigid",
];

/// Card maps for two distinct rank-`k` elements of `p`, matched to any two
/// distinct rank-`k` elements of `q` that give isomorphic marked cards.
fn card_pair(p: &Poset, q: &Poset, k: usize) -> Option<(CardIso, CardIso)> {
    let (pk, qk) = (p.rank_level(k), q.rank_level(k));
    let (&x1, &x2) = (pk.first()?, pk.get(1)?);
    for &y1 in &qk {
        let Some(psi) = CardIso::find(p, q, x1, y1) else {
            continue;
        };
        for &y2 in qk.iter().filter(|&&y| y != y1) {
            if let Some(phi) = CardIso::find(p, q, x2, y2) {
                return Some((psi, phi));
            }
        }
    }
    None
}

#[test]
fn level_card_assembly_agrees_with_search_when_its_hypotheses_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (mut held, mut iso_pairs, mut other_pairs) = (0, 0, 0);
    for round in 0..4_000 {
        let n = rng.random_range(5..=12);
        let density = rng.random_range(0.2..0.5);
        let p = random_poset(&mut rng, n, density);
        let q = if rng.random_bool(0.6) {
            seeded_relabel(&p, rng.random()).0
        } else {
            random_poset(&mut rng, n, 0.35)
        };
        for k in 0..=p.height() {
            let Some((psi, phi)) = card_pair(&p, &q, k) else {
                continue;
            };
            let a = assemble_from_level_cards(&p, &q, k, &psi, &phi);
            let hypotheses_hold = a
                .checks
                .iter()
                .filter(|c| HYPOTHESES.contains(&c.id.as_str()))
                .all(|c| c.passed);
            if !hypotheses_hold {
                continue;
            }
            held += 1;
            let search = find_isomorphism(&p, &q, &Constraint::none()).unwrap();
            assert_eq!(
                a.iso.is_some(),
                search.is_some(),
                "round {round}, rank {k}: {:?}",
                a.failed()
            );
            if let Some(m) = &a.iso {
                assert!(verify_isomorphism(&p, &q, m, &Constraint::none()));
                iso_pairs += 1;
            } else {
                other_pairs += 1;
            }
        }
    }
    assert!(held >= 100, "hypotheses held only {held} times");
    assert_eq!(held, iso_pairs + other_pairs);
}

#[test]
fn gadget_sandwich_assembles_from_extremal_cards() {
    let q = deckpair_core::constructions::find_q(deckpair_core::verify::DEFAULT_Q_BUDGET).unwrap();
    let p = sandwich(&q.poset, 3, 2).unwrap();
    let spec = sandwich_band(&q.poset).unwrap();
    assert!(is_rigid_separator(&p, &spec));
    let (copy, perm) = seeded_relabel(&p, 99);
    let full = IsoMap::new(perm);
    for (top, bot) in [("top0", "bot0"), ("top1", "bot2")] {
        let (t, b) = (p.require(top).unwrap(), p.require(bot).unwrap());
        let phi = CardIso::find(&p, &copy, t, full.apply(t)).unwrap();
        let psi = CardIso::find(&p, &copy, b, full.apply(b)).unwrap();
        let a = assemble_across_separator(&p, &copy, &spec, &phi, &psi);
        assert!(a.failed().is_empty(), "{:?}", a.failed());
        assert!(verify_isomorphism(
            &p,
            &copy,
            a.iso.as_ref().unwrap(),
            &Constraint::none()
        ));
    }
}
