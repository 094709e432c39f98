use num_rational::Ratio;

use super::{yes_no, Inputs, Recorder};
use crate::constructions::{build_pair, check_q, check_r, role, CardSpec, TowerPair, TowerSpec};
use crate::decks::{card, deck, decks_equal, ecr, max_card_matching, DeckKind, DeckMatching};
use crate::error::Result;
use crate::iso::{all_isomorphisms, find_isomorphism, is_isomorphic, verify_isomorphism, Constraint, IsoMap};
use crate::poset::Poset;
use crate::rigidity::CardIso;

/// Tower sizes checked by the tower-pair suites.
pub(crate) const TOWER_NS: [usize; 2] = [1, 2];

pub(crate) fn pair(inputs: &Inputs, n: usize) -> Result<TowerPair> {
    build_pair(&TowerSpec {
        q: &inputs.q,
        r: &inputs.r,
        n,
    })
}

pub(crate) fn card_name(c: CardSpec) -> String {
    match c {
        CardSpec::MinA => "min-a".into(),
        CardSpec::MinB => "min-b".into(),
        CardSpec::MaxA => "max-a".into(),
        CardSpec::MaxB => "max-b".into(),
        CardSpec::D(i) => format!("d{i}"),
        CardSpec::P(i) => format!("p{i}"),
        CardSpec::Cb(i) => format!("cb{i}"),
        CardSpec::Ct(i) => format!("ct{i}"),
    }
}

/// The explicit isomorphism of a card, verified on the cards it claims to relate.
pub(crate) fn explicit_card(pair: &TowerPair, c: CardSpec) -> Result<(IsoMap, bool)> {
    let l = pair.removed_label(c);
    let c1 = pair.p1.remove(pair.p1.require(&l)?);
    let c2 = pair.p2.remove(pair.p2.require(&l)?);
    let m = pair.card_isomorphism(c)?;
    let ok = verify_isomorphism(&c1, &c2, &m, &Constraint::none());
    Ok((m, ok))
}

/// `↕x` in `p` against `↕y` in `q`, by label.
pub(crate) fn neighborhoods_match(p: &Poset, x: &str, q: &Poset, y: &str) -> Result<bool> {
    Ok(is_isomorphic(
        &p.neighborhood(p.require(x)?),
        &q.neighborhood(q.require(y)?),
    ))
}

/// Removed-element label pairs of a matching.
pub(crate) fn matched_labels(
    d1: &crate::decks::Deck,
    d2: &crate::decks::Deck,
    m: &DeckMatching,
) -> Vec<(String, String)> {
    m.pairs
        .iter()
        .map(|&(i, j)| (d1.cards[i].removed_label.clone(), d2.cards[j].removed_label.clone()))
        .collect()
}

fn tower_size(inputs: &Inputs, n: usize) -> usize {
    2 * inputs.q.poset.len() + 40 * n - 2
}

pub(crate) fn tower(rec: &mut Recorder, inputs: &Inputs) -> Result<()> {
    let (checks, _) = check_r(&inputs.r.poset, &inputs.r.named);
    rec.checks("r", &checks);
    let (checks, _) = check_q(&inputs.q.poset, &inputs.q.named)?;
    rec.checks("q", &checks);

    for n in TOWER_NS {
        let pair = pair(inputs, n)?;
        let pre = format!("n{n}");
        rec.claim(format!("{pre}/size"), || {
            let want = tower_size(inputs, n);
            let ok = pair.p1.len() == want && pair.p2.len() == want;
            Ok((
                ok,
                format!("{} and {} elements, expected {want}", pair.p1.len(), pair.p2.len()),
            ))
        });
        rec.claim(format!("{pre}/not-isomorphic"), || {
            let iso = find_isomorphism(&pair.p1, &pair.p2, &Constraint::none())?;
            Ok((iso.is_none(), "exhaustive search".into()))
        });
        for (name, kind) in [("maximal", DeckKind::Maximal), ("minimal", DeckKind::Minimal)] {
            rec.claim(format!("{pre}/marked-{name}-deck"), || {
                let (d1, d2) = (deck(&pair.p1, kind, true), deck(&pair.p2, kind, true));
                let m = decks_equal(&d1, &d2);
                Ok((
                    m.is_some(),
                    format!(
                        "{} cards each, perfect matching {}",
                        d1.cards.len(),
                        yes_no(m.is_some())
                    ),
                ))
            });
        }
        rec.claim(format!("{pre}/spine-cards-rank-preserving"), || {
            let r1 = pair.p1.ranks();
            let r2 = pair.p2.ranks();
            let mut total = 0;
            for i in 0..=n {
                for c in [CardSpec::D(i), CardSpec::P(i)] {
                    let l = pair.removed_label(c);
                    let (x1, x2) = (pair.p1.require(&l)?, pair.p2.require(&l)?);
                    let all = all_isomorphisms(
                        &card(&pair.p1, x1, false).poset,
                        &card(&pair.p2, x2, false).poset,
                        &Constraint::none(),
                    )?;
                    if all.is_empty() {
                        return Ok((false, format!("card `{l}` has no isomorphism")));
                    }
                    for m in all {
                        total += 1;
                        let lifted = CardIso {
                            removed: (x1, x2),
                            map: m,
                        }
                        .lift();
                        let bad = pair
                            .p1
                            .ids()
                            .find(|&u| lifted[u].is_some_and(|v| r2.rank[v] != r1.rank[u]));
                        if let Some(u) = bad {
                            let l = pair.p1.label(u);
                            return Ok((false, format!("an isomorphism of card `{l}` moves `{l}` across ranks")));
                        }
                    }
                }
            }
            Ok((true, format!("{total} card isomorphisms, all rank-preserving")))
        });
        rec.claim(format!("{pre}/explicit-card-isomorphisms"), || {
            let cards = CardSpec::all(n);
            for &c in &cards {
                let (_, ok) = explicit_card(&pair, c)?;
                if !ok {
                    return Ok((false, format!("map for card {} does not verify", card_name(c))));
                }
            }
            Ok((true, format!("{} constructed maps verified", cards.len())))
        });
        rec.claim(format!("{pre}/removed-neighborhoods"), || {
            for c in CardSpec::all(n) {
                let l = pair.removed_label(c);
                if !neighborhoods_match(&pair.p1, &l, &pair.p2, &l)? {
                    return Ok((false, format!("neighborhoods of `{l}` differ")));
                }
            }
            Ok((true, format!("{} removed elements", 4 * n + 6)))
        });
    }
    Ok(())
}

pub(crate) fn center_removal(rec: &mut Recorder, inputs: &Inputs) -> Result<()> {
    let r = &inputs.r;
    let named = &r.named;
    let (d, p, db, pb) = (
        role(named, "d")?,
        role(named, "p")?,
        role(named, "d_bar")?,
        role(named, "p_bar")?,
    );
    let pins = [(db, db), (pb, pb), (d, p), (p, d)];
    let w = &r.witnesses;
    for (name, center, witness) in [("cb", "c_b", &w.without_cb), ("ct", "c_t", &w.without_ct)] {
        let x = r.poset.require(role(named, center)?)?;
        let c = r.poset.remove(x);
        rec.claim(format!("without-{name}/search"), || {
            let cons = Constraint::none().pin_labels(&c, &c, &pins)?;
            let found = find_isomorphism(&c, &c, &cons)?;
            Ok((
                found.is_some(),
                "automorphism fixing both minimal elements and swapping the maximal ones".into(),
            ))
        });
        rec.claim(format!("without-{name}/stored-witness"), || {
            let Some(map) = witness else {
                return Ok((false, "no witness stored".into()));
            };
            let m = IsoMap::from_label_map(&c, &c, map)?;
            let cons = Constraint::none().pin_labels(&c, &c, &pins)?;
            Ok((
                verify_isomorphism(&c, &c, &m, &cons),
                "stored map verified with the four pins".into(),
            ))
        });
    }
    for n in TOWER_NS {
        let pair = pair(inputs, n)?;
        rec.claim(format!("n{n}/center-cards"), || {
            for i in 1..=n {
                for c in [CardSpec::Cb(i), CardSpec::Ct(i)] {
                    let (_, ok) = explicit_card(&pair, c)?;
                    let l = pair.removed_label(c);
                    if !ok || !neighborhoods_match(&pair.p1, &l, &pair.p2, &l)? {
                        return Ok((false, format!("card {} fails", card_name(c))));
                    }
                }
            }
            Ok((true, format!("{} center cards with matching neighborhoods", 2 * n)))
        });
    }
    Ok(())
}

pub(crate) fn deck_pair(rec: &mut Recorder, inputs: &Inputs) -> Result<()> {
    for n in TOWER_NS {
        let pair = pair(inputs, n)?;
        let (p1, p2) = (&pair.p1, &pair.p2);
        let pre = format!("n{n}");
        let h = p1.height();
        rec.claim(format!("{pre}/not-isomorphic"), || {
            let iso = find_isomorphism(p1, p2, &Constraint::none())?;
            Ok((iso.is_none(), "exhaustive search".into()))
        });

        let mut matched: Vec<(String, String)> = Vec::new();
        let mut kinds = vec![DeckKind::Maximal, DeckKind::Minimal];
        kinds.extend(pair.ranks.iter().map(|&k| DeckKind::Rank(k)));
        for kind in kinds {
            let name = match kind {
                DeckKind::Maximal => "marked-maximal-deck".to_string(),
                DeckKind::Minimal => "marked-minimal-deck".to_string(),
                DeckKind::Rank(k) => format!("marked-rank-{k}-deck"),
                _ => unreachable!("only extremal and rank decks are listed"),
            };
            rec.claim(format!("{pre}/{name}"), || {
                let (d1, d2) = (deck(p1, kind, true), deck(p2, kind, true));
                match decks_equal(&d1, &d2) {
                    Some(m) => {
                        matched.extend(matched_labels(&d1, &d2, &m));
                        Ok((true, format!("{} cards matched", d1.cards.len())))
                    }
                    None => Ok((false, "no perfect matching".into())),
                }
            });
        }
        rec.claim(format!("{pre}/matched-card-neighborhoods"), || {
            for (a, b) in &matched {
                if !neighborhoods_match(p1, a, p2, b)? {
                    return Ok((false, format!("neighborhoods of `{a}` and `{b}` differ")));
                }
            }
            Ok((true, format!("{} matched pairs", matched.len())))
        });
        rec.claim(format!("{pre}/ranks-without-isomorphic-cards"), || {
            let none: Vec<usize> = (0..=h)
                .filter(|&k| {
                    let m = max_card_matching(&deck(p1, DeckKind::Rank(k), false), &deck(p2, DeckKind::Rank(k), false));
                    m.pairs.is_empty()
                })
                .collect();
            let want = vec![1, 2, h - 2, h - 1];
            Ok((none == want, format!("ranks {none:?}, expected {want:?} (height {h})")))
        });
        rec.claim(format!("{pre}/equal-card-ratio"), || {
            let value = ecr(p1, p2)?;
            let bound = Ratio::new(4 * n as u64 + 6, tower_size(inputs, n) as u64);
            Ok((value >= bound, format!("{value} against the bound {bound}")))
        });
        rec.claim(format!("{pre}/neighborhood-decks"), || {
            for k in 0..=h {
                let (d1, d2) = (
                    deck(p1, DeckKind::Neighborhood(k), false),
                    deck(p2, DeckKind::Neighborhood(k), false),
                );
                if decks_equal(&d1, &d2).is_none() {
                    return Ok((false, format!("rank {k} neighborhood decks differ")));
                }
            }
            Ok((true, format!("ranks 0..={h}")))
        });
    }
    Ok(())
}
