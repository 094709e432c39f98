use std::collections::BTreeSet;

use num_rational::Ratio;

use super::towers::{card_name, explicit_card, matched_labels, neighborhoods_match, pair};
use super::{seeded_relabel, yes_no, Inputs, Recorder};
use crate::constructions::{CardSpec, PropertyCheck};
use crate::decks::{deck, decks_equal, max_card_matching, DeckKind};
use crate::error::Result;
use crate::folding::{build_folded_pair, check_fold_pair, fold, rank_level_fold, FoldSide, SeamFold};
use crate::iso::{is_isomorphic, verify_isomorphism, Constraint, IsoMap};
use crate::poset::Poset;

/// Parameters of the folded pair checked by the folded-pair suite.
pub(crate) const FOLDED_N: usize = 1;
pub(crate) const FOLDED_S: usize = 2;

fn failed_ids(checks: &[PropertyCheck]) -> BTreeSet<String> {
    checks.iter().filter(|c| !c.passed).map(|c| c.id.clone()).collect()
}

fn upper_folds(p: &Poset, q: &Poset, k: usize) -> Result<(SeamFold, SeamFold)> {
    Ok((
        rank_level_fold(p, k, FoldSide::Upper)?,
        rank_level_fold(q, k, FoldSide::Upper)?,
    ))
}

/// Records the side conditions of folding `p`, `q` at rank `k`, then whether
/// (non)isomorphism survives the fold. Returns the folded pair.
fn fold_pair(
    rec: &mut Recorder,
    prefix: &str,
    p: &Poset,
    q: &Poset,
    k: usize,
) -> Result<(Poset, Poset, SeamFold, SeamFold)> {
    let (sf, sf2) = upper_folds(p, q, k)?;
    rec.checks(prefix, &check_fold_pair(p, q, k, &sf, &sf2));
    let (fp, fq) = (fold(p, &sf)?, fold(q, &sf2)?);
    rec.claim(format!("{prefix}/isomorphism-carries-over"), || {
        let before = is_isomorphic(p, q);
        let after = is_isomorphic(&fp, &fq);
        Ok((
            before == after,
            format!("isomorphic before {}, after {}", yes_no(before), yes_no(after)),
        ))
    });
    Ok((fp, fq, sf, sf2))
}

fn side_of(sf: &SeamFold, l: &str) -> u8 {
    if sf.seam.iter().any(|x| x == l) {
        0
    } else if sf.f_side.iter().any(|x| x == l) {
        1
    } else {
        2
    }
}

pub(crate) fn fold_suite(rec: &mut Recorder, inputs: &Inputs, seed: u64) -> Result<()> {
    let chain = |n: usize| Poset::chain((0..n).map(|i| format!("c{i}")));
    let c3 = chain(3)?;
    rec.claim("chain/fold-shape", || {
        let sf = rank_level_fold(&c3, 1, FoldSide::Upper)?;
        let f = fold(&c3, &sf)?;
        let ok = f.lt(0, 1) && f.lt(2, 1) && !f.comparable(0, 2);
        Ok((ok, "three-chain folds into two elements under the middle one".into()))
    });
    rec.claim("chain/mirror-pair-flags-crossover", || {
        let (sf, sf2) = upper_folds(&c3, &c3, 1)?;
        let failed = failed_ids(&check_fold_pair(&c3, &c3, 1, &sf, &sf2));
        let want: BTreeSet<String> = ["no-dual-crossover-first", "no-dual-crossover-second"]
            .map(String::from)
            .into();
        Ok((failed == want, format!("failed {failed:?}")))
    });
    let c4 = chain(4)?;
    let (c4r, _) = seeded_relabel(&c4, seed);
    fold_pair(rec, "chain-relabeled", &c4, &c4r, 2)?;

    let pair = pair(inputs, 1)?;
    let top = *pair.ranks.last().expect("tower has designated ranks");
    let (relabeled, _) = seeded_relabel(&pair.p1, seed);
    fold_pair(rec, "tower-relabeled", &pair.p1, &relabeled, top)?;
    let (f1, f2, sf, sf2) = fold_pair(rec, "tower-pair", &pair.p1, &pair.p2, top)?;

    rec.claim("tower-pair/spine-cards-after-fold", || {
        for i in 0..=pair.n() {
            for c in [CardSpec::D(i), CardSpec::P(i)] {
                let l = pair.removed_label(c);
                let (m, ok) = explicit_card(&pair, c)?;
                if !ok {
                    return Ok((false, format!("card {} does not verify before folding", card_name(c))));
                }
                let c1 = pair.p1.remove(pair.p1.require(&l)?);
                let c2 = pair.p2.remove(pair.p2.require(&l)?);
                let labels = m.to_label_map(&c1, &c2);
                if let Some((a, b)) = labels.iter().find(|(a, b)| side_of(&sf, a) != side_of(&sf2, b)) {
                    return Ok((false, format!("card {} maps `{a}` to `{b}` across sides", card_name(c))));
                }
                let g1 = f1.remove(f1.require(&l)?);
                let g2 = f2.remove(f2.require(&l)?);
                let folded = IsoMap::from_label_map(&g1, &g2, &labels)?;
                if !verify_isomorphism(&g1, &g2, &folded, &Constraint::none()) {
                    return Ok((false, format!("card {} does not verify after folding", card_name(c))));
                }
            }
        }
        Ok((
            true,
            format!("{} spine cards keep side-respecting isomorphisms", 2 * pair.n() + 2),
        ))
    });
    rec.claim("tower-pair/neighborhoods-after-fold", || {
        let (r1, r2) = (pair.p1.ranks(), pair.p2.ranks());
        let (g1, g2) = (f1.ranks(), f2.ranks());
        let mut premises = 0;
        for c in CardSpec::all(pair.n()) {
            let l = pair.removed_label(c);
            let (x1, x2) = (pair.p1.require(&l)?, pair.p2.require(&l)?);
            if r1.rank[x1] != r2.rank[x2] || !neighborhoods_match(&pair.p1, &l, &pair.p2, &l)? {
                continue;
            }
            premises += 1;
            let (y1, y2) = (f1.require(&l)?, f2.require(&l)?);
            if g1.rank[y1] != g2.rank[y2] || !neighborhoods_match(&f1, &l, &f2, &l)? {
                return Ok((false, format!("`{l}` loses its match after folding")));
            }
        }
        Ok((
            premises > 0,
            format!("{premises} elements with equal rank and neighborhood keep both"),
        ))
    });
    Ok(())
}

pub(crate) fn folded_pair(rec: &mut Recorder, inputs: &Inputs) -> Result<()> {
    let (n, s) = (FOLDED_N, FOLDED_S);
    let fp = build_folded_pair(&inputs.q, &inputs.r, n, s)?;
    for (j, step) in fp.steps.iter().enumerate() {
        rec.checks(&format!("step-{j}"), &step.checks);
    }
    let (q1, q2) = (&fp.q1, &fp.q2);
    let h = q1.height();
    rec.claim("not-isomorphic", || {
        let iso = crate::iso::find_isomorphism(q1, q2, &Constraint::none())?;
        Ok((iso.is_none(), format!("exhaustive search on {} elements", q1.len())))
    });
    for (name, kind) in [("maximal", DeckKind::Maximal), ("minimal", DeckKind::Minimal)] {
        for marked in [false, true] {
            let id = if marked {
                format!("marked-{name}-deck")
            } else {
                format!("{name}-deck")
            };
            rec.claim(id, || {
                let ok = decks_equal(&deck(q1, kind, marked), &deck(q2, kind, marked)).is_some();
                Ok((ok, format!("perfect matching {}", yes_no(ok))))
            });
        }
    }
    for &r in &fp.ranks {
        rec.claim(format!("marked-rank-{r}-deck"), || {
            let ok = decks_equal(&deck(q1, DeckKind::Rank(r), true), &deck(q2, DeckKind::Rank(r), true)).is_some();
            Ok((ok, format!("perfect matching {}", yes_no(ok))))
        });
    }
    rec.claim("designated-ranks-not-extremal", || {
        for &r in &fp.ranks[1..] {
            for q in [q1, q2] {
                if q.rank_level(r).iter().any(|&x| q.is_maximal(x) || q.is_minimal(x)) {
                    return Ok((false, format!("rank {r} holds an extremal element")));
                }
            }
        }
        Ok((true, format!("ranks {:?}", &fp.ranks[1..])))
    });
    rec.claim("every-rank-has-matching-cards", || {
        let mut pairs = 0;
        for k in 0..=h {
            let (d1, d2) = (deck(q1, DeckKind::Rank(k), true), deck(q2, DeckKind::Rank(k), true));
            let m = max_card_matching(&d1, &d2);
            if m.pairs.is_empty() {
                return Ok((false, format!("rank {k} has no isomorphic marked cards")));
            }
            for (a, b) in matched_labels(&d1, &d2, &m) {
                if !neighborhoods_match(q1, &a, q2, &b)? {
                    return Ok((
                        false,
                        format!("cards without `{a}` and `{b}` match but neighborhoods differ"),
                    ));
                }
                pairs += 1;
            }
        }
        Ok((
            true,
            format!("{pairs} matched marked cards over ranks 0..={h}, neighborhoods isomorphic"),
        ))
    });
    rec.claim("equal-card-ratio", || {
        let value = crate::decks::ecr(q1, q2)?;
        let t = fp.tower_n as u64;
        let bound = Ratio::new(4 * t + 6, q1.len() as u64);
        Ok((value >= bound, format!("{value} against the bound {bound} (t = {t})")))
    });
    rec.claim("neighborhood-decks", || {
        for k in 0..=h {
            let ok = decks_equal(
                &deck(q1, DeckKind::Neighborhood(k), false),
                &deck(q2, DeckKind::Neighborhood(k), false),
            )
            .is_some();
            if !ok {
                return Ok((false, format!("rank {k} neighborhood decks differ")));
            }
        }
        Ok((true, format!("ranks 0..={h}")))
    });
    rec.claim("populated-levels", || {
        let mut sizes = Vec::new();
        for q in [q1, q2] {
            sizes.push(q.maximal_elements().len());
            sizes.push(q.minimal_elements().len());
            sizes.extend(fp.ranks.iter().map(|&r| q.rank_level(r).len()));
        }
        let ok = sizes.iter().all(|&c| c >= s);
        Ok((
            ok,
            format!("maximal, minimal and designated level sizes {sizes:?}, need {s}"),
        ))
    });
    Ok(())
}
