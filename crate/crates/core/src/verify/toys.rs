use std::collections::BTreeSet;

use super::{seeded_relabel, Inputs, Recorder};
use crate::error::Result;
use crate::iso::{verify_isomorphism, Constraint, IsoMap};
use crate::poset::{ElementId, Poset};
use crate::rigidity::{
    assemble_across_separator, assemble_from_level_cards, is_rigid_separator, sandwich, sandwich_band, Assembly,
    CardIso, RigidSeparatorSpec,
};

/// A poset, a seeded relabeled copy and the relabeling as an isomorphism.
struct Copy {
    p: Poset,
    q: Poset,
    full: IsoMap,
}

impl Copy {
    fn new(p: Poset, seed: u64) -> Self {
        let (q, perm) = seeded_relabel(&p, seed);
        Copy {
            p,
            q,
            full: IsoMap::new(perm),
        }
    }

    fn id(&self, l: &str) -> Result<ElementId> {
        self.p.require(l)
    }

    /// The card map found by search.
    fn found(&self, l: &str) -> Result<CardIso> {
        let x = self.id(l)?;
        CardIso::find(&self.p, &self.q, x, self.full.apply(x))
            .ok_or_else(|| crate::error::Error::InvalidParameter(format!("no card isomorphism at `{l}`")))
    }

    /// The restriction of the relabeling to a card.
    fn restricted(&self, l: &str) -> Result<CardIso> {
        Ok(CardIso::restrict(&self.full, self.id(l)?))
    }

    /// A card map with the images of two surviving elements exchanged.
    fn swapped(&self, c: &CardIso, a: &str, b: &str) -> Result<CardIso> {
        let x = c.removed.0;
        let pos = |l: &str| -> Result<usize> {
            let u = self.id(l)?;
            Ok(if u < x { u } else { u - 1 })
        };
        let mut map = c.map.as_slice().to_vec();
        map.swap(pos(a)?, pos(b)?);
        Ok(CardIso {
            removed: c.removed,
            map: IsoMap::new(map),
        })
    }
}

type Run = Result<(Assembly, Poset, Poset)>;

/// Claims for one assembler. Positive runs must assemble a verified isomorphism;
/// each negative run must fail exactly the listed checks. A final claim checks
/// that the negatives together violate every check the positives ran.
struct Cases<'a> {
    rec: &'a mut Recorder,
    name: &'static str,
    checked: BTreeSet<String>,
    violated: BTreeSet<String>,
}

impl<'a> Cases<'a> {
    fn new(rec: &'a mut Recorder, name: &'static str) -> Self {
        Cases {
            rec,
            name,
            checked: BTreeSet::new(),
            violated: BTreeSet::new(),
        }
    }

    fn positive(&mut self, id: &str, run: impl FnOnce() -> Run) {
        let checked = &mut self.checked;
        self.rec.claim(format!("{}/{id}", self.name), || {
            let (a, p, q) = run()?;
            checked.extend(a.checks.iter().map(|c| c.id.clone()));
            let ok = a.failed().is_empty()
                && a.iso
                    .as_ref()
                    .is_some_and(|m| verify_isomorphism(&p, &q, m, &Constraint::none()));
            Ok((
                ok,
                format!(
                    "{} elements, assembled isomorphism {}",
                    p.len(),
                    if ok { "verified" } else { "missing" }
                ),
            ))
        });
    }

    fn negative(&mut self, id: &str, expect: &[&str], run: impl FnOnce() -> Run) {
        self.violated.extend(expect.iter().map(|s| s.to_string()));
        self.rec.claim(format!("{}/{id}", self.name), || {
            let (a, _, _) = run()?;
            let failed: BTreeSet<&str> = a.failed().into_iter().collect();
            let want: BTreeSet<&str> = expect.iter().copied().collect();
            Ok((
                failed == want && a.iso.is_none(),
                format!("failed {failed:?}, expected {want:?}"),
            ))
        });
    }

    fn finish(self) {
        let missing: Vec<&String> = self
            .checked
            .iter()
            .filter(|c| c.as_str() != "assembled-isomorphism" && !self.violated.contains(*c))
            .collect();
        let (ok, n) = (missing.is_empty() && !self.checked.is_empty(), self.checked.len());
        self.rec.claim(format!("{}/every-check-violated", self.name), || {
            Ok((ok, format!("{n} checks, never violated: {missing:?}")))
        });
    }
}

/// `q` with one extra isolated element.
fn grown(q: &Poset) -> Result<Poset> {
    q.disjoint_union(&Poset::antichain(["extra"])?)
}

fn poset(labels: &[&str], covers: &[(&str, &str)]) -> Result<Poset> {
    Poset::from_covers(labels.iter().copied(), covers)
}

/// A five-chain with two side elements on rank 1.
fn level_cards_toy() -> Result<Poset> {
    poset(
        &["c0", "c1", "c2", "c3", "c4", "x", "y"],
        &[
            ("c0", "c1"),
            ("c1", "c2"),
            ("c2", "c3"),
            ("c3", "c4"),
            ("c0", "x"),
            ("x", "c4"),
            ("c0", "y"),
            ("y", "c3"),
        ],
    )
}

/// Two minimal elements, a two-chain band and two maximal elements.
fn separator_toy(extra: &[(&str, &str)]) -> Result<Poset> {
    let mut labels = vec!["m0", "m1", "b1", "b2", "t0", "t1"];
    let mut covers = vec![("m0", "b1"), ("m1", "b1"), ("b1", "b2"), ("b2", "t0"), ("b2", "t1")];
    for &(a, b) in extra {
        if !labels.contains(&a) {
            labels.push(a);
        }
        covers.push((a, b));
    }
    poset(&labels, &covers)
}

fn level_cards_claims(rec: &mut Recorder, seed: u64) -> Result<()> {
    let mut cases = Cases::new(rec, "level-cards");
    cases.positive("positive", || {
        let c = Copy::new(level_cards_toy()?, seed);
        let a = assemble_from_level_cards(&c.p, &c.q, 1, &c.found("c1")?, &c.found("x")?);
        Ok((a, c.p, c.q))
    });
    cases.negative("size-mismatch", &["same-size", "card-isomorphisms"], || {
        let c = Copy::new(level_cards_toy()?, seed);
        let q = grown(&c.q)?;
        let a = assemble_from_level_cards(&c.p, &q, 1, &c.restricted("c1")?, &c.restricted("x")?);
        Ok((a, c.p, q))
    });
    cases.negative("single-element-level", &["distinct-removals", "level-size"], || {
        let c = Copy::new(Poset::chain(["c0", "c1", "c2"])?, seed);
        let a = assemble_from_level_cards(&c.p, &c.q, 1, &c.restricted("c1")?, &c.restricted("c1")?);
        Ok((a, c.p, c.q))
    });
    cases.negative("clone-points", &["distinct-bounds"], || {
        let p = poset(
            &["c0", "c1", "k1", "c2"],
            &[("c0", "c1"), ("c0", "k1"), ("c1", "c2"), ("k1", "c2")],
        )?;
        let c = Copy::new(p, seed);
        let a = assemble_from_level_cards(&c.p, &c.q, 1, &c.restricted("c1")?, &c.restricted("k1")?);
        Ok((a, c.p, c.q))
    });
    cases.negative("symmetric-complement", &["complement-rigid"], || {
        let p = poset(
            &["u", "x", "y", "z1", "z2"],
            &[("u", "x"), ("u", "y"), ("x", "z1"), ("y", "z1"), ("y", "z2")],
        )?;
        let c = Copy::new(p, seed);
        let a = assemble_from_level_cards(&c.p, &c.q, 1, &c.restricted("x")?, &c.restricted("y")?);
        Ok((a, c.p, c.q))
    });
    cases.negative("broken-card-map", &["card-isomorphisms"], || {
        let c = Copy::new(level_cards_toy()?, seed);
        let psi = c.swapped(&c.restricted("c1")?, "c2", "c3")?;
        let a = assemble_from_level_cards(&c.p, &c.q, 1, &psi, &c.restricted("x")?);
        Ok((a, c.p, c.q))
    });
    // Rigidity of the complement forces the two card maps to agree, so the
    // agreement checks cannot fail while every hypothesis holds.
    cases
        .violated
        .extend(["maps-agree-off-level", "maps-agree-on-level"].map(String::from));
    cases.finish();
    Ok(())
}

fn separator_claims(rec: &mut Recorder, inputs: &Inputs, seed: u64) -> Result<()> {
    let band = RigidSeparatorSpec::new(1, 2)?;
    let mut cases = Cases::new(rec, "separator");
    cases.positive("positive", || {
        let c = Copy::new(separator_toy(&[])?, seed);
        let a = assemble_across_separator(&c.p, &c.q, &band, &c.found("t0")?, &c.found("m0")?);
        Ok((a, c.p, c.q))
    });
    cases.positive("gadget-separator", || {
        let core = &inputs.q.poset;
        let p = sandwich(core, 2, 2)?;
        let spec = sandwich_band(core)?;
        if !is_rigid_separator(&p, &spec) {
            return Err(crate::error::Error::InvalidParameter(
                "the bottom gadget is not a rigid separator".into(),
            ));
        }
        let c = Copy::new(p, seed);
        let a = assemble_across_separator(&c.p, &c.q, &spec, &c.found("top0")?, &c.found("bot0")?);
        Ok((a, c.p, c.q))
    });
    cases.negative(
        "size-mismatch",
        &["same-size", "phi-rank-preserving", "psi-rank-preserving"],
        || {
            let c = Copy::new(separator_toy(&[])?, seed);
            let q = grown(&c.q)?;
            let a = assemble_across_separator(&c.p, &q, &band, &c.restricted("t0")?, &c.restricted("m0")?);
            Ok((a, c.p, q))
        },
    );
    cases.negative("symmetric-band", &["band-rigid"], || {
        let p = poset(
            &["m0", "m1", "x1", "y1", "x2", "y2", "t0", "t1"],
            &[
                ("m0", "x1"),
                ("m1", "x1"),
                ("m0", "y1"),
                ("m1", "y1"),
                ("x1", "x2"),
                ("y1", "y2"),
                ("x2", "t0"),
                ("y2", "t0"),
                ("x2", "t1"),
                ("y2", "t1"),
            ],
        )?;
        let c = Copy::new(p, seed);
        let a = assemble_across_separator(&c.p, &c.q, &band, &c.restricted("t0")?, &c.restricted("m0")?);
        Ok((a, c.p, c.q))
    });
    cases.negative(
        "nothing-above",
        &["elements-above-band", "phi-removes-high-maximal"],
        || {
            let p = poset(&["m0", "m1", "b1", "b2"], &[("m0", "b1"), ("m1", "b1"), ("b1", "b2")])?;
            let c = Copy::new(p, seed);
            let a = assemble_across_separator(&c.p, &c.q, &band, &c.restricted("b2")?, &c.restricted("m0")?);
            Ok((a, c.p, c.q))
        },
    );
    cases.negative("cover-over-band", &["no-cover-over-band"], || {
        let c = Copy::new(separator_toy(&[("w", "t0")])?, seed);
        let a = assemble_across_separator(&c.p, &c.q, &band, &c.restricted("t1")?, &c.restricted("m0")?);
        Ok((a, c.p, c.q))
    });
    cases.negative("phi-removes-band-element", &["phi-removes-high-maximal"], || {
        let c = Copy::new(separator_toy(&[])?, seed);
        let a = assemble_across_separator(&c.p, &c.q, &band, &c.restricted("b2")?, &c.restricted("m0")?);
        Ok((a, c.p, c.q))
    });
    cases.negative("phi-moves-ranks", &["phi-rank-preserving"], || {
        let c = Copy::new(separator_toy(&[])?, seed);
        let phi = c.swapped(&c.restricted("t0")?, "m1", "t1")?;
        let a = assemble_across_separator(&c.p, &c.q, &band, &phi, &c.restricted("m0")?);
        Ok((a, c.p, c.q))
    });
    cases.negative("psi-removes-band-element", &["psi-removes-minimal"], || {
        let c = Copy::new(separator_toy(&[])?, seed);
        let a = assemble_across_separator(&c.p, &c.q, &band, &c.restricted("t0")?, &c.restricted("b1")?);
        Ok((a, c.p, c.q))
    });
    cases.negative(
        "psi-disagrees-on-band",
        &["psi-rank-preserving", "maps-agree-on-band"],
        || {
            let c = Copy::new(separator_toy(&[])?, seed);
            let psi = c.swapped(&c.restricted("m0")?, "b1", "b2")?;
            let a = assemble_across_separator(&c.p, &c.q, &band, &c.restricted("t0")?, &psi);
            Ok((a, c.p, c.q))
        },
    );
    cases.finish();
    Ok(())
}

pub(crate) fn rigidity(rec: &mut Recorder, inputs: &Inputs, seed: u64) -> Result<()> {
    level_cards_claims(rec, seed)?;
    separator_claims(rec, inputs, seed)
}
