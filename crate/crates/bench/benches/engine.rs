use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use deckpair_core::constructions::{build_pair, TowerSpec};
use deckpair_core::decks::{deck, decks_equal, ecr, DeckKind};
use deckpair_core::folding::{build_folded_pair, fold_at_rank};
use deckpair_core::iso::{find_isomorphism, is_rigid};
use deckpair_core::verify::{seeded_relabel, Inputs, DEFAULT_Q_BUDGET};
use deckpair_core::{Constraint, FoldSide};

fn engine(c: &mut Criterion) {
    let inputs = Inputs::build(DEFAULT_Q_BUDGET).expect("gadgets build");
    let pair = build_pair(&TowerSpec {
        q: &inputs.q,
        r: &inputs.r,
        n: 1,
    })
    .expect("tower pair builds");
    let (copy, _) = seeded_relabel(&pair.p1, 7);
    let designated = pair.ranks[0];

    c.bench_function("find_isomorphism/tower-pair-n1", |b| {
        b.iter(|| find_isomorphism(black_box(&pair.p1), black_box(&pair.p2), &Constraint::none()))
    });
    c.bench_function("find_isomorphism/tower-relabeled-n1", |b| {
        b.iter(|| find_isomorphism(black_box(&pair.p1), black_box(&copy), &Constraint::none()))
    });
    c.bench_function("is_rigid/q", |b| b.iter(|| is_rigid(black_box(&inputs.q.poset))));
    c.bench_function("decks_equal/marked-maximal-n1", |b| {
        b.iter(|| {
            let (d1, d2) = (
                deck(&pair.p1, DeckKind::Maximal, true),
                deck(&pair.p2, DeckKind::Maximal, true),
            );
            decks_equal(&d1, &d2)
        })
    });
    c.bench_function("fold_at_rank/tower-n1", |b| {
        b.iter(|| fold_at_rank(black_box(&pair.p1), designated, FoldSide::Upper))
    });

    let mut slow = c.benchmark_group("slow");
    slow.sample_size(10);
    slow.bench_function("ecr/tower-pair-n1", |b| {
        b.iter(|| ecr(black_box(&pair.p1), black_box(&pair.p2)))
    });
    slow.bench_function("build_folded_pair/n1-s2", |b| {
        b.iter(|| build_folded_pair(&inputs.q, &inputs.r, 1, 2))
    });
    slow.finish();
}

criterion_group!(benches, engine);
criterion_main!(benches);
