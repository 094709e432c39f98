//! Graphviz export of the cover relation, one layer per rank.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::poset::Poset;

fn quote(l: &str) -> String {
    format!("\"{}\"", l.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT source for the cover graph, drawn bottom-up with elements of equal rank
/// on one layer. Nodes and edges are sorted by label, so equal posets give
/// byte-identical output.
pub fn to_dot(p: &Poset) -> String {
    let r = p.ranks();
    let mut layers: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
    for x in p.ids() {
        layers.entry(r.rank[x]).or_default().push(p.label(x));
    }
    let mut edges: Vec<(&str, &str)> = p.covers().into_iter().map(|(x, y)| (p.label(x), p.label(y))).collect();
    edges.sort_unstable();

    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=circle];\n");
    for (k, mut labels) in layers {
        labels.sort_unstable();
        let names: Vec<String> = labels.iter().map(|l| quote(l)).collect();
        writeln!(out, "  {{ rank=same; /* rank {k} */ {}; }}", names.join("; ")).expect("writing to a string");
    }
    for (a, b) in edges {
        writeln!(out, "  {} -> {};", quote(a), quote(b)).expect("writing to a string");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_has_two_edges() {
        let p = Poset::chain(["a", "b", "c"]).unwrap();
        let dot = to_dot(&p);
        assert_eq!(dot.matches("->").count(), 2);
        assert!(dot.contains("\"a\" -> \"b\";"));
    }

    #[test]
    fn empty_poset_is_an_empty_graph() {
        let p = Poset::antichain(Vec::<String>::new()).unwrap();
        assert_eq!(
            to_dot(&p),
            "digraph poset {\n  rankdir=BT;\n  node [shape=circle];\n}\n"
        );
    }

    #[test]
    fn output_ignores_id_order() {
        let p = Poset::from_covers(["x", "y", "z"], &[("x", "z"), ("y", "z")]).unwrap();
        let q = p.permuted(&[2, 0, 1]);
        assert_eq!(to_dot(&p), to_dot(&q));
    }
}
