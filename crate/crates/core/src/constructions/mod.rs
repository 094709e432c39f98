//! Builders for the gadgets and tower pairs, each re-verified on construction.

mod q;
mod r;
mod tower;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iso::IsoMap;
use crate::poset::{ElementId, Poset, PosetJson};

pub use q::{check_q, find_q, load_q, q_from_template, GadgetQ, QTemplate, QWitnesses};
pub use r::{build_r, build_r_adjacent, check_r, check_r_adjacent, GadgetR, RWitnesses};
pub use tower::{
    build_adjacent_tower, build_pair, build_tower, CardSpec, TowerLayout, TowerPair, TowerPart, TowerSpec,
};

/// A label-to-label map, used for witnesses that outlive a particular id order.
pub type LabelMap = BTreeMap<String, String>;

/// Outcome of one named property check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

impl PropertyCheck {
    pub fn new(id: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        PropertyCheck {
            id: id.into(),
            passed,
            detail: detail.into(),
        }
    }
}

/// Turns the first failed check into an error.
pub(crate) fn require_all(checks: &[PropertyCheck]) -> Result<()> {
    match checks.iter().find(|c| !c.passed) {
        Some(c) => Err(Error::gadget(&c.id, &c.detail)),
        None => Ok(()),
    }
}

/// Poset plus role names, as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetJson {
    #[serde(flatten)]
    pub poset: PosetJson,
    #[serde(default)]
    pub named: BTreeMap<String, Vec<String>>,
}

/// Label map of an isomorphism between two posets.
pub(crate) fn label_map(m: &IsoMap, src: &Poset, dst: &Poset) -> LabelMap {
    m.to_label_map(src, dst)
}

/// Looks up the single label of a role.
pub(crate) fn role<'a>(named: &'a BTreeMap<String, Vec<String>>, name: &str) -> Result<&'a str> {
    match named.get(name).map(Vec::as_slice) {
        Some([l]) => Ok(l),
        _ => Err(Error::gadget(
            "roles",
            format!("role `{name}` must name exactly one element"),
        )),
    }
}

/// Places `upper` above `lower`: every non-maximal element of `lower` goes below
/// every non-minimal element of `upper`, and each identified pair is fused
/// (keeping the lower label). Labels must otherwise be disjoint.
pub fn stack(lower: &Poset, upper: &Poset, identify: &[(&str, &str)]) -> Result<Poset> {
    let mut fuse: HashMap<ElementId, ElementId> = HashMap::new();
    let mut used_lower = vec![false; lower.len()];
    for &(l, u) in identify {
        let x = lower
            .id(l)
            .ok_or_else(|| Error::BadIdentification(format!("`{l}` is not in the lower poset")))?;
        let y = upper
            .id(u)
            .ok_or_else(|| Error::BadIdentification(format!("`{u}` is not in the upper poset")))?;
        if !lower.is_maximal(x) {
            return Err(Error::BadIdentification(format!("`{l}` is not maximal below")));
        }
        if !upper.is_minimal(y) {
            return Err(Error::BadIdentification(format!("`{u}` is not minimal above")));
        }
        if used_lower[x] || fuse.insert(y, x).is_some() {
            return Err(Error::BadIdentification("identification is not injective".into()));
        }
        used_lower[x] = true;
    }
    let n = lower.len();
    let mut labels: Vec<String> = lower.labels().to_vec();
    let mut upper_id = vec![0; upper.len()];
    for y in upper.ids() {
        upper_id[y] = match fuse.get(&y) {
            Some(&x) => x,
            None => {
                labels.push(upper.label(y).to_string());
                labels.len() - 1
            }
        };
    }
    let mut pairs = Vec::new();
    for x in lower.ids() {
        pairs.extend(lower.above(x).ones().map(|y| (x, y)));
    }
    for x in upper.ids() {
        pairs.extend(upper.above(x).ones().map(|y| (upper_id[x], upper_id[y])));
    }
    let low: Vec<_> = lower.ids().filter(|&x| !lower.is_maximal(x)).collect();
    let high: Vec<_> = upper.ids().filter(|&y| !upper.is_minimal(y)).collect();
    for &x in &low {
        for &y in &high {
            pairs.push((x, upper_id[y]));
        }
    }
    debug_assert!(labels.len() == n + upper.len() - fuse.len());
    Poset::from_relation(labels, &pairs).map_err(|e| match e {
        Error::DuplicateLabel(l) => Error::BadIdentification(format!("label `{l}` occurs in both posets")),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stacking_two_chains() {
        let lo = Poset::chain(["a", "m"]).unwrap();
        let hi = Poset::chain(["m2", "z"]).unwrap();
        let s = stack(&lo, &hi, &[("m", "m2")]).unwrap();
        assert_eq!(s.labels(), ["a", "m", "z"]);
        assert_eq!(s.relation_count(), 3);
    }

    #[test]
    fn stacking_rejects_bad_identifications() {
        let lo = Poset::chain(["a", "m"]).unwrap();
        let hi = Poset::chain(["m2", "z"]).unwrap();
        assert!(matches!(
            stack(&lo, &hi, &[("a", "m2")]),
            Err(Error::BadIdentification(_))
        ));
        assert!(matches!(
            stack(&lo, &hi, &[("m", "z")]),
            Err(Error::BadIdentification(_))
        ));
        let clash = Poset::chain(["a", "z"]).unwrap();
        assert!(matches!(stack(&lo, &clash, &[]), Err(Error::BadIdentification(_))));
    }
}
