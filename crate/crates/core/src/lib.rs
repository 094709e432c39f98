//! Finite posets with equal decks: construction, verification, folding, and
//! rigidity-based isomorphism assembly.

pub mod constructions;
pub mod decks;
pub mod dot;
pub mod error;
pub mod folding;
pub mod iso;
pub mod poset;
pub mod rigidity;
pub mod verify;

pub use decks::{Card, Deck, DeckKind, DeckMatching, Marking, MarkingKind};
pub use error::{Error, Result};
pub use folding::{FoldSide, SeamFold, SeamMode};
pub use iso::{Constraint, IsoMap, SearchOptions};
pub use poset::{ElementId, Poset, PosetJson, RankProfile};
pub use rigidity::{Assembly, CardIso, RigidSeparatorSpec, SliceMode};
pub use verify::{Claim, Inputs, Suite, VerificationReport};
