//! Counting, avoiding, and searching for squares, antisquares, and
//! pseudosquares in words.
//!
//! The crate provides:
//! - factor inventories (distinct squares and antisquares) and repetition
//!   measures (periods, fractional powers, critical exponent),
//! - morphisms, codings, fixed points, and a bit-exact catalog of the
//!   uniform morphisms used by the certified constructions,
//! - backtracking enumerators and exhaustive longest-word searches under
//!   avoidance constraints, over a fixed alphabet or over all alphabets
//!   at once,
//! - pseudosquare detection (`x·p(x)`, `x·t(x)`, `x·h(x)`) including the
//!   morphism-matching decision procedure, and
//! - a verifier that re-derives every claim the library is built around,
//!   producing machine-readable reports.

pub mod catalog;
pub mod error;
pub mod generator;
pub mod morphism;
pub mod pseudosquare;
pub mod repetition;
pub mod search;
pub mod verifier;
pub mod word;

pub use error::{Error, Result};
pub use morphism::Morphism;
pub use repetition::{Exponent, FreenessSpec};
pub use search::{SearchConstraint, SearchOutcome};
pub use verifier::VerificationReport;
pub use word::{FactorInventory, Word};
