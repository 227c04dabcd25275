//! Finite category theory engine.
//!
//! Finite categories are total composition tables. On top of them the crate
//! builds set-valued (co)limits, pointwise Kan extensions, both Grothendieck
//! constructions, split (co)fibrations, diagram categories and colimits of
//! categories, and checks the decomposition formulas relating them on
//! concrete instances.

pub mod catcolim;
pub mod diagcat;
pub mod fibrations;
pub mod fincat;
pub mod finset;
pub mod fixtures;
pub mod formulas;
pub mod grothendieck;
pub mod kan;
pub mod random;
pub mod report;
mod unionfind;

pub use fincat::{FinCategory, FinFunctor, MorId, NatTransformation, ObjId};
pub use report::{Status, VerificationReport};
