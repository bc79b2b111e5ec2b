//! Two-layered Geometry of Interaction for multiplicative polarized linear
//! logic: proof checking, cut-elimination, the relational interpretation,
//! execution formulas, and the multipointed `Int(Rel)` construction.

pub mod cli;
pub mod cutelim;
pub mod exec;
pub mod formula;
pub mod goi;
pub mod intrel;
pub mod proof;
pub mod relcore;

pub use formula::{Formula, Polarity};
pub use proof::{Proof, Sequent};
pub use relcore::{BlockRel, Entry, WireType};
