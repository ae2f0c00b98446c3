//! Finite-frame analogs of the modal logic of forcing and of grounds.
//!
//! Frames carry a single "up" relation; the "down" modality always reads it
//! backwards. On top of model checking the crate computes substitution-closed
//! validities at a pointed model, decides PL, S4, S4.2 and S5 with
//! countermodels, and certifies independent button and switch families.

mod compiled;
pub mod controls;
pub mod formula;
pub mod frame;
pub mod semantics;
pub mod theories;

pub use formula::{parse, Direction, Formula, Substitution};
pub use frame::{Frame, PointedModel, WorldSet};
