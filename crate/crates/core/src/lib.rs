//! Verification and synthesis of motion-planning gadgets.
//!
//! A [`model::Construction`] is a low-level world with ports, such as a
//! Push-1 grid or a system of gadgets. [`synthesis::synthesize`] explores it
//! and returns the smallest deterministic gadget with the same observable
//! behaviour; [`synthesis::verify_equivalence`] compares it against a
//! hand-written gadget.

pub mod automata;
pub mod checkable;
pub mod cli;
pub mod dot;
pub mod fixtures;
pub mod model;
pub mod push1;
pub mod synthesis;
pub mod systems;
