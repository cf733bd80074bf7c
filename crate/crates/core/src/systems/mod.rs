//! Systems of gadgets and constructions wired together by edges, viewed as
//! one construction whose ports are the exposed locations.

mod compose;
mod file;
mod types;

pub use compose::{compose, Composite, PartSite, PartState, SystemSite};
pub use file::{load_system, parse_system, LoadError, SystemFile, UseLine};
pub use types::{
    validate_system, Component, Edge, EdgeKind, Endpoint, Exposure, GadgetSystem, Instance,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SystemError {
    #[error("invalid system: {}", crate::model::join_diagnostics(.0))]
    Invalid(Vec<crate::model::Diagnostic>),
}
