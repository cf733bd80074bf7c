//! Domain vocabulary: agent states, locations, traversal symbols, gadgets,
//! the construction contract and traces.

mod construction;
mod format;
mod gadget;
mod symbol;

use std::fmt;

pub use construction::{
    observable_sequence, Axis, Config, Construction, PortFraming, PortSpec, Trace, TraceError,
};
pub use format::{parse_gadget, write_gadget};
pub use gadget::{Gadget, GadgetMachine, GadgetTransition};
pub use symbol::{full_alphabet, AgentState, Framing, Location, Symbol};

/// One invariant violation, naming the offending element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(subject: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic {
            subject: subject.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown location `{0}`")]
    UnknownLocation(String),
    #[error("{0}")]
    Syntax(String),
    #[error("invalid gadget: {}", join_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),
}

pub(crate) fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// A syntax error in one of the text formats, with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}
