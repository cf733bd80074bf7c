//! Finite automata over traversal symbols: NFAs, total DFAs, subset
//! construction, minimization and equivalence with shortest witnesses.
//!
//! Every automaton here recognises a prefix-closed language: all live
//! states accept and state 0 is a non-accepting trap.

mod dfa;
mod equivalence;
mod nfa;

pub use dfa::{determinize, minimize, Dfa};
pub use equivalence::{equivalent, Side, Verdict};
pub use nfa::{merge_alphabets, Nfa};

/// Index of the trap state in every automaton.
pub const TRAP: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomataError {
    #[error("alphabet is not sorted and duplicate-free")]
    UnsortedAlphabet,
    #[error("start state {0} is not a live state")]
    BadStart(usize),
    #[error("state {0} is out of range")]
    BadState(usize),
    #[error("symbol index {0} is out of range")]
    BadSymbol(usize),
    #[error("symbol {0} is missing from the target alphabet")]
    MissingSymbol(String),
    #[error("transition table is not total")]
    NotTotal,
    #[error("trap state has a transition to a live state")]
    TrapEscapes,
}

/// Accepting-run membership, for any automaton.
pub fn accepts(a: &Nfa, word: &[crate::model::Symbol]) -> bool {
    a.accepts(word)
}
