//! An independent check of synthesis results on the region automaton: an
//! explicit graph of (location, region) states with event steps and τ
//! steps to the next region in time. Nonblocking, controllability and
//! safety are decided on this graph, and a second synthesis procedure
//! working directly on it serves as the reference for permissiveness.

mod automaton;
mod checks;
mod classify;
mod compare;
mod indirect;
mod semantics;

use thiserror::Error;

pub use automaton::{
    full_region_automaton, region_automaton, region_automaton_over, Label, RegionAutomaton, State, Transition,
    WitnessStep,
};
pub use checks::{check_controllability, check_nonblocking, check_safety, nonblocking_verdict, Verdict};
pub use classify::{bad_states, nonblocking_states};
pub use compare::{ra_language_equal, ra_language_included};
pub use indirect::{indirect_on, indirect_synthesize, Indirect};
pub use semantics::{delay_successor, Semantics};

use crate::model::ModelError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("clock `{0}` is not part of the partition")]
    UnknownClock(String),
    #[error("the ceiling of clock `{0}` is below the automaton's constants")]
    CeilingTooSmall(String),
    #[error("the automata have different alphabets")]
    AlphabetMismatch,
    #[error("region automaton is not deterministic: {0}")]
    Nondeterministic(String),
}
