//! Timed automata with controllable, uncontrollable and forcible events,
//! their synchronous product and the completion of requirements.

mod automaton;
mod complete;
mod constraint;
mod product;
mod relations;

use thiserror::Error;

pub use automaton::{merge_ceilings, CeilingMap, Edge, EventDecl, Kind, Location, TimedAutomaton};
pub use complete::{complete, dump_name};
pub use constraint::{ClockConstraint, Rel};
pub use product::{product_all, product_with_map, sync_product};
pub use relations::{check_deterministic, is_subautomaton};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("unknown {0}")]
    Unknown(String),
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error("event `{0}` is declared with conflicting attributes")]
    ConflictingEvent(String),
    #[error(transparent)]
    Region(#[from] crate::regions::RegionError),
}
