//! Supervisor synthesis: the nonblocking-state and bad-state predicates and
//! the loop that adapts guards and invariants until no bad state remains
//! reachable.

mod fixpoints;
mod problem;
mod tscs;

use thiserror::Error;

pub use fixpoints::{bad_iterates, escape, nonblocking_iterates};
pub use problem::{CompiledEdge, Problem};
pub use tscs::{
    synthesize_with_requirements, tscs, tscs_with_partition, Completion, Options, RequirementSynthesis, Step,
    Synthesis,
};

use crate::model::{ModelError, TimedAutomaton};
use crate::regions::RegionSet;

#[derive(Debug, Error)]
pub enum SynthesisError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Region(#[from] crate::regions::RegionError),
    #[error("event `{0}` of requirement `{1}` is not in the plant alphabet")]
    AlphabetNotContained(String, String),
    #[error("clock `{0}` of requirement `{1}` is also a plant clock")]
    SharedClock(String, String),
}

/// One region set per location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateMap {
    pub locations: Vec<String>,
    pub sets: Vec<RegionSet>,
}

impl PredicateMap {
    pub fn get(&self, location: &str) -> Option<&RegionSet> {
        self.locations.iter().position(|l| l == location).map(|i| &self.sets[i])
    }
}

/// The nonblocking-state predicate with every iterate.
pub fn nbp(ta: &TimedAutomaton) -> Result<(PredicateMap, Vec<PredicateMap>), SynthesisError> {
    let p = Problem::new(ta)?;
    let iterates = nonblocking_iterates(&p, &p.guards, &p.invariants);
    Ok(wrap(&p, iterates))
}

/// The bad-state predicate for a given nonblocking predicate, with every
/// iterate.
pub fn bsp(ta: &TimedAutomaton, nonblocking: &PredicateMap) -> Result<(PredicateMap, Vec<PredicateMap>), SynthesisError> {
    let p = Problem::new(ta)?;
    let iterates = bad_iterates(&p, &p.guards, &p.invariants, &nonblocking.sets);
    Ok(wrap(&p, iterates))
}

fn wrap(p: &Problem, iterates: Vec<Vec<RegionSet>>) -> (PredicateMap, Vec<PredicateMap>) {
    let maps: Vec<PredicateMap> = iterates
        .into_iter()
        .map(|sets| PredicateMap { locations: p.locations.clone(), sets })
        .collect();
    (maps.last().expect("at least the seed").clone(), maps)
}
