use std::collections::BTreeSet;

use serde::Serialize;

use super::automaton::{region_automaton_over, Label, RegionAutomaton, WitnessStep};
use super::semantics::Semantics;
use super::OracleError;
use crate::model::{complete, dump_name, merge_ceilings, product_with_map, TimedAutomaton};
use crate::regions::Partition;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub property: String,
    pub passed: bool,
    pub message: String,
    /// For a failure, a path from the initial state to the offending state;
    /// the last step's label is the offending one, if any.
    pub witness: Vec<WitnessStep>,
}

impl Verdict {
    fn pass(property: &str) -> Verdict {
        Verdict { property: property.into(), passed: true, message: String::new(), witness: Vec::new() }
    }

    fn fail(property: &str, message: String, witness: Vec<WitnessStep>) -> Verdict {
        Verdict { property: property.into(), passed: false, message, witness }
    }
}

fn witness_to(ra: &RegionAutomaton, goal: usize, last: Option<Label>) -> Vec<WitnessStep> {
    let (states, mut labels) = ra.path_to(goal).expect("goal is reachable");
    labels.extend(last);
    ra.witness(&states, &labels)
}

/// Every reachable state can reach a marked state.
pub fn check_nonblocking(ta: &TimedAutomaton) -> Result<Verdict, OracleError> {
    let ra = region_automaton_over(ta, Partition::new(&ta.clock_ceiling()))?;
    Ok(nonblocking_verdict(&ra))
}

pub fn nonblocking_verdict(ra: &RegionAutomaton) -> Verdict {
    let co = ra.coreachable();
    match (0..ra.len()).find(|&s| !co[s]) {
        None => Verdict::pass("nonblocking"),
        Some(s) => {
            let (l, r) = ra.describe(s);
            Verdict::fail("nonblocking", format!("no marked state reachable from {l} {r}"), witness_to(ra, s, None))
        }
    }
}

/// Controllability of `s` with respect to `g`: in every reachable state of
/// the supervised plant, each uncontrollable event the plant allows is
/// allowed, and each time step the plant allows is allowed or preempted by
/// an enabled forcible event.
pub fn check_controllability(s: &TimedAutomaton, g: &TimedAutomaton) -> Result<Verdict, OracleError> {
    if s.event_names() != g.event_names() {
        return Err(OracleError::AlphabetMismatch);
    }
    let partition = Partition::new(&merge_ceilings(&s.clock_ceiling(), &g.clock_ceiling()));
    let (sg, map) = product_with_map(s, g)?;
    let ra = region_automaton_over(&sg, partition.clone())?;
    let plant = Semantics::new(g, partition)?;
    for st in 0..ra.len() {
        let state = ra.states[st];
        let gl = map[state.location].1;
        let here: Vec<&Label> = ra.out(st).iter().map(|&t| &ra.transitions[t].label).collect();
        let allowed: BTreeSet<&str> = here.iter().map(|l| l.name()).collect();
        for (event, _, _) in plant.event_steps(gl, state.region) {
            let uncontrollable = g.event(event).is_some_and(|d| !d.controllable);
            if uncontrollable && !allowed.contains(event) {
                return Ok(Verdict::fail(
                    "controllable",
                    format!("uncontrollable `{event}` is disabled"),
                    witness_to(&ra, st, Some(Label::Event(event.to_string()))),
                ));
            }
        }
        if plant.time_step(gl, state.region).is_some() {
            let delays = here.iter().any(|l| **l == Label::Tau);
            let forces = here.iter().any(|l| ra.is_forcible(l));
            if !delays && !forces {
                return Ok(Verdict::fail(
                    "controllable",
                    "time is stopped without an enabled forcible event".into(),
                    witness_to(&ra, st, Some(Label::Tau)),
                ));
            }
        }
    }
    Ok(Verdict::pass("controllable"))
}

/// The supervised plant never reaches the dump location of the completed
/// requirement.
pub fn check_safety(s: &TimedAutomaton, g: &TimedAutomaton, r: &TimedAutomaton) -> Result<Verdict, OracleError> {
    let dump = dump_name(r);
    let rc = complete(r)?;
    let d = rc.location_index(&dump).expect("completion adds the dump location");
    let (sg, _) = product_with_map(s, g)?;
    let (all, map) = product_with_map(&sg, &rc)?;
    let ceiling = merge_ceilings(&sg.clock_ceiling(), &rc.clock_ceiling());
    let ra = region_automaton_over(&all, Partition::new(&ceiling))?;
    match (0..ra.len()).find(|&st| map[ra.states[st].location].1 == d) {
        None => Ok(Verdict::pass("safe")),
        Some(st) => Ok(Verdict::fail("safe", format!("`{dump}` of `{}` is reachable", r.name), witness_to(&ra, st, None))),
    }
}
