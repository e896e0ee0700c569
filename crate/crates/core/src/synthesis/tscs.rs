use std::sync::Arc;

use super::fixpoints::{bad_iterates, nonblocking_iterates};
use super::problem::Problem;
use super::{PredicateMap, SynthesisError};
use crate::model::{
    complete, product_all, sync_product, ClockConstraint, Kind, TimedAutomaton,
};
use crate::regions::{pretty, pretty_within, Partition, RegionSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    /// When false, forcible events are treated as plain controllable ones
    /// and time can never be preempted.
    pub forcing: bool,
    /// When true, the predicates of each round are computed for the
    /// invariants adapted so far. When false they are computed for the
    /// input invariants and the adapted ones are installed at the end.
    pub invariant_feedback: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { forcing: true, invariant_feedback: false }
    }
}

/// State of one guard-adaptation round.
#[derive(Clone, Debug)]
pub struct Step {
    pub outer: usize,
    pub inner: usize,
    pub nonblocking_iterations: usize,
    pub bad_iterations: usize,
    /// Guards the predicates were computed for.
    pub guards: Vec<RegionSet>,
    /// Invariants adapted so far in this round.
    pub invariants: Vec<RegionSet>,
    pub nonblocking: Vec<RegionSet>,
    pub bad: Vec<RegionSet>,
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub partition: Arc<Partition>,
    pub input: TimedAutomaton,
    /// `None` when the initial state is bad.
    pub supervisor: Option<TimedAutomaton>,
    /// The input with final guards and invariants, before edges with empty
    /// guards and unreachable locations are removed.
    pub unpruned: TimedAutomaton,
    pub guards: Vec<RegionSet>,
    pub invariants: Vec<RegionSet>,
    pub nonblocking: PredicateMap,
    pub bad: PredicateMap,
    pub trace: Vec<Step>,
}

impl Synthesis {
    pub fn is_undefined(&self) -> bool {
        self.supervisor.is_none()
    }
}

/// Strengthens guards of controllable edges and invariants of locations
/// with forcible edges until no bad state is reachable.
pub fn tscs(g: &TimedAutomaton, options: Options) -> Result<Synthesis, SynthesisError> {
    let problem = Problem::new(g)?;
    tscs_problem(g, problem, options)
}

/// As [`tscs`], over a caller-provided (possibly finer) partition.
pub fn tscs_with_partition(
    g: &TimedAutomaton,
    partition: Arc<Partition>,
    options: Options,
) -> Result<Synthesis, SynthesisError> {
    let problem = Problem::with_partition(g, partition)?;
    tscs_problem(g, problem, options)
}

fn tscs_problem(g: &TimedAutomaton, problem: Problem, options: Options) -> Result<Synthesis, SynthesisError> {
    let p = if options.forcing { problem } else { problem.without_forcing() };
    let original_guards = p.guards.clone();
    let original_inv = p.invariants.clone();
    let mut guards = p.guards.clone();
    let mut inv = p.invariants.clone();
    let mut trace = Vec::new();
    let mut outer = 0;
    let (nonblocking, bad) = loop {
        let mut inner = 0;
        let seen = if options.invariant_feedback { &inv } else { &original_inv };
        let (n, b) = loop {
            let ns = nonblocking_iterates(&p, &guards, seen);
            let n = ns.last().expect("non-empty").clone();
            let bs = bad_iterates(&p, &guards, seen, &n);
            let b = bs.last().expect("non-empty").clone();
            trace.push(Step {
                outer,
                inner,
                nonblocking_iterations: ns.len() - 1,
                bad_iterations: bs.len() - 1,
                guards: guards.clone(),
                invariants: inv.clone(),
                nonblocking: n.clone(),
                bad: b.clone(),
            });
            let next: Vec<RegionSet> = p
                .edges
                .iter()
                .zip(&guards)
                .map(|(e, g)| {
                    if e.controllable {
                        g - &b[e.target].reset_pred(e.reset)
                    } else {
                        g.clone()
                    }
                })
                .collect();
            inner += 1;
            if next == guards {
                break (n, b);
            }
            guards = next;
        };
        let next: Vec<RegionSet> = (0..p.locations.len())
            .map(|l| {
                let forcing = p.edges.iter().zip(&guards).any(|(e, g)| e.source == l && e.forcible && !g.is_empty());
                if forcing {
                    &inv[l] - &b[l]
                } else {
                    original_inv[l].clone()
                }
            })
            .collect();
        outer += 1;
        if next == inv {
            break (n, b);
        }
        inv = next;
    };

    let origin = p.partition.origin() as usize;
    let undefined = !inv[p.initial].contains(origin) || bad[p.initial].contains(origin);

    let mut unpruned = g.clone();
    unpruned.kind = Kind::Supervisor;
    for (i, e) in unpruned.edges.iter_mut().enumerate() {
        e.guard = emit(&guards[i], &e.guard, &original_guards[i]);
    }
    for (l, loc) in unpruned.locations.iter_mut().enumerate() {
        loc.invariant = emit(&inv[l], &loc.invariant, &original_inv[l]);
    }
    let supervisor = if undefined {
        None
    } else {
        let mut s = unpruned.clone();
        let keep: Vec<bool> = guards.iter().map(|g| !g.is_empty()).collect();
        let mut k = keep.iter();
        s.edges.retain(|_| *k.next().expect("one flag per edge"));
        s.prune_unreachable();
        Some(s)
    };
    let names = p.locations.clone();
    Ok(Synthesis {
        partition: p.partition.clone(),
        input: g.clone(),
        supervisor,
        unpruned,
        guards,
        invariants: inv,
        nonblocking: PredicateMap { locations: names.clone(), sets: nonblocking },
        bad: PredicateMap { locations: names, sets: bad },
        trace,
    })
}

/// Chooses a readable constraint for `target`: the original one when
/// unchanged, otherwise the shorter of a fresh description and the original
/// conjoined with a strengthening.
fn emit(target: &RegionSet, original: &ClockConstraint, original_set: &RegionSet) -> ClockConstraint {
    if target == original_set {
        return original.clone();
    }
    let plain = pretty(target);
    if *original == ClockConstraint::True || target.is_empty() {
        return plain;
    }
    let extra = pretty_within(target, original_set);
    let combined = ClockConstraint::conjunction(original.conjuncts().into_iter().chain(extra.conjuncts()).cloned());
    if combined.literal_count() <= plain.literal_count() {
        combined
    } else {
        plain
    }
}

/// How requirements are completed before synthesis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completion {
    /// Complete the product of all requirements.
    AfterProduct,
    /// Complete each requirement, then take the product.
    PerRequirement,
}

#[derive(Clone, Debug)]
pub struct RequirementSynthesis {
    /// The plant composed with the completed requirements.
    pub product: TimedAutomaton,
    pub result: Synthesis,
}

/// Synthesis against requirement automata: the plant is composed with the
/// completed requirement product and then handed to [`tscs`].
pub fn synthesize_with_requirements(
    g: &TimedAutomaton,
    rs: &[TimedAutomaton],
    completion: Completion,
    options: Options,
) -> Result<RequirementSynthesis, SynthesisError> {
    let plant_events = g.event_names();
    for r in rs {
        for e in &r.events {
            match g.event(&e.name) {
                None => return Err(SynthesisError::AlphabetNotContained(e.name.clone(), r.name.clone())),
                Some(d) if d != e => {
                    return Err(SynthesisError::Model(crate::model::ModelError::ConflictingEvent(e.name.clone())))
                }
                _ => {}
            }
        }
        debug_assert!(r.event_names().is_subset(&plant_events));
        if let Some(c) = r.clocks.iter().find(|c| g.clocks.contains(c)) {
            return Err(SynthesisError::SharedClock(c.clone(), r.name.clone()));
        }
    }
    let product = if rs.is_empty() {
        g.clone()
    } else {
        let completed = match completion {
            Completion::AfterProduct => complete(&product_all(rs)?)?,
            Completion::PerRequirement => {
                product_all(&rs.iter().map(complete).collect::<Result<Vec<_>, _>>()?)?
            }
        };
        let mut p = sync_product(g, &completed)?;
        p.kind = Kind::Plant;
        p
    };
    let result = tscs(&product, options)?;
    Ok(RequirementSynthesis { product, result })
}
