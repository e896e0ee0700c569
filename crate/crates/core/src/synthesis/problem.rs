use std::sync::Arc;

use crate::model::{ModelError, TimedAutomaton};
use crate::regions::{zmap, Partition, RegionSet};

#[derive(Clone, Debug)]
pub struct CompiledEdge {
    pub source: usize,
    pub target: usize,
    pub reset: u64,
    pub controllable: bool,
    pub forcible: bool,
}

/// A timed automaton with guards and invariants turned into region sets.
#[derive(Clone, Debug)]
pub struct Problem {
    pub partition: Arc<Partition>,
    pub locations: Vec<String>,
    pub marked: Vec<bool>,
    pub initial: usize,
    pub edges: Vec<CompiledEdge>,
    pub guards: Vec<RegionSet>,
    pub invariants: Vec<RegionSet>,
}

impl Problem {
    /// Compiles `ta` over its own ceiling.
    pub fn new(ta: &TimedAutomaton) -> Result<Problem, ModelError> {
        Problem::with_partition(ta, Partition::new(&ta.clock_ceiling()))
    }

    /// Compiles `ta` over a given partition, whose ceiling must bound every
    /// constant of `ta`.
    pub fn with_partition(ta: &TimedAutomaton, partition: Arc<Partition>) -> Result<Problem, ModelError> {
        ta.validate()?;
        for c in &ta.clocks {
            if partition.clock_index(c).is_none() {
                return Err(ModelError::Unknown(format!("clock {c} in partition")));
            }
        }
        let guards = ta.edges.iter().map(|e| zmap(&partition, &e.guard)).collect::<Result<Vec<_>, _>>()?;
        let invariants =
            ta.locations.iter().map(|l| zmap(&partition, &l.invariant)).collect::<Result<Vec<_>, _>>()?;
        let edges = ta
            .edges
            .iter()
            .map(|e| {
                let ev = ta.event(&e.event).expect("validated");
                CompiledEdge {
                    source: e.source,
                    target: e.target,
                    reset: partition.reset_mask(&e.resets),
                    controllable: ev.controllable,
                    forcible: ev.forcible,
                }
            })
            .collect();
        Ok(Problem {
            partition,
            locations: ta.locations.iter().map(|l| l.name.clone()).collect(),
            marked: ta.locations.iter().map(|l| l.marked).collect(),
            initial: ta.initial,
            edges,
            guards,
            invariants,
        })
    }

    /// Treats every forcible event as merely controllable.
    pub fn without_forcing(mut self) -> Problem {
        for e in &mut self.edges {
            e.forcible = false;
        }
        self
    }

    pub fn empty_sets(&self) -> Vec<RegionSet> {
        vec![RegionSet::empty(&self.partition); self.locations.len()]
    }

    /// `⋃ guard(e) ∩ reset⁻¹(inv(target) ∩ pred(target))` over the edges
    /// from `loc` selected by `pick`.
    pub fn edge_pre(
        &self,
        loc: usize,
        guards: &[RegionSet],
        inv: &[RegionSet],
        pred: &[RegionSet],
        pick: impl Fn(&CompiledEdge) -> bool,
    ) -> RegionSet {
        let mut out = RegionSet::empty(&self.partition);
        for (i, e) in self.edges.iter().enumerate() {
            if e.source != loc || !pick(e) || guards[i].is_empty() {
                continue;
            }
            let after = &inv[e.target] & &pred[e.target];
            out = &out | &(&guards[i] & &after.reset_pred(e.reset));
        }
        out
    }
}
