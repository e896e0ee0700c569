//! JSON reports. Region indices refer to the enumeration order of the
//! partition built from the report's `ceiling`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{CeilingMap, TimedAutomaton};
use crate::oracle::{Verdict, WitnessStep};
use crate::regions::{pretty, Partition, RegionSet};
use crate::synthesis::{PredicateMap, Synthesis};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicate {
    pub constraint: String,
    pub regions: Vec<usize>,
}

impl Predicate {
    pub fn of(set: &RegionSet) -> Predicate {
        Predicate { constraint: pretty(set).to_string(), regions: set.indices().collect() }
    }
}

pub type PredicateReport = BTreeMap<String, Predicate>;

fn predicates(names: &[String], sets: &[RegionSet]) -> PredicateReport {
    names.iter().cloned().zip(sets.iter().map(Predicate::of)).collect()
}

pub fn predicate_report(map: &PredicateMap) -> PredicateReport {
    predicates(&map.locations, &map.sets)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub outer: usize,
    pub inner: usize,
    pub nonblocking_iterations: usize,
    pub bad_iterations: usize,
    /// Keyed by `source -event-> target`, with an index suffix when an
    /// edge label repeats.
    pub guards: PredicateReport,
    pub invariants: PredicateReport,
    pub nonblocking: PredicateReport,
    pub bad: PredicateReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub property: String,
    pub passed: bool,
    pub message: String,
    pub witness: Vec<WitnessStep>,
}

impl From<&Verdict> for VerdictReport {
    fn from(v: &Verdict) -> Self {
        VerdictReport { property: v.property.clone(), passed: v.passed, message: v.message.clone(), witness: v.witness.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub ceiling: CeilingMap,
    /// The bad-state predicate, per location.
    pub predicates: PredicateReport,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub nonblocking: PredicateReport,
    #[serde(default)]
    pub trace: Vec<StepReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictReport>,
    /// The supervisor in the model format.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supervisor: Option<String>,
    /// Region descriptions, by index.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cells: Vec<String>,
}

fn edge_keys(ta: &TimedAutomaton) -> Vec<String> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    ta.edges
        .iter()
        .map(|e| {
            let base = format!("{} -{}-> {}", ta.locations[e.source].name, e.event, ta.locations[e.target].name);
            let n = seen.entry(base.clone()).or_insert(0);
            *n += 1;
            if *n == 1 {
                base
            } else {
                format!("{base} #{n}")
            }
        })
        .collect()
}

impl Report {
    pub fn of_synthesis(s: &Synthesis) -> Report {
        let names = &s.nonblocking.locations;
        let keys = edge_keys(&s.input);
        let trace = s
            .trace
            .iter()
            .map(|t| StepReport {
                outer: t.outer,
                inner: t.inner,
                nonblocking_iterations: t.nonblocking_iterations,
                bad_iterations: t.bad_iterations,
                guards: predicates(&keys, &t.guards),
                invariants: predicates(names, &t.invariants),
                nonblocking: predicates(names, &t.nonblocking),
                bad: predicates(names, &t.bad),
            })
            .collect();
        let verdict = VerdictReport {
            property: "synthesis".into(),
            passed: !s.is_undefined(),
            message: if s.is_undefined() { super::UNDEFINED.into() } else { String::new() },
            witness: Vec::new(),
        };
        Report {
            ceiling: s.partition.ceiling().clone(),
            predicates: predicate_report(&s.bad),
            nonblocking: predicate_report(&s.nonblocking),
            trace,
            verdict: Some(verdict),
            supervisor: s.supervisor.as_ref().map(|t| super::ModelFile::from_automata(vec![t.clone()]).serialize()),
            cells: Vec::new(),
        }
    }

    pub fn partition(&self) -> std::sync::Arc<Partition> {
        Partition::new(&self.ceiling)
    }
}
