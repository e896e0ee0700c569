use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::semantics::Semantics;
use super::OracleError;
use crate::model::{CeilingMap, EventDecl, TimedAutomaton};
use crate::regions::Partition;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Tau,
    Event(String),
}

impl Label {
    pub fn name(&self) -> &str {
        match self {
            Label::Tau => "τ",
            Label::Event(e) => e,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub location: usize,
    pub region: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub source: usize,
    pub label: Label,
    pub target: usize,
}

/// A finite graph of (location, region) states with event steps and τ
/// steps to the immediate time successor.
#[derive(Clone, Debug)]
pub struct RegionAutomaton {
    pub partition: Arc<Partition>,
    pub locations: Vec<String>,
    pub location_marked: Vec<bool>,
    pub events: Vec<EventDecl>,
    pub states: Vec<State>,
    /// `None` when the origin violates the initial invariant, or when the
    /// automaton is empty.
    pub initial: Option<usize>,
    pub transitions: Vec<Transition>,
    out: Vec<Vec<usize>>,
}

/// One step of a witness path: the state and the label taken out of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStep {
    pub location: String,
    pub region: String,
    pub label: Option<String>,
}

impl RegionAutomaton {
    pub(crate) fn assemble(
        partition: Arc<Partition>,
        locations: Vec<String>,
        location_marked: Vec<bool>,
        events: Vec<EventDecl>,
        states: Vec<State>,
        initial: Option<usize>,
        transitions: Vec<Transition>,
    ) -> RegionAutomaton {
        let mut out = vec![Vec::new(); states.len()];
        for (i, t) in transitions.iter().enumerate() {
            out[t.source].push(i);
        }
        RegionAutomaton { partition, locations, location_marked, events, states, initial, transitions, out }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn is_marked(&self, s: usize) -> bool {
        self.location_marked[self.states[s].location]
    }

    /// Indices of the transitions leaving `s`.
    pub fn out(&self, s: usize) -> &[usize] {
        &self.out[s]
    }

    pub fn find(&self, location: &str, region: u32) -> Option<usize> {
        let l = self.locations.iter().position(|n| n == location)?;
        self.states.iter().position(|s| s.location == l && s.region == region)
    }

    pub fn event(&self, name: &str) -> Option<&EventDecl> {
        self.events.iter().find(|e| e.name == name)
    }

    pub fn is_controllable(&self, label: &Label) -> bool {
        match label {
            Label::Tau => false,
            Label::Event(e) => self.event(e).is_some_and(|d| d.controllable),
        }
    }

    pub fn is_forcible(&self, label: &Label) -> bool {
        match label {
            Label::Tau => false,
            Label::Event(e) => self.event(e).is_some_and(|d| d.forcible),
        }
    }

    /// Predecessor lists, by transition index.
    pub fn incoming(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.states.len()];
        for (i, t) in self.transitions.iter().enumerate() {
            inc[t.target].push(i);
        }
        inc
    }

    pub fn describe(&self, s: usize) -> (String, String) {
        let st = self.states[s];
        (
            self.locations[st.location].clone(),
            self.partition.region(st.region as usize).describe(&self.partition),
        )
    }

    /// A path of states, each with the label leading to the next one.
    pub fn witness(&self, path: &[usize], labels: &[Label]) -> Vec<WitnessStep> {
        path.iter()
            .enumerate()
            .map(|(i, &s)| {
                let (location, region) = self.describe(s);
                WitnessStep { location, region, label: labels.get(i).map(|l| l.name().to_string()) }
            })
            .collect()
    }

    /// Shortest path from the initial state to `goal` as states and labels.
    pub fn path_to(&self, goal: usize) -> Option<(Vec<usize>, Vec<Label>)> {
        let start = self.initial?;
        let mut parent: Vec<Option<usize>> = vec![None; self.states.len()];
        let mut seen = vec![false; self.states.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            if s == goal {
                break;
            }
            for &t in &self.out[s] {
                let d = self.transitions[t].target;
                if !seen[d] {
                    seen[d] = true;
                    parent[d] = Some(t);
                    queue.push_back(d);
                }
            }
        }
        if !seen[goal] {
            return None;
        }
        let mut states = vec![goal];
        let mut labels = Vec::new();
        let mut cur = goal;
        while let Some(t) = parent[cur] {
            labels.push(self.transitions[t].label.clone());
            cur = self.transitions[t].source;
            states.push(cur);
        }
        states.reverse();
        labels.reverse();
        Some((states, labels))
    }

    /// Does `steps` describe a path of this automaton from its initial
    /// state, every label matching a transition?
    pub fn replays(&self, steps: &[WitnessStep]) -> bool {
        let Some(mut cur) = self.initial else { return steps.is_empty() };
        for (i, step) in steps.iter().enumerate() {
            if self.describe(cur) != (step.location.clone(), step.region.clone()) {
                return false;
            }
            if i + 1 == steps.len() {
                return true;
            }
            let Some(label) = &step.label else { return false };
            let next = &steps[i + 1];
            let found = self.out[cur].iter().map(|&t| &self.transitions[t]).find(|t| {
                t.label.name() == label && self.describe(t.target) == (next.location.clone(), next.region.clone())
            });
            match found {
                Some(t) => cur = t.target,
                None => return false,
            }
        }
        true
    }

    /// Forward closure of the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        if let Some(s) = self.initial {
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(s) = stack.pop() {
                for &t in &self.out[s] {
                    let d = self.transitions[t].target;
                    if !seen[d] {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
        }
        seen
    }

    /// States from which a marked state can be reached.
    pub fn coreachable(&self) -> Vec<bool> {
        let inc = self.incoming();
        let mut seen: Vec<bool> = (0..self.states.len()).map(|s| self.is_marked(s)).collect();
        let mut stack: Vec<usize> = (0..self.states.len()).filter(|&s| seen[s]).collect();
        while let Some(s) = stack.pop() {
            for &t in &inc[s] {
                let src = self.transitions[t].source;
                if !seen[src] {
                    seen[src] = true;
                    stack.push(src);
                }
            }
        }
        seen
    }
}

/// The region automaton of `ta` reachable from its initial state, over the
/// partition of `ceiling`.
pub fn region_automaton(ta: &TimedAutomaton, ceiling: &CeilingMap) -> Result<RegionAutomaton, OracleError> {
    region_automaton_over(ta, Partition::new(ceiling))
}

pub fn region_automaton_over(ta: &TimedAutomaton, partition: Arc<Partition>) -> Result<RegionAutomaton, OracleError> {
    let sem = Semantics::new(ta, partition.clone())?;
    let start = State { location: sem.initial(), region: partition.origin() };
    let seeds = if sem.admits(start.location, start.region) { vec![start] } else { Vec::new() };
    let mut ra = explore(ta, &sem, seeds);
    ra.initial = (!ra.states.is_empty()).then_some(0);
    Ok(ra)
}

/// Every (location, region) pair allowed by the invariants, with all their
/// transitions. The initial state is set when the origin is admitted.
pub fn full_region_automaton(ta: &TimedAutomaton, ceiling: &CeilingMap) -> Result<RegionAutomaton, OracleError> {
    let partition = Partition::new(ceiling);
    let sem = Semantics::new(ta, partition.clone())?;
    let mut seeds = Vec::new();
    for l in 0..sem.location_count() {
        for r in 0..partition.len() as u32 {
            if sem.admits(l, r) {
                seeds.push(State { location: l, region: r });
            }
        }
    }
    let mut ra = explore(ta, &sem, seeds);
    let start = State { location: sem.initial(), region: partition.origin() };
    ra.initial = ra.states.iter().position(|s| *s == start);
    Ok(ra)
}

fn explore(ta: &TimedAutomaton, sem: &Semantics, seeds: Vec<State>) -> RegionAutomaton {
    let mut index: HashMap<State, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut queue = VecDeque::new();
    for s in seeds {
        index.insert(s, states.len());
        states.push(s);
        queue.push_back(s);
    }
    let mut transitions = Vec::new();
    while let Some(s) = queue.pop_front() {
        let src = index[&s];
        let mut add = |label: Label, d: State, states: &mut Vec<State>, queue: &mut VecDeque<State>| {
            let target = *index.entry(d).or_insert_with(|| {
                states.push(d);
                queue.push_back(d);
                states.len() - 1
            });
            transitions.push(Transition { source: src, label, target });
        };
        if let Some(next) = sem.time_step(s.location, s.region) {
            add(Label::Tau, State { location: s.location, region: next }, &mut states, &mut queue);
        }
        for (event, target, region) in sem.event_steps(s.location, s.region) {
            add(Label::Event(event.to_string()), State { location: target, region }, &mut states, &mut queue);
        }
    }
    RegionAutomaton::assemble(
        sem.partition.clone(),
        ta.locations.iter().map(|l| l.name.clone()).collect(),
        ta.locations.iter().map(|l| l.marked).collect(),
        ta.events.clone(),
        states,
        None,
        transitions,
    )
}
