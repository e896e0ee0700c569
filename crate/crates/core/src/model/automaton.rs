use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{ClockConstraint, ModelError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventDecl {
    pub name: String,
    pub controllable: bool,
    pub forcible: bool,
}

impl EventDecl {
    pub fn new(name: &str, controllable: bool, forcible: bool) -> Self {
        EventDecl { name: name.to_string(), controllable, forcible }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Plant,
    Requirement,
    Supervisor,
}

impl Kind {
    pub fn keyword(self) -> &'static str {
        match self {
            Kind::Plant => "plant",
            Kind::Requirement => "requirement",
            Kind::Supervisor => "supervisor",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Location {
    pub name: String,
    pub marked: bool,
    pub invariant: ClockConstraint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: usize,
    pub event: String,
    pub guard: ClockConstraint,
    /// Sorted, duplicate free.
    pub resets: Vec<String>,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimedAutomaton {
    pub name: String,
    pub kind: Kind,
    pub clocks: Vec<String>,
    /// The alphabet, in declaration order.
    pub events: Vec<EventDecl>,
    pub locations: Vec<Location>,
    pub initial: usize,
    pub edges: Vec<Edge>,
}

/// Pointwise maximum constant per clock.
pub type CeilingMap = BTreeMap<String, u32>;

impl TimedAutomaton {
    pub fn event(&self, name: &str) -> Option<&EventDecl> {
        self.events.iter().find(|e| e.name == name)
    }

    pub fn location_index(&self, name: &str) -> Option<usize> {
        self.locations.iter().position(|l| l.name == name)
    }

    pub fn location(&self, name: &str) -> Option<&Location> {
        self.locations.iter().find(|l| l.name == name)
    }

    /// Edges leaving `loc`, with their indices.
    pub fn edges_from(&self, loc: usize) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges.iter().enumerate().filter(move |(_, e)| e.source == loc)
    }

    /// Checks that every reference resolves and resets are normalised.
    pub fn validate(&self) -> Result<(), ModelError> {
        let clocks: HashSet<&str> = self.clocks.iter().map(String::as_str).collect();
        if clocks.len() != self.clocks.len() {
            return Err(ModelError::Duplicate(format!("clock in {}", self.name)));
        }
        let mut names = HashSet::new();
        for l in &self.locations {
            if !names.insert(l.name.as_str()) {
                return Err(ModelError::Duplicate(format!("location {}", l.name)));
            }
        }
        let mut evs = HashSet::new();
        for e in &self.events {
            if !evs.insert(e.name.as_str()) {
                return Err(ModelError::Duplicate(format!("event {}", e.name)));
            }
        }
        if self.initial >= self.locations.len() {
            return Err(ModelError::Unknown(format!("initial location of {}", self.name)));
        }
        let check_clocks = |c: &ClockConstraint| -> Result<(), ModelError> {
            for x in c.clocks() {
                if !clocks.contains(x.as_str()) {
                    return Err(ModelError::Unknown(format!("clock {x} in {}", self.name)));
                }
            }
            Ok(())
        };
        for l in &self.locations {
            check_clocks(&l.invariant)?;
        }
        for e in &self.edges {
            if e.source >= self.locations.len() || e.target >= self.locations.len() {
                return Err(ModelError::Unknown(format!("edge endpoint in {}", self.name)));
            }
            if !evs.contains(e.event.as_str()) {
                return Err(ModelError::Unknown(format!("event {} in {}", e.event, self.name)));
            }
            check_clocks(&e.guard)?;
            for r in &e.resets {
                if !clocks.contains(r.as_str()) {
                    return Err(ModelError::Unknown(format!("clock {r} in {}", self.name)));
                }
            }
            if e.resets.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ModelError::Invalid("resets must be sorted and unique".into()));
            }
        }
        Ok(())
    }

    /// Locations reachable from the initial one along edges, ignoring guards.
    pub fn graph_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.locations.len()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(l) = stack.pop() {
            for (_, e) in self.edges_from(l) {
                if !seen[e.target] {
                    seen[e.target] = true;
                    stack.push(e.target);
                }
            }
        }
        seen
    }

    /// Drops locations unreachable in the edge graph, together with their edges.
    pub fn prune_unreachable(&mut self) {
        let keep = self.graph_reachable();
        let mut remap = vec![usize::MAX; self.locations.len()];
        let mut locations = Vec::new();
        for (i, l) in self.locations.drain(..).enumerate() {
            if keep[i] {
                remap[i] = locations.len();
                locations.push(l);
            }
        }
        self.locations = locations;
        self.initial = remap[self.initial];
        self.edges.retain(|e| keep[e.source]);
        for e in &mut self.edges {
            e.source = remap[e.source];
            e.target = remap[e.target];
        }
    }

    /// Largest constant compared against each clock. A difference atom
    /// counts for both of its clocks; unconstrained clocks get 0.
    pub fn clock_ceiling(&self) -> CeilingMap {
        let mut k: CeilingMap = self.clocks.iter().map(|c| (c.clone(), 0)).collect();
        let mut bump = |c: &ClockConstraint| {
            c.visit_atoms(&mut |a| match a {
                ClockConstraint::Atom(x, _, n) => {
                    let e = k.entry(x.clone()).or_insert(0);
                    *e = (*e).max(*n);
                }
                ClockConstraint::DiffAtom(x, y, _, n) => {
                    for c in [x, y] {
                        let e = k.entry(c.clone()).or_insert(0);
                        *e = (*e).max(*n);
                    }
                }
                _ => {}
            })
        };
        for l in &self.locations {
            bump(&l.invariant);
        }
        for e in &self.edges {
            bump(&e.guard);
        }
        k
    }

    pub fn event_names(&self) -> BTreeSet<&str> {
        self.events.iter().map(|e| e.name.as_str()).collect()
    }
}

/// Pointwise maximum of two ceiling maps.
pub fn merge_ceilings(a: &CeilingMap, b: &CeilingMap) -> CeilingMap {
    let mut out = a.clone();
    for (c, n) in b {
        let e = out.entry(c.clone()).or_insert(0);
        *e = (*e).max(*n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Rel;

    fn tiny() -> TimedAutomaton {
        TimedAutomaton {
            name: "T".into(),
            kind: Kind::Plant,
            clocks: vec!["x".into(), "y".into()],
            events: vec![EventDecl::new("e", true, false)],
            locations: vec![
                Location { name: "a".into(), marked: false, invariant: ClockConstraint::le("x", 4) },
                Location { name: "b".into(), marked: true, invariant: ClockConstraint::True },
                Location { name: "c".into(), marked: false, invariant: ClockConstraint::True },
            ],
            initial: 0,
            edges: vec![Edge {
                source: 0,
                event: "e".into(),
                guard: ClockConstraint::diff("x", "y", Rel::Gt, 6),
                resets: vec![],
                target: 1,
            }],
        }
    }

    #[test]
    fn ceiling_counts_difference_constants_for_both_clocks() {
        let k = tiny().clock_ceiling();
        assert_eq!(k["x"], 6);
        assert_eq!(k["y"], 6);
    }

    #[test]
    fn pruning_drops_isolated_location() {
        let mut t = tiny();
        t.validate().unwrap();
        t.prune_unreachable();
        assert_eq!(t.locations.len(), 2);
        t.validate().unwrap();
    }
}
