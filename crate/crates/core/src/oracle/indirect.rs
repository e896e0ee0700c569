//! Synthesis on the region automaton itself, treating τ steps as
//! controllable wherever a forcible event is available.

use super::automaton::{region_automaton_over, Label, RegionAutomaton, State, Transition};
use super::OracleError;
use crate::model::TimedAutomaton;
use crate::regions::Partition;

#[derive(Clone, Debug)]
pub struct Indirect {
    /// The supervised region automaton; empty when the initial state is bad.
    pub supervisor: RegionAutomaton,
    /// Number of τ steps given back as uncontrollable after being removed.
    pub readded_tau: usize,
    /// Number of passes through the blocking-state computation.
    pub rounds: usize,
}

impl Indirect {
    pub fn is_empty(&self) -> bool {
        self.supervisor.initial.is_none()
    }
}

pub fn indirect_synthesize(ta: &TimedAutomaton) -> Result<Indirect, OracleError> {
    let ra = region_automaton_over(ta, Partition::new(&ta.clock_ceiling()))?;
    Ok(indirect_on(&ra))
}

/// Runs the five steps on an already built region automaton:
/// 1. find reachable blocking states, stopping when there are none;
/// 2. find bad states;
/// 3. remove controllable events into bad states and restart if any went;
/// 4. remove controllable τ steps into bad states;
/// 5. give τ back, as uncontrollable, to states left with neither τ nor a
///    forcible event, then restart.
pub fn indirect_on(ra: &RegionAutomaton) -> Indirect {
    let n = ra.len();
    let m = ra.transitions.len();
    let mut active = vec![true; m];
    let mut tau_forced = vec![false; m];
    let had_tau: Vec<Option<usize>> =
        (0..n).map(|s| ra.out(s).iter().copied().find(|&t| ra.transitions[t].label == Label::Tau)).collect();
    let mut readded = 0;
    let mut rounds = 0;
    let Some(start) = ra.initial else {
        return Indirect { supervisor: restrict(ra, &active, &[]), readded_tau: 0, rounds };
    };
    loop {
        rounds += 1;
        assert!(rounds <= 2 * m + 2, "indirect synthesis does not terminate");
        // 1
        let reach = forward(ra, start, &active);
        let co = backward(ra, &active);
        let blocking: Vec<bool> = (0..n).map(|s| reach[s] && !co[s]).collect();
        if !blocking.contains(&true) {
            return Indirect { supervisor: restrict(ra, &active, &reach), readded_tau: readded, rounds };
        }
        // 2
        let mut bad = blocking;
        loop {
            let mut changed = false;
            for s in 0..n {
                if !bad[s] && active_out(ra, s, &active).any(|t| bad[ra.transitions[t].target] && uncontrollable(ra, t, &active, &tau_forced)) {
                    bad[s] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if bad[start] {
            return Indirect { supervisor: restrict(ra, &active, &[]), readded_tau: readded, rounds };
        }
        // 3
        let events: Vec<usize> = (0..m)
            .filter(|&t| {
                let tr = &ra.transitions[t];
                active[t] && tr.label != Label::Tau && bad[tr.target] && !uncontrollable(ra, t, &active, &tau_forced)
            })
            .collect();
        if !events.is_empty() {
            for t in events {
                active[t] = false;
            }
            continue;
        }
        // 4
        let taus: Vec<usize> = (0..m)
            .filter(|&t| {
                let tr = &ra.transitions[t];
                active[t] && tr.label == Label::Tau && bad[tr.target] && !uncontrollable(ra, t, &active, &tau_forced)
            })
            .collect();
        for t in taus {
            active[t] = false;
        }
        // 5
        for s in 0..n {
            let Some(t) = had_tau[s] else { continue };
            if !active[t] && !has_forcible(ra, s, &active) {
                active[t] = true;
                tau_forced[t] = true;
                readded += 1;
            }
        }
    }
}

fn has_forcible(ra: &RegionAutomaton, s: usize, active: &[bool]) -> bool {
    active_out(ra, s, active).any(|t| ra.is_forcible(&ra.transitions[t].label))
}

/// A τ step is controllable while a forcible event is available at its
/// source, unless it was given back as uncontrollable.
fn uncontrollable(ra: &RegionAutomaton, t: usize, active: &[bool], tau_forced: &[bool]) -> bool {
    let tr = &ra.transitions[t];
    match &tr.label {
        Label::Tau => tau_forced[t] || !has_forcible(ra, tr.source, active),
        l => !ra.is_controllable(l),
    }
}

fn active_out<'a>(ra: &'a RegionAutomaton, s: usize, active: &'a [bool]) -> impl Iterator<Item = usize> + 'a {
    ra.out(s).iter().copied().filter(move |&t| active[t])
}

fn forward(ra: &RegionAutomaton, start: usize, active: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; ra.len()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(s) = stack.pop() {
        for &t in ra.out(s) {
            let d = ra.transitions[t].target;
            if active[t] && !seen[d] {
                seen[d] = true;
                stack.push(d);
            }
        }
    }
    seen
}

fn backward(ra: &RegionAutomaton, active: &[bool]) -> Vec<bool> {
    let inc = ra.incoming();
    let mut seen: Vec<bool> = (0..ra.len()).map(|s| ra.is_marked(s)).collect();
    let mut stack: Vec<usize> = (0..ra.len()).filter(|&s| seen[s]).collect();
    while let Some(s) = stack.pop() {
        for &t in &inc[s] {
            let src = ra.transitions[t].source;
            if active[t] && !seen[src] {
                seen[src] = true;
                stack.push(src);
            }
        }
    }
    seen
}

/// The sub-automaton on the kept states and active transitions; the
/// initial state keeps index 0 when kept.
fn restrict(ra: &RegionAutomaton, active: &[bool], keep: &[bool]) -> RegionAutomaton {
    let mut order: Vec<usize> = (0..ra.len()).filter(|&s| keep.get(s).copied().unwrap_or(false)).collect();
    if let Some(i) = ra.initial {
        if let Some(p) = order.iter().position(|&s| s == i) {
            order.remove(p);
            order.insert(0, i);
        }
    }
    let mut new_index = vec![usize::MAX; ra.len()];
    for (k, &s) in order.iter().enumerate() {
        new_index[s] = k;
    }
    let states: Vec<State> = order.iter().map(|&s| ra.states[s]).collect();
    let transitions = ra
        .transitions
        .iter()
        .enumerate()
        .filter(|(t, tr)| active[*t] && new_index[tr.source] != usize::MAX && new_index[tr.target] != usize::MAX)
        .map(|(_, tr)| Transition { source: new_index[tr.source], label: tr.label.clone(), target: new_index[tr.target] })
        .collect();
    let initial = (!states.is_empty()).then_some(0);
    RegionAutomaton::assemble(
        ra.partition.clone(),
        ra.locations.clone(),
        ra.location_marked.clone(),
        ra.events.clone(),
        states,
        initial,
        transitions,
    )
}
