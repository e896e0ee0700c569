//! State classification on an explicit region automaton.

use super::automaton::{Label, RegionAutomaton};

/// States from which a marked state is reachable.
pub fn nonblocking_states(ra: &RegionAutomaton) -> Vec<bool> {
    ra.coreachable()
}

/// Blocking states and every state from which one is forced: by an
/// uncontrollable event, or by a time step into a bad state that no
/// forcible event into a good state can preempt, neither before nor at the
/// moment the bad region is entered.
pub fn bad_states(ra: &RegionAutomaton) -> Vec<bool> {
    let mut bad: Vec<bool> = nonblocking_states(ra).into_iter().map(|n| !n).collect();
    let escape = |s: usize, bad: &[bool]| {
        ra.out(s).iter().map(|&t| &ra.transitions[t]).any(|t| ra.is_forcible(&t.label) && !bad[t.target])
    };
    loop {
        let mut changed = false;
        for s in 0..ra.len() {
            if bad[s] {
                continue;
            }
            let forced = ra.out(s).iter().map(|&t| &ra.transitions[t]).any(|t| {
                if !bad[t.target] {
                    return false;
                }
                match &t.label {
                    Label::Tau => !escape(s, &bad) && !escape(t.target, &bad),
                    l => !ra.is_controllable(l),
                }
            });
            if forced {
                bad[s] = true;
                changed = true;
            }
        }
        if !changed {
            return bad;
        }
    }
}
