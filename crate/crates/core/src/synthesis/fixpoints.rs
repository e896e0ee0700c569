//! The two predicate fixpoints.
//!
//! Nonblocking states grow from the marked locations backwards: through
//! an edge (guard holds, and after the reset the target invariant and
//! predicate hold) or by letting time pass inside the invariant until the
//! predicate holds.
//!
//! Bad states grow from the complement of the nonblocking ones: through an
//! uncontrollable edge into a bad state, or by letting time pass inside the
//! invariant into a bad state while no forcible edge offers an escape into
//! a good state.
//!
//! The escape condition admits two readings. Written as the target
//! invariant shifted by the delay and then reset, it would test `u[r] + δ`;
//! following the timed transition semantics (delay, then take the edge) it
//! tests `(u + δ)[r]`. This module uses the second reading: for every
//! region `r` on the delay chain the escape holds when `r` satisfies the
//! guard, `reset(r)` satisfies the target invariant and `reset(r)` is not
//! bad in the target location.

use super::problem::Problem;
use crate::regions::RegionSet;

/// Returns every iterate, the first being the seed and the last repeating
/// the one before it.
pub fn nonblocking_iterates(p: &Problem, guards: &[RegionSet], inv: &[RegionSet]) -> Vec<Vec<RegionSet>> {
    let mut cur: Vec<RegionSet> = (0..p.locations.len())
        .map(|l| if p.marked[l] { inv[l].clone() } else { RegionSet::empty(&p.partition) })
        .collect();
    let mut trace = vec![cur.clone()];
    loop {
        let next: Vec<RegionSet> = (0..p.locations.len())
            .map(|l| {
                let by_edge = p.edge_pre(l, guards, inv, &cur, |_| true);
                let by_time = cur[l].time_reach(&inv[l]);
                &(&cur[l] | &by_edge) | &by_time
            })
            .collect();
        trace.push(next.clone());
        if next == cur {
            return trace;
        }
        cur = next;
    }
}

/// Forcible edges from `loc` that lead into a good state.
pub fn escape(p: &Problem, loc: usize, guards: &[RegionSet], inv: &[RegionSet], bad: &[RegionSet]) -> RegionSet {
    let good: Vec<RegionSet> = bad.iter().map(|b| b.neg()).collect();
    p.edge_pre(loc, guards, inv, &good, |e| e.forcible)
}

pub fn bad_iterates(
    p: &Problem,
    guards: &[RegionSet],
    inv: &[RegionSet],
    nonblocking: &[RegionSet],
) -> Vec<Vec<RegionSet>> {
    let mut cur: Vec<RegionSet> = nonblocking.iter().map(|n| n.neg()).collect();
    let mut trace = vec![cur.clone()];
    loop {
        let next: Vec<RegionSet> = (0..p.locations.len())
            .map(|l| {
                let by_edge = p.edge_pre(l, guards, inv, &cur, |e| !e.controllable);
                let esc = escape(p, l, guards, inv, &cur);
                let by_time = cur[l].time_reach_unpreempted(&inv[l], &esc);
                &(&cur[l] | &by_edge) | &by_time
            })
            .collect();
        trace.push(next.clone());
        if next == cur {
            return trace;
        }
        cur = next;
    }
}
