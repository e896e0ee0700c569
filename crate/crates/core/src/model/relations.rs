use std::collections::BTreeSet;
use std::sync::Arc;

use super::{merge_ceilings, ModelError, TimedAutomaton};
use crate::regions::{zmap, Partition};

/// Pairs of edges with the same source and event whose guards overlap.
pub fn check_deterministic(a: &TimedAutomaton) -> Result<Vec<(usize, usize)>, ModelError> {
    let p = Partition::new(&a.clock_ceiling());
    let guards = a.edges.iter().map(|e| zmap(&p, &e.guard)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for i in 0..a.edges.len() {
        for j in i + 1..a.edges.len() {
            let (e, f) = (&a.edges[i], &a.edges[j]);
            if e.source == f.source && e.event == f.event && !(&guards[i] & &guards[j]).is_empty() {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

/// Is `b` obtained from `a` by removing locations and edges and by
/// strengthening guards and invariants? Locations and edges are matched by
/// name, event, resets and endpoints.
pub fn is_subautomaton(b: &TimedAutomaton, a: &TimedAutomaton) -> Result<bool, ModelError> {
    let set = |t: &TimedAutomaton| t.clocks.iter().cloned().collect::<BTreeSet<_>>();
    if set(a) != set(b) || a.event_names() != b.event_names() {
        return Err(ModelError::Invalid("sub-automaton check needs equal clocks and alphabets".into()));
    }
    let p: Arc<Partition> = Partition::new(&merge_ceilings(&a.clock_ceiling(), &b.clock_ceiling()));
    if b.locations[b.initial].name != a.locations[a.initial].name {
        return Ok(false);
    }
    for l in &b.locations {
        let Some(la) = a.location(&l.name) else { return Ok(false) };
        if la.marked != l.marked || !zmap(&p, &l.invariant)?.is_subset(&zmap(&p, &la.invariant)?) {
            return Ok(false);
        }
    }
    for e in &b.edges {
        let (src, tgt) = (&b.locations[e.source].name, &b.locations[e.target].name);
        let gb = zmap(&p, &e.guard)?;
        let mut found = false;
        for f in &a.edges {
            if &a.locations[f.source].name == src
                && &a.locations[f.target].name == tgt
                && f.event == e.event
                && f.resets == e.resets
                && gb.is_subset(&zmap(&p, &f.guard)?)
            {
                found = true;
                break;
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}
