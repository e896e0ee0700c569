use super::{ClockConstraint, Edge, Location, ModelError, TimedAutomaton};
use crate::regions::{pretty, zmap, Partition, RegionSet};

/// Name of the dump location added by [`complete`], avoiding clashes.
pub fn dump_name(r: &TimedAutomaton) -> String {
    let mut name = "q_d".to_string();
    while r.location(&name).is_some() {
        name.push('_');
    }
    name
}

/// Adds a non-marked dump location and, for every location and every
/// uncontrollable event of the alphabet, an edge into it guarded by the
/// complement of the situations in which the requirement accepts the event
/// (guard and target invariant after reset). Edges whose guard is empty are
/// not added.
pub fn complete(r: &TimedAutomaton) -> Result<TimedAutomaton, ModelError> {
    r.validate()?;
    let partition = Partition::new(&r.clock_ceiling());
    let mut out = r.clone();
    let dump = out.locations.len();
    out.locations.push(Location { name: dump_name(r), marked: false, invariant: ClockConstraint::True });
    let invariants: Vec<RegionSet> = r
        .locations
        .iter()
        .map(|l| zmap(&partition, &l.invariant))
        .collect::<Result<_, _>>()?;
    for q in 0..r.locations.len() {
        for ev in r.events.iter().filter(|e| !e.controllable) {
            let mut accepted = RegionSet::empty(&partition);
            for (_, e) in r.edges_from(q).filter(|(_, e)| e.event == ev.name) {
                let mask = partition.reset_mask(&e.resets);
                let g = zmap(&partition, &e.guard)?;
                accepted = &accepted | &(&g & &invariants[e.target].reset_pred(mask));
            }
            let blocked = accepted.neg();
            if blocked.is_empty() {
                continue;
            }
            out.edges.push(Edge {
                source: q,
                event: ev.name.clone(),
                guard: pretty(&blocked),
                resets: Vec::new(),
                target: dump,
            });
        }
    }
    out.validate()?;
    Ok(out)
}
