use std::collections::{HashMap, VecDeque};

use super::{ClockConstraint, Edge, EventDecl, Kind, Location, ModelError, TimedAutomaton};

/// Synchronous product. Shared events move both components together,
/// private ones interleave. Only location pairs reachable in the edge graph
/// from the initial pair are kept; names are joined with `.`.
pub fn sync_product(a: &TimedAutomaton, b: &TimedAutomaton) -> Result<TimedAutomaton, ModelError> {
    product_with_map(a, b).map(|(p, _)| p)
}

/// Product of a non-empty list, folded from the left.
pub fn product_all(parts: &[TimedAutomaton]) -> Result<TimedAutomaton, ModelError> {
    let (first, rest) = parts.split_first().ok_or_else(|| ModelError::Invalid("empty product".into()))?;
    rest.iter().try_fold(first.clone(), |acc, t| sync_product(&acc, t))
}

/// As [`sync_product`], also returning the component locations of every
/// product location.
pub fn product_with_map(
    a: &TimedAutomaton,
    b: &TimedAutomaton,
) -> Result<(TimedAutomaton, Vec<(usize, usize)>), ModelError> {
    let mut events: Vec<EventDecl> = a.events.clone();
    for e in &b.events {
        match a.event(&e.name) {
            Some(d) if d != e => return Err(ModelError::ConflictingEvent(e.name.clone())),
            Some(_) => {}
            None => events.push(e.clone()),
        }
    }
    let mut clocks = a.clocks.clone();
    for c in &b.clocks {
        if !clocks.contains(c) {
            clocks.push(c.clone());
        }
    }
    let shared = |name: &str| a.event(name).is_some() && b.event(name).is_some();

    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut queue = VecDeque::new();
    let mut visit = |pair: (usize, usize), pairs: &mut Vec<(usize, usize)>, queue: &mut VecDeque<usize>| {
        *index.entry(pair).or_insert_with(|| {
            pairs.push(pair);
            queue.push_back(pairs.len() - 1);
            pairs.len() - 1
        })
    };
    visit((a.initial, b.initial), &mut pairs, &mut queue);
    while let Some(src) = queue.pop_front() {
        let (la, lb) = pairs[src];
        let mut out: Vec<(String, ClockConstraint, Vec<String>, (usize, usize))> = Vec::new();
        for (_, ea) in a.edges_from(la) {
            if shared(&ea.event) {
                for (_, eb) in b.edges_from(lb).filter(|(_, eb)| eb.event == ea.event) {
                    let mut resets = ea.resets.clone();
                    resets.extend(eb.resets.iter().cloned());
                    resets.sort();
                    resets.dedup();
                    out.push((ea.event.clone(), ea.guard.clone().and(eb.guard.clone()), resets, (ea.target, eb.target)));
                }
            } else {
                out.push((ea.event.clone(), ea.guard.clone(), ea.resets.clone(), (ea.target, lb)));
            }
        }
        for (_, eb) in b.edges_from(lb) {
            if !shared(&eb.event) {
                out.push((eb.event.clone(), eb.guard.clone(), eb.resets.clone(), (la, eb.target)));
            }
        }
        for (event, guard, resets, tgt) in out {
            if guard == ClockConstraint::False {
                continue;
            }
            let target = visit(tgt, &mut pairs, &mut queue);
            edges.push(Edge { source: src, event, guard, resets, target });
        }
    }
    let locations = pairs
        .iter()
        .map(|&(la, lb)| {
            let (x, y) = (&a.locations[la], &b.locations[lb]);
            Location {
                name: format!("{}.{}", x.name, y.name),
                marked: x.marked && y.marked,
                invariant: x.invariant.clone().and(y.invariant.clone()),
            }
        })
        .collect();
    let kind = if a.kind == b.kind { a.kind } else { Kind::Plant };
    let mut edges_sorted = edges;
    edges_sorted.sort_by_key(|e| e.source);
    let p = TimedAutomaton {
        name: format!("{}_{}", a.name, b.name),
        kind,
        clocks,
        events,
        locations,
        initial: 0,
        edges: edges_sorted,
    };
    p.validate()?;
    Ok((p, pairs))
}
