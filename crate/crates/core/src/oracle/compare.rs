use std::collections::{BTreeMap, HashSet, VecDeque};

use super::automaton::{Label, RegionAutomaton};
use super::OracleError;

fn moves(ra: &RegionAutomaton, s: usize) -> Result<BTreeMap<&str, usize>, OracleError> {
    let mut out = BTreeMap::new();
    for &t in ra.out(s) {
        let tr = &ra.transitions[t];
        let name = match &tr.label {
            Label::Tau => "",
            Label::Event(e) => e.as_str(),
        };
        if out.insert(name, tr.target).is_some_and(|d| d != tr.target) {
            let (l, r) = ra.describe(s);
            return Err(OracleError::Nondeterministic(format!("{} at {l} {r}", tr.label.name())));
        }
    }
    Ok(out)
}

/// Walks both automata in lockstep; `ok` judges each pair of move maps and
/// markings.
fn lockstep(
    a: &RegionAutomaton,
    b: &RegionAutomaton,
    ok: impl Fn(&BTreeMap<&str, usize>, &BTreeMap<&str, usize>, bool, bool) -> bool,
) -> Result<bool, OracleError> {
    let (sa, sb) = match (a.initial, b.initial) {
        (None, _) => return Ok(true),
        (Some(_), None) => return Ok(false),
        (Some(x), Some(y)) => (x, y),
    };
    let mut seen = HashSet::from([(sa, sb)]);
    let mut queue = VecDeque::from([(sa, sb)]);
    while let Some((x, y)) = queue.pop_front() {
        let (mx, my) = (moves(a, x)?, moves(b, y)?);
        if !ok(&mx, &my, a.is_marked(x), b.is_marked(y)) {
            return Ok(false);
        }
        for (label, &dx) in &mx {
            if let Some(&dy) = my.get(label) {
                if seen.insert((dx, dy)) {
                    queue.push_back((dx, dy));
                }
            }
        }
    }
    Ok(true)
}

/// Equal languages, marked languages included, over event and τ labels.
/// An automaton without initial state has the empty language.
pub fn ra_language_equal(a: &RegionAutomaton, b: &RegionAutomaton) -> Result<bool, OracleError> {
    if a.initial.is_none() || b.initial.is_none() {
        return Ok(a.initial.is_none() && b.initial.is_none());
    }
    lockstep(a, b, |mx, my, ma, mb| ma == mb && mx.keys().eq(my.keys()))
}

/// Every word of `a` is a word of `b`, and marked words of `a` are marked
/// in `b`.
pub fn ra_language_included(a: &RegionAutomaton, b: &RegionAutomaton) -> Result<bool, OracleError> {
    lockstep(a, b, |mx, my, ma, mb| (!ma || mb) && mx.keys().all(|k| my.contains_key(k)))
}
