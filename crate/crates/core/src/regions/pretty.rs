//! Turning region sets back into readable constraints. The result is a
//! disjunction of conjunctions of single atoms (`x <= 2`, `x - y > 1`, ...),
//! found greedily: each conjunction grows from an uncovered region by adding
//! the atom that cuts away the most unwanted regions.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::partition::Partition;
use super::set::{zmap, RegionSet};
use crate::model::{ClockConstraint, Rel};

pub(crate) struct Literal {
    key: (u8, usize, usize, u8, u32),
    constraint: ClockConstraint,
    bits: FixedBitSet,
}

fn literals(p: &Arc<Partition>) -> &[Literal] {
    p.literals.get_or_init(|| build_literals(p))
}

fn build_literals(p: &Arc<Partition>) -> Vec<Literal> {
    // rel order inside a key: =, <=, <, >=, >
    let forms = |lhs: &dyn Fn(Rel) -> ClockConstraint, n: u32| {
        vec![
            (0u8, lhs(Rel::Eq)),
            (1, lhs(Rel::Lt).or(lhs(Rel::Eq))),
            (2, lhs(Rel::Lt)),
            (3, lhs(Rel::Gt).or(lhs(Rel::Eq))),
            (4, lhs(Rel::Gt)),
        ]
        .into_iter()
        .map(move |(r, c)| (r, n, c))
    };
    let mut out: Vec<Literal> = Vec::new();
    let mut push = |key, c: ClockConstraint| {
        let bits = zmap(p, &c).expect("literal within ceiling").bits().clone();
        let ones = bits.count_ones(..);
        if ones == 0 || ones == p.len() || out.iter().any(|l| l.bits == bits) {
            return;
        }
        out.push(Literal { key, constraint: c, bits });
    };
    let clocks = p.clocks();
    for (i, x) in clocks.iter().enumerate() {
        for n in 0..=p.k(i) as u32 {
            for (r, n, c) in forms(&|rel| ClockConstraint::atom(x, rel, n), n) {
                push((0, i, 0, r, n), c);
            }
        }
    }
    for (i, x) in clocks.iter().enumerate() {
        for (j, y) in clocks.iter().enumerate() {
            if i == j {
                continue;
            }
            for n in 0..=p.k(i) as u32 {
                for (r, n, c) in forms(&|rel| ClockConstraint::diff(x, y, rel, n), n) {
                    push((1, i, j, r, n), c);
                }
            }
        }
    }
    out
}

fn count_and(a: &FixedBitSet, b: &FixedBitSet) -> usize {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

fn count_and_not(a: &FixedBitSet, b: &FixedBitSet) -> usize {
    a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x & !y).count_ones() as usize).sum()
}

/// A DNF constraint denoting exactly `target`.
pub fn pretty(target: &RegionSet) -> ClockConstraint {
    pretty_within(target, &RegionSet::full(target.partition()))
}

/// A DNF constraint that agrees with `target` on the regions of `care` and
/// may say anything outside it.
pub fn pretty_within(target: &RegionSet, care: &RegionSet) -> ClockConstraint {
    let p = target.partition();
    let goal = target & care;
    let avoid = care - target;
    if goal.is_empty() {
        return ClockConstraint::False;
    }
    if avoid.is_empty() {
        return ClockConstraint::True;
    }
    let lits = literals(p);
    let avoid = avoid.bits().clone();
    let goal_bits = goal.bits().clone();
    let mut uncovered = goal_bits.clone();
    let mut terms: Vec<(Vec<usize>, FixedBitSet)> = Vec::new();

    while let Some(seed) = uncovered.ones().next() {
        let mut term = FixedBitSet::with_capacity(p.len());
        term.insert_range(..);
        let mut chosen: Vec<usize> = Vec::new();
        loop {
            let mut bad = term.clone();
            bad.intersect_with(&avoid);
            let bad_now = bad.count_ones(..);
            if bad_now == 0 {
                break;
            }
            let mut good = term.clone();
            good.intersect_with(&goal_bits);
            let mut best: Option<(bool, usize, usize, usize)> = None;
            for (li, l) in lits.iter().enumerate() {
                if !l.bits.contains(seed) || chosen.contains(&li) {
                    continue;
                }
                let removed = bad_now - count_and(&bad, &l.bits);
                if removed == 0 {
                    continue;
                }
                let lost = count_and_not(&good, &l.bits);
                let better = match best {
                    None => true,
                    Some((safe, rem, lo, _)) => {
                        (lost == 0, removed, std::cmp::Reverse(lost)) > (safe, rem, std::cmp::Reverse(lo))
                    }
                };
                if better {
                    best = Some((lost == 0, removed, lost, li));
                }
            }
            let (_, _, _, li) = best.expect("a region is described exactly by the atoms containing it");
            chosen.push(li);
            term.intersect_with(&lits[li].bits);
        }
        // drop atoms made redundant by later choices
        let mut k = 0;
        while k < chosen.len() {
            let mut t = FixedBitSet::with_capacity(p.len());
            t.insert_range(..);
            for (m, &li) in chosen.iter().enumerate() {
                if m != k {
                    t.intersect_with(&lits[li].bits);
                }
            }
            if count_and(&t, &avoid) == 0 {
                chosen.remove(k);
                term = t;
            } else {
                k += 1;
            }
        }
        uncovered.difference_with(&term);
        terms.push((chosen, term));
    }

    // drop terms whose goal regions are covered by the others
    let mut k = 0;
    while k < terms.len() && terms.len() > 1 {
        let mut rest = FixedBitSet::with_capacity(p.len());
        for (m, (_, t)) in terms.iter().enumerate() {
            if m != k {
                rest.union_with(t);
            }
        }
        if goal_bits.is_subset(&rest) {
            terms.remove(k);
        } else {
            k += 1;
        }
    }

    let mut keyed: Vec<Vec<usize>> = terms
        .into_iter()
        .map(|(mut c, _)| {
            c.sort_by_key(|&li| lits[li].key);
            c
        })
        .collect();
    keyed.sort_by(|a, b| {
        let ka: Vec<_> = a.iter().map(|&li| lits[li].key).collect();
        let kb: Vec<_> = b.iter().map(|&li| lits[li].key).collect();
        ka.cmp(&kb)
    });
    ClockConstraint::disjunction(keyed.into_iter().map(|t| {
        ClockConstraint::conjunction(t.into_iter().map(|li| lits[li].constraint.clone()))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CeilingMap;

    fn bus() -> Arc<Partition> {
        let k: CeilingMap = [("x".to_string(), 2), ("y".to_string(), 1)].into_iter().collect();
        Partition::new(&k)
    }

    #[test]
    fn trivial_sets() {
        let p = bus();
        assert_eq!(pretty(&RegionSet::full(&p)), ClockConstraint::True);
        assert_eq!(pretty(&RegionSet::empty(&p)), ClockConstraint::False);
    }

    #[test]
    fn readable_forms() {
        let p = bus();
        let c = ClockConstraint::ge("x", 2).or(ClockConstraint::diff("x", "y", Rel::Gt, 1));
        assert_eq!(pretty(&zmap(&p, &c).unwrap()).to_string(), "x >= 2 or x - y > 1");
        let c = ClockConstraint::atom("x", Rel::Lt, 2)
            .and(ClockConstraint::diff("x", "y", Rel::Lt, 1).or(ClockConstraint::diff("x", "y", Rel::Eq, 1)));
        assert_eq!(pretty(&zmap(&p, &c).unwrap()).to_string(), "x < 2 and x - y <= 1");
    }

    #[test]
    fn round_trip_every_singleton() {
        let p = bus();
        for r in 0..p.len() {
            let s = RegionSet::from_indices(&p, [r]);
            assert_eq!(zmap(&p, &pretty(&s)).unwrap(), s);
        }
    }

    #[test]
    fn dont_care_gives_short_strengthening() {
        let p = bus();
        let orig = zmap(&p, &ClockConstraint::ge("y", 1)).unwrap();
        let fin = &orig & &zmap(&p, &ClockConstraint::le("x", 2)).unwrap();
        assert_eq!(pretty_within(&fin, &orig).to_string(), "x <= 2");
    }
}
