use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::partition::Partition;
use super::RegionError;
use crate::model::ClockConstraint;

/// A union of regions of one partition.
#[derive(Clone)]
pub struct RegionSet {
    partition: Arc<Partition>,
    bits: FixedBitSet,
}

impl PartialEq for RegionSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_partition(other) && self.bits == other.bits
    }
}

impl Eq for RegionSet {}

impl fmt::Debug for RegionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RegionSet({})", self.pretty())
    }
}

impl RegionSet {
    pub fn empty(p: &Arc<Partition>) -> RegionSet {
        RegionSet { partition: p.clone(), bits: FixedBitSet::with_capacity(p.len()) }
    }

    pub fn full(p: &Arc<Partition>) -> RegionSet {
        let mut s = RegionSet::empty(p);
        s.bits.insert_range(..);
        s
    }

    pub fn from_indices(p: &Arc<Partition>, idx: impl IntoIterator<Item = usize>) -> RegionSet {
        let mut s = RegionSet::empty(p);
        for i in idx {
            s.bits.insert(i);
        }
        s
    }

    pub fn partition(&self) -> &Arc<Partition> {
        &self.partition
    }

    pub fn same_partition(&self, other: &RegionSet) -> bool {
        Arc::ptr_eq(&self.partition, &other.partition)
            || self.partition.ceiling() == other.partition.ceiling()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.bits.insert(i);
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.bits.count_ones(..) == self.partition.len()
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn is_subset(&self, other: &RegionSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    fn check(&self, other: &RegionSet) -> Result<(), RegionError> {
        if self.same_partition(other) {
            Ok(())
        } else {
            Err(RegionError::CeilingMismatch)
        }
    }

    pub fn try_and(&self, other: &RegionSet) -> Result<RegionSet, RegionError> {
        self.check(other)?;
        let mut s = self.clone();
        s.bits.intersect_with(&other.bits);
        Ok(s)
    }

    pub fn try_or(&self, other: &RegionSet) -> Result<RegionSet, RegionError> {
        self.check(other)?;
        let mut s = self.clone();
        s.bits.union_with(&other.bits);
        Ok(s)
    }

    pub fn neg(&self) -> RegionSet {
        let mut s = self.clone();
        s.bits.toggle_range(..);
        s
    }

    /// `{ r : reset(r, rs) ∈ self }`.
    pub fn reset_pred(&self, rs: u64) -> RegionSet {
        if rs == 0 {
            return self.clone();
        }
        let map = self.partition.reset_map(rs);
        let mut s = RegionSet::empty(&self.partition);
        for (r, &t) in map.iter().enumerate() {
            if self.bits.contains(t as usize) {
                s.bits.insert(r);
            }
        }
        s
    }

    /// Regions from which the successor chain stays in `stay` until it hits
    /// `self` (chains of length zero included).
    pub fn time_reach(&self, stay: &RegionSet) -> RegionSet {
        self.time_reach_unpreempted(stay, &RegionSet::empty(&self.partition))
    }

    /// As [`time_reach`](Self::time_reach), but every region on the chain,
    /// including both ends, must avoid `escape`.
    pub fn time_reach_unpreempted(&self, stay: &RegionSet, escape: &RegionSet) -> RegionSet {
        assert!(self.same_partition(stay) && self.same_partition(escape), "ceiling mismatch");
        let p = &self.partition;
        let mut s = RegionSet::empty(p);
        for &r in p.successor_order() {
            let r = r as usize;
            if !stay.bits.contains(r) || escape.bits.contains(r) {
                continue;
            }
            let next = p.successor(r) as usize;
            if self.bits.contains(r) || (next != r && s.bits.contains(next)) {
                s.bits.insert(r);
            }
        }
        s
    }

    pub fn pretty(&self) -> ClockConstraint {
        super::pretty::pretty(self)
    }
}

impl BitAnd for &RegionSet {
    type Output = RegionSet;
    fn bitand(self, rhs: &RegionSet) -> RegionSet {
        self.try_and(rhs).expect("ceiling mismatch")
    }
}

impl BitOr for &RegionSet {
    type Output = RegionSet;
    fn bitor(self, rhs: &RegionSet) -> RegionSet {
        self.try_or(rhs).expect("ceiling mismatch")
    }
}

impl Sub for &RegionSet {
    type Output = RegionSet;
    fn sub(self, rhs: &RegionSet) -> RegionSet {
        assert!(self.same_partition(rhs), "ceiling mismatch");
        let mut s = self.clone();
        s.bits.difference_with(&rhs.bits);
        s
    }
}

impl Not for &RegionSet {
    type Output = RegionSet;
    fn not(self) -> RegionSet {
        self.neg()
    }
}

/// Does every valuation of region `r` satisfy `c`?
pub fn region_satisfies(p: &Partition, r: usize, c: &ClockConstraint) -> Result<bool, RegionError> {
    let region = p.region(r);
    Ok(match c {
        ClockConstraint::True => true,
        ClockConstraint::False => false,
        ClockConstraint::Atom(x, rel, n) => {
            let i = p.clock_index(x).ok_or_else(|| RegionError::UnknownClock(x.clone()))?;
            region.clocks[i]
                .compare(*rel, *n as i32, 0, p.k(i))
                .ok_or_else(|| RegionError::ConstantExceedsCeiling(c.to_string()))?
        }
        ClockConstraint::DiffAtom(x, y, rel, n) => {
            let i = p.clock_index(x).ok_or_else(|| RegionError::UnknownClock(x.clone()))?;
            let j = p.clock_index(y).ok_or_else(|| RegionError::UnknownClock(y.clone()))?;
            let n = *n as i32;
            let answer = if i == j {
                Some(rel.holds(0, n))
            } else if i < j {
                // x - y ~ n  <=>  c_j - c_i ~' -n
                let q = p.pair_index(i, j);
                let (lo, hi) = p.diff_grid(q);
                region.diffs[q].compare(rel.flip(), -n, lo, hi)
            } else {
                let q = p.pair_index(j, i);
                let (lo, hi) = p.diff_grid(q);
                region.diffs[q].compare(*rel, n, lo, hi)
            };
            answer.ok_or_else(|| RegionError::ConstantExceedsCeiling(c.to_string()))?
        }
        ClockConstraint::And(a, b) => region_satisfies(p, r, a)? && region_satisfies(p, r, b)?,
        ClockConstraint::Or(a, b) => region_satisfies(p, r, a)? || region_satisfies(p, r, b)?,
    })
}

/// The set of regions satisfying `c`.
pub fn zmap(p: &Arc<Partition>, c: &ClockConstraint) -> Result<RegionSet, RegionError> {
    check_constants(p, c)?;
    let mut s = RegionSet::empty(p);
    for r in 0..p.len() {
        if region_satisfies(p, r, c)? {
            s.insert(r);
        }
    }
    Ok(s)
}

/// Every atom of `c` must be decidable region by region, i.e. mention only
/// known clocks and constants within the ceiling.
pub fn check_constants(p: &Partition, c: &ClockConstraint) -> Result<(), RegionError> {
    let mut result = Ok(());
    if p.is_empty() {
        return result;
    }
    c.visit_atoms(&mut |a| {
        if result.is_ok() {
            result = region_satisfies(p, 0, a).map(|_| ());
        }
    });
    result
}
