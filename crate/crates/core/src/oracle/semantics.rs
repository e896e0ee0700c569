//! Concrete evaluation of one automaton over a partition. Guards,
//! invariants and resets are applied to a region's representative
//! valuation and the result classified again, so nothing here relies on
//! the symbolic region operations used by synthesis.

use std::sync::Arc;

use num_rational::Rational64;

use super::OracleError;
use crate::model::{ClockConstraint, Rel, TimedAutomaton};
use crate::regions::Partition;

#[derive(Clone, Debug)]
enum Test {
    True,
    False,
    Atom(usize, Rel, i64),
    Diff(usize, usize, Rel, i64),
    And(Box<Test>, Box<Test>),
    Or(Box<Test>, Box<Test>),
}

impl Test {
    fn compile(p: &Partition, c: &ClockConstraint) -> Result<Test, OracleError> {
        let idx = |x: &str| p.clock_index(x).ok_or_else(|| OracleError::UnknownClock(x.to_string()));
        Ok(match c {
            ClockConstraint::True => Test::True,
            ClockConstraint::False => Test::False,
            ClockConstraint::Atom(x, rel, n) => Test::Atom(idx(x)?, *rel, *n as i64),
            ClockConstraint::DiffAtom(x, y, rel, n) => Test::Diff(idx(x)?, idx(y)?, *rel, *n as i64),
            ClockConstraint::And(a, b) => Test::And(Box::new(Test::compile(p, a)?), Box::new(Test::compile(p, b)?)),
            ClockConstraint::Or(a, b) => Test::Or(Box::new(Test::compile(p, a)?), Box::new(Test::compile(p, b)?)),
        })
    }

    fn eval(&self, u: &[Rational64]) -> bool {
        match self {
            Test::True => true,
            Test::False => false,
            Test::Atom(i, rel, n) => rel.holds(u[*i], Rational64::from_integer(*n)),
            Test::Diff(i, j, rel, n) => rel.holds(u[*i] - u[*j], Rational64::from_integer(*n)),
            Test::And(a, b) => a.eval(u) && b.eval(u),
            Test::Or(a, b) => a.eval(u) || b.eval(u),
        }
    }
}

#[derive(Clone, Debug)]
struct Move {
    event: String,
    guard: Test,
    resets: Vec<usize>,
    target: usize,
}

/// One automaton, ready to be explored region by region.
#[derive(Clone, Debug)]
pub struct Semantics {
    pub partition: Arc<Partition>,
    invariants: Vec<Test>,
    moves: Vec<Vec<Move>>,
    initial: usize,
}

impl Semantics {
    pub fn new(ta: &TimedAutomaton, partition: Arc<Partition>) -> Result<Semantics, OracleError> {
        ta.validate()?;
        for c in &ta.clocks {
            let k = partition.clock_index(c).map(|i| partition.k(i) as u32);
            let need = ta.clock_ceiling()[c];
            match k {
                None => return Err(OracleError::UnknownClock(c.clone())),
                Some(k) if k < need => return Err(OracleError::CeilingTooSmall(c.clone())),
                _ => {}
            }
        }
        let invariants =
            ta.locations.iter().map(|l| Test::compile(&partition, &l.invariant)).collect::<Result<Vec<_>, _>>()?;
        let mut moves: Vec<Vec<Move>> = vec![Vec::new(); ta.locations.len()];
        for e in &ta.edges {
            let resets = e
                .resets
                .iter()
                .map(|c| partition.clock_index(c).ok_or_else(|| OracleError::UnknownClock(c.clone())))
                .collect::<Result<Vec<_>, _>>()?;
            moves[e.source].push(Move {
                event: e.event.clone(),
                guard: Test::compile(&partition, &e.guard)?,
                resets,
                target: e.target,
            });
        }
        Ok(Semantics { partition, invariants, moves, initial: ta.initial })
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn location_count(&self) -> usize {
        self.invariants.len()
    }

    /// Does every valuation of region `r` satisfy the invariant of `l`?
    pub fn admits(&self, l: usize, r: u32) -> bool {
        self.invariants[l].eval(self.partition.representative(r as usize))
    }

    /// Event steps from `(l, r)`: the guard holds and the reset valuation
    /// satisfies the target invariant.
    pub fn event_steps(&self, l: usize, r: u32) -> Vec<(&str, usize, u32)> {
        let u = self.partition.representative(r as usize);
        let mut out = Vec::new();
        for m in &self.moves[l] {
            if !m.guard.eval(u) {
                continue;
            }
            let mut v = u.to_vec();
            for &c in &m.resets {
                v[c] = Rational64::from_integer(0);
            }
            if self.invariants[m.target].eval(&v) {
                out.push((m.event.as_str(), m.target, self.partition.classify_index(&v)));
            }
        }
        out
    }

    /// The immediate time successor of `(l, r)` if time may pass into it.
    pub fn time_step(&self, l: usize, r: u32) -> Option<u32> {
        let next = delay_successor(&self.partition, r);
        (next != r && self.admits(l, next)).then_some(next)
    }
}

/// The first region entered by letting time pass from the representative
/// of `r`, found by delaying to (or just past) the next integer crossing.
pub fn delay_successor(p: &Partition, r: u32) -> u32 {
    let u = p.representative(r as usize);
    let mut gap: Option<Rational64> = None;
    let mut on_integer = false;
    for (i, v) in u.iter().enumerate() {
        if *v > Rational64::from_integer(p.k(i) as i64) {
            continue;
        }
        on_integer |= v.is_integer();
        let d = v.floor() + 1 - v;
        gap = Some(gap.map_or(d, |g| g.min(d)));
    }
    let Some(gap) = gap else { return r };
    let delta = if on_integer { gap / 2 } else { gap };
    let v: Vec<Rational64> = u.iter().map(|x| x + delta).collect();
    p.classify_index(&v)
}
