//! Small difference-bound matrices over rationals. Used only to decide
//! whether a combination of region descriptors is satisfiable and to pick
//! a point inside it.

use std::cmp::Ordering;

use num_rational::Rational64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Inf,
    /// `value` with strictness: `<` if `strict`, else `<=`.
    Fin(Rational64, bool),
}

impl Bound {
    pub fn le(v: Rational64) -> Bound {
        Bound::Fin(v, false)
    }

    pub fn lt(v: Rational64) -> Bound {
        Bound::Fin(v, true)
    }

    fn add(self, other: Bound) -> Bound {
        match (self, other) {
            (Bound::Fin(a, s), Bound::Fin(b, t)) => Bound::Fin(a + b, s || t),
            _ => Bound::Inf,
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Bound::Inf, Bound::Inf) => Ordering::Equal,
            (Bound::Inf, _) => Ordering::Greater,
            (_, Bound::Inf) => Ordering::Less,
            (Bound::Fin(a, s), Bound::Fin(b, t)) => a.cmp(b).then_with(|| t.cmp(s)),
        }
    }
}

/// Variable 0 is the constant zero; `m[i][j]` bounds `v_i - v_j`.
#[derive(Clone, Debug)]
pub struct Dbm {
    n: usize,
    m: Vec<Bound>,
}

impl Dbm {
    /// Unconstrained non-negative clocks.
    pub fn new(clocks: usize) -> Dbm {
        let n = clocks + 1;
        let mut m = vec![Bound::Inf; n * n];
        for i in 0..n {
            m[i * n + i] = Bound::le(0.into());
            m[i] = Bound::le(0.into());
        }
        Dbm { n, m }
    }

    pub fn get(&self, i: usize, j: usize) -> Bound {
        self.m[i * self.n + j]
    }

    /// Adds `v_i - v_j (<|<=) c` and restores closure incrementally.
    /// Returns false when the system becomes empty.
    pub fn constrain(&mut self, i: usize, j: usize, b: Bound) -> bool {
        if b >= self.get(i, j) {
            return true;
        }
        if b.add(self.get(j, i)) < Bound::le(0.into()) {
            return false;
        }
        let n = self.n;
        self.m[i * n + j] = b;
        for a in 0..n {
            let ai = self.get(a, i);
            if ai == Bound::Inf {
                continue;
            }
            for c in 0..n {
                let through = ai.add(b).add(self.get(j, c));
                if through < self.get(a, c) {
                    self.m[a * n + c] = through;
                }
            }
        }
        true
    }

    /// Chooses a point, one clock after another, each strictly inside the
    /// projection of what remains.
    pub fn pick_point(&self) -> Vec<Rational64> {
        let mut d = self.clone();
        let mut out = Vec::with_capacity(self.n - 1);
        for i in 1..self.n {
            let lower = match d.get(0, i) {
                Bound::Fin(v, _) => -v,
                Bound::Inf => Rational64::from(0),
            };
            let value = match d.get(i, 0) {
                Bound::Inf => lower + 1,
                Bound::Fin(u, _) if u == lower => u,
                Bound::Fin(u, _) => (lower + u) / 2,
            };
            let ok = d.constrain(i, 0, Bound::le(value)) && d.constrain(0, i, Bound::le(-value));
            debug_assert!(ok, "projection of a closed system must extend");
            out.push(value);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational64 {
        Rational64::from(n)
    }

    #[test]
    fn strict_cycle_is_empty() {
        let mut d = Dbm::new(1);
        assert!(d.constrain(1, 0, Bound::lt(r(1))));
        assert!(!d.constrain(0, 1, Bound::le(r(-1))));
    }

    #[test]
    fn point_respects_difference() {
        let mut d = Dbm::new(2);
        // 1 < x < 2, 0 < y < 1, x - y = 1
        assert!(d.constrain(1, 0, Bound::lt(r(2))));
        assert!(d.constrain(0, 1, Bound::lt(r(-1))));
        assert!(d.constrain(2, 0, Bound::lt(r(1))));
        assert!(d.constrain(0, 2, Bound::lt(r(0))));
        assert!(d.constrain(1, 2, Bound::le(r(1))));
        assert!(d.constrain(2, 1, Bound::le(r(-1))));
        let p = d.pick_point();
        assert_eq!(p[0] - p[1], r(1));
        assert!(p[0] > r(1) && p[0] < r(2));
    }
}
