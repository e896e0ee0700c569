use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Rational64;

use super::cell::Cell;
use super::dbm::{Bound, Dbm};
use crate::model::CeilingMap;

/// One extended clock region: a cell per clock on `0..=k(x)` and, for each
/// clock pair `i < j`, a cell of `c_j - c_i` on `-k(c_i)..=k(c_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region {
    pub clocks: Box<[Cell]>,
    pub diffs: Box<[Cell]>,
}

/// The finite set of regions for a fixed ceiling map, in a stable order.
pub struct Partition {
    ceiling: CeilingMap,
    clocks: Vec<String>,
    k: Vec<i32>,
    pairs: Vec<(usize, usize)>,
    regions: Vec<Region>,
    index: HashMap<Region, u32>,
    successor: Vec<u32>,
    /// Every region appears after its time successor.
    succ_order: Vec<u32>,
    representatives: Vec<Vec<Rational64>>,
    origin: u32,
    reset_cache: Mutex<HashMap<u64, Arc<Vec<u32>>>>,
    pub(super) literals: OnceLock<Vec<super::pretty::Literal>>,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Partition")
            .field("ceiling", &self.ceiling)
            .field("regions", &self.regions.len())
            .finish()
    }
}

impl Partition {
    /// Enumerates every satisfiable combination of descriptors.
    pub fn new(ceiling: &CeilingMap) -> Arc<Partition> {
        let clocks: Vec<String> = ceiling.keys().cloned().collect();
        let k: Vec<i32> = ceiling.values().map(|&n| n as i32).collect();
        let n = clocks.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        let mut regions = Vec::new();
        let mut clock_cells = vec![Cell::Point(0); n];
        let mut diff_cells = vec![Cell::Point(0); pairs.len()];
        enumerate_clocks(&k, &pairs, 0, &Dbm::new(n), &mut clock_cells, &mut diff_cells, &mut regions);

        let index: HashMap<Region, u32> =
            regions.iter().enumerate().map(|(i, r)| (r.clone(), i as u32)).collect();
        let mut p = Partition {
            ceiling: ceiling.clone(),
            clocks,
            k,
            pairs,
            regions,
            index,
            successor: Vec::new(),
            succ_order: Vec::new(),
            representatives: Vec::new(),
            origin: 0,
            reset_cache: Mutex::new(HashMap::new()),
            literals: OnceLock::new(),
        };
        p.successor = p.regions.iter().map(|r| p.index_of(&p.successor_of(r))).collect();
        p.succ_order = chain_order(&p.successor);
        p.representatives = p.regions.iter().map(|r| p.dbm_of(r).pick_point()).collect();
        let all_reset = (1u64 << n).wrapping_sub(1);
        p.origin = p.index_of(&p.reset_of(&p.regions[0], all_reset));
        Arc::new(p)
    }

    pub fn ceiling(&self) -> &CeilingMap {
        &self.ceiling
    }

    pub fn clocks(&self) -> &[String] {
        &self.clocks
    }

    pub fn clock_index(&self, name: &str) -> Option<usize> {
        self.clocks.iter().position(|c| c == name)
    }

    pub fn k(&self, clock: usize) -> i32 {
        self.k[clock]
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        self.pairs.iter().position(|&p| p == (i, j)).expect("pair")
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn region(&self, i: usize) -> &Region {
        &self.regions[i]
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn index_of(&self, r: &Region) -> u32 {
        *self.index.get(r).unwrap_or_else(|| panic!("not a region of this partition: {r:?}"))
    }

    pub fn lookup(&self, r: &Region) -> Option<u32> {
        self.index.get(r).copied()
    }

    pub fn origin(&self) -> u32 {
        self.origin
    }

    pub fn representative(&self, i: usize) -> &[Rational64] {
        &self.representatives[i]
    }

    pub fn successor(&self, i: usize) -> u32 {
        self.successor[i]
    }

    pub(crate) fn successor_order(&self) -> &[u32] {
        &self.succ_order
    }

    /// Bounds of the grid used for pair `(i, j)`, i.e. for `c_j - c_i`.
    pub fn diff_grid(&self, pair: usize) -> (i32, i32) {
        let (i, j) = self.pairs[pair];
        (-self.k[i], self.k[j])
    }

    /// The cell of a valuation given in clock order.
    pub fn classify(&self, u: &[Rational64]) -> Region {
        assert_eq!(u.len(), self.clocks.len(), "valuation arity");
        let clocks = u
            .iter()
            .zip(&self.k)
            .map(|(&v, &k)| Cell::classify(v, 0, k))
            .collect();
        let diffs = self
            .pairs
            .iter()
            .map(|&(i, j)| Cell::classify(u[j] - u[i], -self.k[i], self.k[j]))
            .collect();
        Region { clocks, diffs }
    }

    pub fn classify_index(&self, u: &[Rational64]) -> u32 {
        self.index_of(&self.classify(u))
    }

    /// First distinct region entered when all clocks advance together.
    pub fn successor_of(&self, r: &Region) -> Region {
        let n = self.clocks.len();
        let bounded: Vec<usize> = (0..n).filter(|&c| r.clocks[c] != Cell::Above).collect();
        if bounded.is_empty() {
            return r.clone();
        }
        let mut clocks = r.clocks.clone();
        if bounded.iter().any(|&c| r.clocks[c].is_point()) {
            for &c in &bounded {
                if let Cell::Point(v) = r.clocks[c] {
                    clocks[c] = if v < self.k[c] { Cell::Open(v + 1) } else { Cell::Above };
                }
            }
        } else {
            // every bounded clock is strictly between integers; the ones with
            // the largest fractional part reach their upper integer first
            let leads = |a: usize, b: usize| -> bool {
                // does clock a have a strictly larger fractional part than b?
                let (Cell::Open(na), Cell::Open(nb)) = (r.clocks[a], r.clocks[b]) else {
                    unreachable!()
                };
                let (i, j, sign) = if a < b { (a, b, 1) } else { (b, a, -1) };
                let d = r.diffs[self.pair_index(i, j)];
                // c_j - c_i compared against n_j - n_i
                let gap = if a < b { nb - na } else { na - nb };
                let frac_i_larger = d == Cell::Open(gap);
                let frac_j_larger = d == Cell::Open(gap + 1);
                if sign == 1 {
                    frac_i_larger
                } else {
                    frac_j_larger
                }
            };
            for &c in &bounded {
                if !bounded.iter().any(|&o| o != c && leads(o, c)) {
                    let Cell::Open(v) = r.clocks[c] else { unreachable!() };
                    clocks[c] = Cell::Point(v);
                }
            }
        }
        Region { clocks, diffs: r.diffs.clone() }
    }

    /// The region of `u[rs]` for any `u` in `r`; `rs` is a clock bitmask.
    pub fn reset_of(&self, r: &Region, rs: u64) -> Region {
        let hit = |c: usize| rs & (1 << c) != 0;
        let clocks = r
            .clocks
            .iter()
            .enumerate()
            .map(|(c, &cell)| if hit(c) { Cell::Point(0) } else { cell })
            .collect();
        let diffs = self
            .pairs
            .iter()
            .zip(r.diffs.iter())
            .map(|(&(i, j), &d)| match (hit(i), hit(j)) {
                (true, true) => Cell::Point(0),
                // c_j - 0: the clock cell of j read on the grid -k_i..=k_j
                (true, false) => r.clocks[j],
                // 0 - c_i
                (false, true) => r.clocks[i].negate(),
                (false, false) => d,
            })
            .collect();
        Region { clocks, diffs }
    }

    /// `map[r] = reset_of(r, rs)` as indices, cached per reset set.
    pub fn reset_map(&self, rs: u64) -> Arc<Vec<u32>> {
        let mut cache = self.reset_cache.lock().expect("reset cache poisoned");
        cache
            .entry(rs)
            .or_insert_with(|| {
                Arc::new(self.regions.iter().map(|r| self.index_of(&self.reset_of(r, rs))).collect())
            })
            .clone()
    }

    /// Reset bitmask for a list of clock names; unknown names are ignored
    /// (they cannot influence any region of this partition).
    pub fn reset_mask<S: AsRef<str>>(&self, names: &[S]) -> u64 {
        names
            .iter()
            .filter_map(|n| self.clock_index(n.as_ref()))
            .fold(0, |m, c| m | (1 << c))
    }

    fn dbm_of(&self, r: &Region) -> Dbm {
        let mut d = Dbm::new(self.clocks.len());
        for (c, cell) in r.clocks.iter().enumerate() {
            let ok = constrain_cell(&mut d, c + 1, 0, *cell, 0, self.k[c]);
            debug_assert!(ok);
        }
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            let ok = constrain_cell(&mut d, j + 1, i + 1, r.diffs[p], -self.k[i], self.k[j]);
            debug_assert!(ok);
        }
        d
    }
}

/// Adds `lo' ~ v_a - v_b ~ hi'` for the bounds of `cell`.
fn constrain_cell(d: &mut Dbm, a: usize, b: usize, cell: Cell, lo: i32, hi: i32) -> bool {
    let (lower, upper) = cell.sides(lo, hi);
    if let Some(s) = upper {
        let v = Rational64::from(s.value as i64);
        let bound = if s.strict { Bound::lt(v) } else { Bound::le(v) };
        if !d.constrain(a, b, bound) {
            return false;
        }
    }
    if let Some(s) = lower {
        let v = Rational64::from(-(s.value as i64));
        let bound = if s.strict { Bound::lt(v) } else { Bound::le(v) };
        if !d.constrain(b, a, bound) {
            return false;
        }
    }
    true
}

fn enumerate_clocks(
    k: &[i32],
    pairs: &[(usize, usize)],
    c: usize,
    dbm: &Dbm,
    clock_cells: &mut Vec<Cell>,
    diff_cells: &mut Vec<Cell>,
    out: &mut Vec<Region>,
) {
    if c == k.len() {
        enumerate_diffs(k, pairs, 0, dbm, clock_cells, diff_cells, out);
        return;
    }
    for cell in Cell::all(0, k[c], false) {
        let mut d = dbm.clone();
        if constrain_cell(&mut d, c + 1, 0, cell, 0, k[c]) {
            clock_cells[c] = cell;
            enumerate_clocks(k, pairs, c + 1, &d, clock_cells, diff_cells, out);
        }
    }
}

fn enumerate_diffs(
    k: &[i32],
    pairs: &[(usize, usize)],
    p: usize,
    dbm: &Dbm,
    clock_cells: &[Cell],
    diff_cells: &mut Vec<Cell>,
    out: &mut Vec<Region>,
) {
    if p == pairs.len() {
        out.push(Region { clocks: clock_cells.into(), diffs: diff_cells.as_slice().into() });
        return;
    }
    let (i, j) = pairs[p];
    for cell in Cell::all(-k[i], k[j], true) {
        let mut d = dbm.clone();
        if constrain_cell(&mut d, j + 1, i + 1, cell, -k[i], k[j]) {
            diff_cells[p] = cell;
            enumerate_diffs(k, pairs, p + 1, &d, clock_cells, diff_cells, out);
        }
    }
}

/// Orders regions so that each one comes after its successor.
fn chain_order(successor: &[u32]) -> Vec<u32> {
    let n = successor.len();
    let mut depth = vec![u32::MAX; n];
    for start in 0..n {
        let mut path = Vec::new();
        let mut r = start;
        while depth[r] == u32::MAX {
            if successor[r] as usize == r {
                depth[r] = 0;
                break;
            }
            path.push(r);
            r = successor[r] as usize;
        }
        let mut d = depth[r];
        for &q in path.iter().rev() {
            d += 1;
            depth[q] = d;
        }
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by_key(|&r| depth[r as usize]);
    order
}

impl Region {
    /// Short human-readable description, e.g. `[1<x<2, y=0, y-x in (-2,-1)]`.
    pub fn describe(&self, p: &Partition) -> String {
        let mut parts = Vec::new();
        for (c, cell) in self.clocks.iter().enumerate() {
            let x = &p.clocks[c];
            parts.push(match cell {
                Cell::Point(n) => format!("{x}={n}"),
                Cell::Open(n) => format!("{}<{x}<{n}", n - 1),
                Cell::Above => format!("{x}>{}", p.k[c]),
                Cell::Below => unreachable!("clocks are non-negative"),
            });
        }
        for (q, &(i, j)) in p.pairs.iter().enumerate() {
            let name = format!("{}-{}", p.clocks[j], p.clocks[i]);
            let (lo, hi) = p.diff_grid(q);
            parts.push(match self.diffs[q] {
                Cell::Point(n) => format!("{name}={n}"),
                Cell::Open(n) => format!("{}<{name}<{n}", n - 1),
                Cell::Above => format!("{name}>{hi}"),
                Cell::Below => format!("{name}<{lo}"),
            });
        }
        format!("[{}]", parts.join(", "))
    }
}
