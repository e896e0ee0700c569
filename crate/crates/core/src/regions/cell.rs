use num_rational::Rational64;

use crate::model::Rel;

/// Position of a value relative to the integer grid `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    /// `v < lo`
    Below,
    /// `v = n`
    Point(i32),
    /// `n - 1 < v < n`
    Open(i32),
    /// `v > hi`
    Above,
}

/// One side of an interval: `None` is unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Side {
    pub value: i32,
    pub strict: bool,
}

impl Cell {
    pub fn classify(v: Rational64, lo: i32, hi: i32) -> Cell {
        let lo_r = Rational64::from(lo as i64);
        let hi_r = Rational64::from(hi as i64);
        if v < lo_r {
            Cell::Below
        } else if v > hi_r {
            Cell::Above
        } else if v.is_integer() {
            Cell::Point(v.to_integer() as i32)
        } else {
            Cell::Open(v.ceil().to_integer() as i32)
        }
    }

    /// All cells of the grid in increasing order.
    pub fn all(lo: i32, hi: i32, with_below: bool) -> Vec<Cell> {
        let mut out = Vec::with_capacity(2 * (hi - lo) as usize + 3);
        if with_below {
            out.push(Cell::Below);
        }
        out.push(Cell::Point(lo));
        for n in lo + 1..=hi {
            out.push(Cell::Open(n));
            out.push(Cell::Point(n));
        }
        out.push(Cell::Above);
        out
    }

    /// Lower and upper bound of the cell.
    pub fn sides(self, lo: i32, hi: i32) -> (Option<Side>, Option<Side>) {
        match self {
            Cell::Below => (None, Some(Side { value: lo, strict: true })),
            Cell::Point(n) => (Some(Side { value: n, strict: false }), Some(Side { value: n, strict: false })),
            Cell::Open(n) => (Some(Side { value: n - 1, strict: true }), Some(Side { value: n, strict: true })),
            Cell::Above => (Some(Side { value: hi, strict: true }), None),
        }
    }

    /// Truth of `v ~ c` for every `v` in the cell; `None` when `c` is off the
    /// grid and the answer would vary inside the cell.
    pub fn compare(self, rel: Rel, c: i32, lo: i32, hi: i32) -> Option<bool> {
        if c < lo || c > hi {
            return None;
        }
        Some(match self {
            Cell::Below => rel == Rel::Lt,
            Cell::Above => rel == Rel::Gt,
            Cell::Point(n) => rel.holds(n, c),
            Cell::Open(n) => match rel {
                Rel::Lt => n <= c,
                Rel::Eq => false,
                Rel::Gt => n - 1 >= c,
            },
        })
    }

    /// The cell of `-v` on the grid `-hi..=-lo`.
    pub fn negate(self) -> Cell {
        match self {
            Cell::Below => Cell::Above,
            Cell::Above => Cell::Below,
            Cell::Point(n) => Cell::Point(-n),
            Cell::Open(n) => Cell::Open(-n + 1),
        }
    }

    pub fn is_point(self) -> bool {
        matches!(self, Cell::Point(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_grid() {
        let r = |a, b| Rational64::new(a, b);
        assert_eq!(Cell::classify(r(0, 1), 0, 2), Cell::Point(0));
        assert_eq!(Cell::classify(r(3, 2), 0, 2), Cell::Open(2));
        assert_eq!(Cell::classify(r(5, 2), 0, 2), Cell::Above);
        assert_eq!(Cell::classify(r(-7, 2), -3, 1), Cell::Below);
        assert_eq!(Cell::classify(r(-1, 2), -3, 1), Cell::Open(0));
    }

    #[test]
    fn negate_matches_classify() {
        for num in -9..=9 {
            let v = Rational64::new(num, 2);
            let c = Cell::classify(v, -2, 3);
            assert_eq!(c.negate(), Cell::classify(-v, -3, 2), "{v}");
        }
    }

    #[test]
    fn compare_on_open_cell() {
        let c = Cell::Open(2);
        assert_eq!(c.compare(Rel::Lt, 2, 0, 3), Some(true));
        assert_eq!(c.compare(Rel::Gt, 1, 0, 3), Some(true));
        assert_eq!(c.compare(Rel::Eq, 1, 0, 3), Some(false));
        assert_eq!(c.compare(Rel::Lt, 4, 0, 3), None);
    }

    #[test]
    fn grid_cell_count() {
        assert_eq!(Cell::all(0, 2, false).len(), 6);
        assert_eq!(Cell::all(-1, 1, true).len(), 7);
    }
}
