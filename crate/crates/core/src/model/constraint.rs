use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;

/// Comparison used in atomic clock constraints. `<=` and `>=` are parsed as
/// disjunctions of these three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Lt,
    Eq,
    Gt,
}

impl Rel {
    pub fn holds<T: Ord>(self, lhs: T, rhs: T) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Eq => lhs == rhs,
            Rel::Gt => lhs > rhs,
        }
    }

    pub fn flip(self) -> Rel {
        match self {
            Rel::Lt => Rel::Gt,
            Rel::Eq => Rel::Eq,
            Rel::Gt => Rel::Lt,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Eq => "=",
            Rel::Gt => ">",
        }
    }
}

/// Clock constraint over named clocks with natural constants.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClockConstraint {
    True,
    False,
    /// `x ~ n`
    Atom(String, Rel, u32),
    /// `x - y ~ n`
    DiffAtom(String, String, Rel, u32),
    And(Box<ClockConstraint>, Box<ClockConstraint>),
    Or(Box<ClockConstraint>, Box<ClockConstraint>),
}

impl ClockConstraint {
    pub fn atom(x: &str, rel: Rel, n: u32) -> Self {
        ClockConstraint::Atom(x.to_string(), rel, n)
    }

    pub fn diff(x: &str, y: &str, rel: Rel, n: u32) -> Self {
        ClockConstraint::DiffAtom(x.to_string(), y.to_string(), rel, n)
    }

    pub fn le(x: &str, n: u32) -> Self {
        Self::atom(x, Rel::Lt, n).or(Self::atom(x, Rel::Eq, n))
    }

    pub fn ge(x: &str, n: u32) -> Self {
        Self::atom(x, Rel::Gt, n).or(Self::atom(x, Rel::Eq, n))
    }

    /// Conjunction with trivial operands folded away.
    pub fn and(self, other: ClockConstraint) -> Self {
        match (self, other) {
            (ClockConstraint::True, c) | (c, ClockConstraint::True) => c,
            (ClockConstraint::False, _) | (_, ClockConstraint::False) => ClockConstraint::False,
            (a, b) => ClockConstraint::And(Box::new(a), Box::new(b)),
        }
    }

    /// Disjunction with trivial operands folded away.
    pub fn or(self, other: ClockConstraint) -> Self {
        match (self, other) {
            (ClockConstraint::False, c) | (c, ClockConstraint::False) => c,
            (ClockConstraint::True, _) | (_, ClockConstraint::True) => ClockConstraint::True,
            (a, b) => ClockConstraint::Or(Box::new(a), Box::new(b)),
        }
    }

    pub fn conjunction(parts: impl IntoIterator<Item = ClockConstraint>) -> Self {
        parts.into_iter().fold(ClockConstraint::True, |acc, c| acc.and(c))
    }

    pub fn disjunction(parts: impl IntoIterator<Item = ClockConstraint>) -> Self {
        parts.into_iter().fold(ClockConstraint::False, |acc, c| acc.or(c))
    }

    pub fn clocks(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |c| match c {
            ClockConstraint::Atom(x, _, _) => {
                out.insert(x.clone());
            }
            ClockConstraint::DiffAtom(x, y, _, _) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            _ => {}
        });
        out
    }

    pub fn visit_atoms(&self, f: &mut impl FnMut(&ClockConstraint)) {
        match self {
            ClockConstraint::And(a, b) | ClockConstraint::Or(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
            other => f(other),
        }
    }

    /// Evaluates the constraint at a concrete valuation. `value` must know
    /// every clock the constraint mentions.
    pub fn eval(&self, value: &impl Fn(&str) -> Rational64) -> bool {
        match self {
            ClockConstraint::True => true,
            ClockConstraint::False => false,
            ClockConstraint::Atom(x, rel, n) => rel.holds(value(x), Rational64::from(*n as i64)),
            ClockConstraint::DiffAtom(x, y, rel, n) => {
                rel.holds(value(x) - value(y), Rational64::from(*n as i64))
            }
            ClockConstraint::And(a, b) => a.eval(value) && b.eval(value),
            ClockConstraint::Or(a, b) => a.eval(value) || b.eval(value),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            ClockConstraint::Or(..) => 0,
            ClockConstraint::And(..) => 1,
            _ => 2,
        }
    }

    /// Flattens nested disjunctions into a list of operands.
    pub fn disjuncts(&self) -> Vec<&ClockConstraint> {
        match self {
            ClockConstraint::Or(a, b) => {
                let mut v = a.disjuncts();
                v.extend(b.disjuncts());
                v
            }
            other => vec![other],
        }
    }

    /// Flattens nested conjunctions into a list of operands.
    pub fn conjuncts(&self) -> Vec<&ClockConstraint> {
        match self {
            ClockConstraint::And(a, b) => {
                let mut v = a.conjuncts();
                v.extend(b.conjuncts());
                v
            }
            other => vec![other],
        }
    }

    /// Number of atoms after recognising `<=`/`>=` pairs.
    pub fn literal_count(&self) -> usize {
        if as_non_strict(self).is_some() {
            return 1;
        }
        match self {
            ClockConstraint::And(a, b) | ClockConstraint::Or(a, b) => {
                a.literal_count() + b.literal_count()
            }
            ClockConstraint::True | ClockConstraint::False => 0,
            _ => 1,
        }
    }
}

/// Recognises `lhs < n or lhs = n` (and the `>` variant) so it can be
/// printed as a single non-strict comparison.
fn as_non_strict(c: &ClockConstraint) -> Option<(String, &'static str, u32)> {
    let ClockConstraint::Or(a, b) = c else {
        return None;
    };
    let side = |c: &ClockConstraint| -> Option<(String, Rel, u32)> {
        match c {
            ClockConstraint::Atom(x, r, n) => Some((x.clone(), *r, *n)),
            ClockConstraint::DiffAtom(x, y, r, n) => Some((format!("{x} - {y}"), *r, *n)),
            _ => None,
        }
    };
    let (l1, r1, n1) = side(a)?;
    let (l2, r2, n2) = side(b)?;
    if l1 != l2 || n1 != n2 {
        return None;
    }
    match (r1, r2) {
        (Rel::Lt, Rel::Eq) | (Rel::Eq, Rel::Lt) => Some((l1, "<=", n1)),
        (Rel::Gt, Rel::Eq) | (Rel::Eq, Rel::Gt) => Some((l1, ">=", n1)),
        _ => None,
    }
}

impl fmt::Display for ClockConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((lhs, op, n)) = as_non_strict(self) {
            return write!(f, "{lhs} {op} {n}");
        }
        let child = |f: &mut fmt::Formatter<'_>, c: &ClockConstraint, min: u8| {
            if c.precedence() < min && as_non_strict(c).is_none() {
                write!(f, "({c})")
            } else {
                write!(f, "{c}")
            }
        };
        match self {
            ClockConstraint::True => write!(f, "true"),
            ClockConstraint::False => write!(f, "false"),
            ClockConstraint::Atom(x, r, n) => write!(f, "{x} {} {n}", r.symbol()),
            ClockConstraint::DiffAtom(x, y, r, n) => write!(f, "{x} - {y} {} {n}", r.symbol()),
            ClockConstraint::And(a, b) => {
                child(f, a, 1)?;
                write!(f, " and ")?;
                child(f, b, 2)
            }
            ClockConstraint::Or(a, b) => {
                child(f, a, 0)?;
                write!(f, " or ")?;
                child(f, b, 1)
            }
        }
    }
}
