//! Extended clock regions: a finite partition of clock valuations that
//! tracks, besides the usual integer parts and fractional order, the
//! integer band of every clock difference. Predicates used by synthesis are
//! unions of these regions.

mod cell;
mod dbm;
mod partition;
mod pretty;
mod set;

use thiserror::Error;

pub use cell::Cell;
pub use partition::{Partition, Region};
pub use pretty::{pretty, pretty_within};
pub use set::{check_constants, region_satisfies, zmap, RegionSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RegionError {
    #[error("constant in `{0}` exceeds the clock ceiling")]
    ConstantExceedsCeiling(String),
    #[error("clock `{0}` is not part of the partition")]
    UnknownClock(String),
    #[error("region sets come from different ceilings")]
    CeilingMismatch,
}
