//! Primal and dual witnesses for the bound LPs.
//!
//! A primal witness assigns weights to `(label, region)` pairs; a dual
//! witness assigns values to the two constraint families (`mu` for the
//! coverage/first family, `phi` for the equality/upper family), indexed by
//! cell or input index. Dual values are stored in the convention of the
//! bound's natural statement (e.g. nonnegative `mu` on both sides of a
//! rectangle bound); the per-kind sign mapping to raw LP multipliers lives
//! next to the LP builders.

use std::collections::BTreeMap;

use super::{Assignment, Rectangle};
use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Primal,
    Dual,
}

impl Side {
    pub fn token(&self) -> &'static str {
        match self {
            Side::Primal => "primal",
            Side::Dual => "dual",
        }
    }
}

/// A weighted region: a rectangle (communication bounds) or an assignment
/// (query bounds).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Region {
    Rect(Rectangle),
    Assign(Assignment),
}

/// An explicit witness, exact and self-contained: kind token, error
/// parameter, and either region weights (primal) or `mu`/`phi` values (dual).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub side: Side,
    /// Bound kind token, e.g. `prt`, `rec@1`, `qprt`.
    pub kind: String,
    pub epsilon: Rat,
    /// Primal weights keyed by `(label, region)`. For partition-type kinds
    /// the label is the answer the region is counted under; for one-family
    /// kinds (`rec`, `srec`, `qsrec_relaxed`) it is 0; for two-family kinds
    /// (`disc`, `sdisc`, the Las Vegas bounds) label 0 is the first printed
    /// family and label 1 the second.
    pub regions: BTreeMap<(u16, Region), Rat>,
    /// Dual values for the first constraint family, keyed by cell/input index.
    pub mu: BTreeMap<usize, Rat>,
    /// Dual values for the second constraint family.
    pub phi: BTreeMap<usize, Rat>,
}

impl Witness {
    pub fn primal(kind: String, epsilon: Rat) -> Self {
        Witness {
            side: Side::Primal,
            kind,
            epsilon,
            regions: BTreeMap::new(),
            mu: BTreeMap::new(),
            phi: BTreeMap::new(),
        }
    }

    pub fn dual(kind: String, epsilon: Rat) -> Self {
        Witness {
            side: Side::Dual,
            kind,
            epsilon,
            regions: BTreeMap::new(),
            mu: BTreeMap::new(),
            phi: BTreeMap::new(),
        }
    }
}
