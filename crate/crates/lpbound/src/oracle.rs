//! Brute-force baselines, independent of the LP machinery.
//!
//! These are intentionally direct recursions and eliminations over exact
//! arithmetic. They exist to pin down ground-truth values (deterministic
//! communication cost, decision-tree depth, matrix rank) that the LP-based
//! bounds are then checked against.

use std::collections::HashMap;

use num_traits::Zero;

use crate::comm::protocol::ProtocolTree;
use crate::error::{input_err, Result};
use crate::model::{bits, mask_of_width, CommInstance, QueryInstance};
use crate::query::dtree::QueryTree;
use crate::rat::{rat, Rat};

/// Minimum depth of a deterministic protocol in which the speaker at every
/// node bipartitions their own active input set, together with one optimal
/// protocol tree. Instances up to 8x8.
pub fn deterministic_cc(instance: &CommInstance) -> Result<(u32, ProtocolTree)> {
    if instance.nrows() > 8 || instance.ncols() > 8 {
        return input_err("deterministic communication oracle supports at most 8x8 instances");
    }
    let full_rows = (1u64 << instance.nrows()) - 1;
    let full_cols = (1u64 << instance.ncols()) - 1;
    let mut memo = HashMap::new();
    let depth = cc_depth(instance, full_rows, full_cols, &mut memo);
    let tree = cc_tree(instance, full_rows, full_cols, &memo);
    Ok((depth, tree))
}

type CcMemo = HashMap<(u64, u64), (u32, Option<(bool, u64)>)>;

fn cc_depth(instance: &CommInstance, rows: u64, cols: u64, memo: &mut CcMemo) -> u32 {
    if let Some(&(d, _)) = memo.get(&(rows, cols)) {
        return d;
    }
    if common_output(instance, rows, cols).is_some() {
        memo.insert((rows, cols), (0, None));
        return 0;
    }
    let mut best = u32::MAX;
    let mut choice = None;
    for (by_rows, active) in [(true, rows), (false, cols)] {
        for part in proper_halves(active) {
            let (a, b) = if by_rows {
                ((part, cols), (active ^ part, cols))
            } else {
                ((rows, part), (rows, active ^ part))
            };
            let da = cc_depth(instance, a.0, a.1, memo);
            let db = cc_depth(instance, b.0, b.1, memo);
            let d = 1 + da.max(db);
            if d < best {
                best = d;
                choice = Some((by_rows, part));
            }
        }
    }
    memo.insert((rows, cols), (best, choice));
    best
}

fn cc_tree(instance: &CommInstance, rows: u64, cols: u64, memo: &CcMemo) -> ProtocolTree {
    match memo[&(rows, cols)] {
        (_, None) => {
            let z = common_output(instance, rows, cols).expect("leaf state is monochromatic");
            ProtocolTree::Leaf { z }
        }
        (_, Some((by_rows, part))) => {
            let (left, right) = if by_rows {
                (
                    cc_tree(instance, part, cols, memo),
                    cc_tree(instance, rows ^ part, cols, memo),
                )
            } else {
                (
                    cc_tree(instance, rows, part, memo),
                    cc_tree(instance, rows, cols ^ part, memo),
                )
            };
            ProtocolTree::Node {
                row_player: by_rows,
                part,
                left: Box::new(left),
                right: Box::new(right),
            }
        }
    }
}

/// Smallest output every defined cell of the sub-rectangle allows, if any.
fn common_output(instance: &CommInstance, rows: u64, cols: u64) -> Option<u16> {
    let mut acc = u64::MAX;
    for x in bits(rows) {
        for y in bits(cols) {
            let m = instance.cell_mask(x, y);
            if m != 0 {
                acc &= m;
            }
        }
    }
    acc &= mask_of_width(u32::from(instance.alphabet()));
    (acc != 0).then(|| acc.trailing_zeros() as u16)
}

/// Nontrivial bipartitions `(part, active - part)` of `active`, up to
/// swapping the halves: `part` always keeps the lowest active bit.
fn proper_halves(active: u64) -> Vec<u64> {
    let low = active & active.wrapping_neg();
    let rest = active ^ low;
    let mut out = Vec::new();
    // Submasks of rest, each joined with the anchored low bit; skipping the
    // full mask keeps the complement nonempty.
    let mut sub = 0u64;
    loop {
        let part = low | sub;
        if part != active {
            out.push(part);
        }
        if sub == rest {
            break;
        }
        sub = (sub.wrapping_sub(rest)) & rest;
    }
    out
}

/// Minimum decision-tree depth, together with one optimal tree. Instances
/// up to 10 variables.
pub fn deterministic_query(instance: &QueryInstance) -> Result<(u32, QueryTree)> {
    if instance.n() > 10 {
        return input_err("decision-tree oracle supports at most 10 variables");
    }
    let mut memo = HashMap::new();
    let depth = dt_depth(instance, 0, 0, &mut memo);
    let tree = dt_tree(instance, 0, 0, &memo);
    Ok((depth, tree))
}

type DtMemo = HashMap<(u32, u32), (u32, Option<u32>)>;

fn dt_depth(instance: &QueryInstance, fixed: u32, values: u32, memo: &mut DtMemo) -> u32 {
    if let Some(&(d, _)) = memo.get(&(fixed, values)) {
        return d;
    }
    if subcube_common_output(instance, fixed, values).is_some() {
        memo.insert((fixed, values), (0, None));
        return 0;
    }
    let n = instance.n();
    let mut best = u32::MAX;
    let mut choice = None;
    for bit in (0..n as u32).filter(|b| fixed >> b & 1 == 0) {
        let d0 = dt_depth(instance, fixed | 1 << bit, values, memo);
        let d1 = dt_depth(instance, fixed | 1 << bit, values | 1 << bit, memo);
        let d = 1 + d0.max(d1);
        if d < best {
            best = d;
            choice = Some(bit);
        }
    }
    memo.insert((fixed, values), (best, choice));
    best
}

fn dt_tree(instance: &QueryInstance, fixed: u32, values: u32, memo: &DtMemo) -> QueryTree {
    match memo[&(fixed, values)] {
        (_, None) => {
            let z = subcube_common_output(instance, fixed, values).expect("leaf state is constant");
            QueryTree::Leaf { z }
        }
        (_, Some(bit)) => QueryTree::Node {
            var: bit + 1,
            zero: Box::new(dt_tree(instance, fixed | 1 << bit, values, memo)),
            one: Box::new(dt_tree(instance, fixed | 1 << bit, values | 1 << bit, memo)),
        },
    }
}

fn subcube_common_output(instance: &QueryInstance, fixed: u32, values: u32) -> Option<u16> {
    let mut acc = u64::MAX;
    for x in 0..instance.input_count() as u32 {
        if x & fixed == values {
            let m = instance.cell_mask(x);
            if m != 0 {
                acc &= m;
            }
        }
    }
    acc &= mask_of_width(1 << instance.m());
    (acc != 0).then(|| acc.trailing_zeros() as u16)
}

/// Rank of a total Boolean matrix over the rationals, by exact Gaussian
/// elimination.
pub fn exact_rank(instance: &CommInstance) -> Result<usize> {
    if instance.is_relation() || instance.alphabet() != 2 || !instance.is_total() {
        return input_err("rank is defined here for total Boolean function matrices");
    }
    let (nr, nc) = (instance.nrows(), instance.ncols());
    let mut m: Vec<Vec<Rat>> = (0..nr)
        .map(|x| {
            (0..nc)
                .map(|y| rat(i64::from(instance.value(x, y).unwrap())))
                .collect()
        })
        .collect();
    let mut rank = 0usize;
    for col in 0..nc {
        let Some(pivot) = (rank..nr).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let (upper, lower) = m.split_at_mut(rank + 1);
        let prow = &upper[rank];
        let inv = prow[col].clone();
        for row in lower.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = &row[col] / &inv;
            for (dst, src) in row[col..].iter_mut().zip(&prow[col..]) {
                *dst -= &factor * src;
            }
        }
        rank += 1;
        if rank == nr {
            break;
        }
    }
    Ok(rank)
}
