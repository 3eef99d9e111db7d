//! Small named functions used throughout the tests and the CLI.

use crate::error::{input_err, Result};
use crate::model::{CommInstance, QueryInstance};

use super::Instance;

/// Equality on a `k`-element domain: the `k x k` identity matrix with
/// output 1 on the diagonal and 0 elsewhere.
pub fn make_eq(k: usize) -> Result<CommInstance> {
    if k == 0 || k > 64 {
        return input_err("EQ domain size must be in 1..=64");
    }
    let values: Vec<Option<u16>> = (0..k * k)
        .map(|i| Some(u16::from(i / k == i % k)))
        .collect();
    CommInstance::from_values(k, k, 2, &values)
}

/// All-zero total function on an `nrows x ncols` grid, Boolean alphabet.
pub fn make_constant_comm(nrows: usize, ncols: usize) -> Result<CommInstance> {
    let values = vec![Some(0u16); nrows * ncols];
    CommInstance::from_values(nrows, ncols, 2, &values)
}

/// Two-party parity on `bits`-bit inputs: a `2^bits x 2^bits` grid with
/// output the parity of `x XOR y`.
pub fn make_xor_comm(bits: usize) -> Result<CommInstance> {
    if bits == 0 || bits > 3 {
        return input_err("two-party parity input width must be in 1..=3");
    }
    let side = 1usize << bits;
    let values: Vec<Option<u16>> = (0..side * side)
        .map(|i| {
            let (x, y) = (i / side, i % side);
            Some(((x ^ y).count_ones() % 2) as u16)
        })
        .collect();
    CommInstance::from_values(side, side, 2, &values)
}

/// OR of `n` bits.
pub fn make_or(n: usize) -> Result<QueryInstance> {
    truth_table(n, |x| x != 0)
}

/// XOR (parity) of `n` bits.
pub fn make_xor(n: usize) -> Result<QueryInstance> {
    truth_table(n, |x| x.count_ones() % 2 == 1)
}

/// AND of `n` bits.
pub fn make_and(n: usize) -> Result<QueryInstance> {
    truth_table(n, |x| x == (1u32 << n) - 1)
}

/// All-zero total query function on `n` bits.
pub fn make_constant_query(n: usize) -> Result<QueryInstance> {
    truth_table(n, |_| false)
}

fn truth_table(n: usize, f: impl Fn(u32) -> bool) -> Result<QueryInstance> {
    if n == 0 || n > 16 {
        return input_err("query function arity must be in 1..=16");
    }
    let truth: Vec<bool> = (0..1u32 << n).map(f).collect();
    QueryInstance::boolean(n, &truth)
}

/// Parses an instance name: `EQ_k`, `OR_n`, `XOR_n`, `AND_n`, `CONST_RxC`
/// (communication) or `CONSTQ_n` (query), case-insensitive. `TRIBES_n` and
/// `LNE_n` are also accepted and forward to their generators.
pub fn make_standard(name: &str) -> Result<Instance> {
    let upper = name.to_ascii_uppercase();
    let parse_num = |s: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| crate::Error::Input(format!("bad size in instance name {name:?}")))
    };
    if let Some((family, arg)) = upper.split_once('_') {
        return Ok(match family {
            "EQ" => Instance::Comm(make_eq(parse_num(arg)?)?),
            "OR" => Instance::Query(make_or(parse_num(arg)?)?),
            "XOR" => Instance::Query(make_xor(parse_num(arg)?)?),
            "AND" => Instance::Query(make_and(parse_num(arg)?)?),
            "CONSTQ" => Instance::Query(make_constant_query(parse_num(arg)?)?),
            "CONST" => {
                let (r, c) = arg.split_once('X').ok_or_else(|| {
                    crate::Error::Input(format!("expected CONST_RxC, got {name:?}"))
                })?;
                Instance::Comm(make_constant_comm(parse_num(r)?, parse_num(c)?)?)
            }
            "TRIBES" => Instance::Query(super::tribes::make_tribes(parse_num(arg)?)?),
            "LNE" => Instance::Comm(super::lne::make_lne(parse_num(arg)?)?),
            _ => return input_err(format!("unknown instance name {name:?}")),
        });
    }
    input_err(format!("unknown instance name {name:?}"))
}
