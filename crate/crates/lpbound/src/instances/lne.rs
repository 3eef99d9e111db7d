//! List-non-equality and its explicit zero-error primal witness.
//!
//! Both players hold an `n`-tuple of `n`-bit strings; the output is 1
//! exactly when the tuples differ in every coordinate. The witness expresses
//! the all-ones/partition constraints through two parametric families of
//! weighted rectangles (parity cuts for the 1-side, first-agreeing-block
//! rectangles for the 0-side) and is checked cell by cell without ever
//! enumerating the doubly exponential rectangle space.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use num_traits::{One, Zero};

use crate::error::{check_err, input_err, Result};
use crate::model::CommInstance;
use crate::rat::{fmt_rat, pow2, Rat};

/// List-non-equality on `n` blocks of `n` bits: a `2^(n*n) x 2^(n*n)`
/// total Boolean matrix. Row index bit `(i-1)*n + (j-1)` is bit `j` of the
/// first player's `i`-th string. Supported for `n` in `{2, 3}`.
pub fn make_lne(n: usize) -> Result<CommInstance> {
    check_arity(n)?;
    let size = 1usize << (n * n);
    let values: Vec<Option<u16>> = (0..size * size)
        .map(|idx| {
            let (x, y) = ((idx / size) as u32, (idx % size) as u32);
            Some(u16::from(lne_value(n, x, y)))
        })
        .collect();
    CommInstance::from_values(size, size, 2, &values)
}

fn check_arity(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        input_err(format!("list-non-equality supports n in {{2, 3}}, got {n}"))
    }
}

pub fn lne_value(n: usize, x: u32, y: u32) -> bool {
    (0..n).all(|i| block(n, x, i) != block(n, y, i))
}

fn block(n: usize, x: u32, i: usize) -> u32 {
    x >> (i * n) & ((1 << n) - 1)
}

fn parity(v: u32) -> u32 {
    v.count_ones() & 1
}

/// A 1-side rectangle: rows are inputs whose every block `i` has inner
/// product `s_i` with `z_i` (mod 2), columns the inputs where every inner
/// product differs from `s_i`. Any pair it contains differs in all blocks.
#[derive(Debug, Clone)]
pub struct OneCombo {
    pub z: Vec<u32>,
    /// Bit `i` is the target parity for block `i`.
    pub s: u32,
}

impl OneCombo {
    pub fn contains(&self, n: usize, x: u32, y: u32) -> bool {
        (0..n).all(|i| {
            let s = self.s >> i & 1;
            parity(block(n, x, i) & self.z[i]) == s && parity(block(n, y, i) & self.z[i]) != s
        })
    }
}

/// A 0-side rectangle: parity cuts on the first `k` blocks plus the
/// requirement that block `k` equals `u` on both sides. Any pair it contains
/// agrees on block `k`.
#[derive(Debug, Clone)]
pub struct ZeroCombo {
    pub k: usize,
    pub z: Vec<u32>,
    pub s: u32,
    pub u: u32,
}

impl ZeroCombo {
    pub fn contains(&self, n: usize, x: u32, y: u32) -> bool {
        let cuts = (0..self.k).all(|i| {
            let s = self.s >> i & 1;
            parity(block(n, x, i) & self.z[i]) == s && parity(block(n, y, i) & self.z[i]) != s
        });
        cuts && block(n, x, self.k) == self.u && block(n, y, self.k) == self.u
    }
}

/// The explicit primal witness: every 1-side index combination with weight
/// `2^n / 2^(n*n)` and every 0-side combination at depth `k` with weight
/// `2^k / 2^(n*k)`. Totals are exact.
#[derive(Debug, Clone)]
pub struct LneWitness {
    pub n: usize,
    pub one_side: Vec<OneCombo>,
    pub zero_side: Vec<ZeroCombo>,
    pub one_weight: Rat,
    pub one_total: Rat,
    pub zero_total: Rat,
    pub grand_total: Rat,
}

pub fn lne_primal_witness(n: usize) -> Result<LneWitness> {
    check_arity(n)?;
    let blocks = 1u32 << n;
    let mut one_side = Vec::new();
    let mut zvec = vec![0u32; n];
    enumerate_z(&mut zvec, 0, blocks, &mut |z| {
        for s in 0..1u32 << n {
            one_side.push(OneCombo { z: z.to_vec(), s });
        }
    });
    let one_weight = pow2(n as i64 - (n * n) as i64);
    let one_total = &one_weight * Rat::from_integer(one_side.len().into());

    let mut zero_side = Vec::new();
    let mut zero_total = Rat::zero();
    for k in 0..n {
        let weight = pow2(k as i64 - (n * k) as i64);
        let mut prefix = vec![0u32; k];
        enumerate_z(&mut prefix, 0, blocks, &mut |z| {
            for s in 0..1u32 << k {
                for u in 0..blocks {
                    zero_side.push(ZeroCombo {
                        k,
                        z: z.to_vec(),
                        s,
                        u,
                    });
                }
            }
        });
        let count = (1u64 << (n * k)) * (1 << k) * u64::from(blocks);
        zero_total += weight * Rat::from_integer(count.into());
    }
    let grand_total = &one_total + &zero_total;

    // The 0-side geometric sum keeps the whole witness within 2 * 2^(3n).
    let bound = Rat::from_integer(2.into()) * pow2(3 * n as i64);
    if grand_total > bound {
        return check_err(format!(
            "witness weight {} exceeds 2*2^(3n) = {}",
            fmt_rat(&grand_total),
            fmt_rat(&bound)
        ));
    }
    Ok(LneWitness {
        n,
        one_side,
        zero_side,
        one_weight,
        one_total,
        zero_total,
        grand_total,
    })
}

fn enumerate_z(buf: &mut [u32], at: usize, radix: u32, f: &mut impl FnMut(&[u32])) {
    if at == buf.len() {
        f(buf);
        return;
    }
    for v in 0..radix {
        buf[at] = v;
        enumerate_z(buf, at + 1, radix, f);
    }
}

/// Which cells the per-cell constraint check ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LneCheckMode {
    /// Every cell of the grid (the default).
    FullGrid,
    /// Only cells where every block of both inputs is nonzero.
    RestrictedGrid,
}

#[derive(Debug, Clone)]
pub struct LneCheckReport {
    pub mode: LneCheckMode,
    pub cells_checked: usize,
    pub sampled: bool,
    /// Constraint failures on cells outside the restricted set while
    /// checking the full grid. Reported, never fatal.
    pub findings: Vec<String>,
}

/// Verifies both per-cell LP constraints of the zero-error partition primal:
/// the cell's own output family sums to at least 1, and all families
/// together sum to exactly 1. A violation on the restricted set (all blocks
/// nonzero) is an error; in full-grid mode a violation elsewhere is recorded
/// as a finding. `sample` draws that many distinct cells from the given seed
/// instead of checking exhaustively, for the larger instance.
pub fn verify_lne_primal(
    witness: &LneWitness,
    mode: LneCheckMode,
    sample: Option<(u64, usize)>,
) -> Result<LneCheckReport> {
    let n = witness.n;
    let size = 1u32 << (n * n);
    let total_cells = (size as u64) * (size as u64);

    let cells: Vec<(u32, u32)> = match sample {
        None => (0..total_cells)
            .map(|idx| {
                (
                    (idx / u64::from(size)) as u32,
                    (idx % u64::from(size)) as u32,
                )
            })
            .collect(),
        Some((seed, count)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let amount = count.min(total_cells as usize);
            rand::seq::index::sample(&mut rng, total_cells as usize, amount)
                .into_iter()
                .map(|idx| {
                    let idx = idx as u64;
                    (
                        (idx / u64::from(size)) as u32,
                        (idx % u64::from(size)) as u32,
                    )
                })
                .collect()
        }
    };

    let restricted =
        |x: u32, y: u32| (0..n).all(|i| block(n, x, i) != 0) && (0..n).all(|i| block(n, y, i) != 0);

    let mut findings = Vec::new();
    let mut checked = 0usize;
    for &(x, y) in &cells {
        let on_restricted = restricted(x, y);
        if mode == LneCheckMode::RestrictedGrid && !on_restricted {
            continue;
        }
        checked += 1;
        let mut one_sum = Rat::zero();
        for combo in &witness.one_side {
            if combo.contains(n, x, y) {
                one_sum += &witness.one_weight;
            }
        }
        let mut zero_sum = Rat::zero();
        for combo in &witness.zero_side {
            if combo.contains(n, x, y) {
                zero_sum += pow2(combo.k as i64 - (n * combo.k) as i64);
            }
        }
        let value = lne_value(n, x, y);
        let own = if value { &one_sum } else { &zero_sum };
        let total = &one_sum + &zero_sum;
        let coverage_ok = *own >= Rat::one();
        let partition_ok = total.is_one();
        if coverage_ok && partition_ok {
            continue;
        }
        let msg = format!(
            "cell ({x},{y}): own-output mass {}, total mass {}",
            fmt_rat(own),
            fmt_rat(&total)
        );
        if on_restricted {
            return check_err(format!("witness constraint violated on {msg}"));
        }
        findings.push(msg);
    }
    Ok(LneCheckReport {
        mode,
        cells_checked: checked,
        sampled: sample.is_some(),
        findings,
    })
}
