//! The tribes function (an AND of ORs over disjoint blocks) and its explicit
//! dual witness for the relaxed assignment LP, verified exhaustively against
//! every partial assignment without building the LP.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{Signed, Zero};

use crate::error::{check_err, input_err, Result};
use crate::model::{enumerate_assignments, Caps, QueryInstance};
use crate::rat::{floor_int, fmt_rat, pow2, rat, ratio, Rat};

/// Tribes on `n` variables, `n` a perfect square: `sqrt(n)` blocks of
/// `sqrt(n)` consecutive variables each; the value is the AND over blocks of
/// the OR within each block. Block `i` covers bits `(i-1)*sqrt(n)` through
/// `i*sqrt(n) - 1`.
pub fn make_tribes(n: usize) -> Result<QueryInstance> {
    let w = int_sqrt(n)?;
    if n > 16 {
        return input_err("tribes instances support at most 16 variables");
    }
    let block = (1u32 << w) - 1;
    let truth: Vec<bool> = (0..1u32 << n)
        .map(|x| (0..w).all(|i| x >> (i * w) & block != 0))
        .collect();
    QueryInstance::boolean(n, &truth)
}

fn int_sqrt(n: usize) -> Result<usize> {
    for w in 2..=4usize {
        if w * w == n {
            return Ok(w);
        }
    }
    input_err(format!(
        "tribes arity must be a perfect square in {{4, 9, 16}}, got {n}"
    ))
}

/// The explicit dual witness for the relaxed assignment LP of tribes.
///
/// The witness puts positive mass on inputs with exactly one 1 per block
/// (`one_per_block`), positive mass on inputs with one all-zero block and one
/// 1 in every other block (`one_empty_block`), and negative second-family
/// mass on inputs with a doubled block (`doubled_block`). All values carry a
/// common power-of-two scale chosen so they are rational: the scale exponent
/// is the floor of `(1/4 - 4*eps) * n`.
#[derive(Debug, Clone)]
pub struct TribesDualWitness {
    pub n: usize,
    pub epsilon: Rat,
    /// Floor of `(1/4 - 4*eps) * n`; the witness is the textbook one scaled
    /// by `2^scale_log2` in place of the (generally irrational) `2^((1/4-4eps)n)`.
    pub scale_log2: i64,
    pub mu: BTreeMap<u32, Rat>,
    pub phi: BTreeMap<u32, Rat>,
    /// Exact objective `(1-eps)*sum(mu on f=1) - eps*sum(mu on f=0) + sum(phi)`.
    pub objective: Rat,
    /// Closed form of the objective: `2^scale_log2 * (1/12 - eps)`.
    pub objective_formula: String,
}

/// Builds the tribes dual witness. Requires `0 < eps < 1/16` so the scale
/// exponent is positive and the objective is positive.
pub fn tribes_dual_witness(n: usize, eps: &Rat) -> Result<TribesDualWitness> {
    let w = int_sqrt(n)?;
    if !eps.is_positive() || *eps >= ratio(1, 16) {
        return input_err(format!(
            "tribes witness requires 0 < eps < 1/16, got {}",
            fmt_rat(eps)
        ));
    }
    let exponent = (ratio(1, 4) - rat(4) * eps) * rat(n as i64);
    let scale_log2 = i64::try_from(floor_int(&exponent))
        .map_err(|_| crate::Error::Input("witness scale exponent out of range".into()))?;
    let scale = pow2(scale_log2);

    // sqrt(n)^sqrt(n), the size of the one-per-block family.
    let family = rat((w as i64).pow(w as u32));
    let mu_one = scale.clone() / &family;
    let mu_empty = scale.clone() / (rat(4) * eps * &family);
    let phi_doubled = -rat(4) * &scale / (rat(3) * rat((n - w) as i64) * &family);

    let mut mu = BTreeMap::new();
    let mut phi = BTreeMap::new();
    for x in one_per_block(w) {
        mu.insert(x, mu_one.clone());
    }
    for empty in 0..w {
        for rest in one_per_block_except(w, empty) {
            mu.insert(rest, mu_empty.clone());
        }
    }
    for x in doubled_block(w) {
        phi.insert(x, phi_doubled.clone());
    }

    let instance = make_tribes(n)?;
    let mut objective = Rat::zero();
    for (&x, v) in &mu {
        match instance.value(x) {
            Some(1) => objective += (rat(1) - eps) * v,
            Some(0) => objective -= eps * v,
            _ => unreachable!("tribes is total Boolean"),
        }
    }
    for v in phi.values() {
        objective += v;
    }
    let closed_form = &scale * (ratio(1, 12) - eps);
    assert_eq!(
        objective, closed_form,
        "witness objective drifted from its closed form"
    );

    Ok(TribesDualWitness {
        n,
        epsilon: eps.clone(),
        scale_log2,
        mu,
        phi,
        objective,
        objective_formula: format!("2^{scale_log2} * (1/12 - {})", fmt_rat(eps)),
    })
}

/// Inputs with exactly one 1 per block.
fn one_per_block(w: usize) -> Vec<u32> {
    let mut out = vec![0u32];
    for block in 0..w {
        let mut next = Vec::with_capacity(out.len() * w);
        for x in &out {
            for pos in 0..w {
                next.push(x | 1 << (block * w + pos));
            }
        }
        out = next;
    }
    out
}

/// Inputs with block `empty` all zero and exactly one 1 in every other block.
fn one_per_block_except(w: usize, empty: usize) -> Vec<u32> {
    let mut out = vec![0u32];
    for block in (0..w).filter(|&b| b != empty) {
        let mut next = Vec::with_capacity(out.len() * w);
        for x in &out {
            for pos in 0..w {
                next.push(x | 1 << (block * w + pos));
            }
        }
        out = next;
    }
    out
}

/// Inputs with exactly two 1s in one block and exactly one in each other.
fn doubled_block(w: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for block in 0..w {
        for hi in 0..w {
            for lo in 0..hi {
                let pair = (1u32 << (block * w + hi)) | 1 << (block * w + lo);
                for rest in one_per_block_except(w, block) {
                    out.push(pair | rest);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct TribesCheckReport {
    pub assignments_checked: usize,
    pub elapsed_secs: f64,
}

/// Checks the witness against every constraint of the relaxed dual: for all
/// `3^n` assignments `A`,
/// `sum(mu on f=1 in A) - sum(mu on f=0 in A) + sum(phi on A) <= 2^|A|`,
/// together with the sign conditions `mu >= 0`, `phi <= 0`. Exact; the first
/// violated assignment is reported on failure.
pub fn verify_tribes_dual(
    instance: &QueryInstance,
    witness: &TribesDualWitness,
    caps: &Caps,
) -> Result<TribesCheckReport> {
    let start = Instant::now();
    for (x, v) in &witness.mu {
        if v.is_negative() {
            return check_err(format!("mu[{x}] is negative"));
        }
    }
    for (x, v) in &witness.phi {
        if v.is_positive() {
            return check_err(format!("phi[{x}] is positive"));
        }
    }
    // Support points with their signed first-family contribution.
    let mut signed: Vec<(u32, Rat)> = Vec::new();
    for (&x, v) in &witness.mu {
        match instance.value(x) {
            Some(1) => signed.push((x, v.clone())),
            Some(0) => signed.push((x, -v.clone())),
            _ => return check_err(format!("mu[{x}] sits on an undefined input")),
        }
    }
    for (&x, v) in &witness.phi {
        signed.push((x, v.clone()));
    }

    let assignments = enumerate_assignments(instance.n(), caps.max_regions)?;
    for a in &assignments {
        let mut lhs = Rat::zero();
        for (x, contrib) in &signed {
            if a.consistent(*x) {
                lhs += contrib;
            }
        }
        let rhs = pow2(i64::from(a.size()));
        if lhs > rhs {
            return check_err(format!(
                "assignment {} violates the relaxed dual: lhs {} > 2^{}",
                a.label(),
                fmt_rat(&lhs),
                a.size()
            ));
        }
    }
    Ok(TribesCheckReport {
        assignments_checked: assignments.len(),
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}
