//! Hand-built dual witnesses for the query partition program.

use num_traits::{One, ToPrimitive, Zero};

use crate::error::{check_err, input_err, Result};
use crate::model::{
    enumerate_assignments, validate_epsilon, BoundKind, Caps, QueryInstance, Side, Witness,
};
use crate::query::measures::block_sensitivity_witness;
use crate::rat::{floor_int, fmt_rat, pow2, rat, Rat};

/// A partition dual witness derived from a block-sensitivity certificate.
#[derive(Debug, Clone)]
pub struct BsDualWitness {
    /// Dual witness for the partition program at a quarter of the
    /// construction error.
    pub witness: Witness,
    /// Input whose sensitive blocks carry the witness.
    pub input: u32,
    /// Disjoint sensitive blocks, as bit masks.
    pub blocks: Vec<u32>,
    /// Exact dual objective the witness certifies.
    pub objective: Rat,
}

/// Builds a dual witness for `qprt` at error `eps / 4` from a maximum
/// family of disjoint sensitive blocks.
///
/// With `b` blocks and `t` the integer part of `eps * b`, the witness puts
/// mass `2^(t-1)` on the chosen input, `2^(t-1) / b` on each flipped input,
/// and certifies an objective of `eps * 2^(t-2)` (for `b >= 1`).
pub fn bs_dual_witness(instance: &QueryInstance, eps: &Rat, caps: &Caps) -> Result<BsDualWitness> {
    if instance.is_relation() {
        return input_err("the block-sensitivity witness is defined for functions");
    }
    if *eps < Rat::zero() || *eps >= rat(1) / rat(2) {
        return input_err(format!(
            "the construction needs 0 <= eps < 1/2, got {}",
            fmt_rat(eps)
        ));
    }
    let Some((input, blocks)) = block_sensitivity_witness(instance)? else {
        return input_err("the witness needs at least one defined input");
    };
    let b = blocks.len() as i64;
    let t = floor_int(&(eps * rat(b)))
        .to_i64()
        .expect("eps * b fits well inside i64");
    let scale = pow2(t - 1);

    let mut witness = Witness::dual(BoundKind::QPrt.token(), eps / rat(4));
    witness.mu.insert(input as usize, scale.clone());
    witness
        .phi
        .insert(input as usize, -(Rat::one() - eps) * &scale);
    for &block in &blocks {
        let flipped = (input ^ block) as usize;
        let share = &scale / rat(b);
        witness.mu.insert(flipped, share.clone());
        witness.phi.insert(flipped, -share);
    }

    let objective = check_qprt_dual_exhaustive(instance, &witness, caps)?;
    if b >= 1 && objective != eps * pow2(t - 2) {
        return check_err(format!(
            "block witness objective {} disagrees with its closed form {}",
            fmt_rat(&objective),
            fmt_rat(&(eps * pow2(t - 2)))
        ));
    }
    Ok(BsDualWitness {
        witness,
        input,
        blocks,
        objective,
    })
}

/// Exhaustively verifies a partition dual witness against every
/// (output, assignment) constraint without materializing the LP, and
/// returns the exact dual objective. This is the independent route for
/// witnesses whose LP is too large to enjoy building.
pub fn check_qprt_dual_exhaustive(
    instance: &QueryInstance,
    witness: &Witness,
    caps: &Caps,
) -> Result<Rat> {
    let kind = BoundKind::from_token(&witness.kind)?;
    if !matches!(kind, BoundKind::QPrt | BoundKind::QPrtRelation) {
        return input_err(format!(
            "exhaustive checking covers the partition duals, not {}",
            kind.token()
        ));
    }
    if witness.side != Side::Dual {
        return input_err("the exhaustive check takes a dual witness");
    }
    let wants_relation = matches!(kind, BoundKind::QPrtRelation);
    if wants_relation != instance.is_relation() {
        return input_err("witness kind and instance flavor disagree");
    }
    validate_epsilon(&witness.epsilon)?;
    let count = instance.input_count();
    for (&x, v) in &witness.mu {
        if x >= count || !instance.defined(x as u32) {
            return input_err(format!(
                "mu touches input {x}, which has no covered-mass row"
            ));
        }
        if *v < Rat::zero() {
            return input_err(format!(
                "mu[{x}] is negative; that row's multiplier is signed"
            ));
        }
    }
    if let Some((&x, _)) = witness.phi.range(count..).next() {
        return input_err(format!("phi touches input {x}, outside the cube"));
    }

    let asg = enumerate_assignments(instance.n(), caps.max_regions)?;
    let labels = instance.labels(false);
    for a in &asg {
        let phi_sum: Rat = witness
            .phi
            .iter()
            .filter(|(&x, _)| a.consistent(x as u32))
            .map(|(_, v)| v.clone())
            .sum();
        let budget = pow2(i64::from(a.size()));
        for &z in &labels {
            let mu_sum: Rat = witness
                .mu
                .iter()
                .filter(|(&x, _)| a.consistent(x as u32) && instance.allows(x as u32, z))
                .map(|(_, v)| v.clone())
                .sum();
            let lhs = mu_sum + &phi_sum;
            if lhs > budget {
                return check_err(format!(
                    "dual constraint for output {z}, assignment {} is violated: {} > {}",
                    a.label(),
                    fmt_rat(&lhs),
                    fmt_rat(&budget)
                ));
            }
        }
    }

    let correct = Rat::one() - &witness.epsilon;
    let mut objective: Rat = witness.mu.values().map(|v| &correct * v).sum();
    objective += witness.phi.values().sum::<Rat>();
    Ok(objective)
}
