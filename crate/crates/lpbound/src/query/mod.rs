//! Query-side lower bounds as explicit linear programs over partial
//! assignments of the input variables.
//!
//! The programs mirror the communication side: weighted assignment families
//! with one or two constraint rows per input, solved exactly over the
//! rationals. [`compute_query_bound`] builds and solves a program;
//! [`check_query_witness`] verifies an explicit witness against it with zero
//! tolerance.

pub mod adversary;
pub mod degree;
pub mod dtree;
pub mod measures;
pub mod verifier;
pub mod witnesses;

use num_traits::{One, Zero};

use crate::bound::{BoundProgram, BoundReport, RowTag, WitnessCheck};
use crate::error::{input_err, Result};
use crate::lp::{LinearProgram, Rel, Sense, VarSign};
use crate::model::{
    enumerate_assignments, validate_epsilon, Assignment, BoundKind, QueryInstance, Region,
    RunConfig, Side, Witness,
};
use crate::rat::{pow2, rat, Rat};

/// Builds the LP for one query bound kind.
pub fn query_bound_program(
    instance: &QueryInstance,
    kind: BoundKind,
    epsilon: &Rat,
    config: &RunConfig,
) -> Result<BoundProgram> {
    gate(instance, kind, epsilon)?;
    match kind {
        BoundKind::QPrt | BoundKind::QPrtRelation => build_qprt(instance, kind, epsilon, config),
        BoundKind::QSrecRelaxed => build_qsrec_relaxed(instance, epsilon, config),
        _ => input_err(format!(
            "{} is a communication-side bound, not defined on query instances",
            kind.token()
        )),
    }
}

/// Builds, solves and packages one query bound.
pub fn compute_query_bound(
    instance: &QueryInstance,
    kind: BoundKind,
    epsilon: &Rat,
    config: &RunConfig,
) -> Result<BoundReport> {
    query_bound_program(instance, kind, epsilon, config)?.report(&config.caps)
}

/// Checks an explicit witness against the program its kind token and error
/// parameter name. Returns the exact objective and any violations.
pub fn check_query_witness(
    instance: &QueryInstance,
    witness: &Witness,
    config: &RunConfig,
) -> Result<WitnessCheck> {
    let kind = BoundKind::from_token(&witness.kind)?;
    let program = query_bound_program(instance, kind, &witness.epsilon, config)?;
    program.check_witness(witness)
}

fn gate(instance: &QueryInstance, kind: BoundKind, epsilon: &Rat) -> Result<()> {
    if !kind.is_query() {
        return input_err(format!(
            "{} is a communication-side bound, not defined on query instances",
            kind.token()
        ));
    }
    validate_epsilon(epsilon)?;
    let wants_relation = matches!(kind, BoundKind::QPrtRelation);
    if wants_relation != instance.is_relation() {
        return input_err(if wants_relation {
            format!("{} needs a relation instance", kind.token())
        } else {
            format!("{} needs a function instance", kind.token())
        });
    }
    if matches!(kind, BoundKind::QSrecRelaxed) && instance.m() != 1 {
        return input_err(format!(
            "qsrec_relaxed needs Boolean outputs, the output has {} bits",
            instance.m()
        ));
    }
    Ok(())
}

/// A feasible partition primal truncated to its cheap assignments: those
/// whose cost `2^|A|` stays within the witness objective over the error.
/// The tail mass outside the cut is below the error parameter, which is
/// what the verifier, adversary and polynomial constructions feed on.
pub(crate) struct TruncatedFamily {
    /// Full witness objective, the partition value it certifies.
    pub alpha: Rat,
    /// Surviving `(output, assignment, weight)` triples, positive weights.
    pub members: Vec<(u16, Assignment, Rat)>,
    /// Largest assignment size in the surviving family.
    pub budget: u32,
}

pub(crate) fn truncated_primal_family(
    instance: &QueryInstance,
    witness: &Witness,
    config: &RunConfig,
) -> Result<TruncatedFamily> {
    if instance.is_relation() {
        return input_err("primal-derived constructions compare outputs, so they need a function");
    }
    if BoundKind::from_token(&witness.kind)? != BoundKind::QPrt {
        return input_err(format!(
            "primal-derived constructions start from a qprt witness, not {}",
            witness.kind
        ));
    }
    if witness.side != Side::Primal {
        return input_err("primal-derived constructions start from a primal witness");
    }
    let check = check_query_witness(instance, witness, config)?;
    if !check.feasible() {
        return input_err(format!(
            "primal-derived constructions need a feasible witness; got {}",
            check.report.describe()
        ));
    }
    let alpha = check.objective().clone();
    let mut members = Vec::new();
    let mut budget = 0u32;
    for ((z, region), w) in &witness.regions {
        if w.is_zero() {
            continue;
        }
        let Region::Assign(a) = region else {
            return input_err("a query witness weighs assignments, not rectangles");
        };
        if &witness.epsilon * pow2(i64::from(a.size())) <= alpha {
            budget = budget.max(a.size());
            members.push((*z, *a, w.clone()));
        }
    }
    Ok(TruncatedFamily {
        alpha,
        members,
        budget,
    })
}

/// Output labels the variable families range over, falling back to the full
/// alphabet when the image is empty.
fn output_labels(instance: &QueryInstance, config: &RunConfig) -> Vec<u16> {
    let labels = instance.labels(config.restrict_z_image);
    if labels.is_empty() {
        instance.labels(false)
    } else {
        labels
    }
}

fn assignments(instance: &QueryInstance, config: &RunConfig) -> Result<Vec<Assignment>> {
    enumerate_assignments(instance.n(), config.caps.max_regions)
}

/// Assignment indices consistent with each input, by input value.
fn cover(asg: &[Assignment], n: usize) -> Vec<Vec<usize>> {
    let mut cover = vec![Vec::new(); 1usize << n];
    for (ai, a) in asg.iter().enumerate() {
        for x in a.consistent_inputs(n) {
            cover[x as usize].push(ai);
        }
    }
    cover
}

/// The query partition bound: assignment weights per output, cost `2^|A|`
/// per unit of weight, every defined input's allowed mass at least
/// `1 - eps`, every input's total mass exactly 1.
fn build_qprt(
    instance: &QueryInstance,
    kind: BoundKind,
    epsilon: &Rat,
    config: &RunConfig,
) -> Result<BoundProgram> {
    let asg = assignments(instance, config)?;
    let n = instance.n();
    let labels = output_labels(instance, config);
    let mut lp = LinearProgram::new(format!("{}[n={n}]", kind.token()), Sense::Min);
    let mut vars: Vec<(u16, Region)> = Vec::new();
    // Variable index per (label position, assignment index); z-major.
    for &z in &labels {
        for a in &asg {
            lp.add_var(
                format!("w[{z}][{}]", a.label()),
                VarSign::Nonneg,
                pow2(i64::from(a.size())),
            )?;
            vars.push((z, Region::Assign(*a)));
        }
    }

    let cover = cover(&asg, n);
    let mut rows = Vec::new();
    let correct = Rat::one() - epsilon;
    for x in instance.defined_inputs() {
        let mut coeffs = Vec::new();
        for (zi, &z) in labels.iter().enumerate() {
            if !instance.allows(x, z) {
                continue;
            }
            for &ai in &cover[x as usize] {
                coeffs.push((zi * asg.len() + ai, rat(1)));
            }
        }
        lp.add_constraint(format!("mu[{x}]"), coeffs, Rel::Ge, correct.clone())?;
        rows.push(RowTag::Mu(x as usize, Rel::Ge));
    }
    for (x, covering) in cover.iter().enumerate() {
        let mut coeffs = Vec::new();
        for zi in 0..labels.len() {
            for &ai in covering {
                coeffs.push((zi * asg.len() + ai, rat(1)));
            }
        }
        lp.add_constraint(format!("phi[{x}]"), coeffs, Rel::Eq, rat(1))?;
        rows.push(RowTag::Phi(x, Rel::Eq));
    }
    Ok(BoundProgram::assemble(
        kind,
        epsilon.clone(),
        lp,
        vars,
        rows,
        false,
    ))
}

/// One-output relaxation of the smooth program: a single assignment family
/// whose mass on every 1-input lies in `[1 - eps, 1]` and on every 0-input
/// is at most `eps`. Dropping the other output's family can only shrink the
/// optimum, so this still lower-bounds randomized query complexity through
/// the partition program.
fn build_qsrec_relaxed(
    instance: &QueryInstance,
    epsilon: &Rat,
    config: &RunConfig,
) -> Result<BoundProgram> {
    let asg = assignments(instance, config)?;
    let n = instance.n();
    let mut lp = LinearProgram::new(format!("qsrec_relaxed[n={n}]"), Sense::Min);
    let mut vars: Vec<(u16, Region)> = Vec::new();
    for a in &asg {
        lp.add_var(
            format!("w[{}]", a.label()),
            VarSign::Nonneg,
            pow2(i64::from(a.size())),
        )?;
        vars.push((0u16, Region::Assign(*a)));
    }

    let cover = cover(&asg, n);
    let mut rows = Vec::new();
    let correct = Rat::one() - epsilon;
    for x in instance.defined_inputs() {
        let coeffs: Vec<(usize, Rat)> = cover[x as usize].iter().map(|&ai| (ai, rat(1))).collect();
        if instance.value(x) == Some(1) {
            lp.add_constraint(format!("mu[{x}]"), coeffs.clone(), Rel::Ge, correct.clone())?;
            rows.push(RowTag::Mu(x as usize, Rel::Ge));
            lp.add_constraint(format!("phi[{x}]"), coeffs, Rel::Le, rat(1))?;
            rows.push(RowTag::Phi(x as usize, Rel::Le));
        } else {
            lp.add_constraint(format!("mu[{x}]"), coeffs, Rel::Le, epsilon.clone())?;
            rows.push(RowTag::Mu(x as usize, Rel::Le));
        }
    }
    Ok(BoundProgram::assemble(
        BoundKind::QSrecRelaxed,
        epsilon.clone(),
        lp,
        vars,
        rows,
        false,
    ))
}
