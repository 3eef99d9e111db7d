//! Exact translations between LP duals and distribution-side certificates.
//!
//! Each direction checks its hypotheses (rejecting bad input with an input
//! error), constructs the image object, and then verifies every claimed
//! inequality exactly, failing with a check error if one does not hold.
//! Nothing here is approximate: the translated witnesses are fed back
//! through the LP checkers and the distribution measures are recomputed
//! from scratch.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::comm::conventional::{disc_lambda, tilde_rec, DiscLambda, TildeRec};
use crate::comm::{check_comm_witness, compute_comm_bound};
use crate::error::{check_err, input_err, Result};
use crate::model::{BoundKind, CommInstance, Distribution, RunConfig, Side, Witness};
use crate::rat::{fmt_rat, rat, ratio, Rat};

/// A rectangle-bound dual rewritten as a hard distribution.
#[derive(Debug, Clone)]
pub struct RecToDistribution {
    /// The input distribution extracted from the dual values.
    pub lambda: Distribution,
    /// Objective of the dual witness; the distribution certifies at least
    /// this value at half the error.
    pub k: Rat,
    /// Mass the distribution puts on the cells valued `z` (one half, or one
    /// when the dual carries no off-cell mass).
    pub z_mass: Rat,
    /// The recomputed distribution measure at half the error.
    pub tilde: TildeRec,
    /// True when no rectangle qualifies at half the error, so the claimed
    /// inequality holds vacuously.
    pub vacuous: bool,
}

/// A hard distribution rewritten as a rectangle-bound dual.
#[derive(Debug, Clone)]
pub struct DistributionToRec {
    pub witness: Witness,
    /// Objective of the constructed dual, checked feasible.
    pub objective: Rat,
    /// The distribution measure at twice the error, the scale of the dual.
    pub k: Rat,
    /// The headline value `(k/2) (1/2 - eps)`.
    pub printed_bound: Rat,
    /// Whether the constructed dual actually reaches the headline value;
    /// equivalent to the distribution putting mass at least one half on the
    /// cells valued `z`.
    pub printed_bound_holds: bool,
}

/// A smooth-rectangle dual rewritten as a hard distribution for a nearby
/// function.
#[derive(Debug, Clone)]
pub struct SrecToDistribution {
    /// The nearby function: the input with some `z`-cells overwritten.
    pub g: CommInstance,
    /// Cell indices where `g` disagrees with the input function.
    pub flips: Vec<usize>,
    pub lambda: Distribution,
    /// Value certified by the induced rectangle-bound dual on `g`; at least
    /// the smooth-rectangle dual's own objective.
    pub k: Rat,
    /// Mass on the cells `g` values `z`.
    pub z_mass: Rat,
    /// The recomputed distribution measure of `g` at half the error.
    pub tilde: TildeRec,
    pub vacuous: bool,
    /// Mass on the flipped cells.
    pub error_mass: Rat,
    /// Whether the flipped mass stays within `(1 - eps) / 2`.
    pub error_mass_small: bool,
}

/// A hard distribution for a nearby function rewritten as a
/// smooth-rectangle dual for the function itself.
#[derive(Debug, Clone)]
pub struct DistributionToSrec {
    pub witness: Witness,
    /// Objective of the constructed dual, checked feasible.
    pub objective: Rat,
    /// The distribution measure of the nearby function at twice the error.
    pub k: Rat,
    /// The smooth-rectangle optimum, solved independently; the objective
    /// never exceeds it.
    pub srec_value: Rat,
    /// The headline value `(k/2) (1/4 - eps)`.
    pub printed_bound: Rat,
    pub printed_bound_holds: bool,
    /// Mass on the cells where the two functions disagree.
    pub error_mass: Rat,
    /// Whether the disagreement mass stays within `eps / 4`, the regime the
    /// headline value is stated for.
    pub canonical: bool,
}

/// A smooth-discrepancy dual rewritten as a hard distribution for a nearby
/// function.
#[derive(Debug, Clone)]
pub struct SdiscToDistribution {
    pub g: CommInstance,
    pub flips: Vec<usize>,
    pub lambda: Distribution,
    /// Objective of the reduced dual; never larger than the total mass.
    pub k: Rat,
    /// Total dual mass before normalizing, the value the discrepancy
    /// measure certifies.
    pub total_mass: Rat,
    /// The recomputed discrepancy measure of `g` under the distribution.
    pub disc: Rat,
    /// Mass on the flipped cells; never exceeds `1/2 - eps/8`.
    pub error_mass: Rat,
}

/// A low-discrepancy distribution for a nearby function rewritten as a
/// smooth-discrepancy dual for the function itself.
#[derive(Debug, Clone)]
pub struct DistributionToSdisc {
    pub witness: Witness,
    /// Objective of the constructed dual; at least `k / 2`.
    pub objective: Rat,
    /// The discrepancy measure of the nearby function.
    pub k: Rat,
    /// Mass on the cells where the two functions disagree.
    pub error_mass: Rat,
    /// Largest admissible disagreement mass, `1 / (4 + 2 eps)`.
    pub threshold: Rat,
}

/// A low-discrepancy distribution rewritten directly as a rectangle-bound
/// dual for the same function.
#[derive(Debug, Clone)]
pub struct DiscToRec {
    pub witness: Witness,
    /// Objective of the constructed dual, checked feasible.
    pub objective: Rat,
    /// The discrepancy measure of the function under the distribution.
    pub k: Rat,
    /// The guaranteed value `(1/2 - eps) k - 1/2`, which the objective
    /// never falls below.
    pub guaranteed: Rat,
}

fn support_in_grid(f: &CommInstance, lambda: &Distribution) -> Result<()> {
    let cells = f.nrows() * f.ncols();
    for (index, _) in lambda.entries() {
        if index >= cells {
            return input_err(format!(
                "distribution index {index} is outside the {cells}-cell grid"
            ));
        }
    }
    Ok(())
}

fn support_on_defined(f: &CommInstance, lambda: &Distribution) -> Result<()> {
    support_in_grid(f, lambda)?;
    for (index, _) in lambda.entries() {
        let (x, y) = f.cell_at(index);
        if !f.defined(x, y) {
            return input_err(format!(
                "distribution puts mass on the undefined cell ({x}, {y}); \
                 the construction needs its support inside the defined cells"
            ));
        }
    }
    Ok(())
}

fn same_shape(f: &CommInstance, g: &CommInstance) -> Result<()> {
    if f.nrows() != g.nrows() || f.ncols() != g.ncols() || f.alphabet() != g.alphabet() {
        return input_err("the two functions must share grid dimensions and alphabet");
    }
    Ok(())
}

fn rewrite_cells(f: &CommInstance, patch: &BTreeMap<usize, u16>) -> Result<CommInstance> {
    let mut values: Vec<Option<u16>> = f.all_cells().map(|(x, y)| f.value(x, y)).collect();
    for (&c, &z) in patch {
        values[c] = Some(z);
    }
    CommInstance::from_values(f.nrows(), f.ncols(), f.alphabet(), &values)
}

fn require_feasible_hypothesis(
    f: &CommInstance,
    witness: &Witness,
    config: &RunConfig,
) -> Result<Rat> {
    if witness.side != Side::Dual {
        return input_err("the hypothesis needs a dual witness");
    }
    let check = check_comm_witness(f, witness, config)?;
    if !check.feasible() {
        return input_err(format!(
            "the hypothesis needs a feasible dual witness: {}",
            check.report.describe()
        ));
    }
    Ok(check.objective().clone())
}

/// Rewrites a feasible rectangle-bound dual as a distribution that drives
/// the distribution measure at half the error to at least the dual's
/// objective.
///
/// The dual mass is split half-and-half between the cells valued `z` and
/// the remaining defined cells (all of it on the `z` side when the dual
/// carries no off-cell mass), and the resulting measure is recomputed and
/// compared against the objective exactly.
pub fn rec_dual_to_distribution(
    f: &CommInstance,
    witness: &Witness,
    config: &RunConfig,
) -> Result<RecToDistribution> {
    let BoundKind::Rec(z) = BoundKind::from_token(&witness.kind)? else {
        return input_err(format!(
            "expected a rectangle-bound dual, got kind {}",
            witness.kind
        ));
    };
    let k = require_feasible_hypothesis(f, witness, config)?;
    let eps = witness.epsilon.clone();

    let mut on_z = rat(0);
    let mut off_z = rat(0);
    for (&c, value) in &witness.mu {
        let (x, y) = f.cell_at(c);
        if f.value(x, y) == Some(z) {
            on_z += value;
        } else {
            off_z += value;
        }
    }
    if on_z.is_zero() {
        return input_err(
            "the dual carries no mass on the cells valued z, so no distribution can be extracted",
        );
    }

    let z_mass = if off_z.is_zero() { rat(1) } else { ratio(1, 2) };
    let mut weights = BTreeMap::new();
    for (&c, value) in &witness.mu {
        if value.is_zero() {
            continue;
        }
        let (x, y) = f.cell_at(c);
        let share = if f.value(x, y) == Some(z) {
            value * &z_mass / &on_z
        } else {
            value / (rat(2) * &off_z)
        };
        weights.insert(c, share);
    }
    let lambda = Distribution::new(weights)?;

    let half_eps = eps / rat(2);
    let tilde = tilde_rec(f, z, &lambda, &half_eps, &config.caps)?;
    let vacuous = matches!(tilde, TildeRec::NoQualifying);
    if let TildeRec::Finite(value) = &tilde {
        if value < &k {
            return check_err(format!(
                "the extracted distribution only certifies {} at half the error, \
                 below the dual objective {}",
                fmt_rat(value),
                fmt_rat(&k)
            ));
        }
    }
    Ok(RecToDistribution {
        lambda,
        k,
        z_mass,
        tilde,
        vacuous,
    })
}

/// Rewrites a distribution with a finite measure at twice the error as a
/// feasible rectangle-bound dual at the error itself.
///
/// Needs `0 <= eps < 1/2`, the support inside the defined cells, and at
/// least one qualifying rectangle at `2 eps`; the constructed dual is
/// checked feasible and its exact objective reported.
pub fn distribution_to_rec_dual(
    f: &CommInstance,
    z: u16,
    lambda: &Distribution,
    eps: &Rat,
    config: &RunConfig,
) -> Result<DistributionToRec> {
    if eps < &rat(0) || eps >= &ratio(1, 2) {
        return input_err("the construction needs 0 <= eps < 1/2");
    }
    if z >= f.alphabet() {
        return input_err(format!("output {z} is outside the alphabet"));
    }
    support_on_defined(f, lambda)?;

    let doubled = rat(2) * eps;
    let k = match tilde_rec(f, z, lambda, &doubled, &config.caps)? {
        TildeRec::Finite(value) => value,
        TildeRec::NoQualifying => {
            return input_err(format!(
                "no rectangle qualifies at error {}; the construction needs a finite measure",
                fmt_rat(&doubled)
            ))
        }
    };

    // A qualifying rectangle exists, so eps > 0 here and the off-cell
    // scale 1 / (2 eps) below is well defined.
    let mut witness = Witness::dual(BoundKind::Rec(z).token(), eps.clone());
    for (c, mass) in lambda.entries() {
        let (x, y) = f.cell_at(c);
        let value = if f.value(x, y) == Some(z) {
            &k * mass
        } else {
            &k * mass / (rat(2) * eps)
        };
        witness.mu.insert(c, value);
    }

    let check = check_comm_witness(f, &witness, config)?;
    if !check.feasible() {
        return check_err(format!(
            "the constructed rectangle-bound dual is infeasible: {}",
            check.report.describe()
        ));
    }
    let objective = check.objective().clone();
    let printed_bound = &k / rat(2) * (ratio(1, 2) - eps);
    let printed_bound_holds = objective >= printed_bound;
    Ok(DistributionToRec {
        witness,
        objective,
        k,
        printed_bound,
        printed_bound_holds,
    })
}

/// Rewrites a feasible smooth-rectangle dual as a hard distribution for a
/// nearby function.
///
/// Cells carrying both families' mass are reduced first (this never lowers
/// the objective), the remaining second-family mass marks the cells to
/// overwrite, and the merged mass forms a rectangle-bound dual for the
/// overwritten function whose objective `k` is at least the original one.
/// The distribution is then extracted from that dual, so it certifies at
/// least `k` at half the error.
pub fn srec_dual_to_distribution(
    f: &CommInstance,
    witness: &Witness,
    config: &RunConfig,
) -> Result<SrecToDistribution> {
    let BoundKind::Srec(z) = BoundKind::from_token(&witness.kind)? else {
        return input_err(format!(
            "expected a smooth-rectangle dual, got kind {}",
            witness.kind
        ));
    };
    let original = require_feasible_hypothesis(f, witness, config)?;
    let eps = witness.epsilon.clone();

    // Reduce: shrink mu and phi together wherever both are positive. Every
    // rectangle row sees mu - phi on those cells, so feasibility is intact,
    // and the objective gains eps times the reduction.
    let mut reduced = witness.clone();
    for (c, phi) in reduced.phi.iter_mut() {
        if let Some(mu) = reduced.mu.get_mut(c) {
            let cut = (&*mu).min(&*phi).clone();
            *mu -= &cut;
            *phi -= &cut;
        }
    }
    reduced.mu.retain(|_, v| !v.is_zero());
    reduced.phi.retain(|_, v| !v.is_zero());

    let reduced_check = check_comm_witness(f, &reduced, config)?;
    if !reduced_check.feasible() {
        return check_err(format!(
            "reducing the dual must keep it feasible: {}",
            reduced_check.report.describe()
        ));
    }
    let reduced_objective = reduced_check.objective().clone();
    if reduced_objective < original {
        return check_err("reducing the dual must not lower its objective");
    }

    let flips: Vec<usize> = reduced.phi.keys().copied().collect();
    let leftover: Rat = reduced.phi.values().sum();
    let patch: BTreeMap<usize, u16> = flips.iter().map(|&c| (c, (z + 1) % f.alphabet())).collect();
    let g = rewrite_cells(f, &patch)?;

    let mut merged = Witness::dual(BoundKind::Rec(z).token(), eps.clone());
    merged.mu = reduced.mu.clone();
    for (&c, phi) in &reduced.phi {
        let slot = merged.mu.entry(c).or_insert_with(|| rat(0));
        *slot += phi;
    }

    let merged_check = check_comm_witness(&g, &merged, config)?;
    if !merged_check.feasible() {
        return check_err(format!(
            "the merged dual must be feasible for the overwritten function: {}",
            merged_check.report.describe()
        ));
    }
    let k = merged_check.objective().clone();
    if &k - &reduced_objective != (Rat::one() - &eps) * &leftover {
        return check_err("the merged dual's objective must exceed the reduced one by exactly (1 - eps) times the leftover second-family mass");
    }

    let inner = rec_dual_to_distribution(&g, &merged, config)?;
    let error_mass = inner.lambda.mass_on(flips.iter().copied());
    let error_mass_small = error_mass <= (Rat::one() - &eps) / rat(2);
    Ok(SrecToDistribution {
        g,
        flips,
        lambda: inner.lambda,
        k,
        z_mass: inner.z_mass,
        tilde: inner.tilde,
        vacuous: inner.vacuous,
        error_mass,
        error_mass_small,
    })
}

/// Rewrites a distribution that is hard for a nearby total function as a
/// feasible smooth-rectangle dual for the function itself.
///
/// Needs `0 <= eps < 1/2`, the support inside the defined cells, and a
/// finite measure of the nearby function at twice the error. The first
/// family carries the agreement cells valued `z` and (scaled up by
/// `1 / (2 eps)`) the cells valued differently; the second family carries
/// the cells the nearby function overwrote.
pub fn distribution_to_srec_dual(
    f: &CommInstance,
    z: u16,
    lambda: &Distribution,
    g: &CommInstance,
    eps: &Rat,
    config: &RunConfig,
) -> Result<DistributionToSrec> {
    same_shape(f, g)?;
    if g.is_relation() || !g.is_total() {
        return input_err("the nearby function must be total");
    }
    if eps < &rat(0) || eps >= &ratio(1, 2) {
        return input_err("the construction needs 0 <= eps < 1/2");
    }
    if z >= f.alphabet() {
        return input_err(format!("output {z} is outside the alphabet"));
    }
    support_on_defined(f, lambda)?;

    let doubled = rat(2) * eps;
    let k = match tilde_rec(g, z, lambda, &doubled, &config.caps)? {
        TildeRec::Finite(value) => value,
        TildeRec::NoQualifying => {
            return input_err(format!(
                "no rectangle qualifies for the nearby function at error {}; \
                 the construction needs a finite measure",
                fmt_rat(&doubled)
            ))
        }
    };

    let mut witness = Witness::dual(BoundKind::Srec(z).token(), eps.clone());
    let mut error_mass = rat(0);
    for (c, mass) in lambda.entries() {
        let (x, y) = f.cell_at(c);
        let fv = f.value(x, y);
        let gv = g.value(x, y);
        if fv != gv {
            error_mass += mass;
        }
        if fv == Some(z) {
            if gv == Some(z) {
                witness.mu.insert(c, &k * mass);
            } else {
                witness.phi.insert(c, &k * mass / (rat(2) * eps));
            }
        } else {
            witness.mu.insert(c, &k * mass / (rat(2) * eps));
        }
    }

    let check = check_comm_witness(f, &witness, config)?;
    if !check.feasible() {
        return check_err(format!(
            "the constructed smooth-rectangle dual is infeasible: {}",
            check.report.describe()
        ));
    }
    let objective = check.objective().clone();

    let srec_value = compute_comm_bound(f, BoundKind::Srec(z), eps, config)?.value;
    if objective > srec_value {
        return check_err("a feasible dual objective cannot exceed the optimum");
    }

    let printed_bound = &k / rat(2) * (ratio(1, 4) - eps);
    let printed_bound_holds = objective >= printed_bound;
    let canonical = error_mass <= eps / rat(4);
    Ok(DistributionToSrec {
        witness,
        objective,
        k,
        srec_value,
        printed_bound,
        printed_bound_holds,
        error_mass,
        canonical,
    })
}

/// Rewrites a feasible smooth-discrepancy dual as a balanced distribution
/// for a nearby function.
///
/// After the same reduction as in the smooth-rectangle case (here it leaves
/// every row untouched, since both families enter through `mu - phi`), the
/// leftover second-family cells are flipped, the merged mass is normalized,
/// and the discrepancy measure of the flipped function is recomputed: it
/// certifies at least the total dual mass, which itself is at least the
/// reduced objective.
pub fn sdisc_dual_to_distribution(
    f: &CommInstance,
    witness: &Witness,
    config: &RunConfig,
) -> Result<SdiscToDistribution> {
    if BoundKind::from_token(&witness.kind)? != BoundKind::Sdisc {
        return input_err(format!(
            "expected a smooth-discrepancy dual, got kind {}",
            witness.kind
        ));
    }
    if !f.is_total() {
        return input_err("the translation needs a total function");
    }
    require_feasible_hypothesis(f, witness, config)?;
    let eps = witness.epsilon.clone();

    let mut reduced = witness.clone();
    for (c, phi) in reduced.phi.iter_mut() {
        if let Some(mu) = reduced.mu.get_mut(c) {
            let cut = (&*mu).min(&*phi).clone();
            *mu -= &cut;
            *phi -= &cut;
        }
    }
    reduced.mu.retain(|_, v| !v.is_zero());
    reduced.phi.retain(|_, v| !v.is_zero());

    let reduced_check = check_comm_witness(f, &reduced, config)?;
    if !reduced_check.feasible() {
        return check_err(format!(
            "reducing the dual must keep every row untouched: {}",
            reduced_check.report.describe()
        ));
    }
    let k = reduced_check.objective().clone();
    if k.is_negative() {
        return input_err(
            "the dual certifies a nonpositive bound, so no distribution can be extracted",
        );
    }

    let mut weights: BTreeMap<usize, Rat> = reduced.mu.clone();
    for (&c, phi) in &reduced.phi {
        let slot = weights.entry(c).or_insert_with(|| rat(0));
        *slot += phi;
    }
    let total_mass: Rat = weights.values().sum();
    if total_mass.is_zero() {
        return input_err("the dual carries no mass at all");
    }
    if total_mass < k {
        return check_err("the total dual mass cannot fall below the objective");
    }

    let flips: Vec<usize> = reduced.phi.keys().copied().collect();
    let patch: BTreeMap<usize, u16> = flips
        .iter()
        .map(|&c| {
            let (x, y) = f.cell_at(c);
            let flipped = 1 - f.value(x, y).expect("total function");
            (c, flipped)
        })
        .collect();
    let g = rewrite_cells(f, &patch)?;
    let lambda = Distribution::normalized(weights)?;

    let disc = match disc_lambda(&g, &lambda, &config.caps)? {
        DiscLambda::Finite(value) => value,
        DiscLambda::Infinite => {
            unreachable!("a unit-mass distribution unbalances some singleton rectangle")
        }
    };
    if disc < total_mass {
        return check_err(format!(
            "the flipped function's discrepancy measure {} falls below the total dual mass {}",
            fmt_rat(&disc),
            fmt_rat(&total_mass)
        ));
    }

    let error_mass = lambda.mass_on(flips.iter().copied());
    let cap = ratio(1, 2) - &eps / rat(8);
    if error_mass > cap {
        return check_err(format!(
            "the flipped mass {} exceeds the guaranteed cap {}",
            fmt_rat(&error_mass),
            fmt_rat(&cap)
        ));
    }
    Ok(SdiscToDistribution {
        g,
        flips,
        lambda,
        k,
        total_mass,
        disc,
        error_mass,
    })
}

/// Rewrites a distribution under which a nearby total function has a large
/// discrepancy measure as a feasible smooth-discrepancy dual for the
/// function itself.
///
/// The disagreement mass must stay within `1 / (4 + 2 eps)`; the scaled
/// agreement cells form the first family and the scaled disagreement cells
/// the second, and the objective is guaranteed to reach at least half the
/// discrepancy measure.
pub fn distribution_to_sdisc_dual(
    f: &CommInstance,
    lambda: &Distribution,
    g: &CommInstance,
    eps: &Rat,
    config: &RunConfig,
) -> Result<DistributionToSdisc> {
    same_shape(f, g)?;
    if !f.is_total() || f.is_relation() || !g.is_total() || g.is_relation() {
        return input_err("both functions must be total");
    }
    support_in_grid(f, lambda)?;

    let k = match disc_lambda(g, lambda, &config.caps)? {
        DiscLambda::Finite(value) => value,
        DiscLambda::Infinite => {
            unreachable!("a unit-mass distribution unbalances some singleton rectangle")
        }
    };

    let mut error_mass = rat(0);
    for (c, mass) in lambda.entries() {
        let (x, y) = f.cell_at(c);
        if f.value(x, y) != g.value(x, y) {
            error_mass += mass;
        }
    }
    let threshold = (rat(4) + rat(2) * eps).recip();
    if error_mass > threshold {
        return input_err(format!(
            "the disagreement mass {} exceeds the admissible threshold {}",
            fmt_rat(&error_mass),
            fmt_rat(&threshold)
        ));
    }

    let mut witness = Witness::dual(BoundKind::Sdisc.token(), eps.clone());
    for (c, mass) in lambda.entries() {
        let (x, y) = f.cell_at(c);
        if f.value(x, y) == g.value(x, y) {
            witness.mu.insert(c, &k * mass);
        } else {
            witness.phi.insert(c, &k * mass);
        }
    }

    let check = check_comm_witness(f, &witness, config)?;
    if !check.feasible() {
        return check_err(format!(
            "the constructed smooth-discrepancy dual is infeasible: {}",
            check.report.describe()
        ));
    }
    let objective = check.objective().clone();
    if objective < &k / rat(2) {
        return check_err(format!(
            "the objective {} falls below half the discrepancy measure {}",
            fmt_rat(&objective),
            fmt_rat(&k)
        ));
    }
    Ok(DistributionToSdisc {
        witness,
        objective,
        k,
        error_mass,
        threshold,
    })
}

/// Rewrites a low-discrepancy distribution directly as a rectangle-bound
/// dual for the same function, with no nearby function involved.
///
/// Scaling the whole distribution by the discrepancy measure `k` is
/// feasible for either output, and the objective `k (z-mass - eps)` never
/// falls below `(1/2 - eps) k - 1/2` because the full grid is itself a
/// rectangle, forcing the two sides' masses within `1/k` of each other.
pub fn disc_distribution_to_rec_dual(
    f: &CommInstance,
    z: u16,
    lambda: &Distribution,
    eps: &Rat,
    config: &RunConfig,
) -> Result<DiscToRec> {
    if !f.is_total() || f.is_relation() || f.alphabet() != 2 {
        return input_err("the construction needs a total Boolean function");
    }
    if z >= 2 {
        return input_err(format!("output {z} is outside the Boolean alphabet"));
    }
    if eps < &rat(0) || eps >= &rat(1) {
        return input_err("eps must satisfy 0 <= eps < 1");
    }
    support_in_grid(f, lambda)?;

    let k = match disc_lambda(f, lambda, &config.caps)? {
        DiscLambda::Finite(value) => value,
        DiscLambda::Infinite => {
            unreachable!("a unit-mass distribution unbalances some singleton rectangle")
        }
    };

    let mut witness = Witness::dual(BoundKind::Rec(z).token(), eps.clone());
    for (c, mass) in lambda.entries() {
        witness.mu.insert(c, &k * mass);
    }
    let check = check_comm_witness(f, &witness, config)?;
    if !check.feasible() {
        return check_err(format!(
            "the scaled distribution is infeasible as a rectangle-bound dual: {}",
            check.report.describe()
        ));
    }
    let objective = check.objective().clone();
    let guaranteed = (ratio(1, 2) - eps) * &k - ratio(1, 2);
    if objective < guaranteed {
        return check_err(format!(
            "the objective {} falls below the guaranteed value {}",
            fmt_rat(&objective),
            fmt_rat(&guaranteed)
        ));
    }
    Ok(DiscToRec {
        witness,
        objective,
        k,
        guaranteed,
    })
}
