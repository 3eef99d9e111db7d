//! Communication-side lower bounds as explicit linear programs over the
//! rectangles of the input grid.
//!
//! Every bound is a minimization over weighted rectangle families with one
//! or two constraint rows per cell. [`compute_comm_bound`] builds the LP,
//! solves it exactly and returns the optimum with both optimal witnesses;
//! [`check_comm_witness`] verifies an explicit witness against the same
//! program with zero tolerance.

pub mod conventional;
pub mod covers;
pub mod lemmas;
pub mod protocol;

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::bound::{BoundProgram, BoundReport, RowTag, WitnessCheck};
use crate::error::{check_err, input_err, Result};
use crate::lp::{LinearProgram, Rel, Sense, VarSign};
use crate::model::{
    enumerate_rectangles, mask_of_width, validate_epsilon, BoundKind, CommInstance, Rectangle,
    Region, RunConfig, Witness,
};
use crate::rat::{fmt_rat, rat, Rat};

/// Builds the LP for one communication bound kind. `srec_max` has no single
/// program; ask for a concrete `srec@z` instead.
pub fn comm_bound_program(
    instance: &CommInstance,
    kind: BoundKind,
    epsilon: &Rat,
    config: &RunConfig,
) -> Result<BoundProgram> {
    gate(instance, kind, epsilon)?;
    match kind {
        BoundKind::Prt | BoundKind::PrtRelation => {
            build_prt(instance, kind, epsilon, config, false)
        }
        BoundKind::PrtZeroMono => build_prt(instance, kind, epsilon, config, true),
        BoundKind::Rec(z) => build_rec(instance, kind, z, epsilon, false, config),
        BoundKind::Srec(z) => build_rec(instance, kind, z, epsilon, true, config),
        BoundKind::Disc => build_disc(instance, kind, epsilon, config),
        BoundKind::Sdisc => build_disc(instance, kind, epsilon, config),
        BoundKind::PrtLv => build_prt_lv(instance, kind, config, false),
        BoundKind::PrtLvStar => build_prt_lv(instance, kind, config, true),
        BoundKind::SrecMax => {
            input_err("srec_max is a maximum over outputs; build srec@z for a concrete output")
        }
        _ => input_err(format!(
            "{} is a query-side bound, not defined on communication instances",
            kind.token()
        )),
    }
}

/// Builds, solves and packages one bound. For `srec_max` this maximizes
/// `srec@z` over the instance's output labels, breaking ties toward the
/// smallest output.
pub fn compute_comm_bound(
    instance: &CommInstance,
    kind: BoundKind,
    epsilon: &Rat,
    config: &RunConfig,
) -> Result<BoundReport> {
    if let BoundKind::SrecMax = kind {
        gate(instance, kind, epsilon)?;
        let labels = output_labels(instance, config);
        let mut best: Option<BoundReport> = None;
        for z in labels {
            let mut report = comm_bound_program(instance, BoundKind::Srec(z), epsilon, config)?
                .report(&config.caps)?;
            report.chosen_z = Some(z);
            let better = match &best {
                None => true,
                Some(b) => report.value > b.value,
            };
            if better {
                best = Some(report);
            }
        }
        let mut report = best.expect("label list is nonempty");
        report.kind = BoundKind::SrecMax;
        return Ok(report);
    }
    comm_bound_program(instance, kind, epsilon, config)?.report(&config.caps)
}

/// Checks an explicit witness against the program its kind token and error
/// parameter name. Returns the exact objective and any violations.
pub fn check_comm_witness(
    instance: &CommInstance,
    witness: &Witness,
    config: &RunConfig,
) -> Result<WitnessCheck> {
    let kind = BoundKind::from_token(&witness.kind)?;
    let program = comm_bound_program(instance, kind, &witness.epsilon, config)?;
    program.check_witness(witness)
}

fn gate(instance: &CommInstance, kind: BoundKind, epsilon: &Rat) -> Result<()> {
    if kind.is_query() {
        return input_err(format!(
            "{} is a query-side bound, not defined on communication instances",
            kind.token()
        ));
    }
    if kind.takes_epsilon() {
        validate_epsilon(epsilon)?;
    } else if !epsilon.is_zero() {
        return input_err(format!(
            "{} takes no error parameter, got {}",
            kind.token(),
            fmt_rat(epsilon)
        ));
    }
    let wants_relation = matches!(kind, BoundKind::PrtRelation);
    if wants_relation != instance.is_relation() {
        return input_err(if wants_relation {
            format!("{} needs a relation instance", kind.token())
        } else {
            format!("{} needs a function instance", kind.token())
        });
    }
    if matches!(kind, BoundKind::Disc | BoundKind::Sdisc) && instance.alphabet() != 2 {
        return input_err(format!(
            "{} needs Boolean outputs, the alphabet has size {}",
            kind.token(),
            instance.alphabet()
        ));
    }
    Ok(())
}

/// Output labels the variable families range over: the image when the run
/// configuration restricts to it, falling back to the full alphabet when the
/// image is empty (nothing is defined).
fn output_labels(instance: &CommInstance, config: &RunConfig) -> Vec<u16> {
    let labels = instance.labels(config.restrict_z_image);
    if labels.is_empty() {
        instance.labels(false)
    } else {
        labels
    }
}

struct Grid {
    rects: Vec<Rectangle>,
    /// Rectangle indices covering each cell, by row-major cell index.
    cover: Vec<Vec<usize>>,
}

fn grid(instance: &CommInstance, config: &RunConfig) -> Result<Grid> {
    let rects = enumerate_rectangles(instance.nrows(), instance.ncols(), config.caps.max_regions)?;
    let mut cover = vec![Vec::new(); instance.nrows() * instance.ncols()];
    for (ri, r) in rects.iter().enumerate() {
        for (x, y) in r.cells() {
            cover[instance.cell_index(x, y)].push(ri);
        }
    }
    Ok(Grid { rects, cover })
}

/// The partition bound: rectangle weights per output, every cell's allowed
/// mass at least `1 - eps`, every cell's total mass exactly 1. With
/// `mono_only` the variable family is restricted to output-monochromatic
/// rectangles (zero-error form).
fn build_prt(
    instance: &CommInstance,
    kind: BoundKind,
    epsilon: &Rat,
    config: &RunConfig,
    mono_only: bool,
) -> Result<BoundProgram> {
    let g = grid(instance, config)?;
    let labels = output_labels(instance, config);
    let mut lp = LinearProgram::new(
        format!(
            "{}[{}x{}]",
            kind.token(),
            instance.nrows(),
            instance.ncols()
        ),
        Sense::Min,
    );
    let mut vars: Vec<(u16, Region)> = Vec::new();
    // Variable index per (label position, rectangle index); z-major.
    let mut var_of: Vec<Vec<Option<usize>>> = Vec::new();
    for &z in &labels {
        let mut row = vec![None; g.rects.len()];
        for (ri, r) in g.rects.iter().enumerate() {
            if mono_only && !instance.rect_monochromatic(r, z) {
                continue;
            }
            let j = lp.add_var(format!("w[{z}][{}]", r.label()), VarSign::Nonneg, rat(1))?;
            vars.push((z, Region::Rect(*r)));
            row[ri] = Some(j);
        }
        var_of.push(row);
    }

    let mut rows = Vec::new();
    let correct = Rat::one() - epsilon;
    for (x, y) in instance.defined_cells() {
        let c = instance.cell_index(x, y);
        let mut coeffs = Vec::new();
        for (zi, &z) in labels.iter().enumerate() {
            if !instance.allows(x, y, z) {
                continue;
            }
            for &ri in &g.cover[c] {
                if let Some(j) = var_of[zi][ri] {
                    coeffs.push((j, rat(1)));
                }
            }
        }
        lp.add_constraint(format!("mu[{c}]"), coeffs, Rel::Ge, correct.clone())?;
        rows.push(RowTag::Mu(c, Rel::Ge));
    }
    for (x, y) in instance.all_cells() {
        let c = instance.cell_index(x, y);
        let mut coeffs = Vec::new();
        for by_region in &var_of {
            for &ri in &g.cover[c] {
                if let Some(j) = by_region[ri] {
                    coeffs.push((j, rat(1)));
                }
            }
        }
        lp.add_constraint(format!("phi[{c}]"), coeffs, Rel::Eq, rat(1))?;
        rows.push(RowTag::Phi(c, Rel::Eq));
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

/// The one-output rectangle bound: weight at least `1 - eps` on cells with
/// the target output, at most `eps` elsewhere; the smooth form also caps the
/// target-side weight at 1.
fn build_rec(
    instance: &CommInstance,
    kind: BoundKind,
    z: u16,
    epsilon: &Rat,
    smooth: bool,
    config: &RunConfig,
) -> Result<BoundProgram> {
    if z >= instance.alphabet() {
        return input_err(format!(
            "output {z} is outside the alphabet of size {}",
            instance.alphabet()
        ));
    }
    let g = grid(instance, config)?;
    let mut lp = LinearProgram::new(
        format!(
            "{}[{}x{}]",
            kind.token(),
            instance.nrows(),
            instance.ncols()
        ),
        Sense::Min,
    );
    let mut vars = Vec::new();
    for r in &g.rects {
        lp.add_var(format!("w[{}]", r.label()), VarSign::Nonneg, rat(1))?;
        vars.push((0u16, Region::Rect(*r)));
    }
    let mut rows = Vec::new();
    let correct = Rat::one() - epsilon;
    for (x, y) in instance.defined_cells() {
        let c = instance.cell_index(x, y);
        let coeffs: Vec<_> = g.cover[c].iter().map(|&ri| (ri, rat(1))).collect();
        if instance.value(x, y) == Some(z) {
            lp.add_constraint(format!("mu[{c}]"), coeffs, Rel::Ge, correct.clone())?;
            rows.push(RowTag::Mu(c, Rel::Ge));
        } else {
            lp.add_constraint(format!("mu[{c}]"), coeffs, Rel::Le, epsilon.clone())?;
            rows.push(RowTag::Mu(c, Rel::Le));
        }
    }
    if smooth {
        for (x, y) in instance.defined_cells() {
            if instance.value(x, y) != Some(z) {
                continue;
            }
            let c = instance.cell_index(x, y);
            let coeffs: Vec<_> = g.cover[c].iter().map(|&ri| (ri, rat(1))).collect();
            lp.add_constraint(format!("phi[{c}]"), coeffs, Rel::Le, rat(1))?;
            rows.push(RowTag::Phi(c, Rel::Le));
        }
    }
    Ok(BoundProgram::assemble(
        kind,
        epsilon.clone(),
        lp,
        vars,
        rows,
        true,
    ))
}

/// The discrepancy bound: two weight families, signed coverage at least 1 on
/// every cell by its own side; the smooth form also caps the signed coverage
/// at `1 + eps`.
fn build_disc(
    instance: &CommInstance,
    kind: BoundKind,
    epsilon: &Rat,
    config: &RunConfig,
) -> Result<BoundProgram> {
    let smooth = matches!(kind, BoundKind::Sdisc);
    let g = grid(instance, config)?;
    let mut lp = LinearProgram::new(
        format!(
            "{}[{}x{}]",
            kind.token(),
            instance.nrows(),
            instance.ncols()
        ),
        Sense::Min,
    );
    let mut vars = Vec::new();
    for r in &g.rects {
        lp.add_var(format!("w[{}]", r.label()), VarSign::Nonneg, rat(1))?;
        vars.push((0u16, Region::Rect(*r)));
    }
    let v_base = g.rects.len();
    for r in &g.rects {
        lp.add_var(format!("v[{}]", r.label()), VarSign::Nonneg, rat(1))?;
        vars.push((1u16, Region::Rect(*r)));
    }
    let signed = |c: usize, positive_w: bool| -> Vec<(usize, Rat)> {
        let mut coeffs = Vec::new();
        for &ri in &g.cover[c] {
            if positive_w {
                coeffs.push((ri, rat(1)));
                coeffs.push((v_base + ri, rat(-1)));
            } else {
                coeffs.push((ri, rat(-1)));
                coeffs.push((v_base + ri, rat(1)));
            }
        }
        coeffs
    };
    let mut rows = Vec::new();
    for (x, y) in instance.defined_cells() {
        let c = instance.cell_index(x, y);
        let positive_w = instance.value(x, y) == Some(1);
        lp.add_constraint(format!("mu[{c}]"), signed(c, positive_w), Rel::Ge, rat(1))?;
        rows.push(RowTag::Mu(c, Rel::Ge));
    }
    if smooth {
        let cap = Rat::one() + epsilon;
        for (x, y) in instance.defined_cells() {
            let c = instance.cell_index(x, y);
            let positive_w = instance.value(x, y) == Some(1);
            lp.add_constraint(
                format!("phi[{c}]"),
                signed(c, positive_w),
                Rel::Le,
                cap.clone(),
            )?;
            rows.push(RowTag::Phi(c, Rel::Le));
        }
    }
    Ok(BoundProgram::assemble(
        kind,
        epsilon.clone(),
        lp,
        vars,
        rows,
        true,
    ))
}

/// The zero-error two-family bound: monochromatic rectangles must cover
/// every defined cell with weight at least (or exactly, in the `star` form)
/// one half, and together with a free rectangle family the total coverage of
/// every cell is exactly 1.
fn build_prt_lv(
    instance: &CommInstance,
    kind: BoundKind,
    config: &RunConfig,
    star: bool,
) -> Result<BoundProgram> {
    let g = grid(instance, config)?;
    // A rectangle joins the first family when some single output is
    // consistent with all of its defined cells.
    let alpha_mask = mask_of_width(u32::from(instance.alphabet()));
    let mono: Vec<bool> = g
        .rects
        .iter()
        .map(|r| {
            let mut acc = alpha_mask;
            for (x, y) in r.cells() {
                if instance.defined(x, y) {
                    acc &= instance.cell_mask(x, y);
                }
            }
            acc != 0
        })
        .collect();
    let mut lp = LinearProgram::new(
        format!(
            "{}[{}x{}]",
            kind.token(),
            instance.nrows(),
            instance.ncols()
        ),
        Sense::Min,
    );
    let mut vars = Vec::new();
    let mut w_of = vec![None; g.rects.len()];
    for (ri, r) in g.rects.iter().enumerate() {
        if mono[ri] {
            let j = lp.add_var(format!("w[{}]", r.label()), VarSign::Nonneg, rat(1))?;
            vars.push((0u16, Region::Rect(*r)));
            w_of[ri] = Some(j);
        }
    }
    let mut v_of = vec![0usize; g.rects.len()];
    for (ri, r) in g.rects.iter().enumerate() {
        let j = lp.add_var(format!("v[{}]", r.label()), VarSign::Nonneg, rat(1))?;
        vars.push((1u16, Region::Rect(*r)));
        v_of[ri] = j;
    }
    let mut rows = Vec::new();
    let half = crate::rat::ratio(1, 2);
    let rel = if star { Rel::Eq } else { Rel::Ge };
    for (x, y) in instance.defined_cells() {
        let c = instance.cell_index(x, y);
        let coeffs: Vec<_> = g.cover[c]
            .iter()
            .filter_map(|&ri| w_of[ri].map(|j| (j, rat(1))))
            .collect();
        lp.add_constraint(format!("mu[{c}]"), coeffs, rel, half.clone())?;
        rows.push(RowTag::Mu(c, rel));
    }
    for (x, y) in instance.all_cells() {
        let c = instance.cell_index(x, y);
        let mut coeffs: Vec<(usize, Rat)> = g.cover[c]
            .iter()
            .filter_map(|&ri| w_of[ri].map(|j| (j, rat(1))))
            .collect();
        coeffs.extend(g.cover[c].iter().map(|&ri| (v_of[ri], rat(1))));
        lp.add_constraint(format!("phi[{c}]"), coeffs, Rel::Eq, rat(1))?;
        rows.push(RowTag::Phi(c, Rel::Eq));
    }
    Ok(BoundProgram::assemble(kind, rat(0), lp, vars, rows, false))
}

/// A validated fooling set and the zero-error partition dual it certifies.
#[derive(Debug, Clone)]
pub struct FoolingCertificate {
    pub witness: Witness,
    /// The certified lower bound: the size of the set.
    pub size: usize,
    /// Exact feasibility check against the monochromatic zero-error program.
    pub check: WitnessCheck,
}

/// Validates a fooling set for output `z` on a total function and returns
/// the dual witness it induces: unit mass on each set cell. The witness is
/// checked against the zero-error partition program restricted to
/// monochromatic rectangles, which has the same optimum.
pub fn fooling_set_dual(
    instance: &CommInstance,
    z: u16,
    cells: &[(usize, usize)],
    config: &RunConfig,
) -> Result<FoolingCertificate> {
    if instance.is_relation() {
        return input_err("fooling sets are defined for functions, not relations");
    }
    if !instance.is_total() {
        return input_err("fooling sets need a total function");
    }
    if cells.is_empty() {
        return input_err("the fooling set is empty");
    }
    let mut seen = BTreeSet::new();
    for &(x, y) in cells {
        if x >= instance.nrows() || y >= instance.ncols() {
            return input_err(format!("cell ({x},{y}) is outside the grid"));
        }
        if !seen.insert((x, y)) {
            return input_err(format!("cell ({x},{y}) appears twice in the set"));
        }
        if instance.value(x, y) != Some(z) {
            return input_err(format!(
                "cell ({x},{y}) has output {:?}, not {z}",
                instance.value(x, y)
            ));
        }
    }
    for (i, &(x1, y1)) in cells.iter().enumerate() {
        for &(x2, y2) in &cells[i + 1..] {
            if instance.value(x1, y2) == Some(z) && instance.value(x2, y1) == Some(z) {
                return input_err(format!(
                    "cells ({x1},{y1}) and ({x2},{y2}) fail the crossing condition: \
                     both crossings also map to {z}"
                ));
            }
        }
    }
    let mut witness = Witness::dual(BoundKind::PrtZeroMono.token(), rat(0));
    for &(x, y) in cells {
        witness.mu.insert(instance.cell_index(x, y), rat(1));
    }
    let program = comm_bound_program(instance, BoundKind::PrtZeroMono, &rat(0), config)?;
    let check = program.check_witness(&witness)?;
    if !check.feasible() {
        return check_err(format!(
            "fooling-set dual failed its feasibility check: {}",
            check.report.describe()
        ));
    }
    let size = cells.len();
    if check.report.objective != rat(size as i64) {
        return check_err(format!(
            "fooling-set dual certifies {} instead of the set size {}",
            fmt_rat(&check.report.objective),
            size
        ));
    }
    Ok(FoolingCertificate {
        witness,
        size,
        check,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::standard::{make_constant_comm, make_eq, make_xor_comm};
    use crate::lp::weak_duality_gap;
    use crate::model::{Caps, Side};
    use crate::rat::ratio;

    fn config() -> RunConfig {
        RunConfig::new()
    }

    #[test]
    fn constant_function_partitions_with_one_rectangle() {
        let f = make_constant_comm(4, 4).unwrap();
        let report = compute_comm_bound(&f, BoundKind::Prt, &rat(0), &config()).unwrap();
        assert_eq!(report.value, rat(1));
    }

    #[test]
    fn everywhere_undefined_grid_still_needs_total_mass_one() {
        let f = CommInstance::new(2, 2, 2, false, vec![0, 0, 0, 0]).unwrap();
        let report = compute_comm_bound(&f, BoundKind::Prt, &rat(0), &config()).unwrap();
        assert_eq!(report.value, rat(1));
    }

    #[test]
    fn equality_partition_value_sits_between_fooling_and_protocol() {
        let f = make_eq(4).unwrap();
        let report = compute_comm_bound(&f, BoundKind::Prt, &rat(0), &config()).unwrap();
        assert!(report.value >= rat(4));
        assert!(report.value <= rat(8));
    }

    #[test]
    fn zero_error_partition_matches_its_monochromatic_restriction() {
        let f = make_eq(4).unwrap();
        let full = compute_comm_bound(&f, BoundKind::Prt, &rat(0), &config()).unwrap();
        let mono = compute_comm_bound(&f, BoundKind::PrtZeroMono, &rat(0), &config()).unwrap();
        assert_eq!(full.value, mono.value);
    }

    #[test]
    fn rectangle_bound_of_a_constant_is_one_minus_eps() {
        let f = make_constant_comm(3, 3).unwrap();
        let eps = ratio(1, 8);
        let report = compute_comm_bound(&f, BoundKind::Rec(0), &eps, &config()).unwrap();
        assert_eq!(report.value, ratio(7, 8));
    }

    #[test]
    fn zero_error_rectangle_bound_of_equality_is_the_diagonal_count() {
        let f = make_eq(4).unwrap();
        let report = compute_comm_bound(&f, BoundKind::Rec(1), &rat(0), &config()).unwrap();
        assert_eq!(report.value, rat(4));
    }

    #[test]
    fn discrepancy_of_one_bit_parity_is_four() {
        let f = make_xor_comm(1).unwrap();
        let report = compute_comm_bound(&f, BoundKind::Disc, &rat(0), &config()).unwrap();
        assert_eq!(report.value, rat(4));
    }

    #[test]
    fn smooth_rectangle_interleaves_between_rec_and_partition() {
        let f = make_eq(3).unwrap();
        let eps = ratio(1, 8);
        for z in [0u16, 1] {
            let prt = compute_comm_bound(&f, BoundKind::Prt, &eps, &config()).unwrap();
            let srec = compute_comm_bound(&f, BoundKind::Srec(z), &eps, &config()).unwrap();
            let rec = compute_comm_bound(&f, BoundKind::Rec(z), &eps, &config()).unwrap();
            assert!(prt.value >= srec.value, "prt >= srec failed at z={z}");
            assert!(srec.value >= rec.value, "srec >= rec failed at z={z}");
        }
    }

    #[test]
    fn srec_max_picks_the_larger_output_and_smallest_tie() {
        let f = make_eq(2).unwrap();
        let eps = ratio(1, 8);
        let report = compute_comm_bound(&f, BoundKind::SrecMax, &eps, &config()).unwrap();
        let z = report.chosen_z.unwrap();
        for other in [0u16, 1] {
            let s = compute_comm_bound(&f, BoundKind::Srec(other), &eps, &config()).unwrap();
            assert!(report.value >= s.value);
            if s.value == report.value {
                assert!(z <= other);
            }
        }
    }

    #[test]
    fn las_vegas_bound_brackets_the_zero_error_partition() {
        let f = make_eq(3).unwrap();
        let prt0 = compute_comm_bound(&f, BoundKind::Prt, &rat(0), &config()).unwrap();
        let star = compute_comm_bound(&f, BoundKind::PrtLvStar, &rat(0), &config()).unwrap();
        assert!(prt0.value >= star.value);
        assert!(&star.value * rat(2) >= prt0.value);
    }

    #[test]
    fn optimal_witnesses_round_trip_through_the_checker() {
        let f = make_eq(3).unwrap();
        let eps = ratio(1, 8);
        let report = compute_comm_bound(&f, BoundKind::Prt, &eps, &config()).unwrap();
        let p = check_comm_witness(&f, &report.primal, &config()).unwrap();
        assert!(p.feasible());
        assert_eq!(*p.objective(), report.value);
        let d = check_comm_witness(&f, &report.dual, &config()).unwrap();
        assert!(d.feasible());
        assert_eq!(*d.objective(), report.value);
    }

    #[test]
    fn fooling_set_on_the_equality_diagonal_certifies_its_size() {
        let f = make_eq(4).unwrap();
        let diag: Vec<_> = (0..4usize).map(|i| (i, i)).collect();
        let cert = fooling_set_dual(&f, 1, &diag, &config()).unwrap();
        assert_eq!(cert.size, 4);
        assert_eq!(*cert.check.objective(), rat(4));

        let single = fooling_set_dual(&f, 1, &[(2, 2)], &config()).unwrap();
        assert_eq!(single.size, 1);
        let pair = fooling_set_dual(&f, 1, &[(0, 0), (3, 3)], &config()).unwrap();
        assert_eq!(pair.size, 2);
    }

    #[test]
    fn non_fooling_pairs_are_rejected() {
        // In the all-ones function every crossing keeps output 1.
        let f = CommInstance::from_values(2, 2, 2, &[Some(1); 4]).unwrap();
        let err = fooling_set_dual(&f, 1, &[(0, 0), (1, 1)], &config()).unwrap_err();
        assert!(format!("{err}").contains("crossing"));
    }

    #[test]
    fn weak_duality_gap_examples_on_equality() {
        let f = make_eq(4).unwrap();
        let config = config();

        // Optimal one-output pair: diagonal singletons vs unit mass per
        // diagonal cell; the gap closes exactly.
        let program = comm_bound_program(&f, BoundKind::Rec(1), &rat(0), &config).unwrap();
        let report = program.report(&config.caps).unwrap();
        assert_eq!(report.value, rat(4));
        let (ppt, _) = program.witness_point(&report.primal).unwrap();
        let (dpt, _) = program.witness_point(&report.dual).unwrap();
        assert_eq!(weak_duality_gap(program.lp(), &ppt, &dpt).unwrap(), rat(0));

        // Suboptimal protocol primal vs fooling dual on the monochromatic
        // zero-error program: 8 against 4 leaves a gap of exactly 4.
        let mono = comm_bound_program(&f, BoundKind::PrtZeroMono, &rat(0), &config).unwrap();
        let (_, tree) = crate::oracle::deterministic_cc(&f).unwrap();
        let mut protocol_primal = protocol::protocol_to_primal(&f, &tree).unwrap();
        protocol_primal.kind = BoundKind::PrtZeroMono.token();
        let diag: Vec<_> = (0..4usize).map(|i| (i, i)).collect();
        let fooling = fooling_set_dual(&f, 1, &diag, &config).unwrap();
        let (ppt, _) = mono.witness_point(&protocol_primal).unwrap();
        let (dpt, _) = mono.witness_point(&fooling.witness).unwrap();
        assert_eq!(weak_duality_gap(mono.lp(), &ppt, &dpt).unwrap(), rat(4));
    }

    #[test]
    fn relation_kind_gating_is_mutual() {
        let f = make_eq(2).unwrap();
        assert!(compute_comm_bound(&f, BoundKind::PrtRelation, &rat(0), &config()).is_err());
        let r = CommInstance::new(2, 2, 2, true, vec![3, 3, 3, 3]).unwrap();
        assert!(compute_comm_bound(&r, BoundKind::Prt, &rat(0), &config()).is_err());
        assert!(compute_comm_bound(&r, BoundKind::PrtRelation, &rat(0), &config()).is_ok());
    }

    #[test]
    fn all_allowed_relation_partitions_with_one_rectangle() {
        let r = CommInstance::new(2, 2, 2, true, vec![3, 3, 3, 3]).unwrap();
        let report = compute_comm_bound(&r, BoundKind::PrtRelation, &rat(0), &config()).unwrap();
        assert_eq!(report.value, rat(1));
    }

    #[test]
    fn epsilon_gating_rejects_out_of_range_and_spurious_parameters() {
        let f = make_eq(2).unwrap();
        assert!(compute_comm_bound(&f, BoundKind::Prt, &rat(1), &config()).is_err());
        assert!(compute_comm_bound(&f, BoundKind::Disc, &ratio(1, 8), &config()).is_err());
        assert!(compute_comm_bound(&f, BoundKind::PrtLv, &ratio(1, 8), &config()).is_err());
    }

    #[test]
    fn caps_cut_off_oversized_grids() {
        let f = make_eq(4).unwrap();
        let mut config = RunConfig::new();
        config.caps = Caps {
            max_regions: 10,
            ..Caps::default()
        };
        assert!(matches!(
            compute_comm_bound(&f, BoundKind::Prt, &rat(0), &config),
            Err(crate::Error::Cap(_))
        ));
    }

    #[test]
    fn dual_witnesses_stay_in_natural_convention() {
        // All mu values of an optimal rec dual are nonnegative even on the
        // upper-bounded off-output rows, where the raw multiplier is <= 0.
        let f = make_eq(3).unwrap();
        let report = compute_comm_bound(&f, BoundKind::Rec(1), &ratio(1, 8), &config()).unwrap();
        assert_eq!(report.dual.side, Side::Dual);
        assert!(report.dual.mu.values().all(|v| *v >= rat(0)));
        assert!(report.dual.phi.is_empty() || report.dual.phi.values().all(|v| *v >= rat(0)));
    }
}
