//! Two-phase primal simplex on a dense rational tableau.
//!
//! Bland's smallest-index rule everywhere: the entering column is the lowest
//! eligible index, ratio ties break toward the row whose basic column index
//! is lowest. That makes every solve deterministic and cycle-free.

use std::time::Instant;

use num_traits::Zero;

use super::{LinearProgram, LpOutcome, LpSolution, Rel, Sense, VarSign};
use crate::error::{cap_err, Result};
use crate::model::Caps;
use crate::rat::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ColKind {
    /// Structural column for a variable (negated for nonpositive variables).
    Plus(usize),
    /// Negative part of a free variable.
    Minus(usize),
    Slack(usize),
    Surplus(usize),
    Artificial(usize),
}

impl ColKind {
    fn is_artificial(self) -> bool {
        matches!(self, ColKind::Artificial(_))
    }
}

struct Tableau {
    cols: Vec<ColKind>,
    /// Row-major; each row has `cols.len() + 1` entries, rhs last.
    rows: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    /// Original constraint index per tableau row.
    orig_row: Vec<usize>,
    /// Whether the original row was negated to make its rhs nonnegative.
    flipped: Vec<bool>,
}

enum Step {
    Optimal,
    Unbounded,
}

pub(super) fn solve(lp: &LinearProgram, caps: &Caps) -> Result<LpOutcome> {
    let started = Instant::now();
    let mut t = build_tableau(lp, caps)?;
    let ncols = t.cols.len();
    let mut pivots: u64 = 0;

    let has_artificial = t.cols.iter().any(|c| c.is_artificial());
    if has_artificial {
        // Phase 1: minimize the sum of artificials.
        let phase1_cost: Vec<Rat> = t
            .cols
            .iter()
            .map(|c| {
                if c.is_artificial() {
                    Rat::from_integer(1.into())
                } else {
                    Rat::zero()
                }
            })
            .collect();
        let mut obj = reduced_objective(&t, &phase1_cost);
        match run(&mut t, &mut obj, |_| true, caps, &mut pivots, started)? {
            Step::Unbounded => unreachable!("phase-1 objective is bounded below by zero"),
            Step::Optimal => {}
        }
        let phase1_value = -obj[ncols].clone();
        if !phase1_value.is_zero() {
            return Ok(LpOutcome::Infeasible);
        }
        drive_out_artificials(&mut t, caps, &mut pivots, started)?;
    }

    // Phase 2: original objective, internally always min-sense.
    let phase2_cost = internal_costs(lp, &t.cols);
    let mut obj = reduced_objective(&t, &phase2_cost);
    let allow = |col: &ColKind| !col.is_artificial();
    let cols_snapshot = t.cols.clone();
    let step = run(
        &mut t,
        &mut obj,
        |j| allow(&cols_snapshot[j]),
        caps,
        &mut pivots,
        started,
    )?;
    if matches!(step, Step::Unbounded) {
        return Ok(LpOutcome::Unbounded);
    }

    // Column values from the final basis.
    let ncols = t.cols.len();
    let mut col_value = vec![Rat::zero(); ncols];
    for (i, &b) in t.basis.iter().enumerate() {
        col_value[b] = t.rows[i][ncols].clone();
    }
    let mut primal = vec![Rat::zero(); lp.var_count()];
    for (j, kind) in t.cols.iter().enumerate() {
        match kind {
            ColKind::Plus(v) => match lp.vars()[*v].sign {
                VarSign::Nonpos => primal[*v] -= &col_value[j],
                _ => primal[*v] += &col_value[j],
            },
            ColKind::Minus(v) => primal[*v] -= &col_value[j],
            _ => {}
        }
    }
    let mut objective = Rat::zero();
    for (v, x) in lp.vars().iter().zip(&primal) {
        objective += &v.objective * x;
    }

    // Multipliers: read the reduced objective row under each row's identity
    // column (the artificial if the row had one, otherwise its slack); undo
    // the row flip and the max-to-min negation.
    let mut canon = vec![Rat::zero(); lp.con_count()];
    let mut id_col = vec![None; lp.con_count()];
    for (j, kind) in t.cols.iter().enumerate() {
        match kind {
            ColKind::Artificial(i) => id_col[*i] = Some(j),
            ColKind::Slack(i) if id_col[*i].is_none() => id_col[*i] = Some(j),
            _ => {}
        }
    }
    for i in 0..lp.con_count() {
        if let Some(j) = id_col[i] {
            canon[i] = -obj[j].clone();
        }
    }
    // Rows dropped as redundant keep multiplier zero.
    let mut dual = vec![Rat::zero(); lp.con_count()];
    let mut row_kept = vec![false; lp.con_count()];
    for &i in &t.orig_row {
        row_kept[i] = true;
    }
    for i in 0..lp.con_count() {
        if !row_kept[i] {
            continue;
        }
        let mut y = canon[i].clone();
        if t.flipped[i] {
            y = -y;
        }
        if lp.sense() == Sense::Max {
            y = -y;
        }
        dual[i] = y;
    }

    Ok(LpOutcome::Optimal(LpSolution {
        objective,
        primal,
        dual,
        pivots,
    }))
}

/// Objective coefficients per canonical column for the internal min problem.
fn internal_costs(lp: &LinearProgram, cols: &[ColKind]) -> Vec<Rat> {
    let negate_all = lp.sense() == Sense::Max;
    cols.iter()
        .map(|kind| {
            let mut c = match kind {
                ColKind::Plus(v) => match lp.vars()[*v].sign {
                    VarSign::Nonpos => -lp.vars()[*v].objective.clone(),
                    _ => lp.vars()[*v].objective.clone(),
                },
                ColKind::Minus(v) => -lp.vars()[*v].objective.clone(),
                _ => Rat::zero(),
            };
            if negate_all {
                c = -c;
            }
            c
        })
        .collect()
}

fn build_tableau(lp: &LinearProgram, caps: &Caps) -> Result<Tableau> {
    let nvars = lp.var_count();
    let mut cols: Vec<ColKind> = (0..nvars).map(ColKind::Plus).collect();
    for (v, var) in lp.vars().iter().enumerate() {
        if var.sign == VarSign::Free {
            cols.push(ColKind::Minus(v));
        }
    }
    let plus_col: Vec<usize> = (0..nvars).collect();
    let minus_col: std::collections::BTreeMap<usize, usize> = cols
        .iter()
        .enumerate()
        .filter_map(|(j, k)| match k {
            ColKind::Minus(v) => Some((*v, j)),
            _ => None,
        })
        .collect();

    // Normalize rows to nonnegative rhs, then hand out slack, surplus
    // and artificial columns by the post-flip relation.
    let m = lp.con_count();
    let mut flipped = vec![false; m];
    let mut eff_rel = vec![Rel::Eq; m];
    for (i, con) in lp.constraints().iter().enumerate() {
        let flip = con.rhs < Rat::zero();
        flipped[i] = flip;
        eff_rel[i] = match (con.rel, flip) {
            (Rel::Le, true) => Rel::Ge,
            (Rel::Ge, true) => Rel::Le,
            (rel, _) => rel,
        };
    }
    let mut slack_col = vec![None; m];
    let mut art_col = vec![None; m];
    for i in 0..m {
        if eff_rel[i] == Rel::Le {
            slack_col[i] = Some(cols.len());
            cols.push(ColKind::Slack(i));
        }
    }
    let mut surplus_col = vec![None; m];
    for i in 0..m {
        if eff_rel[i] == Rel::Ge {
            surplus_col[i] = Some(cols.len());
            cols.push(ColKind::Surplus(i));
        }
    }
    for i in 0..m {
        if eff_rel[i] != Rel::Le {
            art_col[i] = Some(cols.len());
            cols.push(ColKind::Artificial(i));
        }
    }
    if cols.len() > caps.max_lp_vars {
        return cap_err(format!(
            "LP {:?} needs {} tableau columns, cap is {}",
            lp.name(),
            cols.len(),
            caps.max_lp_vars
        ));
    }

    let ncols = cols.len();
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (i, con) in lp.constraints().iter().enumerate() {
        let mut row = vec![Rat::zero(); ncols + 1];
        for (v, c) in &con.coeffs {
            let mut c = match lp.vars()[*v].sign {
                VarSign::Nonpos => -c.clone(),
                _ => c.clone(),
            };
            if flipped[i] {
                c = -c;
            }
            row[plus_col[*v]] = c.clone();
            if let Some(&mc) = minus_col.get(v) {
                row[mc] = -c;
            }
        }
        row[ncols] = if flipped[i] {
            -con.rhs.clone()
        } else {
            con.rhs.clone()
        };
        match eff_rel[i] {
            Rel::Le => {
                let j = slack_col[i].unwrap();
                row[j] = Rat::from_integer(1.into());
                basis.push(j);
            }
            Rel::Ge => {
                let js = surplus_col[i].unwrap();
                row[js] = -Rat::from_integer(1.into());
                let ja = art_col[i].unwrap();
                row[ja] = Rat::from_integer(1.into());
                basis.push(ja);
            }
            Rel::Eq => {
                let ja = art_col[i].unwrap();
                row[ja] = Rat::from_integer(1.into());
                basis.push(ja);
            }
        }
        rows.push(row);
    }

    Ok(Tableau {
        cols,
        rows,
        basis,
        orig_row: (0..m).collect(),
        flipped,
    })
}

/// Builds the reduced objective row `c_j - z_j` (rhs slot holds `-z`) by
/// eliminating the basic columns from the raw cost vector.
fn reduced_objective(t: &Tableau, cost: &[Rat]) -> Vec<Rat> {
    let mut obj = cost.to_vec();
    obj.push(Rat::zero());
    for (i, &b) in t.basis.iter().enumerate() {
        if obj[b].is_zero() {
            continue;
        }
        let factor = obj[b].clone();
        for (o, r) in obj.iter_mut().zip(&t.rows[i]) {
            if !r.is_zero() {
                *o -= &factor * r;
            }
        }
    }
    obj
}

/// Runs Bland-rule pivoting until optimal or unbounded.
fn run(
    t: &mut Tableau,
    obj: &mut [Rat],
    allow: impl Fn(usize) -> bool,
    caps: &Caps,
    pivots: &mut u64,
    started: Instant,
) -> Result<Step> {
    let ncols = t.cols.len();
    loop {
        let entering = (0..ncols).find(|&j| allow(j) && obj[j] < Rat::zero());
        let Some(j) = entering else {
            return Ok(Step::Optimal);
        };
        let mut best: Option<(Rat, usize, usize)> = None;
        for (i, row) in t.rows.iter().enumerate() {
            if row[j] > Rat::zero() {
                let ratio = &row[ncols] / &row[j];
                let replace = match &best {
                    None => true,
                    Some((r, b, _)) => ratio < *r || (ratio == *r && t.basis[i] < *b),
                };
                if replace {
                    best = Some((ratio, t.basis[i], i));
                }
            }
        }
        let Some((_, _, i)) = best else {
            return Ok(Step::Unbounded);
        };
        pivot(t, obj, i, j, caps, pivots, started)?;
    }
}

fn pivot(
    t: &mut Tableau,
    obj: &mut [Rat],
    row: usize,
    col: usize,
    caps: &Caps,
    pivots: &mut u64,
    started: Instant,
) -> Result<()> {
    *pivots += 1;
    if *pivots > caps.max_pivots {
        return cap_err(format!(
            "simplex exceeded the pivot cap of {}",
            caps.max_pivots
        ));
    }
    if pivots.is_multiple_of(1024) {
        if let Some(budget) = caps.time_budget_secs {
            if started.elapsed().as_secs() >= budget {
                return cap_err(format!("simplex exceeded the time budget of {budget}s"));
            }
        }
    }

    let head = t.rows[row][col].clone();
    if head != Rat::from_integer(1.into()) {
        for x in t.rows[row].iter_mut() {
            if !x.is_zero() {
                *x /= &head;
            }
        }
    }
    let prow = t.rows[row].clone();
    for (r, other) in t.rows.iter_mut().enumerate() {
        if r == row || other[col].is_zero() {
            continue;
        }
        let factor = other[col].clone();
        for (o, p) in other.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *o -= &factor * p;
            }
        }
    }
    if !obj[col].is_zero() {
        let factor = obj[col].clone();
        for (o, p) in obj.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *o -= &factor * p;
            }
        }
    }
    t.basis[row] = col;
    Ok(())
}

/// After a zero-cost phase 1, replace every basic artificial with a real
/// column, or drop its row as redundant when none is available.
fn drive_out_artificials(
    t: &mut Tableau,
    caps: &Caps,
    pivots: &mut u64,
    started: Instant,
) -> Result<()> {
    let ncols = t.cols.len();
    let mut dead_obj = vec![Rat::zero(); ncols + 1];
    let mut removed: Vec<usize> = Vec::new();
    for i in 0..t.rows.len() {
        if !t.cols[t.basis[i]].is_artificial() {
            continue;
        }
        let replacement =
            (0..ncols).find(|&j| !t.cols[j].is_artificial() && !t.rows[i][j].is_zero());
        match replacement {
            // The row's rhs is zero here, so pivoting on any nonzero entry
            // keeps the basis feasible.
            Some(j) => pivot(t, &mut dead_obj, i, j, caps, pivots, started)?,
            None => removed.push(i),
        }
    }
    if !removed.is_empty() {
        let mut keep = vec![true; t.rows.len()];
        for &i in &removed {
            keep[i] = false;
        }
        let mut rows = Vec::with_capacity(t.rows.len() - removed.len());
        let mut basis = Vec::new();
        let mut orig = Vec::new();
        for (i, k) in keep.iter().enumerate() {
            if *k {
                rows.push(std::mem::take(&mut t.rows[i]));
                basis.push(t.basis[i]);
                orig.push(t.orig_row[i]);
            }
        }
        t.rows = rows;
        t.basis = basis;
        t.orig_row = orig;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::PointSide;
    use crate::rat::{rat, ratio};
    use std::collections::BTreeMap;

    #[test]
    fn redundant_equalities_are_dropped_with_zero_multiplier() {
        // x + y = 2 stated twice; min x + 2y -> x = 2, y = 0.
        let mut lp = LinearProgram::new("redundant", Sense::Min);
        let x = lp.add_var("x", VarSign::Nonneg, rat(1)).unwrap();
        let y = lp.add_var("y", VarSign::Nonneg, rat(2)).unwrap();
        lp.add_constraint("first", vec![(x, rat(1)), (y, rat(1))], Rel::Eq, rat(2))
            .unwrap();
        lp.add_constraint("again", vec![(x, rat(1)), (y, rat(1))], Rel::Eq, rat(2))
            .unwrap();
        let sol = lp
            .solve(&Caps::default())
            .unwrap()
            .optimal()
            .unwrap()
            .clone();
        assert_eq!(sol.objective, rat(2));
        assert_eq!(sol.primal[x], rat(2));
    }

    #[test]
    fn nonpositive_variables_are_handled_by_negation() {
        // max y with y <= 0 and y >= -4; optimum 0 at the sign bound, so
        // push it away with objective -y instead: min sense.
        let mut lp = LinearProgram::new("nonpos", Sense::Min);
        let y = lp.add_var("y", VarSign::Nonpos, rat(1)).unwrap();
        lp.add_constraint("floor", vec![(y, rat(1))], Rel::Ge, rat(-4))
            .unwrap();
        let sol = lp
            .solve(&Caps::default())
            .unwrap()
            .optimal()
            .unwrap()
            .clone();
        assert_eq!(sol.objective, rat(-4));
        assert_eq!(sol.primal[y], rat(-4));
    }

    #[test]
    fn mixed_relations_certify_strong_duality() {
        // A small LP touching all three relation kinds and a free variable.
        let mut lp = LinearProgram::new("mixed", Sense::Min);
        let x = lp.add_var("x", VarSign::Nonneg, rat(3)).unwrap();
        let y = lp.add_var("y", VarSign::Free, rat(1)).unwrap();
        let z = lp.add_var("z", VarSign::Nonneg, ratio(1, 2)).unwrap();
        lp.add_constraint("a", vec![(x, rat(1)), (y, rat(1))], Rel::Ge, rat(2))
            .unwrap();
        lp.add_constraint("b", vec![(y, rat(1)), (z, rat(2))], Rel::Eq, rat(1))
            .unwrap();
        lp.add_constraint("c", vec![(x, rat(1)), (z, rat(1))], Rel::Le, rat(5))
            .unwrap();
        // solve() certifies the dual internally; reaching Optimal is the test.
        let out = lp.solve(&Caps::default()).unwrap();
        let sol = out.optimal().unwrap();
        let dual_pt: BTreeMap<String, Rat> = lp
            .constraints()
            .iter()
            .zip(&sol.dual)
            .map(|(c, v)| (c.name.clone(), v.clone()))
            .collect();
        let rep = lp.check_point(&dual_pt, PointSide::Dual).unwrap();
        assert!(rep.feasible());
        assert_eq!(rep.objective, sol.objective);
    }

    #[test]
    fn pivot_counts_are_deterministic() {
        let mut lp = LinearProgram::new("det", Sense::Max);
        let x = lp.add_var("x", VarSign::Nonneg, rat(2)).unwrap();
        let y = lp.add_var("y", VarSign::Nonneg, rat(3)).unwrap();
        lp.add_constraint("r1", vec![(x, rat(1)), (y, rat(1))], Rel::Le, rat(4))
            .unwrap();
        lp.add_constraint("r2", vec![(x, rat(1)), (y, rat(3))], Rel::Le, rat(6))
            .unwrap();
        let a = lp
            .solve(&Caps::default())
            .unwrap()
            .optimal()
            .unwrap()
            .clone();
        let b = lp
            .solve(&Caps::default())
            .unwrap()
            .optimal()
            .unwrap()
            .clone();
        assert_eq!(a.objective, b.objective);
        assert_eq!(a.primal, b.primal);
        assert_eq!(a.dual, b.dual);
        assert_eq!(a.pivots, b.pivots);
        // Optimum at the vertex x = 3, y = 1.
        assert_eq!(a.objective, rat(9));
    }
}
