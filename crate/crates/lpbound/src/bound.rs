//! Shared plumbing between the communication- and query-side bound families:
//! a bound LP bundled with the index maps that translate between solver
//! vectors and self-contained witnesses.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{check_err, input_err, Result};
use crate::lp::{FeasReport, LinearProgram, LpOutcome, PointSide, Rel};
use crate::model::{BoundKind, Caps, Region, Side, Witness};
use crate::rat::{log2_approx, Rat};

/// Which constraint family a row belongs to and how its multiplier relates
/// to the witness value: `mu` rows store the multiplier directly on `>=`/`=`
/// rows and negated on `<=` rows (so witness values stay nonnegative in the
/// bound's natural statement); `phi` rows follow the program's
/// `phi_negated` flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum RowTag {
    Mu(usize, Rel),
    Phi(usize, Rel),
}

/// A bound LP plus the variable and row maps needed to read witnesses in
/// and out. Construct through the per-kind builders in `comm` and `query`.
pub struct BoundProgram {
    pub kind: BoundKind,
    pub epsilon: Rat,
    pub(crate) lp: LinearProgram,
    pub(crate) vars: Vec<(u16, Region)>,
    pub(crate) var_index: BTreeMap<(u16, Region), usize>,
    pub(crate) rows: Vec<RowTag>,
    pub(crate) phi_negated: bool,
}

/// A solved bound: the exact optimum with both optimal witnesses.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub epsilon: Rat,
    /// Exact LP optimum.
    pub value: Rat,
    /// Display-only logarithm of `value`.
    pub log2_value: f64,
    pub pivots: u64,
    pub lp_vars: usize,
    pub lp_cons: usize,
    pub primal: Witness,
    pub dual: Witness,
    /// For the maximized one-output bounds, the output that attains the max.
    pub chosen_z: Option<u16>,
}

/// Result of checking an explicit witness against its bound program.
#[derive(Debug, Clone)]
pub struct WitnessCheck {
    pub side: Side,
    pub report: FeasReport,
}

impl WitnessCheck {
    pub fn feasible(&self) -> bool {
        self.report.feasible()
    }

    /// The value this witness certifies when feasible: an upper bound on the
    /// LP optimum for a primal witness, a lower bound for a dual one.
    pub fn objective(&self) -> &Rat {
        &self.report.objective
    }
}

impl BoundProgram {
    pub(crate) fn assemble(
        kind: BoundKind,
        epsilon: Rat,
        lp: LinearProgram,
        vars: Vec<(u16, Region)>,
        rows: Vec<RowTag>,
        phi_negated: bool,
    ) -> Self {
        let var_index = vars.iter().enumerate().map(|(j, key)| (*key, j)).collect();
        BoundProgram {
            kind,
            epsilon,
            lp,
            vars,
            var_index,
            rows,
            phi_negated,
        }
    }

    pub fn lp(&self) -> &LinearProgram {
        &self.lp
    }

    /// Solves the program and packages the optimum with both witnesses.
    /// The bound LPs are feasible and bounded by construction, so any other
    /// outcome is reported as a failed check.
    pub fn report(&self, caps: &Caps) -> Result<BoundReport> {
        let outcome = self.lp.solve(caps)?;
        let sol = match &outcome {
            LpOutcome::Optimal(sol) => sol,
            other => {
                return check_err(format!(
                    "{} program is unexpectedly {}",
                    self.kind.token(),
                    other.status()
                ))
            }
        };
        Ok(BoundReport {
            kind: self.kind,
            epsilon: self.epsilon.clone(),
            value: sol.objective.clone(),
            log2_value: log2_approx(&sol.objective),
            pivots: sol.pivots,
            lp_vars: self.lp.var_count(),
            lp_cons: self.lp.con_count(),
            primal: self.primal_witness(&sol.primal),
            dual: self.dual_witness(&sol.dual),
            chosen_z: None,
        })
    }

    pub(crate) fn primal_witness(&self, values: &[Rat]) -> Witness {
        let mut w = Witness::primal(self.kind.token(), self.epsilon.clone());
        for (j, key) in self.vars.iter().enumerate() {
            if !values[j].is_zero() {
                w.regions.insert(*key, values[j].clone());
            }
        }
        w
    }

    pub(crate) fn dual_witness(&self, multipliers: &[Rat]) -> Witness {
        let mut w = Witness::dual(self.kind.token(), self.epsilon.clone());
        for (i, tag) in self.rows.iter().enumerate() {
            let y = &multipliers[i];
            if y.is_zero() {
                continue;
            }
            match tag {
                RowTag::Mu(c, Rel::Le) => w.mu.insert(*c, -y.clone()),
                RowTag::Mu(c, _) => w.mu.insert(*c, y.clone()),
                RowTag::Phi(c, Rel::Le) if self.phi_negated => w.phi.insert(*c, -y.clone()),
                RowTag::Phi(c, _) => w.phi.insert(*c, y.clone()),
            };
        }
        w
    }

    /// Translates a witness into a named point on the right side of the LP.
    pub fn witness_point(&self, witness: &Witness) -> Result<(BTreeMap<String, Rat>, PointSide)> {
        match witness.side {
            Side::Primal => {
                if !witness.mu.is_empty() || !witness.phi.is_empty() {
                    return input_err(
                        "primal witnesses carry region weights, not multiplier values",
                    );
                }
                let mut pt = BTreeMap::new();
                for (key, weight) in &witness.regions {
                    let Some(&j) = self.var_index.get(key) else {
                        let (label, region) = key;
                        return input_err(format!(
                            "witness weights label {label} on a region outside this program: {}",
                            region_label(region)
                        ));
                    };
                    pt.insert(self.lp.vars()[j].name.clone(), weight.clone());
                }
                Ok((pt, PointSide::Primal))
            }
            Side::Dual => {
                if !witness.regions.is_empty() {
                    return input_err("dual witnesses carry multiplier values, not region weights");
                }
                let mut mu_row: BTreeMap<usize, usize> = BTreeMap::new();
                let mut phi_row: BTreeMap<usize, usize> = BTreeMap::new();
                for (i, tag) in self.rows.iter().enumerate() {
                    match tag {
                        RowTag::Mu(c, _) => mu_row.insert(*c, i),
                        RowTag::Phi(c, _) => phi_row.insert(*c, i),
                    };
                }
                let mut pt = BTreeMap::new();
                for (family, rows, values) in [
                    ("mu", &mu_row, &witness.mu),
                    ("phi", &phi_row, &witness.phi),
                ] {
                    for (c, v) in values {
                        let Some(&i) = rows.get(c) else {
                            return input_err(format!(
                                "witness sets {family}[{c}] but the program has no such row"
                            ));
                        };
                        let y = match (self.rows[i], family) {
                            (RowTag::Mu(_, Rel::Le), _) => -v.clone(),
                            (RowTag::Phi(_, Rel::Le), _) if self.phi_negated => -v.clone(),
                            _ => v.clone(),
                        };
                        if !y.is_zero() {
                            pt.insert(self.lp.constraints()[i].name.clone(), y);
                        }
                    }
                }
                Ok((pt, PointSide::Dual))
            }
        }
    }

    /// Checks an explicit witness: exact objective plus every violation.
    pub fn check_witness(&self, witness: &Witness) -> Result<WitnessCheck> {
        let (pt, side) = self.witness_point(witness)?;
        let report = self.lp.check_point(&pt, side)?;
        Ok(WitnessCheck {
            side: witness.side,
            report,
        })
    }
}

fn region_label(region: &Region) -> String {
    match region {
        Region::Rect(r) => format!("rectangle {}", r.label()),
        Region::Assign(a) => format!("assignment {}", a.label()),
    }
}
