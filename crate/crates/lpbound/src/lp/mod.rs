//! Exact linear programming over rationals.
//!
//! [`LinearProgram`] is a named-variable, named-constraint model with
//! optimization sense, three relation kinds and three variable signs.
//! [`LinearProgram::solve`] runs a two-phase dense simplex with Bland's rule
//! over `BigRational` coefficients: no tolerances, no rounding, and every
//! optimal answer ships with a strong-duality certificate that is re-checked
//! against [`LinearProgram::dual_of`] before the solution is returned.

mod simplex;

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{check_err, input_err, Result};
use crate::model::Caps;
use crate::rat::{fmt_rat, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarSign {
    Nonneg,
    Free,
    /// Used by mechanically generated duals; the bound LPs themselves only
    /// declare nonnegative and free variables.
    Nonpos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

impl Rel {
    fn symbol(self) -> &'static str {
        match self {
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Variable {
    pub name: String,
    pub sign: VarSign,
    pub objective: Rat,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub name: String,
    /// Sparse coefficients by variable index, ascending, duplicate-free.
    pub coeffs: Vec<(usize, Rat)>,
    pub rel: Rel,
    pub rhs: Rat,
}

/// A linear program over named variables.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    name: String,
    sense: Sense,
    vars: Vec<Variable>,
    cons: Vec<Constraint>,
    var_index: BTreeMap<String, usize>,
    con_index: BTreeMap<String, usize>,
}

/// Result of a solve: exact optimum with primal and dual values, or a
/// verdict that no optimum exists.
#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> &'static str {
        match self {
            LpOutcome::Optimal(_) => "optimal",
            LpOutcome::Infeasible => "infeasible",
            LpOutcome::Unbounded => "unbounded",
        }
    }

    pub fn optimal(&self) -> Result<&LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Ok(s),
            other => check_err(format!(
                "expected an optimal solution, LP is {}",
                other.status()
            )),
        }
    }
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub objective: Rat,
    /// Variable values, aligned with the program's variable order.
    pub primal: Vec<Rat>,
    /// Multipliers aligned with the constraint order, feasible for
    /// [`LinearProgram::dual_of`] with dual objective equal to `objective`.
    pub dual: Vec<Rat>,
    pub pivots: u64,
}

/// One violated condition from a feasibility check.
#[derive(Debug, Clone)]
pub struct Violation {
    /// Constraint name, or variable name for a sign violation.
    pub name: String,
    /// `lhs - rhs` for the violated row; for sign violations the value itself.
    pub amount: Rat,
    pub detail: String,
}

/// Outcome of checking an explicit point against a program.
#[derive(Debug, Clone)]
pub struct FeasReport {
    pub objective: Rat,
    pub violations: Vec<Violation>,
}

impl FeasReport {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn describe(&self) -> String {
        if self.feasible() {
            return format!("feasible, objective {}", fmt_rat(&self.objective));
        }
        let head: Vec<String> = self
            .violations
            .iter()
            .take(4)
            .map(|v| v.detail.clone())
            .collect();
        format!(
            "{} violation(s): {}{}",
            self.violations.len(),
            head.join("; "),
            if self.violations.len() > 4 {
                "; ..."
            } else {
                ""
            }
        )
    }
}

/// Which role a point plays in [`LinearProgram::check_point`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointSide {
    Primal,
    Dual,
}

impl LinearProgram {
    pub fn new(name: impl Into<String>, sense: Sense) -> Self {
        LinearProgram {
            name: name.into(),
            sense,
            vars: Vec::new(),
            cons: Vec::new(),
            var_index: BTreeMap::new(),
            con_index: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        sign: VarSign,
        objective: Rat,
    ) -> Result<usize> {
        let name = name.into();
        if self.var_index.contains_key(&name) {
            return input_err(format!("duplicate variable name {name:?}"));
        }
        let idx = self.vars.len();
        self.var_index.insert(name.clone(), idx);
        self.vars.push(Variable {
            name,
            sign,
            objective,
        });
        Ok(idx)
    }

    /// Adds a constraint from sparse coefficients. Duplicate variable
    /// entries are summed; out-of-range indices are rejected.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<(usize, Rat)>,
        rel: Rel,
        rhs: Rat,
    ) -> Result<usize> {
        let name = name.into();
        if self.con_index.contains_key(&name) {
            return input_err(format!("duplicate constraint name {name:?}"));
        }
        let mut merged: BTreeMap<usize, Rat> = BTreeMap::new();
        for (j, c) in coeffs {
            if j >= self.vars.len() {
                return input_err(format!(
                    "constraint {name:?} references variable index {j} out of range"
                ));
            }
            *merged.entry(j).or_insert_with(Rat::zero) += c;
        }
        merged.retain(|_, c| !c.is_zero());
        let idx = self.cons.len();
        self.con_index.insert(name.clone(), idx);
        self.cons.push(Constraint {
            name,
            coeffs: merged.into_iter().collect(),
            rel,
            rhs,
        });
        Ok(idx)
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn con_count(&self) -> usize {
        self.cons.len()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.cons
    }

    pub fn var_named(&self, name: &str) -> Option<usize> {
        self.var_index.get(name).copied()
    }

    pub fn con_named(&self, name: &str) -> Option<usize> {
        self.con_index.get(name).copied()
    }

    fn validate(&self) -> Result<()> {
        if self.vars.is_empty() {
            return input_err(format!("LP {:?} has no variables", self.name));
        }
        if self.cons.is_empty() {
            return input_err(format!(
                "LP {:?} has no constraints; objective-only programs are rejected",
                self.name
            ));
        }
        Ok(())
    }

    /// Solves to proven optimality (or proven infeasibility/unboundedness)
    /// with exact arithmetic. On an optimal outcome the returned dual values
    /// have been checked feasible for [`Self::dual_of`] and both objectives
    /// equal; failure of that internal certificate is an error, never a
    /// silently wrong answer.
    pub fn solve(&self, caps: &Caps) -> Result<LpOutcome> {
        self.validate()?;
        let outcome = simplex::solve(self, caps)?;
        if let LpOutcome::Optimal(sol) = &outcome {
            self.certify(sol)?;
        }
        Ok(outcome)
    }

    fn certify(&self, sol: &LpSolution) -> Result<()> {
        let primal_pt: BTreeMap<String, Rat> = self
            .vars
            .iter()
            .zip(&sol.primal)
            .map(|(v, x)| (v.name.clone(), x.clone()))
            .collect();
        let report = self.check_point(&primal_pt, PointSide::Primal)?;
        if !report.feasible() {
            return check_err(format!(
                "internal certificate: computed primal is infeasible: {}",
                report.describe()
            ));
        }
        if report.objective != sol.objective {
            return check_err("internal certificate: primal objective mismatch".to_string());
        }
        let dual_pt: BTreeMap<String, Rat> = self
            .cons
            .iter()
            .zip(&sol.dual)
            .map(|(c, y)| (c.name.clone(), y.clone()))
            .collect();
        let dual_report = self.check_point(&dual_pt, PointSide::Dual)?;
        if !dual_report.feasible() {
            return check_err(format!(
                "internal certificate: computed dual is infeasible: {}",
                dual_report.describe()
            ));
        }
        if dual_report.objective != sol.objective {
            return check_err(format!(
                "internal certificate: strong duality gap {} vs {}",
                fmt_rat(&dual_report.objective),
                fmt_rat(&sol.objective)
            ));
        }
        Ok(())
    }

    /// The exact dual program. Variables are named after this program's
    /// constraints and vice versa, so points can be checked on either side
    /// by name.
    pub fn dual_of(&self) -> Result<LinearProgram> {
        type RowSign = fn(Rel) -> VarSign;
        type ColRel = fn(VarSign) -> Rel;
        self.validate()?;
        let (dual_sense, row_sign, col_rel): (Sense, RowSign, ColRel) = match self.sense {
            Sense::Min => (
                Sense::Max,
                |rel| match rel {
                    Rel::Ge => VarSign::Nonneg,
                    Rel::Le => VarSign::Nonpos,
                    Rel::Eq => VarSign::Free,
                },
                |sign| match sign {
                    VarSign::Nonneg => Rel::Le,
                    VarSign::Free => Rel::Eq,
                    VarSign::Nonpos => Rel::Ge,
                },
            ),
            Sense::Max => (
                Sense::Min,
                |rel| match rel {
                    Rel::Ge => VarSign::Nonpos,
                    Rel::Le => VarSign::Nonneg,
                    Rel::Eq => VarSign::Free,
                },
                |sign| match sign {
                    VarSign::Nonneg => Rel::Ge,
                    VarSign::Free => Rel::Eq,
                    VarSign::Nonpos => Rel::Le,
                },
            ),
        };

        let mut dual = LinearProgram::new(format!("dual({})", self.name), dual_sense);
        for con in &self.cons {
            dual.add_var(con.name.clone(), row_sign(con.rel), con.rhs.clone())?;
        }
        // Transposed coefficient lists, constraint per primal variable.
        let mut columns: Vec<Vec<(usize, Rat)>> = vec![Vec::new(); self.vars.len()];
        for (i, con) in self.cons.iter().enumerate() {
            for (j, c) in &con.coeffs {
                columns[*j].push((i, c.clone()));
            }
        }
        for (j, var) in self.vars.iter().enumerate() {
            dual.add_constraint(
                var.name.clone(),
                std::mem::take(&mut columns[j]),
                col_rel(var.sign),
                var.objective.clone(),
            )?;
        }
        Ok(dual)
    }

    /// Evaluates an explicit point. Variables absent from the map default
    /// to zero; names that are not variables of the (primal or dual) program
    /// are an input error. Returns the exact objective and all violations
    /// (variable signs and constraint rows) with exact slacks.
    pub fn check_point(
        &self,
        point: &BTreeMap<String, Rat>,
        side: PointSide,
    ) -> Result<FeasReport> {
        match side {
            PointSide::Dual => self.dual_of()?.check_point(point, PointSide::Primal),
            PointSide::Primal => {
                self.validate()?;
                for name in point.keys() {
                    if !self.var_index.contains_key(name) {
                        return input_err(format!("point references unknown variable {name:?}"));
                    }
                }
                let values: Vec<Rat> = self
                    .vars
                    .iter()
                    .map(|v| point.get(&v.name).cloned().unwrap_or_else(Rat::zero))
                    .collect();
                let mut violations = Vec::new();
                for (v, x) in self.vars.iter().zip(&values) {
                    let bad = match v.sign {
                        VarSign::Nonneg => x < &Rat::zero(),
                        VarSign::Nonpos => x > &Rat::zero(),
                        VarSign::Free => false,
                    };
                    if bad {
                        violations.push(Violation {
                            name: v.name.clone(),
                            amount: x.clone(),
                            detail: format!("variable sign violated: {} = {}", v.name, fmt_rat(x)),
                        });
                    }
                }
                let mut objective = Rat::zero();
                for (v, x) in self.vars.iter().zip(&values) {
                    objective += &v.objective * x;
                }
                for con in &self.cons {
                    let mut lhs = Rat::zero();
                    for (j, c) in &con.coeffs {
                        lhs += c * &values[*j];
                    }
                    let diff = &lhs - &con.rhs;
                    let bad = match con.rel {
                        Rel::Le => diff > Rat::zero(),
                        Rel::Ge => diff < Rat::zero(),
                        Rel::Eq => !diff.is_zero(),
                    };
                    if bad {
                        violations.push(Violation {
                            name: con.name.clone(),
                            amount: diff.clone(),
                            detail: format!(
                                "{}: lhs {} {} rhs {}, off by {}",
                                con.name,
                                fmt_rat(&lhs),
                                con.rel.symbol(),
                                fmt_rat(&con.rhs),
                                fmt_rat(&diff)
                            ),
                        });
                    }
                }
                Ok(FeasReport {
                    objective,
                    violations,
                })
            }
        }
    }

    /// Plain-text rendering: objective, one constraint per line, variable
    /// signs. All numbers are exact fractions.
    pub fn dump(&self) -> String {
        let term = |c: &Rat, name: &str| -> String {
            if c == &Rat::from_integer(1.into()) {
                name.to_string()
            } else if c == &Rat::from_integer((-1).into()) {
                format!("-{name}")
            } else {
                format!("{} {}", fmt_rat(c), name)
            }
        };
        let mut out = String::new();
        out.push_str(&format!("# {}\n", self.name));
        let obj_terms: Vec<String> = self
            .vars
            .iter()
            .filter(|v| !v.objective.is_zero())
            .map(|v| term(&v.objective, &v.name))
            .collect();
        out.push_str(&format!(
            "{} {}\n",
            match self.sense {
                Sense::Min => "min",
                Sense::Max => "max",
            },
            if obj_terms.is_empty() {
                "0".to_string()
            } else {
                obj_terms.join(" + ")
            }
        ));
        out.push_str("subject to\n");
        for con in &self.cons {
            let terms: Vec<String> = con
                .coeffs
                .iter()
                .map(|(j, c)| term(c, &self.vars[*j].name))
                .collect();
            out.push_str(&format!(
                "  {}: {} {} {}\n",
                con.name,
                if terms.is_empty() {
                    "0".to_string()
                } else {
                    terms.join(" + ")
                },
                con.rel.symbol(),
                fmt_rat(&con.rhs)
            ));
        }
        let mut signs: Vec<String> = Vec::new();
        for v in &self.vars {
            signs.push(match v.sign {
                VarSign::Nonneg => format!("{} >= 0", v.name),
                VarSign::Nonpos => format!("{} <= 0", v.name),
                VarSign::Free => format!("{} free", v.name),
            });
        }
        out.push_str(&format!("with {}\n", signs.join(", ")));
        out
    }
}

/// Exact weak-duality gap between two explicit points: both are checked
/// feasible for their side (an infeasible point is an error carrying the
/// violation summary), then the gap `primal objective - dual objective` is
/// returned, oriented so it is nonnegative (for a min-sense program the
/// primal objective dominates).
pub fn weak_duality_gap(
    lp: &LinearProgram,
    primal_point: &BTreeMap<String, Rat>,
    dual_point: &BTreeMap<String, Rat>,
) -> Result<Rat> {
    let p = lp.check_point(primal_point, PointSide::Primal)?;
    if !p.feasible() {
        return check_err(format!("primal point is infeasible: {}", p.describe()));
    }
    let d = lp.check_point(dual_point, PointSide::Dual)?;
    if !d.feasible() {
        return check_err(format!("dual point is infeasible: {}", d.describe()));
    }
    let gap = match lp.sense() {
        Sense::Min => &p.objective - &d.objective,
        Sense::Max => &d.objective - &p.objective,
    };
    if gap < Rat::zero() {
        return check_err(format!(
            "weak duality violated: primal {} vs dual {}",
            fmt_rat(&p.objective),
            fmt_rat(&d.objective)
        ));
    }
    Ok(gap)
}
