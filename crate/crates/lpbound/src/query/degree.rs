//! Approximate polynomial degree by exact LP feasibility in the multilinear
//! monomial basis.

use num_traits::Zero;

use crate::error::{check_err, input_err, Result};
use crate::lp::{LinearProgram, LpOutcome, Rel, Sense, VarSign};
use crate::model::{submasks, validate_epsilon, Caps, QueryInstance};
use crate::rat::{rat, Rat};

/// Smallest degree at which some multilinear polynomial stays within the
/// error budget of the function on every defined input while staying inside
/// `[0, 1]` on the whole cube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxDegree {
    pub degree: u32,
    /// Largest uniform margin left inside the error budget at that degree.
    pub slack: Rat,
    /// A zero margin means the budget is met only with equality; any
    /// strictly smaller error needs a higher degree.
    pub zero_slack: bool,
}

/// Finds the approximate degree by solving one exact feasibility LP per
/// candidate degree, smallest first.
pub fn approx_degree(instance: &QueryInstance, eps: &Rat, caps: &Caps) -> Result<ApproxDegree> {
    if instance.is_relation() || instance.m() != 1 {
        return input_err("approximate degree is defined for Boolean functions");
    }
    validate_epsilon(eps)?;
    if instance.defined_inputs().next().is_none() {
        // Any constant in the unit interval matches an empty requirement.
        return Ok(ApproxDegree {
            degree: 0,
            slack: eps.clone(),
            zero_slack: eps.is_zero(),
        });
    }
    for d in 0..=instance.n() as u32 {
        match degree_lp(instance, eps, d)?.solve(caps)? {
            LpOutcome::Optimal(sol) => {
                return Ok(ApproxDegree {
                    degree: d,
                    zero_slack: sol.objective.is_zero(),
                    slack: sol.objective,
                });
            }
            LpOutcome::Infeasible => continue,
            LpOutcome::Unbounded => {
                return check_err("margin maximization came back unbounded despite a defined input")
            }
        }
    }
    check_err("no degree admitted an approximation; full-degree interpolation must")
}

/// Maximize the margin `t` such that some polynomial of degree at most `d`
/// sits within `eps - t` of the function on defined inputs and within
/// `[0, 1]` everywhere.
fn degree_lp(instance: &QueryInstance, eps: &Rat, d: u32) -> Result<LinearProgram> {
    let n = instance.n();
    let full = (1u32 << n) - 1;
    let mut lp = LinearProgram::new(format!("degree[{d}]"), Sense::Max);
    let mut coeff_var = vec![None; 1usize << n];
    for mask in 0..=full {
        if mask.count_ones() <= d {
            let j = lp.add_var(format!("c[{mask:x}]"), VarSign::Free, rat(0))?;
            coeff_var[mask as usize] = Some(j);
        }
    }
    let t = lp.add_var("t", VarSign::Nonneg, rat(1))?;

    for x in 0..=full {
        let monomials: Vec<(usize, Rat)> = submasks(x)
            .filter_map(|s| coeff_var[s as usize].map(|j| (j, rat(1))))
            .collect();
        if let Some(v) = instance.value(x) {
            let mut hi = monomials.clone();
            hi.push((t, rat(1)));
            lp.add_constraint(format!("hi[{x}]"), hi, Rel::Le, rat(i64::from(v)) + eps)?;
            let mut lo = monomials.clone();
            lo.push((t, rat(-1)));
            lp.add_constraint(format!("lo[{x}]"), lo, Rel::Ge, rat(i64::from(v)) - eps)?;
        }
        lp.add_constraint(format!("cap[{x}]"), monomials.clone(), Rel::Le, rat(1))?;
        lp.add_constraint(format!("floor[{x}]"), monomials, Rel::Ge, rat(0))?;
    }
    Ok(lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::standard::{make_constant_query, make_or, make_xor};
    use crate::model::QueryInstance;
    use crate::rat::ratio;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn constant_needs_degree_zero() {
        let f = make_constant_query(2).unwrap();
        let report = approx_degree(&f, &ratio(1, 8), &caps()).unwrap();
        assert_eq!(report.degree, 0);
        assert_eq!(report.slack, ratio(1, 8));
        assert!(!report.zero_slack);
    }

    #[test]
    fn exact_parity_needs_full_degree() {
        let f = make_xor(2).unwrap();
        let report = approx_degree(&f, &rat(0), &caps()).unwrap();
        assert_eq!(report.degree, 2);
        assert!(report.zero_slack);
    }

    #[test]
    fn or_with_a_third_of_error_drops_to_linear() {
        let f = make_or(2).unwrap();
        let report = approx_degree(&f, &ratio(1, 3), &caps()).unwrap();
        assert_eq!(report.degree, 1);
        assert!(report.zero_slack);
    }

    #[test]
    fn undefined_everywhere_is_degree_zero() {
        let f = QueryInstance::new(2, 1, false, vec![0; 4]).unwrap();
        let report = approx_degree(&f, &ratio(1, 4), &caps()).unwrap();
        assert_eq!(report.degree, 0);
        assert_eq!(report.slack, ratio(1, 4));
    }

    #[test]
    fn relations_and_wide_outputs_are_rejected() {
        let r = QueryInstance::new(2, 1, true, vec![0b11; 4]).unwrap();
        assert!(approx_degree(&r, &rat(0), &caps()).is_err());
        let wide = QueryInstance::new(1, 2, false, vec![0b1, 0b100]).unwrap();
        assert!(approx_degree(&wide, &rat(0), &caps()).is_err());
    }
}
