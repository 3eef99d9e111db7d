//! Constructions read off a feasible partition primal: a certificate
//! verifier with one-sided error and a low-degree approximating polynomial.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{check_err, input_err, Result};
use crate::model::{submasks, QueryInstance, RunConfig, Witness};
use crate::query::truncated_primal_family;
use crate::rat::{fmt_rat, rat, ratio, Rat};

/// How well the weight family doubles as a proof system: the verifier for
/// `x` draws a cheap assignment consistent with `x` carrying `x`'s own
/// output, accepts `x` with certainty, and accepts differently-valued
/// inputs rarely.
#[derive(Debug, Clone)]
pub struct VerifierReport {
    /// Witness objective, the partition value the family certifies.
    pub alpha: Rat,
    /// Largest assignment size the verifier ever reads.
    pub query_budget: u32,
    /// Smallest normalizer over defined inputs; at least `1 - 2 eps`.
    pub min_alpha_x: Rat,
    /// Largest probability of accepting an input with a different value.
    pub worst_accept: Rat,
    /// The proven ceiling `2 eps / (1 - 2 eps)`.
    pub guarantee: Rat,
}

/// Builds the verifier from a feasible `qprt` primal witness and checks its
/// acceptance guarantees exactly, over every pair of defined inputs with
/// different values.
pub fn verifier_from_qprt_primal(
    instance: &QueryInstance,
    witness: &Witness,
    config: &RunConfig,
) -> Result<VerifierReport> {
    let eps = &witness.epsilon;
    if *eps >= ratio(1, 2) {
        return input_err(format!(
            "the verifier needs eps < 1/2, got {}",
            fmt_rat(eps)
        ));
    }
    if instance.defined_inputs().next().is_none() {
        return input_err("the verifier needs at least one defined input");
    }
    let family = truncated_primal_family(instance, witness, config)?;
    let floor = Rat::one() - rat(2) * eps;
    let guarantee = rat(2) * eps / &floor;

    let mut min_alpha_x: Option<Rat> = None;
    let mut alpha_of: BTreeMap<u32, Rat> = BTreeMap::new();
    for x in instance.defined_inputs() {
        let fx = instance.value(x).expect("defined input");
        let alpha_x: Rat = family
            .members
            .iter()
            .filter(|(z, a, _)| *z == fx && a.consistent(x))
            .map(|(_, _, w)| w.clone())
            .sum();
        if alpha_x < floor {
            return check_err(format!(
                "truncation ate too much mass at input {x}: {} < {}",
                fmt_rat(&alpha_x),
                fmt_rat(&floor)
            ));
        }
        if min_alpha_x.as_ref().is_none_or(|m| alpha_x < *m) {
            min_alpha_x = Some(alpha_x.clone());
        }
        alpha_of.insert(x, alpha_x);
    }

    let mut worst_accept = Rat::zero();
    for x in instance.defined_inputs() {
        let fx = instance.value(x).expect("defined input");
        for y in instance.defined_inputs() {
            if instance.value(y) == Some(fx) {
                continue;
            }
            let both: Rat = family
                .members
                .iter()
                .filter(|(z, a, _)| *z == fx && a.consistent(x) && a.consistent(y))
                .map(|(_, _, w)| w.clone())
                .sum();
            let accept = both / &alpha_of[&x];
            if accept > guarantee {
                return check_err(format!(
                    "the verifier for input {x} accepts input {y} with probability {}, above {}",
                    fmt_rat(&accept),
                    fmt_rat(&guarantee)
                ));
            }
            if accept > worst_accept {
                worst_accept = accept;
            }
        }
    }

    Ok(VerifierReport {
        alpha: family.alpha,
        query_budget: family.budget,
        min_alpha_x: min_alpha_x.expect("some input is defined"),
        worst_accept,
        guarantee,
    })
}

/// A multilinear polynomial assembled from the 1-output side of a feasible
/// partition primal. It stays inside `[0, 1]` on the whole cube and within
/// `2 eps` of the function on defined inputs.
#[derive(Debug, Clone)]
pub struct PolynomialReport {
    /// Coefficients over monomial masks; only nonzero entries are kept.
    pub coeffs: BTreeMap<u32, Rat>,
    pub degree: u32,
    /// Witness objective, the partition value the family certifies.
    pub alpha: Rat,
    /// Largest deviation from the function over defined inputs.
    pub max_defined_error: Rat,
}

/// Expands the truncated 1-side of a `qprt` primal into monomials and
/// certifies its range and approximation error exactly, on every input.
pub fn polynomial_from_qprt_primal(
    instance: &QueryInstance,
    witness: &Witness,
    config: &RunConfig,
) -> Result<PolynomialReport> {
    if instance.m() != 1 {
        return input_err("the approximating polynomial targets Boolean outputs");
    }
    let family = truncated_primal_family(instance, witness, config)?;
    let ones: Vec<_> = family
        .members
        .iter()
        .filter(|(z, _, _)| *z == 1)
        .map(|(_, a, w)| (*a, w.clone()))
        .collect();

    // Indicator of an assignment, expanded: fixed ones stay as variables,
    // fixed zeros contribute an inclusion-exclusion over their subsets.
    let mut coeffs: BTreeMap<u32, Rat> = BTreeMap::new();
    for (a, w) in &ones {
        let pos = a.values();
        let zeros = a.fixed_mask() & !a.values();
        for t in submasks(zeros) {
            let signed = if t.count_ones() % 2 == 0 {
                w.clone()
            } else {
                -w.clone()
            };
            *coeffs.entry(pos | t).or_insert_with(Rat::zero) += signed;
        }
    }
    coeffs.retain(|_, c| !c.is_zero());
    let degree = coeffs.keys().map(|m| m.count_ones()).max().unwrap_or(0);
    if degree > family.budget {
        return check_err("the expansion exceeds the family's assignment sizes");
    }

    let full = (1u32 << instance.n()) - 1;
    let two_eps = rat(2) * &witness.epsilon;
    let mut max_defined_error = Rat::zero();
    for x in 0..=full {
        let direct: Rat = ones
            .iter()
            .filter(|(a, _)| a.consistent(x))
            .map(|(_, w)| w.clone())
            .sum();
        let expanded: Rat = submasks(x).filter_map(|s| coeffs.get(&s)).cloned().sum();
        if direct != expanded {
            return check_err(format!("monomial expansion disagrees at input {x}"));
        }
        if direct < Rat::zero() || direct > Rat::one() {
            return check_err(format!(
                "polynomial leaves the unit interval at input {x}: {}",
                fmt_rat(&direct)
            ));
        }
        if let Some(v) = instance.value(x) {
            let err = (direct - rat(i64::from(v))).abs();
            if err > two_eps {
                return check_err(format!(
                    "polynomial misses input {x} by {}, above {}",
                    fmt_rat(&err),
                    fmt_rat(&two_eps)
                ));
            }
            if err > max_defined_error {
                max_defined_error = err;
            }
        }
    }

    Ok(PolynomialReport {
        coeffs,
        degree,
        alpha: family.alpha,
        max_defined_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::standard::{make_or, make_xor};
    use crate::model::BoundKind;
    use crate::query::compute_query_bound;

    fn optimal_primal(f: &QueryInstance, eps: &Rat) -> Witness {
        compute_query_bound(f, BoundKind::QPrt, eps, &RunConfig::new())
            .unwrap()
            .primal
    }

    #[test]
    fn or_verifier_rarely_accepts_other_values() {
        let f = make_or(2).unwrap();
        let witness = optimal_primal(&f, &ratio(1, 8));
        let report = verifier_from_qprt_primal(&f, &witness, &RunConfig::new()).unwrap();
        assert_eq!(report.guarantee, ratio(1, 3));
        assert!(report.worst_accept <= ratio(1, 3));
        assert!(report.min_alpha_x >= ratio(3, 4));
    }

    #[test]
    fn exact_parity_polynomial_is_the_interpolation() {
        let f = make_xor(2).unwrap();
        let witness = optimal_primal(&f, &rat(0));
        let report = polynomial_from_qprt_primal(&f, &witness, &RunConfig::new()).unwrap();
        assert_eq!(report.degree, 2);
        assert!(report.max_defined_error.is_zero());
        assert_eq!(report.coeffs.get(&0b01), Some(&rat(1)));
        assert_eq!(report.coeffs.get(&0b10), Some(&rat(1)));
        assert_eq!(report.coeffs.get(&0b11), Some(&rat(-2)));
        assert_eq!(report.coeffs.get(&0b00), None);
    }

    #[test]
    fn or_polynomial_respects_the_error_budget() {
        let f = make_or(4).unwrap();
        let witness = optimal_primal(&f, &ratio(1, 8));
        let report = polynomial_from_qprt_primal(&f, &witness, &RunConfig::new()).unwrap();
        assert!(report.max_defined_error <= ratio(1, 4));
        assert!(report.degree <= 4);
    }

    #[test]
    fn hypotheses_are_enforced() {
        let f = make_or(2).unwrap();
        let eps = ratio(1, 8);
        let dual = compute_query_bound(&f, BoundKind::QPrt, &eps, &RunConfig::new())
            .unwrap()
            .dual;
        let err = verifier_from_qprt_primal(&f, &dual, &RunConfig::new()).unwrap_err();
        assert_eq!(err.exit_code(), 2);

        let empty = Witness::primal(BoundKind::QPrt.token(), eps);
        let err = verifier_from_qprt_primal(&f, &empty, &RunConfig::new()).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
