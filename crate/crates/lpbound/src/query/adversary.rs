//! The classical adversary bound as an exact LP, and the index
//! distributions an adversary reads off a feasible partition primal.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{check_err, input_err, Result};
use crate::lp::{LinearProgram, Rel, Sense, VarSign};
use crate::model::{bits, Caps, QueryInstance, RunConfig, Witness};
use crate::query::truncated_primal_family;
use crate::rat::{fmt_rat, rat, ratio, Rat};

/// The classical adversary bound: the best family of index distributions
/// `p_x` maximizing, over pairs with different values, the overlap
/// `sum over differing i of min(p_x(i), p_y(i))`; the bound is the inverse
/// of that overlap. Zero when no pair of defined inputs differs in value.
pub fn classical_adversary(instance: &QueryInstance, caps: &Caps) -> Result<Rat> {
    if instance.is_relation() {
        return input_err("the adversary bound compares outputs, so it needs a function");
    }
    let defined: Vec<u32> = instance.defined_inputs().collect();
    let pairs: Vec<(u32, u32)> = defined
        .iter()
        .flat_map(|&x| {
            defined
                .iter()
                .filter(move |&&y| y > x && instance.value(y) != instance.value(x))
                .map(move |&y| (x, y))
        })
        .collect();
    if pairs.is_empty() {
        return Ok(Rat::zero());
    }

    let n = instance.n();
    let mut lp = LinearProgram::new("cadv".to_string(), Sense::Max);
    let mut p_base: BTreeMap<u32, usize> = BTreeMap::new();
    for &x in &defined {
        let base = lp.add_var(format!("p[{x}][0]"), VarSign::Nonneg, rat(0))?;
        for i in 1..n {
            lp.add_var(format!("p[{x}][{i}]"), VarSign::Nonneg, rat(0))?;
        }
        p_base.insert(x, base);
    }
    let t = lp.add_var("t".to_string(), VarSign::Nonneg, rat(1))?;
    for &x in &defined {
        let coeffs: Vec<(usize, Rat)> = (0..n).map(|i| (p_base[&x] + i, rat(1))).collect();
        lp.add_constraint(format!("norm[{x}]"), coeffs, Rel::Eq, rat(1))?;
    }
    // One overlap variable per differing index, clamped under both sides'
    // probabilities; their total must carry the objective.
    for &(x, y) in &pairs {
        let mut total = Vec::new();
        for i in bits(u64::from(x ^ y)) {
            let m = lp.add_var(format!("m[{x},{y}][{i}]"), VarSign::Nonneg, rat(0))?;
            lp.add_constraint(
                format!("mx[{x},{y}][{i}]"),
                vec![(m, rat(1)), (p_base[&x] + i, rat(-1))],
                Rel::Le,
                rat(0),
            )?;
            lp.add_constraint(
                format!("my[{x},{y}][{i}]"),
                vec![(m, rat(1)), (p_base[&y] + i, rat(-1))],
                Rel::Le,
                rat(0),
            )?;
            total.push((m, rat(1)));
        }
        total.push((t, rat(-1)));
        lp.add_constraint(format!("pair[{x},{y}]"), total, Rel::Ge, rat(0))?;
    }

    let overlap = lp.solve(caps)?.optimal()?.objective.clone();
    if overlap.is_zero() {
        return check_err("pairs differ in at least one index, so the overlap is positive");
    }
    Ok(overlap.recip())
}

/// Overlap of the index distributions read off a feasible partition primal,
/// checked against the proven floor `1 - 4 eps` on every value-splitting
/// pair of defined inputs.
#[derive(Debug, Clone)]
pub struct HybridReport {
    /// Witness objective, the partition value the family certifies.
    pub alpha: Rat,
    pub pairs_checked: usize,
    /// Smallest overlap total over the checked pairs, with the pair
    /// achieving it; `None` when no pair splits the values.
    pub worst: Option<(u32, u32, Rat)>,
    /// The proven floor `1 - 4 eps`.
    pub guarantee: Rat,
}

/// For each defined input, conditions the truncated family on that input's
/// own output and reads the induced index weights `q_x(i)`: the weight of
/// assignments fixing index `i`. An assignment fixing nothing supports no
/// index, so each `q_x` may sum below one.
pub fn adversary_from_qprt_primal(
    instance: &QueryInstance,
    witness: &Witness,
    config: &RunConfig,
) -> Result<HybridReport> {
    let eps = &witness.epsilon;
    if *eps >= ratio(1, 2) {
        return input_err(format!(
            "the adversary reduction needs eps < 1/2, got {}",
            fmt_rat(eps)
        ));
    }
    let family = truncated_primal_family(instance, witness, config)?;
    let n = instance.n();
    let floor = Rat::one() - rat(2) * eps;
    let guarantee = Rat::one() - rat(4) * eps;

    let mut q_of: BTreeMap<u32, Vec<Rat>> = BTreeMap::new();
    for x in instance.defined_inputs() {
        let fx = instance.value(x).expect("defined input");
        let mine: Vec<_> = family
            .members
            .iter()
            .filter(|(z, a, _)| *z == fx && a.consistent(x))
            .collect();
        let alpha_x: Rat = mine.iter().map(|(_, _, w)| w.clone()).sum();
        if alpha_x < floor {
            return check_err(format!(
                "truncation ate too much mass at input {x}: {} < {}",
                fmt_rat(&alpha_x),
                fmt_rat(&floor)
            ));
        }
        let mut q = vec![Rat::zero(); n];
        for (_, a, w) in mine {
            for i in bits(u64::from(a.fixed_mask())) {
                q[i] += w / &alpha_x;
            }
        }
        q_of.insert(x, q);
    }

    let mut pairs_checked = 0usize;
    let mut worst: Option<(u32, u32, Rat)> = None;
    for (&x, qx) in &q_of {
        for (&y, qy) in q_of.range(x + 1..) {
            if instance.value(x) == instance.value(y) {
                continue;
            }
            let total: Rat = bits(u64::from(x ^ y))
                .map(|i| {
                    if qx[i] <= qy[i] {
                        qx[i].clone()
                    } else {
                        qy[i].clone()
                    }
                })
                .sum();
            if total < guarantee {
                return check_err(format!(
                    "overlap for inputs {x} and {y} fell to {}, below {}",
                    fmt_rat(&total),
                    fmt_rat(&guarantee)
                ));
            }
            pairs_checked += 1;
            if worst.as_ref().is_none_or(|(_, _, w)| total < *w) {
                worst = Some((x, y, total));
            }
        }
    }

    Ok(HybridReport {
        alpha: family.alpha,
        pairs_checked,
        worst,
        guarantee,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::standard::{make_constant_query, make_or, make_xor};
    use crate::model::BoundKind;
    use crate::query::compute_query_bound;

    #[test]
    fn or_adversary_counts_the_bits() {
        for n in 2..=4usize {
            let f = make_or(n).unwrap();
            assert_eq!(
                classical_adversary(&f, &Caps::default()).unwrap(),
                rat(n as i64)
            );
        }
    }

    #[test]
    fn parity_adversary_is_the_arity() {
        let f = make_xor(2).unwrap();
        assert_eq!(classical_adversary(&f, &Caps::default()).unwrap(), rat(2));
    }

    #[test]
    fn constant_has_no_adversary() {
        let f = make_constant_query(2).unwrap();
        assert_eq!(classical_adversary(&f, &Caps::default()).unwrap(), rat(0));
    }

    #[test]
    fn or_hybrid_overlap_stays_large() {
        let f = make_or(2).unwrap();
        let eps = ratio(1, 16);
        let witness = compute_query_bound(&f, BoundKind::QPrt, &eps, &RunConfig::new())
            .unwrap()
            .primal;
        let report = adversary_from_qprt_primal(&f, &witness, &RunConfig::new()).unwrap();
        assert_eq!(report.guarantee, ratio(3, 4));
        let (_, _, total) = report.worst.unwrap();
        assert!(total >= ratio(3, 4));
        assert_eq!(report.pairs_checked, 3);
    }

    #[test]
    fn parity_hybrid_overlap_stays_large() {
        let f = make_xor(2).unwrap();
        let eps = ratio(1, 16);
        let witness = compute_query_bound(&f, BoundKind::QPrt, &eps, &RunConfig::new())
            .unwrap()
            .primal;
        let report = adversary_from_qprt_primal(&f, &witness, &RunConfig::new()).unwrap();
        assert!(report.worst.unwrap().2 >= ratio(3, 4));
        assert_eq!(report.pairs_checked, 4);
    }

    #[test]
    fn relations_are_rejected() {
        let r = QueryInstance::new(2, 1, true, vec![0b11; 4]).unwrap();
        assert!(classical_adversary(&r, &Caps::default()).is_err());
    }
}
