//! Decision trees over Boolean inputs and the query-side primal witnesses
//! their leaves induce.

use crate::error::{input_err, Result};
use crate::model::{Assignment, QueryInstance, Region, Witness};
use crate::rat::rat;

/// A deterministic decision tree. `var` is 1-based: variable `i` reads input
/// bit `i - 1`, `zero` handles the bit being 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryTree {
    Leaf {
        z: u16,
    },
    Node {
        var: u32,
        zero: Box<QueryTree>,
        one: Box<QueryTree>,
    },
}

impl QueryTree {
    pub fn depth(&self) -> u32 {
        match self {
            QueryTree::Leaf { .. } => 0,
            QueryTree::Node { zero, one, .. } => 1 + zero.depth().max(one.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            QueryTree::Leaf { .. } => 1,
            QueryTree::Node { zero, one, .. } => zero.leaf_count() + one.leaf_count(),
        }
    }
}

/// Walks the tree and returns each leaf's subcube (the partial assignment
/// collecting the answers along the path) with its announced output.
/// Rejects out-of-range variables, repeated queries on a path, and outputs
/// outside the instance's range. The returned subcubes partition the cube.
pub fn dtree_leaves(instance: &QueryInstance, tree: &QueryTree) -> Result<Vec<(Assignment, u16)>> {
    let mut out = Vec::new();
    walk(instance, tree, Assignment::empty(), &mut out)?;
    Ok(out)
}

fn walk(
    instance: &QueryInstance,
    tree: &QueryTree,
    path: Assignment,
    out: &mut Vec<(Assignment, u16)>,
) -> Result<()> {
    match tree {
        QueryTree::Leaf { z } => {
            if u32::from(*z) >= 1u32 << instance.m() {
                return input_err(format!(
                    "decision tree outputs {z}, outside the {}-bit output range",
                    instance.m()
                ));
            }
            out.push((path, *z));
            Ok(())
        }
        QueryTree::Node { var, zero, one } => {
            if *var == 0 || *var as usize > instance.n() {
                return input_err(format!(
                    "decision tree queries variable {var}, valid variables are 1..={}",
                    instance.n()
                ));
            }
            let bit = var - 1;
            if path.fixed_mask() & (1 << bit) != 0 {
                return input_err(format!(
                    "decision tree queries variable {var} twice on one path"
                ));
            }
            walk(instance, zero, path.fix(bit, false)?, out)?;
            walk(instance, one, path.fix(bit, true)?, out)
        }
    }
}

/// Converts a correct decision tree into a zero-error query-partition primal:
/// weight 1 on each leaf subcube under the leaf's output. Every input in a
/// leaf's subcube must be consistent with its announced output.
pub fn decision_tree_to_primal(instance: &QueryInstance, tree: &QueryTree) -> Result<Witness> {
    let leaves = dtree_leaves(instance, tree)?;
    for (asgn, z) in &leaves {
        for x in asgn.consistent_inputs(instance.n()) {
            if instance.defined(x) && !instance.allows(x, *z) {
                return input_err(format!(
                    "decision tree outputs {z} on input {x:#x}, which the instance forbids"
                ));
            }
        }
    }
    let kind = if instance.is_relation() {
        "qprt_relation"
    } else {
        "qprt"
    };
    let mut witness = Witness::primal(kind.to_string(), rat(0));
    for (asgn, z) in leaves {
        witness.regions.insert((z, Region::Assign(asgn)), rat(1));
    }
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::standard::{make_constant_query, make_or, make_xor};
    use crate::model::Region;
    use crate::oracle::deterministic_query;
    use crate::rat::{pow2, Rat};
    use num_traits::Zero;

    fn primal_cost(w: &Witness) -> Rat {
        let mut total = Rat::zero();
        for ((_, region), weight) in &w.regions {
            let Region::Assign(a) = region else {
                panic!("query witness holds assignments")
            };
            total += weight * pow2(i64::from(a.size()));
        }
        total
    }

    #[test]
    fn single_leaf_tree_costs_one() {
        let f = make_constant_query(2).unwrap();
        let w = decision_tree_to_primal(&f, &QueryTree::Leaf { z: 0 }).unwrap();
        assert_eq!(primal_cost(&w), rat(1));
    }

    #[test]
    fn two_variable_or_tree_costs_ten() {
        // Query variable 1; on 0 query variable 2. Leaves: {x1=1} answering 1,
        // {x1=0,x2=0} answering 0, {x1=0,x2=1} answering 1.
        let f = make_or(2).unwrap();
        let tree = QueryTree::Node {
            var: 1,
            zero: Box::new(QueryTree::Node {
                var: 2,
                zero: Box::new(QueryTree::Leaf { z: 0 }),
                one: Box::new(QueryTree::Leaf { z: 1 }),
            }),
            one: Box::new(QueryTree::Leaf { z: 1 }),
        };
        let w = decision_tree_to_primal(&f, &tree).unwrap();
        assert_eq!(primal_cost(&w), rat(10));
    }

    #[test]
    fn full_parity_tree_costs_sixteen() {
        let f = make_xor(2).unwrap();
        let (depth, tree) = deterministic_query(&f).unwrap();
        assert_eq!(depth, 2);
        let w = decision_tree_to_primal(&f, &tree).unwrap();
        assert_eq!(primal_cost(&w), rat(16));
    }

    #[test]
    fn leaves_partition_the_cube() {
        let f = make_or(3).unwrap();
        let (_, tree) = deterministic_query(&f).unwrap();
        let leaves = dtree_leaves(&f, &tree).unwrap();
        let mut seen = [0u32; 8];
        for (asgn, _) in &leaves {
            for x in asgn.consistent_inputs(3) {
                seen[x as usize] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn wrong_outputs_are_rejected() {
        let f = make_or(2).unwrap();
        assert!(decision_tree_to_primal(&f, &QueryTree::Leaf { z: 0 }).is_err());
    }

    #[test]
    fn repeated_queries_are_rejected() {
        let f = make_or(2).unwrap();
        let tree = QueryTree::Node {
            var: 1,
            zero: Box::new(QueryTree::Node {
                var: 1,
                zero: Box::new(QueryTree::Leaf { z: 0 }),
                one: Box::new(QueryTree::Leaf { z: 1 }),
            }),
            one: Box::new(QueryTree::Leaf { z: 1 }),
        };
        let err = dtree_leaves(&f, &tree).unwrap_err();
        assert!(format!("{err}").contains("twice"));
    }

    #[test]
    fn out_of_range_variables_are_rejected() {
        let f = make_or(2).unwrap();
        let tree = QueryTree::Node {
            var: 3,
            zero: Box::new(QueryTree::Leaf { z: 0 }),
            one: Box::new(QueryTree::Leaf { z: 1 }),
        };
        assert!(dtree_leaves(&f, &tree).is_err());
    }
}
