//! Combinatorial query measures used as reference points for the LP bounds:
//! certificate complexity, sensitivity and block sensitivity.

use crate::error::{input_err, Result};
use crate::model::{submasks, QueryInstance};

fn value_table(instance: &QueryInstance) -> Result<Vec<Option<u16>>> {
    if instance.is_relation() {
        return input_err("combinatorial measures are defined for functions, not relations");
    }
    Ok((0..instance.input_count() as u32)
        .map(|x| instance.value(x))
        .collect())
}

/// Certificate complexity: the largest, over defined inputs, of the smallest
/// number of variables whose values on that input already force the output
/// on every defined input agreeing with them.
pub fn certificate_complexity(instance: &QueryInstance) -> Result<u32> {
    let vals = value_table(instance)?;
    let n = instance.n();
    let full = (1u32 << n) - 1;
    let mut worst = 0u32;
    for x in instance.defined_inputs() {
        let fx = vals[x as usize];
        // The full mask always certifies, so the scan has a ceiling.
        let mut best = n as u32;
        for mask in 0..=full {
            if mask.count_ones() >= best {
                continue;
            }
            let fixed = x & mask;
            let certifies =
                submasks(!mask & full).all(|free| match vals[(fixed | free) as usize] {
                    Some(v) => Some(v) == fx,
                    None => true,
                });
            if certifies {
                best = mask.count_ones();
            }
        }
        worst = worst.max(best);
    }
    Ok(worst)
}

/// Sensitivity: the largest number of single-bit flips that land on a
/// defined input with a different value.
pub fn sensitivity(instance: &QueryInstance) -> Result<u32> {
    let vals = value_table(instance)?;
    let n = instance.n();
    let mut worst = 0usize;
    for x in instance.defined_inputs() {
        let fx = vals[x as usize];
        let s = (0..n)
            .filter(|&i| {
                let y = x ^ (1u32 << i);
                vals[y as usize].is_some() && vals[y as usize] != fx
            })
            .count();
        worst = worst.max(s);
    }
    Ok(worst as u32)
}

/// Block sensitivity together with an input and a disjoint family of
/// sensitive blocks achieving it. `None` when nothing is defined; an empty
/// family when the function is constant on its domain. Ties prefer the
/// smallest input.
pub fn block_sensitivity_witness(instance: &QueryInstance) -> Result<Option<(u32, Vec<u32>)>> {
    let vals = value_table(instance)?;
    let n = instance.n();
    let full = (1u32 << n) - 1;
    let mut best: Option<(u32, Vec<u32>)> = None;
    for x in instance.defined_inputs() {
        let fx = vals[x as usize];
        let mut blocks: Vec<u32> = (1..=full)
            .filter(|&b| {
                let y = x ^ b;
                vals[y as usize].is_some() && vals[y as usize] != fx
            })
            .collect();
        // A maximum disjoint family can always be drawn from the
        // inclusion-minimal sensitive blocks.
        blocks = blocks
            .iter()
            .copied()
            .filter(|&b| !blocks.iter().any(|&c| c != b && c & b == c))
            .collect();
        blocks.sort_by_key(|b| (b.count_ones(), *b));
        let mut chosen = Vec::new();
        let mut packed = Vec::new();
        pack(&blocks, 0, &mut chosen, &mut packed);
        if best.as_ref().is_none_or(|(_, f)| packed.len() > f.len()) {
            best = Some((x, packed));
        }
    }
    Ok(best)
}

/// Block sensitivity: the largest disjoint family of blocks whose flip
/// changes the value, maximized over defined inputs.
pub fn block_sensitivity(instance: &QueryInstance) -> Result<u32> {
    Ok(block_sensitivity_witness(instance)?.map_or(0, |(_, blocks)| blocks.len() as u32))
}

/// Branch and bound over disjoint subfamilies. The first descent is the
/// greedy packing, after which the count bound prunes hopeless branches.
fn pack(blocks: &[u32], used: u32, chosen: &mut Vec<u32>, best: &mut Vec<u32>) {
    if chosen.len() > best.len() {
        *best = chosen.clone();
    }
    let avail = blocks.iter().filter(|&&b| b & used == 0).count();
    if chosen.len() + avail <= best.len() {
        return;
    }
    for (i, &b) in blocks.iter().enumerate() {
        if b & used == 0 {
            chosen.push(b);
            pack(&blocks[i + 1..], used | b, chosen, best);
            chosen.pop();
            pack(&blocks[i + 1..], used, chosen, best);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::standard::{make_constant_query, make_or, make_xor};
    use crate::instances::tribes::make_tribes;

    #[test]
    fn or_certificates_need_every_zero() {
        assert_eq!(certificate_complexity(&make_or(2).unwrap()).unwrap(), 2);
        assert_eq!(
            certificate_complexity(&make_constant_query(2).unwrap()).unwrap(),
            0
        );
    }

    #[test]
    fn tribes_certificates_cross_one_tribe() {
        assert_eq!(certificate_complexity(&make_tribes(4).unwrap()).unwrap(), 2);
    }

    #[test]
    fn or_blocks_are_the_singletons() {
        let f = make_or(4).unwrap();
        assert_eq!(block_sensitivity(&f).unwrap(), 4);
        let (x, blocks) = block_sensitivity_witness(&f).unwrap().unwrap();
        assert_eq!(x, 0);
        assert!(blocks.iter().all(|b| b.count_ones() == 1));
    }

    #[test]
    fn parity_is_fully_sensitive() {
        let f = make_xor(3).unwrap();
        assert_eq!(sensitivity(&f).unwrap(), 3);
        assert_eq!(block_sensitivity(&f).unwrap(), 3);
    }

    #[test]
    fn tribes_blocks_pair_up() {
        assert_eq!(block_sensitivity(&make_tribes(4).unwrap()).unwrap(), 2);
    }

    #[test]
    fn constant_measures_vanish() {
        let f = make_constant_query(3).unwrap();
        assert_eq!(sensitivity(&f).unwrap(), 0);
        assert_eq!(block_sensitivity(&f).unwrap(), 0);
        let (_, blocks) = block_sensitivity_witness(&f).unwrap().unwrap();
        assert!(blocks.is_empty());
    }

    #[test]
    fn undefined_everywhere_has_no_witness() {
        let f = QueryInstance::new(2, 1, false, vec![0; 4]).unwrap();
        assert_eq!(block_sensitivity(&f).unwrap(), 0);
        assert!(block_sensitivity_witness(&f).unwrap().is_none());
        assert_eq!(certificate_complexity(&f).unwrap(), 0);
    }

    #[test]
    fn relations_are_rejected() {
        let r = QueryInstance::new(2, 1, true, vec![0b11; 4]).unwrap();
        assert!(block_sensitivity(&r).is_err());
    }
}
