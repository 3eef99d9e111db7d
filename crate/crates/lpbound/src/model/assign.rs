//! Partial assignments (subcubes) of Boolean variables.
//!
//! Variable `i` (1-based in trees and reports) corresponds to bit `i - 1` of
//! an input `x` encoded as an unsigned integer, so variable 1 is the least
//! significant bit.

use crate::error::{cap_err, input_err, Result};

/// A partial assignment: the variables in `fixed_mask` are pinned to the bits
/// of `values`, the rest are free. The empty assignment (nothing fixed) is a
/// valid region containing every input.
///
/// Ordering is by `(fixed_mask, values)`, which fixes the variable order of
/// every assignment-indexed LP in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment {
    fixed_mask: u32,
    values: u32,
}

impl Assignment {
    pub fn new(fixed_mask: u32, values: u32) -> Result<Self> {
        if values & !fixed_mask != 0 {
            return input_err("assignment sets a bit outside its fixed mask");
        }
        Ok(Assignment { fixed_mask, values })
    }

    pub const fn empty() -> Self {
        Assignment {
            fixed_mask: 0,
            values: 0,
        }
    }

    pub fn fixed_mask(&self) -> u32 {
        self.fixed_mask
    }

    pub fn values(&self) -> u32 {
        self.values
    }

    /// Number of fixed variables, written `|A|`.
    pub fn size(&self) -> u32 {
        self.fixed_mask.count_ones()
    }

    pub fn consistent(&self, x: u32) -> bool {
        x & self.fixed_mask == self.values
    }

    /// Extends by fixing variable at `bit` (0-based) to `value`.
    pub fn fix(&self, bit: u32, value: bool) -> Result<Self> {
        if self.fixed_mask >> bit & 1 == 1 {
            return input_err(format!("variable {} is already fixed", bit + 1));
        }
        Ok(Assignment {
            fixed_mask: self.fixed_mask | 1 << bit,
            values: self.values | (u32::from(value)) << bit,
        })
    }

    /// Inputs consistent with the assignment, ascending, on `n` variables.
    pub fn consistent_inputs(&self, n: usize) -> impl Iterator<Item = u32> + '_ {
        let free = !self.fixed_mask & ((1u32 << n) - 1);
        let values = self.values;
        submasks(free).map(move |f| values | f)
    }

    /// Compact display form used in LP variable names and dumps.
    pub fn label(&self) -> String {
        format!("{:x}.{:x}", self.fixed_mask, self.values)
    }
}

/// Submasks of `mask` in increasing numeric order, including 0 and `mask`.
pub fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == mask {
            None
        } else {
            Some((cur.wrapping_sub(mask)) & mask)
        };
        Some(cur)
    })
}

/// All `3^n` assignments on `n` variables ordered by `(fixed_mask, values)`,
/// starting with the empty assignment.
pub fn enumerate_assignments(n: usize, cap: usize) -> Result<Vec<Assignment>> {
    if n > 20 {
        return input_err(format!(
            "assignment enumeration supports at most 20 variables, got {n}"
        ));
    }
    let count = 3u128.pow(n as u32);
    if count > cap as u128 {
        return cap_err(format!(
            "{count} assignments on {n} variables exceeds the cap of {cap}"
        ));
    }
    let mut out = Vec::with_capacity(count as usize);
    for fixed_mask in 0..1u32 << n {
        for values in submasks(fixed_mask) {
            out.push(Assignment { fixed_mask, values });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_are_powers_of_three() {
        assert_eq!(enumerate_assignments(1, 10).unwrap().len(), 3);
        assert_eq!(enumerate_assignments(2, 10).unwrap().len(), 9);
        assert_eq!(enumerate_assignments(4, 100).unwrap().len(), 81);
    }

    #[test]
    fn first_entry_is_the_empty_assignment_and_order_is_strict() {
        let asgns = enumerate_assignments(3, 100).unwrap();
        assert_eq!(asgns[0], Assignment::empty());
        for w in asgns.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn every_input_is_consistent_with_2_to_the_n_assignments() {
        for n in [1usize, 2, 4, 6] {
            let asgns = enumerate_assignments(n, 1 << 20).unwrap();
            for x in 0..1u32 << n {
                let got = asgns.iter().filter(|a| a.consistent(x)).count();
                assert_eq!(got, 1 << n, "input {x} on n={n}");
            }
        }
    }

    #[test]
    fn consistent_inputs_enumerates_the_subcube() {
        let a = Assignment::new(0b101, 0b100).unwrap();
        let xs: Vec<_> = a.consistent_inputs(3).collect();
        assert_eq!(xs, vec![0b100, 0b110]);
        assert_eq!(a.size(), 2);
    }

    #[test]
    fn stray_value_bits_are_rejected() {
        assert!(Assignment::new(0b01, 0b10).is_err());
    }

    #[test]
    fn fix_refuses_a_repeat() {
        let a = Assignment::empty().fix(2, true).unwrap();
        assert!(a.fix(2, false).is_err());
        assert!(a.consistent(0b100));
        assert!(!a.consistent(0b000));
    }
}
