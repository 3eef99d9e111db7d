//! Rectangle measures of a fixed input distribution.
//!
//! Both quantities scan every combinatorial rectangle of the grid, so they
//! are meant for the small instances this crate targets. They are the
//! distribution-side counterparts of the rectangle and discrepancy LPs:
//! a distribution certifies a lower bound through one of these measures,
//! and the routines in [`super::lemmas`] convert such certificates to and
//! from optimal LP duals.

use num_traits::{Signed, Zero};

use crate::error::{input_err, Result};
use crate::model::{enumerate_rectangles, Rectangle};
use crate::model::{Caps, CommInstance, Distribution};
use crate::rat::{rat, Rat};

/// Value of the distribution-relative rectangle measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TildeRec {
    /// At least one rectangle qualifies; the measure is the minimum of
    /// `1 / lambda(R on z-cells)` over qualifying rectangles.
    Finite(Rat),
    /// No rectangle qualifies, so the measure is vacuously unbounded.
    NoQualifying,
}

/// Value of the distribution-relative discrepancy measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscLambda {
    /// Some rectangle is unbalanced; the measure is the minimum of
    /// `1 / |imbalance(R)|` over rectangles with nonzero imbalance.
    Finite(Rat),
    /// Every rectangle is perfectly balanced under the distribution.
    Infinite,
}

fn validate_distribution(f: &CommInstance, lambda: &Distribution) -> Result<()> {
    let cells = f.nrows() * f.ncols();
    for (index, _) in lambda.entries() {
        if index >= cells {
            return input_err(format!(
                "distribution index {index} is outside the {cells}-cell grid"
            ));
        }
    }
    Ok(())
}

fn split_mass(f: &CommInstance, lambda: &Distribution, rect: &Rectangle, z: u16) -> (Rat, Rat) {
    let mut on_z = rat(0);
    let mut off_z = rat(0);
    for (x, y) in rect.cells() {
        let mass = lambda.mass_of(f.cell_index(x, y));
        if mass.is_zero() {
            continue;
        }
        if f.value(x, y) == Some(z) {
            on_z += mass;
        } else {
            off_z += mass;
        }
    }
    (on_z, off_z)
}

/// Minimum of `1 / lambda(R on z-cells)` over all rectangles `R` whose
/// mass off the z-cells (undefined cells included) is strictly smaller
/// than `eps` times their mass on the z-cells.
///
/// A rectangle with no such dominance never qualifies, so at `eps = 0`
/// the result is always [`TildeRec::NoQualifying`].
pub fn tilde_rec(
    f: &CommInstance,
    z: u16,
    lambda: &Distribution,
    eps: &Rat,
    caps: &Caps,
) -> Result<TildeRec> {
    if z >= f.alphabet() {
        return input_err(format!("output {z} is outside the alphabet"));
    }
    if eps < &rat(0) || eps >= &rat(1) {
        return input_err("eps must satisfy 0 <= eps < 1");
    }
    validate_distribution(f, lambda)?;
    let mut best: Option<Rat> = None;
    for rect in enumerate_rectangles(f.nrows(), f.ncols(), caps.max_regions)? {
        let (on_z, off_z) = split_mass(f, lambda, &rect, z);
        if eps.clone() * &on_z <= off_z {
            continue;
        }
        // Qualifying forces eps * on_z > 0, hence on_z > 0.
        let value = on_z.recip();
        if best.as_ref().is_none_or(|b| &value < b) {
            best = Some(value);
        }
    }
    Ok(match best {
        Some(value) => TildeRec::Finite(value),
        None => TildeRec::NoQualifying,
    })
}

/// Minimum of `1 / |imbalance(R)|` over all rectangles, where the
/// imbalance of `R` is the lambda-mass of its 0-cells minus the
/// lambda-mass of its 1-cells. Requires a total Boolean function.
pub fn disc_lambda(f: &CommInstance, lambda: &Distribution, caps: &Caps) -> Result<DiscLambda> {
    if f.alphabet() != 2 {
        return input_err("discrepancy needs a Boolean function");
    }
    if !f.is_total() {
        return input_err("discrepancy needs a total function");
    }
    validate_distribution(f, lambda)?;
    let mut best: Option<Rat> = None;
    for rect in enumerate_rectangles(f.nrows(), f.ncols(), caps.max_regions)? {
        let mut imbalance = rat(0);
        for (x, y) in rect.cells() {
            let mass = lambda.mass_of(f.cell_index(x, y));
            if mass.is_zero() {
                continue;
            }
            match f.value(x, y) {
                Some(0) => imbalance += mass,
                _ => imbalance -= mass,
            }
        }
        if imbalance.is_zero() {
            continue;
        }
        let value = imbalance.abs().recip();
        if best.as_ref().is_none_or(|b| &value < b) {
            best = Some(value);
        }
    }
    Ok(match best {
        Some(value) => DiscLambda::Finite(value),
        None => DiscLambda::Infinite,
    })
}
