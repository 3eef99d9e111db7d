//! Turning an exact partition-type primal witness into a monochromatic
//! cover, the combinatorial object a deterministic protocol induces.

use num_traits::Zero;

use crate::error::{check_err, input_err, Result};
use crate::model::{BoundKind, CommInstance, Rectangle, Region, Side, Witness};
use crate::rat::{fmt_rat, rat};

/// Reads a zero-error partition-type primal witness as a list of labelled
/// monochromatic rectangles covering every defined cell.
///
/// Every support rectangle must be monochromatic for its label and each
/// defined cell must collect total weight at least one from rectangles
/// labelled with an allowed answer; both are checked exactly. The returned
/// list is ordered by `(label, rectangle)`.
pub fn extract_monochromatic_cover(
    f: &CommInstance,
    witness: &Witness,
) -> Result<Vec<(u16, Rectangle)>> {
    if witness.side != Side::Primal {
        return input_err("cover extraction needs a primal witness");
    }
    let kind = BoundKind::from_token(&witness.kind)?;
    match kind {
        BoundKind::Prt | BoundKind::PrtRelation | BoundKind::PrtZeroMono => {}
        _ => {
            return input_err(format!(
                "cover extraction applies to partition-type witnesses, not {}",
                witness.kind
            ))
        }
    }
    if !witness.epsilon.is_zero() {
        return input_err("cover extraction needs a zero-error witness");
    }

    let mut parts: Vec<(u16, Rectangle)> = Vec::new();
    for ((z, region), weight) in &witness.regions {
        if weight.is_zero() {
            continue;
        }
        if weight < &rat(0) {
            return check_err(format!(
                "negative weight {} in the support",
                fmt_rat(weight)
            ));
        }
        let rect = match region {
            Region::Rect(rect) => *rect,
            Region::Assign(_) => {
                return input_err("cover extraction applies to rectangle witnesses")
            }
        };
        if !f.rect_monochromatic(&rect, *z) {
            return check_err(format!(
                "rectangle {} is not monochromatic for output {z}",
                rect.label()
            ));
        }
        parts.push((*z, rect));
    }

    for (x, y) in f.defined_cells() {
        let mut mass = rat(0);
        for ((z, region), weight) in &witness.regions {
            let Region::Rect(rect) = region else { continue };
            if rect.contains(x, y) && f.allows(x, y, *z) {
                mass += weight;
            }
        }
        if mass < rat(1) {
            return check_err(format!(
                "cell ({x}, {y}) collects weight {} < 1 from allowed rectangles",
                fmt_rat(&mass)
            ));
        }
    }

    Ok(parts)
}
