//! Deterministic communication protocols as explicit trees, and the primal
//! witnesses their leaves induce.

use crate::error::{input_err, Result};
use crate::model::{mask_of_width, CommInstance, Rectangle, Region, Witness};
use crate::rat::rat;

/// A deterministic protocol over a fixed input grid. At every node one
/// player bipartitions their currently active inputs; `part` is the absolute
/// mask (rows if `row_player`, columns otherwise) that continues into
/// `left`, the rest continues into `right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProtocolTree {
    Leaf {
        z: u16,
    },
    Node {
        row_player: bool,
        part: u64,
        left: Box<ProtocolTree>,
        right: Box<ProtocolTree>,
    },
}

impl ProtocolTree {
    /// Longest root-to-leaf path, in bits spoken.
    pub fn depth(&self) -> u32 {
        match self {
            ProtocolTree::Leaf { .. } => 0,
            ProtocolTree::Node { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            ProtocolTree::Leaf { .. } => 1,
            ProtocolTree::Node { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }
}

/// Walks the tree over the instance's grid and returns each leaf's rectangle
/// with its announced answer. Rejects nodes that fail to split the speaker's
/// active set into two nonempty parts and answers outside the alphabet. The
/// returned rectangles partition the grid by construction.
pub fn protocol_leaves(
    instance: &CommInstance,
    tree: &ProtocolTree,
) -> Result<Vec<(Rectangle, u16)>> {
    let rows = mask_of_width(instance.nrows() as u32);
    let cols = mask_of_width(instance.ncols() as u32);
    let mut out = Vec::new();
    walk(instance, tree, rows, cols, &mut out)?;
    Ok(out)
}

fn walk(
    instance: &CommInstance,
    tree: &ProtocolTree,
    rows: u64,
    cols: u64,
    out: &mut Vec<(Rectangle, u16)>,
) -> Result<()> {
    match tree {
        ProtocolTree::Leaf { z } => {
            if *z >= instance.alphabet() {
                return input_err(format!(
                    "protocol answers {z}, outside the alphabet of size {}",
                    instance.alphabet()
                ));
            }
            out.push((Rectangle::new(rows, cols)?, *z));
            Ok(())
        }
        ProtocolTree::Node {
            row_player,
            part,
            left,
            right,
        } => {
            let active = if *row_player { rows } else { cols };
            let keep = active & part;
            let rest = active ^ keep;
            if keep == 0 || rest == 0 {
                return input_err(format!(
                    "protocol node part {part:#x} does not split the active {} set {active:#x}",
                    if *row_player { "row" } else { "column" }
                ));
            }
            if *row_player {
                walk(instance, left, keep, cols, out)?;
                walk(instance, right, rest, cols, out)
            } else {
                walk(instance, left, rows, keep, out)?;
                walk(instance, right, rows, rest, out)
            }
        }
    }
}

/// Converts a correct protocol into a zero-error partition-bound primal:
/// weight 1 on each leaf rectangle under the leaf's answer. Every defined
/// cell of every leaf must be consistent with the announced answer; the
/// objective of the resulting witness is the leaf count.
pub fn protocol_to_primal(instance: &CommInstance, tree: &ProtocolTree) -> Result<Witness> {
    let leaves = protocol_leaves(instance, tree)?;
    for (rect, z) in &leaves {
        for (x, y) in rect.cells() {
            if instance.defined(x, y) && !instance.allows(x, y, *z) {
                return input_err(format!(
                    "protocol answers {z} on cell ({x},{y}), which the instance forbids"
                ));
            }
        }
    }
    let kind = if instance.is_relation() {
        "prt_relation"
    } else {
        "prt"
    };
    let mut witness = Witness::primal(kind.to_string(), rat(0));
    for (rect, z) in leaves {
        witness.regions.insert((z, Region::Rect(rect)), rat(1));
    }
    Ok(witness)
}
