//! Combinatorial rectangles on a finite grid, as row/column bitmasks.

use crate::error::{cap_err, input_err, Result};

/// A combinatorial rectangle `A x B` with `A` a nonempty set of rows and `B`
/// a nonempty set of columns, stored as bitmasks. Grids are limited to 64
/// rows and 64 columns; larger instances are handled by code that never
/// materializes rectangles.
///
/// Ordering is lexicographic by `(row_mask, col_mask)`, which fixes the
/// variable order of every rectangle-indexed LP in this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rectangle {
    row_mask: u64,
    col_mask: u64,
}

impl Rectangle {
    pub fn new(row_mask: u64, col_mask: u64) -> Result<Self> {
        if row_mask == 0 || col_mask == 0 {
            return input_err("rectangle must have nonempty row and column sets");
        }
        Ok(Rectangle { row_mask, col_mask })
    }

    pub fn row_mask(&self) -> u64 {
        self.row_mask
    }

    pub fn col_mask(&self) -> u64 {
        self.col_mask
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        debug_assert!(row < 64 && col < 64);
        self.row_mask >> row & 1 == 1 && self.col_mask >> col & 1 == 1
    }

    /// Number of cells.
    pub fn area(&self) -> u64 {
        u64::from(self.row_mask.count_ones()) * u64::from(self.col_mask.count_ones())
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cols = self.col_mask;
        bits(self.row_mask).flat_map(move |r| bits(cols).map(move |c| (r, c)))
    }

    /// Compact display form used in LP variable names and dumps.
    pub fn label(&self) -> String {
        format!("{:x}.{:x}", self.row_mask, self.col_mask)
    }
}

/// Indices of set bits, ascending.
pub fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

/// All rectangles of an `nrows x ncols` grid in `(row_mask, col_mask)`
/// lexicographic order. There are `(2^nrows - 1) * (2^ncols - 1)` of them;
/// exceeding `cap` aborts with a resource error before allocation.
pub fn enumerate_rectangles(nrows: usize, ncols: usize, cap: usize) -> Result<Vec<Rectangle>> {
    if nrows == 0 || ncols == 0 {
        return input_err("grid must have at least one row and one column");
    }
    if nrows > 63 || ncols > 63 {
        return input_err(format!(
            "rectangle enumeration supports at most 63 rows/columns, got {nrows}x{ncols}"
        ));
    }
    let count = (2u128.pow(nrows as u32) - 1) * (2u128.pow(ncols as u32) - 1);
    if count > cap as u128 {
        return cap_err(format!(
            "{count} rectangles on a {nrows}x{ncols} grid exceeds the cap of {cap}"
        ));
    }
    let mut out = Vec::with_capacity(count as usize);
    for row_mask in 1..1u64 << nrows {
        for col_mask in 1..1u64 << ncols {
            out.push(Rectangle { row_mask, col_mask });
        }
    }
    Ok(out)
}
