//! Problem instances, distributions, witnesses and run configuration.

pub mod assign;
pub mod rect;
pub mod witness;

pub use assign::{enumerate_assignments, submasks, Assignment};
pub use rect::{bits, enumerate_rectangles, Rectangle};
pub use witness::{Region, Side, Witness};

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{input_err, Result};
use crate::rat::Rat;

/// Resource caps. Every potentially large enumeration or iteration checks
/// one of these before doing the work and fails with a resource error
/// instead of degrading silently.
#[derive(Debug, Clone)]
pub struct Caps {
    /// Maximum number of regions (rectangles or assignments) enumerated.
    pub max_regions: usize,
    /// Maximum number of variables in a single LP.
    pub max_lp_vars: usize,
    /// Maximum simplex pivots in a single solve.
    pub max_pivots: u64,
    /// Optional wall-clock budget for a single solve, in seconds.
    pub time_budget_secs: Option<u64>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_regions: 2_000_000,
            max_lp_vars: 200_000,
            max_pivots: 10_000_000,
            time_budget_secs: None,
        }
    }
}

/// Run-wide configuration shared by library entry points and the CLI.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub caps: Caps,
    /// When true (the default) output labels range over the image of the
    /// instance; when false they range over the full declared alphabet.
    pub restrict_z_image: bool,
    /// Check the list-non-equality witness on the full grid rather than only
    /// on inputs whose blocks are all nonzero.
    pub lne_full_grid: bool,
}

impl RunConfig {
    pub fn new() -> Self {
        RunConfig {
            caps: Caps::default(),
            restrict_z_image: true,
            lne_full_grid: true,
        }
    }
}

const MAX_ALPHABET: u16 = 64;

/// A two-party instance: a matrix over rows `x` (first player) and columns
/// `y` (second player) whose cells are either undefined, a single output, or
/// (in relation mode) a nonempty set of allowed outputs.
///
/// Cells are stored as bitmasks over the alphabet `0..alphabet`. In function
/// mode an empty mask means undefined; relation mode requires every cell
/// nonempty, so the constraints that range over all inputs are meaningful.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommInstance {
    nrows: usize,
    ncols: usize,
    alphabet: u16,
    relation: bool,
    cells: Vec<u64>,
}

impl CommInstance {
    pub fn new(
        nrows: usize,
        ncols: usize,
        alphabet: u16,
        relation: bool,
        cells: Vec<u64>,
    ) -> Result<Self> {
        if nrows == 0 || ncols == 0 {
            return input_err("instance must have at least one row and one column");
        }
        if alphabet == 0 || alphabet > MAX_ALPHABET {
            return input_err(format!("alphabet size must be in 1..={MAX_ALPHABET}"));
        }
        if cells.len() != nrows * ncols {
            return input_err(format!(
                "expected {} cells, got {}",
                nrows * ncols,
                cells.len()
            ));
        }
        let full = alphabet_mask(alphabet);
        for (i, &c) in cells.iter().enumerate() {
            if c & !full != 0 {
                return input_err(format!(
                    "cell {}/{} allows an output outside the alphabet",
                    i / ncols,
                    i % ncols
                ));
            }
            if relation && c == 0 {
                return input_err(format!(
                    "relation cell {}/{} allows no output; every cell must allow at least one",
                    i / ncols,
                    i % ncols
                ));
            }
            if !relation && c.count_ones() > 1 {
                return input_err(format!(
                    "function cell {}/{} has more than one output; use relation mode",
                    i / ncols,
                    i % ncols
                ));
            }
        }
        Ok(CommInstance {
            nrows,
            ncols,
            alphabet,
            relation,
            cells,
        })
    }

    /// Total function from a value matrix; `None` marks undefined cells.
    pub fn from_values(
        nrows: usize,
        ncols: usize,
        alphabet: u16,
        values: &[Option<u16>],
    ) -> Result<Self> {
        let cells = values
            .iter()
            .map(|v| match v {
                None => Ok(0u64),
                Some(z) if *z < alphabet => Ok(1u64 << z),
                Some(z) => input_err(format!("output {z} outside alphabet of size {alphabet}")),
            })
            .collect::<Result<Vec<_>>>()?;
        CommInstance::new(nrows, ncols, alphabet, false, cells)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn alphabet(&self) -> u16 {
        self.alphabet
    }

    pub fn is_relation(&self) -> bool {
        self.relation
    }

    /// Bitmask of outputs allowed at `(x, y)`; 0 means undefined.
    pub fn cell_mask(&self, x: usize, y: usize) -> u64 {
        self.cells[x * self.ncols + y]
    }

    pub fn defined(&self, x: usize, y: usize) -> bool {
        self.cell_mask(x, y) != 0
    }

    /// Single output of a function cell. `None` when undefined. Panics in
    /// relation mode, where cells can hold several outputs.
    pub fn value(&self, x: usize, y: usize) -> Option<u16> {
        assert!(!self.relation, "value() is for function mode; use allows()");
        let m = self.cell_mask(x, y);
        (m != 0).then(|| m.trailing_zeros() as u16)
    }

    pub fn allows(&self, x: usize, y: usize, z: u16) -> bool {
        self.cell_mask(x, y) >> z & 1 == 1
    }

    /// Row-major index of a cell, the index space of witness `MU`/`PHI` lines.
    pub fn cell_index(&self, x: usize, y: usize) -> usize {
        x * self.ncols + y
    }

    pub fn cell_at(&self, index: usize) -> (usize, usize) {
        (index / self.ncols, index % self.ncols)
    }

    /// Defined cells in row-major order.
    pub fn defined_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.all_cells().filter(|&(x, y)| self.defined(x, y))
    }

    pub fn all_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let ncols = self.ncols;
        (0..self.nrows * self.ncols).map(move |i| (i / ncols, i % ncols))
    }

    pub fn is_total(&self) -> bool {
        self.cells.iter().all(|&c| c != 0)
    }

    /// Outputs that occur somewhere (union of cell sets), ascending.
    pub fn image(&self) -> Vec<u16> {
        let union = self.cells.iter().fold(0u64, |acc, c| acc | c);
        (0..self.alphabet).filter(|z| union >> z & 1 == 1).collect()
    }

    /// Output labels the bound LPs range over: the image by default, the
    /// full alphabet when `restrict` is false.
    pub fn labels(&self, restrict: bool) -> Vec<u16> {
        if restrict {
            self.image()
        } else {
            (0..self.alphabet).collect()
        }
    }

    /// True when every defined cell of the rectangle allows `z` (function
    /// mode: equals `z`). Undefined cells never break monochromaticity.
    pub fn rect_monochromatic(&self, rect: &Rectangle, z: u16) -> bool {
        rect.cells()
            .all(|(x, y)| !self.defined(x, y) || self.allows(x, y, z))
    }
}

/// All-ones bitmask of the given width, safe up to 64.
pub fn mask_of_width(width: u32) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

fn alphabet_mask(alphabet: u16) -> u64 {
    mask_of_width(u32::from(alphabet))
}

/// A query instance: a (possibly partial) function or relation from
/// `{0,1}^n` to `m`-bit outputs, tabulated over all `2^n` inputs in
/// increasing order. Variable `i` is bit `i - 1` of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryInstance {
    n: usize,
    m: usize,
    relation: bool,
    table: Vec<u64>,
}

impl QueryInstance {
    pub fn new(n: usize, m: usize, relation: bool, table: Vec<u64>) -> Result<Self> {
        if n == 0 || n > 20 {
            return input_err("query instances support 1..=20 input variables");
        }
        if m == 0 || m > 6 {
            return input_err("query instances support 1..=6 output bits");
        }
        if table.len() != 1 << n {
            return input_err(format!(
                "expected {} table entries, got {}",
                1 << n,
                table.len()
            ));
        }
        let full = alphabet_mask(1 << m);
        for (x, &c) in table.iter().enumerate() {
            if c & !full != 0 {
                return input_err(format!("input {x} allows an output outside {m} bits"));
            }
            if relation && c == 0 {
                return input_err(format!(
                    "relation input {x} allows no output; every input must allow at least one"
                ));
            }
            if !relation && c.count_ones() > 1 {
                return input_err(format!(
                    "function input {x} has more than one output; use relation mode"
                ));
            }
        }
        Ok(QueryInstance {
            n,
            m,
            relation,
            table,
        })
    }

    /// Total Boolean function from its truth table, input `x` ascending.
    pub fn boolean(n: usize, truth: &[bool]) -> Result<Self> {
        let table = truth.iter().map(|&b| 1u64 << u64::from(b)).collect();
        QueryInstance::new(n, 1, false, table)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_relation(&self) -> bool {
        self.relation
    }

    pub fn input_count(&self) -> usize {
        1 << self.n
    }

    pub fn cell_mask(&self, x: u32) -> u64 {
        self.table[x as usize]
    }

    pub fn defined(&self, x: u32) -> bool {
        self.cell_mask(x) != 0
    }

    pub fn value(&self, x: u32) -> Option<u16> {
        assert!(!self.relation, "value() is for function mode; use allows()");
        let m = self.cell_mask(x);
        (m != 0).then(|| m.trailing_zeros() as u16)
    }

    pub fn allows(&self, x: u32, z: u16) -> bool {
        self.cell_mask(x) >> z & 1 == 1
    }

    pub fn defined_inputs(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.input_count() as u32).filter(move |&x| self.defined(x))
    }

    pub fn is_total(&self) -> bool {
        self.table.iter().all(|&c| c != 0)
    }

    pub fn image(&self) -> Vec<u16> {
        let union = self.table.iter().fold(0u64, |acc, c| acc | c);
        (0..1u16 << self.m)
            .filter(|z| union >> z & 1 == 1)
            .collect()
    }

    pub fn labels(&self, restrict: bool) -> Vec<u16> {
        if restrict {
            self.image()
        } else {
            (0..1u16 << self.m).collect()
        }
    }
}

/// A probability distribution over an index set (cells of a grid, or query
/// inputs). Entries are exact rationals, strictly positive, summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    mass: BTreeMap<usize, Rat>,
}

impl Distribution {
    pub fn new(entries: BTreeMap<usize, Rat>) -> Result<Self> {
        let mut mass = BTreeMap::new();
        let mut total = Rat::zero();
        for (i, v) in entries {
            if v < Rat::zero() {
                return input_err(format!("negative mass at index {i}"));
            }
            if v > Rat::zero() {
                total += &v;
                mass.insert(i, v);
            }
        }
        if !total.is_one() {
            return input_err(format!(
                "distribution mass sums to {}, expected 1",
                crate::rat::fmt_rat(&total)
            ));
        }
        Ok(Distribution { mass })
    }

    pub fn uniform_over(indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let set: Vec<usize> = indices.into_iter().collect();
        if set.is_empty() {
            return input_err("uniform distribution over an empty set");
        }
        let share = Rat::new(1.into(), (set.len() as i64).into());
        Distribution::new(set.into_iter().map(|i| (i, share.clone())).collect())
    }

    /// Builds from possibly unnormalized nonnegative weights.
    pub fn normalized(weights: BTreeMap<usize, Rat>) -> Result<Self> {
        let total: Rat = weights.values().sum();
        if !num_traits::Signed::is_positive(&total) {
            return input_err("cannot normalize weights with non-positive total");
        }
        let entries = weights.into_iter().map(|(i, v)| (i, v / &total)).collect();
        Distribution::new(entries)
    }

    pub fn mass_of(&self, index: usize) -> Rat {
        self.mass.get(&index).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total mass on an index set.
    pub fn mass_on(&self, indices: impl IntoIterator<Item = usize>) -> Rat {
        indices.into_iter().filter_map(|i| self.mass.get(&i)).sum()
    }

    /// Support entries, ascending by index.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.mass.iter().map(|(i, v)| (*i, v))
    }
}

/// The LP-based bound kinds this crate can build and solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Partition bound for functions.
    Prt,
    /// One-sided rectangle bound for output `z`.
    Rec(u16),
    /// Smooth rectangle bound for output `z`.
    Srec(u16),
    /// Smooth rectangle bound maximized over outputs.
    SrecMax,
    /// Discrepancy bound (Boolean outputs, no error parameter).
    Disc,
    /// Smooth discrepancy bound (Boolean outputs).
    Sdisc,
    /// Las Vegas partition bound (half-weight seen by monochromatic
    /// rectangles, inequality form).
    PrtLv,
    /// Las Vegas partition bound, equality form.
    PrtLvStar,
    /// Partition bound for relations.
    PrtRelation,
    /// Zero-error partition bound restricted to monochromatic rectangles.
    /// Same optimum as `prt` at zero error; this is the program fooling-set
    /// certificates are checked against.
    PrtZeroMono,
    /// Query-complexity partition bound for functions.
    QPrt,
    /// Query-complexity partition bound for relations.
    QPrtRelation,
    /// Relaxed one-output smooth LP over assignments (Boolean functions).
    QSrecRelaxed,
}

impl BoundKind {
    pub fn token(&self) -> String {
        match self {
            BoundKind::Prt => "prt".into(),
            BoundKind::Rec(z) => format!("rec@{z}"),
            BoundKind::Srec(z) => format!("srec@{z}"),
            BoundKind::SrecMax => "srec_max".into(),
            BoundKind::Disc => "disc".into(),
            BoundKind::Sdisc => "sdisc".into(),
            BoundKind::PrtLv => "prt_lv".into(),
            BoundKind::PrtLvStar => "prt_lv_star".into(),
            BoundKind::PrtRelation => "prt_relation".into(),
            BoundKind::PrtZeroMono => "prt0_mono".into(),
            BoundKind::QPrt => "qprt".into(),
            BoundKind::QPrtRelation => "qprt_relation".into(),
            BoundKind::QSrecRelaxed => "qsrec_relaxed".into(),
        }
    }

    pub fn from_token(tok: &str) -> Result<Self> {
        let parse_z = |s: &str| -> Result<u16> {
            s.parse::<u16>()
                .map_err(|_| crate::Error::Input(format!("bad output label in kind token {tok:?}")))
        };
        Ok(match tok {
            "prt" => BoundKind::Prt,
            "srec_max" => BoundKind::SrecMax,
            "disc" => BoundKind::Disc,
            "sdisc" => BoundKind::Sdisc,
            "prt_lv" => BoundKind::PrtLv,
            "prt_lv_star" => BoundKind::PrtLvStar,
            "prt_relation" => BoundKind::PrtRelation,
            "prt0_mono" => BoundKind::PrtZeroMono,
            "qprt" => BoundKind::QPrt,
            "qprt_relation" => BoundKind::QPrtRelation,
            "qsrec_relaxed" => BoundKind::QSrecRelaxed,
            _ => match tok.split_once('@') {
                Some(("rec", z)) => BoundKind::Rec(parse_z(z)?),
                Some(("srec", z)) => BoundKind::Srec(parse_z(z)?),
                _ => return input_err(format!("unknown bound kind {tok:?}")),
            },
        })
    }

    /// Whether the LP for this kind takes an error parameter.
    pub fn takes_epsilon(&self) -> bool {
        !matches!(
            self,
            BoundKind::Disc | BoundKind::PrtLv | BoundKind::PrtLvStar | BoundKind::PrtZeroMono
        )
    }

    pub fn is_query(&self) -> bool {
        matches!(
            self,
            BoundKind::QPrt | BoundKind::QPrtRelation | BoundKind::QSrecRelaxed
        )
    }
}

/// Validates an error parameter: `0 <= eps < 1`.
pub fn validate_epsilon(eps: &Rat) -> Result<()> {
    if *eps < Rat::zero() || *eps >= Rat::one() {
        return input_err(format!(
            "error parameter must satisfy 0 <= eps < 1, got {}",
            crate::rat::fmt_rat(eps)
        ));
    }
    Ok(())
}
