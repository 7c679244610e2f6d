//! Lattice cell clusters (polyominoes and their king-move and triangular-lattice
//! variants), adjacency counts, and clusters attaining the maximum counts.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_integer::Roots;

use crate::error::{Error, Result};

pub type Cell = (i64, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lattice {
    /// Edge-adjacent unit squares (4 neighbours).
    Square,
    /// Squares touching along an edge or at a corner (8 neighbours).
    King,
    /// Triangular lattice in axial coordinates: neighbours `±(1,0)`, `±(0,1)`, `±(1,1)`.
    Triangular,
}

impl Lattice {
    pub const ALL: [Lattice; 3] = [Lattice::Square, Lattice::King, Lattice::Triangular];

    pub fn name(self) -> &'static str {
        match self {
            Lattice::Square => "square",
            Lattice::King => "king",
            Lattice::Triangular => "triangular",
        }
    }

    /// Half of the neighbour offsets; the other half are their negatives.
    pub fn forward_offsets(self) -> &'static [Cell] {
        match self {
            Lattice::Square => &[(1, 0), (0, 1)],
            Lattice::King => &[(1, 0), (0, 1), (1, 1), (1, -1)],
            Lattice::Triangular => &[(1, 0), (0, 1), (1, 1)],
        }
    }

    pub fn degree(self) -> usize {
        2 * self.forward_offsets().len()
    }

    fn neighbours(self, (x, y): Cell) -> impl Iterator<Item = Cell> {
        self.forward_offsets()
            .iter()
            .flat_map(move |&(dx, dy)| [(x + dx, y + dy), (x - dx, y - dy)])
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lattice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Lattice::Square),
            "king" => Ok(Lattice::King),
            "triangular" | "hex" | "hexagonal" => Ok(Lattice::Triangular),
            other => Err(Error::Parse(format!("unknown lattice {other:?}"))),
        }
    }
}

/// Occupancy lookup: a bitmap over the bounding box when it is small enough,
/// otherwise an ordered set.
enum Occupancy {
    Grid {
        x0: i64,
        y0: i64,
        width: i64,
        height: i64,
        bits: Vec<bool>,
    },
    Set(BTreeSet<Cell>),
}

impl Occupancy {
    fn new(cells: &[Cell]) -> Self {
        let (mut x0, mut y0, mut x1, mut y1) = (i64::MAX, i64::MAX, i64::MIN, i64::MIN);
        for &(x, y) in cells {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        let width = x1.saturating_sub(x0).saturating_add(1);
        let height = y1.saturating_sub(y0).saturating_add(1);
        let budget = 64 * cells.len() as i64 + 4096;
        if width.checked_mul(height).is_some_and(|a| a <= budget) {
            let mut bits = vec![false; (width * height) as usize];
            for &(x, y) in cells {
                bits[((y - y0) * width + (x - x0)) as usize] = true;
            }
            Occupancy::Grid {
                x0,
                y0,
                width,
                height,
                bits,
            }
        } else {
            Occupancy::Set(cells.iter().copied().collect())
        }
    }

    fn contains(&self, (x, y): Cell) -> bool {
        match self {
            Occupancy::Grid {
                x0,
                y0,
                width,
                height,
                bits,
            } => {
                let (dx, dy) = (x - x0, y - y0);
                dx >= 0 && dy >= 0 && dx < *width && dy < *height && bits[(dy * width + dx) as usize]
            }
            Occupancy::Set(set) => set.contains(&(x, y)),
        }
    }
}

/// A nonempty connected set of lattice cells, stored sorted by `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCluster {
    lattice: Lattice,
    cells: Vec<Cell>,
}

impl CellCluster {
    pub fn new(lattice: Lattice, cells: Vec<Cell>) -> Result<Self> {
        let mut cells = cells;
        cells.sort_unstable();
        let before = cells.len();
        cells.dedup();
        if cells.len() != before {
            return Err(Error::Domain("duplicate cells in cluster".to_string()));
        }
        if cells.is_empty() {
            return Err(Error::Domain("a cluster needs at least one cell".to_string()));
        }
        if !is_connected(lattice, &cells) {
            return Err(Error::Domain(format!(
                "cells are not connected on the {lattice} lattice"
            )));
        }
        Ok(CellCluster { lattice, cells })
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// The same cells viewed on another lattice, if still connected.
    pub fn on_lattice(&self, lattice: Lattice) -> Result<CellCluster> {
        CellCluster::new(lattice, self.cells.clone())
    }
}

fn is_connected(lattice: Lattice, cells: &[Cell]) -> bool {
    let occupancy = Occupancy::new(cells);
    if let Occupancy::Grid {
        x0,
        y0,
        width,
        height,
        bits,
    } = &occupancy
    {
        return grid_connected(lattice, (cells[0].0 - x0, cells[0].1 - y0), *width, *height, bits, cells.len());
    }
    let mut seen = BTreeSet::from([cells[0]]);
    let mut stack = vec![cells[0]];
    while let Some(c) = stack.pop() {
        for nb in lattice.neighbours(c) {
            if occupancy.contains(nb) && seen.insert(nb) {
                stack.push(nb);
            }
        }
    }
    seen.len() == cells.len()
}

/// Depth-first search on a bitmap frame, from a local start cell.
fn grid_connected(lattice: Lattice, start: Cell, width: i64, height: i64, bits: &[bool], count: usize) -> bool {
    let offsets: Vec<Cell> = lattice
        .forward_offsets()
        .iter()
        .flat_map(|&(dx, dy)| [(dx, dy), (-dx, -dy)])
        .collect();
    let mut seen = vec![false; bits.len()];
    let mut stack = vec![start];
    seen[(start.1 * width + start.0) as usize] = true;
    let mut reached = 1;
    while let Some((x, y)) = stack.pop() {
        for &(dx, dy) in &offsets {
            let (nx, ny) = (x + dx, y + dy);
            if nx < 0 || ny < 0 || nx >= width || ny >= height {
                continue;
            }
            let i = (ny * width + nx) as usize;
            if bits[i] && !seen[i] {
                seen[i] = true;
                reached += 1;
                stack.push((nx, ny));
            }
        }
    }
    reached == count
}

/// Number of unordered pairs of cells adjacent on the cluster's lattice.
pub fn adjacency_count(cluster: &CellCluster) -> u64 {
    count_adjacencies(cluster.lattice, &cluster.cells)
}

/// [`adjacency_count`] for an arbitrary (not necessarily connected) cell list
/// without duplicates.
pub fn count_adjacencies(lattice: Lattice, cells: &[Cell]) -> u64 {
    if cells.is_empty() {
        return 0;
    }
    let occupancy = Occupancy::new(cells);
    let mut count = 0;
    match &occupancy {
        Occupancy::Grid {
            x0,
            y0,
            width,
            height,
            bits,
        } => {
            for &(x, y) in cells {
                let (x, y) = (x - x0, y - y0);
                for &(dx, dy) in lattice.forward_offsets() {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < *width && ny >= 0 && ny < *height && bits[(ny * width + nx) as usize] {
                        count += 1;
                    }
                }
            }
        }
        Occupancy::Set(_) => {
            for &(x, y) in cells {
                for &(dx, dy) in lattice.forward_offsets() {
                    if occupancy.contains((x + dx, y + dy)) {
                        count += 1;
                    }
                }
            }
        }
    }
    count
}

fn ceil_sqrt(m: u64) -> u64 {
    let r = m.sqrt();
    if r * r == m {
        r
    } else {
        r + 1
    }
}

/// Maximum adjacency count of an `n`-cell cluster: `⌊2n - 2√n⌋` (square),
/// `⌊4n - √(28n - 12)⌋` (king), `⌊3n - √(12n - 3)⌋` (triangular), all in integer
/// arithmetic. `n = 0` gives 0.
pub fn max_adjacency(lattice: Lattice, n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    match lattice {
        Lattice::Square => 2 * n - ceil_sqrt(4 * n),
        Lattice::King => 4 * n - ceil_sqrt(28 * n - 12),
        Lattice::Triangular => 3 * n - ceil_sqrt(12 * n - 3),
    }
}

/// A cluster of `n` cells attaining [`max_adjacency`]. The count is re-checked, and
/// a shortfall is reported as [`Error::ConstructionGap`].
pub fn optimal_cluster(lattice: Lattice, n: usize) -> Result<CellCluster> {
    if n == 0 {
        return Err(Error::Domain("a cluster needs at least one cell".to_string()));
    }
    let cells = match lattice {
        Lattice::Square => quasi_square(n),
        Lattice::King => king_rows(n),
        Lattice::Triangular => hexagonal_spiral(n),
    };
    let achieved = count_adjacencies(lattice, &cells);
    let expected = max_adjacency(lattice, n as u64);
    if achieved != expected || cells.len() != n {
        return Err(Error::ConstructionGap {
            lattice: lattice.name(),
            n,
            achieved,
            expected,
        });
    }
    // The constructions are connected by design (see the unit tests), so only the
    // order is normalised here.
    let mut cells = cells;
    cells.sort_unstable();
    Ok(CellCluster { lattice, cells })
}

/// Best `a`-wide block of full rows with a partial top row, over all widths `a`.
fn quasi_square(n: usize) -> Vec<Cell> {
    let score = |a: usize| {
        let rows = n / a;
        let top = n % a;
        let mut s = rows * (a - 1) + rows.saturating_sub(1) * a;
        if top > 0 {
            s += (top - 1) + top;
        }
        s
    };
    // The optimum is attained at width ⌈√n⌉; neighbouring widths are scored too.
    let root = (n as u64).sqrt() as usize;
    let width = (root.saturating_sub(1).max(1)..=(root + 2).min(n))
        .max_by_key(|&a| (score(a), core::cmp::Reverse(a)))
        .unwrap_or(1);
    let (rows, top) = (n / width, n % width);
    // Column by column, so the cells come out sorted.
    (0..width)
        .flat_map(|x| (0..rows + usize::from(x < top)).map(move |y| (x as i64, y as i64)))
        .collect()
}

/// Contacts between two stacked king-lattice rows of lengths `a` and `b`, placed
/// as described in [`king_rows`].
fn king_row_gain(a: usize, b: usize) -> usize {
    let (lo, hi) = (a.min(b), a.max(b));
    3 * lo - 2usize.saturating_sub(hi - lo)
}

/// Row-convex king clusters by dynamic programming over row lengths, where
/// consecutive rows differ by at most 2 cells. A longer row overhangs a row
/// shorter by 2 or more on both sides and by one cell on the right when one
/// longer; equal rows are aligned.
fn king_rows(n: usize) -> Vec<Cell> {
    let max_len = 2 * (n as u64).sqrt() as usize + 4;
    let max_len = max_len.min(n);
    const NONE: i64 = i64::MIN;
    // best[c * (max_len + 1) + l]: most contacts with c cells, last row of length l.
    let width = max_len + 1;
    let mut best = vec![NONE; (n + 1) * width];
    let mut parent = vec![0usize; (n + 1) * width];
    for l in 1..=max_len {
        best[l * width + l] = l as i64 - 1;
    }
    for c in 1..=n {
        for l in 1..=max_len {
            let here = best[c * width + l];
            if here == NONE {
                continue;
            }
            for l2 in l.saturating_sub(2).max(1)..=(l + 2).min(max_len) {
                if c + l2 > n {
                    break;
                }
                let value = here + (l2 - 1 + king_row_gain(l, l2)) as i64;
                let slot = (c + l2) * width + l2;
                if value > best[slot] {
                    best[slot] = value;
                    parent[slot] = l;
                }
            }
        }
    }
    let mut last = (1..=max_len)
        .max_by_key(|&l| best[n * width + l])
        .expect("max_len >= 1");
    let mut lengths = Vec::new();
    let mut c = n;
    loop {
        lengths.push(last);
        if c == last {
            break;
        }
        let prev = parent[c * width + last];
        c -= last;
        last = prev;
    }
    lengths.reverse();
    let mut cells = Vec::with_capacity(n);
    let mut start = 0i64;
    let mut prev_len = 0usize;
    for (row, &len) in lengths.iter().enumerate() {
        if row > 0 {
            if len >= prev_len + 2 {
                start -= 1;
            } else if len + 2 <= prev_len {
                start += 1;
            }
        }
        cells.extend((0..len as i64).map(|x| (start + x, row as i64)));
        prev_len = len;
    }
    cells
}

/// Centred hexagonal spiral: ring `r` starts next to the corner `r·(-1,-1)` and
/// walks the six sides counterclockwise back to it.
fn hexagonal_spiral(n: usize) -> Vec<Cell> {
    const DIRECTIONS: [Cell; 6] = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)];
    let mut cells = vec![(0, 0)];
    let mut r = 1i64;
    while cells.len() < n {
        let (mut x, mut y) = (-r, -r);
        'ring: for &(dx, dy) in &DIRECTIONS {
            for _ in 0..r {
                x += dx;
                y += dy;
                cells.push((x, y));
                if cells.len() == n {
                    break 'ring;
                }
            }
        }
        r += 1;
    }
    cells
}

/// Joins two square-lattice clusters by placing the leftmost top-row cell of `second`
/// on the rightmost bottom-row cell of `first`. The result has
/// `first.len() + second.len() - 1` cells.
pub fn merge_clusters(first: &CellCluster, second: &CellCluster) -> Result<CellCluster> {
    if first.lattice != Lattice::Square || second.lattice != Lattice::Square {
        return Err(Error::Parameter("merge_clusters needs square-lattice clusters".to_string()));
    }
    let bottom = first.cells.iter().map(|c| c.1).min().expect("nonempty");
    let anchor = first
        .cells
        .iter()
        .filter(|c| c.1 == bottom)
        .max_by_key(|c| c.0)
        .copied()
        .expect("nonempty");
    let top = second.cells.iter().map(|c| c.1).max().expect("nonempty");
    let moving = second
        .cells
        .iter()
        .filter(|c| c.1 == top)
        .min_by_key(|c| c.0)
        .copied()
        .expect("nonempty");
    let (dx, dy) = (anchor.0 - moving.0, anchor.1 - moving.1);
    let mut cells = first.cells.clone();
    cells.extend(
        second
            .cells
            .iter()
            .map(|&(x, y)| (x + dx, y + dy))
            .filter(|&c| c != anchor),
    );
    CellCluster::new(Lattice::Square, cells)
}
