//! Component counts, merge trees and critical points of gridded scalar fields.
//!
//! All routines take a view of the analysis window; the outermost ring of the
//! view is the window boundary. Values are totally ordered by
//! `(value, row, column)`, so ties are resolved reproducibly.

mod census;
mod critical;
mod merge_tree;
mod oracle;
mod union_find;

pub use census::{count_components, count_excursion_components, ComponentCensus};
pub use critical::{
    classify_critical_points, count_four_arm, count_window_crit, morse_balance_check, CriticalCensus, CriticalKind,
    CriticalPoint, MorseBalance, TopologyAnalysis, WindowCounts,
};
pub use merge_tree::{build_merge_trees, MergeNode, MergeTree, NodeKind, Orientation, Sweep};
pub use oracle::{flood_fill_oracle, ORACLE_MAX_SIDE};
pub use union_find::DisjointSet;

/// Grid adjacency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Adjacency {
    Four,
    Eight,
}

const FOUR: [(i32, i32); 4] = [(-1, 0), (0, 1), (1, 0), (0, -1)];
/// Clockwise from north, so consecutive entries are neighbours of each other.
const EIGHT: [(i32, i32); 8] = [(-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1)];

impl Adjacency {
    pub fn dual(self) -> Self {
        match self {
            Adjacency::Four => Adjacency::Eight,
            Adjacency::Eight => Adjacency::Four,
        }
    }

    pub(crate) fn offsets(self) -> &'static [(i32, i32)] {
        match self {
            Adjacency::Four => &FOUR,
            Adjacency::Eight => &EIGHT,
        }
    }
}

/// Foreground (superlevel) adjacency; the background always uses the dual adjacency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct ConnectivityPolicy {
    foreground: Adjacency,
}

impl ConnectivityPolicy {
    pub fn new(foreground: Adjacency) -> Self {
        Self { foreground }
    }

    pub fn foreground(&self) -> Adjacency {
        self.foreground
    }

    pub fn background(&self) -> Adjacency {
        self.foreground.dual()
    }

    /// The policy that describes the same topology for the negated field.
    pub fn dual(&self) -> Self {
        Self { foreground: self.background() }
    }
}

impl Default for ConnectivityPolicy {
    fn default() -> Self {
        Self::new(Adjacency::Eight)
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Lattice {
    pub rows: usize,
    pub cols: usize,
}

impl Lattice {
    pub fn of(values: &ndarray::ArrayView2<'_, f64>) -> Self {
        let (rows, cols) = values.dim();
        Self { rows, cols }
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn on_ring(&self, idx: usize) -> bool {
        let (r, c) = (idx / self.cols, idx % self.cols);
        r == 0 || c == 0 || r + 1 == self.rows || c + 1 == self.cols
    }

    /// Writes the in-grid neighbours of `idx` into `out` and returns how many there are.
    pub fn neighbors(&self, idx: usize, adjacency: Adjacency, out: &mut [usize; 8]) -> usize {
        let (r, c) = ((idx / self.cols) as i64, (idx % self.cols) as i64);
        let mut k = 0;
        for &(dr, dc) in adjacency.offsets() {
            let (nr, nc) = (r + dr as i64, c + dc as i64);
            if nr >= 0 && nc >= 0 && (nr as usize) < self.rows && (nc as usize) < self.cols {
                out[k] = nr as usize * self.cols + nc as usize;
                k += 1;
            }
        }
        k
    }

    /// Vertex indices around the boundary ring, clockwise from the top-left corner.
    pub fn ring(&self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        if rows == 0 || cols == 0 {
            return Vec::new();
        }
        if rows == 1 {
            return (0..cols).collect();
        }
        if cols == 1 {
            return (0..rows).map(|r| r * cols).collect();
        }
        let mut ring = Vec::with_capacity(2 * (rows + cols) - 4);
        ring.extend(0..cols);
        ring.extend((1..rows).map(|r| r * cols + cols - 1));
        ring.extend((0..cols - 1).rev().map(|c| (rows - 1) * cols + c));
        ring.extend((1..rows - 1).rev().map(|r| r * cols));
        ring
    }
}

/// Row-major copy of a view.
pub(crate) fn flatten(values: &ndarray::ArrayView2<'_, f64>) -> Vec<f64> {
    values.iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_traversal() {
        let l = Lattice { rows: 3, cols: 4 };
        assert_eq!(l.ring(), vec![0, 1, 2, 3, 7, 11, 10, 9, 8, 4]);
        assert!(l.on_ring(4) && !l.on_ring(5) && !l.on_ring(6));
    }

    #[test]
    fn neighbour_lists() {
        let l = Lattice { rows: 3, cols: 3 };
        let mut buf = [0; 8];
        assert_eq!(l.neighbors(4, Adjacency::Eight, &mut buf), 8);
        assert_eq!(l.neighbors(0, Adjacency::Eight, &mut buf), 3);
        assert_eq!(l.neighbors(0, Adjacency::Four, &mut buf), 2);
        assert_eq!(&buf[..2], &[1, 3]);
    }

    #[test]
    fn policies_are_dual() {
        let p = ConnectivityPolicy::default();
        assert_eq!(p.foreground(), Adjacency::Eight);
        assert_eq!(p.background(), Adjacency::Four);
        assert_eq!(p.dual().foreground(), Adjacency::Four);
    }
}
