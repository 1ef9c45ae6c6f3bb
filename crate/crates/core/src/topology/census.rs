use ndarray::ArrayView2;

use super::union_find::DisjointSet;
use super::{flatten, Adjacency, ConnectivityPolicy, Lattice};

/// Component counts at one level. "Contained" components avoid the boundary ring.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ComponentCensus {
    pub level: f64,
    /// Components of `{f ≥ level}` that avoid the boundary.
    pub n_contained: usize,
    pub n_boundary: usize,
    /// Components of `{f = level}` that avoid the boundary.
    pub n_level_contained: usize,
    pub n_level_boundary: usize,
}

/// Labels `mask` components by union-find; returns the forest and per-root boundary contact.
fn label(mask: &[bool], lattice: Lattice, adjacency: Adjacency, dsu: &mut DisjointSet) {
    let cols = lattice.cols;
    // Neighbours already visited in row-major order.
    let back: &[(i64, i64)] = match adjacency {
        Adjacency::Four => &[(0, -1), (-1, 0)],
        Adjacency::Eight => &[(0, -1), (-1, -1), (-1, 0), (-1, 1)],
    };
    for idx in 0..lattice.len() {
        if !mask[idx] {
            continue;
        }
        let (r, c) = ((idx / cols) as i64, (idx % cols) as i64);
        for &(dr, dc) in back {
            let (nr, nc) = (r + dr, c + dc);
            if nr >= 0 && nc >= 0 && (nc as usize) < cols {
                let n = nr as usize * cols + nc as usize;
                if mask[n] {
                    dsu.union(idx, n);
                }
            }
        }
    }
}

fn tally(mask: &[bool], lattice: Lattice, dsu: &mut DisjointSet) -> (Vec<bool>, usize, usize) {
    let n = lattice.len();
    let mut is_root = vec![false; n];
    let mut touches = vec![false; n];
    for (idx, &inside) in mask.iter().enumerate().take(n) {
        if inside {
            let r = dsu.find(idx);
            is_root[r] = true;
            if lattice.on_ring(idx) {
                touches[r] = true;
            }
        }
    }
    let (mut contained, mut boundary) = (0, 0);
    for idx in 0..n {
        if is_root[idx] {
            if touches[idx] {
                boundary += 1;
            } else {
                contained += 1;
            }
        }
    }
    (touches, contained, boundary)
}

/// Contained and boundary-touching components of `{f ≥ level}` under `adjacency`.
pub fn count_excursion_components(values: ArrayView2<'_, f64>, level: f64, adjacency: Adjacency) -> (usize, usize) {
    let lattice = Lattice::of(&values);
    let mask: Vec<bool> = values.iter().map(|&v| v >= level).collect();
    let mut dsu = DisjointSet::new(lattice.len());
    label(&mask, lattice, adjacency, &mut dsu);
    let (_, c, b) = tally(&mask, lattice, &mut dsu);
    (c, b)
}

/// Excursion and level-set component census at `level`.
///
/// A level-set component is the interface between one foreground component and
/// one adjacent background component; it is contained when either side is.
pub fn count_components(values: ArrayView2<'_, f64>, level: f64, policy: ConnectivityPolicy) -> ComponentCensus {
    let lattice = Lattice::of(&values);
    let flat = flatten(&values);
    let fg: Vec<bool> = flat.iter().map(|&v| v >= level).collect();
    let bg: Vec<bool> = fg.iter().map(|&f| !f).collect();
    let mut dsu = DisjointSet::new(lattice.len());
    label(&fg, lattice, policy.foreground(), &mut dsu);
    label(&bg, lattice, policy.background(), &mut dsu);
    let (touch_fg, n_contained, n_boundary) = tally(&fg, lattice, &mut dsu);
    let (touch_bg, _, _) = tally(&bg, lattice, &mut dsu);

    let mut pairs = interface_pairs(&fg, lattice, |i| dsu.find(i));
    pairs.sort_unstable();
    pairs.dedup();
    let n_level_boundary = pairs.iter().filter(|&&(f, g)| touch_fg[f] && touch_bg[g]).count();
    ComponentCensus {
        level,
        n_contained,
        n_boundary,
        n_level_contained: pairs.len() - n_level_boundary,
        n_level_boundary,
    }
}

/// `(foreground label, background label)` for every 4-edge that straddles the level.
pub(crate) fn interface_pairs<F: FnMut(usize) -> usize>(
    fg: &[bool],
    lattice: Lattice,
    mut label: F,
) -> Vec<(usize, usize)> {
    let cols = lattice.cols;
    let mut pairs = Vec::new();
    for idx in 0..lattice.len() {
        let c = idx % cols;
        let mut visit = |other: usize| {
            if fg[idx] != fg[other] {
                let (f, g) = if fg[idx] { (idx, other) } else { (other, idx) };
                pairs.push((label(f), label(g)));
            }
        };
        if c + 1 < cols {
            visit(idx + 1);
        }
        if idx + cols < lattice.len() {
            visit(idx + cols);
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    #[test]
    fn interior_block() {
        let mut v = Array2::zeros((5, 5));
        for r in 1..3 {
            for c in 1..3 {
                v[[r, c]] = 1.0;
            }
        }
        let c = count_components(v.view(), 0.5, ConnectivityPolicy::default());
        assert_eq!((c.n_contained, c.n_boundary), (1, 0));
        assert_eq!((c.n_level_contained, c.n_level_boundary), (1, 0));
    }

    #[test]
    fn diagonal_cross() {
        let v = array![[1.0, 0.0, 1.0], [0.0, 1.0, 0.0], [1.0, 0.0, 1.0]];
        let c = count_components(v.view(), 0.5, ConnectivityPolicy::default());
        assert_eq!((c.n_contained, c.n_boundary), (0, 1));
        let c = count_components(v.view(), 0.5, ConnectivityPolicy::new(Adjacency::Four));
        assert_eq!((c.n_contained, c.n_boundary), (1, 4));
    }

    #[test]
    fn level_below_minimum() {
        let v = array![[1.0, 2.0], [3.0, 4.0]];
        let c = count_components(v.view(), 0.0, ConnectivityPolicy::default());
        assert_eq!((c.n_contained, c.n_boundary, c.n_level_contained, c.n_level_boundary), (0, 1, 0, 0));
    }

    #[test]
    fn ring_around_a_hole() {
        // A square annulus of ones with a zero inside: one contained excursion component
        // and two contained level curves (outer and inner).
        let mut v = Array2::zeros((7, 7));
        for r in 1..6 {
            for c in 1..6 {
                v[[r, c]] = 1.0;
            }
        }
        v[[3, 3]] = 0.0;
        let c = count_components(v.view(), 0.5, ConnectivityPolicy::default());
        assert_eq!(c.n_contained, 1);
        assert_eq!(c.n_level_contained, 2);
    }
}
