use std::collections::VecDeque;

use ndarray::ArrayView2;

use super::census::{interface_pairs, ComponentCensus};
use super::{Adjacency, ConnectivityPolicy, Lattice};
use crate::error::{Error, Result};

/// Largest side accepted by [`flood_fill_oracle`].
pub const ORACLE_MAX_SIDE: usize = 64;

/// Breadth-first labels of the vertices where `mask` holds, plus per-label boundary contact.
fn bfs_labels(mask: &[bool], lattice: Lattice, adjacency: Adjacency) -> (Vec<usize>, Vec<bool>) {
    let mut label = vec![usize::MAX; lattice.len()];
    let mut touches = Vec::new();
    let mut queue = VecDeque::new();
    let mut nb = [0usize; 8];
    for seed in 0..lattice.len() {
        if !mask[seed] || label[seed] != usize::MAX {
            continue;
        }
        let id = touches.len();
        touches.push(false);
        label[seed] = id;
        queue.push_back(seed);
        while let Some(v) = queue.pop_front() {
            touches[id] |= lattice.on_ring(v);
            let k = lattice.neighbors(v, adjacency, &mut nb);
            for &u in &nb[..k] {
                if mask[u] && label[u] == usize::MAX {
                    label[u] = id;
                    queue.push_back(u);
                }
            }
        }
    }
    (label, touches)
}

/// Reference component census by exhaustive breadth-first search.
pub fn flood_fill_oracle(
    values: ArrayView2<'_, f64>,
    level: f64,
    policy: ConnectivityPolicy,
) -> Result<ComponentCensus> {
    let lattice = Lattice::of(&values);
    if lattice.rows > ORACLE_MAX_SIDE || lattice.cols > ORACLE_MAX_SIDE {
        return Err(Error::InvalidArgument(format!("oracle grids are limited to {ORACLE_MAX_SIDE}x{ORACLE_MAX_SIDE}")));
    }
    let fg: Vec<bool> = values.iter().map(|&v| v >= level).collect();
    let bg: Vec<bool> = fg.iter().map(|f| !f).collect();
    let (fg_label, fg_touch) = bfs_labels(&fg, lattice, policy.foreground());
    let (bg_label, bg_touch) = bfs_labels(&bg, lattice, policy.background());
    let n_boundary = fg_touch.iter().filter(|&&t| t).count();

    // Background labels are shifted past the foreground ones so both fit one label space.
    let offset = fg_touch.len();
    let mut pairs = interface_pairs(&fg, lattice, |i| if fg[i] { fg_label[i] } else { offset + bg_label[i] });
    pairs.sort_unstable();
    pairs.dedup();
    let n_level_boundary = pairs.iter().filter(|&&(f, g)| fg_touch[f] && bg_touch[g - offset]).count();
    Ok(ComponentCensus {
        level,
        n_contained: fg_touch.len() - n_boundary,
        n_boundary,
        n_level_contained: pairs.len() - n_level_boundary,
        n_level_boundary,
    })
}
