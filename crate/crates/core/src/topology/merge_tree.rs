use std::io::Write;

use ndarray::ArrayView2;

use super::union_find::DisjointSet;
use super::{flatten, Adjacency, ConnectivityPolicy, Lattice};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Sweep from high to low values, tracking `{f ≥ ℓ}`.
    Superlevel,
    /// Sweep from low to high values, tracking `{f < ℓ}`.
    Sublevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Leaf,
    Merge,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MergeNode {
    pub vertex: usize,
    pub row: usize,
    pub col: usize,
    pub level: f64,
    pub kind: NodeKind,
    /// Number of subtrees joined here (zero for leaves).
    pub children: u32,
    pub parent: Option<usize>,
}

/// Births and merges of components as the level sweeps through the values.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MergeTree {
    pub orientation: Orientation,
    /// Nodes in sweep order, so levels are monotone along parent links.
    pub nodes: Vec<MergeNode>,
}

impl MergeTree {
    pub fn leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Leaf).count()
    }

    pub fn merges(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Merge).count()
    }

    /// Branches alive at `level`: leaves past the level minus the subtrees merged away past it.
    pub fn components_at(&self, level: f64) -> usize {
        let mut alive: i64 = 0;
        for n in &self.nodes {
            let past = match self.orientation {
                Orientation::Superlevel => n.level >= level,
                Orientation::Sublevel => n.level < level,
            };
            if past {
                alive += match n.kind {
                    NodeKind::Leaf => 1,
                    NodeKind::Merge => 1 - n.children as i64,
                };
            }
        }
        alive as usize
    }

    /// Writes the parent links as CSV.
    pub fn write_edge_list<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "child_row",
            "child_col",
            "child_level",
            "child_kind",
            "parent_row",
            "parent_col",
            "parent_level",
        ])?;
        for n in &self.nodes {
            if let Some(p) = n.parent {
                let p = &self.nodes[p];
                let kind = match n.kind {
                    NodeKind::Leaf => "leaf",
                    NodeKind::Merge => "merge",
                };
                w.write_record([
                    n.row.to_string(),
                    n.col.to_string(),
                    n.level.to_string(),
                    kind.to_string(),
                    p.row.to_string(),
                    p.col.to_string(),
                    p.level.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// One union-find sweep with per-vertex bookkeeping.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub tree: MergeTree,
    /// Vertices in processing order.
    order: Vec<u32>,
    /// Values in processing order.
    levels: Vec<f64>,
    /// Distinct components among already processed neighbours, per vertex.
    arms: Vec<u8>,
    /// How many of those touched the boundary ring, per vertex.
    boundary_arms: Vec<u8>,
    /// `cum_total[p]`: component count after processing `p` vertices.
    cum_total: Vec<i32>,
    cum_contained: Vec<i32>,
}

/// Vertex indices sorted by `(value, index)`, i.e. `(value, row, col)`.
pub(crate) fn ascending_order(values: &[f64]) -> Vec<u32> {
    let mut order: Vec<u32> = (0..values.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| values[a as usize].total_cmp(&values[b as usize]).then(a.cmp(&b)));
    order
}

impl Sweep {
    pub(crate) fn run(values: &[f64], lattice: Lattice, orientation: Orientation, adjacency: Adjacency) -> Self {
        let mut order = ascending_order(values);
        if orientation == Orientation::Superlevel {
            order.reverse();
        }
        Self::run_with_order(values, lattice, orientation, adjacency, order)
    }

    pub(crate) fn run_with_order(
        values: &[f64],
        lattice: Lattice,
        orientation: Orientation,
        adjacency: Adjacency,
        order: Vec<u32>,
    ) -> Self {
        let n = lattice.len();
        let mut dsu = DisjointSet::new(n);
        let mut processed = vec![false; n];
        let mut touches = vec![false; n];
        let mut top_node = vec![0u32; n];
        let mut arms = vec![0u8; n];
        let mut boundary_arms = vec![0u8; n];
        let mut cum_total = Vec::with_capacity(n + 1);
        let mut cum_contained = Vec::with_capacity(n + 1);
        let (mut total, mut contained) = (0i32, 0i32);
        cum_total.push(0);
        cum_contained.push(0);
        let mut nodes = Vec::new();
        let mut nb = [0usize; 8];
        let mut roots = [0usize; 8];

        for &v in &order {
            let v = v as usize;
            let count = lattice.neighbors(v, adjacency, &mut nb);
            let mut k = 0;
            for &u in &nb[..count] {
                if processed[u] {
                    let r = dsu.find(u);
                    if !roots[..k].contains(&r) {
                        roots[k] = r;
                        k += 1;
                    }
                }
            }
            let j = roots[..k].iter().filter(|&&r| touches[r]).count();
            arms[v] = k as u8;
            boundary_arms[v] = j as u8;
            let ring = lattice.on_ring(v);

            total += 1 - k as i32;
            contained += if ring {
                -((k - j) as i32)
            } else if k == 0 {
                1
            } else if j == 0 {
                -(k as i32 - 1)
            } else {
                -((k - j) as i32)
            };

            let (row, col) = (v / lattice.cols, v % lattice.cols);
            let node = match k {
                0 => {
                    nodes.push(MergeNode {
                        vertex: v,
                        row,
                        col,
                        level: values[v],
                        kind: NodeKind::Leaf,
                        children: 0,
                        parent: None,
                    });
                    nodes.len() - 1
                }
                1 => top_node[roots[0]] as usize,
                _ => {
                    let id = nodes.len();
                    nodes.push(MergeNode {
                        vertex: v,
                        row,
                        col,
                        level: values[v],
                        kind: NodeKind::Merge,
                        children: k as u32,
                        parent: None,
                    });
                    for &r in &roots[..k] {
                        nodes[top_node[r] as usize].parent = Some(id);
                    }
                    id
                }
            };
            let mut root = v;
            for &r in &roots[..k] {
                root = dsu.union(root, r);
            }
            touches[root] = ring || j > 0;
            top_node[root] = node as u32;
            processed[v] = true;
            cum_total.push(total);
            cum_contained.push(contained);
        }

        let levels = order.iter().map(|&v| values[v as usize]).collect();
        Self { tree: MergeTree { orientation, nodes }, order, levels, arms, boundary_arms, cum_total, cum_contained }
    }

    pub fn orientation(&self) -> Orientation {
        self.tree.orientation
    }

    /// Number of vertices in the tracked set at `level`.
    pub fn prefix_len(&self, level: f64) -> usize {
        match self.orientation() {
            Orientation::Superlevel => self.levels.partition_point(|&v| v >= level),
            Orientation::Sublevel => self.levels.partition_point(|&v| v < level),
        }
    }

    /// `(contained, total)` component counts of the tracked set at `level`.
    pub fn counts_at(&self, level: f64) -> (usize, usize) {
        let p = self.prefix_len(level);
        (self.cum_contained[p] as usize, self.cum_total[p] as usize)
    }

    pub fn arms(&self, vertex: usize) -> u8 {
        self.arms[vertex]
    }

    pub fn boundary_arms(&self, vertex: usize) -> u8 {
        self.boundary_arms[vertex]
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }
}

/// Superlevel and sublevel merge trees of the window.
pub fn build_merge_trees(values: ArrayView2<'_, f64>, policy: ConnectivityPolicy) -> (MergeTree, MergeTree) {
    let lattice = Lattice::of(&values);
    let flat = flatten(&values);
    let up = Sweep::run(&flat, lattice, Orientation::Superlevel, policy.foreground());
    let down = Sweep::run(&flat, lattice, Orientation::Sublevel, policy.background());
    (up.tree, down.tree)
}
