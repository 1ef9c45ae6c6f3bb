use ndarray::ArrayView2;

use super::merge_tree::{ascending_order, Orientation, Sweep};
use super::{flatten, ConnectivityPolicy, Lattice};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum CriticalKind {
    /// Local maximum (`m+`).
    MaxPlus,
    /// Local minimum (`m-`).
    MinMinus,
    /// Saddle joining sublevel components only (`s+`).
    SaddlePlus,
    /// Saddle joining superlevel components only (`s-`).
    SaddleMinus,
    /// Saddle joining both superlevel and sublevel components.
    FourArm,
    /// Critical point of the field restricted to the boundary ring.
    Tangency,
}

impl CriticalKind {
    pub fn label(self) -> &'static str {
        match self {
            CriticalKind::MaxPlus => "m+",
            CriticalKind::MinMinus => "m-",
            CriticalKind::SaddlePlus => "s+",
            CriticalKind::SaddleMinus => "s-",
            CriticalKind::FourArm => "four-arm",
            CriticalKind::Tangency => "tangency",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CriticalPoint {
    pub vertex: usize,
    pub row: usize,
    pub col: usize,
    pub level: f64,
    pub kind: CriticalKind,
    /// A saddle joining `k` components counts `k - 1` times.
    pub multiplicity: u32,
}

/// Per-type counts of critical points with levels in a closed window.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct WindowCounts {
    pub m_plus: u32,
    pub m_minus: u32,
    pub s_plus: u32,
    pub s_minus: u32,
    pub four_arm: u32,
    pub tangency: u32,
}

impl WindowCounts {
    /// Interior critical points, `m+ + m- + s+ + s- + four-arm`.
    pub fn n_crit(&self) -> u32 {
        self.m_plus + self.m_minus + self.s_plus + self.s_minus + self.four_arm
    }

    pub fn n_tang(&self) -> u32 {
        self.tangency
    }

    fn add(&mut self, p: &CriticalPoint) {
        let slot = match p.kind {
            CriticalKind::MaxPlus => &mut self.m_plus,
            CriticalKind::MinMinus => &mut self.m_minus,
            CriticalKind::SaddlePlus => &mut self.s_plus,
            CriticalKind::SaddleMinus => &mut self.s_minus,
            CriticalKind::FourArm => &mut self.four_arm,
            CriticalKind::Tangency => &mut self.tangency,
        };
        *slot += p.multiplicity;
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CriticalCensus {
    pub points: Vec<CriticalPoint>,
}

fn check_window(a: f64, b: f64) -> Result<()> {
    if !(a <= b) {
        return Err(Error::InvalidArgument(format!("level window [{a}, {b}] is empty or reversed")));
    }
    Ok(())
}

impl CriticalCensus {
    /// Counts of points with level in `[a, b]`.
    pub fn window_counts(&self, a: f64, b: f64) -> Result<WindowCounts> {
        check_window(a, b)?;
        Ok(self.count_where(|level| level >= a && level <= b))
    }

    /// Counts of points with level in `[a, b)`, the events seen by `N(a) - N(b)`.
    pub fn window_counts_half_open(&self, a: f64, b: f64) -> Result<WindowCounts> {
        check_window(a, b)?;
        Ok(self.count_where(|level| level >= a && level < b))
    }

    fn count_where(&self, keep: impl Fn(f64) -> bool) -> WindowCounts {
        let mut counts = WindowCounts::default();
        for p in self.points.iter().filter(|p| keep(p.level)) {
            counts.add(p);
        }
        counts
    }

    pub fn totals(&self) -> WindowCounts {
        let mut counts = WindowCounts::default();
        for p in &self.points {
            counts.add(p);
        }
        counts
    }
}

/// Number of sign changes of `neighbour - centre` around the 8-neighbourhood, under the total order.
fn sign_changes(values: &[f64], lattice: Lattice, v: usize) -> usize {
    let mut nb = [0usize; 8];
    let n = lattice.neighbors(v, super::Adjacency::Eight, &mut nb);
    debug_assert_eq!(n, 8);
    let above = |u: usize| values[u].total_cmp(&values[v]).then(u.cmp(&v)).is_gt();
    (0..8).filter(|&i| above(nb[i]) != above(nb[(i + 1) % 8])).count()
}

/// Local extrema of the cyclic boundary sequence; runs of equal values count once, at their first vertex.
fn ring_extrema(values: &[f64], lattice: Lattice) -> Vec<usize> {
    let ring = lattice.ring();
    let m = ring.len();
    let vals: Vec<f64> = ring.iter().map(|&i| values[i]).collect();
    let Some(start) = (0..m).find(|&i| vals[i] != vals[(i + m - 1) % m]) else {
        return Vec::new();
    };
    let mut runs: Vec<(usize, f64)> = Vec::new();
    for t in 0..m {
        let i = (start + t) % m;
        if t == 0 || vals[i] != vals[(i + m - 1) % m] {
            runs.push((i, vals[i]));
        }
    }
    let r = runs.len();
    let mut out = Vec::new();
    for k in 0..r {
        let prev = runs[(k + r - 1) % r].1;
        let next = runs[(k + 1) % r].1;
        let v = runs[k].1;
        if (v > prev && v > next) || (v < prev && v < next) {
            out.push(ring[runs[k].0]);
        }
    }
    out
}

/// Both merge-tree sweeps of a window together with its critical census.
#[derive(Debug, Clone)]
pub struct TopologyAnalysis {
    superlevel: Sweep,
    sublevel: Sweep,
    critical: CriticalCensus,
}

impl TopologyAnalysis {
    pub fn new(values: ArrayView2<'_, f64>, policy: ConnectivityPolicy) -> Self {
        let lattice = Lattice::of(&values);
        let flat = flatten(&values);
        let asc = ascending_order(&flat);
        let desc: Vec<u32> = asc.iter().rev().copied().collect();
        let superlevel = Sweep::run_with_order(&flat, lattice, Orientation::Superlevel, policy.foreground(), desc);
        let sublevel = Sweep::run_with_order(&flat, lattice, Orientation::Sublevel, policy.background(), asc);
        let critical = classify(&flat, lattice, &superlevel, &sublevel);
        Self { superlevel, sublevel, critical }
    }

    pub fn superlevel(&self) -> &Sweep {
        &self.superlevel
    }

    pub fn sublevel(&self) -> &Sweep {
        &self.sublevel
    }

    pub fn critical(&self) -> &CriticalCensus {
        &self.critical
    }

    /// Contained components of `{f ≥ level}`.
    pub fn excursion_contained(&self, level: f64) -> usize {
        self.superlevel.counts_at(level).0
    }

    /// Contained components of `{f = level}`: every contained excursion or
    /// complementary component has exactly one outer boundary curve.
    pub fn level_set_contained(&self, level: f64) -> usize {
        self.superlevel.counts_at(level).0 + self.sublevel.counts_at(level).0
    }

    pub fn morse_balance(&self, a: f64, b: f64) -> Result<MorseBalance> {
        // A point at level exactly b is already inside {f >= b}.
        let counts = self.critical.window_counts_half_open(a, b)?;
        let delta = self.excursion_contained(a) as i64 - self.excursion_contained(b) as i64;
        let delta_level = self.level_set_contained(a) as i64 - self.level_set_contained(b) as i64;
        let predictor = counts.m_plus as i64 - counts.s_minus as i64;
        let predictor_level = predictor + counts.s_plus as i64 - counts.m_minus as i64;
        let zero_slack = counts.tangency == 0 && counts.four_arm == 0;
        Ok(MorseBalance {
            a,
            b,
            delta,
            predictor,
            delta_level,
            predictor_level,
            counts,
            zero_slack,
            exact: delta == predictor && delta_level == predictor_level,
        })
    }
}

fn classify(values: &[f64], lattice: Lattice, up: &Sweep, down: &Sweep) -> CriticalCensus {
    let mut points = Vec::new();
    let mut push = |v: usize, kind: CriticalKind, multiplicity: u32| {
        points.push(CriticalPoint {
            vertex: v,
            row: v / lattice.cols,
            col: v % lattice.cols,
            level: values[v],
            kind,
            multiplicity,
        });
    };
    let extrema = ring_extrema(values, lattice);
    for v in 0..lattice.len() {
        let (ku, kd) = (up.arms(v) as u32, down.arms(v) as u32);
        if lattice.on_ring(v) {
            let absorbed_up = ku - up.boundary_arms(v) as u32;
            let absorbed_down = kd - down.boundary_arms(v) as u32;
            let extremum = u32::from(extrema.contains(&v));
            let m = extremum.max(absorbed_up).max(absorbed_down);
            if m > 0 {
                push(v, CriticalKind::Tangency, m);
            }
            continue;
        }
        if ku == 0 {
            push(v, CriticalKind::MaxPlus, 1);
        }
        if kd == 0 {
            push(v, CriticalKind::MinMinus, 1);
        }
        if ku >= 2 || kd >= 2 {
            debug_assert!(sign_changes(values, lattice, v) >= 4);
        }
        if ku >= 2 && kd >= 2 {
            push(v, CriticalKind::FourArm, ku.max(kd) - 1);
        } else if ku >= 2 {
            push(v, CriticalKind::SaddleMinus, ku - 1);
        } else if kd >= 2 {
            push(v, CriticalKind::SaddlePlus, kd - 1);
        }
    }
    CriticalCensus { points }
}

/// Outcome of comparing the change in contained component counts with the critical points in between.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MorseBalance {
    pub a: f64,
    pub b: f64,
    /// `N_ES(a) - N_ES(b)`.
    pub delta: i64,
    /// `m+ - s-` over `[a, b]`.
    pub predictor: i64,
    /// `N_LS(a) - N_LS(b)`.
    pub delta_level: i64,
    /// `m+ - s- + s+ - m-` over `[a, b]`.
    pub predictor_level: i64,
    pub counts: WindowCounts,
    /// No tangencies and no four-arm saddles in `[a, b]`.
    pub zero_slack: bool,
    /// Both deltas equal their predictors.
    pub exact: bool,
}

pub fn classify_critical_points(values: ArrayView2<'_, f64>, policy: ConnectivityPolicy) -> CriticalCensus {
    TopologyAnalysis::new(values, policy).critical
}

pub fn count_window_crit(census: &CriticalCensus, a: f64, b: f64) -> Result<WindowCounts> {
    census.window_counts(a, b)
}

pub fn count_four_arm(census: &CriticalCensus, a: f64, b: f64) -> Result<u32> {
    Ok(census.window_counts(a, b)?.four_arm)
}

pub fn morse_balance_check(
    values: ArrayView2<'_, f64>,
    a: f64,
    b: f64,
    policy: ConnectivityPolicy,
) -> Result<MorseBalance> {
    check_window(a, b)?;
    TopologyAnalysis::new(values, policy).morse_balance(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array2};

    fn policy() -> ConnectivityPolicy {
        ConnectivityPolicy::default()
    }

    fn peak() -> Array2<f64> {
        let mut v = Array2::zeros((5, 5));
        v[[2, 2]] = 5.0;
        v
    }

    #[test]
    fn single_peak_census() {
        let v = array![[1.0, 2.0, 1.0], [2.0, 5.0, 2.0], [1.0, 2.0, 1.0]];
        let t = classify_critical_points(v.view(), policy()).totals();
        assert_eq!((t.m_plus, t.m_minus, t.s_plus, t.s_minus, t.four_arm), (1, 0, 0, 0, 0));
    }

    #[test]
    fn monotone_plane_has_two_tangencies() {
        let v = Array2::from_shape_fn((6, 6), |(i, j)| (i + 2 * j) as f64);
        let t = classify_critical_points(v.view(), policy()).totals();
        assert_eq!(t.n_crit(), 0);
        assert_eq!(t.tangency, 2);
    }

    #[test]
    fn two_peak_census() {
        let v = array![
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 3.0, 2.0, 1.5, 2.0, 4.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]
        ];
        // Pad so the peaks are interior with a margin of zeros.
        let mut g = Array2::zeros((5, 7));
        g.slice_mut(ndarray::s![1..4, ..]).assign(&v);
        let c = classify_critical_points(g.view(), policy());
        let t = c.totals();
        assert_eq!((t.m_plus, t.s_minus, t.m_minus, t.s_plus, t.four_arm), (2, 1, 0, 0, 0));
        assert_eq!(count_four_arm(&c, -10.0, 10.0).unwrap(), 0);
    }

    #[test]
    fn saddle_of_xy_is_four_arm() {
        let v = Array2::from_shape_fn((9, 9), |(i, j)| (i as f64 - 4.0) * (j as f64 - 4.0));
        let c = classify_critical_points(v.view(), policy());
        assert_eq!(count_four_arm(&c, -1e-9, 1e-9).unwrap(), 1);
        assert_eq!(count_four_arm(&c, 1.0, 2.0).unwrap(), 0);
        let p = c.points.iter().find(|p| p.kind == CriticalKind::FourArm).unwrap();
        assert_eq!((p.row, p.col), (4, 4));
    }

    #[test]
    fn window_queries() {
        let c = classify_critical_points(peak().view(), policy());
        assert_eq!(c.window_counts(-100.0, 100.0).unwrap(), c.totals());
        assert_eq!(c.window_counts(10.0, 11.0).unwrap(), WindowCounts::default());
        assert!(c.window_counts(2.0, 1.0).is_err());
    }

    #[test]
    fn balance_on_single_peak() {
        let v = peak();
        let m = morse_balance_check(v.view(), 1.0, 2.0, policy()).unwrap();
        assert_eq!((m.delta, m.predictor), (0, 0));
        assert!(m.exact && m.zero_slack);
        let m = morse_balance_check(v.view(), 0.5, 6.0, policy()).unwrap();
        assert_eq!((m.delta, m.predictor), (1, 1));
        assert!(m.exact);
        assert!(morse_balance_check(v.view(), 2.0, 1.0, policy()).is_err());
    }

    #[test]
    fn maximum_at_upper_level_is_outside_the_balance() {
        let v = ndarray::array![[0.0, 0.0, 0.0], [0.0, 3.0, 0.0], [0.0, 1.0, 2.0]];
        let m = morse_balance_check(v.view(), 2.5, 3.0, policy()).unwrap();
        assert_eq!((m.delta, m.predictor), (0, 0));
        assert!(m.exact && m.zero_slack);
        let c = classify_critical_points(v.view(), policy());
        assert_eq!(c.window_counts(2.5, 3.0).unwrap().m_plus, 1);
    }

    #[test]
    fn ring_extrema_with_plateaus() {
        let l = Lattice { rows: 3, cols: 3 };
        // Ring order 0,1,2,5,8,7,6,3; a single plateau maximum and a single minimum.
        let mut v = vec![0.0; 9];
        for &i in &[0, 1, 2] {
            v[i] = 2.0;
        }
        v[8] = -1.0;
        v[4] = 9.0;
        assert_eq!(ring_extrema(&v, l).len(), 2);
        assert!(ring_extrema(&[1.0; 9], l).is_empty());
    }
}
