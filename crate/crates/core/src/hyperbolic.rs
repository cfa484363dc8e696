//! Quasihyperbolic distance by shortest paths on a weighted grid, and the
//! bracket it induces on the hyperbolic distance of a simply connected
//! domain.
//!
//! Edge weights integrate the density `1/dist(z, boundary)` with the harmonic
//! mean of the endpoint densities (second-order accurate for smooth density).
//! The hyperbolic distance is reported as the interval `[k/2, 2k]`, never a
//! point estimate.

use crate::geometry::{Domain, Point};
use crate::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

/// Quasihyperbolic value with its hyperbolic-distance bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricBracket {
    pub k: f64,
    pub d_low: f64,
    pub d_high: f64,
}

impl MetricBracket {
    pub fn from_k(k: f64) -> Self {
        MetricBracket { k, d_low: 0.5 * k, d_high: 2.0 * k }
    }
}

/// Target of a quasihyperbolic query.
#[derive(Debug, Clone, Copy)]
pub enum QhTarget {
    Point(Point),
    /// Every grid node within one cell of the level circle `|z| = r`.
    LevelSet(f64),
}

/// Hyperbolic distance in the unit disk from the center to `|z| = s`, in the
/// normalization with density `1/(1 - |z|^2)`.
pub fn disk_hyperbolic_distance(s: f64) -> f64 {
    assert!((0.0..1.0).contains(&s), "s must lie in [0, 1)");
    0.5 * ((1.0 + s) / (1.0 - s)).ln()
}

#[derive(Debug, Clone, Copy)]
struct HeapItem {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap()
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Quasihyperbolic distance from `z` to the target by Dijkstra over an
/// 8-connected grid of spacing `grid_h`.
pub fn quasihyperbolic_distance(
    domain: &Domain,
    z: Point,
    target: QhTarget,
    grid_h: f64,
) -> Result<MetricBracket> {
    if !(grid_h > 0.0) {
        return Err(Error::InvalidParameter("grid_h must be positive".into()));
    }
    if !domain.contains(z) {
        return Err(Error::InvalidParameter("query point must be interior".into()));
    }
    let half = match target {
        QhTarget::LevelSet(r) => {
            if !(r > 0.0) {
                return Err(Error::InvalidParameter("level radius must be positive".into()));
            }
            r + 2.0 * grid_h
        }
        QhTarget::Point(t) => {
            let m = z.x.abs().max(z.y.abs()).max(t.x.abs()).max(t.y.abs());
            1.5 * m + 10.0 * grid_h
        }
    };
    let h = grid_h;
    let n = ((2.0 * half / h).ceil() as usize) + 1;
    let x0 = -half;
    let point = |idx: usize| {
        Point::new(x0 + (idx % n) as f64 * h, x0 + (idx / n) as f64 * h)
    };
    let mut dist_b = vec![0.0f64; n * n];
    let mut inside = vec![false; n * n];
    for idx in 0..n * n {
        let p = point(idx);
        if domain.contains(p) {
            let d = domain.distance_to_boundary(p);
            if d > 0.0 {
                inside[idx] = true;
                dist_b[idx] = d;
            }
        }
    }

    let node_of = |p: Point| -> Option<usize> {
        let ci = ((p.x - x0) / h).round() as i64;
        let cj = ((p.y - x0) / h).round() as i64;
        let mut best: Option<(f64, usize)> = None;
        for dj in -1..=1i64 {
            for di in -1..=1i64 {
                let (i, j) = (ci + di, cj + dj);
                if i < 0 || j < 0 || i >= n as i64 || j >= n as i64 {
                    continue;
                }
                let idx = j as usize * n + i as usize;
                if inside[idx] {
                    let d = point(idx).dist(p);
                    if best.map_or(true, |(bd, _)| d < bd) {
                        best = Some((d, idx));
                    }
                }
            }
        }
        best.map(|(_, i)| i)
    };

    let start = node_of(z).ok_or(Error::UnreachableTarget)?;
    let is_target: Box<dyn Fn(usize) -> bool> = match target {
        QhTarget::LevelSet(r) => {
            Box::new(move |idx: usize| (point(idx).norm() - r).abs() <= h)
        }
        QhTarget::Point(t) => {
            let goal = node_of(t).ok_or(Error::UnreachableTarget)?;
            Box::new(move |idx: usize| idx == goal)
        }
    };

    const OFFSETS: [(i64, i64); 8] =
        [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];
    let mut dist = vec![f64::INFINITY; n * n];
    let mut heap = BinaryHeap::new();
    dist[start] = 0.0;
    heap.push(HeapItem { dist: 0.0, node: start });
    if is_target(start) {
        return Ok(MetricBracket::from_k(0.0));
    }
    while let Some(HeapItem { dist: du, node: u }) = heap.pop() {
        if du > dist[u] {
            continue;
        }
        if is_target(u) {
            return Ok(MetricBracket::from_k(du));
        }
        let (ui, uj) = ((u % n) as i64, (u / n) as i64);
        let pu = point(u);
        for (di, dj) in OFFSETS {
            let (vi, vj) = (ui + di, uj + dj);
            if vi < 0 || vj < 0 || vi >= n as i64 || vj >= n as i64 {
                continue;
            }
            let v = vj as usize * n + vi as usize;
            if !inside[v] {
                continue;
            }
            let len = h * ((di * di + dj * dj) as f64).sqrt();
            if dist_b[u].min(dist_b[v]) <= len {
                let pv = point(v);
                if domain.pieces().iter().any(|p| p.crosses_segment(pu, pv)) {
                    continue;
                }
            }
            let w = len * 2.0 / (dist_b[u] + dist_b[v]);
            let nd = du + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(HeapItem { dist: nd, node: v });
            }
        }
    }
    Err(Error::UnreachableTarget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn disk_formula_values() {
        assert_eq!(disk_hyperbolic_distance(0.0), 0.0);
        assert!((disk_hyperbolic_distance(0.6) - 2.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn disk_formula_asymptotic_square_root() {
        for s in [0.999, 0.99999, 0.9999999] {
            let ratio = (-disk_hyperbolic_distance(s)).exp() / ((1.0 - s) / 2.0).sqrt();
            assert!((ratio - 1.0).abs() < 2.0 * (1.0 - s), "s = {s}: ratio {ratio}");
        }
    }

    #[test]
    fn disk_radial_quasihyperbolic() {
        let d = Domain::disk(Point::new(0.0, 0.0), 1.0, Point::new(0.0, 0.0)).unwrap();
        let b = quasihyperbolic_distance(&d, Point::new(0.0, 0.0), QhTarget::LevelSet(0.9), 1.0 / 256.0)
            .unwrap();
        let exact = (1.0f64 / 0.1).ln();
        assert!((b.k - exact).abs() < 0.03 * exact, "k = {} vs {exact}", b.k);
        // the true hyperbolic distance lies in the bracket
        let d_true = disk_hyperbolic_distance(0.9);
        assert!(b.d_low <= d_true && d_true <= b.d_high);
    }

    #[test]
    fn half_plane_log_distance() {
        // right half-plane: k((1,0) -> (t,0)) = log t
        let d = Domain::wedge(PI, Point::new(1.0, 0.0)).unwrap();
        for t in [4.0, 16.0] {
            let b = quasihyperbolic_distance(
                &d,
                Point::new(1.0, 0.0),
                QhTarget::Point(Point::new(t, 0.0)),
                t / 380.0,
            )
            .unwrap();
            let exact = t.ln();
            assert!((b.k - exact).abs() < 0.03 * exact, "t = {t}: k = {} vs {exact}", b.k);
        }
    }

    #[test]
    fn grid_refinement_changes_little() {
        let d = Domain::disk(Point::new(0.0, 0.0), 1.0, Point::new(0.0, 0.0)).unwrap();
        let k1 = quasihyperbolic_distance(&d, Point::new(0.0, 0.0), QhTarget::LevelSet(0.9), 1.0 / 128.0)
            .unwrap()
            .k;
        let k2 = quasihyperbolic_distance(&d, Point::new(0.0, 0.0), QhTarget::LevelSet(0.9), 1.0 / 256.0)
            .unwrap()
            .k;
        assert!((k1 - k2).abs() / k2 < 0.02, "k1 {k1} k2 {k2}");
    }

    #[test]
    fn level_set_distance_monotone_in_radius() {
        let d = Domain::wedge(PI / 2.0, Point::new(0.5, 0.25)).unwrap();
        let mut prev = 0.0;
        for r in [2.0, 4.0, 8.0, 16.0] {
            let k = quasihyperbolic_distance(
                &d,
                Point::new(0.5, 0.25),
                QhTarget::LevelSet(r),
                r / 256.0,
            )
            .unwrap()
            .k;
            assert!(k >= prev * 0.99, "k({r}) = {k} below {prev}");
            prev = k;
        }
    }

    #[test]
    fn triangle_inequality_on_shared_grid() {
        let d = Domain::disk(Point::new(0.0, 0.0), 1.0, Point::new(0.0, 0.0)).unwrap();
        // equal window extents keep the three queries on the same grid
        let a = Point::new(0.9, 0.0);
        let b = Point::new(0.0, 0.9);
        let c = Point::new(-0.9, 0.0);
        let h = 1.0 / 128.0;
        let q = |x: Point, y: Point| {
            quasihyperbolic_distance(&d, x, QhTarget::Point(y), h).unwrap().k
        };
        assert!(q(a, c) <= q(a, b) + q(b, c) + 1e-9);
    }

    #[test]
    fn unreachable_target_is_reported() {
        let d = Domain::disk(Point::new(0.0, 0.0), 1.0, Point::new(0.0, 0.0)).unwrap();
        let r = quasihyperbolic_distance(
            &d,
            Point::new(0.0, 0.0),
            QhTarget::Point(Point::new(5.0, 5.0)),
            1.0 / 64.0,
        );
        assert!(r.is_err());
    }
}
