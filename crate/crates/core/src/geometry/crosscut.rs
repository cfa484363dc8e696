//! Crosscut decomposition of a level circle: which arcs of `D ∩ {|z| = r}`
//! bound the component of `D \ {|z| = r}` holding the base point, and whether
//! the region beyond each such arc is bounded.
//!
//! Component labeling is grid flood fill, not exact planar topology. Walls are
//! enforced by cutting grid edges that cross boundary pieces, so slits thinner
//! than a cell cannot leak. The rays of unbounded domains only matter within
//! the working window; beyond it they are irrelevant to labeling.

use super::circle::{circle_intersection, ArcSpan};
use super::{BoundaryPiece, Domain, Point};
use crate::{Error, Result};
use std::collections::VecDeque;

/// One arc of the level circle on the boundary of the base component.
#[derive(Debug, Clone)]
pub struct Crosscut {
    pub id: usize,
    pub radius: f64,
    pub span: ArcSpan,
    /// Full circle lying inside the domain (bounded-domain small-r case).
    pub closed: bool,
    /// True for every cut this module returns; kept for downstream records.
    pub bounds_base_component: bool,
    /// Whether the component of `D` minus this cut *not* holding the base
    /// point is unbounded.
    pub far_side_unbounded: bool,
}

impl Crosscut {
    /// Arc length.
    pub fn length(&self) -> f64 {
        self.span.width * self.radius
    }

    /// Distance from `z` to the closed arc.
    pub fn distance(&self, z: Point) -> f64 {
        let ang = z.angle();
        if self.closed || self.span.contains(ang) {
            (z.norm() - self.radius).abs()
        } else {
            let e0 = Point::from_polar(self.radius, self.span.start);
            let e1 = Point::from_polar(self.radius, self.span.end());
            z.dist(e0).min(z.dist(e1))
        }
    }

    fn as_piece(&self) -> BoundaryPiece {
        if self.closed {
            BoundaryPiece::FullCircle { center: Point::new(0.0, 0.0), radius: self.radius }
        } else {
            BoundaryPiece::CircularArc {
                center: Point::new(0.0, 0.0),
                radius: self.radius,
                span: self.span,
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct CrosscutDecomposition {
    pub radius: f64,
    /// Crosscuts bounding the base component, sorted by start angle.
    pub crosscuts: Vec<Crosscut>,
    /// Arcs discarded because the grid cannot resolve them.
    pub pruned_count: usize,
    pub grid_resolution: f64,
}

impl CrosscutDecomposition {
    pub fn is_empty(&self) -> bool {
        self.crosscuts.is_empty()
    }
}

/// Square node grid with component labels.
struct LabelGrid {
    n: usize,
    h: f64,
    x0: f64,
    inside: Vec<bool>,
    dist: Vec<f64>,
    label: Vec<u32>,
}

const UNLABELED: u32 = u32::MAX;

impl LabelGrid {
    /// Grid over `[-half, half]^2`; `inside` additionally restricted by `extra`.
    fn build(domain: &Domain, half: f64, h: f64, extra: &dyn Fn(Point) -> bool) -> Self {
        let n = ((2.0 * half / h).ceil() as usize) + 1;
        let x0 = -half;
        let mut inside = vec![false; n * n];
        let mut dist = vec![0.0f64; n * n];
        for j in 0..n {
            for i in 0..n {
                let p = Point::new(x0 + i as f64 * h, x0 + j as f64 * h);
                let idx = j * n + i;
                if extra(p) && domain.contains(p) {
                    inside[idx] = true;
                    dist[idx] = domain.distance_to_boundary(p);
                }
            }
        }
        LabelGrid { n, h, x0, inside, dist, label: vec![UNLABELED; n * n] }
    }

    fn point(&self, idx: usize) -> Point {
        let i = idx % self.n;
        let j = idx / self.n;
        Point::new(self.x0 + i as f64 * self.h, self.x0 + j as f64 * self.h)
    }

    fn node_near(&self, p: Point) -> Option<usize> {
        let fi = (p.x - self.x0) / self.h;
        let fj = (p.y - self.x0) / self.h;
        let (ci, cj) = (fi.round() as i64, fj.round() as i64);
        let mut best: Option<(f64, usize)> = None;
        for dj in -1..=1i64 {
            for di in -1..=1i64 {
                let (i, j) = (ci + di, cj + dj);
                if i < 0 || j < 0 || i >= self.n as i64 || j >= self.n as i64 {
                    continue;
                }
                let idx = j as usize * self.n + i as usize;
                if self.inside[idx] {
                    let d = self.point(idx).dist(p);
                    if best.map_or(true, |(bd, _)| d < bd) {
                        best = Some((d, idx));
                    }
                }
            }
        }
        best.map(|(_, idx)| idx)
    }

    /// Passable edge between adjacent nodes: both inside and no wall between.
    fn open_edge(&self, a: usize, b: usize, domain: &Domain, walls: &[BoundaryPiece]) -> bool {
        if !self.inside[a] || !self.inside[b] {
            return false;
        }
        let pa = self.point(a);
        let pb = self.point(b);
        if self.dist[a] > self.h && self.dist[b] > self.h {
            // a boundary piece cannot pass between them
            if walls.is_empty() {
                return true;
            }
            let clear = walls.iter().all(|w| w.distance(pa) > self.h && w.distance(pb) > self.h);
            if clear {
                return true;
            }
            return !walls.iter().any(|w| w.crosses_segment(pa, pb));
        }
        !domain.pieces().iter().any(|p| p.crosses_segment(pa, pb))
            && !walls.iter().any(|w| w.crosses_segment(pa, pb))
    }

    /// Label all components (4-connectivity).
    fn label_all(&mut self, domain: &Domain) {
        let mut next = 0u32;
        let mut queue = VecDeque::new();
        for start in 0..self.inside.len() {
            if !self.inside[start] || self.label[start] != UNLABELED {
                continue;
            }
            self.label[start] = next;
            queue.push_back(start);
            while let Some(idx) = queue.pop_front() {
                for nb in self.neighbors(idx) {
                    if self.inside[nb]
                        && self.label[nb] == UNLABELED
                        && self.open_edge(idx, nb, domain, &[])
                    {
                        self.label[nb] = next;
                        queue.push_back(nb);
                    }
                }
            }
            next += 1;
        }
    }

    fn neighbors(&self, idx: usize) -> impl Iterator<Item = usize> {
        let n = self.n;
        let i = idx % n;
        let j = idx / n;
        let mut out = [usize::MAX; 4];
        let mut k = 0;
        if i > 0 {
            out[k] = idx - 1;
            k += 1;
        }
        if i + 1 < n {
            out[k] = idx + 1;
            k += 1;
        }
        if j > 0 {
            out[k] = idx - n;
            k += 1;
        }
        if j + 1 < n {
            out[k] = idx + n;
            k += 1;
        }
        out.into_iter().take(k)
    }

    /// Flood from `seed` with extra walls; returns whether the flood touched
    /// the window border.
    fn flood_reaches_border(&self, seed: usize, domain: &Domain, walls: &[BoundaryPiece]) -> bool {
        let mut seen = vec![false; self.inside.len()];
        let mut queue = VecDeque::new();
        seen[seed] = true;
        queue.push_back(seed);
        let border = |idx: usize| {
            let i = idx % self.n;
            let j = idx / self.n;
            i == 0 || j == 0 || i + 1 == self.n || j + 1 == self.n
        };
        if border(seed) {
            return true;
        }
        while let Some(idx) = queue.pop_front() {
            for nb in self.neighbors(idx) {
                if self.inside[nb] && !seen[nb] && self.open_edge(idx, nb, domain, walls) {
                    if border(nb) {
                        return true;
                    }
                    seen[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
        false
    }
}

/// Decompose the level circle of radius `r`: the arcs on the boundary of the
/// base-point component of `D` minus the circle, each flagged with the
/// boundedness of its far side.
pub fn crosscut_decomposition(domain: &Domain, r: f64, grid_h: f64) -> Result<CrosscutDecomposition> {
    let w0 = domain.base_point();
    if !(r > 0.0) || !(grid_h > 0.0) {
        return Err(Error::InvalidParameter("radius and grid_h must be positive".into()));
    }
    if w0.norm() >= r {
        return Err(Error::InvalidParameter(format!(
            "base point |w0| = {} must lie inside the level radius {r}",
            w0.norm()
        )));
    }
    if grid_h > r / 8.0 {
        return Err(Error::GridTooCoarse { required: r / 8.0, got: grid_h });
    }

    let arcs = circle_intersection(domain, r)?;
    if arcs.is_empty() {
        return Ok(CrosscutDecomposition {
            radius: r,
            crosscuts: Vec::new(),
            pruned_count: 0,
            grid_resolution: grid_h,
        });
    }
    if arcs.len() == 1 && arcs[0].is_full() {
        let cut = Crosscut {
            id: 0,
            radius: r,
            span: ArcSpan::full(),
            closed: true,
            bounds_base_component: true,
            far_side_unbounded: !domain.is_bounded(),
        };
        return Ok(CrosscutDecomposition {
            radius: r,
            crosscuts: vec![cut],
            pruned_count: 0,
            grid_resolution: grid_h,
        });
    }

    let mut grid = LabelGrid::build(domain, r, grid_h, &|p| p.norm() < r);
    grid.label_all(domain);
    let base_idx = grid
        .node_near(w0)
        .ok_or_else(|| Error::GridTooCoarse { required: domain.distance_to_boundary(w0) / 2.0, got: grid_h })?;
    let base_label = grid.label[base_idx];

    let mut crosscuts = Vec::new();
    let mut pruned = 0usize;
    for span in &arcs {
        match arc_label(&grid, *span, r, grid_h) {
            ArcLabel::Component(l) if l == base_label => {
                crosscuts.push(*span);
            }
            ArcLabel::Component(_) => {}
            ArcLabel::Unresolved => {
                if span.width * r > 4.0 * grid_h {
                    return Err(Error::GridTooCoarse { required: span.width * r / 4.0, got: grid_h });
                }
                pruned += 1;
            }
            ArcLabel::Mixed => {
                return Err(Error::GridTooCoarse { required: grid_h / 2.0, got: grid_h });
            }
        }
    }

    let far_grid = if domain.is_bounded() {
        None
    } else {
        let half = 16.0 * r;
        let h_far = r / 16.0;
        Some(LabelGrid::build(domain, half, h_far, &|_| true))
    };

    let mut cuts = Vec::with_capacity(crosscuts.len());
    for (id, span) in crosscuts.into_iter().enumerate() {
        let mut cut = Crosscut {
            id,
            radius: r,
            span,
            closed: false,
            bounds_base_component: true,
            far_side_unbounded: true,
        };
        cut.far_side_unbounded = match &far_grid {
            None => false,
            Some(fg) => far_side_unbounded(fg, domain, &cut),
        };
        cuts.push(cut);
    }

    Ok(CrosscutDecomposition {
        radius: r,
        crosscuts: cuts,
        pruned_count: pruned,
        grid_resolution: grid_h,
    })
}

enum ArcLabel {
    Component(u32),
    Unresolved,
    Mixed,
}

/// Label of the region just inside the circle along the arc.
fn arc_label(grid: &LabelGrid, span: ArcSpan, r: f64, grid_h: f64) -> ArcLabel {
    let m = ((span.width * r / (4.0 * grid_h)).ceil() as usize).clamp(3, 33);
    let mut found: Option<u32> = None;
    for k in 0..m {
        let f = (k as f64 + 0.5) / m as f64;
        // keep away from the arc endpoints, which sit on the boundary
        let f = 0.1 + 0.8 * f;
        let probe = Point::from_polar(r - 2.0 * grid_h, span.at(f));
        let Some(idx) = grid.node_near(probe) else { continue };
        if grid.point(idx).dist(probe) > 2.0 * grid_h {
            continue;
        }
        let l = grid.label[idx];
        if l == UNLABELED {
            continue;
        }
        match found {
            None => found = Some(l),
            Some(prev) if prev != l => return ArcLabel::Mixed,
            Some(_) => {}
        }
    }
    match found {
        Some(l) => ArcLabel::Component(l),
        None => ArcLabel::Unresolved,
    }
}

/// Whether the component beyond the cut (not holding the base point) escapes
/// the 16r window.
fn far_side_unbounded(grid: &LabelGrid, domain: &Domain, cut: &Crosscut) -> bool {
    let wall = [cut.as_piece()];
    let h = grid.h;
    let m = ((cut.span.width / 0.2).ceil() as usize).clamp(1, 16);
    for k in 0..m {
        let f = (k as f64 + 0.5) / m as f64;
        let probe = Point::from_polar(cut.radius + 2.0 * h, cut.span.at(0.1 + 0.8 * f));
        if !domain.contains(probe) {
            continue;
        }
        let Some(seed) = grid.node_near(probe) else { continue };
        if grid.point(seed).norm() <= cut.radius || grid.point(seed).dist(probe) > 2.0 * h {
            continue;
        }
        return grid.flood_reaches_border(seed, domain, &wall);
    }
    // could not place a seed beyond a very small arc; the supported unbounded
    // classes have no bounded pockets, so report unbounded
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn wedge_single_crosscut() {
        let d = Domain::wedge(PI / 2.0, Point::new(0.5, 0.25)).unwrap();
        let r = 10.0;
        let dec = crosscut_decomposition(&d, r, r / 256.0).unwrap();
        assert_eq!(dec.crosscuts.len(), 1);
        let cut = &dec.crosscuts[0];
        assert!((cut.span.width - PI / 2.0).abs() < 1e-9);
        assert!(cut.far_side_unbounded);
        assert!(!cut.closed);
    }

    #[test]
    fn comb_inner_zone_four_crosscuts() {
        let d = Domain::comb(2.0, 1, 1e9, Point::new(0.5, 0.1)).unwrap();
        let r = 2.0; // inside (1, e^2)
        let dec = crosscut_decomposition(&d, r, r / 256.0).unwrap();
        assert_eq!(dec.crosscuts.len(), 4);
        for cut in &dec.crosscuts {
            assert!(cut.far_side_unbounded);
        }
    }

    #[test]
    fn square_interior_circle_is_closed() {
        let square = Domain::polygon(
            vec![
                Point::new(-1.0, -1.0),
                Point::new(1.0, -1.0),
                Point::new(1.0, 1.0),
                Point::new(-1.0, 1.0),
            ],
            Point::new(0.0, 0.0),
        )
        .unwrap();
        let dec = crosscut_decomposition(&square, 0.1, 0.1 / 64.0).unwrap();
        assert_eq!(dec.crosscuts.len(), 1);
        assert!(dec.crosscuts[0].closed);
        assert!(!dec.crosscuts[0].far_side_unbounded);
    }

    #[test]
    fn decomposition_is_subset_of_circle_intersection() {
        let d = Domain::comb(2.0, 2, 1e9, Point::new(0.5, 0.1)).unwrap();
        let r = 9.0;
        let arcs = circle_intersection(&d, r).unwrap();
        let dec = crosscut_decomposition(&d, r, r / 256.0).unwrap();
        for cut in &dec.crosscuts {
            assert!(
                arcs.iter().any(|a| (a.start - cut.span.start).abs() < 1e-12
                    && (a.width - cut.span.width).abs() < 1e-12),
                "crosscut not among circle arcs"
            );
        }
        assert!(dec.crosscuts.len() <= arcs.len());
    }

    #[test]
    fn at_most_one_bounded_far_side_on_unbounded_domains() {
        for d in [
            Domain::wedge(1.5 * PI, Point::new(0.5, 0.0)).unwrap(),
            Domain::comb(2.0, 2, 1e9, Point::new(0.5, 0.1)).unwrap(),
            Domain::slit_plane(
                vec![(Point::new(1.0, 0.0), Point::new(1.0, 0.0))],
                Point::new(0.0, 0.0),
            )
            .unwrap(),
        ] {
            for r in [2.5, 9.0] {
                let dec = crosscut_decomposition(&d, r, r / 256.0).unwrap();
                let bounded = dec.crosscuts.iter().filter(|c| !c.far_side_unbounded).count();
                assert!(bounded <= 1, "{bounded} bounded far sides at r={r}");
            }
        }
    }

    #[test]
    fn refinement_keeps_wide_crosscuts() {
        let d = Domain::comb(2.0, 1, 1e9, Point::new(0.5, 0.1)).unwrap();
        let r = 2.0;
        let coarse = crosscut_decomposition(&d, r, r / 128.0).unwrap();
        let fine = crosscut_decomposition(&d, r, r / 256.0).unwrap();
        for cut in &coarse.crosscuts {
            if cut.span.width > 4.0 * (r / 128.0) / r {
                assert!(
                    fine.crosscuts
                        .iter()
                        .any(|c| (c.span.start - cut.span.start).abs() < 1e-9),
                    "refinement dropped a wide crosscut"
                );
            }
        }
    }

    #[test]
    fn coarse_grid_reports_required_resolution() {
        let d = Domain::wedge(PI / 2.0, Point::new(0.5, 0.25)).unwrap();
        let err = crosscut_decomposition(&d, 10.0, 2.0).unwrap_err();
        assert!(matches!(err, Error::GridTooCoarse { .. }));
    }
}
