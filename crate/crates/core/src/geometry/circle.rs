//! Intersection of a domain with origin-centered circles, as open angular
//! spans. These are the images of the level sets of the Riemann map, so all
//! level-set machinery starts here.

use super::{Domain, Point, TAU};
use crate::Result;

/// Snap tolerance for intersection angles, relative to the circle radius.
const SNAP: f64 = 1e-9;

/// An angular interval on a circle: `[start, start + width)` with
/// `start` normalized to `[0, 2*pi)` and `width` in `(0, 2*pi]`.
/// A span of width `2*pi` is the full circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcSpan {
    pub start: f64,
    pub width: f64,
}

impl ArcSpan {
    pub fn new(start: f64, width: f64) -> Self {
        debug_assert!(width > 0.0 && width <= TAU + 1e-12);
        ArcSpan { start: start.rem_euclid(TAU), width: width.min(TAU) }
    }

    pub fn full() -> Self {
        ArcSpan { start: 0.0, width: TAU }
    }

    pub fn is_full(self) -> bool {
        self.width >= TAU - 1e-12
    }

    pub fn end(self) -> f64 {
        self.start + self.width
    }

    pub fn midpoint(self) -> f64 {
        (self.start + 0.5 * self.width).rem_euclid(TAU)
    }

    /// Closed containment test, wrap-aware.
    pub fn contains(self, angle: f64) -> bool {
        if self.is_full() {
            return true;
        }
        (angle - self.start).rem_euclid(TAU) <= self.width
    }

    /// Angle at fraction `f` in `[0, 1]` along the span.
    pub fn at(self, f: f64) -> f64 {
        (self.start + f * self.width).rem_euclid(TAU)
    }
}

/// The maximal open arcs of `D âˆ© {|z| = r}`, pairwise disjoint and sorted by
/// start angle. Returns the full circle when it lies entirely inside `D`, and
/// an empty list when it misses `D`.
pub fn circle_intersection(domain: &Domain, r: f64) -> Result<Vec<ArcSpan>> {
    assert!(r > 0.0, "circle radius must be positive");
    let mut cuts: Vec<f64> = Vec::new();
    let mut blocked: Vec<ArcSpan> = Vec::new();
    for piece in domain.pieces() {
        piece.circle_cuts(r, &mut cuts, &mut blocked);
    }
    for b in &blocked {
        cuts.push(b.start.rem_euclid(TAU));
        cuts.push(b.end().rem_euclid(TAU));
    }
    cuts = snap_angles(cuts);

    if cuts.is_empty() {
        let probe = Point::from_polar(r, 0.0);
        return Ok(if domain.contains(probe) && blocked.is_empty() {
            vec![ArcSpan::full()]
        } else {
            Vec::new()
        });
    }

    let mut arcs = Vec::new();
    let n = cuts.len();
    for i in 0..n {
        let a = cuts[i];
        let b = if i + 1 < n { cuts[i + 1] } else { cuts[0] + TAU };
        let width = b - a;
        if width <= SNAP {
            continue;
        }
        let span = ArcSpan::new(a, width);
        let mid = Point::from_polar(r, span.midpoint());
        if domain.contains(mid) && !blocked.iter().any(|bl| bl.contains(span.midpoint())) {
            arcs.push(span);
        }
    }
    arcs.sort_by(|p, q| p.start.partial_cmp(&q.start).unwrap());
    Ok(arcs)
}

/// Sort, wrap and merge angles closer than the snap tolerance.
fn snap_angles(mut cuts: Vec<f64>) -> Vec<f64> {
    for c in cuts.iter_mut() {
        *c = c.rem_euclid(TAU);
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() <= SNAP);
    // wraparound duplicate: first and last may be the same angle mod 2*pi
    if cuts.len() > 1 {
        let first = cuts[0];
        let last = *cuts.last().unwrap();
        if (first + TAU - last).abs() <= SNAP {
            cuts.pop();
        }
    }
    cuts
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn widths(arcs: &[ArcSpan]) -> Vec<f64> {
        arcs.iter().map(|a| a.width).collect()
    }

    #[test]
    fn wedge_circle_is_single_arc_of_opening_width() {
        for opening in [PI / 4.0, PI / 2.0, PI, 1.5 * PI] {
            let d = Domain::wedge(opening, Point::from_polar(0.3, 0.0)).unwrap();
            for r in [0.7, 5.0, 120.0] {
                let arcs = circle_intersection(&d, r).unwrap();
                assert_eq!(arcs.len(), 1, "opening {opening} r {r}");
                assert!((arcs[0].width - opening).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn disk_misses_large_circle() {
        let d = Domain::disk(Point::new(0.0, 0.0), 1.0, Point::new(0.0, 0.0)).unwrap();
        assert!(circle_intersection(&d, 2.0).unwrap().is_empty());
        assert!(circle_intersection(&d, 0.5).unwrap()[0].is_full());
    }

    #[test]
    fn comb_inner_zone_has_four_quarter_arcs() {
        let d = Domain::comb(2.0, 1, 1e9, Point::new(0.0, 0.0)).unwrap();
        let arcs = circle_intersection(&d, 2.0).unwrap();
        assert_eq!(arcs.len(), 4);
        for w in widths(&arcs) {
            assert!((w - PI / 2.0).abs() < 1e-9);
        }
        // past the first level the arcs halve
        let arcs = circle_intersection(&d, (2.0f64).exp() * 1.5).unwrap();
        assert_eq!(arcs.len(), 8);
        for w in widths(&arcs) {
            assert!((w - PI / 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn slit_tip_on_circle_gives_full_width_arc() {
        let d = Domain::slit_plane(
            vec![(Point::new(1.0, 0.0), Point::new(1.0, 0.0))],
            Point::new(0.0, 0.0),
        )
        .unwrap();
        let arcs = circle_intersection(&d, 1.0).unwrap();
        assert_eq!(arcs.len(), 1);
        assert!((arcs[0].width - TAU).abs() < 1e-8);
        // beyond the tip the slit cuts a single point out of the circle
        let arcs = circle_intersection(&d, 3.0).unwrap();
        assert_eq!(arcs.len(), 1);
        assert!((arcs[0].width - TAU).abs() < 1e-8);
        // short of the tip the circle is interior
        assert!(circle_intersection(&d, 0.5).unwrap()[0].is_full());
    }

    #[test]
    fn arcs_are_disjoint_and_end_on_boundary() {
        let d = Domain::comb(2.0, 2, 1e9, Point::new(0.5, 0.1)).unwrap();
        let r = 9.0;
        let arcs = circle_intersection(&d, r).unwrap();
        for (i, a) in arcs.iter().enumerate() {
            for b in arcs.iter().skip(i + 1) {
                assert!(!a.contains(b.midpoint()) && !b.contains(a.midpoint()));
            }
            for endpoint in [a.start, a.end()] {
                let z = Point::from_polar(r, endpoint);
                assert!(d.distance_to_boundary(z) < 1e-6 * r, "arc endpoint off boundary");
            }
        }
    }

    #[test]
    fn square_circle_corner_arcs() {
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
        // radius between inradius and circumradius: four corner arcs
        let arcs = circle_intersection(&square, 1.2).unwrap();
        assert_eq!(arcs.len(), 4);
    }
}
