//! Boundary pieces: exact distance, segment-crossing predicates and
//! intersections with origin-centered circles.

use super::circle::ArcSpan;
use super::Point;
use crate::{Error, Result};

/// One piece of a domain boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryPiece {
    Segment { a: Point, b: Point },
    /// `origin + t*dir`, `t >= 0`, with `dir` of unit norm.
    Ray { origin: Point, dir: Point },
    CircularArc { center: Point, radius: f64, span: ArcSpan },
    FullCircle { center: Point, radius: f64 },
}

impl BoundaryPiece {
    pub fn segment(a: Point, b: Point) -> Result<Self> {
        if a.dist(b) == 0.0 {
            return Err(Error::InvalidDomain("segment endpoints coincide".into()));
        }
        Ok(BoundaryPiece::Segment { a, b })
    }

    pub fn ray(origin: Point, dir: Point) -> Result<Self> {
        let n = dir.norm();
        if !(n > 0.0) || !dir.is_finite() {
            return Err(Error::InvalidDomain("ray direction must be nonzero".into()));
        }
        Ok(BoundaryPiece::Ray { origin, dir: dir.scale(1.0 / n) })
    }

    pub fn circular_arc(center: Point, radius: f64, span: ArcSpan) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidDomain("arc radius must be positive".into()));
        }
        Ok(BoundaryPiece::CircularArc { center, radius, span })
    }

    pub fn circle(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidDomain("circle radius must be positive".into()));
        }
        Ok(BoundaryPiece::FullCircle { center, radius })
    }

    pub fn endpoints(&self) -> Option<(Point, Point)> {
        match self {
            BoundaryPiece::Segment { a, b } => Some((*a, *b)),
            _ => None,
        }
    }

    /// Euclidean distance from `z` to the piece.
    pub fn distance(&self, z: Point) -> f64 {
        match self {
            BoundaryPiece::Segment { a, b } => {
                let u = *b - *a;
                let t = ((z - *a).dot(u) / u.norm2()).clamp(0.0, 1.0);
                z.dist(*a + u.scale(t))
            }
            BoundaryPiece::Ray { origin, dir } => {
                let t = (z - *origin).dot(*dir).max(0.0);
                z.dist(*origin + dir.scale(t))
            }
            BoundaryPiece::CircularArc { center, radius, span } => {
                let v = z - *center;
                if span.contains(v.angle()) {
                    (v.norm() - radius).abs()
                } else {
                    let e0 = *center + Point::from_polar(*radius, span.start);
                    let e1 = *center + Point::from_polar(*radius, span.end());
                    z.dist(e0).min(z.dist(e1))
                }
            }
            BoundaryPiece::FullCircle { center, radius } => (z.dist(*center) - radius).abs(),
        }
    }

    /// Whether the piece meets the closed segment `[p, q]`. Used to cut grid
    /// edges that would otherwise tunnel through a wall.
    pub fn crosses_segment(&self, p: Point, q: Point) -> bool {
        match self {
            BoundaryPiece::Segment { a, b } => seg_seg_intersect(p, q, *a, *b),
            BoundaryPiece::Ray { origin, dir } => seg_ray_intersect(p, q, *origin, *dir),
            BoundaryPiece::CircularArc { center, radius, span } => {
                seg_circle_params(p, q, *center, *radius)
                    .into_iter()
                    .any(|t| {
                        let x = p + (q - p).scale(t);
                        span.contains((x - *center).angle())
                    })
            }
            BoundaryPiece::FullCircle { center, radius } => {
                !seg_circle_params(p, q, *center, *radius).is_empty()
            }
        }
    }

    /// Intersection angles with the origin-centered circle of radius `r`.
    /// Appends isolated cut angles to `cuts`; a piece that overlaps the circle
    /// along an arc appends the overlapped span to `blocked`.
    pub fn circle_cuts(&self, r: f64, cuts: &mut Vec<f64>, blocked: &mut Vec<ArcSpan>) {
        match self {
            BoundaryPiece::Segment { a, b } => {
                for t in line_circle_params(*a, *b - *a, r) {
                    if (0.0..=1.0).contains(&t) {
                        cuts.push((*a + (*b - *a).scale(t)).angle());
                    }
                }
            }
            BoundaryPiece::Ray { origin, dir } => {
                for t in line_circle_params(*origin, *dir, r) {
                    if t >= 0.0 {
                        cuts.push((*origin + dir.scale(t)).angle());
                    }
                }
            }
            BoundaryPiece::CircularArc { center, radius, span } => {
                circle_circle_cuts(*center, *radius, Some(*span), r, cuts, blocked)
            }
            BoundaryPiece::FullCircle { center, radius } => {
                circle_circle_cuts(*center, *radius, None, r, cuts, blocked)
            }
        }
    }

    /// Radii about the origin at which a concentric circle is tangent to the
    /// piece or passes through one of its endpoints.
    pub fn radial_extremes(&self, out: &mut Vec<f64>) {
        match self {
            BoundaryPiece::Segment { a, b } => {
                out.push(a.norm());
                out.push(b.norm());
                let u = *b - *a;
                let t = -a.dot(u) / u.norm2();
                if t > 0.0 && t < 1.0 {
                    out.push((*a + u.scale(t)).norm());
                }
            }
            BoundaryPiece::Ray { origin, dir } => {
                out.push(origin.norm());
                let t = -origin.dot(*dir);
                if t > 0.0 {
                    out.push((*origin + dir.scale(t)).norm());
                }
            }
            BoundaryPiece::CircularArc { center, radius, span } => {
                out.push((*center + Point::from_polar(*radius, span.start)).norm());
                out.push((*center + Point::from_polar(*radius, span.end())).norm());
                let d = center.norm();
                if d > 0.0 {
                    let towards_origin = (center.scale(-1.0 / d)).angle();
                    if span.contains(towards_origin) {
                        out.push((d - radius).abs());
                    }
                    if span.contains(center.scale(1.0 / d).angle()) {
                        out.push(d + radius);
                    }
                } else {
                    out.push(*radius);
                }
            }
            BoundaryPiece::FullCircle { center, radius } => {
                let d = center.norm();
                if d > 0.0 {
                    out.push((d - radius).abs());
                    out.push(d + radius);
                } else {
                    out.push(*radius);
                }
            }
        }
    }
}

/// Roots `t` of `|o + t*d| = r` (any real `t`; caller clips to the piece).
fn line_circle_params(o: Point, d: Point, r: f64) -> Vec<f64> {
    let a = d.norm2();
    let b = o.dot(d);
    let c = o.norm2() - r * r;
    let disc = b * b - a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    if s == 0.0 {
        return vec![-b / a];
    }
    vec![(-b - s) / a, (-b + s) / a]
}

/// Parameters `t in [0,1]` where segment `p + t(q-p)` meets `|x - c| = r`.
fn seg_circle_params(p: Point, q: Point, c: Point, r: f64) -> Vec<f64> {
    line_circle_params(p - c, q - p, r)
        .into_iter()
        .filter(|t| (0.0..=1.0).contains(t))
        .collect()
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection, touching counts.
fn seg_seg_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

fn seg_ray_intersect(p: Point, q: Point, o: Point, d: Point) -> bool {
    let u = q - p;
    let w = o - p;
    let denom = u.cross(d);
    if denom.abs() < 1e-300 {
        // parallel: touch only if collinear with overlap
        if orient(p, q, o).abs() > 0.0 {
            return false;
        }
        let piece = BoundaryPiece::Ray { origin: o, dir: d };
        return piece.distance(p) == 0.0 || piece.distance(q) == 0.0 || on_segment(p, q, o);
    }
    let t = w.cross(d) / denom; // along the segment
    let s = w.cross(u) / denom; // along the ray
    (0.0..=1.0).contains(&t) && s >= 0.0
}

fn circle_circle_cuts(
    c: Point,
    rad: f64,
    span: Option<ArcSpan>,
    r: f64,
    cuts: &mut Vec<f64>,
    blocked: &mut Vec<ArcSpan>,
) {
    let d = c.norm();
    if d == 0.0 {
        if (rad - r).abs() <= 1e-12 * r.max(1.0) {
            blocked.push(span.unwrap_or(ArcSpan::full()));
        }
        return;
    }
    if d > r + rad || d < (r - rad).abs() {
        return;
    }
    let a = (r * r - rad * rad + d * d) / (2.0 * d);
    let h2 = r * r - a * a;
    let axis = c.scale(1.0 / d);
    let perp = Point::new(-axis.y, axis.x);
    let points = if h2 <= 0.0 {
        vec![axis.scale(a)]
    } else {
        let h = h2.sqrt();
        vec![axis.scale(a) + perp.scale(h), axis.scale(a) - perp.scale(h)]
    };
    for x in points {
        let ok = match span {
            Some(s) => s.contains((x - c).angle()),
            None => true,
        };
        if ok {
            cuts.push(x.angle());
        }
    }
}

/// Disjointness check used by the slit-plane constructor.
pub(super) fn rays_touch(a: &BoundaryPiece, b: &BoundaryPiece) -> bool {
    let (BoundaryPiece::Ray { origin: o1, dir: d1 }, BoundaryPiece::Ray { origin: o2, dir: d2 }) =
        (a, b)
    else {
        return false;
    };
    let denom = d1.cross(*d2);
    if denom.abs() < 1e-14 {
        return a.distance(*o2) < 1e-12 * (1.0 + o2.norm())
            || b.distance(*o1) < 1e-12 * (1.0 + o1.norm());
    }
    let w = *o2 - *o1;
    let s = w.cross(*d2) / denom;
    let t = w.cross(*d1) / denom;
    s >= -1e-12 && t >= -1e-12
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn segment_distance() {
        let s = BoundaryPiece::segment(Point::new(0.0, 0.0), Point::new(2.0, 0.0)).unwrap();
        assert_eq!(s.distance(Point::new(1.0, 1.0)), 1.0);
        assert_eq!(s.distance(Point::new(3.0, 0.0)), 1.0);
    }

    #[test]
    fn ray_circle_cuts() {
        // slit [1, +inf) against |z| = 2
        let ray = BoundaryPiece::ray(Point::new(1.0, 0.0), Point::new(1.0, 0.0)).unwrap();
        let mut cuts = Vec::new();
        let mut blocked = Vec::new();
        ray.circle_cuts(2.0, &mut cuts, &mut blocked);
        assert_eq!(cuts.len(), 1);
        assert!(cuts[0].abs() < 1e-12);
        // and no cut for a circle short of the slit
        cuts.clear();
        ray.circle_cuts(0.5, &mut cuts, &mut blocked);
        assert!(cuts.is_empty() && blocked.is_empty());
    }

    #[test]
    fn crossing_predicates() {
        let ray = BoundaryPiece::ray(Point::new(1.0, 0.0), Point::new(1.0, 0.0)).unwrap();
        assert!(ray.crosses_segment(Point::new(2.0, -0.1), Point::new(2.0, 0.1)));
        assert!(!ray.crosses_segment(Point::new(0.5, -0.1), Point::new(0.5, 0.1)));
        let circ = BoundaryPiece::circle(Point::new(0.0, 0.0), 1.0).unwrap();
        assert!(circ.crosses_segment(Point::new(0.9, 0.0), Point::new(1.1, 0.0)));
        assert!(!circ.crosses_segment(Point::new(0.1, 0.0), Point::new(0.2, 0.0)));
    }

    #[test]
    fn arc_distance_respects_span() {
        let span = ArcSpan::new(0.0, PI);
        let arc = BoundaryPiece::circular_arc(Point::new(0.0, 0.0), 1.0, span).unwrap();
        assert!((arc.distance(Point::new(0.0, 2.0)) - 1.0).abs() < 1e-15);
        // below the diameter the nearest points are the arc endpoints
        let d = arc.distance(Point::new(0.0, -1.0));
        assert!((d - 2f64.sqrt()).abs() < 1e-12);
    }
}
