//! Planar domain geometry: supported domain classes, boundary pieces,
//! circle/level-set intersection and the crosscut decomposition.
//!
//! A [`Domain`] is an unbounded (or bounded Jordan) simply connected region
//! described by explicit boundary pieces together with a base point strictly
//! inside. Only a fixed set of domain classes is constructible: wedges, slit
//! planes with disjoint rays, Jordan polygons, disks and the comb family of
//! nested radial slits. Arbitrary boundary input is rejected because simple
//! connectivity cannot be validated for free-form pieces.

mod circle;
mod crosscut;
mod piece;

pub use circle::{circle_intersection, ArcSpan};
pub use crosscut::{crosscut_decomposition, Crosscut, CrosscutDecomposition};
pub use piece::BoundaryPiece;

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const TAU: f64 = 2.0 * PI;

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn from_polar(r: f64, angle: f64) -> Self {
        Point::new(r * angle.cos(), r * angle.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm2(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Argument in [0, 2π).
    pub fn angle(self) -> f64 {
        let a = self.y.atan2(self.x);
        if a < 0.0 {
            a + TAU
        } else {
            a
        }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

/// Which fixed class a domain belongs to.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainKind {
    /// `{ z : |arg z| < opening/2 }` about the positive real axis.
    Wedge { opening: f64 },
    /// Complement of finitely many disjoint closed rays to infinity.
    SlitPlane,
    /// Interior of a Jordan polygon.
    Polygon,
    /// Open disk.
    Disk { center: Point, radius: f64 },
    /// Nested radial-slit family: 4 unit-radius rays plus 2^(l+1) rays at
    /// radius e^(c*l) per level l. Levels whose start radius exceeds `r_max`
    /// are omitted; the rays themselves always run to infinity.
    Comb { c: f64, levels: u32, r_max: f64 },
}

/// A supported simply connected planar domain with its base point.
///
/// Values are immutable after construction; all queries are pure.
#[derive(Debug, Clone)]
pub struct Domain {
    kind: DomainKind,
    pieces: Vec<BoundaryPiece>,
    base_point: Point,
    bounded: bool,
}

impl Domain {
    fn validate_base(self) -> Result<Self> {
        if !self.base_point.is_finite() {
            return Err(Error::InvalidDomain("base point is not finite".into()));
        }
        if !self.contains(self.base_point) || self.distance_to_boundary(self.base_point) <= 0.0 {
            return Err(Error::InvalidDomain(format!(
                "base point ({}, {}) is not strictly inside the domain",
                self.base_point.x, self.base_point.y
            )));
        }
        Ok(self)
    }

    /// Wedge of the given opening angle about the positive real axis.
    pub fn wedge(opening: f64, base_point: Point) -> Result<Self> {
        if !(opening > 0.0 && opening < TAU) {
            return Err(Error::InvalidDomain(format!(
                "wedge opening must lie in (0, 2*pi), got {opening}"
            )));
        }
        let half = 0.5 * opening;
        let pieces = vec![
            BoundaryPiece::ray(Point::new(0.0, 0.0), Point::from_polar(1.0, half))?,
            BoundaryPiece::ray(Point::new(0.0, 0.0), Point::from_polar(1.0, -half))?,
        ];
        Domain {
            kind: DomainKind::Wedge { opening },
            pieces,
            base_point,
            bounded: false,
        }
        .validate_base()
    }

    /// Complement of disjoint closed rays. Each ray is (origin, unit direction).
    pub fn slit_plane(rays: Vec<(Point, Point)>, base_point: Point) -> Result<Self> {
        if rays.is_empty() {
            return Err(Error::InvalidDomain("slit plane needs at least one ray".into()));
        }
        let pieces: Vec<BoundaryPiece> = rays
            .into_iter()
            .map(|(o, d)| BoundaryPiece::ray(o, d))
            .collect::<Result<_>>()?;
        for i in 0..pieces.len() {
            for j in (i + 1)..pieces.len() {
                if piece::rays_touch(&pieces[i], &pieces[j]) {
                    return Err(Error::InvalidDomain(format!(
                        "rays {i} and {j} are not disjoint"
                    )));
                }
            }
        }
        Domain {
            kind: DomainKind::SlitPlane,
            pieces,
            base_point,
            bounded: false,
        }
        .validate_base()
    }

    /// Interior of the Jordan polygon with the given vertices (in order).
    pub fn polygon(vertices: Vec<Point>, base_point: Point) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidDomain("polygon needs at least 3 vertices".into()));
        }
        let n = vertices.len();
        let mut pieces = Vec::with_capacity(n);
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            if a.dist(b) == 0.0 {
                return Err(Error::InvalidDomain("degenerate polygon edge".into()));
            }
            pieces.push(BoundaryPiece::segment(a, b)?);
        }
        Domain {
            kind: DomainKind::Polygon,
            pieces,
            base_point,
            bounded: true,
        }
        .validate_base()
    }

    pub fn disk(center: Point, radius: f64, base_point: Point) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidDomain("disk radius must be positive".into()));
        }
        Domain {
            kind: DomainKind::Disk { center, radius },
            pieces: vec![BoundaryPiece::circle(center, radius)?],
            base_point,
            bounded: true,
        }
        .validate_base()
    }

    /// The nested radial-slit comb: 4 rays from the unit circle plus, for each
    /// level `l = 1..=levels` with `e^(c*l) <= r_max`, the 2^(l+1) rays
    /// starting at radius `e^(c*l)` with angles `pi*(1/2 + k)/2^l`.
    pub fn comb(c: f64, levels: u32, r_max: f64, base_point: Point) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::InvalidDomain("comb growth exponent must be positive".into()));
        }
        if levels < 1 {
            return Err(Error::InvalidDomain("comb needs at least one level".into()));
        }
        let mut rays = Vec::new();
        for k in 0..4u32 {
            let angle = f64::from(k) * PI / 2.0;
            rays.push((Point::from_polar(1.0, angle), Point::from_polar(1.0, angle)));
        }
        for l in 1..=levels {
            let start = (c * f64::from(l)).exp();
            if start > r_max {
                break;
            }
            let count = 2u64 << l; // 2^(l+1)
            let step = PI / f64::from(2u32.pow(l));
            for k in 0..count {
                let angle = step * (0.5 + k as f64);
                rays.push((Point::from_polar(start, angle), Point::from_polar(1.0, angle)));
            }
        }
        let pieces: Vec<BoundaryPiece> = rays
            .into_iter()
            .map(|(o, d)| BoundaryPiece::ray(o, d))
            .collect::<Result<_>>()?;
        // Distinct angles per level and growing radii make overlap impossible.
        debug_assert!({
            let mut ok = true;
            for i in 0..pieces.len() {
                for j in (i + 1)..pieces.len() {
                    ok &= !piece::rays_touch(&pieces[i], &pieces[j]);
                }
            }
            ok
        });
        Domain {
            kind: DomainKind::Comb { c, levels, r_max },
            pieces,
            base_point,
            bounded: false,
        }
        .validate_base()
    }

    pub fn kind(&self) -> &DomainKind {
        &self.kind
    }

    pub fn pieces(&self) -> &[BoundaryPiece] {
        &self.pieces
    }

    pub fn base_point(&self) -> Point {
        self.base_point
    }

    pub fn is_bounded(&self) -> bool {
        self.bounded
    }

    /// Exact Euclidean distance from `z` to the boundary.
    pub fn distance_to_boundary(&self, z: Point) -> f64 {
        match &self.kind {
            DomainKind::Wedge { .. } | DomainKind::Disk { .. } => {
                // one or two pieces; the generic path is already cheap
                self.pieces.iter().map(|p| p.distance(z)).fold(f64::INFINITY, f64::min)
            }
            _ => self
                .pieces
                .iter()
                .map(|p| p.distance(z))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// True iff `z` lies in the open domain.
    pub fn contains(&self, z: Point) -> bool {
        if !z.is_finite() {
            return false;
        }
        match &self.kind {
            DomainKind::Wedge { opening } => {
                if z.x == 0.0 && z.y == 0.0 {
                    return false;
                }
                z.y.atan2(z.x).abs() < 0.5 * opening
            }
            DomainKind::SlitPlane | DomainKind::Comb { .. } => {
                self.pieces.iter().all(|p| p.distance(z) > 0.0)
            }
            DomainKind::Polygon => {
                if self.distance_to_boundary(z) == 0.0 {
                    return false;
                }
                let mut inside = false;
                for p in &self.pieces {
                    let (a, b) = p.endpoints().expect("polygon edges are segments");
                    if (a.y > z.y) != (b.y > z.y) {
                        let t = (z.y - a.y) / (b.y - a.y);
                        if z.x < a.x + t * (b.x - a.x) {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
            DomainKind::Disk { center, radius } => z.dist(*center) < *radius,
        }
    }

    /// Radii (about the origin) at which the level circle is tangent to a
    /// boundary piece or passes through a piece endpoint. Level-set grids are
    /// nudged off these.
    pub fn structural_radii(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for p in &self.pieces {
            p.radial_extremes(&mut out);
        }
        out.retain(|r| r.is_finite() && *r > 0.0);
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * a.abs().max(1.0));
        out
    }
}

/// On-disk JSON description of a domain, one variant per supported class.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainSpec {
    Wedge {
        opening: f64,
        base_point: [f64; 2],
    },
    SlitPlane {
        rays: Vec<RaySpec>,
        base_point: [f64; 2],
    },
    Polygon {
        vertices: Vec<[f64; 2]>,
        base_point: [f64; 2],
    },
    Disk {
        center: [f64; 2],
        radius: f64,
        base_point: [f64; 2],
    },
    Comb {
        c: f64,
        levels: u32,
        #[serde(rename = "R_max")]
        r_max: f64,
        base_point: [f64; 2],
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaySpec {
    pub origin: [f64; 2],
    pub direction: [f64; 2],
}

impl DomainSpec {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<Domain> {
        let pt = |a: [f64; 2]| Point::new(a[0], a[1]);
        match self {
            DomainSpec::Wedge { opening, base_point } => Domain::wedge(*opening, pt(*base_point)),
            DomainSpec::SlitPlane { rays, base_point } => {
                let rays = rays
                    .iter()
                    .map(|r| {
                        let d = pt(r.direction);
                        let n = d.norm();
                        if n == 0.0 {
                            return Err(Error::InvalidDomain("zero ray direction".into()));
                        }
                        Ok((pt(r.origin), d.scale(1.0 / n)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Domain::slit_plane(rays, pt(*base_point))
            }
            DomainSpec::Polygon { vertices, base_point } => {
                Domain::polygon(vertices.iter().map(|v| pt(*v)).collect(), pt(*base_point))
            }
            DomainSpec::Disk { center, radius, base_point } => {
                Domain::disk(pt(*center), *radius, pt(*base_point))
            }
            DomainSpec::Comb { c, levels, r_max, base_point } => {
                Domain::comb(*c, *levels, *r_max, pt(*base_point))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_center_distance() {
        let d = Domain::disk(Point::new(0.0, 0.0), 1.0, Point::new(0.0, 0.0)).unwrap();
        assert_eq!(d.distance_to_boundary(Point::new(0.0, 0.0)), 1.0);
    }

    #[test]
    fn slit_plane_distance_at_origin() {
        let d = Domain::slit_plane(
            vec![(Point::new(1.0, 0.0), Point::new(1.0, 0.0))],
            Point::new(0.0, 0.0),
        )
        .unwrap();
        // nearest boundary point is the slit tip
        assert!((d.distance_to_boundary(Point::new(0.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn comb_distance_and_slit_membership() {
        let d = Domain::comb(2.0, 3, 1e9, Point::new(0.0, 0.0)).unwrap();
        assert!((d.distance_to_boundary(Point::new(0.0, 0.0)) - 1.0).abs() < 1e-15);
        // a point on the k=0 base slit
        assert!(!d.contains(Point::new(2.0, 0.0)));
        assert!(d.contains(Point::new(0.5, 0.1)));
    }

    #[test]
    fn comb_ray_count() {
        let d = Domain::comb(2.0, 3, 1e9, Point::new(0.0, 0.0)).unwrap();
        assert_eq!(d.pieces().len(), 4 + 4 + 8 + 16);
        let d1 = Domain::comb(4.0 * PI, 1, 1e9, Point::new(0.0, 0.0)).unwrap();
        assert_eq!(d1.pieces().len(), 8);
        // r_max below the first level keeps only the base rays
        let d0 = Domain::comb(2.0, 3, 5.0, Point::new(0.0, 0.0)).unwrap();
        assert_eq!(d0.pieces().len(), 4);
    }

    #[test]
    fn comb_contains_unit_disk() {
        let d = Domain::comb(0.7, 4, 1e9, Point::new(0.0, 0.0)).unwrap();
        for k in 0..64 {
            let z = Point::from_polar(0.999, TAU * k as f64 / 64.0);
            assert!(d.contains(z), "unit disk point {k} escaped");
        }
    }

    #[test]
    fn wedge_membership() {
        let d = Domain::wedge(PI / 2.0, Point::new(0.5, 0.25)).unwrap();
        assert!(d.contains(Point::new(1.0, 0.0)));
        assert!(!d.contains(Point::new(0.0, 1.0)));
        assert!(!d.contains(Point::new(-1.0, 0.0)));
    }

    #[test]
    fn wedge_base_point_must_be_interior() {
        assert!(Domain::wedge(PI / 4.0, Point::new(0.5, 0.25)).is_err());
        assert!(Domain::wedge(PI / 4.0, Point::new(0.5, 0.05)).is_ok());
    }

    #[test]
    fn polygon_membership_and_distance() {
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
        assert!(square.contains(Point::new(0.9, 0.9)));
        assert!(!square.contains(Point::new(1.1, 0.0)));
        assert!(!square.contains(Point::new(1.0, 0.0)));
        assert!((square.distance_to_boundary(Point::new(0.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn overlapping_rays_rejected() {
        let r = Domain::slit_plane(
            vec![
                (Point::new(1.0, 0.0), Point::new(1.0, 0.0)),
                (Point::new(2.0, 0.0), Point::new(1.0, 0.0)),
            ],
            Point::new(0.0, 0.0),
        );
        assert!(r.is_err());
    }

    #[test]
    fn spec_round_trip() {
        let text = r#"{"kind":"wedge","opening":1.5707963267948966,"base_point":[0.5,0.25]}"#;
        let spec = DomainSpec::parse(text).unwrap();
        let d = spec.build().unwrap();
        assert!(matches!(d.kind(), DomainKind::Wedge { .. }));
        let bad = DomainSpec::parse(r#"{"kind":"nonsense"}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn structural_radii_disk() {
        let d = Domain::disk(Point::new(3.0, 0.0), 5.0, Point::new(3.0, 0.0)).unwrap();
        let radii = d.structural_radii();
        assert!(radii.iter().any(|r| (*r - 2.0).abs() < 1e-12));
        assert!(radii.iter().any(|r| (*r - 8.0).abs() < 1e-12));
    }
}
