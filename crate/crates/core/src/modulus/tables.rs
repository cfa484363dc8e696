//! Canonical single-arc tables.
//!
//! Every single-arc configuration in the disk is conformally classified by
//! the harmonic measure `omega = theta/pi` of the arc, so two universal
//! functions suffice downstream:
//!
//! * `Lambda(theta)`: extremal distance in the unit disk between the segment
//!   `[-1, 0]` and the boundary arc of half-angle `theta` centered at `+1`;
//! * `Delta(theta)`: reduced extremal distance from the center to the same
//!   arc, i.e. the vanishing-radius limit of the difference between the
//!   inner-circle-to-arc and inner-circle-to-boundary extremal distances.
//!
//! Both are tabulated numerically on a log-polar chart of the disk, where the
//! slit, the inner circle and the boundary are exact grid lines. The chart is
//! halved across the real axis (both configurations are symmetric), and the
//! `Delta` difference is taken between solves on the identical grid so the
//! shared truncation error cancels.

use super::{graded_radial, log_polar_grid, solve, LogPolarSpec, NodeClass};
use crate::{Error, Result};
use rayon::join;
use std::f64::consts::PI;
use std::path::Path;

/// Radial truncation for the slit problem; the potential decays like
/// `exp(s/2)` toward the origin, so the tail beyond `s = -12` is negligible.
const S_MIN_SLIT: f64 = -12.0;
const H_MAX: f64 = 0.08;
const GROWTH: f64 = 1.06;

#[derive(Debug, Clone)]
pub struct CanonicalTables {
    pub theta: Vec<f64>,
    pub lambda: Vec<f64>,
    pub delta: Vec<f64>,
    pub grid_h: f64,
    pub eps_pair: (f64, f64),
}

/// Uniform default grid `theta_j = j*pi/n`, `j = 1..=n`.
pub fn default_theta_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|j| PI * j as f64 / n as f64).collect()
}

fn half_disk_spec(s: Vec<f64>, grid_h: f64) -> LogPolarSpec {
    let n_phi = (PI / grid_h).ceil() as usize + 1;
    LogPolarSpec {
        center: crate::geometry::Point::new(0.0, 0.0),
        s,
        phi0: 0.0,
        phi_span: PI,
        n_phi,
        periodic: false,
    }
}

/// Extremal distance between the slit `[-1,0]` and the arc of half-angle
/// `theta`, for each node of `thetas` (descending solve order, warm started).
fn lambda_series(thetas: &[f64], grid_h: f64) -> Result<Vec<f64>> {
    let s = graded_radial(S_MIN_SLIT, 0.0, grid_h, H_MAX, GROWTH, false);
    let spec = half_disk_spec(s, grid_h);
    let ns = spec.s.len();
    let np = spec.n_phi;
    let mut order: Vec<usize> = (0..thetas.len()).collect();
    order.sort_by(|a, b| thetas[*b].partial_cmp(&thetas[*a]).unwrap());
    let mut out = vec![0.0; thetas.len()];
    let mut prev: Option<Vec<f64>> = None;
    for k in order {
        let theta = thetas[k];
        let problem = log_polar_grid(
            &spec,
            &|_| true,
            &|i, j, _| {
                let phi = spec.phi(i);
                if i == np - 1 || j == 0 {
                    NodeClass::Zero // slit side, and the pinched truncation
                } else if j == ns - 1 && phi <= theta + 1e-9 {
                    NodeClass::One
                } else {
                    NodeClass::Interior
                }
            },
            &[],
        );
        let solved = solve(&problem, prev.as_deref())?;
        out[k] = solved.modulus / 2.0; // half grid carries half the energy
        prev = Some(solved.values);
    }
    Ok(out)
}

/// `lambda_tilde(inner circle, arc(theta))` on the annulus `eps < |z| < 1`
/// for every table node, plus the arc-independent
/// `lambda_tilde(inner circle, boundary)` reference term.
fn delta_series(thetas: &[f64], grid_h: f64, eps: f64) -> Result<(Vec<f64>, f64)> {
    let s = graded_radial(eps.ln(), 0.0, grid_h, H_MAX, GROWTH, false);
    let spec = half_disk_spec(s, grid_h);
    let ns = spec.s.len();
    let full_problem = log_polar_grid(
        &spec,
        &|_| true,
        &|_, j, _| {
            if j == 0 {
                NodeClass::Zero
            } else if j == ns - 1 {
                NodeClass::One
            } else {
                NodeClass::Interior
            }
        },
        &[],
    );
    let reference = solve(&full_problem, None)?.modulus / 2.0;

    let mut order: Vec<usize> = (0..thetas.len()).collect();
    order.sort_by(|a, b| thetas[*b].partial_cmp(&thetas[*a]).unwrap());
    let mut out = vec![0.0; thetas.len()];
    let mut prev: Option<Vec<f64>> = None;
    for k in order {
        let theta = thetas[k];
        let problem = log_polar_grid(
            &spec,
            &|_| true,
            &|i, j, _| {
                if j == 0 {
                    NodeClass::Zero
                } else if j == ns - 1 && spec.phi(i) <= theta + 1e-9 {
                    NodeClass::One
                } else {
                    NodeClass::Interior
                }
            },
            &[],
        );
        let solved = solve(&problem, prev.as_deref())?;
        out[k] = solved.modulus / 2.0;
        prev = Some(solved.values);
    }
    Ok((out, reference))
}

/// Build both tables. The reduced-distance limit is evaluated at the two
/// given inner radii and extrapolated linearly in `eps`.
pub fn build_canonical_tables(
    theta_grid: &[f64],
    grid_h: f64,
    eps_pair: (f64, f64),
) -> Result<CanonicalTables> {
    if theta_grid.is_empty() || theta_grid.iter().any(|t| !(*t > 0.0 && *t <= PI + 1e-12)) {
        return Err(Error::InvalidParameter("theta grid must lie in (0, pi]".into()));
    }
    let (e1, e2) = eps_pair;
    if !(e1 > e2 && e2 > 0.0 && e1 < 0.5) {
        return Err(Error::InvalidParameter("eps pair must satisfy 0 < eps2 < eps1 < 0.5".into()));
    }
    let mut theta: Vec<f64> = theta_grid.to_vec();
    theta.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let (lambda_res, (d1_res, d2_res)) = join(
        || lambda_series(&theta, grid_h),
        || join(|| delta_series(&theta, grid_h, e1), || delta_series(&theta, grid_h, e2)),
    );
    let lambda = lambda_res?;
    let (arc1, ref1) = d1_res?;
    let (arc2, ref2) = d2_res?;

    let mut delta = Vec::with_capacity(theta.len());
    for k in 0..theta.len() {
        let d_e1 = arc1[k] - ref1;
        let d_e2 = arc2[k] - ref2;
        let extrap = (e1 * d_e2 - e2 * d_e1) / (e1 - e2);
        delta.push(extrap.max(0.0));
    }
    // both tables are non-increasing on the exact grid; remove solver wobble
    let mut lambda = lambda;
    for v in [&mut lambda, &mut delta] {
        for j in (0..v.len() - 1).rev() {
            if v[j] < v[j + 1] {
                v[j] = v[j + 1];
            }
        }
    }
    Ok(CanonicalTables { theta, lambda, delta, grid_h, eps_pair })
}

impl CanonicalTables {
    fn interp(&self, ys: &[f64], theta: f64, tail_scale: f64) -> f64 {
        let t0 = self.theta[0];
        if theta <= t0 {
            // anchored asymptotic tail: y ~ (1/pi) log(tail_scale/theta)
            let anchor = ys[0] - (tail_scale / t0).ln() / PI;
            return (tail_scale / theta).ln() / PI + anchor;
        }
        let n = self.theta.len();
        if theta >= self.theta[n - 1] {
            return ys[n - 1];
        }
        let mut lo = 0;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.theta[mid] <= theta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let f = (theta - self.theta[lo]) / (self.theta[hi] - self.theta[lo]);
        ys[lo] + f * (ys[hi] - ys[lo])
    }

    /// `Lambda` at arbitrary `theta` in `(0, pi]` (monotone interpolation,
    /// asymptotic extension below the grid).
    pub fn lambda_at(&self, theta: f64) -> f64 {
        self.interp(&self.lambda, theta, 8.0)
    }

    pub fn delta_at(&self, theta: f64) -> f64 {
        self.interp(&self.delta, theta, 2.0)
    }

    /// Nodes violating the harmonic-measure sandwich bounds beyond the
    /// multiplicative tolerance `tol` (compared on the `exp(-pi*.)` scale).
    pub fn sandwich_violations(&self, tol: f64) -> Vec<(f64, &'static str, f64)> {
        let mut out = Vec::new();
        for k in 0..self.theta.len() {
            let omega = self.theta[k] / PI;
            let el = (-PI * self.lambda[k]).exp();
            let ed = (-PI * self.delta[k]).exp();
            let checks: [(&'static str, f64, f64); 4] = [
                ("exp(-pi*Lambda) <= omega", el, omega * (1.0 + tol)),
                ("omega <= (8/pi) exp(-pi*Lambda)", omega, (8.0 / PI) * el * (1.0 + tol)),
                ("omega <= exp(-pi*Delta)", omega, ed * (1.0 + tol)),
                ("exp(-pi*Delta) <= (pi/2) omega", ed, (PI / 2.0) * omega * (1.0 + tol)),
            ];
            for (name, lhs, rhs) in checks {
                if lhs > rhs {
                    out.push((self.theta[k], name, lhs / rhs - 1.0));
                }
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut body = String::new();
        for k in 0..self.theta.len() {
            body.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.theta[k], self.lambda[k], self.delta[k], self.grid_h, self.eps_pair.0,
                self.eps_pair.1
            ));
        }
        format!(
            "# schema=hardynum-tables-v1\n# checksum={:016x}\ntheta,lambda,delta,grid_h,eps1,eps2\n{}",
            fnv1a(body.as_bytes()),
            body
        )
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let schema = lines.next().unwrap_or_default();
        if schema.trim() != "# schema=hardynum-tables-v1" {
            return Err(Error::SchemaVersion {
                expected: "hardynum-tables-v1".into(),
                found: schema.trim().to_string(),
            });
        }
        let checksum_line = lines.next().unwrap_or_default();
        let stored = checksum_line
            .strip_prefix("# checksum=")
            .ok_or_else(|| Error::Malformed("missing checksum line".into()))?;
        let header = lines.next().unwrap_or_default();
        if header.trim() != "theta,lambda,delta,grid_h,eps1,eps2" {
            return Err(Error::Malformed("unexpected table header".into()));
        }
        let body: String = lines.map(|l| format!("{l}\n")).collect();
        let computed = format!("{:016x}", fnv1a(body.as_bytes()));
        if computed != stored {
            return Err(Error::Malformed(format!(
                "checksum mismatch: stored {stored}, computed {computed}"
            )));
        }
        let mut theta = Vec::new();
        let mut lambda = Vec::new();
        let mut delta = Vec::new();
        let mut grid_h = 0.0;
        let mut eps_pair = (0.0, 0.0);
        for line in body.lines() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(Error::Malformed(format!("bad table row: {line}")));
            }
            let parse = |s: &str| -> Result<f64> {
                s.parse::<f64>().map_err(|_| Error::Malformed(format!("bad number: {s}")))
            };
            theta.push(parse(fields[0])?);
            lambda.push(parse(fields[1])?);
            delta.push(parse(fields[2])?);
            grid_h = parse(fields[3])?;
            eps_pair = (parse(fields[4])?, parse(fields[5])?);
        }
        if theta.is_empty() {
            return Err(Error::Malformed("empty table".into()));
        }
        Ok(CanonicalTables { theta, lambda, delta, grid_h, eps_pair })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }

    /// Whether a cached table was built with the same parameters.
    pub fn matches(&self, theta_grid: &[f64], grid_h: f64, eps_pair: (f64, f64)) -> bool {
        self.theta.len() == theta_grid.len()
            && self.grid_h == grid_h
            && self.eps_pair == eps_pair
            && {
                let mut sorted = theta_grid.to_vec();
                sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
                self.theta.iter().zip(&sorted).all(|(a, b)| (a - b).abs() < 1e-12)
            }
    }
}

/// Extremal distance to the dominant level-set component with harmonic
/// measure `omega`, read off the canonical table.
pub fn lambda_star(omega: f64, tables: &CanonicalTables) -> Result<f64> {
    check_omega(omega)?;
    Ok(tables.lambda_at(PI * omega))
}

/// Reduced extremal distance analogue of [`lambda_star`].
pub fn delta_star(omega: f64, tables: &CanonicalTables) -> Result<f64> {
    check_omega(omega)?;
    Ok(tables.delta_at(PI * omega))
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega > 0.0 && omega <= 1.0) {
        return Err(Error::InvalidParameter(format!("omega must lie in (0, 1], got {omega}")));
    }
    Ok(())
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Complete elliptic integral K(k) by the arithmetic-geometric mean.
    fn ellip_k(k: f64) -> f64 {
        let mut a = 1.0f64;
        let mut b = (1.0 - k * k).sqrt();
        for _ in 0..60 {
            let an = 0.5 * (a + b);
            let bn = (a * b).sqrt();
            if (an - bn).abs() < 1e-16 * an {
                return PI / (2.0 * an);
            }
            a = an;
            b = bn;
        }
        PI / (2.0 * a)
    }

    /// Independent oracle: the slit-to-arc configuration maps onto a ring
    /// whose modulus is a ratio of complete elliptic integrals.
    fn lambda_exact(theta: f64) -> f64 {
        let s = (theta / 2.0).sin();
        let k = (1.0 - s) / (1.0 + s);
        let kp = (1.0 - k * k).sqrt();
        ellip_k(k) / ellip_k(kp)
    }

    fn delta_exact(theta: f64) -> f64 {
        -((theta / 2.0).sin()).ln() / PI
    }

    fn small_tables() -> &'static CanonicalTables {
        use std::sync::OnceLock;
        static TABLES: OnceLock<CanonicalTables> = OnceLock::new();
        TABLES.get_or_init(|| {
            build_canonical_tables(&default_theta_grid(16), 1.0 / 64.0, (1e-2, 1e-3)).unwrap()
        })
    }

    #[test]
    fn oracle_self_checks() {
        // closed forms against independently known points
        assert!((lambda_exact(PI / 2.0) - 0.5).abs() < 1e-12); // self-dual configuration
        assert!(lambda_exact(PI) < 1e-12);
        assert!((delta_exact(PI / 2.0) - (2.0f64.ln() / (2.0 * PI))).abs() < 1e-15);
        assert!(delta_exact(PI).abs() < 1e-15);
        // oracle values satisfy the sandwich bounds strictly inside (0, pi)
        for j in 1..32 {
            let theta = PI * j as f64 / 32.0;
            let omega = theta / PI;
            let el = (-PI * lambda_exact(theta)).exp();
            assert!(el <= omega + 1e-12 && omega <= (8.0 / PI) * el + 1e-12);
            let ed = (-PI * delta_exact(theta)).exp();
            assert!(omega <= ed + 1e-12 && ed <= (PI / 2.0) * omega + 1e-12);
        }
    }

    #[test]
    fn tables_match_closed_forms_midrange() {
        let t = small_tables();
        for (k, &theta) in t.theta.iter().enumerate() {
            if !(0.3..=2.4).contains(&theta) {
                continue;
            }
            let le = lambda_exact(theta);
            assert!(
                (t.lambda[k] - le).abs() < 0.05 * le.max(0.1),
                "Lambda({theta}) = {} vs exact {le}",
                t.lambda[k]
            );
            let de = delta_exact(theta);
            assert!(
                (t.delta[k] - de).abs() < 0.05 * de.max(0.1),
                "Delta({theta}) = {} vs exact {de}",
                t.delta[k]
            );
        }
    }

    #[test]
    fn delta_at_pi_vanishes() {
        let t = small_tables();
        assert!(t.delta.last().unwrap().abs() < 0.02);
    }

    #[test]
    fn tables_are_monotone_and_sandwiched() {
        let t = small_tables();
        for k in 1..t.theta.len() {
            assert!(t.lambda[k] <= t.lambda[k - 1] + 1e-12);
            assert!(t.delta[k] <= t.delta[k - 1] + 1e-12);
        }
        let violations = t.sandwich_violations(0.02);
        assert!(violations.is_empty(), "violations: {violations:?}");
    }

    #[test]
    fn star_lookups() {
        let t = small_tables();
        // omega = 1 reads the last table node
        assert_eq!(lambda_star(1.0, &t).unwrap(), *t.lambda.last().unwrap());
        assert!((delta_star(1.0, &t).unwrap()).abs() < 0.02);
        // omega = 0.5 lands in the bracket dictated by the sandwich
        let l = lambda_star(0.5, &t).unwrap();
        let lo = -(0.5f64).ln() / PI;
        let hi = -(0.5 * PI / 8.0).ln() / PI;
        assert!(l >= lo - 0.01 && l <= hi + 0.01, "lambda_star(0.5) = {l}");
        // monotone in omega
        let mut prev = f64::INFINITY;
        for w in [0.05, 0.1, 0.3, 0.5, 0.8, 1.0] {
            let v = lambda_star(w, &t).unwrap();
            assert!(v < prev + 1e-12);
            prev = v;
        }
        assert!(lambda_star(0.0, &t).is_err());
        assert!(lambda_star(1.5, &t).is_err());
    }

    #[test]
    fn tail_extension_tracks_asymptote() {
        let t = small_tables();
        // below the grid the tables continue with the log tail
        let l = t.lambda_at(1e-4);
        assert!((l - (8.0 / 1e-4f64).ln() / PI).abs() < 0.05);
        let d = t.delta_at(1e-4);
        assert!((d - (2.0 / 1e-4f64).ln() / PI).abs() < 0.05);
    }

    #[test]
    fn csv_round_trip_and_checksum() {
        let t = small_tables();
        let text = t.to_csv();
        let back = CanonicalTables::from_csv(&text).unwrap();
        assert_eq!(back.theta, t.theta);
        assert_eq!(back.lambda, t.lambda);
        assert_eq!(back.delta, t.delta);
        assert!(back.matches(&default_theta_grid(16), 1.0 / 64.0, (1e-2, 1e-3)));
        // corruption is detected
        let corrupted = text.replace("theta,", "theta,").replacen('5', "6", 1);
        if corrupted != text {
            assert!(CanonicalTables::from_csv(&corrupted).is_err());
        }
    }
}
