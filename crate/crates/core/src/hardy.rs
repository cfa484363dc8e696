//! Hardy/Bergman number estimation and membership decisions from level-set
//! profiles.
//!
//! The Hardy number is the common lower limit of `log(1/measure)`, reduced
//! extremal distance and extremal distance of the dominant level-set
//! component over `log r`. It is approximated by the minimum of
//! least-squares slopes over sliding windows in the profile tail; membership
//! of the Riemann map in a weighted Bergman space is then an exponent
//! comparison with an explicit margin, never a guess on borderline input.

use crate::geometry::{circle_intersection, Domain, DomainKind, Point};
use crate::modulus::reduced_extremal_distance_full;
use crate::modulus::tables::CanonicalTables;
use crate::profile::{profile, LevelSetProfile, ProfileConfig, ProfileRow};
use crate::{Error, Result};
use std::f64::consts::PI;
use std::fmt::Write as _;

const WINDOW: usize = 6;
const MIN_RADII: usize = 8;
/// Tail slopes beyond this cap are treated as an infinite Hardy number.
const SLOPE_CAP: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorTag {
    OmegaStar,
    DeltaStar,
    LambdaStar,
    OmegaFull,
    DBracket,
}

impl EstimatorTag {
    pub fn name(self) -> &'static str {
        match self {
            EstimatorTag::OmegaStar => "omega_star",
            EstimatorTag::DeltaStar => "delta_star",
            EstimatorTag::LambdaStar => "lambda_star",
            EstimatorTag::OmegaFull => "omega_full",
            EstimatorTag::DBracket => "d_bracket",
        }
    }
}

#[derive(Debug, Clone)]
pub struct HardyEstimate {
    pub tag: EstimatorTag,
    /// Minimum tail-window slope; `f64::INFINITY` when the level set empties
    /// or every tail slope exceeds the cap.
    pub h_est: f64,
    /// For the hyperbolic-bracket estimator: the interval consistent with the
    /// factor-2 metric comparison.
    pub bracket: Option<(f64, f64)>,
    pub window_slopes: Vec<f64>,
    /// Radius range of the window realizing the estimate.
    pub tail_window: (f64, f64),
    pub confidence_half_width: f64,
    pub low_confidence: bool,
}

impl HardyEstimate {
    pub fn is_infinite(&self) -> bool {
        self.h_est.is_infinite()
    }
}

fn ordinate(tag: EstimatorTag, row: &ProfileRow) -> Option<f64> {
    match tag {
        EstimatorTag::OmegaStar => row.omega_star.as_ref().and_then(|e| {
            (e.mean > 0.0 && (e.std_err == 0.0 || e.successes() >= 5)).then(|| (1.0 / e.mean).ln())
        }),
        EstimatorTag::OmegaFull => row.omega_full.as_ref().and_then(|e| {
            (e.mean > 0.0 && (e.std_err == 0.0 || e.successes() >= 5)).then(|| (1.0 / e.mean).ln())
        }),
        EstimatorTag::DeltaStar => row.delta_star.map(|d| PI * d),
        EstimatorTag::LambdaStar => row.lambda_star.map(|l| PI * l),
        EstimatorTag::DBracket => row.bracket.map(|b| b.k),
    }
}

/// Least squares slope and its standard error.
fn ols_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    let slope = sxy / sxx;
    let mut sse = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let f = ym + slope * (x - xm);
        sse += (y - f) * (y - f);
    }
    let dof = (xs.len().max(3) - 2) as f64;
    let se = (sse / dof / sxx).sqrt();
    (slope, se)
}

/// Estimate the Hardy number from a profile with the chosen ordinate.
pub fn hardy_number_estimate(p: &LevelSetProfile, tag: EstimatorTag) -> Result<HardyEstimate> {
    // a level set that empties and stays empty pins the number at infinity
    if let Some(first_empty) = p.rows.iter().position(|r| r.is_empty_level_set()) {
        if p.rows[first_empty..].iter().all(|r| r.is_empty_level_set() || r.failed()) {
            return Ok(HardyEstimate {
                tag,
                h_est: f64::INFINITY,
                bracket: (tag == EstimatorTag::DBracket).then_some((f64::INFINITY, f64::INFINITY)),
                window_slopes: Vec::new(),
                tail_window: (p.rows[first_empty].r, p.rows.last().unwrap().r),
                confidence_half_width: 0.0,
                low_confidence: false,
            });
        }
    }

    let pts: Vec<(f64, f64)> = p
        .rows
        .iter()
        .filter(|row| !row.failed())
        .filter_map(|row| ordinate(tag, row).map(|y| (row.r.ln(), y)))
        .collect();
    if pts.len() < MIN_RADII {
        return Err(Error::TooFewRadii { needed: MIN_RADII, have: pts.len() });
    }

    // monotone ordinate sanity: log-measure ordinates must not fall by more
    // than statistical noise allows
    let mut low_confidence = false;
    if matches!(tag, EstimatorTag::OmegaStar | EstimatorTag::OmegaFull) {
        let sigma = |row: &ProfileRow| {
            let e = match tag {
                EstimatorTag::OmegaStar => row.omega_star.as_ref(),
                _ => row.omega_full.as_ref(),
            };
            e.map(|e| if e.mean > 0.0 { e.std_err / e.mean } else { 0.0 }).unwrap_or(0.0)
        };
        let used: Vec<&ProfileRow> = p
            .rows
            .iter()
            .filter(|row| !row.failed() && ordinate(tag, row).is_some())
            .collect();
        for w in used.windows(2) {
            let y0 = ordinate(tag, w[0]).unwrap();
            let y1 = ordinate(tag, w[1]).unwrap();
            let tol = 3.0 * (sigma(w[0]).powi(2) + sigma(w[1]).powi(2)).sqrt();
            if y1 < y0 - tol {
                low_confidence = true;
            }
        }
        if used.iter().any(|row| !row.star_resolved()) {
            low_confidence = true;
        }
    }

    let n_windows = pts.len() - WINDOW + 1;
    let mut slopes = Vec::with_capacity(n_windows);
    let mut ses = Vec::with_capacity(n_windows);
    for w in 0..n_windows {
        let xs: Vec<f64> = pts[w..w + WINDOW].iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pts[w..w + WINDOW].iter().map(|p| p.1).collect();
        let (s, se) = ols_slope(&xs, &ys);
        slopes.push(s);
        ses.push(se);
    }
    // the lower limit lives in the tail: minimum over the later half of the
    // sliding windows
    let tail_from = n_windows / 2;
    let (mut best_w, mut best) = (tail_from, slopes[tail_from]);
    for w in tail_from..n_windows {
        if slopes[w] < best {
            best = slopes[w];
            best_w = w;
        }
    }
    let tail_window = (pts[best_w].0.exp(), pts[best_w + WINDOW - 1].0.exp());
    let h_est = if slopes[tail_from..].iter().all(|s| *s > SLOPE_CAP) {
        f64::INFINITY
    } else {
        best
    };
    Ok(HardyEstimate {
        tag,
        h_est,
        bracket: (tag == EstimatorTag::DBracket).then_some((h_est / 2.0, 2.0 * h_est)),
        window_slopes: slopes,
        tail_window,
        confidence_half_width: 2.0 * ses[best_w],
        low_confidence,
    })
}

// ---------------------------------------------------------------------------
// membership
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Member,
    NonMember,
    Undecided,
}

#[derive(Debug, Clone)]
pub struct MembershipDecision {
    pub p: f64,
    pub alpha: f64,
    /// The exponent `p/(alpha+2)` compared against the Hardy number.
    pub ratio: f64,
    pub h_est: f64,
    pub margin: f64,
    pub verdict: Verdict,
    /// The query sits within twice the margin of the estimate.
    pub boundary_flag: bool,
}

impl MembershipDecision {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Member => 0,
            Verdict::NonMember => 1,
            Verdict::Undecided => 2,
        }
    }
}

/// Decide weighted-Bergman membership by exponent comparison. `alpha = -1`
/// queries the Hardy space itself.
pub fn bergman_membership(
    h: &HardyEstimate,
    p: f64,
    alpha: f64,
    margin: Option<f64>,
) -> Result<MembershipDecision> {
    if !(p > 0.0) {
        return Err(Error::InvalidParameter("p must be positive".into()));
    }
    if !(alpha >= -1.0) {
        return Err(Error::InvalidParameter("alpha must be >= -1".into()));
    }
    let margin = margin.unwrap_or_else(|| (2.0 * h.confidence_half_width).max(0.1));
    let ratio = p / (alpha + 2.0);
    let verdict = if h.h_est.is_infinite() {
        Verdict::Member
    } else if ratio < h.h_est - margin {
        Verdict::Member
    } else if ratio > h.h_est + margin {
        Verdict::NonMember
    } else {
        Verdict::Undecided
    };
    let boundary_flag = !h.h_est.is_infinite() && (ratio - h.h_est).abs() <= 2.0 * margin;
    Ok(MembershipDecision { p, alpha, ratio, h_est: h.h_est, margin, verdict, boundary_flag })
}

// ---------------------------------------------------------------------------
// divergence classification of the full-level-set integral
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralVerdict {
    Diverges,
    Converges,
    Undecided,
}

/// Classify the improper integral of `r^(p-1) exp(-pi (alpha+2) delta(r))`
/// over the profile's reduced-extremal-distance column.
pub fn question_integral_classifier(
    prof: &LevelSetProfile,
    p: f64,
    alpha: f64,
) -> Result<IntegralVerdict> {
    if !(p > 0.0) || !(alpha >= -1.0) {
        return Err(Error::InvalidParameter("need p > 0 and alpha >= -1".into()));
    }
    // bounded image: level sets empty beyond the domain, integrand vanishes
    if let Some(first_empty) = prof.rows.iter().position(|r| r.is_empty_level_set()) {
        if prof.rows[first_empty..].iter().all(|r| r.is_empty_level_set() || r.failed()) {
            return Ok(IntegralVerdict::Converges);
        }
    }
    let pts: Vec<(f64, f64)> = prof
        .rows
        .iter()
        .filter_map(|row| row.delta_full.map(|d| (row.r.ln(), PI * d)))
        .collect();
    if pts.is_empty() {
        return Err(Error::MissingDeltaFull);
    }
    if pts.len() < MIN_RADII {
        return Err(Error::TooFewRadii { needed: MIN_RADII, have: pts.len() });
    }
    // sub-logarithmic growth of delta forces divergence for p >= alpha/2 + 1
    let log_bound_holds = pts.iter().all(|(lr, pd)| *pd <= 0.5 * lr + 0.5 * 0.05 * 2.0 * PI / 2.0 + 0.025 * PI)
        || pts.iter().all(|(lr, pd)| pd / PI <= lr / (2.0 * PI) + 0.05);
    if log_bound_holds && p >= alpha / 2.0 + 1.0 {
        return Ok(IntegralVerdict::Diverges);
    }

    let n_windows = pts.len() - WINDOW.min(pts.len()) + 1;
    let win = WINDOW.min(pts.len());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let tail_from = n_windows / 2;
    for w in tail_from..n_windows {
        let xs: Vec<f64> = pts[w..w + win].iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pts[w..w + win].iter().map(|p| p.1).collect();
        let (s, se) = ols_slope(&xs, &ys);
        lo = lo.min(s - 2.0 * se);
        hi = hi.max(s + 2.0 * se);
    }
    let a2 = alpha + 2.0;
    if p >= a2 * hi {
        Ok(IntegralVerdict::Diverges)
    } else if p < a2 * lo {
        Ok(IntegralVerdict::Converges)
    } else {
        Ok(IntegralVerdict::Undecided)
    }
}

// ---------------------------------------------------------------------------
// the nested radial-slit counterexample
// ---------------------------------------------------------------------------

/// Nested radial-slit domain with level growth `exp(c*l)`, based at the
/// origin.
pub fn comb_domain(c: f64, levels: u32, r_max: f64) -> Result<Domain> {
    Domain::comb(c, levels, r_max, Point::new(0.0, 0.0))
}

/// Limit of `pi / (maximal angular arc width)` for starlike domains,
/// evaluated at a probe radius.
pub fn starlike_hardy_oracle(domain: &Domain, probe_r: f64) -> Result<f64> {
    match domain.kind() {
        DomainKind::Wedge { .. } | DomainKind::Comb { .. } => {}
        DomainKind::SlitPlane => {
            for piece in domain.pieces() {
                if let Some((o, d)) = ray_parts(piece) {
                    if o.cross(d).abs() > 1e-12 * o.norm().max(1.0) || o.dot(d) <= 0.0 {
                        return Err(Error::InvalidParameter(
                            "slit plane is not starlike about the origin".into(),
                        ));
                    }
                }
            }
        }
        _ => {
            return Err(Error::InvalidParameter(
                "oracle needs an unbounded domain starlike about the origin".into(),
            ))
        }
    }
    let arcs = circle_intersection(domain, probe_r)?;
    let max_width = arcs.iter().map(|a| a.width).fold(0.0f64, f64::max);
    if max_width == 0.0 {
        return Err(Error::InvalidParameter("probe circle misses the domain".into()));
    }
    Ok(PI / max_width)
}

fn ray_parts(piece: &crate::geometry::BoundaryPiece) -> Option<(Point, Point)> {
    match piece {
        crate::geometry::BoundaryPiece::Ray { origin, dir } => Some((*origin, *dir)),
        _ => None,
    }
}

#[derive(Debug, Clone)]
pub struct CounterexampleConfig {
    pub c: f64,
    pub levels: u32,
    pub p: f64,
    pub alpha: f64,
    /// Geometric grid for the reduced-distance checks.
    pub delta_radii: usize,
    pub delta_r_range: (f64, f64),
    pub delta_eps: (f64, f64),
    pub delta_grid_h: f64,
    pub delta_tol: f64,
    /// Profile grid for the measure-based Hardy estimate.
    pub profile: ProfileConfig,
    pub h_threshold: f64,
}

impl CounterexampleConfig {
    /// Desk-scale defaults: `c = 2`, three levels, Hardy query `(1, -1)`.
    pub fn desk_scale(seed: u64) -> Self {
        let mut prof = ProfileConfig::new(10.0, (12.0f64).powf(1.0 / 15.0), 16, 200_000, seed);
        prof.sample_boost = vec![(30.0, 1_000_000), (55.0, 3_000_000)];
        CounterexampleConfig {
            c: 2.0,
            levels: 3,
            p: 1.0,
            alpha: -1.0,
            delta_radii: 8,
            delta_r_range: (1.5, 350.0),
            delta_eps: (1e-2, 1e-3),
            delta_grid_h: 1.0 / 96.0,
            delta_tol: 0.05,
            profile: prof,
            h_threshold: 5.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CounterexampleReport {
    pub config_label: String,
    /// `(r, delta_full, (1/2pi) log r)` samples.
    pub delta_rows: Vec<(f64, f64, f64)>,
    pub delta_bound_ok: bool,
    pub h_estimate: HardyEstimate,
    pub h_threshold: f64,
    pub h_ok: bool,
    pub divergence: IntegralVerdict,
    pub passes: bool,
}

impl CounterexampleReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "counterexample verification [{}]", self.config_label);
        let _ = writeln!(out, "(a) reduced extremal distance against (1/2pi) log r:");
        for (r, d, b) in &self.delta_rows {
            let _ = writeln!(out, "    r = {r:>12.4e}: delta = {d:.5}, bound = {b:.5}");
        }
        let _ = writeln!(out, "    bound holds: {}", self.delta_bound_ok);
        let _ = writeln!(
            out,
            "(b) measure-based Hardy estimate: {:.3} (threshold {}): {}",
            self.h_estimate.h_est, self.h_threshold, self.h_ok
        );
        let _ = writeln!(out, "(c) integral classification: {:?}", self.divergence);
        let _ = writeln!(out, "overall: {}", if self.passes { "PASS" } else { "FAIL" });
        out
    }
}

/// Run the full counterexample verification: the logarithmic bound on the
/// reduced extremal distance of the whole level set, the divergence of the
/// membership integral built from it, and a blow-up check on the
/// measure-based Hardy estimate.
pub fn verify_counterexample(
    cfg: &CounterexampleConfig,
    tables: &CanonicalTables,
) -> Result<CounterexampleReport> {
    if cfg.levels == 0 {
        return Err(Error::InvalidParameter("counterexample needs at least one level".into()));
    }
    if !(cfg.p >= cfg.alpha / 2.0 + 1.0) {
        return Err(Error::InvalidParameter(format!(
            "divergence check needs p >= alpha/2 + 1, got p = {}, alpha = {}",
            cfg.p, cfg.alpha
        )));
    }
    let domain = comb_domain(cfg.c, cfg.levels, f64::INFINITY)?;

    // (a) reduced extremal distance of the full level set
    let (r_lo, r_hi) = cfg.delta_r_range;
    let q = (r_hi / r_lo).powf(1.0 / (cfg.delta_radii.max(2) - 1) as f64);
    let structural = domain.structural_radii();
    let mut delta_rows = Vec::with_capacity(cfg.delta_radii);
    let mut delta_profile_rows = Vec::new();
    for j in 0..cfg.delta_radii {
        let mut r = r_lo * q.powi(j as i32);
        for s in &structural {
            if (r / s - 1.0).abs() < 0.01 {
                r *= 1.02;
            }
        }
        let res = reduced_extremal_distance_full(&domain, r, cfg.delta_eps, cfg.delta_grid_h)?;
        let bound = r.ln() / (2.0 * PI);
        delta_rows.push((r, res.delta, bound));
        let mut row = ProfileRow {
            r,
            omega_star: None,
            omega_full: None,
            lambda_star: None,
            delta_star: None,
            delta_full: Some(res.delta),
            bracket: None,
            n_crosscuts: 1,
            pruned: 0,
            bounded_far_sides: 0,
            n_samples: 0,
            flags: Vec::new(),
        };
        if res.spread_warning {
            row.flags.push("delta-spread".into());
        }
        delta_profile_rows.push(row);
    }
    let delta_bound_ok = delta_rows.iter().all(|(_, d, b)| *d <= b + cfg.delta_tol);

    // (c) divergence of the integral
    let delta_profile = LevelSetProfile {
        rows: delta_profile_rows,
        domain_kind: format!("comb(c={},levels={})", cfg.c, cfg.levels),
        domain_bounded: false,
        seed: cfg.profile.seed,
        n_samples: 0,
    };
    let divergence = question_integral_classifier(&delta_profile, cfg.p, cfg.alpha)?;

    // (b) measure-based Hardy estimate
    let prof = profile(&domain, tables, &cfg.profile)?;
    let h_estimate = hardy_number_estimate(&prof, EstimatorTag::OmegaStar)?;
    let h_ok = h_estimate.h_est > cfg.h_threshold;

    let passes = delta_bound_ok && h_ok && divergence == IntegralVerdict::Diverges;
    Ok(CounterexampleReport {
        config_label: format!("c = {}, levels = {}, p = {}, alpha = {}", cfg.c, cfg.levels, cfg.p, cfg.alpha),
        delta_rows,
        delta_bound_ok,
        h_estimate,
        h_threshold: cfg.h_threshold,
        h_ok,
        divergence,
        passes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wos::MeasureEstimate;

    fn synthetic_profile(slope: f64, count: usize) -> LevelSetProfile {
        // omega = r^{-slope}, exact rows
        let mut rows = Vec::new();
        for j in 0..count {
            let r = 2.0f64 * 1.5f64.powi(j as i32);
            let omega = r.powf(-slope).min(1.0);
            rows.push(ProfileRow {
                r,
                omega_star: Some(MeasureEstimate::exact(omega, 100_000)),
                omega_full: Some(MeasureEstimate::exact((omega * 1.2).min(1.0), 100_000)),
                lambda_star: Some(slope * r.ln() / PI),
                delta_star: Some(slope * r.ln() / PI - 0.05),
                delta_full: Some(slope * r.ln() / PI - 0.05),
                bracket: Some(crate::hyperbolic::MetricBracket::from_k(slope * r.ln())),
                n_crosscuts: 1,
                pruned: 0,
                bounded_far_sides: 0,
                n_samples: 100_000,
                flags: Vec::new(),
            });
        }
        LevelSetProfile {
            rows,
            domain_kind: "synthetic".into(),
            domain_bounded: false,
            seed: 0,
            n_samples: 100_000,
        }
    }

    #[test]
    fn exact_power_law_recovers_slope() {
        let p = synthetic_profile(2.0, 16);
        for tag in [
            EstimatorTag::OmegaStar,
            EstimatorTag::DeltaStar,
            EstimatorTag::LambdaStar,
            EstimatorTag::OmegaFull,
        ] {
            let h = hardy_number_estimate(&p, tag).unwrap();
            assert!((h.h_est - 2.0).abs() < 0.05, "{tag:?}: {}", h.h_est);
        }
        let d = hardy_number_estimate(&p, EstimatorTag::DBracket).unwrap();
        let (lo, hi) = d.bracket.unwrap();
        assert!(lo <= 2.0 && 2.0 <= hi);
    }

    #[test]
    fn empty_tail_means_infinite() {
        let mut p = synthetic_profile(2.0, 12);
        for row in p.rows.iter_mut().skip(8) {
            *row = ProfileRow {
                r: row.r,
                omega_star: Some(MeasureEstimate::exact(0.0, 1000)),
                omega_full: Some(MeasureEstimate::exact(0.0, 1000)),
                lambda_star: None,
                delta_star: None,
                delta_full: None,
                bracket: None,
                n_crosscuts: 0,
                pruned: 0,
                bounded_far_sides: 0,
                n_samples: 1000,
                flags: vec!["empty".into()],
            };
        }
        let h = hardy_number_estimate(&p, EstimatorTag::OmegaStar).unwrap();
        assert!(h.is_infinite());
    }

    #[test]
    fn too_few_radii_is_an_error() {
        let p = synthetic_profile(1.0, 5);
        assert!(matches!(
            hardy_number_estimate(&p, EstimatorTag::OmegaStar),
            Err(Error::TooFewRadii { .. })
        ));
    }

    #[test]
    fn membership_decisions() {
        let p = synthetic_profile(2.0, 16);
        let h = hardy_number_estimate(&p, EstimatorTag::OmegaStar).unwrap();
        let member = bergman_membership(&h, 1.0, -1.0, None).unwrap();
        assert_eq!(member.verdict, Verdict::Member);
        assert_eq!(member.exit_code(), 0);
        let non = bergman_membership(&h, 3.0, -1.0, None).unwrap();
        assert_eq!(non.verdict, Verdict::NonMember);
        let boundary = bergman_membership(&h, 2.0, -1.0, None).unwrap();
        assert!(boundary.verdict == Verdict::Undecided || boundary.boundary_flag);
        // weighted query: p/(alpha+2) = 1.5 < 2
        let weighted = bergman_membership(&h, 3.0, 0.0, None).unwrap();
        assert_eq!(weighted.verdict, Verdict::Member);
        assert!(bergman_membership(&h, -1.0, 0.0, None).is_err());
        assert!(bergman_membership(&h, 1.0, -1.5, None).is_err());
    }

    #[test]
    fn raising_p_never_flips_to_member() {
        let prof = synthetic_profile(1.5, 16);
        let h = hardy_number_estimate(&prof, EstimatorTag::OmegaStar).unwrap();
        let mut seen_non_member = false;
        for p in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0] {
            let d = bergman_membership(&h, p, -1.0, None).unwrap();
            if seen_non_member {
                assert_ne!(d.verdict, Verdict::Member, "p = {p} flipped back to member");
            }
            if d.verdict == Verdict::NonMember {
                seen_non_member = true;
            }
        }
    }

    #[test]
    fn classifier_on_synthetic_slopes() {
        // pi*delta ~ 2 log r: integral of r^{p-1-2(alpha+2)} diverges iff p >= 2(alpha+2)
        let p = synthetic_profile(2.0, 16);
        assert_eq!(question_integral_classifier(&p, 5.0, -1.0).unwrap(), IntegralVerdict::Diverges);
        assert_eq!(question_integral_classifier(&p, 0.5, -1.0).unwrap(), IntegralVerdict::Converges);
        // missing column
        let mut q = synthetic_profile(2.0, 16);
        for row in q.rows.iter_mut() {
            row.delta_full = None;
        }
        assert!(matches!(
            question_integral_classifier(&q, 1.0, -1.0),
            Err(Error::MissingDeltaFull)
        ));
    }

    #[test]
    fn starlike_oracle_values() {
        let wedge = Domain::wedge(PI / 2.0, Point::new(0.5, 0.25)).unwrap();
        assert!((starlike_hardy_oracle(&wedge, 50.0).unwrap() - 2.0).abs() < 1e-9);
        let slit = Domain::slit_plane(
            vec![(Point::new(1.0, 0.0), Point::new(1.0, 0.0))],
            Point::new(0.0, 0.0),
        )
        .unwrap();
        assert!((starlike_hardy_oracle(&slit, 50.0).unwrap() - 0.5).abs() < 1e-6);
        // comb probed below the level-2 start radius: widest gap pi/4
        let comb = comb_domain(2.0, 3, f64::INFINITY).unwrap();
        let probe = (2.0f64).exp() * 2.0;
        assert!((starlike_hardy_oracle(&comb, probe).unwrap() - 4.0).abs() < 1e-6);
        // not starlike about the origin
        let off = Domain::slit_plane(
            vec![(Point::new(1.0, 1.0), Point::new(1.0, 0.0))],
            Point::new(0.0, 0.0),
        )
        .unwrap();
        assert!(starlike_hardy_oracle(&off, 50.0).is_err());
    }

    #[test]
    fn counterexample_rejects_bad_exponents() {
        let cfg = CounterexampleConfig {
            p: 0.2,
            alpha: 0.0,
            ..CounterexampleConfig::desk_scale(1)
        };
        let tables = crate::modulus::tables::build_canonical_tables(
            &crate::modulus::tables::default_theta_grid(4),
            1.0 / 32.0,
            (1e-1, 1e-2),
        )
        .unwrap();
        assert!(verify_counterexample(&cfg, &tables).is_err());
    }
}
