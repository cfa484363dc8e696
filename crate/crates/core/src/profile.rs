//! Per-radius level-set profiles: crosscut structure, harmonic measures,
//! canonical-table extremal distances, hyperbolic brackets and (optionally)
//! the reduced extremal distance of the full level set, on a geometric radius
//! grid. Invariant violations are recorded as diagnostics, never silently
//! repaired.

use crate::geometry::{crosscut_decomposition, Domain, DomainKind};
use crate::hyperbolic::{quasihyperbolic_distance, MetricBracket, QhTarget};
use crate::modulus::reduced_extremal_distance_full;
use crate::modulus::tables::{delta_star, lambda_star, CanonicalTables};
use crate::wos::{component_measures, MeasureEstimate, WosConfig};
use crate::{Error, Result};
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Rows with fewer Monte Carlo successes than this are excluded from
/// order-based checks and slope fits; they carry no statistical weight.
pub const MIN_RESOLVED_SUCCESSES: u64 = 10;

#[derive(Debug, Clone)]
pub struct ProfileConfig {
    pub r0: f64,
    /// Geometric ratio between consecutive radii.
    pub q: f64,
    pub count: usize,
    pub n_samples: u32,
    pub seed: u64,
    /// Crosscut grid resolution relative to the radius.
    pub crosscut_grid_rel: f64,
    /// Quasihyperbolic grid resolution relative to the radius.
    pub qh_grid_rel: f64,
    pub with_delta_full: bool,
    pub delta_eps: (f64, f64),
    pub delta_grid_h: f64,
    /// Optional `(r_min, n)` overrides: radii at or above `r_min` use at
    /// least `n` samples. Deep level sets need more walks to resolve.
    pub sample_boost: Vec<(f64, u32)>,
}

impl ProfileConfig {
    pub fn new(r0: f64, q: f64, count: usize, n_samples: u32, seed: u64) -> Self {
        ProfileConfig {
            r0,
            q,
            count,
            n_samples,
            seed,
            crosscut_grid_rel: 1.0 / 256.0,
            qh_grid_rel: 1.0 / 256.0,
            with_delta_full: false,
            delta_eps: (1e-2, 1e-3),
            delta_grid_h: 1.0 / 128.0,
            sample_boost: Vec::new(),
        }
    }

    fn samples_for(&self, r: f64) -> u32 {
        let mut n = self.n_samples;
        for (r_min, boost) in &self.sample_boost {
            if r >= *r_min {
                n = n.max(*boost);
            }
        }
        n
    }
}

#[derive(Debug, Clone)]
pub struct ProfileRow {
    pub r: f64,
    pub omega_star: Option<MeasureEstimate>,
    pub omega_full: Option<MeasureEstimate>,
    pub lambda_star: Option<f64>,
    pub delta_star: Option<f64>,
    pub delta_full: Option<f64>,
    pub bracket: Option<MetricBracket>,
    pub n_crosscuts: usize,
    pub pruned: usize,
    pub bounded_far_sides: usize,
    pub n_samples: u32,
    pub flags: Vec<String>,
}

impl ProfileRow {
    pub fn is_empty_level_set(&self) -> bool {
        self.n_crosscuts == 0 && !self.flags.iter().any(|f| f.starts_with("error"))
    }

    pub fn failed(&self) -> bool {
        self.flags.iter().any(|f| f.starts_with("error"))
    }

    /// Statistically meaningful dominant-component estimate.
    pub fn star_resolved(&self) -> bool {
        match &self.omega_star {
            Some(e) => {
                e.std_err == 0.0 || e.successes() >= MIN_RESOLVED_SUCCESSES
            }
            None => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LevelSetProfile {
    pub rows: Vec<ProfileRow>,
    pub domain_kind: String,
    pub domain_bounded: bool,
    pub seed: u64,
    pub n_samples: u32,
}

/// Build the profile over the geometric grid `r_j = r0 * q^j`. Radii within
/// 1% of a structural transition radius are nudged up by 2%.
pub fn profile(
    domain: &Domain,
    tables: &CanonicalTables,
    cfg: &ProfileConfig,
) -> Result<LevelSetProfile> {
    let w0 = domain.base_point();
    if !(cfg.r0 > w0.norm()) {
        return Err(Error::InvalidParameter(format!(
            "r0 = {} must exceed |base point| = {}",
            cfg.r0,
            w0.norm()
        )));
    }
    if !(cfg.q > 1.0) || cfg.count == 0 {
        return Err(Error::InvalidParameter("need q > 1 and at least one radius".into()));
    }
    let structural = domain.structural_radii();
    let mut rows = Vec::with_capacity(cfg.count);
    for j in 0..cfg.count {
        let mut r = cfg.r0 * cfg.q.powi(j as i32);
        for s in &structural {
            if (r / s - 1.0).abs() < 0.01 {
                r *= 1.02;
            }
        }
        rows.push(compute_row(domain, tables, cfg, j, r));
    }
    Ok(LevelSetProfile {
        rows,
        domain_kind: kind_name(domain.kind()),
        domain_bounded: domain.is_bounded(),
        seed: cfg.seed,
        n_samples: cfg.n_samples,
    })
}

fn kind_name(kind: &DomainKind) -> String {
    match kind {
        DomainKind::Wedge { opening } => format!("wedge({opening})"),
        DomainKind::SlitPlane => "slit-plane".into(),
        DomainKind::Polygon => "polygon".into(),
        DomainKind::Disk { radius, .. } => format!("disk({radius})"),
        DomainKind::Comb { c, levels, .. } => format!("comb(c={c},levels={levels})"),
    }
}

fn compute_row(
    domain: &Domain,
    tables: &CanonicalTables,
    cfg: &ProfileConfig,
    j: usize,
    r: f64,
) -> ProfileRow {
    let n = cfg.samples_for(r);
    let mut row = ProfileRow {
        r,
        omega_star: None,
        omega_full: None,
        lambda_star: None,
        delta_star: None,
        delta_full: None,
        bracket: None,
        n_crosscuts: 0,
        pruned: 0,
        bounded_far_sides: 0,
        n_samples: n,
        flags: Vec::new(),
    };
    let dec = match crosscut_decomposition(domain, r, r * cfg.crosscut_grid_rel) {
        Ok(d) => d,
        Err(e) => {
            row.flags.push(format!("error:{e}"));
            return row;
        }
    };
    row.n_crosscuts = dec.crosscuts.len();
    row.bounded_far_sides = dec.crosscuts.iter().filter(|c| !c.far_side_unbounded).count();
    if dec.crosscuts.iter().any(|c| c.closed) {
        row.flags.push("closed".into());
    }
    if dec.is_empty() {
        row.flags.push("empty".into());
        row.omega_star = Some(MeasureEstimate::exact(0.0, n));
        row.omega_full = Some(MeasureEstimate::exact(0.0, n));
        return row;
    }

    // per-radius seed stream; crosscut ids perturb the low bits
    let radius_seed = cfg.seed ^ ((j as u64 + 1) << 32);
    let wos_cfg = WosConfig::for_radius(r, n, radius_seed);
    match component_measures(domain, &dec, &wos_cfg) {
        Ok(cm) => {
            if !cm.star.is_valid() || !cm.full.is_valid() {
                row.flags.push("censored".into());
            }
            if cm.star_index.is_none() {
                row.flags.push("all-pruned".into());
            }
            if cm.star.mean > 0.0 && cm.star.successes() < MIN_RESOLVED_SUCCESSES {
                row.flags.push("undersampled".into());
            }
            row.pruned = cm.pruned;
            if cm.star.mean > 0.0 {
                row.lambda_star = lambda_star(cm.star.mean.min(1.0), tables).ok();
                row.delta_star = delta_star(cm.star.mean.min(1.0), tables).ok();
            }
            row.omega_star = Some(cm.star);
            row.omega_full = Some(cm.full);
        }
        Err(e) => {
            row.flags.push(format!("error:{e}"));
            return row;
        }
    }

    match quasihyperbolic_distance(domain, domain.base_point(), QhTarget::LevelSet(r), r * cfg.qh_grid_rel)
    {
        Ok(b) => row.bracket = Some(b),
        Err(e) => row.flags.push(format!("error:qh:{e}")),
    }

    if cfg.with_delta_full {
        match reduced_extremal_distance_full(domain, r, cfg.delta_eps, cfg.delta_grid_h) {
            Ok(res) => {
                if res.spread_warning {
                    row.flags.push("delta-spread".into());
                }
                row.delta_full = Some(res.delta);
            }
            Err(e) => row.flags.push(format!("error:delta:{e}")),
        }
    }
    row
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct Violation {
    pub r: f64,
    pub rule: String,
    pub margin: f64,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.clean() {
            out.push_str("profile validation: clean\n");
        } else {
            let _ = writeln!(out, "profile validation: {} violation(s)", self.violations.len());
            for v in &self.violations {
                let _ = writeln!(out, "  r = {:.6e}: {} (margin {:.3e})", v.r, v.rule, v.margin);
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}

/// Multiplicative slack for table-derived sandwich checks; covers solver and
/// interpolation error in the canonical tables.
const SANDWICH_TOL: f64 = 0.03;

/// Check every profile invariant, reporting each violation with its radius
/// and margin. Report-only: nothing is repaired.
pub fn validate_profile(p: &LevelSetProfile) -> ValidationReport {
    let mut rep = ValidationReport::default();
    let mut push = |r: f64, rule: &str, margin: f64| {
        rep.violations.push(Violation { r, rule: rule.into(), margin });
    };

    for row in &p.rows {
        if row.failed() {
            continue;
        }
        if let (Some(star), Some(full)) = (&row.omega_star, &row.omega_full) {
            let slack = 3.0 * (star.std_err.powi(2) + full.std_err.powi(2)).sqrt();
            if star.mean > full.mean + slack {
                push(row.r, "omega_star <= omega_full (3 sigma)", star.mean - full.mean - slack);
            }
        }
        if let (Some(star), Some(l)) = (&row.omega_star, row.lambda_star) {
            if star.mean > 0.0 {
                let e = (-PI * l).exp();
                let w = star.mean;
                if e > w * (1.0 + SANDWICH_TOL) {
                    push(row.r, "exp(-pi lambda*) <= omega*", e / w - 1.0);
                }
                if w * PI / 8.0 > e * (1.0 + SANDWICH_TOL) {
                    push(row.r, "(pi/8) omega* <= exp(-pi lambda*)", w * PI / 8.0 / e - 1.0);
                }
            }
        }
        if let (Some(star), Some(d)) = (&row.omega_star, row.delta_star) {
            if star.mean > 0.0 {
                let e = (-PI * d).exp();
                let w = star.mean;
                if w > e * (1.0 + SANDWICH_TOL) {
                    push(row.r, "omega* <= exp(-pi delta*)", w / e - 1.0);
                }
                if e > (PI / 2.0) * w * (1.0 + SANDWICH_TOL) {
                    push(row.r, "exp(-pi delta*) <= (pi/2) omega*", e / (w * PI / 2.0) - 1.0);
                }
            }
        }
        if !p.domain_bounded && row.bounded_far_sides > 1 {
            push(row.r, "at most one bounded far side", row.bounded_far_sides as f64 - 1.0);
        }
        if let (Some(full), Some(b)) = (&row.omega_full, &row.bracket) {
            // projection chain in its bracket-weakened form
            let lower = (2.0 / PI) * (-b.d_high).exp();
            let slack = 3.0 * full.std_err;
            if full.mean + slack < lower {
                push(row.r, "omega_full >= (2/pi) exp(-2k)", lower - full.mean - slack);
            }
        }
    }

    // monotonicity along the radius grid over statistically resolved rows
    let resolved: Vec<&ProfileRow> = p.rows.iter().filter(|r| r.star_resolved()).collect();
    for pair in resolved.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let (sa, sb) = (a.omega_star.as_ref().unwrap(), b.omega_star.as_ref().unwrap());
        let slack = 3.0 * (sa.std_err.powi(2) + sb.std_err.powi(2)).sqrt();
        if sb.mean > sa.mean + slack {
            push(b.r, "omega* non-increasing in r (3 sigma)", sb.mean - sa.mean - slack);
        }
        // table-mapped values must be ordered whenever the means are ordered
        if sa.mean >= sb.mean {
            if let (Some(la), Some(lb)) = (a.lambda_star, b.lambda_star) {
                if lb < la - 1e-12 {
                    push(b.r, "lambda* ordered with omega*", la - lb);
                }
            }
            if let (Some(da), Some(db)) = (a.delta_star, b.delta_star) {
                if db < da - 1e-12 {
                    push(b.r, "delta* ordered with omega*", da - db);
                }
            }
        }
    }
    let unresolved = p.rows.iter().filter(|r| !r.star_resolved() && !r.failed()).count();
    if unresolved > 0 {
        rep.notes.push(format!("{unresolved} row(s) excluded from order checks (unresolved)"));
    }
    rep
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

const PROFILE_SCHEMA: &str = "hardynum-profile-v1";
const PROFILE_HEADER: &str = "r,omega_star_mean,omega_star_se,omega_full_mean,omega_full_se,lambda_star,delta_star,delta_full,k,d_low,d_high,n_crosscuts,pruned,flags";

fn opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => "nan".into(),
    }
}

impl LevelSetProfile {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# schema={PROFILE_SCHEMA}");
        let _ = writeln!(out, "# seed={}", self.seed);
        let _ = writeln!(out, "# samples={}", self.n_samples);
        let _ = writeln!(out, "# domain={}", self.domain_kind);
        let _ = writeln!(out, "# bounded={}", self.domain_bounded);
        let _ = writeln!(out, "{PROFILE_HEADER}");
        for row in &self.rows {
            let mut flags = row.flags.clone();
            flags.push(format!("n:{}", row.n_samples));
            if row.bounded_far_sides > 0 {
                flags.push(format!("bfs:{}", row.bounded_far_sides));
            }
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                row.r,
                opt(row.omega_star.map(|e| e.mean)),
                opt(row.omega_star.map(|e| e.std_err)),
                opt(row.omega_full.map(|e| e.mean)),
                opt(row.omega_full.map(|e| e.std_err)),
                opt(row.lambda_star),
                opt(row.delta_star),
                opt(row.delta_full),
                opt(row.bracket.map(|b| b.k)),
                opt(row.bracket.map(|b| b.d_low)),
                opt(row.bracket.map(|b| b.d_high)),
                row.n_crosscuts,
                row.pruned,
                flags.join(";"),
            );
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut seed = 0u64;
        let mut n_samples = 0u32;
        let mut domain_kind = String::new();
        let mut domain_bounded = false;
        let mut saw_schema = false;
        let mut saw_header = false;
        let mut rows = Vec::new();
        for line in text.lines() {
            if let Some(rest) = line.strip_prefix("# ") {
                if let Some(v) = rest.strip_prefix("schema=") {
                    if v.trim() != PROFILE_SCHEMA {
                        return Err(Error::SchemaVersion {
                            expected: PROFILE_SCHEMA.into(),
                            found: v.trim().into(),
                        });
                    }
                    saw_schema = true;
                } else if let Some(v) = rest.strip_prefix("seed=") {
                    seed = v.trim().parse().unwrap_or(0);
                } else if let Some(v) = rest.strip_prefix("samples=") {
                    n_samples = v.trim().parse().unwrap_or(0);
                } else if let Some(v) = rest.strip_prefix("domain=") {
                    domain_kind = v.trim().into();
                } else if let Some(v) = rest.strip_prefix("bounded=") {
                    domain_bounded = v.trim() == "true";
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            if !saw_header {
                if line.trim() != PROFILE_HEADER {
                    return Err(Error::Malformed("unexpected profile header".into()));
                }
                saw_header = true;
                continue;
            }
            rows.push(parse_row(line)?);
        }
        if !saw_schema {
            return Err(Error::SchemaVersion {
                expected: PROFILE_SCHEMA.into(),
                found: "(missing)".into(),
            });
        }
        Ok(LevelSetProfile { rows, domain_kind, domain_bounded, seed, n_samples })
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::from_csv(&std::fs::read_to_string(path)?)
    }
}

fn parse_row(line: &str) -> Result<ProfileRow> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 14 {
        return Err(Error::Malformed(format!("bad profile row: {line}")));
    }
    let num = |s: &str| -> Result<Option<f64>> {
        if s == "nan" {
            return Ok(None);
        }
        s.parse::<f64>()
            .map(Some)
            .map_err(|_| Error::Malformed(format!("bad number: {s}")))
    };
    let flags: Vec<String> =
        fields[13].split(';').filter(|s| !s.is_empty()).map(|s| s.to_string()).collect();
    let n_samples = flags
        .iter()
        .find_map(|f| f.strip_prefix("n:").and_then(|v| v.parse().ok()))
        .unwrap_or(0u32);
    let bounded_far_sides = flags
        .iter()
        .find_map(|f| f.strip_prefix("bfs:").and_then(|v| v.parse().ok()))
        .unwrap_or(0usize);
    let est = |mean: Option<f64>, se: Option<f64>| -> Option<MeasureEstimate> {
        match (mean, se) {
            (Some(m), Some(s)) => Some(MeasureEstimate {
                mean: m,
                std_err: s,
                n_samples,
                n_censored: 0,
            }),
            _ => None,
        }
    };
    let k = num(fields[8])?;
    Ok(ProfileRow {
        r: num(fields[0])?.ok_or_else(|| Error::Malformed("missing radius".into()))?,
        omega_star: est(num(fields[1])?, num(fields[2])?),
        omega_full: est(num(fields[3])?, num(fields[4])?),
        lambda_star: num(fields[5])?,
        delta_star: num(fields[6])?,
        delta_full: num(fields[7])?,
        bracket: k.map(MetricBracket::from_k),
        n_crosscuts: fields[11].parse().map_err(|_| Error::Malformed("bad n_crosscuts".into()))?,
        pruned: fields[12].parse().map_err(|_| Error::Malformed("bad pruned".into()))?,
        bounded_far_sides,
        n_samples,
        flags: flags
            .into_iter()
            .filter(|f| !f.starts_with("n:") && !f.starts_with("bfs:"))
            .collect(),
    })
}
