//! Walk-on-spheres estimation of harmonic measure.
//!
//! A walk jumps uniformly on the largest disk centered at the current point
//! that avoids the absorbing set (the domain boundary plus any extra level-set
//! arcs), and is absorbed once within `eps_shell` of it. Censored walks count
//! as failures and are reported, never dropped. Estimation is deterministic:
//! sample `i` of a run draws from a counter-mode generator seeded by the run
//! seed with stream `i`, so parallel and serial schedules agree bit for bit,
//! and per-crosscut runs derive their seed as `seed XOR crosscut id`.

use crate::geometry::{Crosscut, CrosscutDecomposition, Domain, Point, TAU};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

/// Absorption-shell width as a fraction of the level radius.
pub const EPS_SHELL_REL: f64 = 1e-4;
/// Conservative constant in the short-arc pruning bound.
pub const PRUNE_K: f64 = 2.0;
const FULL_MEASURE_SALT: u64 = 0x9e3779b97f4a7c15;

#[derive(Debug, Clone, Copy)]
pub struct WosConfig {
    /// Absolute absorption distance.
    pub eps_shell: f64,
    pub max_steps: u32,
    pub n_samples: u32,
    pub rng_seed: u64,
}

impl WosConfig {
    /// Defaults scaled to a level radius: shell `1e-4 * r`, `1e5` step cap.
    pub fn for_radius(r: f64, n_samples: u32, rng_seed: u64) -> Self {
        WosConfig { eps_shell: EPS_SHELL_REL * r, max_steps: 100_000, n_samples, rng_seed }
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps_shell > 0.0) || self.n_samples == 0 {
            return Err(Error::InvalidParameter(
                "eps_shell must be positive and n_samples >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Monte Carlo estimate of a harmonic measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureEstimate {
    pub mean: f64,
    pub std_err: f64,
    pub n_samples: u32,
    pub n_censored: u32,
}

impl MeasureEstimate {
    pub fn exact(mean: f64, n_samples: u32) -> Self {
        MeasureEstimate { mean, std_err: 0.0, n_samples, n_censored: 0 }
    }

    fn from_counts(successes: u64, censored: u64, n: u32) -> Self {
        let nf = f64::from(n);
        let p = successes as f64 / nf;
        let std_err = if n > 1 { (p * (1.0 - p) / (nf - 1.0)).sqrt() } else { 0.0 };
        MeasureEstimate { mean: p, std_err, n_samples: n, n_censored: censored as u32 }
    }

    pub fn censored_fraction(&self) -> f64 {
        f64::from(self.n_censored) / f64::from(self.n_samples.max(1))
    }

    /// Censoring below the documented `1e-3` validity threshold.
    pub fn is_valid(&self) -> bool {
        self.censored_fraction() <= 1e-3
    }

    /// Number of successful walks behind the mean.
    pub fn successes(&self) -> u64 {
        (self.mean * f64::from(self.n_samples)).round() as u64
    }
}

/// Where a walk was absorbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsorbSite {
    /// Index into the domain's boundary pieces.
    Piece(usize),
    /// Index into the extra absorbing arcs passed to the run.
    Arc(usize),
}

/// Harmonic measure at `z` of the boundary set selected by `target`, with the
/// absorbing set extended by `extra_arcs`.
pub fn harmonic_measure(
    domain: &Domain,
    extra_arcs: &[Crosscut],
    z: Point,
    target: &(dyn Fn(AbsorbSite, Point) -> bool + Sync),
    cfg: &WosConfig,
) -> Result<MeasureEstimate> {
    cfg.validate()?;
    if !domain.contains(z) {
        return Err(Error::InvalidParameter("walk start must be interior".into()));
    }
    let n = cfg.n_samples;
    let (successes, censored) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha12Rng::seed_from_u64(cfg.rng_seed);
            rng.set_stream(u64::from(i));
            match single_walk(domain, extra_arcs, z, cfg, &mut rng) {
                Some((site, end)) => (u64::from(target(site, end)), 0u64),
                None => (0u64, 1u64),
            }
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(MeasureEstimate::from_counts(successes, censored, n))
}

fn single_walk(
    domain: &Domain,
    arcs: &[Crosscut],
    start: Point,
    cfg: &WosConfig,
    rng: &mut ChaCha12Rng,
) -> Option<(AbsorbSite, Point)> {
    let mut z = start;
    for _ in 0..cfg.max_steps {
        let mut d = f64::INFINITY;
        let mut site = AbsorbSite::Piece(0);
        for (idx, p) in domain.pieces().iter().enumerate() {
            let dd = p.distance(z);
            if dd < d {
                d = dd;
                site = AbsorbSite::Piece(idx);
            }
        }
        for (idx, a) in arcs.iter().enumerate() {
            let dd = a.distance(z);
            if dd < d {
                d = dd;
                site = AbsorbSite::Arc(idx);
            }
        }
        if d <= cfg.eps_shell {
            return Some((site, z));
        }
        let angle = rng.gen::<f64>() * TAU;
        z = z + Point::from_polar(d, angle);
    }
    None
}

/// Per-crosscut measures at a level radius, the dominant component, and the
/// full level-set measure.
#[derive(Debug, Clone)]
pub struct ComponentMeasures {
    pub radius: f64,
    /// One entry per crosscut; `None` when pruned by the short-arc bound.
    pub per_crosscut: Vec<Option<MeasureEstimate>>,
    pub star_index: Option<usize>,
    pub star: MeasureEstimate,
    pub full: MeasureEstimate,
    pub pruned: usize,
}

/// Estimate every crosscut's measure (skipping arcs whose short-arc bound
/// `K*sqrt(len/(r - |w0|))` cannot reach the current best), select the
/// dominant one, and estimate the full level-set measure.
pub fn component_measures(
    domain: &Domain,
    dec: &CrosscutDecomposition,
    cfg: &WosConfig,
) -> Result<ComponentMeasures> {
    component_measures_with(domain, dec, cfg, true)
}

/// [`component_measures`] with the pruning bound optionally disabled.
pub fn component_measures_with(
    domain: &Domain,
    dec: &CrosscutDecomposition,
    cfg: &WosConfig,
    prune: bool,
) -> Result<ComponentMeasures> {
    let w0 = domain.base_point();
    let r = dec.radius;
    if dec.crosscuts.is_empty() {
        return Ok(ComponentMeasures {
            radius: r,
            per_crosscut: Vec::new(),
            star_index: None,
            star: MeasureEstimate::exact(0.0, cfg.n_samples),
            full: MeasureEstimate::exact(0.0, cfg.n_samples),
            pruned: 0,
        });
    }
    // a closed separating circle carries the whole measure
    if dec.crosscuts.len() == 1 && dec.crosscuts[0].closed {
        let one = MeasureEstimate::exact(1.0, cfg.n_samples);
        return Ok(ComponentMeasures {
            radius: r,
            per_crosscut: vec![Some(one)],
            star_index: Some(0),
            star: one,
            full: one,
            pruned: 0,
        });
    }

    let mut order: Vec<usize> = (0..dec.crosscuts.len()).collect();
    order.sort_by(|a, b| {
        dec.crosscuts[*b].length().partial_cmp(&dec.crosscuts[*a].length()).unwrap()
    });
    let gap = (r - w0.norm()).max(f64::MIN_POSITIVE);
    let mut per: Vec<Option<MeasureEstimate>> = vec![None; dec.crosscuts.len()];
    let mut pruned = 0usize;
    let mut best: Option<(usize, MeasureEstimate)> = None;
    for k in order {
        let cut = &dec.crosscuts[k];
        if prune {
            if let Some((_, b)) = &best {
                let bound = PRUNE_K * (cut.length() / gap).min(1.0).sqrt();
                if bound < b.mean - 3.0 * b.std_err {
                    pruned += 1;
                    continue;
                }
            }
        }
        let sub_cfg = WosConfig { rng_seed: cfg.rng_seed ^ cut.id as u64, ..*cfg };
        let arcs = std::slice::from_ref(cut);
        let est = harmonic_measure(
            domain,
            arcs,
            w0,
            &|site, _| matches!(site, AbsorbSite::Arc(0)),
            &sub_cfg,
        )?;
        if best.as_ref().map_or(true, |(_, b)| est.mean > b.mean) {
            best = Some((k, est));
        }
        per[k] = Some(est);
    }

    let full_cfg = WosConfig { rng_seed: cfg.rng_seed ^ FULL_MEASURE_SALT, ..*cfg };
    let full = harmonic_measure(
        domain,
        &dec.crosscuts,
        w0,
        &|site, _| matches!(site, AbsorbSite::Arc(_)),
        &full_cfg,
    )?;

    let (star_index, star) = match best {
        Some((k, est)) => (Some(k), est),
        None => (None, MeasureEstimate::exact(0.0, cfg.n_samples)),
    };
    Ok(ComponentMeasures { radius: r, per_crosscut: per, star_index, star, full, pruned })
}
