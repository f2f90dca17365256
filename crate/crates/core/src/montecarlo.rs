//! Empirical certification of the almost-sure bounds on sampled networks.
//!
//! Each trial derives its own seed from the run seed and the trial index, so
//! reports do not depend on how trials are scheduled across threads.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{exclusion_radius, hardcore_regulation_constants, interference_bound};
use crate::error::{ensure, Error, Result};
use crate::guarantees::{db_to_linear, theta, LinkBudget};
use crate::hexnet::{cell_vertex, hardcore_for_reuse};
use crate::pathloss::PathLoss;
use crate::pointset::{
    ball_count, color_lattice, matern_ii, nearest_index, triangular_lattice, MarkedPointSet, Point, Window,
};

/// Relative slack for floating-point summation order.
pub const VIOLATION_TOLERANCE: f64 = 1e-12;

/// Source of point configurations. All windows are centered squares.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Generator {
    /// Triangular lattice with cell edge `a` (deterministic).
    Lattice { a: f64, half_width: f64 },
    /// Matérn type-II sample with minimum spacing `hardcore_radius` (= 2H).
    MaternII { intensity: f64, hardcore_radius: f64, half_width: f64 },
    /// A single BS at the window center.
    Single { half_width: f64 },
}

impl Generator {
    pub fn half_width(&self) -> f64 {
        match *self {
            Generator::Lattice { half_width, .. }
            | Generator::MaternII { half_width, .. }
            | Generator::Single { half_width } => half_width,
        }
    }

    pub fn window(&self) -> Result<Window> {
        Window::centered(self.half_width())
    }

    pub fn sample(&self, seed: u64) -> Result<MarkedPointSet> {
        let window = self.window()?;
        match *self {
            Generator::Lattice { a, .. } => triangular_lattice(a, window),
            Generator::MaternII { intensity, hardcore_radius, .. } => {
                matern_ii(intensity, hardcore_radius, window, seed)
            }
            Generator::Single { .. } => MarkedPointSet::unmarked(vec![window.center()], window),
        }
    }
}

/// Where the user sits relative to the window center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum UserPlacement {
    Center,
    /// Vertex of the hexagonal cell (edge `a`) around the central lattice site.
    Vertex { a: f64 },
    /// Uniform in the disk of the given radius around the center.
    Uniform { radius: f64 },
}

impl UserPlacement {
    fn position(&self, center: Point, rng: &mut ChaCha8Rng) -> Point {
        match *self {
            UserPlacement::Center => center,
            UserPlacement::Vertex { a } => {
                let v = cell_vertex(a);
                Point::new(center.x + v.x, center.y + v.y)
            }
            UserPlacement::Uniform { radius } => {
                let r = radius * rng.random::<f64>().sqrt();
                let phi = std::f64::consts::TAU * rng.random::<f64>();
                Point::new(center.x + r * phi.cos(), center.y + r * phi.sin())
            }
        }
    }
}

/// One realized-versus-bound comparison.
///
/// For ball-count checks `d` and `t` both carry the ball radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub seed: u64,
    pub d: f64,
    pub t: f64,
    pub realized: f64,
    pub bound: f64,
}

impl TrialRecord {
    pub fn ratio(&self) -> f64 {
        if self.bound > 0.0 {
            self.realized / self.bound
        } else if self.realized > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }

    pub fn violated(&self) -> bool {
        self.realized > self.bound * (1.0 + VIOLATION_TOLERANCE)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct VerificationReport {
    pub trials: usize,
    /// Failed checks: bound records plus any SINR guarantee failures.
    pub violations: usize,
    /// Largest `realized / bound` over all records (0 when there are none).
    pub max_ratio: f64,
    pub skipped: usize,
    pub records: Vec<TrialRecord>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn from_outcomes(outcomes: Vec<TrialOutcome>) -> Self {
        let mut report = VerificationReport { trials: outcomes.len(), ..Default::default() };
        for o in outcomes {
            if let Some(note) = o.note {
                report.skipped += 1;
                report.notes.push(note);
            }
            report.violations += o.extra_violations;
            report.records.extend(o.records);
        }
        report.violations += report.records.iter().filter(|r| r.violated()).count();
        report.max_ratio = report.records.iter().map(TrialRecord::ratio).fold(0.0, f64::max);
        report
    }

    /// Appends another report (trial counts add, maxima combine).
    pub fn merge(&mut self, other: VerificationReport) {
        self.trials += other.trials;
        self.violations += other.violations;
        self.max_ratio = self.max_ratio.max(other.max_ratio);
        self.skipped += other.skipped;
        self.records.extend(other.records);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// CSV with header `seed,d,t,realized,bound,ratio`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["seed", "d", "t", "realized", "bound", "ratio"])?;
        for r in &self.records {
            w.serialize((r.seed, r.d, r.t, r.realized, r.bound, r.ratio()))?;
        }
        w.flush().map_err(|e| Error::Csv(e.to_string()))?;
        Ok(())
    }

    pub fn summary(&self, label: &str) -> String {
        format!(
            "{label}: trials={} checks={} violations={} skipped={} max_ratio={:.6}",
            self.trials,
            self.records.len(),
            self.violations,
            self.skipped,
            self.max_ratio
        )
    }
}

struct TrialOutcome {
    records: Vec<TrialRecord>,
    extra_violations: usize,
    note: Option<String>,
}

impl TrialOutcome {
    fn checked(records: Vec<TrialRecord>) -> Self {
        TrialOutcome { records, extra_violations: 0, note: None }
    }
}

/// Seed of trial `index` within a run seeded by `seed` (SplitMix64 mixing).
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// Auxiliary draws (centers, user positions) use a separate stream from the
// one that samples the point process.
fn aux_rng(trial_seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    rng.set_stream(1);
    rng
}

fn run_trials<F>(trials: usize, seed: u64, f: F) -> Result<VerificationReport>
where
    F: Fn(u64) -> Result<TrialOutcome> + Sync,
{
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|i| f(trial_seed(seed, i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::from_outcomes(outcomes))
}

/// Checks `Φ(b(c, R)) ≤ 1 + ρ_H R + ν_H R²` at a uniform random center `c`
/// for each radius in `radii`.
pub fn check_ball_regulation(
    generator: &Generator,
    h: f64,
    radii: &[f64],
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let reg = hardcore_regulation_constants(h)?;
    ensure(!radii.is_empty(), || "radius grid is empty".into())?;
    ensure(radii.iter().all(|r| *r >= 0.0 && r.is_finite()), || "radii must be non-negative".into())?;
    let r_max = radii.iter().copied().fold(0.0, f64::max);
    let half = generator.half_width();
    if r_max >= half {
        return Err(Error::Config(format!(
            "largest radius {r_max} does not fit inside window half-width {half}"
        )));
    }
    let inner = half - r_max;
    run_trials(trials, seed, |ts| {
        let ps = generator.sample(ts)?;
        let mut rng = aux_rng(ts);
        let center = Point::new(inner * (2.0 * rng.random::<f64>() - 1.0), inner * (2.0 * rng.random::<f64>() - 1.0));
        let records = radii
            .iter()
            .map(|&r| TrialRecord {
                seed: ts,
                d: r,
                t: r,
                realized: ball_count(&ps, center, r, None) as f64,
                bound: reg.envelope(r),
            })
            .collect();
        Ok(TrialOutcome::checked(records))
    })
}

/// Checks the realized interference `Σ_{x ≠ x₀} ℓ(‖x − u‖)` at user `u`
/// against [`interference_bound`] with the realized serving distance.
pub fn check_interference_bound(
    generator: &Generator,
    h: f64,
    model: &PathLoss,
    placement: UserPlacement,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    // Fail fast on a divergent model instead of inside every trial.
    interference_bound(model, h, 0.0)?;
    let center = generator.window()?.center();
    run_trials(trials, seed, |ts| {
        let ps = generator.sample(ts)?;
        let user = placement.position(center, &mut aux_rng(ts));
        match class_check(&ps, None, user, model, h, ts)? {
            Some(rec) => Ok(TrialOutcome::checked(vec![rec])),
            None => Ok(TrialOutcome {
                records: vec![],
                extra_violations: 0,
                note: Some(format!("trial seed {ts}: empty sample, skipped")),
            }),
        }
    })
}

fn class_check(
    ps: &MarkedPointSet,
    mark: Option<u32>,
    user: Point,
    model: &PathLoss,
    h: f64,
    seed: u64,
) -> Result<Option<TrialRecord>> {
    let serving = match nearest_index(ps, user, mark) {
        Ok(i) => i,
        Err(Error::EmptySet) => return Ok(None),
        Err(e) => return Err(e),
    };
    let d = ps.points()[serving].distance(&user);
    let realized: f64 = ps
        .points()
        .iter()
        .zip(ps.marks())
        .enumerate()
        .filter(|&(i, (_, &m))| i != serving && mark.is_none_or(|f| f == m))
        .map(|(_, (p, _))| model.value(p.distance(&user)))
        .sum();
    Ok(Some(TrialRecord {
        seed,
        d,
        t: exclusion_radius(d, h),
        realized,
        bound: interference_bound(model, h, d)?,
    }))
}

/// Lattice used by the scheduled check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub a: f64,
    pub half_width: f64,
}

/// Per-slot check on a reuse-`K` colored lattice.
///
/// For each mark class the user is served by the nearest BS of that class at
/// distance `d_i`; same-class interference must stay below
/// `interference_bound(ℓ, H_K, d_i)` and the realized SINR above `θ`, with
/// noise set so that the SNR at `d = a` equals `snr_db`.
#[allow(clippy::too_many_arguments)]
pub fn check_scheduled_bound(
    lattice: LatticeSpec,
    k: u32,
    model: &PathLoss,
    power: f64,
    snr_db: f64,
    placement: UserPlacement,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let h_k = hardcore_for_reuse(lattice.a, k)?;
    scheduled_with_hardcore(lattice, k, h_k, model, power, snr_db, placement, trials, seed)
}

#[allow(clippy::too_many_arguments)]
fn scheduled_with_hardcore(
    lattice: LatticeSpec,
    k: u32,
    h_k: f64,
    model: &PathLoss,
    power: f64,
    snr_db: f64,
    placement: UserPlacement,
    trials: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let window = Window::centered(lattice.half_width)?;
    let colored = color_lattice(&triangular_lattice(lattice.a, window)?, k)?;
    let noise = power * model.value(lattice.a) / db_to_linear(snr_db);
    interference_bound(model, h_k, 0.0)?;
    run_trials(trials, seed, |ts| {
        let user = placement.position(window.center(), &mut aux_rng(ts));
        let mut records = Vec::with_capacity(k as usize);
        let mut sinr_failures = 0;
        for mark in 1..=k {
            let Some(rec) = class_check(&colored, Some(mark), user, model, h_k, ts)? else {
                continue;
            };
            let link = LinkBudget::new(power, noise, rec.d, model.clone())?;
            let guaranteed = theta(&link, h_k)?;
            let sinr = link.signal() / (power * rec.realized + noise);
            if sinr < guaranteed * (1.0 - VIOLATION_TOLERANCE) {
                sinr_failures += 1;
            }
            records.push(rec);
        }
        Ok(TrialOutcome { records, extra_violations: sinr_failures, note: None })
    })
}

/// Named verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    Ball,
    Interference,
    Scheduled,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ball" => Ok(Suite::Ball),
            "interference" => Ok(Suite::Interference),
            "scheduled" => Ok(Suite::Scheduled),
            "all" => Ok(Suite::All),
            other => Err(Error::Config(format!(
                "unknown suite '{other}'; expected ball, interference, scheduled or all"
            ))),
        }
    }
}

/// Parameters shared by the verification suites.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Cell edge of the lattice suites.
    pub a: f64,
    /// Hardcore half-distance `H` of the Matérn process (spacing `2H`).
    pub hardcore: f64,
    /// Overrides the `H` fed to the unscheduled bounds; used as a negative control.
    pub claimed_hardcore: Option<f64>,
    pub alpha: f64,
    pub intensity: f64,
    pub matern_half_width: f64,
    pub lattice_half_width: f64,
    pub radii: Vec<f64>,
    pub power: f64,
    pub snr_db: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            a: 4.0 / 3f64.sqrt(),
            hardcore: 2.0,
            claimed_hardcore: None,
            alpha: 4.0,
            intensity: 0.1,
            matern_half_width: 50.0,
            lattice_half_width: 60.0,
            radii: vec![2.0, 4.0, 8.0, 16.0],
            power: 1.0,
            snr_db: 0.0,
            trials: 100,
            seed: 42,
        }
    }
}

/// Labelled sub-reports of a suite run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteReport {
    pub parts: Vec<(String, VerificationReport)>,
}

impl SuiteReport {
    pub fn total(&self) -> VerificationReport {
        let mut total = VerificationReport::default();
        for (_, r) in &self.parts {
            total.merge(r.clone());
        }
        total
    }
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let model = PathLoss::power_law(cfg.alpha)?;
    let lattice = Generator::Lattice { a: cfg.a, half_width: cfg.lattice_half_width };
    let matern = Generator::MaternII {
        intensity: cfg.intensity,
        hardcore_radius: 2.0 * cfg.hardcore,
        half_width: cfg.matern_half_width,
    };
    let h_lattice = cfg.claimed_hardcore.unwrap_or(hardcore_for_reuse(cfg.a, 1)?);
    let h_matern = cfg.claimed_hardcore.unwrap_or(cfg.hardcore);
    let vertex = UserPlacement::Vertex { a: cfg.a };
    let anywhere = UserPlacement::Uniform { radius: cfg.a };
    let once = cfg.trials.min(1);
    // Distinct seeds per sub-suite keep their random draws unrelated.
    let sub = |i: u64| trial_seed(cfg.seed, u64::MAX - i);

    let mut report = SuiteReport::default();
    if matches!(suite, Suite::Ball | Suite::All) {
        report.parts.push((
            "ball/lattice".into(),
            check_ball_regulation(&lattice, h_lattice, &cfg.radii, cfg.trials, sub(0))?,
        ));
        report.parts.push((
            "ball/matern".into(),
            check_ball_regulation(&matern, h_matern, &cfg.radii, cfg.trials, sub(1))?,
        ));
    }
    if matches!(suite, Suite::Interference | Suite::All) {
        report.parts.push((
            "interference/lattice-vertex".into(),
            check_interference_bound(&lattice, h_lattice, &model, vertex, once, sub(2))?,
        ));
        report.parts.push((
            "interference/lattice-uniform".into(),
            check_interference_bound(&lattice, h_lattice, &model, anywhere, cfg.trials, sub(3))?,
        ));
        report.parts.push((
            "interference/matern".into(),
            check_interference_bound(&matern, h_matern, &model, UserPlacement::Center, cfg.trials, sub(4))?,
        ));
    }
    if matches!(suite, Suite::Scheduled | Suite::All) {
        let spec = LatticeSpec { a: cfg.a, half_width: cfg.lattice_half_width };
        for (n, k) in [1u32, 3, 4].into_iter().enumerate() {
            let h_k = match (k, cfg.claimed_hardcore) {
                (1, Some(h)) => h,
                _ => hardcore_for_reuse(cfg.a, k)?,
            };
            let n = n as u64;
            report.parts.push((
                format!("scheduled/k{k}-vertex"),
                scheduled_with_hardcore(spec, k, h_k, &model, cfg.power, cfg.snr_db, vertex, once, sub(5 + 2 * n))?,
            ));
            report.parts.push((
                format!("scheduled/k{k}-uniform"),
                scheduled_with_hardcore(spec, k, h_k, &model, cfg.power, cfg.snr_db, anywhere, cfg.trials, sub(6 + 2 * n))?,
            ));
        }
    }
    Ok(report)
}
