//! Subcommands of the `hcnet` binary.
//!
//! Every figure-style subcommand renders a CSV table preceded by `#` comment
//! lines that echo the parameters. Output depends only on the flags, so
//! identical invocations produce identical bytes.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hcnet::bounds::{exclusion_radius, interference_bound_at, legacy_bound_at};
use hcnet::guarantees::{
    critical_power, criticality_feasible, rate_always_active, rate_scheduled, solve_critical_hk,
};
use hcnet::hexnet::{grid, hex_rate_sweep};
use hcnet::montecarlo::{run_suite, Suite, SuiteConfig};
use hcnet::{LinkBudget, LogBase, PathLoss};

/// `4/√3`: cell edge of the reference hexagonal network (`H_1 = 2`).
pub const DEFAULT_A: f64 = 2.309_401_076_758_503;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Infeasible(String),
    #[error("{0}")]
    Violation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1 usage/config, 2 infeasible analytic request, 3 Monte Carlo violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::Violation(_) => 3,
        }
    }
}

impl From<hcnet::Error> for CliError {
    fn from(e: hcnet::Error) -> Self {
        use hcnet::Error as E;
        match e {
            E::Divergent(_) | E::Infeasible(_) | E::Numerical(_) => CliError::Infeasible(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "hcnet", version, about = "Rate and interference guarantees for hardcore-regulated cellular networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exclusion-aware interference bound versus the legacy bound, swept over t.
    BoundCompare(BoundCompareArgs),
    /// Scheduled and always-active rate guarantees versus H_K.
    RateVsHk(RateVsHkArgs),
    /// Reduced transmit power P_K* versus H_K.
    CriticalPower(CriticalPowerArgs),
    /// Reuse-1/3/4 rate guarantees of the hexagonal network versus SNR.
    HexSweep(HexSweepArgs),
    /// Monte Carlo verification of the almost-sure bounds.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LogBaseArg {
    #[value(name = "nat")]
    Nat,
    #[value(name = "2")]
    Two,
}

impl From<LogBaseArg> for LogBase {
    fn from(v: LogBaseArg) -> Self {
        match v {
            LogBaseArg::Nat => LogBase::Natural,
            LogBaseArg::Two => LogBase::Base2,
        }
    }
}

impl LogBaseArg {
    fn label(self) -> &'static str {
        match self {
            LogBaseArg::Nat => "nat",
            LogBaseArg::Two => "2",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BoundCompareArgs {
    /// Path-loss exponents (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = vec![2.5, 3.0, 4.0])]
    pub alpha: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub hardcore: f64,
    #[arg(long, default_value_t = 1.0)]
    pub d: f64,
    /// First t (defaults to max(d, 2H - d)).
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub t_step: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Link parameters shared by the H_K sweeps.
#[derive(Debug, Clone, Args)]
pub struct LinkArgs {
    #[arg(long, default_value_t = 4.0)]
    pub alpha: f64,
    /// Hardcore distance H of the always-active network.
    #[arg(long, default_value_t = 2.0)]
    pub hardcore: f64,
    /// Serving distance (defaults to the vertex user at 4/√3).
    #[arg(long, default_value_t = DEFAULT_A)]
    pub d: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub snr_db: f64,
    #[arg(long, default_value_t = 1.0)]
    pub power: f64,
    /// Sweep start (defaults to H).
    #[arg(long)]
    pub hk_min: Option<f64>,
    /// Sweep end (defaults to 3H).
    #[arg(long)]
    pub hk_max: Option<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub hk_step: f64,
}

impl LinkArgs {
    fn link(&self) -> Result<LinkBudget, CliError> {
        let model = PathLoss::power_law(self.alpha)?;
        Ok(LinkBudget::from_snr_db(self.power, self.snr_db, self.d, model)?)
    }

    fn hk_grid(&self) -> Result<Vec<f64>, CliError> {
        let lo = self.hk_min.unwrap_or(self.hardcore);
        let hi = self.hk_max.unwrap_or(3.0 * self.hardcore);
        Ok(grid(lo, hi, self.hk_step)?)
    }

    fn echo(&self, out: &mut String) {
        let lo = self.hk_min.unwrap_or(self.hardcore);
        let hi = self.hk_max.unwrap_or(3.0 * self.hardcore);
        let _ = writeln!(
            out,
            "# alpha={} hardcore={} d={} snr_db={} power={} hk_min={lo} hk_max={hi} hk_step={}",
            self.alpha, self.hardcore, self.d, self.snr_db, self.power, self.hk_step
        );
    }
}

#[derive(Debug, Clone, Args)]
pub struct RateVsHkArgs {
    #[arg(long, default_value_t = 3)]
    pub k: u32,
    #[command(flatten)]
    pub link: LinkArgs,
    #[arg(long, value_enum, default_value_t = LogBaseArg::Nat)]
    pub log_base: LogBaseArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CriticalPowerArgs {
    /// Slot counts (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = vec![3, 4])]
    pub k: Vec<u32>,
    #[command(flatten)]
    pub link: LinkArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct HexSweepArgs {
    /// Hexagon edge length.
    #[arg(long, default_value_t = DEFAULT_A)]
    pub a: f64,
    #[arg(long, default_value_t = 4.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub power: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = -15.0)]
    pub snr_min: f64,
    #[arg(long, allow_hyphen_values = true, default_value_t = 15.0)]
    pub snr_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub snr_step: f64,
    #[arg(long, value_enum, default_value_t = LogBaseArg::Nat)]
    pub log_base: LogBaseArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// ball, interference, scheduled or all.
    pub suite: String,
    /// Trials per randomized check.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 4.0)]
    pub alpha: f64,
    /// Lattice cell edge.
    #[arg(long, default_value_t = DEFAULT_A)]
    pub a: f64,
    /// Hardcore distance H of the Matérn process (spacing 2H).
    #[arg(long, default_value_t = 2.0)]
    pub hardcore: f64,
    /// Matérn parent intensity.
    #[arg(long, default_value_t = 0.1)]
    pub intensity: f64,
    /// Feed this H to the unscheduled bounds instead of the true value
    /// (negative control: a value above the truth must produce violations).
    #[arg(long)]
    pub claim_hardcore: Option<f64>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    pub snr_db: f64,
    #[arg(long, default_value_t = 1.0)]
    pub power: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn bound_compare(args: &BoundCompareArgs) -> Result<String, CliError> {
    if args.alpha.is_empty() {
        return Err(CliError::Usage("at least one --alpha is required".into()));
    }
    let t0 = args.t_min.unwrap_or_else(|| exclusion_radius(args.d, args.hardcore));
    let ts = grid(t0, args.t_max, args.t_step)?;
    let mut out = String::new();
    let alphas: Vec<String> = args.alpha.iter().map(f64::to_string).collect();
    let _ = writeln!(out, "# hcnet bound-compare");
    let _ = writeln!(
        out,
        "# alpha={} hardcore={} d={} t_min={t0} t_max={} t_step={}",
        alphas.join(";"),
        args.hardcore,
        args.d,
        args.t_max,
        args.t_step
    );
    out.push_str("t,alpha,new_bound,legacy_bound\n");
    for &alpha in &args.alpha {
        let model = PathLoss::power_law(alpha)?;
        for &t in &ts {
            let new = interference_bound_at(&model, args.hardcore, t)?;
            let legacy = legacy_bound_at(&model, args.hardcore, t)?;
            let _ = writeln!(out, "{t},{alpha},{new},{legacy}");
        }
    }
    Ok(out)
}

pub fn rate_vs_hk(args: &RateVsHkArgs) -> Result<String, CliError> {
    let link = args.link.link()?;
    let h = args.link.hardcore;
    let base = LogBase::from(args.log_base);
    let hks = args.link.hk_grid()?;
    let aa = rate_always_active(&link, h, base)?.rate;
    let (star, infeasible) = if criticality_feasible(&link, h, args.k)? {
        (Some(solve_critical_hk(&link, h, args.k)?), None)
    } else {
        (None, Some(format!("no critical H_K for K={}: scheduling never matches always-active", args.k)))
    };

    let mut out = String::new();
    let _ = writeln!(out, "# hcnet rate-vs-hk");
    let _ = writeln!(out, "# k={} log_base={}", args.k, args.log_base.label());
    args.link.echo(&mut out);
    out.push_str("H_K,rate_scheduled,rate_aa,H_K_star\n");
    for hk in hks {
        let sched = rate_scheduled(&link, args.k, hk, base)?.rate;
        let _ = writeln!(out, "{hk},{sched},{aa},{}", fmt_opt(star));
    }
    if let Some(note) = infeasible {
        let _ = writeln!(out, "# infeasible: {note}");
    }
    Ok(out)
}

pub fn critical_power_table(args: &CriticalPowerArgs) -> Result<String, CliError> {
    if args.k.is_empty() || args.k.contains(&0) {
        return Err(CliError::Usage("--k needs positive slot counts".into()));
    }
    let link = args.link.link()?;
    let hks = args.link.hk_grid()?;
    let mut out = String::new();
    let ks: Vec<String> = args.k.iter().map(u32::to_string).collect();
    let _ = writeln!(out, "# hcnet critical-power");
    let _ = writeln!(out, "# k={}", ks.join(";"));
    args.link.echo(&mut out);
    out.push_str("K,H_K,P_K_star,feasible\n");
    for &k in &args.k {
        for &hk in &hks {
            match critical_power(&link, args.link.hardcore, k, hk) {
                Ok(cp) => {
                    let _ = writeln!(out, "{k},{hk},{},{}", cp.p_k_star, cp.feasible);
                }
                Err(hcnet::Error::Infeasible(_)) => {
                    let _ = writeln!(out, "{k},{hk},,false");
                }
                Err(e) => return Err(e.into()),
            }
        }
    }
    Ok(out)
}

pub fn hex_sweep(args: &HexSweepArgs) -> Result<String, CliError> {
    let model = PathLoss::power_law(args.alpha)?;
    let snrs = grid(args.snr_min, args.snr_max, args.snr_step)?;
    let rows = hex_rate_sweep(args.a, args.power, &model, &snrs, args.log_base.into())?;
    let mut out = String::new();
    let _ = writeln!(out, "# hcnet hex-sweep");
    let _ = writeln!(
        out,
        "# a={} alpha={} power={} snr_min={} snr_max={} snr_step={} log_base={}",
        args.a,
        args.alpha,
        args.power,
        args.snr_min,
        args.snr_max,
        args.snr_step,
        args.log_base.label()
    );
    out.push_str("snr_db,rate_aa,rate_k3,rate_k4\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.snr_db, r.rate_aa, r.rate_k3, r.rate_k4);
    }
    Ok(out)
}

/// Outcome of `verify`: a one-line summary, the report CSV and whether all checks passed.
pub struct VerifyOutcome {
    pub summary: String,
    pub csv: String,
    pub passed: bool,
}

pub fn verify(args: &VerifyArgs) -> Result<VerifyOutcome, CliError> {
    let suite: Suite = args.suite.parse()?;
    let cfg = SuiteConfig {
        a: args.a,
        hardcore: args.hardcore,
        claimed_hardcore: args.claim_hardcore,
        alpha: args.alpha,
        intensity: args.intensity,
        power: args.power,
        snr_db: args.snr_db,
        trials: args.trials,
        seed: args.seed,
        ..SuiteConfig::default()
    };
    let report = run_suite(suite, &cfg)?;
    let total = report.total();

    let mut csv = String::new();
    let _ = writeln!(csv, "# hcnet verify {}", args.suite);
    let _ = writeln!(
        csv,
        "# trials={} seed={} alpha={} a={} hardcore={} intensity={} claim_hardcore={} snr_db={} power={}",
        args.trials,
        args.seed,
        args.alpha,
        args.a,
        args.hardcore,
        args.intensity,
        fmt_opt(args.claim_hardcore),
        args.snr_db,
        args.power
    );
    for (label, part) in &report.parts {
        let _ = writeln!(csv, "# {}", part.summary(label));
    }
    let mut body = Vec::new();
    total.write_csv(&mut body)?;
    csv.push_str(&String::from_utf8(body).expect("csv output is utf-8"));

    Ok(VerifyOutcome {
        summary: total.summary(&format!("verify {}", args.suite)),
        csv,
        passed: total.passed(),
    })
}

fn emit(text: &str, path: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs one parsed invocation, writing tables and summaries to `stdout`
/// (or to `--out`).
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::BoundCompare(a) => emit(&bound_compare(a)?, a.out.as_ref(), stdout),
        Command::RateVsHk(a) => emit(&rate_vs_hk(a)?, a.out.as_ref(), stdout),
        Command::CriticalPower(a) => emit(&critical_power_table(a)?, a.out.as_ref(), stdout),
        Command::HexSweep(a) => emit(&hex_sweep(a)?, a.out.as_ref(), stdout),
        Command::Verify(a) => {
            let outcome = verify(a)?;
            writeln!(stdout, "{}", outcome.summary)?;
            emit(&outcome.csv, a.out.as_ref(), stdout)?;
            if outcome.passed {
                Ok(())
            } else {
                Err(CliError::Violation(outcome.summary))
            }
        }
    }
}
