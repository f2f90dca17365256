//! SINR and normalized-rate guarantees, critical hardcore distances and
//! reduced transmit power.
//!
//! Every guarantee flows through `θ(P, H) = Pℓ(d) / (P·I(H, d) + W)` where
//! `I` is [`interference_bound`]. With periodic scheduling over `K` slots and
//! same-slot separation `2H_K`, the normalized rate is at least
//! `(1/K)·log(1 + θ(P, H_K))`.

use serde::{Deserialize, Serialize};

use crate::bounds::interference_bound;
use crate::error::{ensure, Error, Result};
use crate::pathloss::PathLoss;

/// Transmit power, noise power and serving distance of the link under study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub power: f64,
    pub noise: f64,
    pub distance: f64,
    pub model: PathLoss,
}

impl LinkBudget {
    pub fn new(power: f64, noise: f64, distance: f64, model: PathLoss) -> Result<Self> {
        ensure(power > 0.0 && power.is_finite(), || format!("power must be positive, got {power}"))?;
        ensure(noise > 0.0 && noise.is_finite(), || format!("noise must be positive, got {noise}"))?;
        ensure(distance >= 0.0 && distance.is_finite(), || {
            format!("serving distance must be non-negative, got {distance}")
        })?;
        ensure(model.value(distance) > 0.0, || "zero signal at the serving distance".into())?;
        Ok(LinkBudget { power, noise, distance, model })
    }

    /// Link whose noise is chosen so that `Pℓ(d)/W` equals `snr_db`.
    pub fn from_snr_db(power: f64, snr_db: f64, distance: f64, model: PathLoss) -> Result<Self> {
        ensure(snr_db.is_finite(), || format!("SNR must be finite, got {snr_db} dB"))?;
        let signal = power * model.value(distance.max(0.0));
        let noise = signal / db_to_linear(snr_db);
        LinkBudget::new(power, noise, distance, model)
    }

    /// `Pℓ(d)/W`.
    pub fn snr(&self) -> f64 {
        self.signal() / self.noise
    }

    pub fn signal(&self) -> f64 {
        self.power * self.model.value(self.distance)
    }

    pub fn with_power(&self, power: f64) -> Result<Self> {
        LinkBudget::new(power, self.noise, self.distance, self.model.clone())
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Logarithm used to express rates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    /// nats
    #[default]
    Natural,
    /// bits
    Base2,
}

impl LogBase {
    /// `log(1 + x)` in this base.
    pub fn log1p(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln_1p(),
            LogBase::Base2 => x.ln_1p() / std::f64::consts::LN_2,
        }
    }
}

/// Guaranteed SINR `theta` and normalized rate `(1/K)·log(1 + theta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateGuarantee {
    pub k: u32,
    pub theta: f64,
    pub rate: f64,
    pub log_base: LogBase,
}

impl RateGuarantee {
    fn new(k: u32, theta: f64, log_base: LogBase) -> Self {
        RateGuarantee { k, theta, rate: log_base.log1p(theta) / f64::from(k), log_base }
    }
}

/// Reduced power preserving the always-active rate guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPower {
    pub p_k_star: f64,
    /// `p_k_star <= P`.
    pub feasible: bool,
}

/// SINR lower bound `θ(P, H)`.
pub fn theta(link: &LinkBudget, h: f64) -> Result<f64> {
    let interference = interference_bound(&link.model, h, link.distance)?;
    Ok(link.signal() / (link.power * interference + link.noise))
}

/// Always-active guarantee: `log(1 + θ(P, H))`.
pub fn rate_always_active(link: &LinkBudget, h: f64, log_base: LogBase) -> Result<RateGuarantee> {
    Ok(RateGuarantee::new(1, theta(link, h)?, log_base))
}

/// Scheduled guarantee: `(1/K)·log(1 + θ(P, H_K))`.
pub fn rate_scheduled(link: &LinkBudget, k: u32, h_k: f64, log_base: LogBase) -> Result<RateGuarantee> {
    ensure(k >= 1, || "K must be positive".into())?;
    Ok(RateGuarantee::new(k, theta(link, h_k)?, log_base))
}

/// Whether some `H_K` lets `K`-slot scheduling match the always-active rate:
/// `log(1 + SNR) ≥ K·log(1 + θ(P, H))`.
pub fn criticality_feasible(link: &LinkBudget, h: f64, k: u32) -> Result<bool> {
    ensure(k >= 1, || "K must be positive".into())?;
    let aa = theta(link, h)?.ln_1p();
    Ok(link.snr().ln_1p() >= f64::from(k) * aa)
}

/// Solves `(1/K)·log(1 + θ(P, H_K)) = log(1 + θ(P, H))` for `H_K ≥ H`.
///
/// `θ` is increasing in `H_K` but its slope jumps where `2H_K − d` overtakes
/// `d`, so the root is bracketed by doubling and then bisected to machine
/// precision.
pub fn solve_critical_hk(link: &LinkBudget, h: f64, k: u32) -> Result<f64> {
    if !criticality_feasible(link, h, k)? {
        return Err(Error::Infeasible(format!(
            "no critical H_K for K={k}: log(1+SNR) < K·log(1+θ(P,H))"
        )));
    }
    if k == 1 {
        return Ok(h);
    }
    let target = f64::from(k) * theta(link, h)?.ln_1p();
    let excess = |hk: f64| -> Result<f64> { Ok(theta(link, hk)?.ln_1p() - target) };

    let cap = h * 2f64.powi(40);
    let mut lo = h;
    let mut hi = 2.0 * h;
    while excess(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > cap {
            return Err(Error::Numerical(format!("critical H_K not bracketed below {cap}")));
        }
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    debug_assert!(hi - lo <= 1e-9 * h);
    Ok(0.5 * (lo + hi))
}

/// Minimum transmit power with `K`-slot scheduling at separation `H_K` that
/// keeps the always-active guarantee at full power `P`:
///
/// `P_K* = W / (ℓ(d)/((1 + θ(P, H))^K − 1) − I(H_K, d))`.
pub fn critical_power(link: &LinkBudget, h: f64, k: u32, h_k: f64) -> Result<CriticalPower> {
    ensure(k >= 1, || "K must be positive".into())?;
    let aa = theta(link, h)?;
    let growth = (f64::from(k) * aa.ln_1p()).exp_m1();
    let interference = interference_bound(&link.model, h_k, link.distance)?;
    let denom = link.model.value(link.distance) / growth - interference;
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::Infeasible(format!(
            "H_K={h_k} is below critical for K={k}: no transmit power reaches the always-active rate"
        )));
    }
    let p_k_star = link.noise / denom;
    Ok(CriticalPower { p_k_star, feasible: p_k_star <= link.power })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig2(snr_db: f64) -> LinkBudget {
        LinkBudget::from_snr_db(1.0, snr_db, 4.0 / 3f64.sqrt(), PathLoss::power_law(4.0).unwrap()).unwrap()
    }

    #[test]
    fn link_validation() {
        let m = PathLoss::power_law(4.0).unwrap();
        assert!(LinkBudget::new(0.0, 1.0, 1.0, m.clone()).is_err());
        assert!(LinkBudget::new(1.0, 0.0, 1.0, m.clone()).is_err());
        assert!(LinkBudget::new(1.0, 1.0, -1.0, m.clone()).is_err());
        let l = LinkBudget::new(2.0, 0.5, 2.0, m).unwrap();
        assert_relative_eq!(l.snr(), 2.0 * 0.0625 / 0.5);
        assert_relative_eq!(fig2(0.0).snr(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn theta_fig2() {
        let th = theta(&fig2(0.0), 2.0).unwrap();
        assert_relative_eq!(th, 0.035_156_25 / (0.183_196_616 + 0.035_156_25), max_relative = 1e-8);
        assert_relative_eq!(th, 0.161_01, max_relative = 1e-4);
    }

    #[test]
    fn theta_limits() {
        let l = fig2(0.0);
        let noisy = LinkBudget::new(1.0, 1e12, l.distance, l.model.clone()).unwrap();
        assert!(theta(&noisy, 2.0).unwrap() < 1e-12);
        assert_relative_eq!(theta(&l, 1e6).unwrap(), l.snr(), max_relative = 1e-9);
    }

    #[test]
    fn rates() {
        let l = fig2(0.0);
        let aa = rate_always_active(&l, 2.0, LogBase::Natural).unwrap();
        assert_relative_eq!(aa.rate, 1.161_006_6f64.ln(), max_relative = 1e-6);
        let bits = rate_always_active(&l, 2.0, LogBase::Base2).unwrap();
        assert_relative_eq!(bits.rate, aa.rate / std::f64::consts::LN_2, max_relative = 1e-14);
        let k1 = rate_scheduled(&l, 1, 2.0, LogBase::Natural).unwrap();
        assert_eq!(k1.rate, aa.rate);
        let k3 = rate_scheduled(&l, 3, 2.0 * 3f64.sqrt(), LogBase::Natural).unwrap();
        assert_relative_eq!(k3.rate, theta(&l, 2.0 * 3f64.sqrt()).unwrap().ln_1p() / 3.0);
        assert_eq!(RateGuarantee::new(1, 0.0, LogBase::Natural).rate, 0.0);
        let far = rate_scheduled(&l, 1000, 1e9, LogBase::Natural).unwrap();
        assert!(far.rate < 1e-3);
    }

    #[test]
    fn criticality() {
        let l = fig2(0.0);
        assert!(criticality_feasible(&l, 2.0, 3).unwrap());
        assert!(criticality_feasible(&l, 2.0, 1).unwrap());
        let ratio = l.snr().ln_1p() / theta(&l, 2.0).unwrap().ln_1p();
        // ln 2 / ln(1.16101)
        assert_relative_eq!(ratio, 4.643_04, max_relative = 1e-5);
        assert!(criticality_feasible(&l, 2.0, 4).unwrap());
        assert!(!criticality_feasible(&l, 2.0, 5).unwrap());
        let quiet = LinkBudget::new(1.0, 1e-300, l.distance, l.model.clone()).unwrap();
        assert!(criticality_feasible(&quiet, 2.0, 1000).unwrap());
    }

    #[test]
    fn critical_hk_values() {
        let l = fig2(0.0);
        let h3 = solve_critical_hk(&l, 2.0, 3).unwrap();
        let h4 = solve_critical_hk(&l, 2.0, 4).unwrap();
        assert!((3.0..=3.25).contains(&h3), "{h3}");
        assert!((3.7..=3.95).contains(&h4), "{h4}");
        assert_eq!(solve_critical_hk(&l, 2.0, 1).unwrap(), 2.0);
        assert!(matches!(solve_critical_hk(&l, 2.0, 5), Err(Error::Infeasible(_))));
        assert!(matches!(solve_critical_hk(&fig2(-5.0), 2.0, 3), Err(Error::Infeasible(_))));
    }

    #[test]
    fn critical_power_values() {
        let l = fig2(0.0);
        let p3 = critical_power(&l, 2.0, 3, 2.0 * 3f64.sqrt()).unwrap();
        let p4 = critical_power(&l, 2.0, 4, 4.0).unwrap();
        assert!((p3.p_k_star - 0.7315).abs() < 2e-3 && p3.feasible);
        assert!((p4.p_k_star - 0.9698).abs() < 2e-3 && p4.feasible);
        let h3 = solve_critical_hk(&l, 2.0, 3).unwrap();
        assert_relative_eq!(critical_power(&l, 2.0, 3, h3).unwrap().p_k_star, 1.0, max_relative = 1e-8);
        assert!(matches!(critical_power(&l, 2.0, 3, 2.5), Err(Error::Infeasible(_))));
        // Between the two roots of the denominator P_K* exceeds P.
        let p = critical_power(&l, 2.0, 3, h3 * 0.98).unwrap();
        assert!(p.p_k_star > 1.0 && !p.feasible);
    }
}
