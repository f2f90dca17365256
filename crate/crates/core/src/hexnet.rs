//! Hexagonal cellular networks: base stations on a triangular lattice with
//! reuse-1, reuse-3 or reuse-4 slot colorings, and a worst-case user at a
//! cell vertex (`d = a`).

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};
use crate::guarantees::{rate_always_active, rate_scheduled, LinkBudget, LogBase, RateGuarantee};
use crate::pathloss::PathLoss;
use crate::pointset::Reuse;

/// Half the minimum same-color distance for cell edge `a`:
/// `√3a/2` (K=1), `3a/2` (K=3), `√3a` (K=4).
pub fn hardcore_for_reuse(a: f64, k: u32) -> Result<f64> {
    let reuse = Reuse::try_from(k)?;
    ensure(a > 0.0 && a.is_finite(), || format!("cell edge must be positive, got {a}"))?;
    let s3 = 3f64.sqrt();
    Ok(match reuse {
        Reuse::One => s3 * a / 2.0,
        Reuse::Three => 1.5 * a,
        Reuse::Four => s3 * a,
    })
}

/// Position of a cell vertex of the BS at the origin (distance `a`).
pub fn cell_vertex(a: f64) -> crate::Point {
    crate::Point::new(a * 3f64.sqrt() / 2.0, a / 2.0)
}

/// Hexagonal network configuration with the vertex user's link budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexConfig {
    pub a: f64,
    pub reuse: Reuse,
    pub link: LinkBudget,
}

impl HexConfig {
    pub fn new(a: f64, reuse: Reuse, power: f64, snr_db: f64, model: PathLoss) -> Result<Self> {
        ensure(a > 0.0 && a.is_finite(), || format!("cell edge must be positive, got {a}"))?;
        let link = LinkBudget::from_snr_db(power, snr_db, a, model)?;
        Ok(HexConfig { a, reuse, link })
    }

    pub fn hardcore(&self) -> f64 {
        hardcore_for_reuse(self.a, self.reuse.k()).expect("validated at construction")
    }

    /// Guaranteed normalized rate of the vertex user under this reuse.
    pub fn rate(&self, log_base: LogBase) -> Result<RateGuarantee> {
        match self.reuse {
            Reuse::One => rate_always_active(&self.link, self.hardcore(), log_base),
            r => rate_scheduled(&self.link, r.k(), self.hardcore(), log_base),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HexRateRow {
    pub snr_db: f64,
    pub rate_aa: f64,
    pub rate_k3: f64,
    pub rate_k4: f64,
}

impl HexRateRow {
    /// The reuse factor with the largest guarantee (ties favor smaller K).
    pub fn best(&self) -> Reuse {
        let mut best = (Reuse::One, self.rate_aa);
        for (r, v) in [(Reuse::Three, self.rate_k3), (Reuse::Four, self.rate_k4)] {
            if v > best.1 {
                best = (r, v);
            }
        }
        best.0
    }
}

/// Vertex-user rate guarantees for reuse 1, 3 and 4 at each SNR (dB),
/// with `W = Pℓ(a)/SNR`.
pub fn hex_rate_sweep(a: f64, power: f64, model: &PathLoss, snr_db_grid: &[f64], log_base: LogBase) -> Result<Vec<HexRateRow>> {
    snr_db_grid
        .iter()
        .map(|&snr_db| {
            let rate = |reuse| HexConfig::new(a, reuse, power, snr_db, model.clone())?.rate(log_base);
            Ok(HexRateRow {
                snr_db,
                rate_aa: rate(Reuse::One)?.rate,
                rate_k3: rate(Reuse::Three)?.rate,
                rate_k4: rate(Reuse::Four)?.rate,
            })
        })
        .collect()
}

/// Inclusive grid `start, start + step, …` up to `stop` (within half a step).
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    ensure(start.is_finite() && stop.is_finite() && step.is_finite(), || "grid bounds must be finite".into())?;
    ensure(step > 0.0, || format!("grid step must be positive, got {step}"))?;
    ensure(stop >= start, || format!("grid range reversed: {start} > {stop}"))?;
    let n = ((stop - start) / step + 0.5).floor() as usize;
    // Index-based, then snapped to 1e-12 so printed grids read cleanly.
    Ok((0..=n).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect())
}
