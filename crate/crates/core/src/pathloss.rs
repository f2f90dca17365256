//! Isotropic attenuation functions and their tail integrals.
//!
//! Every bound in this crate consumes a path-loss function `ℓ` only through
//! three quantities: its value, `∫ₜ^∞ ℓ(r) dr` and `∫ₜ^∞ r ℓ(r) dr`. Both
//! supported models have these in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Attenuation `ℓ(r)`: non-negative, bounded and non-increasing in `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PathLoss {
    /// `ℓ(r) = min{1, r^(-alpha)}`.
    BoundedPowerLaw { alpha: f64 },
    Tabulated(Table),
}

/// Piecewise-linear attenuation through sample points, continued past the
/// last sample radius by a power law.
///
/// The last sample radius is the truncation radius of the table. Beyond it
/// `ℓ(r) = v_last · (r / r_last)^(-tail_exponent)`, so the tail is never
/// dropped from an integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    radii: Vec<f64>,
    values: Vec<f64>,
    tail_exponent: f64,
}

impl Table {
    /// Radii must start at 0 and increase strictly; values must be finite,
    /// non-negative and non-increasing.
    pub fn new(radii: Vec<f64>, values: Vec<f64>, tail_exponent: f64) -> Result<Self> {
        ensure(!radii.is_empty(), || "table needs at least one sample".into())?;
        ensure(radii.len() == values.len(), || {
            format!("{} radii but {} values", radii.len(), values.len())
        })?;
        ensure(radii[0] == 0.0, || format!("first radius must be 0, got {}", radii[0]))?;
        ensure(radii.iter().all(|r| r.is_finite()), || "radii must be finite".into())?;
        ensure(radii.windows(2).all(|w| w[0] < w[1]), || {
            "radii must be strictly increasing".into()
        })?;
        ensure(values.iter().all(|v| v.is_finite() && *v >= 0.0), || {
            "values must be finite and non-negative".into()
        })?;
        ensure(values.windows(2).all(|w| w[0] >= w[1]), || {
            "values must be non-increasing".into()
        })?;
        ensure(tail_exponent > 0.0 && tail_exponent.is_finite(), || {
            format!("tail exponent must be positive, got {tail_exponent}")
        })?;
        Ok(Table { radii, values, tail_exponent })
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail_exponent(&self) -> f64 {
        self.tail_exponent
    }

    /// Radius past which the power-law tail takes over.
    pub fn truncation_radius(&self) -> f64 {
        *self.radii.last().expect("non-empty")
    }

    fn last_value(&self) -> f64 {
        *self.values.last().expect("non-empty")
    }

    fn value(&self, r: f64) -> f64 {
        let r_last = self.truncation_radius();
        if r >= r_last {
            if r == r_last {
                return self.last_value();
            }
            return self.last_value() * (r / r_last).powf(-self.tail_exponent);
        }
        // r < r_last and radii[0] == 0, so the segment index exists.
        let i = self.radii.partition_point(|&x| x <= r) - 1;
        let (r0, r1) = (self.radii[i], self.radii[i + 1]);
        let (v0, v1) = (self.values[i], self.values[i + 1]);
        v0 + (v1 - v0) * (r - r0) / (r1 - r0)
    }

    /// `∫_lo^hi r^power ℓ(r) dr` for `power` ∈ {0, 1}; `hi` may be infinite.
    /// Each linear segment is integrated exactly (the trapezoid rule for
    /// `power = 0`).
    fn moment(&self, lo: f64, hi: f64, power: i32) -> Result<f64> {
        let r_last = self.truncation_radius();
        let need = f64::from(power) + 1.0;
        if hi.is_infinite() && self.tail_exponent <= need && self.last_value() > 0.0 {
            return Err(Error::Divergent(format!(
                "tabulated tail exponent {} must exceed {need}",
                self.tail_exponent
            )));
        }
        let mut acc = 0.0;
        for i in 0..self.radii.len() - 1 {
            let a = self.radii[i].max(lo);
            let b = self.radii[i + 1].min(hi);
            if a >= b {
                continue;
            }
            let (va, vb) = (self.value(a), self.value(b));
            acc += match power {
                0 => 0.5 * (va + vb) * (b - a),
                // ℓ linear on [a, b]: ∫ r ℓ = (b − a)/6 · (a(2va + vb) + b(va + 2vb)).
                _ => (b - a) / 6.0 * (a * (2.0 * va + vb) + b * (va + 2.0 * vb)),
            };
        }
        let a = lo.max(r_last);
        if a < hi {
            // ∫_a^hi r^p · c·r^(−β) dr with c = v_last·r_last^β.
            let c = self.last_value() * r_last.powf(self.tail_exponent);
            acc += c * power_moment(a, hi, f64::from(power) - self.tail_exponent);
        }
        Ok(acc)
    }
}

/// `∫_a^b r^e dr` for `0 < a ≤ b ≤ ∞`; the caller guarantees convergence when `b = ∞`.
fn power_moment(a: f64, b: f64, e: f64) -> f64 {
    if b.is_infinite() {
        return -a.powf(e + 1.0) / (e + 1.0);
    }
    if (e + 1.0).abs() < 1e-14 {
        (b / a).ln()
    } else {
        (b.powf(e + 1.0) - a.powf(e + 1.0)) / (e + 1.0)
    }
}

impl PathLoss {
    /// `ℓ(r) = min{1, r^(-alpha)}`; `alpha` must be positive.
    pub fn power_law(alpha: f64) -> Result<Self> {
        ensure(alpha > 0.0 && alpha.is_finite(), || format!("alpha must be positive, got {alpha}"))?;
        Ok(PathLoss::BoundedPowerLaw { alpha })
    }

    /// `ℓ(r)`, rejecting negative or non-finite-negative radii.
    pub fn eval(&self, r: f64) -> Result<f64> {
        ensure(r >= 0.0, || format!("radius must be non-negative, got {r}"))?;
        Ok(self.value(r))
    }

    /// `ℓ(r)` for a radius already known to be non-negative.
    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0, "negative radius {r}");
        match self {
            PathLoss::BoundedPowerLaw { alpha } => {
                if r <= 1.0 {
                    1.0
                } else {
                    r.powf(-alpha)
                }
            }
            PathLoss::Tabulated(t) => t.value(r),
        }
    }

    /// `ℓ(0)`.
    pub fn at_origin(&self) -> f64 {
        self.value(0.0)
    }

    /// `∫ₜ^∞ ℓ(r) dr`.
    pub fn tail_integral(&self, t: f64) -> Result<f64> {
        self.integral(t, f64::INFINITY)
    }

    /// `∫ₜ^∞ r ℓ(r) dr`.
    pub fn weighted_tail_integral(&self, t: f64) -> Result<f64> {
        self.weighted_integral(t, f64::INFINITY)
    }

    /// `∫_lo^hi ℓ(r) dr`; `hi` may be infinite.
    pub fn integral(&self, lo: f64, hi: f64) -> Result<f64> {
        self.moment(lo, hi, 0)
    }

    /// `∫_lo^hi r ℓ(r) dr`; `hi` may be infinite.
    pub fn weighted_integral(&self, lo: f64, hi: f64) -> Result<f64> {
        self.moment(lo, hi, 1)
    }

    fn moment(&self, lo: f64, hi: f64, power: i32) -> Result<f64> {
        ensure(lo >= 0.0, || format!("lower limit must be non-negative, got {lo}"))?;
        ensure(hi >= lo, || format!("upper limit {hi} below lower limit {lo}"))?;
        if lo == hi {
            return Ok(0.0);
        }
        match self {
            PathLoss::BoundedPowerLaw { alpha } => {
                let alpha = *alpha;
                let p = f64::from(power);
                if hi.is_infinite() && alpha <= p + 1.0 {
                    let what = if power == 0 { "∫ℓ" } else { "∫rℓ" };
                    return Err(Error::Divergent(format!(
                        "{what} to infinity needs alpha > {}, got {alpha}",
                        p + 1.0
                    )));
                }
                let mut acc = 0.0;
                let flat_hi = hi.min(1.0);
                if lo < flat_hi {
                    acc += (flat_hi.powi(power + 1) - lo.powi(power + 1)) / (p + 1.0);
                }
                let steep_lo = lo.max(1.0);
                if steep_lo < hi {
                    acc += power_moment(steep_lo, hi, p - alpha);
                }
                Ok(acc)
            }
            PathLoss::Tabulated(table) => table.moment(lo, hi, power),
        }
    }

    /// Radii where `ℓ′` is discontinuous; quadrature splits there.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            PathLoss::BoundedPowerLaw { .. } => vec![1.0],
            PathLoss::Tabulated(t) => t.radii[1..].to_vec(),
        }
    }

    /// Decay exponent of the far tail.
    pub fn tail_exponent(&self) -> f64 {
        match self {
            PathLoss::BoundedPowerLaw { alpha } => *alpha,
            PathLoss::Tabulated(t) => t.tail_exponent,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eval_power_law() {
        let m = PathLoss::power_law(4.0).unwrap();
        assert_eq!(m.eval(0.0).unwrap(), 1.0);
        assert_eq!(m.eval(2.0).unwrap(), 0.0625);
        assert_eq!(PathLoss::power_law(2.5).unwrap().eval(1.0).unwrap(), 1.0);
        assert!(matches!(m.eval(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn tail_integral_values() {
        let m = PathLoss::power_law(4.0).unwrap();
        assert_relative_eq!(m.tail_integral(0.0).unwrap(), 4.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(m.tail_integral(2.0).unwrap(), 1.0 / 24.0, max_relative = 1e-15);
        assert_relative_eq!(m.tail_integral(0.5).unwrap(), 0.833_333_333_333_333, max_relative = 1e-12);
        assert!(matches!(
            PathLoss::power_law(1.0).unwrap().tail_integral(0.0),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn weighted_tail_integral_values() {
        let m = PathLoss::power_law(4.0).unwrap();
        assert_relative_eq!(m.weighted_tail_integral(0.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(m.weighted_tail_integral(2.0).unwrap(), 0.125, max_relative = 1e-15);
        let m3 = PathLoss::power_law(3.0).unwrap();
        assert_relative_eq!(m3.weighted_tail_integral(1.5).unwrap(), 2.0 / 3.0, max_relative = 1e-15);
        assert!(matches!(
            PathLoss::power_law(2.0).unwrap().weighted_tail_integral(0.0),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn finite_range_integrals() {
        let m = PathLoss::power_law(2.0).unwrap();
        assert_relative_eq!(m.integral(0.0, 2.0).unwrap(), 1.5, max_relative = 1e-15);
        assert_relative_eq!(m.weighted_integral(0.5, 2.0).unwrap(), 0.375 + 2f64.ln(), max_relative = 1e-15);
        assert_eq!(m.integral(3.0, 3.0).unwrap(), 0.0);
        assert!(matches!(m.integral(3.0, 2.0), Err(Error::Domain(_))));
        let m4 = PathLoss::power_law(4.0).unwrap();
        let whole = m4.tail_integral(0.3).unwrap();
        let split = m4.integral(0.3, 2.0).unwrap() + m4.tail_integral(2.0).unwrap();
        assert_relative_eq!(whole, split, max_relative = 1e-15);
    }

    #[test]
    fn table_validation() {
        assert!(Table::new(vec![0.0, 1.0], vec![1.0, 0.5], 3.0).is_ok());
        assert!(Table::new(vec![0.5, 1.0], vec![1.0, 0.5], 3.0).is_err());
        assert!(Table::new(vec![0.0, 1.0, 1.0], vec![1.0, 0.5, 0.4], 3.0).is_err());
        assert!(Table::new(vec![0.0, 1.0], vec![0.5, 1.0], 3.0).is_err());
        assert!(Table::new(vec![0.0, 1.0], vec![1.0], 3.0).is_err());
        assert!(Table::new(vec![0.0, 1.0], vec![1.0, 0.5], 0.0).is_err());
    }

    #[test]
    fn table_matching_power_law_reproduces_closed_forms() {
        // Flat to r=1 then r^-3 tail: the same function as the bounded power law.
        let table = Table::new(vec![0.0, 1.0], vec![1.0, 1.0], 3.0).unwrap();
        let tab = PathLoss::Tabulated(table);
        let pl = PathLoss::power_law(3.0).unwrap();
        for t in [0.0, 0.3, 1.0, 2.5, 7.0] {
            assert_relative_eq!(tab.eval(t).unwrap(), pl.eval(t).unwrap(), max_relative = 1e-14);
            assert_relative_eq!(
                tab.tail_integral(t).unwrap(),
                pl.tail_integral(t).unwrap(),
                max_relative = 1e-14
            );
            assert_relative_eq!(
                tab.weighted_tail_integral(t).unwrap(),
                pl.weighted_tail_integral(t).unwrap(),
                max_relative = 1e-14
            );
        }
    }

    #[test]
    fn table_interpolates_linearly() {
        let table = Table::new(vec![0.0, 2.0, 4.0], vec![1.0, 0.5, 0.1], 4.0).unwrap();
        let m = PathLoss::Tabulated(table);
        assert_relative_eq!(m.value(1.0), 0.75);
        assert_relative_eq!(m.value(3.0), 0.3);
        assert_relative_eq!(m.value(8.0), 0.1 / 16.0);
        // ∫₀⁴ trapezoids + tail 0.1·4/3.
        assert_relative_eq!(m.tail_integral(0.0).unwrap(), 1.5 + 0.6 + 0.4 / 3.0, max_relative = 1e-14);
        assert!(matches!(
            PathLoss::Tabulated(Table::new(vec![0.0, 1.0], vec![1.0, 0.5], 1.5).unwrap())
                .weighted_tail_integral(0.0),
            Err(Error::Divergent(_))
        ));
    }
}
