//! Interference bounds for hardcore-regulated point processes.
//!
//! A process whose points are pairwise at least `2H` apart holds at most
//! `1 + ρ_H R + ν_H R²` points in any open ball of radius `R`, with
//! `ρ_H = 2π/(√12 H)` and `ν_H = π/(√12 H²)` (hexagonal packing density).
//! Summing a non-increasing `ℓ` against that count gives a shot-noise bound.
//!
//! For a user at the origin served by its nearest point `x₀` at distance `d`,
//! no interferer lies in `b(o, d) ∪ b(x₀, 2H)`, which contains the centered
//! ball of radius `t = max(d, 2H − d)`. Starting the count at `t` and dropping
//! the serving point (`σ = 0`) yields [`interference_bound`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::pathloss::PathLoss;
use crate::quadrature::{self, ABS_TOL, REL_TOL};

/// `√12`.
pub(crate) const SQRT_12: f64 = 3.464_101_615_137_754_4;

/// Almost-sure ball-count envelope `G(R) = σ + ρR + νR²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallRegulation {
    pub sigma: f64,
    pub rho: f64,
    pub nu: f64,
}

impl BallRegulation {
    pub fn new(sigma: f64, rho: f64, nu: f64) -> Result<Self> {
        ensure(sigma >= 0.0 && rho >= 0.0 && nu > 0.0, || {
            format!("need sigma >= 0, rho >= 0, nu > 0; got ({sigma}, {rho}, {nu})")
        })?;
        Ok(BallRegulation { sigma, rho, nu })
    }

    /// `G(R)`.
    pub fn envelope(&self, r: f64) -> f64 {
        self.sigma + self.rho * r + self.nu * r * r
    }

    /// `G′(R)`.
    pub fn slope(&self, r: f64) -> f64 {
        self.rho + 2.0 * self.nu * r
    }

    pub fn with_sigma(self, sigma: f64) -> Self {
        BallRegulation { sigma, ..self }
    }
}

/// Exclusion geometry of a user served at distance `d` in an `H`-hardcore process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExclusionGeometry {
    pub d: f64,
    pub h: f64,
    /// Radius of the largest interferer-free ball centered at the user.
    pub t: f64,
}

impl ExclusionGeometry {
    pub fn new(d: f64, h: f64) -> Result<Self> {
        ensure(d >= 0.0 && d.is_finite(), || format!("serving distance must be non-negative, got {d}"))?;
        check_hardcore(h)?;
        Ok(ExclusionGeometry { d, h, t: exclusion_radius(d, h) })
    }
}

fn check_hardcore(h: f64) -> Result<()> {
    ensure(h > 0.0 && !h.is_nan(), || format!("hardcore distance must be positive, got {h}"))
}

/// `(1, 2π/(√12 H), π/(√12 H²))`.
pub fn hardcore_regulation_constants(h: f64) -> Result<BallRegulation> {
    check_hardcore(h)?;
    Ok(BallRegulation {
        sigma: 1.0,
        rho: 2.0 * PI / (SQRT_12 * h),
        nu: PI / (SQRT_12 * h * h),
    })
}

/// `t = max(d, 2H − d)`.
pub fn exclusion_radius(d: f64, h: f64) -> f64 {
    d.max(2.0 * h - d)
}

/// Shot-noise bound over the ball `b(o, R)`:
/// `ℓ(0) + ρ_H ∫₀^R ℓ + 2ν_H ∫₀^R rℓ`. `R` may be `f64::INFINITY`.
pub fn shot_noise_bound_lemma1(model: &PathLoss, h: f64, radius: f64) -> Result<f64> {
    ensure(radius >= 0.0, || format!("radius must be non-negative, got {radius}"))?;
    let reg = hardcore_regulation_constants(h)?;
    let l0 = model.at_origin();
    if radius == 0.0 {
        return Ok(l0);
    }
    let first = model.integral(0.0, radius)?;
    let second = model.weighted_integral(0.0, radius)?;
    Ok(l0 + reg.rho * first + 2.0 * reg.nu * second)
}

/// General conditional bound `−∫ₜ^R G ℓ′ dr + ℓ(R) G(R)` for any envelope `G`.
///
/// Evaluated as `ℓ(t)G(t) + ∫ₜ^R ℓ(r) G′(r) dr` by adaptive quadrature split at
/// the model's breakpoints. `R = ∞` maps the last piece onto a finite range.
pub fn conditional_bound_general(model: &PathLoss, g: &BallRegulation, t: f64, radius: f64) -> Result<f64> {
    ensure(t >= 0.0 && t.is_finite(), || format!("t must be finite and non-negative, got {t}"))?;
    if radius.is_nan() || radius < t {
        return Err(Error::Domain(format!("need R >= t, got R={radius}, t={t}")));
    }
    if radius.is_infinite() {
        let tail = model.tail_exponent();
        let need = if g.nu > 0.0 { 2.0 } else if g.rho > 0.0 { 1.0 } else { 0.0 };
        if tail <= need {
            return Err(Error::Divergent(format!(
                "∫ℓG′ to infinity needs tail exponent > {need}, got {tail}"
            )));
        }
    }

    let head = model.value(t) * g.envelope(t);
    let integrand = |r: f64| model.value(r) * g.slope(r);

    let mut cuts = vec![t];
    cuts.extend(model.breakpoints().into_iter().filter(|&b| b > t && b < radius));
    let mut acc = 0.0;
    for w in cuts.windows(2) {
        acc += quadrature::integrate(integrand, w[0], w[1], ABS_TOL, REL_TOL)?.value;
    }
    let last = *cuts.last().expect("non-empty");
    acc += if radius.is_infinite() {
        quadrature::integrate_to_infinity(integrand, last, ABS_TOL, REL_TOL)?.value
    } else {
        quadrature::integrate(integrand, last, radius, ABS_TOL, REL_TOL)?.value
    };
    Ok(head + acc)
}

/// Upper bound on `Σ_{x ≠ x₀} ℓ(‖x‖)` for an `H`-hardcore process with the
/// serving point at distance `d` (interferers start at `t = max(d, 2H − d)`).
pub fn interference_bound(model: &PathLoss, h: f64, d: f64) -> Result<f64> {
    let geo = ExclusionGeometry::new(d, h)?;
    interference_bound_at(model, h, geo.t)
}

/// [`interference_bound`] written directly in terms of the exclusion radius `t`:
///
/// `(2π/√12) ∫ₜ^∞ ℓ(r)(1/H + r/H²) dr + (π ℓ(t) t/√12)(2/H + t/H²)`.
pub fn interference_bound_at(model: &PathLoss, h: f64, t: f64) -> Result<f64> {
    check_hardcore(h)?;
    ensure(t >= 0.0, || format!("t must be non-negative, got {t}"))?;
    let integral = model.tail_integral(t)? / h + model.weighted_tail_integral(t)? / (h * h);
    let boundary = PI * model.value(t) * t / SQRT_12 * (2.0 / h + t / (h * h));
    Ok(2.0 * PI / SQRT_12 * integral + boundary)
}

/// The bound that ignores the exclusion region:
/// `ℓ(0) + ρ_H ∫₀^∞ ℓ + 2ν_H ∫₀^∞ rℓ − ℓ(t)`.
pub fn legacy_bound(model: &PathLoss, h: f64, d: f64) -> Result<f64> {
    let geo = ExclusionGeometry::new(d, h)?;
    legacy_bound_at(model, h, geo.t)
}

/// [`legacy_bound`] in terms of `t`.
pub fn legacy_bound_at(model: &PathLoss, h: f64, t: f64) -> Result<f64> {
    ensure(t >= 0.0, || format!("t must be non-negative, got {t}"))?;
    Ok(shot_noise_bound_lemma1(model, h, f64::INFINITY)? - model.value(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pl(alpha: f64) -> PathLoss {
        PathLoss::power_law(alpha).unwrap()
    }

    #[test]
    fn regulation_constants() {
        let r1 = hardcore_regulation_constants(1.0).unwrap();
        assert_eq!(r1.sigma, 1.0);
        assert_relative_eq!(r1.rho, 1.813_799, max_relative = 1e-6);
        assert_relative_eq!(r1.nu, 0.906_900, max_relative = 1e-6);
        let r2 = hardcore_regulation_constants(2.0).unwrap();
        assert_relative_eq!(r2.rho, 0.906_900, max_relative = 1e-6);
        assert_relative_eq!(r2.nu, 0.226_725, max_relative = 1e-5);
        assert_relative_eq!(r2.rho, r1.rho / 2.0, max_relative = 1e-15);
        assert_relative_eq!(r2.nu, r1.nu / 4.0, max_relative = 1e-15);
        assert!(matches!(hardcore_regulation_constants(0.0), Err(Error::Domain(_))));
        assert!(matches!(hardcore_regulation_constants(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn exclusion_radius_cases() {
        assert_eq!(exclusion_radius(1.0, 1.0), 1.0);
        let d = 4.0 / 3f64.sqrt();
        assert_eq!(exclusion_radius(d, 2.0), d);
        assert_eq!(exclusion_radius(1.0, 2.0), 3.0);
        assert_eq!(ExclusionGeometry::new(1.0, 2.0).unwrap().t, 3.0);
    }

    #[test]
    fn lemma1_values() {
        assert_relative_eq!(
            shot_noise_bound_lemma1(&pl(4.0), 1.0, f64::INFINITY).unwrap(),
            5.232_198,
            max_relative = 1e-6
        );
        assert_relative_eq!(
            shot_noise_bound_lemma1(&pl(4.0), 2.0, f64::INFINITY).unwrap(),
            2.662_649,
            max_relative = 1e-6
        );
        assert_eq!(shot_noise_bound_lemma1(&pl(4.0), 1.0, 0.0).unwrap(), 1.0);
        assert!(matches!(
            shot_noise_bound_lemma1(&pl(2.0), 1.0, f64::INFINITY),
            Err(Error::Divergent(_))
        ));
        // Finite radius only needs the integrals over [0, R].
        let m = pl(2.0);
        let r = hardcore_regulation_constants(1.0).unwrap();
        let expected = 1.0 + r.rho * (1.0 + 0.5) + 2.0 * r.nu * (0.5 + 2f64.ln());
        assert_relative_eq!(shot_noise_bound_lemma1(&m, 1.0, 2.0).unwrap(), expected, max_relative = 1e-14);
    }

    #[test]
    fn conditional_bound_edge_cases() {
        let g = hardcore_regulation_constants(1.0).unwrap().with_sigma(0.0);
        let m = pl(4.0);
        // R = t: empty integral.
        let v = conditional_bound_general(&m, &g, 2.0, 2.0).unwrap();
        assert_relative_eq!(v, m.value(2.0) * g.envelope(2.0), max_relative = 1e-15);
        // ℓ ≡ 1 on [0.2, 0.9].
        let v = conditional_bound_general(&m, &g, 0.2, 0.9).unwrap();
        assert_relative_eq!(v, g.envelope(0.9), max_relative = 1e-12);
        assert!(matches!(conditional_bound_general(&m, &g, 2.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(
            conditional_bound_general(&pl(2.0), &g, 1.0, f64::INFINITY),
            Err(Error::Divergent(_))
        ));
        let v = conditional_bound_general(&m, &g, 1.0, f64::INFINITY).unwrap();
        assert_relative_eq!(v, 4.232_198, max_relative = 1e-6);
    }

    #[test]
    fn interference_bound_values() {
        let m = pl(4.0);
        let a = 4.0 / 3f64.sqrt();
        assert_relative_eq!(interference_bound(&m, 1.0, 1.0).unwrap(), 4.232_198, max_relative = 1e-6);
        assert_relative_eq!(interference_bound(&m, 2.0, a).unwrap(), 0.183_197, max_relative = 1e-5);
        assert_relative_eq!(interference_bound(&m, 4.0, a).unwrap(), 0.006_781_6, max_relative = 1e-4);
        assert!(matches!(interference_bound(&pl(2.0), 1.0, 1.0), Err(Error::Divergent(_))));
        assert!(matches!(interference_bound(&m, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(interference_bound(&m, 1.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn legacy_bound_values() {
        let a = 4.0 / 3f64.sqrt();
        assert_relative_eq!(legacy_bound(&pl(4.0), 1.0, 1.0).unwrap(), 4.232_198, max_relative = 1e-6);
        assert_relative_eq!(legacy_bound(&pl(4.0), 2.0, a).unwrap(), 2.627_493, max_relative = 1e-6);
        assert_relative_eq!(legacy_bound_at(&pl(3.0), 1.0, 2.0).unwrap(), 6.316_397, max_relative = 1e-6);
    }
}
