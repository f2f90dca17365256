//! Test-only oracles, independent of the library's integration code.
#![allow(dead_code)]

/// Recursive adaptive Simpson on a finite interval.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `∫_a^∞ f` through `r = a·eˢ`, `s ∈ [0, 400]`, split into unit pieces.
/// Integrands decaying at least like `r^(-1.5)` lose less than `e^-200`.
pub fn simpson_to_infinity<F: Fn(f64) -> f64>(f: &F, a: f64, tol: f64) -> f64 {
    assert!(a > 0.0);
    let g = |s: f64| {
        let r = a * s.exp();
        f(r) * r
    };
    (0..400).map(|k| simpson(&g, k as f64, k as f64 + 1.0, tol / 400.0)).sum()
}

/// `ℓ(r) = min{1, r^-α}` written out independently of the library.
pub fn bounded_power_law(alpha: f64) -> impl Fn(f64) -> f64 {
    move |r: f64| if r <= 1.0 { 1.0 } else { r.powf(-alpha) }
}

/// `∫_t^∞ r^power ℓ(r) dr` for the bounded power law by quadrature, split at 1.
pub fn power_law_moment_oracle(alpha: f64, t: f64, power: i32) -> f64 {
    let l = bounded_power_law(alpha);
    let f = |r: f64| r.powi(power) * l(r);
    let mut acc = 0.0;
    if t < 1.0 {
        acc += simpson(&f, t, 1.0, 1e-14);
    }
    acc + simpson_to_infinity(&f, t.max(1.0), 1e-14)
}

/// The closed form of the exclusion-aware bound for the bounded power law,
/// valid when `t ≥ 1`.
pub fn example_closed_form(alpha: f64, h: f64, t: f64) -> f64 {
    use std::f64::consts::PI;
    let s12 = 12f64.sqrt();
    2.0 * PI / s12 * t.powf(1.0 - alpha) / h * alpha / (alpha - 1.0)
        + PI / s12 * t.powf(2.0 - alpha) / (h * h) * alpha / (alpha - 2.0)
}

/// `4/√3`, the cell edge of the hexagonal reference network.
pub const A: f64 = 2.309_401_076_758_503;

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
