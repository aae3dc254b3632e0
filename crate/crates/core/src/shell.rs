//! The shell-like function `p̃(z) = (1 + τ²z²) / (1 − τz − τ²z²)` and the
//! Fibonacci structure of its Taylor coefficients.
//!
//! With `τ = (1 − √5)/2` one has `τ² = 1 + τ`, hence `τⁿ = uₙτ + uₙ₋₁` for the
//! Fibonacci numbers `uₙ`, and `p̃(z) = 1 + Σ (uₙ₋₁ + uₙ₊₁) τⁿ zⁿ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{TruncSeries, MAX_ORDER};

/// `(1 − √5) / 2`.
pub const TAU: f64 = -0.618_033_988_749_894_9;
/// `τ − TAU`, the rounding residue of [`TAU`].
const TAU_LO: f64 = 5.432_115_203_682_506e-17;
pub const SQRT_5: f64 = 2.236_067_977_499_79;
/// Lower bound of `Re p̃` on the unit disk, `√5 / 10`.
pub const RE_FLOOR: f64 = 0.223_606_797_749_979;
/// Minimum denominator magnitude accepted by [`ptilde_eval`].
pub const TOL_SING: f64 = 1e-8;
/// Largest Fibonacci index held exactly (`u₁₈₀ < 2¹²⁸`).
pub const FIB_MAX: usize = 180;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GoldenConstants {
    pub tau: f64,
    pub phi: f64,
    /// Radius `(3 − √5)/2` below which `p̃(re^{it})` traces a loop-free curve.
    pub r0: f64,
}

impl GoldenConstants {
    pub fn new() -> Self {
        let s5 = 5f64.sqrt();
        let tau = (1.0 - s5) / 2.0;
        Self {
            tau,
            phi: 1.0 - tau,
            r0: (3.0 - s5) / 2.0,
        }
    }
}

impl Default for GoldenConstants {
    fn default() -> Self {
        Self::new()
    }
}

/// Exact Fibonacci numbers `u₀..=uₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FibSequence {
    values: Vec<u128>,
}

impl FibSequence {
    pub fn up_to(n: usize) -> Result<Self> {
        if n > FIB_MAX {
            return Err(Error::FibOverflow { n, max: FIB_MAX });
        }
        let mut values = Vec::with_capacity(n + 2);
        values.push(0u128);
        values.push(1u128);
        while values.len() <= n {
            let k = values.len();
            values.push(values[k - 2] + values[k - 1]);
        }
        values.truncate(n + 1);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[u128] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<u128> {
        self.values.get(n).copied()
    }
}

pub fn fib(n: usize) -> Result<u128> {
    Ok(FibSequence::up_to(n)?.values[n])
}

/// Binet form `((1 − τ)ⁿ − τⁿ) / √5`.
pub fn fib_closed_form(n: usize) -> f64 {
    let n = n as i32;
    ((1.0 - TAU).powi(n) - TAU.powi(n)) / SQRT_5
}

/// `|τⁿ − (uₙτ + uₙ₋₁)|` for `1 ≤ n ≤ 70`.
///
/// The right-hand side cancels terms of size `uₙ`, so it is evaluated with a
/// fused multiply-add against a two-word `τ`.
pub fn tau_power_identity(n: usize) -> Result<f64> {
    if !(1..=70).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "τ-power identity is defined for 1 ≤ n ≤ 70, got {n}"
        )));
    }
    let fibs = FibSequence::up_to(n)?;
    let un = fibs.values[n] as f64;
    let un1 = fibs.values[n - 1] as f64;
    let rhs = un.mul_add(TAU, un1) + un * TAU_LO;
    Ok((TAU.powi(n as i32) - rhs).abs())
}

/// `p̃ₙ = (uₙ₋₁ + uₙ₊₁) τⁿ`, with `p̃₀ = 1`.
pub fn ptilde_coeff(n: usize) -> Result<f64> {
    if n == 0 {
        return Ok(1.0);
    }
    let fibs = FibSequence::up_to(n + 1)?;
    let lucas = fibs.values[n - 1] + fibs.values[n + 1];
    Ok(lucas as f64 * TAU.powi(n as i32))
}

/// The Taylor polynomial of `p̃` from the Fibonacci coefficient law.
pub fn ptilde_series(order: usize) -> Result<TruncSeries> {
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order,
            max: MAX_ORDER,
        });
    }
    let coeffs = (0..=order)
        .map(ptilde_coeff)
        .collect::<Result<Vec<_>>>()?;
    TruncSeries::from_real(&coeffs, order)
}

/// `p̃` as the quotient series `(1 + τ²z²) / (1 − τz − τ²z²)`.
pub fn ptilde_quotient_series(order: usize) -> Result<TruncSeries> {
    let t2 = TAU * TAU;
    let num = TruncSeries::from_real(&[1.0, 0.0, t2], order)?;
    let den = TruncSeries::from_real(&[1.0, -TAU, -t2], order)?;
    num.div(&den)
}

/// Rational evaluation of `p̃(z)`.
pub fn ptilde_eval(z: Complex64) -> Result<Complex64> {
    let tz = z * TAU;
    let den = 1.0 - tz - tz * tz;
    if den.norm() <= TOL_SING {
        return Err(Error::PoleProximity {
            re: z.re,
            im: z.im,
            magnitude: den.norm(),
        });
    }
    Ok((1.0 + tz * tz) / den)
}

/// `|(10x − √5)y² − (√5 − 2x)(√5x − 1)²|`, zero on the image of the unit circle.
pub fn curve_residual(x: f64, y: f64) -> f64 {
    let lhs = (10.0 * x - SQRT_5) * y * y;
    let rhs = (SQRT_5 - 2.0 * x) * (SQRT_5 * x - 1.0).powi(2);
    (lhs - rhs).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub x: f64,
    pub y: f64,
}

/// Samples `p̃(re^{it})` at `count` uniform angles in `[0, 2π)`.
///
/// On the unit circle the pole at `z = −1` is avoided by dropping every angle
/// with `|t − π| < exclusion`. `r = 0` yields the single point `p̃(0) = 1`.
pub fn curve_samples(r: f64, count: usize, exclusion: f64) -> Result<Vec<CurvePoint>> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!(
            "curve radius must satisfy 0 < r ≤ 1, got {r}"
        )));
    }
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    if r == 0.0 {
        return Ok(vec![CurvePoint {
            t: 0.0,
            x: 1.0,
            y: 0.0,
        }]);
    }
    let on_circle = r == 1.0;
    if on_circle && exclusion < 1e-3 {
        return Err(Error::InvalidArgument(format!(
            "exclusion window around t = π must be at least 1e-3 on the unit circle, got {exclusion}"
        )));
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let t = 2.0 * PI * k as f64 / count as f64;
        if on_circle && (t - PI).abs() < exclusion {
            continue;
        }
        let p = ptilde_eval(Complex64::from_polar(r, t))?;
        out.push(CurvePoint { t, x: p.re, y: p.im });
    }
    Ok(out)
}

/// Minimum of `Re p̃` over the polar grid `r = r_max·i/radial` (`i = 0..=radial`),
/// `t = 2πj/angular` (`j < angular`).
pub fn min_re_on_grid(r_max: f64, radial: usize, angular: usize) -> Result<f64> {
    if !(0.0..1.0).contains(&r_max) {
        return Err(Error::InvalidArgument(format!(
            "grid radius must satisfy 0 ≤ r_max < 1, got {r_max}"
        )));
    }
    if angular == 0 {
        return Err(Error::InvalidArgument("angular resolution must be positive".into()));
    }
    let mut min = f64::INFINITY;
    for i in 0..=radial {
        let r = if radial == 0 {
            0.0
        } else {
            r_max * i as f64 / radial as f64
        };
        for j in 0..angular {
            let t = 2.0 * PI * j as f64 / angular as f64;
            let p = ptilde_eval(Complex64::from_polar(r, t))?;
            min = min.min(p.re);
            if r == 0.0 {
                break;
            }
        }
    }
    Ok(min)
}
