//! Coefficient machinery for λ-pseudo bi-starlike functions subordinate to `p̃`.
//!
//! For `f = z + a₂z² + a₃z³ + …` and its inverse `g`, matching the second
//! coefficients of `z(f′)^λ/f = p̃(u(z))` and `w(g′)^λ/g = p̃(v(w))` gives
//!
//! ```text
//! 2·D(λ)·a₂²          = ½(c₂ + d₂)τ²
//! 2(3λ−1)(a₃ − a₂²)   = ½(c₂ − d₂)τ
//! D(λ) = (2λ−1)² − (10λ²−11λ+3)τ
//! ```
//!
//! where `c₂`, `d₂` are second coefficients of Carathéodory functions. The
//! bounds below follow from `|c₂|, |d₂| ≤ 2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{NormalizedFn, TruncSeries};
use crate::shell::TAU;

/// Pseudo-starlikeness order, validated `λ ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Lambda(f64);

impl Lambda {
    pub fn new(lambda: f64) -> Result<Self> {
        // NaN fails this comparison too.
        if !(lambda >= 1.0) || !lambda.is_finite() {
            return Err(Error::LambdaOutOfRange(lambda));
        }
        Ok(Self(lambda))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassParams {
    pub lambda: Lambda,
    /// Fekete–Szegő weight.
    pub mu: f64,
}

impl ClassParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidArgument(format!("μ must be finite, got {mu}")));
        }
        Ok(Self {
            lambda: Lambda::new(lambda)?,
            mu,
        })
    }
}

/// `D(λ) = (2λ−1)² − (10λ²−11λ+3)τ`; positive for `λ ≥ 1` since `τ < 0`.
pub fn denom(lambda: Lambda) -> f64 {
    let l = lambda.0;
    (2.0 * l - 1.0).powi(2) - (10.0 * l * l - 11.0 * l + 3.0) * TAU
}

/// `z(f′)^λ / f` truncated at `order`.
pub fn lhs_series(f: &NormalizedFn, lambda: Lambda, order: usize) -> Result<TruncSeries> {
    let f = f.series().with_order(order + 1)?;
    let f = NormalizedFn::new(f)?;
    let fprime = f.series().deriv().pow_real(lambda.0)?;
    fprime.div(&f.quotient_by_z().with_order(order)?)
}

/// `w(g′)^λ / g` for `g = f⁻¹`.
pub fn ghs_series(f: &NormalizedFn, lambda: Lambda, order: usize) -> Result<TruncSeries> {
    let f = NormalizedFn::new(f.series().with_order(order + 1)?)?;
    lhs_series(&f.revert(), lambda, order)
}

/// Predicted first two coefficients of `z(f′)^λ/f`.
pub fn lhs_closed_form(a2: Complex64, a3: Complex64, lambda: Lambda) -> [Complex64; 2] {
    let l = lambda.0;
    [
        a2 * (2.0 * l - 1.0),
        a3 * (3.0 * l - 1.0) + a2 * a2 * (2.0 * l * l - 4.0 * l + 1.0),
    ]
}

/// Predicted first two coefficients of `w(g′)^λ/g`.
pub fn ghs_closed_form(a2: Complex64, a3: Complex64, lambda: Lambda) -> [Complex64; 2] {
    let l = lambda.0;
    [
        -a2 * (2.0 * l - 1.0),
        a2 * a2 * (2.0 * l * l + 2.0 * l - 1.0) - a3 * (3.0 * l - 1.0),
    ]
}

/// `a₂²` and `a₃` determined by an admissible pair `(c₂, d₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoeffSolution {
    pub a2_sq: Complex64,
    pub a3: Complex64,
    pub c2: Complex64,
    pub d2: Complex64,
    pub lambda: Lambda,
}

impl CoeffSolution {
    /// `|a₂| = √|a₂²|`; the sign of `a₂` itself is never chosen.
    pub fn a2_abs(&self) -> f64 {
        self.a2_sq.norm().sqrt()
    }
}

pub fn solve_coeffs(c2: Complex64, d2: Complex64, lambda: Lambda) -> CoeffSolution {
    let a2_sq = (c2 + d2) * (TAU * TAU) / (4.0 * denom(lambda));
    let a3 = a2_sq + (c2 - d2) * TAU / (4.0 * (3.0 * lambda.0 - 1.0));
    CoeffSolution {
        a2_sq,
        a3,
        c2,
        d2,
        lambda,
    }
}

/// `|a₂| ≤ |τ| / √D(λ)`.
pub fn bound_a2(lambda: Lambda) -> f64 {
    TAU.abs() / denom(lambda).sqrt()
}

/// The weaker `|a₂| ≤ |τ| / (2λ−1)` from the first coefficients alone.
pub fn bound_a2_simple(lambda: Lambda) -> f64 {
    TAU.abs() / (2.0 * lambda.0 - 1.0)
}

/// `|a₃| ≤ |τ|[(2λ−1)² − 2(5λ²−4λ+1)τ] / ((3λ−1)·D(λ))`.
pub fn bound_a3(lambda: Lambda) -> f64 {
    let l = lambda.0;
    let num = TAU.abs() * ((2.0 * l - 1.0).powi(2) - 2.0 * (5.0 * l * l - 4.0 * l + 1.0) * TAU);
    num / ((3.0 * l - 1.0) * denom(lambda))
}

/// `h(μ) = (1−μ)τ² / (4·D(λ))`.
pub fn fs_h(mu: f64, lambda: Lambda) -> f64 {
    (1.0 - mu) * TAU * TAU / (4.0 * denom(lambda))
}

/// `T = |τ| / (4(3λ−1))`, the branch threshold of the Fekete–Szegő bound.
pub fn fs_threshold(lambda: Lambda) -> f64 {
    TAU.abs() / (4.0 * (3.0 * lambda.0 - 1.0))
}

/// Which branch of the piecewise Fekete–Szegő bound applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FsBranch {
    /// `|h(μ)| ≤ T`: the bound is `T`.
    Threshold,
    /// `|h(μ)| ≥ T`: the bound is `4|h(μ)|`.
    Linear,
}

pub fn fs_branch(mu: f64, lambda: Lambda) -> FsBranch {
    if fs_h(mu, lambda).abs() <= fs_threshold(lambda) {
        FsBranch::Threshold
    } else {
        FsBranch::Linear
    }
}

/// The piecewise bound on `|a₃ − μa₂²|` exactly as stated for the class:
/// `T` when `|h(μ)| ≤ T`, otherwise `4|h(μ)|`.
///
/// This is not `max(T, 4|h|)`: for `T/4 < |h| ≤ T` the stated bound is `T`.
/// It is also not a true bound in the first branch; see [`fs_envelope`].
pub fn fs_bound(mu: f64, lambda: Lambda) -> f64 {
    match fs_branch(mu, lambda) {
        FsBranch::Threshold => fs_threshold(lambda),
        FsBranch::Linear => 4.0 * fs_h(mu, lambda).abs(),
    }
}

/// Triangle-inequality envelope `2|h+T| + 2|h−T|` of the decomposition
/// `a₃ − μa₂² = (h+T′)c₂ + (h−T′)d₂` over `|c₂|, |d₂| ≤ 2`. It equals
/// `4·max(|h|, T)` and is attained at `(c₂, d₂) = (±2, ±2)`.
pub fn fs_envelope(mu: f64, lambda: Lambda) -> f64 {
    let h = fs_h(mu, lambda);
    let t = fs_threshold(lambda);
    2.0 * (h + t).abs() + 2.0 * (h - t).abs()
}

/// `a₃ − μa₂²`.
pub fn fs_functional(sol: &CoeffSolution, mu: f64) -> Complex64 {
    sol.a3 - sol.a2_sq * mu
}

/// `(h + T′)c₂ + (h − T′)d₂` with the signed `T′ = τ/(4(3λ−1))`; equal to
/// [`fs_functional`].
pub fn fs_decomposition_signed(c2: Complex64, d2: Complex64, mu: f64, lambda: Lambda) -> Complex64 {
    let h = fs_h(mu, lambda);
    let t = TAU / (4.0 * (3.0 * lambda.0 - 1.0));
    c2 * (h + t) + d2 * (h - t)
}

/// `(h + T)c₂ + (h − T)d₂` with `T = |τ|/(4(3λ−1))` as printed. Since `τ < 0`
/// this is the signed decomposition with `c₂` and `d₂` exchanged, so only its
/// modulus over the admissible square carries over.
pub fn fs_decomposition_abs(c2: Complex64, d2: Complex64, mu: f64, lambda: Lambda) -> Complex64 {
    let h = fs_h(mu, lambda);
    let t = fs_threshold(lambda);
    c2 * (h + t) + d2 * (h - t)
}

/// The closed-form bounds for one `(λ, μ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSet {
    pub lambda: f64,
    pub mu: f64,
    pub a2_bound: f64,
    pub a2_simple_bound: f64,
    pub a3_bound: f64,
    pub fs_bound: f64,
    pub fs_h: f64,
    pub fs_threshold: f64,
}

impl BoundSet {
    pub fn new(params: ClassParams) -> Self {
        let ClassParams { lambda, mu } = params;
        Self {
            lambda: lambda.0,
            mu,
            a2_bound: bound_a2(lambda),
            a2_simple_bound: bound_a2_simple(lambda),
            a3_bound: bound_a3(lambda),
            fs_bound: fs_bound(mu, lambda),
            fs_h: fs_h(mu, lambda),
            fs_threshold: fs_threshold(lambda),
        }
    }
}
