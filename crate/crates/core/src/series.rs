//! Truncated complex power series.
//!
//! A [`TruncSeries`] of order `N` stores the coefficients of `z^0..=z^N` and
//! every operation is exact modulo `z^{N+1}`: coefficient `k` of a result only
//! ever depends on input coefficients `0..=k`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance absorbed by identities that are exact in exact arithmetic.
pub const TOL_ALG: f64 = 1e-9;
/// Smallest constant-term magnitude accepted by [`TruncSeries::div`].
pub const TOL_DIV: f64 = 1e-12;
pub const DEFAULT_ORDER: usize = 16;
pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncSeries {
    coeffs: Vec<Complex64>,
}

/// `|x - y| <= tol * max(1, |x|, |y|)`.
pub fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
    (x - y).norm() <= tol * 1f64.max(x.norm()).max(y.norm())
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            order,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

impl TruncSeries {
    /// Builds a series of the given order, zero-padding or truncating `coeffs`.
    pub fn new(mut coeffs: Vec<Complex64>, order: usize) -> Result<Self> {
        check_order(order)?;
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64], order: usize) -> Result<Self> {
        Self::new(
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
            order,
        )
    }

    pub fn zero(order: usize) -> Result<Self> {
        Self::new(Vec::new(), order)
    }

    pub fn constant(c: Complex64, order: usize) -> Result<Self> {
        Self::new(vec![c], order)
    }

    pub fn one(order: usize) -> Result<Self> {
        Self::constant(Complex64::new(1.0, 0.0), order)
    }

    /// The series `z`.
    pub fn identity(order: usize) -> Result<Self> {
        Self::from_real(&[0.0, 1.0], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Re-truncates (or zero-extends) to a new order.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        Self::new(self.coeffs.clone(), order)
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let n = self.coeffs.len();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, b) in other.coeffs[..n - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Series quotient `self / divisor` by forward substitution.
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        self.same_order(divisor)?;
        let b0 = divisor.coeffs[0];
        if b0.norm() <= TOL_DIV {
            return Err(Error::DivisionBySingularSeries {
                magnitude: b0.norm(),
            });
        }
        let n = self.coeffs.len();
        let mut q: Vec<Complex64> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= divisor.coeffs[j] * q[k - j];
            }
            q.push(acc / b0);
        }
        Ok(Self { coeffs: q })
    }

    /// Term-by-term derivative. The order drops by one; a constant (order 0)
    /// differentiates to the order-0 zero series.
    pub fn deriv(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self {
                coeffs: vec![Complex64::new(0.0, 0.0)],
            };
        }
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        }
    }

    /// Divides the constant term out when it is within `TOL_ALG` of 1.
    fn unit_normalized(&self) -> Result<(Self, Complex64)> {
        let c0 = self.coeffs[0];
        if (c0 - 1.0).norm() > TOL_ALG {
            return Err(Error::PowBaseNotUnit {
                re: c0.re,
                im: c0.im,
            });
        }
        Ok((self.scale(c0.inv()), c0))
    }

    /// Principal logarithm of a series whose constant term is 1.
    pub fn log(&self) -> Result<Self> {
        let (a, c0) = self.unit_normalized()?;
        let a = &a.coeffs;
        let n = a.len();
        // a * l' = a'  =>  k l_k = k a_k - sum_{j=1}^{k-1} (k-j) a_j l_{k-j}
        let mut l = vec![Complex64::new(0.0, 0.0); n];
        l[0] = c0.ln();
        for k in 1..n {
            let mut acc = a[k] * k as f64;
            for j in 1..k {
                acc -= a[j] * l[k - j] * (k - j) as f64;
            }
            l[k] = acc / k as f64;
        }
        Ok(Self { coeffs: l })
    }

    /// Exponential of a series; the constant term contributes `exp(c0)`.
    pub fn exp(&self) -> Self {
        let c = &self.coeffs;
        let n = c.len();
        // b' = c' b  =>  k b_k = sum_{j=1}^{k} j c_j b_{k-j}
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        b[0] = Complex64::new(1.0, 0.0);
        for k in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += c[j] * b[k - j] * j as f64;
            }
            b[k] = acc / k as f64;
        }
        let scale = c[0].exp();
        Self { coeffs: b }.scale(scale)
    }

    /// `self^lambda = exp(lambda * log(self))`, principal branch anchored at a
    /// constant term of 1.
    pub fn pow_real(&self, lambda: f64) -> Result<Self> {
        Ok(self.log()?.scale(Complex64::new(lambda, 0.0)).exp())
    }

    /// `outer(inner(z))` by Horner's scheme on series.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.same_order(inner)?;
        let c0 = inner.coeffs[0];
        if c0.norm() > TOL_ALG {
            return Err(Error::ComposeNotLocal {
                magnitude: c0.norm(),
            });
        }
        let mut inner = inner.clone();
        inner.coeffs[0] = Complex64::new(0.0, 0.0);
        let order = self.order();
        let mut acc = Self::constant(self.coeffs[order], order)?;
        for k in (0..order).rev() {
            acc = acc.mul(&inner)?;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Horner evaluation of the truncated polynomial. Meant for `|z| <= 1`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Coefficient-wise comparison with relative tolerance `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.order() == other.order()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(a, b)| close(*a, *b, tol))
    }
}

/// A normalized function `f(z) = z + a2 z^2 + a3 z^3 + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedFn {
    series: TruncSeries,
}

impl NormalizedFn {
    pub fn new(series: TruncSeries) -> Result<Self> {
        if series.order() < 1
            || series.coeff(0).norm() > TOL_ALG
            || (series.coeff(1) - 1.0).norm() > TOL_ALG
        {
            return Err(Error::NotNormalized);
        }
        Ok(Self { series })
    }

    /// `z + tail[0] z^2 + tail[1] z^3 + ...` truncated at `order`.
    pub fn from_tail(tail: &[Complex64], order: usize) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        coeffs.extend_from_slice(tail);
        Self::new(TruncSeries::new(coeffs, order.max(1))?)
    }

    pub fn series(&self) -> &TruncSeries {
        &self.series
    }

    pub fn order(&self) -> usize {
        self.series.order()
    }

    /// Coefficient `a_n`.
    pub fn a(&self, n: usize) -> Complex64 {
        self.series.coeff(n)
    }

    /// `f(z) / z` as a series of the same order (constant term 1).
    pub fn quotient_by_z(&self) -> TruncSeries {
        let mut coeffs = self.series.coeffs()[1..].to_vec();
        coeffs.push(Complex64::new(0.0, 0.0));
        TruncSeries { coeffs }
    }

    /// Compositional inverse by Lagrange inversion: writing `f = z / phi`,
    /// the inverse has `b_k = [z^{k-1}] phi^k / k`.
    pub fn revert(&self) -> Self {
        let order = self.order();
        let phi = TruncSeries::one(order)
            .and_then(|one| one.div(&self.quotient_by_z()))
            .expect("f(z)/z has unit constant term");
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        let mut power = phi.clone();
        for k in 1..=order {
            coeffs[k] = power.coeff(k - 1) / k as f64;
            if k < order {
                power = power.mul(&phi).expect("equal orders");
            }
        }
        coeffs[1] = Complex64::new(1.0, 0.0);
        Self {
            series: TruncSeries { coeffs },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(xs: &[f64], n: usize) -> TruncSeries {
        TruncSeries::from_real(xs, n).unwrap()
    }

    #[test]
    fn mul_telescopes() {
        let p = real(&[1.0, 1.0], 3).mul(&real(&[1.0, -1.0], 3)).unwrap();
        assert_eq!(p, real(&[1.0, 0.0, -1.0, 0.0], 3));
    }

    #[test]
    fn mul_identity_and_mismatch() {
        let s = TruncSeries::new(vec![c(0.3, 1.0), c(-2.0, 0.5), c(1.5, 0.0)], 2).unwrap();
        assert_eq!(TruncSeries::one(2).unwrap().mul(&s).unwrap(), s);
        assert_eq!(
            s.mul(&TruncSeries::one(3).unwrap()),
            Err(Error::OrderMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn mul_schwarz_square() {
        // c1 = c2 = 2 gives u = z + 0 z^2 + ..., so u^2 has z^2 coefficient 1.
        let (c1, c2) = (c(2.0, 0.0), c(2.0, 0.0));
        let u = TruncSeries::new(vec![c(0.0, 0.0), c1 / 2.0, (c2 - c1 * c1 / 2.0) / 2.0], 4)
            .unwrap();
        let sq = u.mul(&u).unwrap();
        assert!(close(sq.coeff(2), c(1.0, 0.0), 1e-15));
    }

    #[test]
    fn div_geometric_and_self() {
        let g = real(&[1.0], 4).div(&real(&[1.0, -1.0], 4)).unwrap();
        assert_eq!(g, real(&[1.0; 5], 4));

        let s = TruncSeries::new(vec![c(0.5, 0.2), c(1.0, -1.0), c(0.0, 3.0)], 2).unwrap();
        assert!(s.div(&s).unwrap().approx_eq(&TruncSeries::one(2).unwrap(), TOL_ALG));
    }

    #[test]
    fn div_rejects_singular_divisor() {
        let err = real(&[1.0], 3).div(&real(&[0.0, 1.0], 3)).unwrap_err();
        assert!(matches!(err, Error::DivisionBySingularSeries { .. }));
    }

    #[test]
    fn deriv_cases() {
        let f = TruncSeries::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.2, 0.1), c(-0.3, 0.0)], 3)
            .unwrap();
        let d = f.deriv();
        assert_eq!(d.order(), 2);
        let want = TruncSeries::new(vec![c(1.0, 0.0), c(0.4, 0.2), c(-0.9, 0.0)], 2).unwrap();
        assert!(d.approx_eq(&want, 1e-15));

        assert_eq!(real(&[1.0], 0).deriv(), real(&[0.0], 0));
        assert_eq!(real(&[1.0], 4).deriv(), real(&[0.0], 3));
    }

    #[test]
    fn pow_real_matches_binomial() {
        let sq = real(&[1.0, 1.0], 3).pow_real(2.0).unwrap();
        assert!(sq.approx_eq(&real(&[1.0, 2.0, 1.0, 0.0], 3), TOL_ALG));

        let s = real(&[1.0, 2.0, 3.0], 6);
        let back = s.pow_real(0.5).unwrap().pow_real(2.0).unwrap();
        assert!(back.approx_eq(&s, TOL_ALG));

        // First-order binomial term: (1 + 2 a2 z + ...)^lambda -> 2 lambda a2.
        let (a2, a3, lambda) = (c(0.3, -0.1), c(0.2, 0.4), 2.7);
        let fp = TruncSeries::new(vec![c(1.0, 0.0), a2 * 2.0, a3 * 3.0], 4).unwrap();
        let p = fp.pow_real(lambda).unwrap();
        assert!(close(p.coeff(1), a2 * 2.0 * lambda, 1e-13));
    }

    #[test]
    fn pow_real_rejects_non_unit_base() {
        let err = real(&[2.0, 1.0], 3).pow_real(0.5).unwrap_err();
        assert!(matches!(err, Error::PowBaseNotUnit { .. }));
        // Within tolerance of 1 the base is rescaled instead of rejected.
        assert!(real(&[1.0 + 1e-12, 1.0], 3).pow_real(0.5).is_ok());
    }

    #[test]
    fn log_exp_roundtrip() {
        let s = TruncSeries::new(vec![c(1.0, 0.0), c(0.4, 0.3), c(-0.2, 0.7), c(0.1, 0.0)], 8)
            .unwrap();
        assert!(s.log().unwrap().exp().approx_eq(&s, 1e-12));
    }

    #[test]
    fn compose_cases() {
        let s = TruncSeries::new(vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.3, 0.3)], 2).unwrap();
        let z = TruncSeries::identity(2).unwrap();
        assert!(s.compose(&z).unwrap().approx_eq(&s, 1e-15));

        let geo = real(&[1.0; 5], 4);
        let z2 = real(&[0.0, 0.0, 1.0], 4);
        assert_eq!(geo.compose(&z2).unwrap(), real(&[1.0, 0.0, 1.0, 0.0, 1.0], 4));

        let err = geo.compose(&real(&[0.5, 1.0], 4)).unwrap_err();
        assert!(matches!(err, Error::ComposeNotLocal { .. }));
    }

    #[test]
    fn revert_small_cases() {
        let f = NormalizedFn::from_tail(&[c(0.1, 0.0), c(0.05, 0.0)], 3).unwrap();
        let g = f.revert();
        assert!(g.series().approx_eq(&real(&[0.0, 1.0, -0.1, -0.03], 3), 1e-14));

        let id = NormalizedFn::from_tail(&[], 5).unwrap();
        assert_eq!(id.revert(), id);
    }

    #[test]
    fn revert_first_terms_law() {
        let (a2, a3) = (c(0.4, -0.3), c(-0.2, 0.6));
        let g = NormalizedFn::from_tail(&[a2, a3], 6).unwrap().revert();
        assert!(close(g.a(2), -a2, 1e-14));
        assert!(close(g.a(3), a2 * a2 * 2.0 - a3, 1e-14));
    }

    #[test]
    fn normalized_rejects_bad_series() {
        assert_eq!(
            NormalizedFn::new(real(&[0.0, 2.0], 3)),
            Err(Error::NotNormalized)
        );
        assert_eq!(
            NormalizedFn::new(real(&[0.1, 1.0], 3)),
            Err(Error::NotNormalized)
        );
    }

    #[test]
    fn eval_cases() {
        let s = real(&[1.0, 1.0, 1.0], 2);
        assert_eq!(s.eval(c(0.0, 0.0)), c(1.0, 0.0));
        assert_eq!(real(&[1.0, -1.0], 1).eval(c(1.0, 0.0)), c(0.0, 0.0));
        assert_eq!(s.eval(c(0.0, 1.0)), c(0.0, 1.0));
    }

    #[test]
    fn order_cap() {
        assert!(TruncSeries::zero(MAX_ORDER).is_ok());
        assert_eq!(
            TruncSeries::zero(MAX_ORDER + 1),
            Err(Error::OrderTooLarge {
                order: MAX_ORDER + 1,
                max: MAX_ORDER
            })
        );
    }
}
