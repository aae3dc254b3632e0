//! Sampling of the Carathéodory class through its extreme points.
//!
//! Every `h` with `h(0) = 1` and positive real part on the unit disk is a
//! mixture of the rotated kernels `(1 + xz)/(1 − xz)`, `|x| = 1`. A finite
//! mixture with weights `w_k` and points `x_k` has `cₙ = 2 Σ w_k x_kⁿ`, so
//! `|cₙ| ≤ 2` holds by construction.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::TruncSeries;

pub const MAX_ATOMS: usize = 8;
const MEASURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub weight: f64,
    pub point: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaratheodoryFn {
    atoms: Vec<Atom>,
}

impl CaratheodoryFn {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        if let Some(a) = atoms.iter().find(|a| !(a.weight >= 0.0)) {
            return Err(Error::InvalidMeasure(format!("negative weight {}", a.weight)));
        }
        if let Some(a) = atoms
            .iter()
            .find(|a| (a.point.norm() - 1.0).abs() > MEASURE_TOL)
        {
            return Err(Error::InvalidMeasure(format!(
                "point {} is off the unit circle",
                a.point
            )));
        }
        let total: f64 = atoms.iter().map(|a| a.weight).sum();
        if (total - 1.0).abs() > MEASURE_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        Ok(Self { atoms })
    }

    /// The single kernel `(1 + xz)/(1 − xz)`.
    pub fn kernel(point: Complex64) -> Result<Self> {
        Self::new(vec![Atom { weight: 1.0, point }])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// `cₙ = 2 Σ w_k x_kⁿ` (and `c₀ = 1`).
    pub fn moment(&self, n: usize) -> Complex64 {
        if n == 0 {
            return Complex64::new(1.0, 0.0);
        }
        self.atoms
            .iter()
            .map(|a| a.point.powu(n as u32) * a.weight)
            .sum::<Complex64>()
            * 2.0
    }

    /// `1 + c₁z + … + c_N z^N`.
    pub fn coeffs(&self, order: usize) -> Result<TruncSeries> {
        TruncSeries::new((0..=order).map(|n| self.moment(n)).collect(), order)
    }

    /// Deterministic draw for `seed`; seed 0 is pinned to the extremal
    /// kernel at `x = 1` (all `cₙ = 2`).
    pub fn sample(seed: u64, max_atoms: usize) -> Self {
        if seed == 0 {
            return Self::kernel(Complex64::new(1.0, 0.0)).expect("unit kernel");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample_with(&mut rng, max_atoms)
    }

    /// A `(c, d)` pair with `c₁ = −d₁`, the coupling forced on the two sides
    /// of a bi-univalent function. Seed 0 yields the kernels at `1` and `−1`.
    pub fn sample_paired(seed: u64, max_atoms: usize) -> (Self, Self) {
        if seed == 0 {
            return extremal_pairs().swap_remove(0);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample_paired_with(&mut rng, max_atoms)
    }
}

fn unit(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Uniform point of the probability simplex (normalized exponentials).
fn simplex(rng: &mut impl Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Draws a mixture of `1..=max_atoms` kernels (capped at [`MAX_ATOMS`]).
pub fn sample_with(rng: &mut impl Rng, max_atoms: usize) -> CaratheodoryFn {
    let cap = max_atoms.clamp(1, MAX_ATOMS);
    let k = rng.gen_range(1..=cap);
    let weights = simplex(rng, k);
    let atoms = weights
        .into_iter()
        .map(|weight| Atom {
            weight,
            point: unit(rng),
        })
        .collect();
    CaratheodoryFn { atoms }
}

/// Two atoms on a random chord through `q` (`|q| ≤ 1`) whose barycentre is `q`.
fn chord_through(rng: &mut impl Rng, q: Complex64) -> [Atom; 2] {
    if q.norm() >= 1.0 - MEASURE_TOL {
        let p = q / q.norm();
        return [Atom { weight: 1.0, point: p }, Atom { weight: 0.0, point: p }];
    }
    loop {
        let y1 = unit(rng);
        let dir = q - y1;
        let len2 = dir.norm_sqr();
        if len2 < 1e-12 {
            continue;
        }
        // y1 + s·dir lies on the circle for s = 0 and s = −2 Re(ȳ1·dir)/|dir|².
        let s = -2.0 * (y1.conj() * dir).re / len2;
        let y2 = y1 + dir * s;
        let w2 = 1.0 / s;
        let y2 = y2 / y2.norm();
        return [
            Atom { weight: 1.0 - w2, point: y1 },
            Atom { weight: w2, point: y2 },
        ];
    }
}

/// Draws `c` freely and builds `d` as a mixture of chord measures whose first
/// moment is `−c₁/2`, so `d₁ = −c₁` while `d₂` stays free.
pub fn sample_paired_with(rng: &mut impl Rng, max_atoms: usize) -> (CaratheodoryFn, CaratheodoryFn) {
    let c = sample_with(rng, max_atoms);
    let target = -c.moment(1) / 2.0;
    let chords = rng.gen_range(1..=(max_atoms.clamp(1, MAX_ATOMS) / 2).max(1));
    let mix = simplex(rng, chords);
    let mut atoms = Vec::with_capacity(2 * chords);
    for m in mix {
        for a in chord_through(rng, target) {
            if a.weight > 0.0 {
                atoms.push(Atom {
                    weight: a.weight * m,
                    point: a.point,
                });
            }
        }
    }
    let total: f64 = atoms.iter().map(|a| a.weight).sum();
    for a in &mut atoms {
        a.weight /= total;
    }
    (c, CaratheodoryFn { atoms })
}

/// Deterministic paired measures realizing the corners `(c₂, d₂) = (±2, ±2)`
/// of the admissible square, each with `c₁ = −d₁`.
pub fn extremal_pairs() -> Vec<(CaratheodoryFn, CaratheodoryFn)> {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let half = |p: Complex64| {
        CaratheodoryFn::new(vec![
            Atom { weight: 0.5, point: p },
            Atom { weight: 0.5, point: -p },
        ])
        .expect("balanced pair")
    };
    let kernel = |p: Complex64| CaratheodoryFn::kernel(p).expect("unit kernel");
    vec![
        (kernel(one), kernel(-one)),
        (half(one), half(i)),
        (half(i), half(one)),
        (half(i), half(i)),
    ]
}

/// A Schwarz function `u` (`u(0) = 0`), stored as a truncated series.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwarzFn {
    series: TruncSeries,
}

impl SchwarzFn {
    pub fn series(&self) -> &TruncSeries {
        &self.series
    }

    /// The Cayley transform back into the Carathéodory class, `(1 + u)/(1 − u)`.
    pub fn cayley(&self) -> Result<TruncSeries> {
        let one = TruncSeries::one(self.series.order())?;
        one.add(&self.series)?.div(&one.sub(&self.series)?)
    }
}

/// `u = (h − 1)/(h + 1)` for `h = 1 + c₁z + c₂z² + …`.
pub fn schwarz_from_h(h: &TruncSeries) -> Result<SchwarzFn> {
    if (h.coeff(0) - 1.0).norm() > crate::series::TOL_ALG {
        return Err(Error::InvalidArgument(
            "Carathéodory series must have constant term 1".into(),
        ));
    }
    let one = TruncSeries::one(h.order())?;
    let mut series = h.sub(&one)?.div(&h.add(&one)?)?;
    let mut coeffs = series.coeffs().to_vec();
    coeffs[0] = Complex64::new(0.0, 0.0);
    series = TruncSeries::new(coeffs, h.order())?;
    Ok(SchwarzFn { series })
}
