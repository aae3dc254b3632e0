//! Sampling harness that checks the coefficient identities and inequalities
//! over admissible Carathéodory data and records how tight they are.
//!
//! Violations are collected into a [`VerifyReport`] rather than returned as
//! errors. Reports merge by sums and maxima, so the order in which cells are
//! evaluated never changes the result.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::caratheodory::{
    extremal_pairs, sample_paired_with, sample_with, schwarz_from_h, CaratheodoryFn, MAX_ATOMS,
};
use crate::error::{Error, Result};
use crate::pseudo::{
    bound_a2, bound_a2_simple, bound_a3, fs_bound, fs_envelope, fs_functional, ghs_closed_form,
    ghs_series, lhs_closed_form, lhs_series, solve_coeffs, Lambda,
};
use crate::series::{close, NormalizedFn, TruncSeries};
use crate::shell::{
    curve_residual, curve_samples, fib_closed_form, min_re_on_grid, ptilde_coeff, ptilde_eval,
    ptilde_quotient_series, ptilde_series, tau_power_identity, FibSequence, GoldenConstants,
    RE_FLOOR, TAU,
};

/// Relative slack on `observed / bound` before a sample counts as a violation.
pub const RATIO_TOL: f64 = 1e-9;
/// Tolerance on the coefficient-identity checks.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Tolerance on the reversion first-terms law.
pub const REVERT_TOL: f64 = 1e-10;
pub const DEFAULT_SAMPLES: u64 = 10_000;
pub const DEFAULT_TRIALS: u64 = 200;

/// Outcome of one named family of checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckSummary {
    pub count: u64,
    pub violations: u64,
    /// Largest observed error (or ratio) for this check.
    pub worst: f64,
}

impl CheckSummary {
    fn merge(&mut self, other: &CheckSummary) {
        self.count += other.count;
        self.violations += other.violations;
        self.worst = self.worst.max(other.worst);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    /// Number of tuples (or trials) evaluated.
    pub samples: u64,
    pub violations: u64,
    pub max_ratio_a2: f64,
    pub max_ratio_a3: f64,
    pub max_ratio_fs: f64,
    /// Tuples whose `|a₃ − μa₂²|` exceeds the stated piecewise bound.
    pub flagged_fs_tuples: u64,
    pub checks: BTreeMap<String, CheckSummary>,
    #[serde(rename = "elapsed_secs", serialize_with = "secs")]
    pub elapsed: Duration,
}

fn secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl VerifyReport {
    pub fn empty(suite: &str, seed: u64) -> Self {
        Self {
            suite: suite.to_string(),
            seed,
            samples: 0,
            violations: 0,
            max_ratio_a2: 0.0,
            max_ratio_a3: 0.0,
            max_ratio_fs: 0.0,
            flagged_fs_tuples: 0,
            checks: BTreeMap::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// Records one check outcome; `ok = false` counts as a violation.
    fn record(&mut self, name: &str, ok: bool, err: f64) {
        let entry = self.checks.entry(name.to_string()).or_insert(CheckSummary {
            count: 0,
            violations: 0,
            worst: 0.0,
        });
        entry.merge(&CheckSummary {
            count: 1,
            violations: u64::from(!ok),
            worst: err,
        });
        self.violations += u64::from(!ok);
    }

    /// Relative-tolerance comparison of two complex values.
    fn record_close(&mut self, name: &str, got: Complex64, want: Complex64, tol: f64) {
        let err = (got - want).norm() / 1f64.max(got.norm()).max(want.norm());
        self.record(name, close(got, want, tol), err);
    }

    /// Combines two reports: counts add, maxima take the larger value.
    pub fn merge(mut self, other: &VerifyReport) -> Self {
        self.samples += other.samples;
        self.violations += other.violations;
        self.max_ratio_a2 = self.max_ratio_a2.max(other.max_ratio_a2);
        self.max_ratio_a3 = self.max_ratio_a3.max(other.max_ratio_a3);
        self.max_ratio_fs = self.max_ratio_fs.max(other.max_ratio_fs);
        self.flagged_fs_tuples += other.flagged_fs_tuples;
        for (name, summary) in &other.checks {
            self.checks
                .entry(name.clone())
                .and_modify(|s| s.merge(summary))
                .or_insert(*summary);
        }
        self.elapsed += other.elapsed;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON without the wall-clock field; identical for identical inputs.
    pub fn to_stable_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if let Some(map) = value.as_object_mut() {
            map.remove("elapsed_secs");
        }
        serde_json::to_string_pretty(&value).expect("report serializes")
    }
}

fn cell_rng(seed: u64, cell: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cell);
    rng
}

fn validate_lambdas(grid: &[f64]) -> Result<Vec<Lambda>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("λ grid is empty".into()));
    }
    grid.iter().map(|&l| Lambda::new(l)).collect()
}

/// Checks `|a₂| ≤ bound_a2`, `|a₃| ≤ bound_a3` and `|a₃ − μa₂²| ≤ envelope`
/// on `samples` random paired tuples per `(λ, μ)` cell plus the four corner
/// tuples `(c₂, d₂) = (±2, ±2)`. An empty `mu_grid` skips the functional.
pub fn verify_bounds(
    lambda_grid: &[f64],
    mu_grid: &[f64],
    samples: u64,
    seed: u64,
) -> Result<VerifyReport> {
    let start = Instant::now();
    let lambdas = validate_lambdas(lambda_grid)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    if let Some(mu) = mu_grid.iter().find(|m| !m.is_finite()) {
        return Err(Error::InvalidArgument(format!("μ must be finite, got {mu}")));
    }
    let mus: Vec<Option<f64>> = if mu_grid.is_empty() {
        vec![None]
    } else {
        mu_grid.iter().copied().map(Some).collect()
    };
    let cells: Vec<(Lambda, Option<f64>)> = lambdas
        .iter()
        .flat_map(|&l| mus.iter().map(move |&m| (l, m)))
        .collect();

    let report = cells
        .par_iter()
        .enumerate()
        .map(|(idx, &(lambda, mu))| bounds_cell(lambda, mu, samples, seed, idx as u64))
        .reduce(
            || VerifyReport::empty("bounds", seed),
            |a, b| a.merge(&b),
        );
    Ok(VerifyReport {
        elapsed: start.elapsed(),
        ..report
    })
}

fn bounds_cell(lambda: Lambda, mu: Option<f64>, samples: u64, seed: u64, cell: u64) -> VerifyReport {
    let mut report = VerifyReport::empty("bounds", seed);
    let mut rng = cell_rng(seed, cell);
    let a2_bound = bound_a2(lambda);
    let a3_bound = bound_a3(lambda);
    let a2_simple = bound_a2_simple(lambda);
    report.record("a2_bound_within_simple", a2_bound <= a2_simple, a2_bound / a2_simple);

    let extremal = extremal_pairs();
    let check = |report: &mut VerifyReport, c: &CaratheodoryFn, d: &CaratheodoryFn| {
        report.samples += 1;
        let sol = solve_coeffs(c.moment(2), d.moment(2), lambda);
        let r2 = sol.a2_abs() / a2_bound;
        let r3 = sol.a3.norm() / a3_bound;
        report.max_ratio_a2 = report.max_ratio_a2.max(r2);
        report.max_ratio_a3 = report.max_ratio_a3.max(r3);
        report.record("a2_bound", r2 <= 1.0 + RATIO_TOL, r2);
        report.record("a3_bound", r3 <= 1.0 + RATIO_TOL, r3);
        if let Some(mu) = mu {
            let value = fs_functional(&sol, mu).norm();
            let rf = value / fs_envelope(mu, lambda);
            report.max_ratio_fs = report.max_ratio_fs.max(rf);
            report.record("fs_envelope", rf <= 1.0 + RATIO_TOL, rf);
            if value > fs_bound(mu, lambda) * (1.0 + RATIO_TOL) {
                report.flagged_fs_tuples += 1;
            }
        }
    };
    for (c, d) in &extremal {
        check(&mut report, c, d);
    }
    for _ in 0..samples {
        let (c, d) = sample_paired_with(&mut rng, MAX_ATOMS);
        check(&mut report, &c, &d);
    }
    report
}

fn random_disk(rng: &mut impl Rng) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Checks the expansion identities behind the coefficient system.
///
/// Each trial draws `(a₂, a₃, λ)` and compares both sides' series with their
/// predicted coefficients, then draws a Carathéodory `h`, forms `p̃∘u`, reads
/// `a₂`, `a₃` off the coefficient match, recovers `d₁`, `d₂` from the inverse
/// side and confirms the closed-form solution reproduces them.
pub fn verify_expansions(trials: u64, seed: u64, order: usize) -> Result<VerifyReport> {
    let start = Instant::now();
    if order < 3 {
        return Err(Error::InvalidArgument(format!(
            "expansion checks need order N ≥ 3, got {order}"
        )));
    }
    let ptilde = ptilde_series(order)?;
    let mut report = VerifyReport::empty("expansions", seed);
    let mut rng = cell_rng(seed, 0);
    for trial in 0..trials {
        report.samples += 1;
        let (a2, a3) = if trial == 0 {
            (Complex64::default(), Complex64::default())
        } else {
            (random_disk(&mut rng), random_disk(&mut rng))
        };
        // Every tenth trial pins λ = 1, the classical starlike quotient zf′/f.
        let lambda = if trial % 10 == 0 {
            Lambda::new(1.0)?
        } else {
            Lambda::new(rng.gen_range(1.0..=4.0))?
        };
        let h = sample_with(&mut rng, MAX_ATOMS).coeffs(order)?;
        expansion_trial(&mut report, &ptilde, a2, a3, lambda, &h)?;
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

fn expansion_trial(
    report: &mut VerifyReport,
    ptilde: &TruncSeries,
    a2: Complex64,
    a3: Complex64,
    lambda: Lambda,
    h: &TruncSeries,
) -> Result<()> {
    let order = ptilde.order();
    let tol = IDENTITY_TOL;

    let f = NormalizedFn::from_tail(&[a2, a3], order)?;
    let lhs = lhs_series(&f, lambda, order)?;
    let ghs = ghs_series(&f, lambda, order)?;
    let [l1, l2] = lhs_closed_form(a2, a3, lambda);
    let [g1, g2] = ghs_closed_form(a2, a3, lambda);
    report.record_close("lhs_z1", lhs.coeff(1), l1, tol);
    report.record_close("lhs_z2", lhs.coeff(2), l2, tol);
    report.record_close("ghs_w1", ghs.coeff(1), g1, tol);
    report.record_close("ghs_w2", ghs.coeff(2), g2, tol);

    let g = f.revert();
    report.record_close("revert_b2", g.a(2), -a2, REVERT_TOL);
    report.record_close("revert_b3", g.a(3), a2 * a2 * 2.0 - a3, REVERT_TOL);

    // p = p̃∘u against the three-term closed form.
    let (c1, c2, c3) = (h.coeff(1), h.coeff(2), h.coeff(3));
    let u = schwarz_from_h(h)?;
    let p = ptilde.compose(u.series())?;
    let (p1, p2, p3) = (ptilde.coeff(1), ptilde.coeff(2), ptilde.coeff(3));
    let pred1 = p1 * c1 / 2.0;
    let pred2 = (c2 - c1 * c1 / 2.0) * p1 / 2.0 + c1 * c1 / 4.0 * p2;
    let pred3 = (c3 - c1 * c2 + c1 * c1 * c1 / 4.0) * p1 / 2.0
        + c1 * (c2 - c1 * c1 / 2.0) * p2 / 2.0
        + c1 * c1 * c1 / 8.0 * p3;
    report.record_close("subordinate_z1", p.coeff(1), pred1, tol);
    report.record_close("subordinate_z2", p.coeff(2), pred2, tol);
    report.record_close("subordinate_z3", p.coeff(3), pred3, tol);

    // Coefficient matching on the z side determines a₂, a₃.
    let l = lambda.get();
    let m2 = p.coeff(1) / (2.0 * l - 1.0);
    let m3 = (p.coeff(2) - m2 * m2 * (2.0 * l * l - 4.0 * l + 1.0)) / (3.0 * l - 1.0);
    let fm = NormalizedFn::from_tail(&[m2, m3], order)?;
    let lhs_m = lhs_series(&fm, lambda, order)?;
    report.record_close("match_z1", lhs_m.coeff(1), p.coeff(1), tol);
    report.record_close("match_z2", lhs_m.coeff(2), p.coeff(2), tol);

    // The w side then fixes d₁, d₂ through q = p̃∘v.
    let ghs_m = ghs_series(&fm, lambda, order)?;
    let (q1, q2) = (ghs_m.coeff(1), ghs_m.coeff(2));
    let d1 = q1 * 2.0 / TAU;
    let d2 = (q2 - d1 * d1 * 0.75 * TAU * TAU) * 2.0 / TAU + d1 * d1 / 2.0;
    report.record_close("first_coeffs_opposite", d1, -c1, tol);
    let k = TruncSeries::new(vec![Complex64::new(1.0, 0.0), d1, d2], order)?;
    let q = ptilde.compose(schwarz_from_h(&k)?.series())?;
    report.record_close("match_w1", q.coeff(1), q1, tol);
    report.record_close("match_w2", q.coeff(2), q2, tol);

    // a₂² from the first coefficients alone, then the full solved system.
    let a2_sq_first = (c1 * c1 + d1 * d1) * (TAU * TAU) / (8.0 * (2.0 * l - 1.0).powi(2));
    report.record_close("a2_sq_first_coeffs", a2_sq_first, m2 * m2, tol);
    let sol = solve_coeffs(c2, d2, lambda);
    report.record_close("solved_a2_sq", sol.a2_sq, m2 * m2, tol);
    report.record_close("solved_a3", sol.a3, m3, tol);
    Ok(())
}

/// Grids for the shell-function checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShellGrid {
    pub r_max: f64,
    pub radial: usize,
    pub angular: usize,
    pub curve_samples: usize,
    pub exclusion: f64,
    /// Random interior points for the series-vs-rational evaluation check.
    pub eval_points: usize,
}

impl Default for ShellGrid {
    fn default() -> Self {
        Self {
            r_max: 0.999,
            radial: 100,
            angular: 400,
            curve_samples: 360,
            exclusion: 0.1,
            eval_points: 100,
        }
    }
}

pub fn verify_shell(grid: &ShellGrid, seed: u64) -> Result<VerifyReport> {
    let start = Instant::now();
    let mut report = VerifyReport::empty("shell", seed);

    let g = GoldenConstants::new();
    report.record("tau_quadratic", (g.tau * g.tau - 1.0 - g.tau).abs() <= 1e-12, (g.tau * g.tau - 1.0 - g.tau).abs());
    let at = g.tau.abs();
    let golden = (1.0 / at - at / (1.0 - at)).abs();
    report.record("golden_section", golden <= 1e-12, golden);

    let fibs = FibSequence::up_to(crate::shell::FIB_MAX)?;
    for w in fibs.values().windows(3) {
        report.record("fib_recurrence", w[2] == w[0] + w[1], 0.0);
    }
    for n in 1..=70 {
        let exact = fibs.values()[n] as f64;
        let rel = (fib_closed_form(n) - exact).abs() / exact;
        report.record("fib_closed_form", rel <= 1e-9, rel);
    }
    for n in 1..=40 {
        let r = tau_power_identity(n)?;
        report.record("tau_power", r <= 1e-9, r);
    }

    let quotient = ptilde_quotient_series(40)?;
    for n in 0..=40 {
        let law = Complex64::new(ptilde_coeff(n)?, 0.0);
        let err = (law - quotient.coeff(n)).norm() / law.norm();
        report.record("ptilde_law_vs_quotient", err <= 1e-9, err);
    }

    let series = ptilde_series(40)?;
    let mut rng = cell_rng(seed, 0);
    for _ in 0..grid.eval_points {
        let z = random_disk(&mut rng) * 0.3;
        let err = (series.eval(z) - ptilde_eval(z)?).norm();
        report.record("series_eval_vs_rational", err <= 1e-9, err);
    }

    let min_re = min_re_on_grid(grid.r_max, grid.radial, grid.angular)?;
    report.record("re_floor", min_re >= RE_FLOOR - 1e-9, RE_FLOOR - min_re);
    report.samples += ((grid.radial + 1) * grid.angular) as u64;

    for p in curve_samples(1.0, grid.curve_samples, grid.exclusion)? {
        let r = curve_residual(p.x, p.y);
        report.record("curve_residual", r <= 1e-6, r);
    }
    report.samples += grid.curve_samples as u64;

    let p_i = ptilde_eval(Complex64::new(0.0, 1.0))?;
    let r = curve_residual(p_i.re, p_i.im);
    report.record("curve_residual_at_i", r <= 1e-9, r);

    report.elapsed = start.elapsed();
    Ok(report)
}

/// Default grids used by the `all` suite.
pub const ACCEPTANCE_LAMBDAS: [f64; 4] = [1.0, 1.5, 2.0, 3.0];
pub const ACCEPTANCE_MUS: [f64; 5] = [-2.0, 0.0, 0.5, 1.0, 2.0];

/// Shell, expansion and bound suites merged into one report.
pub fn verify_all(seed: u64, samples: u64, trials: u64) -> Result<VerifyReport> {
    let start = Instant::now();
    let shell = verify_shell(&ShellGrid::default(), seed)?;
    let expansions = verify_expansions(trials, seed, crate::series::DEFAULT_ORDER)?;
    let bounds = verify_bounds(&ACCEPTANCE_LAMBDAS, &ACCEPTANCE_MUS, samples, seed)?;
    let merged = VerifyReport::empty("all", seed)
        .merge(&shell)
        .merge(&expansions)
        .merge(&bounds);
    Ok(VerifyReport {
        elapsed: start.elapsed(),
        ..merged
    })
}
