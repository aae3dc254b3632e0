//! Acceptance gate. Every criterion runs at its pinned tolerance and time
//! budget and prints one PASS/FAIL line:
//!
//! ```text
//! cargo test -p gftkit --test acceptance -- --nocapture
//! ```

use std::process::Command;
use std::time::{Duration, Instant};

use gftkit::pseudo::{fs_bound, fs_functional, fs_threshold, solve_coeffs, Lambda};
use gftkit::series::NormalizedFn;
use gftkit::shell::{
    curve_residual, curve_samples, fib_closed_form, min_re_on_grid, ptilde_coeff,
    ptilde_quotient_series, FibSequence, RE_FLOOR, TAU,
};
use gftkit::verify::{verify_bounds, verify_expansions, VerifyReport};
use gftkit::Complex64;

// Reference values evaluated at 30 significant digits.
const A2_L1: f64 = 0.413_304_238_122_399_258_954_332_960_441;
const A3_L1: f64 = 0.479_837_387_624_884_333_025_045_517_802;
const FS_L1: f64 = 0.077_254_248_593_736_856_025_573_354_295_7;
const A2_L2: f64 = 0.131_829_080_589_471_199_769_202_938_941;
const A3_L2: f64 = 0.140_985_704_239_044_261_892_534_133_778;
const FS_L2: f64 = 0.030_901_699_437_494_742_410_229_341_718_3;

const BOUND_LAMBDAS: [f64; 4] = [1.0, 1.5, 2.0, 3.0];
const FS_LAMBDAS: [f64; 2] = [1.0, 2.0];
const FS_MUS: [f64; 5] = [-2.0, 0.0, 0.5, 1.0, 2.0];
const SAMPLES: u64 = 10_000;

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

fn bounds_json(lambda: &str) -> serde_json::Value {
    let out = Command::new(env!("CARGO_BIN_EXE_gftkit"))
        .args(["bounds", "--lambda", lambda, "--mu", "1", "--format", "json"])
        .env_remove("GFTKIT_SEED")
        .output()
        .expect("run gftkit");
    assert!(out.status.success());
    serde_json::from_slice(&out.stdout).expect("bounds emits JSON")
}

fn criterion_closed_forms() -> Outcome {
    let t = TAU;
    let at = t.abs();
    // (printed field, formula re-evaluated in f64, 30-digit reference)
    let l1 = bounds_json("1");
    let l2 = bounds_json("2");
    let cases = [
        ("λ=1 a2", &l1["a2_bound"], at / (1.0 - 2.0 * t).sqrt(), A2_L1),
        ("λ=1 a3", &l1["a3_bound"], at * (1.0 - 4.0 * t) / (2.0 * (1.0 - 2.0 * t)), A3_L1),
        ("λ=1 fs", &l1["fs_bound"], at / 8.0, FS_L1),
        ("λ=2 a2", &l2["a2_bound"], at / (9.0 - 21.0 * t).sqrt(), A2_L2),
        ("λ=2 a3", &l2["a3_bound"], at * (9.0 - 26.0 * t) / (5.0 * (9.0 - 21.0 * t)), A3_L2),
        ("λ=2 fs", &l2["fs_bound"], at / 20.0, FS_L2),
    ];
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for (name, printed, formula, reference) in cases {
        let printed = printed.as_f64().unwrap_or(f64::NAN);
        let err = rel(printed, reference).max(rel(formula, reference));
        if !(err <= 1e-12) {
            pass = false;
            eprintln!("    {name}: printed {printed}, formula {formula}, reference {reference}");
        }
        worst = worst.max(err);
    }
    Outcome {
        pass,
        detail: format!("worst relative error {worst:.2e} (tol 1e-12)"),
    }
}

fn criterion_fibonacci_structure() -> Outcome {
    let t = TAU;
    let expect = [1.0, t, 3.0 * t * t, 4.0 * t.powi(3), 7.0 * t.powi(4), 11.0 * t.powi(5)];
    let quotient = ptilde_quotient_series(5).unwrap();
    let mut coeff_err: f64 = 0.0;
    for (n, e) in expect.iter().enumerate() {
        let law = ptilde_coeff(n).unwrap();
        let q = quotient.coeff(n);
        coeff_err = coeff_err
            .max((law - e).abs())
            .max((q - Complex64::new(*e, 0.0)).norm())
            .max((q - Complex64::new(law, 0.0)).norm());
    }
    let fibs = FibSequence::up_to(70).unwrap();
    let binet_err = (1..=70)
        .map(|n| rel(fib_closed_form(n), fibs.values()[n] as f64))
        .fold(0.0, f64::max);
    Outcome {
        pass: coeff_err <= 1e-12 && binet_err <= 1e-9,
        detail: format!(
            "coefficient agreement {coeff_err:.2e} (tol 1e-12), Binet vs recurrence {binet_err:.2e} (tol 1e-9)"
        ),
    }
}

fn criterion_real_part_floor() -> Outcome {
    let min = min_re_on_grid(0.999, 100, 400).unwrap();
    Outcome {
        pass: min >= RE_FLOOR - 1e-9,
        detail: format!("min Re p̃ = {min:.10} on 100×400 grid, floor √5/10 = {RE_FLOOR:.10}"),
    }
}

fn criterion_curve() -> Outcome {
    let pts = curve_samples(1.0, 360, 0.1).unwrap();
    let worst = pts
        .iter()
        .map(|p| curve_residual(p.x, p.y))
        .fold(0.0, f64::max);
    let all_outside = pts.iter().all(|p| (p.t - std::f64::consts::PI).abs() >= 0.1);
    Outcome {
        pass: worst <= 1e-6 && all_outside && !pts.is_empty(),
        detail: format!("{} points, worst residual {worst:.2e} (tol 1e-6)", pts.len()),
    }
}

fn criterion_expansions() -> Outcome {
    let report = verify_expansions(200, 7, 16).unwrap();
    let mut revert_err: f64 = 0.0;
    for k in 0..200 {
        let a2 = Complex64::from_polar((k as f64 / 200.0).sqrt(), 0.37 * k as f64);
        let a3 = Complex64::from_polar(((199 - k) as f64 / 200.0).sqrt(), -1.1 * k as f64);
        let g = NormalizedFn::from_tail(&[a2, a3], 16).unwrap().revert();
        revert_err = revert_err
            .max((g.a(2) + a2).norm())
            .max((g.a(3) - (a2 * a2 * 2.0 - a3)).norm());
    }
    let worst_identity = report
        .checks
        .iter()
        .filter(|(k, _)| !k.starts_with("revert"))
        .map(|(_, c)| c.worst)
        .fold(0.0, f64::max);
    Outcome {
        pass: report.violations == 0 && revert_err <= 1e-10,
        detail: format!(
            "{} trials, {} violations, worst identity error {worst_identity:.2e} (tol 1e-9), reversion {revert_err:.2e} (tol 1e-10)",
            report.samples, report.violations
        ),
    }
}

fn bound_runs() -> Vec<VerifyReport> {
    (0..10)
        .map(|seed| verify_bounds(&BOUND_LAMBDAS, &[], SAMPLES, seed).unwrap())
        .collect()
}

fn criterion_theorem_bounds(runs: &[VerifyReport]) -> Outcome {
    let violations: u64 = runs.iter().map(|r| r.violations).sum();
    let tuples: u64 = runs.iter().map(|r| r.samples).sum();
    let a2_tight = runs.iter().all(|r| (r.max_ratio_a2 - 1.0).abs() <= 1e-9);
    let max_a3 = runs.iter().map(|r| r.max_ratio_a3).fold(0.0, f64::max);
    Outcome {
        pass: violations == 0 && a2_tight && max_a3 <= 1.0 + 1e-9,
        detail: format!(
            "{tuples} tuples over seeds 0..9, {violations} violations, |a2| ratio at extremal tuple = 1 ± 1e-9: {a2_tight}, max |a3| ratio {max_a3:.6}"
        ),
    }
}

fn criterion_fekete_szego() -> Outcome {
    let mut pass = true;
    for l in FS_LAMBDAS {
        let lambda = Lambda::new(l).unwrap();
        pass &= fs_bound(1.0, lambda) == TAU.abs() / (4.0 * (3.0 * l - 1.0));
    }
    let report = verify_bounds(&FS_LAMBDAS, &FS_MUS, SAMPLES, 0).unwrap();
    pass &= report.violations == 0 && report.max_ratio_fs <= 1.0 + 1e-9;

    let lambda = Lambda::new(1.0).unwrap();
    let sol = solve_coeffs(Complex64::new(2.0, 0.0), Complex64::new(-2.0, 0.0), lambda);
    let witness = fs_functional(&sol, 0.0).norm();
    let four_t = 4.0 * fs_threshold(lambda);
    let witness_ok = (witness - four_t).abs() <= 1e-12 && (witness - TAU.abs() / 2.0).abs() <= 1e-12;
    pass &= witness_ok && witness > fs_bound(0.0, lambda) && report.flagged_fs_tuples >= 1;
    Outcome {
        pass,
        detail: format!(
            "{} tuples, {} envelope violations, max envelope ratio {:.9}, flagged_fs_tuples = {}, (c2,d2)=(2,-2) μ=0 λ=1 gives {witness:.10} = 4T = |τ|/2",
            report.samples, report.violations, report.max_ratio_fs, report.flagged_fs_tuples
        ),
    }
}

fn criterion_determinism(first: &[VerifyReport]) -> Outcome {
    let second = bound_runs();
    let identical = first
        .iter()
        .zip(&second)
        .all(|(a, b)| a.to_stable_json().as_bytes() == b.to_stable_json().as_bytes());
    Outcome {
        pass: identical && first.len() == second.len(),
        detail: format!("{} seed reports byte-identical: {identical}", first.len()),
    }
}

fn timed(
    results: &mut Vec<bool>,
    id: usize,
    name: &str,
    budget: Duration,
    f: impl FnOnce() -> Outcome,
) {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let pass = outcome.pass && elapsed < budget;
    println!(
        "[{}] {id}. {name}: {} ({:.3} s, budget {} s)",
        if pass { "PASS" } else { "FAIL" },
        outcome.detail,
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    results.push(pass);
}

#[test]
fn acceptance() {
    let mut results = Vec::new();
    let s = Duration::from_secs;
    timed(&mut results, 1, "closed-form bound reproduction", s(1), criterion_closed_forms);
    timed(&mut results, 2, "Fibonacci/p̃ structure", s(1), criterion_fibonacci_structure);
    timed(&mut results, 3, "real-part floor √5/10", s(5), criterion_real_part_floor);
    timed(&mut results, 4, "trisectrix curve equation", s(1), criterion_curve);
    timed(&mut results, 5, "expansion identities", s(5), criterion_expansions);

    let mut runs = Vec::new();
    timed(&mut results, 6, "sampled |a2|, |a3| bounds", s(60), || {
        runs = bound_runs();
        criterion_theorem_bounds(&runs)
    });
    timed(&mut results, 7, "Fekete–Szegő sweep", s(30), criterion_fekete_szego);
    timed(&mut results, 8, "determinism", s(60), || criterion_determinism(&runs));

    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
