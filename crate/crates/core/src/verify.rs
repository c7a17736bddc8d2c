//! Oracle checks bundled for the `verify` command.

use crate::analytics::{self, log_exact_expected_nodes};
use crate::backtrack::{solve_all, solve_with, CheckMode, SearchOptions};
use crate::error::Result;
use crate::generator::sample_instance;
use crate::model::{Instance, Params, ValidParams};
use crate::oracle::{
    brute_force, empirical_g, empirical_g_with_prefix, exact_expected_nodes, exact_g_combinatorial,
    ln_rational,
};
use crate::rng::{Purpose, SeedSpec};
use crate::uc::checked_uc;
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

/// Random small strict instance for trial `i`: n <= 6, d <= 3, k in {2, 3}.
pub fn small_instance(master_seed: u64, i: u64) -> Instance {
    let mut r = SeedSpec::new(master_seed, i).rng(Purpose::Sampling);
    let n = 2 + r.index(5);
    let d = 2 + r.below(2) as u32;
    let k = (2 + r.below(2) as u32).min(n as u32);
    let q = 1 + r.below(d as u64 - 1);
    let t = r.below(3 * n as u64 + 1);
    let params = Params::new(n, d, k, t, q)
        .validate()
        .expect("valid by construction");
    sample_instance(&params, SeedSpec::new(master_seed, i))
}

fn counting_semantics(seed: u64, instances: u64) -> Result<Check> {
    let mut bad = Vec::new();
    for i in 0..instances {
        let inst = small_instance(seed, i);
        let stats = solve_all(&inst, true)?;
        if !brute_force(&inst)?.compare(&stats).all() {
            bad.push(i);
        }
    }
    Ok(Check::new(
        "backtracker matches brute force",
        bad.is_empty(),
        format!("{instances} instances, mismatches at {bad:?}"),
    ))
}

fn incremental_equivalence(seed: u64, instances: u64) -> Result<Check> {
    let mut bad = Vec::new();
    let naive = SearchOptions {
        collect: true,
        check: CheckMode::Naive,
        ..Default::default()
    };
    for i in 0..instances {
        let inst = small_instance(seed ^ 0x5eed, i);
        if solve_all(&inst, true)? != solve_with(&inst, &naive)? {
            bad.push(i);
        }
    }
    Ok(Check::new(
        "incremental check equals naive re-check",
        bad.is_empty(),
        format!("{instances} instances, mismatches at {bad:?}"),
    ))
}

fn level_probability_exact() -> Check {
    let mut bad = 0;
    let mut total = 0;
    for n in 2..=10usize {
        for k in 2..=3u32.min(n as u32) {
            for q in [1i64, 2] {
                let p = Rational::new(q.into(), (3i64.pow(k)).into());
                for i in 0..n {
                    total += 1;
                    let a: Rational = analytics::g(i, n, k, &p).expect("in range");
                    if a != exact_g_combinatorial(n, k, &p, i) {
                        bad += 1;
                    }
                }
            }
        }
    }
    Check::new(
        "g(i) equals 1 - p C(i,k)/C(n,k) exactly",
        bad == 0,
        format!("{total} levels, {bad} mismatches"),
    )
}

fn z_of(observed: f64, expected: f64, samples: u64) -> f64 {
    let se = (expected * (1.0 - expected) / samples as f64).sqrt();
    if se == 0.0 {
        if observed == expected {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (observed - expected) / se
    }
}

/// Monte Carlo `g(i)` vs the closed form at three levels, 4 standard errors.
pub fn level_probability_sampled(seed: u64, samples: u64) -> Result<Check> {
    let points = [
        (Params::new(10, 3, 2, 1, 2), 5usize),
        (Params::new(10, 3, 2, 1, 2), 9),
        (Params::new(8, 2, 3, 1, 1), 6),
    ];
    let mut worst: f64 = 0.0;
    for (j, (params, i)) in points.into_iter().enumerate() {
        let v = params.validate()?;
        let observed = empirical_g(&v, i, samples, seed.wrapping_add(j as u64))?;
        let expected = analytics::g(i, v.n(), v.k(), &v.p())?;
        worst = worst.max(z_of(observed, expected, samples).abs());
    }
    Ok(Check::new(
        "sampled g(i) within 4 standard errors",
        worst < 4.0,
        format!("{samples} samples per point, worst |z| = {worst:.2}"),
    ))
}

fn level_probability_symmetry(seed: u64, samples: u64) -> Result<Check> {
    let v: ValidParams = Params::new(10, 3, 2, 1, 2).validate()?;
    let zeros = empirical_g_with_prefix(&v, &[0; 6], samples, seed)?;
    let mixed = empirical_g_with_prefix(&v, &[2, 1, 0, 2, 1, 0], samples, seed.wrapping_add(1))?;
    let pooled = (zeros + mixed) / 2.0;
    let se = (2.0 * pooled * (1.0 - pooled) / samples as f64).sqrt();
    let z = (zeros - mixed) / se;
    Ok(Check::new(
        "sampled g(i) independent of the fixed prefix",
        z.abs() < 4.0,
        format!("{zeros:.5} vs {mixed:.5}, z = {z:.2}"),
    ))
}

fn exact_sum_high_precision() -> Result<Check> {
    let mut worst: f64 = 0.0;
    for params in [
        Params::new(10, 3, 2, 10, 2),
        Params::new(12, 2, 3, 12, 1),
        Params::new(9, 4, 2, 20, 3),
    ] {
        let v = params.validate()?;
        let fast: f64 = log_exact_expected_nodes(&v)?;
        let slow = ln_rational(&exact_expected_nodes(&v)?);
        worst = worst.max(((fast - slow) / slow).abs());
    }
    Ok(Check::new(
        "log-domain expected nodes equals exact rational sum",
        worst < 1e-12,
        format!("worst relative error {worst:.2e}"),
    ))
}

fn uc_soundness(seed: u64, instances: u64) -> Result<Check> {
    let mut found = 0;
    for i in 0..instances {
        let inst = small_instance(seed ^ 0xc0ffee, i);
        if checked_uc(&inst, SeedSpec::new(seed, i))? {
            found += 1;
        }
    }
    Ok(Check::new(
        "UC solutions satisfy their instances",
        true,
        format!("{instances} runs, {found} solutions, all verified"),
    ))
}

/// Runs every check. `samples` sets the Monte Carlo size of the `g(i)` checks.
pub fn run_verification(seed: u64, samples: u64) -> Result<Vec<Check>> {
    Ok(vec![
        counting_semantics(seed, 200)?,
        incremental_equivalence(seed, 200)?,
        level_probability_exact(),
        level_probability_sampled(seed, samples)?,
        level_probability_symmetry(seed, samples)?,
        exact_sum_high_precision()?,
        uc_soundness(seed, 200)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let checks = run_verification(7, 50_000).unwrap();
        for c in &checks {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(checks.len(), 7);
    }
}
