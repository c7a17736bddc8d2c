//! Brute-force ground truth at tiny scale.
//!
//! Nothing here touches the backtracker: levels are enumerated exhaustively
//! and each prefix is judged by the plain [`is_consistent`] predicate. The
//! level probability is recomputed from binomial coefficients in exact
//! rational arithmetic.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::backtrack::SearchStats;
use crate::error::{Error, Result};
use crate::generator::sample_constraint;
use crate::model::{is_consistent, is_violated, Instance, PartialAssignment, ValidParams, Value};
use crate::rng::{Purpose, SeedSpec};
use crate::Rational;

/// Largest `d^n` that [`brute_force`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// Consistent full assignments, lexicographic.
    pub solutions: Vec<Vec<Value>>,
    pub level_counts: Vec<u64>,
    pub node_count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Matches {
    pub solutions: bool,
    pub solution_count: bool,
    pub level_counts: bool,
    pub node_count: bool,
}

impl Matches {
    pub fn all(&self) -> bool {
        self.solutions && self.solution_count && self.level_counts && self.node_count
    }
}

impl OracleReport {
    /// Compares against a backtracker run. Solutions are compared only when
    /// the run collected them.
    pub fn compare(&self, stats: &SearchStats) -> Matches {
        Matches {
            solutions: stats
                .solutions
                .as_ref()
                .is_none_or(|s| *s == self.solutions),
            solution_count: stats.solution_count == self.solutions.len() as u64,
            level_counts: stats.level_counts == self.level_counts,
            node_count: stats.nodes == self.node_count,
        }
    }
}

pub fn brute_force(inst: &Instance) -> Result<OracleReport> {
    let (n, d) = (inst.n(), inst.d());
    let total = u32::try_from(n)
        .ok()
        .and_then(|e| (d as u64).checked_pow(e))
        .filter(|&t| t <= BRUTE_FORCE_LIMIT)
        .ok_or(Error::SizeGuard {
            d,
            n,
            limit: BRUTE_FORCE_LIMIT,
        })?;
    debug_assert!(total <= BRUTE_FORCE_LIMIT);

    let mut level_counts = Vec::with_capacity(n + 1);
    let mut solutions = Vec::new();
    let mut level_size = 1u64;
    for depth in 0..=n {
        let mut count = 0u64;
        for code in 0..level_size {
            // Base-d digits of `code`, variable 0 most significant: lexicographic order.
            let mut digits = vec![0 as Value; depth];
            let mut rest = code;
            for slot in digits.iter_mut().rev() {
                *slot = (rest % d as u64) as Value;
                rest /= d as u64;
            }
            let a = PartialAssignment::new(digits);
            if is_consistent(inst, &a) {
                count += 1;
                if depth == n {
                    solutions.push(a.values().to_vec());
                }
            }
        }
        level_counts.push(count);
        level_size *= d as u64;
    }
    let node_count = 1 + level_counts[..n].iter().map(|c| d as u64 * c).sum::<u64>();
    Ok(OracleReport {
        solutions,
        level_counts,
        node_count,
    })
}

/// Fraction of `samples` random constraints not violated once the first
/// `prefix.len()` variables take the values in `prefix`.
pub fn empirical_g_with_prefix(
    params: &ValidParams,
    prefix: &[Value],
    samples: u64,
    seed: u64,
) -> Result<f64> {
    if prefix.len() >= params.n() {
        return Err(Error::LevelOutOfRange {
            i: prefix.len(),
            max: params.n() - 1,
        });
    }
    let mut rng = SeedSpec::new(seed, 0).rng(Purpose::Sampling);
    let a = PartialAssignment::new(prefix.to_vec());
    let alive = (0..samples)
        .filter(|_| !is_violated(&sample_constraint(params, &mut rng), &a, params.d()))
        .count();
    Ok(alive as f64 / samples as f64)
}

/// Monte Carlo estimate of the level-`i` survival probability with the
/// first `i` variables fixed to 0.
pub fn empirical_g(params: &ValidParams, i: usize, samples: u64, seed: u64) -> Result<f64> {
    empirical_g_with_prefix(params, &vec![0; i], samples, seed)
}

/// `1 - p C(i,k) / C(n,k)` in exact rationals.
pub fn exact_g_combinatorial(n: usize, k: u32, p: &Rational, i: usize) -> Rational {
    let num = binomial(BigInt::from(i), BigInt::from(k));
    let den = binomial(BigInt::from(n), BigInt::from(k));
    Rational::one() - p * Rational::new(num, den)
}

/// `1 + d sum_{i<n} d^i g(i)^t`, exactly. Requires `q < d`.
pub fn exact_expected_nodes(params: &ValidParams) -> Result<Rational> {
    params.require_strict()?;
    let p = params.p_exact();
    let d = BigInt::from(params.d());
    let t = params.t() as usize;
    let mut sum = Rational::zero();
    let mut d_pow = BigInt::one();
    for i in 0..params.n() {
        let g = exact_g_combinatorial(params.n(), params.k(), &p, i);
        sum += Rational::from_integer(d_pow.clone()) * Pow::pow(&g, t);
        d_pow *= &d;
    }
    Ok(Rational::one() + Rational::from_integer(d) * sum)
}

/// Natural log of a positive big integer, accurate to double precision.
pub fn ln_bigint(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "log of non-positive integer");
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_rational(x: &Rational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}
