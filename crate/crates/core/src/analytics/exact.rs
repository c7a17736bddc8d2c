//! Exact expected node count of the all-solutions backtracker.
//!
//! A fixed assignment of the first `i` variables kills a random constraint
//! only if the whole scope lies in those `i` variables and the induced tuple is
//! one of the `q` forbidden ones, so (for `q < d`)
//!
//! ```text
//! g(i) = 1 - p * i(i-1)...(i-k+1) / (n(n-1)...(n-k+1))
//! T    = 1 + d * sum_{i=0}^{n-1} d^i g(i)^t
//! ```
//!
//! `T` is summed in the log domain.

use crate::error::{Error, Result};
use crate::model::ValidParams;
use crate::scalar::{Field, Real};

/// `i(i-1)...(i-k+1) / (n(n-1)...(n-k+1))`, zero when `i < k`.
pub fn falling_ratio<S: Field>(i: usize, n: usize, k: u32) -> S {
    let k = k as usize;
    if i < k {
        return S::zero();
    }
    (0..k).fold(S::one(), |acc, j| {
        acc * S::from_count((i - j) as u64) / S::from_count((n - j) as u64)
    })
}

/// Probability that one random constraint survives a fixed level-`i` node.
/// Evaluates exactly when `S` is a rational type.
pub fn g<S: Field>(i: usize, n: usize, k: u32, p: &S) -> Result<S> {
    if i >= n {
        return Err(Error::LevelOutOfRange {
            i,
            max: n.saturating_sub(1),
        });
    }
    Ok(S::one() - p.clone() * falling_ratio::<S>(i, n, k))
}

/// `ln g(i)` without cancellation for `g` near one.
pub fn ln_g<S: Real>(i: usize, n: usize, k: u32, p: S) -> S {
    (-p * falling_ratio::<S>(i, n, k)).ln_1p()
}

/// `ln(sum(exp(x)))`, shifted by the maximum. Empty input gives `-inf`.
pub fn log_sum_exp<S: Real>(terms: &[S]) -> S {
    let max = terms.iter().copied().fold(S::neg_infinity(), S::max);
    if max == S::neg_infinity() {
        return max;
    }
    if max == S::infinity() {
        return max;
    }
    let sum = terms
        .iter()
        .fold(S::zero(), |acc, &x| acc + (x - max).exp());
    max + sum.ln()
}

/// `ln(1 + e^x)`.
pub fn ln_one_plus_exp<S: Real>(x: S) -> S {
    if x > S::zero() {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `ln T` for real-valued `d`, `p` and constraint count `m`.
pub fn log_expected_nodes<S: Real>(n: usize, d: S, k: u32, p: S, m: S) -> S {
    let ln_d = d.ln();
    let mut terms = Vec::with_capacity(n + 1);
    terms.push(S::zero());
    for i in 0..n {
        let level = S::from_count(i as u64 + 1) * ln_d;
        let survive = if m == S::zero() {
            S::zero()
        } else {
            m * ln_g(i, n, k, p)
        };
        terms.push(level + survive);
    }
    log_sum_exp(&terms)
}

/// `ln T` for an integer instance family. Requires `q < d`.
pub fn log_exact_expected_nodes<S: Real>(params: &ValidParams) -> Result<S> {
    params.require_strict()?;
    let p = S::from_count(params.q()) / S::from_count(params.tuple_count());
    Ok(log_expected_nodes(
        params.n(),
        S::from_count(params.d() as u64),
        params.k(),
        p,
        S::from_count(params.t()),
    ))
}
