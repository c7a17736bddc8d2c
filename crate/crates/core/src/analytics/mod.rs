//! Closed-form expected-cost quantities for Model GB with `q < d`.
//!
//! [`exact`] evaluates the exact expected node count and the per-level
//! survival probability; [`thresholds`] holds the density thresholds;
//! [`rate`] the rate function and its maximum; [`asymptotic`] the
//! `1 + P(r) e^{n F(r)}` estimate. [`predict`] gathers all of it for one
//! integer parameter set.

pub mod asymptotic;
pub mod exact;
pub mod rate;
pub mod thresholds;

use serde::Serialize;

pub use asymptotic::{Asymptote, Regime, CRITICAL_BAND, NEAR_CRITICAL};
pub use exact::{g, log_exact_expected_nodes, log_expected_nodes, log_sum_exp};
pub use rate::{big_f_at_r0, DEFAULT_TOL};
pub use thresholds::{log_expected_solutions, r_critical, r_zero, uc_bound};

use crate::error::{Error, Result};
use crate::model::ValidParams;
use crate::scalar::Real;

/// Continuous parameters: real `d`, `p`, `r`, integer arity `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticParams<S> {
    pub d: S,
    pub k: u32,
    pub p: S,
    pub r: S,
}

impl<S: Real> AnalyticParams<S> {
    /// Requires `d >= 2`, `k >= 2`, `0 < p < 1/d^(k-1)` and finite `r > 0`.
    pub fn new(d: S, k: u32, p: S, r: S) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidAnalytic(msg));
        if d.is_nan() || d < S::lit(2.0) {
            return bad(format!("d = {d} below 2"));
        }
        if k < 2 {
            return bad(format!("k = {k} below 2"));
        }
        let limit = d.powi(k as i32 - 1).recip();
        if !(p > S::zero() && p < limit) {
            return bad(format!("p = {p} outside (0, {limit})"));
        }
        if !(r > S::zero() && r.is_finite()) {
            return bad(format!("r = {r} must be positive"));
        }
        Ok(AnalyticParams { d, k, p, r })
    }

    /// Continuous view of an integer family. Needs `q < d` and `t > 0`.
    pub fn from_params(params: &ValidParams) -> Result<Self> {
        params.require_strict()?;
        if params.t() == 0 {
            return Err(Error::DegenerateDensity);
        }
        Self::new(
            S::from_count(params.d() as u64),
            params.k(),
            S::from_count(params.q()) / S::from_count(params.tuple_count()),
            S::from_count(params.t()) / S::from_count(params.n() as u64),
        )
    }

    pub fn with_r(&self, r: S) -> Result<Self> {
        Self::new(self.d, self.k, self.p, r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prediction<S> {
    pub regime: Regime,
    /// Maximiser of the rate function (1 unless supercritical).
    pub zeta: S,
    /// `F(r)`, nats per variable.
    pub big_f: S,
    pub log_prefactor: S,
    pub log_t_exact: S,
    pub log_t_asym: S,
    /// Critical-form estimate, present when `r` is within
    /// [`NEAR_CRITICAL`] of `r0` but outside the critical band.
    pub log_t_asym_critical_form: Option<S>,
    pub r: S,
    pub r0: S,
    pub r_cr: S,
    pub uc_bound: S,
    pub log_en: S,
}

/// Every analytic quantity for one integer parameter set. Requires `q < d`
/// and `t > 0`.
pub fn predict<S: Real>(params: &ValidParams, tol: S) -> Result<Prediction<S>> {
    let ap = AnalyticParams::<S>::from_params(params)?;
    let n = params.n();
    let asym = ap.asymptote(n, tol, S::lit(CRITICAL_BAND));
    let r0 = ap.r0();
    let near = (ap.r - r0).abs() <= S::lit(NEAR_CRITICAL) * r0;
    let critical_form = (near && asym.regime != Regime::Critical).then(|| {
        log::warn!(
            "r = {} lies within {NEAR_CRITICAL} of r0 = {}; the case split is unreliable here",
            ap.r,
            r0
        );
        ap.asymptote_for(Regime::Critical, n, tol).log_t
    });
    let zeta = match asym.regime {
        Regime::Supercritical => ap.zeta(tol)?,
        _ => S::one(),
    };
    Ok(Prediction {
        regime: asym.regime,
        zeta,
        big_f: ap.big_f_with_tol(tol),
        log_prefactor: asym.log_prefactor,
        log_t_exact: log_exact_expected_nodes(params)?,
        log_t_asym: asym.log_t,
        log_t_asym_critical_form: critical_form,
        r: ap.r,
        r0,
        r_cr: r_critical(ap.d, ap.p),
        uc_bound: uc_bound(ap.d, ap.k),
        log_en: log_expected_solutions(params),
    })
}
