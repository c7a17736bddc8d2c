//! Laplace-type estimate of the expected node count,
//! `T ~ 1 + P(r) e^{n F(r)}`.
//!
//! The level terms behave like `phi(x) e^{n f(x)}` at `x = i/n`, where the
//! first-order correction to `ln g` gives
//!
//! ```text
//! sigma(x) = k(k-1)p/2 * (x^(k-1) - x^k)
//! phi(x)   = d * exp(r sigma(x) / (1 - p x^k))
//! ```
//!
//! The prefactor `P(r)` depends on where `f` peaks:
//!
//! * `r > r0`: `phi(zeta) sqrt(2 n pi / -f''(zeta))` (interior Gaussian peak),
//! * `r = r0`: `phi(1)/2 sqrt(2 n pi / -f''(1))` (half Gaussian at the edge),
//! * `r < r0`: `phi(1) / (d^(1 - r/r0) - 1)` (geometric tail at the edge).

use serde::Serialize;

use super::exact::ln_one_plus_exp;
use super::AnalyticParams;
use crate::scalar::Real;

/// Relative half-width of the band around `r0` treated as exactly critical.
pub const CRITICAL_BAND: f64 = 1e-9;
/// Relative distance from `r0` inside which predictions carry the
/// critical-form estimate as a second opinion.
pub const NEAR_CRITICAL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptote<S> {
    pub regime: Regime,
    pub log_prefactor: S,
    pub log_t: S,
}

impl<S: Real> AnalyticParams<S> {
    pub fn sigma(&self, x: S) -> S {
        let kf = S::from_count(self.k as u64);
        let k = self.k as i32;
        kf * (kf - S::one()) * self.p * S::lit(0.5) * (x.powi(k - 1) - x.powi(k))
    }

    pub fn ln_phi(&self, x: S) -> S {
        self.d.ln() + self.r * self.sigma(x) / (S::one() - self.p * x.powi(self.k as i32))
    }

    pub fn phi(&self, x: S) -> S {
        self.ln_phi(x).exp()
    }

    pub fn regime(&self, band: S) -> Regime {
        let r0 = self.r0();
        if (self.r - r0).abs() <= band * r0 {
            Regime::Critical
        } else if self.r < r0 {
            Regime::Subcritical
        } else {
            Regime::Supercritical
        }
    }

    fn ln_gaussian_width(&self, n: S, x: S) -> S {
        S::lit(0.5) * (S::lit(2.0) * n * S::PI() / -self.f_second(x)).ln()
    }

    /// `ln P(r)` under an explicitly chosen case formula.
    pub fn log_prefactor_for(&self, regime: Regime, n: usize, tol: S) -> S {
        let n = S::from_count(n as u64);
        match regime {
            Regime::Supercritical => {
                let z = self.argmax(tol);
                self.ln_phi(z) + self.ln_gaussian_width(n, z)
            }
            Regime::Critical => {
                self.ln_phi(S::one()) - S::LN_2() + self.ln_gaussian_width(n, S::one())
            }
            Regime::Subcritical => {
                let exponent = (S::one() - self.r / self.r0()) * self.d.ln();
                self.ln_phi(S::one()) - exponent.exp_m1().ln()
            }
        }
    }

    /// `ln P(r)` and `ln(1 + P(r) e^{n F(r)})` with the case picked by comparing
    /// `r` to `r0` within `band`.
    pub fn asymptote(&self, n: usize, tol: S, band: S) -> Asymptote<S> {
        let regime = self.regime(band);
        self.asymptote_for(regime, n, tol)
    }

    pub fn asymptote_for(&self, regime: Regime, n: usize, tol: S) -> Asymptote<S> {
        let log_prefactor = self.log_prefactor_for(regime, n, tol);
        let exponent = S::from_count(n as u64) * self.big_f_with_tol(tol);
        Asymptote {
            regime,
            log_prefactor,
            log_t: ln_one_plus_exp(log_prefactor + exponent),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::exact::log_expected_nodes;

    #[test]
    fn binary_constraints_have_unit_edge_correction() {
        let a = AnalyticParams::new(3.0f64, 2, 0.2, 0.7).unwrap();
        assert_eq!(a.sigma(1.0), 0.0);
        assert!((a.phi(1.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn regime_classification() {
        let base = AnalyticParams::new(2.0f64, 3, 0.125, 1.0).unwrap();
        let r0 = base.r0();
        let at = |r: f64| {
            AnalyticParams::new(2.0, 3, 0.125, r)
                .unwrap()
                .regime(CRITICAL_BAND)
        };
        assert_eq!(at(0.5 * r0), Regime::Subcritical);
        assert_eq!(at(r0), Regime::Critical);
        assert_eq!(at(r0 * (1.0 + 1e-10)), Regime::Critical);
        assert_eq!(at(r0 * (1.0 + 1e-8)), Regime::Supercritical);
    }

    #[test]
    fn subcritical_prefactor_grows_towards_boundary() {
        let r0 = AnalyticParams::new(2.0f64, 3, 0.125, 1.0).unwrap().r0();
        let mut last = f64::NEG_INFINITY;
        for frac in [0.5, 0.9, 0.99, 0.999] {
            let a = AnalyticParams::new(2.0, 3, 0.125, frac * r0).unwrap();
            let lp = a.log_prefactor_for(Regime::Subcritical, 100, 1e-12);
            assert!(lp.is_finite() && lp > last);
            last = lp;
        }
    }

    #[test]
    fn estimate_converges_to_exact_sum() {
        let base = AnalyticParams::new(2.0f64, 3, 0.125, 1.0).unwrap();
        let r0 = base.r0();
        for mult in [0.5, 1.0, 2.0] {
            let a = AnalyticParams::new(2.0, 3, 0.125, mult * r0).unwrap();
            let gaps: Vec<f64> = [100usize, 200, 400]
                .iter()
                .map(|&n| {
                    let exact = log_expected_nodes(n, 2.0, 3, 0.125, a.r * n as f64);
                    let est = a.asymptote(n, 1e-12, CRITICAL_BAND).log_t;
                    (est - exact).exp_m1().abs()
                })
                .collect();
            assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{mult}: {gaps:?}");
            assert!(gaps[2] < 0.05, "{mult}: {gaps:?}");
        }
    }
}
