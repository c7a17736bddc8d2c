//! The exponential rate function `f(x) = x ln d + r ln(1 - p x^k)` on `[0, 1]`
//! and its maximum `F(r)`.
//!
//! `f'` is strictly decreasing with `f'(0) = ln d > 0` and
//! `f'(1) = (1 - r/r0) ln d`, so `f` peaks at `x = 1` for `r <= r0` and at a
//! unique interior point `zeta` otherwise.

use super::thresholds::r_zero;
use super::AnalyticParams;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default bisection tolerance for `zeta`.
pub const DEFAULT_TOL: f64 = 1e-12;

impl<S: Real> AnalyticParams<S> {
    pub fn r0(&self) -> S {
        r_zero(self.d, self.k, self.p)
    }

    fn k_s(&self) -> S {
        S::from_count(self.k as u64)
    }

    pub fn f(&self, x: S) -> S {
        x * self.d.ln() + self.r * (-self.p * x.powi(self.k as i32)).ln_1p()
    }

    pub fn f_prime(&self, x: S) -> S {
        let k = self.k as i32;
        self.d.ln() - self.r * self.p * self.k_s() * x.powi(k - 1) / (S::one() - self.p * x.powi(k))
    }

    pub fn f_second(&self, x: S) -> S {
        let k = self.k as i32;
        let kf = self.k_s();
        let denom = S::one() - self.p * x.powi(k);
        -self.r * self.p * (kf * (kf - S::one()) * x.powi(k - 2) + self.p * kf * x.powi(2 * k - 2))
            / (denom * denom)
    }

    /// Interior maximiser of `f`, by bisection on `f'`.
    ///
    /// Stops once the bracket is narrower than `tol` and `|f'| <= tol`, or when
    /// the bracket can no longer shrink in `S`.
    pub fn zeta(&self, tol: S) -> Result<S> {
        let r0 = self.r0();
        if self.r <= r0 {
            return Err(Error::RegimeMismatch {
                r: self.r.to_f64().unwrap_or(f64::NAN),
                r0: r0.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (mut lo, mut hi) = (S::zero(), S::one());
        let half = S::lit(0.5);
        loop {
            let mid = lo + (hi - lo) * half;
            if mid <= lo || mid >= hi {
                let (flo, fhi) = (self.f_prime(lo).abs(), self.f_prime(hi).abs());
                return Ok(if flo <= fhi { lo } else { hi });
            }
            let slope = self.f_prime(mid);
            if slope == S::zero() {
                return Ok(mid);
            }
            if slope > S::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= tol && slope.abs() <= tol {
                return Ok(mid);
            }
        }
    }

    /// Location of the maximum of `f` on `[0, 1]`.
    pub fn argmax(&self, tol: S) -> S {
        self.zeta(tol).unwrap_or_else(|_| S::one())
    }

    /// `F(r) = max f` on `[0, 1]`.
    pub fn big_f_with_tol(&self, tol: S) -> S {
        match self.zeta(tol) {
            Ok(z) => self.f(z),
            Err(_) => self.d.ln() + self.r * (-self.p).ln_1p(),
        }
    }

    pub fn big_f(&self) -> S {
        self.big_f_with_tol(S::lit(DEFAULT_TOL))
    }

    /// `F` with `r` eliminated through `f'(zeta) = 0`:
    /// `ln d / (k p zeta^(k-1)) * (k p zeta^k + (1 - p zeta^k) ln(1 - p zeta^k))`.
    /// Only meaningful above `r0`.
    pub fn big_f_eliminated(&self, tol: S) -> Result<S> {
        let z = self.zeta(tol)?;
        let kf = self.k_s();
        let y = self.p * z.powi(self.k as i32);
        Ok(self.d.ln() / (kf * self.p * z.powi(self.k as i32 - 1))
            * (kf * y + (S::one() - y) * (-y).ln_1p()))
    }

    /// `dF/dr = ln(1 - p x*^k)` where `x*` is the maximiser.
    pub fn big_f_slope(&self, tol: S) -> S {
        let x = self.argmax(tol);
        (-self.p * x.powi(self.k as i32)).ln_1p()
    }
}

/// Closed form of `F(r0) = (1 - (1-p)/(k p) ln(1 + p/(1-p))) ln d`.
pub fn big_f_at_r0<S: Real>(d: S, k: u32, p: S) -> S {
    let one = S::one();
    (one - (one - p) / (S::from_count(k as u64) * p) * (p / (one - p)).ln_1p()) * d.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ap(d: f64, k: u32, p: f64, r: f64) -> AnalyticParams<f64> {
        AnalyticParams::new(d, k, p, r).unwrap()
    }

    fn grid() -> Vec<AnalyticParams<f64>> {
        let mut out = Vec::new();
        for d in [2.0, 3.0, 4.0] {
            for k in [2, 3, 4] {
                for frac in [0.25, 0.5, 0.9] {
                    let p = frac / f64::powi(d, k as i32 - 1);
                    let r0 = r_zero(d, k, p);
                    for mult in [0.3, 1.7, 6.0] {
                        out.push(ap(d, k, p, mult * r0));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn endpoint_slopes() {
        for a in grid() {
            assert_eq!(a.f(0.0), 0.0);
            assert!((a.f_prime(0.0) - a.d.ln()).abs() < 1e-15);
            let expected = (1.0 - a.r / a.r0()) * a.d.ln();
            assert!((a.f_prime(1.0) - expected).abs() < 1e-12 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for a in grid() {
            for i in 1..10 {
                let x = i as f64 / 10.0;
                let fd1 = (a.f(x + h) - a.f(x - h)) / (2.0 * h);
                let fd2 = (a.f_prime(x + h) - a.f_prime(x - h)) / (2.0 * h);
                assert!(
                    (fd1 - a.f_prime(x)).abs() <= 1e-6 * a.f_prime(x).abs().max(1e-3),
                    "{a:?} x={x}"
                );
                assert!(
                    (fd2 - a.f_second(x)).abs() <= 1e-6 * a.f_second(x).abs().max(1e-3),
                    "{a:?} x={x}"
                );
            }
        }
    }

    #[test]
    fn zeta_matches_quadratic_root() {
        // k = 2: ln d * p x^2 + r p k x - ln d = 0.
        let a = ap(2.0, 2, 0.25, 3.0);
        let z = a.zeta(1e-12).unwrap();
        let (qa, qb, qc) = (2f64.ln() * 0.25, 3.0 * 0.25 * 2.0, -(2f64.ln()));
        let root = (-qb + (qb * qb - 4.0 * qa * qc).sqrt()) / (2.0 * qa);
        assert!((z - root).abs() < 1e-12);
        assert!((z - 0.4398).abs() < 1e-4);
        assert!(a.f_prime(z).abs() <= 1e-12);
    }

    #[test]
    fn zeta_requires_interior_regime() {
        let a = ap(2.0, 3, 0.125, 1.0);
        assert!(matches!(a.zeta(1e-12), Err(Error::RegimeMismatch { .. })));
        assert_eq!(a.argmax(1e-12), 1.0);
    }

    #[test]
    fn zeta_bounds_near_and_far() {
        for base in grid() {
            let (d, k, p) = (base.d, base.k, base.p);
            let r0 = r_zero(d, k, p);
            let km1 = 1.0 / (k as f64 - 1.0);

            let r = r0 * (1.0 + 1e-4);
            let z = ap(d, k, p, r).zeta(1e-14).unwrap();
            let x0 = (d.ln() / (d.ln() + (r - r0) * p * k as f64)).powf(km1);
            assert!(x0 < z && z < 1.0);

            let r = 100.0 * r0;
            let z = ap(d, k, p, r).zeta(1e-14).unwrap();
            assert!(z < (d.ln() / (r * k as f64 * p)).powf(km1));
        }
    }

    #[test]
    fn subcritical_maximum_is_at_one() {
        let a = ap(3.0, 2, 0.2, 0.5);
        assert!((a.big_f() - (3f64.ln() + 0.5 * 0.8f64.ln())).abs() < 1e-15);
        assert!((a.big_f_slope(1e-12) - 0.8f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn eliminated_form_agrees() {
        let a = ap(2.0, 2, 0.25, 3.0);
        let direct = a.big_f();
        let alt = a.big_f_eliminated(1e-12).unwrap();
        assert!((direct - alt).abs() < 1e-10);
    }

    #[test]
    fn value_at_boundary() {
        for base in grid() {
            let r0 = base.r0();
            let at = ap(base.d, base.k, base.p, r0).big_f();
            let closed = big_f_at_r0(base.d, base.k, base.p);
            assert!((at - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn single_precision_rate() {
        let a = AnalyticParams::new(2.0f32, 2, 0.25, 3.0).unwrap();
        let z = a.zeta(1e-6).unwrap();
        assert!((z - 0.43977).abs() < 1e-4);
        assert!(a.big_f() > 0.0);
    }
}
