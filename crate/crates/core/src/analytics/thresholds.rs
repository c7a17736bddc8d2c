use crate::model::ValidParams;
use crate::scalar::Real;

/// `ln E[#solutions] = n ln d + t ln(1 - p)`.
pub fn log_expected_solutions<S: Real>(params: &ValidParams) -> S {
    let p = S::from_count(params.q()) / S::from_count(params.tuple_count());
    S::from_count(params.n() as u64) * S::from_count(params.d() as u64).ln()
        + S::from_count(params.t()) * (-p).ln_1p()
}

/// First-moment threshold `-ln d / ln(1 - p)`: above it the expected number of
/// solutions vanishes.
pub fn r_critical<S: Real>(d: S, p: S) -> S {
    -d.ln() / (-p).ln_1p()
}

/// Density below which UC succeeds with probability bounded away from zero:
/// `2 d^(k-2) / (k (d-1)^(k-2)) * ((k-1)/(k-2))^(k-2)`, and 1 for `k = 2`.
pub fn uc_bound<S: Real>(d: S, k: u32) -> S {
    if k == 2 {
        return S::one();
    }
    let e = (k - 2) as i32;
    let kf = S::from_count(k as u64);
    let two = S::lit(2.0);
    two * d.powi(e) / (kf * (d - S::one()).powi(e)) * ((kf - S::one()) / (kf - two)).powi(e)
}

/// Boundary `(1 - p) ln d / (p k)` between a maximum of the rate function at
/// `x = 1` and an interior maximum.
pub fn r_zero<S: Real>(d: S, k: u32, p: S) -> S {
    (S::one() - p) * d.ln() / (p * S::from_count(k as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Params;

    #[test]
    fn expected_solutions() {
        let p = Params::new(3, 2, 2, 0, 1).validate().unwrap();
        assert!((log_expected_solutions::<f64>(&p) - 8f64.ln()).abs() < 1e-15);
        // d=2, k=2, q=1: p = 1/4.
        let p = Params::new(3, 2, 2, 2, 1).validate().unwrap();
        assert!((log_expected_solutions::<f64>(&p) - 4.5f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn critical_density() {
        assert!((r_critical(2.0f64, 0.5) - 1.0).abs() < 1e-15);
        // -ln 2 / ln(7/8)
        assert!((r_critical(2.0f64, 0.125) - 5.190_893_069_684_43).abs() < 1e-12);
        assert!((r_critical(3.0f64, 2.0 / 9.0) - 4.371_465_244_487_03).abs() < 1e-12);
        assert!((r_critical(2.0f32, 0.5) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn unit_heuristic_bound() {
        for d in [2.0f64, 3.0, 7.0] {
            assert_eq!(uc_bound(d, 2), 1.0);
        }
        assert!((uc_bound(2.0f64, 3) - 8.0 / 3.0).abs() < 1e-15);
        assert!((uc_bound(3.0f64, 3) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn regime_boundary() {
        assert!((r_zero(2.0f64, 3, 0.125) - 7.0 / 3.0 * 2f64.ln()).abs() < 1e-15);
        assert!((r_zero(2.0f64, 3, 0.125) - 1.617_343_421_306_54).abs() < 1e-12);
        assert!((r_zero(2.0f64, 2, 0.25) - 1.039_720_770_839_92).abs() < 1e-12);
        assert!((r_zero(3.0f64, 2, 2.0 / 9.0) - 1.75 * 3f64.ln()).abs() < 1e-14);
    }
}
