//! Gamma-function helpers.
//!
//! `reciprocal_gamma` is the workhorse: every series coefficient in this
//! crate is of the form 1/Γ(αk + β), and β may be zero or negative, so the
//! reciprocal must be a total function that vanishes at the poles of Γ.

/// 1/Γ(x), defined as 0 at the poles x = 0, -1, -2, ...
///
/// Relative error is a few ulp away from the poles (the backing `libm`
/// implementation of Γ is accurate to ~1e-15 for |x| <= 50).
pub fn reciprocal_gamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    let g = libm::tgamma(x);
    if g.is_infinite() {
        // overflow of Γ for x >~ 171.6; the reciprocal underflows
        return 0.0;
    }
    1.0 / g
}

/// Γ(x) for x not a non-positive integer.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// (ln |Γ(x)|, sign of Γ(x)). The sign is 0 when x is a pole.
pub fn ln_abs_gamma(x: f64) -> (f64, f64) {
    if x <= 0.0 && x == x.floor() {
        return (f64::INFINITY, 0.0);
    }
    let (lg, sign) = libm::lgamma_r(x);
    (lg, sign as f64)
}

/// Euler beta function B(a, b) for a, b > 0.
pub fn beta(a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    let (la, _) = libm::lgamma_r(a);
    let (lb, _) = libm::lgamma_r(b);
    let (lab, _) = libm::lgamma_r(a + b);
    (la + lb - lab).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn reciprocal_gamma_reference_values() {
        // mpmath, 80 dps (tools/gen_reference.py)
        assert_relative_eq!(reciprocal_gamma(0.5), 0.56418958354775628695, max_relative = 1e-13);
        assert_relative_eq!(reciprocal_gamma(-2.5), -1.057855469152043038, max_relative = 1e-13);
        assert_relative_eq!(reciprocal_gamma(30.25), 4.847767229035297123e-32, max_relative = 1e-13);
        assert_relative_eq!(reciprocal_gamma(-0.99), -0.00995649463215381209, max_relative = 1e-13);
        assert_relative_eq!(reciprocal_gamma(5.0), 1.0 / 24.0, max_relative = 1e-14);
    }

    #[test]
    fn reciprocal_gamma_vanishes_at_poles() {
        for k in 0..40 {
            assert_eq!(reciprocal_gamma(-(k as f64)), 0.0);
        }
    }

    #[test]
    fn reciprocal_gamma_large_argument_underflows_to_zero() {
        assert_eq!(reciprocal_gamma(200.0), 0.0);
    }

    #[test]
    fn beta_matches_gamma_ratio() {
        assert_relative_eq!(beta(0.5, 0.5), PI, max_relative = 1e-13);
        assert_relative_eq!(beta(2.0, 3.0), 1.0 / 12.0, max_relative = 1e-13);
    }

    #[test]
    fn ln_abs_gamma_sign_tracks_reflection() {
        let (_, s) = ln_abs_gamma(-0.5); // Γ(-1/2) = -2√π
        assert_eq!(s, -1.0);
        let (_, s) = ln_abs_gamma(-1.5); // Γ(-3/2) = 4√π/3
        assert_eq!(s, 1.0);
        let (_, s) = ln_abs_gamma(-2.0);
        assert_eq!(s, 0.0);
    }
}
