//! Riemann-Liouville fractional integrals and derivatives, and singular
//! convolutions, on regularized trajectories.
//!
//! Every integral here has the form ∫_0^t (t-σ)^a σ^b G(σ) dσ with G the
//! regular part of a trajectory: one Gauss-Jacobi rule absorbs both
//! endpoint exponents, so the quadrature only samples G. The `_fn`
//! variants take the regular part as a closure (exact family evaluators,
//! no interpolation error); the trajectory variants feed the monotone
//! cubic interpolant through the same kernels.

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::quad::UnitJacobiRule;
use crate::trajectory::SingularTrajectory;
use nalgebra::DMatrix;

fn check_exponent(p: f64) -> Result<()> {
    if p <= -1.0 {
        return Err(Error::NonIntegrableSingularity { p });
    }
    Ok(())
}

fn check_quad_order(n: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::InvalidInput(format!("quadrature order must be >= 4, got {n}")));
    }
    Ok(())
}

/// J^a applied to t^p G(t) with G given as a closure:
/// (1/Γ(a)) ∫_0^t (t-σ)^(a-1) σ^p G(σ) dσ.
pub fn frac_integral_fn<F>(mut regular: F, p: f64, alpha_int: f64, t: f64, n: usize) -> Result<DMatrix<f64>>
where
    F: FnMut(f64) -> Result<DMatrix<f64>>,
{
    if !(alpha_int > 0.0 && alpha_int.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "integration order must be positive, got {alpha_int}"
        )));
    }
    check_exponent(p)?;
    check_quad_order(n)?;
    if t <= 0.0 {
        return Err(Error::OutOfRange { t, min: 0.0, max: f64::INFINITY });
    }

    let rule = UnitJacobiRule::new(n, alpha_int - 1.0, p)?;
    let mut acc: Option<DMatrix<f64>> = None;
    for (u, w) in rule.iter() {
        let g = regular(t * u)?;
        match &mut acc {
            Some(a) => *a += g * w,
            None => acc = Some(g * w),
        }
    }
    let acc = acc.expect("rule has nodes");
    Ok(acc * (rule.scale(t) / gamma(alpha_int)))
}

/// Riemann-Liouville fractional integral of a sampled trajectory.
pub fn frac_integral(
    f: &SingularTrajectory,
    alpha_int: f64,
    t: f64,
    n: usize,
) -> Result<DMatrix<f64>> {
    if t <= 0.0 || t > f.t_max() * (1.0 + 1e-12) {
        return Err(Error::OutOfRange { t, min: 0.0, max: f.t_max() });
    }
    frac_integral_fn(|s| f.regular(s), f.exponent(), alpha_int, t, n)
}

/// D^a = (d²/dt²) J^(2-a) with the second derivative realized by a 5-point
/// central difference of the fractional integral.
pub fn frac_derivative_fn<F>(
    mut regular: F,
    p: f64,
    alpha_d: f64,
    t: f64,
    n: usize,
    h: f64,
) -> Result<DMatrix<f64>>
where
    F: FnMut(f64) -> Result<DMatrix<f64>>,
{
    if !(alpha_d > 1.0 && alpha_d < 2.0) {
        return Err(Error::InvalidOrder { alpha: alpha_d });
    }
    if !(h > 0.0 && 2.0 * h < t) {
        return Err(Error::InvalidInput(format!("stencil step h = {h} invalid for t = {t}")));
    }
    let aint = 2.0 - alpha_d;
    let j = |tt: f64, reg: &mut F| frac_integral_fn(|s| reg(s), p, aint, tt, n);
    let jm2 = j(t - 2.0 * h, &mut regular)?;
    let jm1 = j(t - h, &mut regular)?;
    let j0 = j(t, &mut regular)?;
    let jp1 = j(t + h, &mut regular)?;
    let jp2 = j(t + 2.0 * h, &mut regular)?;
    Ok((jm1 * 16.0 + jp1 * 16.0 - jm2 - jp2 - j0 * 30.0) / (12.0 * h * h))
}

/// Fractional derivative of a sampled trajectory at an interior time.
///
/// The stencil step is min(local grid spacing, t/8), floored at t/16: very
/// fine grids would otherwise shrink h to where interpolation noise,
/// amplified by 1/h², dominates the second difference.
pub fn frac_derivative(
    f: &SingularTrajectory,
    alpha_d: f64,
    t: f64,
    n: usize,
) -> Result<DMatrix<f64>> {
    if t <= 0.0 || t >= f.t_max() {
        return Err(Error::OutOfRange { t, min: 0.0, max: f.t_max() });
    }
    let h = f.local_spacing(t).min(t / 8.0).max(t / 16.0);
    if t + 2.0 * h > f.t_max() * (1.0 + 1e-12) {
        return Err(Error::OutOfRange { t: t + 2.0 * h, min: 0.0, max: f.t_max() });
    }
    frac_derivative_fn(|s| f.regular(s), f.exponent(), alpha_d, t, n, h)
}

/// ∫_0^t f(t-σ) g(σ) dσ for two singular trajectories, split at t/2 so each
/// panel carries exactly one endpoint singularity in its Jacobi weight.
pub fn convolve_singular(
    f: &SingularTrajectory,
    g: &SingularTrajectory,
    t: f64,
    n: usize,
) -> Result<DMatrix<f64>> {
    if f.cols() != g.rows() {
        return Err(Error::InvalidInput(format!(
            "convolution shapes incompatible: {}x{} * {}x{}",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols()
        )));
    }
    check_exponent(f.exponent())?;
    check_exponent(g.exponent())?;
    check_quad_order(n)?;
    let t_lim = f.t_max().min(g.t_max());
    if t <= 0.0 || t > t_lim * (1.0 + 1e-12) {
        return Err(Error::OutOfRange { t, min: 0.0, max: t_lim });
    }

    let half = 0.5 * t;
    let mut acc = DMatrix::<f64>::zeros(f.rows(), g.cols());

    // σ ∈ [0, t/2]: g's singularity σ^p_g in the weight, f smooth there
    let rule_g = UnitJacobiRule::new(n, 0.0, g.exponent())?;
    let mut panel = DMatrix::<f64>::zeros(f.rows(), g.cols());
    for (u, w) in rule_g.iter() {
        let sigma = half * u;
        panel += f.value(t - sigma)? * g.regular(sigma)? * w;
    }
    acc += panel * rule_g.scale(half);

    // σ ∈ [t/2, t] ⇔ τ = t-σ ∈ [0, t/2]: f's singularity τ^p_f in the weight
    let rule_f = UnitJacobiRule::new(n, 0.0, f.exponent())?;
    let mut panel = DMatrix::<f64>::zeros(f.rows(), g.cols());
    for (u, w) in rule_f.iter() {
        let tau = half * u;
        panel += f.regular(tau)? * g.value(t - tau)? * w;
    }
    acc += panel * rule_f.scale(half);

    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::gamma;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn scalar(v: f64) -> DMatrix<f64> {
        DMatrix::from_element(1, 1, v)
    }

    /// t^mu as a trajectory: p = mu, G ≡ 1 (exact under interpolation).
    fn power(mu: f64, t_max: f64, m: usize) -> SingularTrajectory {
        let grid: Vec<f64> = (1..=m).map(|i| t_max * i as f64 / m as f64).collect();
        SingularTrajectory::new(
            mu,
            grid.clone(),
            grid.iter().map(|_| scalar(1.0)).collect(),
            scalar(1.0),
        )
        .unwrap()
    }

    #[test]
    fn integral_of_one_is_power_over_gamma() {
        // J^1.5 1 at t = 1 -> 1/Γ(2.5) = 0.75225277806367504926 (mpmath)
        let f = power(0.0, 2.0, 16);
        let v = frac_integral(&f, 1.5, 1.0, 24).unwrap()[(0, 0)];
        assert_relative_eq!(v, 0.75225277806367504926, max_relative = 1e-12);
    }

    #[test]
    fn integral_power_rule() {
        // J^α t^(α-2)/Γ(α-1) = t^(2α-2)/Γ(2α-1); α = 1.5, t = 2 gives 2/Γ(2) = 2
        let alpha = 1.5;
        let f = power(alpha - 2.0, 2.0, 16);
        let v = frac_integral(&f, alpha, 2.0, 24).unwrap()[(0, 0)] / gamma(alpha - 1.0);
        assert_relative_eq!(v, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn integral_rejects_bad_inputs() {
        let f = power(0.0, 1.0, 8);
        assert!(matches!(frac_integral(&f, 1.5, 1.5, 16), Err(Error::OutOfRange { .. })));
        assert!(matches!(frac_integral(&f, 1.5, 0.0, 16), Err(Error::OutOfRange { .. })));
        assert!(frac_integral(&f, -0.5, 0.5, 16).is_err());
        assert!(frac_integral(&f, 1.5, 0.5, 3).is_err());
        let bad = power(-1.5, 1.0, 8);
        assert!(matches!(
            frac_integral(&bad, 1.5, 0.5, 16),
            Err(Error::NonIntegrableSingularity { .. })
        ));
    }

    #[test]
    fn integral_with_unit_order_matches_plain_quadrature() {
        let grid: Vec<f64> = (1..=24).map(|i| i as f64 / 12.0).collect();
        let traj = SingularTrajectory::new(
            0.0,
            grid.clone(),
            grid.iter().map(|&t| scalar((2.0 * t).tanh())).collect(),
            scalar(0.0),
        )
        .unwrap();
        let via_frac = frac_integral(&traj, 1.0, 1.5, 20).unwrap()[(0, 0)];
        let rule = UnitJacobiRule::new(20, 0.0, 0.0).unwrap();
        let plain = rule.integrate_scaled(1.5, |s| traj.regular(s).unwrap()[(0, 0)]);
        assert_relative_eq!(via_frac, plain, max_relative = 1e-14);
    }

    #[test]
    fn semigroup_property_on_powers() {
        // J^a (J^b t^mu) = J^(a+b) t^mu, residual <= 1e-9 relative
        let alpha = 1.5_f64;
        let t_max = 2.0;
        for (a, b) in [(0.3, alpha - 1.0), (alpha - 1.0, alpha), (0.3, alpha)] {
            for mu in [0.0, 0.75, 2.0] {
                let f = power(mu, t_max, 16);
                // inner integral evaluated on a grid, re-wrapped with its
                // known leading power so the regular part stays constant
                let grid: Vec<f64> = (1..=16).map(|i| t_max * i as f64 / 16.0).collect();
                let inner: Vec<DMatrix<f64>> = grid
                    .iter()
                    .map(|&ti| {
                        let v = frac_integral(&f, b, ti, 32).unwrap()[(0, 0)];
                        scalar(v / ti.powf(mu + b))
                    })
                    .collect();
                let g0 = inner[0].clone();
                let jb = SingularTrajectory::new(mu + b, grid, inner, g0).unwrap();

                let t = 1.7;
                let lhs = frac_integral(&jb, a, t, 32).unwrap()[(0, 0)];
                let rhs = frac_integral(&f, a + b, t, 32).unwrap()[(0, 0)];
                assert_relative_eq!(lhs, rhs, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn derivative_annihilates_kernel_powers() {
        // D^α t^(α-1) = 0 and D^α t^(α-2) = 0
        let alpha = 1.5;
        for mu in [alpha - 1.0, alpha - 2.0] {
            let f = power(mu, 2.0, 32);
            let v = frac_derivative(&f, alpha, 1.0, 32).unwrap()[(0, 0)];
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn derivative_power_rule() {
        // D^1.5 t^2 = Γ(3)/Γ(1.5) √t = 2.2567583341910251478 √t (mpmath)
        let f = power(2.0, 2.0, 32);
        for t in [0.49, 1.0, 1.44] {
            let v = frac_derivative(&f, 1.5, t, 32).unwrap()[(0, 0)];
            assert_relative_eq!(v, 2.2567583341910251478 * t.sqrt(), max_relative = 1e-6);
        }
    }

    #[test]
    fn derivative_inverts_integral_on_smooth_powers() {
        // D^α J^α t^mu = t^mu to <= 1e-6 at interior points
        let alpha = 1.4_f64;
        for mu in [2.0, 2.5, 3.0] {
            let f = power(mu, 2.0, 24);
            let grid: Vec<f64> = (1..=24).map(|i| i as f64 / 12.0).collect();
            let samples: Vec<DMatrix<f64>> = grid
                .iter()
                .map(|&ti| {
                    let v = frac_integral(&f, alpha, ti, 40).unwrap()[(0, 0)];
                    scalar(v / ti.powf(mu + alpha))
                })
                .collect();
            let g0 = samples[0].clone();
            let jf = SingularTrajectory::new(mu + alpha, grid, samples, g0).unwrap();
            for t in [0.8, 1.2] {
                let v = frac_derivative(&jf, alpha, t, 40).unwrap()[(0, 0)];
                assert_relative_eq!(v, t.powf(mu), max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn derivative_stencil_leaving_grid_is_an_error() {
        let f = power(0.0, 1.0, 16);
        assert!(matches!(frac_derivative(&f, 1.5, 0.99, 16), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn quadrature_error_drops_by_factor_four_when_doubling() {
        // smooth non-polynomial regular part; reference at high order
        let grid: Vec<f64> = (1..=400).map(|i| i as f64 / 200.0).collect();
        let traj = SingularTrajectory::new(
            -0.5,
            grid.clone(),
            grid.iter().map(|&t| scalar((1.5 * t).exp())).collect(),
            scalar(1.0),
        )
        .unwrap();
        let reference = frac_integral(&traj, 1.5, 1.9, 96).unwrap()[(0, 0)];
        let e8 = (frac_integral(&traj, 1.5, 1.9, 8).unwrap()[(0, 0)] - reference).abs();
        let e16 = (frac_integral(&traj, 1.5, 1.9, 16).unwrap()[(0, 0)] - reference).abs();
        assert!(
            e8 >= 4.0 * e16 || e8 < 1e-13,
            "expected >= 4x improvement, got e8 = {e8:.3e}, e16 = {e16:.3e}"
        );
    }

    #[test]
    fn convolution_of_ones() {
        let f = power(0.0, 2.0, 8);
        let v = convolve_singular(&f, &f, 1.0, 24).unwrap()[(0, 0)];
        assert_relative_eq!(v, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn convolution_of_power_kernels() {
        // k_α * k_α with k_α = t^(α-2)/Γ(α-1) equals t^(2α-3)/Γ(2α-2);
        // at α = 1.5, t = 1 the value is 1/Γ(1) = 1
        let alpha = 1.5;
        let c = 1.0 / gamma(alpha - 1.0);
        let grid: Vec<f64> = (1..=8).map(|i| i as f64 / 4.0).collect();
        let k = SingularTrajectory::new(
            alpha - 2.0,
            grid.clone(),
            grid.iter().map(|_| scalar(c)).collect(),
            scalar(c),
        )
        .unwrap();
        let v = convolve_singular(&k, &k, 1.0, 32).unwrap()[(0, 0)];
        assert_relative_eq!(v, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn convolution_shape_mismatch() {
        let f = power(0.0, 1.0, 4);
        let g = SingularTrajectory::new(
            0.0,
            vec![0.5, 1.0],
            vec![DMatrix::zeros(2, 2), DMatrix::zeros(2, 2)],
            DMatrix::zeros(2, 2),
        )
        .unwrap();
        assert!(convolve_singular(&f, &g, 0.5, 16).is_err());
    }
}
