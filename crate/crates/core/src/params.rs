//! Parameter space of the model: flux, coupling matrix, unitary chart.
//!
//! A model instance is a flux value alpha in (0, 1) together with a
//! boundary-condition choice. Boundary conditions come in two charts:
//!
//! * the Lambda chart — two reals u, v and a complex w building
//!   Lambda = [[u, alpha conj(w)], [(1-alpha) w, v]], which automatically
//!   satisfies the symmetry constraint D Lambda = Lambda* D with
//!   D = diag(1-alpha, alpha);
//! * the unitary chart — angles (omega, a, b) and q in [0, 1] building a
//!   2x2 unitary U; it maps onto the Lambda chart wherever
//!   d = sin(omega) + q sin(a - pi alpha) is nonzero.
//!
//! All downstream operations take Lambda parameters; the U chart exists for
//! cross-checks against the resolvent determinant and is converted through
//! [`u_to_lambda`].

use crate::mat2::{Mat2, C64};
use crate::numfmt::float17;
use crate::specialfn::gamma;
use num_complex::Complex64;
use std::f64::consts::PI;
use thiserror::Error;

/// Margin keeping 1/sin(pi alpha) and the Gamma factors bounded.
pub const FLUX_MARGIN: f64 = 1e-6;

/// Below this |d| the boundary condition leaves the Lambda chart.
pub const CHART_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ParamError {
    #[error("flux alpha = {0} outside [{FLUX_MARGIN}, 1 - {FLUX_MARGIN}]")]
    FluxOutOfRange(f64),
    #[error("q = {0} outside [0, 1]")]
    QOutOfRange(f64),
    #[error("parameter value {0} is not finite")]
    NotFinite(f64),
    #[error("chart invertibility quantity d = {0} is below tolerance; the boundary condition has no Lambda-chart representation")]
    NotInvertible(f64),
}

/// The flux parameter alpha, clamped to [1e-6, 1 - 1e-6].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flux {
    alpha: f64,
}

impl Flux {
    pub fn new(alpha: f64) -> Result<Flux, ParamError> {
        if alpha.is_finite() && (FLUX_MARGIN..=1.0 - FLUX_MARGIN).contains(&alpha) {
            Ok(Flux { alpha })
        } else {
            Err(ParamError::FluxOutOfRange(alpha))
        }
    }

    #[inline]
    pub fn alpha(self) -> f64 {
        self.alpha
    }

    /// Exponents (1-alpha, alpha) of the diagonal matrix D.
    #[inline]
    pub fn d_exponents(self) -> (f64, f64) {
        (1.0 - self.alpha, self.alpha)
    }

    /// Gamma(alpha) / Gamma(2 - alpha), the first-channel coupling weight.
    pub fn gamma_ratio_first(self) -> f64 {
        gamma(self.alpha) / gamma(2.0 - self.alpha)
    }

    /// Gamma(1 - alpha) / Gamma(1 + alpha), the second-channel coupling weight.
    pub fn gamma_ratio_second(self) -> f64 {
        gamma(1.0 - self.alpha) / gamma(1.0 + self.alpha)
    }

    /// diag(e^{i pi (1-alpha)}, e^{i pi alpha}) = exp(i pi D).
    pub fn exp_i_pi_d(self) -> Mat2 {
        Mat2::diag(
            C64::cis(PI * (1.0 - self.alpha)),
            C64::cis(PI * self.alpha),
        )
    }

    /// exp(-i pi D).
    pub fn exp_minus_i_pi_d(self) -> Mat2 {
        Mat2::diag(
            C64::cis(-PI * (1.0 - self.alpha)),
            C64::cis(-PI * self.alpha),
        )
    }
}

/// Coupling parameters (u, v, w) of the Lambda chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaParams {
    pub u: f64,
    pub v: f64,
    pub w: C64,
}

impl LambdaParams {
    pub fn new(u: f64, v: f64, w: C64) -> LambdaParams {
        LambdaParams { u, v, w }
    }

    /// The pure flux case Lambda = 0 (no point interaction).
    pub fn zero() -> LambdaParams {
        LambdaParams::new(0.0, 0.0, C64::ZERO)
    }

    /// det Lambda = u v - alpha (1-alpha) |w|^2.
    pub fn det(self, flux: Flux) -> f64 {
        let alpha = flux.alpha();
        self.u * self.v - alpha * (1.0 - alpha) * self.w.norm_sqr()
    }

    pub fn is_zero(self) -> bool {
        self.u == 0.0 && self.v == 0.0 && self.w == C64::ZERO
    }

    /// Flat JSON object {"alpha", "u", "v", "w_re", "w_im"}.
    pub fn to_json(self, flux: Flux) -> String {
        format!(
            "{{\"alpha\":{},\"u\":{},\"v\":{},\"w_re\":{},\"w_im\":{}}}",
            float17(flux.alpha()),
            float17(self.u),
            float17(self.v),
            float17(self.w.re),
            float17(self.w.im)
        )
    }
}

/// The matrix Lambda = [[u, alpha conj(w)], [(1-alpha) w, v]].
pub fn lambda_matrix(flux: Flux, lam: &LambdaParams) -> Mat2 {
    let alpha = flux.alpha();
    Mat2::new(
        C64::new(lam.u, 0.0),
        lam.w.conj() * alpha,
        lam.w * (1.0 - alpha),
        C64::new(lam.v, 0.0),
    )
}

/// Unitary-chart parameters (omega, a, b, q).
///
/// Angles are normalized into [0, 2 pi) at construction; q must lie in
/// [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UParams {
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    pub q: f64,
}

const TAU: f64 = 2.0 * PI;

impl UParams {
    pub fn new(omega: f64, a: f64, b: f64, q: f64) -> Result<UParams, ParamError> {
        for &v in &[omega, a, b] {
            if !v.is_finite() {
                return Err(ParamError::NotFinite(v));
            }
        }
        if !(q.is_finite() && (0.0..=1.0).contains(&q)) {
            return Err(ParamError::QOutOfRange(q));
        }
        Ok(UParams {
            omega: omega.rem_euclid(TAU),
            a: a.rem_euclid(TAU),
            b: b.rem_euclid(TAU),
            q,
        })
    }

    /// The unitary matrix
    /// e^{i omega} [[q e^{ia}, -sqrt(1-q^2) e^{-ib}], [sqrt(1-q^2) e^{ib}, q e^{-ia}]].
    pub fn matrix(&self) -> Mat2 {
        let s = (1.0 - self.q * self.q).max(0.0).sqrt();
        let phase = C64::cis(self.omega);
        Mat2::new(
            phase * self.q * C64::cis(self.a),
            phase * (-s) * C64::cis(-self.b),
            phase * s * C64::cis(self.b),
            phase * self.q * C64::cis(-self.a),
        )
    }

    /// Flat JSON object {"alpha", "omega", "a", "b", "q"}.
    pub fn to_json(&self, flux: Flux) -> String {
        format!(
            "{{\"alpha\":{},\"omega\":{},\"a\":{},\"b\":{},\"q\":{}}}",
            float17(flux.alpha()),
            float17(self.omega),
            float17(self.a),
            float17(self.b),
            float17(self.q)
        )
    }
}

/// d = sin(omega) + q sin(a - pi alpha); the U chart maps into the Lambda
/// chart exactly when d != 0.
pub fn d_invariant(flux: Flux, up: &UParams) -> f64 {
    up.omega.sin() + up.q * (up.a - PI * flux.alpha()).sin()
}

/// Convert unitary-chart parameters to Lambda-chart parameters.
///
/// Fails with [`ParamError::NotInvertible`] when |d| <= 1e-10; the
/// conversion conditions like 1/d, so values this close to the chart
/// boundary are meaningless in double precision.
pub fn u_to_lambda(flux: Flux, up: &UParams) -> Result<LambdaParams, ParamError> {
    let d = d_invariant(flux, up);
    if d.abs() <= CHART_TOLERANCE {
        return Err(ParamError::NotInvertible(d));
    }
    let alpha = flux.alpha();
    let half = 0.5 * PI * alpha;

    let u = (2.0f64.powf(2.0 - 2.0 * alpha) / flux.gamma_ratio_first())
        * ((up.omega + half).cos() + up.q * (up.a - half).cos())
        / d;
    let v = -(2.0f64.powf(2.0 * alpha) / flux.gamma_ratio_second())
        * ((up.omega - half).sin() + up.q * (up.a - half).sin())
        / d;
    let w = (2.0 * (1.0 - up.q * up.q) * (PI * alpha).sin())
        .max(0.0)
        .sqrt()
        * C64::cis(up.b - half - 0.25 * PI)
        / d;
    Ok(LambdaParams::new(u, v, Complex64::new(w.re, w.im)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const SQRT_2: f64 = std::f64::consts::SQRT_2;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn flux_margin_enforced() {
        assert!(Flux::new(0.5).is_ok());
        assert!(Flux::new(1e-6).is_ok());
        assert!(Flux::new(0.0).is_err());
        assert!(Flux::new(1.0).is_err());
        assert!(Flux::new(1e-7).is_err());
        assert!(Flux::new(f64::NAN).is_err());
    }

    #[test]
    fn lambda_matrix_direct_substitution() {
        let f = Flux::new(0.5).unwrap();
        let m = lambda_matrix(f, &LambdaParams::zero());
        assert_eq!(m, Mat2::zero());

        let m = lambda_matrix(f, &LambdaParams::new(1.0, 2.0, c(0.0, 1.0)));
        assert_eq!(m.at(0, 0), c(1.0, 0.0));
        assert_eq!(m.at(0, 1), c(0.0, -0.5));
        assert_eq!(m.at(1, 0), c(0.0, 0.5));
        assert_eq!(m.at(1, 1), c(2.0, 0.0));

        let f = Flux::new(0.25).unwrap();
        let m = lambda_matrix(f, &LambdaParams::new(0.0, 0.0, c(1.0, 0.0)));
        assert_eq!(m.at(0, 1), c(0.25, 0.0));
        assert_eq!(m.at(1, 0), c(0.75, 0.0));
    }

    #[test]
    fn d_invariant_direct_evaluation() {
        let f = Flux::new(0.5).unwrap();
        let up = UParams::new(PI, 0.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(d_invariant(f, &up), -1.0, epsilon = 1e-15);

        let up = UParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(d_invariant(f, &up).abs() < 1e-15);

        let up = UParams::new(PI / 2.0, 0.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(d_invariant(f, &up), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn u_minus_one_maps_to_pure_flux() {
        // omega = pi, a = b = 0, q = 1 gives U = -1 for every alpha
        for &alpha in &[0.1, 0.3, 0.5, 0.77, 0.9] {
            let f = Flux::new(alpha).unwrap();
            let up = UParams::new(PI, 0.0, 0.0, 1.0).unwrap();
            let m = up.matrix();
            assert!(m.add(&Mat2::identity()).max_norm() < 1e-15);
            let lam = u_to_lambda(f, &up).unwrap();
            assert!(lam.u.abs() < 1e-14);
            assert!(lam.v.abs() < 1e-14);
            assert!(lam.w.norm() < 1e-14);
        }
    }

    #[test]
    fn chart_values_half_flux() {
        // frozen from a 40-digit substitution oracle
        let f = Flux::new(0.5).unwrap();

        let up = UParams::new(PI / 2.0, 0.0, 0.0, 0.0).unwrap();
        let lam = u_to_lambda(f, &up).unwrap();
        assert_relative_eq!(lam.u, -SQRT_2 / 2.0, max_relative = 1e-14);
        assert_relative_eq!(lam.v, -SQRT_2 / 2.0, max_relative = 1e-14);
        assert!(lam.w.re.abs() < 1e-15);
        assert_relative_eq!(lam.w.im, -SQRT_2, max_relative = 1e-14);

        let up = UParams::new(0.0, 0.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(d_invariant(f, &up), -1.0, epsilon = 1e-15);
        let lam = u_to_lambda(f, &up).unwrap();
        assert_relative_eq!(lam.u, -SQRT_2, max_relative = 1e-14);
        assert_relative_eq!(lam.v, -SQRT_2, max_relative = 1e-14);
        assert!(lam.w.norm() < 1e-15);
    }

    #[test]
    fn chart_singular_rejected() {
        let f = Flux::new(0.5).unwrap();
        let up = UParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            u_to_lambda(f, &up),
            Err(ParamError::NotInvertible(_))
        ));
    }

    #[test]
    fn unitary_chart_is_unitary() {
        use proptest::prelude::*;
        let mut runner = proptest::test_runner::TestRunner::default();
        runner
            .run(
                &(0.0f64..TAU, 0.0f64..TAU, 0.0f64..TAU, 0.0f64..=1.0),
                |(omega, a, b, q)| {
                    let up = UParams::new(omega, a, b, q).unwrap();
                    prop_assert!(up.matrix().unitarity_deficit() < 1e-14);
                    Ok(())
                },
            )
            .unwrap();
    }

    #[test]
    fn symmetry_constraint_holds_automatically() {
        // D Lambda = Lambda* D for every (u, v, w)
        use proptest::prelude::*;
        let mut runner = proptest::test_runner::TestRunner::default();
        runner
            .run(
                &(
                    0.05f64..0.95,
                    -5.0f64..5.0,
                    -5.0f64..5.0,
                    -5.0f64..5.0,
                    -5.0f64..5.0,
                ),
                |(alpha, u, v, wr, wi)| {
                    let f = Flux::new(alpha).unwrap();
                    let lam = lambda_matrix(f, &LambdaParams::new(u, v, c(wr, wi)));
                    let (d1, d2) = f.d_exponents();
                    let d = Mat2::diag(c(d1, 0.0), c(d2, 0.0));
                    let lhs = d.mul(&lam);
                    let rhs = lam.adjoint().mul(&d);
                    prop_assert!(lhs.sub(&rhs).max_norm() < 1e-12);
                    Ok(())
                },
            )
            .unwrap();
    }

    #[test]
    fn q_one_conserves_angular_momentum() {
        // q = 1 must yield w = 0 identically
        for &(alpha, omega, a, b) in &[
            (0.3, 0.7, 1.1, 2.5),
            (0.5, 4.0, 0.2, 0.0),
            (0.82, 2.2, 5.9, 1.3),
        ] {
            let f = Flux::new(alpha).unwrap();
            let up = UParams::new(omega, a, b, 1.0).unwrap();
            if let Ok(lam) = u_to_lambda(f, &up) {
                assert_eq!(lam.w, C64::ZERO);
            }
        }
    }

    #[test]
    fn chart_stability_away_from_boundary() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(71);
        let f = Flux::new(0.37).unwrap();
        let mut tested = 0;
        while tested < 200 {
            let up = UParams::new(
                rng.gen_range(0.0..TAU),
                rng.gen_range(0.0..TAU),
                rng.gen_range(0.0..TAU),
                rng.gen_range(0.0..1.0),
            )
            .unwrap();
            if d_invariant(f, &up).abs() <= 1e-3 {
                continue;
            }
            tested += 1;
            let base = u_to_lambda(f, &up).unwrap();
            let eps = 1e-9;
            let pert = UParams::new(up.omega + eps, up.a - eps, up.b + eps, (up.q - eps).max(0.0))
                .unwrap();
            let moved = u_to_lambda(f, &pert).unwrap();
            let delta = ((moved.u - base.u).powi(2)
                + (moved.v - base.v).powi(2)
                + (moved.w - base.w).norm_sqr())
            .sqrt();
            let scale = (base.u.powi(2) + base.v.powi(2) + base.w.norm_sqr())
                .sqrt()
                .max(1.0);
            assert!(
                delta / scale < 1e-4,
                "chart amplified a 1e-9 perturbation to {delta} at d = {}",
                d_invariant(f, &up)
            );
        }
    }

    #[test]
    fn json_shapes() {
        let f = Flux::new(0.5).unwrap();
        let lam = LambdaParams::new(1.0, -2.0, c(0.25, -0.5));
        let s = lam.to_json(f);
        assert!(s.starts_with("{\"alpha\":5.0000000000000000e-1,\"u\":"));
        assert!(s.contains("\"w_re\":2.5000000000000000e-1"));
        let up = UParams::new(PI, 0.0, 0.0, 1.0).unwrap();
        let s = up.to_json(f);
        assert!(s.contains("\"omega\":"));
        assert!(s.contains("\"q\":1.0000000000000000e0"));
    }
}
