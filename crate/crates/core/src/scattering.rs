//! The channel scattering matrix Sigma(k), the full angular kernel and the
//! differential cross-section.
//!
//! Scattering off the flux line mixes only the two critical channels
//! m = -1, 0. Their generalized eigenfunctions are fixed by the
//! coefficient matrix
//!
//!   [[xi1, xi2], [eta1, eta2]] =
//!     [[u g1 (k/2)^{2-2a}, conj(w) k/2], [w k/2, v g2 (k/2)^{2a}]] ,
//!
//! and N(k) = coefficients + e^{i pi D} normalizes them. Sigma is produced
//! from its explicit entries in terms of det N; the wave-operator product
//! Omega_+^* Omega_- is kept as an independent assembly route and used by
//! the tests to pin the phase conventions. All other channels scatter with
//! the pure-flux phases e^{2 i delta_m}, delta_m = (|m| - |m+a|) pi / 2,
//! which resum into the closed-form part of the angular kernel; the
//! kernel's forward delta term cos(pi a) delta(theta - theta_0) is
//! reported as metadata, never folded into pointwise values.

use crate::mat2::{Mat2, C64};
use crate::numfmt::float17;
use crate::params::{Flux, LambdaParams};
use std::f64::consts::PI;
use thiserror::Error;

/// Forward-cone half-width at the library level: the kernel has a delta
/// plus a 1/sin singularity at theta = theta_0 and pointwise values there
/// are meaningless.
pub const FORWARD_CONE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ScatteringError {
    #[error("momentum k = {0} must be positive")]
    NonPositiveMomentum(f64),
    #[error("theta - theta0 = {0} lies in the forward cone; the kernel is distributional there")]
    ForwardDirection(f64),
}

/// A 2x2 channel matrix at momentum k (rows/columns ordered m = -1, 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMatrix {
    pub entries: Mat2,
    pub k: f64,
}

impl ChannelMatrix {
    /// max |Sigma* Sigma - I|; zero for exact unitarity.
    pub fn unitarity_deficit(&self) -> f64 {
        self.entries.unitarity_deficit()
    }

    /// {"k": ..., "entries": [[re, im] x4]} row-major.
    pub fn to_json(&self) -> String {
        let e: Vec<String> = self
            .entries
            .e
            .iter()
            .map(|z| format!("[{},{}]", float17(z.re), float17(z.im)))
            .collect();
        format!("{{\"k\":{},\"entries\":[{}]}}", float17(self.k), e.join(","))
    }
}

/// Pointwise sample of the smooth part of the angular kernel, with the
/// coefficient of the forward delta term carried separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSample {
    pub k: f64,
    pub theta: f64,
    pub theta0: f64,
    pub value: C64,
    /// cos(pi alpha), the weight of delta(theta - theta_0).
    pub delta_coefficient: f64,
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn check_k(k: f64) -> Result<(), ScatteringError> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(ScatteringError::NonPositiveMomentum(k))
    }
}

/// The generalized-eigenfunction coefficient matrix at momentum k.
pub fn coefficient_matrix(flux: Flux, lam: &LambdaParams, k: f64) -> Result<Mat2, ScatteringError> {
    check_k(k)?;
    Ok(coefficients(flux, lam, k))
}

fn coefficients(flux: Flux, lam: &LambdaParams, k: f64) -> Mat2 {
    let alpha = flux.alpha();
    let s = 0.5 * k;
    Mat2::new(
        c(lam.u * flux.gamma_ratio_first() * s.powf(2.0 - 2.0 * alpha)),
        lam.w.conj() * s,
        lam.w * s,
        c(lam.v * flux.gamma_ratio_second() * s.powf(2.0 * alpha)),
    )
}

/// N(k) = coefficients + e^{i pi D}.
pub fn n_matrix(flux: Flux, lam: &LambdaParams, k: f64) -> Result<Mat2, ScatteringError> {
    check_k(k)?;
    Ok(coefficients(flux, lam, k).add(&flux.exp_i_pi_d()))
}

/// N~(k) = coefficients + e^{-i pi D}; satisfies N~* N~ = N* N.
pub fn n_tilde_matrix(flux: Flux, lam: &LambdaParams, k: f64) -> Result<Mat2, ScatteringError> {
    check_k(k)?;
    Ok(coefficients(flux, lam, k).add(&flux.exp_minus_i_pi_d()))
}

/// Scalar ingredients shared by det N and the Sigma entries.
struct Pieces {
    /// (uv/(a(1-a)) - |w|^2) k^2 / 4
    quad: f64,
    /// u Gamma(a) k^{2-2a} / (2^{2-2a} Gamma(2-a))
    t_u: f64,
    /// v Gamma(1-a) k^{2a} / (2^{2a} Gamma(1+a))
    t_v: f64,
    /// e^{i pi a}
    phase: C64,
}

fn pieces(flux: Flux, lam: &LambdaParams, k: f64) -> Pieces {
    let alpha = flux.alpha();
    let s = 0.5 * k;
    Pieces {
        quad: (lam.u * lam.v / (alpha * (1.0 - alpha)) - lam.w.norm_sqr()) * s * s,
        t_u: lam.u * flux.gamma_ratio_first() * s.powf(2.0 - 2.0 * alpha),
        t_v: lam.v * flux.gamma_ratio_second() * s.powf(2.0 * alpha),
        phase: C64::cis(PI * alpha),
    }
}

/// Closed form of det N(k); must equal the determinant of
/// `n_matrix` and is nonvanishing for every k >= 0.
pub fn det_n(flux: Flux, lam: &LambdaParams, k: f64) -> Result<C64, ScatteringError> {
    check_k(k)?;
    let p = pieces(flux, lam, k);
    Ok(c(p.quad) + p.phase * p.t_u - p.phase.conj() * p.t_v - c(1.0))
}

/// det N analytically continued to k = i p with the branch
/// (e^{i phi})^nu = e^{i phi nu}: equals -(p/2)^2 (F(p) - |w|^2), so it
/// vanishes exactly at the bound states.
pub fn det_n_continued(flux: Flux, lam: &LambdaParams, p: f64) -> Result<C64, ScatteringError> {
    check_k(p)?;
    let alpha = flux.alpha();
    let s = 0.5 * p;
    let quad = (lam.u * lam.v / (alpha * (1.0 - alpha)) - lam.w.norm_sqr()) * (-(s * s));
    let phase = C64::cis(PI * alpha);
    // (ik)^{2-2a} = k^{2-2a} e^{i pi (1-a)}, (ik)^{2a} = k^{2a} e^{i pi a}
    let t_u = C64::from_polar(
        lam.u.abs() * flux.gamma_ratio_first() * s.powf(2.0 - 2.0 * alpha),
        PI * (1.0 - alpha),
    ) * lam.u.signum();
    let t_v = C64::from_polar(
        lam.v.abs() * flux.gamma_ratio_second() * s.powf(2.0 * alpha),
        PI * alpha,
    ) * lam.v.signum();
    Ok(c(quad) + phase * t_u - phase.conj() * t_v - c(1.0))
}

/// Omega_-(k) = diag(-e^{-i pi a/2}, e^{i pi a/2}), k-independent.
pub fn omega_minus(flux: Flux) -> Mat2 {
    let alpha = flux.alpha();
    Mat2::diag(-C64::cis(-0.5 * PI * alpha), C64::cis(0.5 * PI * alpha))
}

/// Omega_+(k) = N N~^{-1} Omega_-^{-1}, from
/// Omega_+^{-1} = Omega_- N~(k) N(k)^{-1}. Unitary because N~* N~ = N* N.
pub fn omega_plus(flux: Flux, lam: &LambdaParams, k: f64) -> Result<Mat2, ScatteringError> {
    let n = n_matrix(flux, lam, k)?;
    let nt = n_tilde_matrix(flux, lam, k)?;
    let alpha = flux.alpha();
    let om_inv = Mat2::diag(-C64::cis(0.5 * PI * alpha), C64::cis(-0.5 * PI * alpha));
    Ok(n
        .mul(&nt.inverse().expect("det N~ is nonvanishing for k > 0"))
        .mul(&om_inv))
}

/// The channel scattering matrix from its explicit entries.
pub fn sigma(flux: Flux, lam: &LambdaParams, k: f64) -> Result<ChannelMatrix, ScatteringError> {
    check_k(k)?;
    let p = pieces(flux, lam, k);
    let det = c(p.quad) + p.phase * p.t_u - p.phase.conj() * p.t_v - c(1.0);
    let s11 = (p.phase.conj() * p.quad + c(p.t_u) - c(p.t_v) - p.phase) / det;
    let s22 = (p.phase * p.quad + c(p.t_u) - c(p.t_v) - p.phase.conj()) / det;
    let coupling = C64::new(0.0, -1.0) * (PI * flux.alpha()).sin() * k / det;
    let s12 = coupling * lam.w.conj();
    let s21 = coupling * lam.w;
    Ok(ChannelMatrix {
        entries: Mat2::new(s11, s12, s21, s22),
        k,
    })
}

/// Independent assembly Sigma = Omega_+^* Omega_-; test route only.
pub fn sigma_from_wave_operators(
    flux: Flux,
    lam: &LambdaParams,
    k: f64,
) -> Result<ChannelMatrix, ScatteringError> {
    let op = omega_plus(flux, lam, k)?;
    Ok(ChannelMatrix {
        entries: op.adjoint().mul(&omega_minus(flux)),
        k,
    })
}

/// Special case w = 0 (conserved angular momentum): Sigma is diagonal.
pub fn sigma_diagonal_case(
    flux: Flux,
    lam: &LambdaParams,
    k: f64,
) -> Result<ChannelMatrix, ScatteringError> {
    check_k(k)?;
    let alpha = flux.alpha();
    let s = 0.5 * k;
    let e = C64::cis(PI * alpha);
    let a = lam.u * crate::specialfn::gamma(alpha) * s.powf(2.0 - 2.0 * alpha);
    let ga2 = crate::specialfn::gamma(2.0 - alpha);
    let b = lam.v * crate::specialfn::gamma(1.0 - alpha) * s.powf(2.0 * alpha);
    let gb2 = crate::specialfn::gamma(1.0 + alpha);
    let first = (c(a) - e * ga2) / (e * a - c(ga2));
    let second = (c(b) + e.conj() * gb2) / (e.conj() * b + c(gb2));
    Ok(ChannelMatrix {
        entries: Mat2::diag(first, second),
        k,
    })
}

/// Special case u = v = 0 (maximal nonconservation):
/// Sigma = Q^{-1} [[e^{-i pi a}|w|^2 k^2/4 + e^{i pi a}, i sin(pi a) conj(w) k],
///                 [i sin(pi a) w k, e^{i pi a}|w|^2 k^2/4 + e^{-i pi a}]],
/// Q = |w|^2 k^2/4 + 1.
pub fn sigma_offdiagonal_case(
    flux: Flux,
    lam: &LambdaParams,
    k: f64,
) -> Result<ChannelMatrix, ScatteringError> {
    check_k(k)?;
    let alpha = flux.alpha();
    let w2k = lam.w.norm_sqr() * k * k / 4.0;
    let q = w2k + 1.0;
    let e = C64::cis(PI * alpha);
    let i_sin = C64::new(0.0, (PI * alpha).sin());
    Ok(ChannelMatrix {
        entries: Mat2::new(
            e.conj() * w2k + e,
            i_sin * lam.w.conj() * k,
            i_sin * lam.w * k,
            e * w2k + e.conj(),
        )
        .scale(c(1.0 / q)),
        k,
    })
}

/// Special case alpha = 1/2:
/// Sigma = Q^{-1} [[-i - i(uv - |w|^2/4)k^2 + (u-v)k, -i conj(w) k],
///                 [-i w k, i + i(uv - |w|^2/4)k^2 + (u-v)k]],
/// Q = -1 + (uv - |w|^2/4)k^2 + i(u+v)k.
pub fn sigma_half_flux_case(lam: &LambdaParams, k: f64) -> Result<ChannelMatrix, ScatteringError> {
    check_k(k)?;
    let d = lam.u * lam.v - 0.25 * lam.w.norm_sqr();
    let q = C64::new(d * k * k - 1.0, (lam.u + lam.v) * k);
    let i = C64::new(0.0, 1.0);
    let diff = (lam.u - lam.v) * k;
    Ok(ChannelMatrix {
        entries: Mat2::new(
            (-i - i * (d * k * k) + c(diff)) / q,
            -i * lam.w.conj() * k / q,
            -i * lam.w * k / q,
            (i + i * (d * k * k) + c(diff)) / q,
        ),
        k,
    })
}

/// Smooth part of the angular kernel S(k; theta, theta0):
///
///   (1/2pi) sin(pi a) e^{-i(theta-theta0)/2} / sin((theta-theta0)/2)
///   + (1/2pi) sum_{m,n=-1}^{0} (Sigma_{m+2,n+2} - e^{-(2m+1) i pi a} d_{mn})
///     e^{i(m theta - n theta0)} ,
///
/// with the delta term cos(pi a) delta(theta - theta0) reported separately.
pub fn kernel(
    flux: Flux,
    lam: &LambdaParams,
    k: f64,
    theta: f64,
    theta0: f64,
) -> Result<KernelSample, ScatteringError> {
    let sig = sigma(flux, lam, k)?;
    kernel_with_sigma(flux, &sig, theta, theta0)
}

/// Kernel evaluation reusing a precomputed Sigma(k) (grid sweeps).
pub fn kernel_with_sigma(
    flux: Flux,
    sig: &ChannelMatrix,
    theta: f64,
    theta0: f64,
) -> Result<KernelSample, ScatteringError> {
    let alpha = flux.alpha();
    let half = 0.5 * (theta - theta0);
    if half.sin().abs() <= FORWARD_CONE {
        return Err(ScatteringError::ForwardDirection(theta - theta0));
    }
    let ab_part = C64::from_polar(1.0, -half) * ((PI * alpha).sin() / half.sin());
    let mut correction = C64::ZERO;
    for (i, m) in [(0usize, -1.0f64), (1, 0.0)] {
        for (j, n) in [(0usize, -1.0f64), (1, 0.0)] {
            let mut term = sig.entries.at(i, j);
            if i == j {
                term -= C64::cis(-(2.0 * m + 1.0) * PI * alpha);
            }
            correction += term * C64::cis(m * theta - n * theta0);
        }
    }
    Ok(KernelSample {
        k: sig.k,
        theta,
        theta0,
        value: (ab_part + correction) / (2.0 * PI),
        delta_coefficient: (PI * alpha).cos(),
    })
}

/// Differential cross-section d sigma / d theta = (2 pi / k) |S|^2.
pub fn cross_section(
    flux: Flux,
    lam: &LambdaParams,
    k: f64,
    theta: f64,
    theta0: f64,
) -> Result<f64, ScatteringError> {
    let sample = kernel(flux, lam, k, theta, theta0)?;
    Ok(2.0 * PI / k * sample.value.norm_sqr())
}
