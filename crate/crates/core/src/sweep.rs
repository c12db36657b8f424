//! Deterministic cartesian sweeps over the (u, v, |w|) coupling grid.
//!
//! Each grid point gets its bound-state count and momenta plus the channel
//! scattering matrix at a fixed momentum k. Points are independent, so the
//! evaluation fans out through [`crate::batch`]; rows come back in
//! lexicographic (u, v, |w|) index order no matter how the work was
//! scheduled, byte-for-byte reproducible.

use crate::batch;
use crate::mat2::C64;
use crate::params::{Flux, LambdaParams};
use crate::scattering::{sigma, ChannelMatrix};
use crate::spectrum::find_bound_states;
use thiserror::Error;

/// Hard cap on the number of grid points.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SweepError {
    #[error("sweep grid has {0} points, above the {MAX_POINTS} cap")]
    OversizeGrid(usize),
    #[error("momentum k = {0} must be positive")]
    NonPositiveMomentum(f64),
}

/// Axis values of the sweep grid; `w_values` are |w| magnitudes applied as
/// real nonnegative couplings.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub flux: Flux,
    pub u_values: Vec<f64>,
    pub v_values: Vec<f64>,
    pub w_values: Vec<f64>,
    /// Momentum at which Sigma is evaluated per point.
    pub k: f64,
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub u: f64,
    pub v: f64,
    pub w_abs: f64,
    /// Bound-state count with multiplicity.
    pub count: usize,
    /// Momenta of the distinct bound states, ascending (at most two).
    pub momenta: Vec<f64>,
    pub sigma: ChannelMatrix,
}

impl SweepSpec {
    pub fn point_count(&self) -> usize {
        self.u_values.len() * self.v_values.len() * self.w_values.len()
    }

    /// Evaluate the full grid in deterministic row order.
    pub fn run(&self) -> Result<Vec<SweepPoint>, SweepError> {
        if !(self.k.is_finite() && self.k > 0.0) {
            return Err(SweepError::NonPositiveMomentum(self.k));
        }
        let total = self.point_count();
        if total > MAX_POINTS {
            return Err(SweepError::OversizeGrid(total));
        }
        let mut cells = Vec::with_capacity(total);
        for &u in &self.u_values {
            for &v in &self.v_values {
                for &w in &self.w_values {
                    cells.push((u, v, w));
                }
            }
        }
        let flux = self.flux;
        let k = self.k;
        Ok(batch::map(&cells, move |&(u, v, w)| {
            evaluate_point(flux, u, v, w, k)
        }))
    }
}

fn evaluate_point(flux: Flux, u: f64, v: f64, w_abs: f64, k: f64) -> SweepPoint {
    let lam = LambdaParams::new(u, v, C64::new(w_abs, 0.0));
    let report = find_bound_states(flux, &lam);
    SweepPoint {
        u,
        v,
        w_abs,
        count: report.count,
        momenta: report.states.iter().map(|s| s.p).collect(),
        sigma: sigma(flux, &lam, k).expect("k validated positive"),
    }
}
