//! Wave-direction criterion for the scalar bistable reaction.
//!
//! For f(u) = -u + beta (1-u) u^2 with beta > 4, the sign of the integral
//! of f from 0 to the upper root decides which stable state invades the
//! other; the integral vanishes exactly at beta = 4.5.

use super::reaction::{rhs_sys11, sys11_roots};
use super::PdeError;
use crate::numeric::simpson;

const PANELS: usize = 10_000;

/// Signed integral of the bistable reaction from 0 to its upper root.
pub fn wave_integral_criterion(beta: f64) -> Result<f64, PdeError> {
    let (_, rho0) = sys11_roots(beta)?;
    Ok(simpson(&|u| rhs_sys11(u, beta), 0.0, rho0, PANELS))
}

/// Closed-form antiderivative route for the same integral:
/// beta (rho0^3/3 - rho0^4/4) - rho0^2/2.
pub fn wave_integral_closed_form(beta: f64) -> Result<f64, PdeError> {
    let (_, rho0) = sys11_roots(beta)?;
    Ok(beta * (rho0.powi(3) / 3.0 - rho0.powi(4) / 4.0) - rho0 * rho0 / 2.0)
}
