//! Closed-form Burgers solution `u = ∇w`, `w = -2 ln v`,
//! `v(t,x) = 1 - s^{-3/2} e^{-|x|²/(4s)}` with `s = t + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Time translation applied before evaluation: the oracle at clock time `t`
/// is the example at `t + t_shift`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExampleParams {
    pub t_shift: f64,
}

impl ExampleParams {
    pub fn new(t_shift: f64) -> Result<Self> {
        if !(t_shift >= 0.0 && t_shift.is_finite()) {
            return Err(LabError::InvalidArgument(format!("time shift must be >= 0, got {t_shift}")));
        }
        Ok(Self { t_shift })
    }

    /// `s = t + t_shift + 1`.
    pub fn s(&self, t: f64) -> Result<f64> {
        let tau = t + self.t_shift;
        if !(tau >= 0.0) {
            return Err(LabError::InvalidArgument(format!("evaluation time must be >= 0 after shift, got {tau}")));
        }
        Ok(tau + 1.0)
    }
}

/// Values and derivatives of the example at one space-time point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleJet {
    pub v: f64,
    pub u: [f64; 3],
    /// `grad_u[i][j] = ∂ᵢu_j`.
    pub grad_u: [[f64; 3]; 3],
    pub lap_u: [f64; 3],
    pub dt_u: [f64; 3],
    pub w: f64,
    pub dt_w: f64,
    pub lap_w: f64,
}

/// `(q, 1 - q)` with the second computed without cancellation.
fn q_and_v(s: f64, r2: f64) -> (f64, f64) {
    let e = 1.5 * s.ln() + r2 / (4.0 * s);
    ((-e).exp(), -(-e).exp_m1())
}

fn check_point(s: f64, r2: f64) -> Result<()> {
    if s == 1.0 && r2 == 0.0 {
        return Err(LabError::SingularPoint);
    }
    Ok(())
}

/// `(v, u)` at `(t, x)`.
pub fn eval_physical(t: f64, x: [f64; 3], params: &ExampleParams) -> Result<(f64, [f64; 3])> {
    let s = params.s(t)?;
    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    check_point(s, r2)?;
    let (q, v) = q_and_v(s, r2);
    let phi = q / v;
    Ok((v, x.map(|xi| -xi * phi / s)))
}

/// The radial profile `g = -φ/s` with `u(x) = g(|x|)·x`.
pub fn radial_profile(t: f64, r: f64, params: &ExampleParams) -> Result<f64> {
    let s = params.s(t)?;
    check_point(s, r * r)?;
    let (q, v) = q_and_v(s, r * r);
    Ok(-q / (v * s))
}

/// Values with analytic first/second space derivatives and time derivatives.
pub fn eval_jet(t: f64, x: [f64; 3], params: &ExampleParams) -> Result<OracleJet> {
    let s = params.s(t)?;
    let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    check_point(s, r2)?;
    let (q, v) = q_and_v(s, r2);
    let phi = q / v;
    let psi = q / (2.0 * s * s * v * v);
    let dt_q = q * (-1.5 / s + r2 / (4.0 * s * s));
    let dt_phi = dt_q / (v * v);
    let lap_bracket = 5.0 * psi - r2 * q * (1.0 + q) / (4.0 * s.powi(3) * v.powi(3));

    let u = x.map(|xi| -xi * phi / s);
    let mut grad_u = [[0.0; 3]; 3];
    for (i, row) in grad_u.iter_mut().enumerate() {
        for (j, g) in row.iter_mut().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            *g = -delta * phi / s + x[i] * x[j] * psi;
        }
    }
    Ok(OracleJet {
        v,
        u,
        grad_u,
        lap_u: x.map(|xj| xj * lap_bracket),
        dt_u: x.map(|xj| xj * phi / (s * s) - xj * dt_phi / s),
        w: -2.0 * v.ln(),
        dt_w: 2.0 * dt_q / v,
        lap_w: -3.0 * phi / s + r2 * psi,
    })
}

/// `∂ₜu + (u·∇)u - Δu` from analytic derivatives.
pub fn burgers_residual(t: f64, x: [f64; 3], params: &ExampleParams) -> Result<[f64; 3]> {
    let j = eval_jet(t, x, params)?;
    Ok(std::array::from_fn(|c| {
        let adv: f64 = (0..3).map(|i| j.u[i] * j.grad_u[i][c]).sum();
        j.dt_u[c] + adv - j.lap_u[c]
    }))
}

/// `∂ₜw + ½|∇w|² - Δw` from analytic derivatives.
pub fn hopf_cole_residual(t: f64, x: [f64; 3], params: &ExampleParams) -> Result<f64> {
    let j = eval_jet(t, x, params)?;
    let u2: f64 = j.u.iter().map(|c| c * c).sum();
    Ok(j.dt_w + 0.5 * u2 - j.lap_w)
}
