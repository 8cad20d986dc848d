//! Duhamel term `B(u, v)(t) = -∫_{t₀}^t e^{-(t-s)A²} P(Mu(s)·∇)v(s) ds`.
//!
//! The integrand's nonlinear factor is interpolated linearly between nodes
//! and the heat kernel is integrated exactly against each linear piece, so
//! stiff high modes are handled without any step restriction.

use super::phi::phi_functions;
use super::trajectory::TrajectoryGrid;
use crate::error::{LabError, Result};
use crate::spectral::{nonlinear_term, ModelConfig, SpectralField, WavenumberGrid};

/// Panel coefficients `(e^{-z}, w_left, w_right)` for width `h`, tabulated by `|m|²`.
struct PanelTable {
    decay: Vec<f64>,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl PanelTable {
    fn new(grid: &WavenumberGrid, h: f64) -> Self {
        let base2 = grid.base_wavenumber().powi(2);
        let size = grid.max_mode_sq() + 1;
        let mut t = Self {
            decay: Vec::with_capacity(size),
            left: Vec::with_capacity(size),
            right: Vec::with_capacity(size),
        };
        for msq in 0..size {
            let p = phi_functions(-base2 * msq as f64 * h);
            t.decay.push(p[0]);
            t.left.push(h * (p[1] - p[2]));
            t.right.push(h * p[2]);
        }
        t
    }

    /// `e^{-hA²} acc + w_left·n_left + w_right·n_right`.
    fn advance(&self, acc: &SpectralField, n_left: &SpectralField, n_right: &SpectralField) -> SpectralField {
        let g = acc.grid().clone();
        acc.map_modes(|i, a| {
            let q = g.mode_sq(i);
            let (e, wl, wr) = (self.decay[q], self.left[q], self.right[q]);
            let l = n_left.coeff(i);
            let r = n_right.coeff(i);
            [
                a[0] * e + l[0] * wl + r[0] * wr,
                a[1] * e + l[1] * wl + r[1] * wr,
                a[2] * e + l[2] * wl + r[2] * wr,
            ]
        })
    }
}

fn check_pair(u: &TrajectoryGrid, v: &TrajectoryGrid) -> Result<()> {
    if u.nodes() != v.nodes() || u.start() != v.start() {
        return Err(LabError::InvalidArgument("trajectories must share nodes".into()));
    }
    if u.grid() != v.grid() {
        return Err(LabError::GridMismatch);
    }
    Ok(())
}

/// `B(u, v)` at every node of the shared time grid.
pub fn duhamel_all(u: &TrajectoryGrid, v: &TrajectoryGrid, cfg: &ModelConfig) -> Result<Vec<SpectralField>> {
    check_pair(u, v)?;
    let grid = u.grid().clone();
    let mut acc = SpectralField::zeros(&grid);
    let mut prev_t = u.start();
    let mut prev_n = nonlinear_term(u.initial(), v.initial(), cfg)?;
    let mut out = Vec::with_capacity(u.len());
    for (m, &t) in u.nodes().iter().enumerate() {
        let n = nonlinear_term(u.field(m), v.field(m), cfg)?;
        acc = PanelTable::new(&grid, t - prev_t).advance(&acc, &prev_n, &n);
        out.push(acc.scaled(-1.0).with_time(t));
        prev_t = t;
        prev_n = n;
    }
    Ok(out)
}

/// `B(u, v)(t)` for any `t` in `[t₀, T]`; between nodes the nonlinear
/// factor is taken from the same linear interpolant.
pub fn duhamel_bilinear(u: &TrajectoryGrid, v: &TrajectoryGrid, cfg: &ModelConfig, t: f64) -> Result<SpectralField> {
    check_pair(u, v)?;
    let grid = u.grid().clone();
    if !(t >= u.start() && t <= u.end()) {
        return Err(LabError::TimeOutOfRange {
            t,
            t_min: u.start(),
            t_max: u.end(),
        });
    }
    let mut acc = SpectralField::zeros(&grid);
    let mut prev_t = u.start();
    let mut prev_n = nonlinear_term(u.initial(), v.initial(), cfg)?;
    for (m, &tm) in u.nodes().iter().enumerate() {
        if prev_t >= t {
            break;
        }
        let n = nonlinear_term(u.field(m), v.field(m), cfg)?;
        if tm <= t {
            acc = PanelTable::new(&grid, tm - prev_t).advance(&acc, &prev_n, &n);
        } else {
            let frac = (t - prev_t) / (tm - prev_t);
            let n_t = prev_n.axpy(frac, &n.sub(&prev_n)?)?;
            acc = PanelTable::new(&grid, t - prev_t).advance(&acc, &prev_n, &n_t);
        }
        prev_t = tm;
        prev_n = n;
    }
    Ok(acc.scaled(-1.0).with_time(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mild::trajectory::{graded_nodes, heat_propagate};
    use crate::spectral::{build_grid, l2};

    #[test]
    fn zero_in_zero_out() {
        let g = build_grid(8, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
        let z = SpectralField::zeros(&g);
        let y = heat_propagate(&z, 0.0, &graded_nodes(0.0, 1.0, 6, 2.0)).unwrap();
        let b = duhamel_all(&y, &y, &ModelConfig::burgers()).unwrap();
        assert!(b.iter().all(|f| l2(f) == 0.0));
    }

    #[test]
    fn rejects_time_outside_range() {
        let g = build_grid(8, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
        let z = SpectralField::zeros(&g);
        let y = heat_propagate(&z, 0.0, &graded_nodes(0.0, 1.0, 6, 2.0)).unwrap();
        assert!(matches!(
            duhamel_bilinear(&y, &y, &ModelConfig::burgers(), 1.5),
            Err(LabError::TimeOutOfRange { .. })
        ));
    }
}
