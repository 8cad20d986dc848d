//! Fourth-order exponential time differencing (Cox–Matthews ETDRK4) for
//! `û' = -|k|²û + N̂(u)` with `N(u) = -P(Mu·∇)u`.

use num_complex::Complex64;

use super::phi::phi_functions;
use super::trajectory::TrajectoryGrid;
use crate::error::{LabError, Result};
use crate::spectral::{l2, nonlinear_term, ModelConfig, SpectralField, WavenumberGrid};

/// Receives the state at every output time; must not keep the reference.
pub trait DiagnosticsHook {
    fn observe(&mut self, time: f64, field: &SpectralField);
}

impl<F: FnMut(f64, &SpectralField)> DiagnosticsHook for F {
    fn observe(&mut self, time: f64, field: &SpectralField) {
        self(time, field)
    }
}

/// Hook that ignores everything.
pub struct NoHook;

impl DiagnosticsHook for NoHook {
    fn observe(&mut self, _time: f64, _field: &SpectralField) {}
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarchOptions {
    pub t_start: f64,
    pub t_end: f64,
    pub dt: f64,
    /// Times at which the state is stored and passed to the hook, in
    /// `(t_start, t_end]`; `t_end` is always included.
    pub output_times: Vec<f64>,
    /// Advective step limit `dt ≤ cfl/(max|Mu|·k_max)`.
    pub cfl: f64,
    /// Steps between re-evaluations of the advective limit.
    pub cfl_check_every: usize,
    /// Abort when `‖u‖` exceeds this multiple of `‖u₀‖`.
    pub blowup_factor: f64,
    /// Also pass every intermediate step to the hook (nothing extra is stored).
    pub observe_every_step: bool,
}

impl MarchOptions {
    pub fn new(t_start: f64, t_end: f64, dt: f64) -> Self {
        Self {
            t_start,
            t_end,
            dt,
            output_times: vec![t_end],
            cfl: 1.0,
            cfl_check_every: 20,
            blowup_factor: 1e6,
            observe_every_step: false,
        }
    }

    pub fn with_outputs(mut self, times: Vec<f64>) -> Self {
        self.output_times = times;
        self
    }

    pub fn observing_every_step(mut self) -> Self {
        self.observe_every_step = true;
        self
    }

    /// Outputs every `cadence` time units.
    pub fn with_cadence(mut self, cadence: f64) -> Self {
        let span = self.t_end - self.t_start;
        let count = (span / cadence - 1e-9).ceil().max(1.0) as usize;
        self.output_times = (1..=count)
            .map(|i| {
                if i == count {
                    self.t_end
                } else {
                    self.t_start + span * i as f64 / count as f64
                }
            })
            .collect();
        self
    }

    fn validated_outputs(&self) -> Result<Vec<f64>> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(LabError::InvalidArgument(format!("time step must be positive, got {}", self.dt)));
        }
        if !(self.t_end > self.t_start) {
            return Err(LabError::InvalidArgument("t_end must exceed t_start".into()));
        }
        let mut out: Vec<f64> = self
            .output_times
            .iter()
            .copied()
            .filter(|&t| t > self.t_start && t < self.t_end)
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out.push(self.t_end);
        Ok(out)
    }
}

/// ETDRK4 coefficients tabulated by `|m|²` for one step size.
struct EtdTable {
    h: f64,
    e: Vec<f64>,
    e2: Vec<f64>,
    q: Vec<f64>,
    f1: Vec<f64>,
    f2: Vec<f64>,
    f3: Vec<f64>,
}

impl EtdTable {
    fn new(grid: &WavenumberGrid, h: f64) -> Self {
        let base2 = grid.base_wavenumber().powi(2);
        let size = grid.max_mode_sq() + 1;
        let mut t = Self {
            h,
            e: Vec::with_capacity(size),
            e2: Vec::with_capacity(size),
            q: Vec::with_capacity(size),
            f1: Vec::with_capacity(size),
            f2: Vec::with_capacity(size),
            f3: Vec::with_capacity(size),
        };
        for msq in 0..size {
            let z = -base2 * msq as f64 * h;
            let p = phi_functions(z);
            let ph = phi_functions(0.5 * z);
            t.e.push(p[0]);
            t.e2.push(ph[0]);
            t.q.push(0.5 * h * ph[1]);
            t.f1.push(h * (p[1] - 3.0 * p[2] + 4.0 * p[3]));
            t.f2.push(h * (p[2] - 2.0 * p[3]));
            t.f3.push(h * (4.0 * p[3] - p[2]));
        }
        t
    }
}

fn rhs(u: &SpectralField, cfg: &ModelConfig) -> Result<SpectralField> {
    Ok(nonlinear_term(u, u, cfg)?.scaled(-1.0))
}

fn combine<const N: usize, F>(grid: &WavenumberGrid, fields: [&SpectralField; N], f: F) -> SpectralField
where
    F: Fn(usize, [[Complex64; 3]; N]) -> [Complex64; 3] + Sync,
{
    let g = grid.clone();
    fields[0].map_modes(|i, _| f(g.mode_sq(i), fields.map(|x| x.coeff(i))))
}

fn lin(a: [Complex64; 3], ca: f64, b: [Complex64; 3], cb: f64) -> [Complex64; 3] {
    [a[0] * ca + b[0] * cb, a[1] * ca + b[1] * cb, a[2] * ca + b[2] * cb]
}

fn etdrk4_step(u: &SpectralField, tab: &EtdTable, cfg: &ModelConfig) -> Result<SpectralField> {
    let g = u.grid().clone();
    if cfg.is_linear() {
        return Ok(combine(&g, [u], |q, v| lin(v[0], tab.e[q], v[0], 0.0)));
    }
    let nu = rhs(u, cfg)?;
    let a = combine(&g, [u, &nu], |q, v| lin(v[0], tab.e2[q], v[1], tab.q[q]));
    let na = rhs(&a, cfg)?;
    let b = combine(&g, [u, &na], |q, v| lin(v[0], tab.e2[q], v[1], tab.q[q]));
    let nb = rhs(&b, cfg)?;
    let c = combine(&g, [&a, &nb, &nu], |q, v| {
        let mix = lin(v[1], 2.0, v[2], -1.0);
        lin(v[0], tab.e2[q], mix, tab.q[q])
    });
    let nc = rhs(&c, cfg)?;
    Ok(combine(&g, [u, &nu, &na, &nb, &nc], |q, v| {
        let s = lin(v[2], 1.0, v[3], 1.0);
        let head = lin(v[0], tab.e[q], v[1], tab.f1[q]);
        let tail = lin(s, 2.0 * tab.f2[q], v[4], tab.f3[q]);
        lin(head, 1.0, tail, 1.0)
    }))
}

/// Largest `|Mu(x)|` over the physical grid.
pub fn max_advection_speed(u: &SpectralField, cfg: &ModelConfig) -> f64 {
    if cfg.is_linear() {
        return 0.0;
    }
    let p = u.to_physical();
    (0..u.grid().len())
        .map(|i| {
            let v = [p[0][i], p[1][i], p[2][i]];
            let w: [f64; 3] = std::array::from_fn(|r| cfg.m[r][0] * v[0] + cfg.m[r][1] * v[1] + cfg.m[r][2] * v[2]);
            (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt()
        })
        .fold(0.0, f64::max)
}

/// Integrate from `u0` (taken at `opts.t_start`) and return the states at
/// the output times. Step sizes are shrunk so every output time is hit
/// exactly and the advective limit holds.
pub fn march(
    u0: &SpectralField,
    opts: &MarchOptions,
    cfg: &ModelConfig,
    hook: &mut dyn DiagnosticsHook,
) -> Result<TrajectoryGrid> {
    let outputs = opts.validated_outputs()?;
    let grid = u0.grid().clone();
    let k_max = grid.k_max();
    let initial = u0.clone().with_time(opts.t_start);
    let initial_norm = l2(&initial);
    hook.observe(opts.t_start, &initial);

    let mut u = initial.clone();
    let mut t = opts.t_start;
    let mut fields = Vec::with_capacity(outputs.len());
    let mut table: Option<EtdTable> = None;
    let mut step_limit = opts.dt;
    let mut steps_taken = 0usize;

    for &target in &outputs {
        while t < target {
            if steps_taken % opts.cfl_check_every.max(1) == 0 {
                let speed = max_advection_speed(&u, cfg);
                step_limit = if speed > 0.0 && k_max > 0.0 {
                    opts.dt.min(opts.cfl / (speed * k_max))
                } else {
                    opts.dt
                };
            }
            let remaining = target - t;
            let n = (remaining / step_limit - 1e-9).ceil().max(1.0);
            let h = remaining / n;
            let reuse = table.as_ref().is_some_and(|tab| tab.h == h);
            if !reuse {
                table = Some(EtdTable::new(&grid, h));
            }
            u = etdrk4_step(&u, table.as_ref().expect("table built"), cfg)?;
            steps_taken += 1;
            t = if n == 1.0 { target } else { t + h };
            let norm = l2(&u);
            if !norm.is_finite() || (initial_norm > 0.0 && norm > opts.blowup_factor * initial_norm) {
                return Err(LabError::BlowUp {
                    time: t,
                    norm,
                    initial_norm,
                });
            }
            if opts.observe_every_step && t < target {
                u.set_time(t);
                hook.observe(t, &u);
            }
        }
        u.set_time(target);
        hook.observe(target, &u);
        fields.push(u.clone());
    }
    TrajectoryGrid::new(opts.t_start, initial, outputs, fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mild::trajectory::heat_propagate;
    use crate::spectral::{build_grid, RandomFieldSpec};

    #[test]
    fn heat_only_matches_exact_propagation() {
        let g = build_grid(8, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
        let u0 = RandomFieldSpec::new(1.0, 3).generate(&g);
        let opts = MarchOptions::new(0.0, 0.5, 0.01).with_outputs(vec![0.1, 0.25, 0.5]);
        let traj = march(&u0, &opts, &ModelConfig::heat_only(), &mut NoHook).unwrap();
        let exact = heat_propagate(&u0, 0.0, traj.nodes()).unwrap();
        for (a, b) in traj.fields().iter().zip(exact.fields()) {
            assert!(l2(&a.sub(b).unwrap()) <= 1e-12 * l2(b));
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let g = build_grid(8, 1.0, 2.0 / 3.0).unwrap();
        let z = SpectralField::zeros(&g);
        let traj = march(&z, &MarchOptions::new(0.0, 0.1, 0.02), &ModelConfig::burgers(), &mut NoHook).unwrap();
        assert_eq!(l2(traj.field(0)), 0.0);
    }

    #[test]
    fn hook_sees_every_output() {
        let g = build_grid(8, 1.0, 2.0 / 3.0).unwrap();
        let z = SpectralField::zeros(&g);
        let mut seen = Vec::new();
        let mut hook = |t: f64, _: &SpectralField| seen.push(t);
        let opts = MarchOptions::new(0.0, 1.0, 0.1).with_cadence(0.25);
        march(&z, &opts, &ModelConfig::heat_only(), &mut hook).unwrap();
        assert_eq!(seen, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn hook_sees_every_step_when_asked() {
        let g = build_grid(8, 1.0, 2.0 / 3.0).unwrap();
        let z = SpectralField::zeros(&g);
        let mut seen = Vec::new();
        let mut hook = |t: f64, _: &SpectralField| seen.push(t);
        let opts = MarchOptions::new(0.0, 1.0, 0.1).observing_every_step();
        let traj = march(&z, &opts, &ModelConfig::heat_only(), &mut hook).unwrap();
        assert_eq!(seen.len(), 11);
        assert_eq!(traj.len(), 1);
    }
}
