//! Empirical constants in the differential and integrated inequalities
//! linking `G_r(λ₀)` to `J_r`.

use super::bounds::{verdict_from_ratios, BoundCheckReport, BoundId, BoundParams, Verdict};
use super::series::{NormSeries, Quantity};
use crate::error::{LabError, Result};

/// Minimum samples per decade for the finite-difference derivative.
pub const MIN_POINTS_PER_DECADE: f64 = 50.0;

/// `R(t) = G(t) t^κ / ∫₀ᵗ s^{κ-1}J(s) ds`. The integral over `(0, t₀)` uses
/// `J ≈ J(t₀)`; the rest is the trapezoid rule in `ln s` on `s^κ J(s)`.
pub fn integrated_ratio(times: &[f64], g: &[f64], j: &[f64], kappa: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(times.len());
    if times.is_empty() {
        return out;
    }
    let mut integral = times[0].powf(kappa) / kappa * j[0];
    out.push(g[0] * times[0].powf(kappa) / integral);
    for i in 1..times.len() {
        let (a, b) = (times[i - 1], times[i]);
        integral += 0.5 * (b / a).ln() * (a.powf(kappa) * j[i - 1] + b.powf(kappa) * j[i]);
        out.push(g[i] * b.powf(kappa) / integral);
    }
    out
}

/// `(t G'(t) + κ G(t)) / J(t)` at interior samples, with `t G'` by
/// three-point central differences in `ln t`.
pub fn differential_ratio(times: &[f64], g: &[f64], j: &[f64], kappa: f64) -> (Vec<f64>, Vec<f64>) {
    let x: Vec<f64> = times.iter().map(|t| t.ln()).collect();
    let mut ts = Vec::new();
    let mut out = Vec::new();
    for i in 1..times.len().saturating_sub(1) {
        let (h0, h1) = (x[i] - x[i - 1], x[i + 1] - x[i]);
        let dg = (-h1 / (h0 * (h0 + h1))) * g[i - 1] + ((h1 - h0) / (h0 * h1)) * g[i] + (h0 / (h1 * (h0 + h1))) * g[i + 1];
        ts.push(times[i]);
        out.push((dg + kappa * g[i]) / j[i]);
    }
    (ts, out)
}

/// Minimal `K` for the chosen inequality over the series, with the verdict
/// that the bounding ratio has stabilized.
pub fn monitor_differential_inequality(
    series: &NormSeries,
    which: BoundId,
    kappa: f64,
    lambda0: f64,
) -> Result<BoundCheckReport> {
    let r = match which {
        BoundId::DifferentialHalf | BoundId::IntegralHalf => 0.5,
        BoundId::DifferentialZero | BoundId::IntegralZero => 0.0,
        other => return Err(LabError::InvalidArgument(format!("{other:?} is not a differential inequality"))),
    };
    if !(kappa > 0.0) {
        return Err(LabError::InvalidArgument("kappa must be positive".into()));
    }
    let ri = series
        .r_index(r)
        .ok_or_else(|| LabError::InvalidArgument(format!("series lacks r = {r}")))?;
    let li = series
        .lambda_index(lambda0)
        .ok_or_else(|| LabError::InvalidArgument(format!("series lacks lambda = {lambda0}")))?;
    let gcol = series.column(Quantity::G(ri, li));
    let jcol = series.column(Quantity::J(ri));
    let mut times = Vec::new();
    let mut g = Vec::new();
    let mut j = Vec::new();
    let mut skipped = 0;
    for ((rec, gv), jv) in series.records.iter().zip(gcol).zip(jcol) {
        match (gv, jv) {
            (Some(gv), Some(jv)) if rec.time > 0.0 && jv > 0.0 => {
                times.push(rec.time);
                g.push(gv);
                j.push(jv);
            }
            _ => skipped += 1,
        }
    }
    let params = BoundParams {
        lambda0,
        kappa,
        r,
        ..BoundParams::default()
    };
    let (ts, ratios, dense) = match which {
        BoundId::IntegralHalf | BoundId::IntegralZero => (times.clone(), integrated_ratio(&times, &g, &j, kappa), true),
        _ => {
            let decades = match (times.first(), times.last()) {
                (Some(a), Some(b)) if b > a => (b / a).log10(),
                _ => 0.0,
            };
            let dense = decades > 0.0 && (times.len() - 1) as f64 / decades >= MIN_POINTS_PER_DECADE;
            let (ts, rs) = differential_ratio(&times, &g, &j, kappa);
            (ts, rs, dense)
        }
    };
    let verdict = if dense { verdict_from_ratios(&ts, &ratios) } else { Verdict::Inconclusive };
    let k = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(BoundCheckReport {
        bound_id: which,
        params,
        time_range: (
            ts.first().copied().unwrap_or(f64::NAN),
            ts.last().copied().unwrap_or(f64::NAN),
        ),
        times: ts,
        ratios,
        verdict,
        fitted_constant: k,
        skipped,
        auxiliary: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log_times(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
    }

    #[test]
    fn central_difference_is_exact_for_quadratics_in_log_time() {
        let t = log_times(0.5, 50.0, 37);
        let g: Vec<f64> = t.iter().map(|t| 1.0 + 2.0 * t.ln() + 0.5 * t.ln().powi(2)).collect();
        let j = vec![1.0; t.len()];
        let (ts, r) = differential_ratio(&t, &g, &j, 0.0);
        for (tt, rr) in ts.iter().zip(r) {
            assert!((rr - (2.0 + tt.ln())).abs() < 1e-10);
        }
    }

    #[test]
    fn integrated_ratio_for_power_laws() {
        // J = t^p, G = J: R = (κ + p) exactly for the continuous integral
        let t = log_times(1e-3, 10.0, 801);
        let j: Vec<f64> = t.iter().map(|t| t.powf(-0.5)).collect();
        let r = integrated_ratio(&t, &j, &j, 4.0);
        assert!((r.last().unwrap() - 3.5).abs() < 1e-3, "{}", r.last().unwrap());
    }

    #[test]
    fn time_rescaling_leaves_ratios_unchanged() {
        let t = log_times(0.1, 10.0, 101);
        let j: Vec<f64> = t.iter().map(|t| (-t).exp() + 0.1).collect();
        let g: Vec<f64> = t.iter().map(|t| (-0.5 * t).exp()).collect();
        let scaled: Vec<f64> = t.iter().map(|t| 7.0 * t).collect();
        let a = integrated_ratio(&t, &g, &j, 2.0);
        let b = integrated_ratio(&scaled, &g, &j, 2.0);
        for (x, y) in a.iter().zip(&b) {
            assert!((x / y - 1.0).abs() < 1e-12);
        }
    }
}
