use crate::error::{LabError, Result};

/// Ordinary least-squares solution with coefficient standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub coeffs: Vec<f64>,
    pub stderr: Vec<f64>,
    pub rss: f64,
}

/// Solve `min ‖X β - y‖` by modified Gram–Schmidt QR. `columns[j][i]` is
/// entry `(i, j)` of `X`. Returns `None` for rank-deficient designs.
pub fn least_squares(columns: &[Vec<f64>], y: &[f64]) -> Option<LinearFit> {
    let p = columns.len();
    let m = y.len();
    if p == 0 || m < p || columns.iter().any(|c| c.len() != m) {
        return None;
    }
    let mut q: Vec<Vec<f64>> = columns.to_vec();
    let mut r = vec![vec![0.0; p]; p];
    for j in 0..p {
        for k in 0..j {
            let d: f64 = (0..m).map(|i| q[k][i] * q[j][i]).sum();
            r[k][j] = d;
            for i in 0..m {
                q[j][i] -= d * q[k][i];
            }
        }
        let norm = q[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale = columns[j].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-12 * scale || norm == 0.0 {
            return None;
        }
        r[j][j] = norm;
        q[j].iter_mut().for_each(|v| *v /= norm);
    }
    let qty: Vec<f64> = (0..p).map(|j| (0..m).map(|i| q[j][i] * y[i]).sum()).collect();
    let mut beta = vec![0.0; p];
    for j in (0..p).rev() {
        let mut v = qty[j];
        for k in j + 1..p {
            v -= r[j][k] * beta[k];
        }
        beta[j] = v / r[j][j];
    }
    let rss: f64 = (0..m)
        .map(|i| {
            let fit: f64 = (0..p).map(|j| columns[j][i] * beta[j]).sum();
            (y[i] - fit).powi(2)
        })
        .sum();
    // (XᵀX)⁻¹ = R⁻¹R⁻ᵀ; diagonal entries are row norms of R⁻¹.
    let mut rinv = vec![vec![0.0; p]; p];
    for j in 0..p {
        rinv[j][j] = 1.0 / r[j][j];
        for i in (0..j).rev() {
            let s: f64 = (i + 1..=j).map(|k| r[i][k] * rinv[k][j]).sum();
            rinv[i][j] = -s / r[i][i];
        }
    }
    let sigma2 = if m > p { rss / (m - p) as f64 } else { 0.0 };
    let stderr = (0..p)
        .map(|i| (sigma2 * (0..p).map(|k| rinv[i][k] * rinv[i][k]).sum::<f64>()).sqrt())
        .collect();
    Some(LinearFit { coeffs: beta, stderr, rss })
}

/// Log–log slope of `values` against `times` over `[t_lo, t_hi]`.
pub fn fit_decay_slope(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<(f64, f64)> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(values)
        .filter(|(t, v)| **t >= window.0 && **t <= window.1 && **v > 0.0 && v.is_finite())
        .map(|(t, v)| (t.ln(), v.ln()))
        .unzip();
    if xs.len() < 8 {
        return Err(LabError::InsufficientSamples {
            needed: 8,
            got: xs.len(),
        });
    }
    let ones = vec![1.0; xs.len()];
    let fit = least_squares(&[xs, ones], &ys)
        .ok_or_else(|| LabError::InvalidArgument("degenerate time window".into()))?;
    Ok((fit.coeffs[0], fit.stderr[0]))
}
