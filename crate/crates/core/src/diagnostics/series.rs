//! Time series of Sobolev and Gevrey norms from torus runs or the oracle.

use rayon::prelude::*;
use serde::Serialize;

use super::radius::{estimate_radius, estimate_radius_oracle};
use crate::error::{LabError, Result};
use crate::mild::TrajectoryGrid;
use crate::oracle::{gevrey_norm_checked, gevrey_norm_sq, oracle_shells, ExampleParams, OracleNormOptions};
use crate::spectral::{besov_shell_norm, check_guard, norm_sq_unchecked, MultiplierSpec, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    TorusRun,
    Oracle,
}

/// Norms at one time. `None` marks an inadmissible weight, never a zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormRecord {
    pub time: f64,
    /// `J_r = ‖A^r u‖²`, one per entry of `r_list`.
    pub j: Vec<Option<f64>>,
    /// `G_r(λ) = ‖A^r e^{λ√t A}u‖²`, indexed `[r][λ]`.
    pub g: Vec<Vec<Option<f64>>>,
    pub shells: Vec<(i32, f64)>,
    pub l2: f64,
    /// `‖Au‖`; absent when infinite.
    pub h1: Option<f64>,
    pub rad_est: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormSeries {
    pub provenance: Provenance,
    pub r_list: Vec<f64>,
    pub lambda_list: Vec<f64>,
    pub records: Vec<NormRecord>,
}

/// Column selector for [`NormSeries::column`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    J(usize),
    G(usize, usize),
    L2,
    H1,
    Radius,
}

impl NormSeries {
    pub fn times(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.time).collect()
    }

    pub fn column(&self, q: Quantity) -> Vec<Option<f64>> {
        self.records
            .iter()
            .map(|rec| match q {
                Quantity::J(i) => rec.j.get(i).copied().flatten(),
                Quantity::G(i, l) => rec.g.get(i).and_then(|row| row.get(l)).copied().flatten(),
                Quantity::L2 => Some(rec.l2),
                Quantity::H1 => rec.h1,
                Quantity::Radius => rec.rad_est,
            })
            .collect()
    }

    /// Times and values where the column is present.
    pub fn present(&self, q: Quantity) -> (Vec<f64>, Vec<f64>) {
        self.records
            .iter()
            .zip(self.column(q))
            .filter_map(|(r, v)| v.map(|v| (r.time, v)))
            .unzip()
    }

    pub fn r_index(&self, r: f64) -> Option<usize> {
        self.r_list.iter().position(|&x| x == r)
    }

    pub fn lambda_index(&self, lambda: f64) -> Option<usize> {
        self.lambda_list.iter().position(|&x| x == lambda)
    }
}

fn finite(v: f64) -> Option<f64> {
    (v.is_finite() && v >= 0.0).then_some(v)
}

fn validate_lists(r_list: &[f64], lambda_list: &[f64]) -> Result<()> {
    if r_list.iter().chain(lambda_list).any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(LabError::InvalidArgument("r and lambda values must be finite and nonnegative".into()));
    }
    Ok(())
}

fn field_record(f: &SpectralField, r_list: &[f64], lambda_list: &[f64], with_radius: bool) -> NormRecord {
    let t = f.time();
    let j: Vec<Option<f64>> = r_list
        .iter()
        .map(|&r| finite(norm_sq_unchecked(f, &MultiplierSpec::FracPower(r))))
        .collect();
    let g = r_list
        .iter()
        .zip(&j)
        .map(|(&r, &jr)| {
            lambda_list
                .iter()
                .map(|&lambda| {
                    let theta = lambda * t.max(0.0).sqrt();
                    if theta == 0.0 {
                        return jr;
                    }
                    let m = MultiplierSpec::Composite(vec![MultiplierSpec::FracPower(r), MultiplierSpec::Gevrey(theta)]);
                    check_guard(f, &m).ok().and_then(|_| finite(norm_sq_unchecked(f, &m)))
                })
                .collect()
        })
        .collect();
    let rad = with_radius.then(|| estimate_radius(f)).filter(|e| e.reliable).map(|e| e.slope);
    NormRecord {
        time: t,
        j,
        g,
        shells: besov_shell_norm(f),
        l2: norm_sq_unchecked(f, &MultiplierSpec::identity()).sqrt(),
        h1: finite(norm_sq_unchecked(f, &MultiplierSpec::FracPower(1.0))).map(f64::sqrt),
        rad_est: rad,
    }
}

/// Norm series over stored torus fields (their own time stamps are used).
pub fn norm_series_fields(fields: &[SpectralField], r_list: &[f64], lambda_list: &[f64], with_radius: bool) -> Result<NormSeries> {
    validate_lists(r_list, lambda_list)?;
    let records = fields
        .par_iter()
        .map(|f| field_record(f, r_list, lambda_list, with_radius))
        .collect();
    Ok(NormSeries {
        provenance: Provenance::TorusRun,
        r_list: r_list.to_vec(),
        lambda_list: lambda_list.to_vec(),
        records,
    })
}

/// Norm series of a trajectory, including its initial state.
pub fn norm_series(traj: &TrajectoryGrid, r_list: &[f64], lambda_list: &[f64]) -> Result<NormSeries> {
    let mut fields = Vec::with_capacity(traj.len() + 1);
    fields.push(traj.initial().clone().with_time(traj.start()));
    fields.extend(traj.fields().iter().cloned());
    norm_series_fields(&fields, r_list, lambda_list, true)
}

/// Norm series of the exact example at the given clock times.
pub fn norm_series_oracle(
    times: &[f64],
    r_list: &[f64],
    lambda_list: &[f64],
    params: &ExampleParams,
    opts: &OracleNormOptions,
    with_radius: bool,
) -> Result<NormSeries> {
    validate_lists(r_list, lambda_list)?;
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(LabError::InvalidArgument("times must be strictly increasing".into()));
    }
    let records: Result<Vec<NormRecord>> = times
        .par_iter()
        .map(|&t| {
            let j: Vec<Option<f64>> = r_list
                .iter()
                .map(|&r| gevrey_norm_sq(t, r, 0.0, params).map(finite))
                .collect::<Result<_>>()?;
            let g = r_list
                .iter()
                .zip(&j)
                .map(|(&r, &jr)| {
                    lambda_list
                        .iter()
                        .map(|&lambda| {
                            if lambda == 0.0 || t == 0.0 {
                                return Ok(jr);
                            }
                            match gevrey_norm_checked(t, r, lambda, params, opts) {
                                Ok(v) => Ok(finite(v)),
                                Err(LabError::UnreliableWeight { .. }) => Ok(None),
                                Err(e) => Err(e),
                            }
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let l2 = gevrey_norm_sq(t, 0.0, 0.0, params)?.sqrt();
            let h1 = finite(gevrey_norm_sq(t, 1.0, 0.0, params)?).map(f64::sqrt);
            let rad_est = if with_radius && t > 0.0 {
                let e = estimate_radius_oracle(t, params)?;
                e.reliable.then_some(e.slope)
            } else {
                None
            };
            Ok(NormRecord {
                time: t,
                j,
                g,
                shells: oracle_shells(t, -4..=10, params)?,
                l2,
                h1,
                rad_est,
            })
        })
        .collect();
    Ok(NormSeries {
        provenance: Provenance::Oracle,
        r_list: r_list.to_vec(),
        lambda_list: lambda_list.to_vec(),
        records: records?,
    })
}
