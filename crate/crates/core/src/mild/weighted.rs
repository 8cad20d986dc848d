use serde::{Deserialize, Serialize};

use super::trajectory::TrajectoryGrid;
use crate::error::{LabError, Result};
use crate::spectral::{norm_l2, MultiplierSpec, SpectralField};

/// Time profile of the Gevrey exponent `θ(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum LambdaProfile {
    /// `θ(t) = λ√t`.
    Constant(f64),
    /// `λ(t) = λ₀√(t/T)`, so `θ(t) = λ₀ t/√T`.
    SqrtRamp { lambda0: f64, horizon: f64 },
}

impl LambdaProfile {
    pub fn lambda(&self, t: f64) -> f64 {
        match *self {
            LambdaProfile::Constant(l) => l,
            LambdaProfile::SqrtRamp { lambda0, horizon } => lambda0 * (t / horizon).sqrt(),
        }
    }

    pub fn theta(&self, t: f64) -> f64 {
        self.lambda(t) * t.max(0.0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ZetaProfile {
    Zero,
    /// `ζ = λ²/4 + excess·ln⟨λ⟩` with `excess = r̃ - r` and `⟨λ⟩ = (1+λ²)^{1/2}`.
    Standard { excess: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Homogeneity {
    /// `A^{s₂}`.
    Homogeneous,
    /// `⟨A⟩^{s₂}`.
    Inhomogeneous,
}

/// Parameters of `sup_t e^{-ζ(t)} t^{s₁} ‖e^{θ(t)A} A^{s₂} v(t)‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedNormSpec {
    pub s1: f64,
    pub s2: f64,
    pub lambda: LambdaProfile,
    pub zeta: ZetaProfile,
    pub homogeneity: Homogeneity,
}

impl WeightedNormSpec {
    /// Plain `sup_t ‖v(t)‖`.
    pub fn plain() -> Self {
        Self::sobolev(0.0, 0.0)
    }

    pub fn sobolev(s1: f64, s2: f64) -> Self {
        Self {
            s1,
            s2,
            lambda: LambdaProfile::Constant(0.0),
            zeta: ZetaProfile::Zero,
            homogeneity: Homogeneity::Homogeneous,
        }
    }

    /// Exponents used by the contraction argument for data in `Ḣ^r`:
    /// `s₂ = r̃ = max(r, 5/4)` and `s₁ = r̃/2 - r/4 - 1/8`.
    pub fn for_data_regularity(r: f64) -> Self {
        let rt = r.max(1.25);
        Self::sobolev(rt / 2.0 - r / 4.0 - 0.125, rt)
    }

    pub fn with_lambda(mut self, lambda: LambdaProfile) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_zeta(mut self, zeta: ZetaProfile) -> Self {
        self.zeta = zeta;
        self
    }

    pub fn zeta(&self, t: f64) -> f64 {
        match self.zeta {
            ZetaProfile::Zero => 0.0,
            ZetaProfile::Standard { excess } => {
                let l = self.lambda.lambda(t);
                l * l / 4.0 + excess * 0.5 * (l * l).ln_1p()
            }
        }
    }

    /// Scalar weight `e^{-ζ(t)} t^{s₁}`.
    pub fn time_weight(&self, t: f64) -> f64 {
        let tw = if self.s1 == 0.0 { 1.0 } else { t.powf(self.s1) };
        (-self.zeta(t)).exp() * tw
    }

    pub fn multiplier(&self, t: f64) -> MultiplierSpec {
        let power = match self.homogeneity {
            Homogeneity::Homogeneous => MultiplierSpec::FracPower(self.s2),
            Homogeneity::Inhomogeneous => MultiplierSpec::InhomFracPower(self.s2),
        };
        let theta = self.lambda.theta(t);
        if theta == 0.0 {
            power
        } else {
            MultiplierSpec::Composite(vec![power, MultiplierSpec::Gevrey(theta)])
        }
    }

    /// Weighted instantaneous norm of one field at time `t`.
    pub fn instantaneous(&self, f: &SpectralField, t: f64) -> Result<f64> {
        Ok(self.time_weight(t) * norm_l2(f, &self.multiplier(t))?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedNormValue {
    pub value: f64,
    pub argmax_node: usize,
    pub argmax_time: f64,
}

/// Maximum of the weighted instantaneous norm over the trajectory nodes.
pub fn weighted_norm(traj: &TrajectoryGrid, spec: &WeightedNormSpec) -> Result<WeightedNormValue> {
    let mut best = WeightedNormValue {
        value: 0.0,
        argmax_node: 0,
        argmax_time: traj.nodes().first().copied().unwrap_or(traj.start()),
    };
    for (m, (&t, f)) in traj.nodes().iter().zip(traj.fields()).enumerate() {
        let v = spec.instantaneous(f, t).map_err(|e| match e {
            LabError::UnreliableWeight { theta, theta_max } => LabError::UnreliableWeightAtNode {
                node: m,
                time: t,
                theta,
                theta_max,
            },
            other => other,
        })?;
        if v > best.value {
            best = WeightedNormValue {
                value: v,
                argmax_node: m,
                argmax_time: t,
            };
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ramp_subadditivity() {
        // θ(s+t) ≤ λ√s + θ(t) with λ = λ₀ for the ramp on [0, T]
        let p = LambdaProfile::SqrtRamp { lambda0: 1.3, horizon: 2.0 };
        for i in 0..40 {
            for j in 0..40 {
                let s = 2.0 * i as f64 / 80.0;
                let t = 2.0 * j as f64 / 80.0;
                assert!(p.theta(s + t) <= 1.3 * s.sqrt() + p.theta(t) + 1e-14);
            }
        }
    }

    #[test]
    fn contraction_exponents() {
        let s = WeightedNormSpec::for_data_regularity(0.5);
        assert!((s.s2 - 1.25).abs() < 1e-15);
        assert!((s.s1 - 0.375).abs() < 1e-15);
    }
}
