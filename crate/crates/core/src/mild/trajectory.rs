use crate::error::{LabError, Result};
use crate::spectral::{SpectralField, WavenumberGrid};

/// Fields sampled at strictly increasing times `t₁ < … < t_M`, together
/// with the datum at the start time `t₀ < t₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryGrid {
    start: f64,
    initial: SpectralField,
    nodes: Vec<f64>,
    fields: Vec<SpectralField>,
}

/// Nodes `t_m = t₀ + (T - t₀)(m/M)^p`, `m = 1..=M`, clustered toward `t₀`.
pub fn graded_nodes(start: f64, end: f64, count: usize, exponent: f64) -> Vec<f64> {
    (1..=count)
        .map(|m| {
            if m == count {
                end
            } else {
                start + (end - start) * (m as f64 / count as f64).powf(exponent)
            }
        })
        .collect()
}

impl TrajectoryGrid {
    pub fn new(start: f64, initial: SpectralField, nodes: Vec<f64>, fields: Vec<SpectralField>) -> Result<Self> {
        if nodes.len() != fields.len() {
            return Err(LabError::ShapeMismatch {
                expected: nodes.len(),
                actual: fields.len(),
            });
        }
        let mut prev = start;
        for &t in &nodes {
            if !(t > prev) {
                return Err(LabError::InvalidArgument(format!(
                    "trajectory nodes must increase strictly from the start time {start}"
                )));
            }
            prev = t;
        }
        if fields.iter().any(|f| f.grid() != initial.grid()) {
            return Err(LabError::GridMismatch);
        }
        Ok(Self {
            start,
            initial,
            nodes,
            fields,
        })
    }

    /// Same nodes, every field zero.
    pub fn zeros_like(&self) -> Self {
        let z = SpectralField::zeros(self.grid());
        Self {
            start: self.start,
            initial: z.clone().with_time(self.start),
            nodes: self.nodes.clone(),
            fields: self.nodes.iter().map(|&t| z.clone().with_time(t)).collect(),
        }
    }

    pub fn grid(&self) -> &WavenumberGrid {
        self.initial.grid()
    }
    pub fn start(&self) -> f64 {
        self.start
    }
    pub fn end(&self) -> f64 {
        self.nodes.last().copied().unwrap_or(self.start)
    }
    pub fn initial(&self) -> &SpectralField {
        &self.initial
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn fields(&self) -> &[SpectralField] {
        &self.fields
    }
    pub fn field(&self, m: usize) -> &SpectralField {
        &self.fields[m]
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Field at an exact node time (or the start time).
    pub fn at_time(&self, t: f64) -> Option<&SpectralField> {
        if t == self.start {
            return Some(&self.initial);
        }
        self.nodes
            .binary_search_by(|x| x.total_cmp(&t))
            .ok()
            .map(|m| &self.fields[m])
    }

    fn same_nodes(&self, other: &Self) -> Result<()> {
        if self.nodes != other.nodes || self.start != other.start {
            return Err(LabError::InvalidArgument("trajectories have different nodes".into()));
        }
        if self.grid() != other.grid() {
            return Err(LabError::GridMismatch);
        }
        Ok(())
    }

    /// `self + alpha·other`, node by node (including the initial datum).
    pub fn axpy(&self, alpha: f64, other: &Self) -> Result<Self> {
        self.same_nodes(other)?;
        let fields = self
            .fields
            .iter()
            .zip(&other.fields)
            .map(|(a, b)| a.axpy(alpha, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            start: self.start,
            initial: self.initial.axpy(alpha, &other.initial)?,
            nodes: self.nodes.clone(),
            fields,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            start: self.start,
            initial: self.initial.scaled(alpha),
            nodes: self.nodes.clone(),
            fields: self.fields.iter().map(|f| f.scaled(alpha)).collect(),
        }
    }

    /// Replace the node fields, keeping nodes and initial datum.
    pub fn with_fields(&self, fields: Vec<SpectralField>) -> Result<Self> {
        Self::new(self.start, self.initial.clone(), self.nodes.clone(), fields)
    }
}

/// `Y(t) = e^{-(t - t₀)A²}u₀` at the given nodes.
pub fn heat_propagate(u0: &SpectralField, start: f64, nodes: &[f64]) -> Result<TrajectoryGrid> {
    let g = u0.grid().clone();
    let fields = nodes
        .iter()
        .map(|&t| {
            let dt = t - start;
            u0.scale_modes(|i| {
                let k = g.k_norm(i);
                (-dt * k * k).exp()
            })
            .with_time(t)
        })
        .collect();
    TrajectoryGrid::new(start, u0.clone().with_time(start), nodes.to_vec(), fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{build_grid, l2};
    use num_complex::Complex64;

    #[test]
    fn graded_nodes_end_exactly() {
        let n = graded_nodes(0.0, 0.7, 10, 2.0);
        assert_eq!(n.len(), 10);
        assert_eq!(*n.last().unwrap(), 0.7);
        assert!((n[0] - 0.007).abs() < 1e-15);
    }

    #[test]
    fn unit_mode_decays_by_e() {
        let g = build_grid(8, 2.0 * std::f64::consts::PI, 2.0 / 3.0).unwrap();
        let mut u0 = SpectralField::zeros(&g);
        let one = Complex64::new(1.0, 0.0);
        u0.set_coeff(g.index_of_mode([0, 1, 0]), [one; 3]);
        u0.set_coeff(g.index_of_mode([0, -1, 0]), [one; 3]);
        let y = heat_propagate(&u0, 0.0, &graded_nodes(0.0, 1.0, 8, 2.0)).unwrap();
        let idx = g.index_of_mode([0, 1, 0]);
        assert!((y.field(7).coeff(idx)[2].re - (-1.0f64).exp()).abs() < 1e-15);
        let norms: Vec<f64> = y.fields().iter().map(l2).collect();
        assert!(norms.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn rejects_non_increasing_nodes() {
        let g = build_grid(4, 1.0, 1.0).unwrap();
        let z = SpectralField::zeros(&g);
        assert!(TrajectoryGrid::new(0.0, z.clone(), vec![0.5, 0.5], vec![z.clone(), z]).is_err());
    }
}
