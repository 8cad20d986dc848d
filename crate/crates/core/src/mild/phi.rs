//! Exponential-integrator φ-functions `φ₀ = e^z`, `φ_k(z) = Σ_j z^j/(j+k)!`.

const SERIES_RADIUS: f64 = 0.5;
const SERIES_TERMS: usize = 30;

/// `[φ₀(z), φ₁(z), φ₂(z), φ₃(z)]` for real `z`.
pub fn phi_functions(z: f64) -> [f64; 4] {
    let e = z.exp();
    if z.abs() < SERIES_RADIUS {
        let mut out = [e, 0.0, 0.0, 0.0];
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            // term_j = z^j/(j+k)!
            let mut fact = 1.0;
            for i in 2..=k {
                fact *= i as f64;
            }
            let mut term = 1.0 / fact;
            let mut sum = term;
            for j in 1..SERIES_TERMS {
                term *= z / (j + k) as f64;
                sum += term;
                if term.abs() < 1e-18 * sum.abs() {
                    break;
                }
            }
            *slot = sum;
        }
        out
    } else {
        let p1 = (e - 1.0) / z;
        let p2 = (e - 1.0 - z) / (z * z);
        let p3 = (e - 1.0 - z - 0.5 * z * z) / (z * z * z);
        [e, p1, p2, p3]
    }
}
