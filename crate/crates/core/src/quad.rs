//! One-dimensional quadrature: adaptive Gauss-Kronrod for smooth integrands,
//! tanh-sinh for algebraic endpoint singularities on the unit interval.

use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Globally adaptive Gauss-Kronrod (7/15) integration on `[a, b]`.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Quadrature {
    const MAX_SEGMENTS: usize = 4000;
    if a == b {
        return Quadrature {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    let (v, e) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, error: e });
    let mut total = v;
    let mut err = e;
    while err > abs_tol.max(rel_tol * total.abs()) && heap.len() < MAX_SEGMENTS {
        let worst = heap.pop().expect("heap never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // Re-sum to shed the drift accumulated by incremental updates.
    let mut segs: Vec<Segment> = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value = segs.iter().map(|s| s.value).sum::<f64>();
    let error = segs.iter().map(|s| s.error).sum::<f64>();
    Quadrature {
        value,
        error,
        converged: error <= abs_tol.max(rel_tol * value.abs()),
    }
}

/// Tanh-sinh quadrature on `[0, 1]`. The integrand receives both `x` and
/// `1 - x`, each computed without cancellation, so singular factors such as
/// `(1 - x)^(-5/8)` stay accurate near the right endpoint.
pub fn tanh_sinh_unit<F: Fn(f64, f64) -> f64>(f: F, rel_tol: f64) -> Quadrature {
    const T_MAX: f64 = 5.0;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let term = |tau: f64| {
        let u = half_pi * tau.sinh();
        let x = 1.0 / (1.0 + (-2.0 * u).exp());
        let xc = 1.0 / (1.0 + (2.0 * u).exp());
        let sech = 1.0 / u.cosh();
        let w = 0.5 * half_pi * tau.cosh() * sech * sech;
        if x <= 0.0 || xc <= 0.0 || w == 0.0 {
            0.0
        } else {
            w * f(x, xc)
        }
    };
    let mut h = 0.5;
    let mut sum = term(0.0);
    let mut k = 1;
    while (k as f64) * h <= T_MAX {
        let t = k as f64 * h;
        sum += term(t) + term(-t);
        k += 1;
    }
    let mut estimate = h * sum;
    for _level in 0..12 {
        h *= 0.5;
        // only odd multiples of the new step are new
        let mut k = 1;
        while (k as f64) * h <= T_MAX {
            let t = k as f64 * h;
            sum += term(t) + term(-t);
            k += 2;
        }
        let next = h * sum;
        let diff = (next - estimate).abs();
        estimate = next;
        if diff <= rel_tol * next.abs() {
            return Quadrature {
                value: next,
                error: diff,
                converged: true,
            };
        }
    }
    Quadrature {
        value: estimate,
        error: f64::NAN,
        converged: false,
    }
}

/// `∫₀¹ (1-s)^(a-1) s^(b-1) ds`, the Euler beta function, by tanh-sinh.
pub fn beta_by_quadrature(a: f64, b: f64) -> Quadrature {
    tanh_sinh_unit(|x, xc| xc.powf(a - 1.0) * x.powf(b - 1.0), 1e-13)
}

/// Integrate `exp(log_f(x))` over `[0, ∞)` for integrands that are unimodal
/// after an optional integrable singularity at 0. Returns the value split as
/// `(mantissa, log_scale)` so the result is `mantissa * exp(log_scale)`;
/// this keeps integrands of extreme magnitude (Gevrey weights) representable.
pub fn integrate_log_integrand<F: Fn(f64) -> f64>(log_f: F, scale: f64, rel_tol: f64) -> (f64, f64) {
    // Locate the peak on a geometric grid.
    let mut peak_x = scale;
    let mut peak = f64::NEG_INFINITY;
    let mut x = scale * 1e-4;
    while x < scale * 1e5 {
        let v = log_f(x);
        if v > peak {
            peak = v;
            peak_x = x;
        } else if x > 4.0 * peak_x && v < peak - 800.0 {
            break;
        }
        x *= 1.05;
    }
    if !peak.is_finite() {
        return (0.0, 0.0);
    }
    let f = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        let v = log_f(x) - peak;
        if v < -745.0 { 0.0 } else { v.exp() }
    };
    let mut total = 0.0;
    let mut a = 0.0;
    let mut b = peak_x * 2.0;
    let mut width = peak_x;
    for _ in 0..200 {
        let q = gauss_kronrod(&f, a, b, rel_tol * 0.1, 0.0);
        total += q.value;
        if a > peak_x && q.value.abs() <= 1e-17 * total.abs() {
            break;
        }
        a = b;
        b = a + width;
        width *= 1.5;
    }
    (total, peak)
}
