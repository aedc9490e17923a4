//! Gaussian tail functions and fixed-order quadrature rules.

use std::f64::consts::{PI, SQRT_2};
use std::sync::{Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use libm::erfc;
use statrs::function::erf::erfc_inv;

/// Beyond this magnitude `q_func` saturates to exactly 0 or 1.
pub const Q_SATURATION: f64 = 38.0;

/// Gaussian tail probability `Q(x) = P(Z > x)`.
pub fn q_func(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x > Q_SATURATION {
        0.0
    } else if x < -Q_SATURATION {
        1.0
    } else {
        0.5 * erfc(x / SQRT_2)
    }
}

/// Standard normal CDF.
pub fn norm_cdf(x: f64) -> f64 {
    q_func(-x)
}

/// `P(a <= Z < b)` for a standard normal, evaluated on whichever tail keeps precision.
pub fn norm_interval(a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let p = if a > 0.0 {
        q_func(a) - q_func(b)
    } else if b < 0.0 {
        norm_cdf(b) - norm_cdf(a)
    } else {
        1.0 - q_func(b) - norm_cdf(a)
    };
    p.max(0.0)
}

/// Inverse of the standard normal CDF.
pub fn norm_quantile(p: f64) -> f64 {
    if p <= 0.0 {
        f64::NEG_INFINITY
    } else if p >= 1.0 {
        f64::INFINITY
    } else {
        let x = -SQRT_2 * erfc_inv(2.0 * p);
        // One Halley step against the accurate CDF tightens the inverse.
        let pdf = norm_pdf(x);
        if pdf > 0.0 && x.is_finite() {
            let err = if x > 0.0 { (1.0 - p) - q_func(x) } else { norm_cdf(x) - p };
            let t = err / pdf;
            x - t / (1.0 + 0.5 * x * t)
        } else {
            x
        }
    }
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Nodes and weights of a quadrature rule.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn cached(cache: &'static OnceLock<Mutex<Vec<(usize, &'static Rule)>>>, order: usize, build: fn(usize) -> Rule) -> &'static Rule {
    let lock = cache.get_or_init(|| Mutex::new(Vec::new()));
    let mut rules = lock.lock().expect("quadrature cache poisoned");
    if let Some((_, r)) = rules.iter().find(|(o, _)| *o == order) {
        return r;
    }
    let rule: &'static Rule = Box::leak(Box::new(build(order)));
    rules.push((order, rule));
    rule
}

/// Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(order: usize) -> &'static Rule {
    static CACHE: OnceLock<Mutex<Vec<(usize, &'static Rule)>>> = OnceLock::new();
    cached(&CACHE, order, build_legendre)
}

fn build_legendre(order: usize) -> Rule {
    assert!(order >= 1);
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Newton iteration on P_n from the Chebyshev-like initial guess.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Hermite rule for the weight `exp(-x^2)` (Golub–Welsch).
pub fn gauss_hermite(order: usize) -> &'static Rule {
    static CACHE: OnceLock<Mutex<Vec<(usize, &'static Rule)>>> = OnceLock::new();
    cached(&CACHE, order, build_hermite)
}

fn build_hermite(order: usize) -> Rule {
    assert!(order >= 1);
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for i in 1..order {
        let b = (i as f64 / 2.0).sqrt();
        jacobi[(i, i - 1)] = b;
        jacobi[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], PI.sqrt() * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// `E[f(Z)]` for standard normal `Z` by Gauss–Hermite quadrature.
pub fn gaussian_expectation(order: usize, f: impl Fn(f64) -> f64) -> f64 {
    let rule = gauss_hermite(order);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| w * f(SQRT_2 * x))
        .sum::<f64>()
        / PI.sqrt()
}
