//! Gauss-Legendre and trapezoid quadrature.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights on [-1, 1], cached per order.
pub fn gauss_legendre(n: usize) -> Arc<Vec<(f64, f64)>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&n) {
        return v.clone();
    }
    let v = Arc::new(compute_gauss_legendre(n));
    cache.lock().unwrap().insert(n, v.clone());
    v
}

fn compute_gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    let m = (n + 1) / 2;
    for i in 0..m {
        // Newton iteration from the Chebyshev-flavored initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(x) and derivative by recurrence
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            // n == 1: p1 = x, p0 = 1
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        out.push((-x, w));
        if n - 1 - i != i {
            out.push((x, w));
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Integral of f over [a, b] with an n-point Gauss-Legendre rule.
pub fn integrate<F: FnMut(f64) -> f64>(a: f64, b: f64, n: usize, mut f: F) -> f64 {
    let nodes = gauss_legendre(n);
    let c = 0.5 * (b - a);
    let d = 0.5 * (b + a);
    nodes.iter().map(|&(t, w)| w * c * f(c * t + d)).sum()
}

/// Gauss-Legendre with node doubling until successive values agree to
/// `rel_tol` (relative), starting from `n0` points.
pub fn integrate_refine<F: FnMut(f64) -> f64>(
    a: f64,
    b: f64,
    n0: usize,
    rel_tol: f64,
    mut f: F,
) -> f64 {
    let mut n = n0.max(4);
    let mut prev = integrate(a, b, n, &mut f);
    for _ in 0..6 {
        n *= 2;
        let cur = integrate(a, b, n, &mut f);
        let scale = cur.abs().max(prev.abs()).max(1e-300);
        if (cur - prev).abs() <= rel_tol * scale {
            return cur;
        }
        prev = cur;
    }
    prev
}
