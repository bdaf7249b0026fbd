//! Scalar and vector spherical harmonics.
//!
//! Y_n^m(theta, phi) = C_n^m P_n^|m|(cos theta) e^{i m phi} with the fully
//! normalized associated Legendre recurrence (the normalization constant is
//! folded into the ladder, so no factorial overflow for any order). No
//! Condon-Shortley phase.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Index pair (n, m) with |m| <= n enforced at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SphericalHarmonicIndex {
    n: u32,
    m: i32,
}

impl SphericalHarmonicIndex {
    pub fn new(n: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > n {
            return Err(Error::Domain(format!(
                "harmonic index |m| <= n violated: n={n}, m={m}"
            )));
        }
        Ok(SphericalHarmonicIndex { n, m })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> i32 {
        self.m
    }
}

/// Normalized Legendre ladders at fixed order m >= 0: for n = m..nmax,
/// p = Pbar_n^m(cos theta), q = p / sin(theta), dq = d(q)/d(theta).
///
/// q and dq are built by their own recurrences (no division), so they stay
/// finite at the poles for every m >= 1. The 1/sqrt(4 pi) of Y_n^m is folded
/// into the normalization.
struct Ladders {
    p: Vec<f64>,
    q: Vec<f64>,
    dq: Vec<f64>,
}

fn legendre_ladders(nmax: u32, m: u32, cos_t: f64, sin_t: f64) -> Ladders {
    let len = (nmax - m + 1) as usize;
    let mut p = vec![0.0; len];
    let mut q = vec![0.0; len];
    let mut dq = vec![0.0; len];
    let mut c = 1.0 / (4.0 * std::f64::consts::PI).sqrt();
    for j in 1..=m {
        c *= ((2 * j + 1) as f64 / (2 * j) as f64).sqrt();
    }
    if m == 0 {
        p[0] = c;
        // q, dq are only consumed multiplied by m = 0 in that case
    } else {
        let spm1 = sin_t.powi(m as i32 - 1);
        q[0] = c * spm1;
        p[0] = q[0] * sin_t;
        dq[0] = if m >= 2 {
            c * (m - 1) as f64 * sin_t.powi(m as i32 - 2) * cos_t
        } else {
            0.0
        };
    }
    if nmax > m {
        let fac = ((2 * m + 3) as f64).sqrt();
        p[1] = fac * cos_t * p[0];
        q[1] = fac * cos_t * q[0];
        dq[1] = fac * (cos_t * dq[0] - sin_t * q[0]);
        for n in (m + 2)..=nmax {
            let i = (n - m) as usize;
            let nn = n as f64;
            let mm = m as f64;
            let a = ((4.0 * nn * nn - 1.0) / (nn * nn - mm * mm)).sqrt();
            let b = (((nn - 1.0) * (nn - 1.0) - mm * mm) / (4.0 * (nn - 1.0) * (nn - 1.0) - 1.0))
                .sqrt();
            p[i] = a * (cos_t * p[i - 1] - b * p[i - 2]);
            q[i] = a * (cos_t * q[i - 1] - b * q[i - 2]);
            dq[i] = a * (cos_t * dq[i - 1] - sin_t * q[i - 1] - b * dq[i - 2]);
        }
    }
    Ladders { p, q, dq }
}

/// Angular data for one (n, m) at (theta, phi): the harmonic, its first and
/// second theta-derivatives, Y/sin(theta) and d(Y/sin)/d(theta), all finite
/// at the poles.
#[derive(Clone, Copy, Debug)]
pub struct AngularFunctions {
    pub y: Complex64,
    pub dy: Complex64,
    pub ddy: Complex64,
    pub y_over_sin: Complex64,
    pub dy_over_sin: Complex64,
}

pub fn angular_functions(n: u32, m: i32, theta: f64, phi: f64) -> AngularFunctions {
    let am = m.unsigned_abs();
    debug_assert!(am <= n);
    let (ct, st) = (theta.cos(), theta.sin());
    let lad = legendre_ladders(n, am, ct, st);
    let i = (n - am) as usize;
    let pn = lad.p[i];
    let (qn, dqn) = (lad.q[i], lad.dq[i]);
    // gamma_{n,m} = sqrt((2n+1)(n^2 - m^2)/(2n-1)) in
    //   sin * dP_n^m = n cos P_n^m - gamma P_{n-1}^m
    let gamma = if n == am || n == 0 {
        0.0
    } else {
        ((2 * n + 1) as f64 * ((n * n - am * am) as f64) / (2 * n - 1) as f64).sqrt()
    };
    let (dpn, ddpn) = if am == 0 {
        let dp = if n == 0 || st < 1e-12 {
            0.0
        } else {
            (n as f64 * ct * pn - gamma * lad.p[i - 1]) / st
        };
        let ddp = if n == 0 {
            0.0
        } else if st < 1e-8 {
            -0.5 * (n * (n + 1)) as f64 * pn
        } else {
            -((n * (n + 1)) as f64) * pn - ct / st * dp
        };
        (dp, ddp)
    } else {
        let qnm1 = if n == am { 0.0 } else { lad.q[i - 1] };
        let dqnm1 = if n == am { 0.0 } else { lad.dq[i - 1] };
        let dp = n as f64 * ct * qn - gamma * qnm1;
        let ddp = n as f64 * (ct * dqn - st * qn) - gamma * dqnm1;
        (dp, ddp)
    };
    let e = Complex64::from_polar(1.0, m as f64 * phi);
    AngularFunctions {
        y: pn * e,
        dy: dpn * e,
        ddy: ddpn * e,
        y_over_sin: qn * e,
        dy_over_sin: dqn * e,
    }
}

/// Y_n^m(theta, phi).
pub fn spherical_harmonic(idx: SphericalHarmonicIndex, theta: f64, phi: f64) -> Complex64 {
    angular_functions(idx.n, idx.m, theta, phi).y
}

/// The orthogonal vector basis attached to (n, m) evaluated at a point of
/// the unit sphere, in Cartesian components.
#[derive(Clone, Copy, Debug)]
pub struct VectorHarmonicTriple {
    pub i_vec: [Complex64; 3],
    pub t_vec: [Complex64; 3],
    pub n_vec: [Complex64; 3],
}

pub(crate) fn unit_vectors(theta: f64, phi: f64) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let (st, ct) = (theta.sin(), theta.cos());
    let (sp, cp) = (phi.sin(), phi.cos());
    let nu = [st * cp, st * sp, ct];
    let th = [ct * cp, ct * sp, -st];
    let ph = [-sp, cp, 0.0];
    (nu, th, ph)
}

/// Surface gradient of Y_n^m in Cartesian components.
pub fn surface_gradient_y(n: u32, m: i32, theta: f64, phi: f64) -> [Complex64; 3] {
    let af = angular_functions(n, m, theta, phi);
    let (_, th, ph) = unit_vectors(theta, phi);
    let im = Complex64::new(0.0, m as f64);
    let fphi = im * af.y_over_sin;
    [
        af.dy * th[0] + fphi * ph[0],
        af.dy * th[1] + fphi * ph[1],
        af.dy * th[2] + fphi * ph[2],
    ]
}

/// I_n^m, T_n^m, N_n^m at (theta, phi).
///
/// I_n^m = grad_S Y_{n+1}^m + (n+1) Y_{n+1}^m nu   (|m| <= n+1)
/// T_n^m = grad_S Y_n^m  x nu                      (n >= 1, |m| <= n)
/// N_n^m = -grad_S Y_{n-1}^m + n Y_{n-1}^m nu      (n >= 1, |m| <= n-1)
///
/// Components outside their index range come back as zero vectors.
pub fn vector_spherical_harmonics(n: u32, m: i32, theta: f64, phi: f64) -> VectorHarmonicTriple {
    let (nu, th, ph) = unit_vectors(theta, phi);
    let zero = [Complex64::new(0.0, 0.0); 3];

    let i_vec = {
        let af = angular_functions(n + 1, m, theta, phi);
        let grad = surface_gradient_y(n + 1, m, theta, phi);
        let w = (n + 1) as f64 * af.y;
        [
            grad[0] + w * nu[0],
            grad[1] + w * nu[1],
            grad[2] + w * nu[2],
        ]
    };

    let t_vec = if n >= 1 && m.unsigned_abs() <= n {
        let grad = surface_gradient_y(n, m, theta, phi);
        // (a th + b ph) x nu = -a ph + b th
        let a = [
            grad[0] * th[0] + grad[1] * th[1] + grad[2] * th[2],
            grad[0] * ph[0] + grad[1] * ph[1] + grad[2] * ph[2],
        ];
        [
            -a[0] * ph[0] + a[1] * th[0],
            -a[0] * ph[1] + a[1] * th[1],
            -a[0] * ph[2] + a[1] * th[2],
        ]
    } else {
        zero
    };

    let n_vec = if n >= 1 && m.unsigned_abs() <= n - 1 {
        let af = angular_functions(n - 1, m, theta, phi);
        let grad = surface_gradient_y(n - 1, m, theta, phi);
        let w = n as f64 * af.y;
        [
            w * nu[0] - grad[0],
            w * nu[1] - grad[1],
            w * nu[2] - grad[2],
        ]
    } else {
        zero
    };

    VectorHarmonicTriple {
        i_vec,
        t_vec,
        n_vec,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_legendre;

    fn cdot(a: &[Complex64; 3], b: &[f64; 3]) -> Complex64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    #[test]
    fn pinned_values() {
        let y00 = spherical_harmonic(SphericalHarmonicIndex::new(0, 0).unwrap(), 1.234, 0.77);
        assert!((y00.re - 0.28209479177387814).abs() < 1e-14 && y00.im.abs() < 1e-16);
        let y10 = spherical_harmonic(SphericalHarmonicIndex::new(1, 0).unwrap(), 0.0, 0.0);
        assert!((y10.re - 0.48860251190291992).abs() < 1e-14);
        // reference library values carry the Condon-Shortley phase: odd m flips sign
        let y31 = spherical_harmonic(SphericalHarmonicIndex::new(3, 1).unwrap(), 0.7, 0.3);
        assert!((y31.re - 0.38286523723220564).abs() < 1e-13);
        assert!((y31.im - 0.11843409659130918).abs() < 1e-13);
        let y22 = spherical_harmonic(SphericalHarmonicIndex::new(2, 2).unwrap(), 1.1, -0.4);
        assert!((y22.re - 0.21374857388347187).abs() < 1e-13);
        assert!((y22.im - -0.2200837731849511).abs() < 1e-13);
    }

    #[test]
    fn index_guard() {
        assert!(SphericalHarmonicIndex::new(2, 3).is_err());
        assert!(SphericalHarmonicIndex::new(2, -2).is_ok());
    }

    /// product Gauss(theta) x trapezoid(phi) quadrature over the sphere
    fn sphere_quad<F: Fn(f64, f64) -> Complex64>(nth: usize, nph: usize, f: F) -> Complex64 {
        let nodes = gauss_legendre(nth);
        let mut acc = Complex64::new(0.0, 0.0);
        for &(t, w) in nodes.iter() {
            let theta = (t + 1.0) / 2.0 * std::f64::consts::PI;
            let mut ring = Complex64::new(0.0, 0.0);
            for ip in 0..nph {
                let phi = 2.0 * std::f64::consts::PI * ip as f64 / nph as f64;
                ring += f(theta, phi);
            }
            ring *= 2.0 * std::f64::consts::PI / nph as f64;
            acc += w * ring * theta.sin() * std::f64::consts::FRAC_PI_2;
        }
        acc
    }

    #[test]
    fn orthonormality_triples() {
        let cases = [
            ((3i32, 1i32), (3i32, 1i32)),
            ((3, 1), (4, 1)),
            ((2, 2), (2, -2)),
        ];
        for ((n1, m1), (n2, m2)) in cases {
            let v = sphere_quad(40, 32, |t, p| {
                let a = angular_functions(n1 as u32, m1, t, p).y;
                let b = angular_functions(n2 as u32, m2, t, p).y;
                a * b.conj()
            });
            let expect = if (n1, m1) == (n2, m2) { 1.0 } else { 0.0 };
            assert!(
                (v.re - expect).abs() <= 1e-12 && v.im.abs() <= 1e-12,
                "({n1},{m1})x({n2},{m2}) -> {v}"
            );
        }
    }

    #[test]
    fn surface_gradient_norm_is_nnp1() {
        for (n, m) in [(1u32, 0i32), (3, 2), (7, -5), (15, 15), (15, 4)] {
            let v = sphere_quad(48, 64, |t, p| {
                let g = surface_gradient_y(n, m, t, p);
                g[0] * g[0].conj() + g[1] * g[1].conj() + g[2] * g[2].conj()
            });
            let expect = (n * (n + 1)) as f64;
            assert!(
                (v.re - expect).abs() <= 1e-10 * expect.max(1.0),
                "n={n} m={m} got {}",
                v.re
            );
        }
    }

    #[test]
    fn angular_derivatives_match_finite_differences() {
        let h = 1e-6;
        for (n, m) in [(4u32, 0i32), (4, 1), (6, -3), (9, 9)] {
            for &theta in &[0.4f64, 1.3, 2.6] {
                let f0 = angular_functions(n, m, theta, 0.6);
                let fp = angular_functions(n, m, theta + h, 0.6);
                let fm = angular_functions(n, m, theta - h, 0.6);
                let dy_fd = (fp.y - fm.y) / (2.0 * h);
                assert!(
                    (dy_fd - f0.dy).norm() < 1e-8 * (1.0 + f0.dy.norm()),
                    "dy n={n} m={m}"
                );
                let ddy_fd = (fp.y - 2.0 * f0.y + fm.y) / (h * h);
                assert!(
                    (ddy_fd - f0.ddy).norm() < 1e-3 * (1.0 + f0.ddy.norm()),
                    "ddy n={n} m={m}"
                );
                let dq_fd = (fp.y_over_sin - fm.y_over_sin) / (2.0 * h);
                assert!(
                    (dq_fd - f0.dy_over_sin).norm() < 1e-8 * (1.0 + f0.dy_over_sin.norm()),
                    "dq n={n} m={m}"
                );
            }
        }
    }

    #[test]
    fn vector_harmonic_identities() {
        // deterministic pseudo-random points
        let mut s = 0x12345678u64;
        let mut rng = move || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let theta = 0.03 + 3.08 * rng();
            let phi = 6.2 * rng();
            for n in 1..=10u32 {
                let m = ((rng() * (2 * n + 1) as f64) as i32) - n as i32;
                let m = m.clamp(-(n as i32), n as i32);
                let (nu, _, _) = unit_vectors(theta, phi);
                // nu . T_n^m = 0
                let tr = vector_spherical_harmonics(n, m, theta, phi);
                let d = cdot(&tr.t_vec, &nu);
                assert!(d.norm() <= 1e-13, "nu.T = {d}");
                // nu . I_{n-1}^m = n Y_n^m
                let tr2 = vector_spherical_harmonics(n - 1, m, theta, phi);
                let lhs = cdot(&tr2.i_vec, &nu);
                let rhs = n as f64 * angular_functions(n, m, theta, phi).y;
                assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
                // (I_{n-1}^m + N_{n+1}^m)/(2n+1) = nu Y_n^m componentwise
                if m.unsigned_abs() <= n {
                    let trn = vector_spherical_harmonics(n + 1, m, theta, phi);
                    let y = angular_functions(n, m, theta, phi).y;
                    for k in 0..3 {
                        let lhs = (tr2.i_vec[k] + trn.n_vec[k]) / (2 * n + 1) as f64;
                        let rhs = y * nu[k];
                        assert!(
                            (lhs - rhs).norm() <= 1e-13 * y.norm().max(1.0),
                            "component {k}: {lhs} vs {rhs}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn pole_limits_finite() {
        for m in [-2i32, -1, 0, 1, 2] {
            for &theta in &[0.0f64, 1e-12, std::f64::consts::PI] {
                let g = surface_gradient_y(5, m, theta, 0.3);
                for c in g {
                    assert!(c.re.is_finite() && c.im.is_finite());
                }
            }
        }
        // m = +-1 has a genuinely nonzero pole limit of grad_S Y
        let g = surface_gradient_y(3, 1, 1e-13, 0.0);
        assert!(g[0].norm() > 0.1);
    }
}
