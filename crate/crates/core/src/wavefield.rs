//! Spheroidal vector wave fields on radial geometries.
//!
//! Every vector field this crate touches in 3D is a superposition of
//! "spheroidal" modes
//!
//!   u = f(r) Y_n^m nu + g(r) grad_S Y_n^m,
//!
//! with radial profiles built from spherical Bessel/Hankel functions:
//!
//!   compressional  L: f = z_n'(kr),            g = z_n(kr)/(kr)
//!   shear          N: f = n(n+1) z_n(kr)/(kr), g = (z_n(kr) + kr z_n'(kr))/(kr)
//!
//! (z_n = j_n regular, z_n = h_n^(1) outgoing; L = grad(z_n Y)/k,
//! N = curl curl(x z_n Y)/k). Tractions, gradients, divergences and stress
//! densities of such fields reduce to closed combinations of (f, g, f', g')
//! and the angular data of Y_n^m. Profiles are carried in log-scaled form.

use crate::logcx::LogComplex;
use crate::specfun::bessel::{spherical_h1_ladder, spherical_jn_ladder};
use crate::specfun::harmonics::{angular_functions, unit_vectors};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RadialKind {
    /// spherical Bessel j_n (regular at the origin)
    Regular,
    /// spherical Hankel h_n^(1) (outgoing)
    Outgoing,
}

/// Radial data of a spheroidal field at one radius.
#[derive(Clone, Copy, Debug)]
pub struct FgSet {
    pub f: LogComplex,
    pub g: LogComplex,
    pub fp: LogComplex,
    pub gp: LogComplex,
}

fn ladder(kind: RadialKind, nmax: usize, z: Complex64) -> Vec<LogComplex> {
    match kind {
        RadialKind::Regular => {
            if z.norm() < 1e-2 {
                // series per order keeps tiny arguments exact
                (0..=nmax)
                    .map(|n| crate::specfun::spherical_bessel_j(n, z).0)
                    .collect()
            } else {
                spherical_jn_ladder(nmax, z)
            }
        }
        RadialKind::Outgoing => spherical_h1_ladder(nmax, z).expect("outgoing ladder needs z != 0"),
    }
}

/// z_n, z_n', z_n'' at one argument, log-scaled.
fn zn_set(kind: RadialKind, n: usize, z: Complex64) -> (LogComplex, LogComplex, LogComplex) {
    let lad = ladder(kind, n + 1, z);
    let lz = LogComplex::from_c64(z);
    let zn = lad[n];
    let znd = if n == 0 {
        lad[1].neg()
    } else {
        lad[n - 1] - LogComplex::from_real((n + 1) as f64) / lz * lad[n]
    };
    // z'' = -2 z'/zarg + (n(n+1)/zarg^2 - 1) z
    let zndd = LogComplex::from_real(-2.0) * znd / lz
        + (LogComplex::from_real((n * (n + 1)) as f64) / (lz * lz) - LogComplex::one()) * zn;
    (zn, znd, zndd)
}

/// Compressional wave grad(z_n(kappa r) Y)/kappa.
pub fn compressional_fg(kind: RadialKind, n: usize, kappa: f64, r: f64) -> FgSet {
    let z = Complex64::new(kappa * r, 0.0);
    let (zn, znd, zndd) = zn_set(kind, n, z);
    let lz = LogComplex::from_c64(z);
    let lk = LogComplex::from_real(kappa);
    FgSet {
        f: znd,
        g: zn / lz,
        fp: lk * zndd,
        gp: lk * (znd * lz - zn) / (lz * lz),
    }
}

/// Shear wave curl curl(x z_n(kappa r) Y)/kappa.
pub fn shear_fg(kind: RadialKind, n: usize, kappa: f64, r: f64) -> FgSet {
    let z = Complex64::new(kappa * r, 0.0);
    let (zn, znd, zndd) = zn_set(kind, n, z);
    let lz = LogComplex::from_c64(z);
    let lk = LogComplex::from_real(kappa);
    let nn1 = LogComplex::from_real((n * (n + 1)) as f64);
    FgSet {
        f: nn1 * zn / lz,
        g: (zn + lz * znd) / lz,
        fp: nn1 * lk * (znd * lz - zn) / (lz * lz),
        gp: lk * (lz * znd + lz * lz * zndd - zn) / (lz * lz),
    }
}

/// Incident profile j_n(k_p r) paired with the angular combination
/// grad_S Y + n Y nu: f = n j_n(k_p r), g = j_n(k_p r).
pub fn incident_bulk_fg(n: usize, k_p: f64, r: f64) -> FgSet {
    let z = Complex64::new(k_p * r, 0.0);
    let (zn, znd, _) = zn_set(RadialKind::Regular, n, z);
    let lk = LogComplex::from_real(k_p);
    let ln = LogComplex::from_real(n as f64);
    FgSet {
        f: ln * zn,
        g: zn,
        fp: ln * lk * znd,
        gp: lk * znd,
    }
}

/// Traction components of f Y nu + g grad_S Y on the sphere of radius r:
/// sigma(u) nu = t_nu Y nu + t_t grad_S Y with
///   t_nu = lambda (f' + 2 f/r - n(n+1) g/r) + 2 mu f'
///   t_t  = mu (g' - g/r + f/r)
pub fn traction_components(
    n: usize,
    fg: &FgSet,
    r: f64,
    lambda: f64,
    mu: f64,
) -> (LogComplex, LogComplex) {
    let lr = LogComplex::from_real(r);
    let div_like = fg.fp + LogComplex::from_real(2.0) * fg.f / lr
        - LogComplex::from_real((n * (n + 1)) as f64) * fg.g / lr;
    let tn = LogComplex::from_real(lambda) * div_like + LogComplex::from_real(2.0 * mu) * fg.fp;
    let tt = LogComplex::from_real(mu) * (fg.gp - fg.g / lr + fg.f / lr);
    (tn, tt)
}

/// Divergence radial factor: div u = (f' + 2f/r - n(n+1) g/r) Y.
pub fn divergence_factor(n: usize, fg: &FgSet, r: f64) -> LogComplex {
    let lr = LogComplex::from_real(r);
    fg.fp + LogComplex::from_real(2.0) * fg.f / lr
        - LogComplex::from_real((n * (n + 1)) as f64) * fg.g / lr
}

// ---------------------------------------------------------------------------
// pointwise assembly over m
// ---------------------------------------------------------------------------

/// Combined angular sums sum_m c_m {Y, dY, im Y/sin, ddY, im d(Y/sin)} for a
/// fixed degree n at one (theta, phi).
#[derive(Clone, Copy, Debug)]
pub struct AngularSums {
    pub y: Complex64,
    pub dy: Complex64,
    pub imq: Complex64,
    pub ddy: Complex64,
    pub imdq: Complex64,
}

pub fn angular_sums(n: usize, coeffs: &[Complex64], theta: f64, phi: f64) -> AngularSums {
    assert_eq!(coeffs.len(), 2 * n + 1);
    let mut s = AngularSums {
        y: Complex64::new(0.0, 0.0),
        dy: Complex64::new(0.0, 0.0),
        imq: Complex64::new(0.0, 0.0),
        ddy: Complex64::new(0.0, 0.0),
        imdq: Complex64::new(0.0, 0.0),
    };
    for (idx, &c) in coeffs.iter().enumerate() {
        if c.norm() == 0.0 {
            continue;
        }
        let m = idx as i32 - n as i32;
        let af = angular_functions(n as u32, m, theta, phi);
        let im = Complex64::new(0.0, m as f64);
        s.y += c * af.y;
        s.dy += c * af.dy;
        s.imq += c * im * af.y_over_sin;
        s.ddy += c * af.ddy;
        s.imdq += c * im * af.dy_over_sin;
    }
    s
}

/// One spheroidal contribution at a point: amplitude * (f, g) radial data.
#[derive(Clone, Copy, Debug)]
pub struct SpheroidalTerm {
    pub amp: LogComplex,
    pub fg: FgSet,
}

/// Pointwise Cartesian field of sum_j amp_j (f_j Y nu + g_j grad_S Y), where
/// the angular sums carry the m-coefficients.
pub fn eval_field(
    terms: &[SpheroidalTerm],
    ang: &AngularSums,
    theta: f64,
    phi: f64,
) -> [LogComplex; 3] {
    let mut fr = LogComplex::zero();
    let mut gr = LogComplex::zero();
    for t in terms {
        fr = fr + t.amp * t.fg.f;
        gr = gr + t.amp * t.fg.g;
    }
    let (nu, th, ph) = unit_vectors(theta, phi);
    let u_nu = fr * LogComplex::from_c64(ang.y);
    let u_th = gr * LogComplex::from_c64(ang.dy);
    let u_ph = gr * LogComplex::from_c64(ang.imq);
    let mut out = [LogComplex::zero(); 3];
    for k in 0..3 {
        out[k] = u_nu * LogComplex::from_real(nu[k])
            + u_th * LogComplex::from_real(th[k])
            + u_ph * LogComplex::from_real(ph[k]);
    }
    out
}

/// Spherical-frame gradient tensor components of the combined field, ordered
/// (r, theta, phi) x (r, theta, phi), plus the divergence.
pub struct GradientData {
    pub g: [[LogComplex; 3]; 3],
    pub div: LogComplex,
}

pub fn eval_gradient(
    n: usize,
    terms: &[SpheroidalTerm],
    ang: &AngularSums,
    r: f64,
) -> GradientData {
    let mut fr = LogComplex::zero();
    let mut gr = LogComplex::zero();
    let mut fpr = LogComplex::zero();
    let mut gpr = LogComplex::zero();
    for t in terms {
        fr = fr + t.amp * t.fg.f;
        gr = gr + t.amp * t.fg.g;
        fpr = fpr + t.amp * t.fg.fp;
        gpr = gpr + t.amp * t.fg.gp;
    }
    let lr = LogComplex::from_real(r);
    let y = LogComplex::from_c64(ang.y);
    let dy = LogComplex::from_c64(ang.dy);
    let imq = LogComplex::from_c64(ang.imq);
    let ddy = LogComplex::from_c64(ang.ddy);
    let imdq = LogComplex::from_c64(ang.imdq);
    let nn1 = (n * (n + 1)) as f64;

    let g_rr = fpr * y;
    let g_rt = (fr - gr) / lr * dy;
    let g_rp = (fr - gr) / lr * imq;
    let g_tr = gpr * dy;
    let g_tt = (gr * ddy + fr * y) / lr;
    let g_tp = gr * imdq / lr;
    let g_pr = gpr * imq;
    let g_pt = gr * imdq / lr;
    // cot dY - m^2 Y/sin^2 = -(n(n+1) Y + ddY)  (surface Laplacian identity)
    let g_pp = (fr * y - gr * (LogComplex::from_real(nn1) * y + ddy)) / lr;

    let div =
        (fpr + LogComplex::from_real(2.0) * fr / lr - LogComplex::from_real(nn1) * gr / lr) * y;

    GradientData {
        g: [[g_rr, g_rt, g_rp], [g_tr, g_tt, g_tp], [g_pr, g_pt, g_pp]],
        div,
    }
}

/// Cartesian gradient tensor du_i/dx_j from the spherical-frame components.
pub fn gradient_to_cartesian(gd: &GradientData, theta: f64, phi: f64) -> [[Complex64; 3]; 3] {
    let (nu, th, ph) = unit_vectors(theta, phi);
    let frame = [nu, th, ph];
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..3 {
                for j in 0..3 {
                    acc += gd.g[i][j].to_c64() * frame[i][a] * frame[j][b];
                }
            }
            out[a][b] = acc;
        }
    }
    out
}

/// Strain-energy density sigma(u) : conj(grad u) of the combined field,
/// returned as (real part, raw complex value). The real part is the
/// reported energy density; the unmodified complex value is kept for
/// comparison. `log10_shift` rescales internally so extreme amplitudes
/// stay representable: the returned values are density * 10^(-2*shift).
pub struct StressDensity {
    pub re: f64,
    pub complex_raw: Complex64,
    pub log10_shift: f64,
}

pub fn stress_density(gd: &GradientData, lambda: f64, mu: f64) -> StressDensity {
    // common scale
    let mut smax = f64::NEG_INFINITY;
    for row in &gd.g {
        for c in row {
            if !c.is_zero() {
                smax = smax.max(c.log10_mag());
            }
        }
    }
    if !smax.is_finite() {
        return StressDensity {
            re: 0.0,
            complex_raw: Complex64::new(0.0, 0.0),
            log10_shift: 0.0,
        };
    }
    let shift = smax;
    let mut g = [[Complex64::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            g[i][j] = gd.g[i][j].scale_log10(-shift).to_c64();
        }
    }
    let div = gd.div.scale_log10(-shift).to_c64();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        for j in 0..3 {
            let sig = mu * (g[i][j] + g[j][i])
                + if i == j {
                    lambda * div
                } else {
                    Complex64::new(0.0, 0.0)
                };
            acc += sig * g[i][j].conj();
        }
    }
    StressDensity {
        re: acc.re,
        complex_raw: acc,
        log10_shift: shift,
    }
}
