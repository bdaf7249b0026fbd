//! Fourier mode-matching on the unit disk.
//!
//! Per angular mode n, the interior acoustic field is a J_n(k r) e^{in t},
//! the exterior scattered displacement derives from a compressional
//! potential b H_n(k_p r) e^{in t} and a shear stream function
//! c H_n(k_s r) e^{in t}, and the incident wave is the compressional mode
//! grad(J_n(k_p r) e^{in t}). The three transmission conditions at r = 1
//! (normal displacement, normal traction, tangential traction) give a 3x3
//! system per mode, solved in log-magnitude-balanced form: each column is
//! scaled by its boundary Hankel/Bessel value and the right-hand side by
//! its peak magnitude, so entries stay O(n^2) even where the raw values
//! span hundreds of decades (n = 60 at sub-wavelength k).
//!
//! The polar traction entries are derived in DERIVATION.md at the repo root.

use crate::error::{Error, Result};
use crate::logcx::LogComplex;
use crate::medium::NondimensionalMedium;
use crate::quadrature::integrate;
use crate::specfun::bessel::{cyl_j_ladder, cyl_y_ladder};
use num_complex::Complex64;

/// Incident 2D compressional mode: order n and a complex amplitude.
#[derive(Clone, Copy, Debug)]
pub struct IncidentSpec2D {
    n: usize,
    amplitude: Complex64,
    normalized: bool,
}

impl IncidentSpec2D {
    pub fn new(n: usize, amplitude: Complex64, normalized: bool) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("incident order n must be >= 1".into()));
        }
        if amplitude.norm() == 0.0 {
            return Err(Error::Domain("amplitude must be nonzero".into()));
        }
        Ok(IncidentSpec2D {
            n,
            amplitude,
            normalized,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitude(&self) -> Complex64 {
        self.amplitude
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }
}

/// Cylindrical J_n, Y_n, H_n and derivatives at one argument, log-scaled.
struct CylSet {
    v: LogComplex,
    d: LogComplex,
    dd: LogComplex,
}

fn cyl_h_set(n: usize, z: f64) -> CylSet {
    let zc = Complex64::new(z, 0.0);
    let i = LogComplex::from_c64(Complex64::new(0.0, 1.0));
    let jl = cyl_j_ladder(n + 1, zc);
    let yl = cyl_y_ladder(n + 1, zc).expect("z > 0");
    let h: Vec<LogComplex> = jl.iter().zip(yl.iter()).map(|(&a, &b)| a + i * b).collect();
    set_from_ladder(&h, n, z)
}

fn cyl_j_set(n: usize, z: f64) -> CylSet {
    let jl = cyl_j_ladder(n + 1, Complex64::new(z, 0.0));
    set_from_ladder(&jl, n, z)
}

fn set_from_ladder(l: &[LogComplex], n: usize, z: f64) -> CylSet {
    let lz = LogComplex::from_real(z);
    let d = if n == 0 {
        l[1].neg()
    } else {
        (l[n - 1] - l[n + 1]).scale_log10(-std::f64::consts::LOG10_2)
    };
    // v'' = -v'/z + (n^2/z^2 - 1) v
    let dd = d.neg() / lz
        + (LogComplex::from_real((n * n) as f64) / (lz * lz) - LogComplex::one()) * l[n];
    CylSet { v: l[n], d, dd }
}

/// Boundary data of one displacement family at r = 1, already scaled by the
/// family's boundary value: radial displacement, sigma_rr, sigma_rt.
struct ColumnData {
    ur: Complex64,
    srr: Complex64,
    srt: Complex64,
}

/// Per-mode solution of the disk transmission problem.
#[derive(Clone, Debug)]
pub struct ModalSolution2D {
    pub spec: IncidentSpec2D,
    pub medium: NondimensionalMedium,
    /// interior acoustic coefficient of J_n(k r) e^{in t}
    pub a: LogComplex,
    /// compressional potential coefficient of H_n(k_p r) e^{in t}
    pub b: LogComplex,
    /// shear stream coefficient of H_n(k_s r) e^{in t}
    pub c: LogComplex,
    pub condition_number: f64,
    /// max residual of the scaled 3x3 system relative to its row scale
    pub residual: f64,
    /// ||u^i||^2_{L^2(D)} by quadrature, log-scaled
    pub incident_norm_sq: LogComplex,
}

fn incident_norm_sq_unit_2d(n: usize, k_p: f64) -> LogComplex {
    let jref = cyl_j_set(n, k_p);
    // |grad(J_n(kp r) e^{int})|^2 = kp^2 J'^2 + n^2 J^2/r^2; factor J'(k_p)^2 out
    let v = integrate(0.0, 1.0, 96, |r| {
        if r <= 0.0 {
            return 0.0;
        }
        let s = cyl_j_set(n, k_p * r);
        let dr = (s.d / jref.d).to_c64().re;
        let vr = (s.v / jref.d).to_c64().re;
        (k_p * k_p * dr * dr + (n * n) as f64 * vr * vr / (r * r)) * r
    });
    LogComplex::from_real(2.0 * std::f64::consts::PI * v) * jref.d * jref.d
}

/// Solve the three boundary conditions at r = 1 for (a, b, c).
pub fn solve_modes_2d(spec: &IncidentSpec2D, nm: &NondimensionalMedium) -> Result<ModalSolution2D> {
    let n = spec.n;
    let nn = n as f64;
    let (lambda, mu) = (nm.lambda, nm.mu);
    let i = Complex64::new(0.0, 1.0);

    let hp = cyl_h_set(n, nm.k_p);
    let hs = cyl_h_set(n, nm.k_s);
    let jk = cyl_j_set(n, nm.k);
    let jp = cyl_j_set(n, nm.k_p);

    // compressional column, scaled by H_n(k_p):
    //  u_r = kp H', srr = lam(-kp^2 H) + 2 mu kp^2 H'', srt = 2 mu i n (kp H' - H)
    let rd_p = (hp.d / hp.v).to_c64();
    let rdd_p = (hp.dd / hp.v).to_c64();
    let col_b = ColumnData {
        ur: nm.k_p * rd_p,
        srr: Complex64::new(-lambda * nm.k_p * nm.k_p, 0.0) + 2.0 * mu * nm.k_p * nm.k_p * rdd_p,
        srt: 2.0 * mu * i * nn * (nm.k_p * rd_p - Complex64::new(1.0, 0.0)),
    };
    // shear column, scaled by H_n(k_s):
    //  u_r = i n H / r, srr = 2 mu i n (ks H' - H), srt = mu(-n^2 H - ks^2 H'' + ks H')
    let rd_s = (hs.d / hs.v).to_c64();
    let rdd_s = (hs.dd / hs.v).to_c64();
    let col_c = ColumnData {
        ur: i * nn,
        srr: 2.0 * mu * i * nn * (nm.k_s * rd_s - Complex64::new(1.0, 0.0)),
        srt: mu * (Complex64::new(-nn * nn, 0.0) - nm.k_s * nm.k_s * rdd_s + nm.k_s * rd_s),
    };
    // interior column, scaled by J_n(k): normal-displacement row carries
    //  -(1/k^2) d_r(a J_n(kr)) = -a J'(k)/k; traction row carries +delta tau^2 a J(k)
    let rd_k = (jk.d / jk.v).to_c64();
    let col_a = ColumnData {
        ur: -rd_k / nm.k,
        srr: Complex64::new(nm.delta * nm.tau * nm.tau, 0.0),
        srt: Complex64::new(0.0, 0.0),
    };
    // incident data (unscaled: the rhs gets its own log scale)
    let inc_ur = LogComplex::from_real(nm.k_p) * jp.d;
    let inc_srr = LogComplex::from_real(-lambda * nm.k_p * nm.k_p) * jp.v
        + LogComplex::from_real(2.0 * mu * nm.k_p * nm.k_p) * jp.dd;
    let inc_srt =
        LogComplex::from_c64(2.0 * mu * i * nn) * (LogComplex::from_real(nm.k_p) * jp.d - jp.v);
    let rhs_log = [inc_ur.neg(), inc_srr.neg(), inc_srt.neg()];
    let rhs_mag = rhs_log
        .iter()
        .filter(|e| !e.is_zero())
        .map(|e| e.log10_mag())
        .fold(f64::NEG_INFINITY, f64::max);
    let rhs_scale = LogComplex::from_polar_log10(rhs_mag, 0.0);

    let m = [
        [col_b.ur, col_c.ur, col_a.ur],
        [col_b.srr, col_c.srr, col_a.srr],
        [col_b.srt, col_c.srt, col_a.srt],
    ];
    let mut r = [Complex64::new(0.0, 0.0); 3];
    for idx in 0..3 {
        r[idx] = (rhs_log[idx] / rhs_scale).to_c64();
    }
    let (x, cond) = solve3(m, r).ok_or(Error::NearResonance {
        n,
        cond: f64::INFINITY,
    })?;
    if !x.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NearResonance { n, cond });
    }

    let mut resid: f64 = 0.0;
    for irow in 0..3 {
        let mut acc = -r[irow];
        let mut scale = r[irow].norm();
        for j in 0..3 {
            acc += m[irow][j] * x[j];
            scale = scale.max((m[irow][j] * x[j]).norm());
        }
        resid = resid.max(acc.norm() / scale.max(1e-300));
    }

    let amp = LogComplex::from_c64(spec.amplitude);
    let incident_norm_sq =
        incident_norm_sq_unit_2d(n, nm.k_p) * LogComplex::from_real(spec.amplitude.norm_sqr());
    Ok(ModalSolution2D {
        spec: *spec,
        medium: *nm,
        b: LogComplex::from_c64(x[0]) * rhs_scale / hp.v * amp,
        c: LogComplex::from_c64(x[1]) * rhs_scale / hs.v * amp,
        a: LogComplex::from_c64(x[2]) * rhs_scale / jk.v * amp,
        condition_number: cond,
        residual: resid,
        incident_norm_sq,
    })
}

fn solve3(m: [[Complex64; 3]; 3], mut r: [Complex64; 3]) -> Option<([Complex64; 3], f64)> {
    let mut a = m;
    let mut max_entry: f64 = 0.0;
    for row in &a {
        for e in row {
            max_entry = max_entry.max(e.norm());
        }
    }
    let mut min_pivot = f64::INFINITY;
    for col in 0..3 {
        let (piv, pv) = (col..3)
            .map(|i| (i, a[i][col].norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
        if pv == 0.0 {
            return None;
        }
        a.swap(col, piv);
        r.swap(col, piv);
        min_pivot = min_pivot.min(a[col][col].norm());
        for i in (col + 1)..3 {
            let fac = a[i][col] / a[col][col];
            for j in col..3 {
                a[i][j] = a[i][j] - fac * a[col][j];
            }
            r[i] = r[i] - fac * r[col];
        }
    }
    min_pivot = min_pivot.min(a[2][2].norm());
    if a[2][2].norm() == 0.0 {
        return None;
    }
    let mut x = [Complex64::new(0.0, 0.0); 3];
    for i in (0..3).rev() {
        let mut acc = r[i];
        for j in (i + 1)..3 {
            acc -= a[i][j] * x[j];
        }
        x[i] = acc / a[i][i];
    }
    Some((x, max_entry / min_pivot.max(1e-300)))
}

/// Polar field data of a 2D displacement field at one point:
/// components (u_r, u_t) and the polar gradient entries.
#[derive(Clone, Copy, Debug)]
pub struct PolarField2D {
    pub ur: LogComplex,
    pub ut: LogComplex,
    pub g_rr: LogComplex,
    pub g_rt: LogComplex,
    pub g_tr: LogComplex,
    pub g_tt: LogComplex,
    pub div: LogComplex,
}

impl PolarField2D {
    fn zero() -> Self {
        let z = LogComplex::zero();
        PolarField2D {
            ur: z,
            ut: z,
            g_rr: z,
            g_rt: z,
            g_tr: z,
            g_tt: z,
            div: z,
        }
    }

    fn add(self, o: Self) -> Self {
        PolarField2D {
            ur: self.ur + o.ur,
            ut: self.ut + o.ut,
            g_rr: self.g_rr + o.g_rr,
            g_rt: self.g_rt + o.g_rt,
            g_tr: self.g_tr + o.g_tr,
            g_tt: self.g_tt + o.g_tt,
            div: self.div + o.div,
        }
    }

    fn scaled(self, amp: LogComplex) -> Self {
        PolarField2D {
            ur: self.ur * amp,
            ut: self.ut * amp,
            g_rr: self.g_rr * amp,
            g_rt: self.g_rt * amp,
            g_tr: self.g_tr * amp,
            g_tt: self.g_tt * amp,
            div: self.div * amp,
        }
    }

    /// Cartesian displacement components.
    pub fn cartesian(&self, theta: f64) -> [Complex64; 2] {
        let (st, ct) = (theta.sin(), theta.cos());
        let ur = self.ur.to_c64();
        let ut = self.ut.to_c64();
        [ur * ct - ut * st, ur * st + ut * ct]
    }

    /// Strain-energy density Re[sigma(u) : conj(grad u)] with the 2D stress
    /// sigma = lambda (div u) I + mu (grad u + grad u^T); also returns the
    /// unmodified complex value.
    pub fn stress_density(&self, lambda: f64, mu: f64) -> (f64, Complex64) {
        let comps = [self.g_rr, self.g_rt, self.g_tr, self.g_tt];
        let mut smax = f64::NEG_INFINITY;
        for c in comps {
            if !c.is_zero() {
                smax = smax.max(c.log10_mag());
            }
        }
        if !smax.is_finite() {
            return (0.0, Complex64::new(0.0, 0.0));
        }
        let g_rr = self.g_rr.scale_log10(-smax).to_c64();
        let g_rt = self.g_rt.scale_log10(-smax).to_c64();
        let g_tr = self.g_tr.scale_log10(-smax).to_c64();
        let g_tt = self.g_tt.scale_log10(-smax).to_c64();
        let div = self.div.scale_log10(-smax).to_c64();
        let mut acc = (lambda * div + 2.0 * mu * g_rr) * g_rr.conj()
            + (lambda * div + 2.0 * mu * g_tt) * g_tt.conj();
        acc += mu * (g_rt + g_tr) * (g_rt.conj() + g_tr.conj());
        let scale = 10f64.powf(2.0 * smax);
        (acc.re * scale, acc * scale)
    }
}

/// Which 2D field to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field2D {
    Scattered,
    Incident,
    TotalExterior,
}

impl ModalSolution2D {
    pub fn norm_factor(&self) -> LogComplex {
        if self.spec.normalized {
            LogComplex::from_polar_log10(-0.5 * self.incident_norm_sq.log10_mag(), 0.0)
        } else {
            LogComplex::one()
        }
    }

    /// Interior acoustic field a J_n(k r) e^{in t} at a point (r, theta).
    pub fn eval_interior_log(&self, r: f64, theta: f64) -> LogComplex {
        let n = self.spec.n;
        let s = cyl_j_set(n, self.medium.k * r.max(1e-12));
        let e = LogComplex::from_c64(Complex64::from_polar(1.0, n as f64 * theta));
        self.a * self.norm_factor() * s.v * e
    }

    /// Interior radial amplitude |a J_n(k r)| for shell integrals.
    pub fn interior_radial_amplitude(&self, r: f64) -> LogComplex {
        let s = cyl_j_set(self.spec.n, self.medium.k * r.max(1e-12));
        self.a * self.norm_factor() * s.v
    }

    /// Polar data of the compressional potential family at radius r, per
    /// unit coefficient: u = grad(Z_n(kappa r) e^{in t}).
    fn potential_field(set: &CylSet, n: usize, kappa: f64, r: f64) -> PolarField2D {
        let nn = LogComplex::from_real(n as f64);
        let i = LogComplex::from_c64(Complex64::new(0.0, 1.0));
        let lk = LogComplex::from_real(kappa);
        let lr = LogComplex::from_real(r);
        let ur = lk * set.d;
        let ut = i * nn * set.v / lr;
        let g_rr = lk * lk * set.dd;
        // (1/r) d_t u_r - u_t/r = i n kappa H'/r - i n H/r^2
        let g_rt = i * nn * (lk * set.d - set.v / lr) / lr;
        // d_r u_t = i n (kappa H' r - H)/r^2
        let g_tr = i * nn * (lk * set.d - set.v / lr) / lr;
        // (1/r) d_t u_t + u_r/r = -n^2 H/r^2 + kappa H'/r
        let g_tt = (lk * set.d - nn * nn * set.v / lr) / lr;
        // div = -kappa^2 Z (Helmholtz)
        let div = (lk * lk * set.v).neg();
        PolarField2D {
            ur,
            ut,
            g_rr,
            g_rt,
            g_tr,
            g_tt,
            div,
        }
    }

    /// Polar data of the shear stream family: u = curl(Z_n(kappa r) e^{in t} zhat).
    fn stream_field(set: &CylSet, n: usize, kappa: f64, r: f64) -> PolarField2D {
        let nn = LogComplex::from_real(n as f64);
        let i = LogComplex::from_c64(Complex64::new(0.0, 1.0));
        let lk = LogComplex::from_real(kappa);
        let lr = LogComplex::from_real(r);
        let ur = i * nn * set.v / lr;
        let ut = (lk * set.d).neg();
        // d_r u_r = i n (kappa H' r - H)/r^2
        let g_rr = i * nn * (lk * set.d - set.v / lr) / lr;
        // (1/r) d_t u_r - u_t/r = -n^2 H/r^2 + kappa H'/r
        let g_rt = (lk * set.d - nn * nn * set.v / lr) / lr;
        // d_r u_t = -kappa^2 H''
        let g_tr = (lk * lk * set.dd).neg();
        // (1/r) d_t u_t + u_r/r = -i n kappa H'/r + i n H/r^2
        let g_tt = i * nn * (set.v / lr - lk * set.d) / lr;
        let div = LogComplex::zero();
        PolarField2D {
            ur,
            ut,
            g_rr,
            g_rt,
            g_tr,
            g_tt,
            div,
        }
    }

    /// Exterior fields (scattered, incident or total) at (r, theta), with
    /// the e^{in t} factor and normalization applied.
    pub fn eval_exterior(&self, which: Field2D, r: f64, theta: f64) -> PolarField2D {
        let n = self.spec.n;
        let nm = &self.medium;
        let nf = self.norm_factor();
        let e = LogComplex::from_c64(Complex64::from_polar(1.0, n as f64 * theta)) * nf;
        let mut out = PolarField2D::zero();
        if which != Field2D::Incident {
            let hp = cyl_h_set(n, nm.k_p * r);
            let hs = cyl_h_set(n, nm.k_s * r);
            out = out.add(Self::potential_field(&hp, n, nm.k_p, r).scaled(self.b));
            out = out.add(Self::stream_field(&hs, n, nm.k_s, r).scaled(self.c));
        }
        if which != Field2D::Scattered {
            let jp = cyl_j_set(n, nm.k_p * r);
            out = out.add(
                Self::potential_field(&jp, n, nm.k_p, r)
                    .scaled(LogComplex::from_c64(self.spec.amplitude())),
            );
        }
        out.scaled(e)
    }

    /// Boundary-condition residuals re-evaluated through the generic field
    /// evaluators at a boundary angle. Each residual is relative to the
    /// largest of its participating per-family terms (the row scale of the
    /// transmission system).
    pub fn boundary_residuals(&self, theta: f64) -> [f64; 3] {
        let nm = &self.medium;
        let n = self.spec.n;
        let (lambda, mu) = (nm.lambda, nm.mu);
        let e =
            LogComplex::from_c64(Complex64::from_polar(1.0, n as f64 * theta)) * self.norm_factor();
        // per-family polar data at r = 1
        let hp = cyl_h_set(n, nm.k_p);
        let hs = cyl_h_set(n, nm.k_s);
        let jp = cyl_j_set(n, nm.k_p);
        let parts = [
            Self::potential_field(&hp, n, nm.k_p, 1.0).scaled(self.b * e),
            Self::stream_field(&hs, n, nm.k_s, 1.0).scaled(self.c * e),
            Self::potential_field(&jp, n, nm.k_p, 1.0)
                .scaled(LogComplex::from_c64(self.spec.amplitude()) * e),
        ];
        // interior quantities
        let s = cyl_j_set(n, nm.k);
        let u_int = self.a * s.v * e;
        let du_int = self.a * LogComplex::from_real(nm.k) * s.d * e;

        let rel = |terms: &[LogComplex]| -> f64 {
            let mut sum = LogComplex::zero();
            let mut scale = f64::NEG_INFINITY;
            for &t in terms {
                if !t.is_zero() {
                    scale = scale.max(t.log10_mag());
                }
                sum = sum + t;
            }
            if sum.is_zero() {
                0.0
            } else {
                10f64.powf(sum.log10_mag() - scale)
            }
        };

        // (i) u_r(total) - (1/k^2) d_r u_int = 0
        let k2 = LogComplex::from_real(nm.k * nm.k);
        let r1 = rel(&[parts[0].ur, parts[1].ur, parts[2].ur, (du_int / k2).neg()]);
        // (ii) sigma_rr(total) + delta tau^2 u_int = 0
        let srr = |p: &PolarField2D| {
            LogComplex::from_real(lambda) * p.div + LogComplex::from_real(2.0 * mu) * p.g_rr
        };
        let r2 = rel(&[
            srr(&parts[0]),
            srr(&parts[1]),
            srr(&parts[2]),
            LogComplex::from_real(nm.delta * nm.tau * nm.tau) * u_int,
        ]);
        // (iii) sigma_rt(total) = 0
        let srt = |p: &PolarField2D| LogComplex::from_real(mu) * (p.g_rt + p.g_tr);
        let r3 = rel(&[srt(&parts[0]), srt(&parts[1]), srt(&parts[2])]);
        [r1, r2, r3]
    }

    /// Interior and exterior boundary-localization ratios
    /// (eta_u, eta_us) for the shell (zeta1, zeta2, R); radial Gauss
    /// quadrature per mode, angular integral exact.
    pub fn localization_ratio(
        &self,
        zeta1: f64,
        zeta2: f64,
        big_r: f64,
        nodes: usize,
    ) -> (f64, f64) {
        assert!(0.0 < zeta1 && zeta1 < 1.0 && 1.0 < zeta2 && zeta2 < big_r);
        let n = self.spec.n;
        let nm = &self.medium;
        // interior: |a|^2 Int J_n(kr)^2 r dr, ratio of [0, zeta1] to [0, 1]
        let jref = cyl_j_set(n, nm.k);
        let f_in = |r: f64| {
            if r <= 0.0 {
                return 0.0;
            }
            let s = cyl_j_set(n, nm.k * r);
            let v = (s.v / jref.v).to_c64().re;
            v * v * r
        };
        let num = integrate(0.0, zeta1, nodes, f_in);
        let den = num + integrate(zeta1, 1.0, nodes, f_in);
        let eta_u = (num / den).sqrt();
        // exterior: |u^s|^2 = |u_r|^2 + |u_t|^2, radial ratio of [zeta2, R] to [1, R]
        let scale = {
            let f = self.eval_exterior(Field2D::Scattered, 1.0, 0.0);
            LogComplex::from_polar_log10(f.ur.log10_mag().max(f.ut.log10_mag()), 0.0)
        };
        let f_ex = |r: f64| {
            let f = self.eval_exterior(Field2D::Scattered, r, 0.0);
            let ur = (f.ur / scale).to_c64().norm_sqr();
            let ut = (f.ut / scale).to_c64().norm_sqr();
            (ur + ut) * r
        };
        let nume = integrate(zeta2, big_r, nodes, f_ex);
        let dene = integrate(1.0, zeta2, nodes, f_ex) + nume;
        let eta_us = (nume / dene).sqrt();
        (eta_u, eta_us)
    }
}
