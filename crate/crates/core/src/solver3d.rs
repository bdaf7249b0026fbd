//! Modal transmission solve on the unit ball.
//!
//! Two coupled representations are carried per solution:
//!
//! * the working modal amplitudes `phi_e`, `phi_b` (leading-order laws of
//!   the sub-wavelength expansion, with the exact radial profiles
//!   j_n(k r), h_n(k_p r) behind the evaluators) — these drive the
//!   localization, resonance and stress diagnostics;
//! * the exact three-condition transmission solve (interior acoustic mode,
//!   exterior compressional and shear outgoing waves) — this backs the
//!   boundary-condition reassembly and PDE-residual checks, where exactness
//!   at machine precision is the point.
//!
//! The incident wave comes in the same two flavors: the bulk form
//! `sum_m f_m j_n(k_p |x|) (grad_S Y_n^m + n Y_n^m nu)` used by the
//! normalization and diagnostics, and the entire compressional solution
//! `grad(j_n(k_p r) Y_n^m)/k_p` that drives the exact transmission solve.

use crate::error::{Error, Result};
use crate::logcx::LogComplex;
use crate::medium::NondimensionalMedium;
use crate::quadrature::integrate;
use crate::specfun::bessel::spherical_h1_ladder;
use crate::specfun::factorial::log10_odd_double_factorial;
use crate::spectra;
use crate::wavefield::{
    angular_sums, compressional_fg, eval_field, eval_gradient, gradient_to_cartesian,
    incident_bulk_fg, shear_fg, stress_density as wf_stress_density, traction_components,
    AngularSums, FgSet, GradientData, RadialKind, SpheroidalTerm,
};
use num_complex::Complex64;

/// Tuned incident wave: order n and coefficient vector f_{n,m}, m = -n..n.
#[derive(Clone, Debug)]
pub struct IncidentSpec3D {
    n: usize,
    f: Vec<Complex64>,
    normalized: bool,
}

impl IncidentSpec3D {
    pub fn new(n: usize, f: Vec<Complex64>, normalized: bool) -> Result<Self> {
        if n < 1 {
            return Err(Error::Domain("incident order n must be >= 1".into()));
        }
        if f.len() != 2 * n + 1 {
            return Err(Error::Domain(format!(
                "coefficient vector must have 2n+1 = {} entries, got {}",
                2 * n + 1,
                f.len()
            )));
        }
        if f.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::Domain("coefficient vector must be nonzero".into()));
        }
        Ok(IncidentSpec3D { n, f, normalized })
    }

    /// Single coefficient f_{n,m} = 1 (the numerical experiments use m = n).
    pub fn single_mode(n: usize, m: i32, normalized: bool) -> Result<Self> {
        if m.unsigned_abs() as usize > n {
            return Err(Error::Domain("|m| <= n required".into()));
        }
        let mut f = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        f[(m + n as i32) as usize] = Complex64::new(1.0, 0.0);
        Self::new(n, f, normalized)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.f
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }
}

/// Exact transmission coefficients per unit incident amplitude
/// (independent of m): interior a j_n(k r) Y, exterior compressional
/// b L_h(k_p) + shear c N_h(k_s).
#[derive(Clone, Copy, Debug)]
pub struct TransmissionSolution3D {
    pub a: LogComplex,
    pub b: LogComplex,
    pub c: LogComplex,
    /// max row residual of the scaled 3x3 system, relative to its row scale
    pub residual: f64,
    /// crude condition estimate of the scaled system
    pub condition: f64,
}

/// Per-mode solution: log-scaled amplitudes, medium snapshot, flags.
#[derive(Clone, Debug)]
pub struct ModalSolution3D {
    pub spec: IncidentSpec3D,
    pub medium: NondimensionalMedium,
    /// exterior density amplitudes phi_e,m (diagonal in m)
    pub phi_e: Vec<LogComplex>,
    /// interior density amplitudes phi_b,m
    pub phi_b: Vec<LogComplex>,
    /// modal determinant of the density route
    pub determinant: LogComplex,
    pub near_singular: bool,
    /// exact transmission solve per unit incident amplitude
    pub transmission: TransmissionSolution3D,
    /// ||u^i||_{L^2(D)}^2 by quadrature (log-scaled; tiny for large n)
    pub incident_norm_sq: LogComplex,
}

fn jn_at(n: usize, z: f64) -> (LogComplex, LogComplex) {
    crate::specfun::spherical_bessel_j(n, Complex64::new(z, 0.0))
}

fn hn_at(n: usize, z: f64) -> LogComplex {
    spherical_h1_ladder(n, Complex64::new(z, 0.0)).expect("z > 0")[n]
}

/// ||u^i||^2_{L^2(D)} for the bulk incident form, per unit sum |f_m|^2:
/// n(2n+1) Int_0^1 j_n(k_p r)^2 r^2 dr, carried in log scale.
fn incident_norm_sq_unit(n: usize, k_p: f64) -> LogComplex {
    let (j_ref, _) = jn_at(n, k_p);
    // integrate the ratio (j_n(k_p r)/j_n(k_p))^2 r^2, which is O(r^(2n+2))
    let v = integrate(0.0, 1.0, 96, |r| {
        if r <= 0.0 {
            return 0.0;
        }
        let (j, _) = jn_at(n, k_p * r);
        let ratio = j / j_ref;
        let x = ratio.to_c64().re;
        x * x * r * r
    });
    LogComplex::from_real((n * (2 * n + 1)) as f64 * v) * j_ref * j_ref
}

/// Exact three-condition solve at degree n, per unit incident amplitude.
///
/// Conditions at r = 1: normal displacement
/// (u^i + u^s).nu = k^{-2} d_r u, normal traction
/// [sigma(u^i + u^s) nu].nu = -delta tau^2 u, tangential traction
/// [sigma(u^i + u^s) nu].t = 0.
pub fn transmission_solve(n: usize, nm: &NondimensionalMedium) -> Result<TransmissionSolution3D> {
    let (lambda, mu) = (nm.lambda, nm.mu);
    let fg_l = compressional_fg(RadialKind::Outgoing, n, nm.k_p, 1.0);
    let fg_n = shear_fg(RadialKind::Outgoing, n, nm.k_s, 1.0);
    let fg_i = compressional_fg(RadialKind::Regular, n, nm.k_p, 1.0);
    let (tn_l, tt_l) = traction_components(n, &fg_l, 1.0, lambda, mu);
    let (tn_n, tt_n) = traction_components(n, &fg_n, 1.0, lambda, mu);
    let (tn_i, tt_i) = traction_components(n, &fg_i, 1.0, lambda, mu);
    let (jk, jdk) = jn_at(n, nm.k);
    let lk = LogComplex::from_real(nm.k);
    let dt2 = LogComplex::from_real(nm.delta * nm.tau * nm.tau);

    // columns: [b (L_h), c (N_h), a (interior j_n(k r))]
    let cols: [[LogComplex; 3]; 3] = [
        [fg_l.f, tn_l, tt_l],
        [fg_n.f, tn_n, tt_n],
        [(jdk / lk).neg(), dt2 * jk, LogComplex::zero()],
    ];
    let rhs_log = [fg_i.f.neg(), tn_i.neg(), tt_i.neg()];

    // scale columns to O(1) and the rhs by its peak magnitude
    let col_scale: Vec<LogComplex> = cols
        .iter()
        .map(|c| {
            let m = c
                .iter()
                .filter(|e| !e.is_zero())
                .map(|e| e.log10_mag())
                .fold(f64::NEG_INFINITY, f64::max);
            LogComplex::from_polar_log10(m, 0.0)
        })
        .collect();
    let rhs_mag = rhs_log
        .iter()
        .filter(|e| !e.is_zero())
        .map(|e| e.log10_mag())
        .fold(f64::NEG_INFINITY, f64::max);
    let rhs_scale = LogComplex::from_polar_log10(rhs_mag, 0.0);

    let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
    let mut r = [Complex64::new(0.0, 0.0); 3];
    for j in 0..3 {
        for i in 0..3 {
            m[i][j] = (cols[j][i] / col_scale[j]).to_c64();
        }
    }
    for i in 0..3 {
        r[i] = (rhs_log[i] / rhs_scale).to_c64();
    }

    let (x, cond) = solve3(m, r).ok_or_else(|| Error::SingularSystem {
        n,
        detail: "transmission system is numerically singular".into(),
    })?;

    // residual in the scaled space
    let mut resid: f64 = 0.0;
    for i in 0..3 {
        let mut acc = -r[i];
        let mut scale = r[i].norm();
        for j in 0..3 {
            acc += m[i][j] * x[j];
            scale = scale.max((m[i][j] * x[j]).norm());
        }
        resid = resid.max(acc.norm() / scale.max(1e-300));
    }

    let unscale = |xj: Complex64, j: usize| LogComplex::from_c64(xj) * rhs_scale / col_scale[j];
    Ok(TransmissionSolution3D {
        b: unscale(x[0], 0),
        c: unscale(x[1], 1),
        a: unscale(x[2], 2),
        residual: resid,
        condition: cond,
    })
}

/// 3x3 complex solve with partial pivoting; returns (x, condition estimate).
fn solve3(mut m: [[Complex64; 3]; 3], mut r: [Complex64; 3]) -> Option<([Complex64; 3], f64)> {
    let mut max_entry: f64 = 0.0;
    for row in &m {
        for e in row {
            max_entry = max_entry.max(e.norm());
        }
    }
    let mut min_pivot = f64::INFINITY;
    for col in 0..3 {
        let (piv, _) = (col..3)
            .map(|i| (i, m[i][col].norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())?;
        if m[piv][col].norm() == 0.0 {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        min_pivot = min_pivot.min(m[col][col].norm());
        for i in (col + 1)..3 {
            let fac = m[i][col] / m[col][col];
            for j in col..3 {
                m[i][j] = m[i][j] - fac * m[col][j];
            }
            r[i] = r[i] - fac * r[col];
        }
    }
    min_pivot = min_pivot.min(m[2][2].norm());
    if m[2][2].norm() == 0.0 {
        return None;
    }
    let mut x = [Complex64::new(0.0, 0.0); 3];
    for i in (0..3).rev() {
        let mut acc = r[i];
        for j in (i + 1)..3 {
            acc -= m[i][j] * x[j];
        }
        x[i] = acc / m[i][i];
    }
    Some((x, max_entry / min_pivot.max(1e-300)))
}

/// Solve the per-mode transmission problem for a tuned incident wave.
///
/// The amplitudes follow the leading-order modal laws of the sub-wavelength
/// expansion: phi_e,m = f_m n^2 k^n / ((2n+1)!! (lambda+2mu)^{n/2}) and
/// phi_b,m from the interior density relation
/// phi_b = beta_n phi_e/(i delta tau^2 k j_n(k) h_n(k)) - f n j_n(k_p).
pub fn solve_modes(spec: &IncidentSpec3D, nm: &NondimensionalMedium) -> Result<ModalSolution3D> {
    let n = spec.n;
    let det = spectra::modal_determinant(n, nm)?;
    if det.value.is_zero() {
        return Err(Error::SingularSystem {
            n,
            detail: "modal determinant vanished".into(),
        });
    }
    let scale_e = LogComplex::from_polar_log10(
        2.0 * (n as f64).log10() + n as f64 * nm.k.log10()
            - log10_odd_double_factorial(n as u32)
            - 0.5 * n as f64 * nm.lambda_plus_2mu().log10(),
        0.0,
    );
    // phi_b per unit f via the interior density relation
    let (jk, _) = jn_at(n, nm.k);
    let hk = hn_at(n, nm.k);
    let (jkp, _) = jn_at(n, nm.k_p);
    let beta = LogComplex::from_c64(spectra::beta_n(n, nm)?);
    let denom =
        LogComplex::from_c64(Complex64::new(0.0, nm.delta * nm.tau * nm.tau * nm.k)) * jk * hk;
    let scale_b = beta * scale_e / denom - LogComplex::from_real(n as f64) * jkp;

    let phi_e: Vec<LogComplex> = spec
        .f
        .iter()
        .map(|&c| LogComplex::from_c64(c) * scale_e)
        .collect();
    let phi_b: Vec<LogComplex> = spec
        .f
        .iter()
        .map(|&c| LogComplex::from_c64(c) * scale_b)
        .collect();

    let transmission = transmission_solve(n, nm)?;
    let sum_f2: f64 = spec.f.iter().map(|c| c.norm_sqr()).sum();
    let incident_norm_sq = incident_norm_sq_unit(n, nm.k_p) * LogComplex::from_real(sum_f2);

    Ok(ModalSolution3D {
        spec: spec.clone(),
        medium: *nm,
        phi_e,
        phi_b,
        determinant: det.value,
        near_singular: det.near_singular,
        transmission,
        incident_norm_sq,
    })
}

// ---------------------------------------------------------------------------
// field evaluation
// ---------------------------------------------------------------------------

fn to_spherical(x: [f64; 3]) -> (f64, f64, f64) {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if r < 1e-300 {
        return (0.0, 0.0, 0.0);
    }
    let theta = (x[2] / r).clamp(-1.0, 1.0).acos();
    let phi = x[1].atan2(x[0]);
    (r, theta, phi)
}

/// Which exterior field a diagnostic integrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldSelect {
    Scattered,
    Incident,
    TotalExterior,
}

impl ModalSolution3D {
    /// 1/||u^i|| when the normalized flag is set, else one.
    pub fn norm_factor(&self) -> LogComplex {
        if self.spec.normalized {
            LogComplex::from_polar_log10(-0.5 * self.incident_norm_sq.log10_mag(), 0.0)
        } else {
            LogComplex::one()
        }
    }

    fn ang(&self, theta: f64, phi: f64) -> AngularSums {
        angular_sums(self.spec.n, &self.spec.f, theta, phi)
    }

    /// phi_e per unit incident coefficient (m-independent by construction).
    pub fn phi_e_unit(&self) -> LogComplex {
        let n = self.spec.n;
        let nm = &self.medium;
        LogComplex::from_polar_log10(
            2.0 * (n as f64).log10() + n as f64 * nm.k.log10()
                - log10_odd_double_factorial(n as u32)
                - 0.5 * n as f64 * nm.lambda_plus_2mu().log10(),
            0.0,
        )
    }

    /// phi_b per unit incident coefficient.
    pub fn phi_b_unit(&self) -> LogComplex {
        for (i, c) in self.spec.f.iter().enumerate() {
            if c.norm() > 0.0 {
                return self.phi_b[i] / LogComplex::from_c64(*c);
            }
        }
        LogComplex::zero()
    }

    /// Amplitude of the scattered radial profile h_n(k_p r), per unit f_m:
    /// phi_e-unit * (-i k_p^2/(lambda+2mu)) j_n(k_p), with normalization.
    fn scattered_amp(&self) -> LogComplex {
        let nm = &self.medium;
        let n = self.spec.n;
        let (jkp, _) = jn_at(n, nm.k_p);
        let pref =
            LogComplex::from_c64(Complex64::new(0.0, -nm.k_p * nm.k_p / nm.lambda_plus_2mu()));
        self.phi_e_unit() * pref * jkp * self.norm_factor()
    }

    fn scattered_term(&self, r: f64) -> SpheroidalTerm {
        let n = self.spec.n;
        let nm = &self.medium;
        let lad = spherical_h1_ladder(n + 1, Complex64::new(nm.k_p * r, 0.0)).expect("r > 0");
        let lkr = LogComplex::from_real(nm.k_p * r);
        let hd = lad[n - 1] - LogComplex::from_real((n + 1) as f64) / lkr * lad[n];
        // pure radial profile: f = h_n(k_p r), g = 0
        let fg = FgSet {
            f: lad[n],
            g: LogComplex::zero(),
            fp: LogComplex::from_real(nm.k_p) * hd,
            gp: LogComplex::zero(),
        };
        SpheroidalTerm {
            amp: self.scattered_amp(),
            fg,
        }
    }

    fn incident_term(&self, r: f64) -> SpheroidalTerm {
        SpheroidalTerm {
            amp: self.norm_factor(),
            fg: incident_bulk_fg(self.spec.n, self.medium.k_p, r),
        }
    }

    /// Incident bulk field and its Cartesian gradient at x.
    pub fn eval_incident(&self, x: [f64; 3]) -> ([Complex64; 3], [[Complex64; 3]; 3]) {
        let n = self.spec.n;
        let (r, theta, phi) = to_spherical(x);
        let r = r.max(1e-12);
        let terms = [self.incident_term(r)];
        let ang = self.ang(theta, phi);
        let v = eval_field(&terms, &ang, theta, phi);
        let gd = eval_gradient(n, &terms, &ang, r);
        (
            [v[0].to_c64(), v[1].to_c64(), v[2].to_c64()],
            gradient_to_cartesian(&gd, theta, phi),
        )
    }

    /// Entire-solution (compressional) incident wave grad(j_n(k_p r) Y)/k_p
    /// with the same coefficients; satisfies the elastic wave equation to
    /// machine precision and drives the exact transmission solve.
    pub fn eval_incident_entire(&self, x: [f64; 3]) -> ([Complex64; 3], [[Complex64; 3]; 3]) {
        let n = self.spec.n;
        let (r, theta, phi) = to_spherical(x);
        let r = r.max(1e-12);
        let fg = compressional_fg(RadialKind::Regular, n, self.medium.k_p, r);
        let terms = [SpheroidalTerm {
            amp: self.norm_factor(),
            fg,
        }];
        let ang = self.ang(theta, phi);
        let v = eval_field(&terms, &ang, theta, phi);
        let gd = eval_gradient(n, &terms, &ang, r);
        (
            [v[0].to_c64(), v[1].to_c64(), v[2].to_c64()],
            gradient_to_cartesian(&gd, theta, phi),
        )
    }

    /// Interior acoustic field u(x) = sum_m phi_b,m (-i k j_n(k|x|) h_n(k)) Y_n^m.
    pub fn eval_interior(&self, x: [f64; 3]) -> Complex64 {
        self.eval_interior_log(x).to_c64()
    }

    pub fn eval_interior_log(&self, x: [f64; 3]) -> LogComplex {
        let n = self.spec.n;
        let nm = &self.medium;
        let (r, theta, phi) = to_spherical(x);
        let r = r.max(1e-12);
        let (jr, _) = jn_at(n, nm.k * r);
        let hk = hn_at(n, nm.k);
        let prof = LogComplex::from_c64(Complex64::new(0.0, -nm.k)) * jr * hk;
        let ang = self.ang(theta, phi);
        self.phi_b_unit() * self.norm_factor() * prof * LogComplex::from_c64(ang.y)
    }

    /// Scattered exterior field u^s(x) (radial modal representation), its
    /// Cartesian gradient and divergence.
    pub fn eval_exterior_scattered(
        &self,
        x: [f64; 3],
    ) -> ([Complex64; 3], [[Complex64; 3]; 3], Complex64) {
        let n = self.spec.n;
        let (r, theta, phi) = to_spherical(x);
        let terms = [self.scattered_term(r)];
        let ang = self.ang(theta, phi);
        let v = eval_field(&terms, &ang, theta, phi);
        let gd = eval_gradient(n, &terms, &ang, r);
        let div = gd.div.to_c64();
        (
            [v[0].to_c64(), v[1].to_c64(), v[2].to_c64()],
            gradient_to_cartesian(&gd, theta, phi),
            div,
        )
    }

    /// Exterior total field u = u^s + u^i and its Cartesian gradient.
    pub fn eval_total_exterior(&self, x: [f64; 3]) -> ([Complex64; 3], [[Complex64; 3]; 3]) {
        let n = self.spec.n;
        let (r, theta, phi) = to_spherical(x);
        let terms = [self.scattered_term(r), self.incident_term(r)];
        let ang = self.ang(theta, phi);
        let v = eval_field(&terms, &ang, theta, phi);
        let gd = eval_gradient(n, &terms, &ang, r);
        (
            [v[0].to_c64(), v[1].to_c64(), v[2].to_c64()],
            gradient_to_cartesian(&gd, theta, phi),
        )
    }

    /// Strain-energy density E(u)(x) of the exterior total field:
    /// Re[sigma(u) : conj(grad u)], plus the unmodified complex value.
    pub fn stress_density(&self, x: [f64; 3]) -> (f64, Complex64) {
        let gd = self.gradient_data(FieldSelect::TotalExterior, x);
        let sd = wf_stress_density(&gd, self.medium.lambda, self.medium.mu);
        let scale = 10f64.powf(2.0 * sd.log10_shift);
        (sd.re * scale, sd.complex_raw * scale)
    }

    /// Gradient data of a chosen field combination at a point, for the
    /// diagnostics quadratures (kept log-scaled).
    pub fn gradient_data(&self, which: FieldSelect, x: [f64; 3]) -> GradientData {
        let n = self.spec.n;
        let (r, theta, phi) = to_spherical(x);
        let ang = self.ang(theta, phi);
        let terms: Vec<SpheroidalTerm> = match which {
            FieldSelect::Scattered => vec![self.scattered_term(r)],
            FieldSelect::Incident => vec![self.incident_term(r)],
            FieldSelect::TotalExterior => vec![self.scattered_term(r), self.incident_term(r)],
        };
        eval_gradient(n, &terms, &ang, r)
    }

    /// Radial amplitude data for the modal closed-form shell integrals:
    /// (F(r), G(r)) of the selected field per unit Y-coefficient, with the
    /// normalization folded in.
    pub fn radial_profile(&self, which: FieldSelect, r: f64) -> FgSet {
        let terms: Vec<SpheroidalTerm> = match which {
            FieldSelect::Scattered => vec![self.scattered_term(r)],
            FieldSelect::Incident => vec![self.incident_term(r)],
            FieldSelect::TotalExterior => vec![self.scattered_term(r), self.incident_term(r)],
        };
        let mut f = LogComplex::zero();
        let mut g = LogComplex::zero();
        let mut fp = LogComplex::zero();
        let mut gp = LogComplex::zero();
        for t in &terms {
            f = f + t.amp * t.fg.f;
            g = g + t.amp * t.fg.g;
            fp = fp + t.amp * t.fg.fp;
            gp = gp + t.amp * t.fg.gp;
        }
        FgSet { f, g, fp, gp }
    }

    /// Interior radial amplitude: u = A(r) Y with A = phi_b-unit * profile.
    pub fn interior_radial_amplitude(&self, r: f64) -> LogComplex {
        let n = self.spec.n;
        let nm = &self.medium;
        let (jr, _) = jn_at(n, nm.k * r.max(1e-12));
        let hk = hn_at(n, nm.k);
        let prof = LogComplex::from_c64(Complex64::new(0.0, -nm.k)) * jr * hk;
        self.phi_b_unit() * self.norm_factor() * prof
    }

    // ---- exact transmission-route evaluators ----

    /// Exact interior acoustic field a j_n(k|x|) Y (transmission route).
    pub fn transmission_interior_log(&self, x: [f64; 3]) -> LogComplex {
        let n = self.spec.n;
        let (r, theta, phi) = to_spherical(x);
        let (jr, _) = jn_at(n, self.medium.k * r.max(1e-12));
        let ang = self.ang(theta, phi);
        self.transmission.a * self.norm_factor() * jr * LogComplex::from_c64(ang.y)
    }

    /// Exact exterior scattered field b L_h + c N_h (transmission route).
    pub fn transmission_exterior(&self, x: [f64; 3]) -> ([Complex64; 3], [[Complex64; 3]; 3]) {
        let n = self.spec.n;
        let nm = &self.medium;
        let (r, theta, phi) = to_spherical(x);
        let nf = self.norm_factor();
        let terms = [
            SpheroidalTerm {
                amp: self.transmission.b * nf,
                fg: compressional_fg(RadialKind::Outgoing, n, nm.k_p, r),
            },
            SpheroidalTerm {
                amp: self.transmission.c * nf,
                fg: shear_fg(RadialKind::Outgoing, n, nm.k_s, r),
            },
        ];
        let ang = self.ang(theta, phi);
        let v = eval_field(&terms, &ang, theta, phi);
        let gd = eval_gradient(n, &terms, &ang, r);
        (
            [v[0].to_c64(), v[1].to_c64(), v[2].to_c64()],
            gradient_to_cartesian(&gd, theta, phi),
        )
    }

    /// Residuals of the three transmission conditions at a boundary angle,
    /// reassembled from the solved exact-route coefficients; each residual
    /// is relative to the largest participating term.
    pub fn transmission_residuals(&self, theta: f64, phi: f64) -> [f64; 3] {
        let n = self.spec.n;
        let nm = &self.medium;
        let (lambda, mu) = (nm.lambda, nm.mu);
        let fg_l = compressional_fg(RadialKind::Outgoing, n, nm.k_p, 1.0);
        let fg_n = shear_fg(RadialKind::Outgoing, n, nm.k_s, 1.0);
        let fg_i = compressional_fg(RadialKind::Regular, n, nm.k_p, 1.0);
        let (tn_l, tt_l) = traction_components(n, &fg_l, 1.0, lambda, mu);
        let (tn_n, tt_n) = traction_components(n, &fg_n, 1.0, lambda, mu);
        let (tn_i, tt_i) = traction_components(n, &fg_i, 1.0, lambda, mu);
        let (jk, jdk) = jn_at(n, nm.k);
        let t = &self.transmission;
        let ang = self.ang(theta, phi);
        let ay = LogComplex::from_c64(ang.y);
        if ay.is_zero() {
            return [0.0; 3];
        }
        let lk = LogComplex::from_real(nm.k);
        let dt2 = LogComplex::from_real(nm.delta * nm.tau * nm.tau);

        let rel = |terms: &[LogComplex]| -> f64 {
            let mut sum = LogComplex::zero();
            let mut scale = f64::NEG_INFINITY;
            for &tm in terms {
                if !tm.is_zero() {
                    scale = scale.max(tm.log10_mag());
                }
                sum = sum + tm;
            }
            if sum.is_zero() {
                0.0
            } else {
                10f64.powf(sum.log10_mag() - scale)
            }
        };

        // (i) normal displacement: b fL + c fN + fi - a j_n'(k)/k = 0
        let r1 = rel(&[t.b * fg_l.f, t.c * fg_n.f, fg_i.f, (t.a * jdk / lk).neg()]);
        // (ii) normal traction: b tnL + c tnN + tni + delta tau^2 a j_n(k) = 0
        let r2 = rel(&[t.b * tn_l, t.c * tn_n, tn_i, t.a * dt2 * jk]);
        // (iii) tangential traction: b ttL + c ttN + tti = 0
        let r3 = rel(&[t.b * tt_l, t.c * tt_n, tt_i]);
        [r1, r2, r3]
    }
}

// ---------------------------------------------------------------------------
// fundamental solution and the quadrature oracle
// ---------------------------------------------------------------------------

/// Fundamental tensor of the time-harmonic Lame operator
/// mu lap + (lambda + mu) grad div + k^2 tau^2 at the medium's wavenumbers.
///
/// The two-exponential difference in the Hessian part cancels
/// catastrophically for |k_s r| << 1, so that regime switches to the
/// ascending series of (e^{i k_p r} - e^{i k_s r})/r, whose terms
/// i^j (k_p^j - k_s^j) r^{j-1}/j! are cancellation-free.
pub fn kupradze_tensor(x: [f64; 3], nm: &NondimensionalMedium) -> [[Complex64; 3]; 3] {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let i = Complex64::new(0.0, 1.0);
    let eks = (i * nm.k_s * r).exp();
    let (g1, g2) = if nm.k_s * r < 0.5 {
        // series for G(r) = (e^{ikp r} - e^{iks r})/r and its derivatives
        let mut g1 = Complex64::new(0.0, 0.0);
        let mut g2 = Complex64::new(0.0, 0.0);
        let mut ipow = i; // i^j
        let mut kp_j = nm.k_p; // k_p^j
        let mut ks_j = nm.k_s;
        let mut fact = 1.0f64; // j!
        for j in 1..=30usize {
            fact *= j as f64;
            let coef = ipow * (kp_j - ks_j) / fact;
            if j >= 2 {
                g1 += coef * (j - 1) as f64 * r.powi(j as i32 - 2);
            }
            if j >= 3 {
                g2 += coef * ((j - 1) * (j - 2)) as f64 * r.powi(j as i32 - 3);
            }
            ipow *= i;
            kp_j *= nm.k_p;
            ks_j *= nm.k_s;
        }
        (g1, g2)
    } else {
        let ekp = (i * nm.k_p * r).exp();
        let g1 = (i * nm.k_p * ekp - i * nm.k_s * eks) / r - (ekp - eks) / (r * r);
        let g2 = (-nm.k_p * nm.k_p * ekp + nm.k_s * nm.k_s * eks) / r
            - 2.0 * (i * nm.k_p * ekp - i * nm.k_s * eks) / (r * r)
            + 2.0 * (ekp - eks) / (r * r * r);
        (g1, g2)
    };
    let pref = 1.0 / (4.0 * std::f64::consts::PI * nm.k * nm.k * nm.tau * nm.tau);
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let d = if a == b { 1.0 } else { 0.0 };
            let hess = g2 * x[a] * x[b] / (r * r) + g1 * (d / r - x[a] * x[b] / (r * r * r));
            out[a][b] = -d * eks / (4.0 * std::f64::consts::PI * nm.mu * r) + pref * hess;
        }
    }
    out
}

/// Static (zero-frequency) Kelvin-type limit of the fundamental tensor.
pub fn kupradze_static(x: [f64; 3], nm: &NondimensionalMedium) -> [[f64; 3]; 3] {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let c1 = -(1.0 / nm.mu + 1.0 / nm.lambda_plus_2mu()) / (8.0 * std::f64::consts::PI);
    let c2 = -(1.0 / nm.mu - 1.0 / nm.lambda_plus_2mu()) / (8.0 * std::f64::consts::PI);
    let mut out = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let d = if a == b { 1.0 } else { 0.0 };
            out[a][b] = c1 * d / r + c2 * x[a] * x[b] / (r * r * r);
        }
    }
    out
}

/// Density choices for the single-layer oracle, all attached to degree n:
/// Y_n^m nu, I_{n-1}^m, N_{n+1}^m, T_n^m.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleDensity {
    YNu,
    IVec,
    NVec,
    TVec,
}

/// Brute-force product quadrature of the elastic single layer
/// `S[phi](x) = Int Gamma(x - y) phi(y) ds(y)` over the unit sphere,
/// for off-surface x. Gauss in cos(theta), trapezoid in phi.
pub fn oracle_single_layer(
    x: [f64; 3],
    n: usize,
    m: i32,
    density: OracleDensity,
    nm: &NondimensionalMedium,
    quad_order: usize,
) -> Result<[Complex64; 3]> {
    let min = 2 * (n + 2);
    if quad_order < min {
        return Err(Error::QuadratureOrder {
            order: quad_order,
            n,
            min,
        });
    }
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if (r - 1.0).abs() < 1e-9 {
        return Err(Error::Domain(
            "oracle evaluates off the surface only".into(),
        ));
    }
    let nodes = crate::quadrature::gauss_legendre(quad_order);
    let nphi = 2 * quad_order;
    let mut acc = [Complex64::new(0.0, 0.0); 3];
    for &(t, w) in nodes.iter() {
        let theta = t.clamp(-1.0, 1.0).acos();
        for ip in 0..nphi {
            let phi = 2.0 * std::f64::consts::PI * ip as f64 / nphi as f64;
            let (st, ct) = (theta.sin(), theta.cos());
            let y = [st * phi.cos(), st * phi.sin(), ct];
            let dens = density_vector(n, m, density, theta, phi);
            let g = kupradze_tensor([x[0] - y[0], x[1] - y[1], x[2] - y[2]], nm);
            let wgt = w * 2.0 * std::f64::consts::PI / nphi as f64;
            for a in 0..3 {
                let mut v = Complex64::new(0.0, 0.0);
                for b in 0..3 {
                    v += g[a][b] * dens[b];
                }
                acc[a] += wgt * v;
            }
        }
    }
    Ok(acc)
}

fn density_vector(
    n: usize,
    m: i32,
    density: OracleDensity,
    theta: f64,
    phi: f64,
) -> [Complex64; 3] {
    use crate::specfun::harmonics::{angular_functions, vector_spherical_harmonics};
    match density {
        OracleDensity::YNu => {
            let y = angular_functions(n as u32, m, theta, phi).y;
            let (st, ct) = (theta.sin(), theta.cos());
            let nu = [st * phi.cos(), st * phi.sin(), ct];
            [y * nu[0], y * nu[1], y * nu[2]]
        }
        OracleDensity::IVec => vector_spherical_harmonics(n as u32 - 1, m, theta, phi).i_vec,
        OracleDensity::NVec => vector_spherical_harmonics(n as u32 + 1, m, theta, phi).n_vec,
        OracleDensity::TVec => vector_spherical_harmonics(n as u32, m, theta, phi).t_vec,
    }
}

/// Exact spectral representation of the single layer with a spheroidal
/// density f_d Y nu + g_d grad_S Y at degree n: interior regular pair and
/// exterior outgoing pair matched by continuity and the traction jump
/// [d_nu S]_+ - [d_nu S]_- = phi.
pub struct SpectralLayerField {
    pub n: usize,
    pub interior_l: LogComplex,
    pub interior_n: LogComplex,
    pub exterior_l: LogComplex,
    pub exterior_n: LogComplex,
}

pub fn single_layer_spectral(
    n: usize,
    f_d: f64,
    g_d: f64,
    nm: &NondimensionalMedium,
) -> Result<SpectralLayerField> {
    let (lambda, mu) = (nm.lambda, nm.mu);
    let sets = [
        compressional_fg(RadialKind::Regular, n, nm.k_p, 1.0),
        shear_fg(RadialKind::Regular, n, nm.k_s, 1.0),
        compressional_fg(RadialKind::Outgoing, n, nm.k_p, 1.0),
        shear_fg(RadialKind::Outgoing, n, nm.k_s, 1.0),
    ];
    let tr: Vec<(LogComplex, LogComplex)> = sets
        .iter()
        .map(|s| traction_components(n, s, 1.0, lambda, mu))
        .collect();
    // rows: continuity f, continuity g, jump tn, jump tt
    // cols: A_L, A_N (interior), B_L, B_N (exterior)
    let sgn = [1.0, 1.0, -1.0, -1.0];
    let tsgn = [-1.0, -1.0, 1.0, 1.0];
    let mut cols: Vec<[LogComplex; 4]> = Vec::with_capacity(4);
    for (j, s) in sets.iter().enumerate() {
        cols.push([
            s.f * LogComplex::from_real(sgn[j]),
            s.g * LogComplex::from_real(sgn[j]),
            tr[j].0 * LogComplex::from_real(tsgn[j]),
            tr[j].1 * LogComplex::from_real(tsgn[j]),
        ]);
    }
    let col_scale: Vec<LogComplex> = cols
        .iter()
        .map(|c| {
            let mx = c
                .iter()
                .filter(|e| !e.is_zero())
                .map(|e| e.log10_mag())
                .fold(f64::NEG_INFINITY, f64::max);
            LogComplex::from_polar_log10(mx, 0.0)
        })
        .collect();
    let mut a = [[Complex64::new(0.0, 0.0); 4]; 4];
    for j in 0..4 {
        for i in 0..4 {
            a[i][j] = (cols[j][i] / col_scale[j]).to_c64();
        }
    }
    let rhs = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(f_d, 0.0),
        Complex64::new(g_d, 0.0),
    ];
    let x = solve4(a, rhs).ok_or_else(|| Error::SingularSystem {
        n,
        detail: "single-layer matching system singular".into(),
    })?;
    Ok(SpectralLayerField {
        n,
        interior_l: LogComplex::from_c64(x[0]) / col_scale[0],
        interior_n: LogComplex::from_c64(x[1]) / col_scale[1],
        exterior_l: LogComplex::from_c64(x[2]) / col_scale[2],
        exterior_n: LogComplex::from_c64(x[3]) / col_scale[3],
    })
}

fn solve4(mut m: [[Complex64; 4]; 4], mut r: [Complex64; 4]) -> Option<[Complex64; 4]> {
    for col in 0..4 {
        let (piv, pv) = (col..4)
            .map(|i| (i, m[i][col].norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())?;
        if pv == 0.0 {
            return None;
        }
        m.swap(col, piv);
        r.swap(col, piv);
        for i in (col + 1)..4 {
            let fac = m[i][col] / m[col][col];
            for j in col..4 {
                m[i][j] = m[i][j] - fac * m[col][j];
            }
            r[i] = r[i] - fac * r[col];
        }
    }
    let mut x = [Complex64::new(0.0, 0.0); 4];
    for i in (0..4).rev() {
        if m[i][i].norm() == 0.0 {
            return None;
        }
        let mut acc = r[i];
        for j in (i + 1)..4 {
            acc -= m[i][j] * x[j];
        }
        x[i] = acc / m[i][i];
    }
    Some(x)
}

impl SpectralLayerField {
    /// Cartesian field at an exterior point (|x| > 1).
    pub fn eval_exterior(&self, x: [f64; 3], m: i32, nm: &NondimensionalMedium) -> [Complex64; 3] {
        let (r, theta, phi) = to_spherical(x);
        let n = self.n;
        let terms = [
            SpheroidalTerm {
                amp: self.exterior_l,
                fg: compressional_fg(RadialKind::Outgoing, n, nm.k_p, r),
            },
            SpheroidalTerm {
                amp: self.exterior_n,
                fg: shear_fg(RadialKind::Outgoing, n, nm.k_s, r),
            },
        ];
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        coeffs[(m + n as i32) as usize] = Complex64::new(1.0, 0.0);
        let ang = angular_sums(n, &coeffs, theta, phi);
        let v = eval_field(&terms, &ang, theta, phi);
        [v[0].to_c64(), v[1].to_c64(), v[2].to_c64()]
    }

    /// Boundary value decomposed on (Y nu, grad_S Y): (F, G).
    pub fn boundary_components(&self, nm: &NondimensionalMedium) -> (Complex64, Complex64) {
        let n = self.n;
        let l = compressional_fg(RadialKind::Regular, n, nm.k_p, 1.0);
        let s = shear_fg(RadialKind::Regular, n, nm.k_s, 1.0);
        let f = self.interior_l * l.f + self.interior_n * s.f;
        let g = self.interior_l * l.g + self.interior_n * s.g;
        (f.to_c64(), g.to_c64())
    }
}

/// Leading-order radial prediction of the scattered single layer with density
/// Y_n^m nu at an exterior point: (-i k_p^2/(lambda+2mu)) j_n(k_p) h_n(k_p r).
/// Reported alongside the exact spectral value; the two differ materially
/// (the exact exterior field is not purely radial), which the reports record.
pub fn radial_profile_prediction(n: usize, r: f64, nm: &NondimensionalMedium) -> Complex64 {
    let (j, _) = jn_at(n, nm.k_p);
    let h = hn_at(n, nm.k_p * r);
    (LogComplex::from_c64(Complex64::new(0.0, -nm.k_p * nm.k_p / nm.lambda_plus_2mu())) * j * h)
        .to_c64()
}
