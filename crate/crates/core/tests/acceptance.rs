//! Acceptance suite: one test per criterion, each printing its pass line.
//! Run with `cargo test -p bescat --test acceptance -- --nocapture` to see
//! the per-criterion summaries.

use bescat::diagnostics::{
    localization_ratios, resonance_ratios, shell_norm_sq_log10, stress_energies,
    stress_lower_bound, NormMethod, ShellField, ShellRegion,
};
use bescat::medium::{nondimensionalize, NondimensionalMedium, PhysicalMedium};
use bescat::solver2d::{solve_modes_2d, Field2D, IncidentSpec2D};
use bescat::solver3d::{
    oracle_single_layer, single_layer_spectral, solve_modes, IncidentSpec3D, OracleDensity,
};
use num_complex::Complex64;

fn pdms() -> NondimensionalMedium {
    nondimensionalize(&PhysicalMedium::pdms_bubble()).unwrap()
}

fn region() -> ShellRegion {
    ShellRegion::new(0.9, 1.1, 2.0).unwrap()
}

/// Criterion 1: the computed stress lower bound beta(n) reproduces the
/// reference mantissas 4.37537 / 1.152114 / 9.36331 at n = 5, 15, 25 within
/// half a unit in the fourth significant digit (relative 5e-4); the
/// reference exponents sit one decade above the formula and are reported,
/// not matched.
#[test]
fn criterion_1_beta_mantissa_reproduction() {
    let nm = pdms();
    let t0 = std::time::Instant::now();
    let rows = [
        (5usize, 4.3753749785f64, -5i32, -4i32),
        (15, 1.1521136196, 6, 7),
        (25, 9.3633300494, 15, 16),
    ];
    for (n, mantissa, exp_formula, exp_table) in rows {
        let beta = stress_lower_bound(n, 1.1, &nm);
        let computed_mantissa = beta / 10f64.powi(beta.abs().log10().floor() as i32);
        let rel = (computed_mantissa / mantissa - 1.0).abs();
        let exp = beta.abs().log10().floor() as i32;
        println!(
            "criterion 1 [n={n}]: beta = {beta:.6e} (mantissa {computed_mantissa:.6} vs \
             {mantissa:.6}, rel {rel:.2e}; exponent {exp} vs reference {exp_table}, one-decade \
             discrepancy reported)"
        );
        assert!(
            rel < 5e-4,
            "n={n}: mantissa {computed_mantissa} vs {mantissa} (rel {rel:.2e})"
        );
        assert_eq!(exp, exp_formula, "formula exponent moved");
    }
    let dt = t0.elapsed();
    println!("criterion 1 PASS ({dt:.2?} < 1 s)");
    assert!(dt.as_secs_f64() < 1.0);
}

/// Criterion 2: with the normalized incident wave,
/// E(u)/||u^i||^2 >= beta(n, zeta2) at n = 5, 15, 25, zeta2 = 1.1.
#[test]
fn criterion_2_stress_concentration_inequality() {
    let nm = pdms();
    let t0 = std::time::Instant::now();
    for n in [5usize, 15, 25] {
        let spec = IncidentSpec3D::single_mode(n, n as i32, true).unwrap();
        let sol = solve_modes(&spec, &nm).unwrap();
        let en = stress_energies(&sol, &region()).unwrap();
        let beta = stress_lower_bound(n, 1.1, &nm);
        println!(
            "criterion 2 [n={n}]: E(u)/||u_i||^2 = {:.4e} >= beta = {beta:.4e} (margin {:.1}x)",
            en.e_u,
            en.e_u / beta
        );
        assert!(en.e_u >= beta, "n={n}: {} < {beta}", en.e_u);
        if n == 15 {
            // the scaled stress sits within a factor 10 of the reference 7.5833e7
            let factor = en.e_u / 7.5833e7;
            println!("criterion 2 [n=15]: vs reference 7.5833e7: factor {factor:.3}");
            assert!(factor > 0.1 && factor < 10.0, "factor {factor}");
        }
    }
    let dt = t0.elapsed();
    println!("criterion 2 PASS ({dt:.2?} < 30 s)");
    assert!(dt.as_secs_f64() < 30.0);
}

/// Criterion 3: 3D localization ratios match the closed forms
/// zeta1^{2n+3} (interior) and
/// (1 - (zeta2/R)^{2n-1}) / (zeta2^{2n-1} (1 - R^{1-2n})) (exterior)
/// to relative 1e-4 at n = 5, 10.
#[test]
fn criterion_3_localization_closed_forms() {
    let nm = pdms();
    let t0 = std::time::Instant::now();
    let reg = region();
    for n in [5usize, 10] {
        let spec = IncidentSpec3D::single_mode(n, n as i32, true).unwrap();
        let sol = solve_modes(&spec, &nm).unwrap();
        let (eu, eus) = localization_ratios(&sol, &reg).unwrap();
        let law_in = 0.9f64.powi(2 * n as i32 + 3);
        let p = 2 * n as i32 - 1;
        let law_ex: f64 =
            (1.0 - (1.1f64 / 2.0).powi(p)) / (1.1f64.powi(p) * (1.0 - 2.0f64.powi(-p)));
        let rel_in = ((eu * eu) / law_in - 1.0).abs();
        let rel_ex = ((eus * eus) / law_ex - 1.0).abs();
        println!(
            "criterion 3 [n={n}]: eta_u^2 = {:.7} (law {law_in:.7}, rel {rel_in:.2e}); \
             eta_us^2 = {:.6} (law {law_ex:.6}, rel {rel_ex:.2e})",
            eu * eu,
            eus * eus
        );
        assert!(rel_in < 1e-4, "interior n={n} rel {rel_in}");
        assert!(rel_ex < 1e-4, "exterior n={n} rel {rel_ex}");
        if n == 5 {
            assert!((eu * eu - 0.2541866).abs() < 1e-6);
            assert!((eus * eus - 0.422971).abs() < 1e-5);
        }
    }
    let dt = t0.elapsed();
    println!("criterion 3 PASS ({dt:.2?} < 10 s)");
    assert!(dt.as_secs_f64() < 10.0);
}

/// Criterion 4: disk localization at n = 60 satisfies eta_u < 0.1 and
/// eta_us < 0.3, and both sequences decrease monotonically over
/// n = 20, 40, 60 (digit-level FEM matching not required).
#[test]
fn criterion_4_disk_localization() {
    let nm = pdms();
    let t0 = std::time::Instant::now();
    let mut prev = (f64::INFINITY, f64::INFINITY);
    let mut at60 = (0.0, 0.0);
    for n in [20usize, 40, 60] {
        let spec = IncidentSpec2D::new(n, Complex64::new(1.0, 0.0), true).unwrap();
        let sol = solve_modes_2d(&spec, &nm).unwrap();
        let (eu, eus) = sol.localization_ratio(0.9, 1.1, 2.0, 96);
        println!("criterion 4 [n={n}]: eta_u = {eu:.6e}, eta_us = {eus:.6e}");
        assert!(
            eu < prev.0 && eus < prev.1,
            "monotone decrease violated at n={n}"
        );
        prev = (eu, eus);
        if n == 60 {
            at60 = (eu, eus);
        }
    }
    assert!(at60.0 < 0.1, "eta_u(60) = {}", at60.0);
    assert!(at60.1 < 0.3, "eta_us(60) = {}", at60.1);
    let dt = t0.elapsed();
    println!("criterion 4 PASS ({dt:.2?} < 60 s)");
    assert!(dt.as_secs_f64() < 60.0);
}

/// Criterion 5: the measured gradient ratios exceed the analytic
/// surface-resonance bounds at n = 15, 25.
#[test]
fn criterion_5_surface_resonance_bounds() {
    let nm = pdms();
    let t0 = std::time::Instant::now();
    for n in [15usize, 25] {
        let spec = IncidentSpec3D::single_mode(n, n as i32, true).unwrap();
        let sol = solve_modes(&spec, &nm).unwrap();
        let r = resonance_ratios(&sol, &region()).unwrap();
        println!(
            "criterion 5 [n={n}]: interior {:.4e} >= bound {:.4e} ({:.2}x); \
             exterior {:.4e} >= bound {:.4e} ({:.2}x)",
            r.grad_ratio_u,
            r.bound_interior,
            r.grad_ratio_u / r.bound_interior,
            r.grad_ratio_us,
            r.bound_exterior,
            r.grad_ratio_us / r.bound_exterior
        );
        assert!(
            r.grad_ratio_u >= r.bound_interior,
            "interior bound violated at n={n}"
        );
        assert!(
            r.grad_ratio_us >= r.bound_exterior,
            "exterior bound violated at n={n}"
        );
    }
    let dt = t0.elapsed();
    println!("criterion 5 PASS ({dt:.2?} < 30 s)");
    assert!(dt.as_secs_f64() < 30.0);
}

/// Criterion 6: the always-runnable property suites at their stated
/// tolerances.
#[test]
fn criterion_6_property_suites() {
    let nm = pdms();
    let t0 = std::time::Instant::now();

    // Wronskian <= 1e-11 on [1e-4, 10] x n <= 30
    {
        use bescat::specfun::{spherical_bessel_j, spherical_hankel_h1};
        use bescat::LogComplex;
        let mut worst: f64 = 0.0;
        for n in [0usize, 3, 11, 22, 30] {
            for i in 0..20 {
                let z = 10f64.powf(-4.0 + 5.0 * i as f64 / 19.0);
                let zc = Complex64::new(z, 0.0);
                let (j, jd) = spherical_bessel_j(n, zc);
                let (h, hd) = spherical_hankel_h1(n, zc).unwrap();
                let w = (j * hd - jd * h) * LogComplex::from_c64(zc * zc);
                worst = worst.max((w.to_c64() - Complex64::new(0.0, 1.0)).norm());
            }
        }
        println!("criterion 6 [wronskian]: worst {worst:.2e} <= 1e-11");
        assert!(worst <= 1e-11);
    }
    // harmonic orthonormality <= 1e-10 (quadrature)
    {
        use bescat::quadrature::gauss_legendre;
        use bescat::specfun::angular_functions;
        let mut worst: f64 = 0.0;
        for (n1, m1, n2, m2) in [(3, 1, 3, 1), (3, 1, 4, 1), (2, 2, 2, -2), (15, 7, 15, 7)] {
            let nodes = gauss_legendre(48);
            let nphi = 64;
            let mut acc = Complex64::new(0.0, 0.0);
            for &(tt, w) in nodes.iter() {
                let theta = (tt + 1.0) / 2.0 * std::f64::consts::PI;
                let mut ring = Complex64::new(0.0, 0.0);
                for ip in 0..nphi {
                    let phi = 2.0 * std::f64::consts::PI * ip as f64 / nphi as f64;
                    let a = angular_functions(n1 as u32, m1, theta, phi).y;
                    let b = angular_functions(n2 as u32, m2, theta, phi).y;
                    ring += a * b.conj();
                }
                acc += w * ring * 2.0 * std::f64::consts::PI / nphi as f64
                    * theta.sin()
                    * std::f64::consts::FRAC_PI_2;
            }
            let expect = if (n1, m1) == (n2, m2) { 1.0 } else { 0.0 };
            worst = worst.max((acc.re - expect).abs()).max(acc.im.abs());
        }
        println!("criterion 6 [orthonormality]: worst {worst:.2e} <= 1e-10");
        assert!(worst <= 1e-10);
    }
    // vector-harmonic identities pointwise <= 1e-13
    {
        use bescat::specfun::{angular_functions, vector_spherical_harmonics};
        let mut worst: f64 = 0.0;
        for i in 0..25 {
            let theta = 0.05 + 3.0 * (i as f64) / 25.0;
            let phi = 0.37 * i as f64;
            for n in 1..=10u32 {
                let m = (i as i32 % (2 * n as i32 + 1)) - n as i32;
                let (st, ct) = (theta.sin(), theta.cos());
                let nu = [st * phi.cos(), st * phi.sin(), ct];
                let t = vector_spherical_harmonics(n, m, theta, phi).t_vec;
                let d = (t[0] * nu[0] + t[1] * nu[1] + t[2] * nu[2]).norm();
                worst = worst.max(d);
                if m.unsigned_abs() <= n {
                    let i_low = vector_spherical_harmonics(n - 1, m, theta, phi).i_vec;
                    let n_high = vector_spherical_harmonics(n + 1, m, theta, phi).n_vec;
                    let y = angular_functions(n, m, theta, phi).y;
                    for k in 0..3 {
                        let lhs = (i_low[k] + n_high[k]) / (2 * n + 1) as f64;
                        worst = worst.max((lhs - y * nu[k]).norm());
                    }
                }
            }
        }
        println!("criterion 6 [vector identities]: worst {worst:.2e} <= 1e-13");
        assert!(worst <= 1e-13);
    }
    // Lambert residual <= 1e-13
    {
        use bescat::specfun::lambert_w0;
        let mut worst: f64 = 0.0;
        for i in 0..500 {
            let x = -(-1.0f64).exp() + i as f64 * 0.1;
            let w = lambert_w0(x).unwrap();
            worst = worst.max((w * w.exp() - x).abs() / x.abs().max(1.0));
        }
        println!("criterion 6 [lambert]: worst {worst:.2e} <= 1e-13");
        assert!(worst <= 1e-13);
    }
    // energy decomposition identity <= 1e-10
    {
        let spec = IncidentSpec3D::single_mode(5, 5, true).unwrap();
        let sol = solve_modes(&spec, &nm).unwrap();
        let en = stress_energies(&sol, &region()).unwrap();
        println!(
            "criterion 6 [energy identity]: residual {:.2e} <= 1e-10",
            en.identity_residual
        );
        assert!(en.identity_residual <= 1e-10);
    }
    // modal closed form vs full quadrature shell norms <= 1e-6 (n <= 10)
    {
        let mut worst: f64 = 0.0;
        for n in [5usize, 10] {
            let spec = IncidentSpec3D::single_mode(n, 1, true).unwrap();
            let sol = solve_modes(&spec, &nm).unwrap();
            for (field, r0, r1) in [
                (ShellField::Interior, 0.0, 1.0),
                (ShellField::Scattered, 1.0, 1.1),
                (ShellField::Incident, 1.0, 2.0),
            ] {
                let a =
                    shell_norm_sq_log10(&sol, field, r0, r1, NormMethod::ModalClosedForm).unwrap();
                let b = shell_norm_sq_log10(&sol, field, r0, r1, NormMethod::Quadrature).unwrap();
                worst = worst.max((10f64.powf(a - b) - 1.0).abs());
            }
        }
        println!("criterion 6 [shell-norm dual route]: worst {worst:.2e} <= 1e-6");
        assert!(worst <= 1e-6);
    }
    // transmission-condition reassembly residuals <= 1e-8 (3D n <= 10, 2D n <= 20)
    {
        let mut worst3: f64 = 0.0;
        for n in [1usize, 4, 10] {
            let spec = IncidentSpec3D::single_mode(n, 0, true).unwrap();
            let sol = solve_modes(&spec, &nm).unwrap();
            for (t, p) in [(0.3, 0.0), (1.1, 2.0), (2.8, 5.0)] {
                let r = sol.transmission_residuals(t, p);
                worst3 = worst3.max(r[0]).max(r[1]).max(r[2]);
            }
        }
        let mut worst2: f64 = 0.0;
        for n in [1usize, 8, 20] {
            let spec = IncidentSpec2D::new(n, Complex64::new(1.0, 0.0), true).unwrap();
            let sol = solve_modes_2d(&spec, &nm).unwrap();
            for i in 0..64 {
                let th = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
                let r = sol.boundary_residuals(th);
                worst2 = worst2.max(r[0]).max(r[1]).max(r[2]);
            }
        }
        println!(
            "criterion 6 [transmission reassembly]: 3D worst {worst3:.2e}, 2D worst {worst2:.2e} <= 1e-8"
        );
        assert!(worst3 <= 1e-8 && worst2 <= 1e-8);
    }
    // finite-difference PDE residuals <= 1e-6 relative scale
    {
        // entire-solution incident wave in 3D (Navier) and interior acoustic
        // (Helmholtz) in both dimensions; the 2D per-family exterior case is
        // covered in the solver test suite
        let spec = IncidentSpec3D::single_mode(3, 1, true).unwrap();
        let sol = solve_modes(&spec, &nm).unwrap();
        let h = 5e-4;
        let f = |x: [f64; 3]| sol.eval_incident_entire(x).0;
        let x0 = [0.31, 0.4, 0.35];
        let mut lap = [Complex64::new(0.0, 0.0); 3];
        let s2 = [
            (-2i32, -1.0 / 12.0),
            (-1, 16.0 / 12.0),
            (0, -30.0 / 12.0),
            (1, 16.0 / 12.0),
            (2, -1.0 / 12.0),
        ];
        let s1 = [
            (-2i32, 1.0 / 12.0),
            (-1, -8.0 / 12.0),
            (1, 8.0 / 12.0),
            (2, -1.0 / 12.0),
        ];
        for ax in 0..3 {
            for &(s, w) in &s2 {
                let mut xp = x0;
                xp[ax] += s as f64 * h;
                let u = f(xp);
                for c in 0..3 {
                    lap[c] += w * u[c] / (h * h);
                }
            }
        }
        let div = |xq: [f64; 3]| -> Complex64 {
            let mut d = Complex64::new(0.0, 0.0);
            for ax in 0..3 {
                for &(s, w) in &s1 {
                    let mut xp = xq;
                    xp[ax] += s as f64 * h;
                    d += w * f(xp)[ax] / h;
                }
            }
            d
        };
        let mut gd = [Complex64::new(0.0, 0.0); 3];
        for ax in 0..3 {
            for &(s, w) in &s1 {
                let mut xp = x0;
                xp[ax] += s as f64 * h;
                gd[ax] += w * div(xp) / h;
            }
        }
        let u0 = f(x0);
        // residual measured against the sup of the field itself
        let scale: f64 = u0.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for c in 0..3 {
            let r = nm.mu * lap[c]
                + (nm.lambda + nm.mu) * gd[c]
                + nm.k * nm.k * nm.tau * nm.tau * u0[c];
            worst = worst.max(r.norm() / scale);
        }
        println!("criterion 6 [incident Navier FD]: worst {worst:.2e} <= 1e-6");
        assert!(worst <= 1e-6);
        // interior Helmholtz
        let g = |x: [f64; 3]| sol.eval_interior(x);
        let x0 = [0.35, -0.3, 0.4];
        let mut lap = Complex64::new(0.0, 0.0);
        for ax in 0..3 {
            for &(s, w) in &s2 {
                let mut xp = x0;
                xp[ax] += s as f64 * h;
                lap += w * g(xp) / (h * h);
            }
        }
        let r = (lap + nm.k * nm.k * g(x0)).norm();
        // second-derivative magnitude scale of the degree-n interior mode
        let r0 = (x0[0] * x0[0] + x0[1] * x0[1] + x0[2] * x0[2]).sqrt();
        let scale = (3.0 / r0).powi(2) * g(x0).norm();
        println!(
            "criterion 6 [interior Helmholtz FD]: worst {:.2e} <= 1e-6",
            r / scale
        );
        assert!(r / scale <= 1e-6);
    }
    // quadrature oracle vs spectral single-layer prediction <= 1e-3 at n = 1, 2
    {
        let mut worst: f64 = 0.0;
        for n in [1usize, 2] {
            let sp = single_layer_spectral(n, n as f64, 1.0, &nm).unwrap();
            let x = [0.3, 0.2, 1.45];
            let pred = sp.eval_exterior(x, 1, &nm);
            let orac = oracle_single_layer(x, n, 1, OracleDensity::IVec, &nm, 40).unwrap();
            let num = (0..3)
                .map(|k| (pred[k] - orac[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let den = orac.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            worst = worst.max(num / den);
        }
        println!("criterion 6 [single-layer oracle]: worst {worst:.2e} <= 1e-3");
        assert!(worst <= 1e-3);
    }
    let dt = t0.elapsed();
    println!("criterion 6 PASS ({dt:.2?} < 300 s)");
    assert!(dt.as_secs_f64() < 300.0);
}

/// Criterion 7: solves and diagnostics complete with finite log-scaled
/// outputs at n = 60 (raw intermediates far outside native range).
#[test]
fn criterion_7_range_robustness() {
    let nm = pdms();
    let t0 = std::time::Instant::now();
    // 3D
    let spec = IncidentSpec3D::single_mode(60, 60, true).unwrap();
    let sol = solve_modes(&spec, &nm).unwrap();
    assert!(sol.phi_e_unit().log10_mag().is_finite());
    assert!(sol.phi_b_unit().log10_mag().is_finite());
    assert!(sol.transmission.a.log10_mag().is_finite());
    assert!(sol.incident_norm_sq.log10_mag().is_finite());
    let (eu, eus) = localization_ratios(&sol, &region()).unwrap();
    assert!(eu.is_finite() && eus.is_finite() && eu > 0.0 && eus > 0.0);
    let r = resonance_ratios(&sol, &region()).unwrap();
    assert!(r.grad_ratio_u.is_finite() && r.grad_ratio_us.is_finite());
    println!(
        "criterion 7 [3D n=60]: log10 phi_b = {:.2}, eta_u = {eu:.3e}, grad ratio = {:.3e}",
        sol.phi_b_unit().log10_mag(),
        r.grad_ratio_u
    );
    // 2D
    let spec2 = IncidentSpec2D::new(60, Complex64::new(1.0, 0.0), true).unwrap();
    let sol2 = solve_modes_2d(&spec2, &nm).unwrap();
    for v in [sol2.a, sol2.b, sol2.c] {
        assert!(v.log10_mag().is_finite());
    }
    let f = sol2.eval_exterior(Field2D::Scattered, 1.05, 0.3);
    assert!(f.ur.log10_mag().is_finite());
    println!(
        "criterion 7 [2D n=60]: log10 a = {:.2}, log10 b = {:.2}, log10 c = {:.2}",
        sol2.a.log10_mag(),
        sol2.b.log10_mag(),
        sol2.c.log10_mag()
    );
    let dt = t0.elapsed();
    println!("criterion 7 PASS ({dt:.2?})");
}
