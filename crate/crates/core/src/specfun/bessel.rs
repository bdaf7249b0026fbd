//! Spherical and cylindrical Bessel/Hankel functions with log-scaled output.
//!
//! Regular families (j_n, J_n) use downward Miller recurrence with
//! normalization at the bottom; outgoing families (h_n^(1), Y_n, H_n^(1))
//! use upward recurrence, which is stable for them. All ladders carry a
//! running decimal exponent so orders like J_60(1e-4) ~ 1e-340 and
//! Y_60(1e-4) ~ 1e+338 come out finite in log form.
//!
//! Recurrences and series follow NIST DLMF chapter 10.

use crate::error::{Error, Result};
use crate::logcx::LogComplex;
use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.5772156649015328606;

/// Scaled complex: value = m * 10^e10. Internal carrier for recurrences.
#[derive(Clone, Copy, Debug)]
struct Sc {
    m: Complex64,
    e10: f64,
}

impl Sc {
    fn new(m: Complex64, e10: f64) -> Self {
        Sc { m, e10 }
    }

    fn to_logcx(self) -> LogComplex {
        if self.m.re == 0.0 && self.m.im == 0.0 {
            LogComplex::zero()
        } else {
            LogComplex::from_c64(self.m).scale_log10(self.e10)
        }
    }
}

fn is_small(z: Complex64) -> bool {
    z.re == 0.0 && z.im == 0.0
}

// ---------------------------------------------------------------------------
// spherical Bessel j_n
// ---------------------------------------------------------------------------

/// j_0..j_nmax at z (z != 0), downward recurrence normalized at j_0 (or j_1
/// near a zero of j_0).
pub fn spherical_jn_ladder(nmax: usize, z: Complex64) -> Vec<LogComplex> {
    assert!(
        !is_small(z),
        "spherical_jn_ladder needs z != 0; use the series path"
    );
    let start = nmax + 22 + (1.5 * z.norm()).ceil() as usize;
    let mut hi = Complex64::new(0.0, 0.0); // f_{m+1}
    let mut lo = Complex64::new(1.0, 0.0); // f_m
    let mut e10 = 0.0f64;
    let mut out: Vec<Sc> = vec![Sc::new(Complex64::new(0.0, 0.0), 0.0); nmax + 1];
    let mut m = start;
    loop {
        let next = (2.0 * m as f64 + 1.0) / z * lo - hi; // f_{m-1}
        hi = lo;
        lo = next;
        m -= 1;
        if m <= nmax {
            out[m] = Sc::new(lo, e10);
        }
        if m == 0 {
            break;
        }
        let a = lo.norm();
        if a > 1e100 {
            hi /= 1e100;
            lo /= 1e100;
            e10 += 100.0;
            if m <= nmax {
                out[m] = Sc::new(lo, e10);
            }
        }
    }
    // true anchors
    let j0 = z.sin() / z;
    let j1 = z.sin() / (z * z) - z.cos() / z;
    let (anchor_true, anchor_raw) = if j0.norm() >= 0.1 * j1.norm() || nmax == 0 {
        (j0, out[0])
    } else {
        (j1, out[1])
    };
    let scale = LogComplex::from_c64(anchor_true) / anchor_raw.to_logcx();
    out.into_iter().map(|s| s.to_logcx() * scale).collect()
}

/// Power series for j_n and j_n' (small |z|), factored as
/// z^n/(2n+1)!! * (correction series).
fn spherical_j_series(n: usize, z: Complex64) -> (LogComplex, LogComplex) {
    use super::factorial::log10_odd_double_factorial;
    if is_small(z) {
        let v = if n == 0 {
            LogComplex::one()
        } else {
            LogComplex::zero()
        };
        let d = match n {
            0 => LogComplex::zero(),
            1 => LogComplex::from_real(1.0 / 3.0),
            _ => LogComplex::zero(),
        };
        return (v, d);
    }
    let z2h = -z * z * 0.5;
    let mut c = Complex64::new(1.0, 0.0);
    let mut sum_v = c;
    let mut sum_d = c * n as f64;
    for k in 1..60 {
        c *= z2h / (k as f64 * (2 * n + 2 * k + 1) as f64);
        sum_v += c;
        sum_d += c * (n + 2 * k) as f64;
        if c.norm() < 1e-18 * sum_v.norm() {
            break;
        }
    }
    let lg_dfact = log10_odd_double_factorial(n as u32);
    let lz = LogComplex::from_c64(z);
    let lead_v = lz.powi(n as i32).scale_log10(-lg_dfact);
    let value = lead_v * LogComplex::from_c64(sum_v);
    let deriv = if n == 0 {
        // j_0' = -j_1
        let (j1, _) = spherical_j_series(1, z);
        j1.neg()
    } else {
        lz.powi(n as i32 - 1).scale_log10(-lg_dfact) * LogComplex::from_c64(sum_d)
    };
    (value, deriv)
}

/// Spherical Bessel j_n(z) and its derivative.
///
/// Below |z| = 1e-2 sqrt(2n+3) the truncated ascending series is used; above,
/// downward recurrence normalized at j_0. Both branches agree to 1e-10 in the
/// overlap band (tested).
pub fn spherical_bessel_j(n: usize, z: Complex64) -> (LogComplex, LogComplex) {
    if z.norm() < 1e-2 * ((2 * n + 3) as f64).sqrt() {
        return spherical_j_series(n, z);
    }
    let ladder = spherical_jn_ladder(n + 1, z);
    let value = ladder[n];
    let deriv = if n == 0 {
        ladder[1].neg()
    } else {
        ladder[n - 1] - LogComplex::from_real((n + 1) as f64) / LogComplex::from_c64(z) * ladder[n]
    };
    (value, deriv)
}

// ---------------------------------------------------------------------------
// spherical Hankel h_n^(1)
// ---------------------------------------------------------------------------

/// h_0..h_nmax of the first kind at z != 0, upward recurrence.
pub fn spherical_h1_ladder(nmax: usize, z: Complex64) -> Result<Vec<LogComplex>> {
    if is_small(z) {
        return Err(Error::Singularity(
            "spherical Hankel function at z = 0".into(),
        ));
    }
    let i = Complex64::new(0.0, 1.0);
    let eiz = (i * z).exp();
    let h0 = -i * eiz / z;
    let h1 = -eiz * (Complex64::new(1.0, 0.0) / z + i / (z * z));
    let mut out = Vec::with_capacity(nmax + 1);
    let mut lo = Sc::new(h0, 0.0);
    out.push(lo.to_logcx());
    if nmax == 0 {
        return Ok(out);
    }
    let mut hi = Sc::new(h1, 0.0);
    out.push(hi.to_logcx());
    for m in 1..nmax {
        // shared exponent arithmetic
        let shift = 10f64.powf(lo.e10 - hi.e10);
        let next = (2.0 * m as f64 + 1.0) / z * hi.m - lo.m * shift;
        lo = hi;
        hi = Sc::new(next, lo.e10);
        let a = hi.m.norm();
        if a > 1e100 {
            hi.m /= 1e100;
            hi.e10 += 100.0;
        }
        out.push(hi.to_logcx());
    }
    Ok(out)
}

/// Spherical Hankel function of the first kind and its derivative.
pub fn spherical_hankel_h1(n: usize, z: Complex64) -> Result<(LogComplex, LogComplex)> {
    let ladder = spherical_h1_ladder(n + 1, z)?;
    let value = ladder[n];
    let deriv = if n == 0 {
        ladder[1].neg()
    } else {
        ladder[n - 1] - LogComplex::from_real((n + 1) as f64) / LogComplex::from_c64(z) * ladder[n]
    };
    Ok((value, deriv))
}

// ---------------------------------------------------------------------------
// cylindrical J_n, Y_n, H_n^(1)
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CylKind {
    J,
    Y,
    H1,
}

/// J_0..J_nmax by downward recurrence with the normalization
/// J_0 + 2 sum_k J_2k = 1.
pub fn cyl_j_ladder(nmax: usize, z: Complex64) -> Vec<LogComplex> {
    if is_small(z) {
        let mut v = vec![LogComplex::zero(); nmax + 1];
        v[0] = LogComplex::one();
        return v;
    }
    let start = 2 * ((nmax + 24 + (1.5 * z.norm()).ceil() as usize) / 2);
    let mut hi = Complex64::new(0.0, 0.0);
    let mut lo = Complex64::new(1.0, 0.0);
    let mut e10 = 0.0f64;
    let mut out: Vec<Sc> = vec![Sc::new(Complex64::new(0.0, 0.0), 0.0); nmax + 1];
    // running normalization sum f_0 + 2 sum f_2k carried at the same scale
    let mut norm = Sc::new(Complex64::new(0.0, 0.0), 0.0);
    let mut m = start;
    if m <= nmax {
        out[m] = Sc::new(lo, 0.0);
    }
    if m % 2 == 0 {
        norm = Sc::new(2.0 * lo, 0.0);
    }
    loop {
        let next = (2.0 * m as f64) / z * lo - hi;
        hi = lo;
        lo = next;
        m -= 1;
        if m <= nmax {
            out[m] = Sc::new(lo, e10);
        }
        if m == 0 {
            let shift = 10f64.powf(norm.e10 - e10);
            norm = Sc::new(norm.m * shift + lo, e10);
            break;
        } else if m % 2 == 0 {
            let shift = 10f64.powf(norm.e10 - e10);
            norm = Sc::new(norm.m * shift + 2.0 * lo, e10);
        }
        let a = lo.norm();
        if a > 1e100 {
            hi /= 1e100;
            lo /= 1e100;
            e10 += 100.0;
            if m <= nmax {
                out[m] = Sc::new(lo, e10);
            }
        }
    }
    let scale = norm.to_logcx().recip();
    out.into_iter().map(|s| s.to_logcx() * scale).collect()
}

fn harmonic_number(k: usize) -> f64 {
    (1..=k).map(|j| 1.0 / j as f64).sum()
}

/// Y_0 and Y_1 by ascending series (DLMF 10.8.1), valid for moderate |z|.
fn cyl_y01_series(z: Complex64) -> (Complex64, Complex64) {
    let two_over_pi = std::f64::consts::FRAC_2_PI;
    let q = z * z * 0.25;
    // J_0, J_1 by series (same truncation scale)
    let mut term = Complex64::new(1.0, 0.0);
    let mut j0 = term;
    let mut s0 = Complex64::new(0.0, 0.0); // sum H_k (-1)^{k+1} q^k/(k!)^2
    for k in 1..80 {
        term *= -q / ((k * k) as f64);
        j0 += term;
        s0 += -term * harmonic_number(k);
        if term.norm() < 1e-18 * j0.norm().max(1.0) {
            break;
        }
    }
    let mut term = Complex64::new(0.5, 0.0);
    let mut j1_over_z = term; // J_1/z
    let mut s1 = term * (harmonic_number(0) + harmonic_number(1)); // sum (H_k+H_{k+1})(-1)^k q^k/(k!(k+1)!) * 1/2
    for k in 1..80 {
        term *= -q / ((k * (k + 1)) as f64);
        j1_over_z += term;
        s1 += term * (harmonic_number(k) + harmonic_number(k + 1));
        if term.norm() < 1e-18 * j1_over_z.norm().max(1.0) {
            break;
        }
    }
    let lg = (z * 0.5).ln() + EULER_GAMMA;
    let y0 = two_over_pi * (lg * j0 + s0);
    let j1 = j1_over_z * z;
    let y1 = two_over_pi * (lg * j1 - 1.0 / z) - z * s1 / std::f64::consts::PI;
    (y0, y1)
}

/// Y_0..Y_nmax by upward recurrence from the Y_0, Y_1 series.
pub fn cyl_y_ladder(nmax: usize, z: Complex64) -> Result<Vec<LogComplex>> {
    if is_small(z) {
        return Err(Error::Singularity("cylindrical Y at z = 0".into()));
    }
    let (y0, y1) = cyl_y01_series(z);
    let mut out = Vec::with_capacity(nmax + 1);
    let mut lo = Sc::new(y0, 0.0);
    out.push(lo.to_logcx());
    if nmax == 0 {
        return Ok(out);
    }
    let mut hi = Sc::new(y1, 0.0);
    out.push(hi.to_logcx());
    for m in 1..nmax {
        let shift = 10f64.powf(lo.e10 - hi.e10);
        let next = (2.0 * m as f64) / z * hi.m - lo.m * shift;
        lo = hi;
        hi = Sc::new(next, lo.e10);
        if hi.m.norm() > 1e100 {
            hi.m /= 1e100;
            hi.e10 += 100.0;
        }
        out.push(hi.to_logcx());
    }
    Ok(out)
}

fn ladder_deriv(ladder: &[LogComplex], n: usize) -> LogComplex {
    if n == 0 {
        ladder[1].neg()
    } else {
        (ladder[n - 1] - ladder[n + 1]).scale_log10(-(2f64).log10())
    }
}

/// Cylindrical Bessel/Hankel value and derivative.
pub fn cylindrical_bessel(
    kind: CylKind,
    n: usize,
    z: Complex64,
) -> Result<(LogComplex, LogComplex)> {
    match kind {
        CylKind::J => {
            if is_small(z) {
                let v = if n == 0 {
                    LogComplex::one()
                } else {
                    LogComplex::zero()
                };
                let d = match n {
                    0 => LogComplex::zero(),
                    1 => LogComplex::from_real(0.5),
                    _ => LogComplex::zero(),
                };
                return Ok((v, d));
            }
            let ladder = cyl_j_ladder(n + 1, z);
            Ok((ladder[n], ladder_deriv(&ladder, n)))
        }
        CylKind::Y => {
            let ladder = cyl_y_ladder(n + 1, z)?;
            Ok((ladder[n], ladder_deriv(&ladder, n)))
        }
        CylKind::H1 => {
            let jl = cyl_j_ladder(n + 1, z);
            let yl = cyl_y_ladder(n + 1, z)?;
            let i = LogComplex::from_c64(Complex64::new(0.0, 1.0));
            let h: Vec<LogComplex> = jl.iter().zip(yl.iter()).map(|(&a, &b)| a + i * b).collect();
            Ok((h[n], ladder_deriv(&h, n)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn spherical_j_pinned() {
        let (v, _) = spherical_bessel_j(0, c(0.5, 0.0));
        assert!(close(v.to_c64(), c(0.958851077208406, 0.0), 1e-12));
        let (v, _) = spherical_bessel_j(1, c(0.5, 0.0));
        assert!(close(v.to_c64(), c(0.16253703063606657, 0.0), 1e-12));
        let (v, _) = spherical_bessel_j(5, c(2.0, 0.0));
        assert!(close(v.to_c64(), c(0.0026351697702441173, 0.0), 1e-12));
        let (v, _) = spherical_bessel_j(2, c(0.3, 0.1));
        assert!(close(
            v.to_c64(),
            c(0.0053199536079528846, 0.0039544094160508856),
            1e-12
        ));
        // z = 0 limits
        let (v, _) = spherical_bessel_j(0, c(0.0, 0.0));
        assert_eq!(v.to_c64(), c(1.0, 0.0));
        let (v, d) = spherical_bessel_j(1, c(0.0, 0.0));
        assert!(v.is_zero());
        assert!(close(d.to_c64(), c(1.0 / 3.0, 0.0), 1e-14));
        let (v, _) = spherical_bessel_j(3, c(0.0, 0.0));
        assert!(v.is_zero());
    }

    #[test]
    fn spherical_h_pinned() {
        let (v, _) = spherical_hankel_h1(0, c(0.5, 0.0)).unwrap();
        assert!(close(
            v.to_c64(),
            c(0.958851077208406, -1.7551651237807454),
            1e-12
        ));
        let (v, _) = spherical_hankel_h1(3, c(0.7, 0.0)).unwrap();
        assert!(close(
            v.to_c64(),
            c(0.0031787248563313695, -65.669786871820735),
            1e-12
        ));
        assert!(spherical_hankel_h1(2, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn hankel_small_argument_leading() {
        // h_2(1e-3) * i z^3 / 3!! -> 1 within 1e-6 relative
        let z = c(1e-3, 0.0);
        let (h2, _) = spherical_hankel_h1(2, z).unwrap();
        let lead =
            h2 * LogComplex::from_c64(Complex64::new(0.0, 1.0)) * LogComplex::from_c64(z).powi(3)
                / LogComplex::from_real(3.0);
        assert!((lead.to_c64() - c(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn wronskian_grid() {
        // |j h' - j' h - i/z^2| * z^2 <= 1e-11 on 20 log-spaced z in [1e-4, 10], n <= 30
        for n in [0usize, 1, 2, 5, 10, 17, 30] {
            for i in 0..20 {
                let lz = -4.0 + 5.0 * i as f64 / 19.0;
                let z = c(10f64.powf(lz), 0.0);
                let (j, jd) = spherical_bessel_j(n, z);
                let (h, hd) = spherical_hankel_h1(n, z).unwrap();
                let w = (j * hd - jd * h) * LogComplex::from_c64(z * z);
                let err = (w.to_c64() - c(0.0, 1.0)).norm();
                assert!(err <= 1e-11, "n={n} z={} err={err}", z.re);
            }
        }
    }

    #[test]
    fn recurrence_consistency() {
        // h_{n+1} = (2n+1)/z h_n - h_{n-1} to 1e-11 relative when magnitudes are comparable
        for n in [1usize, 3, 8, 20] {
            for &zr in &[0.3f64, 1.7, 6.0] {
                let z = c(zr, 0.0);
                let l = spherical_h1_ladder(n + 1, z).unwrap();
                let rhs = LogComplex::from_real((2 * n + 1) as f64) / LogComplex::from_c64(z)
                    * l[n]
                    - l[n - 1];
                let within = (l[n + 1].log10_mag() - l[n].log10_mag()).abs() < 3.0
                    && (l[n].log10_mag() - l[n - 1].log10_mag()).abs() < 3.0;
                if within {
                    let rel = (rhs.to_c64() - l[n + 1].to_c64()).norm() / l[n + 1].to_c64().norm();
                    assert!(rel <= 1e-11, "n={n} z={zr} rel={rel}");
                }
            }
        }
    }

    #[test]
    fn small_argument_law() {
        // j_n(z) (2n+1)!!/z^n in [1 - z^2, 1] for z = 1e-3, n = 2..8
        use crate::specfun::factorial::log10_odd_double_factorial;
        let z = c(1e-3, 0.0);
        for n in 2..=8usize {
            let (j, _) = spherical_bessel_j(n, z);
            let scaled = j
                .scale_log10(log10_odd_double_factorial(n as u32))
                .div(LogComplex::from_c64(z).powi(n as i32));
            let v = scaled.to_c64().re;
            assert!(v <= 1.0 && v >= 1.0 - 1e-6, "n={n} v={v}");
        }
    }

    #[test]
    fn series_recurrence_overlap_band() {
        // both branches agree to 1e-10 around the switchover
        for n in [1usize, 4, 9, 15] {
            let zc = 1e-2 * ((2 * n + 3) as f64).sqrt();
            for &f in &[0.5f64, 0.9, 1.1, 2.0] {
                let z = c(zc * f, 0.0);
                let (vs, ds) = spherical_j_series(n, z);
                let ladder = spherical_jn_ladder(n + 1, z);
                let vr = ladder[n];
                let dr = ladder[n - 1]
                    - LogComplex::from_real((n + 1) as f64) / LogComplex::from_c64(z) * ladder[n];
                let rel = (vs.log10_mag() - vr.log10_mag()).abs();
                assert!(rel < 1e-10, "value mismatch n={n} f={f} rel={rel}");
                let reld = (ds.log10_mag() - dr.log10_mag()).abs();
                assert!(reld < 1e-10, "deriv mismatch n={n} f={f} reld={reld}");
            }
        }
    }

    #[test]
    fn cylindrical_pinned() {
        let (v, _) = cylindrical_bessel(CylKind::J, 0, c(0.0, 0.0)).unwrap();
        assert_eq!(v.to_c64(), c(1.0, 0.0));
        let (v, _) = cylindrical_bessel(CylKind::J, 1, c(1.0, 0.0)).unwrap();
        assert!(close(v.to_c64(), c(0.44005058574493352, 0.0), 1e-13));
        let (v, _) = cylindrical_bessel(CylKind::J, 3, c(2.7, 0.0)).unwrap();
        assert!(close(v.to_c64(), c(0.25404529158722735, 0.0), 1e-13));
        let (v, _) = cylindrical_bessel(CylKind::H1, 0, c(1.0, 0.0)).unwrap();
        assert!(close(
            v.to_c64(),
            c(0.76519768655796655, 0.088256964215676958),
            1e-12
        ));
        let (v, _) = cylindrical_bessel(CylKind::Y, 1, c(1.0, 0.0)).unwrap();
        assert!(close(v.to_c64(), c(-0.78121282130028872, 0.0), 1e-12));
        let (v, _) = cylindrical_bessel(CylKind::Y, 5, c(0.9, 0.0)).unwrap();
        assert!(close(v.to_c64(), c(-435.68977089657904, 0.0), 1e-12));
        assert!(cylindrical_bessel(CylKind::Y, 0, c(0.0, 0.0)).is_err());
        assert!(cylindrical_bessel(CylKind::H1, 0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn extreme_order_log_range() {
        // raw magnitudes far outside f64 range stay finite in log form
        let z = c(1e-4, 0.0);
        let jl = cyl_j_ladder(60, z);
        assert!((jl[60].log10_mag() - -339.98197458924686).abs() < 1e-9);
        let yl = cyl_y_ladder(60, z).unwrap();
        assert!((yl[60].log10_mag() - 337.70667346616969).abs() < 1e-9);
        let sj = spherical_jn_ladder(60, c(2.9152334e-4, 0.0));
        assert!((sj[60].log10_mag() - -313.04580476493201).abs() < 1e-9);
    }

    #[test]
    fn cylindrical_wronskian() {
        // J_{n+1} Y_n - J_n Y_{n+1} = 2/(pi z)
        for n in [0usize, 2, 7, 30] {
            for &zr in &[1e-3f64, 0.3, 2.0, 9.0] {
                let z = c(zr, 0.0);
                let jl = cyl_j_ladder(n + 1, z);
                let yl = cyl_y_ladder(n + 1, z).unwrap();
                let w = jl[n + 1] * yl[n] - jl[n] * yl[n + 1];
                let expect = 2.0 / (std::f64::consts::PI * zr);
                let rel = (w.to_c64().re - expect).abs() / expect;
                assert!(rel < 1e-11, "n={n} z={zr} rel={rel}");
            }
        }
    }
}
