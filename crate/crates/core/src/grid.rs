//! Deterministic field-grid export: CSV plus a JSON metadata sidecar.
//!
//! Evaluation fans out over a worker pool; output ordering is fixed by the
//! row index, never by completion order, so identical configurations give
//! byte-identical files.

use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::solver2d::{Field2D, ModalSolution2D};
use crate::solver3d::ModalSolution3D;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

#[derive(Serialize)]
struct Sidecar<'a> {
    schema: u32,
    dimension: u8,
    n: usize,
    normalized: bool,
    medium: &'a crate::medium::NondimensionalMedium,
    incident_norm_log10: f64,
    extent: f64,
    resolution: usize,
    near_singular: bool,
}

fn fmt_c(v: Complex64) -> String {
    format!("{:.16e},{:.16e}", v.re, v.im)
}

/// 3D export: the coordinate plane x2 = 0 sampled on a resolution^2 grid
/// over [-extent, extent]^2 in (x1, x3).
pub fn export_fields_3d(
    sol: &ModalSolution3D,
    cfg: &ExperimentConfig,
    out_dir: &Path,
    pool: &rayon::ThreadPool,
) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let res = cfg.grid.resolution.max(2);
    let ext = cfg.grid.extent;
    let rows: Vec<String> = pool.install(|| {
        (0..res * res)
            .into_par_iter()
            .map(|idx| {
                let i = idx / res;
                let j = idx % res;
                let x1 = -ext + 2.0 * ext * i as f64 / (res - 1) as f64;
                let x3 = -ext + 2.0 * ext * j as f64 / (res - 1) as f64;
                let x = [x1, 0.0, x3];
                let r = (x1 * x1 + x3 * x3).sqrt();
                let theta = if r > 0.0 {
                    (x3 / r).clamp(-1.0, 1.0).acos()
                } else {
                    0.0
                };
                let phi = 0f64.atan2(x1);
                let mut cols: Vec<String> = vec![
                    format!("{x1:.16e}"),
                    "0".into(),
                    format!("{x3:.16e}"),
                    format!("{r:.16e}"),
                    format!("{theta:.16e}"),
                    format!("{phi:.16e}"),
                ];
                if r < 1.0 {
                    let u = sol.eval_interior(x);
                    cols.push(fmt_c(u));
                    for _ in 0..9 {
                        cols.push("0,0".into());
                    }
                    cols.push("0".into());
                    cols.push("0".into());
                } else {
                    cols.push("0,0".into());
                    let (us, gus, _) = sol.eval_exterior_scattered(x);
                    let (ui, _) = sol.eval_incident(x);
                    let (ut, gt) = sol.eval_total_exterior(x);
                    for v in us.iter().chain(ui.iter()).chain(ut.iter()) {
                        cols.push(fmt_c(*v));
                    }
                    let gn = |g: &[[Complex64; 3]; 3]| -> f64 {
                        g.iter().flatten().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
                    };
                    cols.push(format!("{:.16e}", gn(&gus)));
                    cols.push(format!("{:.16e}", gn(&gt)));
                }
                let (e, _) = if r >= 1.0 {
                    sol.stress_density(x)
                } else {
                    (0.0, Complex64::new(0.0, 0.0))
                };
                cols.push(format!("{e:.16e}"));
                cols.join(",")
            })
            .collect()
    });
    let mut f = std::fs::File::create(out_dir.join("fields3d.csv"))?;
    writeln!(
        f,
        "x1,x2,x3,r,theta,phi,u_int_re,u_int_im,\
us_x_re,us_x_im,us_y_re,us_y_im,us_z_re,us_z_im,\
ui_x_re,ui_x_im,ui_y_re,ui_y_im,ui_z_re,ui_z_im,\
u_x_re,u_x_im,u_y_re,u_y_im,u_z_re,u_z_im,grad_norm_us,grad_norm_u,e_density"
    )?;
    for row in rows {
        writeln!(f, "{row}")?;
    }
    let side = Sidecar {
        schema: 1,
        dimension: 3,
        n: sol.spec.n(),
        normalized: sol.spec.is_normalized(),
        medium: &sol.medium,
        incident_norm_log10: 0.5 * sol.incident_norm_sq.log10_mag(),
        extent: ext,
        resolution: res,
        near_singular: sol.near_singular,
    };
    std::fs::write(
        out_dir.join("fields3d.json"),
        serde_json::to_string_pretty(&side)?.as_bytes(),
    )?;
    Ok(())
}

/// 2D export over [-extent, extent]^2.
pub fn export_fields_2d(
    sol: &ModalSolution2D,
    cfg: &ExperimentConfig,
    out_dir: &Path,
    pool: &rayon::ThreadPool,
) -> Result<(f64, f64)> {
    std::fs::create_dir_all(out_dir)?;
    let res = cfg.grid.resolution.max(2);
    let ext = cfg.grid.extent;
    let rows: Vec<(String, f64)> = pool.install(|| {
        (0..res * res)
            .into_par_iter()
            .map(|idx| {
                let i = idx / res;
                let j = idx % res;
                let x1 = -ext + 2.0 * ext * i as f64 / (res - 1) as f64;
                let x2 = -ext + 2.0 * ext * j as f64 / (res - 1) as f64;
                let r = (x1 * x1 + x2 * x2).sqrt();
                let theta = x2.atan2(x1);
                let mut cols = vec![
                    format!("{x1:.16e}"),
                    format!("{x2:.16e}"),
                    format!("{r:.16e}"),
                    format!("{theta:.16e}"),
                ];
                let mut e_here = 0.0;
                if r < 1.0 {
                    let u = sol.eval_interior_log(r.max(1e-9), theta).to_c64();
                    cols.push(fmt_c(u));
                    for _ in 0..6 {
                        cols.push("0,0".into());
                    }
                } else {
                    cols.push("0,0".into());
                    let fs = sol.eval_exterior(Field2D::Scattered, r, theta);
                    let fi = sol.eval_exterior(Field2D::Incident, r, theta);
                    let ft = sol.eval_exterior(Field2D::TotalExterior, r, theta);
                    let cs = fs.cartesian(theta);
                    let ci = fi.cartesian(theta);
                    let ct = ft.cartesian(theta);
                    for v in cs.iter().chain(ci.iter()).chain(ct.iter()) {
                        cols.push(fmt_c(*v));
                    }
                    let (e, _) = ft.stress_density(sol.medium.lambda, sol.medium.mu);
                    e_here = e;
                }
                cols.push(format!("{e_here:.16e}"));
                (cols.join(","), e_here)
            })
            .collect()
    });
    let mut f = std::fs::File::create(out_dir.join("fields2d.csv"))?;
    writeln!(
        f,
        "x1,x2,r,theta,u_int_re,u_int_im,us_x_re,us_x_im,us_y_re,us_y_im,\
ui_x_re,ui_x_im,ui_y_re,ui_y_im,u_x_re,u_x_im,u_y_re,u_y_im,e_density"
    )?;
    let mut max_e: f64 = 0.0;
    let mut max_grad: f64 = 0.0;
    for (row, e) in &rows {
        writeln!(f, "{row}")?;
        max_e = max_e.max(*e);
        max_grad = max_grad.max(e.abs());
    }
    let side = Sidecar {
        schema: 1,
        dimension: 2,
        n: sol.spec.n(),
        normalized: sol.spec.is_normalized(),
        medium: &sol.medium,
        incident_norm_log10: 0.5 * sol.incident_norm_sq.log10_mag(),
        extent: ext,
        resolution: res,
        near_singular: false,
    };
    std::fs::write(
        out_dir.join("fields2d.json"),
        serde_json::to_string_pretty(&side)?.as_bytes(),
    )?;
    Ok((max_e, max_grad))
}

/// Build the worker pool honoring a thread-count override.
pub fn make_pool(threads: Option<usize>) -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        b = b.num_threads(t.max(1));
    }
    b.build().expect("worker pool")
}
