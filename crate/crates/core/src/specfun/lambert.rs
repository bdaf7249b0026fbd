//! Principal branch of the Lambert W function on the real axis.

use crate::error::{Error, Result};

/// W0(x) for x >= -1/e, by Halley iteration from a piecewise initial guess.
///
/// The residual |w e^w - x| is driven below 1e-13 * max(1, |x|).
pub fn lambert_w0(x: f64) -> Result<f64> {
    let em1 = (-1.0f64).exp();
    if x < -em1 - 1e-14 {
        return Err(Error::Domain(format!(
            "lambert_w0 needs x >= -1/e, got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let x = x.max(-em1);

    // initial guess
    let mut w = if x < -0.25 {
        // near the branch point: w = -1 + p - p^2/3 + ..., p = sqrt(2(e x + 1))
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0
    } else if x < 3.0 {
        // series-flavored guess, adequate as a Halley starting point
        let l = (1.0 + x).ln();
        l * (1.0 - l / (2.0 + l.abs()))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 1e-14 * x.abs().max(1.0) {
            break;
        }
        let wp1 = w + 1.0;
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-16 * w.abs().max(1.0) {
            break;
        }
    }
    Ok(w)
}
