//! Plain-text sectioned key/value experiment configuration.
//!
//! ```text
//! [medium]
//! rho_b = 1.2
//! kappa = 1.412e5
//! ...
//! [incident]
//! dimension = 3
//! n = 5
//! ...
//! ```
//!
//! Unknown keys and malformed lines are reported with their line number.

use crate::error::{Error, Result};
use crate::medium::{PhysicalMedium, RegimeThresholds};
use num_complex::Complex64;
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct IncidentConfig {
    pub dimension: u8,
    pub n: usize,
    /// 3D: single-mode index m (or explicit coefficient list)
    pub m: i32,
    /// 3D: optional full coefficient vector "re:im,re:im,..." over m = -n..n
    pub coefficients: Option<Vec<Complex64>>,
    /// 2D amplitude
    pub amplitude: Complex64,
    pub normalized: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct ShellConfig {
    pub zeta1: f64,
    pub zeta2: f64,
    pub r_outer: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct GridConfig {
    pub extent: f64,
    pub resolution: usize,
}

#[derive(Clone, Debug)]
pub struct ToleranceConfig {
    pub regime: RegimeThresholds,
    /// localization level eta for the threshold indices
    pub eta: f64,
    /// oscillation level M for the threshold indices
    pub m_level: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            regime: RegimeThresholds::default(),
            eta: 0.01,
            m_level: 1000.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub medium: PhysicalMedium,
    pub incident: IncidentConfig,
    pub shell: ShellConfig,
    pub grid: GridConfig,
    pub outputs: Vec<String>,
    pub tolerances: ToleranceConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            medium: PhysicalMedium::pdms_bubble(),
            incident: IncidentConfig {
                dimension: 3,
                n: 5,
                m: 5,
                coefficients: None,
                amplitude: Complex64::new(1.0, 0.0),
                normalized: true,
            },
            shell: ShellConfig {
                zeta1: 0.9,
                zeta2: 1.1,
                r_outer: 2.0,
            },
            grid: GridConfig {
                extent: 2.0,
                resolution: 64,
            },
            outputs: vec!["fields".into(), "diagnostics".into()],
            tolerances: ToleranceConfig::default(),
        }
    }
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut sections: BTreeMap<String, Vec<(usize, String, String)>> = BTreeMap::new();
    let mut current = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') || line.len() < 3 {
                return Err(Error::Config {
                    line: lineno,
                    msg: format!("malformed section: {raw}"),
                });
            }
            current = line[1..line.len() - 1].trim().to_ascii_lowercase();
            sections.entry(current.clone()).or_default();
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Error::Config {
                line: lineno,
                msg: format!("expected key = value: {raw}"),
            });
        };
        if current.is_empty() {
            return Err(Error::Config {
                line: lineno,
                msg: "key outside any section".into(),
            });
        }
        sections.get_mut(&current).unwrap().push((
            lineno,
            k.trim().to_ascii_lowercase(),
            v.trim().to_string(),
        ));
    }

    let mut cfg = ExperimentConfig::default();
    let fnum = |lineno: usize, key: &str, v: &str| -> Result<f64> {
        v.parse::<f64>().map_err(|_| Error::Config {
            line: lineno,
            msg: format!("{key}: not a number: {v}"),
        })
    };
    for (section, entries) in &sections {
        for (lineno, key, value) in entries {
            let line = *lineno;
            match (section.as_str(), key.as_str()) {
                ("medium", "rho_b") => cfg.medium.rho_b = fnum(line, key, value)?,
                ("medium", "kappa") => cfg.medium.kappa = fnum(line, key, value)?,
                ("medium", "rho_e") => cfg.medium.rho_e = fnum(line, key, value)?,
                ("medium", "lambda_t") => cfg.medium.lambda_t = fnum(line, key, value)?,
                ("medium", "mu_t") => cfg.medium.mu_t = fnum(line, key, value)?,
                ("medium", "omega") => cfg.medium.omega = fnum(line, key, value)?,
                ("medium", "l_d") => cfg.medium.l_d = fnum(line, key, value)?,
                ("incident", "dimension") => {
                    cfg.incident.dimension = fnum(line, key, value)? as u8;
                    if ![2, 3].contains(&cfg.incident.dimension) {
                        return Err(Error::Config {
                            line,
                            msg: "dimension must be 2 or 3".into(),
                        });
                    }
                }
                ("incident", "n") => cfg.incident.n = fnum(line, key, value)? as usize,
                ("incident", "m") => cfg.incident.m = fnum(line, key, value)? as i32,
                ("incident", "amplitude_re") => cfg.incident.amplitude.re = fnum(line, key, value)?,
                ("incident", "amplitude_im") => cfg.incident.amplitude.im = fnum(line, key, value)?,
                ("incident", "normalized") => {
                    cfg.incident.normalized = parse_bool(line, value)?;
                }
                ("incident", "coefficients") => {
                    let mut v = Vec::new();
                    for part in value.split(',') {
                        let (re, im) = part.split_once(':').ok_or(Error::Config {
                            line,
                            msg: format!("coefficient must be re:im, got {part}"),
                        })?;
                        v.push(Complex64::new(fnum(line, key, re)?, fnum(line, key, im)?));
                    }
                    cfg.incident.coefficients = Some(v);
                }
                ("shell", "zeta1") => cfg.shell.zeta1 = fnum(line, key, value)?,
                ("shell", "zeta2") => cfg.shell.zeta2 = fnum(line, key, value)?,
                ("shell", "r") => cfg.shell.r_outer = fnum(line, key, value)?,
                ("grid", "extent") => cfg.grid.extent = fnum(line, key, value)?,
                ("grid", "resolution") => cfg.grid.resolution = fnum(line, key, value)? as usize,
                ("run", "outputs") => {
                    cfg.outputs = value.split(',').map(|s| s.trim().to_string()).collect();
                }
                ("tolerances", "k_max") => cfg.tolerances.regime.k_max = fnum(line, key, value)?,
                ("tolerances", "delta_max") => {
                    cfg.tolerances.regime.delta_max = fnum(line, key, value)?
                }
                ("tolerances", "tau_max") => {
                    cfg.tolerances.regime.tau_max = fnum(line, key, value)?
                }
                ("tolerances", "eta") => cfg.tolerances.eta = fnum(line, key, value)?,
                ("tolerances", "m") => cfg.tolerances.m_level = fnum(line, key, value)?,
                _ => {
                    return Err(Error::Config {
                        line,
                        msg: format!("unknown key [{section}] {key}"),
                    })
                }
            }
        }
    }
    // referential completeness
    if let Some(c) = &cfg.incident.coefficients {
        if c.len() != 2 * cfg.incident.n + 1 {
            return Err(Error::Config {
                line: 0,
                msg: format!(
                    "coefficients length {} does not match 2n+1 = {}",
                    c.len(),
                    2 * cfg.incident.n + 1
                ),
            });
        }
    }
    if cfg.incident.m.unsigned_abs() as usize > cfg.incident.n {
        return Err(Error::Config {
            line: 0,
            msg: "|m| <= n required".into(),
        });
    }
    Ok(cfg)
}

fn parse_bool(line: usize, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config {
            line,
            msg: format!("expected a boolean, got {v}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let text = "
[medium]
rho_b = 1.2
kappa = 1.412e5
rho_e = 1042
lambda_t = 1.083e9
mu_t = 6.5e5
omega = 0.1
l_d = 1

[incident]
dimension = 2
n = 20
normalized = true

[shell]
zeta1 = 0.9
zeta2 = 1.1
r = 2

[tolerances]
eta = 0.02
m = 500
";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.incident.dimension, 2);
        assert_eq!(cfg.incident.n, 20);
        assert!(cfg.incident.normalized);
        assert_eq!(cfg.tolerances.eta, 0.02);
    }

    #[test]
    fn malformed_lines_carry_line_numbers() {
        let bad = "[medium]\nrho_b == 1.2\n";
        match parse_config(bad) {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected config error, got {other:?}"),
        }
        let unknown = "[medium]\nrho_x = 1\n";
        assert!(matches!(
            parse_config(unknown),
            Err(Error::Config { line: 2, .. })
        ));
        let stray = "rho_b = 1\n";
        assert!(matches!(
            parse_config(stray),
            Err(Error::Config { line: 1, .. })
        ));
    }
}
