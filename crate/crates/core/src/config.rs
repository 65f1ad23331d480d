//! Scenario configuration: strict JSON in, validated and defaulted values out.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use nalgebra::{Matrix4, Vector3};
use serde::Deserialize;
use thiserror::Error;

use crate::lagrangian::{Derivatives, LagrangianModel, MAXWELL_L_F};
use crate::vacuum::{DEFAULT_ALPHA, MAXWELL_D1};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl ConfigError {
    fn invalid(path: &str, message: impl Into<String>) -> Self {
        Self::Invalid {
            path: path.to_string(),
            message: message.into(),
        }
    }

    pub fn path(&self) -> &str {
        match self {
            Self::Parse { path, .. } | Self::Invalid { path, .. } => path,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    lagrangian: Option<RawLagrangian>,
    vacuum: Option<RawVacuum>,
    sweep: Option<RawSweep>,
    birefringence: Option<RawBirefringence>,
    outputs: Option<RawOutputs>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLagrangian {
    kind: Option<String>,
    alpha: Option<f64>,
    m_e: Option<f64>,
    derivatives: Option<RawDerivatives>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDerivatives {
    l_f: Option<f64>,
    l_g: Option<f64>,
    l_ff: Option<f64>,
    l_gg: Option<f64>,
    l_fg: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVacuum {
    kind: Option<String>,
    separation: Option<f64>,
    #[serde(rename = "E")]
    e: Option<[f64; 3]>,
    #[serde(rename = "B")]
    b: Option<[f64; 3]>,
    d1: Option<f64>,
    d2: Option<f64>,
    xi: Option<f64>,
    gamma: Option<[[f64; 4]; 4]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    theta_start: Option<f64>,
    theta_end: Option<f64>,
    steps: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBirefringence {
    n_dirs: Option<usize>,
    tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutputs {
    csv: Option<PathBuf>,
    json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LagrangianConfig {
    Maxwell,
    EulerHeisenberg { alpha: f64, m_e: f64 },
    Custom(Derivatives),
}

impl LagrangianConfig {
    pub fn model(&self) -> LagrangianModel {
        match self {
            Self::Maxwell => LagrangianModel::maxwell(),
            Self::EulerHeisenberg { alpha, m_e } => LagrangianModel::euler_heisenberg(*alpha, *m_e)
                .expect("validated Euler-Heisenberg parameters"),
            Self::Custom(d) => LagrangianModel::custom(*d).expect("validated derivatives"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VacuumConfig {
    /// Plates normal to `z`. `coefficients` replaces the model-derived
    /// `(d1, d2)`; `xi` then fixes `d2 = xi d1`.
    Casimir {
        separation: f64,
        coefficients: Option<(f64, f64)>,
        xi: Option<f64>,
    },
    BackgroundField { e: Vector3<f64>, b: Vector3<f64> },
    /// `Omega = d1 (gamma gamma - gamma gamma)`.
    RawOmega { d1: f64, gamma: Matrix4<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub theta_start: f64,
    pub theta_end: f64,
    pub steps: usize,
}

impl SweepConfig {
    /// Inclusive grid.
    pub fn angles(&self) -> Vec<f64> {
        let span = self.theta_end - self.theta_start;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.theta_end
                } else {
                    self.theta_start + span * (i as f64 / last)
                }
            })
            .collect()
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            theta_start: 0.0,
            theta_end: FRAC_PI_2,
            steps: 91,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirefringenceConfig {
    pub n_dirs: usize,
    pub tol: f64,
}

impl Default for BirefringenceConfig {
    fn default() -> Self {
        Self {
            n_dirs: 200,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputsConfig {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub lagrangian: LagrangianConfig,
    pub vacuum: VacuumConfig,
    pub sweep: SweepConfig,
    pub birefringence: BirefringenceConfig,
    pub outputs: OutputsConfig,
}

/// Parses and validates a JSON scenario. Unknown keys are rejected.
pub fn validate_config(raw: &str) -> Result<ScenarioConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(raw);
    let parsed: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        ConfigError::Parse {
            path: if path == "." { "<root>".into() } else { path },
            message: e.into_inner().to_string(),
        }
    })?;

    let lagrangian = lagrangian(parsed.lagrangian.unwrap_or_default())?;
    let vacuum = vacuum(
        parsed
            .vacuum
            .ok_or_else(|| ConfigError::invalid("vacuum", "section is required"))?,
    )?;
    let sweep = sweep(parsed.sweep.unwrap_or_default())?;
    let birefringence = birefringence(parsed.birefringence.unwrap_or_default())?;
    let outputs = parsed
        .outputs
        .map(|o| OutputsConfig {
            csv: o.csv,
            json: o.json,
        })
        .unwrap_or_default();
    Ok(ScenarioConfig {
        lagrangian,
        vacuum,
        sweep,
        birefringence,
        outputs,
    })
}

fn finite(path: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ConfigError::invalid(path, "must be finite"))
    }
}

fn positive(path: &str, v: f64) -> Result<f64, ConfigError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(ConfigError::invalid(path, format!("out of range: must be positive, got {v}")))
    }
}

fn reject(path: &str, present: bool, kind: &str) -> Result<(), ConfigError> {
    if present {
        Err(ConfigError::invalid(path, format!("not allowed for kind \"{kind}\"")))
    } else {
        Ok(())
    }
}

fn lagrangian(raw: RawLagrangian) -> Result<LagrangianConfig, ConfigError> {
    let kind = raw.kind.as_deref().unwrap_or("euler_heisenberg");
    match kind {
        "maxwell" => {
            reject("lagrangian.alpha", raw.alpha.is_some(), kind)?;
            reject("lagrangian.m_e", raw.m_e.is_some(), kind)?;
            reject("lagrangian.derivatives", raw.derivatives.is_some(), kind)?;
            Ok(LagrangianConfig::Maxwell)
        }
        "euler_heisenberg" => {
            reject("lagrangian.derivatives", raw.derivatives.is_some(), kind)?;
            let alpha = raw.alpha.unwrap_or(DEFAULT_ALPHA);
            if !(alpha.is_finite() && alpha >= 0.0) {
                return Err(ConfigError::invalid(
                    "lagrangian.alpha",
                    format!("out of range: must be non-negative, got {alpha}"),
                ));
            }
            let m_e = positive("lagrangian.m_e", raw.m_e.unwrap_or(1.0))?;
            Ok(LagrangianConfig::EulerHeisenberg { alpha, m_e })
        }
        "custom" => {
            reject("lagrangian.alpha", raw.alpha.is_some(), kind)?;
            reject("lagrangian.m_e", raw.m_e.is_some(), kind)?;
            let d = raw
                .derivatives
                .ok_or_else(|| ConfigError::invalid("lagrangian.derivatives", "required for kind \"custom\""))?;
            Ok(LagrangianConfig::Custom(Derivatives {
                l_f: finite("lagrangian.derivatives.l_f", d.l_f.unwrap_or(MAXWELL_L_F))?,
                l_g: finite("lagrangian.derivatives.l_g", d.l_g.unwrap_or(0.0))?,
                l_ff: finite("lagrangian.derivatives.l_ff", d.l_ff.unwrap_or(0.0))?,
                l_gg: finite("lagrangian.derivatives.l_gg", d.l_gg.unwrap_or(0.0))?,
                l_fg: finite("lagrangian.derivatives.l_fg", d.l_fg.unwrap_or(0.0))?,
            }))
        }
        other => Err(ConfigError::invalid(
            "lagrangian.kind",
            format!("unknown kind \"{other}\" (expected maxwell, euler_heisenberg or custom)"),
        )),
    }
}

fn vec3(path: &str, v: Option<[f64; 3]>) -> Result<Vector3<f64>, ConfigError> {
    let v = v.unwrap_or([0.0; 3]);
    for (i, c) in v.iter().enumerate() {
        finite(&format!("{path}[{i}]"), *c)?;
    }
    Ok(Vector3::from(v))
}

fn vacuum(raw: RawVacuum) -> Result<VacuumConfig, ConfigError> {
    let kind = raw
        .kind
        .as_deref()
        .ok_or_else(|| ConfigError::invalid("vacuum.kind", "missing (expected casimir, background_field or raw_omega)"))?;
    match kind {
        "casimir" => {
            reject("vacuum.E", raw.e.is_some(), kind)?;
            reject("vacuum.B", raw.b.is_some(), kind)?;
            reject("vacuum.gamma", raw.gamma.is_some(), kind)?;
            let separation = positive(
                "vacuum.separation",
                raw.separation
                    .ok_or_else(|| ConfigError::invalid("vacuum.separation", "required for kind \"casimir\""))?,
            )?;
            let coefficients = match (raw.d1, raw.d2) {
                (Some(d1), Some(d2)) => Some((finite("vacuum.d1", d1)?, finite("vacuum.d2", d2)?)),
                (Some(d1), None) if raw.xi.is_some() => Some((finite("vacuum.d1", d1)?, 0.0)),
                (None, None) => None,
                (Some(_), None) => return Err(ConfigError::invalid("vacuum.d2", "d1 and d2 must be given together")),
                (None, Some(_)) => return Err(ConfigError::invalid("vacuum.d1", "d1 and d2 must be given together")),
            };
            if raw.xi.is_some() && raw.d2.is_some() {
                return Err(ConfigError::invalid("vacuum.xi", "conflicts with vacuum.d2"));
            }
            if let Some((d1, _)) = coefficients {
                if d1 == 0.0 {
                    return Err(ConfigError::invalid("vacuum.d1", "out of range: must be nonzero"));
                }
            }
            let xi = raw.xi.map(|x| finite("vacuum.xi", x)).transpose()?;
            if let Some(x) = xi {
                if x <= -1.0 {
                    return Err(ConfigError::invalid("vacuum.xi", format!("out of range: must exceed -1, got {x}")));
                }
            }
            Ok(VacuumConfig::Casimir {
                separation,
                coefficients,
                xi,
            })
        }
        "background_field" => {
            reject("vacuum.separation", raw.separation.is_some(), kind)?;
            reject("vacuum.d2", raw.d2.is_some(), kind)?;
            reject("vacuum.d1", raw.d1.is_some(), kind)?;
            reject("vacuum.xi", raw.xi.is_some(), kind)?;
            reject("vacuum.gamma", raw.gamma.is_some(), kind)?;
            Ok(VacuumConfig::BackgroundField {
                e: vec3("vacuum.E", raw.e)?,
                b: vec3("vacuum.B", raw.b)?,
            })
        }
        "raw_omega" => {
            reject("vacuum.separation", raw.separation.is_some(), kind)?;
            reject("vacuum.E", raw.e.is_some(), kind)?;
            reject("vacuum.B", raw.b.is_some(), kind)?;
            reject("vacuum.d2", raw.d2.is_some(), kind)?;
            reject("vacuum.xi", raw.xi.is_some(), kind)?;
            let d1 = finite("vacuum.d1", raw.d1.unwrap_or(MAXWELL_D1))?;
            if d1 == 0.0 {
                return Err(ConfigError::invalid("vacuum.d1", "out of range: must be nonzero"));
            }
            let rows = raw
                .gamma
                .ok_or_else(|| ConfigError::invalid("vacuum.gamma", "required for kind \"raw_omega\""))?;
            let mut gamma = Matrix4::zeros();
            for (i, row) in rows.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    gamma[(i, j)] = finite(&format!("vacuum.gamma[{i}][{j}]"), *v)?;
                }
            }
            if (gamma - gamma.transpose()).amax() > 1e-12 * gamma.amax() {
                return Err(ConfigError::invalid("vacuum.gamma", "must be symmetric"));
            }
            Ok(VacuumConfig::RawOmega { d1, gamma })
        }
        other => Err(ConfigError::invalid(
            "vacuum.kind",
            format!("unknown kind \"{other}\" (expected casimir, background_field or raw_omega)"),
        )),
    }
}

fn sweep(raw: RawSweep) -> Result<SweepConfig, ConfigError> {
    let d = SweepConfig::default();
    let theta_start = raw.theta_start.unwrap_or(d.theta_start);
    let theta_end = raw.theta_end.unwrap_or(d.theta_end);
    let steps = raw.steps.unwrap_or(d.steps);
    for (path, v) in [("sweep.theta_start", theta_start), ("sweep.theta_end", theta_end)] {
        if !(v.is_finite() && (0.0..=FRAC_PI_2).contains(&v)) {
            return Err(ConfigError::invalid(path, format!("out of range: must lie in [0, pi/2], got {v}")));
        }
    }
    if theta_end <= theta_start {
        return Err(ConfigError::invalid("sweep.theta_end", "must be greater than sweep.theta_start"));
    }
    if steps < 2 {
        return Err(ConfigError::invalid("sweep.steps", format!("out of range: must be at least 2, got {steps}")));
    }
    Ok(SweepConfig {
        theta_start,
        theta_end,
        steps,
    })
}

fn birefringence(raw: RawBirefringence) -> Result<BirefringenceConfig, ConfigError> {
    let d = BirefringenceConfig::default();
    let n_dirs = raw.n_dirs.unwrap_or(d.n_dirs);
    if n_dirs < 16 {
        return Err(ConfigError::invalid(
            "birefringence.n_dirs",
            format!("out of range: must be at least 16, got {n_dirs}"),
        ));
    }
    let tol = raw.tol.unwrap_or(d.tol);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(ConfigError::invalid(
            "birefringence.tol",
            format!("out of range: must be non-negative, got {tol}"),
        ));
    }
    Ok(BirefringenceConfig { n_dirs, tol })
}
