//! Runs a validated scenario: model, response tensor, Fresnel analysis,
//! kinematics sweep and polarization-sum diagnostics, rendered as CSV and JSON.

use std::fmt::Write as _;
use std::path::PathBuf;

use nalgebra::{Matrix4, Vector3};
use serde::Serialize;
use thiserror::Error;

use crate::config::{ConfigError, ScenarioConfig, VacuumConfig};
use crate::error::Error;
use crate::fresnel::{detect_birefringence, fresnel_quartic, BirefringenceReport};
use crate::kinematics::{direction, MetricPropagation};
use crate::lagrangian::decompose_along_normal;
use crate::polsum::{bootstrap_residual, extract_lambda, minkowski_polsum_metric_from_omega};
use crate::tensor::{FourVector, RankFourTensor};
use crate::vacuum::{casimir_coefficients, casimir_omega_from_coefficients, background_field_omega, EffectiveMetric};

pub const CSV_HEADER: &str = "theta,v_phase,v_group,ray_angle,eps2_x,eps2_z,N_theta,root_gap";

/// Relative step for the numerical group velocity of birefringent media.
const GROUP_VELOCITY_STEP: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Physics(#[from] Error),
    #[error("I/O error on {path}: {message}")]
    Io { path: PathBuf, message: String },
}

impl ScenarioError {
    /// 2 config, 3 degenerate metric or cone, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Io { .. } => 4,
            Self::Physics(e) => match e {
                Error::DegenerateMetric(_)
                | Error::NonInvertibleMetric(_)
                | Error::DegenerateCone(_)
                | Error::DegenerateNormalization(_)
                | Error::OmegaDegenerate { .. }
                | Error::MissingOmegaSquaredFactor { .. }
                | Error::NonPropagating { .. }
                | Error::SingularDenominator(_)
                | Error::FitInconsistent(_)
                | Error::FitUnderdetermined(_)
                | Error::Tetrad(_) => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub v_phase: f64,
    pub v_group: f64,
    pub ray_angle: f64,
    pub eps2_x: f64,
    pub eps2_z: f64,
    pub n_theta: f64,
    pub root_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub d1: f64,
    pub d2: f64,
    pub xi: f64,
    pub gamma: Option<[[f64; 4]; 4]>,
    pub g: Option<[[f64; 4]; 4]>,
    pub gamma_tilde: Option<[[f64; 4]; 4]>,
    pub lambda: Option<f64>,
    pub bootstrap_residual_gamma: Option<f64>,
    pub bootstrap_residual_gamma_tilde: Option<f64>,
    pub birefringent: bool,
    pub max_root_gap: f64,
    pub n_dirs: usize,
    pub fit_residual_rms: Option<f64>,
    pub scharnhorst_delta: f64,
    pub scharnhorst_delta_first_order: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutput {
    pub rows: Vec<SweepRow>,
    pub report: Report,
}

impl ScenarioOutput {
    pub fn csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let cells = [
                r.theta, r.v_phase, r.v_group, r.ray_angle, r.eps2_x, r.eps2_z, r.n_theta, r.root_gap,
            ];
            for (i, c) in cells.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{c:.16e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.report).expect("report serializes");
        s.push('\n');
        s
    }
}

fn to_rows(m: &Matrix4<f64>) -> [[f64; 4]; 4] {
    // adding zero folds -0.0 into 0.0
    std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)] + 0.0))
}

struct Medium {
    omega: RankFourTensor,
    metric: Option<EffectiveMetric>,
    /// Exact `v_phase(0) - 1` where a closed form exists.
    normal_delta: Option<f64>,
    /// `(d1, d2)` when known exactly rather than read off `omega`.
    coefficients: Option<(f64, f64)>,
}

fn build_medium(cfg: &ScenarioConfig) -> Result<Medium, Error> {
    let model = cfg.lagrangian.model();
    let n = FourVector::z_normal();
    match &cfg.vacuum {
        VacuumConfig::Casimir {
            separation,
            coefficients,
            xi,
        } => {
            let (d1, mut d2) = match coefficients {
                Some(c) => *c,
                None => casimir_coefficients(&model, *separation)?,
            };
            if d1 == 0.0 {
                return Err(Error::SingularDenominator("d1"));
            }
            if let Some(x) = xi {
                d2 = x * d1;
            }
            let xi = d2 / d1;
            let metric = EffectiveMetric::from_xi(xi, &n)?;
            Ok(Medium {
                omega: casimir_omega_from_coefficients(d1, d2, &n)?,
                metric: Some(metric),
                normal_delta: Some(xi / ((1.0 + xi).sqrt() + 1.0)),
                coefficients: Some((d1, d2)),
            })
        }
        VacuumConfig::BackgroundField { e, b } => Ok(Medium {
            omega: background_field_omega(&model, *e, *b)?,
            metric: None,
            normal_delta: None,
            coefficients: None,
        }),
        VacuumConfig::RawOmega { d1, gamma } => {
            let metric = EffectiveMetric::from_gamma(*gamma)?;
            Ok(Medium {
                omega: RankFourTensor::from_metric_pair(*d1, metric.gamma()),
                metric: Some(metric),
                normal_delta: None,
                coefficients: None,
            })
        }
    }
}

/// Fast root along `k`, as a function of the full wave vector.
fn fast_omega(omega: &RankFourTensor, k: &Vector3<f64>) -> Result<f64, Error> {
    let norm = k.norm();
    let q = fresnel_quartic(omega, &(k / norm))?;
    let (s1, _) = q.propagating_speeds().ok_or(Error::NonPropagating {
        direction: [k.x / norm, k.y / norm, k.z / norm],
    })?;
    Ok(s1 * norm)
}

fn root_gap(omega: &RankFourTensor, khat: &Vector3<f64>) -> Result<f64, Error> {
    let q = fresnel_quartic(omega, khat)?;
    let (s1, s2) = q.propagating_speeds().ok_or(Error::NonPropagating {
        direction: [khat.x, khat.y, khat.z],
    })?;
    Ok(s1 - s2)
}

fn sweep_row(medium: &Medium, theta: f64) -> Result<SweepRow, Error> {
    let khat = direction(theta);
    let root_gap = root_gap(&medium.omega, &khat)?;
    match &medium.metric {
        Some(metric) => {
            let p = MetricPropagation::new(metric, &khat)?;
            Ok(SweepRow {
                theta,
                v_phase: p.v_phase,
                v_group: p.v_group(),
                ray_angle: p.ray_angle(),
                eps2_x: p.pol2.x,
                eps2_z: p.pol2.z,
                n_theta: p.n_theta,
                root_gap,
            })
        }
        None => {
            let v_phase = fast_omega(&medium.omega, &khat)?;
            let h = GROUP_VELOCITY_STEP;
            let mut grad = Vector3::<f64>::zeros();
            for i in 0..3 {
                let mut dk = Vector3::<f64>::zeros();
                dk[i] = h;
                grad[i] = (fast_omega(&medium.omega, &(khat + dk))? - fast_omega(&medium.omega, &(khat - dk))?)
                    / (2.0 * h);
            }
            Ok(SweepRow {
                theta,
                v_phase,
                v_group: grad.norm(),
                ray_angle: grad.x.atan2(grad.z),
                eps2_x: f64::NAN,
                eps2_z: f64::NAN,
                n_theta: f64::NAN,
                root_gap,
            })
        }
    }
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioOutput, ScenarioError> {
    let mut medium = build_medium(cfg)?;
    let n = FourVector::z_normal();
    let (d1, d2) = match medium.coefficients {
        Some(c) => c,
        None => {
            let dec = decompose_along_normal(&medium.omega, &n)?;
            (dec.d1, dec.d2)
        }
    };
    let xi = d2 / d1;

    let BirefringenceReport {
        birefringent,
        max_gap,
        metric: fit,
        ..
    } = detect_birefringence(&medium.omega, cfg.birefringence.n_dirs, cfg.birefringence.tol)?;
    if medium.metric.is_none() && !birefringent {
        medium.metric = fit.as_ref().map(|f| f.metric);
    }

    let gamma_tilde = minkowski_polsum_metric_from_omega(&medium.omega, d1).ok();
    let (lambda, res_gamma, res_tilde) = match &medium.metric {
        Some(m) => {
            let lambda = extract_lambda(&medium.omega, m);
            (
                Some(lambda),
                Some(bootstrap_residual(&medium.omega, m, lambda)),
                gamma_tilde.as_ref().map(|t| bootstrap_residual(&medium.omega, t, lambda)),
            )
        }
        None => (None, None, None),
    };

    let scharnhorst_delta = match medium.normal_delta {
        Some(d) => d,
        None => match &medium.metric {
            Some(m) => MetricPropagation::new(m, &Vector3::z())?.v_phase - 1.0,
            None => fast_omega(&medium.omega, &Vector3::z())? - 1.0,
        },
    };

    let rows = cfg
        .sweep
        .angles()
        .into_iter()
        .map(|theta| sweep_row(&medium, theta))
        .collect::<Result<Vec<_>, _>>()?;

    let report = Report {
        d1,
        d2,
        xi,
        gamma: medium.metric.as_ref().map(|m| to_rows(m.gamma())),
        g: medium.metric.as_ref().map(|m| to_rows(m.g())),
        gamma_tilde: gamma_tilde.as_ref().map(|m| to_rows(m.gamma())),
        lambda,
        bootstrap_residual_gamma: res_gamma,
        bootstrap_residual_gamma_tilde: res_tilde,
        birefringent,
        max_root_gap: max_gap,
        n_dirs: cfg.birefringence.n_dirs,
        fit_residual_rms: fit.map(|f| f.residual_rms),
        scharnhorst_delta,
        scharnhorst_delta_first_order: xi / 2.0,
    };
    Ok(ScenarioOutput { rows, report })
}

/// Reads, validates, runs and writes. `csv` and `json` override the config paths;
/// with no JSON destination the report goes to stdout.
pub fn run_file(
    config: &std::path::Path,
    csv: Option<PathBuf>,
    json: Option<PathBuf>,
) -> Result<ScenarioOutput, ScenarioError> {
    let cfg = load_config(config)?;
    let out = run_scenario(&cfg)?;
    let csv = csv.or(cfg.outputs.csv.clone());
    let json = json.or(cfg.outputs.json.clone());
    if let Some(path) = &csv {
        write(path, &out.csv())?;
    }
    match &json {
        Some(path) => write(path, &out.json())?,
        None if csv.is_none() => print!("{}", out.json()),
        None => {}
    }
    Ok(out)
}

pub fn load_config(path: &std::path::Path) -> Result<ScenarioConfig, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(crate::config::validate_config(&text)?)
}

fn write(path: &std::path::Path, contents: &str) -> Result<(), ScenarioError> {
    std::fs::write(path, contents).map_err(|e| ScenarioError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}
