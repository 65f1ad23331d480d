//! Background states: the Casimir vacuum between parallel plates and
//! classical constant-field backgrounds, plus effective metrics.

use std::f64::consts::PI;

use nalgebra::{Matrix4, Vector3};

use crate::error::{Error, Result};
use crate::lagrangian::{omega_from_lagrangian, LagrangianModel};
use crate::tensor::{minkowski, FieldTensor, FourVector, RankFourTensor};

/// Fine-structure constant used when none is given.
pub const DEFAULT_ALPHA: f64 = 1.0 / 137.035999;

/// Isotropic coefficient of the Maxwell response, `-1 / 16 pi`.
pub const MAXWELL_D1: f64 = -1.0 / (16.0 * PI);

/// `1 + xi` at or below this is a degenerate metric.
pub const DEGENERATE_METRIC_THRESHOLD: f64 = 1e-12;

/// Vacuum between perfectly conducting plates a distance `separation` apart
/// (in units of `1 / m_e`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirVacuum {
    separation: f64,
    alpha: f64,
    normal: FourVector,
}

impl CasimirVacuum {
    pub fn new(separation: f64, alpha: f64) -> Result<Self> {
        Self::with_normal(separation, alpha, FourVector::z_normal())
    }

    pub fn with_normal(separation: f64, alpha: f64, normal: FourVector) -> Result<Self> {
        if !(separation.is_finite() && separation > 0.0) {
            return Err(Error::InvalidParameter {
                name: "separation",
                reason: format!("must be positive, got {separation}"),
            });
        }
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("must be finite and non-negative, got {alpha}"),
            });
        }
        normal.require_unit_spacelike()?;
        Ok(Self {
            separation,
            alpha,
            normal: normal.raised(),
        })
    }

    pub fn separation(&self) -> f64 {
        self.separation
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn normal(&self) -> FourVector {
        self.normal
    }
}

/// Symmetric `T_{mu nu}` (indices down).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressTensor {
    lower: Matrix4<f64>,
}

impl StressTensor {
    pub fn lower(&self) -> &Matrix4<f64> {
        &self.lower
    }

    /// `T^mu_mu`.
    pub fn trace(&self) -> f64 {
        (minkowski() * self.lower).trace()
    }

    pub fn energy_density(&self) -> f64 {
        self.lower[(0, 0)]
    }

    /// `T_{mu nu} v^mu v^nu`.
    pub fn along(&self, v: &FourVector) -> f64 {
        let u = v.upper();
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += self.lower[(a, b)] * u[a] * u[b];
            }
        }
        s
    }
}

/// `<T_00> = -pi^2 / (720 a^4)`.
pub fn casimir_energy_density(separation: f64) -> f64 {
    -PI * PI / (720.0 * separation.powi(4))
}

/// Traceless, plate-symmetric stress: `T_{mu nu} = T_00 (4 n_mu n_nu - eta_{mu nu})`,
/// i.e. `diag(T_00, -T_00, -T_00, 3 T_00)` for `n = z`.
pub fn casimir_stress(vac: &CasimirVacuum) -> StressTensor {
    let t00 = casimir_energy_density(vac.separation);
    let n = vac.normal.lower();
    let eta = minkowski();
    StressTensor {
        lower: Matrix4::from_fn(|a, b| t00 * (4.0 * n[a] * n[b] - eta[(a, b)])),
    }
}

/// `d2 = -11 pi alpha^2 / (64800 a^4)` for the Euler-Heisenberg vacuum.
pub fn casimir_d2(vac: &CasimirVacuum) -> f64 {
    -11.0 * PI * vac.alpha * vac.alpha / (64800.0 * vac.separation.powi(4))
}

/// `d2 = (4 pi / 3)(c1 + c2) <T_{mu nu} n^mu n^nu>`.
pub fn d2_from_normal_stress(c1: f64, c2: f64, stress: &StressTensor, n: &FourVector) -> f64 {
    4.0 * PI / 3.0 * (c1 + c2) * stress.along(n)
}

/// `d2 = 4 pi (c1 + c2) <T_00>`.
pub fn d2_from_energy_density(c1: f64, c2: f64, stress: &StressTensor) -> f64 {
    4.0 * PI * (c1 + c2) * stress.energy_density()
}

/// `(d1, d2)` for a general model in the Casimir vacuum, reading `c1 = L_FF / 2`
/// and `c2 = L_GG / 2` at zero field. For Euler-Heisenberg this reduces to
/// `(-1/16pi, casimir_d2)`.
pub fn casimir_coefficients(model: &LagrangianModel, separation: f64) -> Result<(f64, f64)> {
    let vac = CasimirVacuum::new(separation, 0.0)?;
    let d = model.derivatives(0.0, 0.0);
    if !(d.l_f.is_finite() && d.l_ff.is_finite() && d.l_gg.is_finite()) {
        return Err(Error::NonFinite("Lagrangian derivatives at zero field"));
    }
    let stress = casimir_stress(&vac);
    Ok((0.25 * d.l_f, d2_from_energy_density(0.5 * d.l_ff, 0.5 * d.l_gg, &stress)))
}

/// `xi = d2 / d1` at lowest order.
pub fn casimir_xi(vac: &CasimirVacuum) -> f64 {
    casimir_d2(vac) / MAXWELL_D1
}

/// Plate anisotropy
/// `d2 (eta^{mu nu} n^alpha n^beta - eta^{mu beta} n^alpha n^nu
///      + eta^{alpha beta} n^mu n^nu - eta^{alpha nu} n^mu n^beta)`.
pub fn casimir_anisotropy(d2: f64, n: &FourVector) -> RankFourTensor {
    let eta = minkowski();
    let n = n.upper();
    RankFourTensor::from_fn(|a, b, c, d| {
        d2 * (eta[(a, c)] * n[b] * n[d] - eta[(a, d)] * n[b] * n[c] + eta[(b, d)] * n[a] * n[c]
            - eta[(b, c)] * n[a] * n[d])
    })
    .expect("anisotropy term is in the symmetry class by construction")
}

/// `d1 (eta eta - eta eta) + Delta(d2, n)`.
pub fn casimir_omega_from_coefficients(d1: f64, d2: f64, n: &FourVector) -> Result<RankFourTensor> {
    n.require_unit_spacelike()?;
    if !(d1.is_finite() && d2.is_finite()) {
        return Err(Error::NonFinite("Casimir coefficients"));
    }
    let omega = &RankFourTensor::isotropic(d1) + &casimir_anisotropy(d2, n);
    omega.validate()?;
    Ok(omega)
}

/// `<C|Omega|C>` with `d1 = -1/16pi` and `d2` from [`casimir_d2`].
pub fn casimir_omega(vac: &CasimirVacuum) -> RankFourTensor {
    casimir_omega_from_coefficients(MAXWELL_D1, casimir_d2(vac), &vac.normal)
        .expect("validated vacuum yields a valid tensor")
}

/// Classical constant background: no fluctuation average, just `Omega` at `F_bg`.
pub fn background_field_omega(
    model: &LagrangianModel,
    e: Vector3<f64>,
    b: Vector3<f64>,
) -> Result<RankFourTensor> {
    if !(e.iter().all(|v| v.is_finite()) && b.iter().all(|v| v.is_finite())) {
        return Err(Error::NonFinite("background field"));
    }
    omega_from_lagrangian(model, &FieldTensor::from_fields(e, b))
}

/// Inverse metric `gamma^{mu nu}` together with its inverse `g_{mu nu}`,
/// normalized so that `gamma^{00} = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveMetric {
    gamma: Matrix4<f64>,
    g: Matrix4<f64>,
    xi: Option<f64>,
}

impl EffectiveMetric {
    /// `gamma = eta + xi n n`, `g = eta - xi / (1 + xi) n n`.
    pub fn from_xi(xi: f64, n: &FourVector) -> Result<Self> {
        n.require_unit_spacelike()?;
        if !xi.is_finite() {
            return Err(Error::NonFinite("xi"));
        }
        if 1.0 + xi <= DEGENERATE_METRIC_THRESHOLD {
            return Err(Error::DegenerateMetric(1.0 + xi));
        }
        let eta = minkowski();
        let nu = n.upper();
        let nl = n.lower();
        let gamma = Matrix4::from_fn(|a, b| eta[(a, b)] + xi * nu[a] * nu[b]);
        let g = Matrix4::from_fn(|a, b| eta[(a, b)] - xi / (1.0 + xi) * nl[a] * nl[b]);
        Ok(Self {
            gamma,
            g,
            xi: Some(xi),
        })
    }

    /// Normalizes an arbitrary symmetric inverse metric to `gamma^{00} = -1`
    /// and inverts it numerically.
    pub fn from_gamma(gamma: Matrix4<f64>) -> Result<Self> {
        if gamma.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("gamma"));
        }
        if (gamma - gamma.transpose()).amax() > 1e-12 * gamma.amax() {
            return Err(Error::NonInvertibleMetric("gamma is not symmetric"));
        }
        let g00 = gamma[(0, 0)];
        if g00 >= -1e-300 {
            return Err(Error::NonInvertibleMetric("gamma^{00} must be negative"));
        }
        let gamma = gamma / -g00;
        let gamma = 0.5 * (gamma + gamma.transpose());
        let g = gamma
            .try_inverse()
            .ok_or(Error::NonInvertibleMetric("gamma is singular"))?;
        Ok(Self {
            gamma,
            g: 0.5 * (g + g.transpose()),
            xi: None,
        })
    }

    pub fn gamma(&self) -> &Matrix4<f64> {
        &self.gamma
    }

    pub fn g(&self) -> &Matrix4<f64> {
        &self.g
    }

    /// Set when built from `(xi, n)`.
    pub fn xi(&self) -> Option<f64> {
        self.xi
    }

    /// `gamma^{mu nu} k_mu k_nu`.
    pub fn quadratic_form(&self, k: &FourVector) -> f64 {
        let k = k.lower();
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += self.gamma[(a, b)] * k[a] * k[b];
            }
        }
        s
    }

    /// `max |gamma g - 1|`.
    pub fn inverse_residual(&self) -> f64 {
        (self.gamma * self.g - Matrix4::identity()).amax()
    }
}

pub fn effective_metric_from_xi(xi: f64, n: &FourVector) -> Result<EffectiveMetric> {
    EffectiveMetric::from_xi(xi, n)
}
