//! Effective Lagrangians `L(F, G)` and the response tensor `Omega`.
//!
//! A model is only ever needed through its first and second derivatives at
//! the background point, so that is what [`LagrangianModel`] evaluates.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::tensor::{f_invariant, g_invariant, FieldTensor, FourVector, RankFourTensor};

/// `dL/dF` of the Maxwell Lagrangian `-F / 4 pi`.
pub const MAXWELL_L_F: f64 = -1.0 / (4.0 * PI);

/// First and second partial derivatives of `L` at one `(F, G)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub l_f: f64,
    pub l_g: f64,
    pub l_ff: f64,
    pub l_gg: f64,
    pub l_fg: f64,
}

impl Derivatives {
    pub const MAXWELL: Derivatives = Derivatives {
        l_f: MAXWELL_L_F,
        l_g: 0.0,
        l_ff: 0.0,
        l_gg: 0.0,
        l_fg: 0.0,
    };

    fn check_finite(&self) -> Result<()> {
        let named = [
            ("dL/dF", self.l_f),
            ("dL/dG", self.l_g),
            ("d2L/dF2", self.l_ff),
            ("d2L/dG2", self.l_gg),
            ("d2L/dFdG", self.l_fg),
        ];
        match named.iter().find(|(_, v)| !v.is_finite()) {
            Some((name, _)) => Err(Error::NonFinite(name)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Maxwell,
    EulerHeisenberg,
    Custom,
}

/// Quartic coefficients of `L_EH = -F/4pi + c1 F^2 + c2 G^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EhCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub alpha: f64,
    pub m_e: f64,
}

impl EhCoefficients {
    /// `c1 = alpha^2 / (90 pi^2 m^4)`, `c2 = 7 alpha^2 / (360 pi^2 m^4)`.
    pub fn new(alpha: f64, m_e: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("must be finite and non-negative, got {alpha}"),
            });
        }
        if !(m_e.is_finite() && m_e > 0.0) {
            return Err(Error::InvalidParameter {
                name: "m_e",
                reason: format!("must be positive, got {m_e}"),
            });
        }
        let base = alpha * alpha / (PI * PI * m_e.powi(4));
        Ok(Self {
            c1: base / 90.0,
            c2: 7.0 * base / 360.0,
            alpha,
            m_e,
        })
    }
}

/// Scalar Lagrangian density as a function of `(F, G)`.
pub type ScalarLagrangian = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Repr {
    Maxwell,
    EulerHeisenberg(EhCoefficients),
    Custom(Derivatives),
    Function(ScalarLagrangian),
}

#[derive(Clone)]
pub struct LagrangianModel {
    repr: Repr,
}

impl fmt::Debug for LagrangianModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Maxwell => f.write_str("LagrangianModel::Maxwell"),
            Repr::EulerHeisenberg(c) => write!(f, "LagrangianModel::EulerHeisenberg({c:?})"),
            Repr::Custom(d) => write!(f, "LagrangianModel::Custom({d:?})"),
            Repr::Function(_) => f.write_str("LagrangianModel::Function(..)"),
        }
    }
}

impl LagrangianModel {
    pub fn maxwell() -> Self {
        Self {
            repr: Repr::Maxwell,
        }
    }

    pub fn euler_heisenberg(alpha: f64, m_e: f64) -> Result<Self> {
        Ok(Self {
            repr: Repr::EulerHeisenberg(EhCoefficients::new(alpha, m_e)?),
        })
    }

    /// Fixed derivative values, valid at whatever background they were taken at.
    pub fn custom(derivatives: Derivatives) -> Result<Self> {
        derivatives.check_finite()?;
        Ok(Self {
            repr: Repr::Custom(derivatives),
        })
    }

    /// Wraps a scalar `L(F, G)`; derivatives come from central differences with
    /// step `1e-4 * max(1, |F|, |G|)`.
    pub fn from_fn(lagrangian: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            repr: Repr::Function(Arc::new(lagrangian)),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self.repr {
            Repr::Maxwell => ModelKind::Maxwell,
            Repr::EulerHeisenberg(_) => ModelKind::EulerHeisenberg,
            Repr::Custom(_) | Repr::Function(_) => ModelKind::Custom,
        }
    }

    pub fn eh_coefficients(&self) -> Option<&EhCoefficients> {
        match &self.repr {
            Repr::EulerHeisenberg(c) => Some(c),
            _ => None,
        }
    }

    pub fn derivatives(&self, f: f64, g: f64) -> Derivatives {
        match &self.repr {
            Repr::Maxwell => Derivatives::MAXWELL,
            Repr::EulerHeisenberg(c) => Derivatives {
                l_f: MAXWELL_L_F + 2.0 * c.c1 * f,
                l_g: 2.0 * c.c2 * g,
                l_ff: 2.0 * c.c1,
                l_gg: 2.0 * c.c2,
                l_fg: 0.0,
            },
            Repr::Custom(d) => *d,
            Repr::Function(l) => central_differences(l.as_ref(), f, g),
        }
    }
}

fn central_differences(l: &(dyn Fn(f64, f64) -> f64 + Send + Sync), f: f64, g: f64) -> Derivatives {
    let h = 1e-4 * 1.0_f64.max(f.abs()).max(g.abs());
    let l0 = l(f, g);
    let (lfp, lfm) = (l(f + h, g), l(f - h, g));
    let (lgp, lgm) = (l(f, g + h), l(f, g - h));
    Derivatives {
        l_f: (lfp - lfm) / (2.0 * h),
        l_g: (lgp - lgm) / (2.0 * h),
        l_ff: (lfp - 2.0 * l0 + lfm) / (h * h),
        l_gg: (lgp - 2.0 * l0 + lgm) / (h * h),
        l_fg: (l(f + h, g + h) - l(f + h, g - h) - l(f - h, g + h) + l(f - h, g - h))
            / (4.0 * h * h),
    }
}

/// `Omega^{mu nu alpha beta} = d^2 L / dF_{mu nu} dF_{alpha beta}` at the background.
///
/// `1/4 L_F (eta eta - eta eta) + 1/4 L_G eps + 1/4 M` with
/// `M = L_FF F F + L_GG *F *F + L_FG (F *F + *F F)`. The `eps` term is kept so
/// the tensor is the true second derivative; it never reaches the wave matrix.
pub fn omega_from_lagrangian(model: &LagrangianModel, f_bg: &FieldTensor) -> Result<RankFourTensor> {
    let (f, g) = (f_invariant(f_bg), g_invariant(f_bg));
    let d = model.derivatives(f, g);
    d.check_finite()?;

    let fu = f_bg.upper();
    let du = f_bg.dual().upper();
    let m = RankFourTensor::symmetric_outer(d.l_ff, &fu, &fu)
        + RankFourTensor::symmetric_outer(d.l_gg, &du, &du)
        + RankFourTensor::symmetric_outer(2.0 * d.l_fg, &fu, &du);
    let omega = (RankFourTensor::isotropic(0.25 * d.l_f)
        + RankFourTensor::levi_civita(0.25 * d.l_g))
        + &m * 0.25;
    omega.validate()?;
    Ok(omega)
}

/// Frobenius-orthogonal split `Omega = d1 (eta eta - eta eta) + Delta`.
pub fn decompose_omega(omega: &RankFourTensor) -> (f64, RankFourTensor) {
    let iso = RankFourTensor::isotropic(1.0);
    let d1 = omega.frobenius_dot(&iso) / iso.frobenius_dot(&iso);
    (d1, omega - &(&iso * d1))
}

/// Split relative to a preferred spacelike direction `n`.
#[derive(Debug, Clone)]
pub struct NormalDecomposition {
    pub d1: f64,
    pub d2: f64,
    pub delta: RankFourTensor,
}

/// `d1 = (T - 2 N) / 6`, `d2 = -(T - 4 N) / 6` where `T = Omega^{mu nu}_{mu nu}`
/// and `N = Omega^{mu nu}_{alpha nu} n_mu n^alpha`. Exact when `Delta` has the
/// plate-anisotropy form built from `n`.
pub fn decompose_along_normal(omega: &RankFourTensor, n: &FourVector) -> Result<NormalDecomposition> {
    n.require_unit_spacelike()?;
    let full = omega.full_trace();
    let normal = omega.normal_trace(n);
    let d1 = (full - 2.0 * normal) / 6.0;
    let d2 = -(full - 4.0 * normal) / 6.0;
    Ok(NormalDecomposition {
        d1,
        d2,
        delta: omega - &RankFourTensor::isotropic(d1),
    })
}
