//! Polarization sums, the bootstrap condition `3 Lambda gamma = Omega . g`,
//! and the correction term that makes the tetrad polarization sum agree with
//! the effective metric.

use nalgebra::{Matrix3, Matrix4, Vector3};

use crate::error::{Error, Result};
use crate::fresnel::{fresnel_quartic, SpatialPencil};
use crate::tensor::{minkowski, FourVector, RankFourTensor};
use crate::vacuum::{casimir_anisotropy, casimir_omega_from_coefficients, EffectiveMetric};

/// `xi_tilde = 2 d2 / (2 d1 + d2)`.
pub fn xi_tilde(d1: f64, d2: f64) -> Result<f64> {
    let den = 2.0 * d1 + d2;
    if den == 0.0 || !den.is_finite() {
        return Err(Error::SingularDenominator("2 d1 + d2"));
    }
    Ok(2.0 * d2 / den)
}

/// The metric from replacing the polarization sum by `eta`:
/// `gamma_tilde = eta + xi_tilde n n`.
pub fn minkowski_polsum_metric(d1: f64, d2: f64, n: &FourVector) -> Result<EffectiveMetric> {
    EffectiveMetric::from_xi(xi_tilde(d1, d2)?, n)
}

/// Same metric read off a tensor: `2 d1 eta + (Omega - d1 I)^{mu alpha nu}{}_alpha`.
pub fn minkowski_polsum_metric_from_omega(omega: &RankFourTensor, d1: f64) -> Result<EffectiveMetric> {
    let eta = minkowski();
    let delta = omega - &RankFourTensor::isotropic(d1);
    let m = eta * (2.0 * d1) + delta.contract_pair(&eta);
    if m[(0, 0)] == 0.0 {
        return Err(Error::SingularDenominator("2 d1 + d2"));
    }
    EffectiveMetric::from_gamma(if m[(0, 0)] > 0.0 { -m } else { m })
}

/// `|3 Lambda gamma - Omega^{mu alpha nu beta} g_{alpha beta}|_F / |Omega|_F`.
pub fn bootstrap_residual(omega: &RankFourTensor, metric: &EffectiveMetric, lambda: f64) -> f64 {
    bootstrap_residual_raw(omega, metric.gamma(), metric.g(), lambda)
}

/// As [`bootstrap_residual`] with `gamma` and `g` supplied independently,
/// e.g. the first-order inverse `eta - xi n n`.
pub fn bootstrap_residual_raw(omega: &RankFourTensor, gamma: &Matrix4<f64>, g: &Matrix4<f64>, lambda: f64) -> f64 {
    let norm = omega.frobenius_norm();
    if norm == 0.0 {
        return (gamma * (3.0 * lambda)).norm();
    }
    (gamma * (3.0 * lambda) - omega.contract_pair(g)).norm() / norm
}

/// `eta_{mu nu} - xi n_mu n_nu`, the inverse of `eta + xi n n` to first order.
pub fn first_order_inverse(xi: f64, n: &FourVector) -> Matrix4<f64> {
    let nl = n.lower();
    Matrix4::from_fn(|a, b| minkowski()[(a, b)] - xi * nl[a] * nl[b])
}

/// Projection of `Omega` onto `gamma gamma - gamma gamma`.
pub fn extract_lambda(omega: &RankFourTensor, metric: &EffectiveMetric) -> f64 {
    let basis = RankFourTensor::from_metric_pair(1.0, metric.gamma());
    omega.frobenius_dot(&basis) / basis.frobenius_dot(&basis)
}

/// Least-squares intercept `c0` of `(xi_tilde - xi) / xi^2 = c0 + c1 xi`.
pub fn fit_leading_gap_coefficient(xis: &[f64]) -> Result<f64> {
    if xis.len() < 2 {
        return Err(Error::InvalidParameter {
            name: "xis",
            reason: "need at least two sample points".into(),
        });
    }
    let pts: Vec<(f64, f64)> = xis
        .iter()
        .map(|&xi| {
            if xi == 0.0 {
                return Err(Error::InvalidParameter {
                    name: "xis",
                    reason: "xi must be nonzero".into(),
                });
            }
            Ok((xi, (xi_tilde(1.0, xi)? - xi) / (xi * xi)))
        })
        .collect::<Result<_>>()?;
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    Ok(my - slope * mx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolsumComparison {
    pub xi: f64,
    pub xi_tilde: f64,
    pub gamma: EffectiveMetric,
    pub gamma_tilde: EffectiveMetric,
    /// Fit over `{xi, xi/2, xi/4}`; NaN when `xi = 0`.
    pub leading_gap_coeff: f64,
    pub bootstrap_residual_gamma: f64,
    pub bootstrap_residual_gamma_tilde: f64,
}

impl PolsumComparison {
    pub fn new(d1: f64, d2: f64, n: &FourVector) -> Result<Self> {
        if d1 == 0.0 {
            return Err(Error::SingularDenominator("d1"));
        }
        let xi = d2 / d1;
        let xt = xi_tilde(d1, d2)?;
        let gamma = EffectiveMetric::from_xi(xi, n)?;
        let gamma_tilde = EffectiveMetric::from_xi(xt, n)?;
        let omega = casimir_omega_from_coefficients(d1, d2, n)?;
        let leading_gap_coeff = if xi == 0.0 {
            f64::NAN
        } else {
            fit_leading_gap_coefficient(&[xi, xi / 2.0, xi / 4.0])?
        };
        Ok(Self {
            xi,
            xi_tilde: xt,
            gamma,
            gamma_tilde,
            leading_gap_coeff,
            bootstrap_residual_gamma: bootstrap_residual(&omega, &gamma, d1),
            bootstrap_residual_gamma_tilde: bootstrap_residual(&omega, &gamma_tilde, d1),
        })
    }
}

/// Minkowski-orthonormal frame, all vectors index up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tetrad {
    pub u: FourVector,
    pub e1: FourVector,
    pub e2: FourVector,
    pub w: FourVector,
}

fn spatial_unit(v: Vector3<f64>) -> FourVector {
    FourVector::spatial(v.normalize())
}

fn perpendicular(n: &Vector3<f64>) -> Vector3<f64> {
    let seed = if n.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    (seed - n * seed.dot(n)).normalize()
}

impl Tetrad {
    /// `w = n` and `u` along the part of `k` orthogonal to `n`, so `k` lies in
    /// the `u`-`w` plane. Needs `k^2 - (k.n)^2 < 0`.
    pub fn physical(k: &FourVector, n: &FourVector) -> Result<Self> {
        n.require_unit_spacelike()?;
        let ku = k.upper();
        let nu = n.upper();
        let kn = k.dot(n);
        let v: [f64; 4] = std::array::from_fn(|i| ku[i] - kn * nu[i]);
        let v = FourVector::vector(v[0], v[1], v[2], v[3]);
        let v2 = v.norm_sq();
        let scale = ku.iter().map(|x| x * x).sum::<f64>();
        if !(v2 < -1e-14 * scale) {
            return Err(Error::Tetrad("k minus its normal part is not timelike"));
        }
        let sign = if v.time() < 0.0 { -1.0 } else { 1.0 };
        let u = v.scaled(sign / (-v2).sqrt());
        let n3 = n.space();
        let perp = u.space();
        let (e1, e2) = if perp.norm() <= 1e-14 * u.time().abs() {
            let a = perpendicular(&n3);
            (FourVector::spatial(a), FourVector::spatial(n3.cross(&a)))
        } else {
            let e = perp.normalize();
            let a = e.cross(&n3).normalize();
            // boost partner of u inside span{t, e}
            let second = FourVector::new(
                [perp.norm(), u.time() * e.x, u.time() * e.y, u.time() * e.z],
                crate::tensor::Variance::Contravariant,
            );
            (FourVector::spatial(a), second)
        };
        Ok(Self { u, e1, e2, w: n.raised() })
    }

    /// `u = t`, `w` along the spatial part of `k`, `e1` along `k x n`.
    pub fn rest_frame(k: &FourVector, n: &FourVector) -> Result<Self> {
        n.require_unit_spacelike()?;
        let ks = k.raised().space();
        if ks.norm() == 0.0 || !ks.norm().is_finite() {
            return Err(Error::Tetrad("k has no spatial part"));
        }
        let khat = ks.normalize();
        let c = khat.cross(&n.space());
        let e1 = if c.norm() <= 1e-12 { perpendicular(&khat) } else { c.normalize() };
        let e2 = khat.cross(&e1);
        Ok(Self {
            u: FourVector::vector(1.0, 0.0, 0.0, 0.0),
            e1: spatial_unit(e1),
            e2: spatial_unit(e2),
            w: FourVector::spatial(khat),
        })
    }

    pub fn vectors(&self) -> [FourVector; 4] {
        [self.u, self.e1, self.e2, self.w]
    }

    /// `max |e_a . e_b - diag(-1, 1, 1, 1)|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let v = self.vectors();
        let mut worst = 0.0_f64;
        for a in 0..4 {
            for b in 0..4 {
                let expected = match (a, b) {
                    (0, 0) => -1.0,
                    (x, y) if x == y => 1.0,
                    _ => 0.0,
                };
                worst = worst.max((v[a].dot(&v[b]) - expected).abs());
            }
        }
        worst
    }

    /// `sum_r e_r e_r` with indices down.
    pub fn polarization_sum(&self) -> Matrix4<f64> {
        let mut p = Matrix4::zeros();
        for e in [self.e1, self.e2] {
            let l = e.lower();
            p += Matrix4::from_fn(|a, b| l[a] * l[b]);
        }
        p
    }
}

fn lower_contract(t: &RankFourTensor, a: &FourVector, b: &FourVector, c: &FourVector, d: &FourVector) -> f64 {
    let (a, b, c, d) = (a.lower(), b.lower(), c.lower(), d.lower());
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    s += t.get(i, j, k, l) * a[i] * b[j] * c[k] * d[l];
                }
            }
        }
    }
    s
}

/// `Delta_{mu alpha nu beta} u^mu w^alpha u^nu w^beta` for the anisotropic part
/// `d2 (eta n n)` of the plate vacuum.
pub fn extra_term_factor(d2: f64, n: &FourVector, tetrad: &Tetrad) -> Result<f64> {
    n.require_unit_spacelike()?;
    let delta = casimir_anisotropy(d2, n);
    Ok(lower_contract(&delta, &tetrad.u, &tetrad.w, &tetrad.u, &tetrad.w))
}

/// Terms of the corrected polarization sum for wave covector `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectedPolsum {
    /// `2 d1 k^2 + Delta^{mu alpha}{}_{nu alpha} k_mu k^nu`.
    pub minkowski_part: f64,
    /// `k^2 Delta_{mu alpha nu beta} u^mu w^alpha u^nu w^beta`.
    pub extra_term: f64,
    /// `A^{mu nu} sum_r e_r e_r` evaluated directly.
    pub direct: f64,
    /// `2 d1 gamma^{mu nu} k_mu k_nu`.
    pub target: f64,
    pub scale: f64,
}

impl CorrectedPolsum {
    pub fn total(&self) -> f64 {
        self.minkowski_part + self.extra_term
    }

    pub fn deviation(&self) -> f64 {
        (self.total() - self.target).abs() / self.scale
    }
}

pub fn corrected_polsum_terms(d1: f64, d2: f64, n: &FourVector, k: &FourVector) -> Result<CorrectedPolsum> {
    let k = k.lowered();
    let tetrad = Tetrad::physical(&k, n)?;
    let eta = minkowski();
    let omega = casimir_omega_from_coefficients(d1, d2, n)?;
    let delta = casimir_anisotropy(d2, n);
    let kl = k.lower();
    let quad = |m: &Matrix4<f64>| {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += m[(a, b)] * kl[a] * kl[b];
            }
        }
        s
    };
    let k2 = k.norm_sq();
    let minkowski_part = 2.0 * d1 * k2 + quad(&delta.contract_pair(&eta));
    let extra_term = k2 * lower_contract(&delta, &tetrad.u, &tetrad.w, &tetrad.u, &tetrad.w);
    let a = omega.contract_wave(&kl);
    let p = tetrad.polarization_sum();
    let direct = a.component_mul(&p).sum();
    let kn = k.dot(n);
    let target = 2.0 * d1 * (k2 + (d2 / d1) * kn * kn);
    let scale = (2.0 * d1.abs() + d2.abs()) * kl.iter().map(|x| x * x).sum::<f64>();
    if !(scale > 0.0) {
        return Err(Error::Tetrad("zero wave covector or vanishing response"));
    }
    Ok(CorrectedPolsum {
        minkowski_part,
        extra_term,
        direct,
        target,
        scale,
    })
}

/// Relative deviation of the corrected polarization sum from `2 d1 gamma k k`.
pub fn corrected_polsum_check(d1: f64, d2: f64, n: &FourVector, k: &FourVector) -> Result<f64> {
    Ok(corrected_polsum_terms(d1, d2, n, k)?.deviation())
}

/// Per-mode diagnostic for a birefringent direction: the on-shell polarization
/// of each mode evaluated in the wave matrix of every mode.
#[derive(Debug, Clone, PartialEq)]
pub struct BirefringentPolsum {
    pub speeds: Vec<f64>,
    /// `cross[r][s] = e_r . A(s_s) e_r / |A(s_s)|`.
    pub cross: Vec<Vec<f64>>,
}

pub fn birefringent_polsum_diagnostic(omega: &RankFourTensor, khat: &Vector3<f64>) -> Result<BirefringentPolsum> {
    let q = fresnel_quartic(omega, khat)?;
    let speeds: Vec<f64> = q
        .distinct_roots()
        .iter()
        .filter(|z| z.im.abs() <= crate::fresnel::REAL_ROOT_TOLERANCE * (1.0 + z.re.abs()) && z.re >= 0.0)
        .map(|z| z.re)
        .collect();
    let pencil = SpatialPencil::new(omega, khat);
    let kernels: Vec<Vector3<f64>> = speeds.iter().map(|s| kernel_vector(&pencil.eval(*s))).collect();
    let cross = kernels
        .iter()
        .map(|e| {
            speeds
                .iter()
                .map(|s| {
                    let a = pencil.eval(*s);
                    let norm = a.norm();
                    if norm == 0.0 {
                        0.0
                    } else {
                        e.dot(&(a * e)) / norm
                    }
                })
                .collect()
        })
        .collect();
    Ok(BirefringentPolsum { speeds, cross })
}

fn kernel_vector(a: &Matrix3<f64>) -> Vector3<f64> {
    let svd = a.svd(false, true);
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, s)| if *s < best.1 { (i, *s) } else { best });
    let v_t = svd.v_t.expect("requested v_t");
    v_t.row(imin).transpose().into_owned()
}
