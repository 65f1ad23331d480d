//! Phase and group velocities and polarization vectors for photons in a
//! single effective metric.
//!
//! The closed-form functions take the plate vacuum `gamma = eta + xi n n`
//! with `n = z` and `k` in the xz-plane at angle `theta` from the normal.
//! [`MetricPropagation`] handles an arbitrary `gamma` and reduces to the
//! closed forms in that case.

use nalgebra::{Matrix3, Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::vacuum::EffectiveMetric;

/// Cone factors `1 + xi cos^2 theta` at or below this are degenerate.
pub const DEGENERATE_CONE_THRESHOLD: f64 = 1e-12;

/// Polarization normalizations at or below this are degenerate.
pub const DEGENERATE_NORMALIZATION_THRESHOLD: f64 = 1e-12;

fn cone_factor(xi: f64, theta: f64) -> Result<f64> {
    if !xi.is_finite() {
        return Err(Error::NonFinite("xi"));
    }
    if !theta.is_finite() {
        return Err(Error::NonFinite("theta"));
    }
    let f = 1.0 + xi * theta.cos().powi(2);
    if f <= DEGENERATE_CONE_THRESHOLD {
        return Err(Error::DegenerateCone(f));
    }
    Ok(f)
}

/// `sqrt(1 + xi cos^2 theta)`.
pub fn phase_velocity(xi: f64, theta: f64) -> Result<f64> {
    Ok(cone_factor(xi, theta)?.sqrt())
}

/// `N(theta) = sqrt(sin^2 theta + (1 + xi)^2 cos^2 theta)`.
pub fn normalization(xi: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    (s * s + (1.0 + xi).powi(2) * c * c).sqrt()
}

/// Group velocity vector `(sin theta, 0, (1 + xi) cos theta) / v_phase` and its norm.
pub fn group_velocity(xi: f64, theta: f64) -> Result<(Vector3<f64>, f64)> {
    let vp = phase_velocity(xi, theta)?;
    let (s, c) = theta.sin_cos();
    let v = Vector3::new(s, 0.0, (1.0 + xi) * c) / vp;
    Ok((v, normalization(xi, theta) / vp))
}

/// `(pol1, pol2, N(theta))`, with `pol1 = y` and `pol2` in the plane of incidence.
pub fn polarization_basis(xi: f64, theta: f64) -> Result<(Vector3<f64>, Vector3<f64>, f64)> {
    if !xi.is_finite() || !theta.is_finite() {
        return Err(Error::NonFinite("polarization_basis input"));
    }
    let n = normalization(xi, theta);
    if !(n > DEGENERATE_NORMALIZATION_THRESHOLD) {
        return Err(Error::DegenerateNormalization(n));
    }
    let (s, c) = theta.sin_cos();
    let pol2 = Vector3::new((1.0 + xi) * c, 0.0, -s) / n;
    Ok((Vector3::y(), pol2, n))
}

/// Angle between the group velocity and the plate normal.
pub fn ray_angle(xi: f64, theta: f64) -> Result<f64> {
    let (v, _) = group_velocity(xi, theta)?;
    Ok(v.x.atan2(v.z))
}

/// Rotates a vector about the plate normal `z` by `phi`.
pub fn rotate_azimuth(v: &Vector3<f64>, phi: f64) -> Vector3<f64> {
    Rotation3::from_axis_angle(&Vector3::z_axis(), phi) * v
}

/// Unit wave direction at polar angle `theta` in the xz-plane.
pub fn direction(theta: f64) -> Vector3<f64> {
    let (s, c) = theta.sin_cos();
    Vector3::new(s, 0.0, c)
}

/// `-(gamma k)^i (gamma k)^j` on shell for unit `|k|`; rank one.
pub fn reduced_on_shell_matrix(xi: f64, theta: f64) -> Result<Matrix3<f64>> {
    let vp = phase_velocity(xi, theta)?;
    let (v, _) = group_velocity(xi, theta)?;
    let w = v * vp;
    Ok(-(w * w.transpose()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationState {
    pub theta: f64,
    pub xi: f64,
    pub v_phase: f64,
    pub v_group_vec: Vector3<f64>,
    pub v_group: f64,
    pub pol1: Vector3<f64>,
    pub pol2: Vector3<f64>,
    pub n_theta: f64,
}

impl PropagationState {
    pub fn new(xi: f64, theta: f64) -> Result<Self> {
        let v_phase = phase_velocity(xi, theta)?;
        let (v_group_vec, v_group) = group_velocity(xi, theta)?;
        let (pol1, pol2, n_theta) = polarization_basis(xi, theta)?;
        Ok(Self {
            theta,
            xi,
            v_phase,
            v_group_vec,
            v_group,
            pol1,
            pol2,
            n_theta,
        })
    }

    pub fn ray_angle(&self) -> f64 {
        self.v_group_vec.x.atan2(self.v_group_vec.z)
    }
}

/// Forward-moving photon of a general effective metric along one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPropagation {
    pub direction: Vector3<f64>,
    pub v_phase: f64,
    pub v_group_vec: Vector3<f64>,
    pub pol1: Vector3<f64>,
    pub pol2: Vector3<f64>,
    /// Length of the unnormalized in-plane polarization; `N(theta)` for the plate vacuum.
    pub n_theta: f64,
}

impl MetricPropagation {
    /// Solves `gamma^{mu nu} k_mu k_nu = 0` with `k = (-s, khat)`, `s > 0`.
    pub fn new(metric: &EffectiveMetric, khat: &Vector3<f64>) -> Result<Self> {
        let g = metric.gamma();
        let mut b = 0.0;
        let mut c = 0.0;
        let mut gk = Vector3::<f64>::zeros();
        for i in 0..3 {
            b += g[(0, i + 1)] * khat[i];
            for j in 0..3 {
                c += g[(i + 1, j + 1)] * khat[i] * khat[j];
                gk[i] += g[(i + 1, j + 1)] * khat[j];
            }
        }
        let disc = b * b + c;
        if !(disc > DEGENERATE_CONE_THRESHOLD) {
            return Err(Error::DegenerateCone(disc));
        }
        let root = disc.sqrt();
        let s = -b + root;
        if !(s > 0.0) {
            return Err(Error::DegenerateCone(s));
        }
        // spatial part of (gamma k)^i, parallel to the group velocity
        let w = Vector3::new(
            -s * g[(1, 0)] + gk[0],
            -s * g[(2, 0)] + gk[1],
            -s * g[(3, 0)] + gk[2],
        );
        let v_group_vec = w / (s + b);
        let mut out_of_plane = Vector3::y().cross(&w);
        if out_of_plane.norm() <= 1e-12 * w.norm() {
            out_of_plane = Vector3::x().cross(&w);
        }
        let n_theta = out_of_plane.norm();
        if !(n_theta > DEGENERATE_NORMALIZATION_THRESHOLD) {
            return Err(Error::DegenerateNormalization(n_theta));
        }
        let pol2 = out_of_plane / n_theta;
        let pol1 = w.cross(&pol2).normalize();
        Ok(Self {
            direction: *khat,
            v_phase: s,
            v_group_vec,
            pol1,
            pol2,
            n_theta,
        })
    }

    pub fn v_group(&self) -> f64 {
        self.v_group_vec.norm()
    }

    pub fn ray_angle(&self) -> f64 {
        self.v_group_vec.x.atan2(self.v_group_vec.z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::FourVector;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn phase_velocity_examples() {
        assert_abs_diff_eq!(phase_velocity(0.7, PI / 2.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(phase_velocity(0.0, 0.4).unwrap(), 1.0);
        assert_abs_diff_eq!(phase_velocity(0.5, PI / 4.0).unwrap(), 1.25_f64.sqrt(), epsilon = 1e-15);
        assert!(matches!(phase_velocity(-1.0, 0.0), Err(Error::DegenerateCone(_))));
    }

    #[test]
    fn group_velocity_examples() {
        let (v, norm) = group_velocity(0.5, 0.0).unwrap();
        assert_abs_diff_eq!(v, Vector3::new(0.0, 0.0, 1.5_f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(norm, phase_velocity(0.5, 0.0).unwrap(), epsilon = 1e-15);
        let (v, norm) = group_velocity(0.5, PI / 4.0).unwrap();
        assert_abs_diff_eq!(norm, 1.3_f64.sqrt(), epsilon = 1e-15);
        assert!(v.normalize().dot(&direction(PI / 4.0)) < 1.0 - 1e-3);
    }

    #[test]
    fn polarization_examples() {
        let (p1, p2, n) = polarization_basis(0.5, 0.0).unwrap();
        assert_eq!(p1, Vector3::y());
        assert_abs_diff_eq!(p2, Vector3::x(), epsilon = 1e-15);
        assert_abs_diff_eq!(n, 1.5, epsilon = 1e-15);
        let (_, p2, _) = polarization_basis(0.5, PI / 2.0).unwrap();
        assert_abs_diff_eq!(p2, -Vector3::z(), epsilon = 1e-15);
        assert!(matches!(
            polarization_basis(-1.0, 0.0),
            Err(Error::DegenerateNormalization(_))
        ));
    }

    #[test]
    fn metric_propagation_matches_closed_form() {
        let xi = 0.5;
        let metric = EffectiveMetric::from_xi(xi, &FourVector::z_normal()).unwrap();
        for theta in [0.0, 0.2, PI / 4.0, 1.3, PI / 2.0] {
            let closed = PropagationState::new(xi, theta).unwrap();
            let general = MetricPropagation::new(&metric, &direction(theta)).unwrap();
            assert_abs_diff_eq!(general.v_phase, closed.v_phase, epsilon = 1e-14);
            assert_abs_diff_eq!(general.v_group_vec, closed.v_group_vec, epsilon = 1e-14);
            assert_abs_diff_eq!(general.pol1, closed.pol1, epsilon = 1e-14);
            assert_abs_diff_eq!(general.pol2, closed.pol2, epsilon = 1e-14);
            assert_abs_diff_eq!(general.n_theta, closed.n_theta, epsilon = 1e-14);
        }
    }

    #[test]
    fn azimuth_rotation() {
        let v = rotate_azimuth(&Vector3::x(), PI / 2.0);
        assert_abs_diff_eq!(v, Vector3::y(), epsilon = 1e-15);
    }
}
