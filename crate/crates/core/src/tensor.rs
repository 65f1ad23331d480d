//! Fixed-size Lorentzian tensor algebra.
//!
//! Index placement is explicit: [`FieldTensor`] stores `F_{mu nu}` (indices
//! down), [`RankFourTensor`] stores `T^{mu alpha nu beta}` (indices up), and
//! [`FourVector`] carries a variance flag. Indices are always raised and
//! lowered with the flat metric `eta = diag(-1, 1, 1, 1)`, even when an
//! effective metric is in play.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix4, Vector3};

use crate::error::{Error, Result};

/// Flat metric `eta_{mu nu}`; numerically identical to `eta^{mu nu}`.
pub fn minkowski() -> Matrix4<f64> {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

/// Diagonal entry of `eta`.
#[inline]
pub fn eta(mu: usize) -> f64 {
    if mu == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Sign of the permutation `(a, b, c, d)` of `(0, 1, 2, 3)`, zero otherwise.
fn permutation_sign(idx: [usize; 4]) -> f64 {
    let mut seen = [false; 4];
    for &i in &idx {
        if i > 3 || seen[i] {
            return 0.0;
        }
        seen[i] = true;
    }
    let mut sign = 1.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            if idx[i] > idx[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// `eps_{abcd}` with `eps_{0123} = +1`.
pub fn levi_civita_lower(a: usize, b: usize, c: usize, d: usize) -> f64 {
    permutation_sign([a, b, c, d])
}

/// `eps^{abcd}`; raising all four indices with `eta` flips the sign, so `eps^{0123} = -1`.
pub fn levi_civita_upper(a: usize, b: usize, c: usize, d: usize) -> f64 {
    -permutation_sign([a, b, c, d])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variance {
    /// Index up (`v^mu`).
    Contravariant,
    /// Index down (`k_mu`), e.g. a wave covector.
    Covariant,
}

/// Components `(t, x, y, z)` with an explicit index position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourVector {
    components: [f64; 4],
    variance: Variance,
}

impl FourVector {
    pub fn new(components: [f64; 4], variance: Variance) -> Self {
        Self {
            components,
            variance,
        }
    }

    pub fn vector(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self::new([t, x, y, z], Variance::Contravariant)
    }

    pub fn covector(t: f64, x: f64, y: f64, z: f64) -> Self {
        Self::new([t, x, y, z], Variance::Covariant)
    }

    /// Purely spatial vector `(0, v)`.
    pub fn spatial(v: Vector3<f64>) -> Self {
        Self::vector(0.0, v.x, v.y, v.z)
    }

    /// Unit plate normal along `z`.
    pub fn z_normal() -> Self {
        Self::vector(0.0, 0.0, 0.0, 1.0)
    }

    /// Wave covector `k_mu = (-omega, k)`.
    pub fn wave(omega: f64, k: Vector3<f64>) -> Self {
        Self::covector(-omega, k.x, k.y, k.z)
    }

    pub fn components(&self) -> [f64; 4] {
        self.components
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }

    fn flipped(&self, variance: Variance) -> Self {
        let c = self.components;
        Self::new([-c[0], c[1], c[2], c[3]], variance)
    }

    /// Components with the index up.
    pub fn raised(&self) -> Self {
        match self.variance {
            Variance::Contravariant => *self,
            Variance::Covariant => self.flipped(Variance::Contravariant),
        }
    }

    /// Components with the index down.
    pub fn lowered(&self) -> Self {
        match self.variance {
            Variance::Covariant => *self,
            Variance::Contravariant => self.flipped(Variance::Covariant),
        }
    }

    pub fn upper(&self) -> [f64; 4] {
        self.raised().components
    }

    pub fn lower(&self) -> [f64; 4] {
        self.lowered().components
    }

    /// Spatial part `(x, y, z)` of the stored components.
    pub fn space(&self) -> Vector3<f64> {
        Vector3::new(self.components[1], self.components[2], self.components[3])
    }

    pub fn time(&self) -> f64 {
        self.components[0]
    }

    /// Minkowski inner product, independent of the stored variance.
    pub fn dot(&self, other: &FourVector) -> f64 {
        let a = self.upper();
        let b = other.lower();
        a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let c = self.components;
        Self::new([s * c[0], s * c[1], s * c[2], s * c[3]], self.variance)
    }

    /// Fails unless `n.n = +1` within `1e-12`.
    pub fn require_unit_spacelike(&self) -> Result<()> {
        let nn = self.norm_sq();
        if !nn.is_finite() || (nn - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnitNormal(nn));
        }
        Ok(())
    }
}

/// Antisymmetric field tensor `F_{mu nu}` (indices down).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldTensor {
    lower: Matrix4<f64>,
}

impl FieldTensor {
    pub fn zero() -> Self {
        Self {
            lower: Matrix4::zeros(),
        }
    }

    /// `F_{0i} = E_i`, `F_{ij} = eps_{ijk} B_k`.
    pub fn from_fields(e: Vector3<f64>, b: Vector3<f64>) -> Self {
        let mut f = Matrix4::zeros();
        for i in 0..3 {
            f[(0, i + 1)] = e[i];
            f[(i + 1, 0)] = -e[i];
        }
        f[(1, 2)] = b.z;
        f[(2, 1)] = -b.z;
        f[(2, 3)] = b.x;
        f[(3, 2)] = -b.x;
        f[(3, 1)] = b.y;
        f[(1, 3)] = -b.y;
        Self { lower: f }
    }

    /// Accepts lower-index components; antisymmetry must hold to `1e-14` relative.
    pub fn from_lower(lower: Matrix4<f64>) -> Result<Self> {
        if lower.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("field tensor"));
        }
        let dev = (lower + lower.transpose()).amax();
        if dev > 1e-14 * lower.amax().max(1.0) {
            return Err(Error::NotAntisymmetric(dev));
        }
        Ok(Self {
            lower: 0.5 * (lower - lower.transpose()),
        })
    }

    pub fn lower(&self) -> &Matrix4<f64> {
        &self.lower
    }

    /// `F^{mu nu} = eta F eta`.
    pub fn upper(&self) -> Matrix4<f64> {
        let eta = minkowski();
        eta * self.lower * eta
    }

    pub fn electric(&self) -> Vector3<f64> {
        Vector3::new(self.lower[(0, 1)], self.lower[(0, 2)], self.lower[(0, 3)])
    }

    pub fn magnetic(&self) -> Vector3<f64> {
        Vector3::new(self.lower[(2, 3)], self.lower[(3, 1)], self.lower[(1, 2)])
    }

    /// Hodge dual, returned with indices down.
    ///
    /// `*F^{mu nu} = 1/2 eps^{mu nu rho sigma} F_{rho sigma}`; in components this
    /// maps `(E, B)` to `(B, -E)`.
    pub fn dual(&self) -> FieldTensor {
        let mut dual_upper = Matrix4::zeros();
        for mu in 0..4 {
            for nu in 0..4 {
                let mut s = 0.0;
                for rho in 0..4 {
                    for sigma in 0..4 {
                        s += levi_civita_upper(mu, nu, rho, sigma) * self.lower[(rho, sigma)];
                    }
                }
                dual_upper[(mu, nu)] = 0.5 * s;
            }
        }
        let eta = minkowski();
        FieldTensor {
            lower: eta * dual_upper * eta,
        }
    }

    /// Applies a Lorentz transformation given as `Lambda^mu_nu` acting on vectors.
    /// Lower indices transform with the inverse transpose.
    pub fn transformed(&self, lambda: &Matrix4<f64>) -> Option<FieldTensor> {
        let inv = lambda.try_inverse()?;
        Some(FieldTensor {
            lower: inv.transpose() * self.lower * inv,
        })
    }
}

impl Add for FieldTensor {
    type Output = FieldTensor;
    fn add(self, rhs: FieldTensor) -> FieldTensor {
        FieldTensor {
            lower: self.lower + rhs.lower,
        }
    }
}

impl Mul<f64> for FieldTensor {
    type Output = FieldTensor;
    fn mul(self, s: f64) -> FieldTensor {
        FieldTensor {
            lower: self.lower * s,
        }
    }
}

/// `hodge_dual` as a free function.
pub fn hodge_dual(f: &FieldTensor) -> FieldTensor {
    f.dual()
}

/// The scalar invariants of a field tensor relative to a plate normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    /// `1/4 F_{mu nu} F^{mu nu} = (B^2 - E^2) / 2`.
    pub f_inv: f64,
    /// `1/4 F_{mu nu} *F^{mu nu} = -E.B`.
    pub g_inv: f64,
    /// `n^mu F_{mu sigma} F^{sigma nu} n_nu = (E.n)^2 - |n x B|^2`.
    pub h_inv: f64,
}

impl Invariants {
    /// Three-vector evaluation; `n` is a spatial unit vector.
    pub fn from_fields(e: Vector3<f64>, b: Vector3<f64>, n: Vector3<f64>) -> Self {
        Self {
            f_inv: 0.5 * (b.norm_squared() - e.norm_squared()),
            g_inv: -e.dot(&b),
            h_inv: e.dot(&n).powi(2) - n.cross(&b).norm_squared(),
        }
    }
}

/// `F = 1/4 F_{mu nu} F^{mu nu}`.
pub fn f_invariant(f: &FieldTensor) -> f64 {
    0.25 * f.lower().component_mul(&f.upper()).sum()
}

/// `G = 1/4 F_{mu nu} *F^{mu nu}`.
pub fn g_invariant(f: &FieldTensor) -> f64 {
    0.25 * f.lower().component_mul(&f.dual().upper()).sum()
}

/// Tensor-contraction evaluation of `(F, G, H)`.
pub fn invariants(f: &FieldTensor, n: &FourVector) -> Result<Invariants> {
    n.require_unit_spacelike()?;
    let n_up = n.upper();
    let eta = minkowski();
    // n^mu F_{mu sigma} eta^{sigma alpha} F_{alpha beta} n^beta
    let chain = f.lower() * eta * f.lower();
    let mut h = 0.0;
    for mu in 0..4 {
        for beta in 0..4 {
            h += n_up[mu] * chain[(mu, beta)] * n_up[beta];
        }
    }
    Ok(Invariants {
        f_inv: f_invariant(f),
        g_inv: g_invariant(f),
        h_inv: h,
    })
}

/// Which of the three tensor symmetries a check refers to.
const PAIR_SYMMETRIES: [&str; 3] = [
    "antisymmetry in the first pair",
    "antisymmetry in the second pair",
    "pair exchange",
];

#[inline]
fn idx(a: usize, b: usize, c: usize, d: usize) -> usize {
    ((a * 4 + b) * 4 + c) * 4 + d
}

/// `T^{mu alpha nu beta}` with `T^{mu alpha nu beta} = T^{nu beta mu alpha}` and
/// antisymmetry within each index pair.
///
/// Storage is the dense 4^4 array; construction validates the symmetry class.
#[derive(Clone, PartialEq)]
pub struct RankFourTensor {
    c: Box<[f64; 256]>,
}

impl std::fmt::Debug for RankFourTensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RankFourTensor")
            .field("max_abs", &self.max_abs())
            .finish_non_exhaustive()
    }
}

impl RankFourTensor {
    pub fn zero() -> Self {
        Self {
            c: Box::new([0.0; 256]),
        }
    }

    fn from_fn_unchecked(mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut c = Box::new([0.0; 256]);
        for a in 0..4 {
            for b in 0..4 {
                for cc in 0..4 {
                    for d in 0..4 {
                        c[idx(a, b, cc, d)] = f(a, b, cc, d);
                    }
                }
            }
        }
        Self { c }
    }

    /// Builds from a component function and rejects anything outside the
    /// symmetry class (tolerance `1e-14` scaled by the largest component).
    pub fn from_fn(f: impl FnMut(usize, usize, usize, usize) -> f64) -> Result<Self> {
        let t = Self::from_fn_unchecked(f);
        t.validate()?;
        Ok(t)
    }

    /// Projects arbitrary components onto the symmetry class by averaging over
    /// the 8-element group generated by the three symmetries.
    pub fn symmetrized(f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let raw = Self::from_fn_unchecked(f);
        Self::from_fn_unchecked(|a, b, c, d| {
            let r = |i, j, k, l| raw.c[idx(i, j, k, l)];
            (r(a, b, c, d) - r(b, a, c, d) - r(a, b, d, c) + r(b, a, d, c) + r(c, d, a, b)
                - r(d, c, a, b)
                - r(c, d, b, a)
                + r(d, c, b, a))
                / 8.0
        })
    }

    /// `d1 (eta^{mu nu} eta^{alpha beta} - eta^{mu beta} eta^{alpha nu})` in
    /// `(mu alpha nu beta)` order.
    pub fn isotropic(d1: f64) -> Self {
        let eta = minkowski();
        Self::from_metric_pair(d1, &eta)
    }

    /// `lambda (g^{mu nu} g^{alpha beta} - g^{mu beta} g^{alpha nu})` for a
    /// symmetric contravariant `g`.
    pub fn from_metric_pair(lambda: f64, g: &Matrix4<f64>) -> Self {
        Self::from_fn_unchecked(|a, b, c, d| {
            lambda * (g[(a, c)] * g[(b, d)] - g[(a, d)] * g[(b, c)])
        })
    }

    /// `coeff * eps^{abcd}`.
    pub fn levi_civita(coeff: f64) -> Self {
        Self::from_fn_unchecked(|a, b, c, d| coeff * levi_civita_upper(a, b, c, d))
    }

    /// `coeff / 2 (X^{ab} Y^{cd} + Y^{ab} X^{cd})` for antisymmetric
    /// contravariant `X`, `Y`. Passing `x == y` gives `coeff X X`.
    pub fn symmetric_outer(coeff: f64, x: &Matrix4<f64>, y: &Matrix4<f64>) -> Self {
        Self::from_fn_unchecked(|a, b, c, d| {
            coeff * 0.5 * (x[(a, b)] * y[(c, d)] + y[(a, b)] * x[(c, d)])
        })
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.c[idx(a, b, c, d)]
    }

    pub fn components(&self) -> &[f64; 256] {
        &self.c
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    /// Largest violation of each symmetry, in [`PAIR_SYMMETRIES`] order.
    pub fn symmetry_deviations(&self) -> [f64; 3] {
        let mut dev = [0.0_f64; 3];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let t = self.get(a, b, c, d);
                        dev[0] = dev[0].max((t + self.get(b, a, c, d)).abs());
                        dev[1] = dev[1].max((t + self.get(a, b, d, c)).abs());
                        dev[2] = dev[2].max((t - self.get(c, d, a, b)).abs());
                    }
                }
            }
        }
        dev
    }

    pub fn validate(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::NonFinite("rank-4 tensor"));
        }
        let tolerance = 1e-14 * self.max_abs();
        for (deviation, symmetry) in self.symmetry_deviations().into_iter().zip(PAIR_SYMMETRIES) {
            if deviation > tolerance {
                return Err(Error::SymmetryViolation {
                    symmetry,
                    deviation,
                    tolerance,
                });
            }
        }
        Ok(())
    }

    /// `T^{mu alpha nu beta} S_{alpha beta}` for a covariant rank-2 `S`.
    pub fn contract_pair(&self, s: &Matrix4<f64>) -> Matrix4<f64> {
        let mut out = Matrix4::zeros();
        for a in 0..4 {
            for c in 0..4 {
                let mut acc = 0.0;
                for b in 0..4 {
                    for d in 0..4 {
                        acc += self.get(a, b, c, d) * s[(b, d)];
                    }
                }
                out[(a, c)] = acc;
            }
        }
        out
    }

    /// `T^{mu alpha nu beta} k_alpha k_beta` for covariant components `k`.
    pub fn contract_wave(&self, k: &[f64; 4]) -> Matrix4<f64> {
        let mut out = Matrix4::zeros();
        for a in 0..4 {
            for c in 0..4 {
                let mut acc = 0.0;
                for b in 0..4 {
                    for d in 0..4 {
                        acc += self.get(a, b, c, d) * k[b] * k[d];
                    }
                }
                out[(a, c)] = acc;
            }
        }
        out
    }

    /// Euclidean (component-wise) inner product.
    pub fn frobenius_dot(&self, other: &RankFourTensor) -> f64 {
        self.c.iter().zip(other.c.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_dot(self).sqrt()
    }

    /// Full trace `T^{mu nu}_{mu nu}`.
    pub fn full_trace(&self) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                s += eta(a) * eta(b) * self.get(a, b, a, b);
            }
        }
        s
    }

    /// `T^{mu nu}_{alpha nu} n_mu n^alpha` for a vector `n`.
    pub fn normal_trace(&self, n: &FourVector) -> f64 {
        let nl = n.lower();
        let mut s = 0.0;
        for a in 0..4 {
            for c in 0..4 {
                for b in 0..4 {
                    s += nl[a] * nl[c] * eta(b) * self.get(a, b, c, b);
                }
            }
        }
        s
    }

    /// Coefficient `c` of the totally antisymmetric part `c eps^{abcd}`.
    pub fn levi_civita_coefficient(&self) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        s += levi_civita_upper(a, b, c, d) * self.get(a, b, c, d);
                    }
                }
            }
        }
        s / 24.0
    }

    /// The tensor with its totally antisymmetric part removed.
    pub fn without_levi_civita(&self) -> RankFourTensor {
        self - &RankFourTensor::levi_civita(self.levi_civita_coefficient())
    }

    /// Applies `Lambda^mu_nu` to every index.
    pub fn transformed(&self, lambda: &Matrix4<f64>) -> RankFourTensor {
        // one index at a time keeps this at 4 * 4^5 operations
        let mut cur = self.clone();
        for slot in 0..4 {
            let src = cur.clone();
            cur = Self::from_fn_unchecked(|a, b, c, d| {
                let mut idx4 = [a, b, c, d];
                let target = idx4[slot];
                let mut acc = 0.0;
                for m in 0..4 {
                    idx4[slot] = m;
                    acc += lambda[(target, m)] * src.get(idx4[0], idx4[1], idx4[2], idx4[3]);
                }
                acc
            });
        }
        cur
    }
}

impl Add for &RankFourTensor {
    type Output = RankFourTensor;
    fn add(self, rhs: &RankFourTensor) -> RankFourTensor {
        RankFourTensor::from_fn_unchecked(|a, b, c, d| self.get(a, b, c, d) + rhs.get(a, b, c, d))
    }
}

impl Add for RankFourTensor {
    type Output = RankFourTensor;
    fn add(self, rhs: RankFourTensor) -> RankFourTensor {
        &self + &rhs
    }
}

impl Sub for &RankFourTensor {
    type Output = RankFourTensor;
    fn sub(self, rhs: &RankFourTensor) -> RankFourTensor {
        RankFourTensor::from_fn_unchecked(|a, b, c, d| self.get(a, b, c, d) - rhs.get(a, b, c, d))
    }
}

impl Sub for RankFourTensor {
    type Output = RankFourTensor;
    fn sub(self, rhs: RankFourTensor) -> RankFourTensor {
        &self - &rhs
    }
}

impl Mul<f64> for &RankFourTensor {
    type Output = RankFourTensor;
    fn mul(self, s: f64) -> RankFourTensor {
        RankFourTensor::from_fn_unchecked(|a, b, c, d| s * self.get(a, b, c, d))
    }
}

impl Mul<f64> for RankFourTensor {
    type Output = RankFourTensor;
    fn mul(self, s: f64) -> RankFourTensor {
        &self * s
    }
}

impl Neg for RankFourTensor {
    type Output = RankFourTensor;
    fn neg(self) -> RankFourTensor {
        &self * -1.0
    }
}

/// Boost along a spatial direction with the given rapidity, as `Lambda^mu_nu`.
pub fn boost(direction: Vector3<f64>, rapidity: f64) -> Matrix4<f64> {
    let n = direction.normalize();
    let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
    let mut l = Matrix4::identity();
    l[(0, 0)] = ch;
    for i in 0..3 {
        l[(0, i + 1)] = -sh * n[i];
        l[(i + 1, 0)] = -sh * n[i];
        for j in 0..3 {
            l[(i + 1, j + 1)] += (ch - 1.0) * n[i] * n[j];
        }
    }
    l
}

/// Spatial rotation by `angle` about `axis`, as `Lambda^mu_nu`.
pub fn rotation(axis: Vector3<f64>, angle: f64) -> Matrix4<f64> {
    let r = nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(axis), angle);
    let mut l = Matrix4::identity();
    l.fixed_view_mut::<3, 3>(1, 1).copy_from(r.matrix());
    l
}
