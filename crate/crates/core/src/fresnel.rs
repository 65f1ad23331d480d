//! Wave matrix, Fresnel quartic, birefringence detection and effective-metric fits.
//!
//! For a wave covector `k = (-omega, k)` the photon equation is
//! `A^{mu nu}(k) a_nu = 0` with `A^{mu nu} = Omega^{mu alpha nu beta} k_alpha k_beta`.
//! In temporal gauge only the spatial block survives; its determinant is
//! `omega^2 P4(omega, k)` and the roots of `P4` are the phase speeds.
//!
//! Roots are taken from the block companion linearization of the 3x3 matrix
//! polynomial `A^{ij}(omega) = D + omega B + omega^2 C`, not from the scalar
//! companion of `P4`. Both have the same spectrum, but a double root with two
//! independent polarizations is a semisimple eigenvalue of the block form and
//! comes back accurate to rounding, whereas the scalar companion splits it at
//! the `sqrt(eps)` level.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix, DVector, Matrix3, Matrix4, SMatrix, Vector3};

use crate::error::{Error, Result};
use crate::poly::{det3, Polynomial};
use crate::tensor::{FourVector, RankFourTensor};
use crate::vacuum::EffectiveMetric;

/// Roots closer than `ROOT_MERGE_TOLERANCE * (1 + |s|)` count as one.
pub const ROOT_MERGE_TOLERANCE: f64 = 1e-9;

/// A root is real when `|Im s| <= REAL_ROOT_TOLERANCE * (1 + |s|)`.
pub const REAL_ROOT_TOLERANCE: f64 = 1e-9;

/// The two lowest determinant coefficients must stay below this times the scale.
pub const OMEGA_SQUARED_TOLERANCE: f64 = 1e-10;

/// Leading `P4` coefficient below this times the scale means no propagating mode.
pub const DEGENERATE_LEADING_TOLERANCE: f64 = 1e-12;

/// Maximum RMS residual for a single-quadratic-form fit.
pub const FIT_RESIDUAL_TOLERANCE: f64 = 1e-8;

/// `A^{mu nu}(k)` for one wave covector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveMatrix {
    a: Matrix4<f64>,
    k: FourVector,
}

impl WaveMatrix {
    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.a
    }

    /// The covector the matrix was built from, index down.
    pub fn k(&self) -> FourVector {
        self.k
    }

    /// `|A^{mu nu} k_nu| / |A|`, zero up to rounding for every `Omega`.
    pub fn gauge_residual(&self) -> f64 {
        let k = nalgebra::Vector4::from(self.k.lower());
        let scale = self.a.amax() * k.amax();
        if scale == 0.0 {
            return 0.0;
        }
        (self.a * k).amax() / scale
    }
}

/// `A^{mu nu} = Omega^{mu alpha nu beta} k_alpha k_beta`, with the totally
/// antisymmetric part of `Omega` dropped.
pub fn build_wave_matrix(omega: &RankFourTensor, k: &FourVector) -> WaveMatrix {
    let k = k.lowered();
    WaveMatrix {
        a: omega.without_levi_civita().contract_wave(&k.components()),
        k,
    }
}

/// Temporal gauge `a_0 = 0`: the spatial block `A^{ij}` and the row `A^{0i}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalReduction {
    pub spatial: Matrix3<f64>,
    pub constraint: Vector3<f64>,
}

pub fn temporal_gauge_reduce(w: &WaveMatrix) -> TemporalReduction {
    TemporalReduction {
        spatial: w.a.fixed_view::<3, 3>(1, 1).into_owned(),
        constraint: Vector3::new(w.a[(0, 1)], w.a[(0, 2)], w.a[(0, 3)]),
    }
}

/// Number of singular values of `m` at or below `rel_tol * sigma_max`.
pub fn kernel_dimension(m: &Matrix3<f64>, rel_tol: f64) -> usize {
    let sv = m.singular_values();
    let max = sv.max();
    if max == 0.0 {
        return 3;
    }
    sv.iter().filter(|s| **s <= rel_tol * max).count()
}

/// `A^{ij}(omega) = d + omega b + omega^2 c` at fixed unit spatial direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialPencil {
    pub c: Matrix3<f64>,
    pub b: Matrix3<f64>,
    pub d: Matrix3<f64>,
}

impl SpatialPencil {
    pub fn new(omega: &RankFourTensor, khat: &Vector3<f64>) -> Self {
        let t = omega.without_levi_civita();
        let mut c = Matrix3::zeros();
        let mut b = Matrix3::zeros();
        let mut d = Matrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let (mi, mj) = (i + 1, j + 1);
                c[(i, j)] = t.get(mi, 0, mj, 0);
                let mut lin = 0.0;
                let mut quad = 0.0;
                for m in 0..3 {
                    lin -= (t.get(mi, 0, mj, m + 1) + t.get(mi, m + 1, mj, 0)) * khat[m];
                    for n in 0..3 {
                        quad += t.get(mi, m + 1, mj, n + 1) * khat[m] * khat[n];
                    }
                }
                b[(i, j)] = lin;
                d[(i, j)] = quad;
            }
        }
        Self { c, b, d }
    }

    pub fn eval(&self, omega: f64) -> Matrix3<f64> {
        self.d + self.b * omega + self.c * (omega * omega)
    }

    /// `det A^{ij}(omega)` as a degree-6 polynomial in `omega`.
    pub fn determinant(&self) -> Polynomial {
        let entry = |i: usize, j: usize| {
            Polynomial::new(vec![self.d[(i, j)], self.b[(i, j)], self.c[(i, j)]])
        };
        let m = [
            [entry(0, 0), entry(0, 1), entry(0, 2)],
            [entry(1, 0), entry(1, 1), entry(1, 2)],
            [entry(2, 0), entry(2, 1), entry(2, 2)],
        ];
        det3(&m)
    }

    /// The six eigenvalues of the block companion matrix
    /// `[[0, I], [-C^-1 D, -C^-1 B]]`.
    fn eigenvalues(&self) -> Option<Vec<Complex<f64>>> {
        let cinv = self.c.try_inverse()?;
        let lower_left = -(cinv * self.d);
        let lower_right = -(cinv * self.b);
        let mut l = SMatrix::<f64, 6, 6>::zeros();
        l.fixed_view_mut::<3, 3>(0, 3).copy_from(&Matrix3::identity());
        l.fixed_view_mut::<3, 3>(3, 0).copy_from(&lower_left);
        l.fixed_view_mut::<3, 3>(3, 3).copy_from(&lower_right);
        crate::poly::eigenvalues(DMatrix::from_iterator(6, 6, l.iter().copied()))
    }
}

/// `P4` along one direction, in `s = omega / |k|`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarticDispersion {
    pub direction: Vector3<f64>,
    /// `q0 .. q4`, ascending.
    pub coefficients: [f64; 5],
    /// The full `det A^{ij}` coefficients `p0 .. p6`; `p0`, `p1` vanish.
    pub determinant: [f64; 7],
    /// Four roots of `P4`, ordered by decreasing real part.
    pub roots: Vec<Complex<f64>>,
}

impl QuarticDispersion {
    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(self.coefficients.to_vec())
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.polynomial().eval(s)
    }

    pub fn scale(&self) -> f64 {
        self.coefficients.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Scalar companion-matrix roots of `P4`, for comparison.
    pub fn companion_roots(&self) -> Vec<Complex<f64>> {
        self.polynomial().companion_roots()
    }

    /// Real parts of the roots that are real within [`REAL_ROOT_TOLERANCE`],
    /// descending.
    pub fn real_roots(&self) -> Vec<f64> {
        self.roots
            .iter()
            .filter(|z| z.im.abs() <= REAL_ROOT_TOLERANCE * (1.0 + z.re.abs()))
            .map(|z| z.re)
            .collect()
    }

    /// Roots with near-coincident pairs merged into their mean.
    pub fn distinct_roots(&self) -> Vec<Complex<f64>> {
        let mut out: Vec<(Complex<f64>, usize)> = Vec::new();
        for z in &self.roots {
            match out
                .iter_mut()
                .find(|(w, _)| (*w - z).norm() <= ROOT_MERGE_TOLERANCE * (1.0 + z.norm()))
            {
                Some((w, count)) => {
                    *w = (*w * (*count as f64) + z) / (*count as f64 + 1.0);
                    *count += 1;
                }
                None => out.push((*z, 1)),
            }
        }
        out.into_iter().map(|(z, _)| z).collect()
    }

    /// The two largest real non-negative roots `(s1, s2)`, `s1 >= s2`.
    pub fn propagating_speeds(&self) -> Option<(f64, f64)> {
        let nonneg: Vec<f64> = self
            .real_roots()
            .into_iter()
            .filter(|s| *s >= -REAL_ROOT_TOLERANCE)
            .map(|s| s.max(0.0))
            .collect();
        match nonneg.as_slice() {
            [s1, s2, ..] => Some((*s1, *s2)),
            _ => None,
        }
    }
}

fn require_unit(khat: &Vector3<f64>) -> Result<()> {
    let n = khat.norm();
    if !n.is_finite() || (n - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter {
            name: "khat",
            reason: format!("direction must be a unit vector, |khat| = {n}"),
        });
    }
    Ok(())
}

/// Fresnel quartic and phase speeds along `khat`.
pub fn fresnel_quartic(omega: &RankFourTensor, khat: &Vector3<f64>) -> Result<QuarticDispersion> {
    require_unit(khat)?;
    let direction = [khat.x, khat.y, khat.z];
    let pencil = SpatialPencil::new(omega, khat);
    let det = pencil.determinant();
    let p: [f64; 7] = std::array::from_fn(|i| det.coeff(i));
    let scale = p.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::OmegaDegenerate {
            direction,
            leading: p[6],
            threshold: 0.0,
        });
    }
    let threshold = OMEGA_SQUARED_TOLERANCE * scale;
    if p[0].abs() > threshold || p[1].abs() > threshold {
        return Err(Error::MissingOmegaSquaredFactor {
            c0: p[0],
            c1: p[1],
            threshold,
        });
    }
    let coefficients = [p[2], p[3], p[4], p[5], p[6]];
    let leading_threshold = DEGENERATE_LEADING_TOLERANCE * scale;
    if p[6].abs() < leading_threshold {
        return Err(Error::OmegaDegenerate {
            direction,
            leading: p[6],
            threshold: leading_threshold,
        });
    }

    let mut eig = pencil.eigenvalues().ok_or(Error::OmegaDegenerate {
        direction,
        leading: p[6],
        threshold: leading_threshold,
    })?;
    // the two gauge modes sit at omega = 0
    eig.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    let mut roots: Vec<Complex<f64>> = eig.into_iter().skip(2).collect();
    polish_isolated(&Polynomial::new(coefficients.to_vec()), &mut roots);
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));

    Ok(QuarticDispersion {
        direction: *khat,
        coefficients,
        determinant: p,
        roots,
    })
}

/// Newton steps on `P4` for roots well away from every other root; clustered
/// roots keep their eigenvalue estimates.
fn polish_isolated(p: &Polynomial, roots: &mut [Complex<f64>]) {
    let dp = p.derivative();
    let snapshot = roots.to_vec();
    for (i, z) in roots.iter_mut().enumerate() {
        let isolated = snapshot
            .iter()
            .enumerate()
            .all(|(j, w)| j == i || (*w - *z).norm() > 1e-6 * (1.0 + z.norm()));
        if !isolated {
            continue;
        }
        let mut val = p.eval_complex(*z).norm();
        for _ in 0..4 {
            let d = dp.eval_complex(*z);
            if d.norm() == 0.0 {
                break;
            }
            let next = *z - p.eval_complex(*z) / d;
            let next_val = p.eval_complex(next).norm();
            if !(next_val < val) {
                break;
            }
            *z = next;
            val = next_val;
        }
        if z.im.abs() <= f64::EPSILON * z.re.abs() {
            z.im = 0.0;
        }
    }
}

/// Deterministic, roughly uniform directions on the unit sphere.
pub fn fibonacci_sphere(n: usize) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5.0_f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Vector3::new(r * phi.cos(), r * phi.sin(), z)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectionRecord {
    /// Polar angle from `z`.
    pub theta: f64,
    pub phi: f64,
    pub fast: f64,
    pub slow: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BirefringenceReport {
    pub records: Vec<DirectionRecord>,
    pub birefringent: bool,
    pub max_gap: f64,
    pub tolerance: f64,
    /// Present when the media is not birefringent and a single quadratic form fits.
    pub metric: Option<MetricFit>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricFit {
    pub metric: EffectiveMetric,
    pub residual_rms: f64,
    pub samples: usize,
}

struct Sample {
    khat: Vector3<f64>,
    fast: f64,
    slow: f64,
}

fn sample_directions(omega: &RankFourTensor, n_dirs: usize) -> Result<Vec<Sample>> {
    fibonacci_sphere(n_dirs)
        .into_iter()
        .map(|khat| {
            let q = fresnel_quartic(omega, &khat)?;
            let (fast, slow) = q.propagating_speeds().ok_or(Error::NonPropagating {
                direction: [khat.x, khat.y, khat.z],
            })?;
            Ok(Sample { khat, fast, slow })
        })
        .collect()
}

/// Samples `n_dirs` directions and flags birefringence when any root gap
/// exceeds `tol * max(1, s1)`.
pub fn detect_birefringence(omega: &RankFourTensor, n_dirs: usize, tol: f64) -> Result<BirefringenceReport> {
    if n_dirs < 16 {
        return Err(Error::InvalidParameter {
            name: "n_dirs",
            reason: format!("need at least 16 directions, got {n_dirs}"),
        });
    }
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "tol",
            reason: format!("must be finite and non-negative, got {tol}"),
        });
    }
    let samples = sample_directions(omega, n_dirs)?;
    let records: Vec<DirectionRecord> = samples
        .iter()
        .map(|s| DirectionRecord {
            theta: s.khat.z.clamp(-1.0, 1.0).acos(),
            phi: s.khat.y.atan2(s.khat.x),
            fast: s.fast,
            slow: s.slow,
            gap: s.fast - s.slow,
        })
        .collect();
    let birefringent = records.iter().any(|r| r.gap > tol * r.fast.max(1.0));
    let max_gap = records.iter().fold(0.0_f64, |m, r| m.max(r.gap));
    let metric = if birefringent {
        None
    } else {
        fit_samples(&samples).ok()
    };
    Ok(BirefringenceReport {
        records,
        birefringent,
        max_gap,
        tolerance: tol,
        metric,
    })
}

/// Least-squares `gamma^{mu nu} k_mu k_nu = 0` over null covectors
/// `k = (-s, khat)`, with `gamma^{00} = -1`.
pub fn fit_effective_metric(omega: &RankFourTensor, n_dirs: usize) -> Result<MetricFit> {
    if n_dirs < 10 {
        return Err(Error::FitUnderdetermined(n_dirs));
    }
    fit_samples(&sample_directions(omega, n_dirs)?)
}

fn fit_samples(samples: &[Sample]) -> Result<MetricFit> {
    let covectors: Vec<[f64; 4]> = samples
        .iter()
        .flat_map(|s| {
            [s.fast, s.slow]
                .into_iter()
                .map(move |speed| [-speed, s.khat.x, s.khat.y, s.khat.z])
        })
        .collect();
    fit_null_covectors(&covectors)
}

/// Fits the 9 free components of `gamma` (with `gamma^{00} = -1`) to covectors
/// that should be null.
pub fn fit_null_covectors(covectors: &[[f64; 4]]) -> Result<MetricFit> {
    let rows = covectors.len();
    if rows < 10 {
        return Err(Error::FitUnderdetermined(rows));
    }
    // unknowns: g01 g02 g03 g11 g12 g13 g22 g23 g33
    let mut a = DMatrix::<f64>::zeros(rows, 9);
    let mut rhs = DVector::<f64>::zeros(rows);
    for (r, k) in covectors.iter().enumerate() {
        let row = [
            2.0 * k[0] * k[1],
            2.0 * k[0] * k[2],
            2.0 * k[0] * k[3],
            k[1] * k[1],
            2.0 * k[1] * k[2],
            2.0 * k[1] * k[3],
            k[2] * k[2],
            2.0 * k[2] * k[3],
            k[3] * k[3],
        ];
        for (c, v) in row.into_iter().enumerate() {
            a[(r, c)] = v;
        }
        rhs[r] = k[0] * k[0];
    }
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&rhs, 1e-14)
        .map_err(|_| Error::FitUnderdetermined(rows))?;
    let residual = &a * &x - &rhs;
    let residual_rms = (residual.norm_squared() / rows as f64).sqrt();
    if !(residual_rms <= FIT_RESIDUAL_TOLERANCE) {
        return Err(Error::FitInconsistent(residual_rms));
    }
    let mut gamma = Matrix4::zeros();
    gamma[(0, 0)] = -1.0;
    let sym = [
        (0, 1, x[0]),
        (0, 2, x[1]),
        (0, 3, x[2]),
        (1, 1, x[3]),
        (1, 2, x[4]),
        (1, 3, x[5]),
        (2, 2, x[6]),
        (2, 3, x[7]),
        (3, 3, x[8]),
    ];
    for (i, j, v) in sym {
        gamma[(i, j)] = v;
        gamma[(j, i)] = v;
    }
    Ok(MetricFit {
        metric: EffectiveMetric::from_gamma(gamma)?,
        residual_rms,
        samples: rows,
    })
}

/// `Q(s) = gamma^{mu nu} k_mu k_nu` at `k = (-s, khat)`, ascending in `s`.
pub fn metric_dispersion(metric: &EffectiveMetric, khat: &Vector3<f64>) -> [f64; 3] {
    let g = metric.gamma();
    let mut mixed = 0.0;
    let mut spatial = 0.0;
    for i in 0..3 {
        mixed += g[(0, i + 1)] * khat[i];
        for j in 0..3 {
            spatial += g[(i + 1, j + 1)] * khat[i] * khat[j];
        }
    }
    [spatial, -2.0 * mixed, g[(0, 0)]]
}

/// `Q(s)^2` coefficients, for comparison against `P4` up to an overall factor.
pub fn squared_metric_quartic(metric: &EffectiveMetric, khat: &Vector3<f64>) -> [f64; 5] {
    let q = Polynomial::new(metric_dispersion(metric, khat).to_vec());
    let sq = &q * &q;
    std::array::from_fn(|i| sq.coeff(i))
}
