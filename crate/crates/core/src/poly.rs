//! Dense real polynomials and their roots.

use std::ops::{Add, Mul, Sub};

use nalgebra::{Complex, DMatrix, Schur};

/// Coefficients in ascending order: `c[0] + c[1] x + c[2] x^2 + ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree of the stored coefficient vector (trailing zeros included).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex<f64>) -> Complex<f64> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| i as f64 * c)
                .collect(),
        )
    }

    /// Drops the first `n` coefficients, i.e. divides by `x^n` assuming they vanish.
    pub fn shifted_down(&self, n: usize) -> Polynomial {
        Polynomial::new(self.coeffs.iter().skip(n).copied().collect())
    }

    /// Roots as eigenvalues of the companion matrix of the monic polynomial.
    ///
    /// Leading coefficients that are exactly zero are stripped first. Multiple
    /// roots come back split at the usual `eps^(1/m)` level.
    pub fn companion_roots(&self) -> Vec<Complex<f64>> {
        let mut c = self.coeffs.clone();
        while c.last() == Some(&0.0) {
            c.pop();
        }
        let degree = c.len().saturating_sub(1);
        if degree == 0 {
            return Vec::new();
        }
        let lead = c[degree];
        let mut m = DMatrix::<f64>::zeros(degree, degree);
        for i in 1..degree {
            m[(i, i - 1)] = 1.0;
        }
        for i in 0..degree {
            m[(i, degree - 1)] = -c[i] / lead;
        }
        eigenvalues(m).unwrap_or_default()
    }
}

/// Iteration budget per matrix dimension for the Schur decomposition.
const SCHUR_ITERATIONS_PER_DIM: usize = 200;

/// Eigenvalues of a real square matrix.
///
/// Plain Francis QR can cycle on spectra made of equal-modulus pairs such as
/// `{0, 0, 1, 1, -1, -1}`. When the iteration budget runs out the
/// resolvent `(M - sigma)^-1` is decomposed instead and mapped back with
/// `lambda = sigma + 1 / mu`.
pub fn eigenvalues(m: DMatrix<f64>) -> Option<Vec<Complex<f64>>> {
    let n = m.nrows();
    let budget = SCHUR_ITERATIONS_PER_DIM * n.max(1);
    if let Some(schur) = Schur::try_new(m.clone(), f64::EPSILON, budget) {
        return Some(schur.complex_eigenvalues().iter().copied().collect());
    }
    let scale = m.amax().max(f64::MIN_POSITIVE);
    for sigma in [0.3719, -0.6133, 1.4431, -2.2361] {
        let shift = sigma * scale;
        let shifted = &m - DMatrix::identity(n, n) * shift;
        let Some(inv) = shifted.try_inverse() else {
            continue;
        };
        if let Some(schur) = Schur::try_new(inv, f64::EPSILON, budget) {
            let mu = schur.complex_eigenvalues();
            if mu.iter().all(|z| z.norm() > 0.0) {
                return Some(mu.iter().map(|z| Complex::new(shift, 0.0) + z.inv()).collect());
            }
        }
    }
    None
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.len().max(rhs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.len().max(rhs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_empty() || rhs.is_empty() {
            return Polynomial::new(Vec::new());
        }
        let mut out = vec![0.0; self.len() + rhs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

/// Determinant of a 3x3 matrix of polynomials by cofactor expansion.
pub fn det3(m: &[[Polynomial; 3]; 3]) -> Polynomial {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| {
        &(&m[r1][c1] * &m[r2][c2]) - &(&m[r1][c2] * &m[r2][c1])
    };
    let t0 = &m[0][0] * &minor(1, 2, 1, 2);
    let t1 = &m[0][1] * &minor(1, 2, 0, 2);
    let t2 = &m[0][2] * &minor(1, 2, 0, 1);
    &(&t0 - &t1) + &t2
}
