//! Independent reference computations shared by the integration tests.
//!
//! Nothing here goes through the crate's own contraction, determinant or
//! root-finding code; inputs are plain arrays.

#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

use nled::RankFourTensor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// `L = -F/4pi + c1 F^2 + c2 G^2` with the textbook box-diagram coefficients.
pub fn euler_heisenberg(alpha: f64, m: f64) -> impl Fn(f64, f64) -> f64 {
    let m4 = m.powi(4);
    let c1 = alpha * alpha / (90.0 * PI * PI * m4);
    let c2 = 7.0 * alpha * alpha / (360.0 * PI * PI * m4);
    move |f, g| -f / (4.0 * PI) + c1 * f * f + c2 * g * g
}

/// Six independent lower components `F_{01}, F_{02}, F_{03}, F_{12}, F_{13}, F_{23}`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn components_from_fields(e: [f64; 3], b: [f64; 3]) -> [f64; 6] {
    // F_{12} = B_z, F_{13} = -B_y, F_{23} = B_x
    [e[0], e[1], e[2], b[2], -b[1], b[0]]
}

/// `(F, G) = (1/2 (B^2 - E^2), -E.B)` read back from the six components.
pub fn invariants_from_components(p: &[f64; 6]) -> (f64, f64) {
    let e = [p[0], p[1], p[2]];
    let b = [p[5], -p[4], p[3]];
    let e2: f64 = e.iter().map(|x| x * x).sum();
    let b2: f64 = b.iter().map(|x| x * x).sum();
    let eb: f64 = e.iter().zip(&b).map(|(x, y)| x * y).sum();
    (0.5 * (b2 - e2), -eb)
}

/// `Omega^{abcd} = 1/4 d^2 L / dp_{ab} dp_{cd}` by central differences with step `h`,
/// then filled out by antisymmetry in each pair.
pub fn fd_omega(lagrangian: impl Fn(f64, f64) -> f64, p0: [f64; 6], h: f64) -> [[[[f64; 4]; 4]; 4]; 4] {
    let l = |p: &[f64; 6]| {
        let (f, g) = invariants_from_components(p);
        lagrangian(f, g)
    };
    let shifted = |i: usize, di: f64, j: usize, dj: f64| {
        let mut p = p0;
        p[i] += di;
        p[j] += dj;
        l(&p)
    };
    let mut hess = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            hess[i][j] = (shifted(i, h, j, h) - shifted(i, h, j, -h) - shifted(i, -h, j, h)
                + shifted(i, -h, j, -h))
                / (4.0 * h * h);
        }
    }
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for (i, &(a, b)) in PAIRS.iter().enumerate() {
        for (j, &(c, d)) in PAIRS.iter().enumerate() {
            let v = 0.25 * hess[i][j];
            out[a][b][c][d] = v;
            out[b][a][c][d] = -v;
            out[a][b][d][c] = -v;
            out[b][a][d][c] = v;
        }
    }
    out
}

/// Casimir response `d1 (eta eta - eta eta) + d2 (...)` with `n = z`, written out
/// component by component.
pub fn casimir_components(d1: f64, d2: f64) -> [[[[f64; 4]; 4]; 4]; 4] {
    let eta = |a: usize, b: usize| if a == b { ETA[a] } else { 0.0 };
    let n = |a: usize| if a == 3 { 1.0 } else { 0.0 };
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    out[a][b][c][d] = d1 * (eta(a, c) * eta(b, d) - eta(a, d) * eta(b, c))
                        + d2 * (eta(a, c) * n(b) * n(d) - eta(a, d) * n(b) * n(c) + eta(b, d) * n(a) * n(c)
                            - eta(b, c) * n(a) * n(d));
                }
            }
        }
    }
    out
}

pub fn to_array(t: &RankFourTensor) -> [[[[f64; 4]; 4]; 4]; 4] {
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    out[a][b][c][d] = t.get(a, b, c, d);
                }
            }
        }
    }
    out
}

/// `A^{ij} = T^{i alpha j beta} k_alpha k_beta` with `k = (-omega, khat)`.
pub fn spatial_wave_block(t: &[[[[f64; 4]; 4]; 4]; 4], omega: f64, khat: [f64; 3]) -> [[f64; 3]; 3] {
    let k = [-omega, khat[0], khat[1], khat[2]];
    let mut a = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut s = 0.0;
            for al in 0..4 {
                for be in 0..4 {
                    s += t[i + 1][al][j + 1][be] * k[al] * k[be];
                }
            }
            a[i][j] = s;
        }
    }
    a
}

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Positive zeros of `det A^{ij}(s) / s^2` in `[lo, hi]`: scan `steps` cells for
/// sign changes, then bisect each bracket to machine resolution.
pub fn bracket_roots(t: &[[[[f64; 4]; 4]; 4]; 4], khat: [f64; 3], lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let f = |s: f64| det3(&spatial_wave_block(t, s, khat)) / (s * s);
    let mut roots = Vec::new();
    let mut prev_s = lo;
    let mut prev = f(lo);
    for i in 1..=steps {
        let s = lo + (hi - lo) * i as f64 / steps as f64;
        let v = f(s);
        if v == 0.0 {
            roots.push(s);
        } else if prev != 0.0 && (v > 0.0) != (prev > 0.0) {
            let (mut a, mut b, mut fa) = (prev_s, s, prev);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                let fm = f(m);
                if (fm > 0.0) == (fa > 0.0) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            roots.push(0.5 * (a + b));
        }
        prev_s = s;
        prev = v;
    }
    roots
}

pub fn unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 && n <= 1.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

pub fn random_tensor_fn(rng: &mut ChaCha8Rng) -> impl FnMut(usize, usize, usize, usize) -> f64 + '_ {
    move |_, _, _, _| rng.random_range(-1.0..1.0)
}

/// Polynomial interpolation of samples via Newton divided differences,
/// converted to ascending monomial coefficients.
pub fn interpolate(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    let mut poly = vec![0.0; n];
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + coef[i]
        let mut next = vec![0.0; n];
        for k in 0..n {
            if k + 1 < n {
                next[k + 1] += poly[k];
            }
            next[k] -= xs[i] * poly[k];
        }
        next[0] += coef[i];
        poly = next;
    }
    poly
}
