//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

#![allow(clippy::needless_range_loop)]

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use nled::fresnel::{
    build_wave_matrix, detect_birefringence, fresnel_quartic, kernel_dimension, temporal_gauge_reduce, SpatialPencil,
};
use nled::kinematics::{group_velocity, phase_velocity, polarization_basis, PropagationState};
use nled::lagrangian::{omega_from_lagrangian, LagrangianModel};
use nled::polsum::{bootstrap_residual, fit_leading_gap_coefficient};
use nled::vacuum::{background_field_omega, casimir_omega_from_coefficients, EffectiveMetric, DEFAULT_ALPHA, MAXWELL_D1};
use nled::{FieldTensor, FourVector, RankFourTensor};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run_cli(config: &str, dir: &Path, name: &str) -> (String, serde_json::Value) {
    let cfg = dir.join(format!("{name}.json"));
    std::fs::write(&cfg, config).unwrap();
    let csv = dir.join(format!("{name}.csv"));
    let json = dir.join(format!("{name}.report.json"));
    let status = Command::new(env!("CARGO_BIN_EXE_nled"))
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--csv")
        .arg(&csv)
        .arg("--json")
        .arg(&json)
        .status()
        .unwrap();
    assert!(status.success(), "nled run failed for {name}");
    let report = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    (std::fs::read_to_string(&csv).unwrap(), report)
}

fn parse_csv(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn scharnhorst_formula() -> Outcome {
    let cases: [(f64, f64, f64); 10] = [
        (DEFAULT_ALPHA, 100.0, 1.0),
        (DEFAULT_ALPHA, 1000.0, 1.0),
        (DEFAULT_ALPHA, 1.0e4, 1.0),
        (DEFAULT_ALPHA, 50.0, 1.0),
        (0.01, 60.0, 1.0),
        (0.003, 30.0, 1.0),
        (0.05, 200.0, 1.0),
        (0.1, 150.0, 2.0),
        (0.5, 1000.0, 1.0),
        (1.0, 2000.0, 1.0),
    ];
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for (i, (alpha, a, m)) in cases.iter().enumerate() {
        let cfg = format!(
            r#"{{"lagrangian": {{"kind": "euler_heisenberg", "alpha": {alpha:e}, "m_e": {m:e}}},
                "vacuum": {{"kind": "casimir", "separation": {a:e}}},
                "sweep": {{"steps": 2}}, "birefringence": {{"n_dirs": 16}}}}"#
        );
        let (_, report) = run_cli(&cfg, dir.path(), &format!("c1_{i}"));
        let got = report["scharnhorst_delta"].as_f64().unwrap();
        let expected = 11.0 * PI * PI * alpha * alpha / (8100.0 * (a * m).powi(4));
        worst = worst.max(((got - expected) / expected).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-12 && elapsed < 1.0,
        format!("max rel err {worst:.2e} (tol 1e-12), {elapsed:.3}s for 10 runs (limit 1s)"),
    )
}

fn casimir_no_birefringence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut any_flag = false;
    for xi in [1e-6, 1e-2, 0.5] {
        let omega = casimir_omega_from_coefficients(MAXWELL_D1, xi * MAXWELL_D1, &FourVector::z_normal()).unwrap();
        let report = detect_birefringence(&omega, 200, 1e-12).unwrap();
        any_flag |= report.birefringent;
        worst = worst.max(report.max_gap);
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-12 && !any_flag && elapsed < 5.0,
        format!("max root gap {worst:.2e} (tol 1e-12), flagged {any_flag}, {elapsed:.3}s (limit 5s)"),
    )
}

fn determinant_identity() -> Outcome {
    let mut rng = common::rng(3);
    let mut worst = 0.0_f64;
    for _ in 0..500 {
        let xi = rng.random_range(-0.9..2.0);
        let omega_k = rng.random_range(0.1..3.0);
        let kmag = rng.random_range(0.1..3.0);
        let khat = common::unit_vector(&mut rng);
        let kvec = Vector3::from(khat) * kmag;
        let omega = casimir_omega_from_coefficients(MAXWELL_D1, xi * MAXWELL_D1, &FourVector::z_normal()).unwrap();
        let w = build_wave_matrix(&omega, &FourVector::wave(omega_k, kvec));
        let lhs = temporal_gauge_reduce(&w).spatial.determinant();
        let spatial = kmag * kmag + xi * kvec.z * kvec.z;
        let gkk = -omega_k * omega_k + spatial;
        let rhs = -(1.0 + xi) * MAXWELL_D1.powi(3) * omega_k * omega_k * gkk * gkk;
        let scale = (1.0 + xi) * MAXWELL_D1.abs().powi(3) * omega_k * omega_k * (omega_k * omega_k + spatial).powi(2);
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    outcome(worst <= 1e-10, format!("max rel err {worst:.2e} over 500 draws (tol 1e-10)"))
}

fn omega_squared_factor() -> Outcome {
    let mut rng = common::rng(4);
    let mut worst = 0.0_f64;
    let mut worst_consistency = 0.0_f64;
    for _ in 0..100 {
        let omega = RankFourTensor::symmetrized(common::random_tensor_fn(&mut rng));
        let khat = common::unit_vector(&mut rng);
        let det = SpatialPencil::new(&omega, &Vector3::from(khat)).determinant();
        let scale = det.scale();
        worst = worst.max(det.coeff(0).abs().max(det.coeff(1).abs()) / scale);
        let t = common::to_array(&omega.without_levi_civita());
        for _ in 0..3 {
            let w: f64 = rng.random_range(-2.0..2.0);
            let direct = common::det3(&common::spatial_wave_block(&t, w, khat));
            let norm = scale * (1.0 + w.abs()).powi(6);
            worst_consistency = worst_consistency.max((det.eval(w) - direct).abs() / norm);
        }
    }
    outcome(
        worst <= 1e-10 && worst_consistency <= 1e-12,
        format!(
            "max |p0|,|p1| / scale {worst:.2e} (tol 1e-10); polynomial vs direct det {worst_consistency:.2e}"
        ),
    )
}

fn fd_fast_omega(omega: &RankFourTensor, k: Vector3<f64>) -> f64 {
    let n = k.norm();
    let q = fresnel_quartic(omega, &(k / n)).unwrap();
    let top = q.roots.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    top * n
}

fn group_velocity_oracle() -> Outcome {
    let xi = 0.5;
    let omega = casimir_omega_from_coefficients(MAXWELL_D1, xi * MAXWELL_D1, &FourVector::z_normal()).unwrap();
    let h = 1e-6;
    let mut worst_fd = 0.0_f64;
    let mut worst_sq = 0.0_f64;
    for i in 0..50 {
        let theta = FRAC_PI_2 * i as f64 / 49.0;
        let (v, norm) = group_velocity(xi, theta).unwrap();
        let k = Vector3::new(theta.sin(), 0.0, theta.cos());
        let mut grad = Vector3::zeros();
        for j in 0..3 {
            let mut dk = Vector3::zeros();
            dk[j] = h;
            grad[j] = (fd_fast_omega(&omega, k + dk) - fd_fast_omega(&omega, k - dk)) / (2.0 * h);
        }
        worst_fd = worst_fd.max((grad - v).norm() / v.norm());
        let vp = phase_velocity(xi, theta).unwrap();
        let (s, c) = theta.sin_cos();
        worst_sq = worst_sq.max((norm * norm - vp * vp - xi * xi * c * c * s * s / (vp * vp)).abs());
    }
    outcome(
        worst_fd <= 1e-6 && worst_sq <= 1e-12,
        format!("finite-difference rel err {worst_fd:.2e} (tol 1e-6); square relation {worst_sq:.2e} (tol 1e-12)"),
    )
}

fn polarization_suite() -> Outcome {
    let xi = 0.5;
    let omega = casimir_omega_from_coefficients(MAXWELL_D1, xi * MAXWELL_D1, &FourVector::z_normal()).unwrap();
    let gamma = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, 1.0 + xi));
    let mut worst = 0.0_f64;
    let mut kernel_ok = true;
    for i in 0..50 {
        let theta = FRAC_PI_2 * i as f64 / 49.0;
        let state = PropagationState::new(xi, theta).unwrap();
        let k = Vector3::new(theta.sin(), 0.0, theta.cos());
        let gk = gamma * k;
        worst = worst.max(gk.dot(&state.pol1).abs()).max(gk.dot(&state.pol2).abs());
        worst = worst.max(state.v_group_vec.dot(&state.pol2).abs());
        worst = worst.max(state.v_group_vec.dot(&state.pol1).abs());
        let w = build_wave_matrix(&omega, &FourVector::wave(state.v_phase, k));
        let a = temporal_gauge_reduce(&w).spatial;
        kernel_ok &= kernel_dimension(&a, 1e-10) == 2;
        let scale = a.norm();
        worst = worst.max((a * state.pol1).norm() / scale).max((a * state.pol2).norm() / scale);
    }
    let (_, _, n0) = polarization_basis(xi, 0.0).unwrap();
    worst = worst.max((n0 - (1.0 + xi)).abs());
    outcome(
        worst <= 1e-10 && kernel_ok,
        format!("max residual {worst:.2e} (tol 1e-10), on-shell kernel dimension 2 everywhere: {kernel_ok}"),
    )
}

fn bootstrap() -> Outcome {
    let mut worst = 0.0_f64;
    for xi in [1e-4, 0.3] {
        let n = FourVector::z_normal();
        let omega = casimir_omega_from_coefficients(MAXWELL_D1, xi * MAXWELL_D1, &n).unwrap();
        let metric = EffectiveMetric::from_xi(xi, &n).unwrap();
        worst = worst.max(bootstrap_residual(&omega, &metric, MAXWELL_D1));
    }
    outcome(worst <= 1e-12, format!("max residual {worst:.2e} (tol 1e-12)"))
}

fn polsum_gap() -> Outcome {
    let xis = [1e-3, 1e-4, 1e-5];
    let c = fit_leading_gap_coefficient(&xis).unwrap();
    // xi_tilde - xi = -xi^2 / (2 + xi)
    let exact: Vec<f64> = xis.iter().map(|x| -1.0 / (2.0 + x)).collect();
    let rel = ((c + 0.5) / 0.5).abs();
    outcome(
        rel <= 0.01,
        format!("fitted coefficient {c:.9} vs -0.5 (rel {rel:.2e}, tol 1e-2); closed-form samples {exact:.9?}"),
    )
}

fn birefringence_control() -> Outcome {
    let model = LagrangianModel::euler_heisenberg(DEFAULT_ALPHA, 1.0).unwrap();
    let b = Vector3::new(0.0, 0.0, 0.1);
    let omega = background_field_omega(&model, Vector3::zeros(), b).unwrap();
    let report = detect_birefringence(&omega, 200, 1e-10).unwrap();
    let khat = Vector3::x();
    let q = fresnel_quartic(&omega, &khat).unwrap();
    let (s1, s2) = q.propagating_speeds().unwrap();
    let t = common::to_array(&omega.without_levi_civita());
    let mut oracle = common::bracket_roots(&t, [1.0, 0.0, 0.0], 1.0 - 1e-6, 1.0 + 1e-7, 20_000);
    oracle.sort_by(|a, b| b.total_cmp(a));
    let agree = oracle.len() == 2 && (oracle[0] - s1).abs() <= 1e-13 && (oracle[1] - s2).abs() <= 1e-13;
    outcome(
        report.birefringent && s1 - s2 > 1e-10 && s2 > 0.0 && agree,
        format!(
            "flag {}, k ⟂ B roots s1 = {s1:.15}, s2 = {s2:.15} (gap {:.3e}); bracketing oracle {oracle:.15?}",
            report.birefringent,
            s1 - s2
        ),
    )
}

fn eh_omega_oracle() -> Outcome {
    let mut rng = common::rng(10);
    let mut worst = 0.0_f64;
    let mut worst_nl = 0.0_f64;
    let alpha = 1.0;
    let model = LagrangianModel::euler_heisenberg(alpha, 1.0).unwrap();
    let maxwell = RankFourTensor::isotropic(MAXWELL_D1);
    for _ in 0..20 {
        let e: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let b: [f64; 3] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
        let lib = omega_from_lagrangian(&model, &FieldTensor::from_fields(e.into(), b.into())).unwrap();
        let fd = common::fd_omega(common::euler_heisenberg(alpha, 1.0), common::components_from_fields(e, b), 1e-3);
        let scale = fd.iter().flatten().flatten().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
        let mut nl_scale = 0.0_f64;
        let mut diff = 0.0_f64;
        let mut nl_diff = 0.0_f64;
        for a in 0..4 {
            for bb in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let x = lib.get(a, bb, c, d);
                        let y = fd[a][bb][c][d];
                        diff = diff.max((x - y).abs());
                        let nl = y - maxwell.get(a, bb, c, d);
                        nl_scale = nl_scale.max(nl.abs());
                        nl_diff = nl_diff.max(((x - maxwell.get(a, bb, c, d)) - nl).abs());
                    }
                }
            }
        }
        worst = worst.max(diff / scale);
        worst_nl = worst_nl.max(nl_diff / nl_scale);
    }
    outcome(
        worst <= 1e-6 && worst_nl <= 1e-6,
        format!("max rel err {worst:.2e}, nonlinear part alone {worst_nl:.2e} (tol 1e-6, 20 backgrounds)"),
    )
}

fn figure_fixtures() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let fixture = std::fs::read_to_string(workspace_root().join("scenarios/fig1_xi_half.json")).unwrap();
    let (csv, _) = run_cli(&fixture, dir.path(), "fig1");
    let rows = parse_csv(&csv);
    let last = rows.len() - 1;
    let mut ok = rows.len() >= 3;
    let mut min_interior = f64::INFINITY;
    let mut max_end = 0.0_f64;
    let mut argmax = 0;
    let mut best = f64::NEG_INFINITY;
    for (i, r) in rows.iter().enumerate() {
        let (vp, vg) = (r[1], r[2]);
        ok &= vg >= vp;
        let d = vg * vg - vp * vp;
        if d > best {
            best = d;
            argmax = i;
        }
        if i == 0 || i == last {
            max_end = max_end.max(vg - vp);
        } else {
            min_interior = min_interior.min(vg - vp);
        }
    }
    ok &= max_end <= 1e-12 && min_interior > 1e-12 && argmax != 0 && argmax != last;
    ok &= (rows[last][1] - 1.0).abs() <= 1e-12 && (rows[last][2] - 1.0).abs() <= 1e-12;
    outcome(
        ok,
        format!(
            "{} rows; endpoint |vg - vp| {max_end:.2e}, interior min vg - vp {min_interior:.2e}, max vg^2 - vp^2 at row {argmax}",
            rows.len()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("Scharnhorst formula via CLI", scharnhorst_formula),
        ("no birefringence in the Casimir vacuum", casimir_no_birefringence),
        ("determinant identity", determinant_identity),
        ("omega^2 factor of the Fresnel determinant", omega_squared_factor),
        ("group-velocity oracle", group_velocity_oracle),
        ("polarization suite", polarization_suite),
        ("bootstrap condition", bootstrap),
        ("polarization-sum gap coefficient", polsum_gap),
        ("birefringence positive control", birefringence_control),
        ("Euler-Heisenberg Omega oracle", eh_omega_oracle),
        ("figure fixtures", figure_fixtures),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !result.pass {
            failed += 1;
        }
        println!(
            "[{}] criterion {:>2}: {name} — {}",
            if result.pass { "PASS" } else { "FAIL" },
            i + 1,
            result.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.2}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
