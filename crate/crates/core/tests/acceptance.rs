//! Acceptance suite: every release criterion as one test, each printing a
//! PASS line with the measured values (run with `-- --nocapture` to see
//! them). Tolerances are pinned in the assertions.

use std::time::Instant;

use cvteleport_core::circuit::{derive, schedule, DeviceParams};
use cvteleport_core::detector::{noise_amplitudes, DetectorSpec};
use cvteleport_core::gaussian::{GaussianState, Quadrature, SymplecticOp};
use cvteleport_core::teleport::{
    channel_mu, eta_critical, fidelity_closed_form, run_pipeline, sweep_fig2, sweep_fig3,
    tau_critical, theta_of, Channel, EnvSpec, NoiseAmplitudes,
};
use cvteleport_core::wigner::teleport_integral;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

fn reference_noise() -> NoiseAmplitudes {
    NoiseAmplitudes::from_deltas(0.32, 0.07, 50e-9).unwrap()
}

#[test]
fn criterion_01_fidelity_golden_value() {
    let theta_a2 = theta_of(1e9, 0.05);
    let noise = reference_noise();

    let start = Instant::now();
    let reps = 1000;
    let mut f = 0.0;
    for _ in 0..reps {
        let ch = channel_mu(1.5, theta_a2, &noise);
        f = fidelity_closed_form(&ch, 1.0);
    }
    let per_eval = start.elapsed().as_secs_f64() / reps as f64;

    assert!((f - 0.78).abs() <= 0.01, "F = {f}");
    assert!(per_eval < 1e-3, "evaluation took {per_eval} s");
    println!(
        "ACCEPTANCE 1 PASS - closed-form fidelity {f:.6} within 0.78 +- 0.01, {:.2e} s/eval",
        per_eval
    );
}

#[test]
fn criterion_02_classical_and_ideal_limits() {
    let f_classical = fidelity_closed_form(
        &Channel {
            mu_x: 1.0,
            mu_p: 1.0,
        },
        1.0,
    );
    let f_ideal = fidelity_closed_form(
        &Channel {
            mu_x: 0.0,
            mu_p: 0.0,
        },
        1.0,
    );
    assert!(
        (f_classical - 0.5).abs() <= 1e-9,
        "classical limit {f_classical}"
    );
    assert!((f_ideal - 1.0).abs() <= 1e-12, "ideal limit {f_ideal}");
    println!(
        "ACCEPTANCE 2 PASS - classical limit {f_classical:.9} (tol 1e-9), ideal limit {f_ideal:.12} (tol 1e-12)"
    );
}

#[test]
fn criterion_03_circuit_derivation_and_schedule() {
    // formula path from the raw parameters
    let d = derive(&DeviceParams::reference()).unwrap();
    assert!(
        (d.omega_phi - 28e9).abs() / 28e9 <= 0.05,
        "omega_phi = {}",
        d.omega_phi
    );
    assert!(
        (d.lambda_bc - 0.3e9).abs() / 0.3e9 <= 0.10,
        "lambda_bc = {}",
        d.lambda_bc
    );
    assert!(
        (d.lambda_ab - 5e6).abs() / 5e6 <= 0.50,
        "lambda_ab = {}",
        d.lambda_ab
    );

    // schedule at the quoted operating couplings
    let d_op = derive(&DeviceParams::reference_operating()).unwrap();
    let s = schedule(&d_op, 1.5, 50e-9).unwrap();
    let durations: Vec<f64> = s.rows.iter().map(|r| r.duration).collect();
    for (got, want) in durations.iter().zip([48e-9, 0.8e-9, 0.8e-9, 25e-9]) {
        assert!(
            (got - want).abs() / want <= 0.10,
            "duration {got} vs {want}"
        );
    }
    println!(
        "ACCEPTANCE 3 PASS - omega_phi {:.3e} Hz (28 GHz +-5%), lambda_ab {:.3e} Hz (5 MHz +-50%), \
         lambda_bc {:.3e} Hz (0.3 GHz +-10%), durations {:.1}/{:.2}/{:.2}/{:.1} ns (+-10%)",
        d.omega_phi,
        d.lambda_ab,
        d.lambda_bc,
        durations[0] * 1e9,
        durations[1] * 1e9,
        durations[2] * 1e9,
        durations[3] * 1e9
    );
}

#[test]
fn criterion_04_detector_chain() {
    let d = derive(&DeviceParams::reference()).unwrap();
    let report = noise_amplitudes(&DetectorSpec::reference(), 50e-9, &d).unwrap();
    assert!(
        (report.sqrt_s_x - 3e-18).abs() / 3e-18 <= 0.10,
        "sqrt_s_x = {}",
        report.sqrt_s_x
    );
    assert!(
        (report.delta_x_abs - 14e-15).abs() / 14e-15 <= 0.10,
        "Delta_x = {}",
        report.delta_x_abs
    );
    assert!(
        (report.delta_p_abs - 0.45).abs() / 0.45 <= 0.05,
        "Delta_p = {}",
        report.delta_p_abs
    );
    assert!(
        (report.noise.delta_x - 0.32).abs() / 0.32 <= 0.15,
        "delta_x = {}",
        report.noise.delta_x
    );
    assert!(
        (report.noise.delta_p - 0.07).abs() / 0.07 <= 0.15,
        "delta_p = {}",
        report.noise.delta_p
    );
    println!(
        "ACCEPTANCE 4 PASS - sqrt(S_x) {:.3e} m/rtHz, Delta_x {:.2} fm, Delta_p {:.3} e, delta_x {:.4}, delta_p {:.4}",
        report.sqrt_s_x,
        report.delta_x_abs * 1e15,
        report.delta_p_abs,
        report.noise.delta_x,
        report.noise.delta_p
    );
}

#[test]
fn criterion_05_temperature_index() {
    let theta = theta_of(1e9, 0.05);
    let eta = 0.5 * (1.0 + theta) * (-2.0_f64 * 1.5).exp();
    assert!((eta - 0.08).abs() <= 0.005, "eta = {eta}");
    println!(
        "ACCEPTANCE 5 PASS - Theta(1 GHz, 50 mK) = {theta:.6}, eta = {eta:.5} within 0.08 +- 0.005"
    );
}

#[test]
fn criterion_06_oracle_equivalence_over_random_draws() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(2026);
    let mut max_dev: f64 = 0.0;
    for draw in 0..50 {
        let r_2: f64 = rng.gen_range(0.0..2.0);
        let theta: f64 = rng.gen_range(1.0..4.0);
        let dx: f64 = rng.gen_range(0.0..0.5);
        let dp: f64 = rng.gen_range(0.0..0.5);
        let mx: f64 = rng.gen_range(-1.0..1.0);
        let mp: f64 = rng.gen_range(-1.0..1.0);
        let input = GaussianState::coherent(mx, mp);
        let grid = teleport_integral(&input, r_2, theta, (dx, dp), 41, None).unwrap();
        let (_, cov) = grid.moments();
        let noise = NoiseAmplitudes::from_deltas(dx, dp, 1.0).unwrap();
        let mu = channel_mu(r_2, theta, &noise);
        let want_x = 0.25 + mu.mu_x / 2.0;
        let want_p = 0.25 + mu.mu_p / 2.0;
        let dev_x = (cov[(0, 0)] - want_x).abs() / want_x;
        let dev_p = (cov[(1, 1)] - want_p).abs() / want_p;
        max_dev = max_dev.max(dev_x).max(dev_p);
        assert!(
            dev_x < 0.02 && dev_p < 0.02,
            "draw {draw}: r_2={r_2:.3} theta={theta:.3} deltas=({dx:.3},{dp:.3}) devs ({dev_x:.4},{dev_p:.4})"
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 600.0, "oracle suite took {elapsed} s");
    println!(
        "ACCEPTANCE 6 PASS - 50 random draws, max variance deviation {:.3e} (limit 2e-2), {:.1} s",
        max_dev, elapsed
    );
}

#[test]
fn criterion_07_pipeline_equivalence() {
    let device = DeviceParams::reference();
    let d = derive(&device).unwrap();
    let env = EnvSpec::from_device(&device, 1.5, 50e-9, None).unwrap();
    let noise = reference_noise();
    let out = run_pipeline(
        &d,
        Some(&device),
        &env,
        &noise,
        (1.3, -0.7),
        20_260_810,
        100_000,
    )
    .unwrap();

    let input = GaussianState::thermal(env.theta_a1).unwrap();
    let v = out.output.cov();
    let dev_xx = (v[(0, 0)] - (input.cov()[(0, 0)] + out.channel.mu_x / 2.0)).abs();
    let dev_pp = (v[(1, 1)] - (input.cov()[(1, 1)] + out.channel.mu_p / 2.0)).abs();
    let dev_xp = v[(0, 1)].abs();
    assert!(
        dev_xx < 1e-9 && dev_pp < 1e-9 && dev_xp < 1e-9,
        "({dev_xx:.2e}, {dev_pp:.2e}, {dev_xp:.2e})"
    );

    let gap = (out.f_mc - out.f_closed).abs();
    assert!(
        gap < 3.0 * out.f_mc_sigma,
        "F_mc {} vs F_closed {} gap {gap:.2e} sigma {:.2e}",
        out.f_mc,
        out.f_closed,
        out.f_mc_sigma
    );
    println!(
        "ACCEPTANCE 7 PASS - analytic covariance defect {:.1e} (tol 1e-9); 1e5-record MC gap {:.2e} < 3 sigma = {:.2e}",
        dev_xx.max(dev_pp).max(dev_xp),
        gap,
        3.0 * out.f_mc_sigma
    );
}

#[test]
fn criterion_08_critical_curve_properties() {
    let tau_ref: f64 = 50e-9;
    let c = (0.32 * tau_ref.sqrt(), 0.07 * tau_ref.sqrt());

    // eta_c nondecreasing over a wide log grid
    let taus: Vec<f64> = (0..60)
        .map(|k| 1e-10 * 10f64.powf(k as f64 * 0.1))
        .collect();
    let sweep = sweep_fig2(c, &taus, &[0.0]).unwrap();
    for pair in sweep.main.windows(2) {
        assert!(
            pair[1].1 >= pair[0].1 - 1e-12,
            "eta_c not monotone at tau {}",
            pair[1].0
        );
    }

    // noiseless constants: eta_c = 1 at any tau
    for tau in [1e-9, 1.0, 1e3] {
        let e = eta_critical(tau, (0.0, 0.0));
        assert!((e - 1.0).abs() <= 1e-6, "eta_c({tau}) = {e}");
    }
    // and with finite constants the tau -> infinity limit approaches 1
    let e_inf = eta_critical(1e3, c);
    assert!((e_inf - 1.0).abs() <= 1e-6, "eta_c(1e3 s) = {e_inf}");

    // below the critical time the fidelity stays classical at any eta >= 0
    let tau_c = tau_critical(c);
    for k in 1..=20 {
        let tau = tau_c * k as f64 / 21.0;
        let ch = Channel {
            mu_x: 4.0 * c.0 * c.0 / tau,
            mu_p: 4.0 * c.1 * c.1 / tau,
        };
        let f = fidelity_closed_form(&ch, 1.0);
        assert!(f < 0.5, "F({tau:.3e}) = {f} at eta = 0");
    }
    println!(
        "ACCEPTANCE 8 PASS - eta_c nondecreasing over 60 points, eta_c -> 1 (+-1e-6), F < 1/2 below tau_c = {:.3e} s (20 samples)",
        tau_c
    );
}

#[test]
fn criterion_09_figure_orderings() {
    let tau_ref: f64 = 50e-9;
    let c = (0.32 * tau_ref.sqrt(), 0.07 * tau_ref.sqrt());

    let thetas: Vec<f64> = (0..41).map(|k| 1.0 + 4.0 * k as f64 / 40.0).collect();
    let fig3 = sweep_fig3(c, tau_ref, &[2.0, 0.5, 0.0], &thetas).unwrap();
    for col in 0..3 {
        for pair in fig3.rows.windows(2) {
            assert!(
                pair[1].1[col] > pair[0].1[col],
                "F not strictly increasing in Theta for r_2 column {col}"
            );
        }
    }
    for (theta, fs) in &fig3.rows {
        assert!(
            fs[0] > fs[1] && fs[1] > fs[2],
            "r_2 ordering broken at Theta {theta}"
        );
    }

    let taus: Vec<f64> = (0..30).map(|k| 1e-9 * 10f64.powf(k as f64 / 7.0)).collect();
    let fig2 = sweep_fig2(c, &taus, &[0.0, 1.0, 5.0]).unwrap();
    for (tau, fs) in &fig2.inset {
        assert!(
            fs[0] > fs[1] && fs[1] > fs[2],
            "inset ordering broken at tau {tau}"
        );
    }
    println!(
        "ACCEPTANCE 9 PASS - F(Theta) strictly increasing and ordered r_2 = 2 > 0.5 > 0 over {} points; inset ordered eta = 0 > 1 > 5 over {} points",
        fig3.rows.len(),
        fig2.inset.len()
    );
}

#[test]
fn criterion_10_structural_invariants() {
    let start = Instant::now();
    let mut rng = ChaCha12Rng::seed_from_u64(4096);
    let mut max_defect: f64 = 0.0;
    let mut max_purity_drift: f64 = 0.0;

    for _ in 0..100 {
        let n = rng.gen_range(2..=3);
        let mut state = GaussianState::thermal(rng.gen_range(1.0..3.0)).unwrap();
        for _ in 1..n {
            state = state.tensor(&GaussianState::thermal(rng.gen_range(1.0..3.0)).unwrap());
        }
        let purity_before = state.purity();
        let spectrum_before = state.symplectic_eigenvalues();

        for _ in 0..4 {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            while j == i {
                j = rng.gen_range(0..n);
            }
            let op = match rng.gen_range(0..3) {
                0 => SymplecticOp::two_mode_squeezer(n, i, j, rng.gen_range(-1.5..1.5)),
                1 => SymplecticOp::beam_splitter(n, i, j, rng.gen_range(0.0..6.3)),
                _ => SymplecticOp::displacement(
                    n,
                    i,
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(-2.0..2.0),
                ),
            };
            max_defect = max_defect.max(op.symplectic_defect());
            state = op.apply(&state);
            // uncertainty principle after every operation
            assert!(
                state.min_symplectic_eigenvalue() >= 0.25 - 1e-9,
                "unphysical intermediate state"
            );
        }
        max_purity_drift = max_purity_drift.max((state.purity() - purity_before).abs());
        let spectrum_after = state.symplectic_eigenvalues();
        for (b, a) in spectrum_before.iter().zip(&spectrum_after) {
            assert!(
                (b - a).abs() < 1e-9 * b.max(1.0),
                "symplectic spectrum drifted"
            );
        }
    }
    assert!(max_defect < 1e-10, "symplectic defect {max_defect:.2e}");
    assert!(
        max_purity_drift < 1e-9,
        "purity drift {max_purity_drift:.2e}"
    );

    // noiseless homodyne preserves purity of the remainder
    let mut rng2 = ChaCha12Rng::seed_from_u64(77);
    for _ in 0..20 {
        let s = GaussianState::vacuum(2)
            .two_mode_squeeze(0, 1, rng2.gen_range(0.0..2.0))
            .unwrap();
        let (_, cond) = s
            .homodyne_measure(0, Quadrature::X, 0.0, None, &mut rng2)
            .unwrap();
        for nu in cond.symplectic_eigenvalues() {
            assert!((nu - 0.25).abs() < 1e-8);
        }
    }

    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "property suite took {elapsed} s");
    println!(
        "ACCEPTANCE 10 PASS - max symplectic defect {:.1e} (tol 1e-10), max purity drift {:.1e} (tol 1e-9), {:.1} s",
        max_defect, max_purity_drift, elapsed
    );
}
