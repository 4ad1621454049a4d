//! Subcommand implementations. Each returns the report text and a process
//! exit code (0 success, 2 physics-constraint failure); usage and parse
//! errors are handled by the caller with exit code 1.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use cvteleport_core::circuit::{check_hierarchy, derive, schedule, DEFAULT_MARGIN};
use cvteleport_core::detector::{self, noise_amplitudes};
use cvteleport_core::gaussian::GaussianState;
use cvteleport_core::teleport::{
    channel_mu, eta_critical, run_pipeline, sweep_fig2, sweep_fig3, tau_critical, EnvSpec,
};
use cvteleport_core::wigner::teleport_integral;

use crate::config::RunConfig;

pub type CmdResult = Result<(String, i32), Box<dyn std::error::Error>>;

/// Formats with the configured number of significant digits.
fn sig(value: f64, precision: usize) -> String {
    format!("{:.*e}", precision.saturating_sub(1), value)
}

fn write_csv(dir: &Path, name: &str, content: &str) -> Result<(), std::io::Error> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), content)
}

pub fn cmd_derive(cfg: &RunConfig) -> CmdResult {
    let mut out = String::new();
    let d = derive(&cfg.device)?;
    let p = cfg.output.precision;
    writeln!(out, "derived circuit quantities")?;
    writeln!(out, "  C_Sigma   = {} F", sig(d.c_sigma, p))?;
    writeln!(out, "  E_C       = {} Hz", sig(d.e_c, p))?;
    writeln!(out, "  E_J_eff   = {} Hz", sig(d.e_j_eff, p))?;
    writeln!(out, "  omega_phi = {} Hz", sig(d.omega_phi, p))?;
    writeln!(out, "  delta_x0  = {} m", sig(d.delta_x0, p))?;
    writeln!(
        out,
        "  lambda_ab = {} Hz{}",
        sig(d.lambda_ab, p),
        if cfg.device.lambda_ab_override.is_some() {
            "  (operating override)"
        } else {
            ""
        }
    )?;
    writeln!(
        out,
        "  lambda_bc = {} Hz{}",
        sig(d.lambda_bc, p),
        if cfg.device.lambda_bc_override.is_some() {
            "  (operating override)"
        } else {
            ""
        }
    )?;
    writeln!(
        out,
        "  omega_d (squeeze)       = {} Hz",
        sig(d.omega_d_squeeze, p)
    )?;
    writeln!(
        out,
        "  omega_d (beam splitter) = {} Hz",
        sig(d.omega_d_beamsplit, p)
    )?;
    if d.phase_regime_marginal {
        writeln!(out, "  warning: phase regime violated (E_J_eff / E_C < 20)")?;
    }

    let report = check_hierarchy(&d, &cfg.device, cfg.env.tau_m, DEFAULT_MARGIN);
    writeln!(out, "\nhierarchy checks (margin {}):", report.margin)?;
    for c in &report.checks {
        writeln!(
            out,
            "  {:36} {:>12.5e} << {:>12.5e}  ratio {:>9.3e}  {}",
            c.name,
            c.lhs,
            c.rhs,
            c.ratio,
            if c.pass { "ok" } else { "FAIL" }
        )?;
    }
    let code = if report.all_pass() { 0 } else { 2 };
    Ok((out, code))
}

pub fn cmd_schedule(cfg: &RunConfig) -> CmdResult {
    let d = derive(&cfg.device)?;
    let s = schedule(&d, cfg.env.r_2, cfg.env.tau_m)?;
    let mut out = String::new();
    writeln!(out, "protocol schedule (r_2 = {})", s.r_2)?;
    for row in &s.rows {
        writeln!(
            out,
            "  {:16} ({}, {})  {} s",
            row.kind.label(),
            row.modes.0.label(),
            row.modes.1.label(),
            sig(row.duration, cfg.output.precision)
        )?;
    }
    Ok((out, 0))
}

pub fn cmd_teleport(cfg: &RunConfig) -> CmdResult {
    cfg.detector.validate(cfg.device.omega_nr)?;
    let d = derive(&cfg.device)?;
    let env = EnvSpec::from_device(&cfg.device, cfg.env.r_2, cfg.env.tau_m, cfg.env.theta_a1)?;
    let report = noise_amplitudes(&cfg.detector, cfg.env.tau_m, &d)?;
    let outcome = run_pipeline(
        &d,
        Some(&cfg.device),
        &env,
        &report.noise,
        (cfg.env.input_x, cfg.env.input_p),
        cfg.seed,
        cfg.env.mc_samples,
    )?;

    let p = cfg.output.precision;
    let mut out = String::new();
    writeln!(
        out,
        "teleportation run (seed {}, {} records)",
        cfg.seed, cfg.env.mc_samples
    )?;
    writeln!(out, "  theta_a1 = {}", sig(env.theta_a1, p))?;
    writeln!(out, "  theta_a2 = {}", sig(env.theta_a2, p))?;
    writeln!(out, "  eta      = {}", sig(env.eta, p))?;
    writeln!(out, "  delta_x  = {}", sig(report.noise.delta_x, p))?;
    writeln!(out, "  delta_p  = {}", sig(report.noise.delta_p, p))?;
    writeln!(out, "  mu_x     = {}", sig(outcome.channel.mu_x, p))?;
    writeln!(out, "  mu_p     = {}", sig(outcome.channel.mu_p, p))?;
    writeln!(out, "  F_closed = {}", sig(outcome.f_closed, p))?;
    writeln!(
        out,
        "  F_mc     = {} +- {}",
        sig(outcome.f_mc, p),
        sig(outcome.f_mc_sigma, p)
    )?;
    for w in &outcome.warnings {
        writeln!(out, "  warning: {w}")?;
    }

    let mut csv = String::from(
        "r_2,tau_m_s,theta_a1,theta_a2,eta,delta_x,delta_p,mu_x,mu_p,f_closed,f_mc,f_mc_sigma\n",
    );
    writeln!(
        csv,
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        sig(env.r_2, p),
        sig(env.tau_m, p),
        sig(env.theta_a1, p),
        sig(env.theta_a2, p),
        sig(env.eta, p),
        sig(report.noise.delta_x, p),
        sig(report.noise.delta_p, p),
        sig(outcome.channel.mu_x, p),
        sig(outcome.channel.mu_p, p),
        sig(outcome.f_closed, p),
        sig(outcome.f_mc, p),
        sig(outcome.f_mc_sigma, p)
    )?;
    write_csv(&cfg.output.dir, "teleport.csv", &csv)?;
    writeln!(
        out,
        "  wrote {}",
        cfg.output.dir.join("teleport.csv").display()
    )?;
    Ok((out, 0))
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo * (hi / lo).powf(k as f64 / (n - 1).max(1) as f64))
        .collect()
}

fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1).max(1) as f64)
        .collect()
}

pub fn cmd_sweep_fig2(cfg: &RunConfig) -> CmdResult {
    cfg.detector.validate(cfg.device.omega_nr)?;
    if cfg.sweep.fig2_points == 0 {
        return Err(Box::new(crate::config::ConfigError(
            "empty fig2 grid".into(),
        )));
    }
    let d = derive(&cfg.device)?;
    let report = noise_amplitudes(&cfg.detector, cfg.env.tau_m, &d)?;
    let c = (report.noise.c_x, report.noise.c_p);
    let taus = log_grid(
        cfg.sweep.fig2_tau_lo,
        cfg.sweep.fig2_tau_hi,
        cfg.sweep.fig2_points,
    );
    let sweep = sweep_fig2(c, &taus, &cfg.sweep.fig2_eta)?;
    let p = cfg.output.precision;

    let mut main_csv = String::from("tau_m_s,log10_tau_m,eta_c\n");
    for (tau, eta_c) in &sweep.main {
        writeln!(
            main_csv,
            "{},{},{}",
            sig(*tau, p),
            sig(tau.log10(), p),
            sig(*eta_c, p)
        )?;
    }
    let mut inset_csv = String::from("tau_m_s");
    for eta in &sweep.eta_values {
        write!(inset_csv, ",F_eta_{eta}")?;
    }
    inset_csv.push('\n');
    for (tau, fs) in &sweep.inset {
        write!(inset_csv, "{}", sig(*tau, p))?;
        for f in fs {
            write!(inset_csv, ",{}", sig(*f, p))?;
        }
        inset_csv.push('\n');
    }
    write_csv(&cfg.output.dir, "fig2_main.csv", &main_csv)?;
    write_csv(&cfg.output.dir, "fig2_inset.csv", &inset_csv)?;

    let monotone = sweep.main.windows(2).all(|w| w[1].1 >= w[0].1 - 1e-12);
    let mut out = String::new();
    writeln!(
        out,
        "critical-curve sweep over {} measurement times",
        taus.len()
    )?;
    writeln!(out, "  tau_m^c  = {} s", sig(tau_critical(c), p))?;
    writeln!(
        out,
        "  eta_c at tau_m = {}: {}",
        sig(cfg.env.tau_m, p),
        sig(eta_critical(cfg.env.tau_m, c), p)
    )?;
    writeln!(
        out,
        "  eta_c nondecreasing: {}",
        if monotone { "ok" } else { "FAIL" }
    )?;
    writeln!(
        out,
        "  wrote {}",
        cfg.output.dir.join("fig2_main.csv").display()
    )?;
    writeln!(
        out,
        "  wrote {}",
        cfg.output.dir.join("fig2_inset.csv").display()
    )?;
    Ok((out, if monotone { 0 } else { 2 }))
}

pub fn cmd_sweep_fig3(cfg: &RunConfig) -> CmdResult {
    cfg.detector.validate(cfg.device.omega_nr)?;
    if cfg.sweep.fig3_points == 0 || cfg.sweep.fig3_r2.is_empty() {
        return Err(Box::new(crate::config::ConfigError(
            "empty fig3 grid".into(),
        )));
    }
    let d = derive(&cfg.device)?;
    let report = noise_amplitudes(&cfg.detector, cfg.env.tau_m, &d)?;
    let c = (report.noise.c_x, report.noise.c_p);
    let thetas = linear_grid(
        cfg.sweep.fig3_theta_lo,
        cfg.sweep.fig3_theta_hi,
        cfg.sweep.fig3_points,
    );
    let sweep = sweep_fig3(c, cfg.env.tau_m, &cfg.sweep.fig3_r2, &thetas)?;
    let p = cfg.output.precision;

    let mut csv = String::from("theta");
    for r2 in &sweep.r2_values {
        write!(csv, ",F_r2_{r2}")?;
    }
    csv.push('\n');
    for (theta, fs) in &sweep.rows {
        write!(csv, "{}", sig(*theta, p))?;
        for f in fs {
            write!(csv, ",{}", sig(*f, p))?;
        }
        csv.push('\n');
    }
    write_csv(&cfg.output.dir, "fig3.csv", &csv)?;

    // spot checks: monotone in Theta per column, columns ordered by r_2
    let n_cols = sweep.r2_values.len();
    let monotone = (0..n_cols).all(|col| {
        sweep
            .rows
            .windows(2)
            .all(|w| w[1].1[col] >= w[0].1[col] - 1e-12)
    });
    let sorted_r2 = sweep.r2_values.windows(2).all(|w| w[0] > w[1]);
    let ordered = !sorted_r2
        || sweep
            .rows
            .iter()
            .all(|(_, fs)| fs.windows(2).all(|w| w[0] >= w[1] - 1e-12));

    let mut out = String::new();
    writeln!(
        out,
        "finite-temperature sweep over {} thermal indices",
        thetas.len()
    )?;
    writeln!(
        out,
        "  F monotone in Theta: {}",
        if monotone { "ok" } else { "FAIL" }
    )?;
    writeln!(
        out,
        "  columns ordered by r_2: {}",
        if ordered { "ok" } else { "FAIL" }
    )?;
    writeln!(out, "  wrote {}", cfg.output.dir.join("fig3.csv").display())?;
    Ok((out, if monotone && ordered { 0 } else { 2 }))
}

pub fn cmd_detector(cfg: &RunConfig) -> CmdResult {
    cfg.detector.validate(cfg.device.omega_nr)?;
    let d = derive(&cfg.device)?;
    let report = noise_amplitudes(&cfg.detector, cfg.env.tau_m, &d)?;
    let p = cfg.output.precision;
    let mut out = String::new();
    writeln!(
        out,
        "SET readout chain at tau_m = {} s",
        sig(cfg.env.tau_m, p)
    )?;
    writeln!(out, "  sqrt(S_x) = {} m/sqrt(Hz)", sig(report.sqrt_s_x, p))?;
    writeln!(out, "  sqrt(S_p) = {} e/sqrt(Hz)", sig(report.sqrt_s_p, p))?;
    writeln!(out, "  Delta_x   = {} m", sig(report.delta_x_abs, p))?;
    writeln!(out, "  Delta_p   = {} e", sig(report.delta_p_abs, p))?;
    writeln!(out, "  q_zp      = {} e", sig(report.q_zp, p))?;
    writeln!(out, "  delta_x   = {}", sig(report.noise.delta_x, p))?;
    writeln!(out, "  delta_p   = {}", sig(report.noise.delta_p, p))?;
    writeln!(out, "  c_x       = {} sqrt(s)", sig(report.noise.c_x, p))?;
    writeln!(out, "  c_p       = {} sqrt(s)", sig(report.noise.c_p, p))?;
    writeln!(
        out,
        "  demodulation offset I_0 J_0(alpha_g) = {} A",
        sig(detector::demodulated_current(&cfg.detector, 0.0), p)
    )?;
    Ok((out, 0))
}

/// Brute-force cross-check: quadrature of the output Wigner function at the
/// configured operating point against the closed-form channel moments.
pub fn cmd_oracle(cfg: &RunConfig) -> CmdResult {
    cfg.detector.validate(cfg.device.omega_nr)?;
    let d = derive(&cfg.device)?;
    let env = EnvSpec::from_device(&cfg.device, cfg.env.r_2, cfg.env.tau_m, cfg.env.theta_a1)?;
    let report = noise_amplitudes(&cfg.detector, cfg.env.tau_m, &d)?;
    let input =
        GaussianState::thermal(env.theta_a1)?.displace(0, cfg.env.input_x, cfg.env.input_p)?;
    let grid = teleport_integral(
        &input,
        env.r_2,
        env.theta_a2,
        (report.noise.delta_x, report.noise.delta_p),
        41,
        None,
    )?;
    let (mean, cov) = grid.moments();
    let ch = channel_mu(env.r_2, env.theta_a2, &report.noise);
    let want_x = input.cov()[(0, 0)] + ch.mu_x / 2.0;
    let want_p = input.cov()[(1, 1)] + ch.mu_p / 2.0;
    let dev_x = (cov[(0, 0)] - want_x).abs() / want_x;
    let dev_p = (cov[(1, 1)] - want_p).abs() / want_p;
    let pass = dev_x < 0.02 && dev_p < 0.02;

    let p = cfg.output.precision;
    let mut out = String::new();
    writeln!(out, "Wigner quadrature vs closed-form channel")?;
    writeln!(
        out,
        "  output mean     = ({}, {})",
        sig(mean[0], p),
        sig(mean[1], p)
    )?;
    writeln!(
        out,
        "  Var_x quadrature = {}  closed form = {}  rel dev {}",
        sig(cov[(0, 0)], p),
        sig(want_x, p),
        sig(dev_x, p)
    )?;
    writeln!(
        out,
        "  Var_p quadrature = {}  closed form = {}  rel dev {}",
        sig(cov[(1, 1)], p),
        sig(want_p, p),
        sig(dev_p, p)
    )?;
    writeln!(out, "  within 2%: {}", if pass { "ok" } else { "FAIL" })?;
    Ok((out, if pass { 0 } else { 2 }))
}
