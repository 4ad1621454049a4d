//! Run configuration: a flat, sectioned key-value format with explicit
//! SI-unit suffixes. Unknown sections or keys are rejected; missing keys
//! fall back to the reference operating point.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;

use cvteleport_core::circuit::DeviceParams;
use cvteleport_core::detector::DetectorSpec;

/// Configuration parse failure with a line-oriented message.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Protocol environment block of the config.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvConfig {
    pub r_2: f64,
    pub tau_m: f64,
    /// Thermal index of the input state; `None` means a coherent input.
    pub theta_a1: Option<f64>,
    pub input_x: f64,
    pub input_p: f64,
    pub mc_samples: usize,
}

/// Sweep grids for the two figure reproductions.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub fig2_tau_lo: f64,
    pub fig2_tau_hi: f64,
    pub fig2_points: usize,
    pub fig2_eta: Vec<f64>,
    pub fig3_theta_lo: f64,
    pub fig3_theta_hi: f64,
    pub fig3_points: usize,
    pub fig3_r2: Vec<f64>,
}

/// Output location and CSV precision.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Significant digits in CSV output.
    pub precision: usize,
}

/// Complete run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub device: DeviceParams,
    pub detector: DetectorSpec,
    pub env: EnvConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            device: DeviceParams::reference_operating(),
            detector: DetectorSpec::reference(),
            env: EnvConfig {
                r_2: 1.5,
                tau_m: 50e-9,
                theta_a1: None,
                input_x: 1.3,
                input_p: -0.7,
                mc_samples: 10_000,
            },
            sweep: SweepConfig {
                fig2_tau_lo: 1e-9,
                fig2_tau_hi: 10e-6,
                fig2_points: 41,
                fig2_eta: vec![0.0, 1.0, 5.0],
                fig3_theta_lo: 1.0,
                fig3_theta_hi: 5.0,
                fig3_points: 41,
                fig3_r2: vec![2.0, 0.5, 0.0],
            },
            output: OutputConfig {
                dir: PathBuf::from("."),
                precision: 9,
            },
            seed: 7_2026,
        }
    }
}

/// Unit suffix table; every suffix is unambiguous across quantities.
const SUFFIXES: &[(&str, f64)] = &[
    ("GHz", 1e9),
    ("MHz", 1e6),
    ("kHz", 1e3),
    ("Hz", 1.0),
    ("aF", 1e-18),
    ("fF", 1e-15),
    ("pF", 1e-12),
    ("nF", 1e-9),
    ("ns", 1e-9),
    ("us", 1e-6),
    ("ms", 1e-3),
    ("ps", 1e-12),
    ("mK", 1e-3),
    ("fm", 1e-15),
    ("pm", 1e-12),
    ("nm", 1e-9),
    ("um", 1e-6),
    ("mV", 1e-3),
    ("kg", 1.0),
    ("mm", 1e-3),
    ("K", 1.0),
    ("V", 1.0),
    ("F", 1.0),
    ("s", 1.0),
    ("m", 1.0),
    ("C", 1.0),
    ("e", 1.602_176_634e-19),
];

/// Parses a value with an optional SI-unit suffix ("0.65 fF", "5MHz", "2.4").
pub fn parse_quantity(raw: &str) -> Result<f64, ConfigError> {
    let raw = raw.trim();
    if let Ok(v) = raw.parse::<f64>() {
        return Ok(v);
    }
    for (suffix, scale) in SUFFIXES {
        if let Some(prefix) = raw.strip_suffix(suffix) {
            let prefix = prefix.trim();
            if prefix.is_empty() {
                continue;
            }
            if let Ok(v) = prefix.parse::<f64>() {
                return Ok(v * scale);
            }
        }
    }
    Err(ConfigError(format!("cannot parse quantity '{raw}'")))
}

fn parse_list(raw: &str) -> Result<Vec<f64>, ConfigError> {
    raw.split(',')
        .map(parse_quantity)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| ConfigError(format!("in list '{raw}': {e}")))
}

fn parse_usize(raw: &str) -> Result<usize, ConfigError> {
    raw.trim()
        .parse::<usize>()
        .map_err(|_| ConfigError(format!("cannot parse integer '{raw}'")))
}

impl RunConfig {
    /// Parses a config text; keys not present keep the defaults.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut section = String::new();
        let mut seen: BTreeSet<String> = BTreeSet::new();

        for (lineno, raw_line) in text.lines().enumerate() {
            let line = match raw_line.find('#') {
                Some(i) => &raw_line[..i],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                match section.as_str() {
                    "device" | "detector" | "env" | "sweep" | "output" | "run" => {}
                    other => {
                        return Err(ConfigError(format!(
                            "line {}: unknown section [{other}]",
                            lineno + 1
                        )))
                    }
                }
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ConfigError(format!("line {}: expected 'key = value'", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let qualified = format!("{section}.{key}");
            if !seen.insert(qualified.clone()) {
                return Err(ConfigError(format!(
                    "line {}: duplicate key {qualified}",
                    lineno + 1
                )));
            }
            cfg.apply(&section, key, value)
                .map_err(|e| ConfigError(format!("line {}: {}", lineno + 1, e.0)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, section: &str, key: &str, value: &str) -> Result<(), ConfigError> {
        let q = parse_quantity;
        match (section, key) {
            ("device", "e_j") => self.device.e_j = q(value)?,
            ("device", "phi_ex") => self.device.phi_ex = q(value)?,
            // "auto" computes E_J^eff from (e_j, phi_ex) instead
            ("device", "e_j_eff") if value == "auto" => self.device.e_j_eff = None,
            ("device", "e_j_eff") => self.device.e_j_eff = Some(q(value)?),
            ("device", "c_j") => self.device.c_j = q(value)?,
            ("device", "c_g") => self.device.c_g = q(value)?,
            ("device", "c_x0") => self.device.c_x0 = q(value)?,
            ("device", "c_m") => self.device.c_m = q(value)?,
            ("device", "c_r") => self.device.c_r = q(value)?,
            ("device", "v_x0") => self.device.v_x0 = q(value)?,
            ("device", "v_g") => self.device.v_g = q(value)?,
            ("device", "q_0") => self.device.q_0 = q(value)?,
            ("device", "omega_nr") => self.device.omega_nr = q(value)?,
            ("device", "m_nr") => self.device.m_nr = q(value)?,
            ("device", "d_0") => self.device.d_0 = q(value)?,
            ("device", "omega_r") => self.device.omega_r = q(value)?,
            ("device", "temperature") => self.device.temperature = q(value)?,
            ("device", "q_factor") => self.device.q_factor = q(value)?,
            ("device", "gamma_d") => self.device.gamma_d = q(value)?,
            ("device", "lambda_ab") => self.device.lambda_ab_override = Some(q(value)?),
            ("device", "lambda_bc") => self.device.lambda_bc_override = Some(q(value)?),
            ("detector", "i_0") => self.detector.i_0 = q(value)?,
            ("detector", "alpha_g") => self.detector.alpha_g = q(value)?,
            ("detector", "sqrt_s_q") => self.detector.sqrt_s_q = q(value)?,
            ("detector", "c_x_d") => self.detector.c_x_d = q(value)?,
            ("detector", "v_x_d") => self.detector.v_x_d = q(value)?,
            ("detector", "d_1") => self.detector.d_1 = q(value)?,
            ("detector", "c_p_d") => self.detector.c_p_d = q(value)?,
            ("detector", "beta_hd") => self.detector.beta_hd = q(value)?,
            ("detector", "bandwidth") => self.detector.bandwidth = q(value)?,
            ("env", "r_2") => self.env.r_2 = q(value)?,
            ("env", "tau_m") => self.env.tau_m = q(value)?,
            ("env", "theta_a1") => self.env.theta_a1 = Some(q(value)?),
            ("env", "input_x") => self.env.input_x = q(value)?,
            ("env", "input_p") => self.env.input_p = q(value)?,
            ("env", "mc_samples") => self.env.mc_samples = parse_usize(value)?,
            ("sweep", "fig2_tau_lo") => self.sweep.fig2_tau_lo = q(value)?,
            ("sweep", "fig2_tau_hi") => self.sweep.fig2_tau_hi = q(value)?,
            ("sweep", "fig2_points") => self.sweep.fig2_points = parse_usize(value)?,
            ("sweep", "fig2_eta") => self.sweep.fig2_eta = parse_list(value)?,
            ("sweep", "fig3_theta_lo") => self.sweep.fig3_theta_lo = q(value)?,
            ("sweep", "fig3_theta_hi") => self.sweep.fig3_theta_hi = q(value)?,
            ("sweep", "fig3_points") => self.sweep.fig3_points = parse_usize(value)?,
            ("sweep", "fig3_r2") => self.sweep.fig3_r2 = parse_list(value)?,
            ("output", "dir") => self.output.dir = PathBuf::from(value),
            ("output", "precision") => self.output.precision = parse_usize(value)?,
            ("run", "seed") => {
                self.seed = value
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| ConfigError(format!("cannot parse seed '{value}'")))?
            }
            _ => {
                return Err(ConfigError(format!(
                    "unknown key '{key}' in section [{section}]"
                )))
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.env.tau_m <= 0.0 {
            return Err(ConfigError("env.tau_m must be positive".into()));
        }
        if self.env.mc_samples < 10 {
            return Err(ConfigError("env.mc_samples must be at least 10".into()));
        }
        if self.output.precision == 0 || self.output.precision > 17 {
            return Err(ConfigError("output.precision must be in 1..=17".into()));
        }
        Ok(())
    }

    /// Serializes the config in the same format `parse` accepts; numeric
    /// values use the shortest round-trip representation, so
    /// parse(dump(c)) == c bit-exactly.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let d = &self.device;
        writeln!(s, "[device]").unwrap();
        writeln!(s, "e_j = {}", d.e_j).unwrap();
        writeln!(s, "phi_ex = {}", d.phi_ex).unwrap();
        if let Some(ejeff) = d.e_j_eff {
            writeln!(s, "e_j_eff = {ejeff}").unwrap();
        }
        writeln!(s, "c_j = {}", d.c_j).unwrap();
        writeln!(s, "c_g = {}", d.c_g).unwrap();
        writeln!(s, "c_x0 = {}", d.c_x0).unwrap();
        writeln!(s, "c_m = {}", d.c_m).unwrap();
        writeln!(s, "c_r = {}", d.c_r).unwrap();
        writeln!(s, "v_x0 = {}", d.v_x0).unwrap();
        writeln!(s, "v_g = {}", d.v_g).unwrap();
        writeln!(s, "q_0 = {}", d.q_0).unwrap();
        writeln!(s, "omega_nr = {}", d.omega_nr).unwrap();
        writeln!(s, "m_nr = {}", d.m_nr).unwrap();
        writeln!(s, "d_0 = {}", d.d_0).unwrap();
        writeln!(s, "omega_r = {}", d.omega_r).unwrap();
        writeln!(s, "temperature = {}", d.temperature).unwrap();
        writeln!(s, "q_factor = {}", d.q_factor).unwrap();
        writeln!(s, "gamma_d = {}", d.gamma_d).unwrap();
        if let Some(v) = d.lambda_ab_override {
            writeln!(s, "lambda_ab = {v}").unwrap();
        }
        if let Some(v) = d.lambda_bc_override {
            writeln!(s, "lambda_bc = {v}").unwrap();
        }
        let det = &self.detector;
        writeln!(s, "\n[detector]").unwrap();
        writeln!(s, "i_0 = {}", det.i_0).unwrap();
        writeln!(s, "alpha_g = {}", det.alpha_g).unwrap();
        writeln!(s, "sqrt_s_q = {}", det.sqrt_s_q).unwrap();
        writeln!(s, "c_x_d = {}", det.c_x_d).unwrap();
        writeln!(s, "v_x_d = {}", det.v_x_d).unwrap();
        writeln!(s, "d_1 = {}", det.d_1).unwrap();
        writeln!(s, "c_p_d = {}", det.c_p_d).unwrap();
        writeln!(s, "beta_hd = {}", det.beta_hd).unwrap();
        writeln!(s, "bandwidth = {}", det.bandwidth).unwrap();
        let e = &self.env;
        writeln!(s, "\n[env]").unwrap();
        writeln!(s, "r_2 = {}", e.r_2).unwrap();
        writeln!(s, "tau_m = {}", e.tau_m).unwrap();
        if let Some(t) = e.theta_a1 {
            writeln!(s, "theta_a1 = {t}").unwrap();
        }
        writeln!(s, "input_x = {}", e.input_x).unwrap();
        writeln!(s, "input_p = {}", e.input_p).unwrap();
        writeln!(s, "mc_samples = {}", e.mc_samples).unwrap();
        let sw = &self.sweep;
        writeln!(s, "\n[sweep]").unwrap();
        writeln!(s, "fig2_tau_lo = {}", sw.fig2_tau_lo).unwrap();
        writeln!(s, "fig2_tau_hi = {}", sw.fig2_tau_hi).unwrap();
        writeln!(s, "fig2_points = {}", sw.fig2_points).unwrap();
        writeln!(s, "fig2_eta = {}", join_list(&sw.fig2_eta)).unwrap();
        writeln!(s, "fig3_theta_lo = {}", sw.fig3_theta_lo).unwrap();
        writeln!(s, "fig3_theta_hi = {}", sw.fig3_theta_hi).unwrap();
        writeln!(s, "fig3_points = {}", sw.fig3_points).unwrap();
        writeln!(s, "fig3_r2 = {}", join_list(&sw.fig3_r2)).unwrap();
        writeln!(s, "\n[output]").unwrap();
        writeln!(s, "dir = {}", self.output.dir.display()).unwrap();
        writeln!(s, "precision = {}", self.output.precision).unwrap();
        writeln!(s, "\n[run]").unwrap();
        writeln!(s, "seed = {}", self.seed).unwrap();
        s
    }
}

fn join_list(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
