//! Optional key=value config file for the shared numerical settings.
//!
//! Recognized keys: eps_phase, tau0_min, quad_tol (f64) and l_max (usize).
//! `#` starts a comment; blank lines are ignored; unknown keys are errors so
//! typos cannot silently fall back to defaults.

use std::fs;
use std::path::Path;
use xy_entropy_core::Settings;

pub fn load_settings(path: &Path) -> Result<Settings, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
    parse_settings(&text).map_err(|e| format!("config {}: {e}", path.display()))
}

fn parse_settings(text: &str) -> Result<Settings, String> {
    let mut s = Settings::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value", idx + 1))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "eps_phase" => s.eps_phase = parse_f64(idx, key, value)?,
            "tau0_min" => s.tau0_min = parse_f64(idx, key, value)?,
            "quad_tol" => s.quad_tol = parse_f64(idx, key, value)?,
            "l_max" => {
                s.l_max = value
                    .parse()
                    .map_err(|e| format!("line {}: l_max: {e}", idx + 1))?;
            }
            _ => return Err(format!("line {}: unknown key '{key}'", idx + 1)),
        }
    }
    Ok(s)
}

fn parse_f64(idx: usize, key: &str, value: &str) -> Result<f64, String> {
    let v: f64 = value
        .parse()
        .map_err(|e| format!("line {}: {key}: {e}", idx + 1))?;
    if !v.is_finite() || v <= 0.0 {
        return Err(format!("line {}: {key} must be a positive number", idx + 1));
    }
    Ok(v)
}
