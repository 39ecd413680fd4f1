//! Subcommand implementations: each returns rendered output text, leaving
//! argument parsing and exit-code mapping to main.

use crate::output::{csv_preamble, rows_to_csv, rows_to_json, ResultRow};
use serde_json::json;
use xy_entropy_core::asympt::{
    compute_moduli_with, det_asymptotic, entropy_closed, entropy_integral_with, entropy_series_with,
};
use xy_entropy_core::fredholm::{fredholm_det, KernelSpec};
use xy_entropy_core::model::{classify_with, ModelParams};
use xy_entropy_core::spectrum::{build_b_with, entropy_exact_with, log_det_exact, spectrum_nu};
use xy_entropy_core::{Complex64, Error, Result, Settings};

/// Largest block length for which the detcheck Fredholm column is computed;
/// beyond it the Nystrom size 16L makes the determinant impractically slow.
pub const FREDHOLM_L_MAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Which entropy routes a row evaluates.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MethodSet {
    pub exact: bool,
    pub series: bool,
    pub integral: bool,
    pub closed: bool,
}

impl MethodSet {
    pub fn all() -> Self {
        MethodSet {
            exact: true,
            series: true,
            integral: true,
            closed: true,
        }
    }

    pub fn is_empty(self) -> bool {
        !(self.exact || self.series || self.integral || self.closed)
    }
}

/// Evaluate one admissible (gamma, h) point. Errors propagate; sweep maps
/// them to row statuses, the entropy command maps them to exit codes.
pub fn compute_row(
    gamma: f64,
    h: f64,
    methods: MethodSet,
    l: Option<usize>,
    settings: &Settings,
) -> Result<ResultRow> {
    let params = ModelParams::new_with(gamma, h, settings.eps_phase)?;
    let regime = classify_with(&params, settings.eps_phase)?;

    // Moduli feed the series and integral routes and the tau0/k columns.
    // When neither route was requested the columns are still filled
    // opportunistically, but a failure only matters to the routes.
    let need_moduli = methods.series || methods.integral;
    let moduli = match compute_moduli_with(&regime, &params, settings.quad_tol) {
        Ok(m) => Some(m),
        Err(e) => {
            if need_moduli {
                return Err(e);
            }
            None
        }
    };

    let s_exact_l = if methods.exact {
        let l =
            l.ok_or_else(|| Error::SizeError("the exact finite-L route requires --L".into()))?;
        Some(entropy_exact_with(l, &params, settings)?.value)
    } else {
        None
    };
    let s_series = if methods.series {
        let m = moduli.as_ref().expect("moduli required above");
        Some(entropy_series_with(m, regime.sigma, settings.tau0_min)?.value)
    } else {
        None
    };
    let s_integral = if methods.integral {
        let m = moduli.as_ref().expect("moduli required above");
        Some(entropy_integral_with(m, regime.sigma, settings.tau0_min, settings.quad_tol)?.value)
    } else {
        None
    };
    let s_closed = if methods.closed {
        Some(entropy_closed(&params, &regime)?.value)
    } else {
        None
    };

    let values: Vec<f64> = [s_exact_l, s_series, s_integral, s_closed]
        .into_iter()
        .flatten()
        .collect();
    let max_pairwise_delta = if values.len() >= 2 {
        let mut worst = 0.0f64;
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                worst = worst.max((values[i] - values[j]).abs());
            }
        }
        Some(worst)
    } else {
        None
    };

    Ok(ResultRow {
        gamma,
        h,
        case_label: regime.case.to_string(),
        sigma: Some(regime.sigma),
        tau0: moduli.as_ref().map(|m| m.tau0),
        k: moduli.as_ref().map(|m| m.k),
        s_exact_l,
        s_series,
        s_integral,
        s_closed,
        max_pairwise_delta,
        status: "ok".into(),
    })
}

fn empty_row(gamma: f64, h: f64, status: &str) -> ResultRow {
    ResultRow {
        gamma,
        h,
        case_label: String::new(),
        sigma: None,
        tau0: None,
        k: None,
        s_exact_l: None,
        s_series: None,
        s_integral: None,
        s_closed: None,
        max_pairwise_delta: None,
        status: status.into(),
    }
}

/// Evaluate a gamma-major grid. Phase-boundary points become
/// "skipped:phase-boundary" rows; any other per-point failure becomes an
/// "error:numerical" row so one bad point cannot abort a long sweep. A row
/// is "ok" only if its methods agree to 1e-6, else "warn:spread".
pub fn sweep_rows(
    gammas: &[f64],
    hs: &[f64],
    methods: MethodSet,
    l: Option<usize>,
    settings: &Settings,
) -> Vec<ResultRow> {
    let mut rows = Vec::with_capacity(gammas.len() * hs.len());
    for &gamma in gammas {
        for &h in hs {
            let row = match compute_row(gamma, h, methods, l, settings) {
                Ok(mut row) => {
                    if row.max_pairwise_delta.is_some_and(|d| d >= 1e-6) {
                        row.status = "warn:spread".into();
                    }
                    row
                }
                Err(Error::PhaseBoundary(_)) => empty_row(gamma, h, "skipped:phase-boundary"),
                Err(_) => empty_row(gamma, h, "error:numerical"),
            };
            rows.push(row);
        }
    }
    rows
}

pub fn render_rows(rows: &[ResultRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => rows_to_csv(rows),
        OutputFormat::Json => rows_to_json(rows),
    }
}

/// Render the single-point entropy command: CSV keeps the sweep shape with
/// one data line; JSON is the bare row object.
pub fn render_row(row: &ResultRow, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => rows_to_csv(std::slice::from_ref(row)),
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(row).expect("row serializes");
            out.push('\n');
            out
        }
    }
}

pub struct ConvergeRow {
    pub l: usize,
    pub s_exact: f64,
    pub delta: f64,
}

pub struct ConvergeReport {
    pub gamma: f64,
    pub h: f64,
    pub s_infinity: f64,
    pub rows: Vec<ConvergeRow>,
    /// Least-squares slope of ln delta vs L over rows with delta > 1e-12
    /// (below that the gap sits at the accuracy floor of S_infinity).
    pub fitted_slope: Option<f64>,
    /// -ln|lambda_C|, the reference slope from the determinant error order.
    pub reference_slope: f64,
}

/// Exact finite-L entropy against the theta-series limit for L = 4, 8, ...
pub fn converge(gamma: f64, h: f64, l_max: usize, settings: &Settings) -> Result<ConvergeReport> {
    let params = ModelParams::new_with(gamma, h, settings.eps_phase)?;
    let regime = classify_with(&params, settings.eps_phase)?;
    let moduli = compute_moduli_with(&regime, &params, settings.quad_tol)?;
    let s_infinity = entropy_series_with(&moduli, regime.sigma, settings.tau0_min)?.value;

    let mut ls: Vec<usize> = (4..=l_max).step_by(4).collect();
    if ls.last() != Some(&l_max) {
        ls.push(l_max);
    }
    let mut rows = Vec::with_capacity(ls.len());
    for l in ls {
        let s_exact = entropy_exact_with(l, &params, settings)?.value;
        rows.push(ConvergeRow {
            l,
            s_exact,
            delta: (s_exact - s_infinity).abs(),
        });
    }

    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.delta > 1e-12)
        .map(|r| (r.l as f64, r.delta.ln()))
        .collect();
    let fitted_slope = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
    } else {
        None
    };

    Ok(ConvergeReport {
        gamma,
        h,
        s_infinity,
        rows,
        fitted_slope,
        reference_slope: -regime.lambda_c.norm().ln(),
    })
}

pub fn render_converge(rep: &ConvergeReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = csv_preamble();
            out.push_str("L,S_exact,S_infinity,delta\n");
            for r in &rep.rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.l, r.s_exact, rep.s_infinity, r.delta
                ));
            }
            match rep.fitted_slope {
                Some(s) => out.push_str(&format!("# fitted_slope = {s}\n")),
                None => out.push_str("# fitted_slope = (too few resolvable deltas)\n"),
            }
            out.push_str(&format!(
                "# reference_slope = {} (-ln|lambda_C|)\n",
                rep.reference_slope
            ));
            out
        }
        OutputFormat::Json => {
            let rows: Vec<_> = rep
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "L": r.l,
                        "S_exact": r.s_exact,
                        "S_infinity": rep.s_infinity,
                        "delta": r.delta,
                    })
                })
                .collect();
            let mut out = serde_json::to_string_pretty(&json!({
                "gamma": rep.gamma,
                "h": rep.h,
                "rows": rows,
                "fitted_slope": rep.fitted_slope,
                "reference_slope": rep.reference_slope,
            }))
            .expect("report serializes");
            out.push('\n');
            out
        }
    }
}

pub struct DetCheck {
    pub gamma: f64,
    pub h: f64,
    pub lambda: Complex64,
    pub l: usize,
    pub ln_det_exact: f64,
    pub ln_det_asymptotic: f64,
    /// None when L > FREDHOLM_L_MAX, with `note` explaining the omission.
    pub ln_det_fredholm: Option<f64>,
    pub n_used: Option<usize>,
    pub note: Option<&'static str>,
}

/// ln|D_L(lambda)| by the exact spectral product, the theta-function
/// asymptotics, and (for small L) the Nystrom Fredholm determinant.
pub fn detcheck(
    gamma: f64,
    h: f64,
    lambda: Complex64,
    l: usize,
    n: Option<usize>,
    settings: &Settings,
) -> Result<DetCheck> {
    let params = ModelParams::new_with(gamma, h, settings.eps_phase)?;
    let regime = classify_with(&params, settings.eps_phase)?;
    let spec = spectrum_nu(&build_b_with(l, &params, settings)?)?;
    let ln_det_exact = log_det_exact(lambda, &spec).re;
    let moduli = compute_moduli_with(&regime, &params, settings.quad_tol)?;
    let ln_det_asymptotic = det_asymptotic(lambda, l, &moduli, regime.sigma)?.re;

    let (ln_det_fredholm, n_used, note) = if l <= FREDHOLM_L_MAX {
        let n = n.unwrap_or_else(|| 512.max(16 * l));
        let ks = KernelSpec::new(l, lambda, params, n)?;
        (Some(fredholm_det(&ks)?.norm().ln()), Some(n), None)
    } else {
        (None, None, Some("fredholm column omitted for L > 8"))
    };

    Ok(DetCheck {
        gamma,
        h,
        lambda,
        l,
        ln_det_exact,
        ln_det_asymptotic,
        ln_det_fredholm,
        n_used,
        note,
    })
}

pub fn render_detcheck(d: &DetCheck, format: OutputFormat) -> String {
    let delta_ea = (d.ln_det_exact - d.ln_det_asymptotic).abs();
    let delta_ef = d.ln_det_fredholm.map(|f| (d.ln_det_exact - f).abs());
    match format {
        OutputFormat::Csv => {
            let mut out = csv_preamble();
            if let Some(note) = d.note {
                out.push_str(&format!("# note: {note}\n"));
            }
            out.push_str(
                "gamma,h,lambda_re,lambda_im,L,N,ln_det_exact,ln_det_asymptotic,\
                 ln_det_fredholm,delta_exact_asymptotic,delta_exact_fredholm\n",
            );
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                d.gamma,
                d.h,
                d.lambda.re,
                d.lambda.im,
                d.l,
                d.n_used.map(|n| n.to_string()).unwrap_or_default(),
                d.ln_det_exact,
                d.ln_det_asymptotic,
                d.ln_det_fredholm
                    .map(|v| format!("{v}"))
                    .unwrap_or_default(),
                delta_ea,
                delta_ef.map(|v| format!("{v}")).unwrap_or_default(),
            ));
            out
        }
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(&json!({
                "gamma": d.gamma,
                "h": d.h,
                "lambda_re": d.lambda.re,
                "lambda_im": d.lambda.im,
                "L": d.l,
                "N": d.n_used,
                "ln_det_exact": d.ln_det_exact,
                "ln_det_asymptotic": d.ln_det_asymptotic,
                "ln_det_fredholm": d.ln_det_fredholm,
                "delta_exact_asymptotic": delta_ea,
                "delta_exact_fredholm": delta_ef,
                "note": d.note,
            }))
            .expect("detcheck serializes");
            out.push('\n');
            out
        }
    }
}

/// The finite-L correlation spectrum nu_m, descending.
pub fn spectrum_list(gamma: f64, h: f64, l: usize, settings: &Settings) -> Result<Vec<f64>> {
    let params = ModelParams::new_with(gamma, h, settings.eps_phase)?;
    Ok(spectrum_nu(&build_b_with(l, &params, settings)?)?.nu)
}

pub fn render_spectrum(gamma: f64, h: f64, l: usize, nu: &[f64], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = csv_preamble();
            out.push_str("m,nu\n");
            for (m, v) in nu.iter().enumerate() {
                out.push_str(&format!("{m},{v}\n"));
            }
            out
        }
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(&json!({
                "gamma": gamma,
                "h": h,
                "L": l,
                "nu": nu,
            }))
            .expect("spectrum serializes");
            out.push('\n');
            out
        }
    }
}

/// Grid syntax: a single number, a comma list "0.2,0.5,0.8", or an inclusive
/// linspace "start:stop:count".
pub fn parse_grid(text: &str) -> std::result::Result<Vec<f64>, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty grid".into());
    }
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid '{text}': expected start:stop:count"));
        }
        let start: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|e| format!("grid start: {e}"))?;
        let stop: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|e| format!("grid stop: {e}"))?;
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|e| format!("grid count: {e}"))?;
        if count == 0 {
            return Err(format!("grid '{text}': count must be positive"));
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let step = (stop - start) / (count - 1) as f64;
        return Ok((0..count).map(|i| start + step * i as f64).collect());
    }
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|e| format!("grid value '{}': {e}", part.trim()))
        })
        .collect()
}

/// Sweep grids are validated up front so the only per-row rejection left is
/// the phase-boundary band.
pub fn validate_grid(name: &str, grid: &[f64], is_gamma: bool) -> std::result::Result<(), String> {
    for &v in grid {
        if !v.is_finite() {
            return Err(format!("{name} grid contains a non-finite value"));
        }
        if is_gamma && !(0.0 < v && v < 1.0) {
            return Err(format!("{name} grid value {v} outside (0, 1)"));
        }
        if !is_gamma && v <= 0.0 {
            return Err(format!("{name} grid value {v} must be positive"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_syntax_variants() {
        assert_eq!(parse_grid("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_grid("0.2, 0.5,0.8").unwrap(), vec![0.2, 0.5, 0.8]);
        let g = parse_grid("0:1:5").unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("2:2:1").unwrap(), vec![2.0]);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("a,b").is_err());
    }

    #[test]
    fn grid_validation() {
        assert!(validate_grid("gamma", &[0.2, 0.8], true).is_ok());
        assert!(validate_grid("gamma", &[0.0], true).is_err());
        assert!(validate_grid("gamma", &[1.0], true).is_err());
        assert!(validate_grid("h", &[0.5, 3.0], false).is_ok());
        assert!(validate_grid("h", &[-1.0], false).is_err());
    }

    #[test]
    fn row_skips_phase_boundary_points() {
        let settings = Settings::default();
        // L = 40: large enough that the exact route agrees with the
        // asymptotic ones to 1e-6, so the row keeps status "ok"
        let rows = sweep_rows(&[0.5], &[2.0, 3.0], MethodSet::all(), Some(40), &settings);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].status, "skipped:phase-boundary");
        assert!(rows[0].s_series.is_none());
        assert_eq!(rows[1].status, "ok");
        assert!(rows[1].max_pairwise_delta.unwrap() < 1e-6);
    }
}
