//! The four subcommands as plain functions returning serializable reports.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use qchan_core::optimizer::{maximize_mu, mixed_state_diagnostic, OptimizerConfig};
use qchan_core::quantumness::{
    closed_form_for, incompatibility, visibilities, ClosedForm, ReferenceBranch,
};
use qchan_core::states::pure_state;
use qchan_core::{channels, StatePairParams};
use rayon::prelude::*;
use serde::Serialize;

use crate::channel_input::{resolve_channel, ResolvedChannel};
use crate::error::CliError;

/// Default pass threshold for `validate`.
pub const DEFAULT_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    pub channel: String,
    pub params: BTreeMap<String, f64>,
    pub kernel_value: Option<f64>,
    pub mu: f64,
    pub argmax: StatePairParams,
    pub closed_form: Option<f64>,
    pub abs_error: Option<f64>,
    /// Printed expressions kept for reference when no trusted closed form exists.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reference_branches: Vec<ReferenceBranch>,
    pub grid_mu: f64,
    pub grid_points_per_angle: usize,
    pub evaluations: u64,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixed_state_max: Option<f64>,
}

fn reference_branches(resolved: &ResolvedChannel) -> Vec<ReferenceBranch> {
    match closed_form_for(&resolved.channel.kind()) {
        Some(ClosedForm::Unverified { branches }) => branches,
        _ => Vec::new(),
    }
}

pub fn measure(
    label: &str,
    params: &BTreeMap<String, f64>,
    kernel: Option<&str>,
    cfg: &OptimizerConfig,
) -> Result<MeasureReport, CliError> {
    let resolved = resolve_channel(label, params, kernel)?;
    let result = maximize_mu(&resolved.channel, cfg)?;
    let mixed_state_max = if cfg.include_mixed_diagnostic {
        Some(mixed_state_diagnostic(&resolved.channel, cfg)?)
    } else {
        None
    };
    Ok(MeasureReport {
        channel: result.channel,
        params: params.clone(),
        kernel_value: resolved.kernel_value,
        mu: result.mu,
        argmax: result.argmax,
        closed_form: result.closed_form,
        abs_error: result.abs_error,
        reference_branches: reference_branches(&resolved),
        grid_mu: result.grid_mu,
        grid_points_per_angle: cfg.grid_points_per_angle,
        evaluations: result.evaluations,
        converged: result.converged,
        mixed_state_max,
    })
}

/// `name=start:stop:step`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRange {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SweepRange {
    pub fn parse(input: &str) -> Result<Self, CliError> {
        let bad = || CliError::usage(format!("expected name=start:stop:step, got `{input}`"));
        let (name, range) = input.split_once('=').ok_or_else(bad)?;
        let parts: Vec<f64> = range
            .split(':')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        let name = name.trim();
        if name.is_empty() || !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(bad());
        }
        if step <= 0.0 {
            return Err(CliError::usage("sweep step must be positive"));
        }
        if stop < start {
            return Err(CliError::usage("sweep stop must not be below start"));
        }
        Ok(Self {
            param: name.to_string(),
            start,
            stop,
            step,
        })
    }

    /// `start + i·step` for every `i` that stays within `stop` (up to rounding).
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| (self.start + i as f64 * self.step).min(self.stop))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub mu_numeric: f64,
    pub mu_closed_form: Option<f64>,
    pub abs_error: Option<f64>,
    pub kernel_value: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub channel: String,
    pub sweep_param: String,
    pub fixed: BTreeMap<String, f64>,
    pub kernel: Option<String>,
    pub rows: Vec<SweepRow>,
}

/// Runs the sweep; rows come back in ascending order of the swept value
/// whatever the thread count.
pub fn sweep(
    label: &str,
    fixed: &BTreeMap<String, f64>,
    range: &SweepRange,
    kernel: Option<&str>,
    cfg: &OptimizerConfig,
) -> Result<SweepReport, CliError> {
    if fixed.contains_key(&range.param) {
        return Err(CliError::usage(format!(
            "`{}` is both swept and fixed",
            range.param
        )));
    }
    let values = range.values();
    // Resolve every point first so parameter errors surface before any work.
    let channels: Vec<ResolvedChannel> = values
        .iter()
        .map(|&v| {
            let mut params = fixed.clone();
            params.insert(range.param.clone(), v);
            resolve_channel(label, &params, kernel)
        })
        .collect::<Result<_, _>>()?;
    let rows = values
        .par_iter()
        .zip(channels.par_iter())
        .map(|(&value, resolved)| {
            let r = maximize_mu(&resolved.channel, cfg)?;
            Ok(SweepRow {
                value,
                mu_numeric: r.mu,
                mu_closed_form: r.closed_form,
                abs_error: r.abs_error,
                kernel_value: resolved.kernel_value,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(SweepReport {
        channel: label.to_string(),
        sweep_param: range.param.clone(),
        fixed: fixed.clone(),
        kernel: kernel.map(str::to_string),
        rows,
    })
}

// `Debug` is the shortest string that parses back to the same bits, with an
// exponent for very large or small magnitudes.
fn csv_number(x: f64) -> String {
    format!("{x:?}")
}

fn csv_field(v: Option<f64>) -> String {
    v.map(csv_number).unwrap_or_default()
}

/// CSV with header `<sweep_param>,mu_numeric,mu_closed_form,abs_error,kernel_value`.
/// Missing values are empty fields.
pub fn write_sweep_csv<W: Write>(report: &SweepReport, out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::runtime(e.to_string());
    w.write_record([
        report.sweep_param.as_str(),
        "mu_numeric",
        "mu_closed_form",
        "abs_error",
        "kernel_value",
    ])
    .map_err(io)?;
    for row in &report.rows {
        w.write_record([
            csv_number(row.value),
            csv_number(row.mu_numeric),
            csv_field(row.mu_closed_form),
            csv_field(row.abs_error),
            csv_field(row.kernel_value),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationRow {
    pub channel: String,
    pub params: BTreeMap<String, f64>,
    pub mu_numeric: f64,
    pub mu_closed_form: Option<f64>,
    pub abs_error: Option<f64>,
    /// `None` for informational rows, which do not affect the verdict.
    pub pass: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reference_branches: Vec<ReferenceBranch>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub tolerance: f64,
    pub grid_points_per_angle: usize,
    pub rows: Vec<ValidationRow>,
    pub failures: usize,
    pub overall_pass: bool,
}

fn point(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Points used by `validate`: `(channel, params, asserted)`.
pub fn validation_points() -> Vec<(&'static str, BTreeMap<String, f64>, bool)> {
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut pts = Vec::new();
    for &v in &grid {
        pts.push(("rtn", point(&[("lambda", v)]), true));
    }
    for &v in &grid {
        pts.push(("nmd", point(&[("omega", v)]), true));
    }
    for &v in &grid {
        pts.push(("pd", point(&[("gamma", v)]), true));
    }
    for &v in &grid {
        pts.push(("ad", point(&[("gamma", v)]), true));
    }
    for r in [0.0, PI / 8.0, PI / 6.0, PI / 4.0] {
        pts.push(("unruh", point(&[("r", r)]), true));
    }
    for p in gdc_sample() {
        pts.push((
            "gdc",
            point(&[("p0", p[0]), ("p1", p[1]), ("p2", p[2]), ("p3", p[3])]),
            true,
        ));
    }
    for (alpha, xi) in [(0.5, 0.6), (0.3, 0.9), (1.0, 0.5)] {
        pts.push(("gad", point(&[("alpha", alpha), ("xi", xi)]), false));
    }
    pts
}

/// Ten simplex points: the vertices, the centroid and five interior points.
pub fn gdc_sample() -> [[f64; 4]; 10] {
    [
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.25, 0.25, 0.25, 0.25],
        [0.7, 0.1, 0.1, 0.1],
        [0.1, 0.1, 0.1, 0.7],
        [0.4, 0.3, 0.2, 0.1],
        [0.5, 0.2, 0.2, 0.1],
        [0.6, 0.0, 0.4, 0.0],
    ]
}

pub fn validate(tol: f64, cfg: &OptimizerConfig) -> Result<ValidationReport, CliError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::usage("--tol must be positive"));
    }
    let rows = validation_points()
        .into_par_iter()
        .map(|(label, params, asserted)| {
            let resolved = resolve_channel(label, &params, None)?;
            let r = maximize_mu(&resolved.channel, cfg)?;
            let pass = if asserted {
                Some(r.abs_error.is_some_and(|e| e <= tol))
            } else {
                None
            };
            Ok(ValidationRow {
                channel: label.to_string(),
                params,
                mu_numeric: r.mu,
                mu_closed_form: r.closed_form,
                abs_error: r.abs_error,
                pass,
                reference_branches: reference_branches(&resolved),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let failures = rows.iter().filter(|r| r.pass == Some(false)).count();
    Ok(ValidationReport {
        tolerance: tol,
        grid_points_per_angle: cfg.grid_points_per_angle,
        rows,
        failures,
        overall_pass: failures == 0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct VisibilityReport {
    pub channel: String,
    pub params: BTreeMap<String, f64>,
    pub x: f64,
    pub phi: f64,
    pub v1: f64,
    pub v2: f64,
    /// `4(v1 − v2)`
    pub incompatibility_from_visibilities: f64,
    /// `2‖[ρ, σ]‖²` computed directly.
    pub incompatibility: f64,
}

/// Visibilities of the channel outputs for the maximally non-commuting pair at `(x, φ)`.
pub fn visibility(
    label: &str,
    params: &BTreeMap<String, f64>,
    kernel: Option<&str>,
    x: f64,
    phi: f64,
) -> Result<VisibilityReport, CliError> {
    if !(x.is_finite() && phi.is_finite()) {
        return Err(CliError::usage("--x and --phi must be finite"));
    }
    let resolved = resolve_channel(label, params, kernel)?;
    let ch = &resolved.channel;
    let a = ch.apply(&pure_state(x, phi))?;
    let b = ch.apply(&pure_state(x + PI / 2.0, phi))?;
    let v = visibilities(&a, &b)?;
    Ok(VisibilityReport {
        channel: label.to_string(),
        params: params.clone(),
        x,
        phi,
        v1: v.v1,
        v2: v.v2,
        incompatibility_from_visibilities: v.incompatibility(),
        incompatibility: incompatibility(&a, &b)?,
    })
}

/// Labels of the built-in channels, for help output.
pub fn channel_labels() -> &'static [&'static str] {
    &channels::LABELS
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_range_parsing_and_values() {
        let r = SweepRange::parse("gamma=0:1:0.1").unwrap();
        let v = r.values();
        assert_eq!(v.len(), 11);
        assert_eq!(v[0], 0.0);
        assert_eq!(*v.last().unwrap(), 1.0);
        assert!(v.windows(2).all(|w| w[0] < w[1]));

        assert_eq!(SweepRange::parse("t=0:5:0.5").unwrap().values().len(), 11);
        assert_eq!(SweepRange::parse("t=0:1:0.3").unwrap().values().len(), 4);
        assert_eq!(SweepRange::parse("t=2:2:1").unwrap().values(), vec![2.0]);
        assert!(SweepRange::parse("gamma=0:1").is_err());
        assert!(SweepRange::parse("gamma=0:1:0").is_err());
        assert!(SweepRange::parse("gamma=1:0:0.1").is_err());
        assert!(SweepRange::parse("=0:1:0.1").is_err());
    }

    #[test]
    fn sweep_rows_are_ascending_and_match_closed_form() {
        let cfg = OptimizerConfig::default().with_grid(12);
        let range = SweepRange::parse("gamma=0:1:0.25").unwrap();
        let report = sweep("pd", &BTreeMap::new(), &range, None, &cfg).unwrap();
        assert_eq!(report.rows.len(), 5);
        for row in &report.rows {
            assert!((row.mu_numeric - (1.0 - row.value)).abs() < 1e-6);
        }
        assert!(report.rows.windows(2).all(|w| w[0].value < w[1].value));
    }

    #[test]
    fn sweep_rejects_param_that_is_also_fixed() {
        let cfg = OptimizerConfig::default().with_grid(4);
        let range = SweepRange::parse("gamma=0:1:0.5").unwrap();
        let fixed = point(&[("gamma", 0.5)]);
        assert!(matches!(
            sweep("pd", &fixed, &range, None, &cfg),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let report = SweepReport {
            channel: "pd".into(),
            sweep_param: "gamma".into(),
            fixed: BTreeMap::new(),
            kernel: None,
            rows: vec![SweepRow {
                value: 0.5,
                mu_numeric: 0.5,
                mu_closed_form: Some(0.5),
                abs_error: Some(0.0),
                kernel_value: None,
            }],
        };
        let mut buf = Vec::new();
        write_sweep_csv(&report, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "gamma,mu_numeric,mu_closed_form,abs_error,kernel_value\n0.5,0.5,0.5,0.0,\n"
        );
    }

    #[test]
    fn visibility_matches_direct_incompatibility() {
        let r = visibility("pd", &point(&[("gamma", 0.3)]), None, 0.4, 1.1).unwrap();
        assert!((r.incompatibility_from_visibilities - r.incompatibility).abs() < 1e-12);
    }

    #[test]
    fn validation_points_cover_the_fixed_grid() {
        let pts = validation_points();
        assert_eq!(pts.iter().filter(|p| p.2).count(), 5 * 4 + 4 + 10);
        assert!(pts.iter().filter(|p| !p.2).all(|p| p.0 == "gad"));
        for p in gdc_sample() {
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
