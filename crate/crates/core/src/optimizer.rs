//! Maximization of output incompatibility over pairs of pure input states.
//!
//! Stage one scans a uniform grid over both Bloch spheres, four angles in
//! total. Polar angles include both poles; azimuths drop the redundant `2π`
//! endpoint. Stage two polishes the best grid point with a Nelder–Mead simplex
//! on the negated objective. Grid ties resolve to the lexicographically
//! smallest angle tuple, so serial and parallel scans agree exactly.

use std::f64::consts::{PI, TAU};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::matrix::{from_bloch, ComplexMatrix};
use crate::quantumness::{
    closed_form_for, incompatibility, incompatibility_matrices, QuantumnessResult,
};
use crate::sampling::ball_point;
use crate::states::{max_noncommuting_pair, pure_state, StatePairParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub grid_points_per_angle: usize,
    pub refinement_iterations: usize,
    pub refinement_tolerance: f64,
    pub include_mixed_diagnostic: bool,
    pub mixed_samples: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            grid_points_per_angle: 24,
            refinement_iterations: 200,
            refinement_tolerance: 1e-10,
            include_mixed_diagnostic: false,
            mixed_samples: 2000,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_grid(mut self, n: usize) -> Self {
        self.grid_points_per_angle = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid_points_per_angle < 2 {
            return Err(Error::InvalidConfig(
                "grid needs at least 2 points per angle".into(),
            ));
        }
        if self.refinement_iterations == 0 {
            return Err(Error::InvalidConfig(
                "refinement_iterations must be positive".into(),
            ));
        }
        if !(self.refinement_tolerance.is_finite() && self.refinement_tolerance > 0.0) {
            return Err(Error::InvalidConfig(
                "refinement_tolerance must be positive".into(),
            ));
        }
        Ok(())
    }
}

fn require_qubit(ch: &KrausChannel) -> Result<()> {
    if ch.dim() != 2 {
        return Err(Error::UnsupportedDimension(ch.dim()));
    }
    Ok(())
}

/// Angle of the `i`-th grid point along a polar axis (poles included).
fn polar(i: usize, n: usize) -> f64 {
    PI * i as f64 / (n - 1) as f64
}

/// Angle of the `j`-th grid point along an azimuthal axis (2π excluded).
fn azimuth(j: usize, n: usize) -> f64 {
    TAU * j as f64 / n as f64
}

/// Channel outputs for every single-state grid point, indexed `i * n + j`.
fn grid_outputs(ch: &KrausChannel, n: usize) -> Result<Vec<ComplexMatrix>> {
    (0..n * n)
        .map(|k| {
            let rho = pure_state(polar(k / n, n), azimuth(k % n, n));
            ch.apply_matrix(rho.matrix())
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct GridBest {
    value: f64,
    /// Flat index `(ia * n + ja) * n² + (ib * n + jb)`.
    index: usize,
}

impl GridBest {
    /// Larger value wins; equal values go to the smaller index.
    fn better(self, other: Self) -> Self {
        match self.value.total_cmp(&other.value) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => {
                if self.index <= other.index {
                    self
                } else {
                    other
                }
            }
        }
    }
}

fn grid_scan(outputs: &[ComplexMatrix]) -> GridBest {
    let m = outputs.len();
    let start = GridBest {
        value: f64::NEG_INFINITY,
        index: usize::MAX,
    };
    (0..m)
        .into_par_iter()
        .map(|a| {
            let mut best = start;
            for b in 0..m {
                let v = incompatibility_matrices(&outputs[a], &outputs[b])
                    .expect("grid outputs share the channel dimension");
                best = best.better(GridBest {
                    value: v,
                    index: a * m + b,
                });
            }
            best
        })
        .reduce(|| start, GridBest::better)
}

fn objective(ch: &KrausChannel, p: &[f64; 4]) -> f64 {
    let a = ch
        .apply_matrix(pure_state(p[0], p[1]).matrix())
        .expect("qubit channel");
    let b = ch
        .apply_matrix(pure_state(p[2], p[3]).matrix())
        .expect("qubit channel");
    incompatibility_matrices(&a, &b).expect("qubit outputs")
}

/// Result of a derivative-free minimization.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SimplexResult {
    pub x: [f64; 4],
    pub value: f64,
    pub evaluations: u64,
    pub converged: bool,
}

/// Nelder–Mead minimization with standard coefficients.
///
/// Stops once every vertex lies within `tol` (Euclidean) of the best one, or
/// after `max_iter` iterations.
pub(crate) fn nelder_mead<F>(
    f: F,
    x0: [f64; 4],
    step: f64,
    max_iter: usize,
    tol: f64,
) -> SimplexResult
where
    F: Fn(&[f64; 4]) -> f64,
{
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let mut evaluations = 0u64;
    let mut eval = |x: &[f64; 4]| {
        evaluations += 1;
        f(x)
    };
    let lerp = |from: &[f64; 4], to: &[f64; 4], t: f64| -> [f64; 4] {
        std::array::from_fn(|k| from[k] + t * (to[k] - from[k]))
    };

    let mut simplex: Vec<([f64; 4], f64)> = Vec::with_capacity(5);
    simplex.push((x0, eval(&x0)));
    for k in 0..4 {
        let mut x = x0;
        x[k] += step;
        simplex.push((x, eval(&x)));
    }

    let mut converged = false;
    for _ in 0..max_iter {
        // Stable sort keeps the older vertex first among equals.
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&best)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        if diameter < tol {
            converged = true;
            break;
        }

        let (worst, f_worst) = simplex[4];
        let f_second = simplex[3].1;
        let f_best = simplex[0].1;
        let centroid: [f64; 4] =
            std::array::from_fn(|k| simplex[..4].iter().map(|(x, _)| x[k]).sum::<f64>() / 4.0);

        let reflected = lerp(&centroid, &worst, -REFLECT);
        let f_reflected = eval(&reflected);

        if f_reflected < f_best {
            let expanded = lerp(&centroid, &reflected, EXPAND);
            let f_expanded = eval(&expanded);
            simplex[4] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
            continue;
        }
        if f_reflected < f_second {
            simplex[4] = (reflected, f_reflected);
            continue;
        }

        let (contracted, f_contracted, accept) = if f_reflected < f_worst {
            let c = lerp(&centroid, &reflected, CONTRACT);
            let fc = eval(&c);
            (c, fc, fc <= f_reflected)
        } else {
            let c = lerp(&centroid, &worst, CONTRACT);
            let fc = eval(&c);
            (c, fc, fc < f_worst)
        };
        if accept {
            simplex[4] = (contracted, f_contracted);
            continue;
        }

        let anchor = simplex[0].0;
        for vertex in simplex.iter_mut().skip(1) {
            let x = lerp(&anchor, &vertex.0, SHRINK);
            *vertex = (x, eval(&x));
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    SimplexResult {
        x: simplex[0].0,
        value: simplex[0].1,
        evaluations,
        converged,
    }
}

/// Channel quantumness `μ = max M(Φ[ρ_a], Φ[ρ_b])` over pure input pairs.
///
/// Hitting the iteration cap is not an error; `converged` is cleared instead.
pub fn maximize_mu(ch: &KrausChannel, cfg: &OptimizerConfig) -> Result<QuantumnessResult> {
    require_qubit(ch)?;
    cfg.validate()?;
    let n = cfg.grid_points_per_angle;

    let outputs = grid_outputs(ch, n)?;
    let best = grid_scan(&outputs);
    let m = n * n;
    let (a, b) = (best.index / m, best.index % m);
    let start = [
        polar(a / n, n),
        azimuth(a % n, n),
        polar(b / n, n),
        azimuth(b % n, n),
    ];

    let refined = nelder_mead(
        |p| -objective(ch, p),
        start,
        PI / (n - 1) as f64,
        cfg.refinement_iterations,
        cfg.refinement_tolerance,
    );
    let (mu, angles) = if -refined.value > best.value {
        (-refined.value, refined.x)
    } else {
        (best.value, start)
    };

    let closed_form = closed_form_for(&ch.kind()).and_then(|c| c.trusted());
    log::debug!(
        "{}: grid {:.12} refined {:.12} ({} simplex evaluations)",
        ch.label(),
        best.value,
        mu,
        refined.evaluations
    );
    Ok(QuantumnessResult {
        channel: ch.label().to_string(),
        mu,
        argmax: StatePairParams::new(angles[0], angles[1], angles[2], angles[3])?,
        closed_form,
        abs_error: closed_form.map(|c| (mu - c).abs()),
        grid_mu: best.value,
        evaluations: (m * m) as u64 + refined.evaluations,
        converged: refined.converged,
    })
}

/// Exhaustive maximum over the `n⁴` grid, no refinement.
///
/// Computed serially through the validated public operations. A lower bound
/// on the true maximum.
pub fn brute_force_mu(ch: &KrausChannel, n: usize) -> Result<f64> {
    require_qubit(ch)?;
    if n < 16 {
        return Err(Error::InvalidConfig(format!(
            "brute-force grid needs n >= 16, got {n}"
        )));
    }
    let mut outputs = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            outputs.push(ch.apply(&pure_state(polar(i, n), azimuth(j, n)))?);
        }
    }
    let mut best = f64::NEG_INFINITY;
    for a in &outputs {
        for b in &outputs {
            best = best.max(incompatibility(a, b)?);
        }
    }
    Ok(best)
}

/// Largest output incompatibility over uniformly random mixed input pairs.
///
/// A check on restricting [`maximize_mu`] to pure inputs: the returned value
/// should never exceed the pure-state maximum. It is logged and never used as μ.
pub fn mixed_state_diagnostic(ch: &KrausChannel, cfg: &OptimizerConfig) -> Result<f64> {
    require_qubit(ch)?;
    if !cfg.include_mixed_diagnostic {
        return Err(Error::InvalidConfig(
            "mixed-state diagnostic is disabled".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = 0.0f64;
    for _ in 0..cfg.mixed_samples {
        let a = ch.apply(&from_bloch(&ball_point(&mut rng)))?;
        let b = ch.apply(&from_bloch(&ball_point(&mut rng)))?;
        best = best.max(incompatibility(&a, &b)?);
    }
    log::info!(
        "{}: mixed-state diagnostic max M = {best:.12} over {} pairs",
        ch.label(),
        cfg.mixed_samples
    );
    Ok(best)
}

/// Output incompatibility of the maximally noncommuting probe at `(x, φ)`.
pub fn probe_incompatibility(ch: &KrausChannel, x: f64, phi: f64) -> Result<f64> {
    require_qubit(ch)?;
    let (a, b) = max_noncommuting_pair(x, phi);
    incompatibility(&ch.apply(&a)?, &ch.apply(&b)?)
}
