//! Memory kernels feeding the dephasing channels.
//!
//! Channel constructors take the kernel *value*; the functions here turn
//! physical parameters into that value. The random-telegraph kernel follows
//! the damped-oscillation form of Daffer et al. and the non-Markovian
//! dephasing default is `Ω(p) = 1 − 2p`. Both are defaults taken from the
//! literature and can be replaced with [`MemoryKernel::custom`].

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

const RANGE_TOL: f64 = 1e-12;

/// What the kernel's argument means.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelDomain {
    /// Time `t ≥ 0` in units of the inverse decay rate; `K(0) = 1`.
    Time,
    /// A probability-like parameter in `[0, 1]`.
    Probability,
}

/// Scalar kernel `s ↦ K(s)` with `|K(s)| ≤ 1` on its domain.
#[derive(Clone)]
pub struct MemoryKernel {
    label: String,
    domain: KernelDomain,
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for MemoryKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MemoryKernel")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl MemoryKernel {
    pub fn custom(
        label: impl Into<String>,
        domain: KernelDomain,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            domain,
            f: Arc::new(f),
        }
    }

    /// Random-telegraph kernel with decay rate `gamma` and coupling `b`.
    pub fn daffer(gamma: f64, b: f64) -> Result<Self> {
        check_rtn_params(gamma, b)?;
        Ok(Self::custom("daffer", KernelDomain::Time, move |t| {
            daffer_value(t, gamma, b)
        }))
    }

    /// `Ω(p) = 1 − 2p`.
    pub fn linear_dephasing() -> Self {
        Self::custom("linear", KernelDomain::Probability, |p| 1.0 - 2.0 * p)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> KernelDomain {
        self.domain
    }

    /// Evaluates the kernel, rejecting arguments outside the domain and
    /// values outside `[−1, 1]`. Values within rounding of ±1 are clamped.
    pub fn evaluate(&self, s: f64) -> Result<f64> {
        let in_domain = match self.domain {
            KernelDomain::Time => s.is_finite() && s >= 0.0,
            KernelDomain::Probability => (0.0..=1.0).contains(&s),
        };
        if !in_domain {
            let name = match self.domain {
                KernelDomain::Time => "t",
                KernelDomain::Probability => "p",
            };
            return Err(Error::param(name, s, "outside the kernel domain"));
        }
        let v = (self.f)(s);
        if !v.is_finite() || v.abs() > 1.0 + RANGE_TOL {
            return Err(Error::param(&self.label, v, "kernel value outside [-1, 1]"));
        }
        Ok(v.clamp(-1.0, 1.0))
    }
}

fn check_rtn_params(gamma: f64, b: f64) -> Result<()> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::param("gamma", gamma, "must be positive"));
    }
    if !(b.is_finite() && b > 0.0) {
        return Err(Error::param("b", b, "must be positive"));
    }
    Ok(())
}

fn daffer_value(t: f64, gamma: f64, b: f64) -> f64 {
    let disc = 4.0 * b * b - gamma * gamma;
    let decay = (-gamma * t).exp();
    if disc.abs() <= 1e-12 * gamma * gamma {
        (1.0 + gamma * t) * decay
    } else if disc > 0.0 {
        let w = disc.sqrt();
        decay * ((w * t).cos() + gamma / w * (w * t).sin())
    } else {
        let w = (-disc).sqrt();
        // cosh/sinh overflow long before the product does; fold the decay in.
        let plus = (-(gamma - w) * t).exp();
        let minus = (-(gamma + w) * t).exp();
        0.5 * (plus + minus) + 0.5 * gamma / w * (plus - minus)
    }
}

/// `Λ(t)` for random telegraph noise.
///
/// Oscillatory (non-Markovian) when `4b² > γ²`, monotone when `4b² < γ²`,
/// and `(1 + γt)e^{−γt}` at the boundary.
pub fn rtn_kernel(t: f64, gamma: f64, b: f64) -> Result<f64> {
    MemoryKernel::daffer(gamma, b)?.evaluate(t)
}

/// Default `Ω(p) = 1 − 2p` for non-Markovian dephasing.
pub fn nmd_kernel(p: f64) -> Result<f64> {
    MemoryKernel::linear_dephasing().evaluate(p)
}

/// Unruh angle from `cos r = (1 + e^{−2πωc/a})^{−1/2}`.
pub fn unruh_angle(omega: f64, acceleration: f64, c: f64) -> Result<f64> {
    if !(omega.is_finite() && omega >= 0.0) {
        return Err(Error::param("omega", omega, "must be non-negative"));
    }
    if !(acceleration.is_finite() && acceleration > 0.0) {
        return Err(Error::param(
            "acceleration",
            acceleration,
            "must be positive",
        ));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::param("c", c, "must be positive"));
    }
    let cos_r = (1.0 + (-2.0 * PI * omega * c / acceleration).exp()).powf(-0.5);
    Ok(cos_r.clamp(-1.0, 1.0).acos())
}
