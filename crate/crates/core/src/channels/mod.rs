//! Kraus-operator channels and the built-in qubit noise models.

mod kernel;

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, DensityMatrix};

pub use kernel::{nmd_kernel, rtn_kernel, unruh_angle, KernelDomain, MemoryKernel};

/// Maximum entrywise deviation of `Σ K†K` from the identity.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Which built-in model a channel was constructed from, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "channel", rename_all = "lowercase")]
pub enum ChannelKind {
    Identity,
    Rtn { lambda: f64 },
    Nmd { omega: f64 },
    Pd { gamma: f64 },
    Ad { gamma: f64 },
    Gad { alpha: f64, xi: f64 },
    Unruh { r: f64 },
    Gdc { p: [f64; 4] },
    Custom,
}

impl ChannelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ChannelKind::Identity => "identity",
            ChannelKind::Rtn { .. } => "rtn",
            ChannelKind::Nmd { .. } => "nmd",
            ChannelKind::Pd { .. } => "pd",
            ChannelKind::Ad { .. } => "ad",
            ChannelKind::Gad { .. } => "gad",
            ChannelKind::Unruh { .. } => "unruh",
            ChannelKind::Gdc { .. } => "gdc",
            ChannelKind::Custom => "custom",
        }
    }

    /// Parameters under their CLI names.
    pub fn params(&self) -> BTreeMap<String, f64> {
        let pairs: Vec<(&str, f64)> = match *self {
            ChannelKind::Identity | ChannelKind::Custom => vec![],
            ChannelKind::Rtn { lambda } => vec![("lambda", lambda)],
            ChannelKind::Nmd { omega } => vec![("omega", omega)],
            ChannelKind::Pd { gamma } | ChannelKind::Ad { gamma } => vec![("gamma", gamma)],
            ChannelKind::Gad { alpha, xi } => vec![("alpha", alpha), ("xi", xi)],
            ChannelKind::Unruh { r } => vec![("r", r)],
            ChannelKind::Gdc { p } => vec![("p0", p[0]), ("p1", p[1]), ("p2", p[2]), ("p3", p[3])],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

/// A channel `ρ ↦ Σ K_i ρ K_i†` whose operators satisfy `Σ K_i†K_i = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    label: String,
    kind: ChannelKind,
    ops: Vec<ComplexMatrix>,
    adjoints: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validates and wraps a user-supplied operator list.
    pub fn new(label: impl Into<String>, ops: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_kind(label.into(), ChannelKind::Custom, ops)
    }

    fn with_kind(label: String, kind: ChannelKind, ops: Vec<ComplexMatrix>) -> Result<Self> {
        let first = ops.first().ok_or(Error::EmptyChannel)?;
        let dim = first.dim();
        if let Some(bad) = ops.iter().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.dim(),
            });
        }
        let adjoints: Vec<ComplexMatrix> = ops.iter().map(ComplexMatrix::adjoint).collect();
        let channel = Self {
            label,
            kind,
            ops,
            adjoints,
        };
        let deviation = channel.completeness_deviation();
        if deviation > COMPLETENESS_TOL {
            return Err(Error::Incomplete(deviation));
        }
        Ok(channel)
    }

    fn builtin(kind: ChannelKind, ops: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_kind(kind.label().to_string(), kind, ops)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix] {
        &self.ops
    }

    /// `max |Σ K†K − I|` entrywise.
    pub fn completeness_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut sum = ComplexMatrix::zeros(dim);
        for (k, kd) in self.ops.iter().zip(&self.adjoints) {
            sum = sum
                .add(&kd.matmul(k).expect("operator dimensions checked"))
                .expect("operator dimensions checked");
        }
        sum.max_abs_diff(&ComplexMatrix::identity(dim))
            .expect("same dimension")
    }

    /// Applies the channel; the output is revalidated as a density matrix.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(self.apply_matrix(rho.matrix())?)
    }

    /// `Σ K ρ K†` on a raw matrix without validating the result.
    pub fn apply_matrix(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rho.dim(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim());
        for (k, kd) in self.ops.iter().zip(&self.adjoints) {
            out = out.add(&k.matmul(rho)?.matmul(kd)?)?;
        }
        Ok(out)
    }
}

/// Free-function form of [`KrausChannel::apply`].
pub fn apply(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    ch.apply(rho)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn diag(a: f64, d: f64) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[a, 0.0], [0.0, d]]).expect("finite entries")
}

fn check_unit_interval(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::param(name, v, "must lie in [0, 1]"))
    }
}

fn check_kernel_value(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v.abs() <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(name, v, "kernel value must satisfy |v| <= 1"))
    }
}

fn dephasing_pair(value: f64) -> Vec<ComplexMatrix> {
    let plus = ((1.0 + value) / 2.0).sqrt();
    let minus = ((1.0 - value) / 2.0).sqrt();
    vec![
        ComplexMatrix::identity(2).scale(real(plus)),
        ComplexMatrix::pauli_z().scale(real(minus)),
    ]
}

pub fn identity() -> KrausChannel {
    KrausChannel::builtin(ChannelKind::Identity, vec![ComplexMatrix::identity(2)])
        .expect("identity is complete")
}

/// Random telegraph noise: `k₊I`, `k₋σ_z` with `k± = √((1 ± Λ)/2)`.
pub fn rtn(lambda: f64) -> Result<KrausChannel> {
    check_kernel_value("lambda", lambda)?;
    KrausChannel::builtin(ChannelKind::Rtn { lambda }, dephasing_pair(lambda))
}

/// Non-Markovian dephasing; same structure as [`rtn`] with kernel value `Ω`.
pub fn nmd(omega: f64) -> Result<KrausChannel> {
    check_kernel_value("omega", omega)?;
    KrausChannel::builtin(ChannelKind::Nmd { omega }, dephasing_pair(omega))
}

/// Phase damping: `diag(1, √(1−γ))` and `diag(0, √γ)`.
pub fn pd(gamma: f64) -> Result<KrausChannel> {
    check_unit_interval("gamma", gamma)?;
    KrausChannel::builtin(
        ChannelKind::Pd { gamma },
        vec![diag(1.0, (1.0 - gamma).sqrt()), diag(0.0, gamma.sqrt())],
    )
}

/// Amplitude damping towards `|0⟩`.
pub fn ad(gamma: f64) -> Result<KrausChannel> {
    check_unit_interval("gamma", gamma)?;
    let a1 = ComplexMatrix::from_real_rows(&[[0.0, gamma.sqrt()], [0.0, 0.0]])?;
    KrausChannel::builtin(
        ChannelKind::Ad { gamma },
        vec![diag(1.0, (1.0 - gamma).sqrt()), a1],
    )
}

/// Generalized amplitude damping with `β = 1 − α` and `P = 1 − ξ`.
pub fn gad(alpha: f64, xi: f64) -> Result<KrausChannel> {
    check_unit_interval("alpha", alpha)?;
    check_unit_interval("xi", xi)?;
    let beta = 1.0 - alpha;
    let p = 1.0 - xi;
    let g0 = diag(alpha.sqrt(), (alpha * xi).sqrt());
    let g1 = ComplexMatrix::from_real_rows(&[[0.0, (alpha * p).sqrt()], [0.0, 0.0]])?;
    let g3 = diag((beta * xi).sqrt(), beta.sqrt());
    let g4 = ComplexMatrix::from_real_rows(&[[0.0, 0.0], [(beta * p).sqrt(), 0.0]])?;
    KrausChannel::builtin(ChannelKind::Gad { alpha, xi }, vec![g0, g1, g3, g4])
}

/// Unruh channel: `diag(cos r, 1)` and `sin r |1⟩⟨0|`, `r ∈ [0, π/4]`.
pub fn unruh(r: f64) -> Result<KrausChannel> {
    if !(0.0..=FRAC_PI_4).contains(&r) {
        return Err(Error::param("r", r, "must lie in [0, pi/4]"));
    }
    let u1 = ComplexMatrix::from_real_rows(&[[0.0, 0.0], [r.sin(), 0.0]])?;
    KrausChannel::builtin(ChannelKind::Unruh { r }, vec![diag(r.cos(), 1.0), u1])
}

/// Generalized depolarizing (Pauli) channel `√p_i σ_i`.
pub fn gdc(p: [f64; 4]) -> Result<KrausChannel> {
    for (i, &w) in p.iter().enumerate() {
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::param(
                &format!("p{i}"),
                w,
                "weights must be non-negative",
            ));
        }
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::param("p0+p1+p2+p3", total, "weights must sum to 1"));
    }
    let ops = p
        .iter()
        .enumerate()
        .map(|(i, &w)| ComplexMatrix::pauli(i).scale(real(w.sqrt())))
        .collect();
    KrausChannel::builtin(ChannelKind::Gdc { p }, ops)
}

/// Labels accepted by [`from_params`].
pub const LABELS: [&str; 8] = ["identity", "rtn", "nmd", "pd", "ad", "gad", "unruh", "gdc"];

/// Parameter names each label expects, in order.
pub fn param_names(label: &str) -> Result<&'static [&'static str]> {
    Ok(match label {
        "identity" => &[],
        "rtn" => &["lambda"],
        "nmd" => &["omega"],
        "pd" | "ad" => &["gamma"],
        "gad" => &["alpha", "xi"],
        "unruh" => &["r"],
        "gdc" => &["p0", "p1", "p2", "p3"],
        other => return Err(Error::UnknownChannel(other.to_string())),
    })
}

/// Looks up the named parameters of `label` in `params`, rejecting missing or extra keys.
pub(crate) fn extract_params(label: &str, params: &BTreeMap<String, f64>) -> Result<Vec<f64>> {
    let names = param_names(label)?;
    if let Some(extra) = params.keys().find(|k| !names.contains(&k.as_str())) {
        return Err(Error::UnexpectedParameter {
            channel: label.to_string(),
            param: extra.clone(),
        });
    }
    names
        .iter()
        .map(|&n| {
            params
                .get(n)
                .copied()
                .ok_or_else(|| Error::MissingParameter {
                    channel: label.to_string(),
                    param: n.to_string(),
                })
        })
        .collect()
}

/// Builds a built-in channel from its label and named parameters.
pub fn from_params(label: &str, params: &BTreeMap<String, f64>) -> Result<KrausChannel> {
    let v = extract_params(label, params)?;
    match label {
        "identity" => Ok(identity()),
        "rtn" => rtn(v[0]),
        "nmd" => nmd(v[0]),
        "pd" => pd(v[0]),
        "ad" => ad(v[0]),
        "gad" => gad(v[0], v[1]),
        "unruh" => unruh(v[0]),
        "gdc" => gdc([v[0], v[1], v[2], v[3]]),
        _ => unreachable!("param_names rejects unknown labels"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{from_bloch, BlochVector};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn general_state(p: f64, q: Complex64) -> DensityMatrix {
        DensityMatrix::new(
            ComplexMatrix::from_rows(&[[c(1.0 - p, 0.0), q], [q.conj(), c(p, 0.0)]]).unwrap(),
        )
        .unwrap()
    }

    fn assert_close(a: &DensityMatrix, b: &ComplexMatrix, tol: f64) {
        let d = a.matrix().max_abs_diff(b).unwrap();
        assert!(d <= tol, "deviation {d:e}\n{a:?}\n{b:?}");
    }

    #[test]
    fn rtn_scales_coherences() {
        let (p, q, lambda) = (0.3, c(0.2, -0.25), 0.6);
        let out = rtn(lambda).unwrap().apply(&general_state(p, q)).unwrap();
        let expected = ComplexMatrix::from_rows(&[
            [c(1.0 - p, 0.0), q * lambda],
            [q.conj() * lambda, c(p, 0.0)],
        ])
        .unwrap();
        assert_close(&out, &expected, 1e-15);
    }

    #[test]
    fn ad_action_matches_closed_form() {
        let (p, q, g) = (0.4, c(0.1, 0.3), 0.35);
        let out = ad(g).unwrap().apply(&general_state(p, q)).unwrap();
        let s = (1.0 - g).sqrt();
        let expected = ComplexMatrix::from_rows(&[
            [c(1.0 - p * (1.0 - g), 0.0), q * s],
            [q.conj() * s, c(p * (1.0 - g), 0.0)],
        ])
        .unwrap();
        assert_close(&out, &expected, 1e-15);
    }

    #[test]
    fn identity_channel_is_identity() {
        let rho = general_state(0.2, c(0.1, 0.2));
        assert_eq!(identity().apply(&rho).unwrap(), rho);
    }

    #[test]
    fn dephasing_endpoints() {
        let rho = general_state(0.5, c(0.5, 0.0));
        assert_close(&rtn(1.0).unwrap().apply(&rho).unwrap(), rho.matrix(), 1e-15);
        let killed = rtn(0.0).unwrap().apply(&rho).unwrap();
        assert!(killed.matrix().is_diagonal(1e-15));
        assert_close(&nmd(1.0).unwrap().apply(&rho).unwrap(), rho.matrix(), 1e-15);
        assert!(nmd(0.0)
            .unwrap()
            .apply(&rho)
            .unwrap()
            .matrix()
            .is_diagonal(1e-15));
        assert_close(&pd(0.0).unwrap().apply(&rho).unwrap(), rho.matrix(), 1e-15);
        assert!(pd(1.0)
            .unwrap()
            .apply(&rho)
            .unwrap()
            .matrix()
            .is_diagonal(1e-15));
    }

    #[test]
    fn full_amplitude_damping_maps_to_ground() {
        let ch = ad(1.0).unwrap();
        let ground = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        for v in [[0.0, 0.0, -1.0], [0.3, -0.4, 0.1], [1.0, 0.0, 0.0]] {
            let out = ch
                .apply(&from_bloch(&BlochVector::new(v[0], v[1], v[2]).unwrap()))
                .unwrap();
            assert_close(&out, ground.matrix(), 1e-15);
        }
    }

    #[test]
    fn gad_reductions() {
        let rho = general_state(0.35, c(0.2, 0.1));
        for alpha in [0.0, 0.3, 1.0] {
            let out = gad(alpha, 1.0).unwrap().apply(&rho).unwrap();
            assert_close(&out, rho.matrix(), 1e-15);
        }
        for xi in [0.0, 0.4, 0.9] {
            let g = gad(1.0, xi).unwrap().apply(&rho).unwrap();
            let a = ad(1.0 - xi).unwrap().apply(&rho).unwrap();
            assert_close(&g, a.matrix(), 1e-15);
        }
    }

    #[test]
    fn constructors_reject_out_of_range_parameters() {
        assert!(rtn(1.01).is_err());
        assert!(nmd(-1.5).is_err());
        assert!(pd(-0.1).is_err());
        assert!(ad(1.1).is_err());
        assert!(gad(0.5, 1.2).is_err());
        assert!(gad(-0.1, 0.5).is_err());
        assert!(unruh(1.0).is_err());
        assert!(unruh(-0.01).is_err());
        assert!(gdc([0.5, 0.6, 0.0, -0.1]).is_err());
        assert!(gdc([0.5, 0.6, 0.0, 0.0]).is_err());
        assert!(rtn(f64::NAN).is_err());
    }

    #[test]
    fn custom_channel_validation() {
        assert_eq!(
            KrausChannel::new("empty", vec![]).unwrap_err(),
            Error::EmptyChannel
        );
        // The printed phase-damping pair diag(1, √(1−γ)), diag(1, √γ) is not complete.
        let g: f64 = 0.3;
        let printed = vec![diag(1.0, (1.0 - g).sqrt()), diag(1.0, g.sqrt())];
        assert!(matches!(
            KrausChannel::new("printed-pd", printed),
            Err(Error::Incomplete(_))
        ));
        let mixed = vec![ComplexMatrix::identity(2), ComplexMatrix::identity(3)];
        assert!(matches!(
            KrausChannel::new("mixed", mixed),
            Err(Error::DimensionMismatch { .. })
        ));
        let hadamard = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [1.0, -1.0]])
            .unwrap()
            .scale(real(std::f64::consts::FRAC_1_SQRT_2));
        let ch = KrausChannel::new("hadamard", vec![hadamard]).unwrap();
        assert_eq!(ch.kind(), ChannelKind::Custom);
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(matches!(
            pd(0.5).unwrap().apply(&rho),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unital_and_non_unital() {
        let mixed = DensityMatrix::maximally_mixed(2);
        for ch in [
            rtn(0.3).unwrap(),
            nmd(-0.4).unwrap(),
            pd(0.7).unwrap(),
            gdc([0.1, 0.2, 0.3, 0.4]).unwrap(),
        ] {
            assert_close(&ch.apply(&mixed).unwrap(), mixed.matrix(), 1e-12);
        }
        for ch in [
            ad(0.5).unwrap(),
            gad(0.3, 0.5).unwrap(),
            unruh(0.5).unwrap(),
        ] {
            let out = ch.apply(&mixed).unwrap();
            assert!(out.matrix().max_abs_diff(mixed.matrix()).unwrap() > 1e-3);
        }
    }

    #[test]
    fn from_params_dispatch() {
        let mut params = BTreeMap::new();
        params.insert("gamma".to_string(), 0.25);
        let ch = from_params("pd", &params).unwrap();
        assert_eq!(ch.kind(), ChannelKind::Pd { gamma: 0.25 });
        assert_eq!(ch.kind().params(), params);
        assert!(matches!(
            from_params("ad", &BTreeMap::new()),
            Err(Error::MissingParameter { .. })
        ));
        assert!(matches!(
            from_params("rtn", &params),
            Err(Error::UnexpectedParameter { .. })
        ));
        assert!(matches!(
            from_params("nope", &params),
            Err(Error::UnknownChannel(_))
        ));
    }

    #[test]
    fn unruh_decays_towards_excited_level() {
        let r: f64 = 0.6;
        let out = unruh(r)
            .unwrap()
            .apply(&DensityMatrix::diagonal(&[1.0, 0.0]).unwrap())
            .unwrap();
        assert_abs_diff_eq!(out.matrix().get(0, 0).re, r.cos().powi(2), epsilon = 1e-15);
        assert_abs_diff_eq!(out.matrix().get(1, 1).re, r.sin().powi(2), epsilon = 1e-15);
    }
}
