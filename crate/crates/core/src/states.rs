//! Parameterized pure-state pairs used to probe channels.
//!
//! A single qubit state is written `cos(x/2)|0⟩ + e^{−iφ} sin(x/2)|1⟩`, whose
//! density matrix carries `e^{+iφ} sin(x)/2` in the upper off-diagonal entry.
//! In Bloch coordinates that is `(sin x cos φ, −sin x sin φ, cos x)`. Every
//! angle pair in this crate (optimizer grids, argmax reports, the CLI) uses
//! this convention.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{BlochVector, ComplexMatrix, DensityMatrix};

/// Angles `(x, φ)` of the first state and `(y, ξ)` of the second, in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatePairParams {
    pub x: f64,
    pub phi: f64,
    pub y: f64,
    pub xi: f64,
}

impl StatePairParams {
    /// Validates finiteness and reduces to `x, y ∈ [0, π]`, `φ, ξ ∈ [0, 2π)`.
    ///
    /// A polar angle in `(π, 2π)` is reflected and its azimuth shifted by `π`,
    /// which describes the same state.
    pub fn new(x: f64, phi: f64, y: f64, xi: f64) -> Result<Self> {
        if ![x, phi, y, xi].iter().all(|a| a.is_finite()) {
            return Err(Error::NonFinite);
        }
        let (x, phi) = canonical_angles(x, phi);
        let (y, xi) = canonical_angles(y, xi);
        Ok(Self { x, phi, y, xi })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.x, self.phi, self.y, self.xi]
    }
}

fn wrap_tau(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs.
    if r >= TAU {
        0.0
    } else {
        r
    }
}

pub(crate) fn canonical_angles(polar: f64, azimuth: f64) -> (f64, f64) {
    let p = wrap_tau(polar);
    if p > PI {
        (TAU - p, wrap_tau(azimuth + PI))
    } else {
        (p, wrap_tau(azimuth))
    }
}

/// Density matrix of `cos(x/2)|0⟩ + e^{−iφ} sin(x/2)|1⟩`.
pub fn pure_state(x: f64, phi: f64) -> DensityMatrix {
    let (half_s, half_c) = (x / 2.0).sin_cos();
    let off = Complex64::from_polar(x.sin() / 2.0, phi);
    let mat = ComplexMatrix::new(
        2,
        vec![
            Complex64::new(half_c * half_c, 0.0),
            off,
            off.conj(),
            Complex64::new(half_s * half_s, 0.0),
        ],
    )
    .expect("angles are finite");
    DensityMatrix::from_matrix_unchecked(mat)
}

/// Bloch vector of [`pure_state`].
pub fn pure_bloch(x: f64, phi: f64) -> BlochVector {
    let (s, c) = x.sin_cos();
    BlochVector {
        x: s * phi.cos(),
        y: -s * phi.sin(),
        z: c,
    }
}

/// `(ρ_a, ρ_b)` for the given angles.
pub fn state_pair(p: &StatePairParams) -> (DensityMatrix, DensityMatrix) {
    (pure_state(p.x, p.phi), pure_state(p.y, p.xi))
}

/// The pair with `y = x + π/2`, `ξ = φ`; its incompatibility is 1 for every `(x, φ)`.
pub fn max_noncommuting_pair(x: f64, phi: f64) -> (DensityMatrix, DensityMatrix) {
    (pure_state(x, phi), pure_state(x + FRAC_PI_2, phi))
}

/// Parameters of [`max_noncommuting_pair`], canonicalized.
pub fn max_noncommuting_params(x: f64, phi: f64) -> Result<StatePairParams> {
    StatePairParams::new(x, phi, x + FRAC_PI_2, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{commutator, purity, to_bloch};
    use approx::assert_abs_diff_eq;

    fn assert_bloch(rho: &DensityMatrix, expected: [f64; 3]) {
        let v = to_bloch(rho).unwrap().to_array();
        for (a, b) in v.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn poles() {
        let p = StatePairParams::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let (a, b) = state_pair(&p);
        assert_eq!(a, DensityMatrix::diagonal(&[1.0, 0.0]).unwrap());
        assert_eq!(b, DensityMatrix::diagonal(&[1.0, 0.0]).unwrap());

        let p = StatePairParams::new(0.0, 0.0, PI, 0.0).unwrap();
        let (_, b) = state_pair(&p);
        assert_abs_diff_eq!(b.matrix().get(0, 0).re, 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(b.matrix().get(1, 1).re, 1.0, epsilon = 1e-16);
        assert!(b.matrix().get(0, 1).norm() < 1e-16);
    }

    #[test]
    fn max_pair_bloch_vectors() {
        let (a, b) = max_noncommuting_pair(0.0, 0.0);
        assert_bloch(&a, [0.0, 0.0, 1.0]);
        assert_bloch(&b, [1.0, 0.0, 0.0]);

        let (a, b) = max_noncommuting_pair(FRAC_PI_2, 0.0);
        assert_bloch(&a, [1.0, 0.0, 0.0]);
        assert_bloch(&b, [0.0, 0.0, -1.0]);
    }

    #[test]
    fn max_pair_commutator_has_printed_form() {
        let (x, phi) = (0.4, 2.2);
        let (a, b) = max_noncommuting_pair(x, phi);
        let c = commutator(a.matrix(), b.matrix()).unwrap();
        let upper = Complex64::from_polar(0.5, phi);
        assert!(c.get(0, 0).norm() < 1e-15 && c.get(1, 1).norm() < 1e-15);
        assert!((c.get(0, 1) - upper).norm() < 1e-15);
        assert!((c.get(1, 0) + upper.conj()).norm() < 1e-15);
    }

    #[test]
    fn pure_state_matches_bloch_form() {
        for &(x, phi) in &[(0.3, 0.1), (2.9, 5.0), (1.0, -1.0)] {
            let rho = pure_state(x, phi);
            let v = to_bloch(&rho).unwrap();
            let w = pure_bloch(x, phi);
            assert_abs_diff_eq!(v.x, w.x, epsilon = 1e-15);
            assert_abs_diff_eq!(v.y, w.y, epsilon = 1e-15);
            assert_abs_diff_eq!(v.z, w.z, epsilon = 1e-15);
            assert_abs_diff_eq!(purity(&rho), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn params_are_canonicalized() {
        let p = StatePairParams::new(-0.5, 7.0, 3.0 * PI / 2.0, -1.0).unwrap();
        assert!((0.0..=PI).contains(&p.x) && (0.0..=PI).contains(&p.y));
        assert!((0.0..TAU).contains(&p.phi) && (0.0..TAU).contains(&p.xi));
        // Canonicalization must not change the state.
        let raw = pure_state(-0.5, 7.0);
        let canon = pure_state(p.x, p.phi);
        assert!(raw.matrix().max_abs_diff(canon.matrix()).unwrap() < 1e-14);
        let raw = pure_state(3.0 * PI / 2.0, -1.0);
        let canon = pure_state(p.y, p.xi);
        assert!(raw.matrix().max_abs_diff(canon.matrix()).unwrap() < 1e-14);
    }

    #[test]
    fn params_reject_non_finite() {
        assert_eq!(
            StatePairParams::new(f64::NAN, 0.0, 0.0, 0.0).unwrap_err(),
            Error::NonFinite
        );
    }
}
