//! Seeded random states and channels for diagnostics and property checks.

use std::f64::consts::{FRAC_PI_4, TAU};

use rand::Rng;

use crate::channels::{self, KrausChannel};
use crate::matrix::{from_bloch, BlochVector, ComplexMatrix, DensityMatrix};

/// Uniform point strictly inside the Bloch ball (rejection sampling).
pub fn ball_point<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let norm_sq: f64 = v.iter().map(|c| c * c).sum();
        if norm_sq < 1.0 {
            return BlochVector {
                x: v[0],
                y: v[1],
                z: v[2],
            };
        }
    }
}

/// Uniform point on the Bloch sphere.
pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi = rng.random_range(0.0..TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    BlochVector {
        x: s * phi.cos(),
        y: s * phi.sin(),
        z,
    }
}

/// Random qubit state: pure with probability `pure_fraction`, otherwise mixed.
pub fn qubit_state<R: Rng + ?Sized>(rng: &mut R, pure_fraction: f64) -> DensityMatrix {
    if rng.random_bool(pure_fraction.clamp(0.0, 1.0)) {
        from_bloch(&sphere_point(rng))
    } else {
        from_bloch(&ball_point(rng))
    }
}

/// Haar-random element of SU(2) from a uniform unit quaternion.
pub fn su2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    let q = loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n: f64 = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        if n > 1e-3 && n <= 1.0 {
            break v.map(|c| c / n);
        }
    };
    let a = num_complex::Complex64::new(q[0], q[1]);
    let b = num_complex::Complex64::new(q[2], q[3]);
    ComplexMatrix::from_rows(&[[a, b], [-b.conj(), a.conj()]]).expect("finite 2x2")
}

/// Point on the probability simplex with uniform density.
pub fn simplex_point<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.random::<f64>()).ln());
    let total: f64 = e.iter().sum();
    let mut p = e.map(|v| v / total);
    // Put the rounding residue on the largest weight so the sum is 1 to the last bit or two.
    let residue = 1.0 - p.iter().sum::<f64>();
    let imax = (0..4).max_by(|&i, &j| p[i].total_cmp(&p[j])).unwrap_or(0);
    p[imax] += residue;
    p
}

/// A built-in channel of the given label with random in-range parameters.
pub fn builtin_channel<R: Rng + ?Sized>(rng: &mut R, label: &str) -> crate::Result<KrausChannel> {
    match label {
        "identity" => Ok(channels::identity()),
        "rtn" => channels::rtn(rng.random_range(-1.0..=1.0)),
        "nmd" => channels::nmd(rng.random_range(-1.0..=1.0)),
        "pd" => channels::pd(rng.random_range(0.0..=1.0)),
        "ad" => channels::ad(rng.random_range(0.0..=1.0)),
        "gad" => channels::gad(rng.random_range(0.0..=1.0), rng.random_range(0.0..=1.0)),
        "unruh" => channels::unruh(rng.random_range(0.0..=FRAC_PI_4)),
        "gdc" => channels::gdc(simplex_point(rng)),
        other => Err(crate::Error::UnknownChannel(other.to_string())),
    }
}

/// A uniformly chosen built-in channel with random parameters.
pub fn any_builtin_channel<R: Rng + ?Sized>(rng: &mut R) -> KrausChannel {
    let label = channels::LABELS[rng.random_range(0..channels::LABELS.len())];
    builtin_channel(rng, label).expect("sampled parameters are in range")
}
