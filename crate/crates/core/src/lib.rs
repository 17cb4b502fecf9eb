//! Commutator-based quantumness of qubit channels.
//!
//! The incompatibility of two states is `M(ρ, σ) = 2 Tr[C†C]` with
//! `C = [ρ, σ]`. A channel's quantumness `μ` is the largest incompatibility of
//! two outputs `Φ[ρ_a]`, `Φ[ρ_b]` over all input pairs.
//!
//! ```
//! use qchan_core::{channels, optimizer::{maximize_mu, OptimizerConfig}};
//!
//! let ch = channels::pd(0.25).unwrap();
//! let result = maximize_mu(&ch, &OptimizerConfig::default()).unwrap();
//! assert!((result.mu - 0.75).abs() < 1e-6);
//! ```

pub mod channels;
pub mod error;
pub mod matrix;
pub mod optimizer;
pub mod quantumness;
pub mod sampling;
pub mod states;

pub use channels::{ChannelKind, KrausChannel, MemoryKernel};
pub use error::{Error, Result};
pub use matrix::{BlochVector, ComplexMatrix, DensityMatrix};
pub use optimizer::OptimizerConfig;
pub use quantumness::{QuantumnessResult, VisibilityPair};
pub use states::StatePairParams;
