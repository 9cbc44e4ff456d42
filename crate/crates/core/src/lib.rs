//! Numerical laboratory for the quantum-oscillator model of the free
//! electromagnetic field.
//!
//! * [`grid`], [`polarization`]: periodic k-lattices, covariant weights and
//!   helicity bases.
//! * [`fock`]: truncated Fock spaces and ladder operators.
//! * [`spectral`], [`evolve`]: the frequency operator, photon wavefunction,
//!   scalar products and exact-propagator time stepping.
//! * [`kernels`]: positive-frequency versus causal propagation kernels and the
//!   light-cone leakage metric.
//! * [`response`]: coherent states driven by classical currents.

// `!(x > 0.0)` guards are meant to reject NaN too; index loops walk several
// parallel per-mode arrays at once.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod constants;
pub mod error;
pub mod evolve;
pub mod field;
pub mod fock;
pub mod grid;
pub mod kernels;
pub mod polarization;
pub mod response;
pub mod sample;
pub mod source;
pub mod spectral;
pub mod vec3;

pub use constants::PhysicalConstants;
pub use error::{Error, Result};
pub use field::{FieldData, FieldKind, FieldSnapshot, SpectralField};
pub use grid::{build_kgrid, GridSpec, KGrid};
pub use polarization::Helicity;
pub use rustfft::num_complex::Complex64;
pub use spectral::ModeAmplitudes;
