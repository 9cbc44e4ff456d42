//! Propagation kernels as finite lattice sums with covariant weights.
//!
//! * [`propagator_photon`]: positive-frequency one-photon kernel
//!   `K+(dt, dx) = sum_lambda sum_k w_k e^{-i(omega dt - k.dx)}`, which equals
//!   the scalar product of localized amplitudes `c(k) = e^{-ikx}` at the two
//!   spacetime points. Anti-local: it has tails outside the light cone.
//! * [`commutator_kernel_ad`]: `(i/hbar) <0|[A_lambda(x), . D_lambda(x')]|0>`
//!   from the field mode expansions, `(1/V) sum_k cos(omega dt - k.dx)`, per
//!   helicity. Real, even in `dt`, equal to the lattice delta `delta_x / dV`
//!   at `dt = 0`, and causal on the lattice light cone.
//!
//! The A-D kernel keeps the `k = 0` term: the canonical pair of the zero
//! mode commutes to `-i hbar / V` independently of `omega`, and without it the
//! lattice delta is not complete.

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldKind, FieldSnapshot};
use crate::grid::{GridSpec, KGrid};
use crate::vec3::Vec3;

/// One evaluated pair of kernels at a spacetime separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSample {
    pub dt: f64,
    pub dx: Vec3,
    pub photon: Complex64,
    pub commutator: f64,
}

/// Single-helicity positive-frequency kernel.
pub fn propagator_photon_helicity(grid: &KGrid, dt: f64, dx: Vec3) -> Complex64 {
    (1..grid.len())
        .map(|i| {
            grid.weight(i)
                * Complex64::from_polar(1.0, -grid.omega(i) * dt)
                * grid.plane_wave_phase(i, dx)
        })
        .sum()
}

/// Helicity-summed positive-frequency kernel (factor 2 in 3D, none in 1D).
pub fn propagator_photon(grid: &KGrid, dt: f64, dx: Vec3) -> Complex64 {
    propagator_photon_helicity(grid, dt, dx) * grid.spec().channels() as f64
}

/// Single-helicity A-D commutator kernel.
pub fn commutator_kernel_ad(grid: &KGrid, dt: f64, dx: Vec3) -> f64 {
    let v = grid.spec().volume();
    (0..grid.len())
        .map(|i| {
            (Complex64::from_polar(1.0, -grid.omega(i) * dt) * grid.plane_wave_phase(i, dx)).re
        })
        .sum::<f64>()
        / v
}

/// Single-helicity A-D kernel at every lattice separation `dx = position(j)`,
/// by one inverse transform. Agrees with [`commutator_kernel_ad`] on the
/// lattice (a Nyquist factor `e^{ik x_j}` is already real there).
pub fn commutator_kernel_profile(grid: &KGrid, dt: f64) -> Vec<f64> {
    let mut buf: Vec<Complex64> = grid
        .omegas()
        .iter()
        .map(|&w| Complex64::from_polar(1.0, -w * dt))
        .collect();
    grid.inverse(&mut buf);
    let scale = 1.0 / grid.spec().cell_volume();
    buf.iter().map(|z| z.re * scale).collect()
}

/// Helicity-summed positive-frequency kernel at every lattice separation.
pub fn propagator_photon_profile(grid: &KGrid, dt: f64) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = (0..grid.len())
        .map(|i| Complex64::from_polar(grid.weight(i), -grid.omega(i) * dt))
        .collect();
    grid.inverse(&mut buf);
    let scale = (grid.len() * grid.spec().channels()) as f64;
    buf.iter().map(|z| z * scale).collect()
}

/// Evaluate both kernels at many separations.
pub fn sample_kernels(grid: &KGrid, points: &[(f64, Vec3)]) -> Vec<KernelSample> {
    let eval = |&(dt, dx): &(f64, Vec3)| KernelSample {
        dt,
        dx,
        photon: propagator_photon(grid, dt, dx),
        commutator: commutator_kernel_ad(grid, dt, dx),
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        points.par_iter().map(eval).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        points.iter().map(eval).collect()
    }
}

/// Region occupied by the initial data.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Support {
    /// `[lo, hi]` along the first axis (1D analog).
    Interval { lo: f64, hi: f64 },
    /// Ball of `radius` around `center`.
    Ball { center: Vec3, radius: f64 },
}

impl Support {
    pub fn width(&self) -> f64 {
        match *self {
            Support::Interval { lo, hi } => hi - lo,
            Support::Ball { radius, .. } => 2.0 * radius,
        }
    }

    /// Periodic (minimum image) distance from `x` to the support.
    pub fn distance(&self, spec: &GridSpec, x: Vec3) -> f64 {
        let l = spec.box_length;
        let wrap = |d: f64| {
            let d = d.rem_euclid(l);
            if d > 0.5 * l {
                d - l
            } else {
                d
            }
        };
        match *self {
            Support::Interval { lo, hi } => {
                let mid = 0.5 * (lo + hi);
                let half = 0.5 * (hi - lo);
                (wrap(x[0] - mid).abs() - half).max(0.0)
            }
            Support::Ball { center, radius } => {
                let r2: f64 = (0..spec.dim).map(|a| wrap(x[a] - center[a]).powi(2)).sum();
                (r2.sqrt() - radius).max(0.0)
            }
        }
    }

    fn validate(&self, spec: &GridSpec) -> Result<()> {
        let ok = match *self {
            Support::Interval { lo, hi } => spec.dim == 1 && hi >= lo,
            Support::Ball { radius, .. } => radius >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "support {self:?} does not fit a {}D grid",
                spec.dim
            )))
        }
    }
}

/// Latest time for which the light cone of the support has not wrapped
/// around the periodic box: `(L - width) / 2c`.
pub fn validity_horizon(spec: &GridSpec, support: &Support, c: f64) -> f64 {
    (spec.box_length - support.width()) / (2.0 * c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leakage {
    /// Fraction of the quadratic norm outside the causal shadow, in `[0, 1]`.
    pub fraction: f64,
    pub horizon: f64,
    /// Set when `t` lies beyond the validity horizon; the fraction is then
    /// contaminated by wraparound.
    pub beyond_horizon: bool,
}

/// Fraction of a field's quadratic norm lying farther than `c t` (plus a
/// one-cell guard band) from the initial support.
///
/// Density snapshots are used as-is; other kinds contribute `|F|^2`.
pub fn light_cone_leakage(
    field: &FieldSnapshot,
    t: f64,
    support: &Support,
    c: f64,
) -> Result<Leakage> {
    let spec = field.grid;
    support.validate(&spec)?;
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("leakage time must be >= 0, got {t}")));
    }
    let density: Vec<f64> = if field.kind == FieldKind::Density {
        field
            .real()
            .ok_or_else(|| Error::Domain("density must be real".into()))?
            .to_vec()
    } else {
        field.squared_magnitude()
    };
    let reach = c * t + spec.spacing();
    let (mut outside, mut total) = (0.0, 0.0);
    for (i, &rho) in density.iter().enumerate() {
        total += rho;
        if support.distance(&spec, spec.position(i)) > reach {
            outside += rho;
        }
    }
    let horizon = validity_horizon(&spec, support, c);
    let fraction = if total > 0.0 {
        (outside / total).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(Leakage {
        fraction,
        horizon,
        beyond_horizon: t > horizon,
    })
}
