//! Time evolution by exact per-mode free propagators plus a second-order
//! treatment of the prescribed current.
//!
//! Both integrators sample the current once per step, at the step midpoint.
//! They differ in how that sample is folded into the step:
//!
//! * [`MaxwellEvolver`] holds `j` constant over the step and integrates the
//!   oscillator kernel exactly against it:
//!   `A += j (1 - cos w dt) / (eps0 w^2)`, `D -= j sin(w dt) / w`.
//! * [`SchrodingerEvolver`] uses the exponential midpoint rule,
//!   `psi += dt e^{-i w dt/2} i (2 eps0 hbar w)^{-1/2} j`.
//!
//! Both are second order in `dt`; their difference is `O(dt^2)`, which is what
//! the cross-integrator consistency check measures. Without a current both are
//! exact.

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldKind, FieldSnapshot, SpectralField};
use crate::grid::KGrid;
use crate::source::{CompiledSource, CurrentSource};
use crate::spectral::ensure_transverse;

fn check_dt(dt: f64) -> Result<()> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Config(format!(
            "dt must be finite and > 0, got {dt}"
        )));
    }
    Ok(())
}

fn finite(f: &SpectralField) -> bool {
    f.comps
        .iter()
        .flatten()
        .all(|z| z.re.is_finite() && z.im.is_finite())
}

fn clear_zero_mode(f: &mut SpectralField) {
    for c in &mut f.comps {
        c[0] = Complex64::new(0.0, 0.0);
    }
}

/// Stepper for the sourced transverse Maxwell pair
/// `D = -eps0 dA/dt`, `dD/dt - eps0 Omega^2 A = -j_perp`.
#[derive(Debug, Clone)]
pub struct MaxwellEvolver {
    grid: Arc<KGrid>,
    a: SpectralField,
    d: SpectralField,
    source: CompiledSource,
    dt: f64,
    t0: f64,
    steps: usize,
}

impl MaxwellEvolver {
    /// Start from transverse `(A_perp, D)`; the zero mode is dropped.
    pub fn new(
        grid: &Arc<KGrid>,
        a: &FieldSnapshot,
        d: &FieldSnapshot,
        source: &CurrentSource,
        dt: f64,
    ) -> Result<Self> {
        check_dt(dt)?;
        if a.time != d.time {
            return Err(Error::Domain("A and D snapshots at different times".into()));
        }
        let mut a_k = SpectralField::from_snapshot(grid, a)?;
        let mut d_k = SpectralField::from_snapshot(grid, d)?;
        ensure_transverse(&a_k, "initial A_perp")?;
        ensure_transverse(&d_k, "initial D")?;
        clear_zero_mode(&mut a_k);
        clear_zero_mode(&mut d_k);
        Ok(Self {
            grid: Arc::clone(grid),
            a: a_k,
            d: d_k,
            source: source.compile(grid)?,
            dt,
            t0: a.time,
            steps: 0,
        })
    }

    pub fn time(&self) -> f64 {
        self.t0 + self.steps as f64 * self.dt
    }

    pub fn step(&mut self) -> Result<()> {
        let k = self.grid.constants();
        let dt = self.dt;
        let j = if self.source.is_empty() {
            None
        } else {
            Some(self.source.spectral_at(self.time() + 0.5 * dt))
        };
        for idx in 1..self.grid.len() {
            let w = self.grid.omega(idx);
            let (s, c) = (w * dt).sin_cos();
            let ew = k.eps0 * w;
            for comp in 0..self.a.components() {
                let a0 = self.a.comps[comp][idx];
                let d0 = self.d.comps[comp][idx];
                let mut a1 = a0 * c - d0 * (s / ew);
                let mut d1 = a0 * (ew * s) + d0 * c;
                if let Some(j) = &j {
                    let jm = j.comps[comp][idx];
                    a1 += jm * ((1.0 - c) / (k.eps0 * w * w));
                    d1 -= jm * (s / w);
                }
                self.a.comps[comp][idx] = a1;
                self.d.comps[comp][idx] = d1;
            }
        }
        self.steps += 1;
        if !(finite(&self.a) && finite(&self.d)) {
            return Err(Error::Propagation(format!(
                "Maxwell step {} (t = {})",
                self.steps,
                self.time()
            )));
        }
        Ok(())
    }

    pub fn spectral(&self) -> (&SpectralField, &SpectralField) {
        (&self.a, &self.d)
    }

    /// Materialize `(A_perp, D)` and the largest imaginary residue discarded.
    pub fn snapshots(&self) -> (FieldSnapshot, FieldSnapshot, f64) {
        let t = self.time();
        let (a, ra) = self.a.to_real_snapshot(FieldKind::APerp, t);
        let (d, rd) = self.d.to_real_snapshot(FieldKind::D, t);
        (a, d, ra.max(rd))
    }
}

/// Sampled `(A_perp, D)` history.
#[derive(Debug, Clone)]
pub struct MaxwellTrajectory {
    pub samples: Vec<(FieldSnapshot, FieldSnapshot)>,
    /// Largest imaginary part discarded when materializing real fields.
    pub max_imag_residue: f64,
}

/// Evolve `(A, D)` for `steps` steps, sampling the initial state and every
/// `stride`-th step after it (the final state is always included).
pub fn evolve_maxwell(
    grid: &Arc<KGrid>,
    a: &FieldSnapshot,
    d: &FieldSnapshot,
    source: &CurrentSource,
    dt: f64,
    steps: usize,
    stride: usize,
) -> Result<MaxwellTrajectory> {
    let stride = stride.max(1);
    let mut ev = MaxwellEvolver::new(grid, a, d, source, dt)?;
    let mut samples = Vec::new();
    let mut residue = 0.0f64;
    let mut record = |ev: &MaxwellEvolver, samples: &mut Vec<_>| {
        let (a, d, r) = ev.snapshots();
        residue = residue.max(r);
        samples.push((a, d));
    };
    record(&ev, &mut samples);
    for n in 1..=steps {
        ev.step()?;
        if n % stride == 0 || n == steps {
            record(&ev, &mut samples);
        }
    }
    Ok(MaxwellTrajectory {
        samples,
        max_imag_residue: residue,
    })
}

/// Stepper for `i dpsi/dt = Omega psi - (2 eps0 hbar Omega)^{-1/2} j_perp`.
#[derive(Debug, Clone)]
pub struct SchrodingerEvolver {
    grid: Arc<KGrid>,
    psi: SpectralField,
    source: CompiledSource,
    dt: f64,
    t0: f64,
    steps: usize,
}

impl SchrodingerEvolver {
    pub fn new(
        grid: &Arc<KGrid>,
        psi: &FieldSnapshot,
        source: &CurrentSource,
        dt: f64,
    ) -> Result<Self> {
        check_dt(dt)?;
        if psi.kind != FieldKind::Psi {
            return Err(Error::Domain(format!("expected psi, got {}", psi.kind)));
        }
        let mut p = SpectralField::from_snapshot(grid, psi)?;
        ensure_transverse(&p, "initial psi")?;
        clear_zero_mode(&mut p);
        Ok(Self {
            grid: Arc::clone(grid),
            psi: p,
            source: source.compile(grid)?,
            dt,
            t0: psi.time,
            steps: 0,
        })
    }

    pub fn time(&self) -> f64 {
        self.t0 + self.steps as f64 * self.dt
    }

    pub fn step(&mut self) -> Result<()> {
        let k = self.grid.constants();
        let dt = self.dt;
        let j = if self.source.is_empty() {
            None
        } else {
            Some(self.source.spectral_at(self.time() + 0.5 * dt))
        };
        for idx in 1..self.grid.len() {
            let w = self.grid.omega(idx);
            let phase = Complex64::from_polar(1.0, -w * dt);
            let kick =
                Complex64::from_polar(dt / (2.0 * k.eps0 * k.hbar * w).sqrt(), -0.5 * w * dt)
                    * Complex64::new(0.0, 1.0);
            for comp in 0..self.psi.components() {
                let mut p = self.psi.comps[comp][idx] * phase;
                if let Some(j) = &j {
                    p += kick * j.comps[comp][idx];
                }
                self.psi.comps[comp][idx] = p;
            }
        }
        self.steps += 1;
        if !finite(&self.psi) {
            return Err(Error::Propagation(format!(
                "Schrodinger step {} (t = {})",
                self.steps,
                self.time()
            )));
        }
        Ok(())
    }

    pub fn spectral(&self) -> &SpectralField {
        &self.psi
    }

    pub fn snapshot(&self) -> FieldSnapshot {
        self.psi.to_complex_snapshot(FieldKind::Psi, self.time())
    }
}

/// Evolve `psi`, sampling like [`evolve_maxwell`].
pub fn evolve_se(
    grid: &Arc<KGrid>,
    psi: &FieldSnapshot,
    source: &CurrentSource,
    dt: f64,
    steps: usize,
    stride: usize,
) -> Result<Vec<FieldSnapshot>> {
    let stride = stride.max(1);
    let mut ev = SchrodingerEvolver::new(grid, psi, source, dt)?;
    let mut out = vec![ev.snapshot()];
    for n in 1..=steps {
        ev.step()?;
        if n % stride == 0 || n == steps {
            out.push(ev.snapshot());
        }
    }
    Ok(out)
}
