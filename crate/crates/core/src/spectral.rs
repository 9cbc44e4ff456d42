//! Pseudospectral field engine: the frequency operator `Omega^s`, transverse
//! projection, helicity decomposition, the photon wavefunction and its scalar
//! products.
//!
//! Normalization used throughout: a set of covariant amplitudes `c_lambda(k)`
//! describes the one-photon wavefunction
//!
//! ```text
//! psi(t, x)  = sum_lambda sum_k  c_lambda(k) e_lambda(k) e^{-i(omega t - k.x)} / (V sqrt(omega))
//! A+(t, x)   = sqrt(hbar / (2 eps0)) sum_lambda sum_k w_k c_lambda(k) e_lambda(k) e^{-i(omega t - k.x)}
//! A = A+ + conj(A+),   D = -eps0 dA/dt
//! ```
//!
//! with `w_k = 1/(V omega_k)`, so that `<psi|psi'> = sum w_k conj(c) c'` and
//! rebuilding `psi` from `(A, D)` returns the same wavefunction.

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldData, FieldKind, FieldSnapshot, SpectralField};
use crate::grid::KGrid;
use crate::polarization::Helicity;
use crate::vec3::{cdot_conj, CVec3};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Helicity-resolved complex amplitudes over the k-lattice. One channel in the
/// 1D scalar analog, two (`+1`, `-1`) in 3D.
#[derive(Debug, Clone)]
pub struct ModeAmplitudes {
    grid: Arc<KGrid>,
    channels: Vec<Vec<Complex64>>,
}

impl ModeAmplitudes {
    pub fn zeros(grid: Arc<KGrid>) -> Self {
        let n = grid.len();
        let ch = grid.spec().channels();
        Self {
            grid,
            channels: vec![vec![ZERO; n]; ch],
        }
    }

    /// Wrap raw channel arrays; the zero mode is forced to 0.
    pub fn from_channels(grid: Arc<KGrid>, mut channels: Vec<Vec<Complex64>>) -> Result<Self> {
        if channels.len() != grid.spec().channels()
            || channels.iter().any(|c| c.len() != grid.len())
        {
            return Err(Error::Domain(format!(
                "expected {} channels of {} modes",
                grid.spec().channels(),
                grid.len()
            )));
        }
        if channels
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Propagation("mode amplitudes".into()));
        }
        for ch in &mut channels {
            ch[grid.zero_mode_index()] = ZERO;
        }
        Ok(Self { grid, channels })
    }

    pub fn grid(&self) -> &Arc<KGrid> {
        &self.grid
    }

    pub fn channels(&self) -> &[Vec<Complex64>] {
        &self.channels
    }

    pub fn channel(&self, lambda: Helicity) -> &[Complex64] {
        &self.channels[self.channel_index(lambda)]
    }

    fn channel_index(&self, lambda: Helicity) -> usize {
        if self.channels.len() == 1 {
            0
        } else {
            lambda.channel()
        }
    }

    pub fn get(&self, lambda: Helicity, idx: usize) -> Complex64 {
        self.channels[self.channel_index(lambda)][idx]
    }

    /// Set one amplitude. Writes to the zero mode are ignored.
    pub fn set(&mut self, lambda: Helicity, idx: usize, value: Complex64) {
        if idx == self.grid.zero_mode_index() {
            return;
        }
        let c = self.channel_index(lambda);
        self.channels[c][idx] = value;
    }

    pub fn map(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let channels = self
            .channels
            .iter()
            .map(|ch| ch.iter().enumerate().map(|(i, &z)| f(i, z)).collect())
            .collect();
        Self {
            grid: Arc::clone(&self.grid),
            channels,
        }
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        self.map(|_, z| z * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let mut out = self.clone();
        for (a, b) in out.channels.iter_mut().zip(&other.channels) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        Ok(out)
    }

    /// `Omega^s` acting on amplitudes: each mode times `omega_k^s`.
    pub fn omega_power(&self, s: f64) -> Result<Self> {
        let grid = &self.grid;
        Ok(self.map(|i, z| z * omega_factor(grid.omega(i), s)))
    }

    /// Free evolution by `t`: each mode times `e^{-i omega t}`.
    pub fn evolved(&self, t: f64) -> Self {
        let grid = &self.grid;
        self.map(|i, z| z * Complex64::from_polar(1.0, -grid.omega(i) * t))
    }

    /// Vector of per-mode amplitudes summed over helicity, `sum_lambda c e_lambda`.
    fn polarized(&self, idx: usize) -> CVec3 {
        if self.grid.dim() == 1 {
            return [self.channels[0][idx], ZERO, ZERO];
        }
        let mut out = [ZERO; 3];
        for lambda in Helicity::BOTH {
            if let Some(e) = self.grid.helicity_vector(idx, lambda) {
                let c = self.channels[lambda.channel()][idx];
                for (o, ei) in out.iter_mut().zip(e) {
                    *o += c * ei;
                }
            }
        }
        out
    }

    /// The wavefunction `psi(t, x)` for these amplitudes.
    pub fn to_psi(&self, time: f64) -> FieldSnapshot {
        let grid = &self.grid;
        let spec = grid.spec();
        let mut field = SpectralField::zeros(Arc::clone(grid), spec.components());
        let scale = 1.0 / spec.cell_volume();
        for idx in 1..grid.len() {
            let w = grid.omega(idx);
            let f = Complex64::from_polar(scale / w.sqrt(), -w * time);
            let v = self.polarized(idx).map(|z| z * f);
            field.set_vector(idx, v);
        }
        field.to_complex_snapshot(FieldKind::Psi, time)
    }

    /// Amplitudes of a wavefunction snapshot, referred back to `t = 0` by the
    /// free phase so that `from_psi(to_psi(c, t)) = c`.
    pub fn from_psi(grid: &Arc<KGrid>, psi: &FieldSnapshot) -> Result<Self> {
        if psi.kind != FieldKind::Psi {
            return Err(Error::Domain(format!(
                "expected a psi snapshot, got {}",
                psi.kind
            )));
        }
        let spectral = SpectralField::from_snapshot(grid, psi)?;
        let helicity = to_helicity(&spectral);
        let dv = grid.spec().cell_volume();
        let t = psi.time;
        Ok(helicity.map(|i, z| {
            let w = grid.omega(i);
            if i == 0 {
                ZERO
            } else {
                z * Complex64::from_polar(dv * w.sqrt(), w * t)
            }
        }))
    }

    /// Real transverse fields `(A_perp, D)` at time `t` from the mode expansion.
    pub fn to_fields(&self, time: f64) -> (FieldSnapshot, FieldSnapshot) {
        let grid = &self.grid;
        let spec = grid.spec();
        let k = grid.constants();
        let pref = (k.hbar / (2.0 * k.eps0)).sqrt() * spec.len() as f64;
        let mut a_plus = SpectralField::zeros(Arc::clone(grid), spec.components());
        let mut d_plus = SpectralField::zeros(Arc::clone(grid), spec.components());
        for idx in 1..grid.len() {
            let w = grid.omega(idx);
            let f = Complex64::from_polar(pref * grid.weight(idx), -w * time);
            let a = self.polarized(idx).map(|z| z * f);
            let d = a.map(|z| z * Complex64::new(0.0, k.eps0 * w));
            a_plus.set_vector(idx, a);
            d_plus.set_vector(idx, d);
        }
        let twice_real = |f: &SpectralField, kind| {
            let snap = f.to_complex_snapshot(kind, time);
            let data = snap.complex().unwrap().iter().map(|z| 2.0 * z.re).collect();
            FieldSnapshot {
                kind,
                time,
                grid: spec,
                components: snap.components,
                data: FieldData::Real(data),
            }
        };
        (
            twice_real(&a_plus, FieldKind::APerp),
            twice_real(&d_plus, FieldKind::D),
        )
    }

    pub fn has_non_finite(&self) -> bool {
        self.channels
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
    }
}

fn omega_factor(omega: f64, s: f64) -> f64 {
    if omega == 0.0 {
        if s == 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        omega.powf(s)
    }
}

/// `Omega^s = (c |k|)^s` applied spectrally to a real or complex snapshot.
///
/// Negative powers require the zero mode to be empty (up to rounding).
pub fn apply_omega_power(
    grid: &Arc<KGrid>,
    field: &FieldSnapshot,
    s: f64,
) -> Result<FieldSnapshot> {
    let mut spec = SpectralField::from_snapshot(grid, field)?;
    if s < 0.0 {
        let total = spec.norm_sqr().sqrt();
        let zero: f64 = spec
            .comps
            .iter()
            .map(|c| c[0].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if zero > 1e-10 * total.max(f64::MIN_POSITIVE) {
            return Err(Error::Domain(format!(
                "negative power {s} of Omega on a field with zero-mode content {zero:e}"
            )));
        }
    }
    let g = Arc::clone(grid);
    spec.scale_modes(|i| Complex64::new(omega_factor(g.omega(i), s), 0.0));
    Ok(match field.data {
        FieldData::Real(_) => spec.to_real_snapshot(field.kind, field.time).0,
        FieldData::Complex(_) => spec.to_complex_snapshot(field.kind, field.time),
    })
}

fn require_3d(field: &SpectralField) -> Result<()> {
    if field.grid.dim() != 3 || field.components() != 3 {
        return Err(Error::Domain(
            "transverse operations need a 3D vector field".into(),
        ));
    }
    Ok(())
}

/// Apply `delta_ij - k_i k_j / |k|^2` per mode; the zero mode maps to 0.
///
/// Modes on a Nyquist plane are dropped: their Hermitian partner is the
/// lattice index with the other axes negated, which has a different unit
/// vector, so no real field can be transverse there.
pub fn transverse_project(field: &SpectralField) -> Result<SpectralField> {
    require_3d(field)?;
    let spec = field.grid.spec();
    let mut out = field.clone();
    for idx in 0..field.grid.len() {
        let v = field.vector(idx);
        let projected = match field.grid.triad(idx) {
            _ if spec.is_nyquist(idx) => [ZERO; 3],
            None => [ZERO; 3],
            Some(t) => {
                let ek = t.e_k;
                let dot = v[0] * ek[0] + v[1] * ek[1] + v[2] * ek[2];
                std::array::from_fn(|c| v[c] - dot * ek[c])
            }
        };
        out.set_vector(idx, projected);
    }
    Ok(out)
}

/// Snapshot-level transverse projection (identity in the 1D analog).
pub fn project_transverse_snapshot(
    grid: &Arc<KGrid>,
    snap: &FieldSnapshot,
) -> Result<FieldSnapshot> {
    let spectral = SpectralField::from_snapshot(grid, snap)?;
    let mut spectral = if grid.dim() == 3 {
        transverse_project(&spectral)?
    } else {
        spectral
    };
    for c in &mut spectral.comps {
        c[0] = ZERO;
    }
    Ok(match snap.data {
        FieldData::Real(_) => spectral.to_real_snapshot(snap.kind, snap.time).0,
        FieldData::Complex(_) => spectral.to_complex_snapshot(snap.kind, snap.time),
    })
}

/// Largest longitudinal component `|e_k . F(k)|` relative to the peak mode
/// magnitude `max_k |F(k)|`; 0 for an empty field and in 1D. Modes without a
/// direction (the zero mode) count in full.
pub fn divergence_defect(field: &SpectralField) -> f64 {
    if field.grid.dim() != 3 {
        return 0.0;
    }
    let mut peak = 0.0f64;
    let mut worst = 0.0f64;
    for idx in 0..field.grid.len() {
        let v = field.vector(idx);
        let mag = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        peak = peak.max(mag);
        let div = match field.grid.triad(idx) {
            Some(t) => (v[0] * t.e_k[0] + v[1] * t.e_k[1] + v[2] * t.e_k[2]).norm(),
            None => mag,
        };
        worst = worst.max(div);
    }
    if peak == 0.0 {
        0.0
    } else {
        worst / peak
    }
}

pub(crate) const TRANSVERSE_TOL: f64 = 1e-10;

pub(crate) fn ensure_transverse(field: &SpectralField, what: &str) -> Result<()> {
    let defect = divergence_defect(field);
    if defect > TRANSVERSE_TOL {
        return Err(Error::Domain(format!(
            "{what} is not transverse (spectral divergence ratio {defect:e})"
        )));
    }
    Ok(())
}

/// Helicity components `c_lambda(k) = conj(e_lambda(k)) . F(k)`.
pub fn to_helicity(field: &SpectralField) -> ModeAmplitudes {
    let grid = Arc::clone(&field.grid);
    let n = grid.len();
    if grid.dim() == 1 {
        let mut ch = field.comps[0].clone();
        ch[0] = ZERO;
        return ModeAmplitudes {
            grid,
            channels: vec![ch],
        };
    }
    let mut channels = vec![vec![ZERO; n]; 2];
    for idx in 0..n {
        let v = field.vector(idx);
        for lambda in Helicity::BOTH {
            if let Some(e) = grid.helicity_vector(idx, lambda) {
                channels[lambda.channel()][idx] = cdot_conj(e, v);
            }
        }
    }
    ModeAmplitudes { grid, channels }
}

/// Inverse of [`to_helicity`]: `F(k) = sum_lambda c_lambda(k) e_lambda(k)`.
pub fn from_helicity(amps: &ModeAmplitudes) -> SpectralField {
    let grid = Arc::clone(&amps.grid);
    let mut out = SpectralField::zeros(Arc::clone(&grid), grid.spec().components());
    for idx in 0..grid.len() {
        out.set_vector(idx, amps.polarized(idx));
    }
    out
}

/// Photon wavefunction from transverse `(A_perp, D)`:
/// `psi = sqrt(eps0 / 2 hbar) Omega^{1/2} [A - i (eps0 Omega)^{-1} D]`.
pub fn build_psi(grid: &Arc<KGrid>, a: &FieldSnapshot, d: &FieldSnapshot) -> Result<FieldSnapshot> {
    if a.time != d.time {
        return Err(Error::Domain(format!(
            "A at t={} and D at t={} differ in time",
            a.time, d.time
        )));
    }
    let a_k = SpectralField::from_snapshot(grid, a)?;
    let d_k = SpectralField::from_snapshot(grid, d)?;
    ensure_transverse(&a_k, "A_perp")?;
    ensure_transverse(&d_k, "D")?;
    let k = grid.constants();
    let pref = (k.eps0 / (2.0 * k.hbar)).sqrt();
    let mut psi = SpectralField::zeros(Arc::clone(grid), a_k.components());
    for idx in 1..grid.len() {
        let w = grid.omega(idx);
        let s = pref * w.sqrt();
        let inv = Complex64::new(0.0, -1.0 / (k.eps0 * w));
        for c in 0..psi.components() {
            psi.comps[c][idx] = s * (a_k.comps[c][idx] + inv * d_k.comps[c][idx]);
        }
    }
    Ok(psi.to_complex_snapshot(FieldKind::Psi, a.time))
}

/// Photon number density `psi* . psi`.
pub fn number_density(psi: &FieldSnapshot) -> Result<FieldSnapshot> {
    if psi.kind != FieldKind::Psi {
        return Err(Error::Domain(format!(
            "number density needs psi, got {}",
            psi.kind
        )));
    }
    Ok(FieldSnapshot {
        kind: FieldKind::Density,
        time: psi.time,
        grid: psi.grid,
        components: 1,
        data: FieldData::Real(psi.squared_magnitude()),
    })
}

/// `int dx conj(psi1) . psi2` by the uniform cell-volume rule.
pub fn scalar_product_x(psi1: &FieldSnapshot, psi2: &FieldSnapshot) -> Result<Complex64> {
    if psi1.grid != psi2.grid || psi1.components != psi2.components {
        return Err(Error::GridMismatch(format!(
            "{:?} vs {:?}",
            psi1.grid, psi2.grid
        )));
    }
    if psi1.time != psi2.time {
        return Err(Error::Domain(format!(
            "scalar product of fields at different times ({} vs {})",
            psi1.time, psi2.time
        )));
    }
    let (a, b) = match (psi1.complex(), psi2.complex()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::Domain(
                "scalar product needs complex psi snapshots".into(),
            ))
        }
    };
    let sum: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    Ok(sum * psi1.grid.cell_volume())
}

/// `sum_lambda sum_k w_k conj(c1) c2`.
pub fn scalar_product_k(c1: &ModeAmplitudes, c2: &ModeAmplitudes) -> Result<Complex64> {
    c1.grid.ensure_same(&c2.grid)?;
    let w = c1.grid.weights();
    Ok(c1
        .channels
        .iter()
        .zip(&c2.channels)
        .map(|(a, b)| {
            a.iter()
                .zip(b)
                .zip(w)
                .map(|((x, y), &wk)| x.conj() * y * wk)
                .sum::<Complex64>()
        })
        .sum())
}

/// Spectral curl `B = curl A` (3D) or `dA/dx` (1D analog).
pub fn curl(grid: &Arc<KGrid>, a: &FieldSnapshot) -> Result<FieldSnapshot> {
    let a_k = SpectralField::from_snapshot(grid, a)?;
    let mut b = SpectralField::zeros(Arc::clone(grid), a_k.components());
    for idx in 0..grid.len() {
        if grid.spec().is_nyquist(idx) {
            continue;
        }
        let k = grid.k(idx);
        let ik = k.map(|x| Complex64::new(0.0, x));
        let v = a_k.vector(idx);
        if grid.dim() == 1 {
            b.comps[0][idx] = ik[0] * v[0];
        } else {
            b.set_vector(
                idx,
                [
                    ik[1] * v[2] - ik[2] * v[1],
                    ik[2] * v[0] - ik[0] * v[2],
                    ik[0] * v[1] - ik[1] * v[0],
                ],
            );
        }
    }
    Ok(match a.data {
        FieldData::Real(_) => b.to_real_snapshot(FieldKind::B, a.time).0,
        FieldData::Complex(_) => b.to_complex_snapshot(FieldKind::B, a.time),
    })
}

/// Pointwise EM energy density `|D|^2 / 2 eps0 + eps0 c^2 |B|^2 / 2`.
pub fn energy_density(
    grid: &Arc<KGrid>,
    a: &FieldSnapshot,
    d: &FieldSnapshot,
) -> Result<FieldSnapshot> {
    d.ensure_grid(grid)?;
    let b = curl(grid, a)?;
    let k = grid.constants();
    let d2 = d.squared_magnitude();
    let b2 = b.squared_magnitude();
    let data = d2
        .iter()
        .zip(&b2)
        .map(|(dd, bb)| dd / (2.0 * k.eps0) + 0.5 * k.eps0 * k.c * k.c * bb)
        .collect();
    Ok(FieldSnapshot {
        kind: FieldKind::Density,
        time: a.time,
        grid: a.grid,
        components: 1,
        data: FieldData::Real(data),
    })
}

/// Total transverse EM energy `int dx [|D|^2/2 eps0 + eps0 c^2 |B|^2/2]`.
pub fn em_energy(grid: &Arc<KGrid>, a: &FieldSnapshot, d: &FieldSnapshot) -> Result<f64> {
    let dens = energy_density(grid, a, d)?;
    Ok(dens.real().unwrap().iter().sum::<f64>() * grid.spec().cell_volume())
}

/// Vacuum expectation of the A-D commutator pairing for two one-photon mode
/// functions, evaluated in real space from the `(A, D)` mode expansions:
///
/// ```text
/// (1/2 hbar) int dx [ eps0 (Omega^{1/2} A1).(Omega^{1/2} A2) + eps0^{-1} (Omega^{-1/2} D1).(Omega^{-1/2} D2) ]
/// ```
///
/// This never touches the covariant weights or the helicity basis; it equals
/// `Re <psi1|psi2>`.
pub fn ad_commutator_expectation(c1: &ModeAmplitudes, c2: &ModeAmplitudes) -> Result<f64> {
    c1.grid.ensure_same(&c2.grid)?;
    let grid = &c1.grid;
    let k = grid.constants();
    let (a1, d1) = c1.to_fields(0.0);
    let (a2, d2) = c2.to_fields(0.0);
    let sa1 = apply_omega_power(grid, &a1, 0.5)?;
    let sa2 = apply_omega_power(grid, &a2, 0.5)?;
    let sd1 = apply_omega_power(grid, &d1, -0.5)?;
    let sd2 = apply_omega_power(grid, &d2, -0.5)?;
    let dot = |x: &FieldSnapshot, y: &FieldSnapshot| -> f64 {
        x.real()
            .unwrap()
            .iter()
            .zip(y.real().unwrap())
            .map(|(p, q)| p * q)
            .sum()
    };
    let sum = k.eps0 * dot(&sa1, &sa2) + dot(&sd1, &sd2) / k.eps0;
    Ok(sum * grid.spec().cell_volume() / (2.0 * k.hbar))
}
