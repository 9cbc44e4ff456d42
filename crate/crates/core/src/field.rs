//! Real-space field snapshots and their k-space counterparts.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{GridSpec, KGrid};

/// What a snapshot holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    APerp,
    D,
    B,
    Psi,
    JPerp,
    /// A non-negative scalar density (photon number or energy).
    Density,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::APerp => "a_perp",
            FieldKind::D => "d",
            FieldKind::B => "b",
            FieldKind::Psi => "psi",
            FieldKind::JPerp => "j_perp",
            FieldKind::Density => "density",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [
            FieldKind::APerp,
            FieldKind::D,
            FieldKind::B,
            FieldKind::Psi,
            FieldKind::JPerp,
            FieldKind::Density,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }

    pub fn is_complex(self) -> bool {
        self == FieldKind::Psi
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FieldData {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl FieldData {
    pub fn len(&self) -> usize {
        match self {
            FieldData::Real(v) => v.len(),
            FieldData::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A field materialized on the spatial lattice at one instant.
///
/// Storage is component-major: component `c` of site `i` lives at `c * N + i`,
/// sites in row-major `(x, y, z)` order.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot {
    pub kind: FieldKind,
    pub time: f64,
    pub grid: GridSpec,
    pub components: usize,
    pub data: FieldData,
}

impl FieldSnapshot {
    pub fn new(
        kind: FieldKind,
        time: f64,
        grid: GridSpec,
        components: usize,
        data: FieldData,
    ) -> Result<Self> {
        grid.validate()?;
        if data.len() != components * grid.len() {
            return Err(Error::Domain(format!(
                "snapshot payload has {} values, expected {} components x {} sites",
                data.len(),
                components,
                grid.len()
            )));
        }
        match (&data, kind.is_complex()) {
            (FieldData::Real(_), true) => {
                return Err(Error::Domain(format!(
                    "{kind} snapshots are complex-valued"
                )))
            }
            (FieldData::Complex(_), false) => {
                return Err(Error::Domain(format!("{kind} snapshots are real-valued")))
            }
            _ => {}
        }
        Ok(Self {
            kind,
            time,
            grid,
            components,
            data,
        })
    }

    /// All-zero vector snapshot with the grid's natural component count.
    pub fn zeros(kind: FieldKind, time: f64, grid: GridSpec) -> Self {
        let comps = if kind == FieldKind::Density {
            1
        } else {
            grid.components()
        };
        let len = comps * grid.len();
        let data = if kind.is_complex() {
            FieldData::Complex(vec![Complex64::new(0.0, 0.0); len])
        } else {
            FieldData::Real(vec![0.0; len])
        };
        Self {
            kind,
            time,
            grid,
            components: comps,
            data,
        }
    }

    pub fn real(&self) -> Option<&[f64]> {
        match &self.data {
            FieldData::Real(v) => Some(v),
            FieldData::Complex(_) => None,
        }
    }

    pub fn complex(&self) -> Option<&[Complex64]> {
        match &self.data {
            FieldData::Complex(v) => Some(v),
            FieldData::Real(_) => None,
        }
    }

    /// Pointwise `sum_c |F_c(x)|^2`.
    pub fn squared_magnitude(&self) -> Vec<f64> {
        let n = self.grid.len();
        let mut out = vec![0.0; n];
        for c in 0..self.components {
            for (i, o) in out.iter_mut().enumerate() {
                *o += match &self.data {
                    FieldData::Real(v) => v[c * n + i] * v[c * n + i],
                    FieldData::Complex(v) => v[c * n + i].norm_sqr(),
                };
            }
        }
        out
    }

    pub fn has_non_finite(&self) -> bool {
        match &self.data {
            FieldData::Real(v) => v.iter().any(|x| !x.is_finite()),
            FieldData::Complex(v) => v.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()),
        }
    }

    pub fn ensure_grid(&self, grid: &KGrid) -> Result<()> {
        if self.grid != grid.spec() {
            return Err(Error::GridMismatch(format!(
                "snapshot on {:?}, operation on {:?}",
                self.grid,
                grid.spec()
            )));
        }
        Ok(())
    }
}

/// A field in k-space, one complex array per Cartesian component
/// (component-major like [`FieldSnapshot`]).
#[derive(Debug, Clone)]
pub struct SpectralField {
    pub grid: Arc<KGrid>,
    pub comps: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn zeros(grid: Arc<KGrid>, components: usize) -> Self {
        let n = grid.len();
        Self {
            grid,
            comps: vec![vec![Complex64::new(0.0, 0.0); n]; components],
        }
    }

    pub fn components(&self) -> usize {
        self.comps.len()
    }

    pub fn vector(&self, idx: usize) -> [Complex64; 3] {
        let z = Complex64::new(0.0, 0.0);
        std::array::from_fn(|c| self.comps.get(c).map_or(z, |v| v[idx]))
    }

    pub fn set_vector(&mut self, idx: usize, v: [Complex64; 3]) {
        for (c, comp) in self.comps.iter_mut().enumerate() {
            comp[idx] = v[c];
        }
    }

    /// Forward-transform a snapshot.
    pub fn from_snapshot(grid: &Arc<KGrid>, snap: &FieldSnapshot) -> Result<Self> {
        snap.ensure_grid(grid)?;
        if snap.has_non_finite() {
            return Err(Error::Propagation(format!("{} snapshot", snap.kind)));
        }
        let n = grid.len();
        let comps = (0..snap.components)
            .map(|c| {
                let mut buf: Vec<Complex64> = match &snap.data {
                    FieldData::Real(v) => v[c * n..(c + 1) * n]
                        .iter()
                        .map(|&x| Complex64::new(x, 0.0))
                        .collect(),
                    FieldData::Complex(v) => v[c * n..(c + 1) * n].to_vec(),
                };
                grid.forward(&mut buf);
                buf
            })
            .collect();
        Ok(Self {
            grid: Arc::clone(grid),
            comps,
        })
    }

    fn inverse_components(&self) -> Vec<Vec<Complex64>> {
        self.comps
            .iter()
            .map(|c| {
                let mut buf = c.clone();
                self.grid.inverse(&mut buf);
                buf
            })
            .collect()
    }

    /// Inverse-transform to a complex snapshot.
    pub fn to_complex_snapshot(&self, kind: FieldKind, time: f64) -> FieldSnapshot {
        let data: Vec<Complex64> = self.inverse_components().into_iter().flatten().collect();
        FieldSnapshot {
            kind,
            time,
            grid: self.grid.spec(),
            components: self.components(),
            data: FieldData::Complex(data),
        }
    }

    /// Inverse-transform to a real snapshot, returning the largest discarded
    /// imaginary part alongside.
    pub fn to_real_snapshot(&self, kind: FieldKind, time: f64) -> (FieldSnapshot, f64) {
        let mut residue = 0.0f64;
        let data: Vec<f64> = self
            .inverse_components()
            .into_iter()
            .flatten()
            .map(|z| {
                residue = residue.max(z.im.abs());
                z.re
            })
            .collect();
        let snap = FieldSnapshot {
            kind,
            time,
            grid: self.grid.spec(),
            components: self.components(),
            data: FieldData::Real(data),
        };
        (snap, residue)
    }

    /// Multiply every mode by `f(idx)`.
    pub fn scale_modes(&mut self, f: impl Fn(usize) -> Complex64) {
        let factors: Vec<Complex64> = (0..self.grid.len()).map(f).collect();
        for comp in &mut self.comps {
            for (v, s) in comp.iter_mut().zip(&factors) {
                *v *= s;
            }
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.comps.iter().flatten().map(|z| z.norm_sqr()).sum()
    }
}
