//! Prescribed classical transverse currents.
//!
//! A source is a sum of separable terms `s(x) g(t)`. It is given either as
//! `j_perp` directly, which must already be transverse, or as a
//! polarization/magnetization pair combined into `j_perp = dP_perp/dt + curl M`.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldData, FieldKind, FieldSnapshot, SpectralField};
use crate::grid::KGrid;
use crate::spectral::{divergence_defect, transverse_project, TRANSVERSE_TOL};
use crate::vec3::Vec3;

fn default_polarization() -> Vec3 {
    [1.0, 0.0, 0.0]
}

/// Spatial envelope times a constant polarization vector. In the 1D scalar
/// analog only the first polarization component is used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpatialProfile {
    /// Periodic Gaussian `exp(-r^2 / 2 width^2)` around `center` (minimum image).
    Gaussian {
        center: Vec3,
        width: f64,
        #[serde(default = "default_polarization")]
        polarization: Vec3,
    },
    /// `cos(k_m . x + phase)` for the lattice wavevector with integer indices `mode`.
    Cosine {
        mode: [i64; 3],
        #[serde(default)]
        phase: f64,
        #[serde(default = "default_polarization")]
        polarization: Vec3,
    },
}

impl SpatialProfile {
    fn polarization(&self) -> Vec3 {
        match self {
            SpatialProfile::Gaussian { polarization, .. }
            | SpatialProfile::Cosine { polarization, .. } => *polarization,
        }
    }

    fn envelope(&self, grid: &KGrid, x: Vec3) -> f64 {
        let spec = grid.spec();
        match self {
            SpatialProfile::Gaussian { center, width, .. } => {
                let l = spec.box_length;
                let r2: f64 = (0..spec.dim)
                    .map(|a| {
                        let mut d = (x[a] - center[a]).rem_euclid(l);
                        if d > 0.5 * l {
                            d -= l;
                        }
                        d * d
                    })
                    .sum();
                (-r2 / (2.0 * width * width)).exp()
            }
            SpatialProfile::Cosine { mode, phase, .. } => {
                let dk = 2.0 * std::f64::consts::PI / spec.box_length;
                let arg: f64 = (0..spec.dim).map(|a| dk * mode[a] as f64 * x[a]).sum();
                (arg + phase).cos()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let SpatialProfile::Gaussian { width, .. } = self {
            if !(width.is_finite() && *width > 0.0) {
                return Err(Error::Config(format!(
                    "gaussian width must be > 0, got {width}"
                )));
            }
        }
        Ok(())
    }

    /// Sample on the lattice as a real vector field.
    pub fn sample(&self, grid: &KGrid, kind: FieldKind) -> FieldSnapshot {
        let spec = grid.spec();
        let comps = spec.components();
        let pol = self.polarization();
        let n = spec.len();
        let mut data = vec![0.0; comps * n];
        for i in 0..n {
            let e = self.envelope(grid, spec.position(i));
            for c in 0..comps {
                data[c * n + i] = e * pol[c];
            }
        }
        FieldSnapshot {
            kind,
            time: 0.0,
            grid: spec,
            components: comps,
            data: FieldData::Real(data),
        }
    }
}

/// Temporal envelope `g(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Temporal {
    Constant {
        value: f64,
    },
    /// `amplitude cos(omega t + phase)`
    Cosine {
        amplitude: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
    /// `amplitude exp(-(t - center)^2 / 2 width^2)`
    Gaussian {
        amplitude: f64,
        center: f64,
        width: f64,
    },
    /// Gaussian envelope times `cos(omega t + phase)`.
    GaussianCosine {
        amplitude: f64,
        center: f64,
        width: f64,
        omega: f64,
        #[serde(default)]
        phase: f64,
    },
}

impl Temporal {
    pub fn value(&self, t: f64) -> f64 {
        match *self {
            Temporal::Constant { value } => value,
            Temporal::Cosine {
                amplitude,
                omega,
                phase,
            } => amplitude * (omega * t + phase).cos(),
            Temporal::Gaussian {
                amplitude,
                center,
                width,
            } => amplitude * (-(t - center).powi(2) / (2.0 * width * width)).exp(),
            Temporal::GaussianCosine {
                amplitude,
                center,
                width,
                omega,
                phase,
            } => {
                amplitude
                    * (-(t - center).powi(2) / (2.0 * width * width)).exp()
                    * (omega * t + phase).cos()
            }
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match *self {
            Temporal::Constant { .. } => 0.0,
            Temporal::Cosine {
                amplitude,
                omega,
                phase,
            } => -amplitude * omega * (omega * t + phase).sin(),
            Temporal::Gaussian { center, width, .. } => {
                -(t - center) / (width * width) * self.value(t)
            }
            Temporal::GaussianCosine {
                amplitude,
                center,
                width,
                omega,
                phase,
            } => {
                let env = amplitude * (-(t - center).powi(2) / (2.0 * width * width)).exp();
                let arg = omega * t + phase;
                env * (-(t - center) / (width * width) * arg.cos() - omega * arg.sin())
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Temporal::Gaussian { width, .. } | Temporal::GaussianCosine { width, .. }
                if !(width > 0.0) =>
            {
                Err(Error::Config(format!(
                    "temporal width must be > 0, got {width}"
                )))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparableTerm {
    pub spatial: SpatialProfile,
    pub temporal: Temporal,
}

/// Source description as it appears in configuration files.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurrentSource {
    /// No current.
    #[default]
    None,
    /// `j_perp` given directly; must be transverse.
    Direct { terms: Vec<SeparableTerm> },
    /// `j_perp = dP_perp/dt + curl M`.
    Material {
        #[serde(default)]
        polarization: Vec<SeparableTerm>,
        #[serde(default)]
        magnetization: Vec<SeparableTerm>,
    },
}

impl CurrentSource {
    pub fn describe(&self) -> String {
        match self {
            CurrentSource::None => "none".into(),
            CurrentSource::Direct { terms } => format!("direct j_perp, {} term(s)", terms.len()),
            CurrentSource::Material {
                polarization,
                magnetization,
            } => format!(
                "dP/dt + curl M, {} polarization + {} magnetization term(s)",
                polarization.len(),
                magnetization.len()
            ),
        }
    }

    /// Sample, transform and check the source on a lattice.
    pub fn compile(&self, grid: &Arc<KGrid>) -> Result<CompiledSource> {
        let mut terms = Vec::new();
        let transform = |p: &SpatialProfile| -> Result<SpectralField> {
            p.validate()?;
            SpectralField::from_snapshot(grid, &p.sample(grid, FieldKind::JPerp))
        };
        match self {
            CurrentSource::None => {}
            CurrentSource::Direct { terms: src } => {
                for t in src {
                    t.temporal.validate()?;
                    let mut s = transform(&t.spatial)?;
                    let defect = divergence_defect(&s);
                    if defect > TRANSVERSE_TOL {
                        return Err(Error::Domain(format!(
                            "direct current term is not transverse (spectral divergence ratio {defect:e}); \
                             give it as a polarization or magnetization instead"
                        )));
                    }
                    zero_mode(&mut s);
                    terms.push(CompiledTerm {
                        profile: s,
                        temporal: t.temporal.clone(),
                        differentiate: false,
                    });
                }
            }
            CurrentSource::Material {
                polarization,
                magnetization,
            } => {
                for t in polarization {
                    t.temporal.validate()?;
                    let s = transform(&t.spatial)?;
                    let mut s = if grid.dim() == 3 {
                        transverse_project(&s)?
                    } else {
                        s
                    };
                    zero_mode(&mut s);
                    terms.push(CompiledTerm {
                        profile: s,
                        temporal: t.temporal.clone(),
                        differentiate: true,
                    });
                }
                for t in magnetization {
                    if grid.dim() != 3 {
                        return Err(Error::Config("magnetization sources need a 3D grid".into()));
                    }
                    t.temporal.validate()?;
                    let m = transform(&t.spatial)?;
                    let mut s = SpectralField::zeros(Arc::clone(grid), 3);
                    for idx in 0..grid.len() {
                        if grid.spec().is_nyquist(idx) {
                            continue;
                        }
                        let ik = grid.k(idx).map(|x| Complex64::new(0.0, x));
                        let v = m.vector(idx);
                        s.set_vector(
                            idx,
                            [
                                ik[1] * v[2] - ik[2] * v[1],
                                ik[2] * v[0] - ik[0] * v[2],
                                ik[0] * v[1] - ik[1] * v[0],
                            ],
                        );
                    }
                    terms.push(CompiledTerm {
                        profile: s,
                        temporal: t.temporal.clone(),
                        differentiate: false,
                    });
                }
            }
        }
        Ok(CompiledSource {
            grid: Arc::clone(grid),
            terms,
        })
    }
}

fn zero_mode(s: &mut SpectralField) {
    for c in &mut s.comps {
        c[0] = Complex64::new(0.0, 0.0);
    }
}

#[derive(Debug, Clone)]
struct CompiledTerm {
    profile: SpectralField,
    temporal: Temporal,
    differentiate: bool,
}

impl CompiledTerm {
    fn amplitude(&self, t: f64) -> f64 {
        if self.differentiate {
            self.temporal.derivative(t)
        } else {
            self.temporal.value(t)
        }
    }
}

/// A source ready for evaluation: transverse k-space profiles with their
/// temporal factors.
#[derive(Debug, Clone)]
pub struct CompiledSource {
    grid: Arc<KGrid>,
    terms: Vec<CompiledTerm>,
}

impl CompiledSource {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn grid(&self) -> &Arc<KGrid> {
        &self.grid
    }

    /// `j_perp(k, t)` as a k-space field (unnormalized DFT convention).
    pub fn spectral_at(&self, t: f64) -> SpectralField {
        let comps = self.grid.spec().components();
        let mut out = SpectralField::zeros(Arc::clone(&self.grid), comps);
        for term in &self.terms {
            let g = term.amplitude(t);
            if g == 0.0 {
                continue;
            }
            for (o, p) in out.comps.iter_mut().zip(&term.profile.comps) {
                for (x, y) in o.iter_mut().zip(p) {
                    *x += y * g;
                }
            }
        }
        out
    }

    /// Per-term spatial profiles and temporal factor functions, for routines
    /// that integrate each term separately.
    pub(crate) fn terms(
        &self,
    ) -> impl Iterator<Item = (&SpectralField, Box<dyn Fn(f64) -> f64 + '_>)> {
        self.terms.iter().map(|t| {
            (
                &t.profile,
                Box::new(move |s| t.amplitude(s)) as Box<dyn Fn(f64) -> f64>,
            )
        })
    }

    /// Real-space `j_perp` at time `t`.
    pub fn snapshot_at(&self, t: f64) -> FieldSnapshot {
        self.spectral_at(t).to_real_snapshot(FieldKind::JPerp, t).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::grid::build_kgrid;

    fn grid3() -> Arc<KGrid> {
        Arc::new(
            build_kgrid(
                3,
                8,
                2.0 * std::f64::consts::PI,
                PhysicalConstants::default(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn temporal_derivatives_match_finite_differences() {
        let envs = [
            Temporal::Constant { value: 2.0 },
            Temporal::Cosine {
                amplitude: 1.5,
                omega: 2.0,
                phase: 0.3,
            },
            Temporal::Gaussian {
                amplitude: 1.0,
                center: 1.0,
                width: 0.7,
            },
            Temporal::GaussianCosine {
                amplitude: 0.5,
                center: 0.4,
                width: 1.3,
                omega: 3.0,
                phase: -0.2,
            },
        ];
        let h = 1e-5;
        for e in &envs {
            for t in [-0.3, 0.0, 0.9, 2.1] {
                let fd = (e.value(t + h) - e.value(t - h)) / (2.0 * h);
                assert!((fd - e.derivative(t)).abs() < 1e-8, "{e:?} at {t}");
            }
        }
    }

    #[test]
    fn longitudinal_direct_source_is_rejected() {
        let src = CurrentSource::Direct {
            terms: vec![SeparableTerm {
                spatial: SpatialProfile::Gaussian {
                    center: [3.0, 3.0, 3.0],
                    width: 0.8,
                    polarization: [0.0, 0.0, 1.0],
                },
                temporal: Temporal::Constant { value: 1.0 },
            }],
        };
        assert!(matches!(src.compile(&grid3()), Err(Error::Domain(_))));
    }

    #[test]
    fn transverse_plane_wave_source_is_accepted() {
        let src = CurrentSource::Direct {
            terms: vec![SeparableTerm {
                spatial: SpatialProfile::Cosine {
                    mode: [0, 0, 2],
                    phase: 0.1,
                    polarization: [1.0, 0.5, 0.0],
                },
                temporal: Temporal::Cosine {
                    amplitude: 1.0,
                    omega: 2.0,
                    phase: 0.0,
                },
            }],
        };
        let c = src.compile(&grid3()).unwrap();
        assert!(divergence_defect(&c.spectral_at(0.3)) < 1e-10);
    }

    #[test]
    fn material_source_is_transverse() {
        let gauss = |pol| SeparableTerm {
            spatial: SpatialProfile::Gaussian {
                center: [3.0, 2.0, 3.5],
                width: 0.9,
                polarization: pol,
            },
            temporal: Temporal::GaussianCosine {
                amplitude: 1.0,
                center: 1.0,
                width: 0.5,
                omega: 2.0,
                phase: 0.0,
            },
        };
        let src = CurrentSource::Material {
            polarization: vec![gauss([0.0, 0.0, 1.0])],
            magnetization: vec![gauss([1.0, 1.0, 0.0])],
        };
        let c = src.compile(&grid3()).unwrap();
        let j = c.spectral_at(0.8);
        assert!(j.norm_sqr() > 0.0);
        assert!(divergence_defect(&j) < 1e-10);
    }

    #[test]
    fn magnetization_needs_3d() {
        let g = Arc::new(build_kgrid(1, 16, 1.0, PhysicalConstants::default()).unwrap());
        let src = CurrentSource::Material {
            polarization: vec![],
            magnetization: vec![SeparableTerm {
                spatial: SpatialProfile::Gaussian {
                    center: [0.5; 3],
                    width: 0.1,
                    polarization: [1.0, 0.0, 0.0],
                },
                temporal: Temporal::Constant { value: 1.0 },
            }],
        };
        assert!(matches!(src.compile(&g), Err(Error::Config(_))));
    }
}
