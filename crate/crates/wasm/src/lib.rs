//! Browser bindings for the demo page in `www/`: light-cone leakage of real
//! fields versus the photon wavefunction, photon-count distributions of
//! coherent states, and the two propagation kernels on the 1D lattice.

use std::sync::Arc;

use photonlab::evolve::MaxwellEvolver;
use photonlab::fock::{FockState, ModeId};
use photonlab::kernels::{
    commutator_kernel_profile, light_cone_leakage, propagator_photon_profile, Support,
};
use photonlab::source::CurrentSource;
use photonlab::spectral::{build_psi, energy_density, number_density};
use photonlab::{
    build_kgrid, Complex64, FieldData, FieldKind, FieldSnapshot, Helicity, KGrid, PhysicalConstants,
};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 1 << 16;

fn grid(n: usize) -> photonlab::Result<Arc<KGrid>> {
    if n > MAX_POINTS {
        return Err(photonlab::Error::Config(format!(
            "at most {MAX_POINTS} points, got {n}"
        )));
    }
    Ok(Arc::new(build_kgrid(
        1,
        n,
        1.0,
        PhysicalConstants::default(),
    )?))
}

fn js(e: photonlab::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Densities on the unit box `[0, 1)` at one time, with leakage fractions.
#[wasm_bindgen]
pub struct ConeFrame {
    time: f64,
    horizon: f64,
    leakage_real: f64,
    leakage_psi: f64,
    real: Vec<f64>,
    psi: Vec<f64>,
}

#[wasm_bindgen]
impl ConeFrame {
    #[wasm_bindgen(getter)]
    pub fn time(&self) -> f64 {
        self.time
    }

    /// Latest time before the light cone wraps around the box.
    #[wasm_bindgen(getter)]
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    #[wasm_bindgen(getter)]
    pub fn leakage_real(&self) -> f64 {
        self.leakage_real
    }

    #[wasm_bindgen(getter)]
    pub fn leakage_psi(&self) -> f64 {
        self.leakage_psi
    }

    /// Electromagnetic energy density.
    #[wasm_bindgen(getter)]
    pub fn real_density(&self) -> Vec<f64> {
        self.real.clone()
    }

    /// Photon number density `|psi|^2`.
    #[wasm_bindgen(getter)]
    pub fn psi_density(&self) -> Vec<f64> {
        self.psi.clone()
    }
}

fn cone_frame(n: usize, half_width: f64, cells: usize) -> photonlab::Result<ConeFrame> {
    let g = grid(n)?;
    let spec = g.spec();
    if !(half_width > 0.0 && half_width < 0.5) {
        return Err(photonlab::Error::Config(format!(
            "half-width must be in (0, 0.5), got {half_width}"
        )));
    }
    let bump: Vec<f64> = (0..n)
        .map(|i| {
            let r = (spec.position(i)[0] - 0.5) / half_width;
            if r.abs() < 1.0 {
                (-1.0 / (1.0 - r * r)).exp()
            } else {
                0.0
            }
        })
        .collect();
    let a = FieldSnapshot::new(FieldKind::APerp, 0.0, spec, 1, FieldData::Real(bump))?;
    let d = FieldSnapshot::zeros(FieldKind::D, 0.0, spec);
    // free modes are propagated exactly, so one step of any length will do
    let t = cells as f64 * spec.spacing();
    let (a_t, d_t) = if cells == 0 {
        (a, d)
    } else {
        let mut ev = MaxwellEvolver::new(&g, &a, &d, &CurrentSource::None, t)?;
        ev.step()?;
        let (a_t, d_t, _) = ev.snapshots();
        (a_t, d_t)
    };
    let support = Support::Interval {
        lo: 0.5 - half_width,
        hi: 0.5 + half_width,
    };
    let real = energy_density(&g, &a_t, &d_t)?;
    let psi = number_density(&build_psi(&g, &a_t, &d_t)?)?;
    let lr = light_cone_leakage(&real, t, &support, 1.0)?;
    let lp = light_cone_leakage(&psi, t, &support, 1.0)?;
    Ok(ConeFrame {
        time: t,
        horizon: lr.horizon,
        leakage_real: lr.fraction,
        leakage_psi: lp.fraction,
        real: real.real().expect("real density").to_vec(),
        psi: psi.real().expect("real density").to_vec(),
    })
}

/// Start from a smooth bump of `A` at rest on `n` points and advance it by
/// `cells` cell-crossing times.
#[wasm_bindgen]
pub fn light_cone_frame(n: usize, half_width: f64, cells: usize) -> Result<ConeFrame, JsError> {
    cone_frame(n, half_width, cells).map_err(js)
}

/// Photon-count distribution of a truncated coherent state.
#[wasm_bindgen]
pub struct CountFrame {
    probabilities: Vec<f64>,
    mean: f64,
    norm_deficit: f64,
}

#[wasm_bindgen]
impl CountFrame {
    #[wasm_bindgen(getter)]
    pub fn probabilities(&self) -> Vec<f64> {
        self.probabilities.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Probability lost to the truncation at `n_max`.
    #[wasm_bindgen(getter)]
    pub fn norm_deficit(&self) -> f64 {
        self.norm_deficit
    }
}

fn counts(alpha_re: f64, alpha_im: f64, n_max: usize) -> photonlab::Result<CountFrame> {
    if n_max > 200 {
        return Err(photonlab::Error::Config(format!(
            "n_max at most 200, got {n_max}"
        )));
    }
    let mode = ModeId::new(Helicity::Plus, 1)?;
    let (state, diag) = FockState::coherent(mode, Complex64::new(alpha_re, alpha_im), n_max)?;
    Ok(CountFrame {
        probabilities: state.occupation_distribution(mode)?,
        mean: state.mean_occupation(mode)?,
        norm_deficit: diag.norm_deficit,
    })
}

#[wasm_bindgen]
pub fn photon_counts(alpha_re: f64, alpha_im: f64, n_max: usize) -> Result<CountFrame, JsError> {
    counts(alpha_re, alpha_im, n_max).map_err(js)
}

/// Both kernels over the whole 1D lattice at one time separation.
#[wasm_bindgen]
pub struct KernelFrame {
    time: f64,
    commutator: Vec<f64>,
    photon_abs: Vec<f64>,
}

#[wasm_bindgen]
impl KernelFrame {
    #[wasm_bindgen(getter)]
    pub fn time(&self) -> f64 {
        self.time
    }

    /// Causal A-D commutator kernel.
    #[wasm_bindgen(getter)]
    pub fn commutator(&self) -> Vec<f64> {
        self.commutator.clone()
    }

    /// Magnitude of the positive-frequency photon kernel.
    #[wasm_bindgen(getter)]
    pub fn photon_abs(&self) -> Vec<f64> {
        self.photon_abs.clone()
    }
}

fn kernel_frame(n: usize, cells: f64) -> photonlab::Result<KernelFrame> {
    let g = grid(n)?;
    let t = cells * g.spec().spacing();
    Ok(KernelFrame {
        time: t,
        commutator: commutator_kernel_profile(&g, t),
        photon_abs: propagator_photon_profile(&g, t)
            .iter()
            .map(|z| z.norm())
            .collect(),
    })
}

/// Kernels at `cells` cell-crossing times (fractional values show the
/// off-lattice tails of the commutator).
#[wasm_bindgen]
pub fn kernel_profiles(n: usize, cells: f64) -> Result<KernelFrame, JsError> {
    kernel_frame(n, cells).map_err(js)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_frame_separates_real_and_psi() {
        let f = cone_frame(1024, 1.0 / 16.0, 64).unwrap();
        assert!(f.leakage_real < 1e-8, "{}", f.leakage_real);
        assert!(f.leakage_psi > 1e-3, "{}", f.leakage_psi);
        assert_eq!(f.real_density().len(), 1024);
        assert!(f.time < f.horizon);
    }

    #[test]
    fn counts_are_poisson() {
        let f = counts(1.0, 0.0, 30).unwrap();
        let p = f.probabilities();
        let e = (-1.0f64).exp();
        assert!((p[0] - e).abs() < 1e-14 && (p[2] - e / 2.0).abs() < 1e-14);
        assert!((f.mean() - 1.0).abs() < 1e-12);
        assert!(counts(1.0, 0.0, 1000).is_err());
    }

    #[test]
    fn kernel_frame_on_the_cone() {
        let f = kernel_frame(256, 16.0).unwrap();
        let peak = f.commutator().iter().fold(0.0f64, |m, x| m.max(x.abs()));
        // only the two cone sites carry the commutator
        let big = f
            .commutator()
            .iter()
            .filter(|x| x.abs() > 1e-9 * peak)
            .count();
        assert_eq!(big, 2);
        assert!(f.photon_abs()[128] > 1e-3 * f.photon_abs().iter().cloned().fold(0.0, f64::max));
        assert!(grid(MAX_POINTS + 1).is_err());
    }
}
