//! Seeded random inputs for property checks and experiments.

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;

use crate::field::{FieldKind, FieldSnapshot, SpectralField};
use crate::grid::KGrid;
use crate::spectral::{scalar_product_k, transverse_project, ModeAmplitudes};
use crate::vec3::norm;

/// Modes with `0 < |k| <= k_max` that are not on a Nyquist plane.
pub fn band_mask(grid: &KGrid, k_max: f64) -> Vec<bool> {
    (0..grid.len())
        .map(|i| i != 0 && !grid.spec().is_nyquist(i) && norm(grid.k(i)) <= k_max)
        .collect()
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Gaussian amplitudes on the band `|k| <= k_max`, normalized to
/// `<psi|psi> = 1`.
pub fn random_amplitudes<R: Rng + ?Sized>(
    grid: &Arc<KGrid>,
    k_max: f64,
    rng: &mut R,
) -> ModeAmplitudes {
    let mask = band_mask(grid, k_max);
    let mut amps = ModeAmplitudes::zeros(Arc::clone(grid));
    let lambdas: &[_] = if grid.dim() == 3 {
        &crate::polarization::Helicity::BOTH
    } else {
        &[crate::polarization::Helicity::Plus]
    };
    for (idx, &on) in mask.iter().enumerate() {
        if on {
            for &l in lambdas {
                amps.set(l, idx, gaussian(rng));
            }
        }
    }
    let norm = scalar_product_k(&amps, &amps).unwrap().re.sqrt();
    if norm > 0.0 {
        amps.scaled(Complex64::new(1.0 / norm, 0.0))
    } else {
        amps
    }
}

/// Random real band-limited field in real space; projected transverse in 3D.
pub fn random_real_field<R: Rng + ?Sized>(
    grid: &Arc<KGrid>,
    kind: FieldKind,
    k_max: f64,
    transverse: bool,
    rng: &mut R,
) -> FieldSnapshot {
    let mask = band_mask(grid, k_max);
    let comps = grid.spec().components();
    let mut f = SpectralField::zeros(Arc::clone(grid), comps);
    for idx in 0..grid.len() {
        let neg = grid.spec().neg_index(idx);
        if !mask[idx] || neg < idx {
            continue;
        }
        for c in 0..comps {
            let z = gaussian(rng);
            f.comps[c][idx] = z;
            f.comps[c][neg] = z.conj();
        }
    }
    if transverse && grid.dim() == 3 {
        f = transverse_project(&f).expect("3D field");
    }
    f.to_real_snapshot(kind, 0.0).0
}
