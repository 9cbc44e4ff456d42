//! Coherent-state response of the field to a prescribed classical current.
//!
//! `alpha_lambda(k)` is the dimensionless coherent amplitude of mode
//! `(lambda, k)`: the mean photon count in the mode is `|alpha|^2`. It relates to
//! the covariant amplitude of the same state by `c_lambda(k) = alpha / sqrt(w_k)`.
//! For a current switched on at `t = 0`,
//!
//! ```text
//! alpha_lambda(k) = i / sqrt(2 eps0 hbar V omega_k)
//!                   * int_0^T dt' int dx conj(e_lambda(k)) . j_perp(t', x) e^{+i(omega_k t' - k.x)}
//! ```
//!
//! which is exactly the amplitude for which the expectation field
//! `A = sqrt(hbar / 2 eps0 V omega) alpha e_lambda e^{-i(omega t - k.x)} + cc`
//! reproduces the retarded solution of the sourced Maxwell pair. The time
//! integral uses the composite midpoint rule. Reversing a real temporal
//! envelope on `[0, T]` maps `alpha -> -e^{i omega T} (j_lambda / conj(j_lambda)) conj(alpha)`,
//! where `j_lambda` is the spatial transform of the profile.

use std::collections::BTreeMap;
use std::sync::Arc;

use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldKind, FieldSnapshot, SpectralField};
use crate::grid::KGrid;
use crate::polarization::Helicity;
use crate::source::CurrentSource;
use crate::spectral::{to_helicity, ModeAmplitudes};

/// Coherent amplitudes produced by a current, with their provenance.
#[derive(Debug, Clone)]
pub struct CoherentAmplitudes {
    pub alpha: ModeAmplitudes,
    pub source: String,
    /// Integration window `[0, t_final]`.
    pub window: (f64, f64),
}

impl CoherentAmplitudes {
    pub fn get(&self, lambda: Helicity, idx: usize) -> Complex64 {
        self.alpha.get(lambda, idx)
    }

    /// Total mean photon number `sum |alpha|^2`.
    pub fn mean_photon_number(&self) -> f64 {
        self.alpha
            .channels()
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Covariant amplitudes `c = alpha / sqrt(w_k)` of the same state.
    pub fn covariant(&self) -> ModeAmplitudes {
        let grid = Arc::clone(self.alpha.grid());
        self.alpha
            .map(|i, z| if i == 0 { z } else { z / grid.weight(i).sqrt() })
    }
}

/// Number of midpoint steps, requiring `dt` to divide `t_final`.
pub fn quadrature_steps(t_final: f64, dt: f64) -> Result<usize> {
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(Error::Config(format!("t_final must be > 0, got {t_final}")));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Config(format!(
            "quadrature dt must be > 0, got {dt}"
        )));
    }
    let steps = (t_final / dt).round();
    if steps < 1.0 || (steps * dt - t_final).abs() > 1e-9 * t_final {
        return Err(Error::Config(format!(
            "quadrature dt {dt} does not divide t_final {t_final}"
        )));
    }
    Ok(steps as usize)
}

/// `sum_n dt e^{i omega t_n} g(t_n)` over midpoints `t_n = (n + 1/2) dt`.
fn midpoint_phase_sum(omega: f64, g: &dyn Fn(f64) -> f64, dt: f64, steps: usize) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 0..steps {
        let t = (n as f64 + 0.5) * dt;
        acc += Complex64::from_polar(g(t), omega * t);
    }
    acc * dt
}

/// Coherent amplitudes generated by `source` acting over `[0, t_final]`.
pub fn alpha_from_current(
    source: &CurrentSource,
    grid: &Arc<KGrid>,
    t_final: f64,
    quadrature_dt: f64,
) -> Result<CoherentAmplitudes> {
    let steps = quadrature_steps(t_final, quadrature_dt)?;
    let compiled = source.compile(grid)?;
    let k = grid.constants();
    let spec = grid.spec();
    let dv = spec.cell_volume();
    let volume = spec.volume();
    let mut alpha = ModeAmplitudes::zeros(Arc::clone(grid));
    for (profile, g) in compiled.terms() {
        let projected = to_helicity(profile);
        // temporal sums depend on omega only
        let mut by_omega: BTreeMap<u64, Complex64> = BTreeMap::new();
        for idx in 1..grid.len() {
            let w = grid.omega(idx);
            by_omega
                .entry(w.to_bits())
                .or_insert_with(|| midpoint_phase_sum(w, &*g, quadrature_dt, steps));
        }
        let mut next = alpha.clone();
        for (ch, lambda) in channel_labels(grid).into_iter().enumerate() {
            for idx in 1..grid.len() {
                let w = grid.omega(idx);
                let q = by_omega[&w.to_bits()];
                let pref = Complex64::new(0.0, dv / (2.0 * k.eps0 * k.hbar * volume * w).sqrt());
                let add = pref * q * projected.channels()[ch][idx];
                next.set(lambda, idx, alpha.get(lambda, idx) + add);
            }
        }
        alpha = next;
    }
    if alpha.has_non_finite() {
        return Err(Error::Propagation("coherent amplitudes".into()));
    }
    Ok(CoherentAmplitudes {
        alpha,
        source: source.describe(),
        window: (0.0, t_final),
    })
}

fn channel_labels(grid: &KGrid) -> Vec<Helicity> {
    if grid.dim() == 3 {
        Helicity::BOTH.to_vec()
    } else {
        vec![Helicity::Plus]
    }
}

/// Expectation value of `A_perp` at time `t` in the coherent state, together
/// with the largest imaginary residue of the inverse transform.
pub fn field_expectation_checked(alphas: &CoherentAmplitudes, t: f64) -> (FieldSnapshot, f64) {
    let c = alphas.covariant();
    let grid = Arc::clone(c.grid());
    let spec = grid.spec();
    let k = grid.constants();
    let pref = (k.hbar / (2.0 * k.eps0)).sqrt() * spec.len() as f64;
    let positive = {
        let mut f = crate::spectral::from_helicity(&c);
        let g = Arc::clone(&grid);
        f.scale_modes(|i| Complex64::from_polar(pref * g.weight(i), -g.omega(i) * t));
        f
    };
    // A(k) = A+(k) + conj(A+(-k)): Hermitian by construction
    let mut full = SpectralField::zeros(Arc::clone(&grid), positive.components());
    for idx in 0..grid.len() {
        let neg = spec.neg_index(idx);
        for c in 0..positive.components() {
            full.comps[c][idx] = positive.comps[c][idx] + positive.comps[c][neg].conj();
        }
    }
    full.to_real_snapshot(FieldKind::APerp, t)
}

/// Expectation value of `A_perp` at time `t` in the coherent state.
pub fn field_expectation(alphas: &CoherentAmplitudes, t: f64) -> FieldSnapshot {
    field_expectation_checked(alphas, t).0
}

/// Smallest truncation level accepted by [`photon_count_distribution`].
pub fn required_n_max(alpha: Complex64) -> usize {
    (4.0 * alpha.norm_sqr()).ceil() as usize + 20
}

/// Poisson counting statistics `P(n) = e^{-|alpha|^2} |alpha|^{2n} / n!`,
/// `n = 0..=n_max`.
pub fn poisson_counts(alpha: Complex64, n_max: usize) -> Result<Vec<f64>> {
    if n_max < required_n_max(alpha) {
        return Err(Error::Domain(format!(
            "n_max = {n_max} too small for |alpha|^2 = {}; need >= {}",
            alpha.norm_sqr(),
            required_n_max(alpha)
        )));
    }
    let mean = alpha.norm_sqr();
    let mut p = vec![0.0; n_max + 1];
    if mean == 0.0 {
        p[0] = 1.0;
        return Ok(p);
    }
    // e^{-mean} underflows for mean > ~745: anchor at the peak in log space
    // and recur outward, letting only the far tails underflow
    let peak = mean.floor() as usize;
    p[peak] = ln_poisson_at(mean, peak).exp();
    for n in peak + 1..=n_max {
        p[n] = p[n - 1] * mean / n as f64;
    }
    for n in (0..peak).rev() {
        p[n] = p[n + 1] * (n + 1) as f64 / mean;
    }
    Ok(p)
}

/// `ln P(n)` for `n = floor(mean)`. Large `n` uses Stirling's series in the
/// form `n ln(1 + (mean - n)/n) - (mean - n) - ...`, which avoids cancelling
/// terms of size `mean ln mean`.
fn ln_poisson_at(mean: f64, n: usize) -> f64 {
    if n < 30 {
        let ln_fact: f64 = (2..=n).map(|k| (k as f64).ln()).sum();
        return -mean + n as f64 * mean.ln() - ln_fact;
    }
    let x = n as f64;
    let series = 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3)) + 1.0 / (1260.0 * x.powi(5));
    let excess = mean - x;
    x * (excess / x).ln_1p() - excess - 0.5 * (2.0 * std::f64::consts::PI * x).ln() - series
}

/// Photon-count distribution of one mode of a coherent response.
pub fn photon_count_distribution(
    alphas: &CoherentAmplitudes,
    lambda: Helicity,
    k_index: usize,
    n_max: usize,
) -> Result<Vec<f64>> {
    if k_index == 0 || k_index >= alphas.alpha.grid().len() {
        return Err(Error::Domain(format!(
            "mode index {k_index} is not a radiating mode"
        )));
    }
    poisson_counts(alphas.get(lambda, k_index), n_max)
}
