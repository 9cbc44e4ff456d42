//! Periodic wavevector lattices with covariant quadrature weights.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::polarization::{spherical_unit_vectors, Helicity, SphericalTriad};
use crate::vec3::{norm, CVec3, Vec3};

/// Shape of a cubic periodic box: `n` points per axis, side `box_length`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dim: usize,
    pub n: usize,
    pub box_length: f64,
}

impl GridSpec {
    pub fn new(dim: usize, n: usize, box_length: f64) -> Self {
        Self { dim, n, box_length }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim != 1 && self.dim != 3 {
            return Err(Error::Config(format!(
                "dim must be 1 or 3, got {}",
                self.dim
            )));
        }
        if self.n < 2 {
            return Err(Error::Config(format!(
                "n_points must be >= 2, got {}",
                self.n
            )));
        }
        if !(self.box_length.is_finite() && self.box_length > 0.0) {
            return Err(Error::Config(format!(
                "box_length must be finite and > 0, got {}",
                self.box_length
            )));
        }
        Ok(())
    }

    /// Total number of lattice sites, `n^dim`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Field components per site: 3 for vector fields, 1 for the scalar analog.
    pub fn components(&self) -> usize {
        if self.dim == 3 {
            3
        } else {
            1
        }
    }

    /// Helicity channels per mode: 2 in 3D, 1 for the scalar analog.
    pub fn channels(&self) -> usize {
        if self.dim == 3 {
            2
        } else {
            1
        }
    }

    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        self.box_length.powi(self.dim as i32)
    }

    /// Signed lattice frequency in standard DFT ordering (`0, 1, .., -2, -1`).
    pub fn axis_freq(&self, j: usize) -> i64 {
        let (j, n) = (j as i64, self.n as i64);
        if 2 * j < n {
            j
        } else {
            j - n
        }
    }

    /// Per-axis lattice coordinates of a flat row-major index (unused axes are 0).
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        match self.dim {
            1 => [idx, 0, 0],
            _ => [idx / (n * n), (idx / n) % n, idx % n],
        }
    }

    pub fn index(&self, coords: [usize; 3]) -> usize {
        let n = self.n;
        match self.dim {
            1 => coords[0] % n,
            _ => ((coords[0] % n) * n + coords[1] % n) * n + coords[2] % n,
        }
    }

    /// Index of the mode `-k`, per axis `(n - j) mod n`.
    pub fn neg_index(&self, idx: usize) -> usize {
        let c = self.coords(idx);
        let n = self.n;
        self.index(c.map(|j| (n - j) % n))
    }

    /// Whether any axis of the mode sits on the Nyquist frequency `-n/2`.
    pub fn is_nyquist(&self, idx: usize) -> bool {
        if !self.n.is_multiple_of(2) {
            return false;
        }
        let c = self.coords(idx);
        c[..self.dim].iter().any(|&j| 2 * j == self.n)
    }

    /// Real-space position of a lattice site, origin at site 0.
    pub fn position(&self, idx: usize) -> Vec3 {
        let h = self.spacing();
        let c = self.coords(idx);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = c[a] as f64 * h;
        }
        x
    }
}

/// Discretized k-space of a periodic box: wavevectors, dispersion `omega = c|k|`
/// and covariant weights `w_k = (dk)^dim / ((2 pi)^dim omega_k) = 1 / (V omega_k)`.
///
/// The zero mode sits at index 0, carries weight 0 and is excluded from the
/// physics of every field routine.
#[derive(Clone)]
pub struct KGrid {
    spec: GridSpec,
    constants: PhysicalConstants,
    k: Vec<Vec3>,
    omega: Vec<f64>,
    weight: Vec<f64>,
    triads: Vec<Option<SphericalTriad>>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for KGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KGrid")
            .field("spec", &self.spec)
            .field("constants", &self.constants)
            .finish_non_exhaustive()
    }
}

/// Build a k-lattice for `dim` in {1, 3} with `n_points` per axis.
pub fn build_kgrid(
    dim: usize,
    n_points: usize,
    box_length: f64,
    constants: PhysicalConstants,
) -> Result<KGrid> {
    KGrid::new(GridSpec::new(dim, n_points, box_length), constants)
}

impl KGrid {
    pub fn new(spec: GridSpec, constants: PhysicalConstants) -> Result<Self> {
        spec.validate()?;
        constants.validate()?;
        let dk = 2.0 * std::f64::consts::PI / spec.box_length;
        let volume = spec.volume();
        let total = spec.len();
        let mut k = Vec::with_capacity(total);
        let mut omega = Vec::with_capacity(total);
        let mut weight = Vec::with_capacity(total);
        let mut triads = Vec::with_capacity(if spec.dim == 3 { total } else { 0 });
        for idx in 0..total {
            let c = spec.coords(idx);
            let mut kv = [0.0; 3];
            for a in 0..spec.dim {
                kv[a] = dk * spec.axis_freq(c[a]) as f64;
            }
            let w = constants.c * norm(kv);
            k.push(kv);
            omega.push(w);
            weight.push(if idx == 0 { 0.0 } else { 1.0 / (volume * w) });
            if spec.dim == 3 {
                triads.push(spherical_unit_vectors(kv).ok());
            }
        }
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(spec.n);
        let inv = planner.plan_fft_inverse(spec.n);
        Ok(Self {
            spec,
            constants,
            k,
            omega,
            weight,
            triads,
            fwd,
            inv,
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.spec
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    pub fn zero_mode_index(&self) -> usize {
        0
    }

    pub fn k(&self, idx: usize) -> Vec3 {
        self.k[idx]
    }

    pub fn k_vectors(&self) -> &[Vec3] {
        &self.k
    }

    pub fn omega(&self, idx: usize) -> f64 {
        self.omega[idx]
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omega
    }

    pub fn weight(&self, idx: usize) -> f64 {
        self.weight[idx]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weight
    }

    /// Spherical triad of a mode; `None` for the zero mode or in 1D.
    pub fn triad(&self, idx: usize) -> Option<&SphericalTriad> {
        self.triads.get(idx).and_then(|t| t.as_ref())
    }

    pub fn helicity_vector(&self, idx: usize, lambda: Helicity) -> Option<CVec3> {
        self.triad(idx).map(|t| t.helicity(lambda))
    }

    /// Whether two grids describe the same lattice and units.
    pub fn same_lattice(&self, other: &KGrid) -> bool {
        self.spec == other.spec && self.constants == other.constants
    }

    pub fn ensure_same(&self, other: &KGrid) -> Result<()> {
        if self.same_lattice(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "{:?} vs {:?}",
                self.spec, other.spec
            )))
        }
    }

    /// In-place unnormalized forward DFT, `F(k) = sum_x f(x) e^{-i k.x}`.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.fwd, 1.0);
    }

    /// In-place inverse DFT, `f(x) = (1/N) sum_k F(k) e^{i k.x}`.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.transform(buf, &self.inv, 1.0 / self.len() as f64);
    }

    fn transform(&self, buf: &mut [Complex64], plan: &Arc<dyn Fft<f64>>, scale: f64) {
        assert_eq!(buf.len(), self.len(), "transform buffer has wrong length");
        let n = self.spec.n;
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        // contiguous last axis
        plan.process_with_scratch(buf, &mut scratch);
        if self.spec.dim == 3 {
            let mut line = vec![Complex64::new(0.0, 0.0); n];
            for stride in [n, n * n] {
                for base in 0..self.len() {
                    // visit each line once: base has zero coordinate along this axis
                    if (base / stride) % n != 0 {
                        continue;
                    }
                    for (j, v) in line.iter_mut().enumerate() {
                        *v = buf[base + j * stride];
                    }
                    plan.process_with_scratch(&mut line, &mut scratch);
                    for (j, v) in line.iter().enumerate() {
                        buf[base + j * stride] = *v;
                    }
                }
            }
        }
        if scale != 1.0 {
            for v in buf.iter_mut() {
                *v *= scale;
            }
        }
    }

    /// Per-mode phase `e^{i k.dx}` with Nyquist axes symmetrized to `cos`,
    /// so lattice sums stay real-symmetric for off-lattice displacements.
    pub fn plane_wave_phase(&self, idx: usize, dx: Vec3) -> Complex64 {
        let c = self.spec.coords(idx);
        let kv = self.k[idx];
        let mut phase = Complex64::new(1.0, 0.0);
        for a in 0..self.spec.dim {
            let arg = kv[a] * dx[a];
            let f = if 2 * c[a] == self.spec.n {
                Complex64::new(arg.cos(), 0.0)
            } else {
                Complex64::from_polar(1.0, arg)
            };
            phase *= f;
        }
        phase
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> PhysicalConstants {
        PhysicalConstants::default()
    }

    #[test]
    fn two_point_lattice() {
        let g = build_kgrid(1, 2, 2.0 * std::f64::consts::PI, nat()).unwrap();
        assert_eq!(g.k(0)[0], 0.0);
        assert_eq!(g.k(1)[0], -1.0);
        assert_eq!(g.omegas(), &[0.0, 1.0]);
    }

    #[test]
    fn four_point_dispersion() {
        let g = build_kgrid(1, 4, 2.0 * std::f64::consts::PI, nat()).unwrap();
        assert_eq!(g.omegas(), &[0.0, 1.0, 2.0, 1.0]);
        let ks: Vec<f64> = g.k_vectors().iter().map(|k| k[0]).collect();
        assert_eq!(ks, vec![0.0, 1.0, -2.0, -1.0]);
    }

    #[test]
    fn three_d_zero_mode_counting() {
        let g = build_kgrid(3, 4, 1.0, nat()).unwrap();
        assert_eq!(g.len(), 64);
        let zeros = g.omegas().iter().filter(|&&w| w == 0.0).count();
        assert_eq!(zeros, 1);
        assert_eq!(g.weight(g.zero_mode_index()), 0.0);
        let positive = g
            .weights()
            .iter()
            .filter(|&&w| w > 0.0 && w.is_finite())
            .count();
        assert_eq!(positive, 63);
        assert!(g.triad(0).is_none());
        assert!((1..64).all(|i| g.triad(i).is_some()));
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(
            build_kgrid(1, 1, 1.0, nat()),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            build_kgrid(2, 8, 1.0, nat()),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            build_kgrid(3, 8, 0.0, nat()),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            build_kgrid(1, 8, f64::INFINITY, nat()),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn weights_are_inverse_volume_omega() {
        let c = PhysicalConstants::new(2.5, 1.0, 1.0).unwrap();
        let g = build_kgrid(3, 6, 3.0, c).unwrap();
        for i in 1..g.len() {
            let k = g.k(i);
            let w = 2.5 * norm(k);
            assert!((g.omega(i) - w).abs() < 1e-13 * w);
            let dk = 2.0 * std::f64::consts::PI / 3.0;
            let expected = dk.powi(3) / ((2.0 * std::f64::consts::PI).powi(3) * w);
            assert!((g.weight(i) - expected).abs() < 1e-13 * expected);
        }
    }

    #[test]
    fn lattice_closed_under_negation() {
        for (dim, n) in [(1, 8), (1, 7), (3, 6), (3, 5)] {
            let g = build_kgrid(dim, n, 2.0, nat()).unwrap();
            for i in 0..g.len() {
                let j = g.spec().neg_index(i);
                assert_eq!(g.spec().neg_index(j), i);
                if !g.spec().is_nyquist(i) {
                    let (a, b) = (g.k(i), g.k(j));
                    assert!((0..3).all(|c| a[c] == -b[c]));
                }
                assert_eq!(g.omega(i), g.omega(j));
            }
        }
    }

    #[test]
    fn deterministic_construction() {
        let a = build_kgrid(3, 8, 1.7, nat()).unwrap();
        let b = build_kgrid(3, 8, 1.7, nat()).unwrap();
        let bits = |g: &KGrid| -> Vec<u64> {
            g.weights()
                .iter()
                .chain(g.omegas())
                .map(|v| v.to_bits())
                .collect()
        };
        assert_eq!(bits(&a), bits(&b));
    }

    #[test]
    fn band_weight_sum_stable_under_refinement() {
        // fixed box, band |k| in [1, 3]
        let band = |g: &KGrid| -> f64 {
            (0..g.len())
                .filter(|&i| {
                    let k = norm(g.k(i));
                    (1.0..=3.0).contains(&k)
                })
                .map(|i| g.weight(i))
                .sum()
        };
        let l = 4.0 * std::f64::consts::PI;
        let coarse = band(&build_kgrid(3, 16, l, nat()).unwrap());
        let fine = band(&build_kgrid(3, 32, l, nat()).unwrap());
        assert!(((fine - coarse) / coarse).abs() < 1e-3);
    }

    #[test]
    fn transform_round_trip_and_plane_wave() {
        let g = build_kgrid(3, 6, 2.0, nat()).unwrap();
        let target = g.spec().index([1, 5, 2]);
        let kv = g.k(target);
        let mut buf: Vec<Complex64> = (0..g.len())
            .map(|i| {
                let x = g.spec().position(i);
                Complex64::from_polar(1.0, kv[0] * x[0] + kv[1] * x[1] + kv[2] * x[2])
            })
            .collect();
        let orig = buf.clone();
        g.forward(&mut buf);
        for (i, v) in buf.iter().enumerate() {
            let expect = if i == target { g.len() as f64 } else { 0.0 };
            assert!(
                (v - Complex64::new(expect, 0.0)).norm() < 1e-10,
                "mode {i}: {v}"
            );
        }
        g.inverse(&mut buf);
        for (a, b) in buf.iter().zip(orig.iter()) {
            assert!((a - b).norm() < 1e-13);
        }
    }
}
