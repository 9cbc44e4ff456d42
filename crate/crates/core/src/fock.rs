//! Truncated Fock spaces over a handful of `(lambda, k)` modes.
//!
//! States are dense amplitude tensors over occupation tuples `(n_1, .., n_M)`
//! with every `n_i <= n_max`. Modes are kept in lexicographic `(lambda, k_index)`
//! order and the first mode is the most significant tensor index.
//!
//! The creation operator maps the top level to zero; [`FockState::ladder_raise`]
//! reports the squared norm of the input that was dropped this way.

use nalgebra::DMatrix;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polarization::Helicity;

/// Largest dense tensor we are willing to allocate.
pub const MAX_AMPLITUDES: usize = 1 << 20;

/// Label of a single field mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId {
    pub lambda: Helicity,
    pub k_index: usize,
}

impl ModeId {
    pub fn new(lambda: Helicity, k_index: usize) -> Result<Self> {
        if k_index == 0 {
            return Err(Error::Domain("the zero mode carries no photons".into()));
        }
        Ok(Self { lambda, k_index })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    modes: Vec<ModeId>,
    n_max: usize,
    amps: Vec<Complex64>,
}

/// Truncation diagnostics of a coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentDiagnostics {
    /// `1 - sum_{n <= n_max} P(n)`.
    pub norm_deficit: f64,
    /// `|alpha|^2 <= n_max / 4`.
    pub reliable: bool,
}

fn check_modes(modes: &[ModeId], n_max: usize) -> Result<()> {
    if modes.is_empty() {
        return Err(Error::Domain("a Fock state needs at least one mode".into()));
    }
    if n_max == 0 {
        return Err(Error::Domain("n_max must be >= 1".into()));
    }
    if modes.iter().any(|m| m.k_index == 0) {
        return Err(Error::Domain("the zero mode carries no photons".into()));
    }
    for w in modes.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Domain(format!("duplicate mode {:?}", w[1])));
        }
    }
    let size = (n_max + 1).checked_pow(modes.len() as u32);
    match size {
        Some(s) if s <= MAX_AMPLITUDES => Ok(()),
        _ => Err(Error::Domain(format!(
            "{} modes at n_max = {n_max} exceed {MAX_AMPLITUDES} amplitudes",
            modes.len()
        ))),
    }
}

impl FockState {
    /// Vacuum `|0>` over the given modes (any order; stored sorted).
    pub fn vacuum(modes: &[ModeId], n_max: usize) -> Result<Self> {
        let occ = vec![0; modes.len()];
        Self::number_state(modes, &occ, n_max)
    }

    /// Normalized number state `prod_i (a_i^dag)^{n_i} / sqrt(n_i!) |0>`.
    pub fn number_state(modes: &[ModeId], occupations: &[usize], n_max: usize) -> Result<Self> {
        if modes.len() != occupations.len() {
            return Err(Error::Domain(format!(
                "{} modes but {} occupations",
                modes.len(),
                occupations.len()
            )));
        }
        if let Some(&occupation) = occupations.iter().find(|&&n| n > n_max) {
            return Err(Error::Truncation { occupation, n_max });
        }
        let mut pairs: Vec<(ModeId, usize)> = modes
            .iter()
            .copied()
            .zip(occupations.iter().copied())
            .collect();
        pairs.sort_by_key(|p| p.0);
        let sorted: Vec<ModeId> = pairs.iter().map(|p| p.0).collect();
        check_modes(&sorted, n_max)?;
        let mut state = Self::zeros(sorted, n_max);
        let occ: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let idx = state.flat_index(&occ);
        state.amps[idx] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    /// Single-mode coherent state `e^{-|alpha|^2/2} sum_n alpha^n / sqrt(n!) |n>`,
    /// truncated at `n_max`.
    pub fn coherent(
        mode: ModeId,
        alpha: Complex64,
        n_max: usize,
    ) -> Result<(Self, CoherentDiagnostics)> {
        check_modes(&[mode], n_max)?;
        let mut state = Self::zeros(vec![mode], n_max);
        let mut term = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        state.amps[0] = term;
        for n in 1..=n_max {
            term = term * alpha / (n as f64).sqrt();
            state.amps[n] = term;
        }
        let kept: f64 = state.amps.iter().map(|z| z.norm_sqr()).sum();
        let reliable = alpha.norm_sqr() <= n_max as f64 / 4.0;
        if !reliable {
            log::warn!(
                "coherent state with |alpha|^2 = {} is unreliable at n_max = {n_max}",
                alpha.norm_sqr()
            );
        }
        Ok((
            state,
            CoherentDiagnostics {
                norm_deficit: 1.0 - kept,
                reliable,
            },
        ))
    }

    fn zeros(modes: Vec<ModeId>, n_max: usize) -> Self {
        let len = (n_max + 1).pow(modes.len() as u32);
        Self {
            modes,
            n_max,
            amps: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn modes(&self) -> &[ModeId] {
        &self.modes
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    fn stride(&self, pos: usize) -> usize {
        (self.n_max + 1).pow((self.modes.len() - 1 - pos) as u32)
    }

    fn flat_index(&self, occupations: &[usize]) -> usize {
        occupations
            .iter()
            .fold(0, |acc, &n| acc * (self.n_max + 1) + n)
    }

    fn occupation(&self, flat: usize, pos: usize) -> usize {
        (flat / self.stride(pos)) % (self.n_max + 1)
    }

    fn position(&self, mode: ModeId) -> Result<usize> {
        self.modes
            .binary_search(&mode)
            .map_err(|_| Error::Domain(format!("mode {mode:?} is not part of this state")))
    }

    /// Amplitude of the basis state with the given occupations (in stored mode order).
    pub fn amplitude(&self, occupations: &[usize]) -> Complex64 {
        self.amps[self.flat_index(occupations)]
    }

    /// Build from raw amplitudes in stored layout; `modes` must be sorted.
    pub fn from_amplitudes(modes: Vec<ModeId>, n_max: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_modes(&modes, n_max)?;
        let len = (n_max + 1).pow(modes.len() as u32);
        if amps.len() != len {
            return Err(Error::Domain(format!(
                "expected {len} amplitudes, got {}",
                amps.len()
            )));
        }
        Ok(Self { modes, n_max, amps })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if !(n > 0.0) {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            modes: self.modes.clone(),
            n_max: self.n_max,
            amps: self.amps.iter().map(|z| z * s).collect(),
        }
    }

    fn ensure_compatible(&self, other: &Self) -> Result<()> {
        if self.modes != other.modes || self.n_max != other.n_max {
            return Err(Error::Domain(
                "states live on different mode sets or truncations".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        Ok(Self {
            modes: self.modes.clone(),
            n_max: self.n_max,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        self.ensure_compatible(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `a|psi>` on one mode.
    pub fn ladder_lower(&self, mode: ModeId) -> Result<Self> {
        let pos = self.position(mode)?;
        let stride = self.stride(pos);
        let mut out = Self::zeros(self.modes.clone(), self.n_max);
        for (idx, &amp) in self.amps.iter().enumerate() {
            let n = self.occupation(idx, pos);
            if n > 0 {
                out.amps[idx - stride] += amp * (n as f64).sqrt();
            }
        }
        Ok(out)
    }

    /// `a^dag|psi>` on one mode, plus the squared norm of the input's
    /// top-level component, which truncation discards.
    pub fn ladder_raise(&self, mode: ModeId) -> Result<(Self, f64)> {
        let pos = self.position(mode)?;
        let stride = self.stride(pos);
        let mut out = Self::zeros(self.modes.clone(), self.n_max);
        let mut lost = 0.0;
        for (idx, &amp) in self.amps.iter().enumerate() {
            let n = self.occupation(idx, pos);
            if n < self.n_max {
                out.amps[idx + stride] += amp * ((n + 1) as f64).sqrt();
            } else {
                lost += amp.norm_sqr();
            }
        }
        Ok((out, lost))
    }

    /// `<a^dag a>` for one mode.
    pub fn mean_occupation(&self, mode: ModeId) -> Result<f64> {
        Ok(self.ladder_lower(mode)?.norm_sqr())
    }

    /// Marginal occupation probabilities of one mode, `n = 0..=n_max`.
    pub fn occupation_distribution(&self, mode: ModeId) -> Result<Vec<f64>> {
        let pos = self.position(mode)?;
        let mut p = vec![0.0; self.n_max + 1];
        for (idx, amp) in self.amps.iter().enumerate() {
            p[self.occupation(idx, pos)] += amp.norm_sqr();
        }
        Ok(p)
    }

    /// Tensor product of states on disjoint mode sets with equal truncation.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.n_max != other.n_max {
            return Err(Error::Domain(
                "tensor product needs equal truncation".into(),
            ));
        }
        let mut modes: Vec<ModeId> = self.modes.iter().chain(&other.modes).copied().collect();
        modes.sort();
        check_modes(&modes, self.n_max)?;
        let mut out = Self::zeros(modes, self.n_max);
        let mut occ = vec![0; out.modes.len()];
        let pos_a: Vec<usize> = self
            .modes
            .iter()
            .map(|m| out.position(*m).unwrap())
            .collect();
        let pos_b: Vec<usize> = other
            .modes
            .iter()
            .map(|m| out.position(*m).unwrap())
            .collect();
        for (ia, a) in self.amps.iter().enumerate() {
            for (p, &slot) in pos_a.iter().enumerate() {
                occ[slot] = self.occupation(ia, p);
            }
            for (ib, b) in other.amps.iter().enumerate() {
                for (p, &slot) in pos_b.iter().enumerate() {
                    occ[slot] = other.occupation(ib, p);
                }
                let idx = out.flat_index(&occ);
                out.amps[idx] = a * b;
            }
        }
        Ok(out)
    }
}

/// Joint detection probability `<a1^dag a2^dag a2 a1> = ||a2 a1 psi||^2`.
pub fn coincidence_probability(state: &FockState, mode1: ModeId, mode2: ModeId) -> Result<f64> {
    if mode1 == mode2 {
        return Err(Error::Domain("coincidences need two distinct modes".into()));
    }
    Ok(state.ladder_lower(mode1)?.ladder_lower(mode2)?.norm_sqr())
}

/// Single-mode annihilation matrix on `n_max + 1` levels, `a[n-1, n] = sqrt(n)`.
pub fn annihilation_matrix(n_max: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n_max + 1, n_max + 1, |r, c| {
        if c == r + 1 {
            (c as f64).sqrt()
        } else {
            0.0
        }
    })
}

/// `a a^dag - a^dag a` on the truncated space: the identity except for
/// `-n_max` in the last diagonal entry.
///
/// `a` is a weighted shift, so both products are diagonal with entries equal
/// to squared matrix elements: `(a a^dag)_nn = n + 1` below the top level and
/// `(a^dag a)_nn = n`. Working with those integers keeps the result exact,
/// where a floating-point product would round `sqrt(n)^2`.
pub fn commutator_defect(n_max: usize) -> Result<DMatrix<f64>> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be >= 1".into()));
    }
    let diag = (0..=n_max).map(|n| {
        let raise_then_lower = if n < n_max { n + 1 } else { 0 };
        raise_then_lower as f64 - n as f64
    });
    Ok(DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n_max + 1,
        diag,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(k: usize) -> ModeId {
        ModeId::new(Helicity::Plus, k).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn lowering_number_states() {
        let vac = FockState::vacuum(&[m(1)], 5).unwrap();
        assert_eq!(vac.ladder_lower(m(1)).unwrap().norm_sqr(), 0.0);
        let one = FockState::number_state(&[m(1)], &[1], 5).unwrap();
        let low = one.ladder_lower(m(1)).unwrap();
        assert_eq!(low.amplitude(&[0]), c(1.0, 0.0));
        let three = FockState::number_state(&[m(1)], &[3], 5).unwrap();
        let low = three.ladder_lower(m(1)).unwrap();
        assert!((low.amplitude(&[2]) - c(3f64.sqrt(), 0.0)).norm() < 1e-15);
        assert!((low.norm_sqr() - 3.0).abs() < 1e-14);
    }

    #[test]
    fn raising_number_states() {
        let vac = FockState::vacuum(&[m(1)], 5).unwrap();
        let (one, lost) = vac.ladder_raise(m(1)).unwrap();
        assert_eq!(one.amplitude(&[1]), c(1.0, 0.0));
        assert_eq!(lost, 0.0);
        let two = FockState::number_state(&[m(1)], &[2], 5).unwrap();
        let (r, _) = two.ladder_raise(m(1)).unwrap();
        assert!((r.amplitude(&[3]) - c(3f64.sqrt(), 0.0)).norm() < 1e-15);
        let top = FockState::number_state(&[m(1)], &[5], 5).unwrap();
        let (r, lost) = top.ladder_raise(m(1)).unwrap();
        assert_eq!(r.norm_sqr(), 0.0);
        assert_eq!(lost, top.norm_sqr());
    }

    #[test]
    fn unknown_mode_is_rejected() {
        let s = FockState::vacuum(&[m(1), m(2)], 3).unwrap();
        assert!(matches!(s.ladder_lower(m(3)), Err(Error::Domain(_))));
        assert!(matches!(s.ladder_raise(m(7)), Err(Error::Domain(_))));
    }

    #[test]
    fn number_state_edge_cases() {
        let s = FockState::number_state(&[m(4), m(2)], &[0, 0], 3).unwrap();
        assert_eq!(s.norm_sqr(), 1.0);
        assert_eq!(s.amplitudes()[0], c(1.0, 0.0));
        assert_eq!(
            FockState::number_state(&[m(2)], &[4], 3),
            Err(Error::Truncation {
                occupation: 4,
                n_max: 3
            })
        );
        let pair = FockState::number_state(&[m(1), m(2)], &[1, 1], 3).unwrap();
        assert_eq!(pair.inner_product(&pair).unwrap(), c(1.0, 0.0));
        assert!(FockState::vacuum(&[m(1), m(1)], 3).is_err());
        assert!(ModeId::new(Helicity::Plus, 0).is_err());
    }

    #[test]
    fn modes_sorted_lexicographically() {
        let a = ModeId::new(Helicity::Plus, 1).unwrap();
        let b = ModeId::new(Helicity::Minus, 9).unwrap();
        let s = FockState::number_state(&[a, b], &[2, 1], 3).unwrap();
        assert_eq!(s.modes(), &[b, a]);
        assert_eq!(s.amplitude(&[1, 2]), c(1.0, 0.0));
    }

    #[test]
    fn repeated_raising_matches_number_state() {
        let n_max = 8;
        let mut s = FockState::vacuum(&[m(3)], n_max).unwrap();
        let mut fact = 1.0;
        for n in 1..=n_max {
            s = s.ladder_raise(m(3)).unwrap().0;
            fact *= n as f64;
            let expected = FockState::number_state(&[m(3)], &[n], n_max).unwrap();
            let got = s.scaled(c(1.0 / fact.sqrt(), 0.0));
            let diff: f64 = got
                .amplitudes()
                .iter()
                .zip(expected.amplitudes())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-14, "n = {n}: {diff}");
        }
    }

    #[test]
    fn coherent_vacuum_and_tail() {
        let (s, d) = FockState::coherent(m(1), c(0.0, 0.0), 10).unwrap();
        assert_eq!(s.amplitude(&[0]), c(1.0, 0.0));
        assert_eq!(d.norm_deficit, 0.0);
        let (_, d) = FockState::coherent(m(1), c(3.0, 0.0), 10).unwrap();
        assert!(!d.reliable);
        assert!(d.norm_deficit > 1e-3);
    }

    #[test]
    fn coherent_overlap_closed_form() {
        let n_max = 20;
        let pairs = [
            (c(0.3, -0.2), c(-0.5, 0.7)),
            (c(1.0, 0.0), c(0.0, 1.0)),
            (c(0.6, 0.6), c(0.6, 0.5)),
        ];
        for (a, b) in pairs {
            let (sa, _) = FockState::coherent(m(1), a, n_max).unwrap();
            let (sb, _) = FockState::coherent(m(1), b, n_max).unwrap();
            let got = sa.inner_product(&sb).unwrap();
            let want = (-(a.norm_sqr() + b.norm_sqr()) / 2.0 + a.conj() * b).exp();
            assert!((got - want).norm() < 1e-8, "{a} {b}: {got} vs {want}");
        }
    }

    #[test]
    fn coherent_is_eigenvector_below_truncation() {
        let alpha = c(0.8, -0.5);
        let n_max = 20;
        let (s, _) = FockState::coherent(m(1), alpha, n_max).unwrap();
        let lowered = s.ladder_lower(m(1)).unwrap();
        let resid: f64 = (0..n_max - 2)
            .map(|n| (lowered.amplitude(&[n]) - alpha * s.amplitude(&[n])).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(resid < 1e-8);
    }

    #[test]
    fn mismatched_states() {
        let a = FockState::vacuum(&[m(1)], 3).unwrap();
        let b = FockState::vacuum(&[m(2)], 3).unwrap();
        let c3 = FockState::vacuum(&[m(1)], 4).unwrap();
        assert!(a.inner_product(&b).is_err());
        assert!(a.inner_product(&c3).is_err());
    }

    #[test]
    fn split_photon_has_no_coincidences() {
        let (a, b) = (m(1), m(2));
        let s = FockState::number_state(&[a, b], &[1, 0], 2)
            .unwrap()
            .add(&FockState::number_state(&[a, b], &[0, 1], 2).unwrap())
            .unwrap()
            .normalized()
            .unwrap();
        assert!(coincidence_probability(&s, a, b).unwrap() < 1e-14);
        let singles = s.mean_occupation(a).unwrap() + s.mean_occupation(b).unwrap();
        assert!((singles - 1.0).abs() < 1e-14);
        assert!(coincidence_probability(&s, a, a).is_err());
        let both = FockState::number_state(&[a, b], &[1, 1], 2).unwrap();
        assert!((coincidence_probability(&both, a, b).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn defect_small_cases() {
        let d1 = commutator_defect(1).unwrap();
        assert_eq!(d1, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        let d3 = commutator_defect(3).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let want = match (r, col) {
                    (3, 3) => -3.0,
                    (r, c) if r == c => 1.0,
                    _ => 0.0,
                };
                assert!((d3[(r, col)] - want).abs() < 1e-15);
            }
        }
        assert!(commutator_defect(0).is_err());
    }

    #[test]
    fn defect_agrees_with_matrix_product() {
        for n_max in 1..=12 {
            let a = annihilation_matrix(n_max);
            let ad = a.transpose();
            let product = &a * &ad - &ad * &a;
            let diff = (product - commutator_defect(n_max).unwrap()).abs().max();
            assert!(diff < 1e-13, "n_max = {n_max}: {diff}");
        }
    }

    fn arb_state(n_max: usize) -> impl Strategy<Value = FockState> {
        let len = (n_max + 1) * (n_max + 1);
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_map(move |v| {
            let mut amps: Vec<Complex64> = v.into_iter().map(|(r, i)| c(r, i)).collect();
            // clear the truncation edge of the first mode
            for (idx, a) in amps.iter_mut().enumerate() {
                if idx / (n_max + 1) == n_max {
                    *a = c(0.0, 0.0);
                }
            }
            FockState::from_amplitudes(vec![m(1), m(2)], n_max, amps).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ladder_adjointness(s1 in arb_state(4), s2 in arb_state(4)) {
            let lhs = s1.inner_product(&s2.ladder_raise(m(1)).unwrap().0).unwrap();
            let rhs = s1.ladder_lower(m(1)).unwrap().inner_product(&s2).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-14 * (1.0 + lhs.norm()));
        }

        #[test]
        fn inner_product_sesquilinear(s1 in arb_state(3), s2 in arb_state(3), re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let z = c(re, im);
            let a = s1.inner_product(&s2.scaled(z)).unwrap();
            let b = s1.scaled(z).inner_product(&s2).unwrap();
            let base = s1.inner_product(&s2).unwrap();
            prop_assert!((a - z * base).norm() < 1e-12 * (1.0 + a.norm()));
            prop_assert!((b - z.conj() * base).norm() < 1e-12 * (1.0 + b.norm()));
            let self_ip = s1.inner_product(&s1).unwrap();
            prop_assert!(self_ip.im == 0.0 && self_ip.re >= 0.0);
        }
    }
}
