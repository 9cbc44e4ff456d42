//! Spherical polar triads and helicity vectors in k-space.
//!
//! For a wavevector `k` with polar angle `theta` (from +z) and azimuth `phi`
//! the triad is
//!
//! ```text
//! e_k     = ( sin t cos p,  sin t sin p,  cos t)
//! e_theta = ( cos t cos p,  cos t sin p, -sin t)
//! e_phi   = (-sin p,        cos p,        0    )
//! ```
//!
//! On the z axis the azimuth is undefined and is fixed to `phi = 0`, which gives
//! `e_theta(+z) = x`, `e_phi(+z) = y` and `e_theta(-z) = -x`, `e_phi(-z) = y`.
//! Helicity vectors are `e_lambda = (e_theta + i lambda e_phi) / sqrt 2`, so
//! `conj(e_lambda) = e_{-lambda}` with no extra phase.

use std::fmt;

use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::{norm, CVec3, Vec3};

/// Photon helicity, `lambda = +1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Helicity {
    Minus,
    Plus,
}

impl Helicity {
    pub const BOTH: [Helicity; 2] = [Helicity::Plus, Helicity::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Helicity::Plus => 1.0,
            Helicity::Minus => -1.0,
        }
    }

    pub fn from_sign(lambda: i32) -> Result<Self> {
        match lambda {
            1 => Ok(Helicity::Plus),
            -1 => Ok(Helicity::Minus),
            other => Err(Error::Domain(format!(
                "helicity must be +1 or -1, got {other}"
            ))),
        }
    }

    /// Channel index used by helicity-resolved storage: `+1 -> 0`, `-1 -> 1`.
    pub fn channel(self) -> usize {
        match self {
            Helicity::Plus => 0,
            Helicity::Minus => 1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }
}

impl fmt::Display for Helicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Helicity::Plus => write!(f, "+1"),
            Helicity::Minus => write!(f, "-1"),
        }
    }
}

/// Orthonormal right-handed triad attached to a non-zero wavevector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalTriad {
    pub e_theta: Vec3,
    pub e_phi: Vec3,
    pub e_k: Vec3,
}

impl SphericalTriad {
    pub fn helicity(&self, lambda: Helicity) -> CVec3 {
        let s = lambda.sign();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        std::array::from_fn(|i| Complex64::new(r * self.e_theta[i], r * s * self.e_phi[i]))
    }
}

/// Spherical unit vectors `(e_theta, e_phi, e_k)` for a non-zero wavevector.
pub fn spherical_unit_vectors(k: Vec3) -> Result<SphericalTriad> {
    let kn = norm(k);
    if !(kn > 0.0) || !kn.is_finite() {
        return Err(Error::DegenerateDirection);
    }
    let rho = k[0].hypot(k[1]);
    let (cos_t, sin_t) = (k[2] / kn, rho / kn);
    // pole: fix phi = 0
    let (cos_p, sin_p) = if rho <= 1e-15 * kn {
        (1.0, 0.0)
    } else {
        (k[0] / rho, k[1] / rho)
    };
    Ok(SphericalTriad {
        e_theta: [cos_t * cos_p, cos_t * sin_p, -sin_t],
        e_phi: [-sin_p, cos_p, 0.0],
        e_k: [sin_t * cos_p, sin_t * sin_p, cos_t],
    })
}

/// Helicity polarization vector `e_lambda(k)`.
pub fn helicity_vector(k: Vec3, lambda: Helicity) -> Result<CVec3> {
    Ok(spherical_unit_vectors(k)?.helicity(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec3::{cdot_conj, cross, dot};
    use proptest::prelude::*;

    fn close(a: Vec3, b: Vec3) -> bool {
        a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() < 1e-14)
    }

    #[test]
    fn z_axis_pole_convention() {
        let t = spherical_unit_vectors([0.0, 0.0, 1.0]).unwrap();
        assert!(close(t.e_theta, [1.0, 0.0, 0.0]));
        assert!(close(t.e_phi, [0.0, 1.0, 0.0]));
        assert!(close(t.e_k, [0.0, 0.0, 1.0]));
        let t = spherical_unit_vectors([0.0, 0.0, -3.0]).unwrap();
        assert!(close(t.e_theta, [-1.0, 0.0, 0.0]));
        assert!(close(t.e_phi, [0.0, 1.0, 0.0]));
        assert!(close(t.e_k, [0.0, 0.0, -1.0]));
    }

    #[test]
    fn x_axis_triad() {
        let t = spherical_unit_vectors([1.0, 0.0, 0.0]).unwrap();
        assert!(close(t.e_k, [1.0, 0.0, 0.0]));
        assert!(close(t.e_theta, [0.0, 0.0, -1.0]));
        assert!(close(t.e_phi, [0.0, 1.0, 0.0]));
    }

    #[test]
    fn zero_vector_is_degenerate() {
        assert_eq!(
            spherical_unit_vectors([0.0; 3]),
            Err(Error::DegenerateDirection)
        );
        assert!(helicity_vector([0.0; 3], Helicity::Plus).is_err());
    }

    #[test]
    fn helicity_on_z() {
        let e = helicity_vector([0.0, 0.0, 1.0], Helicity::Plus).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e[0] - Complex64::new(r, 0.0)).norm() < 1e-15);
        assert!((e[1] - Complex64::new(0.0, r)).norm() < 1e-15);
        assert!(e[2].norm() < 1e-15);
    }

    #[test]
    fn invalid_sign() {
        assert!(Helicity::from_sign(0).is_err());
        assert_eq!(Helicity::from_sign(-1), Ok(Helicity::Minus));
    }

    proptest! {
        #[test]
        fn triad_is_orthonormal_and_right_handed(
            x in -5.0f64..5.0, y in -5.0f64..5.0, z in -5.0f64..5.0
        ) {
            prop_assume!(x * x + y * y + z * z > 1e-6);
            let t = spherical_unit_vectors([x, y, z]).unwrap();
            for v in [t.e_theta, t.e_phi, t.e_k] {
                prop_assert!((dot(v, v) - 1.0).abs() < 1e-12);
            }
            prop_assert!(dot(t.e_theta, t.e_phi).abs() < 1e-12);
            prop_assert!(dot(t.e_theta, t.e_k).abs() < 1e-12);
            prop_assert!(dot(t.e_phi, t.e_k).abs() < 1e-12);
            prop_assert!((dot(t.e_theta, cross(t.e_phi, t.e_k)) - 1.0).abs() < 1e-12);
            let kn = norm([x, y, z]);
            prop_assert!(close(t.e_k, [x / kn, y / kn, z / kn]));
        }

        #[test]
        fn helicity_vectors_orthonormal_and_transverse(
            x in -5.0f64..5.0, y in -5.0f64..5.0, z in -5.0f64..5.0
        ) {
            prop_assume!(x * x + y * y + z * z > 1e-6);
            let k = [x, y, z];
            for a in Helicity::BOTH {
                let ea = helicity_vector(k, a).unwrap();
                let ek: CVec3 = k.map(|v| Complex64::new(v, 0.0));
                prop_assert!(cdot_conj(ek, ea).norm() < 1e-12);
                let conj: CVec3 = ea.map(|v| v.conj());
                let flipped = helicity_vector(k, a.flipped()).unwrap();
                prop_assert!(conj.iter().zip(flipped.iter()).all(|(p, q)| (p - q).norm() < 1e-15));
                for b in Helicity::BOTH {
                    let eb = helicity_vector(k, b).unwrap();
                    let expect = if a == b { 1.0 } else { 0.0 };
                    prop_assert!((cdot_conj(ea, eb) - Complex64::new(expect, 0.0)).norm() < 1e-12);
                }
            }
        }
    }
}
