//! Cross-module behaviour: sourced evolution, localization and leakage.

use std::sync::Arc;

use photonlab::evolve::{evolve_maxwell, evolve_se};
use photonlab::field::SpectralField;
use photonlab::kernels::{light_cone_leakage, validity_horizon, Support};
use photonlab::source::{CurrentSource, SeparableTerm, SpatialProfile, Temporal};
use photonlab::spectral::{build_psi, divergence_defect, em_energy};
use photonlab::{build_kgrid, FieldData, FieldKind, FieldSnapshot, PhysicalConstants};

fn bump(n: usize, center: f64, half: f64, l: f64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let r = (i as f64 * l / n as f64 - center) / half;
            if r.abs() < 1.0 {
                (-1.0 / (1.0 - r * r)).exp()
            } else {
                0.0
            }
        })
        .collect()
}

#[test]
fn localized_psi_spreads_outside_the_light_cone() {
    let n = 4096;
    let g = Arc::new(build_kgrid(1, n, 1.0, PhysicalConstants::default()).unwrap());
    let spec = g.spec();
    let a = FieldSnapshot::new(
        FieldKind::APerp,
        0.0,
        spec,
        1,
        FieldData::Real(bump(n, 0.5, 0.05, 1.0)),
    )
    .unwrap();
    let d = FieldSnapshot::zeros(FieldKind::D, 0.0, spec);
    let psi0 = build_psi(&g, &a, &d).unwrap();
    let support = Support::Interval { lo: 0.45, hi: 0.55 };
    let dt = spec.spacing();
    let traj = evolve_se(&g, &psi0, &CurrentSource::None, dt, 1, 1).unwrap();
    let leak = light_cone_leakage(&traj[1], dt, &support, 1.0).unwrap();
    assert!(leak.fraction > 1e-3, "{}", leak.fraction);
    assert!(!leak.beyond_horizon);
    assert!((leak.horizon - validity_horizon(&spec, &support, 1.0)).abs() < 1e-15);
}

#[test]
fn material_source_keeps_fields_transverse_and_real() {
    let g =
        Arc::new(build_kgrid(3, 12, 2.0, PhysicalConstants::new(1.0, 2.0, 0.5).unwrap()).unwrap());
    let spec = g.spec();
    let term = |pol: [f64; 3], temporal: Temporal| SeparableTerm {
        spatial: SpatialProfile::Gaussian {
            center: [1.0, 1.0, 1.0],
            width: 0.3,
            polarization: pol,
        },
        temporal,
    };
    let source = CurrentSource::Material {
        polarization: vec![term(
            [1.0, 0.5, 0.0],
            Temporal::GaussianCosine {
                amplitude: 1.0,
                center: 0.5,
                width: 0.15,
                omega: 9.0,
                phase: 0.0,
            },
        )],
        magnetization: vec![term(
            [0.0, 0.0, 1.0],
            Temporal::Gaussian {
                amplitude: 0.3,
                center: 0.4,
                width: 0.1,
            },
        )],
    };
    let a = FieldSnapshot::zeros(FieldKind::APerp, 0.0, spec);
    let d = FieldSnapshot::zeros(FieldKind::D, 0.0, spec);
    let traj = evolve_maxwell(&g, &a, &d, &source, 0.01, 150, 50).unwrap();
    assert_eq!(traj.samples.len(), 4);
    assert!(traj.max_imag_residue < 1e-12);
    let mut energies = Vec::new();
    for (a_t, d_t) in &traj.samples {
        for f in [a_t, d_t] {
            assert!(divergence_defect(&SpectralField::from_snapshot(&g, f).unwrap()) < 1e-10);
        }
        energies.push(em_energy(&g, a_t, d_t).unwrap());
    }
    assert_eq!(energies[0], 0.0);
    // the pulse is over by t = 1.5; the radiated energy stays put afterwards
    assert!(energies[3] > 0.0);
    let late = evolve_maxwell(
        &g,
        &traj.samples[3].0,
        &traj.samples[3].1,
        &CurrentSource::None,
        0.01,
        100,
        100,
    )
    .unwrap();
    let (a_l, d_l) = late.samples.last().unwrap();
    let e_late = em_energy(&g, a_l, d_l).unwrap();
    assert!((e_late - energies[3]).abs() < 1e-12 * energies[3]);
}

#[test]
fn longitudinal_direct_current_is_refused() {
    let g = Arc::new(build_kgrid(3, 8, 1.0, PhysicalConstants::default()).unwrap());
    let source = CurrentSource::Direct {
        terms: vec![SeparableTerm {
            spatial: SpatialProfile::Gaussian {
                center: [0.5; 3],
                width: 0.1,
                polarization: [1.0, 0.0, 0.0],
            },
            temporal: Temporal::Constant { value: 1.0 },
        }],
    };
    let a = FieldSnapshot::zeros(FieldKind::APerp, 0.0, g.spec());
    let d = FieldSnapshot::zeros(FieldKind::D, 0.0, g.spec());
    let err = evolve_maxwell(&g, &a, &d, &source, 0.1, 1, 1).unwrap_err();
    assert!(err.to_string().contains("transverse"), "{err}");
}
