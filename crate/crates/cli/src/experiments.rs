//! The shipped experiments. Each resolves its defaults, fills a metric table
//! and may write field dumps; tolerances are applied afterwards.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use photonlab::evolve::{evolve_maxwell, MaxwellEvolver, SchrodingerEvolver};
use photonlab::fock::{
    annihilation_matrix, coincidence_probability, commutator_defect, FockState, ModeId,
};
use photonlab::kernels::{
    commutator_kernel_profile, light_cone_leakage, propagator_photon_profile, sample_kernels,
    Support,
};
use photonlab::response::{
    alpha_from_current, field_expectation_checked, photon_count_distribution, required_n_max,
};
use photonlab::sample::{band_mask, random_real_field};
use photonlab::source::CurrentSource;
use photonlab::spectral::{
    apply_omega_power, build_psi, divergence_defect, em_energy, energy_density, scalar_product_x,
};
use photonlab::{
    Complex64, FieldData, FieldKind, FieldSnapshot, GridSpec, Helicity, KGrid, SpectralField,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ConfigError, Experiment, ExperimentConfig, TimeStepping, DEFAULT_HALF_WIDTH};
use crate::dump::{dump_field, DumpError};
use crate::report::{evaluate, Metrics, Num, RunReport, SCHEMA};

/// Why a run produced no report.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Dump(#[from] DumpError),
}

enum Failure {
    Run(RunError),
    /// Non-finite state; recorded in the report.
    Numerical(photonlab::Error),
}

impl From<photonlab::Error> for Failure {
    fn from(e: photonlab::Error) -> Self {
        match e {
            photonlab::Error::Propagation(_) => Failure::Numerical(e),
            other => Failure::Run(RunError::Config(ConfigError::new(
                "config",
                other.to_string(),
            ))),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Run(e.into())
    }
}

impl From<DumpError> for Failure {
    fn from(e: DumpError) -> Self {
        Failure::Run(e.into())
    }
}

type Step = Result<(), Failure>;

struct Ctx<'a> {
    cfg: &'a ExperimentConfig,
    out: &'a Path,
    metrics: Metrics,
    details: BTreeMap<String, Vec<Num>>,
    artifacts: Vec<String>,
    timings: BTreeMap<String, f64>,
}

impl Ctx<'_> {
    fn dump(&mut self, name: String, snap: &FieldSnapshot) -> Step {
        let file = format!("{name}.field");
        dump_field(snap, &self.out.join(&file))?;
        self.artifacts.push(file);
        Ok(())
    }

    fn detail(&mut self, name: &str, values: impl IntoIterator<Item = f64>) {
        self.details
            .insert(name.to_string(), values.into_iter().map(Num).collect());
    }

    fn time<T>(&mut self, label: &str, f: impl FnOnce(&mut Self) -> T) -> T {
        let t0 = Instant::now();
        let out = f(self);
        self.timings
            .insert(format!("{label}_s"), t0.elapsed().as_secs_f64());
        out
    }

    fn grid(&self) -> Result<Arc<KGrid>, Failure> {
        let spec = self.cfg.grid.expect("resolved config has a grid");
        Ok(Arc::new(KGrid::new(spec, self.cfg.constants)?))
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed)
    }
}

/// Largest non-Nyquist wavenumber of a grid: the default band limit.
fn full_band(spec: &GridSpec) -> f64 {
    2.0 * PI / spec.box_length
        * (spec.n / 2).saturating_sub(1).max(1) as f64
        * (spec.dim as f64).sqrt()
}

/// Fill in every default an experiment uses, so the echoed config is complete.
pub fn resolve(cfg: &ExperimentConfig) -> Result<ExperimentConfig, ConfigError> {
    cfg.validate()?;
    let mut r = cfg.clone();
    let p = &mut r.params;
    match cfg.experiment {
        Experiment::FockCheck => {
            p.n_max.get_or_insert(3);
            p.ladder_max_n.get_or_insert(30);
        }
        Experiment::OmegaCheck => {
            p.k_max
                .get_or_insert(full_band(&cfg.grid.expect("validated")));
            p.pairs.get_or_insert(8);
            p.plane_waves.get_or_insert(16);
        }
        Experiment::Evolve => {
            p.k_max
                .get_or_insert(full_band(&cfg.grid.expect("validated")));
            p.amplitude.get_or_insert(1.0);
        }
        Experiment::Kernel => {
            let n = cfg.grid.expect("validated").n;
            p.cone_cells.get_or_insert((n / 8).max(1));
        }
        Experiment::Hegerfeldt => {
            let g = cfg.hegerfeldt_grid()?;
            r.time = Some(cfg.hegerfeldt_time(&g)?);
            r.grid = Some(g);
            r.params.half_width.get_or_insert(DEFAULT_HALF_WIDTH);
        }
        Experiment::Biprism => {
            p.n_max.get_or_insert(20);
            p.alphas
                .get_or_insert([[0.5f64.sqrt(), 0.0], [0.0, 0.5f64.sqrt()]]);
        }
        Experiment::SeMaxwellConsistency | Experiment::Coherent => {}
    }
    Ok(r)
}

/// Run `cfg` (after [`resolve`]) writing artifacts under `out_dir`.
///
/// Numerical blow-up does not abort: it is recorded in the report, which then
/// fails. Configuration and I/O problems are returned as errors.
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunReport, RunError> {
    let cfg = resolve(cfg)?;
    let tolerances = cfg.tolerances()?;
    std::fs::create_dir_all(out_dir).map_err(|source| DumpError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut ctx = Ctx {
        cfg: &cfg,
        out: out_dir,
        metrics: Metrics::default(),
        details: BTreeMap::new(),
        artifacts: Vec::new(),
        timings: BTreeMap::new(),
    };
    log::info!("running {} (seed {})", cfg.experiment, cfg.seed);
    let outcome = ctx.time("total", |ctx| match cfg.experiment {
        Experiment::FockCheck => fock_check(ctx),
        Experiment::OmegaCheck => omega_check(ctx),
        Experiment::Evolve => evolve(ctx),
        Experiment::SeMaxwellConsistency => se_maxwell(ctx),
        Experiment::Kernel => kernel(ctx),
        Experiment::Hegerfeldt => hegerfeldt(ctx),
        Experiment::Coherent => coherent(ctx),
        Experiment::Biprism => biprism(ctx),
    });
    let error = match outcome {
        Ok(()) => None,
        Err(Failure::Numerical(e)) => {
            log::error!("{e}");
            Some(e.to_string())
        }
        Err(Failure::Run(e)) => return Err(e),
    };

    let checks = evaluate(&ctx.metrics, &tolerances);
    let pass = error.is_none() && checks.iter().all(|c| c.pass);
    let mut echo = cfg.clone();
    echo.tolerances = tolerances
        .iter()
        .map(|&(n, _, v)| (n.to_string(), v))
        .collect();
    echo.out_dir = Some(out_dir.to_path_buf());
    Ok(RunReport {
        schema: SCHEMA,
        experiment: cfg.experiment,
        config: serde_json::to_value(&echo).expect("config serializes"),
        pass,
        error,
        metrics: ctx
            .metrics
            .iter()
            .map(|(k, &v)| (k.clone(), Num(v)))
            .collect(),
        checks,
        details: ctx.details,
        artifacts: ctx.artifacts,
        timings: ctx.timings.into_iter().map(|(k, v)| (k, Num(v))).collect(),
    })
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn rel(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

fn real(snap: &FieldSnapshot) -> &[f64] {
    snap.real().expect("real snapshot")
}

fn real_snapshot(kind: FieldKind, spec: GridSpec, data: Vec<f64>) -> FieldSnapshot {
    let comps = data.len() / spec.len();
    FieldSnapshot::new(kind, 0.0, spec, comps, FieldData::Real(data)).expect("consistent shape")
}

fn scaled(snap: FieldSnapshot, s: f64) -> FieldSnapshot {
    let data = real(&snap).iter().map(|x| s * x).collect();
    FieldSnapshot::new(
        snap.kind,
        snap.time,
        snap.grid,
        snap.components,
        FieldData::Real(data),
    )
    .expect("same shape")
}

// ---------------------------------------------------------------- fock-check

fn fock_check(ctx: &mut Ctx) -> Step {
    let n_max = ctx.cfg.params.n_max.expect("resolved");
    let top = ctx.cfg.params.ladder_max_n.expect("resolved");
    let mode = ModeId::new(Helicity::Plus, 1)?;
    let cap = top + 1;
    let mut ladder = 0.0f64;
    for n in 0..=top {
        let state = FockState::number_state(&[mode], &[n], cap)?;
        let (up, lost) = state.ladder_raise(mode)?;
        let down = state.ladder_lower(mode)?;
        for m in 0..=cap {
            let want_up = if m == n + 1 {
                ((n + 1) as f64).sqrt()
            } else {
                0.0
            };
            let want_down = if n > 0 && m == n - 1 {
                (n as f64).sqrt()
            } else {
                0.0
            };
            ladder = ladder.max((up.amplitude(&[m]) - want_up).norm());
            ladder = ladder.max((down.amplitude(&[m]) - want_down).norm());
        }
        ladder = ladder.max(lost);
    }

    let defect = commutator_defect(n_max)?;
    let mut defect_err = 0.0f64;
    for i in 0..=n_max {
        for j in 0..=n_max {
            let want = match (i == j, i == n_max) {
                (false, _) => 0.0,
                (true, false) => 1.0,
                (true, true) => -(n_max as f64),
            };
            defect_err = defect_err.max((defect[(i, j)] - want).abs());
        }
    }
    let a = annihilation_matrix(n_max);
    let product = &a * a.transpose() - a.transpose() * &a;
    let gap = max_abs((product - &defect).iter().copied());

    ctx.metrics.set("ladder_error", ladder);
    ctx.metrics.set("commutator_defect_error", defect_err);
    ctx.metrics.set("commutator_product_gap", gap);
    ctx.detail(
        "commutator_defect_diagonal",
        defect.diagonal().iter().copied(),
    );
    Ok(())
}

// ---------------------------------------------------------------- omega-check

fn omega_check(ctx: &mut Ctx) -> Step {
    let g = ctx.grid()?;
    let spec = g.spec();
    let c = g.constants().c;
    let p = &ctx.cfg.params;
    let (k_max, pairs, waves) = (p.k_max.unwrap(), p.pairs.unwrap(), p.plane_waves.unwrap());
    let mut rng = ctx.rng();

    // closed form: a sum of transverse plane waves, Omega^s multiplies each by (c|k|)^s
    let band: Vec<usize> = band_mask(&g, k_max)
        .iter()
        .enumerate()
        .filter_map(|(i, &on)| on.then_some(i))
        .collect();
    if band.is_empty() {
        return Err(
            ConfigError::new("params.k_max", "no lattice modes below the band limit").into(),
        );
    }
    let comps = spec.components();
    let mut f = vec![0.0; comps * spec.len()];
    let mut omega1 = f.clone();
    let mut omega2 = f.clone();
    for _ in 0..waves {
        let idx = band[rng.random_range(0..band.len())];
        let k = g.k(idx);
        let amp: f64 = rng.random_range(-1.0..1.0);
        let phase: f64 = rng.random_range(0.0..2.0 * PI);
        let pol = if comps == 1 {
            [1.0, 0.0, 0.0]
        } else {
            let r: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let k2: f64 = k.iter().map(|x| x * x).sum();
            let along = (0..3).map(|a| r[a] * k[a]).sum::<f64>() / k2;
            let e: [f64; 3] = std::array::from_fn(|a| r[a] - along * k[a]);
            let n = e.iter().map(|x| x * x).sum::<f64>().sqrt();
            e.map(|x| x / n)
        };
        let w = g.omega(idx);
        debug_assert!((w - c * k.iter().map(|x| x * x).sum::<f64>().sqrt()).abs() <= 1e-12 * w);
        for i in 0..spec.len() {
            let x = spec.position(i);
            let wave = amp * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2] + phase).cos();
            for a in 0..comps {
                f[a * spec.len() + i] += wave * pol[a];
                omega1[a * spec.len() + i] += w * wave * pol[a];
                omega2[a * spec.len() + i] += w * w * wave * pol[a];
            }
        }
    }
    let field = real_snapshot(FieldKind::APerp, spec, f);
    let closed_form_err = |s: f64, want: &[f64]| -> Result<f64, Failure> {
        let got = apply_omega_power(&g, &field, s)?;
        let diff = max_abs(real(&got).iter().zip(want).map(|(x, y)| x - y));
        Ok(rel(diff, max_abs(want.iter().copied())))
    };
    ctx.metrics.set(
        "omega2_closed_form_rel_error",
        closed_form_err(2.0, &omega2)?,
    );
    ctx.metrics.set(
        "omega1_closed_form_rel_error",
        closed_form_err(1.0, &omega1)?,
    );

    let dot = |x: &[f64], y: &[f64]| -> f64 { x.iter().zip(y).map(|(a, b)| a * b).sum() };
    let (mut adj, mut inv) = (0.0f64, 0.0f64);
    for _ in 0..pairs {
        let mut white = || -> Vec<f64> {
            (0..comps * spec.len())
                .map(|_| rng.random_range(-1.0..1.0))
                .collect()
        };
        let (fw, mut hw) = (white(), white());
        let (fs, hs) = (
            real_snapshot(FieldKind::APerp, spec, fw.clone()),
            real_snapshot(FieldKind::APerp, spec, hw.clone()),
        );
        let of = apply_omega_power(&g, &fs, 1.0)?;
        let oh = apply_omega_power(&g, &hs, 1.0)?;
        let scale = dot(&fw, &fw).sqrt() * dot(real(&oh), real(&oh)).sqrt();
        adj = adj.max((dot(&fw, real(&oh)) - dot(real(&of), &hw)).abs() / scale);

        for comp in hw.chunks_mut(spec.len()) {
            let mean = comp.iter().sum::<f64>() / comp.len() as f64;
            comp.iter_mut().for_each(|x| *x -= mean);
        }
        let centered = real_snapshot(FieldKind::APerp, spec, hw);
        let back = apply_omega_power(&g, &apply_omega_power(&g, &centered, -1.0)?, 1.0)?;
        let diff = max_abs(real(&back).iter().zip(real(&centered)).map(|(x, y)| x - y));
        inv = inv.max(rel(diff, max_abs(real(&centered).iter().copied())));
    }
    ctx.metrics.set("self_adjointness_defect", adj);
    ctx.metrics.set("inverse_identity_error", inv);
    Ok(())
}

// ---------------------------------------------------------------- evolve

fn evolve(ctx: &mut Ctx) -> Step {
    let g = ctx.grid()?;
    let time = ctx.cfg.require_time()?;
    let (k_max, amp) = (
        ctx.cfg.params.k_max.unwrap(),
        ctx.cfg.params.amplitude.unwrap(),
    );
    let mut rng = ctx.rng();
    let a0 = scaled(
        random_real_field(&g, FieldKind::APerp, k_max, true, &mut rng),
        amp,
    );
    let d0 = scaled(
        random_real_field(&g, FieldKind::D, k_max, true, &mut rng),
        amp,
    );
    let source = ctx.cfg.source.clone();
    let traj = ctx.time("evolve", |_| {
        evolve_maxwell(&g, &a0, &d0, &source, time.dt, time.steps, time.stride())
    })?;

    let (mut energies, mut norms) = (Vec::new(), Vec::new());
    let (mut transverse, mut peak) = (0.0f64, 0.0f64);
    for (i, (a, d)) in traj.samples.iter().enumerate() {
        energies.push(em_energy(&g, a, d)?);
        let psi = build_psi(&g, a, d)?;
        norms.push(scalar_product_x(&psi, &psi)?.re);
        for f in [a, d] {
            transverse = transverse.max(divergence_defect(&SpectralField::from_snapshot(&g, f)?));
            peak = peak.max(max_abs(real(f).iter().copied()));
        }
        ctx.dump(format!("a_{i:04}"), a)?;
        ctx.dump(format!("d_{i:04}"), d)?;
        ctx.dump(format!("psi_{i:04}"), &psi)?;
    }
    let drift = |v: &[f64]| {
        let base = if v[0] > 0.0 {
            v[0]
        } else {
            max_abs(v.iter().copied())
        };
        rel(max_abs(v.iter().map(|x| x - v[0])), base)
    };
    let m = &mut ctx.metrics;
    m.set("energy_initial", energies[0]);
    m.set("energy_final", *energies.last().unwrap());
    m.set("energy_drift_rel", drift(&energies));
    m.set("psi_norm_initial", norms[0]);
    m.set("psi_norm_final", *norms.last().unwrap());
    m.set("psi_norm_drift_rel", drift(&norms));
    m.set("imag_residue_rel", rel(traj.max_imag_residue, peak));
    m.set("transverse_defect", transverse);
    m.set("samples", traj.samples.len() as f64);
    Ok(())
}

// ---------------------------------------------------------------- se-maxwell-consistency

/// Relative L2 distance between psi from the SE stepper and psi built from
/// the Maxwell stepper, both started from rest.
fn consistency(
    g: &Arc<KGrid>,
    source: &CurrentSource,
    dt: f64,
    steps: usize,
) -> Result<(f64, FieldSnapshot, FieldSnapshot), Failure> {
    let spec = g.spec();
    let zero_a = FieldSnapshot::zeros(FieldKind::APerp, 0.0, spec);
    let zero_d = FieldSnapshot::zeros(FieldKind::D, 0.0, spec);
    let zero_psi = FieldSnapshot::zeros(FieldKind::Psi, 0.0, spec);
    let mut mx = MaxwellEvolver::new(g, &zero_a, &zero_d, source, dt)?;
    let mut se = SchrodingerEvolver::new(g, &zero_psi, source, dt)?;
    for _ in 0..steps {
        mx.step()?;
        se.step()?;
    }
    let (a, d, _) = mx.snapshots();
    let from_maxwell = build_psi(g, &a, &d)?;
    let from_se = se.snapshot();
    let (m, s) = (from_maxwell.complex().unwrap(), from_se.complex().unwrap());
    let diff: f64 = m.iter().zip(s).map(|(x, y)| (x - y).norm_sqr()).sum();
    let norm: f64 = m.iter().map(|x| x.norm_sqr()).sum();
    Ok((rel(diff.sqrt(), norm.sqrt()), from_maxwell, from_se))
}

fn se_maxwell(ctx: &mut Ctx) -> Step {
    let g = ctx.grid()?;
    let TimeStepping { dt, steps, .. } = ctx.cfg.require_time()?;
    let source = ctx.cfg.source.clone();
    let (e1, psi_mx, psi_se) = ctx.time("coarse", |_| consistency(&g, &source, dt, steps))?;
    let (e2, _, _) = ctx.time("fine", |_| consistency(&g, &source, dt / 2.0, 2 * steps))?;
    let ratio = e1 / e2;
    ctx.metrics.set("rel_error", e1);
    ctx.metrics.set("rel_error_half_step", e2);
    ctx.metrics.set("convergence_ratio", ratio);
    ctx.metrics
        .set("convergence_ratio_deviation", (ratio - 4.0).abs());
    ctx.dump("psi_maxwell".into(), &psi_mx)?;
    ctx.dump("psi_se".into(), &psi_se)?;
    Ok(())
}

// ---------------------------------------------------------------- kernel

/// Minimum-image distance of a lattice site from the origin.
fn site_distance(spec: &GridSpec, idx: usize) -> f64 {
    let l = spec.box_length;
    let x = spec.position(idx);
    (0..spec.dim)
        .map(|a| {
            let d = x[a].rem_euclid(l);
            d.min(l - d).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

fn kernel(ctx: &mut Ctx) -> Step {
    let g = ctx.grid()?;
    let spec = g.spec();
    let c = g.constants().c;
    let cells = ctx.cfg.params.cone_cells.unwrap();
    let dx = spec.spacing();
    let t = cells as f64 * dx / c;

    let equal = commutator_kernel_profile(&g, 0.0);
    let on_site = equal[0];
    let want = 1.0 / spec.cell_volume();
    ctx.metrics.set(
        "equal_time_offsite_rel",
        max_abs(equal[1..].iter().copied()) / on_site.abs(),
    );
    ctx.metrics
        .set("equal_time_onsite_rel_error", (on_site - want).abs() / want);

    let (ad, photon) = ctx.time("profiles", |_| {
        (
            commutator_kernel_profile(&g, t),
            propagator_photon_profile(&g, t),
        )
    });
    let outside: Vec<usize> = (0..spec.len())
        .filter(|&i| site_distance(&spec, i) > c * t + dx)
        .collect();
    let ad_peak = max_abs(ad.iter().copied());
    let photon_peak = max_abs(photon.iter().map(|z| z.norm()));
    ctx.metrics.set(
        "commutator_offcone_rel",
        rel(max_abs(outside.iter().map(|&i| ad[i])), ad_peak),
    );
    ctx.metrics.set(
        "photon_offcone_rel",
        rel(
            max_abs(outside.iter().map(|&i| photon[i].norm())),
            photon_peak,
        ),
    );
    ctx.metrics.set("offcone_sites", outside.len() as f64);

    let backward = propagator_photon_profile(&g, -t);
    let herm =
        max_abs((0..spec.len()).map(|i| (backward[spec.neg_index(i)] - photon[i].conj()).norm()));
    ctx.metrics
        .set("photon_hermiticity_error", rel(herm, photon_peak));

    // whole-lattice profiles against the direct lattice sums at a spread of sites
    let probe: Vec<usize> = (0..spec.len()).step_by((spec.len() / 16).max(1)).collect();
    let points: Vec<(f64, [f64; 3])> = probe.iter().map(|&i| (t, spec.position(i))).collect();
    let direct = ctx.time("direct_sums", |_| sample_kernels(&g, &points));
    let gap = probe
        .iter()
        .zip(&direct)
        .map(|(&i, s)| {
            ((s.commutator - ad[i]).abs() / ad_peak)
                .max((s.photon - photon[i]).norm() / photon_peak)
        })
        .fold(0.0, f64::max);
    ctx.metrics.set("profile_direct_sum_gap", gap);

    // first-axis cuts for plotting
    let axis: Vec<usize> = (0..spec.n).map(|j| spec.index([j, 0, 0])).collect();
    ctx.detail("commutator_axis", axis.iter().map(|&i| ad[i]));
    ctx.detail("photon_axis_abs", axis.iter().map(|&i| photon[i].norm()));
    Ok(())
}

// ---------------------------------------------------------------- hegerfeldt

fn hegerfeldt(ctx: &mut Ctx) -> Step {
    let g = ctx.grid()?;
    let spec = g.spec();
    let c = g.constants().c;
    let time = ctx.cfg.time.expect("resolved");
    let half = ctx.cfg.params.half_width.unwrap();
    let x0 = 0.5 * spec.box_length;
    // smooth compactly supported bump in A, at rest
    let bump: Vec<f64> = (0..spec.len())
        .map(|i| {
            let r = (spec.position(i)[0] - x0) / half;
            if r.abs() < 1.0 {
                (-1.0 / (1.0 - r * r)).exp()
            } else {
                0.0
            }
        })
        .collect();
    let a = real_snapshot(FieldKind::APerp, spec, bump);
    let d = FieldSnapshot::zeros(FieldKind::D, 0.0, spec);
    let support = Support::Interval {
        lo: x0 - half,
        hi: x0 + half,
    };

    let mut ev = MaxwellEvolver::new(&g, &a, &d, &CurrentSource::None, time.dt)?;
    let psi0 = build_psi(&g, &a, &d)?;
    ctx.dump("a_0000".into(), &a)?;
    ctx.dump("psi_0000".into(), &psi0)?;
    let (mut real_max, mut psi_max, mut psi_last, mut beyond) = (0.0f64, 0.0f64, 0.0, 0usize);
    let (mut real_curve, mut psi_curve) = (Vec::new(), Vec::new());
    for step in 1..=time.steps {
        ev.step()?;
        let (a_t, d_t, _) = ev.snapshots();
        let t = ev.time();
        let real = light_cone_leakage(&energy_density(&g, &a_t, &d_t)?, t, &support, c)?;
        let psi = build_psi(&g, &a_t, &d_t)?;
        let pos = light_cone_leakage(&psi, t, &support, c)?;
        beyond += real.beyond_horizon as usize;
        real_max = real_max.max(real.fraction);
        psi_max = psi_max.max(pos.fraction);
        psi_last = pos.fraction;
        if step % time.stride() == 0 || step == time.steps {
            real_curve.push(real.fraction);
            psi_curve.push(pos.fraction);
            ctx.dump(format!("a_{step:04}"), &a_t)?;
            ctx.dump(format!("psi_{step:04}"), &psi)?;
        }
    }
    ctx.metrics.set("leakage_real", real_max);
    ctx.metrics.set("leakage_posfreq", psi_max);
    ctx.metrics.set("leakage_posfreq_final", psi_last);
    ctx.metrics.set(
        "leakage_posfreq_initial",
        light_cone_leakage(&psi0, 0.0, &support, c)?.fraction,
    );
    ctx.metrics.set("beyond_horizon", beyond as f64);
    ctx.metrics.set(
        "validity_horizon",
        light_cone_leakage(&a, 0.0, &support, c)?.horizon,
    );
    ctx.detail("leakage_real_samples", real_curve);
    ctx.detail("leakage_posfreq_samples", psi_curve);
    Ok(())
}

// ---------------------------------------------------------------- coherent

fn coherent(ctx: &mut Ctx) -> Step {
    let g = ctx.grid()?;
    let spec = g.spec();
    let TimeStepping { dt, steps, .. } = ctx.cfg.require_time()?;
    let t_final = dt * steps as f64;
    let source = ctx.cfg.source.clone();
    let alphas = ctx.time("amplitudes", |_| {
        alpha_from_current(&source, &g, t_final, dt)
    })?;
    let (a_coh, residue) = field_expectation_checked(&alphas, t_final);
    let a_max = max_abs(real(&a_coh).iter().copied());

    let zero_a = FieldSnapshot::zeros(FieldKind::APerp, 0.0, spec);
    let zero_d = FieldSnapshot::zeros(FieldKind::D, 0.0, spec);
    let a_mx = ctx.time("maxwell", |_| -> Result<FieldSnapshot, Failure> {
        let mut mx = MaxwellEvolver::new(&g, &zero_a, &zero_d, &source, dt)?;
        for _ in 0..steps {
            mx.step()?;
        }
        Ok(mx.snapshots().0)
    })?;
    let mismatch = max_abs(real(&a_mx).iter().zip(real(&a_coh)).map(|(x, y)| x - y));

    // counting statistics of the most strongly driven mode
    let lambdas: &[Helicity] = if spec.dim == 3 {
        &Helicity::BOTH
    } else {
        &[Helicity::Plus]
    };
    let (lambda, idx) = lambdas
        .iter()
        .flat_map(|&l| (1..g.len()).map(move |i| (l, i)))
        .max_by(|a, b| {
            alphas
                .get(a.0, a.1)
                .norm()
                .total_cmp(&alphas.get(b.0, b.1).norm())
        })
        .expect("grid has radiating modes");
    let alpha = alphas.get(lambda, idx);
    let counts = photon_count_distribution(&alphas, lambda, idx, required_n_max(alpha))?;
    let total: f64 = counts.iter().sum();
    let mean: f64 = counts.iter().enumerate().map(|(n, p)| n as f64 * p).sum();

    let m = &mut ctx.metrics;
    m.set("mean_photon_number", alphas.mean_photon_number());
    m.set("reality_residue_rel", rel(residue, a_max));
    m.set(
        "maxwell_mismatch_rel",
        rel(mismatch, max_abs(real(&a_mx).iter().copied())),
    );
    m.set("strongest_mode_alpha_abs", alpha.norm());
    m.set("count_normalization_error", (total - 1.0).abs());
    m.set(
        "count_mean_error",
        rel((mean - alpha.norm_sqr()).abs(), alpha.norm_sqr()),
    );
    ctx.detail("strongest_mode", [lambda.sign(), idx as f64]);
    ctx.detail("strongest_mode_counts", counts);
    ctx.dump("a_coherent".into(), &a_coh)?;
    ctx.dump("a_maxwell".into(), &a_mx)?;
    Ok(())
}

// ---------------------------------------------------------------- biprism

fn biprism(ctx: &mut Ctx) -> Step {
    let n_max = ctx.cfg.params.n_max.unwrap();
    let [[ar, ai], [br, bi]] = ctx.cfg.params.alphas.unwrap();
    let a = ModeId::new(Helicity::Plus, 1)?;
    let b = ModeId::new(Helicity::Plus, 2)?;

    // one photon split over both arms
    let single = FockState::number_state(&[a, b], &[1, 0], n_max)?
        .add(&FockState::number_state(&[a, b], &[0, 1], n_max)?)?
        .normalized()?;
    let coincidence = coincidence_probability(&single, a, b)?;
    let singles = single.mean_occupation(a)? + single.mean_occupation(b)?;

    // classical light: product of coherent states
    let (alpha, beta) = (Complex64::new(ar, ai), Complex64::new(br, bi));
    let (sa, da) = FockState::coherent(a, alpha, n_max)?;
    let (sb, db) = FockState::coherent(b, beta, n_max)?;
    let product = sa.tensor(&sb)?;
    let p_coh = coincidence_probability(&product, a, b)?;
    let want = alpha.norm_sqr() * beta.norm_sqr();

    let m = &mut ctx.metrics;
    m.set("coincidence_probability", coincidence);
    m.set("singles_sum", singles);
    m.set("singles_sum_error", (singles - 1.0).abs());
    m.set("coherent_coincidence", p_coh);
    m.set("coherent_coincidence_expected", want);
    m.set("coherent_coincidence_error", (p_coh - want).abs());
    m.set(
        "coherent_norm_deficit",
        da.norm_deficit.max(db.norm_deficit),
    );
    Ok(())
}
