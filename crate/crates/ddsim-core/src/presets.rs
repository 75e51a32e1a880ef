//! Shipped benchmark scenarios.
//!
//! - fig1: N = 6 dipolar chain, nested pulse sequence; naive random
//!   decoupling against periodic DD at a grid of pulse intervals.  The
//!   `-smoke` variants run the same comparison at N = 4 in minutes.  The
//!   `-intra` variants sample every interval inside a single cycle.
//! - fig2: N = 8 dipolar chain controlled through the 8-element combinatorial
//!   group; deterministic (PDD/SDD/CDD) against randomized (NRD/EMD/SRPD)
//!   protocols at dt = 0.05/J over long times.
//! - fig3: N = 8 nearest-neighbor chain with a randomly-rated time-dependent
//!   exchange anisotropy, |G| = 4 collective sequence; the `-inset` variant
//!   halves dt.

use crate::error::{DdError, Result};
use crate::experiment::{CompareConfig, RunConfig};
use crate::groups::{g8_group, gray_code_path, nested_pauli_group, nn_collective_group, ControlPath};
use crate::hamiltonian::{AnisotropySpec, CouplingKind, HamiltonianSpec};
use crate::propagator::{default_substeps, EvolutionConfig};
use crate::protocols::{ProtocolKind, ProtocolSpec};

/// Master seed used by all shipped presets.
pub const DEFAULT_MASTER_SEED: u64 = 0x5eed_0dd0;

/// Realization count behind every shipped Monte Carlo average.
pub const DEFAULT_REALIZATIONS: usize = 100;

/// Substeps-per-period floor for the time-dependent runs; pinned by the
/// substep-doubling convergence check in the acceptance suite.
pub const SUBSTEP_POINTS_PER_PERIOD: usize = 20;

fn dipolar_spec(n: usize) -> HamiltonianSpec {
    HamiltonianSpec {
        n_qubits: n,
        omega: 0.0,
        detunings: vec![],
        coupling: CouplingKind::DipolarPowerLaw { exponent: 3.0 },
        anisotropy: None,
    }
}

fn fig3_spec() -> HamiltonianSpec {
    HamiltonianSpec {
        n_qubits: 8,
        omega: 0.0,
        detunings: vec![],
        coupling: CouplingKind::NearestNeighbor,
        anisotropy: Some(
            AnisotropySpec::new(5, 10.0 * std::f64::consts::PI, 0.9, 1.1)
                .expect("static parameters"),
        ),
    }
}

fn run(
    label: &str,
    system: HamiltonianSpec,
    protocol: ProtocolSpec,
    evolution: EvolutionConfig,
    total_time: f64,
    n_realizations: usize,
) -> RunConfig {
    let mut cfg = RunConfig::new(system, protocol, evolution);
    cfg.label = label.to_string();
    cfg.total_time = total_time;
    cfg.n_realizations = n_realizations;
    cfg.master_seed = DEFAULT_MASTER_SEED;
    cfg
}

/// N = 6 dipolar chain, nested group (|G| = 1024), cycle-boundary sampling.
/// NRD at dt = 1e-3 against PDD at dt in {1, 2, 4} * 1e-3; all runs share
/// the sampling grid T_n = 1.024 n.
pub fn fig1() -> CompareConfig {
    fig1_family(6, 8.192)
}

/// Mandatory N = 4 variant of fig1 (|G| = 64, T_c = 0.064) that runs in
/// minutes.
pub fn fig1_smoke() -> CompareConfig {
    fig1_family(4, 4.096)
}

fn fig1_family(n: usize, total_time: f64) -> CompareConfig {
    let system = dipolar_spec(n);
    let group = nested_pauli_group(n).expect("2..=8 qubits");
    let path = gray_code_path(&group).expect("nested layout");
    let cycle = group.len();
    let base_dt = 1e-3;
    let mut runs = Vec::new();
    runs.push(run(
        "free",
        system.clone(),
        ProtocolSpec::new(ProtocolKind::Free, group.clone()),
        EvolutionConfig::new(base_dt, cycle),
        total_time,
        1,
    ));
    runs.push(run(
        "nrd",
        system.clone(),
        ProtocolSpec::new(ProtocolKind::Nrd, group.clone()),
        EvolutionConfig::new(base_dt, cycle),
        total_time,
        DEFAULT_REALIZATIONS,
    ));
    for factor in [1usize, 2, 4] {
        let dt = base_dt * factor as f64;
        let stride = cycle / factor;
        runs.push(run(
            &format!("pdd_dt{}", dt),
            system.clone(),
            ProtocolSpec::new(ProtocolKind::Pdd, group.clone()).with_path(path.clone()),
            EvolutionConfig::new(dt, stride),
            total_time,
            1,
        ));
    }
    CompareConfig { runs }
}

/// Intra-cycle companion of fig1: fidelity at every interval t_n = n dt
/// inside one cycle, NRD and RPD against the chosen PDD path.
pub fn fig1_intra() -> CompareConfig {
    fig1_intra_family(6)
}

pub fn fig1_smoke_intra() -> CompareConfig {
    fig1_intra_family(4)
}

fn fig1_intra_family(n: usize) -> CompareConfig {
    let system = dipolar_spec(n);
    let group = nested_pauli_group(n).expect("2..=8 qubits");
    let path = gray_code_path(&group).expect("nested layout");
    let dt = 1e-3;
    let total_time = group.len() as f64 * dt; // exactly one cycle
    let runs = vec![
        run(
            "pdd",
            system.clone(),
            ProtocolSpec::new(ProtocolKind::Pdd, group.clone()).with_path(path),
            EvolutionConfig::new(dt, 1),
            total_time,
            1,
        ),
        run(
            "nrd",
            system.clone(),
            ProtocolSpec::new(ProtocolKind::Nrd, group.clone()),
            EvolutionConfig::new(dt, 1),
            total_time,
            DEFAULT_REALIZATIONS,
        ),
        run(
            "rpd",
            system,
            ProtocolSpec::new(ProtocolKind::Rpd, group),
            EvolutionConfig::new(dt, 1),
            total_time,
            DEFAULT_REALIZATIONS,
        ),
    ];
    CompareConfig { runs }
}

/// Total time of the fig2 preset; concatenation level 5 completes at
/// 102.4/J, well inside the window.
pub const FIG2_TOTAL_TIME: f64 = 120.0;
pub const FIG2_DT: f64 = 0.05;

/// The Fig. 2 caption timing implies a per-level growth factor of 4.
pub const FIG2_CDD_ARITY: usize = 4;

/// N = 8 dipolar chain over the 8-element combinatorial group: free, PDD,
/// SDD, CDD, NRD, EMD, SRPD in one grid.
pub fn fig2() -> CompareConfig {
    let system = dipolar_spec(8);
    let group = g8_group();
    let stride = group.len();
    let evo = EvolutionConfig::new(FIG2_DT, stride);
    let nr = DEFAULT_REALIZATIONS;
    let t = FIG2_TOTAL_TIME;
    let outer = nested_pauli_group(8).expect("nested Pauli group on 8 qubits");
    let runs = vec![
        run("free", system.clone(), ProtocolSpec::new(ProtocolKind::Free, group.clone()), evo.clone(), t, 1),
        run("pdd", system.clone(), ProtocolSpec::new(ProtocolKind::Pdd, group.clone()), evo.clone(), t, 1),
        run("sdd", system.clone(), ProtocolSpec::new(ProtocolKind::Sdd, group.clone()), evo.clone(), t, 1),
        run(
            "cdd5",
            system.clone(),
            ProtocolSpec::new(ProtocolKind::Cdd { level: 5 }, group.clone()).with_arity(FIG2_CDD_ARITY),
            evo.clone(),
            t,
            1,
        ),
        run("nrd", system.clone(), ProtocolSpec::new(ProtocolKind::Nrd, group.clone()), evo.clone(), t, nr),
        run(
            "emd",
            system.clone(),
            ProtocolSpec::new(ProtocolKind::Emd, group.clone()).with_outer_group(outer),
            evo.clone(),
            t,
            nr,
        ),
        run("srpd", system, ProtocolSpec::new(ProtocolKind::Srpd, group), evo, t, nr),
    ];
    CompareConfig { runs }
}

/// A fig2 EMD run over a specific identity-first inner path, labeled by index.
/// Path 0 is the listing order; further paths are seeded shuffles.
pub fn fig2_emd_with_path(path_index: usize, n_realizations: usize, total_time: f64) -> RunConfig {
    let system = dipolar_spec(8);
    let group = g8_group();
    let path = seeded_path(&group, path_index);
    let outer = nested_pauli_group(8).expect("nested Pauli group on 8 qubits");
    let stride = group.len();
    run(
        &format!("emd_path{path_index}"),
        system,
        ProtocolSpec::new(ProtocolKind::Emd, group).with_path(path).with_outer_group(outer),
        EvolutionConfig::new(FIG2_DT, stride),
        total_time,
        n_realizations,
    )
}

/// Deterministic identity-first path choices for spread studies.
pub fn seeded_path(group: &crate::groups::DecouplingGroup, index: usize) -> ControlPath {
    if index == 0 {
        return ControlPath::listing(group);
    }
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(
        crate::experiment::derive_seed(DEFAULT_MASTER_SEED, index as u64, 0x7061_7468),
    );
    let mut tail: Vec<usize> = (1..group.len()).collect();
    tail.shuffle(&mut rng);
    let mut order = vec![0usize];
    order.extend(tail);
    ControlPath::new(group, order).expect("identity-first permutation")
}

pub const FIG3_TOTAL_TIME: f64 = 5.0;
pub const FIG3_DT_MAIN: f64 = 0.05;
pub const FIG3_DT_INSET: f64 = 0.025;

/// N = 8 nearest-neighbor chain with time-dependent exchange anisotropy,
/// |G| = 4 collective sequence; deterministic vs randomized protocols.
pub fn fig3() -> CompareConfig {
    fig3_at_dt(FIG3_DT_MAIN)
}

/// The inset variant: dt halved, same sampling times.
pub fn fig3_inset() -> CompareConfig {
    fig3_at_dt(FIG3_DT_INSET)
}

pub fn fig3_at_dt(dt: f64) -> CompareConfig {
    let system = fig3_spec();
    let group = nn_collective_group(8).expect("even N");
    // Keep the sample grid at T_n = 0.2 n regardless of dt.
    let stride = (0.2 / dt).round() as usize;
    let substeps = default_substeps(dt, system.anisotropy.as_ref(), SUBSTEP_POINTS_PER_PERIOD);
    let evo = EvolutionConfig::new(dt, stride).with_substeps(substeps);
    let nr = DEFAULT_REALIZATIONS;
    let t = FIG3_TOTAL_TIME;
    let runs = vec![
        run("free", system.clone(), ProtocolSpec::new(ProtocolKind::Free, group.clone()), evo.clone(), t, nr),
        run("pdd", system.clone(), ProtocolSpec::new(ProtocolKind::Pdd, group.clone()), evo.clone(), t, nr),
        run("sdd", system.clone(), ProtocolSpec::new(ProtocolKind::Sdd, group.clone()), evo.clone(), t, nr),
        run(
            "cdd2",
            system.clone(),
            ProtocolSpec::new(ProtocolKind::Cdd { level: 2 }, group.clone()),
            evo.clone(),
            t,
            nr,
        ),
        run("nrd", system.clone(), ProtocolSpec::new(ProtocolKind::Nrd, group.clone()), evo.clone(), t, nr),
        run("rpd", system.clone(), ProtocolSpec::new(ProtocolKind::Rpd, group.clone()), evo.clone(), t, nr),
        run("srpd", system, ProtocolSpec::new(ProtocolKind::Srpd, group), evo, t, nr),
    ];
    CompareConfig { runs }
}

/// Scaling-law scenarios on the 4-qubit isotropic nearest-neighbor chain
/// with the |G| = 4 collective group (the criterion system).
#[derive(Debug, Clone)]
pub struct ScalingScenario {
    pub name: &'static str,
    pub kind: ProtocolKind,
    pub dt_grid: Vec<f64>,
    pub t_probe: f64,
    pub n_realizations: usize,
    /// Analytic expectation for the fitted slope, for reporting.
    pub expected_slope: f64,
}

pub fn scaling_scenario(name: &str) -> Result<ScalingScenario> {
    let dyadic = |base: f64, k: usize| (0..k).map(|i| base * (1 << i) as f64).collect::<Vec<_>>();
    match name {
        "pdd" => Ok(ScalingScenario {
            name: "pdd",
            kind: ProtocolKind::Pdd,
            dt_grid: dyadic(0.00125, 4),
            t_probe: 1.28,
            n_realizations: 1,
            expected_slope: 2.0,
        }),
        "sdd" => Ok(ScalingScenario {
            name: "sdd",
            kind: ProtocolKind::Sdd,
            dt_grid: dyadic(0.00125, 4),
            t_probe: 1.28,
            n_realizations: 1,
            expected_slope: 4.0,
        }),
        "nrd" => Ok(ScalingScenario {
            name: "nrd",
            kind: ProtocolKind::Nrd,
            dt_grid: dyadic(0.00125, 4),
            t_probe: 0.64,
            n_realizations: DEFAULT_REALIZATIONS,
            expected_slope: 1.0,
        }),
        other => Err(DdError::Configuration(format!(
            "unknown scaling scenario {other:?}; available: pdd, sdd, nrd"
        ))),
    }
}

/// The criterion system for the scaling fits.
pub fn scaling_system() -> (HamiltonianSpec, crate::groups::DecouplingGroup) {
    let system = HamiltonianSpec {
        n_qubits: 4,
        omega: 0.0,
        detunings: vec![],
        coupling: CouplingKind::NearestNeighbor,
        anisotropy: None,
    };
    let group = nn_collective_group(4).expect("even N");
    (system, group)
}

/// Build the per-dt run for a scaling scenario.
pub fn scaling_run(scenario: &ScalingScenario, dt: f64) -> Result<RunConfig> {
    let (system, group) = scaling_system();
    let stride = group.len();
    let per_sample = dt * stride as f64;
    let steps = scenario.t_probe / per_sample;
    if (steps - steps.round()).abs() > 1e-9 {
        return Err(DdError::Configuration(format!(
            "t_probe {} is not a sample time at dt {dt}",
            scenario.t_probe
        )));
    }
    let mut cfg = RunConfig::new(
        system,
        ProtocolSpec::new(scenario.kind.clone(), group),
        EvolutionConfig::new(dt, stride),
    );
    cfg.label = format!("{}_dt{}", scenario.name, dt);
    cfg.total_time = scenario.t_probe;
    cfg.n_realizations = scenario.n_realizations;
    cfg.master_seed = DEFAULT_MASTER_SEED;
    Ok(cfg)
}

/// Look up a compare preset by name.
pub fn compare_preset(name: &str) -> Result<CompareConfig> {
    match name {
        "fig1" => Ok(fig1()),
        "fig1-smoke" => Ok(fig1_smoke()),
        "fig1-intra" => Ok(fig1_intra()),
        "fig1-smoke-intra" => Ok(fig1_smoke_intra()),
        "fig2" => Ok(fig2()),
        "fig3" => Ok(fig3()),
        "fig3-inset" => Ok(fig3_inset()),
        other => Err(DdError::Configuration(format!(
            "unknown preset {other:?}; available: fig1, fig1-smoke, fig1-intra, \
             fig1-smoke-intra, fig2, fig3, fig3-inset"
        ))),
    }
}
