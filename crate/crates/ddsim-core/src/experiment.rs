//! Seeded Monte Carlo driver: sample control and disorder realizations,
//! aggregate fidelity traces, fit scaling exponents, de-randomize.
//!
//! Seeding layout: every realization r derives its control-stream seed as
//! mix(master_seed, r, CONTROL) and its disorder-stream seed as
//! mix(master_seed, r, DISORDER).  The disorder stream does not depend on the
//! protocol, so protocols compared at the same master seed see identical
//! disorder draws (paired comparison).  Realizations are independent rayon
//! work items; aggregation is an index-ordered reduction, so concurrency
//! never changes output bits.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{DdError, Result};
use crate::groups::{verify_first_order, USER_PATH_TOL};
use crate::hamiltonian::{matrix_from_terms, AnisotropyRealization, AnisotropySpec, HamiltonianSpec, SystemModel};
use crate::propagator::{entanglement_fidelity, EvolutionConfig, EvolutionPlan};
use crate::protocols::{control_frames, ProtocolSpec};

const STREAM_CONTROL: u64 = 0x636f_6e74_726f_6c73;
const STREAM_DISORDER: u64 = 0x6469_736f_7264_6572;
const STREAM_CANDIDATE: u64 = 0x6361_6e64_6964_6174;

/// SplitMix64 finalizer; stable across platforms and releases.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-(index, stream) seed derivation from a master seed.
pub fn derive_seed(master: u64, index: u64, stream: u64) -> u64 {
    mix64(mix64(master ^ mix64(stream)) ^ index)
}

/// The disorder draw seen by realization `index` (independent of protocol).
pub fn disorder_realization(
    master: u64,
    index: u64,
    aniso: &AnisotropySpec,
) -> AnisotropyRealization {
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(master, index, STREAM_DISORDER));
    aniso.sample(&mut rng)
}

/// A complete description of one protocol run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// CSV label; defaults to the protocol kind's label.
    pub label: String,
    pub system: HamiltonianSpec,
    pub protocol: ProtocolSpec,
    pub evolution: EvolutionConfig,
    pub n_realizations: usize,
    /// Final time J*T; the trace samples every sample_stride * dt up to here.
    pub total_time: f64,
    pub master_seed: u64,
    /// Reuse realization 0's disorder draw for every realization.
    pub freeze_disorder: bool,
}

impl RunConfig {
    pub fn new(system: HamiltonianSpec, protocol: ProtocolSpec, evolution: EvolutionConfig) -> Self {
        let label = protocol.kind.label();
        RunConfig {
            label,
            system,
            protocol,
            evolution,
            n_realizations: 1,
            total_time: 1.0,
            master_seed: 0,
            freeze_disorder: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        self.protocol.validate()?;
        self.evolution.validate()?;
        if self.n_realizations == 0 {
            return Err(DdError::Configuration("n_realizations must be >= 1".into()));
        }
        if !(self.total_time > 0.0) {
            return Err(DdError::Configuration(format!(
                "total_time must be positive, got {}",
                self.total_time
            )));
        }
        if self.label.is_empty() || self.label.contains(',') {
            return Err(DdError::Configuration(format!("bad run label {:?}", self.label)));
        }
        Ok(())
    }

    /// Sample count and interval count implied by total_time.
    pub fn grid(&self) -> Result<(usize, usize)> {
        let per_sample = self.evolution.dt * self.evolution.sample_stride as f64;
        let n_samples = (self.total_time / per_sample + 1e-9).floor() as usize;
        if n_samples == 0 {
            return Err(DdError::Configuration(format!(
                "total_time {} is shorter than one sample period {}",
                self.total_time, per_sample
            )));
        }
        Ok((n_samples, n_samples * self.evolution.sample_stride))
    }

    /// Canonical text form, used for the config digest and the CLI echo.
    pub fn describe(&self) -> String {
        use std::fmt::Write as _;
        let mut s = String::new();
        let _ = writeln!(s, "label = {}", self.label);
        let _ = writeln!(s, "n_qubits = {}", self.system.n_qubits);
        let _ = writeln!(s, "omega = {}", self.system.omega);
        if !self.system.detunings.is_empty() {
            let list: Vec<String> = self.system.detunings.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(s, "detunings = {}", list.join(","));
        }
        match &self.system.coupling {
            crate::hamiltonian::CouplingKind::DipolarPowerLaw { exponent } => {
                let _ = writeln!(s, "coupling.kind = dipolar");
                let _ = writeln!(s, "coupling.exponent = {exponent}");
            }
            crate::hamiltonian::CouplingKind::NearestNeighbor => {
                let _ = writeln!(s, "coupling.kind = nearest_neighbor");
            }
            crate::hamiltonian::CouplingKind::Explicit { .. } => {
                let _ = writeln!(s, "coupling.kind = explicit");
            }
        }
        match &self.system.anisotropy {
            None => {
                let _ = writeln!(s, "anisotropy.enabled = false");
            }
            Some(a) => {
                let _ = writeln!(s, "anisotropy.enabled = true");
                let _ = writeln!(s, "anisotropy.harmonics = {}", a.harmonics);
                let _ = writeln!(s, "anisotropy.base_rate = {}", a.base_rate);
                let _ = writeln!(s, "anisotropy.r_lo = {}", a.r_lo);
                let _ = writeln!(s, "anisotropy.r_hi = {}", a.r_hi);
            }
        }
        let _ = writeln!(s, "protocol.kind = {}", self.protocol.kind.label());
        let _ = writeln!(s, "protocol.group = {}", self.protocol.group.label());
        let order: Vec<String> = self.protocol.path.order().iter().map(|i| i.to_string()).collect();
        let _ = writeln!(s, "protocol.path = {}", order.join(","));
        if let Some(outer) = &self.protocol.outer_group {
            let _ = writeln!(s, "protocol.outer_group = {}", outer.label());
        }
        if let Some(arity) = self.protocol.arity {
            let _ = writeln!(s, "protocol.arity = {arity}");
        }
        if let Some(seed) = self.protocol.seed_override {
            let _ = writeln!(s, "protocol.seed = {seed}");
        }
        let _ = writeln!(s, "evolution.dt = {}", self.evolution.dt);
        let _ = writeln!(s, "evolution.substeps = {}", self.evolution.substeps);
        let _ = writeln!(s, "evolution.sample_stride = {}", self.evolution.sample_stride);
        let _ = writeln!(s, "evolution.exact_substeps = {}", self.evolution.exact_substeps);
        let _ = writeln!(s, "n_realizations = {}", self.n_realizations);
        let _ = writeln!(s, "total_time = {}", self.total_time);
        let _ = writeln!(s, "master_seed = {}", self.master_seed);
        let _ = writeln!(s, "freeze_disorder = {}", self.freeze_disorder);
        s
    }

    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.describe().as_bytes());
        let out = hasher.finalize();
        out.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub t: f64,
    pub fe_mean: f64,
    pub fe_stderr: f64,
    pub n_real: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityTrace {
    pub label: String,
    pub seed: u64,
    pub records: Vec<TraceRecord>,
    pub config_digest: String,
    /// True if a deterministic expansion was cut by the interval budget.
    pub truncated: bool,
}

impl FidelityTrace {
    /// Mean fidelity at an exact sample time.
    pub fn fe_at(&self, t_probe: f64) -> Result<f64> {
        let tol = 1e-9 * t_probe.abs().max(1.0);
        self.records
            .iter()
            .find(|r| (r.t - t_probe).abs() < tol)
            .map(|r| r.fe_mean)
            .ok_or_else(|| {
                DdError::Domain(format!(
                    "t = {t_probe} is not a sample time of trace {} (first {:?}, last {:?})",
                    self.label,
                    self.records.first().map(|r| r.t),
                    self.records.last().map(|r| r.t)
                ))
            })
    }

    pub fn stderr_at(&self, t_probe: f64) -> Result<f64> {
        let tol = 1e-9 * t_probe.abs().max(1.0);
        self.records
            .iter()
            .find(|r| (r.t - t_probe).abs() < tol)
            .map(|r| r.fe_stderr)
            .ok_or_else(|| DdError::Domain(format!("t = {t_probe} is not a sample time")))
    }
}

/// Monte Carlo estimate of the mean entanglement fidelity trace.
pub fn run_protocol(cfg: &RunConfig) -> Result<FidelityTrace> {
    cfg.validate()?;
    let sys = SystemModel::prepare(&cfg.system)?;
    if sys.n_qubits != cfg.protocol.group.n_qubits() {
        return Err(DdError::DimensionMismatch {
            left: sys.n_qubits,
            right: cfg.protocol.group.n_qubits(),
        });
    }
    // Custom paths must actually decouple the model at first order before we
    // spend time simulating them.
    if cfg.protocol.kind.uses_path() {
        let frames = cfg.protocol.path.frames(&cfg.protocol.group);
        let mut h_check = sys.static_matrix.clone();
        if let Some(drive) = &sys.drive {
            h_check += matrix_from_terms(sys.n_qubits, &drive.bond_terms)?;
        }
        let resid = verify_first_order(&frames, &h_check)?;
        if resid > USER_PATH_TOL {
            return Err(DdError::Validation(format!(
                "control path fails first-order averaging: residual {resid:.3e} > {USER_PATH_TOL:.1e}"
            )));
        }
    }
    let (n_samples, n_intervals) = cfg.grid()?;
    // Deterministic protocols on a static system have zero variance; one
    // realization carries the whole ensemble.
    let randomized = cfg.protocol.kind.is_randomized();
    let eff_real = if !randomized && sys.is_static() { 1 } else { cfg.n_realizations };
    let control_master = cfg.protocol.seed_override.unwrap_or(cfg.master_seed);
    // One plan per run: exponentials and per-frame conjugations are shared by
    // all realizations.
    let plan = EvolutionPlan::new(&sys, &cfg.evolution)?;

    let per_real: Vec<Result<(Vec<f64>, bool)>> = (0..eff_real)
        .into_par_iter()
        .map(|r| {
            let mut rng =
                ChaCha12Rng::seed_from_u64(derive_seed(control_master, r as u64, STREAM_CONTROL));
            let frames = control_frames(
                &cfg.protocol,
                n_intervals,
                if randomized { Some(&mut rng) } else { None },
            )?;
            let real = sys.drive.as_ref().map(|d| {
                let idx = if cfg.freeze_disorder { 0 } else { r as u64 };
                disorder_realization(cfg.master_seed, idx, &d.aniso)
            });
            let mut fes = Vec::with_capacity(n_samples);
            plan.evolve_sampled(&frames.frames, real.as_ref(), |_t, u| {
                fes.push(entanglement_fidelity(u));
            })
            .map_err(|e| match e {
                DdError::NumericalFailure(msg) => {
                    DdError::NumericalFailure(format!("realization {r}: {msg}"))
                }
                other => other,
            })?;
            Ok((fes, frames.truncated))
        })
        .collect();

    // First error by realization index, independent of scheduling.
    let mut rows = Vec::with_capacity(eff_real);
    let mut truncated = false;
    for res in per_real {
        let (fes, trunc) = res?;
        truncated |= trunc;
        rows.push(fes);
    }

    let mut records = Vec::with_capacity(n_samples);
    for s in 0..n_samples {
        let t = (s + 1) as f64 * cfg.evolution.sample_stride as f64 * cfg.evolution.dt;
        let n = rows.len();
        let mean = rows.iter().map(|row| row[s]).sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = rows.iter().map(|row| (row[s] - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        records.push(TraceRecord { t, fe_mean: mean, fe_stderr: stderr, n_real: n });
    }
    Ok(FidelityTrace {
        label: cfg.label.clone(),
        seed: cfg.master_seed,
        records,
        config_digest: cfg.digest(),
        truncated,
    })
}

/// A set of runs sharing the system and the sampling grid (one figure).
#[derive(Debug, Clone)]
pub struct CompareConfig {
    pub runs: Vec<RunConfig>,
}

impl CompareConfig {
    pub fn validate(&self) -> Result<()> {
        let first = self
            .runs
            .first()
            .ok_or_else(|| DdError::Configuration("compare needs at least one run".into()))?;
        let period = first.evolution.dt * first.evolution.sample_stride as f64;
        for run in &self.runs {
            run.validate()?;
            if run.system != first.system {
                return Err(DdError::Configuration(format!(
                    "run {} does not share the system of run {}",
                    run.label, first.label
                )));
            }
            let p = run.evolution.dt * run.evolution.sample_stride as f64;
            if (p - period).abs() > 1e-12 * period.max(1.0)
                || (run.total_time - first.total_time).abs() > 1e-12
            {
                return Err(DdError::Configuration(format!(
                    "run {} samples a different grid than run {}",
                    run.label, first.label
                )));
            }
        }
        Ok(())
    }

    pub fn run(&self) -> Result<Vec<FidelityTrace>> {
        self.validate()?;
        self.runs.iter().map(run_protocol).collect()
    }
}

/// Points below this infidelity sit at the numerical floor and are excluded
/// from scaling fits.
pub const INFIDELITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy)]
pub struct ScalingPoint {
    pub dt: f64,
    pub infidelity: f64,
}

#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub n_used: usize,
    /// dt values excluded because their infidelity sat at the floor.
    pub excluded: Vec<f64>,
}

impl ScalingFit {
    /// 95% confidence interval on the slope (normal approximation).
    pub fn ci95(&self) -> (f64, f64) {
        (self.slope - 1.96 * self.slope_stderr, self.slope + 1.96 * self.slope_stderr)
    }
}

/// Least-squares slope of log(1 - F_e) vs log(dt) at fixed probe time.
pub fn scaling_fit(points: &[ScalingPoint]) -> Result<ScalingFit> {
    if points.len() < 4 {
        return Err(DdError::Configuration(format!(
            "scaling fit needs at least 4 dt points, got {}",
            points.len()
        )));
    }
    let mut used = Vec::new();
    let mut excluded = Vec::new();
    for p in points {
        if p.infidelity <= INFIDELITY_FLOOR {
            excluded.push(p.dt);
        } else {
            used.push((p.dt.ln(), p.infidelity.ln()));
        }
    }
    if used.len() < 2 {
        return Err(DdError::Domain(format!(
            "only {} points above the infidelity floor; cannot fit",
            used.len()
        )));
    }
    let n = used.len() as f64;
    let mx = used.iter().map(|(x, _)| x).sum::<f64>() / n;
    let my = used.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = used.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    let sxy: f64 = used.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let dof = (used.len() as f64 - 2.0).max(1.0);
    let ss_res: f64 = used.iter().map(|(x, y)| (y - (intercept + slope * x)).powi(2)).sum();
    let slope_stderr = (ss_res / dof / sxx).sqrt();
    Ok(ScalingFit { slope, intercept, slope_stderr, n_used: used.len(), excluded })
}

/// Extract the infidelity of a trace at an exact probe time.
pub fn infidelity_at(trace: &FidelityTrace, t_probe: f64) -> Result<f64> {
    Ok(1.0 - trace.fe_at(t_probe)?)
}

#[derive(Debug, Clone)]
pub struct DerandomizeOutcome {
    /// (candidate seed, fidelity at the objective time), best first.
    pub ranking: Vec<(u64, f64)>,
    pub best_seed: u64,
    pub best: FidelityTrace,
}

/// Off-line search over control realizations: run `n_candidates` seeds and
/// return the one maximizing F_e at `t_objective`.
pub fn derandomize(cfg: &RunConfig, n_candidates: usize, t_objective: f64) -> Result<DerandomizeOutcome> {
    if !cfg.protocol.kind.is_randomized() {
        return Err(DdError::Domain(format!(
            "de-randomization needs a randomized protocol, got {}",
            cfg.protocol.kind.label()
        )));
    }
    let sys = SystemModel::prepare(&cfg.system)?;
    if !sys.is_static() {
        return Err(DdError::Domain(
            "de-randomization requires a static system (a fixed sequence is only optimal \
             for fixed physical parameters)"
                .into(),
        ));
    }
    if n_candidates == 0 {
        return Err(DdError::Domain("need at least one candidate".into()));
    }
    let mut ranking = Vec::with_capacity(n_candidates);
    let mut best: Option<(u64, FidelityTrace, f64)> = None;
    for k in 0..n_candidates {
        let seed = derive_seed(cfg.master_seed, k as u64, STREAM_CANDIDATE);
        let candidate = RunConfig {
            master_seed: seed,
            n_realizations: 1,
            label: cfg.label.clone(),
            ..cfg.clone()
        };
        let trace = run_protocol(&candidate)?;
        let fe = trace.fe_at(t_objective)?;
        ranking.push((seed, fe));
        let better = match &best {
            None => true,
            Some((bseed, _, bfe)) => fe > *bfe || (fe == *bfe && seed < *bseed),
        };
        if better {
            best = Some((seed, trace, fe));
        }
    }
    ranking.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    let (best_seed, best_trace, _) = best.unwrap();
    Ok(DerandomizeOutcome { ranking, best_seed, best: best_trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{nested_pauli_group, nn_collective_group, ControlPath};
    use crate::hamiltonian::CouplingKind;
    use crate::linalg;
    use crate::propagator::toggled_evolution;
    use crate::protocols::ProtocolKind;

    fn heisenberg_spec(n: usize) -> HamiltonianSpec {
        HamiltonianSpec {
            n_qubits: n,
            omega: 0.0,
            detunings: vec![],
            coupling: CouplingKind::NearestNeighbor,
            anisotropy: None,
        }
    }

    fn aniso_spec(n: usize) -> HamiltonianSpec {
        HamiltonianSpec {
            anisotropy: Some(AnisotropySpec::new(5, 10.0 * std::f64::consts::PI, 0.9, 1.1).unwrap()),
            ..heisenberg_spec(n)
        }
    }

    #[test]
    fn free_static_trace_matches_direct_exponential() {
        let spec = heisenberg_spec(2);
        let protocol = ProtocolSpec::new(ProtocolKind::Free, nested_pauli_group(2).unwrap());
        let mut cfg = RunConfig::new(spec, protocol, EvolutionConfig::new(0.05, 4));
        cfg.total_time = 1.0;
        cfg.n_realizations = 7;
        let trace = run_protocol(&cfg).unwrap();
        assert_eq!(trace.records.len(), 5);
        let sys = SystemModel::prepare(&cfg.system).unwrap();
        for rec in &trace.records {
            assert_eq!(rec.fe_stderr, 0.0);
            assert_eq!(rec.n_real, 1);
            let u = linalg::expm_hermitian(&sys.static_matrix, rec.t).unwrap();
            let fe = entanglement_fidelity(&u);
            assert!((rec.fe_mean - fe).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic_static_forces_single_realization() {
        let spec = heisenberg_spec(2);
        let g = nested_pauli_group(2).unwrap();
        let protocol = ProtocolSpec::new(ProtocolKind::Pdd, g);
        let mut cfg = RunConfig::new(spec, protocol, EvolutionConfig::new(0.01, 4));
        cfg.total_time = 0.4;
        cfg.n_realizations = 50;
        let trace = run_protocol(&cfg).unwrap();
        assert!(trace.records.iter().all(|r| r.n_real == 1 && r.fe_stderr == 0.0));
    }

    #[test]
    fn deterministic_protocol_with_disorder_varies_only_through_rates() {
        let spec = aniso_spec(4);
        let g = nn_collective_group(4).unwrap();
        let protocol = ProtocolSpec::new(ProtocolKind::Pdd, g);
        let mut cfg = RunConfig::new(
            spec,
            protocol,
            EvolutionConfig::new(0.05, 4).with_substeps(6),
        );
        cfg.total_time = 1.0;
        cfg.n_realizations = 5;
        let trace = run_protocol(&cfg).unwrap();
        assert!(trace.records.iter().all(|r| r.n_real == 5));
        assert!(trace.records.last().unwrap().fe_stderr > 0.0);

        // Frozen disorder brings the variance back to zero.
        cfg.freeze_disorder = true;
        let frozen = run_protocol(&cfg).unwrap();
        assert!(frozen.records.iter().all(|r| r.fe_stderr == 0.0));
    }

    #[test]
    fn reproducibility_is_bit_exact() {
        let spec = heisenberg_spec(2);
        let g = nested_pauli_group(2).unwrap();
        let protocol = ProtocolSpec::new(ProtocolKind::Nrd, g);
        let mut cfg = RunConfig::new(spec, protocol, EvolutionConfig::new(0.05, 4));
        cfg.total_time = 1.0;
        cfg.n_realizations = 20;
        cfg.master_seed = 0xfeed;
        let a = run_protocol(&cfg).unwrap();
        let b = run_protocol(&cfg).unwrap();
        assert_eq!(a, b);
        // Different master seeds give different traces.
        cfg.master_seed = 0xbeef;
        let c = run_protocol(&cfg).unwrap();
        assert_ne!(a.records, c.records);
    }

    #[test]
    fn stderr_scales_inverse_sqrt_realizations() {
        let spec = heisenberg_spec(3);
        let g = nested_pauli_group(3).unwrap();
        let protocol = ProtocolSpec::new(ProtocolKind::Nrd, g);
        let mut cfg = RunConfig::new(spec, protocol, EvolutionConfig::new(0.05, 16));
        cfg.total_time = 4.0;
        cfg.master_seed = 7;
        cfg.n_realizations = 25;
        let small = run_protocol(&cfg).unwrap();
        cfg.n_realizations = 100;
        let large = run_protocol(&cfg).unwrap();
        // Per-time stderr estimates are themselves noisy at n = 25; the
        // trace-averaged ratio is the stable observable.
        let mean_err = |tr: &FidelityTrace| {
            tr.records.iter().map(|r| r.fe_stderr).sum::<f64>() / tr.records.len() as f64
        };
        let ratio = mean_err(&small) / mean_err(&large);
        assert!((ratio - 2.0).abs() < 0.6, "stderr ratio {ratio}");
    }

    #[test]
    fn protocols_share_disorder_at_same_master_seed() {
        let aniso = AnisotropySpec::new(5, 10.0 * std::f64::consts::PI, 0.9, 1.1).unwrap();
        for r in 0..5 {
            let a = disorder_realization(99, r, &aniso);
            let b = disorder_realization(99, r, &aniso);
            assert_eq!(a, b);
        }
        assert_ne!(disorder_realization(99, 0, &aniso), disorder_realization(99, 1, &aniso));
        assert_ne!(disorder_realization(99, 0, &aniso), disorder_realization(98, 0, &aniso));
    }

    #[test]
    fn bad_path_is_rejected_before_simulation() {
        // A path over a group that does not decouple the Heisenberg chain:
        // the trivial single-qubit-identity group padded with Z letters only.
        let n = 2;
        let elements = vec![
            crate::pauli::PauliString::identity(n),
            crate::pauli::PauliString::parse("+1 Z1", n).unwrap(),
            crate::pauli::PauliString::parse("+1 Z2", n).unwrap(),
            crate::pauli::PauliString::parse("+1 Z1Z2", n).unwrap(),
        ];
        let g = crate::groups::DecouplingGroup::new("zonly", elements).unwrap();
        let protocol = ProtocolSpec::new(ProtocolKind::Pdd, g);
        let mut cfg = RunConfig::new(heisenberg_spec(n), protocol, EvolutionConfig::new(0.05, 4));
        cfg.total_time = 0.4;
        assert!(matches!(run_protocol(&cfg), Err(DdError::Validation(_))));
    }

    #[test]
    fn scaling_fit_recovers_synthetic_slope() {
        let points: Vec<ScalingPoint> = [0.001f64, 0.002, 0.004, 0.008, 0.016]
            .iter()
            .map(|&dt| ScalingPoint { dt, infidelity: 0.37 * dt.powf(2.0) })
            .collect();
        let fit = scaling_fit(&points).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!(fit.slope_stderr < 1e-12);
        assert_eq!(fit.n_used, 5);

        // Floor exclusion.
        let mut points = points;
        points[0].infidelity = 0.0;
        let fit = scaling_fit(&points).unwrap();
        assert_eq!(fit.n_used, 4);
        assert_eq!(fit.excluded, vec![0.001]);

        assert!(scaling_fit(&points[..3]).is_err());
    }

    #[test]
    fn derandomize_small_cases() {
        let spec = heisenberg_spec(2);
        let g = nested_pauli_group(2).unwrap();
        let protocol = ProtocolSpec::new(ProtocolKind::Rpd, g.clone());
        let mut cfg = RunConfig::new(spec.clone(), protocol, EvolutionConfig::new(0.2, 4));
        cfg.total_time = 0.8;
        cfg.master_seed = 31;
        let t_obj = 0.8;

        // A single candidate returns that candidate.
        let one = derandomize(&cfg, 1, t_obj).unwrap();
        assert_eq!(one.ranking.len(), 1);
        assert_eq!(one.best_seed, one.ranking[0].0);

        let out = derandomize(&cfg, 64, t_obj).unwrap();
        let best = out.ranking[0].1;
        let median = out.ranking[out.ranking.len() / 2].1;
        assert!(best >= median);

        // Exhaustive oracle: enumerate all 3! identity-first paths of the
        // 2-qubit nested group and compare against the best candidate.
        let sys = SystemModel::prepare(&spec).unwrap();
        let cfgde = EvolutionConfig::new(0.2, 4);
        let mut best_path_fe = f64::NEG_INFINITY;
        let perms: [[usize; 3]; 6] =
            [[1, 2, 3], [1, 3, 2], [2, 1, 3], [2, 3, 1], [3, 1, 2], [3, 2, 1]];
        for tail in perms {
            let mut order = vec![0usize];
            order.extend(tail);
            let path = ControlPath::new(&g, order).unwrap();
            let frames = path.frames(&g);
            let samples = toggled_evolution(&sys, &frames, &cfgde, None).unwrap();
            let fe = entanglement_fidelity(&samples.last().unwrap().1);
            best_path_fe = best_path_fe.max(fe);
        }
        assert!(
            (best - best_path_fe).abs() < 1e-12,
            "derandomized best {best} vs exhaustive {best_path_fe}"
        );

        // Deterministic protocols are rejected.
        let det = RunConfig {
            protocol: ProtocolSpec::new(ProtocolKind::Pdd, g),
            ..cfg.clone()
        };
        assert!(matches!(derandomize(&det, 4, t_obj), Err(DdError::Domain(_))));

        // Driven systems are rejected.
        let driven = RunConfig {
            system: aniso_spec(2),
            protocol: cfg.protocol.clone(),
            ..cfg
        };
        assert!(matches!(derandomize(&driven, 4, t_obj), Err(DdError::Domain(_))));
    }

    #[test]
    fn compare_grid_mismatch_is_rejected() {
        let spec = heisenberg_spec(2);
        let g = nested_pauli_group(2).unwrap();
        let mk = |dt: f64, stride: usize| {
            let mut c = RunConfig::new(
                spec.clone(),
                ProtocolSpec::new(ProtocolKind::Free, g.clone()),
                EvolutionConfig::new(dt, stride),
            );
            c.total_time = 0.8;
            c
        };
        let ok = CompareConfig { runs: vec![mk(0.05, 4), mk(0.025, 8)] };
        ok.validate().unwrap();
        let bad = CompareConfig { runs: vec![mk(0.05, 4), mk(0.05, 8)] };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn seed_derivation_is_stable() {
        // Frozen values guard against accidental changes to the seeding
        // scheme, which would silently break reproducibility of shipped runs.
        assert_eq!(derive_seed(0, 0, STREAM_CONTROL), 0x326c642a8a27a6ba);
        assert_eq!(derive_seed(0, 1, STREAM_CONTROL), 0x107300bcc6f6635a);
        assert_eq!(derive_seed(0, 0, STREAM_DISORDER), 0x8369bcdb681e4afe);
    }
}
