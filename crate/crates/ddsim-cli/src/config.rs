//! Flat key = value run configuration files ('#' starts a comment).
//!
//! Every key is listed in `--help` (see [`CONFIG_REFERENCE`]); unknown keys
//! are rejected with their line number.  Group and path files referenced from
//! a config are resolved relative to the config file's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ddsim_core::error::{DdError, Result};
use ddsim_core::groups::{g8_group, gray_code_path, nested_pauli_group, nn_collective_group, ControlPath, DecouplingGroup};
use ddsim_core::hamiltonian::{AnisotropySpec, CouplingKind, HamiltonianSpec};
use ddsim_core::presets::{DEFAULT_MASTER_SEED, DEFAULT_REALIZATIONS, SUBSTEP_POINTS_PER_PERIOD};
use ddsim_core::propagator::{default_substeps, EvolutionConfig};
use ddsim_core::protocols::{ProtocolKind, ProtocolSpec};
use ddsim_core::RunConfig;

/// Key reference printed by `--help`.
pub const CONFIG_REFERENCE: &str = "\
configuration keys (flat key = value, '#' comments):
  n_qubits                qubit count (required)
  omega                   uniform qubit frequency, units of J (default 0)
  detunings               comma list of per-qubit detunings (default all 0)
  coupling.kind           dipolar | nearest_neighbor (required)
  coupling.exponent       power-law exponent for dipolar (default 3)
  anisotropy.enabled      true | false (default false)
  anisotropy.harmonics    harmonic count K (default 5)
  anisotropy.base_rate    angular rate, units of J (default 10*pi)
  anisotropy.r_lo         lower rate bound (default 0.9)
  anisotropy.r_hi         upper rate bound (default 1.1)
  protocol.kind           free|pdd|sdd|cdd|nrd|emd|rpd|srpd|interpolated (required)
  protocol.level          concatenation level (cdd/interpolated)
  protocol.arity          replicas per concatenation level (default |group|)
  protocol.switch_cycle   whole cycles before the interpolated switch
  protocol.group          nested | g8 | nn (default nested)
  protocol.group_file     file with one Pauli string per line (overrides group)
  protocol.path           gray | listing (default gray for nested, else listing)
  protocol.path_file      file with the group elements in traversal order
  protocol.outer_group    bordering-pulse group for emd: nested | g8 | nn
  protocol.outer_group_file  file variant of the outer group
  protocol.seed           optional control-stream seed override
  evolution.dt            pulse interval, units of 1/J (required)
  evolution.substeps      substeps per interval (default: auto from anisotropy)
  evolution.sample_stride intervals between samples (default |group|)
  evolution.exact_substeps true | false (default false)
  label                   CSV protocol label (default: protocol kind)
  n_realizations          Monte Carlo realizations (default 100)
  total_time              final time J*T (required)
  master_seed             64-bit master seed (default 1592593872)
  freeze_disorder         reuse realization 0's disorder draw (default false)
";

struct RawConfig {
    entries: BTreeMap<String, (String, usize)>, // key -> (value, line)
    base_dir: PathBuf,
}

const KNOWN_KEYS: &[&str] = &[
    "n_qubits",
    "omega",
    "detunings",
    "coupling.kind",
    "coupling.exponent",
    "anisotropy.enabled",
    "anisotropy.harmonics",
    "anisotropy.base_rate",
    "anisotropy.r_lo",
    "anisotropy.r_hi",
    "protocol.kind",
    "protocol.level",
    "protocol.arity",
    "protocol.switch_cycle",
    "protocol.group",
    "protocol.group_file",
    "protocol.path",
    "protocol.path_file",
    "protocol.outer_group",
    "protocol.outer_group_file",
    "protocol.seed",
    "evolution.dt",
    "evolution.substeps",
    "evolution.sample_stride",
    "evolution.exact_substeps",
    "label",
    "n_realizations",
    "total_time",
    "master_seed",
    "freeze_disorder",
];

impl RawConfig {
    fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                DdError::Configuration(format!("line {lineno}: expected 'key = value', got {line:?}"))
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(DdError::Configuration(format!("line {lineno}: unknown key {key:?}")));
            }
            if entries.insert(key.clone(), (value, lineno)).is_some() {
                return Err(DdError::Configuration(format!("line {lineno}: duplicate key {key:?}")));
            }
        }
        Ok(RawConfig { entries, base_dir: base_dir.to_path_buf() })
    }

    fn apply_overrides(&mut self, sets: &[String]) -> Result<()> {
        for (i, s) in sets.iter().enumerate() {
            let (key, value) = s.split_once('=').ok_or_else(|| {
                DdError::Configuration(format!("--set #{}: expected key=value, got {s:?}", i + 1))
            })?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(DdError::Configuration(format!("--set: unknown key {key:?}")));
            }
            self.entries.insert(key, (value.trim().to_string(), 0));
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn line(&self, key: &str) -> usize {
        self.entries.get(key).map(|(_, l)| *l).unwrap_or(0)
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| DdError::Configuration(format!("missing required key {key:?}")))
    }

    fn parse_val<T: std::str::FromStr>(&self, key: &str, value: &str) -> Result<T> {
        value.parse().map_err(|_| {
            DdError::Configuration(format!(
                "line {}: key {key:?}: cannot parse {value:?} as {}",
                self.line(key),
                std::any::type_name::<T>()
            ))
        })
    }

    fn opt<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => Ok(Some(self.parse_val(key, v)?)),
        }
    }

    fn opt_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.opt(key)?.unwrap_or(default))
    }

    fn req<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let v = self.required(key)?.to_string();
        self.parse_val(key, &v)
    }

    fn read_rel(&self, key: &str, rel: &str) -> Result<String> {
        let path = self.base_dir.join(rel);
        std::fs::read_to_string(&path).map_err(|e| {
            DdError::Configuration(format!(
                "line {}: key {key:?}: cannot read {}: {e}",
                self.line(key),
                path.display()
            ))
        })
    }
}

fn builtin_group(name: &str, n_qubits: usize) -> Result<DecouplingGroup> {
    match name {
        "nested" => nested_pauli_group(n_qubits),
        "g8" => {
            if n_qubits != 8 {
                return Err(DdError::Configuration(format!(
                    "the g8 group acts on 8 qubits, config has {n_qubits}"
                )));
            }
            Ok(g8_group())
        }
        "nn" => nn_collective_group(n_qubits),
        other => Err(DdError::Configuration(format!(
            "unknown group {other:?}; available: nested, g8, nn (or use a group file)"
        ))),
    }
}

/// Parse config text (plus `--set key=value` overrides) into a run config.
pub fn parse_config(text: &str, base_dir: &Path, sets: &[String]) -> Result<RunConfig> {
    let mut raw = RawConfig::parse(text, base_dir)?;
    raw.apply_overrides(sets)?;
    build_run_config(&raw, true)
}

/// Parse only the system stanza (used by `verify --model`).
pub fn parse_system(text: &str, base_dir: &Path) -> Result<HamiltonianSpec> {
    let raw = RawConfig::parse(text, base_dir)?;
    system_from(&raw)
}

fn system_from(raw: &RawConfig) -> Result<HamiltonianSpec> {
    let n_qubits: usize = raw.req("n_qubits")?;
    let omega: f64 = raw.opt_or("omega", 0.0)?;
    let detunings: Vec<f64> = match raw.get("detunings") {
        None => vec![],
        Some(list) => list
            .split(',')
            .map(|tok| {
                tok.trim().parse::<f64>().map_err(|_| {
                    DdError::Configuration(format!(
                        "line {}: bad detuning entry {tok:?}",
                        raw.line("detunings")
                    ))
                })
            })
            .collect::<Result<_>>()?,
    };
    let coupling = match raw.required("coupling.kind")? {
        "dipolar" => CouplingKind::DipolarPowerLaw { exponent: raw.opt_or("coupling.exponent", 3.0)? },
        "nearest_neighbor" => {
            if raw.get("coupling.exponent").is_some() {
                return Err(DdError::Configuration(
                    "coupling.exponent is only meaningful for coupling.kind = dipolar".into(),
                ));
            }
            CouplingKind::NearestNeighbor
        }
        other => {
            return Err(DdError::Configuration(format!(
                "line {}: unknown coupling.kind {other:?} (dipolar | nearest_neighbor)",
                raw.line("coupling.kind")
            )))
        }
    };
    let anisotropy = if raw.opt_or("anisotropy.enabled", false)? {
        Some(AnisotropySpec::new(
            raw.opt_or("anisotropy.harmonics", 5usize)?,
            raw.opt_or("anisotropy.base_rate", 10.0 * std::f64::consts::PI)?,
            raw.opt_or("anisotropy.r_lo", 0.9)?,
            raw.opt_or("anisotropy.r_hi", 1.1)?,
        )?)
    } else {
        for key in ["anisotropy.harmonics", "anisotropy.base_rate", "anisotropy.r_lo", "anisotropy.r_hi"] {
            if raw.get(key).is_some() {
                return Err(DdError::Configuration(format!(
                    "{key} is set but anisotropy.enabled is not true"
                )));
            }
        }
        None
    };
    let spec = HamiltonianSpec { n_qubits, omega, detunings, coupling, anisotropy };
    spec.validate()?;
    Ok(spec)
}

fn build_run_config(raw: &RawConfig, _require_protocol: bool) -> Result<RunConfig> {
    let system = system_from(raw)?;
    let n_qubits = system.n_qubits;

    // Group and path.
    let group = if let Some(file) = raw.get("protocol.group_file") {
        if raw.get("protocol.group").is_some() {
            return Err(DdError::Configuration(
                "protocol.group and protocol.group_file are mutually exclusive".into(),
            ));
        }
        let body = raw.read_rel("protocol.group_file", file)?;
        let group = DecouplingGroup::from_text(file, &body, n_qubits)?;
        group.check_closure()?;
        group
    } else {
        builtin_group(raw.get("protocol.group").unwrap_or("nested"), n_qubits)?
    };

    let path = if let Some(file) = raw.get("protocol.path_file") {
        if raw.get("protocol.path").is_some() {
            return Err(DdError::Configuration(
                "protocol.path and protocol.path_file are mutually exclusive".into(),
            ));
        }
        let body = raw.read_rel("protocol.path_file", file)?;
        ControlPath::from_text(&body, &group)?
    } else {
        match raw.get("protocol.path") {
            Some("gray") => gray_code_path(&group)?,
            Some("listing") => ControlPath::listing(&group),
            Some(other) => {
                return Err(DdError::Configuration(format!(
                    "unknown protocol.path {other:?} (gray | listing, or a path file)"
                )))
            }
            None => {
                if gray_code_path(&group).is_ok() {
                    gray_code_path(&group)?
                } else {
                    ControlPath::listing(&group)
                }
            }
        }
    };

    let kind_name = raw.required("protocol.kind")?;
    if kind_name.is_empty() {
        return Err(DdError::Configuration("protocol.kind is empty".into()));
    }
    let level_req = || -> Result<u32> {
        raw.opt("protocol.level")?.ok_or_else(|| {
            DdError::Configuration(format!("protocol.kind = {kind_name} requires protocol.level"))
        })
    };
    let kind = match kind_name {
        "free" => ProtocolKind::Free,
        "pdd" => ProtocolKind::Pdd,
        "sdd" => ProtocolKind::Sdd,
        "cdd" => ProtocolKind::Cdd { level: level_req()? },
        "nrd" => ProtocolKind::Nrd,
        "emd" => ProtocolKind::Emd,
        "rpd" => ProtocolKind::Rpd,
        "srpd" => ProtocolKind::Srpd,
        "interpolated" => ProtocolKind::Interpolated {
            level: level_req()?,
            switch_cycle: raw.opt("protocol.switch_cycle")?.ok_or_else(|| {
                DdError::Configuration("interpolated requires protocol.switch_cycle".into())
            })?,
        },
        other => {
            return Err(DdError::Configuration(format!(
                "line {}: unknown protocol.kind {other:?}",
                raw.line("protocol.kind")
            )))
        }
    };
    if !matches!(kind, ProtocolKind::Cdd { .. } | ProtocolKind::Interpolated { .. })
        && raw.get("protocol.level").is_some()
    {
        return Err(DdError::Configuration(
            "protocol.level is only meaningful for cdd/interpolated".into(),
        ));
    }

    let mut protocol = ProtocolSpec::new(kind.clone(), group).with_path(path);
    if let Some(arity) = raw.opt::<usize>("protocol.arity")? {
        protocol = protocol.with_arity(arity);
    }
    if matches!(kind, ProtocolKind::Emd) {
        let outer = if let Some(file) = raw.get("protocol.outer_group_file") {
            let body = raw.read_rel("protocol.outer_group_file", file)?;
            let g = DecouplingGroup::from_text(file, &body, n_qubits)?;
            g.check_closure()?;
            g
        } else {
            builtin_group(
                raw.required("protocol.outer_group").map_err(|_| {
                    DdError::Configuration("emd requires protocol.outer_group (or a file)".into())
                })?,
                n_qubits,
            )?
        };
        protocol = protocol.with_outer_group(outer);
    } else if raw.get("protocol.outer_group").is_some() || raw.get("protocol.outer_group_file").is_some() {
        return Err(DdError::Configuration("protocol.outer_group is only meaningful for emd".into()));
    }
    protocol.seed_override = raw.opt("protocol.seed")?;

    let dt: f64 = raw.req("evolution.dt")?;
    let sample_stride = raw.opt_or("evolution.sample_stride", protocol.group.len())?;
    let substeps = match raw.opt::<usize>("evolution.substeps")? {
        Some(s) => s,
        None => default_substeps(dt, system.anisotropy.as_ref(), SUBSTEP_POINTS_PER_PERIOD),
    };
    let evolution = EvolutionConfig {
        dt,
        substeps,
        sample_stride,
        exact_substeps: raw.opt_or("evolution.exact_substeps", false)?,
    };

    let mut cfg = RunConfig::new(system, protocol, evolution);
    cfg.label = raw.get("label").map(str::to_string).unwrap_or_else(|| kind.label());
    cfg.n_realizations = raw.opt_or("n_realizations", DEFAULT_REALIZATIONS)?;
    cfg.total_time = raw.req("total_time")?;
    cfg.master_seed = raw.opt_or("master_seed", DEFAULT_MASTER_SEED)?;
    cfg.freeze_disorder = raw.opt_or("freeze_disorder", false)?;
    cfg.validate()?;
    cfg.grid()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
n_qubits = 2
coupling.kind = nearest_neighbor
protocol.kind = pdd
evolution.dt = 0.05
total_time = 0.4
";

    fn parse(text: &str) -> Result<RunConfig> {
        parse_config(text, Path::new("."), &[])
    }

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = parse(MINIMAL).unwrap();
        assert_eq!(cfg.label, "pdd");
        assert_eq!(cfg.n_realizations, DEFAULT_REALIZATIONS);
        assert_eq!(cfg.master_seed, DEFAULT_MASTER_SEED);
        assert_eq!(cfg.evolution.sample_stride, 4);
        assert_eq!(cfg.evolution.substeps, 1);
        assert_eq!(cfg.protocol.group.len(), 4);
    }

    #[test]
    fn unknown_and_duplicate_keys_are_rejected_with_line_numbers() {
        let err = parse("n_qubits = 2\nbogus.key = 1\n").unwrap_err();
        assert!(matches!(err, DdError::Configuration(_)));
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = parse("n_qubits = 2\nn_qubits = 3\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn missing_protocol_kind_is_named() {
        let err = parse("n_qubits = 2\ncoupling.kind = nearest_neighbor\nevolution.dt = 0.05\ntotal_time = 1\n")
            .unwrap_err();
        assert!(err.to_string().contains("protocol.kind"), "{err}");
    }

    #[test]
    fn type_errors_carry_line_and_key() {
        let bad = MINIMAL.replace("evolution.dt = 0.05", "evolution.dt = fast");
        let err = parse(&bad).unwrap_err();
        assert!(err.to_string().contains("evolution.dt"), "{err}");
    }

    #[test]
    fn set_overrides_win() {
        let cfg = parse_config(MINIMAL, Path::new("."), &["total_time=0.8".into(), "master_seed=9".into()])
            .unwrap();
        assert_eq!(cfg.total_time, 0.8);
        assert_eq!(cfg.master_seed, 9);
        assert!(parse_config(MINIMAL, Path::new("."), &["nope=1".into()]).is_err());
    }

    #[test]
    fn echo_round_trips_dt() {
        let cfg = parse(MINIMAL).unwrap();
        assert!(cfg.describe().contains("evolution.dt = 0.05"));
    }

    #[test]
    fn stray_parameters_are_rejected() {
        let bad = format!("{MINIMAL}protocol.level = 2\n");
        assert!(parse(&bad).is_err());
        let bad = format!("{MINIMAL}protocol.outer_group = nested\n");
        assert!(parse(&bad).is_err());
        let bad = format!("{MINIMAL}anisotropy.r_lo = 0.9\n");
        assert!(parse(&bad).is_err());
    }

    #[test]
    fn cdd_and_emd_require_their_parameters() {
        let cdd = MINIMAL.replace("protocol.kind = pdd", "protocol.kind = cdd");
        assert!(parse(&cdd).unwrap_err().to_string().contains("protocol.level"));
        let ok = format!("{}protocol.level = 2\n", cdd);
        assert_eq!(parse(&ok).unwrap().label, "cdd2");
        let emd = MINIMAL.replace("protocol.kind = pdd", "protocol.kind = emd");
        assert!(parse(&emd).unwrap_err().to_string().contains("outer_group"));
        let ok = format!("{}protocol.outer_group = nested\n", emd);
        assert_eq!(parse(&ok).unwrap().label, "emd");
    }

    #[test]
    fn group_and_path_files_resolve_relative_to_config() {
        let dir = tempfile::tempdir().unwrap();
        let group = nn_collective_group(2).unwrap();
        std::fs::write(dir.path().join("g.txt"), group.to_text()).unwrap();
        let path_text = "+1 I\n+1 Y2\n+1 Z1Y2\n+1 Z1\n";
        std::fs::write(dir.path().join("p.txt"), path_text).unwrap();
        let text = "\
n_qubits = 2
coupling.kind = nearest_neighbor
protocol.kind = pdd
protocol.group_file = g.txt
protocol.path_file = p.txt
evolution.dt = 0.05
total_time = 0.4
";
        let cfg = parse_config(text, dir.path(), &[]).unwrap();
        assert_eq!(cfg.protocol.group.len(), 4);
        assert_eq!(cfg.protocol.path.order(), &[0, 3, 2, 1]);
    }

    #[test]
    fn anisotropy_stanza_expands() {
        let text = "\
n_qubits = 4
coupling.kind = nearest_neighbor
anisotropy.enabled = true
anisotropy.harmonics = 5
anisotropy.r_lo = 0.9
anisotropy.r_hi = 1.1
protocol.kind = nrd
protocol.group = nn
evolution.dt = 0.05
total_time = 0.4
";
        let cfg = parse(text).unwrap();
        let a = cfg.system.anisotropy.unwrap();
        assert_eq!(a.harmonics, 5);
        assert_eq!(cfg.evolution.substeps, 6);
    }
}
