//! Expansion of protocol descriptors into concrete control-frame sequences.
//!
//! Frames, not pulses, are the primary representation: the toggled propagator
//! needs the frame g_n in effect during interval n directly, and frame
//! products of Pauli pulses stay inside the projective Pauli group, keeping
//! everything exact.  Pulses are derived as ratios of successive frames,
//! P_k = g_k g_{k-1}†.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{DdError, Result};
use crate::groups::{ControlPath, DecouplingGroup};
use crate::pauli::PauliString;

/// Protocol selector with its structural parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProtocolKind {
    /// No control at all.
    Free,
    /// Fixed path repeated cyclically.
    Pdd,
    /// Palindrome of the fixed path repeated (cycle 2|G|).
    Sdd,
    /// Concatenated sequences: C_1 is the base path, each next level repeats
    /// the previous one `arity` times behind cumulative bordering pulses.
    Cdd { level: u32 },
    /// Independent uniform frame draw each interval.
    Nrd,
    /// Fixed inner path conjugated by a fresh random bordering element from
    /// the outer group each cycle.
    Emd,
    /// Fresh uniformly random identity-first path each cycle.
    Rpd,
    /// Fresh random path plus its reversal each double cycle.
    Srpd,
    /// Cdd frames up to `switch_cycle` whole cycles, then Srpd frames.
    Interpolated { level: u32, switch_cycle: usize },
}

impl ProtocolKind {
    pub fn is_randomized(&self) -> bool {
        matches!(
            self,
            ProtocolKind::Nrd
                | ProtocolKind::Emd
                | ProtocolKind::Rpd
                | ProtocolKind::Srpd
                | ProtocolKind::Interpolated { .. }
        )
    }

    /// True if the kind traverses the configured inner path.
    pub fn uses_path(&self) -> bool {
        matches!(
            self,
            ProtocolKind::Pdd | ProtocolKind::Sdd | ProtocolKind::Cdd { .. } | ProtocolKind::Emd
        ) || matches!(self, ProtocolKind::Interpolated { .. })
    }

    pub fn label(&self) -> String {
        match self {
            ProtocolKind::Free => "free".into(),
            ProtocolKind::Pdd => "pdd".into(),
            ProtocolKind::Sdd => "sdd".into(),
            ProtocolKind::Cdd { level } => format!("cdd{level}"),
            ProtocolKind::Nrd => "nrd".into(),
            ProtocolKind::Emd => "emd".into(),
            ProtocolKind::Rpd => "rpd".into(),
            ProtocolKind::Srpd => "srpd".into(),
            ProtocolKind::Interpolated { .. } => "interpolated".into(),
        }
    }
}

/// A protocol together with its control resources.
#[derive(Debug, Clone)]
pub struct ProtocolSpec {
    pub kind: ProtocolKind,
    pub group: DecouplingGroup,
    pub path: ControlPath,
    /// Bordering-pulse group for Emd.
    pub outer_group: Option<DecouplingGroup>,
    /// Replicas per concatenation level for Cdd; defaults to |group|.
    pub arity: Option<usize>,
    /// Optional override of the control-stream seed (config key protocol.seed).
    pub seed_override: Option<u64>,
}

impl ProtocolSpec {
    pub fn new(kind: ProtocolKind, group: DecouplingGroup) -> Self {
        let path = ControlPath::listing(&group);
        ProtocolSpec { kind, group, path, outer_group: None, arity: None, seed_override: None }
    }

    pub fn with_path(mut self, path: ControlPath) -> Self {
        self.path = path;
        self
    }

    pub fn with_outer_group(mut self, outer: DecouplingGroup) -> Self {
        self.outer_group = Some(outer);
        self
    }

    pub fn with_arity(mut self, arity: usize) -> Self {
        self.arity = Some(arity);
        self
    }

    fn cdd_arity(&self) -> usize {
        self.arity.unwrap_or(self.group.len())
    }

    /// Parameters must be present iff the kind requires them.
    pub fn validate(&self) -> Result<()> {
        if self.path.len() != self.group.len() {
            return Err(DdError::Configuration(format!(
                "path covers {} elements, group {} has {}",
                self.path.len(),
                self.group.label(),
                self.group.len()
            )));
        }
        let needs_arity = matches!(self.kind, ProtocolKind::Cdd { .. } | ProtocolKind::Interpolated { .. });
        if self.arity.is_some() && !needs_arity {
            return Err(DdError::Configuration(format!(
                "protocol.arity is only meaningful for cdd/interpolated, not {}",
                self.kind.label()
            )));
        }
        if needs_arity {
            let a = self.cdd_arity();
            if a < 1 || a > self.group.len() {
                return Err(DdError::Configuration(format!(
                    "cdd arity {a} outside 1..=|group| = {}",
                    self.group.len()
                )));
            }
        }
        match (&self.kind, &self.outer_group) {
            (ProtocolKind::Emd, None) => {
                return Err(DdError::Configuration("emd requires protocol.outer_group".into()))
            }
            (ProtocolKind::Emd, Some(outer)) => {
                if outer.n_qubits() != self.group.n_qubits() {
                    return Err(DdError::DimensionMismatch {
                        left: self.group.n_qubits(),
                        right: outer.n_qubits(),
                    });
                }
            }
            (_, Some(_)) => {
                return Err(DdError::Configuration(format!(
                    "protocol.outer_group is only meaningful for emd, not {}",
                    self.kind.label()
                )))
            }
            _ => {}
        }
        if let ProtocolKind::Cdd { level } | ProtocolKind::Interpolated { level, .. } = self.kind {
            if level > 24 {
                return Err(DdError::Configuration(format!("cdd level {level} is unreasonably deep")));
            }
        }
        Ok(())
    }
}

/// A concrete sequence of control frames, one per interval.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    pub frames: Vec<PauliString>,
    /// The protocol's natural period in intervals (informational; fidelity
    /// sampling uses its own stride).
    pub cycle_len: usize,
    /// True if a deterministic expansion was cut mid-sequence by the interval
    /// budget (sampling then happens before the sequence completes).
    pub truncated: bool,
}

/// Expand `spec` into `n_intervals` frames.  An RNG is required iff the kind
/// is randomized; identical (spec, n_intervals, seed) yield identical output.
pub fn control_frames(
    spec: &ProtocolSpec,
    n_intervals: usize,
    mut rng: Option<&mut ChaCha12Rng>,
) -> Result<FrameSequence> {
    spec.validate()?;
    if n_intervals == 0 {
        return Err(DdError::Domain("n_intervals must be >= 1".into()));
    }
    if spec.kind.is_randomized() && rng.is_none() {
        return Err(DdError::Configuration(format!(
            "protocol {} is randomized and needs an rng/seed",
            spec.kind.label()
        )));
    }
    let group = &spec.group;
    let n_q = group.n_qubits();
    let path_frames = spec.path.frames(group);
    let cycle = path_frames.len();

    let seq = match &spec.kind {
        ProtocolKind::Free => FrameSequence {
            frames: vec![PauliString::identity(n_q); n_intervals],
            cycle_len: 1,
            truncated: false,
        },
        ProtocolKind::Pdd => FrameSequence {
            frames: (0..n_intervals).map(|m| path_frames[m % cycle].clone()).collect(),
            cycle_len: cycle,
            truncated: false,
        },
        ProtocolKind::Sdd => {
            let palindrome = crate::groups::symmetrize_path(group, &spec.path);
            FrameSequence {
                frames: (0..n_intervals).map(|m| palindrome[m % palindrome.len()].clone()).collect(),
                cycle_len: palindrome.len(),
                truncated: false,
            }
        }
        ProtocolKind::Cdd { level } => expand_cdd(&path_frames, spec.cdd_arity(), *level, n_intervals)?,
        ProtocolKind::Nrd => {
            let rng = rng.as_mut().unwrap();
            let mut frames = Vec::with_capacity(n_intervals);
            frames.push(PauliString::identity(n_q));
            for _ in 1..n_intervals {
                frames.push(group.element(rng.gen_range(0..group.len())).clone());
            }
            FrameSequence { frames, cycle_len: cycle, truncated: false }
        }
        ProtocolKind::Rpd => {
            let rng = rng.as_mut().unwrap();
            let mut frames = Vec::with_capacity(n_intervals);
            while frames.len() < n_intervals {
                for idx in random_identity_first_order(group.len(), rng) {
                    frames.push(group.element(idx).clone());
                }
            }
            frames.truncate(n_intervals);
            FrameSequence { frames, cycle_len: cycle, truncated: false }
        }
        ProtocolKind::Srpd => {
            let rng = rng.as_mut().unwrap();
            let mut frames = Vec::with_capacity(n_intervals);
            while frames.len() < n_intervals {
                let order = random_identity_first_order(group.len(), rng);
                for &idx in &order {
                    frames.push(group.element(idx).clone());
                }
                for &idx in order.iter().rev() {
                    frames.push(group.element(idx).clone());
                }
            }
            frames.truncate(n_intervals);
            FrameSequence { frames, cycle_len: 2 * cycle, truncated: false }
        }
        ProtocolKind::Emd => {
            let rng = rng.as_mut().unwrap();
            let outer = spec.outer_group.as_ref().unwrap();
            let mut frames = Vec::with_capacity(n_intervals);
            'outer: loop {
                let b = outer.element(rng.gen_range(0..outer.len()));
                for f in &path_frames {
                    if frames.len() == n_intervals {
                        break 'outer;
                    }
                    frames.push(b.mul(f)?);
                }
                if frames.len() == n_intervals {
                    break;
                }
            }
            FrameSequence { frames, cycle_len: cycle, truncated: false }
        }
        ProtocolKind::Interpolated { level, switch_cycle } => {
            let rng = rng.as_mut().unwrap();
            let switch_index = switch_cycle
                .checked_mul(cycle)
                .ok_or_else(|| DdError::Configuration("switch_cycle overflow".into()))?;
            let head_len = switch_index.min(n_intervals);
            let mut head = if head_len == 0 {
                FrameSequence { frames: vec![], cycle_len: cycle, truncated: false }
            } else {
                expand_cdd(&path_frames, spec.cdd_arity(), *level, head_len)?
            };
            if n_intervals > head_len {
                let tail_spec = ProtocolSpec::new(ProtocolKind::Srpd, group.clone());
                let tail = control_frames(&tail_spec, n_intervals - head_len, Some(rng))?;
                head.frames.extend(tail.frames);
            }
            FrameSequence { frames: head.frames, cycle_len: 2 * cycle, truncated: head.truncated }
        }
    };
    debug_assert_eq!(seq.frames.len(), n_intervals);
    Ok(seq)
}

/// Uniformly random permutation of 0..len with the identity kept first.
fn random_identity_first_order(len: usize, rng: &mut ChaCha12Rng) -> Vec<usize> {
    let mut order: Vec<usize> = (1..len).collect();
    order.shuffle(rng);
    let mut full = Vec::with_capacity(len);
    full.push(0);
    full.extend(order);
    full
}

/// Concatenated-sequence frames.
///
/// C_0 is a single free interval, C_1 the base path; level l+1 concatenates
/// `arity` replicas of level l, the k-th replica right-multiplied by the
/// cumulative bordering element q_{k-1} = path[k-1].  Because q_0 is the
/// identity, every level is a prefix of the next, so a truncated expansion is
/// simply a prefix of the full one.  If the full level-`level` block is
/// shorter than the budget it repeats cyclically.
fn expand_cdd(
    path_frames: &[PauliString],
    arity: usize,
    level: u32,
    n_intervals: usize,
) -> Result<FrameSequence> {
    let n_q = path_frames[0].n_qubits();
    if level == 0 {
        return Ok(FrameSequence {
            frames: vec![PauliString::identity(n_q); n_intervals],
            cycle_len: 1,
            truncated: false,
        });
    }
    // Full length L * arity^(level-1), saturating.
    let mut full_len: u128 = path_frames.len() as u128;
    for _ in 1..level {
        full_len = full_len.saturating_mul(arity as u128);
    }
    let mut seq: Vec<PauliString> = path_frames.to_vec();
    for _ in 1..level {
        if seq.len() >= n_intervals {
            break; // prefix property: deeper levels share this prefix
        }
        let mut next = Vec::with_capacity((seq.len() * arity).min(n_intervals + seq.len()));
        'blocks: for k in 0..arity {
            let anchor = &path_frames[k];
            for f in &seq {
                next.push(f.mul(anchor)?);
                if next.len() >= n_intervals {
                    break 'blocks;
                }
            }
        }
        seq = next;
    }
    let truncated = (n_intervals as u128) < full_len;
    let cycle_len = full_len.min(n_intervals as u128) as usize;
    let frames = (0..n_intervals).map(|m| seq[m % seq.len()].clone()).collect();
    Ok(FrameSequence { frames, cycle_len, truncated })
}

/// P_k = frames[k] * frames[k-1]†, for k = 1..len.
pub fn pulses_from_frames(frames: &[PauliString]) -> Result<Vec<PauliString>> {
    if frames.is_empty() {
        return Err(DdError::Validation("empty frame sequence".into()));
    }
    frames.windows(2).map(|w| w[1].mul(&w[0].dagger())).collect()
}

/// Rebuild frames from the first frame and the pulse list (exact round trip).
pub fn frames_from_pulses(first: &PauliString, pulses: &[PauliString]) -> Result<Vec<PauliString>> {
    let mut frames = Vec::with_capacity(pulses.len() + 1);
    frames.push(first.clone());
    for p in pulses {
        let last = frames.last().unwrap();
        frames.push(p.mul(last)?);
    }
    Ok(frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{g8_group, nested_pauli_group, nn_collective_group};
    use rand::SeedableRng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    fn letters(frames: &[PauliString]) -> Vec<String> {
        frames
            .iter()
            .map(|f| {
                let s = f.to_string();
                s.split_once(' ').unwrap().1.to_string()
            })
            .collect()
    }

    #[test]
    fn pdd_repeats_the_path() {
        let g = nested_pauli_group(2).unwrap();
        let spec = ProtocolSpec::new(ProtocolKind::Pdd, g);
        let seq = control_frames(&spec, 8, None).unwrap();
        assert_eq!(letters(&seq.frames), ["I", "X2", "Z2", "Y2", "I", "X2", "Z2", "Y2"]);
        assert_eq!(seq.cycle_len, 4);
        assert!(!seq.truncated);
    }

    #[test]
    fn sdd_is_a_repeated_palindrome() {
        let g = nested_pauli_group(2).unwrap();
        let spec = ProtocolSpec::new(ProtocolKind::Sdd, g);
        let seq = control_frames(&spec, 10, None).unwrap();
        assert_eq!(
            letters(&seq.frames),
            ["I", "X2", "Z2", "Y2", "Y2", "Z2", "X2", "I", "I", "X2"]
        );
        assert_eq!(seq.cycle_len, 8);
    }

    #[test]
    fn cdd_level1_equals_pdd() {
        let g = g8_group();
        let pdd = control_frames(&ProtocolSpec::new(ProtocolKind::Pdd, g.clone()), 16, None).unwrap();
        let cdd = control_frames(&ProtocolSpec::new(ProtocolKind::Cdd { level: 1 }, g), 16, None).unwrap();
        assert_eq!(pdd.frames, cdd.frames);
    }

    #[test]
    fn cdd_level2_structure_two_qubits() {
        let g = nested_pauli_group(2).unwrap();
        let spec = ProtocolSpec::new(ProtocolKind::Cdd { level: 2 }, g);
        let seq = control_frames(&spec, 16, None).unwrap();
        // Blocks: C1, C1*X2, C1*Z2, C1*Y2 (letters only; phases are tracked).
        assert_eq!(
            letters(&seq.frames),
            [
                "I", "X2", "Z2", "Y2", // C1
                "X2", "I", "Y2", "Z2", // C1 * X2
                "Z2", "Y2", "I", "X2", // C1 * Z2
                "Y2", "Z2", "X2", "I", // C1 * Y2
            ]
        );
        assert_eq!(seq.cycle_len, 16);
        assert!(!seq.truncated);
    }

    #[test]
    fn cdd_fig2_timing_with_arity_four() {
        // 8 * 4^(l-1) intervals per full level; l = 5 completes at interval 2048.
        let g = g8_group();
        let spec = ProtocolSpec::new(ProtocolKind::Cdd { level: 5 }, g).with_arity(4);
        let seq = control_frames(&spec, 3000, None).unwrap();
        assert_eq!(seq.cycle_len, 2048);
        assert!(!seq.truncated);
        // Truncated mid-sequence if the budget is smaller.
        let g = g8_group();
        let spec = ProtocolSpec::new(ProtocolKind::Cdd { level: 5 }, g).with_arity(4);
        let seq = control_frames(&spec, 1000, None).unwrap();
        assert!(seq.truncated);
        assert_eq!(seq.cycle_len, 1000);
    }

    #[test]
    fn cdd_literal_arity_is_group_size() {
        let g = g8_group();
        let spec = ProtocolSpec::new(ProtocolKind::Cdd { level: 2 }, g);
        let seq = control_frames(&spec, 64, None).unwrap();
        assert_eq!(seq.cycle_len, 64);
        assert!(!seq.truncated);
    }

    #[test]
    fn cdd_prefixes_are_consistent_across_levels() {
        let g = g8_group();
        let deep = control_frames(
            &ProtocolSpec::new(ProtocolKind::Cdd { level: 5 }, g.clone()).with_arity(4),
            128,
            None,
        )
        .unwrap();
        let shallow = control_frames(
            &ProtocolSpec::new(ProtocolKind::Cdd { level: 3 }, g).with_arity(4),
            128,
            None,
        )
        .unwrap();
        assert_eq!(deep.frames, shallow.frames);
    }

    #[test]
    fn nrd_draws_are_uniform() {
        let g = nested_pauli_group(2).unwrap();
        let spec = ProtocolSpec::new(ProtocolKind::Nrd, g.clone());
        let n = 40_001usize; // 40000 draws after the identity-first frame
        let seq = control_frames(&spec, n, Some(&mut rng(42))).unwrap();
        assert!(seq.frames[0].is_identity());
        let mut counts = [0usize; 4];
        for f in &seq.frames[1..] {
            counts[g.position_of(f).unwrap()] += 1;
        }
        // Multinomial 3-sigma bound on each frequency: p=1/4, n=40000.
        let n_draws = 40_000f64;
        let sigma = (0.25 * 0.75 / n_draws).sqrt();
        for (i, &c) in counts.iter().enumerate() {
            let f = c as f64 / n_draws;
            assert!((f - 0.25).abs() < 3.0 * sigma, "element {i}: frequency {f}");
        }
    }

    #[test]
    fn rpd_visits_every_element_once_per_cycle() {
        let g = g8_group();
        let spec = ProtocolSpec::new(ProtocolKind::Rpd, g.clone());
        let seq = control_frames(&spec, 40, Some(&mut rng(7))).unwrap();
        for cyc in seq.frames.chunks(8) {
            assert!(cyc[0].is_identity());
            let mut seen: Vec<usize> = cyc.iter().map(|f| g.position_of(f).unwrap()).collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..8).collect::<Vec<_>>());
        }
        // Different cycles draw different permutations with high probability.
        assert_ne!(seq.frames[..8], seq.frames[8..16]);
    }

    #[test]
    fn srpd_double_cycles_are_identity_first_palindromes() {
        let g = g8_group();
        let spec = ProtocolSpec::new(ProtocolKind::Srpd, g.clone());
        let seq = control_frames(&spec, 64, Some(&mut rng(3))).unwrap();
        assert_eq!(seq.cycle_len, 16);
        for dc in seq.frames.chunks(16) {
            assert!(dc[0].is_identity());
            for k in 0..8 {
                assert_eq!(dc[k], dc[15 - k], "not a palindrome at offset {k}");
            }
            let mut seen: Vec<usize> = dc[..8].iter().map(|f| g.position_of(f).unwrap()).collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..8).collect::<Vec<_>>());
        }
    }

    #[test]
    fn emd_transports_the_inner_path() {
        let g = nn_collective_group(4).unwrap();
        let outer = nested_pauli_group(4).unwrap();
        let spec = ProtocolSpec::new(ProtocolKind::Emd, g.clone()).with_outer_group(outer.clone());
        let seq = control_frames(&spec, 12, Some(&mut rng(9))).unwrap();
        let path = ControlPath::listing(&g).frames(&g);
        for cyc in seq.frames.chunks(4) {
            // The border is the first frame of the cycle (path starts at 1).
            let b = &cyc[0];
            assert!(outer.position_of(b).is_some());
            for (k, f) in cyc.iter().enumerate() {
                let stripped = b.dagger().mul(f).unwrap();
                assert_eq!(stripped.letter_key(), path[k].letter_key());
            }
        }
    }

    #[test]
    fn interpolated_switches_from_cdd_to_srpd() {
        let g = nn_collective_group(4).unwrap();
        let spec = ProtocolSpec::new(ProtocolKind::Interpolated { level: 2, switch_cycle: 2 }, g.clone());
        let seq = control_frames(&spec, 24, Some(&mut rng(4))).unwrap();
        let cdd = control_frames(&ProtocolSpec::new(ProtocolKind::Cdd { level: 2 }, g.clone()), 8, None).unwrap();
        assert_eq!(&seq.frames[..8], &cdd.frames[..]);
        // Tail is SRPD: identity-first palindromic double cycles.
        let tail = &seq.frames[8..];
        assert!(tail[0].is_identity());
        for k in 0..4 {
            assert_eq!(tail[k], tail[7 - k]);
        }
    }

    #[test]
    fn determinism_bit_for_bit() {
        let g = g8_group();
        for kind in [ProtocolKind::Nrd, ProtocolKind::Rpd, ProtocolKind::Srpd] {
            let spec = ProtocolSpec::new(kind, g.clone());
            let a = control_frames(&spec, 50, Some(&mut rng(1234))).unwrap();
            let b = control_frames(&spec, 50, Some(&mut rng(1234))).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn missing_rng_and_stray_parameters_are_rejected() {
        let g = g8_group();
        let spec = ProtocolSpec::new(ProtocolKind::Nrd, g.clone());
        assert!(matches!(control_frames(&spec, 4, None), Err(DdError::Configuration(_))));
        let spec = ProtocolSpec::new(ProtocolKind::Pdd, g.clone()).with_arity(4);
        assert!(matches!(control_frames(&spec, 4, None), Err(DdError::Configuration(_))));
        let spec = ProtocolSpec::new(ProtocolKind::Pdd, g.clone()).with_outer_group(g.clone());
        assert!(matches!(control_frames(&spec, 4, None), Err(DdError::Configuration(_))));
        let spec = ProtocolSpec::new(ProtocolKind::Emd, g.clone());
        assert!(matches!(control_frames(&spec, 4, Some(&mut rng(0))), Err(DdError::Configuration(_))));
    }

    #[test]
    fn pulses_examples() {
        let g = nested_pauli_group(2).unwrap();
        let id = PauliString::identity(2);
        // Constant frames produce identity pulses.
        let pulses = pulses_from_frames(&vec![g.element(2).clone(); 4]).unwrap();
        assert!(pulses.iter().all(|p| p.is_identity()));
        // frames {1, X2} -> P1 = X2.
        let pulses = pulses_from_frames(&[id.clone(), g.element(1).clone()]).unwrap();
        assert_eq!(pulses[0], g.element(1).clone());
        // frames {1, X2, Z2}: P2 = Z2 * X2 = +i Y2.
        let pulses =
            pulses_from_frames(&[id, g.element(1).clone(), g.element(2).clone()]).unwrap();
        assert_eq!(pulses[1].to_string(), "+i Y2");
    }

    #[test]
    fn frames_round_trip_through_pulses() {
        let g = g8_group();
        let spec = ProtocolSpec::new(ProtocolKind::Srpd, g);
        let seq = control_frames(&spec, 33, Some(&mut rng(8))).unwrap();
        let pulses = pulses_from_frames(&seq.frames).unwrap();
        let rebuilt = frames_from_pulses(&seq.frames[0], &pulses).unwrap();
        assert_eq!(rebuilt, seq.frames);
    }

    #[test]
    fn identity_first_for_all_non_emd_kinds() {
        let g = g8_group();
        let kinds = [
            ProtocolKind::Free,
            ProtocolKind::Pdd,
            ProtocolKind::Sdd,
            ProtocolKind::Cdd { level: 2 },
            ProtocolKind::Nrd,
            ProtocolKind::Rpd,
            ProtocolKind::Srpd,
            ProtocolKind::Interpolated { level: 1, switch_cycle: 1 },
        ];
        for kind in kinds {
            let spec = ProtocolSpec::new(kind.clone(), g.clone());
            let seq = control_frames(&spec, 10, Some(&mut rng(2))).unwrap();
            assert!(seq.frames[0].is_identity(), "{kind:?} does not start in the physical frame");
        }
    }
}
