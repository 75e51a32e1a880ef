//! Decoupling groups, control paths, and averaging verifiers.
//!
//! A decoupling group is an ordered list of Pauli strings, identity first,
//! projectively closed under multiplication.  A control path is an ordering
//! of the group used as one DD cycle.  The verifiers compute the residual
//! norms of the leading average-Hamiltonian terms for an arbitrary frame
//! sequence, which is the machine-checkable form of "first-order averaging
//! is achieved".

use std::collections::HashSet;

use num_complex::Complex64 as C64;

use crate::error::{DdError, Result};
use crate::linalg::{self, CMat};
use crate::pauli::{Letter, PauliString};

/// Ordered collection of Pauli strings; element 0 is the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct DecouplingGroup {
    label: String,
    elements: Vec<PauliString>,
}

impl DecouplingGroup {
    /// Build a group after the cheap structural checks: identity first, equal
    /// register sizes, no duplicate letter patterns.  Projective closure is a
    /// separate (quadratic-cost) check, see [`DecouplingGroup::check_closure`].
    pub fn new(label: impl Into<String>, elements: Vec<PauliString>) -> Result<Self> {
        let label = label.into();
        let first = elements
            .first()
            .ok_or_else(|| DdError::Validation(format!("group {label}: empty element list")))?;
        if !first.is_identity() {
            return Err(DdError::Validation(format!(
                "group {label}: element 0 must be the identity, got {first}"
            )));
        }
        let n = first.n_qubits();
        let mut seen = HashSet::new();
        for e in &elements {
            if e.n_qubits() != n {
                return Err(DdError::DimensionMismatch { left: n, right: e.n_qubits() });
            }
            if !seen.insert(e.letter_key()) {
                return Err(DdError::Validation(format!(
                    "group {label}: duplicate letter pattern {e}"
                )));
            }
        }
        Ok(DecouplingGroup { label, elements })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.elements[0].n_qubits()
    }

    pub fn elements(&self) -> &[PauliString] {
        &self.elements
    }

    pub fn element(&self, idx: usize) -> &PauliString {
        &self.elements[idx]
    }

    /// Index of the element with the same letters as `p`, if any.
    pub fn position_of(&self, p: &PauliString) -> Option<usize> {
        self.elements.iter().position(|e| e.letter_key() == p.letter_key())
    }

    /// Verify projective closure: for all a, b the product a*b matches some
    /// element up to phase.  Quadratic in the group size, so guarded.
    pub fn check_closure(&self) -> Result<()> {
        const MAX_CLOSURE_ELEMENTS: usize = 4096;
        if self.len() > MAX_CLOSURE_ELEMENTS {
            return Err(DdError::ResourceLimit(format!(
                "closure check is quadratic; group {} has {} elements (limit {MAX_CLOSURE_ELEMENTS})",
                self.label,
                self.len()
            )));
        }
        let keys: HashSet<(u64, u64)> = self.elements.iter().map(|e| e.letter_key()).collect();
        for a in &self.elements {
            for b in &self.elements {
                let p = a.mul(b)?;
                if !keys.contains(&p.letter_key()) {
                    return Err(DdError::Validation(format!(
                        "group {} is not projectively closed: {a} * {b} = {p} is not an element",
                        self.label
                    )));
                }
            }
        }
        Ok(())
    }

    /// One Pauli string per line, in the text grammar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for e in &self.elements {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }

    /// Parse a group file body (one Pauli string per line, '#' comments).
    pub fn from_text(label: impl Into<String>, text: &str, n_qubits: usize) -> Result<Self> {
        let mut elements = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let p = PauliString::parse(line, n_qubits)
                .map_err(|e| DdError::Parse(format!("line {}: {e}", lineno + 1)))?;
            elements.push(p);
        }
        DecouplingGroup::new(label, elements)
    }
}

/// An ordering of a group's elements used as a DD cycle; order[0] = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPath {
    order: Vec<usize>,
}

impl ControlPath {
    pub fn new(group: &DecouplingGroup, order: Vec<usize>) -> Result<Self> {
        if order.len() != group.len() {
            return Err(DdError::Validation(format!(
                "path visits {} elements, group has {}",
                order.len(),
                group.len()
            )));
        }
        if order.first() != Some(&0) {
            return Err(DdError::Validation("path must start at the identity (index 0)".into()));
        }
        let mut seen = vec![false; group.len()];
        for &i in &order {
            if i >= group.len() || seen[i] {
                return Err(DdError::Validation(format!("path is not a permutation: index {i}")));
            }
            seen[i] = true;
        }
        Ok(ControlPath { order })
    }

    /// The group's listing order.
    pub fn listing(group: &DecouplingGroup) -> Self {
        ControlPath { order: (0..group.len()).collect() }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Group elements in path order (one cycle of frames).
    pub fn frames(&self, group: &DecouplingGroup) -> Vec<PauliString> {
        self.order.iter().map(|&i| group.element(i).clone()).collect()
    }

    /// Parse a path file body: the group's elements, one per line, in the
    /// desired traversal order.
    pub fn from_text(text: &str, group: &DecouplingGroup) -> Result<Self> {
        let n = group.n_qubits();
        let mut order = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let p = PauliString::parse(line, n)
                .map_err(|e| DdError::Parse(format!("line {}: {e}", lineno + 1)))?;
            let idx = group.position_of(&p).ok_or_else(|| {
                DdError::Parse(format!("line {}: {p} is not an element of group {}", lineno + 1, group.label()))
            })?;
            order.push(idx);
        }
        ControlPath::new(group, order)
    }

    pub fn to_text(&self, group: &DecouplingGroup) -> String {
        let mut out = String::new();
        for &i in &self.order {
            out.push_str(&group.element(i).to_string());
            out.push('\n');
        }
        out
    }
}

/// Tensor products of per-qubit {I, X, Z, Y} on qubits 2..N (1-based), identity
/// on qubit 1: the nested decoupling group of size 4^(N-1).
pub fn nested_pauli_group(n_qubits: usize) -> Result<DecouplingGroup> {
    if !(2..=8).contains(&n_qubits) {
        return Err(DdError::ResourceLimit(format!(
            "nested Pauli group supports 2..=8 qubits (4^(N-1) elements), got {n_qubits}"
        )));
    }
    let digits = n_qubits - 1;
    let per_digit = [Letter::I, Letter::X, Letter::Z, Letter::Y];
    let size = 1usize << (2 * digits);
    let mut elements = Vec::with_capacity(size);
    for idx in 0..size {
        let mut letters = Vec::with_capacity(digits);
        for q in 1..n_qubits {
            // Qubit 1 (0-based) owns the most significant digit.
            let shift = 2 * (n_qubits - 1 - q);
            let digit = (idx >> shift) & 3;
            letters.push((q, per_digit[digit]));
        }
        elements.push(PauliString::from_letters(n_qubits, &letters)?);
    }
    DecouplingGroup::new(format!("nested{n_qubits}"), elements)
}

/// The 8-element combinatorial decoupling group for N = 8, in listed order.
pub fn g8_group() -> DecouplingGroup {
    let listing = [
        "+1 I",
        "+1 Z3Z4Y5Y6X7X8",
        "+1 Z2Y3X4Z6Y7X8",
        "+1 Z2X3Y4Y5X6Z7",
        "+1 Y2Y4X5Z6X7Z8",
        "+1 Y2Z3X4Z5X6Y8",
        "+1 X2Y3Z4X5Z7Y8",
        "+1 X2X3Z5Y6Y7Z8",
    ];
    let elements = listing
        .iter()
        .map(|s| PauliString::parse(s, 8).expect("static listing parses"))
        .collect();
    DecouplingGroup::new("g8", elements).expect("static listing is a valid group")
}

/// The 4-element nearest-neighbor group built from two collective rotations
/// around perpendicular axes (one acting on odd sites, one on even sites).
pub fn nn_collective_group(n_qubits: usize) -> Result<DecouplingGroup> {
    if n_qubits < 2 || n_qubits % 2 != 0 {
        return Err(DdError::Domain(format!(
            "the collective nearest-neighbor group is specified for even N >= 2, got {n_qubits}"
        )));
    }
    let n = n_qubits;
    // 1-based odd sites = 0-based even indices, and vice versa.
    let z_odd: Vec<(usize, Letter)> = (0..n).step_by(2).map(|q| (q, Letter::Z)).collect();
    let y_even: Vec<(usize, Letter)> = (1..n).step_by(2).map(|q| (q, Letter::Y)).collect();
    let mut zy = z_odd.clone();
    zy.extend(y_even.iter().copied());
    let elements = vec![
        PauliString::identity(n),
        PauliString::from_letters(n, &z_odd)?,
        PauliString::from_letters(n, &zy)?,
        PauliString::from_letters(n, &y_even)?,
    ];
    DecouplingGroup::new(format!("nn{n}"), elements)
}

/// Base-4 reflected Gray code over `digits` positions (MSB first).  Consecutive
/// codewords differ in exactly one digit; the first codeword is all zeros.
fn reflected_base4(digits: usize) -> Vec<Vec<u8>> {
    let mut seq: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..digits {
        let mut next = Vec::with_capacity(seq.len() * 4);
        for v in 0..4u8 {
            let block: Box<dyn Iterator<Item = &Vec<u8>>> = if v % 2 == 0 {
                Box::new(seq.iter())
            } else {
                Box::new(seq.iter().rev())
            };
            for tail in block {
                let mut code = Vec::with_capacity(tail.len() + 1);
                code.push(v);
                code.extend_from_slice(tail);
                next.push(code);
            }
        }
        seq = next;
    }
    seq
}

/// An ordering of the nested Pauli group in which consecutive elements differ
/// on exactly one qubit, so every pulse is a single-qubit operator.
pub fn gray_code_path(group: &DecouplingGroup) -> Result<ControlPath> {
    let n = group.n_qubits();
    let nested = nested_pauli_group(n)?;
    if group.len() != nested.len()
        || group
            .elements()
            .iter()
            .zip(nested.elements())
            .any(|(a, b)| a.letter_key() != b.letter_key())
    {
        return Err(DdError::Unsupported(format!(
            "gray_code_path requires the nested Pauli group layout, got group {}",
            group.label()
        )));
    }
    let digits = n - 1;
    let order = reflected_base4(digits)
        .into_iter()
        .map(|code| code.iter().fold(0usize, |acc, &d| (acc << 2) | d as usize))
        .collect();
    ControlPath::new(group, order)
}

/// Palindrome frame sequence: the path followed by its reversal (length 2|G|).
/// The induced toggled-Hamiltonian sequence is time symmetric, which cancels
/// the odd Magnus orders.
pub fn symmetrize_path(group: &DecouplingGroup, path: &ControlPath) -> Vec<PauliString> {
    let mut frames = path.frames(group);
    let mirror: Vec<PauliString> = frames.iter().rev().cloned().collect();
    frames.extend(mirror);
    frames
}

fn check_frames_dims(frames: &[PauliString], h: &CMat) -> Result<usize> {
    let first = frames
        .first()
        .ok_or_else(|| DdError::Validation("empty frame sequence".into()))?;
    let d = 1usize
        .checked_shl(first.n_qubits() as u32)
        .ok_or_else(|| DdError::ResourceLimit("register too large".into()))?;
    if h.nrows() != d || h.ncols() != d {
        return Err(DdError::DimensionMismatch { left: d, right: h.nrows() });
    }
    Ok(d)
}

/// Spectral norm of the traceless part of the uniform average of g† H g over
/// the frames: the zeroth-order average Hamiltonian residual.
pub fn verify_first_order(frames: &[PauliString], h: &CMat) -> Result<f64> {
    let d = check_frames_dims(frames, h)?;
    let mut acc = CMat::zeros(d, d);
    for g in frames {
        acc += g.sandwich(h)?;
    }
    acc.unscale_mut(frames.len() as f64);
    linalg::spectral_norm_hermitian(&linalg::traceless_part(&acc), 1e-8)
}

/// Norm of the first-order Magnus correction
///   H1 = -i/(2 T_c) * sum_{n>m} [g_n† H g_n, g_m† H g_m] * dt^2,  T_c = L dt,
/// for the piecewise-constant toggled sequence.
pub fn verify_second_order(frames: &[PauliString], h: &CMat, dt: f64) -> Result<f64> {
    let d = check_frames_dims(frames, h)?;
    if dt <= 0.0 {
        return Err(DdError::Domain(format!("dt must be positive, got {dt}")));
    }
    let len = frames.len();
    let mut prefix = CMat::zeros(d, d); // sum_{m<n} H_m
    let mut comm = CMat::zeros(d, d); // sum_{n>m} [H_n, H_m]
    let mut left = CMat::zeros(d, d);
    let mut right = CMat::zeros(d, d);
    for (n, g) in frames.iter().enumerate() {
        let hn = g.sandwich(h)?;
        if n > 0 {
            linalg::mul_into(&mut left, &hn, &prefix);
            linalg::mul_into(&mut right, &prefix, &hn);
            comm += &left;
            comm -= &right;
        }
        prefix += &hn;
    }
    // -i * comm is Hermitian (comm is anti-Hermitian up to rounding).
    let h1 = comm.map(|v| v * C64::new(0.0, -1.0)).scale(dt / (2.0 * len as f64));
    linalg::spectral_norm_hermitian(&h1, 1e-8)
}

/// Convenience: uniform group average of g† H g over all elements.
pub fn group_average(group: &DecouplingGroup, h: &CMat) -> Result<CMat> {
    let d = check_frames_dims(group.elements(), h)?;
    let mut acc = CMat::zeros(d, d);
    for g in group.elements() {
        acc += g.sandwich(h)?;
    }
    acc.unscale_mut(group.len() as f64);
    Ok(acc)
}

/// Residual tolerance for exact Pauli cancellations in built-in groups.
pub const EXACT_DECOUPLING_TOL: f64 = 1e-10;

/// Residual tolerance applied to user-supplied paths before simulation.
pub const USER_PATH_TOL: f64 = 1e-8;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{CouplingKind, HamiltonianSpec};
    use crate::pauli::Phase;

    fn dipolar_rotframe(n: usize) -> CMat {
        let spec = HamiltonianSpec {
            n_qubits: n,
            omega: 0.0,
            detunings: vec![],
            coupling: CouplingKind::DipolarPowerLaw { exponent: 3.0 },
            anisotropy: None,
        };
        spec.build(0.0, None).unwrap().1
    }

    #[test]
    fn nested_group_small_cases() {
        let g2 = nested_pauli_group(2).unwrap();
        let expect = ["+1 I", "+1 X2", "+1 Z2", "+1 Y2"];
        assert_eq!(g2.len(), 4);
        for (e, s) in g2.elements().iter().zip(expect) {
            assert_eq!(e.to_string(), s);
        }
        let g3 = nested_pauli_group(3).unwrap();
        assert_eq!(g3.len(), 16);
        g3.check_closure().unwrap();
        assert!(matches!(nested_pauli_group(1), Err(DdError::ResourceLimit(_))));
        assert!(matches!(nested_pauli_group(9), Err(DdError::ResourceLimit(_))));
    }

    #[test]
    fn nested_group_averages_all_two_site_terms_to_zero() {
        // Dense 8x8 group average over all 9 axis pairs, all pairs with j >= 2.
        let g3 = nested_pauli_group(3).unwrap();
        let letters = [Letter::X, Letter::Y, Letter::Z];
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            for a in letters {
                for b in letters {
                    let term = PauliString::from_letters(3, &[(i, a), (j, b)]).unwrap();
                    let avg = group_average(&g3, &term.to_matrix().unwrap()).unwrap();
                    assert!(avg.norm() < 1e-14, "sigma_{i}^{a:?} sigma_{j}^{b:?} not averaged away");
                }
            }
        }
    }

    #[test]
    fn g8_listing_and_closure() {
        let g8 = g8_group();
        assert_eq!(g8.len(), 8);
        g8.check_closure().unwrap();
        // Dense-matrix closure oracle: every pairwise product matches a listed
        // element up to a quarter phase, verified on 256x256 matrices.
        let mats: Vec<CMat> = g8.elements().iter().map(|e| e.to_matrix().unwrap()).collect();
        for a in 0..8 {
            for b in 0..8 {
                let prod = &mats[a] * &mats[b];
                let idx = g8.position_of(&g8.element(a).mul(g8.element(b)).unwrap()).unwrap();
                let phase = g8.element(a).mul(g8.element(b)).unwrap().phase().factor();
                let expect = mats[idx].scale(1.0) * phase;
                assert_eq!(prod, expect, "product {a}*{b} mismatch");
            }
        }
    }

    #[test]
    fn g8_first_order_averages_fig2_hamiltonian() {
        let h = dipolar_rotframe(8);
        let g8 = g8_group();
        let resid = verify_first_order(&g8.elements().to_vec(), &h).unwrap();
        assert!(resid < 1e-10, "residual {resid:.3e}");
    }

    #[test]
    fn nn_group_listing() {
        let g = nn_collective_group(8).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.element(1).to_string(), "+1 Z1Z3Z5Z7");
        assert_eq!(g.element(2).to_string(), "+1 Z1Y2Z3Y4Z5Y6Z7Y8");
        assert_eq!(g.element(3).to_string(), "+1 Y2Y4Y6Y8");
        g.check_closure().unwrap();
        assert!(matches!(nn_collective_group(5), Err(DdError::Domain(_))));
    }

    #[test]
    fn nn_group_averages_nearest_neighbor_but_not_next_nearest() {
        let g = nn_collective_group(4).unwrap();
        for i in 0..3usize {
            for l in [Letter::X, Letter::Y, Letter::Z] {
                let term = PauliString::from_letters(4, &[(i, l), (i + 1, l)]).unwrap();
                let avg = group_average(&g, &term.to_matrix().unwrap()).unwrap();
                assert!(avg.norm() < 1e-14, "bond term {l:?} on ({i},{}) survives", i + 1);
            }
        }
        // Next-nearest X1X3 (1-based) is NOT averaged away: the group is
        // specific to nearest-neighbor couplings.
        let x13 = PauliString::from_letters(4, &[(0, Letter::X), (2, Letter::X)]).unwrap();
        let avg = group_average(&g, &x13.to_matrix().unwrap()).unwrap();
        assert!(avg.norm() > 0.5);
    }

    #[test]
    fn gray_path_small_cases() {
        let g2 = nested_pauli_group(2).unwrap();
        let p2 = gray_code_path(&g2).unwrap();
        assert_eq!(p2.order(), &[0, 1, 2, 3]);

        let g3 = nested_pauli_group(3).unwrap();
        let p3 = gray_code_path(&g3).unwrap();
        assert_eq!(p3.order()[0], 0);
        let frames = p3.frames(&g3);
        for w in frames.windows(2) {
            let pulse = w[1].mul(&w[0].dagger()).unwrap();
            assert_eq!(pulse.weight(), 1, "transition {} -> {} uses a multi-qubit pulse", w[0], w[1]);
        }
        // Rejects a non-nested layout.
        assert!(matches!(gray_code_path(&nn_collective_group(4).unwrap()), Err(DdError::Unsupported(_))));
    }

    #[test]
    fn gray_path_first_order_certificate() {
        for n in [2usize, 3] {
            let g = nested_pauli_group(n).unwrap();
            let path = gray_code_path(&g).unwrap();
            let h = dipolar_rotframe(n);
            let resid = verify_first_order(&path.frames(&g), &h).unwrap();
            assert!(resid < 1e-12, "N={n}: {resid:.3e}");
        }
    }

    #[test]
    fn symmetrize_small_case() {
        let g = nested_pauli_group(2).unwrap();
        let path = ControlPath::listing(&g);
        let sym = symmetrize_path(&g, &path);
        let rendered: Vec<String> = sym.iter().map(|p| p.to_string()).collect();
        assert_eq!(
            rendered,
            ["+1 I", "+1 X2", "+1 Z2", "+1 Y2", "+1 Y2", "+1 Z2", "+1 X2", "+1 I"]
        );
        assert_eq!(sym.len(), 2 * g.len());
    }

    #[test]
    fn verify_first_order_identity_frame() {
        let h = dipolar_rotframe(2);
        let frames = vec![PauliString::identity(2)];
        let resid = verify_first_order(&frames, &h).unwrap();
        let direct = linalg::spectral_norm_hermitian(&linalg::traceless_part(&h), 1e-10).unwrap();
        assert!((resid - direct).abs() < 1e-12);
    }

    #[test]
    fn second_order_vanishes_for_symmetrized_path() {
        // For the pure isotropic 2-qubit Heisenberg coupling all toggled
        // Hamiltonians commute (signed combinations of XX, YY, ZZ), so the
        // first Magnus correction vanishes for any path.  A detuning breaks
        // that degeneracy and shows the symmetrization at work.
        let spec = HamiltonianSpec {
            n_qubits: 2,
            omega: 0.0,
            detunings: vec![0.3, 0.0],
            coupling: CouplingKind::NearestNeighbor,
            anisotropy: None,
        };
        let h = spec.build(0.0, None).unwrap().1;
        let g = nested_pauli_group(2).unwrap();
        let path = gray_code_path(&g).unwrap();
        let sym = symmetrize_path(&g, &path);
        let r_sym = verify_second_order(&sym, &h, 0.05).unwrap();
        assert!(r_sym < 1e-12, "{r_sym:.3e}");
        // The plain (unsymmetrized) path has a strictly positive correction.
        let r_pdd = verify_second_order(&path.frames(&g), &h, 0.05).unwrap();
        assert!(r_pdd > 1e-6, "{r_pdd:.3e}");

        // The commuting case itself: zero for every path.
        let iso = HamiltonianSpec { detunings: vec![], ..spec };
        let hi = iso.build(0.0, None).unwrap().1;
        let r_iso = verify_second_order(&path.frames(&g), &hi, 0.05).unwrap();
        assert!(r_iso < 1e-12, "{r_iso:.3e}");
    }

    #[test]
    fn second_order_vanishes_when_h_commutes_with_frames() {
        // Frames built from Z letters commute with a pure ZZ Hamiltonian.
        let zz = PauliString::parse("+1 Z1Z2", 2).unwrap().to_matrix().unwrap();
        let frames = vec![
            PauliString::identity(2),
            PauliString::parse("+1 Z1", 2).unwrap(),
            PauliString::parse("+1 Z2", 2).unwrap(),
            PauliString::parse("+1 Z1Z2", 2).unwrap(),
        ];
        let r = verify_second_order(&frames, &zz, 0.1).unwrap();
        assert!(r < 1e-14);
    }

    #[test]
    fn group_and_path_text_round_trip() {
        let g = nn_collective_group(4).unwrap();
        let text = g.to_text();
        let back = DecouplingGroup::from_text("nn4", &text, 4).unwrap();
        assert_eq!(g, back);

        let path = ControlPath::new(&g, vec![0, 2, 1, 3]).unwrap();
        let ptext = path.to_text(&g);
        let pback = ControlPath::from_text(&ptext, &g).unwrap();
        assert_eq!(path, pback);
    }

    #[test]
    fn invalid_groups_and_paths_are_rejected() {
        let x = PauliString::parse("+1 X1", 2).unwrap();
        assert!(DecouplingGroup::new("bad", vec![x.clone()]).is_err());
        let id = PauliString::identity(2);
        assert!(DecouplingGroup::new("dup", vec![id.clone(), x.clone(), x.clone()]).is_err());
        // Not closed: {1, X1, Z1} is missing Y1.
        let open = DecouplingGroup::new(
            "open",
            vec![id, x, PauliString::parse("+1 Z1", 2).unwrap()],
        )
        .unwrap();
        assert!(open.check_closure().is_err());

        let g = nn_collective_group(4).unwrap();
        assert!(ControlPath::new(&g, vec![1, 0, 2, 3]).is_err());
        assert!(ControlPath::new(&g, vec![0, 1, 2]).is_err());
        assert!(ControlPath::new(&g, vec![0, 1, 1, 3]).is_err());
    }

    #[test]
    fn phases_do_not_enter_group_membership() {
        let g = g8_group();
        let flipped = g.element(3).with_phase(Phase::MinusOne);
        assert_eq!(g.position_of(&flipped), Some(3));
    }

    #[test]
    fn listing_path_map(){
        let g = g8_group();
        let p = ControlPath::listing(&g);
        assert_eq!(p.frames(&g), g.elements().to_vec());
    }

    #[test]
    fn acceptance_helper_big_closure_guarded() {
        let g = nested_pauli_group(8).unwrap();
        assert_eq!(g.len(), 16384);
        assert!(matches!(g.check_closure(), Err(DdError::ResourceLimit(_))));
    }
}
