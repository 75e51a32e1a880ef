//! Spin-network Hamiltonians as Pauli term lists and dense Hermitian matrices.
//!
//! The model is
//!
//!   H(t) = sum_i (omega_i/2) Z_i
//!        + sum_{i<j} sum_{a=x,y,z} J_ij^(a) sigma_i^(a) sigma_j^(a)
//!
//! with couplings in units of a reference J = 1 and times in units of 1/J.
//! An optional anisotropy descriptor makes the z-axis nearest-neighbor
//! couplings time dependent, J^z_{i,i+1}(t) = Delta(t), with
//! Delta(t) = sum_k sin(base_rate * R_k * t).  Chains are open (no wraparound).

use rand::Rng;

use crate::error::{DdError, Result};
use crate::linalg::{self, CMat};
use crate::pauli::{Letter, PauliString, MAX_DENSE_QUBITS};

/// A single weighted Pauli term: coeff * string.
pub type Term = (f64, PauliString);

/// Pair-coupling profile J_ij^(a).
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingKind {
    /// J * |i-j|^(-exponent) on every pair, isotropic in the axis.
    DipolarPowerLaw { exponent: f64 },
    /// J on |i-j| = 1, zero otherwise, isotropic in the axis.
    NearestNeighbor,
    /// Explicit per-pair, per-axis table.
    Explicit { table: CouplingTable },
}

impl CouplingKind {
    /// Coupling strength for the (i, j) pair along `axis` (0 = x, 1 = y, 2 = z),
    /// in units of J.  Sites are 0-based.
    pub fn strength(&self, i: usize, j: usize, axis: usize) -> Result<f64> {
        if i == j {
            return Err(DdError::Domain(format!("coupling requires distinct sites, got i = j = {i}")));
        }
        let dist = i.abs_diff(j);
        Ok(match self {
            CouplingKind::DipolarPowerLaw { exponent } => (dist as f64).powf(-exponent),
            CouplingKind::NearestNeighbor => {
                if dist == 1 {
                    1.0
                } else {
                    0.0
                }
            }
            CouplingKind::Explicit { table } => table.get(i, j)[axis],
        })
    }

    /// True if J^x = J^y for every pair (required by the rotating frame).
    fn xy_isotropic(&self) -> bool {
        match self {
            CouplingKind::DipolarPowerLaw { .. } | CouplingKind::NearestNeighbor => true,
            CouplingKind::Explicit { table } => table.entries.iter().all(|j| j[0] == j[1]),
        }
    }
}

/// Symmetric per-pair coupling strengths, zero on the diagonal by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingTable {
    n: usize,
    entries: Vec<[f64; 3]>, // pair-major over i < j
}

impl CouplingTable {
    pub fn zeros(n: usize) -> Self {
        CouplingTable { n, entries: vec![[0.0; 3]; n * (n - 1) / 2] }
    }

    fn index(&self, i: usize, j: usize) -> usize {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        // Row-major upper triangle offset for pair (lo, hi).
        lo * self.n - lo * (lo + 1) / 2 + (hi - lo - 1)
    }

    pub fn set(&mut self, i: usize, j: usize, j_axes: [f64; 3]) {
        assert!(i != j && i < self.n && j < self.n);
        let idx = self.index(i, j);
        self.entries[idx] = j_axes;
    }

    pub fn get(&self, i: usize, j: usize) -> [f64; 3] {
        self.entries[self.index(i, j)]
    }
}

/// Descriptor of the time-dependent exchange anisotropy
/// Delta(t) = sum_{k=1}^{K} sin(base_rate * R_k * t), R_k in [r_lo, r_hi].
#[derive(Debug, Clone, PartialEq)]
pub struct AnisotropySpec {
    pub harmonics: usize,
    /// Angular rate in units of J; the shipped scenarios use 10 pi.
    pub base_rate: f64,
    pub r_lo: f64,
    pub r_hi: f64,
}

impl AnisotropySpec {
    pub fn new(harmonics: usize, base_rate: f64, r_lo: f64, r_hi: f64) -> Result<Self> {
        if harmonics == 0 {
            return Err(DdError::Configuration("anisotropy.harmonics must be >= 1".into()));
        }
        if !(r_lo <= r_hi) || !r_lo.is_finite() || !r_hi.is_finite() {
            return Err(DdError::Configuration(format!("bad anisotropy rate range [{r_lo}, {r_hi}]")));
        }
        Ok(AnisotropySpec { harmonics, base_rate, r_lo, r_hi })
    }

    /// Delta(t) for a given realization of the rates.
    pub fn delta(&self, t: f64, real: &AnisotropyRealization) -> f64 {
        real.rates.iter().map(|&r| (self.base_rate * r * t).sin()).sum()
    }

    pub fn sample(&self, rng: &mut impl Rng) -> AnisotropyRealization {
        let rates = (0..self.harmonics).map(|_| rng.gen_range(self.r_lo..=self.r_hi)).collect();
        AnisotropyRealization { rates }
    }

    fn check_realization(&self, real: &AnisotropyRealization) -> Result<()> {
        if real.rates.len() != self.harmonics {
            return Err(DdError::Configuration(format!(
                "anisotropy realization has {} rates, expected {}",
                real.rates.len(),
                self.harmonics
            )));
        }
        for &r in &real.rates {
            if r < self.r_lo || r > self.r_hi {
                return Err(DdError::Validation(format!(
                    "rate {r} outside configured range [{}, {}]",
                    self.r_lo, self.r_hi
                )));
            }
        }
        Ok(())
    }
}

/// One draw of the anisotropy rates R_k.
#[derive(Debug, Clone, PartialEq)]
pub struct AnisotropyRealization {
    pub rates: Vec<f64>,
}

/// Full description of the spin network.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    pub n_qubits: usize,
    /// Uniform qubit frequency, units of J.
    pub omega: f64,
    /// Per-qubit detunings delta_i = omega_i - omega; empty means all zero.
    pub detunings: Vec<f64>,
    pub coupling: CouplingKind,
    pub anisotropy: Option<AnisotropySpec>,
}

impl HamiltonianSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(DdError::Configuration("n_qubits must be >= 1".into()));
        }
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(DdError::ResourceLimit(format!(
                "dense simulation is limited to {MAX_DENSE_QUBITS} qubits, got {}",
                self.n_qubits
            )));
        }
        if !self.detunings.is_empty() && self.detunings.len() != self.n_qubits {
            return Err(DdError::Configuration(format!(
                "{} detunings given for {} qubits",
                self.detunings.len(),
                self.n_qubits
            )));
        }
        if let CouplingKind::Explicit { table } = &self.coupling {
            if table.n != self.n_qubits {
                return Err(DdError::Configuration(format!(
                    "coupling table is for {} qubits, spec has {}",
                    table.n, self.n_qubits
                )));
            }
        }
        Ok(())
    }

    fn omega_at(&self, i: usize) -> f64 {
        self.omega + self.detunings.get(i).copied().unwrap_or(0.0)
    }

    /// Pauli term list at time `t`.  A realization is required iff the
    /// anisotropy is configured.
    pub fn terms_at(&self, t: f64, real: Option<&AnisotropyRealization>) -> Result<Vec<Term>> {
        self.validate()?;
        let delta = match (&self.anisotropy, real) {
            (Some(spec), Some(r)) => {
                spec.check_realization(r)?;
                Some(spec.delta(t, r))
            }
            (Some(_), None) => {
                return Err(DdError::Configuration(
                    "anisotropy is configured but no realization was supplied".into(),
                ))
            }
            (None, _) => None,
        };
        let n = self.n_qubits;
        let mut terms = Vec::new();
        for i in 0..n {
            let w = self.omega_at(i);
            if w != 0.0 {
                terms.push((0.5 * w, PauliString::single(n, i, Letter::Z)?));
            }
        }
        let axes = [Letter::X, Letter::Y, Letter::Z];
        for i in 0..n {
            for j in (i + 1)..n {
                for (a, letter) in axes.into_iter().enumerate() {
                    let mut coeff = self.coupling.strength(i, j, a)?;
                    if let Some(d) = delta {
                        // Anisotropy replaces the z-axis nearest-neighbor coupling.
                        if a == 2 && j == i + 1 {
                            coeff = d;
                        }
                    }
                    if coeff != 0.0 {
                        let p = PauliString::from_letters(n, &[(i, letter), (j, letter)])?;
                        terms.push((coeff, p));
                    }
                }
            }
        }
        Ok(terms)
    }

    /// Term list and dense Hermitian matrix at time `t`.
    pub fn build(&self, t: f64, real: Option<&AnisotropyRealization>) -> Result<(Vec<Term>, CMat)> {
        let terms = self.terms_at(t, real)?;
        let m = matrix_from_terms(self.n_qubits, &terms)?;
        Ok((terms, m))
    }

    /// Sum of |coefficients|, an upper bound on the spectral norm.
    pub fn norm_bound(&self, real: Option<&AnisotropyRealization>) -> Result<f64> {
        // The bound must hold at all times; |Delta(t)| <= K.
        let terms = self.terms_at(0.0, real)?;
        let mut bound: f64 = terms.iter().map(|(c, _)| c.abs()).sum();
        if let Some(spec) = &self.anisotropy {
            // terms_at(0) has Delta(0) = 0 on the driven bonds; add the ceiling.
            bound += spec.harmonics as f64 * (self.n_qubits - 1) as f64;
        }
        Ok(bound)
    }

    /// Transform to the logical-rotating frame: the uniform omega term is
    /// removed exactly and detunings are retained.  Couplings must commute
    /// with the uniform rotation generator (J^x = J^y pairwise); otherwise the
    /// frame would make them time dependent and the transform is refused.
    pub fn rotating_frame(&self) -> Result<HamiltonianSpec> {
        self.validate()?;
        if self.omega != 0.0 && !self.coupling.xy_isotropic() {
            return Err(DdError::Unsupported(
                "xy-anisotropic couplings do not commute with the uniform rotation; \
                 a time-resolved treatment is required"
                    .into(),
            ));
        }
        Ok(HamiltonianSpec { omega: 0.0, ..self.clone() })
    }
}

/// Dense Hermitian matrix from a term list (exact per-term entries).
pub fn matrix_from_terms(n_qubits: usize, terms: &[Term]) -> Result<CMat> {
    let d = 1usize << n_qubits;
    let mut m = CMat::zeros(d, d);
    for (coeff, p) in terms {
        if p.n_qubits() != n_qubits {
            return Err(DdError::DimensionMismatch { left: n_qubits, right: p.n_qubits() });
        }
        let tm = p.to_matrix()?;
        m += tm.scale(*coeff);
    }
    Ok(m)
}

/// Max |eigenvalue| of a dense Hermitian matrix.
pub fn spectral_norm(h: &CMat) -> Result<f64> {
    linalg::spectral_norm_hermitian(h, 1e-10)
}

/// A spec prepared for propagation: rotating frame applied, terms split into
/// a static part and the (diagonal) driven part.
#[derive(Debug, Clone)]
pub struct SystemModel {
    pub n_qubits: usize,
    pub dim: usize,
    pub static_terms: Vec<Term>,
    pub static_matrix: CMat,
    pub drive: Option<DrivenPart>,
}

/// Time-dependent part: Delta(t) times a sum of Z_i Z_{i+1} bonds.  The bond
/// operators are diagonal in the computational basis, which the propagator
/// exploits.
#[derive(Debug, Clone)]
pub struct DrivenPart {
    pub aniso: AnisotropySpec,
    pub bond_terms: Vec<Term>,
}

impl SystemModel {
    pub fn prepare(spec: &HamiltonianSpec) -> Result<Self> {
        let rot = spec.rotating_frame()?;
        let n = rot.n_qubits;
        match &rot.anisotropy {
            None => {
                let (terms, matrix) = rot.build(0.0, None)?;
                Ok(SystemModel {
                    n_qubits: n,
                    dim: 1 << n,
                    static_terms: terms,
                    static_matrix: matrix,
                    drive: None,
                })
            }
            Some(aniso) => {
                // Static part: everything except the replaced z nearest-neighbor
                // bonds; driven part: unit-coefficient Z_i Z_{i+1} bonds.
                let undriven = HamiltonianSpec { anisotropy: None, ..rot.clone() };
                let mut static_terms = Vec::new();
                for (c, p) in undriven.terms_at(0.0, None)? {
                    if !is_nn_zz(&p) {
                        static_terms.push((c, p));
                    }
                }
                let mut bond_terms = Vec::new();
                for i in 0..n - 1 {
                    let p = PauliString::from_letters(n, &[(i, Letter::Z), (i + 1, Letter::Z)])?;
                    bond_terms.push((1.0, p));
                }
                let static_matrix = matrix_from_terms(n, &static_terms)?;
                Ok(SystemModel {
                    n_qubits: n,
                    dim: 1 << n,
                    static_terms,
                    static_matrix,
                    drive: Some(DrivenPart { aniso: aniso.clone(), bond_terms }),
                })
            }
        }
    }

    pub fn is_static(&self) -> bool {
        self.drive.is_none()
    }

    /// Dense matrix at time `t` (static part plus Delta(t) times the bonds).
    pub fn matrix_at(&self, t: f64, real: Option<&AnisotropyRealization>) -> Result<CMat> {
        match &self.drive {
            None => Ok(self.static_matrix.clone()),
            Some(drive) => {
                let real = real.ok_or_else(|| {
                    DdError::Configuration("anisotropy is configured but no realization was supplied".into())
                })?;
                drive.aniso.check_realization(real)?;
                let delta = drive.aniso.delta(t, real);
                let mut m = self.static_matrix.clone();
                let bonds = matrix_from_terms(self.n_qubits, &drive.bond_terms)?;
                m += bonds.scale(delta);
                Ok(m)
            }
        }
    }

    /// Diagonal of the driven bond operator (before the Delta(t) factor),
    /// conjugated by `g`.  Conjugating ZZ strings by Pauli strings can only
    /// flip signs, so the result stays diagonal.
    pub fn driven_diagonal(&self, g: &PauliString) -> Result<Vec<f64>> {
        let drive = self
            .drive
            .as_ref()
            .ok_or_else(|| DdError::Configuration("system has no driven part".into()))?;
        let d = self.dim;
        let mut diag = vec![0.0f64; d];
        for (c, p) in &drive.bond_terms {
            // Conjugation keeps the ZZ letters and can only flip the sign, and
            // to_matrix includes that sign, so the diagonal entries are ±1.
            let m = p.conjugated_by(g)?.to_matrix()?;
            for b in 0..d {
                diag[b] += c * m[(b, b)].re;
            }
        }
        Ok(diag)
    }
}

fn is_nn_zz(p: &PauliString) -> bool {
    if p.weight() != 2 {
        return false;
    }
    let n = p.n_qubits();
    let mut sites = Vec::with_capacity(2);
    for q in 0..n {
        match p.letter(q) {
            Letter::I => {}
            Letter::Z => sites.push(q),
            _ => return false,
        }
    }
    sites.len() == 2 && sites[1] == sites[0] + 1
}
