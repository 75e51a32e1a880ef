//! Exact projective Pauli-group arithmetic.
//!
//! A [`PauliString`] is a phase `i^k` (k = 0..3) times one letter of
//! {I, X, Y, Z} per qubit.  Letters are encoded in two bitmasks (an X mask and
//! a Z mask, Y = both bits set) and the phase as an exponent mod 4, so the
//! whole group algebra is exact integer arithmetic — no floating point drift.
//!
//! Phase convention: XY = iZ, YZ = iX, ZX = iY.
//!
//! Qubits are indexed from 0 in the API; the text grammar (`"+1 Z3Z4Y5Y6"`)
//! uses 1-based site numbers.  In dense matrices qubit 0 is the leftmost
//! tensor factor (most significant bit of the basis index).

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{DdError, Result};
use crate::linalg::CMat;

/// Hard cap on the register size of a dense matrix realization (4096-dim).
pub const MAX_DENSE_QUBITS: usize = 12;

/// Hard cap on the register size of a `PauliString` (one u64 per mask).
pub const MAX_QUBITS: usize = 64;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn code(self) -> u8 {
        // (z << 1) | x
        match self {
            Letter::I => 0b00,
            Letter::X => 0b01,
            Letter::Z => 0b10,
            Letter::Y => 0b11,
        }
    }

    fn from_code(code: u8) -> Self {
        match code {
            0b00 => Letter::I,
            0b01 => Letter::X,
            0b10 => Letter::Z,
            0b11 => Letter::Y,
            _ => unreachable!(),
        }
    }

    fn symbol(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

/// Quarter phase i^k attached to a Pauli string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_pow(pow: u8) -> Self {
        match pow % 4 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn pow(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn factor(self) -> C64 {
        match self {
            Phase::PlusOne => C64::new(1.0, 0.0),
            Phase::PlusI => C64::new(0.0, 1.0),
            Phase::MinusOne => C64::new(-1.0, 0.0),
            Phase::MinusI => C64::new(0.0, -1.0),
        }
    }

    fn label(self) -> &'static str {
        match self {
            Phase::PlusOne => "+1",
            Phase::PlusI => "+i",
            Phase::MinusOne => "-1",
            Phase::MinusI => "-i",
        }
    }
}

/// Phase exponent of the single-site product L(a) * L(b) = i^k L(a^b),
/// indexed by letter codes (z<<1|x).  Cyclic products (XY, YZ, ZX) pick up
/// +i, anti-cyclic ones -i.
const MUL_PHASE: [[u8; 4]; 4] = [
    // rhs:  I  X  Z  Y
    /* I */ [0, 0, 0, 0],
    /* X */ [0, 0, 3, 1],
    /* Z */ [0, 1, 0, 3],
    /* Y */ [0, 3, 1, 0],
];

/// A phased tensor product of single-qubit Pauli letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
    phase_pow: u8,
}

impl PauliString {
    /// The identity string (all letters I, phase +1).
    pub fn identity(n_qubits: usize) -> Self {
        assert!(n_qubits >= 1 && n_qubits <= MAX_QUBITS, "unsupported qubit count {n_qubits}");
        PauliString { n_qubits, x: 0, z: 0, phase_pow: 0 }
    }

    /// A single non-identity letter on `qubit` (0-based), identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, letter: Letter) -> Result<Self> {
        let mut p = PauliString::identity(n_qubits);
        p.set_letter(qubit, letter)?;
        Ok(p)
    }

    /// Build from (qubit, letter) pairs, 0-based qubits.
    pub fn from_letters(n_qubits: usize, letters: &[(usize, Letter)]) -> Result<Self> {
        let mut p = PauliString::identity(n_qubits);
        for &(q, l) in letters {
            if p.letter(q) != Letter::I && l != Letter::I {
                return Err(DdError::Parse(format!("duplicate letter on qubit {q}")));
            }
            p.set_letter(q, l)?;
        }
        Ok(p)
    }

    fn set_letter(&mut self, qubit: usize, letter: Letter) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(DdError::Domain(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        let code = letter.code();
        self.x = (self.x & !(1 << qubit)) | (((code & 1) as u64) << qubit);
        self.z = (self.z & !(1 << qubit)) | ((((code >> 1) & 1) as u64) << qubit);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn phase(&self) -> Phase {
        Phase::from_pow(self.phase_pow)
    }

    pub fn with_phase(&self, phase: Phase) -> Self {
        PauliString { phase_pow: phase.pow(), ..*self }
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        debug_assert!(qubit < self.n_qubits);
        let code = (((self.z >> qubit) & 1) << 1) | ((self.x >> qubit) & 1);
        Letter::from_code(code as u8)
    }

    /// Letters-only key, ignoring the phase.  Useful for projective matching.
    pub fn letter_key(&self) -> (u64, u64) {
        (self.x, self.z)
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    /// True if every letter is I (the phase may be anything).
    pub fn is_identity_letters(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// True if this is exactly the identity operator (+1 phase included).
    pub fn is_identity(&self) -> bool {
        self.is_identity_letters() && self.phase_pow == 0
    }

    fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(DdError::DimensionMismatch { left: self.n_qubits, right: other.n_qubits });
        }
        Ok(())
    }

    /// Exact product with tracked phase.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_size(other)?;
        let mut pow = (self.phase_pow + other.phase_pow) as u32;
        let mut overlap = (self.x | self.z) & (other.x | other.z);
        while overlap != 0 {
            let q = overlap.trailing_zeros() as usize;
            overlap &= overlap - 1;
            let la = (((self.z >> q) & 1) << 1) | ((self.x >> q) & 1);
            let lb = (((other.z >> q) & 1) << 1) | ((other.x >> q) & 1);
            pow += MUL_PHASE[la as usize][lb as usize] as u32;
        }
        Ok(PauliString {
            n_qubits: self.n_qubits,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase_pow: (pow % 4) as u8,
        })
    }

    /// Hermitian adjoint.  Letters are Hermitian, so only the phase conjugates.
    pub fn dagger(&self) -> Self {
        PauliString { phase_pow: (4 - self.phase_pow) % 4, ..*self }
    }

    /// True if the two strings commute as operators (phases are irrelevant).
    pub fn commutes_with(&self, other: &Self) -> bool {
        let anti = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        anti % 2 == 0
    }

    /// g† * self * g, with the phase of `g` dropped (conjugation is projective).
    /// The letters are unchanged; only the sign can flip.
    pub fn conjugated_by(&self, g: &Self) -> Result<Self> {
        self.check_same_size(g)?;
        let anti = (g.x & self.z).count_ones() + (g.z & self.x).count_ones();
        let flip = ((anti % 2) * 2) as u8;
        Ok(PauliString { phase_pow: (self.phase_pow + flip) % 4, ..*self })
    }

    // --- dense realizations ------------------------------------------------

    fn check_dense(&self) -> Result<usize> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(DdError::ResourceLimit(format!(
                "dense matrices are limited to {MAX_DENSE_QUBITS} qubits, got {}",
                self.n_qubits
            )));
        }
        Ok(1 << self.n_qubits)
    }

    /// X/Z masks rebased to basis-index bit positions (qubit 0 = MSB).
    fn index_masks(&self) -> (u64, u64) {
        let n = self.n_qubits;
        let mut xi = 0u64;
        let mut zi = 0u64;
        for q in 0..n {
            let b = n - 1 - q;
            xi |= ((self.x >> q) & 1) << b;
            zi |= ((self.z >> q) & 1) << b;
        }
        (xi, zi)
    }

    /// Column phases: P|b> = factor(b) |b ^ x_idx>.
    fn column_factors(&self) -> Result<(u64, Vec<C64>)> {
        let d = self.check_dense()?;
        let (xi, zi) = self.index_masks();
        let y_count = (self.x & self.z).count_ones() as u8;
        let base = (self.phase_pow + y_count) % 4;
        let quarter = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)];
        let factors = (0..d as u64)
            .map(|b| {
                let sign = ((zi & b).count_ones() % 2) as u8;
                quarter[((base + 2 * sign) % 4) as usize]
            })
            .collect();
        Ok((xi, factors))
    }

    /// Dense matrix including the phase (Kronecker-structured, exact entries).
    pub fn to_matrix(&self) -> Result<CMat> {
        let d = self.check_dense()?;
        let (xi, factors) = self.column_factors()?;
        let mut m = CMat::zeros(d, d);
        for c in 0..d {
            m[((c as u64 ^ xi) as usize, c)] = factors[c];
        }
        Ok(m)
    }

    /// m <- P * m, applied in place as a signed row permutation, O(d^2).
    pub fn apply_left(&self, m: &mut CMat) -> Result<()> {
        let d = self.check_dense()?;
        if m.nrows() != d || m.ncols() != d {
            return Err(DdError::DimensionMismatch { left: d, right: m.nrows() });
        }
        let (xi, factors) = self.column_factors()?;
        // (P m)[r, c] = factor(r ^ xi) * m[r ^ xi, c]
        let xi = xi as usize;
        let data = m.as_mut_slice();
        for col in data.chunks_exact_mut(d) {
            if xi == 0 {
                for (r, v) in col.iter_mut().enumerate() {
                    *v *= factors[r];
                }
            } else {
                for r in 0..d {
                    let s = r ^ xi;
                    if r < s {
                        let a = col[r];
                        let b = col[s];
                        col[r] = factors[s] * b;
                        col[s] = factors[r] * a;
                    }
                }
            }
        }
        Ok(())
    }

    /// m <- m * P, applied in place as a signed column permutation, O(d^2).
    pub fn apply_right(&self, m: &mut CMat) -> Result<()> {
        let d = self.check_dense()?;
        if m.nrows() != d || m.ncols() != d {
            return Err(DdError::DimensionMismatch { left: d, right: m.nrows() });
        }
        let (xi, factors) = self.column_factors()?;
        let xi = xi as usize;
        if xi == 0 {
            let data = m.as_mut_slice();
            for (c, col) in data.chunks_exact_mut(d).enumerate() {
                let f = factors[c];
                for v in col.iter_mut() {
                    *v *= f;
                }
            }
            return Ok(());
        }
        // (m P)[r, c] = m[r, c ^ xi] * factor(c)
        for c in 0..d {
            let s = c ^ xi;
            if c < s {
                for r in 0..d {
                    let a = m[(r, c)];
                    let b = m[(r, s)];
                    m[(r, c)] = b * factors[c];
                    m[(r, s)] = a * factors[s];
                }
            }
        }
        Ok(())
    }

    /// out = g† * m * g for this string g, via two signed permutations.
    pub fn sandwich(&self, m: &CMat) -> Result<CMat> {
        let mut out = m.clone();
        self.dagger().apply_left(&mut out)?;
        self.apply_right(&mut out)?;
        Ok(out)
    }

    // --- text grammar ------------------------------------------------------

    /// Parse the text grammar, e.g. `"+1 Z3Z4Y5Y6X7X8"` or `"-i X1"` or
    /// `"+1 I"`.  Site numbers are 1-based; identity sites are omitted.
    pub fn parse(text: &str, n_qubits: usize) -> Result<Self> {
        let trimmed = text.trim();
        let (phase_tok, rest) = trimmed
            .split_once(char::is_whitespace)
            .ok_or_else(|| DdError::Parse(format!("expected '<phase> <letters>', got {trimmed:?}")))?;
        let phase = match phase_tok {
            "+1" => Phase::PlusOne,
            "+i" => Phase::PlusI,
            "-1" => Phase::MinusOne,
            "-i" => Phase::MinusI,
            other => return Err(DdError::Parse(format!("unknown phase token {other:?}"))),
        };
        let body: String = rest.split_whitespace().collect();
        let mut p = PauliString::identity(n_qubits).with_phase(phase);
        if body == "I" {
            return Ok(p);
        }
        let mut chars = body.chars().peekable();
        while let Some(c) = chars.next() {
            let letter = match c {
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                other => return Err(DdError::Parse(format!("unexpected character {other:?} in {body:?}"))),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek() {
                if d.is_ascii_digit() {
                    digits.push(*d);
                    chars.next();
                } else {
                    break;
                }
            }
            let site: usize = digits
                .parse()
                .map_err(|_| DdError::Parse(format!("missing site index after {c:?} in {body:?}")))?;
            if site == 0 || site > n_qubits {
                return Err(DdError::Parse(format!("site {site} out of range 1..={n_qubits}")));
            }
            let q = site - 1;
            if p.letter(q) != Letter::I {
                return Err(DdError::Parse(format!("duplicate site {site} in {body:?}")));
            }
            p.set_letter(q, letter)?;
        }
        Ok(p)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ", self.phase().label())?;
        if self.is_identity_letters() {
            return write!(f, "I");
        }
        for q in 0..self.n_qubits {
            let l = self.letter(q);
            if l != Letter::I {
                write!(f, "{}{}", l.symbol(), q + 1)?;
            }
        }
        Ok(())
    }
}

/// g† * term * g, term-by-term Pauli conjugation (sign flips only).
pub fn conjugate_term(g: &PauliString, term: &PauliString) -> Result<PauliString> {
    term.conjugated_by(g)
}
