//! n-qubit pure states, density matrices, Pauli observables and the
//! standard entanglement measures for two and three qubits.
//!
//! Basis order: in `|q₁q₂…qₙ⟩` the leftmost qubit is the most significant bit
//! of the amplitude index. For three qubits, qubit 0 is party A, 1 is B and
//! 2 is C.

mod measures;

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{FieldJson, LinalgError, Matrix};
use crate::scalar::{Field, Rational, Scalar, ScalarError};

pub use measures::{
    concurrence_mixed2, concurrence_pure2, entanglement_profile, is_b_type, one_tangle, spin_flip, tangle,
    three_tangle, EntanglementProfile, Value,
};

/// Tolerance on Σ|ψᵢ|² − 1 for float states.
pub const FLOAT_NORM_TOLERANCE: f64 = 1e-12;

pub const MAX_QUBITS: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QubitError {
    #[error("expected {expected} qubits, got {got}")]
    WrongQubitCount { expected: usize, got: usize },
    #[error("expected a {expected}x{expected} density matrix, got dimension {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("state is not normalized (sum of |amp|^2 = {0})")]
    NotNormalized(String),
    #[error("phase {0} lies outside [0, pi]")]
    PhaseOutOfRange(f64),
    #[error("empty qubit subset")]
    EmptySubset,
    #[error("invalid qubit subset: {0}")]
    BadSubset(String),
    #[error("negative eigenvalue {0} (not a valid density matrix)")]
    NegativeEigenvalue(String),
    #[error("invalid state: {0}")]
    Invalid(String),
    #[error("invalid Pauli letter {0:?}")]
    InvalidPauli(char),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> Matrix {
        match self {
            Pauli::I => Matrix::identity(2),
            Pauli::X => Matrix::from_int_rows(&[[0, 1], [1, 0]]),
            Pauli::Z => Matrix::from_int_rows(&[[1, 0], [0, -1]]),
            Pauli::Y => Matrix::from_rows(vec![vec![Scalar::zero(), -Scalar::i()], vec![Scalar::i(), Scalar::zero()]])
                .expect("2x2 over Q(i)"),
        }
    }
}

/// A tensor product of Pauli letters, e.g. `XZ` for σx⊗σz.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self, QubitError> {
        if letters.is_empty() {
            return Err(QubitError::Invalid("empty Pauli string".into()));
        }
        Ok(PauliString(letters))
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }
}

impl FromStr for PauliString {
    type Err = QubitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(QubitError::InvalidPauli(c)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        PauliString::new(letters)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{p:?}")?;
        }
        Ok(())
    }
}

/// Kronecker product of the letters, leftmost letter on the most significant qubit.
pub fn pauli_matrix(p: &PauliString) -> Matrix {
    let mut it = p.0.iter();
    let first = it.next().expect("nonempty").matrix();
    // Y only ever combines with rational letters or other Y's, so no field clash
    it.fold(first, |acc, l| acc.kron(&l.matrix()).expect("Pauli fields agree"))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Amplitudes {
    Exact(Vec<Scalar>),
    Float(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Amplitudes,
}

fn qubit_count(len: usize) -> Result<usize, QubitError> {
    if !len.is_power_of_two() || len < 2 {
        return Err(QubitError::Invalid(format!("{len} amplitudes is not 2^n for n >= 1")));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(QubitError::Invalid(format!("{n} qubits exceeds the supported {MAX_QUBITS}")));
    }
    Ok(n)
}

impl PureState {
    /// Exact state; the norm must be exactly 1.
    pub fn exact(amps: Vec<Scalar>) -> Result<Self, QubitError> {
        let n = qubit_count(amps.len())?;
        let mut f = Field::Rational;
        for a in &amps {
            f = f.join(a.field())?;
        }
        let norm = amps.iter().fold(Scalar::zero(), |acc, a| acc + a.abs_squared());
        if !norm.is_one() {
            return Err(QubitError::NotNormalized(norm.to_string()));
        }
        Ok(PureState { n, amps: Amplitudes::Exact(amps) })
    }

    pub fn float(amps: Vec<Complex64>) -> Result<Self, QubitError> {
        let n = qubit_count(amps.len())?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > FLOAT_NORM_TOLERANCE {
            return Err(QubitError::NotNormalized(norm.to_string()));
        }
        Ok(PureState { n, amps: Amplitudes::Float(amps) })
    }

    /// Equal-weight superposition of basis states given as bit strings,
    /// with signs; e.g. `[(1, "000"), (1, "111")]` for GHZ. Norm must come out
    /// as 1 in the field of `coefficient`.
    pub fn from_terms(coefficient: Scalar, terms: &[(i64, &str)]) -> Result<Self, QubitError> {
        let n = terms.first().map(|t| t.1.len()).ok_or(QubitError::Invalid("no terms".into()))?;
        let mut amps = vec![Scalar::zero(); 1 << n];
        for &(sign, bits) in terms {
            if bits.len() != n {
                return Err(QubitError::Invalid(format!("basis label {bits:?} has the wrong length")));
            }
            let idx = usize::from_str_radix(bits, 2).map_err(|_| QubitError::Invalid(format!("bad basis label {bits:?}")))?;
            amps[idx] = &amps[idx] + &(&coefficient * &Scalar::int(sign));
        }
        Self::exact(amps)
    }

    pub fn ghz() -> Self {
        Self::from_terms(Scalar::sqrt_int(2) / Scalar::int(2), &[(1, "000"), (1, "111")]).expect("normalized")
    }

    pub fn w() -> Self {
        Self::from_terms(Scalar::sqrt_int(3) / Scalar::int(3), &[(1, "001"), (1, "010"), (1, "100")]).expect("normalized")
    }

    /// The balanced state (|000⟩ + |101⟩ + |110⟩ + |111⟩)/2.
    pub fn b_state() -> Self {
        Self::from_terms(Scalar::frac(1, 2), &[(1, "000"), (1, "101"), (1, "110"), (1, "111")]).expect("normalized")
    }

    /// Computational basis state from a bit string such as `"010"`.
    pub fn basis(bits: &str) -> Result<Self, QubitError> {
        Self::from_terms(Scalar::one(), &[(1, bits)])
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &Amplitudes {
        &self.amps
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.amps, Amplitudes::Exact(_))
    }

    pub fn exact_amps(&self) -> Option<&[Scalar]> {
        match &self.amps {
            Amplitudes::Exact(a) => Some(a),
            Amplitudes::Float(_) => None,
        }
    }

    pub fn complex_amps(&self) -> Vec<Complex64> {
        match &self.amps {
            Amplitudes::Exact(a) => a.iter().map(Scalar::to_complex64).collect(),
            Amplitudes::Float(a) => a.clone(),
        }
    }

    pub fn to_float(&self) -> PureState {
        PureState { n: self.n, amps: Amplitudes::Float(self.complex_amps()) }
    }

    /// Relabels qubits: qubit `i` of the result is qubit `perm[i]` of `self`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self, QubitError> {
        let n = self.n;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(QubitError::BadSubset(format!("{perm:?} is not a permutation of {n} qubits")));
        }
        let map = |new_idx: usize| -> usize {
            let mut old = 0;
            for (i, &p) in perm.iter().enumerate() {
                let bit = (new_idx >> (n - 1 - i)) & 1;
                old |= bit << (n - 1 - p);
            }
            old
        };
        let amps = match &self.amps {
            Amplitudes::Exact(a) => Amplitudes::Exact((0..a.len()).map(|k| a[map(k)].clone()).collect()),
            Amplitudes::Float(a) => Amplitudes::Float((0..a.len()).map(|k| a[map(k)]).collect()),
        };
        Ok(PureState { n, amps })
    }

    pub fn to_json(&self) -> Option<StateJson> {
        let a = self.exact_amps()?;
        let field = a.iter().fold(Field::Rational, |f, x| f.join(x.field()).expect("state field"));
        Some(StateJson { qubits: self.n, field: field.into(), amps: a.iter().map(ToString::to_string).collect() })
    }
}

/// Phase of the λ₁ term of [`generic_state`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    Zero,
    Pi,
    Radians(f64),
}

/// λ₀|000⟩ + λ₁e^{iφ}|100⟩ + λ₂|101⟩ + λ₃|110⟩ + λ₄|111⟩.
///
/// Exact unless φ is a radian value other than 0 or π, in which case the
/// state is built in floating point.
pub fn generic_state(lambdas: [Scalar; 5], phase: Phase) -> Result<PureState, QubitError> {
    for l in &lambdas {
        if l.signum()? == std::cmp::Ordering::Less {
            return Err(QubitError::Invalid(format!("coefficient {l} is negative")));
        }
    }
    let norm = lambdas.iter().fold(Scalar::zero(), |acc, l| acc + l * l);
    if !norm.is_one() {
        return Err(QubitError::NotNormalized(norm.to_string()));
    }
    let sign = match phase {
        Phase::Zero => Some(Scalar::one()),
        Phase::Pi => Some(Scalar::int(-1)),
        Phase::Radians(x) if !(0.0..=std::f64::consts::PI).contains(&x) => return Err(QubitError::PhaseOutOfRange(x)),
        Phase::Radians(x) if x == 0.0 => Some(Scalar::one()),
        Phase::Radians(x) if x == std::f64::consts::PI => Some(Scalar::int(-1)),
        Phase::Radians(_) => None,
    };
    let slots = [0b000, 0b100, 0b101, 0b110, 0b111];
    match sign {
        Some(s) => {
            let mut amps = vec![Scalar::zero(); 8];
            for (k, l) in lambdas.iter().enumerate() {
                amps[slots[k]] = if k == 1 { l * &s } else { l.clone() };
            }
            PureState::exact(amps)
        }
        None => {
            let Phase::Radians(phi) = phase else { unreachable!() };
            let mut amps = vec![Complex64::new(0.0, 0.0); 8];
            for (k, l) in lambdas.iter().enumerate() {
                let v = l.to_f64().ok_or_else(|| QubitError::Invalid(format!("{l} is not real")))?;
                amps[slots[k]] = if k == 1 { Complex64::from_polar(v, phi) } else { Complex64::new(v, 0.0) };
            }
            PureState::float(amps)
        }
    }
}

/// Random exact state with rational amplitudes, uniform-ish on the unit
/// sphere: inverse stereographic projection of a random rational point.
pub fn random_rational_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PureState {
    let dim = 1usize << n;
    let y: Vec<Rational> = (0..dim - 1)
        .map(|_| Rational::new(BigInt::from(rng.gen_range(-12i64..=12)), BigInt::from(rng.gen_range(1i64..=6))))
        .collect();
    let s: Rational = y.iter().map(|v| v * v).sum();
    let one = Rational::from_integer(BigInt::from(1));
    let denom = &s + &one;
    let mut amps: Vec<Scalar> = y.iter().map(|v| Scalar::from_rational(v * Rational::from_integer(BigInt::from(2)) / &denom)).collect();
    amps.push(Scalar::from_rational((&s - &one) / &denom));
    PureState::exact(amps).expect("stereographic points lie on the sphere")
}

/// Density operator on 2ᵏ-dimensional space, exact or float.
#[derive(Debug, Clone, PartialEq)]
pub enum DensityMatrix {
    Exact(Matrix),
    Float(DMatrix<Complex64>),
}

impl DensityMatrix {
    /// Checks Hermiticity and unit trace (positivity is checked on demand).
    pub fn exact(m: Matrix) -> Result<Self, QubitError> {
        if !m.is_square() || !m.rows().is_power_of_two() {
            return Err(QubitError::Invalid(format!("{}x{} is not a 2^k square", m.rows(), m.cols())));
        }
        if !m.is_hermitian() {
            return Err(QubitError::Invalid("matrix is not Hermitian".into()));
        }
        let t = m.trace()?;
        if !t.is_one() {
            return Err(QubitError::Invalid(format!("trace is {t}, not 1")));
        }
        Ok(DensityMatrix::Exact(m))
    }

    pub fn projector(s: &PureState) -> Self {
        match &s.amps {
            Amplitudes::Exact(a) => {
                let col = Matrix::column(a.clone()).expect("state field");
                DensityMatrix::Exact(col.matmul(&col.adjoint()).expect("conformable"))
            }
            Amplitudes::Float(a) => {
                let v = DMatrix::from_column_slice(a.len(), 1, a);
                DensityMatrix::Float(&v * v.adjoint())
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            DensityMatrix::Exact(m) => m.rows(),
            DensityMatrix::Float(m) => m.nrows(),
        }
    }

    pub fn as_exact(&self) -> Option<&Matrix> {
        match self {
            DensityMatrix::Exact(m) => Some(m),
            DensityMatrix::Float(_) => None,
        }
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        match self {
            DensityMatrix::Exact(m) => {
                DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).to_complex64())
            }
            DensityMatrix::Float(m) => m.clone(),
        }
    }

    /// Positive semidefiniteness: exact through the spectrum when it is
    /// exactly computable, otherwise numerically with tolerance 1e−9.
    pub fn is_positive_semidefinite(&self) -> Result<bool, QubitError> {
        if let DensityMatrix::Exact(m) = self {
            if let Some(vals) = crate::linalg::eigen_quadratic(m)?.exact_multiset() {
                let mut ok = true;
                for v in vals {
                    match v.signum() {
                        Ok(o) => ok &= o != std::cmp::Ordering::Less,
                        Err(_) => return Ok(self.float_psd()),
                    }
                }
                return Ok(ok);
            }
        }
        Ok(self.float_psd())
    }

    fn float_psd(&self) -> bool {
        let e = nalgebra::SymmetricEigen::new(self.to_complex());
        e.eigenvalues.iter().all(|&l| l >= -1e-9)
    }
}

fn check_subset(n: usize, keep: &[usize]) -> Result<(), QubitError> {
    if keep.is_empty() {
        return Err(QubitError::EmptySubset);
    }
    let mut seen = vec![false; n];
    for &q in keep {
        if q >= n || std::mem::replace(&mut seen[q], true) {
            return Err(QubitError::BadSubset(format!("{keep:?} for {n} qubits")));
        }
    }
    Ok(())
}

/// Partial trace over the qubits not in `keep`. The kept qubits appear in the
/// order given, so `reduce(s, &[1, 2])` is ρ_BC with B most significant.
pub fn reduce(s: &PureState, keep: &[usize]) -> Result<DensityMatrix, QubitError> {
    let n = s.n;
    check_subset(n, keep)?;
    let env: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let k = keep.len();
    let index = |ki: usize, ei: usize| -> usize {
        let mut idx = 0;
        for (pos, &q) in keep.iter().enumerate() {
            idx |= ((ki >> (k - 1 - pos)) & 1) << (n - 1 - q);
        }
        for (pos, &q) in env.iter().enumerate() {
            idx |= ((ei >> (env.len() - 1 - pos)) & 1) << (n - 1 - q);
        }
        idx
    };
    let (dk, de) = (1usize << k, 1usize << env.len());
    match &s.amps {
        Amplitudes::Exact(a) => {
            let mut entries = Vec::with_capacity(dk * dk);
            for i in 0..dk {
                for j in 0..dk {
                    let mut acc = Scalar::zero();
                    for e in 0..de {
                        let (x, y) = (&a[index(i, e)], &a[index(j, e)]);
                        if !x.is_zero() && !y.is_zero() {
                            acc = acc + x * &y.complex_conj();
                        }
                    }
                    entries.push(acc);
                }
            }
            Ok(DensityMatrix::Exact(Matrix::new(dk, dk, entries)?))
        }
        Amplitudes::Float(a) => Ok(DensityMatrix::Float(DMatrix::from_fn(dk, dk, |i, j| {
            (0..de).map(|e| a[index(i, e)] * a[index(j, e)].conj()).sum()
        }))),
    }
}

/// Wire form of an exact state: `{"qubits": n, "field": …, "amps": […]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateJson {
    pub qubits: usize,
    pub field: FieldJson,
    pub amps: Vec<String>,
}

impl TryFrom<StateJson> for PureState {
    type Error = QubitError;

    fn try_from(j: StateJson) -> Result<Self, Self::Error> {
        let field = j.field.to_field()?;
        if j.amps.len() != 1usize.checked_shl(j.qubits as u32).unwrap_or(0) {
            return Err(QubitError::Invalid(format!("{} amplitudes for {} qubits", j.amps.len(), j.qubits)));
        }
        let amps = j
            .amps
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let x: Scalar = s.parse().map_err(|e| QubitError::Invalid(format!("amps[{i}]: {e}")))?;
                if field.join(x.field())? != field {
                    return Err(QubitError::Invalid(format!("amps[{i}] = {s} lies outside {field}")));
                }
                Ok(x)
            })
            .collect::<Result<Vec<_>, QubitError>>()?;
        PureState::exact(amps)
    }
}
