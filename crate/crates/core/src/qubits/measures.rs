use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::{pauli_matrix, reduce, Amplitudes, DensityMatrix, PureState, QubitError};
use crate::linalg::{eigen_quadratic, Matrix};
use num_traits::Signed;

use crate::scalar::{Field, Rational, Scalar};

/// Float moduli below this are treated as zero.
const MODULUS_GUARD: f64 = 1e-12;
/// Eigenvalues of ρ below −this signal an invalid density matrix.
const NEGATIVE_TOLERANCE: f64 = 1e-9;
/// Tolerance for [`is_b_type`] on float profiles.
pub const B_TYPE_TOLERANCE: f64 = 1e-9;

/// A measure value: exact when every step stayed inside ℚ or ℚ(√d).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Value {
    Exact(Scalar),
    Approx(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(x) => x.to_f64().unwrap_or_else(|| x.to_complex64().re),
            Value::Approx(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&Scalar> {
        match self {
            Value::Exact(x) => Some(x),
            Value::Approx(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Value::Exact(_))
    }

    fn combine(&self, other: &Value, exact: impl Fn(&Scalar, &Scalar) -> Option<Scalar>, float: impl Fn(f64, f64) -> f64) -> Value {
        if let (Value::Exact(a), Value::Exact(b)) = (self, other) {
            if let Some(c) = exact(a, b) {
                return Value::Exact(c);
            }
        }
        Value::Approx(float(self.to_f64(), other.to_f64()))
    }
}

impl Add for &Value {
    type Output = Value;
    fn add(self, rhs: &Value) -> Value {
        self.combine(rhs, |a, b| a.try_add(b).ok(), |a, b| a + b)
    }
}

impl Sub for &Value {
    type Output = Value;
    fn sub(self, rhs: &Value) -> Value {
        self.combine(rhs, |a, b| a.try_sub(b).ok(), |a, b| a - b)
    }
}

impl Mul for &Value {
    type Output = Value;
    fn mul(self, rhs: &Value) -> Value {
        self.combine(rhs, |a, b| a.try_mul(b).ok(), |a, b| a * b)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(x) => write!(f, "{x}"),
            Value::Approx(v) => write!(f, "~{v:.12}"),
        }
    }
}

fn require_qubits(s: &PureState, n: usize) -> Result<(), QubitError> {
    if s.qubits() != n {
        return Err(QubitError::WrongQubitCount { expected: n, got: s.qubits() });
    }
    Ok(())
}

fn require_dim(rho: &DensityMatrix, d: usize) -> Result<(), QubitError> {
    if rho.dim() != d {
        return Err(QubitError::WrongDimension { expected: d, got: rho.dim() });
    }
    Ok(())
}

/// |z| exactly when representable, else as a float.
fn modulus(z: &Scalar) -> Result<Value, QubitError> {
    if z.is_real() {
        return Ok(Value::Exact(z.abs()?));
    }
    let sq = z.abs_squared();
    let exact = match sq.as_rational() {
        Some(r) => Scalar::sqrt_rational(r),
        None => sq.sqrt_in_field()?,
    };
    Ok(match exact {
        Some(r) => Value::Exact(r),
        None => Value::Approx(sq.to_f64().expect("|z|^2 is real").sqrt()),
    })
}

fn float_modulus(z: Complex64) -> f64 {
    let m = z.norm();
    if m < MODULUS_GUARD {
        0.0
    } else {
        m
    }
}

/// C = 2|αδ − βγ| for a two-qubit pure state.
pub fn concurrence_pure2(s: &PureState) -> Result<Value, QubitError> {
    require_qubits(s, 2)?;
    match s.amplitudes() {
        Amplitudes::Exact(a) => {
            let z = a[0].try_mul(&a[3])?.try_sub(&a[1].try_mul(&a[2])?)?;
            Ok(&Value::Exact(Scalar::int(2)) * &modulus(&z)?)
        }
        Amplitudes::Float(a) => Ok(Value::Approx(2.0 * float_modulus(a[0] * a[3] - a[1] * a[2]))),
    }
}

fn yy() -> Matrix {
    pauli_matrix(&"YY".parse().expect("valid Pauli string"))
}

/// ρ̃ = (σy⊗σy) ρ* (σy⊗σy).
pub fn spin_flip(rho: &DensityMatrix) -> Result<DensityMatrix, QubitError> {
    require_dim(rho, 4)?;
    let f = yy();
    Ok(match rho {
        DensityMatrix::Exact(m) => DensityMatrix::Exact(f.matmul(&m.complex_conj())?.matmul(&f)?),
        DensityMatrix::Float(m) => {
            let fc = DMatrix::from_fn(4, 4, |i, j| f.get(i, j).to_complex64());
            DensityMatrix::Float(&fc * m.conjugate() * &fc)
        }
    })
}

/// Exact real eigenvalues of ρρ̃ (with multiplicity, decreasing), when the
/// spectrum is exactly computable and real.
fn exact_flip_spectrum(m: &Matrix) -> Result<Option<Vec<Scalar>>, QubitError> {
    let rho_tilde = spin_flip(&DensityMatrix::Exact(m.clone()))?;
    let prod = m.matmul(rho_tilde.as_exact().expect("exact"))?;
    let Some(mut vals) = eigen_quadratic(&prod)?.exact_multiset() else {
        return Ok(None);
    };
    for v in &vals {
        match v.signum() {
            Ok(Ordering::Less) => return Err(QubitError::NegativeEigenvalue(v.to_string())),
            Ok(_) => {}
            Err(_) => return Ok(None),
        }
    }
    vals.sort_by(|a, b| b.to_f64().unwrap_or(0.0).total_cmp(&a.to_f64().unwrap_or(0.0)));
    Ok(Some(vals))
}

/// √λ₁ − √λ₂ − √λ₃ − √λ₄ clamped at 0, when every root and the sum stay
/// inside a single field.
fn exact_wootters(vals: &[Scalar]) -> Option<Scalar> {
    let d = vals.iter().find_map(|v| match v.field() {
        Field::Quadratic(d) => Some(d),
        Field::Rational => None,
    });
    let mut roots = Vec::with_capacity(vals.len());
    for v in vals {
        let r = match d {
            Some(d) => v.sqrt_in_extension(d).ok()??,
            None => v.sqrt_in_field().ok()??,
        };
        roots.push(r);
    }
    let mut c = roots[0].clone();
    for r in &roots[1..] {
        c = c.try_sub(r).ok()?;
    }
    Some(if c.signum().ok()? == Ordering::Less { Scalar::zero() } else { c })
}

/// Float Wootters concurrence. The √λᵢ are the singular values of
/// √ρ·√ρ̃ = √ρ·F·(√ρ)*·F with F = σy⊗σy; F is unitary, so the singular values
/// of √ρ·F·(√ρ)* are used directly, which avoids square roots of tiny
/// eigenvalues.
fn float_concurrence(rho: &DMatrix<Complex64>) -> Result<f64, QubitError> {
    let e = SymmetricEigen::new(rho.clone());
    if let Some(&l) = e.eigenvalues.iter().find(|&&l| l < -NEGATIVE_TOLERANCE) {
        return Err(QubitError::NegativeEigenvalue(format!("{l:e}")));
    }
    let sq = DMatrix::from_diagonal(&e.eigenvalues.map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0)));
    let sqrt_rho = &e.eigenvectors * sq * e.eigenvectors.adjoint();
    let f = yy();
    let fc = DMatrix::from_fn(4, 4, |i, j| f.get(i, j).to_complex64());
    let mut s: Vec<f64> = (&sqrt_rho * fc * sqrt_rho.conjugate()).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// Wootters concurrence max{0, √λ₁ − √λ₂ − √λ₃ − √λ₄}, λ the eigenvalues of ρρ̃.
pub fn concurrence_mixed2(rho: &DensityMatrix) -> Result<Value, QubitError> {
    require_dim(rho, 4)?;
    if let DensityMatrix::Exact(m) = rho {
        if let Some(vals) = exact_flip_spectrum(m)? {
            if let Some(c) = exact_wootters(&vals) {
                return Ok(Value::Exact(c));
            }
            if let Some(t) = rank_two_tangle(&vals) {
                if let Ok(Some(c)) = t.sqrt_in_field() {
                    return Ok(Value::Exact(c));
                }
            }
        }
    }
    Ok(Value::Approx(float_concurrence(&rho.to_complex())?))
}

/// (√λ₁ − √λ₂)² = λ₁ + λ₂ − 2√(λ₁λ₂) when at most two eigenvalues are nonzero;
/// the product often has an exact root even when the λᵢ do not.
fn rank_two_tangle(vals: &[Scalar]) -> Option<Scalar> {
    let nz: Vec<&Scalar> = vals.iter().filter(|v| !v.is_zero()).collect();
    match nz.len() {
        0 => Some(Scalar::zero()),
        1 => Some(nz[0].clone()),
        2 => {
            let root = nz[0].try_mul(nz[1]).ok()?.sqrt_in_field().ok()??;
            let two = Scalar::int(2);
            nz[0].try_add(nz[1]).ok()?.try_sub(&root.try_mul(&two).ok()?).ok()
        }
        _ => None,
    }
}

/// Shortcut for the common rank-two case (every two-qubit marginal of a
/// three-qubit pure state): charpoly(ρρ̃) = t²(t² − pt + q) gives
/// τ = p − 2√q without finding the roots.
fn rank_two_charpoly_tangle(m: &Matrix) -> Result<Option<Scalar>, QubitError> {
    let rho_tilde = spin_flip(&DensityMatrix::Exact(m.clone()))?;
    let cp = m.matmul(rho_tilde.as_exact().expect("exact"))?.charpoly()?;
    let c = cp.coeffs();
    if !(c[0].is_zero() && c[1].is_zero()) {
        return Ok(None);
    }
    let (p, q) = (-&c[3], c[2].clone());
    let (Some(pr), Some(qr)) = (p.as_rational(), q.as_rational()) else { return Ok(None) };
    let disc = pr * pr - qr * Rational::from_integer(4.into());
    if pr.is_negative() || qr.is_negative() || disc.is_negative() {
        return Ok(None);
    }
    let Some(root) = crate::scalar::rational_sqrt(qr) else { return Ok(None) };
    Ok(Some(Scalar::from_rational(pr - root * Rational::from_integer(2.into()))))
}

/// Two-tangle τ = C².
pub fn tangle(rho: &DensityMatrix) -> Result<Value, QubitError> {
    require_dim(rho, 4)?;
    if let DensityMatrix::Exact(m) = rho {
        if let Some(t) = rank_two_charpoly_tangle(m)? {
            return Ok(Value::Exact(t));
        }
        if let Some(vals) = exact_flip_spectrum(m)? {
            if let Some(c) = exact_wootters(&vals) {
                return Ok(Value::Exact(&c * &c));
            }
            if let Some(t) = rank_two_tangle(&vals) {
                return Ok(Value::Exact(t));
            }
        }
    }
    let c = float_concurrence(&rho.to_complex())?;
    Ok(Value::Approx(c * c))
}

/// d₁ − 2d₂ + 4d₃ over the amplitudes ψ_{ijk}.
fn hyperdet<T>(p: &[T]) -> T
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let m = |a: usize, b: usize| p[a].clone() * p[b].clone();
    let sq = |a: usize| p[a].clone() * p[a].clone();
    let d1 = sq(0b000) * sq(0b111) + sq(0b001) * sq(0b110) + sq(0b010) * sq(0b101) + sq(0b100) * sq(0b011);
    let (a, b, c, e) = (m(0b000, 0b111), m(0b011, 0b100), m(0b101, 0b010), m(0b110, 0b001));
    let d2 = a * (b.clone() + c.clone() + e.clone()) + b * (c.clone() + e.clone()) + c * e;
    let d3 = m(0b000, 0b110) * m(0b101, 0b011) + m(0b111, 0b001) * m(0b010, 0b100);
    let two = |x: T| x.clone() + x;
    d1 - two(d2) + two(two(d3))
}

/// τ⁽³⁾ = 4|d₁ − 2d₂ + 4d₃|.
pub fn three_tangle(s: &PureState) -> Result<Value, QubitError> {
    require_qubits(s, 3)?;
    match s.amplitudes() {
        Amplitudes::Exact(a) => Ok(&Value::Exact(Scalar::int(4)) * &modulus(&hyperdet(a))?),
        Amplitudes::Float(a) => Ok(Value::Approx(4.0 * float_modulus(hyperdet(a)))),
    }
}

/// τ_{X(rest)} = 4·det ρ_X for `party` ∈ {0, 1, 2}.
pub fn one_tangle(s: &PureState, party: usize) -> Result<Value, QubitError> {
    require_qubits(s, 3)?;
    match reduce(s, &[party])? {
        DensityMatrix::Exact(m) => {
            let det = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
            Ok(Value::Exact(det * Scalar::int(4)))
        }
        DensityMatrix::Float(m) => {
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            Ok(Value::Approx(4.0 * det.re))
        }
    }
}

/// All tangles of a three-qubit pure state together with the monogamy
/// residuals τ_{X(YZ)} − (τ⁽³⁾ + τ_XY + τ_XZ) for X = A, B, C.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntanglementProfile {
    pub three_tangle: Value,
    pub tau_ab: Value,
    pub tau_ac: Value,
    pub tau_bc: Value,
    pub tau_a_bc: Value,
    pub tau_b_ac: Value,
    pub tau_c_ab: Value,
    pub residuals: [Value; 3],
}

pub fn entanglement_profile(s: &PureState) -> Result<EntanglementProfile, QubitError> {
    require_qubits(s, 3)?;
    let t3 = three_tangle(s)?;
    let tau_ab = tangle(&reduce(s, &[0, 1])?)?;
    let tau_ac = tangle(&reduce(s, &[0, 2])?)?;
    let tau_bc = tangle(&reduce(s, &[1, 2])?)?;
    let ones = [one_tangle(s, 0)?, one_tangle(s, 1)?, one_tangle(s, 2)?];
    let residual = |one: &Value, x: &Value, y: &Value| one - &(&(&t3 + x) + y);
    let residuals = [
        residual(&ones[0], &tau_ab, &tau_ac),
        residual(&ones[1], &tau_ab, &tau_bc),
        residual(&ones[2], &tau_ac, &tau_bc),
    ];
    let [tau_a_bc, tau_b_ac, tau_c_ab] = ones;
    Ok(EntanglementProfile { three_tangle: t3, tau_ab, tau_ac, tau_bc, tau_a_bc, tau_b_ac, tau_c_ab, residuals })
}

/// Balanced entanglement: τ⁽³⁾ = τ_AB = τ_AC = τ_BC > 0.
pub fn is_b_type(p: &EntanglementProfile) -> bool {
    let four = [&p.three_tangle, &p.tau_ab, &p.tau_ac, &p.tau_bc];
    if let [Some(a), Some(b), Some(c), Some(d)] = four.map(Value::exact) {
        return a == b && a == c && a == d && a.signum().is_ok_and(|o| o == Ordering::Greater);
    }
    let v = four.map(Value::to_f64);
    v[0] > B_TYPE_TOLERANCE && v.iter().all(|x| (x - v[0]).abs() <= B_TYPE_TOLERANCE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubits::PureState;

    fn ex(v: Value) -> Scalar {
        v.exact().cloned().unwrap_or_else(|| panic!("inexact value {v}"))
    }

    #[test]
    fn pure_concurrence_examples() {
        let h = Scalar::sqrt_int(2) / Scalar::int(2);
        let bell = PureState::from_terms(h, &[(1, "00"), (1, "11")]).unwrap();
        assert_eq!(ex(concurrence_pure2(&bell).unwrap()), Scalar::one());
        assert_eq!(ex(concurrence_pure2(&PureState::basis("01").unwrap()).unwrap()), Scalar::zero());
        let s = PureState::from_terms(Scalar::frac(1, 2), &[(1, "00"), (1, "01"), (1, "10"), (-1, "11")]).unwrap();
        assert_eq!(ex(concurrence_pure2(&s).unwrap()), Scalar::one());
        assert!(matches!(concurrence_pure2(&PureState::ghz()), Err(QubitError::WrongQubitCount { .. })));
        let c = PureState::exact(vec![Scalar::frac(1, 2), Scalar::i() / Scalar::int(2), Scalar::frac(1, 2), Scalar::frac(1, 2)])
            .unwrap();
        // 2|1/4 − i/4| = √2/2
        assert_eq!(ex(concurrence_pure2(&c).unwrap()), Scalar::sqrt_int(2) / Scalar::int(2));
    }

    #[test]
    fn spin_flip_examples() {
        let max_mixed = DensityMatrix::Exact(Matrix::identity(4).scale(&Scalar::frac(1, 4)).unwrap());
        assert_eq!(spin_flip(&max_mixed).unwrap(), max_mixed);
        let p00 = DensityMatrix::projector(&PureState::basis("00").unwrap());
        assert_eq!(spin_flip(&p00).unwrap(), DensityMatrix::projector(&PureState::basis("11").unwrap()));
        let one = DensityMatrix::projector(&PureState::basis("0").unwrap());
        assert!(matches!(spin_flip(&one), Err(QubitError::WrongDimension { expected: 4, got: 2 })));
    }

    #[test]
    fn mixed_concurrence_examples() {
        let b = PureState::b_state();
        let rho_ab = reduce(&b, &[0, 1]).unwrap();
        assert_eq!(ex(concurrence_mixed2(&rho_ab).unwrap()), Scalar::frac(1, 2));
        let max_mixed = DensityMatrix::Exact(Matrix::identity(4).scale(&Scalar::frac(1, 4)).unwrap());
        assert_eq!(ex(concurrence_mixed2(&max_mixed).unwrap()), Scalar::zero());
        let h = Scalar::sqrt_int(2) / Scalar::int(2);
        let bell = PureState::from_terms(h, &[(1, "00"), (1, "11")]).unwrap();
        assert_eq!(ex(concurrence_mixed2(&DensityMatrix::projector(&bell)).unwrap()), Scalar::one());
        let fl = concurrence_mixed2(&DensityMatrix::projector(&bell.to_float())).unwrap();
        assert!((fl.to_f64() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn three_tangle_examples() {
        assert_eq!(ex(three_tangle(&PureState::ghz()).unwrap()), Scalar::one());
        assert_eq!(ex(three_tangle(&PureState::w()).unwrap()), Scalar::zero());
        assert_eq!(ex(three_tangle(&PureState::b_state()).unwrap()), Scalar::frac(1, 4));
        assert_eq!(ex(three_tangle(&PureState::basis("000").unwrap()).unwrap()), Scalar::zero());
        let fl = three_tangle(&PureState::b_state().to_float()).unwrap();
        assert!((fl.to_f64() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn one_tangle_examples() {
        assert_eq!(ex(one_tangle(&PureState::b_state(), 0).unwrap()), Scalar::frac(3, 4));
        assert_eq!(ex(one_tangle(&PureState::ghz(), 0).unwrap()), Scalar::one());
        for q in 0..3 {
            assert_eq!(ex(one_tangle(&PureState::basis("000").unwrap(), q).unwrap()), Scalar::zero());
        }
    }

    #[test]
    fn profiles() {
        let w = entanglement_profile(&PureState::w()).unwrap();
        assert_eq!(ex(w.three_tangle.clone()), Scalar::zero());
        for t in [&w.tau_ab, &w.tau_ac, &w.tau_bc] {
            assert_eq!(ex(t.clone()), Scalar::frac(4, 9));
        }
        for t in [&w.tau_a_bc, &w.tau_b_ac, &w.tau_c_ab] {
            assert_eq!(ex(t.clone()), Scalar::frac(8, 9));
        }
        assert!(w.residuals.iter().all(|r| r.exact().is_some_and(Scalar::is_zero)));
        assert!(!is_b_type(&w));
        let g = entanglement_profile(&PureState::ghz()).unwrap();
        assert!(!is_b_type(&g));
        let b = entanglement_profile(&PureState::b_state()).unwrap();
        assert!(is_b_type(&b));
        let bf = entanglement_profile(&PureState::b_state().to_float()).unwrap();
        assert!(is_b_type(&bf));
    }

    #[test]
    fn random_rational_states_stay_exact() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let s = crate::qubits::random_rational_state(3, &mut rng);
            let p = entanglement_profile(&s).unwrap();
            assert!(p.residuals.iter().all(|r| r.exact().is_some_and(Scalar::is_zero)), "{p:?}");
        }
    }
}

#[cfg(test)]
mod proptests {
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::qubits::random_rational_state;

    fn state(n: usize) -> impl Strategy<Value = PureState> {
        any::<u64>().prop_map(move |seed| random_rational_state(n, &mut ChaCha8Rng::seed_from_u64(seed)))
    }

    fn same(a: &Value, b: &Value) -> bool {
        match (a, b) {
            (Value::Exact(x), Value::Exact(y)) => x == y,
            _ => (a.to_f64() - b.to_f64()).abs() < 1e-9,
        }
    }

    fn unitary(t: [f64; 4]) -> DMatrix<Complex64> {
        let (c, s) = (t[0].cos(), t[0].sin());
        let e = |x: f64| Complex64::from_polar(1.0, x);
        DMatrix::from_row_slice(2, 2, &[e(t[1]) * c, -e(-t[2]) * s, e(t[2]) * s, e(-t[1]) * c]) * e(t[3])
    }

    fn apply_local(s: &PureState, us: &[DMatrix<Complex64>]) -> PureState {
        let op = us[1..].iter().fold(us[0].clone(), |acc, u| acc.kronecker(u));
        let v = DMatrix::from_column_slice(1 << s.qubits(), 1, &s.complex_amps());
        PureState::float((op * v).iter().copied().collect()).unwrap()
    }

    /// Z on qubit `q`.
    fn phase_flip(s: &PureState, q: usize) -> PureState {
        let n = s.qubits();
        let a = s.exact_amps().unwrap();
        let amps = a.iter().enumerate().map(|(k, x)| if (k >> (n - 1 - q)) & 1 == 1 { -x } else { x.clone() }).collect();
        PureState::exact(amps).unwrap()
    }

    fn angles() -> impl Strategy<Value = [f64; 4]> {
        prop::array::uniform4(-3.2f64..3.2)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn three_tangle_permutation_invariant(s in state(3), perm in Just(vec![0usize, 1, 2]).prop_shuffle()) {
            let t = three_tangle(&s).unwrap();
            prop_assert_eq!(three_tangle(&s.permute_qubits(&perm).unwrap()).unwrap(), t);
        }

        #[test]
        fn sign_flips_leave_measures_alone(s3 in state(3), s2 in state(2), q in 0usize..2) {
            let t = three_tangle(&s3).unwrap();
            prop_assert_eq!(three_tangle(&phase_flip(&s3, q)).unwrap(), t.clone());
            let neg = PureState::exact(s3.exact_amps().unwrap().iter().map(|x| -x).collect()).unwrap();
            prop_assert_eq!(three_tangle(&neg).unwrap(), t);
            let c = concurrence_pure2(&s2).unwrap();
            prop_assert_eq!(concurrence_pure2(&phase_flip(&s2, q)).unwrap(), c);
        }

        #[test]
        fn local_unitaries_leave_measures_alone(s3 in state(3), s2 in state(2), a in angles(), b in angles(), c in angles()) {
            let us = [unitary(a), unitary(b), unitary(c)];
            let t = three_tangle(&s3).unwrap().to_f64();
            prop_assert!((three_tangle(&apply_local(&s3, &us)).unwrap().to_f64() - t).abs() < 1e-9);
            let conc = concurrence_pure2(&s2).unwrap().to_f64();
            prop_assert!((concurrence_pure2(&apply_local(&s2, &us[..2])).unwrap().to_f64() - conc).abs() < 1e-9);
        }

        #[test]
        fn monogamy_is_saturated(s in state(3)) {
            let p = entanglement_profile(&s).unwrap();
            for r in &p.residuals {
                match r {
                    Value::Exact(x) => prop_assert!(x.is_zero(), "residual {}", x),
                    Value::Approx(v) => prop_assert!(v.abs() < 1e-9, "residual {}", v),
                }
            }
        }

        #[test]
        fn mixed_concurrence_of_a_projector(s in state(2)) {
            let pure = concurrence_pure2(&s).unwrap();
            let mixed = concurrence_mixed2(&DensityMatrix::projector(&s)).unwrap();
            prop_assert!(same(&pure, &mixed), "{} vs {}", pure, mixed);
        }

        #[test]
        fn reductions_are_density_matrices(s in state(3), keep in prop::sample::subsequence(vec![0usize, 1, 2], 1..=2)) {
            let m = reduce(&s, &keep).unwrap();
            let m = m.as_exact().unwrap();
            prop_assert!(m.trace().unwrap().is_one());
            prop_assert!(m.is_hermitian());
        }
    }
}
