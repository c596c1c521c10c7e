//! Registry of the fixed matrices used throughout the crate (entangling
//! gates, group generators, Lie algebra bases) and joint-eigenstate checks of
//! gate rows against commuting Pauli observables.
//!
//! Constants are stored with their global scale factors applied. Sparse
//! matrices are written as 1-based `(row, col, value)` triples so they can be
//! compared with the printed layout at a glance.

use std::sync::LazyLock;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{LinalgError, Matrix};
use crate::qubits::{entanglement_profile, is_b_type, pauli_matrix, EntanglementProfile, Pauli, PureState, QubitError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GateError {
    #[error("unknown constant {name:?}{}", hint.as_deref().map(|h| format!(": {h}")).unwrap_or_default())]
    UnknownConstant { name: String, hint: Option<String> },
    #[error("row {row} is not an eigenvector of observable {observable}")]
    NotEigenvector { row: usize, observable: usize },
    #[error("row {0} does not have unit norm")]
    NotNormalized(usize),
    #[error("observables {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("{0}")]
    Dimension(String),
    #[error(transparent)]
    Qubit(#[from] QubitError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone)]
pub struct NamedConstant {
    pub name: &'static str,
    pub description: &'static str,
    pub matrix: Matrix,
}

fn dense<const C: usize>(scale: Scalar, rows: &[[i64; C]]) -> Matrix {
    Matrix::from_int_rows(rows).scale(&scale).expect("rational scale")
}

fn sparse(n: usize, scale: Scalar, entries: &[(usize, usize, i64)]) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for &(i, j, v) in entries {
        m.set(i - 1, j - 1, Scalar::int(v) * &scale).expect("rational entry");
    }
    m
}

fn diag(values: &[i64]) -> Matrix {
    Matrix::diag(values.iter().map(|&v| Scalar::int(v)).collect()).expect("rational entries")
}

fn half() -> Scalar {
    Scalar::frac(1, 2)
}

fn s2() -> Matrix {
    dense(half(), &[[1, -1, 1, 1], [1, 1, -1, 1], [1, -1, -1, -1], [1, 1, 1, -1]])
}

fn s3() -> Matrix {
    dense(
        half(),
        &[
            [0, 0, 0, 0, 1, 1, 1, -1],
            [1, 1, 1, -1, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, 1, -1, 1],
            [1, -1, 1, 1, 0, 0, 0, 0],
            [1, 1, -1, 1, 0, 0, 0, 0],
            [-1, 1, 1, 1, 0, 0, 0, 0],
            [0, 0, 0, 0, 1, -1, 1, 1],
            [0, 0, 0, 0, -1, 1, 1, 1],
        ],
    )
}

fn x_a4() -> Matrix {
    dense(
        half(),
        &[
            [0, 1, -1, -1, 0, 0, 1, 0],
            [0, 1, 1, -1, 0, 0, -1, 0],
            [0, 1, 1, 1, 0, 0, 1, 0],
            [-1, 0, 0, 0, 1, 1, 0, -1],
            [-1, 0, 0, 0, 1, -1, 0, 1],
            [-1, 0, 0, 0, -1, 1, 0, 1],
            [-1, 0, 0, 0, -1, -1, 0, -1],
            [0, 1, -1, 1, 0, 0, -1, 0],
        ],
    )
}

fn y_a4() -> Matrix {
    dense(
        half(),
        &[
            [0, -1, 1, -1, 0, 0, 1, 0],
            [0, 1, 1, 1, 0, 0, 1, 0],
            [0, 1, 1, -1, 0, 0, -1, 0],
            [-1, 0, 0, 0, 1, 1, 0, -1],
            [-1, 0, 0, 0, 1, -1, 0, 1],
            [-1, 0, 0, 0, -1, 1, 0, 1],
            [-1, 0, 0, 0, -1, -1, 0, -1],
            [0, -1, 1, 1, 0, 0, -1, 0],
        ],
    )
}

/// Element names of an sl(3) Chevalley basis, in registry order.
pub const SL3_NAMES: [&str; 8] = ["x1", "x2", "x3", "y1", "y2", "y3", "h1", "h2"];

fn sl3(name: &str) -> Matrix {
    let one = Scalar::one();
    match name {
        "x1" => sparse(3, one, &[(2, 3, 1)]),
        "x2" => sparse(3, one, &[(1, 2, 1)]),
        "x3" => sparse(3, one, &[(1, 3, 1)]),
        "y1" => sparse(3, one, &[(3, 2, 1)]),
        "y2" => sparse(3, one, &[(2, 1, 1)]),
        "y3" => sparse(3, one, &[(3, 1, 1)]),
        "h1" => diag(&[0, 1, -1]),
        "h2" => diag(&[1, -1, 0]),
        _ => unreachable!("sl3 element {name}"),
    }
}

/// The adjoint matrices of the standard sl(3) basis as printed, including
/// two misplaced entries (in ad x3 and ad y3) that are kept verbatim.
fn sl3_ad_printed(name: &str) -> Matrix {
    let one = Scalar::one();
    match name {
        "x1" => sparse(8, one, &[(1, 7, -2), (1, 8, 1), (3, 2, -1), (5, 6, 1), (7, 4, 1)]),
        "x2" => sparse(8, one, &[(2, 7, 1), (2, 8, -2), (3, 1, 1), (4, 6, -1), (8, 5, 1)]),
        "x3" => sparse(8, one, &[(1, 5, -1), (2, 5, 2), (3, 7, -1), (3, 8, -1), (7, 6, 1), (8, 6, 1)]),
        "y1" => sparse(8, one, &[(2, 3, -1), (4, 7, 2), (4, 8, -1), (6, 5, 1), (7, 1, -1)]),
        "y2" => sparse(8, one, &[(1, 3, 1), (5, 7, -1), (5, 8, 2), (6, 4, -1), (8, 2, -1)]),
        "y3" => sparse(8, one, &[(4, 2, 1), (5, 1, -1), (6, 7, 1), (6, 8, 1), (7, 3, -1), (8, 2, -1)]),
        "h1" => diag(&[2, -1, 1, -2, 1, -1, 0, 0]),
        "h2" => diag(&[-1, 2, 1, 1, -2, -1, 0, 0]),
        _ => unreachable!("sl3 adjoint {name}"),
    }
}

/// The 8×8 Chevalley basis of the derived algebra of the A4 Lie algebra.
fn ga4(name: &str) -> Matrix {
    let one = Scalar::one();
    match name {
        "x1" => sparse(8, one, &[(2, 4, 1), (2, 7, 1), (3, 4, -1), (3, 7, -1)]),
        "x2" => sparse(8, one, &[(1, 2, 1), (1, 3, -1), (8, 2, 1), (8, 3, -1)]),
        "x3" => sparse(8, Scalar::int(2), &[(1, 4, 1), (1, 7, 1), (8, 4, 1), (8, 7, 1)]),
        "y1" => sparse(8, Scalar::frac(1, 4), &[(4, 2, 1), (4, 3, -1), (7, 2, 1), (7, 3, -1)]),
        "y2" => sparse(8, Scalar::frac(1, 4), &[(2, 1, 1), (2, 8, 1), (3, 1, -1), (3, 8, -1)]),
        "y3" => sparse(8, Scalar::frac(1, 8), &[(4, 1, 1), (4, 8, 1), (7, 1, 1), (7, 8, 1)]),
        "h1" => sparse(
            8,
            half(),
            &[(2, 2, 1), (2, 3, -1), (3, 2, -1), (3, 3, 1), (4, 4, -1), (4, 7, -1), (7, 4, -1), (7, 7, -1)],
        ),
        "h2" => sparse(
            8,
            half(),
            &[(1, 1, 1), (1, 8, 1), (2, 2, -1), (2, 3, 1), (3, 2, 1), (3, 3, -1), (8, 1, 1), (8, 8, 1)],
        ),
        _ => unreachable!("ga4 element {name}"),
    }
}

/// The sl(2) summand of the S4 Lie algebra. Entries are in ½ℤ; rows are
/// given as doubled integers.
fn s4sl2(name: &str) -> Matrix {
    let z = [0i64; 8];
    let rows: [[i64; 8]; 8] = match name {
        "e1" => [
            [2, 0, -2, 0, 2, -2, 0, 0],
            [0, -2, 0, 0, -2, 2, 0, 2],
            [-2, 0, 2, 0, -2, 2, 0, 0],
            z,
            [2, -2, -2, 0, 0, 0, 0, 2],
            [-2, 2, 2, 0, 0, 0, 0, -2],
            z,
            [0, 2, 0, 0, 2, -2, 0, -2],
        ],
        "e2" => [
            [0, 2, 0, 0, 2, -2, 0, -2],
            [0, -1, 0, 0, -1, 1, 0, 1],
            [0, -2, 0, 0, -2, 2, 0, 2],
            z,
            [0, 1, 0, 0, 1, -1, 0, -1],
            [0, -1, 0, 0, -1, 1, 0, 1],
            z,
            [0, 1, 0, 0, 1, -1, 0, -1],
        ],
        "e3" => {
            let r = [2, -1, -2, 0, 1, -1, 0, 1];
            let nr = r.map(|x| -x);
            [z, r, z, z, r, nr, z, nr]
        }
        _ => unreachable!("s4sl2 element {name}"),
    };
    dense(half(), &rows)
}

/// Adjoint matrices of su(2) with imaginary entries, listed as z, x, y.
fn appendix_ad(name: &str) -> Matrix {
    let i = Scalar::i();
    let o = Scalar::zero();
    let m = |rows: [[&Scalar; 3]; 3]| {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| x.clone()).collect()).collect()).expect("Q(i) entries")
    };
    let ni = -&i;
    match name {
        "z" => m([[&o, &ni, &o], [&i, &o, &o], [&o, &o, &o]]),
        "x" => m([[&o, &o, &o], [&o, &o, &ni], [&o, &i, &o]]),
        "y" => m([[&o, &o, &i], [&o, &o, &o], [&ni, &o, &o]]),
        _ => unreachable!("appendix adjoint {name}"),
    }
}

static REGISTRY: LazyLock<Vec<NamedConstant>> = LazyLock::new(|| {
    let mut r = vec![
        NamedConstant { name: "s2", description: "two-qubit real entangling gate, entries ±1/2", matrix: s2() },
        NamedConstant { name: "s3", description: "three-qubit real entangling gate, entries 0 and ±1/2", matrix: s3() },
        NamedConstant { name: "x_a4", description: "first orthogonal generator of A4 (8x8)", matrix: x_a4() },
        NamedConstant { name: "y_a4", description: "second orthogonal generator of A4 (8x8)", matrix: y_a4() },
    ];
    let sl3_desc = ["sl3 x1", "sl3 x2", "sl3 x3", "sl3 y1", "sl3 y2", "sl3 y3", "sl3 h1", "sl3 h2"];
    let ad_names = ["sl3.ad.x1", "sl3.ad.x2", "sl3.ad.x3", "sl3.ad.y1", "sl3.ad.y2", "sl3.ad.y3", "sl3.ad.h1", "sl3.ad.h2"];
    let sl3_names = ["sl3.x1", "sl3.x2", "sl3.x3", "sl3.y1", "sl3.y2", "sl3.y3", "sl3.h1", "sl3.h2"];
    let ga4_names = ["ga4.x1", "ga4.x2", "ga4.x3", "ga4.y1", "ga4.y2", "ga4.y3", "ga4.h1", "ga4.h2"];
    for (k, e) in SL3_NAMES.iter().enumerate() {
        r.push(NamedConstant { name: sl3_names[k], description: sl3_desc[k], matrix: sl3(e) });
    }
    for (k, e) in SL3_NAMES.iter().enumerate() {
        r.push(NamedConstant {
            name: ad_names[k],
            description: "printed adjoint matrix of the standard sl3 basis (verbatim)",
            matrix: sl3_ad_printed(e),
        });
    }
    for (k, e) in SL3_NAMES.iter().enumerate() {
        r.push(NamedConstant {
            name: ga4_names[k],
            description: "Chevalley basis element of the derived A4 algebra (8x8)",
            matrix: ga4(e),
        });
    }
    r.push(NamedConstant {
        name: "sl3.ad.h1_prime",
        description: "first element of the diagonal Cartan pair in the adjoint representation",
        matrix: diag(&[1, 0, 1, -1, 0, -1, 0, 0]),
    });
    r.push(NamedConstant {
        name: "sl3.ad.h2_prime",
        description: "second element of the diagonal Cartan pair in the adjoint representation",
        matrix: diag(&[0, 1, 1, 0, -1, -1, 0, 0]),
    });
    r.push(NamedConstant {
        name: "sl3.killing",
        description: "printed sl3 Killing matrix (basis ordering not stated)",
        matrix: sparse(
            8,
            Scalar::int(6),
            &[(1, 1, 2), (1, 5, 1), (2, 4, 1), (3, 7, 1), (4, 2, 1), (5, 1, 1), (5, 5, 2), (6, 8, 1), (7, 3, 1), (8, 6, 1)],
        ),
    });
    for (name, e) in [("s4sl2.e1", "e1"), ("s4sl2.e2", "e2"), ("s4sl2.e3", "e3")] {
        r.push(NamedConstant { name, description: "sl2 summand of the S4 algebra (8x8)", matrix: s4sl2(e) });
    }
    r.push(NamedConstant {
        name: "s4sl2.killing",
        description: "printed Killing matrix of the S4 sl2 triple",
        matrix: dense(Scalar::int(24), &[[4, 1, 1], [1, 0, 2], [1, 2, 0]]),
    });
    for (name, p) in [("pauli.i", Pauli::I), ("pauli.x", Pauli::X), ("pauli.y", Pauli::Y), ("pauli.z", Pauli::Z)] {
        r.push(NamedConstant { name, description: "Pauli matrix", matrix: p.matrix() });
    }
    for (name, e) in [("appendix.ad_pauli.z", "z"), ("appendix.ad_pauli.x", "x"), ("appendix.ad_pauli.y", "y")] {
        r.push(NamedConstant { name, description: "su(2) adjoint matrix with imaginary entries", matrix: appendix_ad(e) });
    }
    r
});

pub fn registry() -> &'static [NamedConstant] {
    &REGISTRY
}

pub fn constant(name: &str) -> Result<&'static Matrix, GateError> {
    if let Some(c) = REGISTRY.iter().find(|c| c.name == name) {
        return Ok(&c.matrix);
    }
    let lower = name.to_ascii_lowercase();
    let hint = if lower == "b" || lower.contains("e7") {
        Some("the W'(E7) generator b is defined only in an external reference and is not registered".to_string())
    } else {
        None
    };
    Err(GateError::UnknownConstant { name: name.to_string(), hint })
}

fn named(prefix: &str, names: &[&str]) -> Vec<(String, Matrix)> {
    names
        .iter()
        .map(|n| (n.to_string(), constant(&format!("{prefix}{n}")).expect("registered").clone()))
        .collect()
}

/// Standard 3×3 sl(3) Chevalley basis, as `(name, matrix)` in the order x1..h2.
pub fn sl3_basis() -> Vec<(String, Matrix)> {
    named("sl3.", &SL3_NAMES)
}

/// Printed adjoint matrices, as `(name, matrix)` in the order x1..h2.
pub fn sl3_ad_printed_basis() -> Vec<(String, Matrix)> {
    named("sl3.ad.", &SL3_NAMES)
}

pub fn ga4_basis() -> Vec<(String, Matrix)> {
    named("ga4.", &SL3_NAMES)
}

pub fn s4sl2_basis() -> Vec<(String, Matrix)> {
    named("s4sl2.", &["e1", "e2", "e3"])
}

/// sl(2) in the Pauli ladder basis {σz, σ₊, σ₋} with σ± = (σx ± iσy)/2.
pub fn pauli_ladder_basis() -> Vec<(String, Matrix)> {
    let x = Pauli::X.matrix();
    let iy = Pauli::Y.matrix().scale(&Scalar::i()).expect("Q(i)");
    let h = half();
    let plus = x.try_add(&iy).and_then(|m| m.scale(&h)).expect("conformable");
    let minus = x.try_sub(&iy).and_then(|m| m.scale(&h)).expect("conformable");
    vec![("sz".into(), Pauli::Z.matrix()), ("s+".into(), plus), ("s-".into(), minus)]
}

/// su(2) spin basis (σx/2, σy/2, σz/2), whose adjoint matrices are the
/// registered `appendix.ad_pauli.{z,x,y}`.
pub fn spin_basis() -> Vec<(String, Matrix)> {
    [("sx", Pauli::X), ("sy", Pauli::Y), ("sz", Pauli::Z)]
        .into_iter()
        .map(|(n, p)| (n.to_string(), p.matrix().scale(&half()).expect("Q(i)")))
        .collect()
}

pub fn appendix_ad_basis() -> Vec<(String, Matrix)> {
    named("appendix.ad_pauli.", &["z", "x", "y"])
}

/// Generators σx⊗S2 and S3 of the derived Weyl group W'(E8).
pub fn we8_generators() -> Vec<Matrix> {
    let g1 = Pauli::X.matrix().kron(constant("s2").expect("registered")).expect("rational");
    vec![g1, constant("s3").expect("registered").clone()]
}

pub fn a4_generators() -> Vec<Matrix> {
    vec![constant("x_a4").expect("registered").clone(), constant("y_a4").expect("registered").clone()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleKind {
    TwoQubit,
    ThreeQubit,
}

impl std::str::FromStr for TripleKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "two_qubit" | "two" | "2" => Ok(TripleKind::TwoQubit),
            "three_qubit" | "three" | "3" => Ok(TripleKind::ThreeQubit),
            _ => Err(format!("unknown triple kind {s:?} (expected two_qubit or three_qubit)")),
        }
    }
}

/// {σx⊗σz, σz⊗σx, σy⊗σy}, or the same with σz⊗ prepended.
pub fn observable_triple(kind: TripleKind) -> [Matrix; 3] {
    let words = match kind {
        TripleKind::TwoQubit => ["XZ", "ZX", "YY"],
        TripleKind::ThreeQubit => ["ZXZ", "ZZX", "ZYY"],
    };
    words.map(|w| pauli_matrix(&w.parse().expect("valid Pauli word")))
}

/// Eigenvalue signs (+1 or −1) of each gate row under each observable.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignPattern {
    pub rows: Vec<[i8; 3]>,
}

impl SignPattern {
    pub fn render(&self) -> String {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect::<String>())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// The sign table printed next to S2.
pub fn s2_printed_signs() -> SignPattern {
    SignPattern { rows: vec![[1, -1, -1], [-1, 1, -1], [-1, -1, 1], [1, 1, 1]] }
}

/// Verifies that every row of `gate` is a joint ±1 eigenvector of the triple
/// and records the signs. Row and observable indices in errors are 0-based.
pub fn joint_eigensign_check(gate: &Matrix, triple: &[Matrix; 3]) -> Result<SignPattern, GateError> {
    for (a, o) in triple.iter().enumerate() {
        if o.rows() != gate.cols() || !o.is_square() {
            return Err(GateError::Dimension(format!(
                "observable {a} is {}x{}, gate rows have length {}",
                o.rows(),
                o.cols(),
                gate.cols()
            )));
        }
        for (b, p) in triple.iter().enumerate().skip(a + 1) {
            if !o.commutator(p)?.is_zero() {
                return Err(GateError::NotCommuting(a, b));
            }
        }
    }
    let mut rows = Vec::with_capacity(gate.rows());
    for r in 0..gate.rows() {
        let v = gate.row(r);
        let norm = v.iter().fold(Scalar::zero(), |acc, x| acc + x.abs_squared());
        if !norm.is_one() {
            return Err(GateError::NotNormalized(r));
        }
        let mut signs = [0i8; 3];
        for (k, o) in triple.iter().enumerate() {
            let w = o.mul_vec(v)?;
            signs[k] = if w == v {
                1
            } else if w.iter().zip(v).all(|(a, b)| *a == -b) {
                -1
            } else {
                return Err(GateError::NotEigenvector { row: r, observable: k });
            };
        }
        rows.push(signs);
    }
    Ok(SignPattern { rows })
}

/// Row `i` (0-based) of a gate as a pure state.
pub fn row_state(gate: &Matrix, i: usize) -> Result<PureState, GateError> {
    if i >= gate.rows() {
        return Err(GateError::Dimension(format!("row {i} of a {}-row matrix", gate.rows())));
    }
    PureState::exact(gate.row(i).to_vec()).map_err(|e| match e {
        QubitError::NotNormalized(_) => GateError::NotNormalized(i),
        e => GateError::Qubit(e),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowProfile {
    pub row: usize,
    pub profile: EntanglementProfile,
    pub b_type: bool,
}

/// Entanglement profile of every row of an 8-column gate.
pub fn gate_entanglement_report(gate: &Matrix) -> Result<Vec<RowProfile>, GateError> {
    if gate.cols() != 8 {
        return Err(GateError::Dimension(format!("gate has {} columns, expected 8", gate.cols())));
    }
    (0..gate.rows())
        .map(|r| {
            let profile = entanglement_profile(&row_state(gate, r)?)?;
            let b_type = is_b_type(&profile);
            Ok(RowProfile { row: r, profile, b_type })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubits::Value;

    #[test]
    fn constants_lookup() {
        assert_eq!(constant("s2").unwrap().get(0, 1), &Scalar::frac(-1, 2));
        assert_eq!(constant("sl3.h1").unwrap(), &diag(&[0, 1, -1]));
        assert_eq!(constant("x_a4").unwrap().rows(), 8);
        match constant("we7.b") {
            Err(GateError::UnknownConstant { hint: Some(h), .. }) => assert!(h.contains("not registered")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(constant("nope"), Err(GateError::UnknownConstant { hint: None, .. })));
    }

    #[test]
    fn registry_names_unique_and_round_trip() {
        let mut names: Vec<_> = registry().iter().map(|c| c.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), registry().len());
        for c in registry() {
            let json = serde_json::to_string(&c.matrix).unwrap();
            assert_eq!(serde_json::from_str::<Matrix>(&json).unwrap(), c.matrix, "{}", c.name);
        }
    }

    #[test]
    fn orthogonality() {
        for name in ["s2", "s3", "x_a4", "y_a4"] {
            let g = constant(name).unwrap();
            assert!(g.transpose().matmul(g).unwrap().is_identity(), "{name}");
            assert!(g.matmul(&g.transpose()).unwrap().is_identity(), "{name}");
        }
        assert_eq!(&constant("s2").unwrap().inverse().unwrap(), &constant("s2").unwrap().transpose());
    }

    #[test]
    fn triples() {
        for kind in [TripleKind::TwoQubit, TripleKind::ThreeQubit] {
            let t = observable_triple(kind);
            for o in &t {
                assert!(o.matmul(o).unwrap().is_identity());
                assert!(o.is_symmetric());
                assert_eq!(o.field(), crate::Field::Rational);
            }
        }
        let [a, b, c] = observable_triple(TripleKind::TwoQubit);
        assert!(a.matmul(&b).unwrap().matmul(&c).unwrap().is_identity());
        let z = Pauli::Z.matrix();
        let three = observable_triple(TripleKind::ThreeQubit);
        for (o3, o2) in three.iter().zip(observable_triple(TripleKind::TwoQubit).iter()) {
            assert_eq!(o3, &z.kron(o2).unwrap());
        }
    }

    #[test]
    fn eigensigns() {
        let s2 = constant("s2").unwrap();
        let p = joint_eigensign_check(s2, &observable_triple(TripleKind::TwoQubit)).unwrap();
        assert_eq!(p, s2_printed_signs());
        assert_eq!(p.rows[0], [1, -1, -1]);
        let p3 = joint_eigensign_check(constant("s3").unwrap(), &observable_triple(TripleKind::ThreeQubit)).unwrap();
        assert_eq!(p3.rows.len(), 8);
        let err = joint_eigensign_check(&Matrix::identity(4), &observable_triple(TripleKind::TwoQubit));
        assert_eq!(err, Err(GateError::NotEigenvector { row: 0, observable: 0 }));
    }

    #[test]
    fn row_states() {
        let s = row_state(constant("s2").unwrap(), 0).unwrap();
        let expected = PureState::from_terms(half(), &[(1, "00"), (-1, "01"), (1, "10"), (1, "11")]).unwrap();
        assert_eq!(s, expected);
        let x = row_state(constant("x_a4").unwrap(), 0).unwrap();
        let expected = PureState::from_terms(half(), &[(1, "001"), (-1, "010"), (-1, "011"), (1, "110")]).unwrap();
        assert_eq!(x, expected);
        assert_eq!(row_state(&Matrix::from_int_rows(&[[1, 1], [0, 1]]), 0), Err(GateError::NotNormalized(0)));
    }

    #[test]
    fn a4_row_profiles() {
        // Row 1 of x_a4 groups by qubit C as (-|0>+|1>)|1> and |0>(|0>-|1>),
        // so rho_AB is a mixture of two product states and tau_AB = 0.
        let profiles = |g: &Matrix| {
            let mut v: Vec<String> = gate_entanglement_report(g)
                .unwrap()
                .iter()
                .map(|r| {
                    let p = &r.profile;
                    format!("{} {} {} {}", p.three_tangle, p.tau_ab, p.tau_ac, p.tau_bc)
                })
                .collect();
            v.sort();
            v
        };
        let px = profiles(constant("x_a4").unwrap());
        assert_eq!(px, profiles(constant("y_a4").unwrap()));
        let row0 = &gate_entanglement_report(constant("x_a4").unwrap()).unwrap()[0];
        assert_eq!(row0.profile.three_tangle, Value::Exact(Scalar::frac(1, 4)));
        assert_eq!(row0.profile.tau_ab, Value::Exact(Scalar::zero()));
        assert_eq!(row0.profile.tau_bc, Value::Exact(Scalar::frac(1, 4)));
        assert!(!row0.b_type);
        let s3 = gate_entanglement_report(constant("s3").unwrap()).unwrap();
        assert!(!s3.iter().all(|r| r.b_type));
        assert_eq!(s3[0].profile.three_tangle, Value::Exact(Scalar::zero()));
    }

    #[test]
    fn printed_adjoint_has_integer_entries() {
        for (_, m) in sl3_ad_printed_basis() {
            assert_eq!((m.rows(), m.cols()), (8, 8));
        }
        let lad = pauli_ladder_basis();
        assert_eq!(lad[1].1, Matrix::from_int_rows(&[[0, 1], [0, 0]]));
        assert_eq!(lad[2].1, Matrix::from_int_rows(&[[0, 0], [1, 0]]));
    }
}
