//! Matrix Lie algebras over ℚ or ℚ(√d): bracket closure, structure
//! constants, Killing forms, centers, derived algebras and root data.

mod chevalley;
mod roots;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{LinalgError, Matrix};
use crate::scalar::Scalar;

pub use chevalley::{
    commutes_with, signed_permutation_match, verify_chevalley_table, ChevalleyReport, CommuteReport, PairCheck,
    SignedPermutation, SL3_TABLE,
};
pub use roots::{roots_relative, Root, RootDatum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("a basis needs at least one element")]
    Empty,
    #[error("{0}")]
    DimensionMismatch(String),
    #[error("basis elements are linearly dependent")]
    Dependent,
    #[error("closure passed the maximum dimension {0}")]
    MaxDimExceeded(usize),
    #[error("bracket of elements {0} and {1} leaves the span")]
    NotClosed(usize, usize),
    #[error("element {0} does not normalize the algebra")]
    NotNormalizing(usize),
    #[error("Cartan elements {0} and {1} do not commute")]
    NotCommuting(usize, usize),
    #[error("not diagonalizable over the working field: {0}")]
    NotDiagonalizable(String),
    #[error("Killing matrix is not real symmetric")]
    NotRealSymmetric,
    #[error("missing basis element {0:?}")]
    MissingName(String),
    #[error("{0}")]
    Json(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Linearly independent square matrices of one size, with element names.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraBasis {
    size: usize,
    elements: Vec<Matrix>,
    names: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct NamedMatrix {
    name: String,
    matrix: Matrix,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BasisJson {
    Named(Vec<NamedMatrix>),
    Plain(Vec<Matrix>),
}

fn flatten(m: &Matrix) -> Vec<Scalar> {
    m.entries().to_vec()
}

/// Reduced row echelon form of `rows`, dropping zero rows.
fn echelon_rows(rows: Vec<Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    if rows.is_empty() {
        return rows;
    }
    let m = Matrix::from_rows(rows).expect("rows of equal length");
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

fn rank_of(rows: Vec<Vec<Scalar>>) -> usize {
    if rows.is_empty() {
        0
    } else {
        Matrix::from_rows(rows).expect("rows of equal length").rank()
    }
}

/// Incremental echelon basis used by the closure loop.
struct Echelon {
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn new() -> Self {
        Echelon { rows: Vec::new(), pivots: Vec::new() }
    }

    /// Inserts `v` if it is independent of the rows so far.
    fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x = &*x - &(&f * r);
                    }
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[p].inv().expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }
}

/// Solves for coordinates in a fixed basis via an invertible square minor.
pub(crate) struct Coordinates {
    flat: Vec<Vec<Scalar>>,
    pivot_rows: Vec<usize>,
    inv: Option<Matrix>,
}

impl Coordinates {
    pub(crate) fn new(elements: &[Matrix]) -> Self {
        let flat: Vec<Vec<Scalar>> = elements.iter().map(flatten).collect();
        if flat.is_empty() {
            return Coordinates { flat, pivot_rows: Vec::new(), inv: None };
        }
        let (_, pivot_rows) = Matrix::from_rows(flat.clone()).expect("equal sizes").rref();
        let d = flat.len();
        let minor: Vec<Vec<Scalar>> =
            pivot_rows.iter().map(|&r| (0..d).map(|k| flat[k][r].clone()).collect()).collect();
        let inv = Matrix::from_rows(minor).expect("square minor").inverse().expect("independent basis");
        Coordinates { flat, pivot_rows, inv: Some(inv) }
    }

    pub(crate) fn of(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        let v = flatten(m);
        let Some(inv) = &self.inv else {
            return v.iter().all(Scalar::is_zero).then(Vec::new);
        };
        let rhs: Vec<Scalar> = self.pivot_rows.iter().map(|&r| v[r].clone()).collect();
        let c = inv.mul_vec(&rhs).ok()?;
        for (pos, x) in v.iter().enumerate() {
            let recon = self
                .flat
                .iter()
                .zip(&c)
                .filter(|(f, ck)| !f[pos].is_zero() && !ck.is_zero())
                .fold(Scalar::zero(), |acc, (f, ck)| acc + &f[pos] * ck);
            if &recon != x {
                return None;
            }
        }
        Some(c)
    }
}

impl LieAlgebraBasis {
    /// Checks equal square sizes and linear independence; closure under the
    /// bracket is checked by [`structure_constants`].
    pub fn new(elements: Vec<Matrix>) -> Result<Self, LieError> {
        let names = (1..=elements.len()).map(|k| format!("b{k}")).collect();
        Self::named(elements, names)
    }

    pub fn named(elements: Vec<Matrix>, names: Vec<String>) -> Result<Self, LieError> {
        let size = elements.first().ok_or(LieError::Empty)?.rows();
        if names.len() != elements.len() {
            return Err(LieError::DimensionMismatch(format!("{} names for {} elements", names.len(), elements.len())));
        }
        for m in &elements {
            if m.rows() != size || m.cols() != size {
                return Err(LieError::DimensionMismatch(format!(
                    "{}x{} element in a basis of {size}x{size} matrices",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if rank_of(elements.iter().map(flatten).collect()) != elements.len() {
            return Err(LieError::Dependent);
        }
        Ok(LieAlgebraBasis { size, elements, names })
    }

    pub fn from_pairs(pairs: Vec<(String, Matrix)>) -> Result<Self, LieError> {
        let (names, elements) = pairs.into_iter().unzip();
        Self::named(elements, names)
    }

    /// The zero algebra of `size`×`size` matrices.
    pub fn zero(size: usize) -> Self {
        LieAlgebraBasis { size, elements: Vec::new(), names: Vec::new() }
    }

    fn from_rows(size: usize, rows: Vec<Vec<Scalar>>, prefix: &str) -> Self {
        let elements: Vec<Matrix> =
            rows.into_iter().map(|r| Matrix::new(size, size, r).expect("square reshape")).collect();
        let names = (1..=elements.len()).map(|k| format!("{prefix}{k}")).collect();
        LieAlgebraBasis { size, elements, names }
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    /// Side length of the matrices.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, name: &str) -> Option<&Matrix> {
        self.names.iter().position(|n| n == name).map(|i| &self.elements[i])
    }

    /// Coordinates of `m` in this basis, or `None` outside the span.
    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        if m.rows() != self.size || m.cols() != self.size {
            return None;
        }
        Coordinates::new(&self.elements).of(m)
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.coordinates(m).is_some()
    }

    /// Σ cᵢ bᵢ.
    pub fn combine(&self, coeffs: &[Scalar]) -> Matrix {
        self.elements.iter().zip(coeffs).fold(Matrix::zeros(self.size, self.size), |acc, (b, c)| {
            if c.is_zero() {
                acc
            } else {
                acc.try_add(&b.scale(c).expect("field join")).expect("same size")
            }
        })
    }

    /// Reads either a plain JSON array of matrices or an array of
    /// `{"name", "matrix"}` objects.
    pub fn from_json(s: &str) -> Result<Self, LieError> {
        match serde_json::from_str::<BasisJson>(s).map_err(|e| LieError::Json(e.to_string()))? {
            BasisJson::Plain(ms) => Self::new(ms),
            BasisJson::Named(ns) => Self::from_pairs(ns.into_iter().map(|n| (n.name, n.matrix)).collect()),
        }
    }

    pub fn to_json(&self) -> String {
        let named: Vec<NamedMatrix> = self
            .names
            .iter()
            .zip(&self.elements)
            .map(|(name, matrix)| NamedMatrix { name: name.clone(), matrix: matrix.clone() })
            .collect();
        serde_json::to_string_pretty(&named).expect("matrices serialize")
    }
}

/// Smallest bracket-closed span containing `gens`, returned as the reduced
/// echelon basis of the flattened matrices.
pub fn lie_closure(gens: &[Matrix], maxdim: usize) -> Result<LieAlgebraBasis, LieError> {
    let size = gens.first().ok_or(LieError::Empty)?.rows();
    if let Some(m) = gens.iter().find(|m| m.rows() != size || m.cols() != size) {
        return Err(LieError::DimensionMismatch(format!("{}x{} generator, expected {size}x{size}", m.rows(), m.cols())));
    }
    let mut ech = Echelon::new();
    let mut elems: Vec<Matrix> = Vec::new();
    for g in gens {
        if ech.insert(flatten(g)) {
            elems.push(g.clone());
        }
    }
    let mut done = 0;
    loop {
        if elems.len() > maxdim {
            return Err(LieError::MaxDimExceeded(maxdim));
        }
        let len = elems.len();
        for i in done..len {
            for j in 0..i {
                let c = elems[i].commutator(&elems[j])?;
                if ech.insert(flatten(&c)) {
                    elems.push(c);
                    if elems.len() > maxdim {
                        return Err(LieError::MaxDimExceeded(maxdim));
                    }
                }
            }
        }
        if elems.len() == len {
            break;
        }
        done = len;
    }
    Ok(LieAlgebraBasis::from_rows(size, echelon_rows(ech.rows), "b"))
}

/// `c[i][j][k]` with `[bᵢ, bⱼ] = Σₖ c[i][j][k] bₖ`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    c: Vec<Vec<Vec<Scalar>>>,
}

impl StructureConstants {
    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.c[i][j][k]
    }

    pub fn bracket_coords(&self, i: usize, j: usize) -> &[Scalar] {
        &self.c[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().flatten().flatten().all(Scalar::is_zero)
    }

    /// Whether Σₘ (c_ij^m c_mk^l + c_jk^m c_mi^l + c_ki^m c_mj^l) vanishes for
    /// every i, j, k, l.
    pub fn jacobi_holds(&self) -> bool {
        let d = self.dim();
        let term = |a: usize, b: usize, e: usize, l: usize| {
            (0..d)
                .filter(|&m| !self.c[a][b][m].is_zero() && !self.c[m][e][l].is_zero())
                .fold(Scalar::zero(), |acc, m| acc + &self.c[a][b][m] * &self.c[m][e][l])
        };
        (0..d).all(|i| {
            (i + 1..d).all(|j| {
                (j + 1..d).all(|k| {
                    (0..d).all(|l| (term(i, j, k, l) + term(j, k, i, l) + term(k, i, j, l)).is_zero())
                })
            })
        })
    }

    /// Killing form by the contraction B_ij = Σ c_im^n c_jn^m.
    pub fn killing_contraction(&self) -> Matrix {
        let d = self.dim();
        let mut out = Matrix::zeros(d.max(1), d.max(1));
        for i in 0..d {
            for j in i..d {
                let mut acc = Scalar::zero();
                for m in 0..d {
                    for n in 0..d {
                        let (a, b) = (&self.c[i][m][n], &self.c[j][n][m]);
                        if !a.is_zero() && !b.is_zero() {
                            acc = acc + a * b;
                        }
                    }
                }
                out.set(i, j, acc.clone()).expect("field join");
                out.set(j, i, acc).expect("field join");
            }
        }
        out
    }

    /// (ad bᵢ)[k][j] = c[i][j][k].
    pub fn adjoint(&self) -> Vec<Matrix> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let mut m = Matrix::zeros(d, d);
                for j in 0..d {
                    for k in 0..d {
                        m.set(k, j, self.c[i][j][k].clone()).expect("field join");
                    }
                }
                m
            })
            .collect()
    }
}

pub fn structure_constants(b: &LieAlgebraBasis) -> Result<StructureConstants, LieError> {
    let d = b.dim();
    let coords = Coordinates::new(&b.elements);
    let mut c = vec![vec![vec![Scalar::zero(); d]; d]; d];
    for i in 0..d {
        for j in i + 1..d {
            let br = b.elements[i].commutator(&b.elements[j])?;
            let v = coords.of(&br).ok_or(LieError::NotClosed(i, j))?;
            c[j][i] = v.iter().map(|x| -x).collect();
            c[i][j] = v;
        }
    }
    Ok(StructureConstants { c })
}

/// Killing form B(bᵢ, bⱼ) by structure-constant contraction (Dynkin index 1).
pub fn killing_form(b: &LieAlgebraBasis) -> Result<Matrix, LieError> {
    if b.dim() == 0 {
        return Err(LieError::Empty);
    }
    Ok(structure_constants(b)?.killing_contraction())
}

/// Killing form as trace(ad bᵢ · ad bⱼ), independent of the contraction path.
pub fn killing_form_trace(b: &LieAlgebraBasis) -> Result<Matrix, LieError> {
    let ad = adjoint_rep(b)?;
    let d = ad.len();
    if d == 0 {
        return Err(LieError::Empty);
    }
    let mut out = Matrix::zeros(d, d);
    for i in 0..d {
        for j in i..d {
            let t = ad[i].matmul(&ad[j])?.trace()?;
            out.set(i, j, t.clone())?;
            out.set(j, i, t)?;
        }
    }
    Ok(out)
}

pub fn adjoint_rep(b: &LieAlgebraBasis) -> Result<Vec<Matrix>, LieError> {
    Ok(structure_constants(b)?.adjoint())
}

/// Span of all brackets [bᵢ, bⱼ].
pub fn derived_algebra(b: &LieAlgebraBasis) -> Result<LieAlgebraBasis, LieError> {
    let mut rows = Vec::new();
    for i in 0..b.dim() {
        for j in i + 1..b.dim() {
            let c = b.elements[i].commutator(&b.elements[j])?;
            if !c.is_zero() {
                rows.push(flatten(&c));
            }
        }
    }
    Ok(LieAlgebraBasis::from_rows(b.size, echelon_rows(rows), "d"))
}

/// Kernel of the joint adjoint action.
pub fn center(b: &LieAlgebraBasis) -> Result<LieAlgebraBasis, LieError> {
    let d = b.dim();
    if d == 0 {
        return Ok(LieAlgebraBasis::zero(b.size));
    }
    let sc = structure_constants(b)?;
    // rows indexed by (j, k), columns by i: Σᵢ aᵢ c[i][j][k] = 0
    let mut rows = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            rows.push((0..d).map(|i| sc.c[i][j][k].clone()).collect());
        }
    }
    let kernel = Matrix::from_rows(rows)?.rank_kernel().kernel;
    let elems: Vec<Vec<Scalar>> = kernel.iter().map(|a| flatten(&b.combine(a))).collect();
    Ok(LieAlgebraBasis::from_rows(b.size, echelon_rows(elems), "z"))
}

/// Cartan's criterion: the Killing form is nondegenerate.
pub fn is_semisimple(b: &LieAlgebraBasis) -> Result<bool, LieError> {
    if b.dim() == 0 {
        return Ok(false);
    }
    Ok(!killing_form(b)?.determinant()?.is_zero())
}

/// Inertia (positives, negatives, zeros) of the Killing form.
pub fn killing_signature(b: &LieAlgebraBasis) -> Result<(usize, usize, usize), LieError> {
    let k = killing_form(b)?;
    k.congruence_signature().map_err(|e| match e {
        LinalgError::NotReal | LinalgError::NotSymmetric => LieError::NotRealSymmetric,
        e => LieError::Linalg(e),
    })
}

/// Invariants used to name an algebra without an isomorphism test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LieInvariants {
    pub dim: usize,
    pub center_dim: usize,
    pub derived_dim: usize,
    pub killing_rank: usize,
    pub killing_signature: Option<(usize, usize, usize)>,
    pub semisimple: bool,
}

pub fn invariants(b: &LieAlgebraBasis) -> Result<LieInvariants, LieError> {
    let k = killing_form(b)?;
    Ok(LieInvariants {
        dim: b.dim(),
        center_dim: center(b)?.dim(),
        derived_dim: derived_algebra(b)?.dim(),
        killing_rank: k.rank(),
        killing_signature: killing_signature(b).ok(),
        semisimple: !k.determinant()?.is_zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{
        a4_generators, appendix_ad_basis, constant, ga4_basis, pauli_ladder_basis, s4sl2_basis, sl3_basis,
        spin_basis,
    };

    fn basis(pairs: Vec<(String, Matrix)>) -> LieAlgebraBasis {
        LieAlgebraBasis::from_pairs(pairs).unwrap()
    }

    #[test]
    fn closure_dimensions() {
        let g = lie_closure(&a4_generators(), 64).unwrap();
        assert_eq!(g.dim(), 9);
        assert_eq!(center(&g).unwrap().dim(), 1);
        assert_eq!(derived_algebra(&g).unwrap().dim(), 8);
        assert!(!is_semisimple(&g).unwrap());
        let triple = [constant("sl3.x1").unwrap(), constant("sl3.y1").unwrap(), constant("sl3.h1").unwrap()];
        let t = lie_closure(&triple.map(Clone::clone), 9).unwrap();
        assert_eq!(t.dim(), 3);
        assert_eq!(lie_closure(&[Matrix::identity(3)], 1).unwrap().dim(), 1);
        assert_eq!(lie_closure(&a4_generators(), 5), Err(LieError::MaxDimExceeded(5)));
        assert_eq!(lie_closure(g.elements(), 64).unwrap().dim(), 9);
    }

    #[test]
    fn printed_ga4_sits_in_the_closure() {
        let g = lie_closure(&a4_generators(), 64).unwrap();
        for (name, m) in ga4_basis() {
            assert!(g.contains(&m), "{name}");
        }
        let ga4 = basis(ga4_basis());
        assert!(is_semisimple(&ga4).unwrap());
        assert!(derived_algebra(&g).unwrap().contains(constant("ga4.x1").unwrap()));
    }

    #[test]
    fn sl3_constants_and_adjoint() {
        let b = basis(sl3_basis());
        let sc = structure_constants(&b).unwrap();
        // [x1, x2] = -x3
        assert_eq!(sc.bracket_coords(0, 1)[2], Scalar::int(-1));
        assert!(sc.jacobi_holds());
        let ad = adjoint_rep(&b).unwrap();
        assert_eq!(&ad[6], constant("sl3.ad.h1").unwrap());
        assert_eq!(&ad[0], constant("sl3.ad.x1").unwrap());
        let k = killing_form(&b).unwrap();
        assert_eq!(k, killing_form_trace(&b).unwrap());
        assert_eq!(k.get(6, 6), &Scalar::int(12));
        assert_eq!(k.get(7, 7), &Scalar::int(12));
        assert_eq!(k.get(6, 7), &Scalar::int(-6));
        assert_eq!(killing_signature(&b).unwrap(), (5, 3, 0));
        assert_eq!(center(&b).unwrap().dim(), 0);
        assert_eq!(derived_algebra(&b).unwrap().dim(), 8);
        let ga4 = basis(ga4_basis());
        assert_eq!(structure_constants(&ga4).unwrap(), sc);
    }

    #[test]
    fn sl2_killing_forms() {
        let s4 = basis(s4sl2_basis());
        let expected = Matrix::from_int_rows(&[[4, 1, 1], [1, 0, 2], [1, 2, 0]]).scale(&Scalar::int(24)).unwrap();
        assert_eq!(killing_form(&s4).unwrap(), expected);
        assert_eq!(killing_signature(&s4).unwrap(), (2, 1, 0));
        let lad = basis(pauli_ladder_basis());
        let expected = Matrix::from_int_rows(&[[2, 0, 0], [0, 0, 1], [0, 1, 0]]).scale(&Scalar::int(4)).unwrap();
        assert_eq!(killing_form(&lad).unwrap(), expected);
        assert_eq!(killing_signature(&lad).unwrap(), (2, 1, 0));
        let app = basis(appendix_ad_basis());
        assert_eq!(killing_form(&app).unwrap(), Matrix::identity(3).scale(&Scalar::int(2)).unwrap());
    }

    #[test]
    fn appendix_adjoint_matrices() {
        let spin = basis(spin_basis());
        let ad = adjoint_rep(&spin).unwrap();
        let printed = appendix_ad_basis();
        // printed order is z, x, y; the spin basis is x, y, z
        assert_eq!(ad[2], printed[0].1);
        assert_eq!(ad[0], printed[1].1);
        assert_eq!(ad[1], printed[2].1);
    }

    #[test]
    fn abelian_cases() {
        let a = LieAlgebraBasis::new(vec![
            Matrix::diag(vec![Scalar::one(), Scalar::zero()]).unwrap(),
            Matrix::diag(vec![Scalar::zero(), Scalar::one()]).unwrap(),
        ])
        .unwrap();
        assert!(structure_constants(&a).unwrap().is_zero());
        assert_eq!(derived_algebra(&a).unwrap().dim(), 0);
        assert_eq!(center(&a).unwrap().dim(), 2);
        assert!(!is_semisimple(&a).unwrap());
    }

    #[test]
    fn basis_validation_and_json() {
        let x = constant("sl3.x1").unwrap().clone();
        assert_eq!(LieAlgebraBasis::new(vec![x.clone(), x.scale(&Scalar::int(2)).unwrap()]), Err(LieError::Dependent));
        assert_eq!(LieAlgebraBasis::new(vec![]), Err(LieError::Empty));
        let b = basis(sl3_basis());
        let back = LieAlgebraBasis::from_json(&b.to_json()).unwrap();
        assert_eq!(back, b);
        let plain = serde_json::to_string(&vec![x]).unwrap();
        assert_eq!(LieAlgebraBasis::from_json(&plain).unwrap().names(), ["b1"]);
        let not_closed = LieAlgebraBasis::new(vec![constant("sl3.x1").unwrap().clone(), constant("sl3.y1").unwrap().clone()]).unwrap();
        assert_eq!(structure_constants(&not_closed), Err(LieError::NotClosed(0, 1)));
    }
}
