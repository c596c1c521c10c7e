//! Simultaneous eigenspace decomposition of ad(h) over a commuting family.

use std::cmp::Ordering;

use serde::Serialize;

use super::{center, Coordinates, LieAlgebraBasis, LieError};
use crate::linalg::{eigen_quadratic, Matrix};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Root {
    /// α(hᵢ) for each Cartan element, in the given order.
    pub weight: Vec<Scalar>,
    /// Basis of the root space {x : [h, x] = α(h) x}.
    pub space: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootDatum {
    pub cartan: Vec<Matrix>,
    /// Nonzero weights, lexicographically positive ones first.
    pub roots: Vec<Root>,
    pub zero_weight_dim: usize,
    /// The zero-weight space equals span(cartan) + center.
    pub complete: bool,
}

fn lex_cmp(a: &[Scalar], b: &[Scalar]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp_real(y) {
            Ok(Ordering::Equal) => continue,
            Ok(o) => return o,
            Err(_) => return Ordering::Equal,
        }
    }
    Ordering::Equal
}

fn is_positive(w: &[Scalar]) -> bool {
    w.iter().find(|x| !x.is_zero()).is_some_and(|x| x.signum() == Ok(Ordering::Greater))
}

impl RootDatum {
    pub fn weights(&self) -> Vec<Vec<Scalar>> {
        self.roots.iter().map(|r| r.weight.clone()).collect()
    }

    /// Roots whose first nonzero coordinate is positive.
    pub fn positive_roots(&self) -> Vec<Vec<Scalar>> {
        self.roots.iter().filter(|r| is_positive(&r.weight)).map(|r| r.weight.clone()).collect()
    }

    /// Positive roots that are not a sum of two positive roots.
    pub fn simple_roots(&self) -> Vec<Vec<Scalar>> {
        let pos = self.positive_roots();
        pos.iter()
            .filter(|a| {
                !pos.iter().any(|b| {
                    let diff: Vec<Scalar> = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
                    pos.contains(&diff)
                })
            })
            .cloned()
            .collect()
    }

    /// Cartan integers ⟨αᵢ, αⱼ^∨⟩ = −q from αⱼ-strings through the simple
    /// root αᵢ (which start at αᵢ since αᵢ − αⱼ is never a root).
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let simple = self.simple_roots();
        let all = self.weights();
        let add = |a: &[Scalar], b: &[Scalar]| -> Vec<Scalar> { a.iter().zip(b).map(|(x, y)| x + y).collect() };
        simple
            .iter()
            .enumerate()
            .map(|(i, ai)| {
                simple
                    .iter()
                    .enumerate()
                    .map(|(j, aj)| {
                        if i == j {
                            return 2;
                        }
                        let mut q = 0;
                        let mut cur = add(ai, aj);
                        while all.contains(&cur) {
                            q += 1;
                            cur = add(&cur, aj);
                        }
                        -q
                    })
                    .collect()
            })
            .collect()
    }

    /// Root-system type for rank ≤ 2, read off the Cartan matrix.
    pub fn root_system_type(&self) -> Option<String> {
        let a = self.cartan_matrix();
        match a.len() {
            1 => Some("A1".into()),
            2 => match a[0][1] * a[1][0] {
                0 => Some("A1xA1".into()),
                1 => Some("A2".into()),
                2 => Some("B2".into()),
                3 => Some("G2".into()),
                _ => None,
            },
            _ => None,
        }
    }
}

/// Restriction of `a` to the invariant subspace spanned by the columns of
/// `v`, in those coordinates.
fn restrict(a: &Matrix, v: &Matrix) -> Result<Matrix, LieError> {
    let av = a.matmul(v)?;
    let cols: Vec<Vec<Scalar>> = (0..av.cols())
        .map(|j| {
            v.solve(&av.col(j))?
                .ok_or_else(|| LieError::NotDiagonalizable("subspace is not invariant".into()))
        })
        .collect::<Result<_, LieError>>()?;
    Ok(Matrix::from_rows(cols)?.transpose())
}

fn columns(vectors: &[Vec<Scalar>]) -> Matrix {
    Matrix::from_rows(vectors.to_vec()).expect("equal lengths").transpose()
}

/// Joint eigenspaces of ad(h) for the commuting `cartan` elements, acting
/// on `b`. Eigenvalues must be exact; float spectra are reported, not used.
pub fn roots_relative(b: &LieAlgebraBasis, cartan: &[Matrix]) -> Result<RootDatum, LieError> {
    let d = b.dim();
    if d == 0 || cartan.is_empty() {
        return Err(LieError::Empty);
    }
    for (i, h) in cartan.iter().enumerate() {
        if h.rows() != b.size() || h.cols() != b.size() {
            return Err(LieError::DimensionMismatch(format!("Cartan element {i} has the wrong size")));
        }
        for (j, k) in cartan.iter().enumerate().skip(i + 1) {
            if !h.commutator(k)?.is_zero() {
                return Err(LieError::NotCommuting(i, j));
            }
        }
    }
    let coords = Coordinates::new(b.elements());
    let ads: Vec<Matrix> = cartan
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let cols: Vec<Vec<Scalar>> = b
                .elements()
                .iter()
                .map(|x| coords.of(&h.commutator(x)?).ok_or(LieError::NotNormalizing(i)))
                .collect::<Result<_, LieError>>()?;
            Ok(Matrix::from_rows(cols)?.transpose())
        })
        .collect::<Result<_, LieError>>()?;

    let identity: Vec<Vec<Scalar>> = (0..d)
        .map(|k| (0..d).map(|j| if j == k { Scalar::one() } else { Scalar::zero() }).collect())
        .collect();
    let mut spaces: Vec<(Vec<Scalar>, Vec<Vec<Scalar>>)> = vec![(Vec::new(), identity)];
    for (i, a) in ads.iter().enumerate() {
        let mut next = Vec::new();
        for (w, vecs) in spaces {
            let v = columns(&vecs);
            let r = restrict(a, &v)?;
            let spectrum = eigen_quadratic(&r)?;
            let Some(eigs) = spectrum.exact() else {
                return Err(LieError::NotDiagonalizable(format!("ad of Cartan element {i} has inexact eigenvalues")));
            };
            let mut total = 0;
            for (lambda, _) in eigs {
                let shifted = r.try_sub(&Matrix::identity(r.rows()).scale(lambda)?)?;
                let kernel = shifted.rank_kernel().kernel;
                total += kernel.len();
                let lifted: Vec<Vec<Scalar>> = kernel.iter().map(|k| v.mul_vec(k)).collect::<Result<_, _>>()?;
                let mut w2 = w.clone();
                w2.push(lambda.clone());
                next.push((w2, lifted));
            }
            if total != r.rows() {
                return Err(LieError::NotDiagonalizable(format!("ad of Cartan element {i} is not semisimple")));
            }
        }
        spaces = next;
    }

    let mut zero_weight_dim = 0;
    let mut roots = Vec::new();
    for (w, vecs) in spaces {
        if w.iter().all(Scalar::is_zero) {
            zero_weight_dim += vecs.len();
        } else {
            roots.push(Root { weight: w, space: vecs.iter().map(|c| b.combine(c)).collect() });
        }
    }
    roots.sort_by(|x, y| {
        is_positive(&y.weight).cmp(&is_positive(&x.weight)).then_with(|| lex_cmp(&y.weight, &x.weight))
    });

    let mut spanning: Vec<Vec<Scalar>> = cartan.iter().map(|h| coords.of(h)).collect::<Option<_>>().unwrap_or_default();
    let cartan_in_algebra = spanning.len() == cartan.len();
    for z in center(b)?.elements() {
        spanning.extend(coords.of(z));
    }
    let span_dim = if spanning.is_empty() { 0 } else { Matrix::from_rows(spanning)?.rank() };
    let complete = cartan_in_algebra && span_dim == zero_weight_dim;
    Ok(RootDatum { cartan: cartan.to_vec(), roots, zero_weight_dim, complete })
}
