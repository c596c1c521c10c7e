use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use super::LinalgError;
use crate::scalar::{Field, Rational, Scalar};

/// Dense row-major matrix over ℚ or a single quadratic field.
///
/// The field tag is derived from the entries: a matrix whose entries are all
/// rational reports [`Field::Rational`] even when built next to ℚ(√d) data,
/// so equal matrices always hash identically.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
    field: Field,
}

/// Result of [`Matrix::rank_kernel`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankKernel {
    pub rank: usize,
    pub kernel: Vec<Vec<Scalar>>,
}

fn join_fields<'a>(it: impl IntoIterator<Item = &'a Scalar>) -> Result<Field, LinalgError> {
    let mut f = Field::Rational;
    for x in it {
        f = f.join(x.field())?;
    }
    Ok(f)
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Invalid("matrices must have at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(LinalgError::Invalid(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let field = join_fields(&entries)?;
        Ok(Matrix { rows, cols, entries, field })
    }

    fn from_parts(rows: usize, cols: usize, entries: Vec<Scalar>, field: Field) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        // entries may have cancelled down to ℚ
        let field = if field == Field::Rational || entries.iter().any(|e| e.field() != Field::Rational) {
            field
        } else {
            Field::Rational
        };
        Matrix { rows, cols, entries, field }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Invalid("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_int_rows<const C: usize>(rows: &[[i64; C]]) -> Self {
        let entries = rows.iter().flat_map(|r| r.iter().map(|&x| Scalar::int(x))).collect();
        Matrix { rows: rows.len(), cols: C, entries, field: Field::Rational }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![Scalar::zero(); rows * cols], field: Field::Rational }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn diag(values: Vec<Scalar>) -> Result<Self, LinalgError> {
        let n = values.len();
        let field = join_fields(&values)?;
        let mut m = Self::zeros(n, n);
        for (i, v) in values.into_iter().enumerate() {
            m.entries[i * n + i] = v;
        }
        m.field = field;
        Ok(m)
    }

    /// Column vector.
    pub fn column(values: Vec<Scalar>) -> Result<Self, LinalgError> {
        let n = values.len();
        Self::new(n, 1, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) -> Result<(), LinalgError> {
        self.field = self.field.join(value.field())?;
        self.entries[i * self.cols + j] = value;
        Ok(())
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() })
            })
    }

    fn check_field(&self, other: &Matrix) -> Result<Field, LinalgError> {
        Ok(self.field.join(other.field)?)
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let field = self.check_field(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(Self::from_parts(self.rows, self.cols, entries, field))
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.try_add(&-other)
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let field = self.check_field(other)?;
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            let row = self.row(i);
            for j in 0..other.cols {
                let mut acc = Scalar::zero();
                for (k, a) in row.iter().enumerate() {
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc + a * b;
                }
                out.push(acc);
            }
        }
        Ok(Self::from_parts(self.rows, other.cols, out, field))
    }

    pub fn scale(&self, s: &Scalar) -> Result<Matrix, LinalgError> {
        let field = self.field.join(s.field())?;
        let entries = self.entries.iter().map(|x| x * s).collect();
        Ok(Self::from_parts(self.rows, self.cols, entries, field))
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, entries, field: self.field }
    }

    /// Entrywise complex conjugate.
    pub fn complex_conj(&self) -> Matrix {
        let entries = self.entries.iter().map(Scalar::complex_conj).collect();
        Matrix { rows: self.rows, cols: self.cols, entries, field: self.field }
    }

    pub fn adjoint(&self) -> Matrix {
        self.complex_conj().transpose()
    }

    /// Kronecker product; block `(i, j)` of the result is `self[i][j] · other`.
    pub fn kron(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        let field = self.check_field(other)?;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut entries = vec![Scalar::zero(); r * c];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        entries[(i * other.rows + k) * c + j * other.cols + l] = a * other.get(k, l);
                    }
                }
            }
        }
        Ok(Self::from_parts(r, c, entries, field))
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if !self.is_square() || !other.is_square() || self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "commutator of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.matmul(other)?.try_sub(&other.matmul(self)?)
    }

    pub fn trace(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        Ok((0..self.rows).fold(Scalar::zero(), |acc, i| acc + self.get(i, i)))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.adjoint()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!("{}x{} * vector of {}", self.rows, self.cols, v.len())));
        }
        let field = join_fields(v)?;
        self.field.join(field)?;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Result<Matrix, LinalgError> {
        Self::new(self.rows, self.cols, self.entries.iter().map(f).collect())
    }

    /// Reduced row echelon form and pivot columns. Pivots are chosen as the
    /// first nonzero entry scanning each column top-down, so the result is
    /// deterministic.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            m.swap_rows(p, r);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.entries[r * m.cols + j] = v;
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.entries[i * m.cols + j] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        let field = m.field;
        let entries = m.entries;
        (Self::from_parts(m.rows, m.cols, entries, field), pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank and a kernel basis. Kernel vectors carry a 1 in their free
    /// column and are read off the reduced echelon form.
    pub fn rank_kernel(&self) -> RankKernel {
        let (r, pivots) = self.rref();
        let mut kernel = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            kernel.push(v);
        }
        RankKernel { rank: pivots.len(), kernel }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Rational matrices
    /// are first scaled row-wise to integers so every intermediate stays in ℤ.
    pub fn determinant(&self) -> Result<Scalar, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        if self.field == Field::Rational {
            return Ok(Scalar::from_rational(self.integer_bareiss_det()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = false;
        let mut prev = Scalar::one();
        for k in 0..n {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Ok(Scalar::zero());
                };
                m.swap_rows(p, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.entries[i * n + j] = v;
                }
            }
            prev = m.get(k, k).clone();
        }
        Ok(if sign { -prev } else { prev })
    }

    fn integer_bareiss_det(&self) -> Rational {
        let n = self.rows;
        let mut scale = BigInt::one();
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let row: Vec<&Rational> = self.row(i).iter().map(|x| x.as_rational().expect("rational")).collect();
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                scale *= &l;
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        let mut sign = false;
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Rational::zero();
                };
                a.swap(p, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let det = Rational::new(prev, scale);
        if sign {
            -det
        } else {
            det
        }
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        aug.field = self.field;
        for i in 0..n {
            for j in 0..n {
                aug.entries[i * 2 * n + j] = self.get(i, j).clone();
            }
            aug.entries[i * 2 * n + n + i] = Scalar::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        let entries = (0..n).flat_map(|i| r.row(i)[n..].to_vec()).collect();
        Ok(Self::from_parts(n, n, entries, self.field))
    }

    /// Some solution of `A x = b`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!("{} rows vs rhs of {}", self.rows, b.len())));
        }
        let field = self.field.join(join_fields(b)?)?;
        let mut entries = Vec::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.push(b[i].clone());
        }
        let aug = Self::from_parts(self.rows, self.cols + 1, entries, field);
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Monic characteristic polynomial `det(tI − A)` by the Faddeev–LeVerrier
    /// recurrence (only divides by small integers).
    pub fn charpoly(&self) -> Result<Polynomial, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        if self.field == Field::Rational {
            return Ok(self.integer_charpoly());
        }
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m = Matrix::zeros(n, n);
        for k in 1..=n {
            // M_k = A·M_{k−1} + c_{n−k+1}·I
            let mut next = self.matmul(&m)?;
            for i in 0..n {
                let v = next.get(i, i) + &coeffs[n - k + 1];
                next.set(i, i, v)?;
            }
            // tr(A·M_k) without forming the product
            let t = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .fold(Scalar::zero(), |acc, (i, j)| acc + self.get(i, j) * next.get(j, i));
            coeffs[n - k] = -(t / Scalar::int(k as i64));
            m = next;
        }
        Ok(Polynomial::new(coeffs))
    }

    /// Faddeev–LeVerrier on `B = D·A` with `D` the common denominator: every
    /// intermediate is an integer and the divisions by `k` are exact.
    /// Then `c_k(A) = c_k(B) / D^(n−k)`.
    fn integer_charpoly(&self) -> Polynomial {
        let n = self.rows;
        let d = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.as_rational().expect("rational").denom()));
        let b: Vec<BigInt> = self
            .entries
            .iter()
            .map(|x| {
                let r = x.as_rational().expect("rational");
                r.numer() * (&d / r.denom())
            })
            .collect();
        let mut c = vec![BigInt::zero(); n + 1];
        c[n] = BigInt::one();
        let mut m = vec![BigInt::zero(); n * n];
        for k in 1..=n {
            let mut next = vec![BigInt::zero(); n * n];
            for i in 0..n {
                for j in 0..n {
                    let mut acc = BigInt::zero();
                    for l in 0..n {
                        let (x, y) = (&b[i * n + l], &m[l * n + j]);
                        if !x.is_zero() && !y.is_zero() {
                            acc += x * y;
                        }
                    }
                    next[i * n + j] = acc;
                }
                next[i * n + i] += &c[n - k + 1];
            }
            let mut t = BigInt::zero();
            for i in 0..n {
                for j in 0..n {
                    t += &b[i * n + j] * &next[j * n + i];
                }
            }
            c[n - k] = -(t / BigInt::from(k));
            m = next;
        }
        let mut scale = BigInt::one();
        let mut coeffs = vec![Scalar::zero(); n + 1];
        for k in (0..=n).rev() {
            coeffs[k] = Scalar::from_rational(Rational::new(c[k].clone(), scale.clone()));
            scale *= &d;
        }
        Polynomial::new(coeffs)
    }

    /// Inertia `(positives, negatives, zeros)` of a real symmetric matrix by
    /// symmetric (Lagrange) congruence reduction with exact pivots.
    pub fn congruence_signature(&self) -> Result<(usize, usize, usize), LinalgError> {
        if !self.is_symmetric() {
            return Err(LinalgError::NotSymmetric);
        }
        if !self.field.is_real() {
            return Err(LinalgError::NotReal);
        }
        let n = self.rows;
        let mut a: Vec<Vec<Scalar>> = self.to_rows();
        let mut active: Vec<usize> = (0..n).collect();
        let (mut pos, mut neg) = (0, 0);
        while !active.is_empty() {
            let pivot = match active.iter().copied().find(|&i| !a[i][i].is_zero()) {
                Some(i) => i,
                None => {
                    let pair = active
                        .iter()
                        .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                        .find(|&(i, j)| i != j && !a[i][j].is_zero());
                    let Some((i, j)) = pair else { break };
                    // row_i += row_j, col_i += col_j
                    for &k in &active {
                        let v = &a[i][k] + &a[j][k];
                        a[i][k] = v;
                    }
                    for &k in &active {
                        let v = &a[k][i] + &a[k][j];
                        a[k][i] = v;
                    }
                    i
                }
            };
            let p = a[pivot][pivot].clone();
            match p.signum()? {
                Ordering::Greater => pos += 1,
                Ordering::Less => neg += 1,
                Ordering::Equal => unreachable!(),
            }
            active.retain(|&i| i != pivot);
            for &r in &active {
                if a[r][pivot].is_zero() {
                    continue;
                }
                let f = &a[r][pivot] / &p;
                for &c in &active {
                    let v = &a[r][c] - &(&f * &a[pivot][c]);
                    a[r][c] = v;
                }
            }
        }
        Ok((pos, neg, n - pos - neg))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> =
            (0..self.rows).map(|i| self.row(i).iter().map(ToString::to_string).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in cells {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "[ {} ]", padded.join(" "))?;
        }
        Ok(())
    }
}

// Operators panic on shape or field mismatch, like the checked methods'
// errors would.
impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        let entries = self.entries.iter().map(|x| -x).collect();
        Matrix { rows: self.rows, cols: self.cols, entries, field: self.field }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum FieldJson {
    Rational,
    Quadratic { d: i64 },
}

impl From<Field> for FieldJson {
    fn from(f: Field) -> Self {
        match f {
            Field::Rational => FieldJson::Rational,
            Field::Quadratic(d) => FieldJson::Quadratic { d },
        }
    }
}

impl FieldJson {
    pub fn to_field(self) -> Result<Field, LinalgError> {
        match self {
            FieldJson::Rational => Ok(Field::Rational),
            FieldJson::Quadratic { d } => {
                if d == 1 || !crate::scalar::is_squarefree(d) {
                    Err(LinalgError::Invalid(format!("field discriminant {d} is not squarefree")))
                } else {
                    Ok(Field::Quadratic(d))
                }
            }
        }
    }
}

/// Wire form of a matrix: `{"field": …, "rows": m, "cols": n, "entries": [[…]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldJson,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<String>>,
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = LinalgError;

    fn try_from(j: MatrixJson) -> Result<Self, Self::Error> {
        let declared = j.field.to_field()?;
        if j.entries.len() != j.rows || j.entries.iter().any(|r| r.len() != j.cols) {
            return Err(LinalgError::Invalid(format!("entries do not form a {}x{} array", j.rows, j.cols)));
        }
        let mut entries = Vec::with_capacity(j.rows * j.cols);
        for (i, row) in j.entries.iter().enumerate() {
            for (k, s) in row.iter().enumerate() {
                let x: Scalar = s
                    .parse()
                    .map_err(|e| LinalgError::Invalid(format!("entry [{i}][{k}]: {e}")))?;
                if declared.join(x.field())? != declared {
                    return Err(LinalgError::Invalid(format!("entry [{i}][{k}] = {s} lies outside {declared}")));
                }
                entries.push(x);
            }
        }
        Matrix::new(j.rows, j.cols, entries)
    }
}

impl From<Matrix> for MatrixJson {
    fn from(m: Matrix) -> Self {
        MatrixJson {
            field: m.field.into(),
            rows: m.rows,
            cols: m.cols,
            entries: m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints<const C: usize>(rows: &[[i64; C]]) -> Matrix {
        Matrix::from_int_rows(rows)
    }

    #[test]
    fn commutator_of_itself_vanishes() {
        let a = ints(&[[1, 2], [3, 4]]);
        assert!(a.commutator(&a).unwrap().is_zero());
    }

    #[test]
    fn kron_block_structure() {
        let a = ints(&[[1, 2], [3, 4]]);
        let b = ints(&[[0, 1], [1, 0]]);
        let k = a.kron(&b).unwrap();
        assert_eq!(k, ints(&[[0, 1, 0, 2], [1, 0, 2, 0], [0, 3, 0, 4], [3, 0, 4, 0]]));
    }

    #[test]
    fn dimension_errors() {
        let a = ints(&[[1, 2, 3]]);
        assert!(matches!(a.matmul(&a), Err(LinalgError::DimensionMismatch(_))));
        assert!(matches!(a.commutator(&a), Err(LinalgError::DimensionMismatch(_))));
        assert!(matches!(a.charpoly(), Err(LinalgError::NotSquare(1, 3))));
    }

    #[test]
    fn rank_kernel_examples() {
        let rk = Matrix::identity(8).rank_kernel();
        assert_eq!((rk.rank, rk.kernel.len()), (8, 0));
        let rk = Matrix::zeros(3, 3).rank_kernel();
        assert_eq!(rk.rank, 0);
        assert_eq!(rk.kernel, vec![
            vec![Scalar::one(), Scalar::zero(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::one(), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::one()],
        ]);
        let m = ints(&[[1, 2, 3], [2, 4, 6], [1, 0, 1]]);
        let rk = m.rank_kernel();
        assert_eq!(rk.rank, 2);
        for v in &rk.kernel {
            assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn charpoly_examples() {
        let d = Matrix::diag(vec![Scalar::frac(1, 4), Scalar::frac(3, 4)]).unwrap();
        assert_eq!(
            d.charpoly().unwrap(),
            Polynomial::new(vec![Scalar::frac(3, 16), Scalar::int(-1), Scalar::one()])
        );
        assert_eq!(
            Matrix::zeros(2, 2).charpoly().unwrap(),
            Polynomial::new(vec![Scalar::zero(), Scalar::zero(), Scalar::one()])
        );
    }

    #[test]
    fn determinant_paths_agree() {
        let m = ints(&[[2, -1, 0], [1, 3, 5], [0, 4, -2]]);
        let half = m.scale(&Scalar::frac(1, 2)).unwrap();
        assert_eq!(m.determinant().unwrap(), Scalar::int(-54));
        assert_eq!(half.determinant().unwrap(), Scalar::frac(-54, 8));
        // over Q(√2) the generic Bareiss path runs
        let r2 = Scalar::sqrt_int(2);
        let q = Matrix::from_rows(vec![vec![r2.clone(), Scalar::one()], vec![Scalar::one(), r2.clone()]]).unwrap();
        assert_eq!(q.determinant().unwrap(), Scalar::one());
        assert_eq!(ints(&[[1, 2], [2, 4]]).determinant().unwrap(), Scalar::zero());
    }

    #[test]
    fn inverse_and_solve() {
        assert_eq!(Matrix::identity(4).inverse().unwrap(), Matrix::identity(4));
        assert_eq!(ints(&[[1, 2], [2, 4]]).inverse(), Err(LinalgError::Singular));
        let a = ints(&[[1, 1], [1, 1]]);
        assert_eq!(a.solve(&[Scalar::one(), Scalar::int(2)]).unwrap(), None);
        assert_eq!(a.solve(&[Scalar::int(2), Scalar::int(2)]).unwrap(), Some(vec![Scalar::int(2), Scalar::zero()]));
    }

    #[test]
    fn signature_examples() {
        let s = ints(&[[4, 1, 1], [1, 0, 2], [1, 2, 0]]).scale(&Scalar::int(24)).unwrap();
        assert_eq!(s.congruence_signature().unwrap(), (2, 1, 0));
        let neg = -&Matrix::identity(3);
        assert_eq!(neg.congruence_signature().unwrap(), (0, 3, 0));
        // purely off-diagonal block needs the pairing step
        assert_eq!(ints(&[[0, 1], [1, 0]]).congruence_signature().unwrap(), (1, 1, 0));
        assert_eq!(ints(&[[1, 1], [1, 1]]).congruence_signature().unwrap(), (1, 0, 1));
        assert_eq!(ints(&[[1, 2], [0, 1]]).congruence_signature(), Err(LinalgError::NotSymmetric));
    }

    #[test]
    fn json_round_trip() {
        let m = Matrix::from_rows(vec![vec![Scalar::i(), Scalar::frac(-1, 2)], vec![Scalar::zero(), Scalar::one()]])
            .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"field":{"type":"quadratic","d":-1},"rows":2,"cols":2,"entries":[["0+1*sqrt(-1)","-1/2"],["0","1"]]}"#
        );
        assert_eq!(serde_json::from_str::<Matrix>(&s).unwrap(), m);
        let bad = r#"{"field":{"type":"rational"},"rows":1,"cols":1,"entries":[["sqrt(2)"]]}"#;
        assert!(serde_json::from_str::<Matrix>(bad).is_err());
        let ragged = r#"{"field":{"type":"rational"},"rows":2,"cols":1,"entries":[["1"]]}"#;
        assert!(serde_json::from_str::<Matrix>(ragged).is_err());
    }
}
