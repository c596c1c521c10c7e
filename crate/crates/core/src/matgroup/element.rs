//! Group element backends: a compact common-denominator form for rational
//! matrices with small entries, and the exact [`Matrix`] for everything else.

use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar};

/// Arithmetic left the range of the packed representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) trait Element: Clone + Eq + Hash + std::fmt::Debug {
    type Vector: Clone + Eq + Hash + std::fmt::Debug;

    fn from_matrix(m: &Matrix) -> Option<Self>;
    fn to_matrix(&self) -> Matrix;
    fn identity(n: usize) -> Self;
    fn is_identity(&self) -> bool;
    fn mul(&self, other: &Self) -> Result<Self, Overflow>;
    fn inverse(&self) -> Result<Self, Overflow>;
    fn apply(&self, v: &Self::Vector) -> Result<Self::Vector, Overflow>;
    fn vector(coords: &[i64]) -> Self::Vector;
    fn vector_to_scalars(v: &Self::Vector) -> Vec<Scalar>;
}

/// Rational matrix `num / den` with `den > 0` and `gcd(den, num) = 1`, so
/// equal matrices have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Packed {
    n: u16,
    den: i64,
    num: Box<[i16]>,
}

/// Rational column vector in the same normalized form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct PackedVec {
    den: i64,
    num: Box<[i64]>,
}

fn normalize(den: i64, num: &mut [i64]) -> i64 {
    let g = num.iter().fold(den, |g, &x| g.gcd(&x));
    if g > 1 {
        for x in num.iter_mut() {
            *x /= g;
        }
    }
    den / g
}

fn narrow(v: i128) -> Result<i64, Overflow> {
    i64::try_from(v).map_err(|_| Overflow)
}

impl Packed {
    fn from_wide(n: usize, den: i128, wide: Vec<i128>) -> Result<Self, Overflow> {
        let mut num = wide.into_iter().map(narrow).collect::<Result<Vec<_>, _>>()?;
        let den = normalize(narrow(den)?, &mut num);
        let num = num.into_iter().map(|x| i16::try_from(x).map_err(|_| Overflow)).collect::<Result<_, _>>()?;
        Ok(Packed { n: n as u16, den, num })
    }

    fn dim(&self) -> usize {
        self.n as usize
    }
}

impl Element for Packed {
    type Vector = PackedVec;

    fn from_matrix(m: &Matrix) -> Option<Self> {
        if !m.is_square() || m.rows() > u16::MAX as usize {
            return None;
        }
        let rats: Vec<&Rational> = m.entries().iter().map(Scalar::as_rational).collect::<Option<_>>()?;
        let den = rats.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
        let den = den.to_i64()?;
        let num = rats
            .iter()
            .map(|r| (r.numer() * (BigInt::from(den) / r.denom())).to_i16())
            .collect::<Option<Box<[i16]>>>()?;
        Some(Packed { n: m.rows() as u16, den, num })
    }

    fn to_matrix(&self) -> Matrix {
        let entries = self.num.iter().map(|&x| Scalar::frac(x as i64, self.den)).collect();
        Matrix::new(self.dim(), self.dim(), entries).expect("square rational matrix")
    }

    fn identity(n: usize) -> Self {
        let mut num = vec![0i16; n * n];
        for i in 0..n {
            num[i * n + i] = 1;
        }
        Packed { n: n as u16, den: 1, num: num.into() }
    }

    fn is_identity(&self) -> bool {
        let n = self.dim();
        self.den == 1 && self.num.iter().enumerate().all(|(k, &x)| x == i16::from(k / n == k % n))
    }

    fn mul(&self, other: &Self) -> Result<Self, Overflow> {
        let n = self.dim();
        let mut out = vec![0i128; n * n];
        for i in 0..n {
            let row = &self.num[i * n..(i + 1) * n];
            for (j, &a) in row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = a as i128;
                let brow = &other.num[j * n..(j + 1) * n];
                for (o, &b) in out[i * n..(i + 1) * n].iter_mut().zip(brow) {
                    *o += a * b as i128;
                }
            }
        }
        Packed::from_wide(n, self.den as i128 * other.den as i128, out)
    }

    fn inverse(&self) -> Result<Self, Overflow> {
        let inv = self.to_matrix().inverse().map_err(|_| Overflow)?;
        Packed::from_matrix(&inv).ok_or(Overflow)
    }

    fn apply(&self, v: &PackedVec) -> Result<PackedVec, Overflow> {
        let n = self.dim();
        let mut num = (0..n)
            .map(|i| {
                let s: i128 =
                    self.num[i * n..(i + 1) * n].iter().zip(v.num.iter()).map(|(&a, &b)| a as i128 * b as i128).sum();
                narrow(s)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let den = normalize(narrow(self.den as i128 * v.den as i128)?, &mut num);
        Ok(PackedVec { den, num: num.into() })
    }

    fn vector(coords: &[i64]) -> PackedVec {
        PackedVec { den: 1, num: coords.into() }
    }

    fn vector_to_scalars(v: &PackedVec) -> Vec<Scalar> {
        v.num.iter().map(|&x| Scalar::frac(x, v.den)).collect()
    }
}

impl Element for Matrix {
    type Vector = Vec<Scalar>;

    fn from_matrix(m: &Matrix) -> Option<Self> {
        Some(m.clone())
    }

    fn to_matrix(&self) -> Matrix {
        self.clone()
    }

    fn identity(n: usize) -> Self {
        Matrix::identity(n)
    }

    fn is_identity(&self) -> bool {
        Matrix::is_identity(self)
    }

    fn mul(&self, other: &Self) -> Result<Self, Overflow> {
        self.matmul(other).map_err(|_| Overflow)
    }

    fn inverse(&self) -> Result<Self, Overflow> {
        Matrix::inverse(self).map_err(|_| Overflow)
    }

    fn apply(&self, v: &Vec<Scalar>) -> Result<Vec<Scalar>, Overflow> {
        self.mul_vec(v).map_err(|_| Overflow)
    }

    fn vector(coords: &[i64]) -> Vec<Scalar> {
        coords.iter().map(|&x| Scalar::int(x)).collect()
    }

    fn vector_to_scalars(v: &Vec<Scalar>) -> Vec<Scalar> {
        v.clone()
    }
}
