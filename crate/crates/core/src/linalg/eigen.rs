use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;

use super::{LinalgError, Matrix, Polynomial};
use crate::scalar::{Rational, Scalar};

/// Relative residual accepted for a float eigenvalue.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

const MAX_DENOMINATOR: i128 = 10_000_000;

/// Eigenvalues with multiplicities. Distinct entries are pairwise distinct
/// values, ordered by decreasing real part (then imaginary part).
#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum {
    Exact(Vec<(Scalar, usize)>),
    /// Float fallback; `max_residual` is the largest relative residual of a
    /// returned root in its square-free factor.
    Approx { values: Vec<(Complex64, usize)>, max_residual: f64 },
}

impl Spectrum {
    pub fn is_exact(&self) -> bool {
        matches!(self, Spectrum::Exact(_))
    }

    pub fn exact(&self) -> Option<&[(Scalar, usize)]> {
        match self {
            Spectrum::Exact(v) => Some(v),
            Spectrum::Approx { .. } => None,
        }
    }

    /// Every eigenvalue repeated by multiplicity.
    pub fn exact_multiset(&self) -> Option<Vec<Scalar>> {
        self.exact().map(|v| v.iter().flat_map(|(x, m)| std::iter::repeat_n(x.clone(), *m)).collect())
    }

    pub fn complex_values(&self) -> Vec<(Complex64, usize)> {
        match self {
            Spectrum::Exact(v) => v.iter().map(|(x, m)| (x.to_complex64(), *m)).collect(),
            Spectrum::Approx { values, .. } => values.clone(),
        }
    }

    pub fn within_tolerance(&self) -> bool {
        match self {
            Spectrum::Exact(_) => true,
            Spectrum::Approx { max_residual, .. } => *max_residual <= RESIDUAL_TOLERANCE,
        }
    }
}

fn cmp_complex_desc(a: &Complex64, b: &Complex64) -> Ordering {
    b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im))
}

/// Eigenvalues of `a`, exact whenever the characteristic polynomial splits
/// into linear and quadratic factors over ℚ (or into linear factors over the
/// matrix's own field), otherwise as tagged float values.
pub fn eigen_quadratic(a: &Matrix) -> Result<Spectrum, LinalgError> {
    let cp = a.charpoly()?;
    let factors = cp.squarefree_decomposition();
    let mut exact = Vec::new();
    let mut all_exact = true;
    for (g, mult) in &factors {
        match exact_roots(g.clone()) {
            Some(rs) => exact.extend(rs.into_iter().map(|r| (r, *mult))),
            None => {
                all_exact = false;
                break;
            }
        }
    }
    if all_exact {
        exact.sort_by(|x, y| cmp_complex_desc(&x.0.to_complex64(), &y.0.to_complex64()));
        return Ok(Spectrum::Exact(exact));
    }
    let mut values = Vec::new();
    let mut max_residual = 0.0f64;
    for (g, mult) in &factors {
        for z in float_roots(g) {
            max_residual = max_residual.max(relative_residual(g, z));
            values.push((z, *mult));
        }
    }
    values.sort_by(|x, y| cmp_complex_desc(&x.0, &y.0));
    Ok(Spectrum::Approx { values, max_residual })
}

fn relative_residual(g: &Polynomial, z: Complex64) -> f64 {
    let scale: f64 = g.coeffs().iter().enumerate().map(|(i, c)| c.to_complex64().norm() * z.norm().powi(i as i32)).sum();
    g.eval_complex(z).norm() / scale.max(f64::MIN_POSITIVE)
}

/// Roots of a square-free polynomial, or `None` when some factor of degree
/// three or more does not split into linear and quadratic pieces.
fn exact_roots(mut g: Polynomial) -> Option<Vec<Scalar>> {
    let mut roots = Vec::new();
    g = g.monic();
    // zero roots
    if g.coeffs().first().is_some_and(Scalar::is_zero) {
        roots.push(Scalar::zero());
        g = Polynomial::new(g.coeffs()[1..].to_vec());
    }
    'outer: loop {
        match g.degree() {
            None | Some(0) => return Some(roots),
            Some(1) => {
                roots.push(-&g.coeffs()[0]);
                return Some(roots);
            }
            Some(2) => {
                roots.extend(monic_quadratic_roots(&g)?);
                return Some(roots);
            }
            Some(_) if !g.is_rational() => return None,
            Some(_) => {}
        }
        let approx = float_roots(&g);
        for z in &approx {
            if z.im.abs() > 1e-6 * z.norm().max(1.0) {
                continue;
            }
            for q in convergents(z.re) {
                let r = Scalar::from_rational(q);
                if g.eval(&r).is_zero() {
                    g = g.div_rem(&Polynomial::linear_root(r.clone())).0;
                    roots.push(r);
                    continue 'outer;
                }
            }
        }
        for i in 0..approx.len() {
            for j in i + 1..approx.len() {
                let (s, p) = (approx[i] + approx[j], approx[i] * approx[j]);
                let tol = 1e-6 * (approx[i].norm() + approx[j].norm()).max(1.0).powi(2);
                if s.im.abs() > tol || p.im.abs() > tol {
                    continue;
                }
                for sr in convergents(s.re) {
                    for pr in convergents(p.re) {
                        let quad = Polynomial::new(vec![
                            Scalar::from_rational(pr.clone()),
                            Scalar::from_rational(-sr.clone()),
                            Scalar::one(),
                        ]);
                        let (quot, rem) = g.div_rem(&quad);
                        if rem.is_zero() {
                            roots.extend(monic_quadratic_roots(&quad)?);
                            g = quot;
                            continue 'outer;
                        }
                    }
                }
            }
        }
        return None;
    }
}

/// Roots of `t² + c1·t + c0`.
fn monic_quadratic_roots(g: &Polynomial) -> Option<Vec<Scalar>> {
    let c = g.coeffs();
    let (c0, c1) = (&c[0], &c[1]);
    let half = Scalar::frac(1, 2);
    let disc = c1 * c1 - c0 * &Scalar::int(4);
    let root = match disc.as_rational() {
        Some(r) => Scalar::sqrt_rational(r)?,
        None if disc.is_real() => disc.sqrt_in_field().ok()??,
        None => return None,
    };
    let base = -c1 * &half;
    let delta = root * &half;
    Some(vec![&base + &delta, base - delta])
}

/// Continued-fraction convergents of `x` with bounded denominators.
fn convergents(x: f64) -> Vec<Rational> {
    let mut out = Vec::new();
    if !x.is_finite() || x.abs() > 1e15 {
        return out;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut y = x;
    for _ in 0..40 {
        let a = y.floor();
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > MAX_DENOMINATOR {
            break;
        }
        out.push(Rational::new(BigInt::from(h2), BigInt::from(k2)));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a;
        if frac.abs() < 1e-12 {
            break;
        }
        y = 1.0 / frac;
    }
    // the best approximations come last
    out.reverse();
    out.truncate(4);
    out
}

/// Float roots of a polynomial as eigenvalues of its companion matrix,
/// polished by a few Newton steps.
fn float_roots(g: &Polynomial) -> Vec<Complex64> {
    let g = g.monic();
    let Some(n) = g.degree().filter(|&n| n > 0) else { return Vec::new() };
    let c: Vec<Complex64> = g.coeffs().iter().map(Scalar::to_complex64).collect();
    let mut comp = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        comp[(i, n - 1)] = -c[i];
    }
    let eig: Vec<Complex64> = match comp.clone().eigenvalues() {
        Some(v) => v.iter().copied().collect(),
        None => comp.schur().eigenvalues().map(|v| v.iter().copied().collect()).unwrap_or_default(),
    };
    let dg = g.derivative();
    eig.into_iter()
        .map(|mut z| {
            for _ in 0..4 {
                let d = dg.eval_complex(z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = g.eval_complex(z) / d;
                if !step.re.is_finite() || !step.im.is_finite() {
                    break;
                }
                z -= step;
            }
            z
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_multiplicities() {
        let m = Matrix::diag(vec![Scalar::one(), Scalar::one(), Scalar::zero()]).unwrap();
        assert_eq!(eigen_quadratic(&m).unwrap(), Spectrum::Exact(vec![(Scalar::one(), 2), (Scalar::zero(), 1)]));
    }

    #[test]
    fn killing_pattern_spectrum() {
        let k = Matrix::from_int_rows(&[[8, 0, 0], [0, 0, 4], [0, 4, 0]]);
        let s = eigen_quadratic(&k).unwrap();
        assert_eq!(s.exact_multiset().unwrap(), vec![Scalar::int(8), Scalar::int(4), Scalar::int(-4)]);
    }

    #[test]
    fn quadratic_irrationals() {
        // t² − 2t − 1 has roots 1 ± √2
        let m = Matrix::from_int_rows(&[[0, 1], [1, 2]]);
        let s = eigen_quadratic(&m).unwrap();
        let r2 = Scalar::sqrt_int(2);
        assert_eq!(s, Spectrum::Exact(vec![(Scalar::one() + r2.clone(), 1), (Scalar::one() - r2, 1)]));
        // rotation by 90°: ±i
        let rot = Matrix::from_int_rows(&[[0, -1], [1, 0]]);
        let s = eigen_quadratic(&rot).unwrap();
        assert_eq!(s, Spectrum::Exact(vec![(Scalar::i(), 1), (-Scalar::i(), 1)]));
    }

    #[test]
    fn quadratic_factor_inside_quartic() {
        // block diag of [[0,1],[1,2]] and [[3,1],[0,3]]: roots 1±√2, 3 (double)
        let m = Matrix::from_int_rows(&[[0, 1, 0, 0], [1, 2, 0, 0], [0, 0, 3, 1], [0, 0, 0, 3]]);
        let s = eigen_quadratic(&m).unwrap();
        let ms = s.exact_multiset().unwrap();
        assert_eq!(ms.len(), 4);
        let sum = ms.iter().fold(Scalar::zero(), |a, b| a + b);
        assert_eq!(sum, m.trace().unwrap());
        assert!(ms.contains(&Scalar::int(3)));
    }

    #[test]
    fn cubic_irreducible_falls_back() {
        // companion of t³ − 2
        let m = Matrix::from_int_rows(&[[0, 0, 2], [1, 0, 0], [0, 1, 0]]);
        match eigen_quadratic(&m).unwrap() {
            Spectrum::Approx { values, max_residual } => {
                assert_eq!(values.len(), 3);
                assert!(max_residual <= RESIDUAL_TOLERANCE);
                assert!((values[0].0.re - 2f64.cbrt()).abs() < 1e-12);
            }
            s => panic!("expected float fallback, got {s:?}"),
        }
    }

    #[test]
    fn mixed_rational_and_quadratic_roots() {
        // (t² − 3)(t − 1/2)(t + 5): mix of rational and quadratic roots
        let p = Polynomial::new(vec![Scalar::int(-3), Scalar::zero(), Scalar::one()])
            .mul(&Polynomial::linear_root(Scalar::frac(1, 2)))
            .mul(&Polynomial::linear_root(Scalar::int(-5)));
        let roots = exact_roots(p).unwrap();
        assert!(roots.contains(&Scalar::frac(1, 2)));
        assert!(roots.contains(&Scalar::int(-5)));
        assert!(roots.contains(&Scalar::sqrt_int(3)));
        assert!(roots.contains(&-Scalar::sqrt_int(3)));
    }
}
