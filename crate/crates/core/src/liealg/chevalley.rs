//! Checks of candidate bases against the sl(3) commutator table, cross
//! brackets between subalgebras, and signed-permutation matching of Gram
//! matrices.

use serde::Serialize;

use super::{LieAlgebraBasis, LieError};
use crate::gates::SL3_NAMES;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Nonzero brackets [a, b] (a before b in x1..h2 order) of the sl(3)
/// Chevalley basis; every other pair commutes.
pub const SL3_TABLE: &[(&str, &str, &[(i64, &str)])] = &[
    ("x1", "x2", &[(-1, "x3")]),
    ("x1", "y1", &[(1, "h1")]),
    ("x1", "y3", &[(1, "y2")]),
    ("x1", "h1", &[(-2, "x1")]),
    ("x1", "h2", &[(1, "x1")]),
    ("x2", "y2", &[(1, "h2")]),
    ("x2", "y3", &[(-1, "y1")]),
    ("x2", "h1", &[(1, "x2")]),
    ("x2", "h2", &[(-2, "x2")]),
    ("x3", "y1", &[(1, "x2")]),
    ("x3", "y2", &[(-1, "x1")]),
    ("x3", "y3", &[(1, "h1"), (1, "h2")]),
    ("x3", "h1", &[(-1, "x3")]),
    ("x3", "h2", &[(-1, "x3")]),
    ("y1", "y2", &[(1, "y3")]),
    ("y1", "h1", &[(2, "y1")]),
    ("y1", "h2", &[(-1, "y1")]),
    ("y2", "h1", &[(-1, "y2")]),
    ("y2", "h2", &[(2, "y2")]),
    ("y3", "h1", &[(1, "y3")]),
    ("y3", "h2", &[(1, "y3")]),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairCheck {
    pub left: String,
    pub right: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChevalleyReport {
    pub checks: Vec<PairCheck>,
}

impl ChevalleyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn mismatches(&self) -> Vec<&PairCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

fn format_combination(terms: &[(Scalar, &str)]) -> String {
    let mut out = String::new();
    for (c, name) in terms.iter().filter(|(c, _)| !c.is_zero()) {
        let neg = c.signum().is_ok_and(|o| o.is_lt());
        let mag = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if !mag.is_one() {
            let s = mag.to_string();
            if s.contains(['+', '-', '*']) {
                out.push_str(&format!("({s})"));
            } else {
                out.push_str(&s);
            }
            out.push('*');
        }
        out.push_str(name);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Checks all 28 unordered pairs of the named candidate against
/// [`SL3_TABLE`]. Mismatches are report content, not errors.
pub fn verify_chevalley_table(candidate: &[(String, Matrix)]) -> Result<ChevalleyReport, LieError> {
    let lookup = |n: &str| {
        candidate.iter().find(|(name, _)| name == n).map(|(_, m)| m).ok_or_else(|| LieError::MissingName(n.into()))
    };
    let elems: Vec<&Matrix> = SL3_NAMES.iter().map(|n| lookup(n)).collect::<Result<_, _>>()?;
    let basis = LieAlgebraBasis::named(
        elems.iter().map(|m| (*m).clone()).collect(),
        SL3_NAMES.iter().map(|s| s.to_string()).collect(),
    )
    .ok();
    let mut checks = Vec::with_capacity(28);
    for i in 0..8 {
        for j in i + 1..8 {
            let (a, b) = (SL3_NAMES[i], SL3_NAMES[j]);
            let terms: &[(i64, &str)] =
                SL3_TABLE.iter().find(|(l, r, _)| *l == a && *r == b).map_or(&[], |(_, _, t)| *t);
            let size = elems[i].rows();
            let mut expected = Matrix::zeros(size, size);
            for &(c, n) in terms {
                expected = expected.try_add(&lookup(n)?.scale(&Scalar::int(c))?)?;
            }
            let got = elems[i].commutator(elems[j])?;
            let computed = match basis.as_ref().and_then(|bs| bs.coordinates(&got)) {
                Some(coords) => format_combination(
                    &coords.into_iter().zip(SL3_NAMES).collect::<Vec<_>>(),
                ),
                None => "outside the span of the candidate".into(),
            };
            let expected_str =
                format_combination(&terms.iter().map(|&(c, n)| (Scalar::int(c), n)).collect::<Vec<_>>());
            checks.push(PairCheck {
                left: a.into(),
                right: b.into(),
                expected: expected_str,
                computed,
                pass: got == expected,
            });
        }
    }
    Ok(ChevalleyReport { checks })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommuteReport {
    /// (name in a, name in b, bracket) for every nonzero cross bracket.
    pub nonzero: Vec<(String, String, Matrix)>,
    pub pairs_checked: usize,
}

impl CommuteReport {
    pub fn commutes(&self) -> bool {
        self.nonzero.is_empty()
    }
}

/// Every cross bracket [aᵢ, bⱼ]; the algebras commute iff all vanish.
pub fn commutes_with(a: &LieAlgebraBasis, b: &LieAlgebraBasis) -> Result<CommuteReport, LieError> {
    if a.size() != b.size() {
        return Err(LieError::DimensionMismatch(format!("{0}x{0} vs {1}x{1} matrices", a.size(), b.size())));
    }
    let mut nonzero = Vec::new();
    for (na, x) in a.names().iter().zip(a.elements()) {
        for (nb, y) in b.names().iter().zip(b.elements()) {
            let c = x.commutator(y)?;
            if !c.is_zero() {
                nonzero.push((na.clone(), nb.clone(), c));
            }
        }
    }
    Ok(CommuteReport { nonzero, pairs_checked: a.dim() * b.dim() })
}

/// `target[i][j] = signs[i]·signs[j]·source[perm[i]][perm[j]]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedPermutation {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }
}

/// Searches for a signed permutation relating two square Gram matrices,
/// i.e. a reordering of the basis with some elements negated.
pub fn signed_permutation_match(source: &Matrix, target: &Matrix) -> Option<SignedPermutation> {
    let n = source.rows();
    if !source.is_square() || target.rows() != n || target.cols() != n {
        return None;
    }
    fn extend(
        i: usize,
        src: &Matrix,
        tgt: &Matrix,
        perm: &mut Vec<usize>,
        signs: &mut Vec<i8>,
        used: &mut [bool],
    ) -> bool {
        let n = src.rows();
        if i == n {
            return true;
        }
        for p in 0..n {
            if used[p] || src.get(p, p) != tgt.get(i, i) {
                continue;
            }
            for s in [1i8, -1] {
                let ok = (0..i).all(|j| {
                    let v = src.get(p, perm[j]);
                    let v = if s * signs[j] < 0 { -v } else { v.clone() };
                    &v == tgt.get(i, j)
                });
                if !ok {
                    continue;
                }
                perm.push(p);
                signs.push(s);
                used[p] = true;
                if extend(i + 1, src, tgt, perm, signs, used) {
                    return true;
                }
                used[p] = false;
                perm.pop();
                signs.pop();
            }
        }
        false
    }
    let (mut perm, mut signs, mut used) = (Vec::new(), Vec::new(), vec![false; n]);
    extend(0, source, target, &mut perm, &mut signs, &mut used).then_some(SignedPermutation { perm, signs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{constant, ga4_basis, s4sl2_basis, sl3_basis};
    use crate::liealg::{center, derived_algebra, killing_form, lie_closure};

    #[test]
    fn table_has_every_printed_entry() {
        assert_eq!(SL3_TABLE.len(), 21);
        let r = verify_chevalley_table(&sl3_basis()).unwrap();
        assert_eq!(r.checks.len(), 28);
        assert!(r.all_pass(), "{:?}", r.mismatches());
        let c = r.checks.iter().find(|c| c.left == "x3" && c.right == "y3").unwrap();
        assert_eq!(c.computed, "h1 + h2");
        assert_eq!(r.checks[0].computed, "-x3");
        let g = verify_chevalley_table(&ga4_basis()).unwrap();
        assert!(g.all_pass(), "{:?}", g.mismatches());
    }

    #[test]
    fn swapped_basis_is_caught() {
        let mut b = sl3_basis();
        b[0].0 = "x2".into();
        b[1].0 = "x1".into();
        let r = verify_chevalley_table(&b).unwrap();
        let bad = r.mismatches();
        assert!(!bad.is_empty());
        let mentions = |c: &PairCheck| {
            [&c.left, &c.right, &c.expected, &c.computed].iter().any(|s| s.contains("x1") || s.contains("x2"))
        };
        assert!(bad.iter().all(|c| mentions(c)));
        let failed = |l: &str, r: &str| bad.iter().any(|c| c.left == l && c.right == r);
        assert!(failed("x1", "x2") && failed("x1", "y1") && failed("x3", "y1"));
        assert!(!failed("h1", "h2") && !failed("x3", "y3"));
        assert!(matches!(verify_chevalley_table(&b[1..]), Err(LieError::MissingName(_))));
    }

    #[test]
    fn cross_brackets() {
        let x1 = LieAlgebraBasis::new(vec![constant("sl3.x1").unwrap().clone()]).unwrap();
        let y1 = LieAlgebraBasis::new(vec![constant("sl3.y1").unwrap().clone()]).unwrap();
        let r = commutes_with(&x1, &y1).unwrap();
        assert!(!r.commutes());
        assert_eq!(&r.nonzero[0].2, constant("sl3.h1").unwrap());
        let g = lie_closure(&crate::gates::a4_generators(), 64).unwrap();
        let z = center(&g).unwrap();
        let d = derived_algebra(&g).unwrap();
        assert!(commutes_with(&d, &z).unwrap().commutes());
        let s4 = LieAlgebraBasis::from_pairs(s4sl2_basis()).unwrap();
        assert_eq!(commutes_with(&s4, &d).unwrap().pairs_checked, 24);
    }

    #[test]
    fn killing_matches_printed_up_to_signed_permutation() {
        let b = LieAlgebraBasis::from_pairs(sl3_basis()).unwrap();
        let k = killing_form(&b).unwrap();
        let printed = constant("sl3.killing").unwrap();
        assert_ne!(&k, printed);
        let sp = signed_permutation_match(&k, printed).expect("related by a signed permutation");
        assert!(!sp.is_identity());
        assert!(signed_permutation_match(&k, &k).unwrap().is_identity());
    }

    #[test]
    fn combination_format() {
        let t = [(Scalar::int(2), "a"), (Scalar::frac(-1, 2), "b"), (Scalar::zero(), "c")];
        assert_eq!(format_combination(&t), "2*a - 1/2*b");
        assert_eq!(format_combination(&[]), "0");
    }
}
