//! Finite matrix groups: Dimino enumeration, Schreier–Sims order
//! certificates, derived subgroups and cheap structural invariants.
//!
//! Rational groups with small entries run on a packed integer backend and
//! fall back to exact [`Matrix`] arithmetic when an entry outgrows it.

mod bsgs;
mod element;

use std::sync::atomic::{AtomicBool, Ordering};

use indexmap::IndexSet;
use num_bigint::BigUint;
use num_integer::Integer;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{LinalgError, Matrix};
use crate::scalar::Scalar;
use bsgs::{Chain, Fail};
use element::{Element, Packed};

/// Default per-level orbit cap for [`order_bsgs`].
pub const DEFAULT_ORBIT_CAP: usize = 100_000;
/// Largest group [`identify_small`] accepts.
pub const IDENTIFY_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("a matrix group needs at least one generator")]
    NoGenerators,
    #[error("generator {index} is {rows}x{cols}; expected {dim}x{dim}")]
    DimensionMismatch { index: usize, rows: usize, cols: usize, dim: usize },
    #[error("generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("generators mix incompatible fields")]
    FieldMismatch,
    #[error("enumeration passed the limit with {found} elements")]
    LimitExceeded { found: usize },
    #[error("orbit at level {level} exceeded the cap of {cap} points")]
    OrbitCapExceeded { level: usize, cap: usize },
    #[error("every candidate base point has an orbit beyond the cap; the group looks infinite")]
    NotFinite,
    #[error("group of order {order} is too large to identify (limit {limit})")]
    TooLarge { order: usize, limit: usize },
    #[error("cancelled")]
    Cancelled,
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Json(#[from] JsonError),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{0}")]
pub struct JsonError(pub String);

/// Progress events from long-running constructions, serialized as one JSON
/// object per line by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum ProgressEvent {
    Elements { count: usize },
    Orbit { level: usize, size: usize },
}

/// Cancellation flag and progress sink for long computations.
#[derive(Default, Clone, Copy)]
pub struct Control<'a> {
    pub cancel: Option<&'a AtomicBool>,
    pub progress: Option<&'a (dyn Fn(&ProgressEvent) + Sync)>,
}

impl<'a> Control<'a> {
    pub fn none() -> Control<'static> {
        Control { cancel: None, progress: None }
    }

    fn cancelled(&self) -> bool {
        self.cancel.is_some_and(|c| c.load(Ordering::Relaxed))
    }

    fn emit(&self, e: ProgressEvent) {
        if let Some(f) = self.progress {
            f(&e);
        }
    }
}

/// A nonempty list of invertible square matrices of one size.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGroup {
    generators: Vec<Matrix>,
}

impl MatrixGroup {
    pub fn new(generators: Vec<Matrix>) -> Result<Self, GroupError> {
        let dim = generators.first().ok_or(GroupError::NoGenerators)?.rows();
        let mut field = crate::Field::Rational;
        for (index, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(GroupError::DimensionMismatch { index, rows: g.rows(), cols: g.cols(), dim });
            }
            if g.determinant()?.is_zero() {
                return Err(GroupError::NotInvertible(index));
            }
            field = field.join(g.field()).map_err(|_| GroupError::FieldMismatch)?;
        }
        Ok(MatrixGroup { generators })
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators[0].rows()
    }

    /// Parses a JSON array of matrices.
    pub fn from_json(s: &str) -> Result<Self, GroupError> {
        let gens: Vec<Matrix> = serde_json::from_str(s).map_err(|e| JsonError(e.to_string()))?;
        MatrixGroup::new(gens)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.generators).expect("matrices serialize")
    }
}

fn convert<E: Element>(gens: &[Matrix]) -> Option<Vec<E>> {
    gens.iter().map(E::from_matrix).collect()
}

#[derive(Debug, Clone)]
enum Store {
    Packed(IndexSet<Packed>),
    Exact(IndexSet<Matrix>),
}

/// A fully enumerated finite group. Enumeration only succeeds on closed
/// sets, so every value of this type is closed under product and inverse.
#[derive(Debug, Clone)]
pub struct GroupClosure {
    dim: usize,
    generators: Vec<Matrix>,
    store: Store,
}

impl GroupClosure {
    pub fn order(&self) -> usize {
        match &self.store {
            Store::Packed(s) => s.len(),
            Store::Exact(s) => s.len(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    /// Elements in enumeration order; the identity comes first.
    pub fn elements(&self) -> Vec<Matrix> {
        match &self.store {
            Store::Packed(s) => s.iter().map(Element::to_matrix).collect(),
            Store::Exact(s) => s.iter().cloned().collect(),
        }
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        match &self.store {
            Store::Packed(s) => Packed::from_matrix(m).is_some_and(|p| s.contains(&p)),
            Store::Exact(s) => s.contains(m),
        }
    }

    /// Checks closure under multiplication by every element; quadratic in
    /// the order, meant for tests and small groups.
    pub fn is_multiplication_closed(&self) -> bool {
        fn check<E: Element>(s: &IndexSet<E>) -> bool {
            s.iter().all(|a| s.iter().all(|b| a.mul(b).is_ok_and(|c| s.contains(&c))))
        }
        match &self.store {
            Store::Packed(s) => check(s),
            Store::Exact(s) => check(s),
        }
    }
}

fn dimino<E: Element>(dim: usize, gens: &[E], limit: usize, ctl: &Control) -> Result<IndexSet<E>, Fail> {
    let mut set = IndexSet::new();
    set.insert(E::identity(dim));
    let mut used: Vec<E> = Vec::new();
    let mut next_report = 10_000;
    let mut push = |set: &mut IndexSet<E>, e: E| -> Result<(), Fail> {
        set.insert(e);
        if set.len() > limit {
            return Err(Fail::Group(GroupError::LimitExceeded { found: set.len() }));
        }
        if set.len() >= next_report {
            next_report += 10_000;
            ctl.emit(ProgressEvent::Elements { count: set.len() });
            if ctl.cancelled() {
                return Err(Fail::Group(GroupError::Cancelled));
            }
        }
        Ok(())
    };
    for g in gens {
        if set.contains(g) {
            continue;
        }
        used.push(g.clone());
        // right cosets H·r of the previous subgroup H = set[..h_len]
        let h_len = set.len();
        let mut reps = vec![g.clone()];
        for k in 0..h_len {
            let e = set[k].mul(g)?;
            push(&mut set, e)?;
        }
        let mut pos = 0;
        while pos < reps.len() {
            for s in &used {
                let r = reps[pos].mul(s)?;
                if set.contains(&r) {
                    continue;
                }
                for k in 0..h_len {
                    let e = set[k].mul(&r)?;
                    push(&mut set, e)?;
                }
                reps.push(r);
            }
            pos += 1;
        }
    }
    ctl.emit(ProgressEvent::Elements { count: set.len() });
    Ok(set)
}

fn enumerate_gens(dim: usize, gens: &[Matrix], limit: usize, ctl: &Control) -> Result<GroupClosure, GroupError> {
    if let Some(packed) = convert::<Packed>(gens) {
        match dimino(dim, &packed, limit, ctl) {
            Ok(set) => return Ok(GroupClosure { dim, generators: gens.to_vec(), store: Store::Packed(set) }),
            Err(Fail::Group(e)) => return Err(e),
            Err(Fail::Overflow) => {}
        }
    }
    match dimino(dim, gens, limit, ctl) {
        Ok(set) => Ok(GroupClosure { dim, generators: gens.to_vec(), store: Store::Exact(set) }),
        Err(Fail::Group(e)) => Err(e),
        Err(Fail::Overflow) => Err(GroupError::Invalid("exact arithmetic failed during enumeration".into())),
    }
}

/// Enumerates every element of `g`, failing once more than `limit`
/// elements have been found.
pub fn enumerate(g: &MatrixGroup, limit: usize) -> Result<GroupClosure, GroupError> {
    enumerate_with(g, limit, &Control::none())
}

pub fn enumerate_with(g: &MatrixGroup, limit: usize, ctl: &Control) -> Result<GroupClosure, GroupError> {
    if limit == 0 {
        return Err(GroupError::Invalid("limit must be at least 1".into()));
    }
    enumerate_gens(g.dim(), g.generators(), limit, ctl)
}

#[derive(Debug, Clone)]
enum ChainStore {
    Packed(Chain<Packed>),
    Exact(Chain<Matrix>),
}

/// Base and strong generating set with explicit transversals.
#[derive(Debug, Clone)]
pub struct BSGSChain {
    inner: ChainStore,
}

impl BSGSChain {
    pub fn order(&self) -> BigUint {
        match &self.inner {
            ChainStore::Packed(c) => c.order(),
            ChainStore::Exact(c) => c.order(),
        }
    }

    pub fn dim(&self) -> usize {
        match &self.inner {
            ChainStore::Packed(c) => c.dim,
            ChainStore::Exact(c) => c.dim,
        }
    }

    /// Whether the deterministic strong-generation test ran, making the
    /// order a certificate rather than a Monte Carlo lower bound.
    pub fn verified(&self) -> bool {
        match &self.inner {
            ChainStore::Packed(c) => c.verified,
            ChainStore::Exact(c) => c.verified,
        }
    }

    pub fn base(&self) -> Vec<Vec<Scalar>> {
        match &self.inner {
            ChainStore::Packed(c) => c.levels.iter().map(|l| Packed::vector_to_scalars(&l.base)).collect(),
            ChainStore::Exact(c) => c.levels.iter().map(|l| l.base.clone()).collect(),
        }
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        match &self.inner {
            ChainStore::Packed(c) => c.levels.iter().map(|l| l.orbit.len()).collect(),
            ChainStore::Exact(c) => c.levels.iter().map(|l| l.orbit.len()).collect(),
        }
    }

    pub fn strong_generators(&self) -> Vec<Matrix> {
        match &self.inner {
            ChainStore::Packed(c) => c.strong.iter().map(Element::to_matrix).collect(),
            ChainStore::Exact(c) => c.strong.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BsgsOptions {
    pub seed: u64,
    pub verify: bool,
    pub orbit_cap: usize,
}

impl Default for BsgsOptions {
    fn default() -> Self {
        BsgsOptions { seed: 0, verify: true, orbit_cap: DEFAULT_ORBIT_CAP }
    }
}

/// Randomized Schreier–Sims; with `verify` the order is certified by a
/// deterministic Schreier-generator check.
pub fn order_bsgs(g: &MatrixGroup, seed: u64, verify: bool) -> Result<(BigUint, BSGSChain), GroupError> {
    order_bsgs_with(g, &BsgsOptions { seed, verify, ..BsgsOptions::default() }, &Control::none())
}

pub fn order_bsgs_with(
    g: &MatrixGroup,
    opts: &BsgsOptions,
    ctl: &Control,
) -> Result<(BigUint, BSGSChain), GroupError> {
    let dim = g.dim();
    let rng = || ChaCha8Rng::seed_from_u64(opts.seed);
    if let Some(packed) = convert::<Packed>(g.generators()) {
        match bsgs::build(dim, &packed, rng(), opts.verify, opts.orbit_cap, ctl) {
            Ok(c) => return Ok((c.order(), BSGSChain { inner: ChainStore::Packed(c) })),
            Err(Fail::Group(e)) => return Err(e),
            Err(Fail::Overflow) => {}
        }
    }
    match bsgs::build(dim, g.generators(), rng(), opts.verify, opts.orbit_cap, ctl) {
        Ok(c) => Ok((c.order(), BSGSChain { inner: ChainStore::Exact(c) })),
        Err(Fail::Group(e)) => Err(e),
        Err(Fail::Overflow) => Err(GroupError::Invalid("exact arithmetic failed during Schreier-Sims".into())),
    }
}

/// Membership by sifting through the transversals.
pub fn contains(chain: &BSGSChain, m: &Matrix) -> Result<bool, GroupError> {
    let dim = chain.dim();
    if m.rows() != dim || m.cols() != dim {
        return Err(GroupError::DimensionMismatch { index: 0, rows: m.rows(), cols: m.cols(), dim });
    }
    match &chain.inner {
        ChainStore::Packed(c) => {
            if let Some(p) = Packed::from_matrix(m) {
                if let Ok(found) = c.contains(&p) {
                    return Ok(found);
                }
            }
            Ok(c.to_exact().contains(m).unwrap_or(false))
        }
        ChainStore::Exact(c) => Ok(c.contains(m).unwrap_or(false)),
    }
}

fn derived_generators<E: Element>(gens: &[E]) -> Result<Vec<E>, Fail> {
    let inv: Vec<E> = gens.iter().map(E::inverse).collect::<Result<_, _>>()?;
    let mut out: IndexSet<E> = IndexSet::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let c = gens[i].mul(&gens[j])?.mul(&inv[i])?.mul(&inv[j])?;
            if !c.is_identity() {
                out.insert(c);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Normal closure in ⟨gens⟩ of the commutators of the generators, which is
/// the derived subgroup.
fn derived_in<E: Element>(dim: usize, gens: &[E], limit: usize) -> Result<(Vec<E>, IndexSet<E>), Fail> {
    let inv: Vec<E> = gens.iter().map(E::inverse).collect::<Result<_, _>>()?;
    let mut dgens = derived_generators(gens)?;
    let ctl = Control::none();
    loop {
        let set = dimino(dim, &dgens, limit, &ctl)?;
        let mut missing = None;
        'search: for d in &dgens {
            for (g, gi) in gens.iter().zip(&inv) {
                let c = g.mul(d)?.mul(gi)?;
                if !set.contains(&c) {
                    missing = Some(c);
                    break 'search;
                }
            }
        }
        match missing {
            Some(c) => dgens.push(c),
            None => return Ok((dgens, set)),
        }
    }
}

/// The subgroup generated by all commutators ghg⁻¹h⁻¹.
pub fn derived_subgroup(c: &GroupClosure) -> GroupClosure {
    let dim = c.dim;
    let limit = c.order();
    let fallback = |gens: &[Matrix]| {
        let (dgens, set) = match derived_in(dim, gens, limit) {
            Ok(r) => r,
            Err(_) => unreachable!("exact arithmetic inside a finite group cannot fail"),
        };
        GroupClosure { dim, generators: dgens, store: Store::Exact(set) }
    };
    let out = match &c.store {
        Store::Packed(_) => {
            let gens = convert::<Packed>(&c.generators).expect("packed generators");
            match derived_in(dim, &gens, limit) {
                Ok((dgens, set)) => GroupClosure {
                    dim,
                    generators: dgens.iter().map(Element::to_matrix).collect(),
                    store: Store::Packed(set),
                },
                Err(_) => fallback(&c.generators),
            }
        }
        Store::Exact(_) => fallback(&c.generators),
    };
    if out.generators.is_empty() {
        GroupClosure { generators: vec![Matrix::identity(dim)], ..out }
    } else {
        out
    }
}

/// Cheap isomorphism invariants of a small group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupStructure {
    pub order: usize,
    pub derived_order: usize,
    /// Invariant factors d₁ | d₂ | … of the abelianization G/G′.
    pub abelianization: Vec<u64>,
    pub exponent: u64,
    pub name: Option<String>,
}

fn element_order<E: Element>(g: &E) -> u64 {
    let mut x = g.clone();
    let mut k = 1;
    while !x.is_identity() {
        x = x.mul(g).expect("closed group arithmetic");
        k += 1;
    }
    k
}

/// Smallest k ≥ 1 with gᵏ ∈ D.
fn quotient_order<E: Element>(g: &E, d: &IndexSet<E>) -> u64 {
    let mut x = g.clone();
    let mut k = 1;
    while !d.contains(&x) {
        x = x.mul(g).expect("closed group arithmetic");
        k += 1;
    }
    k
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Invariant factors of an abelian group given, for each m, the number of
/// elements x with mx = 0.
fn abelian_invariants(order: u64, count_dividing: impl Fn(u64) -> u64) -> Vec<u64> {
    let mut per_prime: Vec<Vec<u32>> = Vec::new();
    let mut primes = Vec::new();
    for p in prime_factors(order) {
        // e_j = log_p #{x : p^j x = 0} = Σ_i min(a_i, j)
        let mut e = vec![0u32];
        let mut pj = 1u64;
        loop {
            pj *= p;
            let c = count_dividing(pj);
            e.push(c.ilog(p));
            if e[e.len() - 1] == e[e.len() - 2] {
                break;
            }
        }
        // number of cyclic factors with a_i ≥ j is e_j − e_{j−1}
        let ge: Vec<u32> = e.windows(2).map(|w| w[1] - w[0]).collect();
        let mut exps = Vec::new();
        for j in 1..ge.len() + 1 {
            let at_least = ge[j - 1];
            let more = ge.get(j).copied().unwrap_or(0);
            exps.extend(std::iter::repeat_n(j as u32, (at_least - more) as usize));
        }
        exps.sort_unstable_by(|a, b| b.cmp(a));
        per_prime.push(exps);
        primes.push(p);
    }
    let rank = per_prime.iter().map(Vec::len).max().unwrap_or(0);
    let mut factors: Vec<u64> = (0..rank)
        .map(|k| primes.iter().zip(&per_prime).map(|(&p, ex)| ex.get(k).map_or(1, |&a| p.pow(a))).product())
        .collect();
    factors.sort_unstable();
    factors
}

fn structure_of<E: Element>(g: &IndexSet<E>, d: &IndexSet<E>) -> (u64, Vec<u64>) {
    let exponent = g.iter().map(element_order).fold(1u64, |l, o| l.lcm(&o));
    let qorders: Vec<u64> = g.iter().map(|x| quotient_order(x, d)).collect();
    let dlen = d.len() as u64;
    let quotient = g.len() as u64 / dlen;
    let ab = if quotient == 1 {
        Vec::new()
    } else {
        abelian_invariants(quotient, |m| qorders.iter().filter(|&&q| m % q == 0).count() as u64 / dlen)
    };
    (exponent, ab)
}

fn name_for(order: usize, derived_order: usize, ab: &[u64]) -> Option<String> {
    if order == 1 {
        return Some("C1".into());
    }
    if derived_order == 1 {
        return Some(ab.iter().map(|d| format!("C{d}")).collect::<Vec<_>>().join(" x "));
    }
    match (order, derived_order, ab) {
        (6, _, _) => Some("S3".into()),
        (12, 4, [3]) => Some("A4".into()),
        (60, 60, _) => Some("A5".into()),
        _ => None,
    }
}

/// Order, derived order, abelianization, exponent and a name when these
/// invariants determine the group.
pub fn identify_small(c: &GroupClosure) -> Result<GroupStructure, GroupError> {
    if c.order() > IDENTIFY_LIMIT {
        return Err(GroupError::TooLarge { order: c.order(), limit: IDENTIFY_LIMIT });
    }
    let d = derived_subgroup(c);
    let (exponent, ab) = match (&c.store, &d.store) {
        (Store::Packed(g), Store::Packed(ds)) => structure_of(g, ds),
        (Store::Exact(g), Store::Exact(ds)) => structure_of(g, ds),
        _ => {
            let g: IndexSet<Matrix> = c.elements().into_iter().collect();
            let ds: IndexSet<Matrix> = d.elements().into_iter().collect();
            structure_of(&g, &ds)
        }
    };
    let name = name_for(c.order(), d.order(), &ab);
    Ok(GroupStructure { order: c.order(), derived_order: d.order(), abelianization: ab, exponent, name })
}

/// Enumeration-free element order, by repeated multiplication up to `cap`.
pub fn matrix_order(m: &Matrix, cap: u64) -> Option<u64> {
    let mut x = m.clone();
    for k in 1..=cap {
        if x.is_identity() {
            return Some(k);
        }
        x = x.matmul(m).ok()?;
    }
    None
}

/// A seeded random word of the given length in the generators.
pub fn random_word<R: rand::Rng>(g: &MatrixGroup, len: usize, rng: &mut R) -> Matrix {
    let gens = g.generators();
    (0..len).fold(Matrix::identity(g.dim()), |acc, _| {
        acc.matmul(&gens[rng.gen_range(0..gens.len())]).expect("square generators")
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::gates::{a4_generators, constant, we8_generators};

    fn cyclic(n: u64) -> MatrixGroup {
        // permutation matrix of an n-cycle
        let n = n as usize;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set((i + 1) % n, i, Scalar::one()).unwrap();
        }
        MatrixGroup::new(vec![m]).unwrap()
    }

    #[test]
    fn a4_enumeration() {
        let g = MatrixGroup::new(a4_generators()).unwrap();
        let c = enumerate(&g, 10_000).unwrap();
        assert_eq!(c.order(), 12);
        assert!(c.is_multiplication_closed());
        assert!(c.elements()[0].is_identity());
        let d = derived_subgroup(&c);
        assert_eq!(d.order(), 4);
        assert_eq!(derived_subgroup(&d).order(), 1);
        let s = identify_small(&c).unwrap();
        assert_eq!(s.name.as_deref(), Some("A4"));
        assert_eq!(s.abelianization, vec![3]);
        assert_eq!(s.exponent, 6);
        let sd = identify_small(&d).unwrap();
        assert_eq!(sd.name.as_deref(), Some("C2 x C2"));
    }

    #[test]
    fn trivial_and_cyclic() {
        let id = MatrixGroup::new(vec![Matrix::identity(3)]).unwrap();
        assert_eq!(enumerate(&id, 1).unwrap().order(), 1);
        let c12 = enumerate(&cyclic(12), 100).unwrap();
        assert_eq!(c12.order(), 12);
        assert_eq!(derived_subgroup(&c12).order(), 1);
        let s = identify_small(&c12).unwrap();
        assert_eq!(s.name.as_deref(), Some("C12"));
        assert_eq!(s.abelianization, vec![12]);
        assert!(matches!(enumerate(&cyclic(12), 11), Err(GroupError::LimitExceeded { .. })));
    }

    #[test]
    fn bsgs_agrees_with_enumeration() {
        let g = MatrixGroup::new(a4_generators()).unwrap();
        let (order, chain) = order_bsgs(&g, 7, true).unwrap();
        assert_eq!(order, BigUint::from(12u32));
        assert!(chain.verified());
        assert!(contains(&chain, constant("x_a4").unwrap()).unwrap());
        assert!(contains(&chain, &Matrix::identity(8)).unwrap());
        assert!(!contains(&chain, &-&Matrix::identity(8)).unwrap());
        let s2 = MatrixGroup::new(vec![constant("s2").unwrap().clone()]).unwrap();
        let (o, _) = order_bsgs(&s2, 1, true).unwrap();
        assert_eq!(o, BigUint::from(matrix_order(constant("s2").unwrap(), 100).unwrap()));
    }

    #[test]
    fn quadratic_entries_use_exact_backend() {
        let h = Scalar::sqrt_int(2).try_div(&Scalar::int(2)).unwrap();
        let r = Matrix::from_rows(vec![vec![h.clone(), -&h], vec![h.clone(), h]]).unwrap();
        let g = MatrixGroup::new(vec![r]).unwrap();
        assert_eq!(enumerate(&g, 100).unwrap().order(), 8);
        assert_eq!(order_bsgs(&g, 0, true).unwrap().0, BigUint::from(8u32));
    }

    #[test]
    fn infinite_group_hits_cap() {
        let r = Matrix::from_int_rows(&[[3, -4], [4, 3]]).scale(&Scalar::frac(1, 5)).unwrap();
        let g = MatrixGroup::new(vec![r]).unwrap();
        let opts = BsgsOptions { orbit_cap: 50, ..BsgsOptions::default() };
        let err = order_bsgs_with(&g, &opts, &Control::none()).unwrap_err();
        assert!(matches!(err, GroupError::NotFinite | GroupError::OrbitCapExceeded { .. }), "{err:?}");
        assert!(matches!(enumerate(&g, 200), Err(GroupError::LimitExceeded { .. })));
    }

    #[test]
    fn validation() {
        assert_eq!(MatrixGroup::new(vec![]), Err(GroupError::NoGenerators));
        let sing = Matrix::from_int_rows(&[[1, 1], [1, 1]]);
        assert_eq!(MatrixGroup::new(vec![sing]), Err(GroupError::NotInvertible(0)));
        let g = MatrixGroup::new(we8_generators()).unwrap();
        let back = MatrixGroup::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn invariant_factors() {
        // C2 x C6: elements killed by 2 → 4, by 3 → 3
        let mut counts = BTreeMap::new();
        counts.insert(2, 4);
        counts.insert(4, 4);
        counts.insert(3, 3);
        counts.insert(9, 3);
        assert_eq!(abelian_invariants(12, |m| counts.get(&m).copied().unwrap_or(0)), vec![2, 6]);
    }
}

#[cfg(test)]
mod proptests {
    use proptest::prelude::*;

    use super::*;

    fn signed_permutation(n: usize) -> impl Strategy<Value = Matrix> {
        (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(any::<bool>(), n)).prop_map(
            move |(perm, signs)| {
                let mut m = Matrix::zeros(n, n);
                for (i, (&j, &neg)) in perm.iter().zip(&signs).enumerate() {
                    m.set(i, j, Scalar::int(if neg { -1 } else { 1 })).unwrap();
                }
                m
            },
        )
    }

    fn group(max_dim: usize) -> impl Strategy<Value = MatrixGroup> {
        (2..=max_dim).prop_flat_map(|n| {
            prop::collection::vec(signed_permutation(n), 1..=3).prop_map(|gens| MatrixGroup::new(gens).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn enumeration_and_bsgs_agree(g in group(5), seed in any::<u64>()) {
            let c = enumerate(&g, 10_000).unwrap();
            let (order, chain) = order_bsgs(&g, seed, true).unwrap();
            prop_assert_eq!(order, BigUint::from(c.order()));
            prop_assert!(chain.verified());
        }

        #[test]
        fn closure_contains_inverses(g in group(4)) {
            let c = enumerate(&g, 10_000).unwrap();
            for m in c.elements() {
                prop_assert!(c.contains(&m.inverse().unwrap()));
            }
        }

        #[test]
        fn redundant_generators_keep_the_order(g in group(5), seed in any::<u64>(), len in 1usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut gens = g.generators().to_vec();
            gens.push(random_word(&g, len, &mut rng));
            gens.push(random_word(&g, len + 3, &mut rng));
            let bigger = MatrixGroup::new(gens).unwrap();
            prop_assert_eq!(order_bsgs(&bigger, seed, false).unwrap().0, order_bsgs(&g, seed, false).unwrap().0);
        }

        #[test]
        fn derived_subgroup_is_normal(g in group(4)) {
            let c = enumerate(&g, 10_000).unwrap();
            let d = derived_subgroup(&c);
            prop_assert_eq!(c.order() % d.order(), 0);
            for x in g.generators() {
                let xi = x.inverse().unwrap();
                for m in d.elements() {
                    prop_assert!(d.contains(&x.matmul(&m).unwrap().matmul(&xi).unwrap()));
                }
            }
        }
    }
}
