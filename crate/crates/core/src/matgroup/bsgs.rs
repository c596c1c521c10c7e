//! Schreier–Sims over the action of a matrix group on column vectors.

use indexmap::IndexMap;
use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::element::{Element, Overflow};
use crate::linalg::Matrix;
use super::{Control, GroupError, ProgressEvent};

/// Product-replacement slots used for random elements.
const PR_SLOTS: usize = 10;
const PR_WARMUP: usize = 50;
/// Consecutive random elements that must sift to the identity before the
/// randomized phase stops.
const RANDOM_STOP: usize = 30;
const BASE_CANDIDATE_TRIES: usize = 40;

pub(crate) enum Fail {
    Overflow,
    Group(GroupError),
}

impl From<Overflow> for Fail {
    fn from(_: Overflow) -> Self {
        Fail::Overflow
    }
}

impl From<GroupError> for Fail {
    fn from(e: GroupError) -> Self {
        Fail::Group(e)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Level<E: Element> {
    pub base: E::Vector,
    /// Indices into the strong generating set of generators fixing every
    /// earlier base point.
    pub gens: Vec<usize>,
    /// Orbit point → (u, u⁻¹) with u·base = point.
    pub orbit: IndexMap<E::Vector, (E, E)>,
}

#[derive(Debug, Clone)]
pub(crate) struct Chain<E: Element> {
    pub dim: usize,
    pub strong: Vec<E>,
    pub strong_inv: Vec<E>,
    pub levels: Vec<Level<E>>,
    pub verified: bool,
}

struct Builder<'a, E: Element> {
    chain: Chain<E>,
    cap: usize,
    rng: ChaCha8Rng,
    ctl: &'a Control<'a>,
}

impl<E: Element> Chain<E> {
    pub fn order(&self) -> BigUint {
        self.levels.iter().map(|l| BigUint::from(l.orbit.len())).product()
    }

    /// Sifts `g` from level `start`; returns the residue and the level where
    /// sifting stopped (`levels.len()` if it passed every level).
    pub fn sift(&self, g: &E, start: usize) -> Result<(E, usize), Overflow> {
        let mut h = g.clone();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let pt = h.apply(&level.base)?;
            match level.orbit.get(&pt) {
                Some((_, uinv)) => h = uinv.mul(&h)?,
                None => return Ok((h, i)),
            }
        }
        Ok((h, self.levels.len()))
    }

    pub fn contains(&self, g: &E) -> Result<bool, Overflow> {
        let (h, j) = self.sift(g, 0)?;
        Ok(j == self.levels.len() && h.is_identity())
    }

    pub fn to_exact(&self) -> Chain<Matrix> {
        let conv = |e: &E| e.to_matrix();
        Chain {
            dim: self.dim,
            strong: self.strong.iter().map(conv).collect(),
            strong_inv: self.strong_inv.iter().map(conv).collect(),
            levels: self
                .levels
                .iter()
                .map(|l| Level {
                    base: E::vector_to_scalars(&l.base),
                    gens: l.gens.clone(),
                    orbit: l.orbit.iter().map(|(k, (u, ui))| (E::vector_to_scalars(k), (conv(u), conv(ui)))).collect(),
                })
                .collect(),
            verified: self.verified,
        }
    }
}

/// Adds the image of orbit point `p` under strong generator `g`, if new.
fn push_image<E: Element>(
    lvl: &mut Level<E>,
    strong: &[E],
    strong_inv: &[E],
    p: usize,
    g: usize,
) -> Result<(), Overflow> {
    let (pt, (u, uinv)) = lvl.orbit.get_index(p).expect("orbit index");
    let image = strong[g].apply(pt)?;
    if !lvl.orbit.contains_key(&image) {
        let entry = (strong[g].mul(u)?, uinv.mul(&strong_inv[g])?);
        lvl.orbit.insert(image, entry);
    }
    Ok(())
}

impl<'a, E: Element> Builder<'a, E> {
    fn check_cancel(&self) -> Result<(), Fail> {
        if self.ctl.cancelled() {
            Err(Fail::Group(GroupError::Cancelled))
        } else {
            Ok(())
        }
    }

    /// Extends the orbit of `level` after generator `new` joined it, or
    /// builds it from scratch when the orbit is still empty.
    fn extend_orbit(&mut self, level: usize, new: usize) -> Result<(), Fail> {
        let Chain { dim, strong, strong_inv, levels, .. } = &mut self.chain;
        let lvl = &mut levels[level];
        let old = lvl.orbit.len();
        if old == 0 {
            lvl.orbit.insert(lvl.base.clone(), (E::identity(*dim), E::identity(*dim)));
        } else {
            for p in 0..old {
                push_image(lvl, strong, strong_inv, p, new)?;
            }
        }
        let mut p = if old == 0 { 0 } else { old };
        let mut reported = lvl.orbit.len();
        while p < lvl.orbit.len() {
            for k in 0..lvl.gens.len() {
                let g = lvl.gens[k];
                push_image(lvl, strong, strong_inv, p, g)?;
            }
            if lvl.orbit.len() > self.cap {
                return Err(Fail::Group(GroupError::OrbitCapExceeded { level, cap: self.cap }));
            }
            if lvl.orbit.len() >= reported + 10_000 {
                reported = lvl.orbit.len();
                self.ctl.emit(ProgressEvent::Orbit { level, size: reported });
                if self.ctl.cancelled() {
                    return Err(Fail::Group(GroupError::Cancelled));
                }
            }
            p += 1;
        }
        Ok(())
    }

    /// Picks a base point moved by `h`: standard basis vectors first, then
    /// random short integer vectors.
    fn choose_base(&mut self, h: &E) -> Result<E::Vector, Fail> {
        let n = self.chain.dim;
        let mut candidates: Vec<Vec<i64>> = (0..n)
            .map(|k| {
                let mut v = vec![0; n];
                v[k] = 1;
                v
            })
            .collect();
        for _ in 0..BASE_CANDIDATE_TRIES {
            candidates.push((0..n).map(|_| self.rng.gen_range(-2..=2)).collect());
        }
        let mut moved_any = false;
        for c in candidates {
            let v = E::vector(&c);
            if h.apply(&v)? == v || self.chain.levels.iter().any(|l| l.base == v) {
                continue;
            }
            moved_any = true;
            // trial orbit under h alone must respect the cap
            let mut x = h.apply(&v)?;
            let mut size = 1;
            while x != v && size <= self.cap {
                x = h.apply(&x)?;
                size += 1;
            }
            if size <= self.cap {
                return Ok(v);
            }
        }
        if moved_any {
            Err(Fail::Group(GroupError::NotFinite))
        } else {
            Err(Fail::Group(GroupError::Invalid("non-identity element fixes every candidate base point".into())))
        }
    }

    /// Adds residue `h` (which fixes base points `0..j`) to levels `0..=j`.
    fn add_strong(&mut self, h: E, j: usize) -> Result<(), Fail> {
        let idx = self.chain.strong.len();
        let hinv = h.inverse()?;
        if j == self.chain.levels.len() {
            let base = self.choose_base(&h)?;
            self.chain.levels.push(Level { base, gens: Vec::new(), orbit: IndexMap::new() });
        }
        self.chain.strong.push(h);
        self.chain.strong_inv.push(hinv);
        for level in 0..=j {
            self.chain.levels[level].gens.push(idx);
            self.extend_orbit(level, idx)?;
        }
        Ok(())
    }

    fn sift_and_add(&mut self, g: &E, start: usize) -> Result<Option<usize>, Fail> {
        let (h, j) = self.chain.sift(g, start)?;
        if j == self.chain.levels.len() && h.is_identity() {
            return Ok(None);
        }
        self.add_strong(h, j)?;
        Ok(Some(j))
    }

    fn random_phase(&mut self, gens: &[E]) -> Result<(), Fail> {
        let n = self.chain.dim;
        let mut slots: Vec<E> = (0..PR_SLOTS).map(|k| gens[k % gens.len()].clone()).collect();
        let mut acc = E::identity(n);
        let step = |rng: &mut ChaCha8Rng, slots: &mut Vec<E>, acc: &mut E| -> Result<E, Fail> {
            let i = rng.gen_range(0..PR_SLOTS);
            let mut j = rng.gen_range(0..PR_SLOTS - 1);
            if j >= i {
                j += 1;
            }
            slots[i] = slots[i].mul(&slots[j])?;
            *acc = acc.mul(&slots[i])?;
            Ok(acc.clone())
        };
        for _ in 0..PR_WARMUP {
            step(&mut self.rng, &mut slots, &mut acc)?;
        }
        let mut streak = 0;
        while streak < RANDOM_STOP {
            self.check_cancel()?;
            let r = step(&mut self.rng, &mut slots, &mut acc)?;
            match self.sift_and_add(&r, 0)? {
                None => streak += 1,
                Some(_) => streak = 0,
            }
        }
        Ok(())
    }

    /// Deterministic strong-generation test: every Schreier generator of
    /// every level must sift through the deeper levels.
    fn verify(&mut self) -> Result<(), Fail> {
        let mut i = self.chain.levels.len();
        'levels: while i > 0 {
            let level = i - 1;
            let points = self.chain.levels[level].orbit.len();
            for p in 0..points {
                self.check_cancel()?;
                let gens = self.chain.levels[level].gens.clone();
                for g in gens {
                    let lvl = &self.chain.levels[level];
                    let (_, (u, _)) = lvl.orbit.get_index(p).expect("orbit index");
                    let t = self.chain.strong[g].mul(u)?;
                    let q = t.apply(&lvl.base)?;
                    let (_, qinv) = lvl.orbit.get(&q).expect("orbit closed under level generators");
                    let schreier = qinv.mul(&t)?;
                    if schreier.is_identity() {
                        continue;
                    }
                    if let Some(j) = self.sift_and_add(&schreier, level + 1)? {
                        i = j + 1;
                        continue 'levels;
                    }
                }
            }
            i -= 1;
        }
        self.chain.verified = true;
        Ok(())
    }
}

pub(crate) fn build<E: Element>(
    dim: usize,
    gens: &[E],
    rng: ChaCha8Rng,
    verify: bool,
    cap: usize,
    ctl: &Control,
) -> Result<Chain<E>, Fail> {
    let chain = Chain { dim, strong: Vec::new(), strong_inv: Vec::new(), levels: Vec::new(), verified: false };
    let mut b = Builder { chain, cap, rng, ctl };
    for g in gens {
        b.sift_and_add(g, 0)?;
    }
    if !b.chain.strong.is_empty() {
        b.random_phase(gens)?;
    }
    if verify {
        b.verify()?;
    }
    for (level, l) in b.chain.levels.iter().enumerate() {
        ctl.emit(ProgressEvent::Orbit { level, size: l.orbit.len() });
    }
    Ok(b.chain)
}
