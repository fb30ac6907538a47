//! Group actions on finite point sets, orbits, stabilizer chains
//! (Schreier-Sims), membership testing and normal closures.
//!
//! Two concrete spaces are provided: [`PointSpace`] (permutations of
//! `0..m`) and [`VectorSpace`] (matrices acting on the nonzero row vectors of
//! `F_q^n`, indexed by base-`q` rank). Everything is written against the
//! [`ActionSpace`] trait and uses the right-action convention
//! `pt^(gh) = (pt^g)^h`.
//!
//! A chain is always built from elements of the group, so the product of its
//! orbit lengths is a lower bound for the group order. It is certified exact
//! either by sifting every Schreier generator (deterministic completion) or
//! by meeting a caller-supplied upper bound on the order.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::ActionError;
use crate::ff::{Field, FieldSpec};
use crate::matq::Matrix;
use crate::perm::Permutation;

/// Arbitrary-precision group order.
pub type BigCount = BigUint;

pub const DEFAULT_GUARD: u64 = 1 << 20;
pub const DEFAULT_SEED: u64 = 0x5eed_2323;

const NOT_IN_ORBIT: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;

pub trait ActionSpace: Clone {
    type Elem: Clone;

    /// Number of points.
    fn size(&self) -> usize;
    /// Used to bound the base length (twice this value).
    fn dimension(&self) -> usize;
    fn acts_on(&self, g: &Self::Elem) -> bool;
    fn image(&self, g: &Self::Elem, pt: usize) -> usize;

    /// `out[k] = pt^gens[k]`.
    fn images(&self, pt: usize, gens: &[&Self::Elem], out: &mut [usize]) {
        for (o, g) in out.iter_mut().zip(gens) {
            *o = self.image(g, pt);
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, g: &Self::Elem) -> Self::Elem;
    fn identity(&self) -> Self::Elem;
    fn is_identity(&self, g: &Self::Elem) -> bool;

    /// Least point moved by `g`.
    fn first_moved(&self, g: &Self::Elem) -> Option<usize> {
        (0..self.size()).find(|&pt| self.image(g, pt) != pt)
    }
}

/// `Sym(m)` acting on `0..m`.
#[derive(Debug, Clone)]
pub struct PointSpace {
    degree: usize,
}

impl PointSpace {
    pub fn new(degree: usize) -> Self {
        PointSpace { degree }
    }
}

impl ActionSpace for PointSpace {
    type Elem = Permutation;

    fn size(&self) -> usize {
        self.degree
    }

    fn dimension(&self) -> usize {
        self.degree
    }

    fn acts_on(&self, g: &Permutation) -> bool {
        g.degree() == self.degree
    }

    #[inline]
    fn image(&self, g: &Permutation, pt: usize) -> usize {
        g.apply(pt)
    }

    fn mul(&self, a: &Permutation, b: &Permutation) -> Permutation {
        a.compose(b)
    }

    fn inv(&self, g: &Permutation) -> Permutation {
        g.inverse()
    }

    fn identity(&self) -> Permutation {
        Permutation::identity(self.degree)
    }

    fn is_identity(&self, g: &Permutation) -> bool {
        g.is_identity()
    }
}

/// `n x n` matrices over `F_q` acting on the `q^n - 1` nonzero row vectors.
/// The vector `(v_1, .., v_n)` has index `sum v_i q^(i-1) - 1`, so `e_1` is
/// point 0 and `e_i` is point `q^(i-1) - 1`.
#[derive(Debug, Clone)]
pub struct VectorSpace {
    n: usize,
    field: Field,
    size: usize,
}

impl VectorSpace {
    pub fn new(n: usize, field: &Field, guard: u64) -> Result<Self, ActionError> {
        let points = (field.q() as u128).checked_pow(n as u32).map(|v| v - 1).unwrap_or(u128::MAX);
        if points > guard as u128 || points >= ROOT as u128 {
            return Err(ActionError::SpaceTooLarge { points, guard });
        }
        Ok(VectorSpace { n, field: field.clone(), size: points as usize })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Element codes of the vector with index `pt`.
    pub fn vector(&self, pt: usize) -> Vec<u64> {
        let mut v = vec![0; self.n];
        self.decode(pt, &mut v);
        v
    }

    /// Index of a nonzero vector of element codes.
    pub fn point(&self, v: &[u64]) -> Option<usize> {
        let idx = self.encode(v);
        (idx != usize::MAX).then_some(idx)
    }

    pub fn basis_point(&self, i: usize) -> usize {
        (self.field.q() as usize).pow(i as u32 - 1) - 1
    }

    #[inline]
    fn decode(&self, pt: usize, out: &mut [u64]) {
        let q = self.field.q();
        let mut code = pt as u64 + 1;
        for c in out.iter_mut() {
            *c = code % q;
            code /= q;
        }
    }

    #[inline]
    fn encode(&self, v: &[u64]) -> usize {
        let q = self.field.q();
        (v.iter().rev().fold(0u64, |acc, &c| acc * q + c) as usize).wrapping_sub(1)
    }

    fn spec(&self) -> &FieldSpec {
        &self.field
    }
}

impl ActionSpace for VectorSpace {
    type Elem = Matrix;

    fn size(&self) -> usize {
        self.size
    }

    fn dimension(&self) -> usize {
        self.n
    }

    fn acts_on(&self, g: &Matrix) -> bool {
        g.n() == self.n && **g.field() == *self.field
    }

    fn image(&self, g: &Matrix, pt: usize) -> usize {
        let mut v = [0u64; 32];
        let mut w = [0u64; 32];
        let n = self.n;
        if n > 32 {
            let v = self.vector(pt);
            return self.encode(&g.apply_codes(&v));
        }
        self.decode(pt, &mut v[..n]);
        self.spec().vec_mat(&v[..n], g.codes(), n, &mut w[..n]);
        self.encode(&w[..n])
    }

    fn images(&self, pt: usize, gens: &[&Matrix], out: &mut [usize]) {
        let n = self.n;
        if n > 32 {
            for (o, g) in out.iter_mut().zip(gens) {
                *o = self.image(g, pt);
            }
            return;
        }
        let mut v = [0u64; 32];
        let mut w = [0u64; 32];
        self.decode(pt, &mut v[..n]);
        for (o, g) in out.iter_mut().zip(gens) {
            self.spec().vec_mat(&v[..n], g.codes(), n, &mut w[..n]);
            *o = self.encode(&w[..n]);
        }
    }

    fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a.mul_unchecked(b)
    }

    fn inv(&self, g: &Matrix) -> Matrix {
        g.inverse().expect("group elements are invertible")
    }

    fn identity(&self) -> Matrix {
        Matrix::identity(&self.field, self.n)
    }

    fn is_identity(&self, g: &Matrix) -> bool {
        g.is_identity()
    }

    /// The first basis vector moved by `g`: every vector of smaller index lies
    /// in the span of the earlier basis vectors.
    fn first_moved(&self, g: &Matrix) -> Option<usize> {
        let n = self.n;
        let codes = g.codes();
        (0..n).find(|&i| (0..n).any(|j| codes[i * n + j] != u64::from(i == j))).map(|i| self.basis_point(i + 1))
    }
}

/// An orbit with its Schreier vector: every point other than the root records
/// the generator id and predecessor through which it was first reached.
#[derive(Debug, Clone)]
pub struct Orbit {
    root: usize,
    points: Vec<u32>,
    edge: Vec<u32>,
    pred: Vec<u32>,
    gens: Vec<u32>,
}

impl Orbit {
    fn new(space_size: usize, root: usize) -> Self {
        let mut edge = vec![NOT_IN_ORBIT; space_size];
        edge[root] = ROOT;
        Orbit { root, points: vec![root as u32], edge, pred: vec![0; space_size], gens: Vec::new() }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    #[inline]
    pub fn contains(&self, pt: usize) -> bool {
        self.edge[pt] != NOT_IN_ORBIT
    }

    /// Points in discovery order.
    pub fn points(&self) -> impl Iterator<Item = usize> + '_ {
        self.points.iter().map(|&p| p as usize)
    }

    /// Generator ids along the tree path from the root to `pt`.
    pub fn path(&self, mut pt: usize) -> Option<Vec<usize>> {
        if !self.contains(pt) {
            return None;
        }
        let mut word = Vec::new();
        while self.edge[pt] != ROOT {
            word.push(self.edge[pt] as usize);
            pt = self.pred[pt] as usize;
        }
        word.reverse();
        Some(word)
    }

    #[inline]
    fn is_tree_edge(&self, from: usize, gen: u32, to: usize) -> bool {
        self.edge[to] == gen && self.pred[to] as usize == from
    }

    /// Adds `new_gen` (if any) to the generator list and closes the orbit.
    fn extend<S: ActionSpace>(&mut self, space: &S, elems: &[S::Elem], new_gen: Option<u32>) {
        let old_len = self.points.len();
        if let Some(s) = new_gen {
            self.gens.push(s);
            if old_len < space.size() {
                let g = &elems[s as usize];
                for k in 0..old_len {
                    let p = self.points[k];
                    let img = space.image(g, p as usize);
                    if self.edge[img] == NOT_IN_ORBIT {
                        self.edge[img] = s;
                        self.pred[img] = p;
                        self.points.push(img as u32);
                    }
                }
            }
        }
        let refs: Vec<&S::Elem> = self.gens.iter().map(|&s| &elems[s as usize]).collect();
        let mut out = vec![0usize; refs.len()];
        let mut k = if new_gen.is_some() { old_len } else { 0 };
        while k < self.points.len() && self.points.len() < space.size() {
            let p = self.points[k];
            space.images(p as usize, &refs, &mut out);
            for (&img, &s) in out.iter().zip(&self.gens) {
                if self.edge[img] == NOT_IN_ORBIT {
                    self.edge[img] = s;
                    self.pred[img] = p;
                    self.points.push(img as u32);
                }
            }
            k += 1;
        }
    }
}

/// Breadth-first orbit of `pt` under `gens`; generator ids index `gens`.
pub fn orbit<S: ActionSpace>(space: &S, gens: &[S::Elem], pt: usize) -> Result<Orbit, ActionError> {
    if pt >= space.size() || gens.iter().any(|g| !space.acts_on(g)) {
        return Err(ActionError::Incompatible);
    }
    let mut o = Orbit::new(space.size(), pt);
    o.gens = (0..gens.len() as u32).collect();
    o.extend(space, gens, None);
    Ok(o)
}

/// Orbits of `gens` partitioning the whole space, in order of least point.
pub fn all_orbits<S: ActionSpace>(space: &S, gens: &[S::Elem]) -> Result<Vec<Vec<usize>>, ActionError> {
    let mut seen = vec![false; space.size()];
    let mut out = Vec::new();
    for pt in 0..space.size() {
        if seen[pt] {
            continue;
        }
        let o = orbit(space, gens, pt)?;
        let mut pts: Vec<usize> = o.points().collect();
        for &p in &pts {
            seen[p] = true;
        }
        pts.sort_unstable();
        out.push(pts);
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ChainOptions {
    /// Run a random-subproduct sifting pass before deterministic completion.
    pub randomized: bool,
    pub seed: u64,
    /// A proven upper bound on the order of the generated group. Reaching it
    /// certifies the chain.
    pub order_bound: Option<BigCount>,
    /// Consecutive random elements that must sift to the identity before the
    /// randomized pass stops.
    pub sift_streak: usize,
    /// Spaces up to this size store every coset representative explicitly.
    pub explicit_limit: usize,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions {
            randomized: false,
            seed: DEFAULT_SEED,
            order_bound: None,
            sift_streak: 30,
            explicit_limit: 1 << 13,
        }
    }
}

impl ChainOptions {
    pub fn randomized(mut self, on: bool) -> Self {
        self.randomized = on;
        self
    }

    pub fn with_bound(mut self, bound: BigCount) -> Self {
        self.order_bound = Some(bound);
        self
    }
}

/// How the order of a chain was certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verification {
    /// Every Schreier generator at every level sifts to the identity.
    SchreierGenerators,
    /// The orbit-length product reached a proven upper bound.
    OrderBound,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ChainStats {
    pub random_sifts: u64,
    pub schreier_generators: u64,
    pub strong_generators: usize,
}

struct Explicit<E> {
    pos: Vec<u32>,
    reps: Vec<E>,
    inv_reps: Vec<E>,
}

struct Level<E> {
    base: usize,
    orbit: Orbit,
    /// Per orbit position: how many level generators have had their
    /// Schreier generator sifted.
    checked: Vec<u32>,
    explicit: Option<Explicit<E>>,
}

/// Base and strong generating set with per-level orbits and transversals.
pub struct StabilizerChain<S: ActionSpace> {
    space: S,
    options: ChainOptions,
    generators: Vec<S::Elem>,
    strong: Vec<S::Elem>,
    strong_inv: Vec<S::Elem>,
    levels: Vec<Level<S::Elem>>,
    verified: Option<Verification>,
    stats: ChainStats,
    rng: ChaCha8Rng,
}

/// Where a sift stopped.
struct Sifted<E> {
    residue: E,
    /// Index of the first level whose orbit misses the base image, or the
    /// number of levels if all were passed.
    level: usize,
}

impl<S: ActionSpace> StabilizerChain<S> {
    /// Schreier-Sims for `<gens>`; the result is verified (see [`Verification`]).
    pub fn new(space: &S, gens: &[S::Elem], options: &ChainOptions) -> Result<Self, ActionError> {
        let mut chain = Self::unverified(space, gens, options)?;
        chain.verify()?;
        Ok(chain)
    }

    /// Builds the initial chain and runs the randomized pass (if enabled) or
    /// deterministic completion, but does not yet certify it.
    fn unverified(space: &S, gens: &[S::Elem], options: &ChainOptions) -> Result<Self, ActionError> {
        if gens.iter().any(|g| !space.acts_on(g)) {
            return Err(ActionError::Incompatible);
        }
        let mut chain = StabilizerChain {
            space: space.clone(),
            options: options.clone(),
            generators: Vec::new(),
            strong: Vec::new(),
            strong_inv: Vec::new(),
            levels: Vec::new(),
            verified: None,
            stats: ChainStats::default(),
            rng: ChaCha8Rng::seed_from_u64(options.seed),
        };
        for g in gens {
            if !space.is_identity(g) {
                chain.generators.push(g.clone());
                chain.insert_generator(g.clone())?;
            }
        }
        chain.grow()?;
        Ok(chain)
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn generators(&self) -> &[S::Elem] {
        &self.generators
    }

    pub fn strong_generators(&self) -> &[S::Elem] {
        &self.strong
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    /// Product of the orbit lengths.
    pub fn order(&self) -> BigCount {
        self.levels.iter().fold(BigCount::one(), |acc, l| acc * BigCount::from(l.orbit.len()))
    }

    pub fn verification(&self) -> Option<Verification> {
        self.verified
    }

    pub fn stats(&self) -> &ChainStats {
        &self.stats
    }

    /// True iff `g` sifts to the identity.
    pub fn contains(&self, g: &S::Elem) -> bool {
        if !self.space.acts_on(g) {
            return false;
        }
        let s = self.sift(g.clone(), 0);
        s.level == self.levels.len() && self.space.is_identity(&s.residue)
    }

    /// Adds a generator to the group and re-runs the construction passes.
    /// The chain is left unverified until [`Self::verify`] is called.
    pub fn add_generator(&mut self, g: S::Elem) -> Result<(), ActionError> {
        if !self.space.acts_on(&g) {
            return Err(ActionError::Incompatible);
        }
        if self.space.is_identity(&g) {
            return Ok(());
        }
        self.verified = None;
        self.generators.push(g.clone());
        self.insert_generator(g)?;
        self.grow()
    }

    /// Certifies the order, completing the chain deterministically if the
    /// bound (when one is given) has not been met.
    pub fn verify(&mut self) -> Result<Verification, ActionError> {
        if let Some(v) = self.verified {
            return Ok(v);
        }
        if self.options.randomized && self.options.order_bound.is_some() {
            // a false stop of the randomized pass is unlikely but cheap to retry
            for _ in 0..3 {
                if self.bound_reached() {
                    break;
                }
                self.random_phase(self.options.sift_streak * 2)?;
            }
        }
        // completion reports whether it stopped early on the bound
        let v = if self.bound_reached() || self.complete()? {
            Verification::OrderBound
        } else {
            Verification::SchreierGenerators
        };
        self.verified = Some(v);
        Ok(v)
    }

    fn grow(&mut self) -> Result<(), ActionError> {
        if self.options.randomized {
            self.random_phase(self.options.sift_streak)
        } else {
            self.complete().map(|_| ())
        }
    }

    fn bound_reached(&self) -> bool {
        match &self.options.order_bound {
            Some(b) => self.order() >= *b,
            None => false,
        }
    }

    /// Places a new group generator into every level whose earlier base
    /// points it fixes, adding a base point if it fixes them all.
    fn insert_generator(&mut self, g: S::Elem) -> Result<(), ActionError> {
        let k = self.levels.iter().position(|l| self.space.image(&g, l.base) != l.base).unwrap_or(self.levels.len());
        self.add_strong(g, 0, k)
    }

    /// Registers `h` as a strong generator of levels `from..=to`, creating
    /// level `to` if it does not exist yet.
    fn add_strong(&mut self, h: S::Elem, from: usize, to: usize) -> Result<(), ActionError> {
        let id = self.strong.len() as u32;
        self.strong_inv.push(self.space.inv(&h));
        self.strong.push(h);
        self.stats.strong_generators = self.strong.len();
        if to == self.levels.len() {
            if self.levels.len() >= 2 * self.space.dimension() {
                return Err(ActionError::DepthExceeded(2 * self.space.dimension()));
            }
            let base = self.space.first_moved(&self.strong[id as usize]).expect("new level needs a moved point");
            let explicit = (self.space.size() <= self.options.explicit_limit).then(|| Explicit {
                pos: vec![u32::MAX; self.space.size()],
                reps: Vec::new(),
                inv_reps: Vec::new(),
            });
            self.levels.push(Level { base, orbit: Orbit::new(self.space.size(), base), checked: Vec::new(), explicit });
        }
        for lvl in from..=to {
            self.extend_level(lvl, Some(id));
        }
        Ok(())
    }

    fn extend_level(&mut self, lvl: usize, new_gen: Option<u32>) {
        let space = &self.space;
        let level = &mut self.levels[lvl];
        level.orbit.extend(space, &self.strong, new_gen);
        level.checked.resize(level.orbit.len(), 0);
        if let Some(ex) = &mut level.explicit {
            for k in ex.reps.len()..level.orbit.len() {
                let pt = level.orbit.points[k] as usize;
                ex.pos[pt] = k as u32;
                if k == 0 {
                    ex.reps.push(space.identity());
                    ex.inv_reps.push(space.identity());
                } else {
                    let s = level.orbit.edge[pt] as usize;
                    let parent = ex.pos[level.orbit.pred[pt] as usize] as usize;
                    let rep = space.mul(&ex.reps[parent], &self.strong[s]);
                    let inv = space.mul(&self.strong_inv[s], &ex.inv_reps[parent]);
                    ex.reps.push(rep);
                    ex.inv_reps.push(inv);
                }
            }
        }
    }

    /// Transversal element mapping the base point of `lvl` to `pt`.
    fn representative(&self, lvl: usize, pt: usize) -> S::Elem {
        let level = &self.levels[lvl];
        if let Some(ex) = &level.explicit {
            return ex.reps[ex.pos[pt] as usize].clone();
        }
        let path = level.orbit.path(pt).expect("point in orbit");
        let mut u = self.space.identity();
        for s in path {
            u = self.space.mul(&u, &self.strong[s]);
        }
        u
    }

    /// `r * u^-1` where `u` maps the base point of `lvl` to `pt`.
    fn strip(&self, lvl: usize, mut r: S::Elem, mut pt: usize) -> S::Elem {
        let level = &self.levels[lvl];
        if let Some(ex) = &level.explicit {
            return self.space.mul(&r, &ex.inv_reps[ex.pos[pt] as usize]);
        }
        while level.orbit.edge[pt] != ROOT {
            let s = level.orbit.edge[pt] as usize;
            r = self.space.mul(&r, &self.strong_inv[s]);
            pt = level.orbit.pred[pt] as usize;
        }
        r
    }

    fn sift(&self, mut g: S::Elem, start: usize) -> Sifted<S::Elem> {
        for lvl in start..self.levels.len() {
            let level = &self.levels[lvl];
            let img = self.space.image(&g, level.base);
            if !level.orbit.contains(img) {
                return Sifted { residue: g, level: lvl };
            }
            g = self.strip(lvl, g, img);
        }
        Sifted { residue: g, level: self.levels.len() }
    }

    /// Sifts random elements until `streak` consecutive ones pass, or the
    /// order bound is met. Residues become new strong generators.
    fn random_phase(&mut self, streak: usize) -> Result<(), ActionError> {
        if self.generators.is_empty() {
            return Ok(());
        }
        let mut pr = ProductReplacement::new(&self.space, &self.generators, &mut self.rng);
        let mut passed = 0;
        while passed < streak && !self.bound_reached() {
            let g = pr.next(&self.space, &mut self.rng);
            self.stats.random_sifts += 1;
            let s = self.sift(g, 0);
            if s.level == self.levels.len() && self.space.is_identity(&s.residue) {
                passed += 1;
            } else {
                passed = 0;
                self.add_strong(s.residue, 1.min(s.level), s.level)?;
            }
        }
        Ok(())
    }

    /// Deterministic completion: sifts Schreier generators level by level,
    /// deepest first, adding any nontrivial residue. Returns `true` if it
    /// stopped early because the order bound was met.
    fn complete(&mut self) -> Result<bool, ActionError> {
        if self.bound_reached() {
            return Ok(true);
        }
        let mut i = self.levels.len();
        while i > 0 {
            match self.check_level(i - 1)? {
                Some(j) => {
                    if self.bound_reached() {
                        return Ok(true);
                    }
                    i = j + 1;
                }
                None => i -= 1,
            }
        }
        Ok(false)
    }

    fn check_level(&mut self, lvl: usize) -> Result<Option<usize>, ActionError> {
        let mut pos = 0;
        while pos < self.levels[lvl].orbit.len() {
            let p = self.levels[lvl].orbit.points[pos] as usize;
            while (self.levels[lvl].checked[pos] as usize) < self.levels[lvl].orbit.gens.len() {
                let level = &self.levels[lvl];
                let s = level.orbit.gens[level.checked[pos] as usize];
                self.levels[lvl].checked[pos] += 1;
                let img = self.space.image(&self.strong[s as usize], p);
                if self.levels[lvl].orbit.is_tree_edge(p, s, img) {
                    continue;
                }
                self.stats.schreier_generators += 1;
                let h = self.space.mul(&self.representative(lvl, p), &self.strong[s as usize]);
                let sifted = self.sift(h, lvl);
                if sifted.level < self.levels.len() || !self.space.is_identity(&sifted.residue) {
                    let j = sifted.level;
                    self.add_strong(sifted.residue, lvl + 1, j)?;
                    return Ok(Some(j));
                }
            }
            pos += 1;
        }
        Ok(None)
    }
}

/// Product-replacement generator of random group elements.
struct ProductReplacement<E> {
    slots: Vec<E>,
    acc: E,
}

impl<E: Clone> ProductReplacement<E> {
    fn new<S: ActionSpace<Elem = E>>(space: &S, gens: &[E], rng: &mut ChaCha8Rng) -> Self {
        let n = gens.len().max(10);
        let slots = (0..n).map(|k| gens[k % gens.len()].clone()).collect();
        let mut pr = ProductReplacement { slots, acc: space.identity() };
        for _ in 0..50 {
            pr.next(space, rng);
        }
        pr
    }

    fn next<S: ActionSpace<Elem = E>>(&mut self, space: &S, rng: &mut ChaCha8Rng) -> E {
        let n = self.slots.len();
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let other = if rng.gen::<bool>() { self.slots[j].clone() } else { space.inv(&self.slots[j]) };
        self.slots[i] =
            if rng.gen::<bool>() { space.mul(&self.slots[i], &other) } else { space.mul(&other, &self.slots[i]) };
        self.acc = space.mul(&self.acc, &self.slots[i]);
        self.acc.clone()
    }
}

/// Smallest subgroup containing `seeds` and normalized by `ambient`.
///
/// Conjugates of the current generators by the ambient generators are tested
/// for membership and added until none fails. A `true` membership answer is
/// always sound, so the fixpoint is exact even while the intermediate chains
/// are only randomized; the final chain is then verified.
pub fn normal_closure<S: ActionSpace>(
    space: &S,
    ambient: &[S::Elem],
    seeds: &[S::Elem],
    options: &ChainOptions,
) -> Result<StabilizerChain<S>, ActionError> {
    if ambient.iter().any(|a| !space.acts_on(a)) {
        return Err(ActionError::Incompatible);
    }
    let ambient_inv: Vec<S::Elem> = ambient.iter().map(|a| space.inv(a)).collect();
    let mut chain = StabilizerChain::unverified(space, seeds, options)?;
    loop {
        let mut changed = false;
        let mut k = 0;
        while k < chain.generators.len() && !chain.bound_reached() {
            let g = chain.generators[k].clone();
            for (a, ai) in ambient.iter().zip(&ambient_inv) {
                let c = space.mul(&space.mul(ai, &g), a);
                if !chain.contains(&c) {
                    chain.add_generator(c)?;
                    changed = true;
                }
            }
            k += 1;
        }
        if !changed || chain.bound_reached() {
            break;
        }
    }
    chain.verify()?;
    Ok(chain)
}

/// `|SL_n(q)| = q^(n(n-1)/2) * prod_{i=2..n} (q^i - 1)`.
pub fn sl_order(n: u32, field: &FieldSpec) -> BigCount {
    sl_order_q(n, field.q())
}

pub fn sl_order_q(n: u32, q: u64) -> BigCount {
    let q = BigCount::from(q);
    let mut order = num_traits::pow(q.clone(), (n * (n - 1) / 2) as usize);
    for i in 2..=n {
        order *= num_traits::pow(q.clone(), i as usize) - BigCount::one();
    }
    order
}

/// `|GL_n(q)| = (q - 1) |SL_n(q)|`.
pub fn gl_order_q(n: u32, q: u64) -> BigCount {
    sl_order_q(n, q) * BigCount::from(q - 1)
}

/// `m!/2` (`1` for `m < 2`).
pub fn alt_order(m: u32) -> BigCount {
    let fact = (1..=m as u64).fold(BigCount::one(), |acc, k| acc * BigCount::from(k));
    if m < 2 {
        fact
    } else {
        fact / BigCount::from(2u32)
    }
}

/// Two generators of `Alt(m)` for `m >= 3`: `(1,2,3)` and an `m`- or
/// `(m-1)`-cycle, whichever is even.
pub fn alternating_generators(m: usize) -> Vec<Permutation> {
    assert!(m >= 3, "Alt(m) needs m >= 3");
    let three = Permutation::from_cycles(m, &[&[1, 2, 3]]);
    let long: Vec<usize> = if m % 2 == 1 { (1..=m).collect() } else { (2..=m).collect() };
    vec![three, Permutation::from_cycles(m, &[&long])]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    fn perm_chain(m: usize, gens: &[Permutation]) -> StabilizerChain<PointSpace> {
        StabilizerChain::new(&PointSpace::new(m), gens, &ChainOptions::default()).unwrap()
    }

    #[test]
    fn sym3() {
        let c = perm_chain(3, &[Permutation::from_cycles(3, &[&[1, 2, 3]]), Permutation::from_cycles(3, &[&[1, 2]])]);
        assert_eq!(c.order(), BigCount::from(6u32));
        assert_eq!(c.verification(), Some(Verification::SchreierGenerators));
    }

    #[test]
    fn alt8_membership() {
        let c = perm_chain(8, &alternating_generators(8));
        assert_eq!(c.order(), alt_order(8));
        assert!(c.contains(&Permutation::from_cycles(8, &[&[2, 5, 7]])));
        assert!(!c.contains(&Permutation::from_cycles(8, &[&[1, 2]])));
        assert!(!c.contains(&Permutation::identity(9)));
    }

    #[test]
    fn trivial_group() {
        let c = perm_chain(4, &[Permutation::identity(4)]);
        assert_eq!(c.order(), BigCount::one());
        assert!(c.base().is_empty());
        assert!(c.contains(&Permutation::identity(4)));
    }

    #[test]
    fn orbit_of_identity() {
        let f = make_field(2, 1, None).unwrap();
        let space = VectorSpace::new(3, &f, DEFAULT_GUARD).unwrap();
        let o = orbit(&space, &[Matrix::identity(&f, 3)], 4).unwrap();
        assert_eq!(o.points().collect::<Vec<_>>(), vec![4]);
        assert_eq!(o.path(4), Some(vec![]));
    }

    #[test]
    fn vector_indexing() {
        let f = make_field(3, 1, None).unwrap();
        let space = VectorSpace::new(4, &f, DEFAULT_GUARD).unwrap();
        assert_eq!(space.size(), 80);
        assert_eq!(space.basis_point(1), 0);
        assert_eq!(space.basis_point(3), 8);
        assert_eq!(space.vector(8), vec![0, 0, 1, 0]);
        assert_eq!(space.point(&[2, 1, 0, 0]), Some(4));
        assert_eq!(space.point(&[0, 0, 0, 0]), None);
        for pt in 0..space.size() {
            assert_eq!(space.point(&space.vector(pt)), Some(pt));
        }
    }

    #[test]
    fn guard() {
        let f = make_field(4, 1, None);
        assert!(f.is_err());
        let f4 = make_field(2, 2, None).unwrap();
        assert!(matches!(
            VectorSpace::new(12, &f4, DEFAULT_GUARD),
            Err(ActionError::SpaceTooLarge { points: 16_777_215, .. })
        ));
        let f2 = make_field(2, 1, None).unwrap();
        assert!(VectorSpace::new(20, &f2, DEFAULT_GUARD).is_ok());
        assert!(VectorSpace::new(21, &f2, DEFAULT_GUARD).is_err());
    }

    #[test]
    fn first_moved_vector() {
        let f = make_field(3, 1, None).unwrap();
        let space = VectorSpace::new(3, &f, DEFAULT_GUARD).unwrap();
        let g = Matrix::perm_matrix(&f, 3, &[&[2, 3]]).unwrap();
        let scan = (0..space.size()).find(|&pt| space.image(&g, pt) != pt);
        assert_eq!(space.first_moved(&g), scan);
        assert_eq!(space.first_moved(&Matrix::identity(&f, 3)), None);
    }

    #[test]
    fn closed_formulas() {
        assert_eq!(sl_order_q(2, 2), BigCount::from(6u32));
        assert_eq!(sl_order_q(2, 3), BigCount::from(24u32));
        assert_eq!(alt_order(12), BigCount::from(239_500_800u64));
        assert_eq!(alt_order(8), BigCount::from(20_160u32));
        assert_eq!(gl_order_q(2, 3), BigCount::from(48u32));
    }

    #[test]
    fn randomized_matches_deterministic() {
        let f = make_field(3, 1, None).unwrap();
        let space = VectorSpace::new(3, &f, DEFAULT_GUARD).unwrap();
        let a = Matrix::from_int_rows(&f, &[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let b = Matrix::perm_matrix(&f, 3, &[&[1, 2, 3]]).unwrap();
        let det = StabilizerChain::new(&space, &[a.clone(), b.clone()], &ChainOptions::default()).unwrap();
        let rnd = StabilizerChain::new(&space, &[a, b], &ChainOptions::default().randomized(true)).unwrap();
        assert_eq!(det.order(), sl_order_q(3, 3));
        assert_eq!(rnd.order(), det.order());
    }

    #[test]
    fn depth_guard() {
        // a fake action whose "first moved point" never repeats a base point
        // cannot be built from matrices, so check the limit arithmetic instead
        let f = make_field(2, 1, None).unwrap();
        let space = VectorSpace::new(2, &f, DEFAULT_GUARD).unwrap();
        let g = Matrix::from_int_rows(&f, &[vec![0, 1], vec![1, 1]]).unwrap();
        let c = StabilizerChain::new(&space, &[g], &ChainOptions::default()).unwrap();
        assert!(c.base().len() <= 2 * space.dimension());
        assert_eq!(c.order(), BigCount::from(3u32));
    }
}
