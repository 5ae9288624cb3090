//! Finite matrix groups over F_q: breadth-first enumeration and a
//! deterministic Schreier–Sims stabilizer chain on the natural action on F_q⁴.

use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::field::FieldCtx;
use crate::matrix::{Mat4, Vec4};

/// Default enumeration cap.
pub const DEFAULT_CAP: usize = 2_500_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group closure exceeded the cap of {0} elements")]
    OverCap(usize),
    #[error("generator is singular")]
    Singular,
}

/// Enumerated elements with an index for O(1) membership.
#[derive(Clone, Debug)]
pub struct ElementSet {
    elements: Vec<Mat4>,
    index: FxHashMap<Mat4, u32>,
}

impl ElementSet {
    fn with_capacity(n: usize) -> Self {
        let mut index = FxHashMap::default();
        index.reserve(n);
        ElementSet { elements: Vec::with_capacity(n), index }
    }

    fn insert(&mut self, m: Mat4) -> bool {
        if self.index.contains_key(&m) {
            return false;
        }
        self.index.insert(m, self.elements.len() as u32);
        self.elements.push(m);
        true
    }

    pub fn contains(&self, m: &Mat4) -> bool {
        self.index.contains_key(m)
    }

    pub fn position(&self, m: &Mat4) -> Option<usize> {
        self.index.get(m).map(|&i| i as usize)
    }

    pub fn elements(&self) -> &[Mat4] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: Vec4,
    gens: Vec<Mat4>,
    orbit: FxHashMap<Vec4, u32>,
    points: Vec<Vec4>,
    /// `reps[i]` maps the base point to `points[i]`.
    reps: Vec<Mat4>,
    reps_inv: Vec<Mat4>,
    /// Per generator: number of orbit points whose Schreier generator was sifted.
    done: Vec<usize>,
}

impl Level {
    fn new(base: Vec4) -> Self {
        let mut orbit = FxHashMap::default();
        orbit.insert(base, 0);
        Level {
            base,
            gens: Vec::new(),
            orbit,
            points: vec![base],
            reps: vec![Mat4::IDENTITY],
            reps_inv: vec![Mat4::IDENTITY],
            done: Vec::new(),
        }
    }

    fn add_gen(&mut self, g: Mat4, ctx: &FieldCtx) {
        self.gens.push(g);
        self.done.push(0);
        // close the orbit under all generators, new points appended
        let mut i = 0;
        while i < self.points.len() {
            let (pt, rep) = (self.points[i], self.reps[i]);
            for s in 0..self.gens.len() {
                let gen = self.gens[s];
                let img = gen.apply(&pt, ctx);
                if !self.orbit.contains_key(&img) {
                    let r = gen.mul(&rep, ctx);
                    self.orbit.insert(img, self.points.len() as u32);
                    self.points.push(img);
                    self.reps_inv.push(r.inv(ctx).expect("group elements are invertible"));
                    self.reps.push(r);
                }
            }
            i += 1;
        }
    }
}

/// A base and strong generating set.
#[derive(Clone, Debug)]
pub struct StabChain {
    levels: Vec<Level>,
}

impl StabChain {
    pub fn base(&self) -> Vec<Vec4> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.points.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.points.len() as u128).product()
    }

    /// Sift from `start`; returns the residue and the level where sifting stopped.
    fn strip(&self, mut h: Mat4, start: usize, ctx: &FieldCtx) -> (Mat4, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let img = h.apply(&level.base, ctx);
            match level.orbit.get(&img) {
                Some(&i) => h = level.reps_inv[i as usize].mul(&h, ctx),
                None => return (h, l),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, m: &Mat4, ctx: &FieldCtx) -> bool {
        let (h, l) = self.strip(*m, 0, ctx);
        l == self.levels.len() && h.is_identity()
    }
}

/// First standard basis vector moved by `g`.
fn moved_basis_vector(g: &Mat4, ctx: &FieldCtx) -> Option<Vec4> {
    (0..4).map(unit).find(|e| g.apply(e, ctx) != *e)
}

fn unit(i: usize) -> Vec4 {
    let mut v = [0; 4];
    v[i] = 1;
    v
}

/// Deterministic Schreier–Sims.
fn schreier_sims(gens: &[Mat4], ctx: &FieldCtx) -> StabChain {
    let mut chain = StabChain { levels: Vec::new() };
    let gens: Vec<Mat4> = gens.iter().copied().filter(|g| !g.is_identity()).collect();
    if gens.is_empty() {
        return chain;
    }
    // initial base: every non-identity generator moves some base point
    for g in &gens {
        if chain.levels.iter().all(|l| g.apply(&l.base, ctx) == l.base) {
            let b = moved_basis_vector(g, ctx).expect("non-identity matrix moves a basis vector");
            chain.levels.push(Level::new(b));
        }
    }
    for g in &gens {
        for l in 0..chain.levels.len() {
            let fixes_prefix = chain.levels[..l].iter().all(|lv| g.apply(&lv.base, ctx) == lv.base);
            if fixes_prefix {
                chain.levels[l].add_gen(*g, ctx);
            }
        }
    }

    let mut i = chain.levels.len() as isize - 1;
    'outer: while i >= 0 {
        let lvl = i as usize;
        let mut s = 0;
        while s < chain.levels[lvl].gens.len() {
            while chain.levels[lvl].done[s] < chain.levels[lvl].points.len() {
                let level = &chain.levels[lvl];
                let pi = level.done[s];
                let gen = level.gens[s];
                let img = gen.apply(&level.points[pi], ctx);
                let j = level.orbit[&img] as usize;
                let schreier = level.reps_inv[j].mul(&gen, ctx).mul(&level.reps[pi], ctx);
                chain.levels[lvl].done[s] += 1;
                let (h, stop) = chain.strip(schreier, lvl + 1, ctx);
                if stop < chain.levels.len() || !h.is_identity() {
                    if stop == chain.levels.len() {
                        let b = moved_basis_vector(&h, ctx).expect("residue moves a basis vector");
                        chain.levels.push(Level::new(b));
                    }
                    for l in lvl + 1..=stop {
                        chain.levels[l].add_gen(h, ctx);
                    }
                    i = stop as isize;
                    continue 'outer;
                }
            }
            s += 1;
        }
        i -= 1;
    }
    chain
}

#[derive(Clone, Debug)]
pub enum Backend {
    Enumerated(ElementSet),
    Bsgs(StabChain),
}

/// A finite matrix group with exact order and membership.
#[derive(Clone, Debug)]
pub struct GroupHandle {
    pub ctx: Arc<FieldCtx>,
    pub generators: Vec<Mat4>,
    pub backend: Backend,
    pub order: u128,
}

impl GroupHandle {
    pub fn contains(&self, m: &Mat4) -> bool {
        match &self.backend {
            Backend::Enumerated(set) => set.contains(m),
            Backend::Bsgs(chain) => chain.contains(m, &self.ctx),
        }
    }

    pub fn elements(&self) -> Option<&ElementSet> {
        match &self.backend {
            Backend::Enumerated(set) => Some(set),
            Backend::Bsgs(_) => None,
        }
    }

    pub fn is_enumerated(&self) -> bool {
        matches!(self.backend, Backend::Enumerated(_))
    }
}

fn check_invertible(gens: &[Mat4], ctx: &FieldCtx) -> Result<(), GroupError> {
    for g in gens {
        g.inv(ctx).map_err(|_| GroupError::Singular)?;
    }
    Ok(())
}

/// Breadth-first closure under right multiplication by the generators.
pub fn enumerate(ctx: &Arc<FieldCtx>, gens: &[Mat4], cap: usize) -> Result<GroupHandle, GroupError> {
    enumerate_with_hint(ctx, gens, cap, 0)
}

/// As [`enumerate`], presizing the table for `expected` elements.
pub fn enumerate_with_hint(
    ctx: &Arc<FieldCtx>,
    gens: &[Mat4],
    cap: usize,
    expected: usize,
) -> Result<GroupHandle, GroupError> {
    check_invertible(gens, ctx)?;
    let mut set = ElementSet::with_capacity(expected.min(cap).max(16));
    set.insert(Mat4::IDENTITY);
    let mut head = 0;
    while head < set.len() {
        let e = set.elements[head];
        for g in gens {
            if set.insert(e.mul(g, ctx)) && set.len() > cap {
                return Err(GroupError::OverCap(cap));
            }
        }
        head += 1;
    }
    let order = set.len() as u128;
    Ok(GroupHandle { ctx: ctx.clone(), generators: gens.to_vec(), backend: Backend::Enumerated(set), order })
}

/// Stabilizer-chain backed group.
pub fn bsgs(ctx: &Arc<FieldCtx>, gens: &[Mat4]) -> Result<GroupHandle, GroupError> {
    check_invertible(gens, ctx)?;
    let chain = schreier_sims(gens, ctx);
    let order = chain.order();
    Ok(GroupHandle { ctx: ctx.clone(), generators: gens.to_vec(), backend: Backend::Bsgs(chain), order })
}

/// `{a ∈ A : a ∈ B}` as an enumerated group; `A` must be enumerated.
pub fn intersect(a: &GroupHandle, b: &GroupHandle) -> GroupHandle {
    let set_a = a.elements().expect("intersect requires an enumerated left operand");
    let mut set = ElementSet::with_capacity(16);
    for m in set_a.elements() {
        if b.contains(m) {
            set.insert(*m);
        }
    }
    let generators = greedy_generators(set.elements(), &a.ctx);
    let order = set.len() as u128;
    GroupHandle { ctx: a.ctx.clone(), generators, backend: Backend::Enumerated(set), order }
}

/// A small generating set for a finite group given by its elements.
fn greedy_generators(elements: &[Mat4], ctx: &FieldCtx) -> Vec<Mat4> {
    let mut gens = Vec::new();
    let mut closure: FxHashSet<Mat4> = FxHashSet::default();
    closure.insert(Mat4::IDENTITY);
    for e in elements {
        if closure.contains(e) {
            continue;
        }
        gens.push(*e);
        let mut frontier: Vec<Mat4> = closure.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = x.mul(g, ctx);
                if closure.insert(y) {
                    frontier.push(y);
                }
            }
        }
    }
    gens
}

/// Equal orders and mutual generator membership.
pub fn same_group(a: &GroupHandle, b: &GroupHandle) -> bool {
    a.order == b.order
        && a.generators.iter().all(|g| b.contains(g))
        && b.generators.iter().all(|g| a.contains(g))
}
