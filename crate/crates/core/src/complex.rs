//! Free complexes over F2[U_v : v in vars], the grid complex, and the
//! derived constructions (subcomplex, quotient, tensor, cone, variable
//! identification). Homology is only ever taken slice by slice.

use crate::algebra::{Bigrading, GenId, ModuleElement, Monomial, SparseVec, Term, Var};
use crate::grid::GridDiagram;
use crate::state::{for_each_empty_rect, enumerate_states, rect_masks, Gradings, State, StateError};
use rayon::prelude::*;
use std::collections::HashMap;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("generator {gen} has a boundary term outside the subcomplex")]
    NotSubcomplex { gen: GenId },
    #[error("variables {0:?} occur in both factors but are not declared shared")]
    VariableClash(Vec<Var>),
    #[error("map fails the chain-map identity on {} generators (first: {})", .0.len(), .0[0])]
    NotChainMap(Vec<GenId>),
    #[error("cone needs a map between complexes over the same ring")]
    RingMismatch,
    #[error("variable classes overlap at U{}", *.0 as u32 + 1)]
    BadPartition(Var),
    #[error(transparent)]
    State(#[from] StateError),
}

/// Variable substitution used by maps between complexes over different
/// rings; unlisted variables map to themselves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarMap(Vec<Var>);

impl VarMap {
    pub fn identity() -> Self {
        VarMap(Vec::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Var)>) -> Self {
        let mut v: Vec<Var> = Vec::new();
        for (a, b) in pairs {
            if v.len() <= a as usize {
                let start = v.len() as Var;
                v.extend(start..=a);
            }
            v[a as usize] = b;
        }
        VarMap(v)
    }

    #[inline]
    pub fn apply(&self, v: Var) -> Var {
        self.0.get(v as usize).copied().unwrap_or(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i as Var == v)
    }

    pub fn mono(&self, m: &Monomial) -> Monomial {
        if self.is_identity() {
            m.clone()
        } else {
            m.substitute(|v| self.apply(v))
        }
    }
}

/// A finitely generated free bigraded complex over `F2[U_v : v in vars]`.
#[derive(Clone, Debug)]
pub struct FreeComplex {
    vars: Vec<Var>,
    gradings: Vec<Bigrading>,
    diff: Vec<ModuleElement>,
}

impl FreeComplex {
    pub fn new(mut vars: Vec<Var>, gradings: Vec<Bigrading>, diff: Vec<ModuleElement>) -> Self {
        assert_eq!(gradings.len(), diff.len());
        vars.sort_unstable();
        vars.dedup();
        FreeComplex { vars, gradings, diff }
    }

    pub fn len(&self) -> usize {
        self.gradings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gradings.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn grading(&self, g: GenId) -> Bigrading {
        self.gradings[g as usize]
    }

    pub fn gradings(&self) -> &[Bigrading] {
        &self.gradings
    }

    pub fn d(&self, g: GenId) -> &ModuleElement {
        &self.diff[g as usize]
    }

    pub fn term_grading(&self, t: &Term) -> Bigrading {
        self.grading(t.gen).lowered(t.mono.degree())
    }

    pub fn a_max(&self) -> Option<i32> {
        self.gradings.iter().map(|g| g.alexander).max()
    }

    pub fn a_min(&self) -> Option<i32> {
        self.gradings.iter().map(|g| g.alexander).min()
    }

    /// `d` applied to an arbitrary element.
    pub fn apply_d(&self, e: &ModuleElement) -> ModuleElement {
        let mut acc = Vec::new();
        for t in e.terms() {
            for s in self.d(t.gen).terms() {
                acc.push(Term::new(s.mono.mul(&t.mono), s.gen));
            }
        }
        ModuleElement::from_terms(acc)
    }

    /// Generators whose boundary has nonzero boundary.
    pub fn d_squared_failures(&self) -> Vec<GenId> {
        (0..self.len() as GenId)
            .into_par_iter()
            .filter(|&g| !self.apply_d(self.d(g)).is_zero())
            .collect()
    }

    /// Generators with a boundary term not of bidegree `(-1, 0)`.
    pub fn inhomogeneous_generators(&self) -> Vec<GenId> {
        (0..self.len() as GenId)
            .filter(|&g| {
                let want = self.grading(g) + Bigrading::new(-1, 0);
                self.d(g).terms().iter().any(|t| self.term_grading(t) != want)
            })
            .collect()
    }

    /// Restriction to `keep` (generator ids in the new numbering follow the
    /// order of `keep`). Fails if the span of `keep` is not closed under `d`.
    pub fn subcomplex(&self, keep: &[GenId]) -> Result<FreeComplex, ComplexError> {
        let mut new_id = vec![GenId::MAX; self.len()];
        for (k, &g) in keep.iter().enumerate() {
            new_id[g as usize] = k as GenId;
        }
        let mut diff = Vec::with_capacity(keep.len());
        for &g in keep {
            if self.d(g).terms().iter().any(|t| new_id[t.gen as usize] == GenId::MAX) {
                return Err(ComplexError::NotSubcomplex { gen: g });
            }
            diff.push(self.d(g).relabel(|h| new_id[h as usize], |v| v));
        }
        let gradings = keep.iter().map(|&g| self.grading(g)).collect();
        Ok(FreeComplex::new(self.vars.clone(), gradings, diff))
    }

    /// Quotient by the span of the complement of `keep` (a subcomplex).
    pub fn quotient_onto(&self, keep: &[GenId]) -> FreeComplex {
        let mut new_id = vec![GenId::MAX; self.len()];
        for (k, &g) in keep.iter().enumerate() {
            new_id[g as usize] = k as GenId;
        }
        let diff = keep
            .iter()
            .map(|&g| {
                self.d(g)
                    .terms()
                    .iter()
                    .filter(|t| new_id[t.gen as usize] != GenId::MAX)
                    .map(|t| Term::new(t.mono.clone(), new_id[t.gen as usize]))
                    .collect()
            })
            .collect();
        let gradings = keep.iter().map(|&g| self.grading(g)).collect();
        FreeComplex::new(self.vars.clone(), gradings, diff)
    }

    /// Renames variables through `map`; the map must be injective on `vars`
    /// unless merging is intended (see `set_variables_equal`).
    pub fn substitute_vars(&self, map: &VarMap) -> FreeComplex {
        let vars = self.vars.iter().map(|&v| map.apply(v)).collect();
        let diff = self
            .diff
            .par_iter()
            .map(|e| e.relabel(|g| g, |v| map.apply(v)))
            .collect();
        FreeComplex::new(vars, self.gradings.clone(), diff)
    }

    /// Identifies the variables in each class with the class minimum.
    pub fn set_variables_equal(&self, classes: &[Vec<Var>]) -> Result<FreeComplex, ComplexError> {
        Ok(self.substitute_vars(&partition_map(classes)?))
    }

    /// Extends scalars by free variables (`C[U_v]`).
    pub fn adjoin(&self, extra: &[Var]) -> FreeComplex {
        let mut vars = self.vars.clone();
        vars.extend_from_slice(extra);
        FreeComplex::new(vars, self.gradings.clone(), self.diff.clone())
    }

    /// Occupied Maslov gradings at Alexander level `a`.
    pub fn maslov_range(&self, a: i32) -> Vec<i32> {
        let mut ms: Vec<i32> = self
            .gradings
            .iter()
            .filter(|b| b.alexander >= a)
            .map(|b| b.delta() + 2 * a)
            .collect();
        ms.sort_unstable();
        ms.dedup();
        ms
    }

    pub fn slice_basis(&self, m: i32, a: i32) -> SliceBasis {
        SliceBasis::new(self, m, a)
    }

    /// The `(m, a)` slice with its boundary matrix into `(m - 1, a)`.
    pub fn slice(&self, m: i32, a: i32) -> ComplexSlice {
        let basis = self.slice_basis(m, a);
        let target = self.slice_basis(m - 1, a);
        let columns = slice_columns(&basis, &target, |g| self.d(g), &VarMap::identity());
        ComplexSlice { m, a, basis, target_dim: target.dim(), columns }
    }
}

fn partition_map(classes: &[Vec<Var>]) -> Result<VarMap, ComplexError> {
    let mut seen = std::collections::HashSet::new();
    let mut pairs = Vec::new();
    for class in classes {
        let Some(&rep) = class.iter().min() else { continue };
        for &v in class {
            if !seen.insert(v) {
                return Err(ComplexError::BadPartition(v));
            }
            pairs.push((v, rep));
        }
    }
    Ok(VarMap::from_pairs(pairs))
}

/// Ranks monomials of a fixed degree in the ring variables.
#[derive(Clone, Debug)]
pub struct MonomialIndexer {
    vars: Vec<Var>,
    pos: HashMap<Var, usize>,
}

fn binom(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

impl MonomialIndexer {
    pub fn new(vars: &[Var]) -> Self {
        let pos = vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        MonomialIndexer { vars: vars.to_vec(), pos }
    }

    /// Number of monomials of degree `k`.
    pub fn count(&self, k: u32) -> u64 {
        let nv = self.vars.len() as i64;
        if nv == 0 {
            return (k == 0) as u64;
        }
        binom(k as i64 + nv - 1, nv - 1)
    }

    /// Colex rank among monomials of the same degree, or `None` if the
    /// monomial uses a variable outside the ring.
    pub fn rank(&self, m: &Monomial) -> Option<u64> {
        let mut idx = 0usize;
        let mut r = 0u64;
        let mut positions: smallvec::SmallVec<[usize; 16]> = smallvec::SmallVec::new();
        for (v, e) in m.pairs() {
            let p = *self.pos.get(&v)?;
            for _ in 0..e {
                positions.push(p);
            }
        }
        positions.sort_unstable();
        for &p in &positions {
            let c = p + idx;
            idx += 1;
            r += binom(c as i64, idx as i64);
        }
        Some(r)
    }

    pub fn unrank(&self, k: u32, mut r: u64) -> Monomial {
        let mut pairs = Vec::with_capacity(k as usize);
        for i in (1..=k as i64).rev() {
            let mut c = i - 1;
            while binom(c + 1, i) <= r {
                c += 1;
            }
            r -= binom(c, i);
            pairs.push((self.vars[(c - (i - 1)) as usize], 1u16));
        }
        Monomial::from_pairs(pairs)
    }
}

/// Basis of one bigrading of a free complex: every `(monomial, generator)`
/// with the right grading.
#[derive(Clone, Debug)]
pub struct SliceBasis {
    pub m: i32,
    pub a: i32,
    indexer: MonomialIndexer,
    gens: Vec<GenId>,
    degrees: Vec<u32>,
    offsets: Vec<u64>,
    slot: HashMap<GenId, usize>,
    dim: usize,
}

impl SliceBasis {
    fn new(c: &FreeComplex, m: i32, a: i32) -> Self {
        let indexer = MonomialIndexer::new(c.vars());
        let mut gens = Vec::new();
        let mut degrees = Vec::new();
        let mut offsets = Vec::new();
        let mut slot = HashMap::new();
        let mut dim = 0u64;
        let delta = m - 2 * a;
        for (g, b) in c.gradings.iter().enumerate() {
            if b.delta() != delta || b.alexander < a {
                continue;
            }
            let k = (b.alexander - a) as u32;
            slot.insert(g as GenId, gens.len());
            gens.push(g as GenId);
            degrees.push(k);
            offsets.push(dim);
            dim += indexer.count(k);
        }
        SliceBasis { m, a, indexer, gens, degrees, offsets, slot, dim: dim as usize }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bigrading(&self) -> Bigrading {
        Bigrading::new(self.m, self.a)
    }

    /// Index of `mono * gen`, if it lies in this slice.
    pub fn index(&self, mono: &Monomial, gen: GenId) -> Option<u32> {
        let s = *self.slot.get(&gen)?;
        if mono.degree() != self.degrees[s] {
            return None;
        }
        Some((self.offsets[s] + self.indexer.rank(mono)?) as u32)
    }

    pub fn element(&self, idx: u32) -> Term {
        let idx = idx as u64;
        let s = self.offsets.partition_point(|&o| o <= idx) - 1;
        Term::new(self.indexer.unrank(self.degrees[s], idx - self.offsets[s]), self.gens[s])
    }

    /// Iterates `(index, monomial, generator)` over the basis.
    pub fn iter(&self) -> impl Iterator<Item = (u32, Monomial, GenId)> + '_ {
        self.gens.iter().enumerate().flat_map(move |(s, &g)| {
            let k = self.degrees[s];
            let off = self.offsets[s];
            (0..self.indexer.count(k)).map(move |r| ((off + r) as u32, self.indexer.unrank(k, r), g))
        })
    }

    pub fn to_sparse(&self, e: &ModuleElement) -> SparseVec {
        let mut v: Vec<u32> = e
            .terms()
            .iter()
            .map(|t| self.index(&t.mono, t.gen).expect("term outside slice"))
            .collect();
        v.sort_unstable();
        v
    }

    pub fn to_element(&self, v: &[u32]) -> ModuleElement {
        ModuleElement::from_terms(v.iter().map(|&i| self.element(i)).collect())
    }
}

/// Columns of the matrix of `image` (a map given on generators, with
/// variables renamed by `vmap`) from `src` to `tgt`.
pub fn slice_columns<'a, F>(src: &SliceBasis, tgt: &SliceBasis, image: F, vmap: &VarMap) -> Vec<SparseVec>
where
    F: Fn(GenId) -> &'a ModuleElement + Sync,
{
    let blocks: Vec<(usize, GenId)> = src.gens.iter().copied().enumerate().collect();
    blocks
        .par_iter()
        .flat_map_iter(|&(s, g)| {
            let k = src.degrees[s];
            let img = image(g);
            (0..src.indexer.count(k)).map(move |r| {
                let m = vmap.mono(&src.indexer.unrank(k, r));
                let mut col: Vec<u32> = img
                    .terms()
                    .iter()
                    .map(|t| tgt.index(&t.mono.mul(&m), t.gen).expect("map leaves target slice"))
                    .collect();
                col.sort_unstable();
                dedup_pairs(col)
            })
        })
        .collect()
}

/// Removes equal adjacent entries in pairs (F2 cancellation).
pub fn dedup_pairs(v: Vec<u32>) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(v.len());
    for x in v {
        if out.last() == Some(&x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// One bigrading of a complex with its boundary matrix (columns indexed by
/// the basis, rows by the `(m - 1, a)` basis).
#[derive(Clone, Debug)]
pub struct ComplexSlice {
    pub m: i32,
    pub a: i32,
    pub basis: SliceBasis,
    pub target_dim: usize,
    pub columns: Vec<SparseVec>,
}

impl ComplexSlice {
    /// Sparse triplet dump: a header line `rows cols`, then `row col` per
    /// nonzero entry.
    pub fn write_triplets(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.target_dim, self.basis.dim())?;
        for (c, col) in self.columns.iter().enumerate() {
            for r in col {
                writeln!(w, "{r} {c}")?;
            }
        }
        Ok(())
    }
}

/// A module map between free complexes: images of generators plus a
/// variable substitution, homogeneous of bidegree `degree`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub vars: VarMap,
    pub degree: Bigrading,
    pub images: Vec<ModuleElement>,
}

impl ChainMap {
    pub fn new(vars: VarMap, degree: Bigrading, images: Vec<ModuleElement>) -> Self {
        ChainMap { vars, degree, images }
    }

    pub fn image(&self, g: GenId) -> &ModuleElement {
        &self.images[g as usize]
    }

    pub fn apply(&self, e: &ModuleElement) -> ModuleElement {
        e.map(|g| self.images[g as usize].clone(), |v| self.vars.apply(v))
    }

    /// Source generators where `f d = d f` fails.
    pub fn chain_map_failures(&self, src: &FreeComplex, tgt: &FreeComplex) -> Vec<GenId> {
        (0..src.len() as GenId)
            .into_par_iter()
            .filter(|&g| self.apply(src.d(g)) != tgt.apply_d(self.image(g)))
            .collect()
    }

    /// Source generators whose image has a term of the wrong bigrading.
    pub fn inhomogeneous_generators(&self, src: &FreeComplex, tgt: &FreeComplex) -> Vec<GenId> {
        (0..src.len() as GenId)
            .filter(|&g| {
                let want = src.grading(g) + self.degree;
                self.image(g).terms().iter().any(|t| tgt.term_grading(t) != want)
            })
            .collect()
    }

    /// Matrix of the map from the `(m, a)` slice of `src`.
    pub fn slice_columns(&self, src: &SliceBasis, tgt: &SliceBasis) -> Vec<SparseVec> {
        slice_columns(src, tgt, |g| self.image(g), &self.vars)
    }

    /// `f (x) g`: generator `(a, b)` (id `a * g.len + b`) goes to the
    /// products of the image terms, with target ids `s * g_tgt_len + t`.
    pub fn tensor(f: &ChainMap, g: &ChainMap, g_tgt_len: usize, vars: VarMap) -> ChainMap {
        let images = f
            .images
            .par_iter()
            .flat_map_iter(|fa| {
                g.images.iter().map(move |gb| {
                    let mut acc = Vec::with_capacity(fa.len() * gb.len());
                    for s in fa.terms() {
                        for t in gb.terms() {
                            acc.push(Term::new(s.mono.mul(&t.mono), s.gen * g_tgt_len as GenId + t.gen));
                        }
                    }
                    ModuleElement::from_terms(acc)
                })
            })
            .collect();
        ChainMap::new(vars, f.degree + g.degree, images)
    }
}

/// `c1 (x) c2` over the polynomial ring in the shared variables; generator
/// `(i, j)` has id `i * c2.len() + j`.
pub fn tensor(c1: &FreeComplex, c2: &FreeComplex, shared: &[Var]) -> Result<FreeComplex, ComplexError> {
    let clash: Vec<Var> = c1
        .vars
        .iter()
        .copied()
        .filter(|v| c2.vars.contains(v) && !shared.contains(v))
        .collect();
    if !clash.is_empty() {
        return Err(ComplexError::VariableClash(clash));
    }
    let n2 = c2.len() as GenId;
    let mut gradings = Vec::with_capacity(c1.len() * c2.len());
    let mut diff = Vec::with_capacity(c1.len() * c2.len());
    for i in 0..c1.len() as GenId {
        for j in 0..n2 {
            gradings.push(c1.grading(i) + c2.grading(j));
            let mut acc = Vec::new();
            for t in c1.d(i).terms() {
                acc.push(Term::new(t.mono.clone(), t.gen * n2 + j));
            }
            for t in c2.d(j).terms() {
                acc.push(Term::new(t.mono.clone(), i * n2 + t.gen));
            }
            diff.push(ModuleElement::from_terms(acc));
        }
    }
    let mut vars = c1.vars.clone();
    vars.extend_from_slice(&c2.vars);
    Ok(FreeComplex::new(vars, gradings, diff))
}

/// Mapping cone of an R-linear chain map. Source generators come first and
/// are shifted by `degree(f) + (1, 0)` so the total differential has
/// bidegree `(-1, 0)`.
#[derive(Clone, Debug)]
pub struct ConeComplex {
    pub complex: FreeComplex,
    pub source_len: usize,
    pub shift: Bigrading,
}

pub fn cone(f: &ChainMap, src: &FreeComplex, tgt: &FreeComplex) -> Result<ConeComplex, ComplexError> {
    if !f.vars.is_identity() || src.vars != tgt.vars {
        return Err(ComplexError::RingMismatch);
    }
    let bad = f.chain_map_failures(src, tgt);
    if !bad.is_empty() {
        return Err(ComplexError::NotChainMap(bad));
    }
    let shift = f.degree + Bigrading::new(1, 0);
    let ns = src.len() as GenId;
    let mut gradings: Vec<Bigrading> = src.gradings.iter().map(|&b| b + shift).collect();
    gradings.extend_from_slice(&tgt.gradings);
    let mut diff = Vec::with_capacity(src.len() + tgt.len());
    for g in 0..ns {
        let mut acc: Vec<Term> = src.d(g).terms().to_vec();
        acc.extend(f.image(g).terms().iter().map(|t| Term::new(t.mono.clone(), t.gen + ns)));
        diff.push(ModuleElement::from_terms(acc));
    }
    for g in 0..tgt.len() as GenId {
        diff.push(tgt.d(g).relabel(|h| h + ns, |v| v));
    }
    Ok(ConeComplex {
        complex: FreeComplex::new(src.vars.clone(), gradings, diff),
        source_len: src.len(),
        shift,
    })
}

/// Multiplication by `U_a + U_b` on `c`, a chain map of bidegree `(-2, -1)`.
pub fn multiply_by_sum(c: &FreeComplex, a: Var, b: Var) -> ChainMap {
    let images = (0..c.len() as GenId)
        .map(|g| {
            ModuleElement::from_terms(vec![Term::new(Monomial::var(a), g), Term::new(Monomial::var(b), g)])
        })
        .collect();
    ChainMap::new(VarMap::identity(), Bigrading::new(-2, -1), images)
}

/// `GC^-(d)`, possibly restricted to a set of states.
#[derive(Clone, Debug)]
pub struct GridComplex {
    pub diagram: GridDiagram,
    pub states: Vec<State>,
    pub complex: FreeComplex,
    index: HashMap<State, GenId>,
}

/// How boundary terms leaving the chosen state set are treated.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Restriction {
    /// They must not occur.
    Subcomplex,
    /// They are dropped.
    Quotient,
}

/// Boundary of a state in `GC^-(d)`: empty rectangles avoiding X, weighted
/// by the O-variables they contain. Variable `v` belongs to the O in column
/// `v`.
pub fn grid_boundary(d: &GridDiagram, x: &State) -> Vec<(Monomial, State)> {
    let st = x.as_bytes();
    let mut out = Vec::new();
    for_each_empty_rect(st, |i, j, w, h| {
        let (om, xm) = rect_masks(d, i, st[i] as usize, w, h);
        if xm == 0 {
            let mut y = x.clone();
            y.bytes_mut().swap(i, j);
            out.push((mask_monomial(om), y));
        }
    });
    out
}

pub(crate) fn mask_monomial(mut m: u64) -> Monomial {
    let mut vars: smallvec::SmallVec<[Var; 8]> = smallvec::SmallVec::new();
    while m != 0 {
        vars.push(m.trailing_zeros() as Var);
        m &= m - 1;
    }
    Monomial::from_vars(vars)
}

impl GridComplex {
    /// The full minus complex on all `n!` states.
    pub fn build(d: &GridDiagram) -> Result<GridComplex, ComplexError> {
        let states: Vec<State> = enumerate_states(d.n()).collect();
        Self::on_states(d, states, Restriction::Subcomplex)
    }

    /// The complex spanned by `states` (a subcomplex, or a quotient
    /// depending on `mode`).
    pub fn on_states(d: &GridDiagram, states: Vec<State>, mode: Restriction) -> Result<GridComplex, ComplexError> {
        let gr = Gradings::new(d);
        let index: HashMap<State, GenId> = states.iter().enumerate().map(|(i, s)| (s.clone(), i as GenId)).collect();
        let gradings = states
            .par_iter()
            .map(|s| gr.bigrading(s))
            .collect::<Result<Vec<_>, _>>()?;
        let diff = states
            .par_iter()
            .enumerate()
            .map(|(g, s)| {
                let mut acc = Vec::new();
                for (m, y) in grid_boundary(d, s) {
                    match index.get(&y) {
                        Some(&h) => acc.push(Term::new(m, h)),
                        None if mode == Restriction::Quotient => {}
                        None => return Err(ComplexError::NotSubcomplex { gen: g as GenId }),
                    }
                }
                Ok(ModuleElement::from_terms(acc))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let vars = (0..d.n() as Var).collect();
        Ok(GridComplex {
            diagram: d.clone(),
            states,
            complex: FreeComplex::new(vars, gradings, diff),
            index,
        })
    }

    pub fn id(&self, s: &State) -> Option<GenId> {
        self.index.get(s).copied()
    }

    pub fn state(&self, g: GenId) -> &State {
        &self.states[g as usize]
    }

    /// Converts `(monomial, state)` pairs into an element of this complex.
    pub fn element(&self, terms: impl IntoIterator<Item = (Monomial, State)>) -> ModuleElement {
        ModuleElement::from_terms(
            terms
                .into_iter()
                .map(|(m, s)| Term::new(m, self.id(&s).expect("state in complex")))
                .collect(),
        )
    }
}

/// Convenience for `GridComplex::build`.
pub fn build_minus_complex(d: &GridDiagram) -> Result<GridComplex, ComplexError> {
    GridComplex::build(d)
}
