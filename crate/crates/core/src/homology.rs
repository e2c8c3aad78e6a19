//! Homology slice by slice over F2, the F[U]-module structure and tau.

use crate::algebra::{sparse_rank, xor_sorted, Bigrading, BigradedUModule, Echelon, F2Matrix, ModuleElement, SparseVec, Torsion, Var};
use crate::complex::{dedup_pairs, slice_columns, ChainMap, FreeComplex, SliceBasis, VarMap};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomologyError {
    #[error("module structure not resolved at probe depth {0}")]
    NeedDeeperProbe(u32),
    #[error("window too small to resolve the module structure")]
    WindowTooSmall,
    #[error("element is not a cycle")]
    NotACycle,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("class lies below the computed window")]
    BelowWindow,
    #[error("complex has no generators")]
    Empty,
    #[error("map must have bidegree (0,0)")]
    BadDegree,
}

/// A bigrading window `M_LO:M_HI,A_LO:A_HI` (inclusive).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Window {
    pub m_lo: i32,
    pub m_hi: i32,
    pub a_lo: i32,
    pub a_hi: i32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WindowError {
    #[error("expected M_LO:M_HI,A_LO:A_HI, got {0:?}")]
    Syntax(String),
    #[error("window bounds out of order: {0:?}")]
    Unordered(String),
}

impl Window {
    pub fn contains(&self, b: Bigrading) -> bool {
        (self.m_lo..=self.m_hi).contains(&b.maslov) && (self.a_lo..=self.a_hi).contains(&b.alexander)
    }

    pub fn levels(&self) -> std::ops::RangeInclusive<i32> {
        self.a_lo..=self.a_hi
    }
}

impl std::str::FromStr for Window {
    type Err = WindowError;

    fn from_str(s: &str) -> Result<Self, WindowError> {
        let bad = || WindowError::Syntax(s.to_string());
        let pair = |t: &str| -> Result<(i32, i32), WindowError> {
            let (lo, hi) = t.split_once(':').ok_or_else(bad)?;
            Ok((lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?))
        };
        let (m, a) = s.split_once(',').ok_or_else(bad)?;
        let ((m_lo, m_hi), (a_lo, a_hi)) = (pair(m)?, pair(a)?);
        if m_lo > m_hi || a_lo > a_hi {
            return Err(WindowError::Unordered(s.to_string()));
        }
        Ok(Window { m_lo, m_hi, a_lo, a_hi })
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{},{}:{}", self.m_lo, self.m_hi, self.a_lo, self.a_hi)
    }
}

const NONE: u32 = u32::MAX;

struct Reduced {
    /// Nonzero reduced columns, with distinct leading indices.
    r: Vec<SparseVec>,
    /// Columns that reduced to zero, with the combination that killed them.
    zero: Vec<(u32, SparseVec)>,
}

/// Column reduction by leading index. Columns flagged in `cleared` are known
/// to reduce to zero and are skipped.
fn reduce_columns(cols: Vec<SparseVec>, nrows: usize, cleared: &[bool], track: bool) -> Reduced {
    let mut by_low = vec![NONE; nrows];
    let mut r: Vec<SparseVec> = Vec::new();
    let mut vs: Vec<SparseVec> = Vec::new();
    let mut zero = Vec::new();
    for (j, mut col) in cols.into_iter().enumerate() {
        if cleared.get(j).copied().unwrap_or(false) {
            continue;
        }
        let mut v: SparseVec = if track { vec![j as u32] } else { Vec::new() };
        while let Some(&low) = col.last() {
            let p = by_low[low as usize];
            if p == NONE {
                break;
            }
            col = xor_sorted(&col, &r[p as usize]);
            if track {
                v = xor_sorted(&v, &vs[p as usize]);
            }
        }
        match col.last() {
            None => zero.push((j as u32, v)),
            Some(&low) => {
                by_low[low as usize] = r.len() as u32;
                r.push(col);
                vs.push(v);
            }
        }
    }
    Reduced { r, zero }
}

fn lows_mask(r: &[SparseVec], dim: usize) -> Vec<bool> {
    let mut m = vec![false; dim];
    for c in r {
        m[*c.last().unwrap() as usize] = true;
    }
    m
}

/// A finite F2 complex `C_m -> C_{m-1}` (one Alexander level).
#[derive(Clone, Debug, Default)]
pub struct LevelComplex {
    pub dims: BTreeMap<i32, usize>,
    /// `d[m]`: columns of the boundary map out of `C_m`.
    pub d: BTreeMap<i32, Vec<SparseVec>>,
}

impl LevelComplex {
    pub fn of(c: &FreeComplex, a: i32) -> Self {
        let ms = c.maslov_range(a);
        let bases: BTreeMap<i32, SliceBasis> = ms.iter().map(|&m| (m, c.slice_basis(m, a))).collect();
        let mut lc = LevelComplex::default();
        for (&m, b) in &bases {
            lc.dims.insert(m, b.dim());
            let cols = match bases.get(&(m - 1)) {
                Some(t) => slice_columns(b, t, |g| c.d(g), &VarMap::identity()),
                None => vec![Vec::new(); b.dim()],
            };
            lc.d.insert(m, cols);
        }
        lc
    }

    /// The cone of a bidegree-(0,0) chain map at one Alexander level:
    /// `Cone_m = src_{m-1} + tgt_m`.
    pub fn cone(f: &ChainMap, src: &FreeComplex, tgt: &FreeComplex, a: i32) -> Result<Self, HomologyError> {
        if f.degree != Bigrading::new(0, 0) {
            return Err(HomologyError::BadDegree);
        }
        let s = LevelComplex::of(src, a);
        let t = LevelComplex::of(tgt, a);
        let mut ms: Vec<i32> = s.dims.keys().map(|m| m + 1).chain(t.dims.keys().copied()).collect();
        ms.sort_unstable();
        ms.dedup();
        let sdim = |m: i32| s.dims.get(&m).copied().unwrap_or(0);
        let tdim = |m: i32| t.dims.get(&m).copied().unwrap_or(0);
        let mut lc = LevelComplex::default();
        for &m in &ms {
            lc.dims.insert(m, sdim(m - 1) + tdim(m));
            let off = sdim(m - 2) as u32;
            let mut cols = Vec::with_capacity(sdim(m - 1) + tdim(m));
            if sdim(m - 1) > 0 {
                let fcols = if tdim(m - 1) > 0 {
                    f.slice_columns(&src.slice_basis(m - 1, a), &tgt.slice_basis(m - 1, a))
                } else {
                    vec![Vec::new(); sdim(m - 1)]
                };
                for (dcol, fcol) in s.d[&(m - 1)].iter().zip(fcols) {
                    let mut col = dcol.clone();
                    col.extend(fcol.iter().map(|i| i + off));
                    cols.push(col);
                }
            }
            if tdim(m) > 0 {
                for dcol in &t.d[&m] {
                    cols.push(dcol.iter().map(|i| i + off).collect());
                }
            }
            lc.d.insert(m, cols);
        }
        Ok(lc)
    }

    /// Homology dimension at every Maslov grading.
    pub fn homology_dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        let mut cleared: Vec<bool> = Vec::new();
        let mut rank_in = 0usize;
        for (&m, &dim) in self.dims.iter().rev() {
            if cleared.len() != dim {
                cleared = vec![false; dim];
            }
            let nrows = self.dims.get(&(m - 1)).copied().unwrap_or(0);
            let red = reduce_columns(self.d[&m].clone(), nrows, &cleared, false);
            let rank_out = red.r.len();
            out.insert(m, dim - rank_out - rank_in);
            rank_in = rank_out;
            cleared = lows_mask(&red.r, nrows);
        }
        out
    }
}

/// Homology at one bigrading: representing cycles and the machinery to
/// express any cycle in terms of them.
#[derive(Clone, Debug)]
pub struct HomologySlice {
    pub bigrading: Bigrading,
    pub basis: SliceBasis,
    boundaries: Echelon,
    reps: Vec<SparseVec>,
    rep_of_low: HashMap<u32, usize>,
}

impl HomologySlice {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn cycles(&self) -> &[SparseVec] {
        &self.reps
    }

    pub fn cycle(&self, k: usize) -> ModuleElement {
        self.basis.to_element(&self.reps[k])
    }

    /// Coordinates of the class of `z` in the basis of representing cycles.
    pub fn coordinates(&self, z: &[u32]) -> Result<Vec<bool>, HomologyError> {
        let mut z: SparseVec = z.to_vec();
        let mut coords = vec![false; self.reps.len()];
        while let Some(&low) = z.last() {
            if let Some(b) = self.boundaries.pivot_of(low) {
                z = xor_sorted(&z, b);
            } else if let Some(&k) = self.rep_of_low.get(&low) {
                z = xor_sorted(&z, &self.reps[k]);
                coords[k] ^= true;
            } else {
                return Err(HomologyError::NotACycle);
            }
        }
        Ok(coords)
    }

    pub fn is_boundary(&self, z: &[u32]) -> bool {
        self.boundaries.contains(z.to_vec())
    }
}

/// All homology slices at one Alexander level.
#[derive(Clone, Debug)]
pub struct HomologyLevel {
    pub a: i32,
    pub slices: BTreeMap<i32, HomologySlice>,
}

impl HomologyLevel {
    pub fn compute(c: &FreeComplex, a: i32) -> Self {
        let ms = c.maslov_range(a);
        let mut bases: BTreeMap<i32, SliceBasis> = ms.iter().map(|&m| (m, c.slice_basis(m, a))).collect();
        let mut slices = BTreeMap::new();
        let mut incoming: Vec<SparseVec> = Vec::new();
        let mut cleared: Vec<bool> = Vec::new();
        for &m in ms.iter().rev() {
            let basis = bases.remove(&m).unwrap();
            let dim = basis.dim();
            if cleared.len() != dim {
                cleared = vec![false; dim];
                incoming.clear();
            }
            let (cols, nrows) = match bases.get(&(m - 1)) {
                Some(t) => (slice_columns(&basis, t, |g| c.d(g), &VarMap::identity()), t.dim()),
                None => (vec![Vec::new(); dim], 0),
            };
            let red = reduce_columns(cols, nrows, &cleared, true);
            let reps: Vec<SparseVec> = red.zero.into_iter().map(|(_, v)| v).collect();
            let rep_of_low = reps.iter().enumerate().map(|(k, v)| (*v.last().unwrap(), k)).collect();
            let boundaries = Echelon::from_reduced(dim, std::mem::take(&mut incoming));
            cleared = lows_mask(&red.r, nrows);
            incoming = red.r;
            slices.insert(
                m,
                HomologySlice { bigrading: Bigrading::new(m, a), basis, boundaries, reps, rep_of_low },
            );
        }
        HomologyLevel { a, slices }
    }
}

/// Homology at a single bigrading.
pub fn homology_slice(c: &FreeComplex, m: i32, a: i32) -> Option<HomologySlice> {
    HomologyLevel::compute(c, a).slices.remove(&m)
}

/// Where a homogeneous cycle sits in the module structure.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassLocation {
    Zero,
    /// Killed by `U^order` and by no smaller power.
    Torsion { order: u32 },
    /// Survives every power of U in the window; it lies `power` steps of U
    /// below the tower generator.
    NonTorsion { power: u32 },
}

#[derive(Clone, Debug)]
pub struct Bar {
    pub birth: i32,
    /// Last level where the class is nonzero; `None` if alive at the bottom.
    pub last: Option<i32>,
    pub delta: i32,
    pub cycle: ModuleElement,
}

impl Bar {
    pub fn generator(&self) -> Bigrading {
        Bigrading::new(self.delta + 2 * self.birth, self.birth)
    }
}

#[derive(Clone, Debug)]
pub struct UModuleResult {
    pub module: BigradedUModule,
    pub tower_cycle: ModuleElement,
    pub torsion_cycles: Vec<(Torsion, ModuleElement)>,
    pub depth: u32,
    /// Nonzero homology dimensions in the window.
    pub dims: BTreeMap<Bigrading, usize>,
}

impl UModuleResult {
    pub fn tau(&self) -> i32 {
        -self.module.towers[0].alexander
    }
}

/// Incrementally deepening homology computation for one complex, with U
/// acting as multiplication by a designated variable.
pub struct HomologyEngine<'c> {
    c: &'c FreeComplex,
    u: Var,
    a_hi: i32,
    levels: Vec<HomologyLevel>,
    umaps: HashMap<Bigrading, F2Matrix>,
}

impl<'c> HomologyEngine<'c> {
    pub fn new(c: &'c FreeComplex) -> Result<Self, HomologyError> {
        let u = *c.vars().first().ok_or(HomologyError::Empty)?;
        Self::with_variable(c, u)
    }

    pub fn with_variable(c: &'c FreeComplex, u: Var) -> Result<Self, HomologyError> {
        let a_hi = c.a_max().ok_or(HomologyError::Empty)?;
        Ok(HomologyEngine { c, u, a_hi, levels: Vec::new(), umaps: HashMap::new() })
    }

    pub fn a_max(&self) -> i32 {
        self.a_hi
    }

    pub fn lowest(&self) -> i32 {
        self.a_hi + 1 - self.levels.len() as i32
    }

    /// Computes levels down to `a_lo` (inclusive).
    pub fn extend_to(&mut self, a_lo: i32) {
        let from = self.lowest() - 1;
        if a_lo > from {
            return;
        }
        let c = self.c;
        let new: Vec<HomologyLevel> = (a_lo..=from).rev().collect::<Vec<_>>().into_par_iter().map(|a| HomologyLevel::compute(c, a)).collect();
        let first_new = self.levels.len();
        self.levels.extend(new);
        let start = first_new.max(1);
        for li in start..self.levels.len() {
            let (upper, lower) = self.levels.split_at(li);
            let hi = &upper[li - 1];
            let lo = &lower[0];
            let maps: Vec<(Bigrading, F2Matrix)> = hi
                .slices
                .par_iter()
                .map(|(&m, s)| (Bigrading::new(m, hi.a), u_matrix(self.u, s, lo.slices.get(&(m - 2)))))
                .collect();
            self.umaps.extend(maps);
        }
    }

    pub fn level(&self, a: i32) -> Option<&HomologyLevel> {
        if a > self.a_hi || a < self.lowest() {
            return None;
        }
        self.levels.get((self.a_hi - a) as usize)
    }

    pub fn slice(&self, m: i32, a: i32) -> Option<&HomologySlice> {
        self.level(a)?.slices.get(&m)
    }

    pub fn dim(&self, at: Bigrading) -> usize {
        self.slice(at.maslov, at.alexander).map_or(0, |s| s.dim())
    }

    /// Matrix of U from `at` to `at - (2, 1)`.
    pub fn u_map(&self, at: Bigrading) -> Option<&F2Matrix> {
        self.umaps.get(&at)
    }

    fn total_dim(&self, a: i32) -> usize {
        self.level(a).map_or(0, |l| l.slices.values().map(|s| s.dim()).sum())
    }

    /// Decomposes the computed window into bars, one list per diagonal.
    pub fn bars(&self) -> Vec<Bar> {
        let lo = self.lowest();
        let mut deltas: Vec<i32> = self
            .levels
            .iter()
            .flat_map(|l| l.slices.iter().filter(|(_, s)| s.dim() > 0).map(move |(&m, _)| m - 2 * l.a))
            .collect();
        deltas.sort_unstable();
        deltas.dedup();
        let mut out = Vec::new();
        for delta in deltas {
            out.extend(self.bars_on_diagonal(delta, lo));
        }
        out
    }

    fn bars_on_diagonal(&self, delta: i32, lo: i32) -> Vec<Bar> {
        struct Raw {
            birth: i32,
            rep: Vec<bool>,
            hist: Vec<Vec<bool>>,
            last: Option<i32>,
        }
        let at = |a: i32| Bigrading::new(delta + 2 * a, a);
        let mut bars: Vec<Raw> = Vec::new();
        let mut alive: Vec<usize> = Vec::new();
        for a in (lo..=self.a_hi).rev() {
            let dim = self.dim(at(a));
            // echelon rows: (vector, combination over bar ids)
            let mut ech: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
            let mut still = Vec::new();
            if a < self.a_hi {
                for &b in &alive {
                    let prev = bars[b].hist.last().unwrap().clone();
                    let img = match self.u_map(at(a + 1)) {
                        Some(u) => apply(u, &prev),
                        None => vec![false; dim],
                    };
                    let (rest, comb) = reduce_dense(&ech, img.clone(), vec![b]);
                    if rest.iter().any(|&x| x) {
                        ech.push((rest, comb));
                        bars[b].hist.push(img);
                        still.push(b);
                    } else {
                        // img(b) = sum of images of older bars: move b's
                        // generator so that it dies here (elder rule)
                        let birth = bars[b].birth;
                        for o in comb.into_iter().filter(|&o| o != b) {
                            let h = bars[o].hist[(bars[o].birth - birth) as usize].clone();
                            for (x, y) in bars[b].rep.iter_mut().zip(h) {
                                *x ^= y;
                            }
                        }
                        bars[b].last = Some(a + 1);
                    }
                }
            }
            for j in 0..dim {
                let mut e = vec![false; dim];
                e[j] = true;
                let (rest, comb) = reduce_dense(&ech, e.clone(), vec![bars.len()]);
                if rest.iter().any(|&x| x) {
                    ech.push((rest, comb));
                    still.push(bars.len());
                    bars.push(Raw { birth: a, rep: e.clone(), hist: vec![e], last: None });
                }
            }
            alive = still;
        }
        bars.into_iter()
            .map(|r| {
                let slice = self.slice(delta + 2 * r.birth, r.birth).expect("born in a nonzero slice");
                let mut v: SparseVec = Vec::new();
                for (k, &bit) in r.rep.iter().enumerate() {
                    if bit {
                        v = xor_sorted(&v, &slice.cycles()[k]);
                    }
                }
                Bar { birth: r.birth, last: r.last, delta, cycle: slice.basis.to_element(&v) }
            })
            .collect()
    }

    /// The module structure if the window resolves it: exactly one class
    /// survives to the bottom, it was born above the bottom level, and the
    /// two lowest levels carry nothing else.
    pub fn structure(&self) -> Result<UModuleResult, HomologyError> {
        let depth = (self.a_hi - self.lowest()) as u32;
        let lo = self.lowest();
        let bars = self.bars();
        let open: Vec<&Bar> = bars.iter().filter(|b| b.last.is_none()).collect();
        let resolved = self.levels.len() >= 2
            && open.len() == 1
            && open[0].birth > lo
            && self.total_dim(lo) == 1
            && self.total_dim(lo + 1) == 1;
        if !resolved {
            return Err(HomologyError::NeedDeeperProbe(depth));
        }
        let mut torsion_cycles: Vec<(Torsion, ModuleElement)> = bars
            .iter()
            .filter_map(|b| {
                b.last.map(|l| (Torsion { at: b.generator(), order: (b.birth - l + 1) as u32 }, b.cycle.clone()))
            })
            .collect();
        torsion_cycles.sort_by_key(|x| x.0);
        let module = BigradedUModule::new(vec![open[0].generator()], torsion_cycles.iter().map(|t| t.0).collect());
        let dims = self
            .levels
            .iter()
            .flat_map(|l| l.slices.iter().filter(|(_, s)| s.dim() > 0).map(move |(&m, s)| (Bigrading::new(m, l.a), s.dim())))
            .collect();
        Ok(UModuleResult { module, tower_cycle: open[0].cycle.clone(), torsion_cycles, depth, dims })
    }

    /// Deepens one level at a time until the structure is resolved or the
    /// depth reaches `max_depth`.
    pub fn resolve(&mut self, max_depth: u32) -> Result<UModuleResult, HomologyError> {
        self.extend_to(self.a_hi - 1);
        loop {
            match self.structure() {
                Ok(r) => return Ok(r),
                Err(HomologyError::NeedDeeperProbe(d)) if d < max_depth => {
                    let next = self.lowest() - 1;
                    self.extend_to(next);
                }
                Err(e) => return Err(e),
            }
        }
    }

    /// Locates the class of a homogeneous cycle.
    pub fn locate(&self, z: &ModuleElement) -> Result<ClassLocation, HomologyError> {
        if z.is_zero() {
            return Ok(ClassLocation::Zero);
        }
        let g = self.c.term_grading(&z.terms()[0]);
        if z.terms().iter().any(|t| self.c.term_grading(t) != g) {
            return Err(HomologyError::NotHomogeneous);
        }
        if g.alexander > self.a_hi {
            return Err(HomologyError::NotACycle);
        }
        let slice = self.slice(g.maslov, g.alexander).ok_or(HomologyError::BelowWindow)?;
        if !self.c.apply_d(z).is_zero() {
            return Err(HomologyError::NotACycle);
        }
        let mut v = slice.coordinates(&slice.basis.to_sparse(z))?;
        let mut at = g;
        let mut k = 0u32;
        while v.iter().any(|&b| b) {
            if at.alexander == self.lowest() {
                let tower = self.structure()?.module.towers[0];
                return Ok(ClassLocation::NonTorsion { power: (tower.alexander - g.alexander) as u32 });
            }
            v = match self.u_map(at) {
                Some(u) => apply(u, &v),
                None => Vec::new(),
            };
            at = at.lowered(1);
            k += 1;
        }
        Ok(if k == 0 { ClassLocation::Zero } else { ClassLocation::Torsion { order: k } })
    }
}

fn apply(m: &F2Matrix, v: &[bool]) -> Vec<bool> {
    (0..m.rows())
        .map(|r| (0..m.cols()).filter(|&c| v[c] && m.get(r, c)).count() % 2 == 1)
        .collect()
}

/// Reduces `v` against dense echelon rows (leading index = first set bit),
/// accumulating the combination of bar ids.
fn reduce_dense(ech: &[(Vec<bool>, Vec<usize>)], mut v: Vec<bool>, mut comb: Vec<usize>) -> (Vec<bool>, Vec<usize>) {
    while let Some(lead) = v.iter().position(|&b| b) {
        let Some((row, c)) = ech.iter().find(|(r, _)| r.iter().position(|&b| b) == Some(lead)) else { break };
        for (x, y) in v.iter_mut().zip(row) {
            *x ^= *y;
        }
        for &id in c {
            if let Some(p) = comb.iter().position(|&q| q == id) {
                comb.swap_remove(p);
            } else {
                comb.push(id);
            }
        }
    }
    (v, comb)
}

fn u_matrix(u: Var, hi: &HomologySlice, lo: Option<&HomologySlice>) -> F2Matrix {
    let Some(lo) = lo else {
        return F2Matrix::zeros(0, hi.dim());
    };
    let mut m = F2Matrix::zeros(lo.dim(), hi.dim());
    for (k, z) in hi.cycles().iter().enumerate() {
        let mut w: SparseVec = z
            .iter()
            .map(|&i| {
                let t = hi.basis.element(i);
                lo.basis.index(&t.mono.mul_var(u), t.gen).expect("U-image in slice")
            })
            .collect();
        w.sort_unstable();
        let w = dedup_pairs(w);
        let coords = lo.coordinates(&w).expect("U maps cycles to cycles");
        for (r, bit) in coords.into_iter().enumerate() {
            if bit {
                m.set(r, k, true);
            }
        }
    }
    m
}

/// Depth used when none is given: the spread of generator Alexander
/// gradings plus four.
pub fn default_probe_depth(c: &FreeComplex) -> u32 {
    match (c.a_max(), c.a_min()) {
        (Some(hi), Some(lo)) => (hi - lo + 4) as u32,
        _ => 0,
    }
}

/// Module structure from the slices `A_max .. A_max - probe_depth`.
pub fn module_structure(c: &FreeComplex, probe_depth: u32) -> Result<UModuleResult, HomologyError> {
    let mut e = HomologyEngine::new(c)?;
    e.extend_to(e.a_max() - probe_depth as i32);
    e.structure()
}

/// Module structure with the window deepened only as far as needed, up to
/// the default probe depth.
pub fn module_structure_auto(c: &FreeComplex) -> Result<UModuleResult, HomologyError> {
    HomologyEngine::new(c)?.resolve(default_probe_depth(c))
}

pub fn tau(c: &FreeComplex) -> Result<i32, HomologyError> {
    Ok(module_structure_auto(c)?.tau())
}

/// Compares two complexes: equal module structures and equal slice
/// dimensions and U-ranks over the union of their windows.
pub fn homology_iso_check(c1: &FreeComplex, c2: &FreeComplex) -> Result<bool, HomologyError> {
    let lift = |e: HomologyError| match e {
        HomologyError::NeedDeeperProbe(_) => HomologyError::WindowTooSmall,
        e => e,
    };
    let mut e1 = HomologyEngine::new(c1)?;
    let mut e2 = HomologyEngine::new(c2)?;
    let r1 = e1.resolve(default_probe_depth(c1)).map_err(lift)?;
    let r2 = e2.resolve(default_probe_depth(c2)).map_err(lift)?;
    if r1.module != r2.module {
        return Ok(false);
    }
    let lo = e1.lowest().max(e2.lowest());
    let hi = e1.a_max().max(e2.a_max());
    e1.extend_to(lo);
    e2.extend_to(lo);
    for a in lo..=hi {
        let ms: Vec<i32> = [e1.level(a), e2.level(a)]
            .into_iter()
            .flatten()
            .flat_map(|l| l.slices.keys().copied())
            .collect();
        for m in ms {
            let at = Bigrading::new(m, a);
            if e1.dim(at) != e2.dim(at) {
                return Ok(false);
            }
            if a > lo {
                let r = |e: &HomologyEngine| e.u_map(at).map_or(0, |u| u.rank());
                if r(&e1) != r(&e2) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Alexander levels in `levels` where the complex has nonzero homology,
/// with the offending dimensions.
pub fn acyclicity_failures(c: &FreeComplex, levels: impl IntoIterator<Item = i32>) -> Vec<(Bigrading, usize)> {
    let levels: Vec<i32> = levels.into_iter().collect();
    levels
        .par_iter()
        .flat_map_iter(|&a| {
            LevelComplex::of(c, a)
                .homology_dims()
                .into_iter()
                .filter(|&(_, d)| d > 0)
                .map(move |(m, d)| (Bigrading::new(m, a), d))
        })
        .collect()
}

/// Bigradings in the given Alexander levels where a bidegree-(0,0) chain
/// map fails to induce an isomorphism (its cone has homology there).
pub fn quasi_iso_failures(
    f: &ChainMap,
    src: &FreeComplex,
    tgt: &FreeComplex,
    levels: impl IntoIterator<Item = i32>,
) -> Result<Vec<(Bigrading, usize)>, HomologyError> {
    let levels: Vec<i32> = levels.into_iter().collect();
    let per: Vec<Result<Vec<(Bigrading, usize)>, HomologyError>> = levels
        .par_iter()
        .map(|&a| {
            Ok(LevelComplex::cone(f, src, tgt, a)?
                .homology_dims()
                .into_iter()
                .filter(|&(_, d)| d > 0)
                .map(|(m, d)| (Bigrading::new(m, a), d))
                .collect())
        })
        .collect();
    let mut out = Vec::new();
    for p in per {
        out.extend(p?);
    }
    Ok(out)
}

/// A finite F2 complex obtained by setting every variable to zero.
struct ReducedComplex {
    gradings: Vec<Bigrading>,
    d: Vec<SparseVec>,
}

impl ReducedComplex {
    fn of(c: &FreeComplex) -> Self {
        let d = (0..c.len() as u32).map(|g| constant_terms(c.d(g), 0)).collect();
        ReducedComplex { gradings: c.gradings().to_vec(), d }
    }

    fn homology_dims(&self) -> BTreeMap<Bigrading, usize> {
        let mut groups: BTreeMap<Bigrading, Vec<u32>> = BTreeMap::new();
        for (g, &b) in self.gradings.iter().enumerate() {
            groups.entry(b).or_default().push(g as u32);
        }
        let mut pos = vec![0u32; self.gradings.len()];
        for gens in groups.values() {
            for (i, &g) in gens.iter().enumerate() {
                pos[g as usize] = i as u32;
            }
        }
        let ranks: BTreeMap<Bigrading, usize> = groups
            .par_iter()
            .map(|(&b, gens)| {
                let below = b + Bigrading::new(-1, 0);
                let rows = groups.get(&below).map_or(0, |v| v.len());
                let cols = gens.iter().map(|&g| {
                    let mut v: Vec<u32> = self.d[g as usize].iter().map(|&h| pos[h as usize]).collect();
                    v.sort_unstable();
                    v
                });
                (b, if rows == 0 { 0 } else { sparse_rank(rows, cols) })
            })
            .collect();
        groups
            .iter()
            .map(|(&b, gens)| {
                let above = ranks.get(&(b + Bigrading::new(1, 0))).copied().unwrap_or(0);
                (b, gens.len() - ranks[&b] - above)
            })
            .filter(|&(_, h)| h > 0)
            .collect()
    }
}

fn constant_terms(e: &ModuleElement, offset: u32) -> SparseVec {
    let mut v: Vec<u32> = e.terms().iter().filter(|t| t.mono.is_one()).map(|t| t.gen + offset).collect();
    v.sort_unstable();
    v
}

/// Nonzero homology of `c` with every variable set to zero. A free complex
/// is acyclic exactly when this is empty, so it decides acyclicity in all
/// bigradings at once.
pub fn reduced_homology(c: &FreeComplex) -> BTreeMap<Bigrading, usize> {
    ReducedComplex::of(c).homology_dims()
}

/// Nonzero homology of the cone of a bidegree-(0,0) map between free
/// complexes over the same ring, with every variable set to zero: empty
/// exactly when `f` is a quasi-isomorphism.
pub fn reduced_cone_homology(f: &ChainMap, src: &FreeComplex, tgt: &FreeComplex) -> Result<BTreeMap<Bigrading, usize>, HomologyError> {
    if f.degree != Bigrading::new(0, 0) {
        return Err(HomologyError::BadDegree);
    }
    let ns = src.len() as u32;
    let mut gradings: Vec<Bigrading> = src.gradings().iter().map(|&b| b + Bigrading::new(1, 0)).collect();
    gradings.extend_from_slice(tgt.gradings());
    let mut d: Vec<SparseVec> = (0..ns)
        .map(|g| {
            let mut v = constant_terms(src.d(g), 0);
            v.extend(constant_terms(f.image(g), ns));
            v
        })
        .collect();
    d.extend((0..tgt.len() as u32).map(|g| constant_terms(tgt.d(g), ns)));
    Ok(ReducedComplex { gradings, d }.homology_dims())
}
