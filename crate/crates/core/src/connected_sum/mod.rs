//! Connected sums of grid diagrams: block classification of the states of
//! `g#`, the subcomplex `C` spanned by `AD_1` and `S_0`, the map
//! `f: AD -> C_0`, and the quasi-isomorphism `eta` onto
//! `GC^-(g1) (x) GC^-(g2) / (U_1 = U_p)`.

mod destab;
mod eta;
mod verify;

pub use destab::{hexagons_from, Destabilization, Hexagon, Notch, Stabilized};
pub use eta::{CompositeRoute, Eta, EtaRule, SummandTable};
pub use verify::{module_dim_mismatches, shifted, verify_kunneth, AcyclicityReport, Check, Coverage, VerifyOptions, VerifyReport};

use crate::algebra::{Bigrading, GenId, ModuleElement, Monomial, Term, Var};
use crate::complex::{grid_boundary, ChainMap, ComplexError, FreeComplex, GridComplex, Restriction, VarMap};
use crate::grid::{GridDiagram, GridError, StabKind};
use crate::homology::HomologyError;
use crate::state::{enumerate_states, Gradings, State};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConnectedSumError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
    #[error(transparent)]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error("not a connect diagram: {0}")]
    NotAConnectDiagram(String),
    #[error("the states containing c do not span a subcomplex")]
    ZeroBlockViolated,
    #[error("{map} fails the chain-map identity on {count} generators")]
    NotChainMap { map: &'static str, count: usize },
}

/// The points of a state of `g#` in each of the four `n x n` blocks:
/// `x11` top-left, `x12` top-right, `x21` bottom-left, `x22` bottom-right.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BlockDecomposition {
    pub x11: Vec<(usize, usize)>,
    pub x12: Vec<(usize, usize)>,
    pub x21: Vec<(usize, usize)>,
    pub x22: Vec<(usize, usize)>,
}

impl BlockDecomposition {
    pub fn of(x: &State, n: usize) -> Self {
        let mut b = BlockDecomposition { x11: vec![], x12: vec![], x21: vec![], x22: vec![] };
        for (i, j) in x.points() {
            match (i < n, j < n) {
                (true, false) => b.x11.push((i, j)),
                (false, false) => b.x12.push((i, j)),
                (true, true) => b.x21.push((i, j)),
                (false, true) => b.x22.push((i, j)),
            }
        }
        b
    }

    pub fn k(&self) -> usize {
        self.x12.len()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum StateClass {
    /// `S_1` states containing `a` and `d`.
    AD1,
    /// `S_k` outside `AD_1`.
    S(usize),
    II,
    IN,
    NI,
    NN,
}

impl StateClass {
    /// `BC_0` coincides with `II`.
    pub const BC0: StateClass = StateClass::II;

    pub fn k(self) -> usize {
        match self {
            StateClass::S(k) => k,
            StateClass::AD1 => 1,
            _ => 0,
        }
    }

    pub fn in_s0(self) -> bool {
        self.k() == 0
    }

    pub fn in_c(self) -> bool {
        !matches!(self, StateClass::S(_))
    }
}

/// Class of a state of a `2n x 2n` connect diagram.
pub fn class_of(n: usize, st: &[u8]) -> StateClass {
    let k = st[n..].iter().filter(|&&r| r as usize >= n).count();
    if k == 1 && st[0] == 0 && st[n] as usize == n {
        return StateClass::AD1;
    }
    if k > 0 {
        return StateClass::S(k);
    }
    match (st[n] == 0, st[0] as usize == n) {
        (true, true) => StateClass::II,
        (true, false) => StateClass::IN,
        (false, true) => StateClass::NI,
        (false, false) => StateClass::NN,
    }
}

fn check_connect(g: &GridDiagram) -> Result<usize, ConnectedSumError> {
    let size = g.n();
    let n = size / 2;
    let err = |m: &str| Err(ConnectedSumError::NotAConnectDiagram(m.into()));
    if !size.is_multiple_of(2) || n < 2 {
        return err("size must be even and at least 4");
    }
    if g.o_row()[n - 1] != n - 1 || g.o_row()[n] != n {
        return err("expected O's at (n-1, n-1) and (n, n)");
    }
    if g.x_row()[0] != n || g.x_row()[n] != 0 {
        return err("expected X's at (0, n) and (n, 0)");
    }
    Ok(n)
}

/// Block decomposition and class of `x`.
pub fn classify(gsharp: &GridDiagram, x: &State) -> Result<(BlockDecomposition, StateClass), ConnectedSumError> {
    let n = check_connect(gsharp)?;
    if x.n() != gsharp.n() {
        return Err(ConnectedSumError::NotAConnectDiagram(format!("state of size {} on a {}-grid", x.n(), gsharp.n())));
    }
    Ok((BlockDecomposition::of(x, n), class_of(n, x.as_bytes())))
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// `g1 # g2` with its two stabilized summands.
#[derive(Clone, Debug)]
pub struct ConnectedSum {
    pub g1: GridDiagram,
    pub g2: GridDiagram,
    pub left: Stabilized,
    pub right: Stabilized,
    pub gsharp: GridDiagram,
}

impl ConnectedSum {
    /// Normalizes `g1` (X top-left) and `g2` (X bottom-right), stabilizes
    /// both and connects them.
    pub fn new(g1: &GridDiagram, g2: &GridDiagram) -> Result<Self, ConnectedSumError> {
        if g1.n() != g2.n() {
            return Err(GridError::SizeMismatch(g1.n(), g2.n()).into());
        }
        let g1 = g1.normalize_left();
        let g2 = g2.normalize_right();
        let g1p = g1.prepare_summand_left()?;
        let g2p = g2.prepare_summand_right()?;
        let gsharp = GridDiagram::connect(&g1p, &g2p)?;
        let left = Stabilized::new(g1p, StabKind::SE)?;
        let right = Stabilized::new(g2p, StabKind::NW)?;
        Ok(ConnectedSum { g1, g2, left, right, gsharp })
    }

    /// Size of the stabilized summands; `g#` is `2n x 2n`.
    pub fn n(&self) -> usize {
        self.left.n()
    }

    /// The variables `U_n`, `U_{n+1}` of the two O's in the middle.
    pub fn middle_vars(&self) -> (Var, Var) {
        let n = self.n() as Var;
        (n - 1, n)
    }

    /// Variable of `g#` carried by column `c` of the left (or right) summand.
    pub fn sharp_var(&self, right: bool, c: Var) -> Var {
        let n = self.n() as Var;
        match (right, c == n - 1) {
            (false, true) => n,
            (false, false) => c,
            (true, _) => n + c,
        }
    }

    pub fn class(&self, x: &State) -> StateClass {
        class_of(self.n(), x.as_bytes())
    }

    /// The `S_0` state with top-left part `p` (a state of `g1'`) and
    /// bottom-right part `q` (a state of `g2'`).
    pub fn join(&self, p: &State, q: &State) -> State {
        let n = self.n();
        let v: Vec<usize> = p.as_bytes().iter().map(|&r| r as usize + n).chain(q.as_bytes().iter().map(|&r| r as usize)).collect();
        State::new(&v).expect("joined state")
    }

    /// Inverse of `join` on `S_0`.
    pub fn split(&self, x: &State) -> (State, State) {
        let n = self.n();
        let st = x.as_bytes();
        let p: Vec<usize> = st[..n].iter().map(|&r| r as usize - n).collect();
        let q: Vec<usize> = st[n..].iter().map(|&r| r as usize).collect();
        (State::new(&p).expect("left part"), State::new(&q).expect("right part"))
    }

    /// Position of an `S_0` state in `s0_states`.
    pub fn s0_index(&self, x: &State) -> usize {
        let (p, q) = self.split(x);
        p.lex_rank() as usize * factorial(self.n()) + q.lex_rank() as usize
    }

    /// `S_0`, ordered by the ranks of the two parts.
    pub fn s0_states(&self) -> Vec<State> {
        let n = self.n();
        let qs: Vec<State> = enumerate_states(n).collect();
        enumerate_states(n)
            .collect::<Vec<_>>()
            .par_iter()
            .flat_map_iter(|p| qs.iter().map(move |q| (p, q)))
            .map(|(p, q)| self.join(p, q))
            .collect()
    }

    /// `AD_1`: `a`, `d`, a bijection of the remaining top-left columns onto
    /// rows `n+1..2n`, and of the remaining bottom-right columns onto rows
    /// `1..n`.
    pub fn ad_states(&self) -> Vec<State> {
        let n = self.n();
        let parts: Vec<State> = enumerate_states(n - 1).collect();
        let mut out = Vec::with_capacity(parts.len() * parts.len());
        for p in &parts {
            for q in &parts {
                let mut v = vec![0usize; 2 * n];
                v[n] = n;
                for i in 0..n - 1 {
                    v[i + 1] = p.row(i) + n + 1;
                    v[n + 1 + i] = q.row(i) + 1;
                }
                out.push(State::new(&v).expect("AD state"));
            }
        }
        out
    }

    /// Generators of `C`: `AD_1` first, then `S_0`.
    pub fn c_states(&self) -> Vec<State> {
        let mut v = self.ad_states();
        v.extend(self.s0_states());
        v
    }

    /// `C` as a subcomplex of `GC^-(g#)`; fails if the span is not closed.
    pub fn build_c(&self) -> Result<CComplex, ConnectedSumError> {
        let ad_len = factorial(self.n() - 1).pow(2);
        let grid = GridComplex::on_states(&self.gsharp, self.c_states(), Restriction::Subcomplex)?;
        Ok(CComplex { grid, ad_len })
    }

    /// States of `C` whose boundary leaves `C`, without storing the complex.
    pub fn c_closure_failures(&self) -> Vec<State> {
        let n = self.n();
        self.c_states()
            .into_par_iter()
            .filter(|x| grid_boundary(&self.gsharp, x).iter().any(|(_, y)| !class_of(n, y.as_bytes()).in_c()))
            .collect()
    }

    /// `GC^-(g#) / C`, on all states outside `C`.
    pub fn quotient(&self) -> Result<GridComplex, ConnectedSumError> {
        let n = self.n();
        let states: Vec<State> = enumerate_states(2 * n).filter(|x| !class_of(n, x.as_bytes()).in_c()).collect();
        Ok(GridComplex::on_states(&self.gsharp, states, Restriction::Quotient)?)
    }

    /// `f(x)`: empty X-free rectangles from `x` in `AD_1` to `S_0`.
    pub fn f_terms(&self, x: &State) -> Vec<(Monomial, State)> {
        let n = self.n();
        grid_boundary(&self.gsharp, x).into_iter().filter(|(_, y)| class_of(n, y.as_bytes()).in_s0()).collect()
    }

    /// The `II` state `y` with `f(x) = (U_n + U_{n+1}) y`, if there is one.
    pub fn f_quotient(&self, x: &State) -> Option<State> {
        let (u, v) = self.middle_vars();
        let t = self.f_terms(x);
        match t.as_slice() {
            [(m1, y1), (m2, y2)] if y1 == y2 && self.class(y1) == StateClass::II => {
                let mut ms = [m1.clone(), m2.clone()];
                ms.sort();
                let mut want = [Monomial::var(u), Monomial::var(v)];
                want.sort();
                (ms == want).then(|| y1.clone())
            }
            _ => None,
        }
    }

    /// Graded generator tables and the maps `f: AD -> C_0` and
    /// `U_n + U_{n+1}: II -> C_0`, for rank checks slice by slice.
    pub fn f_map(&self) -> FMap {
        let gr = Gradings::new(&self.gsharp);
        let vars: Vec<Var> = (0..2 * self.n() as Var).collect();
        let table = |states: &[State]| {
            let gradings = states.par_iter().map(|s| gr.bigrading(s).expect("integral Alexander grading")).collect();
            FreeComplex::new(vars.clone(), gradings, vec![ModuleElement::zero(); states.len()])
        };
        let ad_states = self.ad_states();
        let s0 = self.s0_states();
        let ii_states: Vec<State> = s0.iter().filter(|x| self.class(x) == StateClass::II).cloned().collect();
        let f_images = ad_states
            .par_iter()
            .map(|x| {
                ModuleElement::from_terms(self.f_terms(x).into_iter().map(|(m, y)| Term::new(m, self.s0_index(&y) as GenId)).collect())
            })
            .collect();
        let (u, v) = self.middle_vars();
        let mult_images = ii_states
            .iter()
            .map(|y| {
                let g = self.s0_index(y) as GenId;
                ModuleElement::from_terms(vec![Term::new(Monomial::var(u), g), Term::new(Monomial::var(v), g)])
            })
            .collect();
        FMap {
            ad: table(&ad_states),
            ii: table(&ii_states),
            c0: table(&s0),
            f: ChainMap::new(VarMap::identity(), Bigrading::new(-1, 0), f_images),
            mult: ChainMap::new(VarMap::identity(), Bigrading::new(-2, -1), mult_images),
            ad_states,
            ii_states,
        }
    }
}

/// `C` with `AD_1` occupying the first `ad_len` generators.
#[derive(Clone, Debug)]
pub struct CComplex {
    pub grid: GridComplex,
    pub ad_len: usize,
}

impl CComplex {
    pub fn complex(&self) -> &FreeComplex {
        &self.grid.complex
    }

    /// `C_0 = S_0`-span, a subcomplex.
    pub fn c0(&self) -> Result<FreeComplex, ConnectedSumError> {
        let keep: Vec<GenId> = (self.ad_len as GenId..self.grid.states.len() as GenId).collect();
        Ok(self.complex().subcomplex(&keep)?)
    }

    /// `AD = C / C_0`.
    pub fn ad(&self) -> FreeComplex {
        let keep: Vec<GenId> = (0..self.ad_len as GenId).collect();
        self.complex().quotient_onto(&keep)
    }

    /// The `AD -> C_0` block of the differential.
    pub fn f_block(&self) -> ChainMap {
        let off = self.ad_len as GenId;
        let images = (0..off)
            .map(|g| {
                ModuleElement::from_terms(
                    self.complex().d(g).terms().iter().filter(|t| t.gen >= off).map(|t| Term::new(t.mono.clone(), t.gen - off)).collect(),
                )
            })
            .collect();
        ChainMap::new(VarMap::identity(), Bigrading::new(-1, 0), images)
    }
}

/// Rank data of `f` and of `(U_n + U_{n+1}) II` in one slice of `C_0`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct FSlice {
    /// Bigrading of the `AD` slice; the image lies one Maslov degree lower.
    pub at: Bigrading,
    pub ad_dim: usize,
    pub rank_f: usize,
    pub rank_mult: usize,
    pub rank_sum: usize,
}

impl FSlice {
    pub fn injective(&self) -> bool {
        self.rank_f == self.ad_dim
    }

    pub fn image_matches(&self) -> bool {
        self.rank_f == self.rank_sum && self.rank_mult == self.rank_sum
    }
}

/// See [`ConnectedSum::f_map`].
#[derive(Clone, Debug)]
pub struct FMap {
    pub ad: FreeComplex,
    pub ii: FreeComplex,
    pub c0: FreeComplex,
    pub f: ChainMap,
    pub mult: ChainMap,
    pub ad_states: Vec<State>,
    pub ii_states: Vec<State>,
}

impl FMap {
    /// `AD` slices at the top `depth + 1` Alexander levels.
    pub fn slices(&self, depth: u32) -> Vec<(i32, i32)> {
        let Some(top) = self.ad.a_max() else { return Vec::new() };
        (top - depth as i32..=top).rev().flat_map(|a| self.ad.maslov_range(a).into_iter().map(move |m| (m, a))).collect()
    }

    pub fn check_slice(&self, m: i32, a: i32) -> FSlice {
        let src = self.ad.slice_basis(m, a);
        let tgt = self.c0.slice_basis(m - 1, a);
        let ii = self.ii.slice_basis(m + 1, a + 1);
        let fc = self.f.slice_columns(&src, &tgt);
        let mc = self.mult.slice_columns(&ii, &tgt);
        let rank = |cols: Vec<Vec<u32>>| crate::algebra::sparse_rank(tgt.dim(), cols);
        let rank_f = rank(fc.clone());
        let rank_mult = rank(mc.clone());
        let rank_sum = rank(fc.into_iter().chain(mc).collect());
        FSlice { at: Bigrading::new(m, a), ad_dim: src.dim(), rank_f, rank_mult, rank_sum }
    }
}
