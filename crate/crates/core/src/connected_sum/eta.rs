//! The quasi-isomorphism `eta: C -> GC^-(g1) (x) GC^-(g2) / (U_1 = U_p)`,
//! directly by case rules and as the composite through the tensor product of
//! the two destabilization cones.

use super::{class_of, CComplex, ConnectedSum, ConnectedSumError, Destabilization, StateClass, Stabilized};
use crate::algebra::{Bigrading, GenId, ModuleElement, Monomial, Term, Var};
use crate::complex::{cone, grid_boundary, multiply_by_sum, tensor, ChainMap, ConeComplex, FreeComplex, GridComplex, VarMap};
use crate::state::{enumerate_states, State};
use rayon::prelude::*;

/// How `NN` states are treated.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EtaRule {
    /// `NN -> (e H_Hex) (x) (e H_Hex)`, the rule that makes `eta` a chain map.
    Corrected,
    /// `NN -> 0`.
    Literal,
}

/// Per-state data of one stabilized summand, indexed by lexicographic rank:
/// the id of `e(x)` for `x` in I, and the terms of `e H_Hex(x)` for `x` in N.
#[derive(Clone, Debug)]
pub struct SummandTable {
    pub e_id: Vec<Option<GenId>>,
    pub hex: Vec<Vec<(Monomial, GenId)>>,
}

type TableRow = (Option<GenId>, Vec<(Monomial, GenId)>);

impl SummandTable {
    pub fn new(s: &Stabilized, base: &GridComplex, var: impl Fn(Var) -> Var + Sync) -> Self {
        let states: Vec<State> = enumerate_states(s.n()).collect();
        let rows: Vec<TableRow> = states
            .par_iter()
            .map(|x| {
                if s.in_i(x) {
                    (base.id(&s.e(x)), Vec::new())
                } else {
                    let hex = s
                        .h_hex(x)
                        .into_iter()
                        .map(|(m, y)| (m.substitute(&var), base.id(&s.e(&y)).expect("base state")))
                        .collect();
                    (None, hex)
                }
            })
            .collect();
        let (e_id, hex) = rows.into_iter().unzip();
        SummandTable { e_id, hex }
    }

    /// `e(x)` or `e H_Hex(x)` as `(monomial, id)` terms.
    fn terms(&self, x: &State) -> Vec<(Monomial, GenId)> {
        let r = x.lex_rank() as usize;
        match self.e_id[r] {
            Some(id) => vec![(Monomial::one(), id)],
            None => self.hex[r].clone(),
        }
    }
}

/// `eta` with its target complex `T`.
#[derive(Clone, Debug)]
pub struct Eta {
    pub left_base: GridComplex,
    pub right_base: GridComplex,
    /// `T = GC^-(g1) (x) GC^-(g2)` with the O's of `g1`'s column 0 and
    /// `g2`'s bottom row identified; generator `(a, b)` has id
    /// `a * |g2 states| + b`.
    pub target: FreeComplex,
    /// Variable map from `g#`.
    pub vars: VarMap,
    pub rule: EtaRule,
    left: SummandTable,
    right: SummandTable,
    n: usize,
}

/// `U_1`, `U_n`, `U_{n+1}` and the variable of `g2`'s bottom-row O, in the
/// variables of `g#`.
fn identified_class(sum: &ConnectedSum) -> Vec<Var> {
    let (u, v) = sum.middle_vars();
    vec![sum.sharp_var(false, sum.left.u2()), u, v, sum.sharp_var(true, sum.right.u2())]
}

fn base_in_sharp(sum: &ConnectedSum, right: bool) -> Result<(GridComplex, FreeComplex), ConnectedSumError> {
    let s = if right { &sum.right } else { &sum.left };
    let gc = GridComplex::build(&s.base)?;
    let map = VarMap::from_pairs((0..s.base.n() as Var).map(|i| (i, sum.sharp_var(right, s.base_var(i as usize)))));
    let fc = gc.complex.substitute_vars(&map);
    Ok((gc, fc))
}

impl Eta {
    pub fn new(sum: &ConnectedSum, rule: EtaRule) -> Result<Self, ConnectedSumError> {
        let class = identified_class(sum);
        let rep = *class.iter().min().unwrap();
        let vars = VarMap::from_pairs(class.iter().map(|&v| (v, rep)));
        let (left_base, l) = base_in_sharp(sum, false)?;
        let (right_base, r) = base_in_sharp(sum, true)?;
        let target = tensor(&l, &r, &[])?.set_variables_equal(&[class])?;
        let left = SummandTable::new(&sum.left, &left_base, |c| vars.apply(sum.sharp_var(false, c)));
        let right = SummandTable::new(&sum.right, &right_base, |c| vars.apply(sum.sharp_var(true, c)));
        Ok(Eta { left_base, right_base, target, vars, rule, left, right, n: sum.n() })
    }

    pub fn target_id(&self, a: GenId, b: GenId) -> GenId {
        a * self.right_base.states.len() as GenId + b
    }

    /// `eta(x)` for a state of `C`; zero on `AD_1` (and on states outside `C`).
    pub fn image(&self, x: &State) -> ModuleElement {
        let class = class_of(self.n, x.as_bytes());
        if !class.in_s0() || (class == StateClass::NN && self.rule == EtaRule::Literal) {
            return ModuleElement::zero();
        }
        let n = self.n;
        let st = x.as_bytes();
        let p = State::new(&st[..n].iter().map(|&r| r as usize - n).collect::<Vec<_>>()).expect("left part");
        let q = State::new(&st[n..].iter().map(|&r| r as usize).collect::<Vec<_>>()).expect("right part");
        let lt = self.left.terms(&p);
        let rt = self.right.terms(&q);
        let mut acc = Vec::with_capacity(lt.len() * rt.len());
        for (m1, a) in &lt {
            for (m2, b) in &rt {
                acc.push(Term::new(m1.mul(m2), self.target_id(*a, *b)));
            }
        }
        ModuleElement::from_terms(acc)
    }

    /// `eta` as a chain map out of `C`.
    pub fn chain_map(&self, c: &CComplex) -> ChainMap {
        let images = c.grid.states.par_iter().map(|x| self.image(x)).collect();
        ChainMap::new(self.vars.clone(), Bigrading::new(0, 0), images)
    }

    /// States of `x` where `eta d x != d eta x`, computed without storing
    /// the differential of `C`. A boundary term leaving `C` also counts as a
    /// failure.
    pub fn streaming_failures(&self, sum: &ConnectedSum, states: &[State]) -> Vec<State> {
        states
            .par_iter()
            .filter(|x| {
                let mut lhs = Vec::new();
                for (m, y) in grid_boundary(&sum.gsharp, x) {
                    if !class_of(self.n, y.as_bytes()).in_c() {
                        return true;
                    }
                    let m = self.vars.mono(&m);
                    lhs.extend(self.image(&y).terms().iter().map(|t| Term::new(t.mono.mul(&m), t.gen)));
                }
                ModuleElement::from_terms(lhs) != self.target.apply_d(&self.image(x))
            })
            .cloned()
            .collect()
    }

    /// Grading offset of the target relative to `C`: `eta` is homogeneous of
    /// bidegree (0,0) once `T` is shifted by this amount. Checked on `II`.
    pub fn grading_offset(&self, c: &CComplex) -> Option<Bigrading> {
        let mut out = None;
        for (g, x) in c.grid.states.iter().enumerate() {
            if class_of(self.n, x.as_bytes()) != StateClass::II {
                continue;
            }
            let t = self.image(x).terms()[0].gen;
            let off = c.complex().grading(g as GenId) - self.target.grading(t);
            match out {
                None => out = Some(off),
                Some(o) if o != off => return None,
                _ => {}
            }
        }
        out
    }
}

fn relabel_map(f: &ChainMap, map: &VarMap) -> ChainMap {
    let images = f.images.iter().map(|e| e.relabel(|g| g, |v| map.apply(v))).collect();
    ChainMap::new(f.vars.clone(), f.degree, images)
}

/// The composite `C -> Cone(U_n + U_1) -> T`: `C_0` goes through
/// `D_SE (x) D_NW` into the tensor product of the two cones and then to
/// their target-target corner; `AD_1` goes to the source copy via
/// `f = (U_n + U_{n+1}) y`.
pub struct CompositeRoute {
    pub d_left: Destabilization,
    pub d_right: Destabilization,
    /// `GC^-(g1') (x) GC^-(g2')` over the shared `U_{n+1}`, with `U_n`
    /// adjoined, generators in `S_0` order.
    pub c0_tensor: FreeComplex,
    /// Tensor product of the two cones, with `U_n` adjoined.
    pub cone_g: FreeComplex,
    pub dd: ChainMap,
    /// `GC^-(g1) (x) GC^-(g2)[U_n]` with `U_1 = U_{n+1} = U_p`.
    pub a_complex: FreeComplex,
    pub phi: ChainMap,
    pub cone_h: ConeComplex,
    pub psi: ChainMap,
    pub proj: ChainMap,
}

impl CompositeRoute {
    pub fn new(sum: &ConnectedSum, c: &CComplex) -> Result<Self, ConnectedSumError> {
        let n = sum.n() as Var;
        let lmap = VarMap::from_pairs((0..n).map(|v| (v, sum.sharp_var(false, v))));
        let rmap = VarMap::from_pairs((0..n).map(|v| (v, sum.sharp_var(true, v))));
        let d_left = sum.left.destabilize()?;
        let d_right = sum.right.destabilize()?;
        let (u_n, u_n1) = sum.middle_vars();

        let c0_tensor = tensor(
            &d_left.source.complex.substitute_vars(&lmap),
            &d_right.source.complex.substitute_vars(&rmap),
            &[u_n1],
        )?
        .adjoin(&[u_n]);
        let cone1 = d_left.target.complex.substitute_vars(&lmap);
        let cone2 = d_right.target.complex.substitute_vars(&rmap);
        let cone_g = tensor(&cone1, &cone2, &[u_n1])?.adjoin(&[u_n]);
        let dd = ChainMap::tensor(&relabel_map(&d_left.map, &lmap), &relabel_map(&d_right.map, &rmap), cone2.len(), VarMap::identity());

        let class = identified_class(sum);
        let rep = *class.iter().min().unwrap();
        let a_class: Vec<Var> = class.iter().copied().filter(|&v| v != u_n).collect();
        let a_vars = VarMap::from_pairs(a_class.iter().map(|&v| (v, rep)));
        let (_, l) = base_in_sharp(sum, false)?;
        let (_, r) = base_in_sharp(sum, true)?;
        let a_complex = tensor(&l, &r, &[])?.adjoin(&[u_n, u_n1]).set_variables_equal(&[a_class])?;

        let (s1, s2) = (d_left.target.source_len as GenId, d_right.target.source_len as GenId);
        let (c2len, r_len) = (cone2.len() as GenId, r.len() as GenId);
        let phi_images = (0..cone_g.len() as GenId)
            .map(|g| {
                let (s, t) = (g / c2len, g % c2len);
                if s >= s1 && t >= s2 {
                    ModuleElement::generator((s - s1) * r_len + (t - s2))
                } else {
                    ModuleElement::zero()
                }
            })
            .collect();
        let phi = ChainMap::new(a_vars.clone(), Bigrading::new(0, 0), phi_images);

        let cone_h = cone(&multiply_by_sum(&a_complex, u_n, rep), &a_complex, &a_complex)?;
        let a_len = a_complex.len() as GenId;
        let psi_images = c
            .grid
            .states
            .par_iter()
            .enumerate()
            .map(|(g, x)| {
                if g < c.ad_len {
                    let y = sum.f_quotient(x).expect("f(x) = (U_n + U_{n+1}) y");
                    let (p, q) = sum.split(&y);
                    let a = d_left.base.id(&sum.left.e(&p)).expect("base state");
                    let b = d_right.base.id(&sum.right.e(&q)).expect("base state");
                    ModuleElement::generator(a * r_len + b)
                } else {
                    let img = phi.apply(dd.image(sum.s0_index(x) as GenId));
                    img.relabel(|h| h + a_len, |v| v)
                }
            })
            .collect();
        let psi = ChainMap::new(a_vars, Bigrading::new(0, 0), psi_images);
        let proj_images = (0..cone_h.complex.len() as GenId)
            .map(|g| if g < a_len { ModuleElement::zero() } else { ModuleElement::generator(g - a_len) })
            .collect();
        let proj = ChainMap::new(VarMap::from_pairs([(u_n, rep)]), Bigrading::new(0, 0), proj_images);
        Ok(CompositeRoute { d_left, d_right, c0_tensor, cone_g, dd, a_complex, phi, cone_h, psi, proj })
    }

    /// `proj (psi (x))` for generator `g` of `C`.
    pub fn image(&self, g: GenId) -> ModuleElement {
        self.proj.apply(self.psi.image(g))
    }

    /// Generators of `C_0` where `C`'s differential differs from the tensor
    /// product's under the `S_0` identification.
    pub fn c0_mismatches(&self, c: &CComplex) -> Vec<GenId> {
        let off = c.ad_len as GenId;
        (0..self.c0_tensor.len() as GenId)
            .filter(|&g| c.complex().d(g + off).relabel(|h| h - off, |v| v) != *self.c0_tensor.d(g))
            .collect()
    }
}
