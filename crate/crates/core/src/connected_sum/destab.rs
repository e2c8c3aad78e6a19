//! Destabilization of a stabilized diagram `g'` onto `Cone(U_1 - U_2)` over
//! the destabilized diagram `g`.

use super::ConnectedSumError;
use crate::algebra::{Bigrading, GenId, ModuleElement, Monomial, Term, Var};
use crate::complex::{cone, grid_boundary, mask_monomial, multiply_by_sum, ChainMap, ConeComplex, FreeComplex, GridComplex, VarMap};
use crate::grid::{canonical_marking_labels, GridDiagram, MarkingLabels, StabKind};
use crate::state::{for_each_empty_rect, rect_masks, State};

/// Which quadrant at `c` a hexagon leaves out.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Notch {
    SW,
    NE,
}

/// An embedded hexagon with one 270 degree corner at `c`: the rectangle
/// `[left, left + w1 + w2] x [bottom, bottom + h1 + h2]` with the `w1 x h1`
/// (SW notch) or `w2 x h2` (NE notch) corner block at `c` removed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Hexagon {
    pub from: State,
    pub to: State,
    pub notch: Notch,
    pub left: usize,
    pub bottom: usize,
    pub w1: usize,
    pub w2: usize,
    pub h1: usize,
    pub h2: usize,
}

impl Hexagon {
    fn n(&self) -> usize {
        self.from.n()
    }

    pub fn contains_square(&self, (col, row): (usize, usize)) -> bool {
        let n = self.n();
        let di = (col + n - self.left) % n;
        let dj = (row + n - self.bottom) % n;
        if di >= self.w1 + self.w2 || dj >= self.h1 + self.h2 {
            return false;
        }
        match self.notch {
            Notch::SW => !(di < self.w1 && dj < self.h1),
            Notch::NE => !(di >= self.w1 && dj >= self.h1),
        }
    }

    /// The six corners with their angles (90 or 270).
    pub fn corners(&self) -> Vec<((usize, usize), u32)> {
        let n = self.n();
        let p = |di: usize, dj: usize| ((self.left + di) % n, (self.bottom + dj) % n);
        let (w, h) = (self.w1 + self.w2, self.h1 + self.h2);
        match self.notch {
            Notch::SW => vec![
                (p(self.w1, 0), 90),
                (p(w, 0), 90),
                (p(w, h), 90),
                (p(0, h), 90),
                (p(0, self.h1), 90),
                (p(self.w1, self.h1), 270),
            ],
            Notch::NE => vec![
                (p(0, 0), 90),
                (p(w, 0), 90),
                (p(w, self.h1), 90),
                (p(self.w1, self.h1), 270),
                (p(self.w1, h), 90),
                (p(0, h), 90),
            ],
        }
    }

    /// Bit masks of the O- and X-markings inside.
    pub fn masks(&self, d: &GridDiagram) -> (u64, u64) {
        let (mut om, mut xm) = (0u64, 0u64);
        for c in 0..d.n() {
            if self.contains_square((c, d.o_row()[c])) {
                om |= 1 << c;
            }
            if self.contains_square((c, d.x_row()[c])) {
                xm |= 1 << c;
            }
        }
        (om, xm)
    }
}

/// Every empty hexagon out of `x` whose 270 degree corner is `c` (which
/// must not be a point of `x`); the target contains `c`.
pub fn hexagons_from(x: &State, c: (usize, usize)) -> Vec<Hexagon> {
    let n = x.n();
    let (cx, cy) = c;
    if x.row(cx) == cy {
        return Vec::new();
    }
    let cyc = |a: usize, b: usize| (b + n - a) % n;
    let mut out = Vec::new();
    let st = x.as_bytes();
    let interior_empty = |left: usize, bottom: usize, w: usize, h: usize, inside_notch: &dyn Fn(usize, usize) -> bool| {
        (0..n).all(|i| {
            let di = cyc(left, i);
            let dj = cyc(bottom, st[i] as usize);
            !(di > 0 && di < w && dj > 0 && dj < h && !inside_notch(di, dj))
        })
    };
    // SW notch: x has (cx, yB), (xL, cy), (xR, yT)
    {
        let yb = x.row(cx);
        let xl = x.col_of_row(cy);
        let (w1, h1) = (cyc(xl, cx), cyc(yb, cy));
        for xr in 0..n {
            let w2 = cyc(cx, xr);
            if w2 == 0 || w1 + w2 >= n {
                continue;
            }
            let yt = x.row(xr);
            let h2 = cyc(cy, yt);
            if h2 == 0 || h1 + h2 >= n {
                continue;
            }
            let notch = |di: usize, dj: usize| di <= w1 && dj <= h1;
            if !interior_empty(xl, yb, w1 + w2, h1 + h2, &notch) {
                continue;
            }
            let mut y = x.clone();
            let b = y.bytes_mut();
            b[cx] = cy as u8;
            b[xr] = yb as u8;
            b[xl] = yt as u8;
            out.push(Hexagon { from: x.clone(), to: y, notch: Notch::SW, left: xl, bottom: yb, w1, w2, h1, h2 });
        }
    }
    // NE notch: x has (xL, yB), (xR, cy), (cx, yT)
    {
        let yt = x.row(cx);
        let xr = x.col_of_row(cy);
        let (w2, h2) = (cyc(cx, xr), cyc(cy, yt));
        for xl in 0..n {
            let w1 = cyc(xl, cx);
            if w1 == 0 || w1 + w2 >= n {
                continue;
            }
            let yb = x.row(xl);
            let h1 = cyc(yb, cy);
            if h1 == 0 || h1 + h2 >= n {
                continue;
            }
            let notch = |di: usize, dj: usize| di >= w1 && dj >= h1;
            if !interior_empty(xl, yb, w1 + w2, h1 + h2, &notch) {
                continue;
            }
            let mut y = x.clone();
            let b = y.bytes_mut();
            b[cx] = cy as u8;
            b[xr] = yb as u8;
            b[xl] = yt as u8;
            out.push(Hexagon { from: x.clone(), to: y, notch: Notch::NE, left: xl, bottom: yb, w1, w2, h1, h2 });
        }
    }
    out
}

/// A stabilized diagram with its labels and destabilization data.
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub diagram: GridDiagram,
    pub labels: MarkingLabels,
    pub base: GridDiagram,
}

impl Stabilized {
    pub fn new(diagram: GridDiagram, kind: StabKind) -> Result<Self, ConnectedSumError> {
        let labels = canonical_marking_labels(&diagram, kind)?;
        let base = diagram.destabilize(&labels);
        Ok(Stabilized { diagram, labels, base })
    }

    pub fn n(&self) -> usize {
        self.diagram.n()
    }

    pub fn c(&self) -> (usize, usize) {
        self.labels.c
    }

    /// Variable of `O_1`.
    pub fn u1(&self) -> Var {
        self.labels.o1.0 as Var
    }

    /// Variable of `O_2`.
    pub fn u2(&self) -> Var {
        self.labels.o2.0 as Var
    }

    /// Membership in `I` (states containing `c`).
    pub fn in_i(&self, x: &State) -> bool {
        x.contains(self.c())
    }

    /// `(I, N)` partition of a list of states.
    pub fn split_in(&self, states: &[State]) -> (Vec<State>, Vec<State>) {
        states.iter().cloned().partition(|x| self.in_i(x))
    }

    fn line_maps(&self) -> (impl Fn(usize) -> usize, impl Fn(usize) -> usize) {
        let (k, r) = self.labels.o1;
        let m = self.n() - 1;
        (
            move |l: usize| (if l <= k { l } else { l - 1 }) % m,
            move |l: usize| (if l <= r { l } else { l - 1 }) % m,
        )
    }

    /// `e: I -> states of g`, forgetting `c`.
    pub fn e(&self, x: &State) -> State {
        debug_assert!(self.in_i(x));
        let (col, row) = self.line_maps();
        let (cx, _) = self.c();
        let m = self.n() - 1;
        let mut out = vec![0usize; m];
        for (i, r) in x.points() {
            if i != cx {
                out[col(i)] = row(r);
            }
        }
        State::new(&out).expect("e yields a permutation")
    }

    /// Variable of `g'` carried by the O in column `i` of `g`.
    pub fn base_var(&self, i: usize) -> Var {
        let k = self.labels.o1.0;
        (if i < k { i } else { i + 1 }) as Var
    }

    /// `GC^-(g)[U_1]`, with variables named by the columns of `g'`.
    pub fn base_complex(&self) -> Result<(GridComplex, FreeComplex), ConnectedSumError> {
        let gc = GridComplex::build(&self.base)?;
        let map = VarMap::from_pairs((0..self.base.n()).map(|i| (i as Var, self.base_var(i))));
        let fc = gc.complex.substitute_vars(&map).adjoin(&[self.u1()]);
        Ok((gc, fc))
    }

    /// `H_O1`: empty X-free rectangles from `x` (in N) into I containing
    /// `O_1`, with `O_1`'s variable omitted from the coefficient.
    pub fn h_o1(&self, x: &State) -> Vec<(Monomial, State)> {
        if self.in_i(x) {
            return Vec::new();
        }
        let st = x.as_bytes();
        let o1 = 1u64 << self.labels.o1.0;
        let (cx, cy) = self.c();
        let mut out = Vec::new();
        for_each_empty_rect(st, |i, j, w, h| {
            let (om, xm) = rect_masks(&self.diagram, i, st[i] as usize, w, h);
            let target_row_at_cx = if cx == i { st[j] } else if cx == j { st[i] } else { st[cx] };
            if xm == 0 && om & o1 != 0 && target_row_at_cx as usize == cy {
                let mut y = x.clone();
                y.bytes_mut().swap(i, j);
                out.push((mask_monomial(om & !o1), y));
            }
        });
        out
    }

    /// `H_Hex`: empty hexagons from `x` (in N) containing `O_1` whose only
    /// X-marking is `X_1`, with `O_1`'s variable omitted.
    pub fn h_hex(&self, x: &State) -> Vec<(Monomial, State)> {
        if self.in_i(x) {
            return Vec::new();
        }
        let o1 = 1u64 << self.labels.o1.0;
        let x1 = 1u64 << self.labels.x1.0;
        hexagons_from(x, self.c())
            .into_iter()
            .filter_map(|h| {
                let (om, xm) = h.masks(&self.diagram);
                (om & o1 != 0 && xm == x1).then(|| (mask_monomial(om & !o1), h.to))
            })
            .collect()
    }

    /// All empty hexagons from `x` to `y`.
    pub fn hexagons(&self, x: &State, y: &State) -> Vec<Hexagon> {
        hexagons_from(x, self.c()).into_iter().filter(|h| &h.to == y).collect()
    }

    /// The destabilization map `D: GC^-(g') -> Cone(U_1 + U_2)` together
    /// with its source and target.
    pub fn destabilize(&self) -> Result<Destabilization, ConnectedSumError> {
        let source = GridComplex::build(&self.diagram)?;
        let (base, base_u) = self.base_complex()?;
        let mult = multiply_by_sum(&base_u, self.u1(), self.u2());
        let target = cone(&mult, &base_u, &base_u)?;
        let map = self.destabilization_map(&source, &base, target.source_len as GenId);
        let bad = map.chain_map_failures(&source.complex, &target.complex);
        if !bad.is_empty() {
            return Err(ConnectedSumError::NotChainMap { map: "D", count: bad.len() });
        }
        Ok(Destabilization { source, base, target, map })
    }

    /// `D` on the generators of `source`: I-states go to `(0, e x)`, N-states
    /// to `(e H_O1 x, e H_Hex x)`. Target-copy ids are offset by `offset`.
    pub fn destabilization_map(&self, source: &GridComplex, base: &GridComplex, offset: GenId) -> ChainMap {
        let id = |s: &State| base.id(&self.e(s)).expect("base state");
        let images = source
            .states
            .iter()
            .map(|x| {
                if self.in_i(x) {
                    ModuleElement::generator(id(x) + offset)
                } else {
                    let mut acc: Vec<Term> = self.h_o1(x).into_iter().map(|(m, y)| Term::new(m, id(&y))).collect();
                    acc.extend(self.h_hex(x).into_iter().map(|(m, y)| Term::new(m, id(&y) + offset)));
                    ModuleElement::from_terms(acc)
                }
            })
            .collect();
        ChainMap::new(VarMap::identity(), Bigrading::new(0, 0), images)
    }

    /// Checks that `I` spans a subcomplex of `GC^-(g')`.
    pub fn check_zero_block(&self) -> Result<(), ConnectedSumError> {
        for x in crate::state::enumerate_states(self.n()).filter(|x| self.in_i(x)) {
            if grid_boundary(&self.diagram, &x).iter().any(|(_, y)| !self.in_i(y)) {
                return Err(ConnectedSumError::ZeroBlockViolated);
            }
        }
        Ok(())
    }
}

/// `D` with its source `GC^-(g')`, the base complex `GC^-(g)`, and the cone.
pub struct Destabilization {
    pub source: GridComplex,
    pub base: GridComplex,
    pub target: ConeComplex,
    pub map: ChainMap,
}
