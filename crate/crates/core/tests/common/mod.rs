//! Independent oracles shared by the integration tests and the acceptance
//! target. Nothing here calls the code under test beyond plain data types.
#![allow(dead_code)]

use gridhom::connected_sum::Stabilized;
use gridhom::grid::StabKind;
use gridhom::state::enumerate_states;
use gridhom::{Bigrading, GridDiagram, Monomial, State, Var};
use std::collections::BTreeMap;

// Small diagrams ---------------------------------------------------------------

/// Every knot diagram of size `n` (O and X permutations, no shared square,
/// one component).
pub fn all_knots(n: usize) -> Vec<GridDiagram> {
    let perms: Vec<Vec<usize>> = enumerate_states(n).map(|s| s.as_bytes().iter().map(|&r| r as usize).collect()).collect();
    let mut out = Vec::new();
    for o in &perms {
        for x in &perms {
            if let Ok(d) = GridDiagram::new(o.clone(), x.clone()) {
                out.push(d);
            }
        }
    }
    out
}

/// Every stabilized diagram of size 3 and 4, of both kinds.
pub fn stabilized_fixtures() -> Vec<Stabilized> {
    let mut out = Vec::new();
    for n in 3..=4 {
        for d in all_knots(n) {
            for kind in [StabKind::SE, StabKind::NW] {
                if let Ok(s) = Stabilized::new(d.clone(), kind) {
                    out.push(s);
                }
            }
        }
    }
    out
}

// Grading oracle -------------------------------------------------------------

/// Pairs `(p, q)` with `p` strictly south-west of `q`, on real coordinates.
fn i_count(a: &[(f64, f64)], b: &[(f64, f64)]) -> i32 {
    a.iter().map(|p| b.iter().filter(|q| p.0 < q.0 && p.1 < q.1).count() as i32).sum()
}

/// `M` computed from the markings `marks` (O for the Maslov grading, X for
/// its X-twin) by counting pairs: `I(x,x) - I(x,P) - I(P,x) + I(P,P) + 1`.
pub fn pair_count_m(marks: &[usize], x: &State) -> i32 {
    let p: Vec<(f64, f64)> = marks.iter().enumerate().map(|(i, &r)| (i as f64 + 0.5, r as f64 + 0.5)).collect();
    let s: Vec<(f64, f64)> = x.points().map(|(i, r)| (i as f64, r as f64)).collect();
    i_count(&s, &s) - i_count(&s, &p) - i_count(&p, &s) + i_count(&p, &p) + 1
}

pub fn oracle_maslov(d: &GridDiagram, x: &State) -> i32 {
    pair_count_m(d.o_row(), x)
}

/// `A = (M_O - M_X - (n - 1)) / 2`.
pub fn oracle_alexander(d: &GridDiagram, x: &State) -> i32 {
    let v = pair_count_m(d.o_row(), x) - pair_count_m(d.x_row(), x) - (d.n() as i32 - 1);
    assert_eq!(v % 2, 0, "half-integral Alexander grading");
    v / 2
}

// Domain oracle --------------------------------------------------------------

/// A 0/1 domain on the torus with its corner data.
#[derive(Clone, Debug)]
pub struct Domain {
    pub n: usize,
    /// Square `(col, row)` at index `col * n + row`.
    pub squares: Vec<bool>,
    pub convex: Vec<(usize, usize)>,
    pub concave: Vec<(usize, usize)>,
    /// `(dbd)_alpha` at each lattice point: `+1` on `y - x`, `-1` on `x - y`.
    pub delta: Vec<i32>,
}

impl Domain {
    pub fn has(&self, col: usize, row: usize) -> bool {
        let n = self.n;
        self.squares[(col % n) * n + row % n]
    }

    fn around(&self, i: usize, j: usize) -> [bool; 4] {
        let n = self.n;
        let (l, b) = ((i + n - 1) % n, (j + n - 1) % n);
        // NE, NW, SW, SE of the lattice point.
        [self.has(i, j), self.has(l, j), self.has(l, b), self.has(i, b)]
    }

    pub fn interior(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self.around(i, j).iter().all(|&b| b)).collect()
    }

    /// Multiplicities of the markings inside: one count per column.
    pub fn count(&self, marks: &[usize]) -> Vec<usize> {
        marks.iter().enumerate().map(|(c, &r)| self.has(c, r) as usize).collect()
    }

    /// Coefficient `prod U_c^{#O in column c}`, skipping `skip`.
    pub fn monomial(&self, d: &GridDiagram, skip: Option<usize>) -> Monomial {
        Monomial::from_vars(
            self.count(d.o_row()).iter().enumerate().filter(|&(c, &k)| k > 0 && Some(c) != skip).map(|(c, _)| c as Var),
        )
    }

    /// `y` with `y - x = delta`, if it is a state.
    pub fn target(&self, x: &State) -> Option<State> {
        let n = self.n;
        let mut ind = vec![0i32; n * n];
        for (i, r) in x.points() {
            ind[i * n + r] = 1;
        }
        let mut rows = vec![usize::MAX; n];
        for p in 0..n * n {
            match ind[p] + self.delta[p] {
                0 => {}
                1 => {
                    if rows[p / n] != usize::MAX {
                        return None;
                    }
                    rows[p / n] = p % n;
                }
                _ => return None,
            }
        }
        if rows.contains(&usize::MAX) {
            return None;
        }
        State::new(&rows).ok()
    }

    /// Connected through shared edges on the torus.
    pub fn connected(&self) -> bool {
        let n = self.n;
        let Some(start) = self.squares.iter().position(|&b| b) else { return false };
        let mut seen = vec![false; n * n];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(k) = stack.pop() {
            let (c, r) = (k / n, k % n);
            for (dc, dr) in [(1, 0), (n - 1, 0), (0, 1), (0, n - 1)] {
                let m = ((c + dc) % n) * n + (r + dr) % n;
                if self.squares[m] && !seen[m] {
                    seen[m] = true;
                    stack.push(m);
                }
            }
        }
        self.squares.iter().zip(&seen).all(|(&a, &b)| a == b)
    }

    /// No point of `x` in the interior.
    pub fn empty_for(&self, x: &State) -> bool {
        self.interior().iter().all(|&p| !x.contains(p))
    }
}

fn domain(n: usize, mask: u64) -> Option<Domain> {
    let squares: Vec<bool> = (0..n * n).map(|k| mask >> k & 1 == 1).collect();
    let mut d = Domain { n, squares, convex: Vec::new(), concave: Vec::new(), delta: vec![0; n * n] };
    for i in 0..n {
        for j in 0..n {
            let a = d.around(i, j);
            let k = a.iter().filter(|&&b| b).count();
            match k {
                1 => d.convex.push((i, j)),
                3 => d.concave.push((i, j)),
                2 if a[0] == a[2] => return None,
                _ => {}
            }
        }
    }
    // Rightward horizontal segment on row line j over column i carries
    // D(i, j) - D(i, j - 1); the point (i, j) receives seg(i - 1, j) - seg(i, j).
    let seg = |i: usize, j: usize| d.has(i, j) as i32 - d.has(i, j + n - 1) as i32;
    let delta = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| seg(i + n - 1, j) - seg(i, j)).collect();
    d.delta = delta;
    Some(d)
}

/// Every connected 0/1 domain with `convex` 90-degree corners and
/// `concave` 270-degree corners and no degenerate corners.
pub fn domains(n: usize, convex: usize, concave: usize) -> Vec<Domain> {
    assert!(n * n <= 20, "brute force only for tiny grids");
    (1u64..(1 << (n * n)) - 1)
        .filter_map(|m| domain(n, m))
        .filter(|d| d.convex.len() == convex && d.concave.len() == concave && d.connected())
        .collect()
}

/// Empty rectangles out of `x`: `(domain, y)`.
pub fn oracle_rectangles<'a>(rects: &'a [Domain], x: &State) -> Vec<(&'a Domain, State)> {
    rects.iter().filter_map(|r| r.target(x).filter(|_| r.empty_for(x)).map(|y| (r, y))).collect()
}

/// `dx` by brute force: X-free empty rectangles, mod 2.
pub fn oracle_boundary(d: &GridDiagram, rects: &[Domain], x: &State) -> BTreeMap<(Monomial, State), usize> {
    let mut out = BTreeMap::new();
    for (r, y) in oracle_rectangles(rects, x) {
        if r.count(d.x_row()).iter().all(|&k| k == 0) {
            *out.entry((r.monomial(d, None), y)).or_insert(0) += 1;
        }
    }
    out.retain(|_, v| *v % 2 == 1);
    out
}

/// Empty hexagons out of `x` with the concave corner at `c`.
pub fn oracle_hexagons<'a>(hexes: &'a [Domain], c: (usize, usize), x: &State) -> Vec<(&'a Domain, State)> {
    hexes
        .iter()
        .filter(|h| h.concave == [c])
        .filter_map(|h| h.target(x).filter(|_| h.empty_for(x)).map(|y| (h, y)))
        .collect()
}

pub fn square_set(n: usize, f: impl Fn((usize, usize)) -> bool) -> Vec<bool> {
    (0..n).flat_map(|c| (0..n).map(move |r| (c, r))).map(f).collect()
}

// F[U]-module oracle -----------------------------------------------------------

/// A cyclic module as a two-term complex over F[U]: a tower is one
/// generator; `F[U]/U^k` at `g` is `a` at `g` and `b` with `db = U^k a`.
#[derive(Clone, Copy, Debug)]
pub enum Cyclic {
    Tower(Bigrading),
    Torsion(Bigrading, u32),
}

/// Generators `(grading, d)` where `d` lists `(power of U, target)`.
pub type TinyComplex = Vec<(Bigrading, Vec<(u32, usize)>)>;

pub fn resolution(summands: &[Cyclic]) -> TinyComplex {
    let mut c: TinyComplex = Vec::new();
    for s in summands {
        match *s {
            Cyclic::Tower(g) => c.push((g, Vec::new())),
            Cyclic::Torsion(g, k) => {
                let a = c.len();
                c.push((g, Vec::new()));
                c.push((g.lowered(k) + Bigrading::new(1, 0), vec![(k, a)]));
            }
        }
    }
    c
}

/// Tensor product over F[U] of two tiny complexes.
pub fn tiny_tensor(a: &TinyComplex, b: &TinyComplex) -> TinyComplex {
    let mut out = Vec::new();
    for (i, (ga, da)) in a.iter().enumerate() {
        for (j, (gb, db)) in b.iter().enumerate() {
            let mut d: Vec<(u32, usize)> = da.iter().map(|&(k, t)| (k, t * b.len() + j)).collect();
            d.extend(db.iter().map(|&(k, t)| (k, i * b.len() + t)));
            out.push((*ga + *gb, d));
        }
    }
    out
}

pub fn dense_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, |r| r.len());
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] {
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Homology dimension at `b` by dense linear algebra on the F-basis
/// `U^k gen` of the bigradings `b` and `b +- (1, 0)`.
pub fn tiny_homology_dim(c: &TinyComplex, b: Bigrading) -> usize {
    let basis = |at: Bigrading| -> Vec<(u32, usize)> {
        c.iter()
            .enumerate()
            .filter_map(|(g, (gr, _))| {
                let dm = gr.maslov - at.maslov;
                let da = gr.alexander - at.alexander;
                (da >= 0 && dm == 2 * da).then_some((da as u32, g))
            })
            .collect()
    };
    let matrix = |src: &[(u32, usize)], tgt: &[(u32, usize)]| -> Vec<Vec<bool>> {
        src.iter()
            .map(|&(k, g)| {
                let mut col = vec![false; tgt.len()];
                for &(p, t) in &c[g].1 {
                    if let Some(i) = tgt.iter().position(|&e| e == (k + p, t)) {
                        col[i] ^= true;
                    }
                }
                col
            })
            .collect()
    };
    let here = basis(b);
    let below = basis(b + Bigrading::new(-1, 0));
    let above = basis(b + Bigrading::new(1, 0));
    let out = if below.is_empty() { 0 } else { dense_rank(matrix(&here, &below)) };
    let inn = if here.is_empty() { 0 } else { dense_rank(matrix(&above, &here)) };
    here.len() - out - inn
}
