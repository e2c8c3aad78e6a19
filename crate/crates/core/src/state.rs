//! States, Maslov/Alexander gradings and empty rectangles.

use crate::algebra::Bigrading;
use crate::grid::GridDiagram;
use smallvec::SmallVec;
use std::fmt;
use thiserror::Error;

/// A generator of the grid complex: column line `i` carries the point on row
/// line `perm[i]`, i.e. the lattice point `(i, perm[i])`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State(SmallVec<[u8; 16]>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StateError {
    #[error("Alexander grading {0}/2 is not an integer")]
    HalfIntegerResult(i32),
    #[error("not a permutation of 0..{0}")]
    NotPermutation(usize),
}

impl State {
    pub fn new(perm: &[usize]) -> Result<Self, StateError> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &r in perm {
            if r >= n || seen[r] {
                return Err(StateError::NotPermutation(n));
            }
            seen[r] = true;
        }
        Ok(State(perm.iter().map(|&r| r as u8).collect()))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn row(&self, col: usize) -> usize {
        self.0[col] as usize
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn col_of_row(&self, row: usize) -> usize {
        self.0.iter().position(|&r| r as usize == row).expect("permutation")
    }

    pub fn contains(&self, (col, row): (usize, usize)) -> bool {
        self.0[col] as usize == row
    }

    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().enumerate().map(|(i, &r)| (i, r as usize))
    }

    pub(crate) fn bytes_mut(&mut self) -> &mut [u8] {
        &mut self.0
    }

    /// Columns where the two states differ.
    /// Position in `enumerate_states(n)`.
    pub fn lex_rank(&self) -> u64 {
        let n = self.n();
        let mut r = 0u64;
        let mut used = 0u32;
        for (i, &v) in self.0.iter().enumerate() {
            let smaller = (v as u32) - (used & ((1u32 << v) - 1)).count_ones();
            r = r * (n - i) as u64 + smaller as u64;
            used |= 1 << v;
        }
        r
    }

    pub fn diff_cols(&self, other: &State) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.0[i] != other.0[i]).collect()
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, r) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "]")
    }
}

/// All `n!` states in lexicographic order.
pub fn enumerate_states(n: usize) -> impl Iterator<Item = State> {
    let mut cur: Option<Vec<u8>> = Some((0..n as u8).collect());
    std::iter::from_fn(move || {
        let out = cur.take()?;
        let mut next = out.clone();
        if next_permutation(&mut next) {
            cur = Some(next);
        }
        Some(State(SmallVec::from_vec(out)))
    })
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Precomputed marking data for grading computations. Coordinates are
/// doubled so that markings sit at odd positions and lattice points at even.
#[derive(Clone, Debug)]
pub struct Gradings {
    n: usize,
    o: Vec<(i32, i32)>,
    x: Vec<(i32, i32)>,
    j_oo: i32,
    j_xx: i32,
}

fn count_lt(a: &[(i32, i32)], b: &[(i32, i32)]) -> i32 {
    let mut c = 0;
    for p in a {
        for q in b {
            if p.0 < q.0 && p.1 < q.1 {
                c += 1;
            }
        }
    }
    c
}

/// `2 J(A, B) = I(A, B) + I(B, A)`.
fn j2(a: &[(i32, i32)], b: &[(i32, i32)]) -> i32 {
    count_lt(a, b) + count_lt(b, a)
}

impl Gradings {
    pub fn new(d: &GridDiagram) -> Self {
        let mark = |rows: &[usize]| -> Vec<(i32, i32)> {
            rows.iter().enumerate().map(|(i, &r)| (2 * i as i32 + 1, 2 * r as i32 + 1)).collect()
        };
        let o = mark(d.o_row());
        let x = mark(d.x_row());
        let j_oo = j2(&o, &o);
        let j_xx = j2(&x, &x);
        Gradings { n: d.n(), o, x, j_oo, j_xx }
    }

    fn points(&self, s: &State) -> SmallVec<[(i32, i32); 16]> {
        s.points().map(|(i, r)| (2 * i as i32, 2 * r as i32)).collect()
    }

    /// `M(x) = J(x - O, x - O) + 1`.
    pub fn maslov(&self, s: &State) -> i32 {
        let p = self.points(s);
        (j2(&p, &p) - 2 * j2(&p, &self.o) + self.j_oo) / 2 + 1
    }

    /// Twice `A(x) = J(x - (X + O)/2, X - O) - (n - 1)/2`.
    pub fn alexander2(&self, s: &State) -> i32 {
        let p = self.points(s);
        j2(&p, &self.x) - j2(&p, &self.o) + (self.j_oo - self.j_xx) / 2 - (self.n as i32 - 1)
    }

    pub fn alexander(&self, s: &State) -> Result<i32, StateError> {
        let a2 = self.alexander2(s);
        if a2 % 2 != 0 {
            return Err(StateError::HalfIntegerResult(a2));
        }
        Ok(a2 / 2)
    }

    pub fn bigrading(&self, s: &State) -> Result<Bigrading, StateError> {
        Ok(Bigrading::new(self.maslov(s), self.alexander(s)?))
    }
}

pub fn maslov(d: &GridDiagram, s: &State) -> i32 {
    Gradings::new(d).maslov(s)
}

pub fn alexander(d: &GridDiagram, s: &State) -> Result<i32, StateError> {
    Gradings::new(d).alexander(s)
}

/// A rectangle on the torus. Its lower-left corner is the lattice point
/// `(left, bottom)`; it spans `width` columns and `height` rows, wrapping
/// around the torus when needed. The source state occupies the lower-left
/// and upper-right corners, the target state the other two.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rectangle {
    pub from: State,
    pub to: State,
    pub left: usize,
    pub bottom: usize,
    pub width: usize,
    pub height: usize,
}

impl Rectangle {
    pub fn right(&self) -> usize {
        (self.left + self.width) % self.from.n()
    }

    pub fn wraps(&self) -> (bool, bool) {
        let n = self.from.n();
        (self.left + self.width > n, self.bottom + self.height > n)
    }

    pub fn contains_square(&self, (col, row): (usize, usize)) -> bool {
        let n = self.from.n();
        (col + n - self.left) % n < self.width && (row + n - self.bottom) % n < self.height
    }

    pub fn is_empty(&self) -> bool {
        is_empty_rect(self.from.as_bytes(), self.left, self.width, self.height)
    }
}

#[inline]
pub(crate) fn is_empty_rect(st: &[u8], i: usize, w: usize, h: usize) -> bool {
    let n = st.len();
    let base = st[i] as usize;
    (1..w).all(|t| {
        let d = (st[(i + t) % n] as usize + n - base) % n;
        d == 0 || d >= h
    })
}

/// Calls `f(i, j, w, h)` for every empty rectangle out of `st` whose
/// lower-left corner is on column line `i` and upper-right on column line
/// `j`.
#[inline]
pub(crate) fn for_each_empty_rect(st: &[u8], mut f: impl FnMut(usize, usize, usize, usize)) {
    let n = st.len();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let w = (j + n - i) % n;
            let h = (st[j] as usize + n - st[i] as usize) % n;
            if is_empty_rect(st, i, w, h) {
                f(i, j, w, h);
            }
        }
    }
}

/// Bit masks (by column) of the O- and X-markings inside a rectangle whose
/// lower-left corner is `(i, bottom)`.
#[inline]
pub(crate) fn rect_masks(d: &GridDiagram, i: usize, bottom: usize, w: usize, h: usize) -> (u64, u64) {
    let n = d.n();
    let (mut om, mut xm) = (0u64, 0u64);
    for t in 0..w {
        let c = (i + t) % n;
        if (d.o_row()[c] + n - bottom) % n < h {
            om |= 1 << c;
        }
        if (d.x_row()[c] + n - bottom) % n < h {
            xm |= 1 << c;
        }
    }
    (om, xm)
}

fn swapped(x: &State, i: usize, j: usize) -> State {
    let mut y = x.clone();
    y.bytes_mut().swap(i, j);
    y
}

/// Both toroidal rectangles from `x` to `y`, empty or not.
pub fn all_rectangles(x: &State, y: &State) -> Vec<Rectangle> {
    let n = x.n();
    let diff = x.diff_cols(y);
    if diff.len() != 2 || swapped(x, diff[0], diff[1]) != *y {
        return Vec::new();
    }
    let (p, q) = (diff[0], diff[1]);
    [(p, q), (q, p)]
        .into_iter()
        .map(|(i, j)| Rectangle {
            from: x.clone(),
            to: y.clone(),
            left: i,
            bottom: x.row(i),
            width: (j + n - i) % n,
            height: (x.row(j) + n - x.row(i)) % n,
        })
        .collect()
}

pub fn empty_rectangles(x: &State, y: &State) -> Vec<Rectangle> {
    all_rectangles(x, y).into_iter().filter(|r| r.is_empty()).collect()
}

/// Every empty rectangle starting at `x`.
pub fn rectangles_from(x: &State) -> Vec<Rectangle> {
    let mut out = Vec::new();
    for_each_empty_rect(x.as_bytes(), |i, j, w, h| {
        out.push(Rectangle {
            from: x.clone(),
            to: swapped(x, i, j),
            left: i,
            bottom: x.row(i),
            width: w,
            height: h,
        })
    });
    out
}

/// Columns of the O- and X-markings inside `r`.
pub fn rectangle_contents(d: &GridDiagram, r: &Rectangle) -> (Vec<usize>, Vec<usize>) {
    let (om, xm) = rect_masks(d, r.left, r.bottom, r.width, r.height);
    (mask_cols(om), mask_cols(xm))
}

pub(crate) fn mask_cols(mut m: u64) -> Vec<usize> {
    let mut out = Vec::new();
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}
