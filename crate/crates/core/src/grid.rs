//! Grid diagrams on the n x n torus.
//!
//! Columns are numbered `0..n` left to right and rows `0..n` bottom to top;
//! square `(i, j)` is column `i`, row `j`. Lattice point `(i, j)` is the
//! lower-left corner of square `(i, j)`. Text and JSON forms are 1-indexed
//! in the usual reading order (top text line is the top row).

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GridDiagram {
    n: usize,
    o_row: Vec<usize>,
    x_row: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("{which} markings do not form a permutation (row {row} used {count} times)")]
    NotPermutation { which: char, row: usize, count: usize },
    #[error("O and X share square (column {col}, row {row})")]
    SharedSquare { col: usize, row: usize },
    #[error("diagram has {0} components, expected a knot")]
    NotAKnot(usize),
    #[error("bad character {ch:?} at line {line}, column {col}")]
    BadCharacter { line: usize, col: usize, ch: char },
    #[error("ragged rows: line {line} has {len} squares, expected {n}")]
    RaggedRows { line: usize, len: usize, n: usize },
    #[error("column {col} has {os} O and {xs} X markings")]
    BadColumn { col: usize, os: usize, xs: usize },
    #[error("empty diagram")]
    Empty,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("not a stabilized diagram of type {0:?}")]
    NotStabilized(StabKind),
    #[error("invalid JSON: {0}")]
    Json(String),
}

/// Type of a stabilization, named after the position of the X adjacent to the
/// new O relative to the distinguished point `c`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum StabKind {
    SE,
    NW,
}

/// Markings of a stabilized diagram. Positions are squares `(col, row)`;
/// `c` is a lattice point.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MarkingLabels {
    pub kind: StabKind,
    pub o1: (usize, usize),
    pub o2: (usize, usize),
    pub x1: (usize, usize),
    pub x2: (usize, usize),
    pub c: (usize, usize),
}

#[derive(Serialize, Deserialize)]
struct GridJson {
    n: usize,
    o_row: Vec<usize>,
    x_row: Vec<usize>,
}

fn permutation_error(which: char, p: &[usize], n: usize) -> Option<GridError> {
    let mut count = vec![0usize; n];
    for &r in p {
        if r >= n {
            return Some(GridError::NotPermutation { which, row: r, count: 1 });
        }
        count[r] += 1;
    }
    count
        .iter()
        .position(|&c| c != 1)
        .map(|row| GridError::NotPermutation { which, row, count: count[row] })
}

impl GridDiagram {
    /// Builds and validates a diagram from 0-indexed row permutations.
    pub fn new(o_row: Vec<usize>, x_row: Vec<usize>) -> Result<Self, GridError> {
        let d = GridDiagram { n: o_row.len(), o_row, x_row };
        d.validate()?;
        Ok(d)
    }

    pub fn from_one_indexed(o_row: &[usize], x_row: &[usize]) -> Result<Self, GridError> {
        let conv = |v: &[usize]| v.iter().map(|&r| r.wrapping_sub(1)).collect();
        Self::new(conv(o_row), conv(x_row))
    }

    /// Unchecked constructor for building intermediate diagrams.
    pub(crate) fn raw(o_row: Vec<usize>, x_row: Vec<usize>) -> Self {
        GridDiagram { n: o_row.len(), o_row, x_row }
    }

    pub fn validate(&self) -> Result<(), GridError> {
        let n = self.n;
        if n == 0 {
            return Err(GridError::Empty);
        }
        if self.x_row.len() != n {
            return Err(GridError::SizeMismatch(n, self.x_row.len()));
        }
        if let Some(e) = permutation_error('O', &self.o_row, n) {
            return Err(e);
        }
        if let Some(e) = permutation_error('X', &self.x_row, n) {
            return Err(e);
        }
        if let Some(col) = (0..n).find(|&i| self.o_row[i] == self.x_row[i]) {
            return Err(GridError::SharedSquare { col, row: self.o_row[col] });
        }
        match self.components() {
            1 => Ok(()),
            k => Err(GridError::NotAKnot(k)),
        }
    }

    /// Number of cycles of the permutation `x_row^-1 . o_row`.
    pub fn components(&self) -> usize {
        let xinv = invert(&self.x_row);
        let mut seen = vec![false; self.n];
        let mut cycles = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            cycles += 1;
            let mut c = s;
            while !seen[c] {
                seen[c] = true;
                c = xinv[self.o_row[c]];
            }
        }
        cycles
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn o_row(&self) -> &[usize] {
        &self.o_row
    }

    pub fn x_row(&self) -> &[usize] {
        &self.x_row
    }

    /// Column of the O-marking in `row`.
    pub fn o_col(&self, row: usize) -> usize {
        self.o_row.iter().position(|&r| r == row).expect("permutation")
    }

    pub fn x_col(&self, row: usize) -> usize {
        self.x_row.iter().position(|&r| r == row).expect("permutation")
    }

    pub fn parse_text(s: &str) -> Result<Self, GridError> {
        let lines: Vec<&str> = s.lines().map(|l| l.trim_end_matches('\r')).filter(|l| !l.trim().is_empty()).collect();
        let n = lines.len();
        if n == 0 {
            return Err(GridError::Empty);
        }
        let mut os: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut xs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (li, line) in lines.iter().enumerate() {
            let row = n - 1 - li;
            let chars: Vec<char> = line.chars().collect();
            if chars.len() != n {
                return Err(GridError::RaggedRows { line: li + 1, len: chars.len(), n });
            }
            for (col, &ch) in chars.iter().enumerate() {
                match ch {
                    'O' | 'o' => os[col].push(row),
                    'X' | 'x' => xs[col].push(row),
                    '.' => {}
                    _ => return Err(GridError::BadCharacter { line: li + 1, col: col + 1, ch }),
                }
            }
        }
        let mut o_row = Vec::with_capacity(n);
        let mut x_row = Vec::with_capacity(n);
        for col in 0..n {
            if os[col].len() != 1 || xs[col].len() != 1 {
                return Err(GridError::BadColumn { col: col + 1, os: os[col].len(), xs: xs[col].len() });
            }
            o_row.push(os[col][0]);
            x_row.push(xs[col][0]);
        }
        Self::new(o_row, x_row)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::with_capacity(self.n * (self.n + 1));
        for row in (0..self.n).rev() {
            for col in 0..self.n {
                out.push(if self.o_row[col] == row {
                    'O'
                } else if self.x_row[col] == row {
                    'X'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let j = GridJson {
            n: self.n,
            o_row: self.o_row.iter().map(|r| r + 1).collect(),
            x_row: self.x_row.iter().map(|r| r + 1).collect(),
        };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, GridError> {
        let j: GridJson = serde_json::from_str(s).map_err(|e| GridError::Json(e.to_string()))?;
        if j.o_row.len() != j.n || j.x_row.len() != j.n {
            return Err(GridError::SizeMismatch(j.n, j.o_row.len().max(j.x_row.len())));
        }
        Self::from_one_indexed(&j.o_row, &j.x_row)
    }

    /// Accepts either the JSON or the text format.
    pub fn parse_any(s: &str) -> Result<Self, GridError> {
        if s.trim_start().starts_with('{') {
            Self::from_json(s)
        } else {
            Self::parse_text(s)
        }
    }

    /// Cyclic translation moving square `(i, j)` to `(i + dx, j + dy)`.
    pub fn translate(&self, dx: usize, dy: usize) -> GridDiagram {
        let n = self.n;
        let mut o = vec![0; n];
        let mut x = vec![0; n];
        for i in 0..n {
            o[(i + dx) % n] = (self.o_row[i] + dy) % n;
            x[(i + dx) % n] = (self.x_row[i] + dy) % n;
        }
        GridDiagram::raw(o, x)
    }

    /// Translate so that column 0's X lands in the top-left square.
    pub fn normalize_left(&self) -> GridDiagram {
        let n = self.n;
        self.translate(0, (2 * n - 1 - self.x_row[0]) % n)
    }

    /// Translate so that column 0's X lands in the bottom-right square.
    pub fn normalize_right(&self) -> GridDiagram {
        let n = self.n;
        self.translate(n - 1, (n - self.x_row[0]) % n)
    }

    /// `g1'`: the X in the top-left square is replaced by a new row at the
    /// bottom and a new column on the right, with the new O in the
    /// bottom-right square and new X's in the bottom-left and top-right.
    pub fn prepare_summand_left(&self) -> Result<GridDiagram, GridError> {
        let m = self.n;
        if self.x_row[0] != m - 1 {
            return Err(GridError::PreconditionViolated("no X in the top-left square".into()));
        }
        let n = m + 1;
        let mut o: Vec<usize> = self.o_row.iter().map(|r| r + 1).collect();
        let mut x: Vec<usize> = self.x_row.iter().map(|r| r + 1).collect();
        o.push(0);
        x.push(n - 1);
        x[0] = 0;
        GridDiagram::new(o, x)
    }

    /// `g2'`: the X in the bottom-right square is replaced by a new column at
    /// the left and a new row on top, with the new O in the top-left square.
    pub fn prepare_summand_right(&self) -> Result<GridDiagram, GridError> {
        let m = self.n;
        if self.x_row[m - 1] != 0 {
            return Err(GridError::PreconditionViolated("no X in the bottom-right square".into()));
        }
        let n = m + 1;
        let mut o = vec![n - 1];
        o.extend_from_slice(&self.o_row);
        let mut x = vec![0];
        x.extend_from_slice(&self.x_row);
        x[n - 1] = n - 1;
        GridDiagram::new(o, x)
    }

    /// `g#`: `g1p` in the top-left block, `g2p` in the bottom-right block,
    /// then the O-markings of rows `n-1` and `n` exchange columns.
    pub fn connect(g1p: &GridDiagram, g2p: &GridDiagram) -> Result<GridDiagram, GridError> {
        let n = g1p.n;
        if g2p.n != n {
            return Err(GridError::SizeMismatch(n, g2p.n));
        }
        canonical_marking_labels(g1p, StabKind::SE)?;
        canonical_marking_labels(g2p, StabKind::NW)?;
        let mut o: Vec<usize> = g1p.o_row.iter().map(|r| r + n).collect();
        o.extend_from_slice(&g2p.o_row);
        let mut x: Vec<usize> = g1p.x_row.iter().map(|r| r + n).collect();
        x.extend_from_slice(&g2p.x_row);
        let ci = o.iter().position(|&r| r == n - 1).expect("row n-1");
        let cj = o.iter().position(|&r| r == n).expect("row n");
        o[ci] = n;
        o[cj] = n - 1;
        GridDiagram::new(o, x)
    }

    /// Removes the stabilization at `O_1`: its row and column are deleted and
    /// the two X's next to it merge into one.
    pub fn destabilize(&self, labels: &MarkingLabels) -> GridDiagram {
        let (k, r) = labels.o1;
        let col = |i: usize| if i < k { i } else { i - 1 };
        let row = |j: usize| if j < r { j } else { j - 1 };
        let row_mate = self.x_col(r);
        let col_mate = self.x_row[k];
        let mut o = vec![0; self.n - 1];
        let mut x = vec![0; self.n - 1];
        for i in (0..self.n).filter(|&i| i != k) {
            o[col(i)] = row(self.o_row[i]);
            if i == row_mate {
                x[col(i)] = row(col_mate);
            } else {
                x[col(i)] = row(self.x_row[i]);
            }
        }
        GridDiagram::raw(o, x)
    }
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

/// Labels of the stabilization produced by `prepare_summand_left` (SE) or
/// `prepare_summand_right` (NW).
///
/// SE: `O_1` is the O in the new column, `X_1` shares its row, `X_2` its
/// column, `O_2` is the O in `X_1`'s column, and `c` is the lower-right
/// corner of `O_1`'s square. NW: `O_1` is the O in the new column, `X_1`
/// shares its column, `X_2` its row, `O_2` is the O in `X_1`'s row, and `c`
/// is the upper-left corner of `O_1`'s square.
pub fn canonical_marking_labels(d: &GridDiagram, kind: StabKind) -> Result<MarkingLabels, GridError> {
    let n = d.n;
    let err = || GridError::NotStabilized(kind);
    if n < 2 {
        return Err(err());
    }
    match kind {
        StabKind::SE => {
            let o1 = (n - 1, 0);
            if d.o_row[n - 1] != 0 || d.x_row[0] != 0 || d.x_row[n - 1] != n - 1 {
                return Err(err());
            }
            let x1 = (0, 0);
            let x2 = (n - 1, n - 1);
            let o2 = (0, d.o_row[0]);
            Ok(MarkingLabels { kind, o1, o2, x1, x2, c: (0, 0) })
        }
        StabKind::NW => {
            let o1 = (0, n - 1);
            if d.o_row[0] != n - 1 || d.x_row[0] != 0 || d.x_row[n - 1] != n - 1 {
                return Err(err());
            }
            let x1 = (0, 0);
            let x2 = (n - 1, n - 1);
            let o2 = (d.o_col(0), 0);
            Ok(MarkingLabels { kind, o1, o2, x1, x2, c: (0, 0) })
        }
    }
}

impl fmt::Display for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_text())
    }
}
