/// Dense matrix over F2 with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct RankKernelImage {
    pub rank: usize,
    /// Basis of the null space, one vector per row (length `cols`).
    pub kernel: F2Matrix,
    /// Basis of the column space, one vector per row (length `rows`).
    pub image: F2Matrix,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        F2Matrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), cols, |r, c| rows[r][c] & 1 == 1)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    fn xor_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * w);
            (&mut lo[dst * w..dst * w + w], &hi[..w])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * w);
            (&mut hi[..w], &lo[src * w..src * w + w])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= *y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for k in 0..self.words {
                self.data.swap(a * self.words + k, b * self.words + k);
            }
        }
    }

    pub fn transpose(&self) -> F2Matrix {
        F2Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let src = other.row_words(k);
                    let dst = &mut out.data[r * out.words..(r + 1) * out.words];
                    for (x, y) in dst.iter_mut().zip(src) {
                        *x ^= *y;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c)) else {
                continue;
            };
            self.swap_rows(r, p);
            for i in 0..self.rows {
                if i != r && self.get(i, c) {
                    self.xor_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn rank_kernel_image(&self) -> RankKernelImage {
        let mut red = self.clone();
        let pivots = red.rref();
        let rank = pivots.len();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut kernel = F2Matrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            kernel.set(k, f, true);
            for (i, &p) in pivots.iter().enumerate() {
                if red.get(i, f) {
                    kernel.set(k, p, true);
                }
            }
        }
        let image = F2Matrix::from_fn(rank, self.rows, |k, r| self.get(r, pivots[k]));
        RankKernelImage {
            rank,
            kernel,
            image,
        }
    }
}

/// Sparse F2 vector: strictly increasing coordinate indices.
pub type SparseVec = Vec<u32>;

pub fn xor_sorted(a: &[u32], b: &[u32]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else if a[i] > b[j] {
            out.push(b[j]);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Sparse echelon basis keyed by the largest index of each vector.
#[derive(Clone, Debug)]
pub struct Echelon {
    by_low: Vec<u32>,
    vecs: Vec<SparseVec>,
}

const NONE: u32 = u32::MAX;

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            by_low: vec![NONE; dim],
            vecs: Vec::new(),
        }
    }

    /// Wraps vectors that already have pairwise distinct leading indices.
    pub fn from_reduced(dim: usize, vecs: Vec<SparseVec>) -> Self {
        let mut by_low = vec![NONE; dim];
        for (k, v) in vecs.iter().enumerate() {
            let low = *v.last().expect("nonzero vector") as usize;
            debug_assert_eq!(by_low[low], NONE);
            by_low[low] = k as u32;
        }
        Echelon { by_low, vecs }
    }

    pub fn rank(&self) -> usize {
        self.vecs.len()
    }

    pub fn pivot_of(&self, low: u32) -> Option<&SparseVec> {
        match self.by_low[low as usize] {
            NONE => None,
            k => Some(&self.vecs[k as usize]),
        }
    }

    /// Reduces `v` until its leading index is not a pivot.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        while let Some(&low) = v.last() {
            match self.by_low[low as usize] {
                NONE => break,
                k => v = xor_sorted(&v, &self.vecs[k as usize]),
            }
        }
        v
    }

    /// Adds `v` to the span; returns false if it was already there.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let v = self.reduce(v);
        match v.last() {
            None => false,
            Some(&low) => {
                self.by_low[low as usize] = self.vecs.len() as u32;
                self.vecs.push(v);
                true
            }
        }
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn lows(&self) -> impl Iterator<Item = u32> + '_ {
        self.vecs.iter().map(|v| *v.last().unwrap())
    }
}

/// Rank of the span of sparse vectors in a space of dimension `dim`.
pub fn sparse_rank(dim: usize, vecs: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut e = Echelon::new(dim);
    for v in vecs {
        e.insert(v);
    }
    e.rank()
}
