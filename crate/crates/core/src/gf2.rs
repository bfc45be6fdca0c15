//! Dense linear algebra over GF(2).
//!
//! [`BitMatrix`] is the index-based, bit-packed workhorse; [`Gf2Matrix`]
//! attaches row and column labels to it and resolves every label-based
//! operation to index form.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Gf2Error {
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("matrix is not square with matching row and column labels")]
    NotSquare,
    #[error("principal submatrix is singular")]
    Singular,
    #[error("rows {0:?} are linearly dependent")]
    DependentRows(Vec<String>),
    #[error("row {0} is not in the span of the basis rows")]
    NotSpanning(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// A dense `rows x cols` matrix over GF(2), one bit per entry, rows packed
/// into `u64` words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
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

    /// Builds a matrix from 0/1 rows. Panics on ragged input.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged rows");
            for (c, &b) in row.iter().enumerate() {
                if b & 1 == 1 {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.words[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.words[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        self.words[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.words[r * self.stride..(r + 1) * self.stride]
    }

    /// `row[dst] ^= row[src]`.
    pub fn xor_row(&mut self, src: usize, dst: usize) {
        if src == dst {
            self.row_mut(dst).fill(0);
            return;
        }
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.words.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.words.split_at_mut(src * s);
            (&hi[..s] as &[u64], &mut lo[dst * s..(dst + 1) * s])
        };
        for (d, x) in b.iter_mut().zip(a) {
            *d ^= *x;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.words.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row(r).iter().all(|&w| w == 0)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row_ones(r) {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Column indices of the set bits in row `r`, ascending.
    pub fn row_ones(&self, r: usize) -> impl Iterator<Item = usize> + '_ {
        let cols = self.cols;
        self.row(r).iter().enumerate().flat_map(move |(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + b)
            })
            .take_while(move |&c| c < cols)
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn principal(&self, idx: &[usize]) -> BitMatrix {
        self.submatrix(idx, idx)
    }

    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in self.row_ones(r).collect::<Vec<_>>() {
                let src = rhs.row(k).to_vec();
                for (d, s) in out.row_mut(r).iter_mut().zip(&src) {
                    *d ^= *s;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut out = self.clone();
        for (d, s) in out.words.iter_mut().zip(&rhs.words) {
            *d ^= *s;
        }
        out
    }

    /// Row-echelon reduction in place; returns the pivot column of each
    /// pivot row, in row order.
    fn eliminate(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(lead, p);
            for r in 0..self.rows {
                if r != lead && self.get(r, c) {
                    self.xor_row(lead, r);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().len()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = BitMatrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in self.row_ones(r) {
                aug.set(r, c, true);
            }
            aug.set(r, n + r, true);
        }
        let pivots = aug.eliminate();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Some(aug.submatrix(&rows, &cols))
    }

    /// Principal pivot transform `M * X` for a square matrix and a set of
    /// indices `X` with `M[X]` nonsingular. The empty set returns `M`.
    pub fn principal_pivot(&self, x: &[usize]) -> Option<BitMatrix> {
        if !self.is_square() {
            return None;
        }
        if x.is_empty() {
            return Some(self.clone());
        }
        let n = self.rows;
        let mut in_x = vec![false; n];
        for &i in x {
            in_x[i] = true;
        }
        let y: Vec<usize> = (0..n).filter(|&i| !in_x[i]).collect();
        let a_inv = self.principal(x).inverse()?;
        let b = self.submatrix(x, &y);
        let c = self.submatrix(&y, x);
        let d = self.principal(&y);
        let a_inv_b = a_inv.mul(&b);
        let c_a_inv = c.mul(&a_inv);
        let schur = d.add(&c.mul(&a_inv_b));

        let mut out = BitMatrix::zeros(n, n);
        let blocks: [(&[usize], &[usize], &BitMatrix); 4] = [
            (x, x, &a_inv),
            (x, &y, &a_inv_b),
            (&y, x, &c_a_inv),
            (&y, &y, &schur),
        ];
        for (rs, cs, blk) in blocks {
            for (i, &r) in rs.iter().enumerate() {
                for j in blk.row_ones(i) {
                    out.set(r, cs[j], true);
                }
            }
        }
        Some(out)
    }

    /// Coefficients expressing every row over the rows indexed by `basis`.
    ///
    /// Returns `P` with `P * M[basis, :] = M`, or the offending row index:
    /// `Err(Ok(i))` when basis row `i` is dependent, `Err(Err(r))` when row
    /// `r` is outside the span.
    pub fn express_rows(&self, basis: &[usize]) -> Result<BitMatrix, Result<usize, usize>> {
        let k = basis.len();
        let mut span = Echelon::new(self.cols, k);
        for (j, &b) in basis.iter().enumerate() {
            let mut tag = vec![0u64; words_for(k)];
            tag[j / WORD] |= 1 << (j % WORD);
            if !span.insert(self.row(b).to_vec(), tag) {
                return Err(Ok(b));
            }
        }
        let mut p = BitMatrix::zeros(self.rows, k);
        for r in 0..self.rows {
            match span.express(self.row(r)) {
                Some(tag) => p.row_mut(r).copy_from_slice(&tag),
                None => return Err(Err(r)),
            }
        }
        Ok(p)
    }

    /// Greedy row basis containing `seed`: seed rows first (in the given
    /// order), then every other row in index order that is independent of
    /// those already chosen. `Err(i)` names a dependent seed row.
    pub fn extend_basis(&self, seed: &[usize]) -> Result<Vec<usize>, usize> {
        let mut span = Echelon::new(self.cols, 0);
        let mut chosen = Vec::with_capacity(seed.len());
        let mut taken = vec![false; self.rows];
        for &s in seed {
            if taken[s] || !span.insert(self.row(s).to_vec(), Vec::new()) {
                return Err(s);
            }
            taken[s] = true;
            chosen.push(s);
        }
        for r in 0..self.rows {
            if !taken[r] && span.insert(self.row(r).to_vec(), Vec::new()) {
                chosen.push(r);
            }
        }
        Ok(chosen)
    }
}

/// Incrementally built echelon basis; each stored vector carries a tag
/// recording which original vectors it combines.
struct Echelon {
    stride: usize,
    tag_stride: usize,
    rows: Vec<(usize, Vec<u64>, Vec<u64>)>,
}

impl Echelon {
    fn new(cols: usize, tags: usize) -> Self {
        Echelon {
            stride: words_for(cols),
            tag_stride: words_for(tags),
            rows: Vec::new(),
        }
    }

    fn reduce(&self, v: &mut [u64], tag: &mut [u64]) {
        for (pivot, row, rtag) in &self.rows {
            if (v[pivot / WORD] >> (pivot % WORD)) & 1 == 1 {
                for (d, s) in v.iter_mut().zip(row) {
                    *d ^= *s;
                }
                for (d, s) in tag.iter_mut().zip(rtag) {
                    *d ^= *s;
                }
            }
        }
    }

    fn insert(&mut self, mut v: Vec<u64>, mut tag: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.stride);
        tag.resize(self.tag_stride, 0);
        self.reduce(&mut v, &mut tag);
        let Some(wi) = v.iter().position(|&w| w != 0) else {
            return false;
        };
        let pivot = wi * WORD + v[wi].trailing_zeros() as usize;
        // keep the stored rows fully reduced on the new pivot
        for (_, row, rtag) in &mut self.rows {
            if (row[pivot / WORD] >> (pivot % WORD)) & 1 == 1 {
                for (d, s) in row.iter_mut().zip(&v) {
                    *d ^= *s;
                }
                for (d, s) in rtag.iter_mut().zip(&tag) {
                    *d ^= *s;
                }
            }
        }
        self.rows.push((pivot, v, tag));
        true
    }

    fn express(&self, v: &[u64]) -> Option<Vec<u64>> {
        let mut v = v.to_vec();
        let mut tag = vec![0u64; self.tag_stride];
        self.reduce(&mut v, &mut tag);
        v.iter().all(|&w| w == 0).then_some(tag)
    }
}

/// A GF(2) matrix whose rows and columns carry distinct labels.
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix<L> {
    row_labels: Vec<L>,
    col_labels: Vec<L>,
    bits: BitMatrix,
}

impl<L: fmt::Debug> fmt::Debug for Gf2Matrix<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix cols={:?}", self.col_labels)?;
        for (r, label) in self.row_labels.iter().enumerate() {
            let line: String = (0..self.bits.cols())
                .map(|c| if self.bits.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {label:?}: {line}")?;
        }
        Ok(())
    }
}

fn label_index<L: Eq + Hash + Clone + fmt::Debug>(
    labels: &[L],
) -> Result<HashMap<L, usize>, Gf2Error> {
    let mut map = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if map.insert(l.clone(), i).is_some() {
            return Err(Gf2Error::DuplicateLabel(format!("{l:?}")));
        }
    }
    Ok(map)
}

impl<L: Eq + Hash + Clone + fmt::Debug> Gf2Matrix<L> {
    pub fn new(row_labels: Vec<L>, col_labels: Vec<L>, bits: BitMatrix) -> Result<Self, Gf2Error> {
        if bits.rows() != row_labels.len() || bits.cols() != col_labels.len() {
            return Err(Gf2Error::Shape(format!(
                "{} row labels, {} column labels for a {}x{} matrix",
                row_labels.len(),
                col_labels.len(),
                bits.rows(),
                bits.cols()
            )));
        }
        label_index(&row_labels)?;
        label_index(&col_labels)?;
        Ok(Gf2Matrix {
            row_labels,
            col_labels,
            bits,
        })
    }

    /// Convenience constructor from 0/1 rows.
    pub fn from_rows<R: AsRef<[u8]>>(
        row_labels: Vec<L>,
        col_labels: Vec<L>,
        rows: &[R],
    ) -> Result<Self, Gf2Error> {
        let bits = if rows.is_empty() {
            BitMatrix::zeros(0, col_labels.len())
        } else {
            BitMatrix::from_rows(rows)
        };
        Self::new(row_labels, col_labels, bits)
    }

    pub fn row_labels(&self) -> &[L] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[L] {
        &self.col_labels
    }

    pub fn bits(&self) -> &BitMatrix {
        &self.bits
    }

    pub fn into_bits(self) -> BitMatrix {
        self.bits
    }

    fn row_pos(&self, label: &L) -> Result<usize, Gf2Error> {
        self.row_labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Gf2Error::UnknownLabel(format!("{label:?}")))
    }

    fn col_pos(&self, label: &L) -> Result<usize, Gf2Error> {
        self.col_labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Gf2Error::UnknownLabel(format!("{label:?}")))
    }

    fn row_positions(&self, labels: &[L]) -> Result<Vec<usize>, Gf2Error> {
        let map = label_index(&self.row_labels)?;
        let mut seen = std::collections::HashSet::new();
        labels
            .iter()
            .map(|l| {
                let i = *map
                    .get(l)
                    .ok_or_else(|| Gf2Error::UnknownLabel(format!("{l:?}")))?;
                if !seen.insert(i) {
                    return Err(Gf2Error::DuplicateLabel(format!("{l:?}")));
                }
                Ok(i)
            })
            .collect()
    }

    pub fn get(&self, row: &L, col: &L) -> Result<bool, Gf2Error> {
        Ok(self.bits.get(self.row_pos(row)?, self.col_pos(col)?))
    }

    pub fn rank(&self) -> usize {
        self.bits.rank()
    }

    pub fn transpose(&self) -> Self {
        Gf2Matrix {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            bits: self.bits.transpose(),
        }
    }

    /// `M[rows, cols]` by label, in the order given.
    pub fn submatrix(&self, rows: &[L], cols: &[L]) -> Result<Self, Gf2Error> {
        let r = self.row_positions(rows)?;
        let cmap = label_index(&self.col_labels)?;
        let c = cols
            .iter()
            .map(|l| {
                cmap.get(l)
                    .copied()
                    .ok_or_else(|| Gf2Error::UnknownLabel(format!("{l:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Gf2Matrix {
            row_labels: rows.to_vec(),
            col_labels: cols.to_vec(),
            bits: self.bits.submatrix(&r, &c),
        })
    }

    /// Matrix product; the column labels of `self` must equal the row
    /// labels of `rhs` in order.
    pub fn mul(&self, rhs: &Self) -> Result<Self, Gf2Error> {
        if self.col_labels != rhs.row_labels {
            return Err(Gf2Error::Shape(
                "column labels of the left factor differ from row labels of the right".into(),
            ));
        }
        Ok(Gf2Matrix {
            row_labels: self.row_labels.clone(),
            col_labels: rhs.col_labels.clone(),
            bits: self.bits.mul(&rhs.bits),
        })
    }

    fn require_square(&self) -> Result<(), Gf2Error> {
        if self.row_labels != self.col_labels {
            return Err(Gf2Error::NotSquare);
        }
        Ok(())
    }

    /// Whether the principal submatrix `M[X]` is nonsingular. `X = ∅` is.
    pub fn is_nonsingular(&self, x: &[L]) -> Result<bool, Gf2Error> {
        self.require_square()?;
        let idx = self.row_positions(x)?;
        Ok(self.bits.principal(&idx).is_nonsingular())
    }

    /// Principal pivot transform `M * X`.
    pub fn principal_pivot(&self, x: &[L]) -> Result<Self, Gf2Error> {
        self.require_square()?;
        let idx = self.row_positions(x)?;
        let bits = self.bits.principal_pivot(&idx).ok_or(Gf2Error::Singular)?;
        Ok(Gf2Matrix {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            bits,
        })
    }

    /// The unique `P` (rows of `M` by `basis`) with `P * M[basis, :] = M`.
    pub fn express_rows(&self, basis: &[L]) -> Result<Self, Gf2Error> {
        let idx = self.row_positions(basis)?;
        match self.bits.express_rows(&idx) {
            Ok(p) => Ok(Gf2Matrix {
                row_labels: self.row_labels.clone(),
                col_labels: basis.to_vec(),
                bits: p,
            }),
            Err(Ok(_)) => Err(Gf2Error::DependentRows(
                basis.iter().map(|l| format!("{l:?}")).collect(),
            )),
            Err(Err(r)) => Err(Gf2Error::NotSpanning(format!("{:?}", self.row_labels[r]))),
        }
    }

    /// Row basis containing `seed`, seed first, remaining rows scanned in
    /// row-label order.
    pub fn extend_basis(&self, seed: &[L]) -> Result<Vec<L>, Gf2Error> {
        let idx = self.row_positions(seed)?;
        match self.bits.extend_basis(&idx) {
            Ok(rows) => Ok(rows.into_iter().map(|r| self.row_labels[r].clone()).collect()),
            Err(_) => Err(Gf2Error::DependentRows(
                seed.iter().map(|l| format!("{l:?}")).collect(),
            )),
        }
    }
}
