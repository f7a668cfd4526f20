//! Bit-packed linear algebra over GF(2).
//!
//! A [`BitMatrix`] stores each row in a single `u64`; bit `c` of a row word is
//! the coefficient of column `c`. Every scheme in this crate lives in a symbol
//! space of at most 64 subfiles, so row operations are single-word XORs.

use std::fmt;

use thiserror::Error;

/// Widest supported row.
pub const MAX_COLS: usize = 64;

/// Widest row space [`enumerate_row_spaces`] will walk.
pub const MAX_ENUM_COLS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected} columns, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("column count {0} outside 1..={MAX_COLS}")]
    BadWidth(usize),
    #[error("row has bits set beyond column {cols}")]
    StrayBits { cols: usize },
    #[error("cannot enumerate {dim}-dimensional subspaces of GF(2)^{cols}")]
    EnumerationRange { cols: usize, dim: usize },
    #[error("invalid bit string {0:?}")]
    BadBitString(String),
}

#[inline]
fn mask(cols: usize) -> u64 {
    if cols == 64 {
        u64::MAX
    } else {
        (1u64 << cols) - 1
    }
}

/// A dense matrix over GF(2) with at most 64 columns.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<u64>,
}

impl BitMatrix {
    /// An empty (zero-row) matrix of the given width.
    pub fn empty(cols: usize) -> Result<Self, LinalgError> {
        Self::from_rows(cols, Vec::new())
    }

    pub fn from_rows(cols: usize, rows: Vec<u64>) -> Result<Self, LinalgError> {
        if cols == 0 || cols > MAX_COLS {
            return Err(LinalgError::BadWidth(cols));
        }
        if rows.iter().any(|r| r & !mask(cols) != 0) {
            return Err(LinalgError::StrayBits { cols });
        }
        Ok(Self { cols, rows })
    }

    /// Identity-like matrix whose rows are the unit vectors `e_c` for the given columns.
    pub fn unit_rows(cols: usize, which: impl IntoIterator<Item = usize>) -> Result<Self, LinalgError> {
        let rows = which
            .into_iter()
            .map(|c| {
                if c >= cols {
                    Err(LinalgError::DimensionMismatch { expected: cols, actual: c + 1 })
                } else {
                    Ok(1u64 << c)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(cols, rows)
    }

    /// Parses rows written as bit strings; the leftmost character is column 0.
    pub fn from_bit_strings<S: AsRef<str>>(cols: usize, rows: &[S]) -> Result<Self, LinalgError> {
        let rows = rows
            .iter()
            .map(|s| parse_bit_row(s.as_ref(), cols))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(cols, rows)
    }

    pub fn to_bit_strings(&self) -> Vec<String> {
        self.rows.iter().map(|&r| format_bit_row(r, self.cols)).collect()
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row] >> col & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// GF(2) row rank.
    pub fn rank(&self) -> usize {
        Echelon::new(self.cols, &self.rows).rank()
    }

    /// Reduced row-echelon form with zero rows dropped. Rows are ordered by
    /// pivot column, so two matrices have the same rref iff they span the same
    /// row space.
    pub fn rref(&self) -> BitMatrix {
        let ech = Echelon::new(self.cols, &self.rows);
        BitMatrix { cols: self.cols, rows: ech.into_reduced_rows() }
    }

    /// Whether `v` is a GF(2) combination of the rows of `self`.
    pub fn in_row_span(&self, v: u64) -> Result<bool, LinalgError> {
        if v & !mask(self.cols) != 0 {
            return Err(LinalgError::StrayBits { cols: self.cols });
        }
        Ok(Echelon::new(self.cols, &self.rows).contains(v))
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &BitMatrix) -> Result<BitMatrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, actual: other.cols });
        }
        let mut rows = Vec::with_capacity(self.rows.len() + other.rows.len());
        rows.extend_from_slice(&self.rows);
        rows.extend_from_slice(&other.rows);
        Ok(BitMatrix { cols: self.cols, rows })
    }

    pub fn same_row_space(&self, other: &BitMatrix) -> bool {
        self.cols == other.cols && self.rref() == other.rref()
    }

    /// Replaces row `i` with zeros.
    pub fn with_row_zeroed(&self, i: usize) -> BitMatrix {
        let mut rows = self.rows.clone();
        rows[i] = 0;
        BitMatrix { cols: self.cols, rows }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix{}x{}{:?}", self.rows.len(), self.cols, self.to_bit_strings())
    }
}

pub fn parse_bit_row(s: &str, cols: usize) -> Result<u64, LinalgError> {
    if s.len() != cols {
        return Err(LinalgError::DimensionMismatch { expected: cols, actual: s.len() });
    }
    let mut word = 0u64;
    for (c, ch) in s.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => word |= 1 << c,
            _ => return Err(LinalgError::BadBitString(s.to_string())),
        }
    }
    Ok(word)
}

pub fn format_bit_row(row: u64, cols: usize) -> String {
    (0..cols).map(|c| if row >> c & 1 == 1 { '1' } else { '0' }).collect()
}

/// An incrementally built echelon basis, used for rank and span queries
/// without allocating a new matrix per query.
#[derive(Debug, Clone)]
pub struct Echelon {
    cols: usize,
    // (pivot column, row), row has its lowest set bit at the pivot.
    basis: Vec<(u32, u64)>,
}

impl Echelon {
    pub fn new(cols: usize, rows: &[u64]) -> Self {
        let mut ech = Echelon { cols, basis: Vec::with_capacity(rows.len()) };
        for &r in rows {
            ech.insert(r);
        }
        ech
    }

    fn reduce(&self, mut v: u64) -> u64 {
        for &(p, r) in &self.basis {
            if v >> p & 1 == 1 {
                v ^= r;
            }
        }
        v
    }

    /// Adds a row; returns true if it increased the rank.
    pub fn insert(&mut self, v: u64) -> bool {
        let v = self.reduce(v);
        if v == 0 {
            return false;
        }
        let p = v.trailing_zeros();
        // Keep the basis fully reduced so `reduce` is a single pass.
        for (_, r) in self.basis.iter_mut() {
            if *r >> p & 1 == 1 {
                *r ^= v;
            }
        }
        let at = self.basis.partition_point(|&(q, _)| q < p);
        self.basis.insert(at, (p, v));
        true
    }

    pub fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn into_reduced_rows(self) -> Vec<u64> {
        self.basis.into_iter().map(|(_, r)| r).collect()
    }
}

/// Lazily yields one rref representative per `dim`-dimensional subspace of
/// GF(2)^`cols`: pivot sets in lexicographic order, then free-entry patterns
/// in binary order.
pub fn enumerate_row_spaces(cols: usize, dim: usize) -> Result<RowSpaces, LinalgError> {
    if cols == 0 || cols > MAX_ENUM_COLS || dim > cols {
        return Err(LinalgError::EnumerationRange { cols, dim });
    }
    Ok(RowSpaces::new(cols, dim))
}

/// Iterator returned by [`enumerate_row_spaces`].
#[derive(Debug, Clone)]
pub struct RowSpaces {
    cols: usize,
    dim: usize,
    pivots: Option<Vec<usize>>,
    free: Vec<Vec<usize>>,
    free_total: u32,
    pattern: u64,
}

impl RowSpaces {
    fn new(cols: usize, dim: usize) -> Self {
        let mut it = RowSpaces {
            cols,
            dim,
            pivots: Some((0..dim).collect()),
            free: Vec::new(),
            free_total: 0,
            pattern: 0,
        };
        it.load_free();
        it
    }

    fn load_free(&mut self) {
        let Some(pivots) = &self.pivots else { return };
        self.free = pivots
            .iter()
            .map(|&p| ((p + 1)..self.cols).filter(|c| !pivots.contains(c)).collect())
            .collect();
        self.free_total = self.free.iter().map(|f| f.len() as u32).sum();
        self.pattern = 0;
    }

    fn advance_pivots(&mut self) {
        let Some(p) = self.pivots.as_mut() else { return };
        let k = self.dim;
        let n = self.cols;
        let mut i = k;
        while i > 0 {
            i -= 1;
            if p[i] < n - k + i {
                p[i] += 1;
                for j in i + 1..k {
                    p[j] = p[j - 1] + 1;
                }
                self.load_free();
                return;
            }
        }
        self.pivots = None;
    }
}

impl Iterator for RowSpaces {
    type Item = BitMatrix;

    fn next(&mut self) -> Option<BitMatrix> {
        let pivots = self.pivots.as_ref()?;
        let mut bits = self.pattern;
        let rows = pivots
            .iter()
            .zip(&self.free)
            .map(|(&p, free)| {
                let mut row = 1u64 << p;
                for &c in free {
                    if bits & 1 == 1 {
                        row |= 1 << c;
                    }
                    bits >>= 1;
                }
                row
            })
            .collect();
        let out = BitMatrix { cols: self.cols, rows };
        self.pattern += 1;
        if self.pattern >> self.free_total != 0 {
            self.advance_pivots();
        }
        Some(out)
    }
}

/// Number of `dim`-dimensional subspaces of GF(2)^`cols`.
pub fn gaussian_binomial2(cols: usize, dim: usize) -> u128 {
    if dim > cols {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..dim {
        num *= (1u128 << (cols - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[&str]) -> BitMatrix {
        BitMatrix::from_bit_strings(cols, rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(m(4, &["1000", "0010"]).rank(), 2);
        assert_eq!(m(4, &["1100", "1100"]).rank(), 1);
        // reduced C_0 stacked with T = A1+B1
        assert_eq!(m(4, &["1000", "0010", "0101"]).rank(), 3);
    }

    #[test]
    fn rref_examples() {
        assert_eq!(m(2, &["11", "01"]).rref(), m(2, &["10", "01"]));
        assert_eq!(m(4, &["1100", "1111"]).rref(), m(4, &["1100", "0011"]));
        let x = m(5, &["10110", "01101", "11011", "00000"]);
        assert_eq!(x.rref().rref(), x.rref());
        assert_eq!(x.rref().row_count(), x.rank());
    }

    #[test]
    fn span_examples() {
        let a = m(4, &["1100", "0100"]);
        assert!(a.in_row_span(0).unwrap());
        assert!(a.in_row_span(parse_bit_row("1000", 4).unwrap()).unwrap());
        assert!(!a.in_row_span(parse_bit_row("0001", 4).unwrap()).unwrap());
        assert!(a.in_row_span(1 << 5).is_err());
    }

    #[test]
    fn stack_examples() {
        let a = m(4, &["1000", "0010"]);
        let b = m(4, &["0101"]);
        let s = a.stack(&b).unwrap();
        assert_eq!(s.row_count(), 3);
        assert_eq!(a.stack(&BitMatrix::empty(4).unwrap()).unwrap(), a);
        assert!(a.stack(&m(3, &["101"])).is_err());
    }

    #[test]
    fn row_space_counts() {
        assert_eq!(enumerate_row_spaces(2, 1).unwrap().count(), 3);
        assert_eq!(enumerate_row_spaces(6, 2).unwrap().count(), 651);
        assert_eq!(enumerate_row_spaces(4, 4).unwrap().count(), 1);
        assert_eq!(enumerate_row_spaces(3, 0).unwrap().count(), 1);
        assert!(enumerate_row_spaces(17, 2).is_err());
        assert!(enumerate_row_spaces(3, 4).is_err());
    }

    #[test]
    fn bit_string_format() {
        let x = m(6, &["101000", "000111"]);
        assert_eq!(x.to_bit_strings(), vec!["101000", "000111"]);
        assert!(x.get(0, 0) && !x.get(0, 1) && x.get(0, 2));
        assert!(matches!(BitMatrix::from_bit_strings(3, &["012"]), Err(LinalgError::BadBitString(_))));
        assert!(BitMatrix::from_bit_strings(3, &["01"]).is_err());
        assert!(BitMatrix::empty(0).is_err());
        assert!(BitMatrix::empty(65).is_err());
    }
}
