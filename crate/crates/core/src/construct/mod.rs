//! Scheme builders and scheme-to-scheme transformations.

pub mod dual;
pub mod mn;
pub mod pda;
pub mod private;
pub mod table1;
pub mod timeshare;
pub mod tradeoff;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{BitMatrix, LinalgError};
use crate::rational::{self, Rational};
use crate::scheme::{CellLayout, DemandVector, KeyVector, SchemeError, SchemeParams, TransmissionTable};

pub use pda::PdaViolation;

/// Largest transmission table (cells times branches) a builder will materialize.
pub const MAX_TABLE_CELLS: usize = 1 << 24;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("symbol space of width {0} exceeds 64 columns")]
    Width(usize),
    #[error("transmission table of {0} cells is too large")]
    TableSize(u128),
    #[error("expected a scheme with {expected} users, got {actual}")]
    UserCount { expected: String, actual: usize },
    #[error("invalid placement delivery array: {0:?}")]
    InvalidPda(Vec<PdaViolation>),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An exact `(M, R)` operating point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RatePoint {
    #[serde(with = "rational")]
    pub memory: Rational,
    #[serde(with = "rational")]
    pub rate: Rational,
    pub label: String,
}

pub(crate) fn params(users: usize, files: usize, subpack: usize) -> Result<SchemeParams, BuildError> {
    if files.checked_mul(subpack).is_none_or(|w| w > 64) {
        return Err(BuildError::Width(files.saturating_mul(subpack)));
    }
    Ok(SchemeParams::new(users, files, subpack)?)
}

pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Builds a matrix from rows like `"A0+A2"`: file letters from `A`, subfile
/// digits, terms joined by `+`.
pub fn symbolic_matrix(files: usize, subpack: usize, rows: &[&str]) -> Result<BitMatrix, BuildError> {
    let width = files * subpack;
    let rows = rows
        .iter()
        .map(|row| {
            row.split('+').try_fold(0u64, |acc, term| {
                let term = term.trim();
                let mut chars = term.chars();
                let file = chars.next().map(|c| (c as usize).wrapping_sub('A' as usize));
                let sub = chars.as_str().parse::<usize>().ok();
                match (file, sub) {
                    (Some(n), Some(s)) if n < files && s < subpack => Ok(acc ^ 1u64 << (n * subpack + s)),
                    _ => Err(BuildError::Argument(format!("bad symbol {term:?}"))),
                }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BitMatrix::from_rows(width, rows)?)
}

/// Materializes a transmission table cell by cell, in layout order.
pub(crate) fn tabulate(
    files: usize,
    key_radices: Vec<usize>,
    branches: usize,
    mut cell: impl FnMut(&DemandVector, &KeyVector, usize) -> Result<BitMatrix, BuildError>,
) -> Result<TransmissionTable, BuildError> {
    let layout = CellLayout::new(files, key_radices);
    let total = layout.cell_count() as u128 * branches as u128;
    if total > MAX_TABLE_CELLS as u128 {
        return Err(BuildError::TableSize(total));
    }
    let mut out = Vec::with_capacity(branches);
    for b in 0..branches {
        let cells = layout.cells().map(|(_, d, k)| cell(&d, &k, b)).collect::<Result<Vec<_>, _>>()?;
        out.push(cells);
    }
    Ok(TransmissionTable::new(out))
}

/// Checks `files^users` against [`MAX_TABLE_CELLS`] before anything is built.
pub(crate) fn check_table_size(files: usize, users: usize, keys: u128, branches: u128) -> Result<(), BuildError> {
    let demands = (files as u128).checked_pow(users as u32);
    match demands.and_then(|d| d.checked_mul(keys)).and_then(|c| c.checked_mul(branches)) {
        Some(c) if c <= MAX_TABLE_CELLS as u128 => Ok(()),
        Some(c) => Err(BuildError::TableSize(c)),
        None => Err(BuildError::TableSize(u128::MAX)),
    }
}
