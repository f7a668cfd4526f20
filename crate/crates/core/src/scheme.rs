//! Data model for randomized coded caching schemes.
//!
//! Subfile `s` of file `n` is symbol `n * f + s` of the symbol space, so every
//! cache and transmission is a [`BitMatrix`] of width `N * f`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{BitMatrix, LinalgError, MAX_COLS};

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("malformed scheme: {}", summarize(.0))]
    Shape(Vec<Violation>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("enumeration of {needed} outcomes exceeds the cap of {cap}")]
    EnumerationCap { needed: u128, cap: u128 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn summarize(v: &[Violation]) -> String {
    match v {
        [] => "no details".into(),
        [one] => one.detail.clone(),
        [first, rest @ ..] => format!("{} (and {} more)", first.detail, rest.len()),
    }
}

/// `(K, N, f)`: users, files, subfiles per file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchemeParams {
    pub users: usize,
    pub files: usize,
    pub subpack: usize,
}

impl SchemeParams {
    pub fn new(users: usize, files: usize, subpack: usize) -> Result<Self, SchemeError> {
        let p = SchemeParams { users, files, subpack };
        if users == 0 || files == 0 || subpack == 0 {
            return Err(SchemeError::Params(format!("K, N, f must be positive, got {users}, {files}, {subpack}")));
        }
        if files.checked_mul(subpack).is_none_or(|w| w > MAX_COLS) {
            return Err(SchemeError::Params(format!(
                "symbol space N*f = {files}*{subpack} exceeds {MAX_COLS}"
            )));
        }
        Ok(p)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.files * self.subpack
    }

    /// Column index of subfile `sub` of file `file`.
    #[inline]
    pub fn symbol(&self, file: usize, sub: usize) -> usize {
        file * self.subpack + sub
    }

    pub fn demand_count(&self) -> usize {
        self.files.pow(self.users as u32)
    }
}

/// File index demanded by each user.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DemandVector(pub Vec<usize>);

/// Cache option index held by each user.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KeyVector(pub Vec<usize>);

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Largest radix representable in cell labels.
pub const MAX_RADIX: usize = DIGITS.len();

pub(crate) fn digits_label(values: &[usize]) -> String {
    values.iter().map(|&v| DIGITS[v] as char).collect()
}

pub(crate) fn parse_digits(s: &str, radices: &[usize]) -> Option<Vec<usize>> {
    if s.len() != radices.len() {
        return None;
    }
    s.bytes()
        .zip(radices)
        .map(|(b, &r)| DIGITS.iter().position(|&d| d == b).filter(|&v| v < r))
        .collect()
}

impl fmt::Display for DemandVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digits_label(&self.0))
    }
}

impl fmt::Display for KeyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digits_label(&self.0))
    }
}

/// Encodes `values` in mixed radix, first entry most significant.
pub(crate) fn mixed_radix_index(values: &[usize], radices: &[usize]) -> usize {
    values.iter().zip(radices).fold(0, |acc, (&v, &r)| acc * r + v)
}

pub(crate) fn mixed_radix_digits(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    out
}

/// Maps `(demand, keys)` pairs to dense cell indices. Demands vary slowest,
/// both in lexicographic order with user 0 most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellLayout {
    demand_radices: Vec<usize>,
    key_radices: Vec<usize>,
    key_count: usize,
    demand_count: usize,
}

impl CellLayout {
    pub fn new(files: usize, key_radices: Vec<usize>) -> Self {
        let users = key_radices.len();
        CellLayout {
            demand_radices: vec![files; users],
            key_count: key_radices.iter().product(),
            demand_count: files.pow(users as u32),
            key_radices,
        }
    }

    pub fn cell_count(&self) -> usize {
        self.demand_count * self.key_count
    }

    pub fn demand_count(&self) -> usize {
        self.demand_count
    }

    pub fn key_count(&self) -> usize {
        self.key_count
    }

    pub fn key_radices(&self) -> &[usize] {
        &self.key_radices
    }

    pub fn index(&self, demand: &DemandVector, keys: &KeyVector) -> usize {
        mixed_radix_index(&demand.0, &self.demand_radices) * self.key_count
            + mixed_radix_index(&keys.0, &self.key_radices)
    }

    pub fn cell(&self, index: usize) -> (DemandVector, KeyVector) {
        let (d, k) = (index / self.key_count, index % self.key_count);
        (
            DemandVector(mixed_radix_digits(d, &self.demand_radices)),
            KeyVector(mixed_radix_digits(k, &self.key_radices)),
        )
    }

    pub fn demand(&self, index: usize) -> DemandVector {
        DemandVector(mixed_radix_digits(index, &self.demand_radices))
    }

    pub fn demand_index(&self, demand: &DemandVector) -> usize {
        mixed_radix_index(&demand.0, &self.demand_radices)
    }

    pub fn keys(&self, index: usize) -> KeyVector {
        KeyVector(mixed_radix_digits(index, &self.key_radices))
    }

    pub fn label(&self, index: usize) -> String {
        let (d, k) = self.cell(index);
        format!("{d};{k}")
    }

    pub fn parse_label(&self, label: &str) -> Option<usize> {
        let (d, k) = label.split_once(';')?;
        let d = parse_digits(d, &self.demand_radices)?;
        let k = parse_digits(k, &self.key_radices)?;
        Some(self.index(&DemandVector(d), &KeyVector(k)))
    }

    /// All cells in iteration order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, DemandVector, KeyVector)> + '_ {
        (0..self.cell_count()).map(move |i| {
            let (d, k) = self.cell(i);
            (i, d, k)
        })
    }
}

/// Transmission coefficient matrices, `branches[b][cell]`. A scheme with
/// randomized delivery carries several equally likely branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransmissionTable {
    branches: Vec<Vec<BitMatrix>>,
}

impl TransmissionTable {
    pub fn new(branches: Vec<Vec<BitMatrix>>) -> Self {
        TransmissionTable { branches }
    }

    pub fn single(cells: Vec<BitMatrix>) -> Self {
        TransmissionTable { branches: vec![cells] }
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[Vec<BitMatrix>] {
        &self.branches
    }

    pub fn get(&self, branch: usize, cell: usize) -> &BitMatrix {
        &self.branches[branch][cell]
    }

    pub fn into_branches(self) -> Vec<Vec<BitMatrix>> {
        self.branches
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    DecodeFailure,
    PrivacyLeak,
    ShapeError,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub user: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub demand: Option<DemandVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub keys: Option<KeyVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<usize>,
    pub detail: String,
}

impl Violation {
    pub fn shape(detail: impl Into<String>) -> Self {
        Violation { kind: ViolationKind::ShapeError, user: None, demand: None, keys: None, branch: None, detail: detail.into() }
    }
}

/// A complete, publicly known caching scheme. Only the key values (which
/// option each user received) and the delivery branch are secret.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    params: SchemeParams,
    cache_options: Vec<Vec<BitMatrix>>,
    transmissions: TransmissionTable,
    layout: CellLayout,
    provenance: String,
}

impl Scheme {
    /// Builds a scheme, rejecting any shape or rank defect.
    pub fn new(
        params: SchemeParams,
        cache_options: Vec<Vec<BitMatrix>>,
        transmissions: TransmissionTable,
        provenance: impl Into<String>,
    ) -> Result<Self, SchemeError> {
        let problems = check_shape(&params, &cache_options, &transmissions);
        if !problems.is_empty() {
            return Err(SchemeError::Shape(problems));
        }
        let layout = CellLayout::new(params.files, cache_options.iter().map(Vec::len).collect());
        Ok(Scheme { params, cache_options, transmissions, layout, provenance: provenance.into() })
    }

    pub fn params(&self) -> SchemeParams {
        self.params
    }

    pub fn cache_options(&self) -> &[Vec<BitMatrix>] {
        &self.cache_options
    }

    pub fn options(&self, user: usize) -> &[BitMatrix] {
        &self.cache_options[user]
    }

    pub fn transmissions(&self) -> &TransmissionTable {
        &self.transmissions
    }

    pub fn layout(&self) -> &CellLayout {
        &self.layout
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn with_provenance(mut self, label: impl Into<String>) -> Self {
        self.provenance = label.into();
        self
    }

    /// Transmission for a cell in a given delivery branch.
    pub fn transmission(&self, demand: &DemandVector, keys: &KeyVector, branch: usize) -> &BitMatrix {
        self.transmissions.get(branch, self.layout.index(demand, keys))
    }

    /// One option per user and no delivery randomness.
    pub fn is_deterministic(&self) -> bool {
        self.cache_options.iter().all(|o| o.len() == 1) && self.transmissions.branch_count() == 1
    }

    /// Rows in every cache option of a user (constant per user).
    pub fn cache_rows(&self, user: usize) -> usize {
        self.cache_options[user][0].row_count()
    }

    /// Rows in every transmission.
    pub fn transmission_rows(&self) -> usize {
        self.transmissions.get(0, 0).row_count()
    }

    /// Distinct transmission matrices in first-use order over branch 0.
    pub fn transmission_alphabet(&self) -> Vec<BitMatrix> {
        let mut out: Vec<BitMatrix> = Vec::new();
        for b in self.transmissions.branches() {
            for t in b {
                if !out.contains(t) {
                    out.push(t.clone());
                }
            }
        }
        out
    }
}

fn check_shape(params: &SchemeParams, caches: &[Vec<BitMatrix>], tx: &TransmissionTable) -> Vec<Violation> {
    let mut out = Vec::new();
    let width = params.width();
    if SchemeParams::new(params.users, params.files, params.subpack).is_err() {
        out.push(Violation::shape(format!("invalid parameters {params:?}")));
        return out;
    }
    if params.files > MAX_RADIX {
        out.push(Violation::shape(format!("at most {MAX_RADIX} files supported")));
    }
    if caches.len() != params.users {
        out.push(Violation::shape(format!("{} cache option lists for {} users", caches.len(), params.users)));
        return out;
    }
    for (u, opts) in caches.iter().enumerate() {
        let mut flag = |detail: String| {
            let mut v = Violation::shape(detail);
            v.user = Some(u);
            out.push(v);
        };
        if opts.is_empty() {
            flag(format!("user {u} has no cache options"));
            continue;
        }
        if opts.len() > MAX_RADIX {
            flag(format!("user {u} has {} options, at most {MAX_RADIX} supported", opts.len()));
        }
        let rows = opts[0].row_count();
        for (k, c) in opts.iter().enumerate() {
            if c.cols() != width {
                flag(format!("user {u} option {k} has width {}, expected {width}", c.cols()));
            } else if c.row_count() != rows {
                flag(format!("user {u} option {k} has {} rows, expected {rows}", c.row_count()));
            } else if c.rank() != c.row_count() {
                flag(format!("user {u} option {k} is rank deficient"));
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    let layout = CellLayout::new(params.files, caches.iter().map(Vec::len).collect());
    if tx.branch_count() == 0 {
        out.push(Violation::shape("transmission table has no branches"));
        return out;
    }
    let tx_rows = tx.branches()[0].first().map(BitMatrix::row_count);
    for (b, cells) in tx.branches().iter().enumerate() {
        if cells.len() != layout.cell_count() {
            let mut v = Violation::shape(format!(
                "branch {b} has {} cells, expected {}",
                cells.len(),
                layout.cell_count()
            ));
            v.branch = Some(b);
            out.push(v);
            continue;
        }
        for (i, t) in cells.iter().enumerate() {
            let problem = if t.cols() != width {
                Some(format!("width {}, expected {width}", t.cols()))
            } else if Some(t.row_count()) != tx_rows {
                Some(format!("{} rows, expected {}", t.row_count(), tx_rows.unwrap_or(0)))
            } else {
                None
            };
            if let Some(p) = problem {
                let (d, k) = layout.cell(i);
                out.push(Violation {
                    kind: ViolationKind::ShapeError,
                    user: None,
                    demand: Some(d),
                    keys: Some(k),
                    branch: Some(b),
                    detail: format!("transmission {p}"),
                });
            }
        }
    }
    out
}
