//! Scheme JSON documents.
//!
//! ```json
//! {
//!   "users": 2, "files": 2, "subpack": 3,
//!   "provenance": "...",
//!   "cache_options": [[["110000", "000110", "001010"], ...], ...],
//!   "transmissions": {"00;00": ["100000", "000100"], ...},
//!   "aux_branches": [{"00;00": [...], ...}]
//! }
//! ```
//!
//! Matrix rows are bit strings with column 0 leftmost. Cell labels are the
//! demand digits (base `N`) and key digits (mixed radix), one character per
//! user, separated by `;`. `transmissions` is delivery branch 0; each entry of
//! the optional `aux_branches` is a further equally likely branch.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::BitMatrix;
use crate::scheme::{CellLayout, Scheme, SchemeError, SchemeParams, TransmissionTable, Violation};

type CellMap = BTreeMap<String, Vec<String>>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    users: usize,
    files: usize,
    subpack: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    provenance: String,
    cache_options: Vec<Vec<Vec<String>>>,
    transmissions: CellMap,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    aux_branches: Vec<CellMap>,
}

fn cell_map(layout: &CellLayout, cells: &[BitMatrix]) -> CellMap {
    cells.iter().enumerate().map(|(i, t)| (layout.label(i), t.to_bit_strings())).collect()
}

/// Pretty-printed JSON; byte-identical for equal schemes.
pub fn serialize_scheme(s: &Scheme) -> String {
    let p = s.params();
    let layout = s.layout();
    let branches = s.transmissions().branches();
    let doc = Document {
        users: p.users,
        files: p.files,
        subpack: p.subpack,
        provenance: s.provenance().to_string(),
        cache_options: s
            .cache_options()
            .iter()
            .map(|opts| opts.iter().map(BitMatrix::to_bit_strings).collect())
            .collect(),
        transmissions: cell_map(layout, &branches[0]),
        aux_branches: branches[1..].iter().map(|b| cell_map(layout, b)).collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("document serializes");
    out.push('\n');
    out
}

fn matrix(width: usize, rows: &[String], field: &str) -> Result<BitMatrix, SchemeError> {
    BitMatrix::from_bit_strings(width, rows).map_err(|e| SchemeError::Parse(format!("{field}: {e}")))
}

pub fn deserialize_scheme(text: &str) -> Result<Scheme, SchemeError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| SchemeError::Parse(e.to_string()))?;
    let params = SchemeParams::new(doc.users, doc.files, doc.subpack)?;
    let width = params.width();

    let cache_options = doc
        .cache_options
        .iter()
        .enumerate()
        .map(|(u, opts)| {
            opts.iter()
                .enumerate()
                .map(|(k, rows)| matrix(width, rows, &format!("cache_options[{u}][{k}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    if cache_options.len() != params.users || cache_options.iter().any(Vec::is_empty) {
        return Err(SchemeError::Shape(vec![Violation::shape(format!(
            "cache_options must list at least one option for each of {} users",
            params.users
        ))]));
    }
    let layout = CellLayout::new(params.files, cache_options.iter().map(Vec::len).collect());

    let mut branches = Vec::with_capacity(1 + doc.aux_branches.len());
    for (b, map) in std::iter::once(&doc.transmissions).chain(&doc.aux_branches).enumerate() {
        let field = if b == 0 { "transmissions".to_string() } else { format!("aux_branches[{}]", b - 1) };
        let mut cells: Vec<Option<BitMatrix>> = vec![None; layout.cell_count()];
        for (label, rows) in map {
            let idx = layout
                .parse_label(label)
                .ok_or_else(|| SchemeError::Parse(format!("{field}: invalid cell label {label:?}")))?;
            cells[idx] = Some(matrix(width, rows, &format!("{field}[{label:?}]"))?);
        }
        let missing: Vec<Violation> = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_none())
            .map(|(i, _)| {
                let (d, k) = layout.cell(i);
                Violation {
                    demand: Some(d),
                    keys: Some(k),
                    branch: Some(b),
                    ..Violation::shape(format!("{field}: missing cell {:?}", layout.label(i)))
                }
            })
            .collect();
        if !missing.is_empty() {
            return Err(SchemeError::Shape(missing));
        }
        branches.push(cells.into_iter().map(Option::unwrap).collect());
    }
    Scheme::new(params, cache_options, TransmissionTable::new(branches), doc.provenance)
}
