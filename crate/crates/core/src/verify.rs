//! Exact verifiers: decodability of every cell, and demand privacy by full
//! enumeration of demands, keys and delivery branches.
//!
//! A user's view is its own option index (hence its cache matrix), its own
//! demand, and the transmission coefficient matrix (the header). Demands are
//! i.i.d. uniform and every key and branch is uniform, so every enumerated
//! outcome has the same probability and all statistics reduce to integer
//! counts. The peer demand `D_j` is independent of a view iff every file
//! occurs equally often among the outcomes producing that view.

use std::collections::HashMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::linalg::{BitMatrix, Echelon, LinalgError};
use crate::rational::{self, Rational};
use crate::scheme::{DemandVector, KeyVector, Scheme, SchemeError, SchemeParams, Violation, ViolationKind};

/// Default bound on `N^K * prod(L_i) * branches` for [`privacy_report`].
pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// Whether `file` can be recovered from `cache` and `tx`: every unit vector
/// of the file's subfiles must lie in the row span of the stacked matrix.
pub fn decodes(cache: &BitMatrix, tx: &BitMatrix, file: usize, params: &SchemeParams) -> Result<bool, LinalgError> {
    let width = params.width();
    for m in [cache, tx] {
        if m.cols() != width {
            return Err(LinalgError::DimensionMismatch { expected: width, actual: m.cols() });
        }
    }
    if file >= params.files {
        return Err(LinalgError::DimensionMismatch { expected: params.files, actual: file + 1 });
    }
    let mut ech = Echelon::new(width, cache.rows());
    for &r in tx.rows() {
        ech.insert(r);
    }
    Ok(decodes_with(&ech, file, params))
}

pub(crate) fn decodes_with(ech: &Echelon, file: usize, params: &SchemeParams) -> bool {
    (0..params.subpack).all(|s| ech.contains(1u64 << params.symbol(file, s)))
}

/// Files recoverable from a cache and a transmission, as a bit set.
pub(crate) fn decodable_files(cache: &BitMatrix, tx: &BitMatrix, params: &SchemeParams) -> u64 {
    let mut ech = Echelon::new(params.width(), cache.rows());
    for &r in tx.rows() {
        ech.insert(r);
    }
    (0..params.files).filter(|&w| decodes_with(&ech, w, params)).fold(0, |acc, w| acc | 1 << w)
}

/// One violation per (cell, branch, user) whose demanded file cannot be
/// decoded, in cell order. Empty means the scheme is correct.
pub fn verify_correctness(s: &Scheme) -> Vec<Violation> {
    let params = s.params();
    let tx = s.transmissions();
    let mut out = Vec::new();
    for (cell, demand, keys) in s.layout().cells() {
        for b in 0..tx.branch_count() {
            let t = tx.get(b, cell);
            for user in 0..params.users {
                let cache = &s.options(user)[keys.0[user]];
                let want = demand.0[user];
                if decodable_files(cache, t, &params) >> want & 1 == 0 {
                    out.push(Violation {
                        kind: ViolationKind::DecodeFailure,
                        user: Some(user),
                        demand: Some(demand.clone()),
                        keys: Some(keys.clone()),
                        branch: Some(b),
                        detail: format!("user {user} with option {} cannot decode file {want}", keys.0[user]),
                    });
                }
            }
        }
    }
    out
}

/// Necessary condition for privacy: for every transmission that occurs, each
/// user must have some option that decodes each file. Otherwise a peer who
/// sees the transmission rules that file out as the user's demand.
pub fn weak_privacy_check(s: &Scheme) -> Vec<Violation> {
    let params = s.params();
    let tx = s.transmissions();
    let all = (1u64 << params.files) - 1;
    let mut memo: HashMap<(usize, &BitMatrix), u64> = HashMap::new();
    let mut out = Vec::new();
    for (cell, demand, keys) in s.layout().cells() {
        for b in 0..tx.branch_count() {
            let t = tx.get(b, cell);
            for user in 0..params.users {
                let covered = *memo.entry((user, t)).or_insert_with(|| {
                    s.options(user).iter().fold(0, |acc, c| acc | decodable_files(c, t, &params))
                });
                for w in (0..params.files).filter(|&w| (covered & all) >> w & 1 == 0) {
                    out.push(Violation {
                        kind: ViolationKind::PrivacyLeak,
                        user: Some(user),
                        demand: Some(demand.clone()),
                        keys: Some(keys.clone()),
                        branch: Some(b),
                        detail: format!("no option of user {user} decodes file {w} from this transmission"),
                    });
                }
            }
        }
    }
    out
}

/// `(M, R)`: cache rows over `f` (largest user) and transmission rows over `f`.
pub fn rate_and_memory(s: &Scheme) -> (Rational, Rational) {
    let f = s.params().subpack as i64;
    let cache = (0..s.params().users).map(|u| s.cache_rows(u)).max().unwrap_or(0) as i64;
    (Ratio::new(cache, f), Ratio::new(s.transmission_rows() as i64, f))
}

/// Leakage of one peer's demand to one observing user.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PairPrivacy {
    pub observer: usize,
    pub peer: usize,
    pub private: bool,
    pub mutual_info_bits: f64,
    /// Largest posterior probability of any peer demand over all views.
    #[serde(with = "rational")]
    pub max_posterior: Rational,
    pub min_ambiguity: usize,
    pub views: usize,
    pub leaking_views: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrivacyReport {
    pub exact_private: bool,
    /// Largest `I(view_i; D_j)` over ordered pairs. Exactly `0.0` iff every
    /// pair is exactly private; otherwise a floating-point value of the
    /// logarithmic sum evaluated from exact counts.
    pub max_mutual_info_bits: f64,
    #[serde(with = "rational")]
    pub max_posterior: Rational,
    pub min_ambiguity: usize,
    pub outcomes: u128,
    pub pairs: Vec<PairPrivacy>,
}

pub fn privacy_report(s: &Scheme) -> Result<PrivacyReport, SchemeError> {
    privacy_report_capped(s, DEFAULT_ENUMERATION_CAP)
}

pub fn privacy_report_capped(s: &Scheme, cap: u128) -> Result<PrivacyReport, SchemeError> {
    let params = s.params();
    let layout = s.layout();
    let tx = s.transmissions();
    let (k, n) = (params.users, params.files);
    let outcomes = layout.cell_count() as u128 * tx.branch_count() as u128;
    if outcomes > cap {
        return Err(SchemeError::EnumerationCap { needed: outcomes, cap });
    }

    // Intern transmissions so views hash as small integers.
    let mut ids: HashMap<&BitMatrix, u32> = HashMap::new();
    let mut tx_id = vec![vec![0u32; layout.cell_count()]; tx.branch_count()];
    for (b, cells) in tx.branches().iter().enumerate() {
        for (c, t) in cells.iter().enumerate() {
            let next = ids.len() as u32;
            tx_id[b][c] = *ids.entry(t).or_insert(next);
        }
    }

    let uniform = Ratio::new(1, n as i64);
    let mut pairs = Vec::new();
    for observer in 0..k {
        // view -> slot; counts[slot * k * n + peer * n + file]
        let mut slots: HashMap<(usize, usize, u32), usize> = HashMap::new();
        let mut counts: Vec<u64> = Vec::new();
        let mut totals: Vec<u64> = Vec::new();
        for (cell, demand, keys) in layout.cells() {
            for ids in &tx_id {
                let view = (keys.0[observer], demand.0[observer], ids[cell]);
                let next = slots.len();
                let slot = *slots.entry(view).or_insert(next);
                if slot == counts.len() / (k * n) {
                    counts.resize(counts.len() + k * n, 0);
                    totals.push(0);
                }
                totals[slot] += 1;
                for (peer, &d) in demand.0.iter().enumerate() {
                    counts[slot * k * n + peer * n + d] += 1;
                }
            }
        }
        let views = totals.len();
        for peer in (0..k).filter(|&j| j != observer) {
            let mut mi = 0.0f64;
            let mut max_post = Ratio::new(0, 1);
            let mut min_amb = n;
            let mut leaking = 0;
            for (slot, &total) in totals.iter().enumerate() {
                let row = &counts[slot * k * n + peer * n..slot * k * n + peer * n + n];
                let support = row.iter().filter(|&&c| c > 0).count();
                min_amb = min_amb.min(support);
                if row.iter().any(|&c| c * n as u64 != total) {
                    leaking += 1;
                }
                let top = *row.iter().max().unwrap_or(&0);
                max_post = max_post.max(Ratio::new(top as i64, total as i64));
                for &c in row.iter().filter(|&&c| c > 0) {
                    let p = c as f64 / outcomes as f64;
                    mi += p * ((c as f64 * n as f64) / total as f64).log2();
                }
            }
            let private = leaking == 0;
            pairs.push(PairPrivacy {
                observer,
                peer,
                private,
                mutual_info_bits: if private { 0.0 } else { mi.max(0.0) },
                max_posterior: max_post,
                min_ambiguity: min_amb,
                views,
                leaking_views: leaking,
            });
        }
    }

    let exact_private = pairs.iter().all(|p| p.private);
    Ok(PrivacyReport {
        exact_private,
        max_mutual_info_bits: pairs.iter().map(|p| p.mutual_info_bits).fold(0.0, f64::max),
        max_posterior: pairs.iter().map(|p| p.max_posterior).max().unwrap_or(uniform),
        min_ambiguity: pairs.iter().map(|p| p.min_ambiguity).min().unwrap_or(n),
        outcomes,
        pairs,
    })
}

/// Every `(demand, keys, branch)` whose transmission consists of exactly the
/// rows of `target`, in any order.
pub fn matching_cells(s: &Scheme, target: &BitMatrix) -> Vec<(DemandVector, KeyVector, usize)> {
    let mut want = target.rows().to_vec();
    want.sort_unstable();
    let mut out = Vec::new();
    for (b, cells) in s.transmissions().branches().iter().enumerate() {
        for (i, tx) in cells.iter().enumerate() {
            let mut rows = tx.rows().to_vec();
            rows.sort_unstable();
            if tx.cols() == target.cols() && rows == want {
                let (d, k) = s.layout().cell(i);
                out.push((d, k, b));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SchemeParams {
        SchemeParams::new(2, 2, 3).unwrap()
    }

    fn m(rows: &[&str]) -> BitMatrix {
        BitMatrix::from_bit_strings(6, rows).unwrap()
    }

    #[test]
    fn decodes_table_entries() {
        // Z00 = {A0+A1, B0+B1, A2+B1}, X^AA = {A0, B0}
        let z00 = m(&["110000", "000110", "001010"]);
        let xaa = m(&["100000", "000100"]);
        assert!(decodes(&z00, &xaa, 0, &params()).unwrap());
        assert!(!decodes(&z00, &xaa, 1, &params()).unwrap());
    }

    #[test]
    fn decodes_from_cache_alone() {
        let cache = m(&["100000", "010000", "001000"]);
        let none = BitMatrix::empty(6).unwrap();
        assert!(decodes(&cache, &none, 0, &params()).unwrap());
        assert!(!decodes(&cache, &none, 1, &params()).unwrap());
    }

    #[test]
    fn decodes_rejects_bad_width() {
        let narrow = BitMatrix::from_bit_strings(4, &["1000"]).unwrap();
        let none = BitMatrix::empty(6).unwrap();
        assert!(decodes(&narrow, &none, 0, &params()).is_err());
        assert!(decodes(&none, &none, 2, &params()).is_err());
    }
}
