//! Exhaustive searches showing that no linear private `(2, 2)` scheme exists
//! at subpacketization two with `R = 1/2`, nor at subpacketization three with
//! `R = 2/3` and uncoded caches.

pub mod sub2;
pub mod sub3;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

use serde::Serialize;

use crate::linalg::BitMatrix;

pub use sub2::{enumerate_reduced_caches, search_sub2};
pub use sub3::search_sub3_uncoded;

/// Candidates between two progress callbacks.
pub const PROGRESS_INTERVAL: u64 = 1_000_000;

#[derive(Default)]
pub struct SearchOptions<'a> {
    /// Apply the privacy-derived pruning (disable for control runs).
    pub privacy_condition: bool,
    /// Only consider caches holding two subfiles of one file and one of the other.
    pub structural_only: bool,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Called with the running candidate count about every [`PROGRESS_INTERVAL`] candidates.
    pub progress: Option<&'a (dyn Fn(u64) + Sync)>,
}

impl SearchOptions<'_> {
    pub fn new() -> Self {
        SearchOptions { privacy_condition: true, ..Default::default() }
    }

    pub(crate) fn run<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match self.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map(|pool| pool.install(f))
                .unwrap_or_else(|_| unreachable!("thread pool construction failed")),
            None => f(),
        }
    }
}

/// Counts candidates across workers and fires the progress callback each
/// time the running total crosses a multiple of [`PROGRESS_INTERVAL`].
pub(crate) struct Counter<'a> {
    total: AtomicU64,
    progress: Option<&'a (dyn Fn(u64) + Sync)>,
}

impl<'a> Counter<'a> {
    pub(crate) fn new(progress: Option<&'a (dyn Fn(u64) + Sync)>) -> Self {
        Counter { total: AtomicU64::new(0), progress }
    }

    pub(crate) fn add(&self, n: u64) {
        let before = self.total.fetch_add(n, Ordering::Relaxed);
        if let Some(cb) = self.progress {
            if (before + n) / PROGRESS_INTERVAL > before / PROGRESS_INTERVAL {
                cb(before + n);
            }
        }
    }

    pub(crate) fn get(&self) -> u64 {
        self.total.load(Ordering::Relaxed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", rename_all_fields = "camelCase")]
pub enum Witness {
    /// Deterministic subpacketization-2 caches with transmissions for demands AA and AB.
    Sub2 {
        #[serde(serialize_with = "bits")]
        cache0: BitMatrix,
        #[serde(serialize_with = "bits")]
        cache1: BitMatrix,
        #[serde(serialize_with = "bits")]
        tx_aa: BitMatrix,
        #[serde(serialize_with = "bits")]
        tx_ab: BitMatrix,
    },
    /// Two-option uncoded configuration with one serving row space per cell.
    Sub3 {
        /// Indices into the 20 uncoded caches, per user.
        options: [[usize; 2]; 2],
        /// Index into the 651 two-dimensional row spaces, per cell.
        cell_transmissions: Vec<usize>,
    },
}

fn bits<S: serde::Serializer>(m: &BitMatrix, s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.to_bit_strings())
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchReport {
    pub search: String,
    /// Which class of schemes the search covers.
    pub scope: String,
    pub privacy_condition: bool,
    pub candidates_examined: u64,
    pub feasible_found: u64,
    pub witnesses: Vec<Witness>,
    pub sub_lemma_checks: BTreeMap<String, bool>,
    /// Auxiliary integer results (e.g. counts behind the sub-lemma checks).
    pub counts: BTreeMap<String, u64>,
    #[serde(serialize_with = "millis")]
    pub elapsed: Duration,
}

fn millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{:.3}s", d.as_secs_f64()))
}
