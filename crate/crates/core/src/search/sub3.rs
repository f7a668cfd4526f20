//! Subpacketization three, `M = 1`, `R = 2/3`, uncoded caches.
//!
//! Symbols are `A0 A1 A2 B0 B1 B2`. A cache is one of the 20 three-subsets
//! of the symbols and a transmission one of the 651 two-dimensional row
//! spaces. Every cache gets two bitsets over the row spaces (which ones let
//! it decode A, which ones B), so every cell test is a handful of word-wise
//! ANDs.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;

use crate::construct::table1::build_table1;
use crate::linalg::{enumerate_row_spaces, BitMatrix};
use crate::scheme::SchemeParams;
use crate::verify::decodable_files;

use super::{Counter, SearchOptions, SearchReport, Witness};

const SYMBOLS: usize = 6;
const WORDS: usize = 11;
const A0: u64 = 1 << 0;
const A1: u64 = 1 << 1;
const A2: u64 = 1 << 2;
const B0: u64 = 1 << 3;
const B1: u64 = 1 << 4;
const B2: u64 = 1 << 5;
const FILE_A: u64 = A0 | A1 | A2;
const FILE_B: u64 = B0 | B1 | B2;

/// Set of row-space indices.
#[derive(Clone, Copy, PartialEq, Eq)]
struct Bits([u64; WORDS]);

impl Bits {
    const EMPTY: Bits = Bits([0; WORDS]);

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(self, o: Bits) -> Bits {
        Bits(std::array::from_fn(|i| self.0[i] & o.0[i]))
    }

    fn or(self, o: Bits) -> Bits {
        Bits(std::array::from_fn(|i| self.0[i] | o.0[i]))
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

struct Tables {
    /// Caches as symbol masks, lexicographic by symbol list.
    caches: Vec<u64>,
    /// `dec[c][w]`: row spaces from which cache `c` decodes file `w`.
    dec: Vec<[Bits; 2]>,
    spaces: usize,
}

fn params() -> SchemeParams {
    SchemeParams::new(2, 2, 3).expect("fixed parameters")
}

fn cache_matrix(mask: u64) -> BitMatrix {
    BitMatrix::unit_rows(SYMBOLS, (0..SYMBOLS).filter(|&i| mask >> i & 1 == 1)).expect("6 columns")
}

impl Tables {
    fn build() -> Tables {
        let caches: Vec<u64> = crate::construct::subsets(SYMBOLS, 3)
            .into_iter()
            .map(|s| s.iter().fold(0u64, |m, &i| m | 1 << i))
            .collect();
        let spaces: Vec<BitMatrix> = enumerate_row_spaces(SYMBOLS, 2).expect("6 columns").collect();
        let p = params();
        let dec = caches
            .iter()
            .map(|&c| {
                let z = cache_matrix(c);
                let mut out = [Bits::EMPTY; 2];
                for (i, t) in spaces.iter().enumerate() {
                    let files = decodable_files(&z, t, &p);
                    for (w, bits) in out.iter_mut().enumerate() {
                        if files >> w & 1 == 1 {
                            bits.set(i);
                        }
                    }
                }
                out
            })
            .collect();
        Tables { caches, dec, spaces: spaces.len() }
    }

    fn index(&self, mask: u64) -> usize {
        self.caches.iter().position(|&c| c == mask).expect("three-subset")
    }

    fn serve(&self, z0: usize, z1: usize, d0: usize, d1: usize) -> Bits {
        self.dec[z0][d0].and(self.dec[z1][d1])
    }

    fn jointly_serviceable(&self, z0: usize, z1: usize) -> bool {
        (0..4).all(|d| !self.serve(z0, z1, d >> 1, d & 1).is_empty())
    }

    /// Row spaces from which some cache in `set` decodes A and some decodes B.
    fn cover(&self, set: impl IntoIterator<Item = usize>) -> Bits {
        let (mut a, mut b) = (Bits::EMPTY, Bits::EMPTY);
        for z in set {
            a = a.or(self.dec[z][0]);
            b = b.or(self.dec[z][1]);
        }
        a.and(b)
    }

    fn partners(&self, z: usize) -> Vec<usize> {
        (0..self.caches.len()).filter(|&o| self.jointly_serviceable(z, o)).collect()
    }

    /// Necessary condition for `(z0, z1)` to occur in a private scheme with
    /// any number of options: every option of user 1 is jointly serviceable
    /// with `z0` (and vice versa), so for every demand some transmission must
    /// serve both users while the partner sets can still explain either file.
    fn agnostic_feasible(&self, z0: usize, z1: usize) -> bool {
        if !self.jointly_serviceable(z0, z1) {
            return false;
        }
        let hide = self.cover(self.partners(z0)).and(self.cover(self.partners(z1)));
        (0..4).all(|d| !self.serve(z0, z1, d >> 1, d & 1).and(hide).is_empty())
    }
}

fn structural(mask: u64) -> bool {
    let a = (mask & FILE_A).count_ones();
    a == 1 || a == 2
}

pub fn search_sub3_uncoded(opts: &SearchOptions) -> SearchReport {
    let start = Instant::now();
    let t = Tables::build();
    let allowed: Vec<usize> =
        (0..t.caches.len()).filter(|&i| !opts.structural_only || structural(t.caches[i])).collect();
    let option_sets: Vec<[usize; 2]> = crate::construct::subsets(allowed.len(), 2)
        .into_iter()
        .map(|s| [allowed[s[0]], allowed[s[1]]])
        .collect();
    let counter = Counter::new(opts.progress);
    let spaces = t.spaces as u64;

    let mut witnesses: Vec<Witness> = opts.run(|| {
        option_sets
            .par_iter()
            .flat_map_iter(|s0| {
                let mut found = Vec::new();
                for s1 in &option_sets {
                    let hide = t.cover(s0.iter().copied()).and(t.cover(s1.iter().copied()));
                    let mut cells = Vec::with_capacity(16);
                    for cell in 0..16 {
                        let (d0, d1, k0, k1) = (cell >> 3, cell >> 2 & 1, cell >> 1 & 1, cell & 1);
                        counter.add(spaces);
                        let mut ok = t.serve(s0[k0], s1[k1], d0, d1);
                        if opts.privacy_condition {
                            ok = ok.and(hide);
                        }
                        match ok.first() {
                            Some(i) => cells.push(i),
                            None => break,
                        }
                    }
                    if cells.len() == 16 {
                        found.push(Witness::Sub3 { options: [*s0, *s1], cell_transmissions: cells });
                    }
                }
                found
            })
            .collect()
    });
    witnesses.sort();

    let mut checks = BTreeMap::new();
    let mut counts = BTreeMap::new();
    sub_lemmas(&t, &mut checks, &mut counts);
    counts.insert("option-sets-per-user".into(), option_sets.len() as u64);

    SearchReport {
        search: "sub3-uncoded".into(),
        scope: "uncoded caches (3 of the 6 subfiles), exactly 2 equiprobable options per user, every cell served by some \
                2-dimensional transmission row space over GF(2) meeting decodability and the per-cell weak-privacy \
                condition; counts.agnostic-feasible-pairs additionally covers any number of options per user"
            .into(),
        privacy_condition: opts.privacy_condition,
        candidates_examined: counter.get(),
        feasible_found: witnesses.len() as u64,
        witnesses,
        sub_lemma_checks: checks,
        counts,
        elapsed: start.elapsed(),
    }
}

fn sub_lemmas(t: &Tables, checks: &mut BTreeMap<String, bool>, counts: &mut BTreeMap<String, u64>) {
    let n = t.caches.len();
    let z0 = t.index(A0 | A1 | B2);

    let single = (0..n)
        .filter(|&c| t.caches[c] & FILE_A == 0 || t.caches[c] & FILE_B == 0)
        .all(|c| t.dec[c][0].is_empty() || t.dec[c][1].is_empty());
    checks.insert("single-file-cache-excluded".into(), single);

    // demand (B, A): user 0 decodes B, user 1 decodes A
    let a2_forced = (0..n).all(|z1| t.serve(z0, z1, 1, 0).is_empty() || t.caches[z1] & A2 != 0);
    checks.insert("A2-forced".into(), a2_forced);

    let permissible: BTreeSet<u64> = (0..n).filter(|&z1| t.jointly_serviceable(z0, z1)).map(|z1| t.caches[z1]).collect();
    let both_b: Vec<u64> = [B0 | B1, B0 | B2, B1 | B2].iter().map(|g| g | A2).collect();
    let one_a_one_b: Vec<u64> =
        [A0, A1].iter().flat_map(|&a| [B0, B1, B2].map(|b| a | b | A2)).collect();
    let listed: BTreeSet<u64> = both_b.iter().chain(&one_a_one_b).copied().collect();
    checks.insert("permissible-z1".into(), permissible.is_subset(&listed));
    counts.insert("permissible-z1".into(), permissible.len() as u64);

    let fails = |set: &[u64]| set.iter().all(|&m| !t.agnostic_feasible(z0, t.index(m)));
    checks.insert("both-b-not-private".into(), fails(&both_b));
    checks.insert("one-a-one-b-not-private".into(), fails(&one_a_one_b));

    let agnostic = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).filter(|&(a, b)| t.agnostic_feasible(a, b)).count();
    counts.insert("agnostic-feasible-pairs".into(), agnostic as u64);
    checks.insert("agnostic-no-feasible-pair".into(), agnostic == 0);

    checks.insert("coded-control-passes".into(), coded_control_passes());
}

/// The coded subpacketization-3 scheme passes the same per-cell test with its
/// own transmissions.
fn coded_control_passes() -> bool {
    let s = build_table1();
    let p = s.params();
    let ok = s.layout().cells().all(|(_, d, k)| {
        let tx = s.transmission(&d, &k, 0);
        (0..2).all(|u| decodable_files(&s.options(u)[k.0[u]], tx, &p) >> d.0[u] & 1 == 1)
            && (0..2).all(|u| {
                let files = s.options(u).iter().fold(0, |m, z| m | decodable_files(z, tx, &p));
                files == 0b11
            })
    });
    ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_sizes() {
        let t = Tables::build();
        assert_eq!(t.caches.len(), 20);
        assert_eq!(t.spaces, 651);
        assert_eq!(t.caches.iter().filter(|&&c| structural(c)).count(), 18);
    }

    #[test]
    fn no_private_uncoded_scheme() {
        let r = search_sub3_uncoded(&SearchOptions::new());
        assert_eq!(r.feasible_found, 0);
        assert_eq!(r.counts["option-sets-per-user"], 190);
        assert!(r.sub_lemma_checks.values().all(|&v| v), "{:?}", r.sub_lemma_checks);
    }

    #[test]
    fn structural_restriction_agrees() {
        let r = search_sub3_uncoded(&SearchOptions { structural_only: true, ..SearchOptions::new() });
        assert_eq!(r.feasible_found, 0);
        assert_eq!(r.counts["option-sets-per-user"], 153);
    }

    #[test]
    fn decodability_alone_is_satisfiable() {
        let r = search_sub3_uncoded(&SearchOptions { privacy_condition: false, ..SearchOptions::new() });
        assert!(r.feasible_found > 0);
        assert_eq!(r.feasible_found as usize, r.witnesses.len());
    }
}
