//! Maddah-Ali–Niesen placement and delivery, and the two trivial endpoints.

use crate::linalg::BitMatrix;
use crate::scheme::Scheme;

use super::{binomial, check_table_size, params, subsets, tabulate, BuildError};

/// Non-private `(K, N; Nt/K, C(K,t+1)/C(K,t))` scheme with `f = C(K, t)`.
///
/// Subfile `(n, tau)` for a `t`-subset `tau` (lexicographic index) is cached
/// by every user in `tau`. Each `(t+1)`-subset `sigma` contributes one row
/// XORing `W_{d_k, sigma \ {k}}` over `k` in `sigma`.
pub fn build_mn(users: usize, files: usize, t: usize) -> Result<Scheme, BuildError> {
    if t > users {
        return Err(BuildError::Argument(format!("t = {t} exceeds K = {users}")));
    }
    let f = binomial(users, t)
        .and_then(|f| usize::try_from(f).ok())
        .filter(|&f| f <= 64)
        .ok_or(BuildError::Width(usize::MAX))?;
    let p = params(users, files, f)?;
    check_table_size(files, users, 1, 1)?;

    let placed = subsets(users, t);
    let index_of = |tau: &[usize]| placed.binary_search_by(|x| x.as_slice().cmp(tau)).expect("t-subset");

    let caches = (0..users)
        .map(|u| {
            let cols = (0..files).flat_map(|n| {
                placed.iter().enumerate().filter(|(_, tau)| tau.contains(&u)).map(move |(i, _)| p.symbol(n, i))
            });
            BitMatrix::unit_rows(p.width(), cols).map(|m| vec![m])
        })
        .collect::<Result<Vec<_>, _>>()?;

    let groups = subsets(users, t + 1);
    let tx = tabulate(files, vec![1; users], 1, |d, _, _| {
        let rows = groups
            .iter()
            .map(|sigma| {
                sigma.iter().fold(0u64, |row, &k| {
                    let rest: Vec<usize> = sigma.iter().copied().filter(|&x| x != k).collect();
                    row ^ 1u64 << p.symbol(d.0[k], index_of(&rest))
                })
            })
            .collect();
        Ok(BitMatrix::from_rows(p.width(), rows)?)
    })?;
    Ok(Scheme::new(p, caches, tx, format!("mn(K={users},N={files},t={t})"))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialMode {
    /// Nothing cached; every file is sent regardless of demand.
    EmptyCache,
    /// Everything cached; nothing is sent.
    FullCache,
}

/// The `(0, N)` and `(N, 0)` endpoints with `f = 1`.
pub fn build_trivial(files: usize, users: usize, mode: TrivialMode) -> Result<Scheme, BuildError> {
    let p = params(users, files, 1)?;
    check_table_size(files, users, 1, 1)?;
    let everything = BitMatrix::unit_rows(files, 0..files)?;
    let nothing = BitMatrix::empty(files)?;
    let (cache, sent, label) = match mode {
        TrivialMode::EmptyCache => (nothing, everything, "empty-cache"),
        TrivialMode::FullCache => (everything, nothing, "full-cache"),
    };
    let tx = tabulate(files, vec![1; users], 1, |_, _, _| Ok(sent.clone()))?;
    Ok(Scheme::new(p, vec![vec![cache]; users], tx, format!("trivial({label},N={files},K={users})"))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::symbolic_matrix;
    use crate::rational::Rational;
    use crate::scheme::{DemandVector, KeyVector};
    use crate::verify::{rate_and_memory, verify_correctness};

    #[test]
    fn mn_2_2_1_matches_four_row_table() {
        let s = build_mn(2, 2, 1).unwrap();
        assert_eq!(s.options(0)[0], symbolic_matrix(2, 2, &["A0", "B0"]).unwrap());
        assert_eq!(s.options(1)[0], symbolic_matrix(2, 2, &["A1", "B1"]).unwrap());
        let keys = KeyVector(vec![0, 0]);
        for (d, row) in [([0, 0], "A1+A0"), ([0, 1], "A1+B0"), ([1, 0], "B1+A0"), ([1, 1], "B1+B0")] {
            let tx = s.transmission(&DemandVector(d.to_vec()), &keys, 0);
            assert_eq!(*tx, symbolic_matrix(2, 2, &[row]).unwrap(), "demand {d:?}");
        }
        assert!(verify_correctness(&s).is_empty());
    }

    #[test]
    fn mn_4_4_2_user0_holds_pairs_with_0() {
        let s = build_mn(4, 4, 2).unwrap();
        // pairs 01, 02, 03 are subfile indices 0, 1, 2
        let mut expect = Vec::new();
        for n in 0..4 {
            for i in 0..3 {
                expect.push(n * 6 + i);
            }
        }
        assert_eq!(s.options(0)[0], BitMatrix::unit_rows(24, expect).unwrap());
        assert_eq!(rate_and_memory(&s), (Rational::from_integer(2), Rational::new(2, 3)));
    }

    #[test]
    fn mn_full_caches_have_zero_rate() {
        let s = build_mn(3, 2, 3).unwrap();
        let (m, r) = rate_and_memory(&s);
        assert_eq!((m, r), (Rational::from_integer(2), Rational::from_integer(0)));
        assert!(verify_correctness(&s).is_empty());
    }

    #[test]
    fn mn_rows_xor_t_plus_one_symbols() {
        let s = build_mn(5, 2, 2).unwrap();
        assert_eq!(s.transmission_rows(), 10);
        for t in s.transmissions().branches()[0].iter() {
            assert!(t.rows().iter().all(|r| r.count_ones() == 3));
        }
        assert!(verify_correctness(&s).is_empty());
    }

    #[test]
    fn mn_rejects_bad_arguments() {
        assert!(build_mn(2, 2, 3).is_err());
        assert!(matches!(build_mn(8, 4, 4), Err(BuildError::Width(_))));
    }

    #[test]
    fn trivial_endpoints() {
        let e = build_trivial(2, 2, TrivialMode::EmptyCache).unwrap();
        let f = build_trivial(2, 2, TrivialMode::FullCache).unwrap();
        assert_eq!(rate_and_memory(&e), (Rational::from_integer(0), Rational::from_integer(2)));
        assert_eq!(rate_and_memory(&f), (Rational::from_integer(2), Rational::from_integer(0)));
        assert!(verify_correctness(&e).is_empty());
        assert!(verify_correctness(&f).is_empty());
    }
}
