//! Exchanging the roles of cache options and transmissions in a private
//! two-user, two-file scheme with two options per user.

use crate::linalg::BitMatrix;
use crate::scheme::Scheme;
use crate::verify::{decodable_files, privacy_report, verify_correctness};

use super::{tabulate, BuildError};

/// Dual of a private `(2, 2; M, R)` scheme: the four distinct transmissions
/// become the cache options and the four cache options become the
/// transmission alphabet, giving `(R, M)`.
///
/// The transmissions are split into two pairs. Partitions are tried in the
/// order `{t0, t1}`, `{t0, t2}`, `{t0, t3}` (alphabet in first-use order over
/// the cell table); the pair holding `t0` goes to user 1, the other to user 0.
/// The first partition whose induced scheme is correct and exactly private
/// is returned.
pub fn dualize(s: &Scheme) -> Result<Scheme, BuildError> {
    let p = s.params();
    if p.users != 2 || p.files != 2 {
        return Err(BuildError::Precondition("duality needs K = 2 and N = 2".into()));
    }
    if s.cache_options().iter().any(|o| o.len() != 2) || s.transmissions().branch_count() != 1 {
        return Err(BuildError::Precondition("duality needs two options per user and deterministic delivery".into()));
    }
    let alphabet = s.transmission_alphabet();
    if alphabet.len() != 4 {
        return Err(BuildError::Precondition(format!("expected 4 distinct transmissions, found {}", alphabet.len())));
    }
    if alphabet.iter().any(|t| t.rank() != t.row_count()) {
        return Err(BuildError::Precondition("transmissions must have full row rank to serve as caches".into()));
    }
    if !privacy_report(s)?.exact_private {
        return Err(BuildError::Precondition("scheme is not exactly private".into()));
    }
    let new_alphabet: Vec<&BitMatrix> = s.cache_options().iter().flatten().collect();

    for partner in 1..4 {
        let user1 = vec![alphabet[0].clone(), alphabet[partner].clone()];
        let user0: Vec<BitMatrix> = (1..4).filter(|&i| i != partner).map(|i| alphabet[i].clone()).collect();
        let caches = vec![user0, user1];
        let tx = tabulate(2, vec![2, 2], 1, |d, k, _| {
            new_alphabet
                .iter()
                .find(|z| {
                    decodable_files(&caches[0][k.0[0]], z, &p) >> d.0[0] & 1 == 1
                        && decodable_files(&caches[1][k.0[1]], z, &p) >> d.0[1] & 1 == 1
                })
                .map(|z| (*z).clone())
                .ok_or_else(|| BuildError::Precondition("cell without a serving transmission".into()))
        });
        let Ok(tx) = tx else { continue };
        let dual = Scheme::new(p, caches, tx, format!("dual[{}]", s.provenance()))?;
        if verify_correctness(&dual).is_empty() && privacy_report(&dual)?.exact_private {
            return Ok(dual);
        }
    }
    Err(BuildError::Precondition("no partition of the transmissions yields a private dual".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::mn::build_mn;
    use crate::construct::symbolic_matrix;
    use crate::construct::table1::build_table1;
    use crate::rational::Rational;
    use crate::verify::rate_and_memory;

    #[test]
    fn dual_of_table1_matches_listing() {
        let d = dualize(&build_table1()).unwrap();
        let m = |rows: &[&str]| symbolic_matrix(2, 3, rows).unwrap();
        assert_eq!(d.options(0), &[m(&["A1", "B1"]), m(&["A2", "B2"])]);
        let mut u1 = d.options(1).to_vec();
        u1.sort();
        let mut want = vec![m(&["A0+A1+A2", "B0+B1+B2"]), m(&["A0", "B0"])];
        want.sort();
        assert_eq!(u1, want);
        assert_eq!(rate_and_memory(&d), (Rational::new(2, 3), Rational::from_integer(1)));
        let dd = dualize(&d).unwrap();
        assert_eq!(rate_and_memory(&dd), (Rational::from_integer(1), Rational::new(2, 3)));
    }

    #[test]
    fn dual_rejects_non_private_input() {
        assert!(matches!(dualize(&build_mn(2, 2, 1).unwrap()), Err(BuildError::Precondition(_))));
    }
}
