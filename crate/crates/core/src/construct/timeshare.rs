//! Time sharing by file splitting.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::linalg::BitMatrix;
use crate::rational::Rational;
use crate::scheme::{mixed_radix_digits, KeyVector, Scheme};

use super::{check_table_size, params, tabulate, BuildError};

/// Places a matrix of `src` into segment `offset..` of the combined symbol
/// space, each source subfile refined into `copies` consecutive pieces.
struct Segment<'a> {
    scheme: &'a Scheme,
    copies: usize,
    offset: usize,
}

impl Segment<'_> {
    fn embed(&self, m: &BitMatrix, subpack: usize, out: &mut Vec<u64>) {
        let f = self.scheme.params().subpack;
        for c in 0..self.copies {
            for &row in m.rows() {
                let mut word = 0u64;
                for col in (0..m.cols()).filter(|&col| row >> col & 1 == 1) {
                    let (n, s) = (col / f, col % f);
                    word |= 1 << (n * subpack + self.offset + s * self.copies + c);
                }
                out.push(word);
            }
        }
    }
}

/// Scheme that serves fraction `alpha` of every file with `s1` and the rest
/// with `s2`. With `alpha = p/q`, segment one takes `a` copies of each `s1`
/// subfile and segment two `b` copies of each `s2` subfile, for the smallest
/// integers with `a*f1 / (a*f1 + b*f2) = alpha`. Keys of the two parts are
/// independent: user `u` holds `(k1, k2)` encoded as `k1 * L2 + k2`.
pub fn time_share(s1: &Scheme, s2: &Scheme, alpha: Rational) -> Result<Scheme, BuildError> {
    let (p1, p2) = (s1.params(), s2.params());
    if p1.users != p2.users || p1.files != p2.files {
        return Err(BuildError::Argument("time sharing needs equal K and N".into()));
    }
    if alpha < Rational::zero() || alpha > Rational::one() {
        return Err(BuildError::Argument(format!("alpha = {alpha} outside [0, 1]")));
    }
    let (num, den) = (*alpha.numer() as u128, *alpha.denom() as u128);
    let x = p1.subpack as u128 * (den - num);
    let y = num * p2.subpack as u128;
    let g = x.gcd(&y);
    let (a, b) = ((y / g) as usize, (x / g) as usize);
    let subpack = a * p1.subpack + b * p2.subpack;
    let (users, files) = (p1.users, p1.files);
    let p = params(users, files, subpack)?;

    let mut parts = Vec::new();
    if a > 0 {
        parts.push(Segment { scheme: s1, copies: a, offset: 0 });
    }
    if b > 0 {
        parts.push(Segment { scheme: s2, copies: b, offset: a * p1.subpack });
    }

    // per-user radices of each part, and combined key radix
    let radices: Vec<Vec<usize>> = parts.iter().map(|seg| seg.scheme.cache_options().iter().map(Vec::len).collect()).collect();
    let key_radices: Vec<usize> = (0..users).map(|u| radices.iter().map(|r| r[u]).product()).collect();
    let branch_radices: Vec<usize> = parts.iter().map(|seg| seg.scheme.transmissions().branch_count()).collect();
    let branches: usize = branch_radices.iter().product();
    check_table_size(files, users, key_radices.iter().map(|&r| r as u128).product(), branches as u128)?;

    let split_keys = |u: usize, k: usize| -> Vec<usize> {
        let part_radices: Vec<usize> = radices.iter().map(|r| r[u]).collect();
        mixed_radix_digits(k, &part_radices)
    };

    let caches = (0..users)
        .map(|u| {
            (0..key_radices[u])
                .map(|k| {
                    let ks = split_keys(u, k);
                    let mut rows = Vec::new();
                    for (seg, &ki) in parts.iter().zip(&ks) {
                        seg.embed(&seg.scheme.options(u)[ki], subpack, &mut rows);
                    }
                    BitMatrix::from_rows(p.width(), rows)
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let tx = tabulate(files, key_radices.clone(), branches, |d, keys, branch| {
        let per_user: Vec<Vec<usize>> = (0..users).map(|u| split_keys(u, keys.0[u])).collect();
        let bs = mixed_radix_digits(branch, &branch_radices);
        let mut rows = Vec::new();
        for (i, seg) in parts.iter().enumerate() {
            let ki = KeyVector(per_user.iter().map(|ks| ks[i]).collect());
            seg.embed(seg.scheme.transmission(d, &ki, bs[i]), subpack, &mut rows);
        }
        Ok(BitMatrix::from_rows(p.width(), rows)?)
    })?;
    Ok(Scheme::new(p, caches, tx, format!("timeshare[{alpha}]({}, {})", s1.provenance(), s2.provenance()))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::mn::{build_trivial, TrivialMode};
    use crate::construct::table1::build_table1;
    use crate::verify::{rate_and_memory, verify_correctness};

    #[test]
    fn endpoints_midpoint() {
        let e = build_trivial(2, 2, TrivialMode::EmptyCache).unwrap();
        let f = build_trivial(2, 2, TrivialMode::FullCache).unwrap();
        let s = time_share(&e, &f, Rational::new(1, 2)).unwrap();
        assert_eq!(rate_and_memory(&s), (Rational::one(), Rational::one()));
        assert!(verify_correctness(&s).is_empty());
    }

    #[test]
    fn alpha_one_keeps_first_scheme() {
        let t = build_table1();
        let e = build_trivial(2, 2, TrivialMode::EmptyCache).unwrap();
        let s = time_share(&t, &e, Rational::one()).unwrap();
        assert_eq!(rate_and_memory(&s), rate_and_memory(&t));
        assert_eq!(s.params().subpack, 3);
        let s0 = time_share(&e, &t, Rational::zero()).unwrap();
        assert_eq!(rate_and_memory(&s0), rate_and_memory(&t));
    }

    #[test]
    fn uneven_split_uses_copies() {
        let t = build_table1();
        let e = build_trivial(2, 2, TrivialMode::EmptyCache).unwrap();
        // alpha = 1/4: a*3 / (a*3 + b) = 1/4 -> a = 1, b = 9
        let s = time_share(&t, &e, Rational::new(1, 4)).unwrap();
        assert_eq!(s.params().subpack, 12);
        let (m, r) = rate_and_memory(&s);
        assert_eq!(m, Rational::new(1, 4));
        assert_eq!(r, Rational::new(1, 4) * Rational::new(2, 3) + Rational::new(3, 4) * Rational::from_integer(2));
        assert!(verify_correctness(&s).is_empty());
    }

    #[test]
    fn rejects_bad_inputs() {
        let t = build_table1();
        assert!(time_share(&t, &t, Rational::new(3, 2)).is_err());
        let other = build_trivial(3, 2, TrivialMode::EmptyCache).unwrap();
        assert!(time_share(&t, &other, Rational::new(1, 2)).is_err());
        // 2 files * (3*a + 3*b) > 64 for alpha = 1/31
        assert!(matches!(time_share(&t, &t, Rational::new(1, 31)), Err(BuildError::Width(_))));
    }
}
