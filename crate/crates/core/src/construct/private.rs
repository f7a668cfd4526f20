//! Privatizing a non-private scheme by giving each user a block of the
//! underlying scheme's caches to pick from.

use num_rational::Ratio;
use num_traits::Zero;

use crate::rational::Rational;
use crate::scheme::{mixed_radix_digits, DemandVector, KeyVector, Scheme};

use super::{binomial, check_table_size, tabulate, BuildError};

/// Extended demand of length `N*K`. Block `k` is the cyclic sequence
/// `d'_j = (d_k - keys_k + j) mod N`, so `d'_{kN + keys_k} = d_k` and every
/// block is a permutation of `0..N`.
pub fn extend_demand(demand: &DemandVector, keys: &KeyVector, files: usize) -> Result<DemandVector, BuildError> {
    if demand.0.len() != keys.0.len() {
        return Err(BuildError::Argument("demand and key vectors differ in length".into()));
    }
    if files == 0 {
        return Err(BuildError::Argument("need at least one file".into()));
    }
    if let Some(bad) = demand.0.iter().chain(&keys.0).find(|&&v| v >= files) {
        return Err(BuildError::Argument(format!("entry {bad} outside 0..{files}")));
    }
    let mut out = Vec::with_capacity(files * demand.0.len());
    for (k, (&d, &r)) in demand.0.iter().zip(&keys.0).enumerate() {
        for j in k * files..(k + 1) * files {
            out.push((d + files - r + j % files) % files);
        }
    }
    Ok(DemandVector(out))
}

fn require_deterministic(np: &Scheme) -> Result<(), BuildError> {
    if !np.is_deterministic() {
        return Err(BuildError::Precondition("underlying scheme must have one option per user and deterministic delivery".into()));
    }
    Ok(())
}

/// Private `(K, N; M, R)` scheme from a non-private `(NK, N; M, R)` one. User
/// `k` may hold any cache of underlying users `kN .. kN+N-1`; key `r_k`
/// picks which. Delivery sends the underlying transmission for the extended
/// demand.
pub fn privatize(np: &Scheme) -> Result<Scheme, BuildError> {
    require_deterministic(np)?;
    let p = np.params();
    let n = p.files;
    if !p.users.is_multiple_of(n) {
        return Err(BuildError::UserCount { expected: format!("a multiple of N = {n}"), actual: p.users });
    }
    let users = p.users / n;
    check_table_size(n, users, (n as u128).pow(users as u32), 1)?;
    let params = super::params(users, n, p.subpack)?;
    let caches = (0..users)
        .map(|k| (k * n..(k + 1) * n).map(|j| np.options(j)[0].clone()).collect())
        .collect();
    let zero = KeyVector(vec![0; p.users]);
    let tx = tabulate(n, vec![n; users], 1, |d, keys, _| {
        let ext = extend_demand(d, keys, n)?;
        Ok(np.transmission(&ext, &zero, 0).clone())
    })?;
    Ok(Scheme::new(params, caches, tx, format!("private[{}]", np.provenance()))?)
}

/// Ordered selections of `len` distinct elements of `0..pool`, lexicographic.
fn arrangements(pool: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn go(pool: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in 0..pool {
            if !cur.contains(&x) {
                cur.push(x);
                go(pool, len, cur, out);
                cur.pop();
            }
        }
    }
    go(pool, len, &mut cur, &mut out);
    out
}

/// Partially private scheme with ambiguity level `L`: user `k` picks among
/// the caches of underlying users `kL .. kL+L-1`. The `L-1` positions not
/// holding the real demand get distinct decoy files from `[N] \ {d_k}`, in
/// every possible arrangement; each joint arrangement is one equally likely
/// delivery branch.
pub fn build_partial_private(np: &Scheme, level: usize) -> Result<Scheme, BuildError> {
    require_deterministic(np)?;
    let p = np.params();
    let n = p.files;
    if level < 2 || level > n {
        return Err(BuildError::Argument(format!("level L = {level} outside 2..={n}")));
    }
    if !p.users.is_multiple_of(level) {
        return Err(BuildError::UserCount { expected: format!("a multiple of L = {level}"), actual: p.users });
    }
    let users = p.users / level;
    let decoys = arrangements(n - 1, level - 1);
    let per_user = decoys.len();
    let branches = (per_user as u128).checked_pow(users as u32).ok_or(BuildError::TableSize(u128::MAX))?;
    check_table_size(n, users, (level as u128).pow(users as u32), branches)?;
    let params = super::params(users, n, p.subpack)?;
    let caches = (0..users)
        .map(|k| (k * level..(k + 1) * level).map(|j| np.options(j)[0].clone()).collect())
        .collect();
    let zero = KeyVector(vec![0; p.users]);
    let radices = vec![per_user; users];
    let tx = tabulate(n, vec![level; users], branches as usize, |d, keys, b| {
        let picks = mixed_radix_digits(b, &radices);
        let mut ext = Vec::with_capacity(p.users);
        for k in 0..users {
            let mut fill = decoys[picks[k]].iter().map(|&e| if e < d.0[k] { e } else { e + 1 });
            for pos in 0..level {
                ext.push(if pos == keys.0[k] { d.0[k] } else { fill.next().expect("L-1 decoys") });
            }
        }
        Ok(np.transmission(&DemandVector(ext), &zero, 0).clone())
    })?;
    Ok(Scheme::new(params, caches, tx, format!("partial[L={level}][{}]", np.provenance()))?)
}

/// Rate of the privatized Maddah-Ali–Niesen scheme at memory `M` (`KM`
/// integral): `K(N-M)/(1+KM)` for `M >= (K-1)/K`, else `N - M`.
pub fn private_rate_formula(users: usize, files: usize, memory: Rational) -> Result<Rational, BuildError> {
    let k = Ratio::from_integer(users as i64);
    let n = Ratio::from_integer(files as i64);
    if users == 0 || files == 0 {
        return Err(BuildError::Argument("K and N must be positive".into()));
    }
    if memory < Ratio::zero() || memory > n {
        return Err(BuildError::Argument(format!("M = {memory} outside [0, {files}]")));
    }
    if !(k * memory).is_integer() {
        return Err(BuildError::Argument(format!("KM = {} is not an integer", k * memory)));
    }
    let one = Ratio::from_integer(1);
    Ok(if memory >= (k - one) / k { k * (n - memory) / (one + k * memory) } else { n - memory })
}

/// Subpacketization of the Maddah-Ali–Niesen based private scheme under full
/// privacy (`K' = NK`) and under ambiguity level `L` (`K' = LK`), each
/// `C(K', K'M/N)`.
pub fn subpack_comparison(files: usize, users: usize, memory: Rational, level: usize) -> Result<(u128, u128), BuildError> {
    if files == 0 || users == 0 || level == 0 || level > files {
        return Err(BuildError::Argument("need N, K >= 1 and 1 <= L <= N".into()));
    }
    if memory < Ratio::zero() || memory > Ratio::from_integer(files as i64) {
        return Err(BuildError::Argument(format!("M = {memory} outside [0, {files}]")));
    }
    let f = |k_prime: usize| -> Result<u128, BuildError> {
        let t = Ratio::from_integer(k_prime as i64) * memory / Ratio::from_integer(files as i64);
        if !t.is_integer() {
            return Err(BuildError::Argument(format!("t = K'M/N = {t} is not an integer for K' = {k_prime}")));
        }
        binomial(k_prime, t.to_integer() as usize).ok_or(BuildError::Argument("binomial overflow".into()))
    };
    Ok((f(files * users)?, f(level * users)?))
}
