//! Achievable `(M, R)` vertices for two users and two files with demand privacy.

use crate::scheme::Scheme;
use crate::verify::{privacy_report, rate_and_memory, verify_correctness};

use super::dual::dualize;
use super::mn::{build_trivial, TrivialMode};
use super::table1::build_table1;
use super::{BuildError, RatePoint};

/// Each vertex with the scheme achieving it, sorted by memory. Every scheme
/// is checked correct and exactly private before it is included.
pub fn tradeoff_schemes() -> Result<Vec<(RatePoint, Scheme)>, BuildError> {
    let table1 = build_table1();
    let candidates = [
        build_trivial(2, 2, TrivialMode::EmptyCache)?,
        dualize(&table1)?,
        table1,
        build_trivial(2, 2, TrivialMode::FullCache)?,
    ];
    let mut out = Vec::with_capacity(candidates.len());
    for s in candidates {
        if !verify_correctness(&s).is_empty() {
            return Err(BuildError::Precondition(format!("{} is not correct", s.provenance())));
        }
        if !privacy_report(&s)?.exact_private {
            return Err(BuildError::Precondition(format!("{} is not private", s.provenance())));
        }
        let (memory, rate) = rate_and_memory(&s);
        out.push((RatePoint { memory, rate, label: s.provenance().to_string() }, s));
    }
    out.sort_by_key(|(p, _)| p.memory);
    Ok(out)
}

pub fn tradeoff_curve() -> Result<Vec<RatePoint>, BuildError> {
    Ok(tradeoff_schemes()?.into_iter().map(|(p, _)| p).collect())
}
