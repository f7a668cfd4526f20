//! Placement delivery arrays and the schemes they induce.
//!
//! A `(K, f, Z, S)` array has `f` rows (subfiles) and `K` columns (users).
//! A star at `(j, k)` means user `k` caches subfile `j` of every file; an
//! integer `s` means subfile `j` of user `k`'s demand is carried by
//! transmission row `s`.
//!
//! Text format: a header line `K f Z S`, then `f` lines of `K`
//! whitespace-separated cells, `*` for a star.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::linalg::BitMatrix;
use crate::scheme::Scheme;

use super::{check_table_size, params, tabulate, BuildError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PdaCell {
    Star,
    Symbol(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pda {
    users: usize,
    subpack: usize,
    stars: usize,
    symbols: usize,
    cells: Vec<Vec<PdaCell>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "kebab-case")]
pub enum PdaViolation {
    /// Column does not hold exactly `Z` stars.
    StarCount { column: usize, found: usize, expected: usize },
    /// Integer in `0..S` never used.
    MissingSymbol { symbol: usize },
    /// Integer outside `0..S`.
    SymbolRange { row: usize, column: usize, symbol: usize },
    /// Two cells share an integer but share a row or column, or a crossing cell is not a star.
    Conflict { symbol: usize, first: (usize, usize), second: (usize, usize) },
}

impl Pda {
    /// `cells[j][k]` for row `j`, column `k`. Only the array shape is checked here.
    pub fn new(users: usize, subpack: usize, stars: usize, symbols: usize, cells: Vec<Vec<PdaCell>>) -> Result<Self, BuildError> {
        if users == 0 || subpack == 0 {
            return Err(BuildError::Argument("PDA needs at least one row and one column".into()));
        }
        if cells.len() != subpack || cells.iter().any(|r| r.len() != users) {
            return Err(BuildError::Argument(format!("PDA cells must form a {subpack}x{users} array")));
        }
        Ok(Pda { users, subpack, stars, symbols, cells })
    }

    /// The 6-user, 4-subfile array with `Z = 2`, `S = 4`.
    pub fn six_user_example() -> Pda {
        "6 4 2 4
         * 1 * 2 * 0
         0 * * 3 1 *
         * 3 0 * 2 *
         2 * 1 * * 3"
            .parse()
            .expect("valid literal")
    }

    pub fn users(&self) -> usize {
        self.users
    }

    pub fn subpack(&self) -> usize {
        self.subpack
    }

    pub fn stars(&self) -> usize {
        self.stars
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn cell(&self, row: usize, column: usize) -> PdaCell {
        self.cells[row][column]
    }

    /// Empty iff the star-count, coverage and pairing conditions all hold.
    pub fn validate(&self) -> Vec<PdaViolation> {
        let mut out = Vec::new();
        for k in 0..self.users {
            let found = (0..self.subpack).filter(|&j| self.cells[j][k] == PdaCell::Star).count();
            if found != self.stars {
                out.push(PdaViolation::StarCount { column: k, found, expected: self.stars });
            }
        }
        let mut seen = vec![Vec::new(); self.symbols];
        for (j, row) in self.cells.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                if let PdaCell::Symbol(s) = c {
                    match seen.get_mut(s) {
                        Some(list) => list.push((j, k)),
                        None => out.push(PdaViolation::SymbolRange { row: j, column: k, symbol: s }),
                    }
                }
            }
        }
        for (s, list) in seen.iter().enumerate() {
            if list.is_empty() {
                out.push(PdaViolation::MissingSymbol { symbol: s });
            }
            for (i, &(j1, k1)) in list.iter().enumerate() {
                for &(j2, k2) in &list[i + 1..] {
                    let ok = j1 != j2
                        && k1 != k2
                        && self.cells[j1][k2] == PdaCell::Star
                        && self.cells[j2][k1] == PdaCell::Star;
                    if !ok {
                        out.push(PdaViolation::Conflict { symbol: s, first: (j1, k1), second: (j2, k2) });
                    }
                }
            }
        }
        out
    }
}

impl FromStr for Pda {
    type Err = BuildError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| BuildError::Argument("empty PDA text".into()))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| BuildError::Argument(format!("line 1: bad header field {t:?}"))))
            .collect::<Result<_, _>>()?;
        let [users, subpack, stars, symbols] = nums[..] else {
            return Err(BuildError::Argument("line 1: header must be \"K f Z S\"".into()));
        };
        let cells = lines
            .enumerate()
            .map(|(i, line)| {
                line.split_whitespace()
                    .map(|t| match t {
                        "*" => Ok(PdaCell::Star),
                        _ => t
                            .parse()
                            .map(PdaCell::Symbol)
                            .map_err(|_| BuildError::Argument(format!("row {}: bad cell {t:?}", i + 1))),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Pda::new(users, subpack, stars, symbols, cells)
    }
}

impl fmt::Display for Pda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {} {}", self.users, self.subpack, self.stars, self.symbols)?;
        for row in &self.cells {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    PdaCell::Star => "*".to_string(),
                    PdaCell::Symbol(s) => s.to_string(),
                })
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Non-private `(K, N; NZ/f, S/f)` scheme from a valid array.
pub fn build_from_pda(pda: &Pda, files: usize) -> Result<Scheme, BuildError> {
    let problems = pda.validate();
    if !problems.is_empty() {
        return Err(BuildError::InvalidPda(problems));
    }
    let p = params(pda.users, files, pda.subpack)?;
    check_table_size(files, pda.users, 1, 1)?;
    let caches = (0..pda.users)
        .map(|k| {
            let cols = (0..files).flat_map(|n| {
                (0..pda.subpack).filter(move |&j| pda.cells[j][k] == PdaCell::Star).map(move |j| p.symbol(n, j))
            });
            BitMatrix::unit_rows(p.width(), cols).map(|m| vec![m])
        })
        .collect::<Result<Vec<_>, _>>()?;
    let tx = tabulate(files, vec![1; pda.users], 1, |d, _, _| {
        let mut rows = vec![0u64; pda.symbols];
        for (j, row) in pda.cells.iter().enumerate() {
            for (k, &c) in row.iter().enumerate() {
                if let PdaCell::Symbol(s) = c {
                    rows[s] ^= 1u64 << p.symbol(d.0[k], j);
                }
            }
        }
        Ok(BitMatrix::from_rows(p.width(), rows)?)
    })?;
    Ok(Scheme::new(
        p,
        caches,
        tx,
        format!("pda(K={},f={},Z={},S={},N={files})", pda.users, pda.subpack, pda.stars, pda.symbols),
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::scheme::{DemandVector, KeyVector};
    use crate::verify::{rate_and_memory, verify_correctness};

    #[test]
    fn six_user_array_is_valid() {
        let p = Pda::six_user_example();
        assert!(p.validate().is_empty());
        assert_eq!((p.users(), p.subpack(), p.stars(), p.symbols()), (6, 4, 2, 4));
        assert_eq!(p.to_string().parse::<Pda>().unwrap(), p);
    }

    #[test]
    fn extra_star_breaks_star_count() {
        let bad: Pda = "6 4 2 4
            * 1 * 2 * 0
            * * * 3 1 *
            * 3 0 * 2 *
            2 * 1 * * 3"
            .parse()
            .unwrap();
        let v = bad.validate();
        assert!(v.contains(&PdaViolation::StarCount { column: 0, found: 3, expected: 2 }), "{v:?}");
    }

    #[test]
    fn repeated_integer_in_column_conflicts() {
        let bad: Pda = "2 3 1 2
            * 0
            0 *
            0 1"
        .parse()
        .unwrap();
        let v = bad.validate();
        assert!(v.iter().any(|x| matches!(x, PdaViolation::Conflict { symbol: 0, first: (1, 0), second: (2, 0) })), "{v:?}");
    }

    #[test]
    fn out_of_range_and_missing_symbols() {
        let bad: Pda = "2 2 1 3\n* 5\n5 *".parse().unwrap();
        let v = bad.validate();
        assert!(v.contains(&PdaViolation::MissingSymbol { symbol: 0 }));
        assert!(v.iter().any(|x| matches!(x, PdaViolation::SymbolRange { symbol: 5, .. })));
        assert!(build_from_pda(&bad, 2).is_err());
    }

    #[test]
    fn parse_errors() {
        assert!("".parse::<Pda>().is_err());
        assert!("2 2 1".parse::<Pda>().is_err());
        assert!("2 2 1 1\n* x\n0 *".parse::<Pda>().is_err());
        assert!("2 2 1 1\n* 0".parse::<Pda>().is_err());
    }

    #[test]
    fn induced_scheme_matches_listing() {
        let s = build_from_pda(&Pda::six_user_example(), 2).unwrap();
        // user 0 caches W_{i,0} and W_{i,2}
        assert_eq!(s.options(0)[0], BitMatrix::unit_rows(8, [0, 2, 4, 6]).unwrap());
        assert_eq!(rate_and_memory(&s), (Rational::from_integer(1), Rational::from_integer(1)));
        // first row is W_{d0,1} + W_{d2,2} + W_{d5,0}
        let d = DemandVector(vec![1, 0, 0, 0, 0, 1]);
        let tx = s.transmission(&d, &KeyVector(vec![0; 6]), 0);
        assert_eq!(tx.rows()[0], 1 << (4 + 1) | 1 << 2 | 1 << 4);
        assert!(verify_correctness(&s).is_empty());
    }
}
