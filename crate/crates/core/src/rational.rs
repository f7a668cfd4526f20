//! Exact rationals and their `p/q` text form.

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serializer};

pub type Rational = Ratio<i64>;

/// Parses `p/q`, or a bare integer.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            if q == 0 {
                return None;
            }
            Ratio::new(p, q)
        }
        None => Ratio::from_integer(s.parse().ok()?),
    };
    Some(r)
}

/// `p/q` in lowest terms; integers print without a denominator.
pub fn format(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).ok_or_else(|| serde::de::Error::custom(format!("invalid rational {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse("2/3"), Some(Ratio::new(2, 3)));
        assert_eq!(parse("4/6"), Some(Ratio::new(2, 3)));
        assert_eq!(parse("5"), Some(Ratio::from_integer(5)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
        assert_eq!(format(&Ratio::new(10, 12)), "5/6");
        assert_eq!(format(&Ratio::from_integer(2)), "2");
    }
}
