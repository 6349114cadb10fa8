//! Ordinals below ω^ω in Cantor normal form.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::theory::TheoryError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrdinalError {
    #[error("cannot parse ordinal '{text}': {msg}")]
    Parse { text: String, msg: String },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
}

/// `ω^e1·c1 + ... + ω^ek·ck` with `e1 > ... > ek` and every `ci > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct OrdinalCnf(Vec<(u32, u64)>);

impl OrdinalCnf {
    pub fn zero() -> Self {
        OrdinalCnf(Vec::new())
    }

    pub fn finite(n: u64) -> Self {
        Self::term(0, n)
    }

    pub fn omega() -> Self {
        Self::term(1, 1)
    }

    /// `ω^exp · coef`.
    pub fn term(exp: u32, coef: u64) -> Self {
        if coef == 0 {
            Self::zero()
        } else {
            OrdinalCnf(vec![(exp, coef)])
        }
    }

    /// From `(exponent, coefficient)` pairs; zero coefficients are skipped.
    pub fn from_terms(terms: Vec<(u32, u64)>) -> Result<Self, OrdinalError> {
        let terms: Vec<(u32, u64)> = terms.into_iter().filter(|&(_, c)| c > 0).collect();
        if terms.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(OrdinalError::Domain("exponents must strictly decrease".into()));
        }
        Ok(OrdinalCnf(terms))
    }

    pub fn terms(&self) -> &[(u32, u64)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Leading exponent; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.0.first().map(|&(e, _)| e)
    }

    pub fn as_finite(&self) -> Option<u64> {
        match self.0.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    pub fn max_coefficient(&self) -> u64 {
        self.0.iter().map(|&(_, c)| c).max().unwrap_or(0)
    }
}

pub fn ord_add(a: &OrdinalCnf, b: &OrdinalCnf) -> OrdinalCnf {
    let Some(&(k, c)) = b.0.first() else {
        return a.clone();
    };
    let mut out: Vec<(u32, u64)> = a.0.iter().copied().filter(|&(e, _)| e > k).collect();
    let same = a.0.iter().find(|&&(e, _)| e == k).map_or(0, |&(_, c)| c);
    out.push((k, same + c));
    out.extend_from_slice(&b.0[1..]);
    OrdinalCnf(out)
}

pub fn ord_mul(a: &OrdinalCnf, b: &OrdinalCnf) -> OrdinalCnf {
    let Some(&(d, lead)) = a.0.first() else {
        return OrdinalCnf::zero();
    };
    let mut acc = OrdinalCnf::zero();
    for &(e, c) in &b.0 {
        let part = if e > 0 {
            OrdinalCnf::term(d + e, c)
        } else {
            let mut v = vec![(d, lead * c)];
            v.extend_from_slice(&a.0[1..]);
            OrdinalCnf(v)
        };
        acc = ord_add(&acc, &part);
    }
    acc
}

pub fn ord_cmp(a: &OrdinalCnf, b: &OrdinalCnf) -> Ordering {
    for (x, y) in a.0.iter().zip(&b.0) {
        let o = x.0.cmp(&y.0).then(x.1.cmp(&y.1));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.0.len().cmp(&b.0.len())
}

/// The unique `ξ` with `a + ξ = b`.
pub fn ord_left_sub(a: &OrdinalCnf, b: &OrdinalCnf) -> Result<OrdinalCnf, OrdinalError> {
    if ord_cmp(b, a) == Ordering::Less {
        return Err(OrdinalError::Domain(format!("{b} < {a}: left subtraction undefined")));
    }
    let i = a.0.iter().zip(&b.0).take_while(|(x, y)| x == y).count();
    if i == a.0.len() {
        return Ok(OrdinalCnf(b.0[i..].to_vec()));
    }
    let (ea, ca) = a.0[i];
    let (eb, cb) = b.0[i];
    if eb > ea {
        return Ok(OrdinalCnf(b.0[i..].to_vec()));
    }
    let mut v = vec![(eb, cb - ca)];
    v.extend_from_slice(&b.0[i + 1..]);
    Ok(OrdinalCnf(v))
}

/// The leading exponent: `k` with `ω^k <= a < ω^(k+1)`.
pub fn log_of(a: &OrdinalCnf) -> Result<u32, OrdinalError> {
    a.degree()
        .ok_or_else(|| OrdinalError::Domain("Log is undefined for 0".into()))
}

impl PartialOrd for OrdinalCnf {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdinalCnf {
    fn cmp(&self, other: &Self) -> Ordering {
        ord_cmp(self, other)
    }
}

impl fmt::Display for OrdinalCnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(e, c)| match (e, c) {
                (0, c) => c.to_string(),
                (1, 1) => "w".into(),
                (1, c) => format!("w*{c}"),
                (e, 1) => format!("w^{e}"),
                (e, c) => format!("w^{e}*{c}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl FromStr for OrdinalCnf {
    type Err = OrdinalError;

    /// `w^3*2 + w*1 + 4`; terms need not be in normal form (`1 + w` is `w`).
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let fail = |msg: &str| OrdinalError::Parse {
            text: text.to_string(),
            msg: msg.to_string(),
        };
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(fail("empty input"));
        }
        let mut acc = OrdinalCnf::zero();
        for term in compact.split('+') {
            let (base, coef) = match term.split_once('*') {
                Some((b, c)) => (b, c.parse::<u64>().map_err(|_| fail("bad coefficient"))?),
                None => (term, 1),
            };
            let part = if let Some(rest) = base.strip_prefix('w') {
                let exp = match rest.strip_prefix('^') {
                    Some(e) => e.parse::<u32>().map_err(|_| fail("bad exponent"))?,
                    None if rest.is_empty() => 1,
                    None => return Err(fail("unexpected text after 'w'")),
                };
                OrdinalCnf::term(exp, coef)
            } else {
                if term.contains('*') {
                    return Err(fail("a natural number takes no coefficient"));
                }
                OrdinalCnf::finite(base.parse::<u64>().map_err(|_| fail("expected 'w' or a natural"))?)
            };
            acc = ord_add(&acc, &part);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> OrdinalCnf {
        s.parse().unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(ord_add(&o("w"), &o("w^2")), o("w^2"));
        assert_eq!(ord_mul(&o("w"), &o("w")), o("w^2"));
        assert_eq!(ord_left_sub(&o("w"), &o("w*2+3")).unwrap(), o("w+3"));
        assert_eq!(ord_mul(&o("w+1"), &o("2")), o("w*2+1"));
        assert_eq!(ord_mul(&o("2"), &o("w")), o("w"));
        assert!(ord_left_sub(&o("w+1"), &o("w")).is_err());
    }

    #[test]
    fn text_roundtrip() {
        for s in ["0", "7", "w", "w*2", "w^2*3 + w + 4", "w^5"] {
            assert_eq!(o(s).to_string(), s.replace(' ', "").replace('+', " + "));
        }
        assert_eq!(o("1 + w"), o("w"));
        assert_eq!(o("w*1"), o("w"));
        assert!("w^".parse::<OrdinalCnf>().is_err());
        assert!("3*2".parse::<OrdinalCnf>().is_err());
    }

    #[test]
    fn log_examples() {
        assert_eq!(log_of(&o("w^2*3+w")).unwrap(), 2);
        assert_eq!(log_of(&o("5")).unwrap(), 0);
        assert!(log_of(&o("0")).is_err());
    }
}
