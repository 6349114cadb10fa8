//! Scattered chains given by terms: finite chains, ω, reversal, finite
//! concatenation and ultimately periodic ω-sums.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::ordinal::{ord_add, ord_mul, OrdinalCnf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("cannot parse chain term: {0}")]
    Parse(String),
    #[error("invalid address {0}")]
    Address(String),
    #[error("{0}")]
    Domain(String),
    #[error("formula outside the synthesized family: {0}")]
    Unresolvable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChainTerm {
    Fin(u64),
    Omega,
    Reverse(Box<ChainTerm>),
    Concat(Vec<ChainTerm>),
    OmegaSum {
        prefix: Vec<ChainTerm>,
        period: Vec<ChainTerm>,
    },
}

/// A point of a term: one step per `Fin`, `Omega`, `Concat` or `OmegaSum`
/// on the way down (`Reverse` takes no step).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Address(pub Vec<u64>);

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "<{}>", parts.join("."))
    }
}

fn flatten(items: Vec<ChainTerm>) -> Vec<ChainTerm> {
    let mut out = Vec::new();
    for t in items {
        match t {
            ChainTerm::Concat(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    out
}

impl ChainTerm {
    pub fn fin(k: u64) -> Self {
        ChainTerm::Fin(k)
    }

    pub fn omega() -> Self {
        ChainTerm::Omega
    }

    pub fn reverse(t: ChainTerm) -> Self {
        match t {
            ChainTerm::Reverse(inner) => *inner,
            other => ChainTerm::Reverse(Box::new(other)),
        }
    }

    /// Nested concatenations are flattened; a single item stands alone.
    pub fn concat(items: Vec<ChainTerm>) -> Self {
        let mut items = flatten(items);
        if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            ChainTerm::Concat(items)
        }
    }

    /// `prefix` then ω copies of `period`; the period must contain a point.
    pub fn omega_sum(prefix: Vec<ChainTerm>, period: Vec<ChainTerm>) -> Result<Self, ChainError> {
        let period = flatten(period);
        if period.iter().all(|t| t.is_empty()) {
            return Err(ChainError::Domain("the period of an ω-sum needs a point".into()));
        }
        Ok(ChainTerm::OmegaSum {
            prefix: flatten(prefix),
            period,
        })
    }

    /// Point count, `None` when infinite.
    pub fn size(&self) -> Option<u64> {
        match self {
            ChainTerm::Fin(k) => Some(*k),
            ChainTerm::Omega | ChainTerm::OmegaSum { .. } => None,
            ChainTerm::Reverse(t) => t.size(),
            ChainTerm::Concat(items) => items.iter().try_fold(0u64, |acc, t| Some(acc + t.size()?)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.size() == Some(0)
    }

    /// Whether the chain order (reversed when `flipped`) is a well order.
    pub fn is_wo(&self, flipped: bool) -> bool {
        match self {
            ChainTerm::Fin(_) => true,
            ChainTerm::Omega => !flipped,
            ChainTerm::Reverse(t) => t.is_wo(!flipped),
            ChainTerm::Concat(items) => items.iter().all(|t| t.is_wo(flipped)),
            ChainTerm::OmegaSum { prefix, period } => {
                !flipped && prefix.iter().chain(period).all(|t| t.is_wo(false))
            }
        }
    }

    /// Structural Hausdorff degree.
    pub fn hdeg(&self) -> usize {
        if self.size().is_some_and(|k| k <= 1) {
            return 0;
        }
        if self.is_wo(false) || self.is_wo(true) {
            return 1;
        }
        match self {
            ChainTerm::Reverse(t) => t.hdeg(),
            ChainTerm::Concat(items) => 1 + items.iter().map(ChainTerm::hdeg).max().unwrap_or(0),
            ChainTerm::OmegaSum { prefix, period } => {
                1 + prefix.iter().chain(period).map(ChainTerm::hdeg).max().unwrap_or(0)
            }
            ChainTerm::Fin(_) | ChainTerm::Omega => unreachable!("well ordered"),
        }
    }

    /// The `i`-th summand of an ω-sum.
    pub fn block<'a>(prefix: &'a [ChainTerm], period: &'a [ChainTerm], i: u64) -> &'a ChainTerm {
        let p = prefix.len() as u64;
        if i < p {
            &prefix[i as usize]
        } else {
            &period[((i - p) % period.len() as u64) as usize]
        }
    }

    /// Checks that `addr` names a point.
    pub fn validate(&self, addr: &Address) -> Result<(), ChainError> {
        fn go(t: &ChainTerm, a: &[u64]) -> bool {
            match (t, a) {
                (ChainTerm::Reverse(x), _) => go(x, a),
                (ChainTerm::Fin(k), [p]) => p < k,
                (ChainTerm::Omega, [_]) => true,
                (ChainTerm::Concat(items), [j, rest @ ..]) => {
                    (*j as usize) < items.len() && go(&items[*j as usize], rest)
                }
                (ChainTerm::OmegaSum { prefix, period }, [i, rest @ ..]) => {
                    go(ChainTerm::block(prefix, period, *i), rest)
                }
                _ => false,
            }
        }
        if go(self, &addr.0) {
            Ok(())
        } else {
            Err(ChainError::Address(format!("{addr} in {self}")))
        }
    }

    /// Chain order on valid addresses.
    pub fn less(&self, x: &Address, y: &Address) -> bool {
        less_at(self, false, &x.0, &y.0)
    }

    /// Order type of the chain order (reversed when `flipped`); `None`
    /// unless that order is a well order.
    pub fn wo_type(&self, flipped: bool) -> Option<OrdinalCnf> {
        match self {
            ChainTerm::Fin(k) => Some(OrdinalCnf::finite(*k)),
            ChainTerm::Omega => (!flipped).then(OrdinalCnf::omega),
            ChainTerm::Reverse(t) => t.wo_type(!flipped),
            ChainTerm::Concat(items) => {
                let mut acc = OrdinalCnf::zero();
                let ordered: Box<dyn Iterator<Item = &ChainTerm>> =
                    if flipped { Box::new(items.iter().rev()) } else { Box::new(items.iter()) };
                for t in ordered {
                    acc = ord_add(&acc, &t.wo_type(flipped)?);
                }
                Some(acc)
            }
            ChainTerm::OmegaSum { prefix, period } => {
                if flipped {
                    return None;
                }
                let head = sum_types(prefix.iter().map(|t| t.wo_type(false)))?;
                let block = sum_types(period.iter().map(|t| t.wo_type(false)))?;
                Some(ord_add(&head, &ord_mul(&block, &OrdinalCnf::omega())))
            }
        }
    }

    /// A random valid address; ω positions and ω-sum blocks are drawn below
    /// `spread`.
    pub fn sample_address(&self, rng: &mut impl Rng, spread: u64) -> Address {
        fn go(t: &ChainTerm, rng: &mut impl Rng, spread: u64, out: &mut Vec<u64>) {
            match t {
                ChainTerm::Reverse(x) => go(x, rng, spread, out),
                ChainTerm::Fin(k) => out.push(rng.gen_range(0..*k)),
                ChainTerm::Omega => out.push(rng.gen_range(0..spread.max(1))),
                ChainTerm::Concat(items) => {
                    let live: Vec<usize> = (0..items.len()).filter(|&j| !items[j].is_empty()).collect();
                    let j = live[rng.gen_range(0..live.len())];
                    out.push(j as u64);
                    go(&items[j], rng, spread, out);
                }
                ChainTerm::OmegaSum { prefix, period } => {
                    let limit = prefix.len() as u64 + spread.max(1) * period.len() as u64;
                    loop {
                        let i = rng.gen_range(0..limit);
                        let b = ChainTerm::block(prefix, period, i);
                        if !b.is_empty() {
                            out.push(i);
                            go(b, rng, spread, out);
                            break;
                        }
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, rng, spread, &mut out);
        Address(out)
    }
}

/// Chain order (reversed when `flipped`) on address suffixes below `t`.
pub(crate) fn less_at(t: &ChainTerm, flipped: bool, a: &[u64], b: &[u64]) -> bool {
    match t {
        ChainTerm::Reverse(inner) => less_at(inner, !flipped, a, b),
        _ if a[0] != b[0] => (a[0] < b[0]) != flipped,
        ChainTerm::Fin(_) | ChainTerm::Omega => false,
        ChainTerm::Concat(items) => less_at(&items[a[0] as usize], flipped, &a[1..], &b[1..]),
        ChainTerm::OmegaSum { prefix, period } => {
            less_at(ChainTerm::block(prefix, period, a[0]), flipped, &a[1..], &b[1..])
        }
    }
}

pub(crate) fn sum_types(items: impl Iterator<Item = Option<OrdinalCnf>>) -> Option<OrdinalCnf> {
    let mut acc = OrdinalCnf::zero();
    for t in items {
        acc = ord_add(&acc, &t?);
    }
    Some(acc)
}

impl fmt::Display for ChainTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |items: &[ChainTerm]| items.iter().map(|t| format!(" {t}")).collect::<String>();
        match self {
            ChainTerm::Fin(k) => write!(f, "(fin {k})"),
            ChainTerm::Omega => f.write_str("omega"),
            ChainTerm::Reverse(t) => write!(f, "(rev {t})"),
            ChainTerm::Concat(items) => write!(f, "(concat{})", list(items)),
            ChainTerm::OmegaSum { prefix, period } => {
                write!(f, "(omegasum (prefix{}) (period{}))", list(prefix), list(period))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn read_sexp(tokens: &[String], pos: &mut usize) -> Result<Sexp, ChainError> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| ChainError::Parse("unexpected end of input".into()))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            while tokens.get(*pos).map(String::as_str) != Some(")") {
                if *pos >= tokens.len() {
                    return Err(ChainError::Parse("missing ')'".into()));
                }
                items.push(read_sexp(tokens, pos)?);
            }
            *pos += 1;
            Ok(Sexp::List(items))
        }
        ")" => Err(ChainError::Parse("unexpected ')'".into())),
        atom => Ok(Sexp::Atom(atom.to_string())),
    }
}

fn to_term(s: &Sexp) -> Result<ChainTerm, ChainError> {
    let bad = |msg: &str| ChainError::Parse(msg.to_string());
    match s {
        Sexp::Atom(a) if a == "omega" => Ok(ChainTerm::Omega),
        Sexp::Atom(a) => Err(bad(&format!("unknown atom '{a}'"))),
        Sexp::List(items) => {
            let Some(Sexp::Atom(head)) = items.first() else {
                return Err(bad("expected a constructor name"));
            };
            let args = &items[1..];
            match (head.as_str(), args) {
                ("fin", [Sexp::Atom(k)]) => Ok(ChainTerm::Fin(k.parse().map_err(|_| bad("bad size"))?)),
                ("rev", [t]) => Ok(ChainTerm::reverse(to_term(t)?)),
                ("concat", ts) => Ok(ChainTerm::concat(ts.iter().map(to_term).collect::<Result<_, _>>()?)),
                ("omegasum", [Sexp::List(pre), Sexp::List(per)]) => {
                    let part = |l: &[Sexp], name: &str| -> Result<Vec<ChainTerm>, ChainError> {
                        match l.first() {
                            Some(Sexp::Atom(h)) if h == name => l[1..].iter().map(to_term).collect(),
                            _ => Err(bad(&format!("expected ({name} ...)"))),
                        }
                    };
                    ChainTerm::omega_sum(part(pre, "prefix")?, part(per, "period")?)
                }
                (h, _) => Err(bad(&format!("bad arguments for '{h}'"))),
            }
        }
    }
}

impl FromStr for ChainTerm {
    type Err = ChainError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<String> = text
            .replace('(', " ( ")
            .replace(')', " ) ")
            .split_whitespace()
            .map(str::to_string)
            .collect();
        let mut pos = 0;
        let s = read_sexp(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(ChainError::Parse("trailing input".into()));
        }
        to_term(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> ChainTerm {
        s.parse().unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(t("(fin 1)").hdeg(), 0);
        assert_eq!(t("omega").hdeg(), 1);
        assert_eq!(t("(rev omega)").hdeg(), 1);
        assert_eq!(t("(omegasum (prefix) (period (rev omega)))").hdeg(), 2);
        assert_eq!(t("(omegasum (prefix) (period omega))").hdeg(), 1);
        assert_eq!(t("(concat omega (rev omega))").hdeg(), 2);
        let three = "(omegasum (prefix) (period (rev (omegasum (prefix) (period (rev omega))))))";
        assert_eq!(t(three).hdeg(), 3);
    }

    #[test]
    fn syntax_roundtrip() {
        for s in ["(fin 3)", "omega", "(rev omega)", "(concat (fin 2) omega)",
                  "(omegasum (prefix (fin 1)) (period (rev omega) (fin 2)))"] {
            assert_eq!(t(s).to_string(), s);
        }
        assert_eq!(t("(rev (rev omega))"), ChainTerm::Omega);
        assert!("(omegasum (prefix) (period (fin 0)))".parse::<ChainTerm>().is_err());
        assert!("(fin)".parse::<ChainTerm>().is_err());
    }

    #[test]
    fn order_on_addresses() {
        let r = t("(rev omega)");
        assert!(r.less(&Address(vec![5]), &Address(vec![2])));
        let s = t("(omegasum (prefix) (period (rev omega)))");
        assert!(s.less(&Address(vec![0, 0]), &Address(vec![1, 7])));
        assert!(s.less(&Address(vec![1, 3]), &Address(vec![1, 2])));
        assert!(s.validate(&Address(vec![4, 9])).is_ok());
        assert!(s.validate(&Address(vec![4])).is_err());
    }

    #[test]
    fn well_order_types() {
        assert_eq!(t("(omegasum (prefix (fin 2)) (period omega))").wo_type(false).unwrap().to_string(), "w^2");
        assert_eq!(t("(concat omega (fin 3))").wo_type(false).unwrap().to_string(), "w + 3");
        assert!(t("(rev omega)").wo_type(false).is_none());
    }
}
