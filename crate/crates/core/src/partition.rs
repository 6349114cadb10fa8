//! Rearranging an ordinal by a partition into interval classes, the
//! decomposition search, and theories of ordinals.

use std::collections::HashMap;
use std::fmt;

use crate::composition::{add, omega_power};
use crate::eval::{empty_theory, eval_theory};
use crate::ordinal::{ord_add, ord_left_sub, OrdinalCnf, OrdinalError};
use crate::structure::FiniteStructure;
use crate::theory::{Budget, Theory};

/// Half-open interval `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    pub start: OrdinalCnf,
    pub end: OrdinalCnf,
}

impl Interval {
    pub fn new(start: OrdinalCnf, end: OrdinalCnf) -> Self {
        Interval { start, end }
    }

    /// Order type of the interval.
    pub fn length(&self) -> OrdinalCnf {
        ord_left_sub(&self.start, &self.end).unwrap_or_default()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// A partition of `alpha` into ordered classes of intervals. Points of an
/// earlier class precede points of a later one; inside a class the ordinal
/// order is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalPartition {
    pub alpha: OrdinalCnf,
    pub classes: Vec<Vec<Interval>>,
}

impl IntervalPartition {
    pub fn new(alpha: OrdinalCnf, classes: Vec<Vec<Interval>>) -> Result<Self, OrdinalError> {
        let p = IntervalPartition { alpha, classes };
        p.validate()?;
        Ok(p)
    }

    /// Intervals nonempty and inside `alpha`, pairwise disjoint, covering.
    pub fn validate(&self) -> Result<(), OrdinalError> {
        let mut all: Vec<&Interval> = self.classes.iter().flatten().collect();
        for iv in &all {
            if iv.start >= iv.end || iv.end > self.alpha {
                return Err(OrdinalError::Domain(format!(
                    "interval {iv} is empty or leaves [0, {})",
                    self.alpha
                )));
            }
        }
        all.sort_by(|a, b| a.start.cmp(&b.start));
        let mut cursor = OrdinalCnf::zero();
        for iv in all {
            match iv.start.cmp(&cursor) {
                std::cmp::Ordering::Less => {
                    return Err(OrdinalError::Domain(format!("interval {iv} overlaps another")))
                }
                std::cmp::Ordering::Greater => {
                    return Err(OrdinalError::Domain(format!("[{cursor}, {}) is not covered", iv.start)))
                }
                std::cmp::Ordering::Equal => cursor = iv.end.clone(),
            }
        }
        if cursor != self.alpha {
            return Err(OrdinalError::Domain(format!("[{cursor}, {}) is not covered", self.alpha)));
        }
        Ok(())
    }

    /// Parses classes separated by `;`, e.g. `[w, w+1) ; [0, w)`.
    pub fn parse(alpha: OrdinalCnf, text: &str) -> Result<Self, OrdinalError> {
        let fail = |msg: String| OrdinalError::Parse {
            text: text.to_string(),
            msg,
        };
        let mut classes = Vec::new();
        for class in text.split(';') {
            let mut ivs = Vec::new();
            let mut rest = class.trim();
            while !rest.is_empty() {
                let body = rest
                    .strip_prefix('[')
                    .ok_or_else(|| fail(format!("expected '[' at '{rest}'")))?;
                let close = body.find(')').ok_or_else(|| fail("missing ')'".into()))?;
                let (a, b) = body[..close]
                    .split_once(',')
                    .ok_or_else(|| fail("interval needs two endpoints".into()))?;
                ivs.push(Interval::new(a.parse()?, b.parse()?));
                rest = body[close + 1..].trim_start_matches([' ', ',']).trim();
            }
            classes.push(ivs);
        }
        Self::new(alpha, classes)
    }
}

impl fmt::Display for IntervalPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes: Vec<String> = self
            .classes
            .iter()
            .map(|c| c.iter().map(|iv| iv.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        f.write_str(&classes.join(" ; "))
    }
}

fn class_type(class: &[Interval]) -> OrdinalCnf {
    let mut ivs: Vec<&Interval> = class.iter().collect();
    ivs.sort_by(|a, b| a.start.cmp(&b.start));
    ivs.iter().fold(OrdinalCnf::zero(), |acc, iv| ord_add(&acc, &iv.length()))
}

/// Order type of the rearranged ordinal.
pub fn partition_order_type(p: &IntervalPartition) -> Result<OrdinalCnf, OrdinalError> {
    p.validate()?;
    Ok(p.classes.iter().fold(OrdinalCnf::zero(), |acc, c| ord_add(&acc, &class_type(c))))
}

/// Where each interval lands in the rearrangement: `(source, offset)`.
fn placement(p: &IntervalPartition) -> Vec<(Interval, OrdinalCnf)> {
    let mut out = Vec::new();
    let mut offset = OrdinalCnf::zero();
    for class in &p.classes {
        let mut ivs: Vec<&Interval> = class.iter().collect();
        ivs.sort_by(|a, b| a.start.cmp(&b.start));
        for iv in ivs {
            out.push((iv.clone(), offset.clone()));
            offset = ord_add(&offset, &iv.length());
        }
    }
    out
}

/// Pulls a partition `q` of the rearranged ordinal back through `p`,
/// giving one partition of `p.alpha` whose order type is that of `q`.
pub fn compose_partitions(
    p: &IntervalPartition,
    q: &IntervalPartition,
) -> Result<IntervalPartition, OrdinalError> {
    if partition_order_type(p)? != q.alpha {
        return Err(OrdinalError::Domain(
            "second partition is not over the first one's order type".into(),
        ));
    }
    let placed = placement(p);
    let mut classes = Vec::new();
    for class in &q.classes {
        let mut ivs: Vec<&Interval> = class.iter().collect();
        ivs.sort_by(|a, b| a.start.cmp(&b.start));
        let mut pieces: Vec<(OrdinalCnf, Interval)> = Vec::new();
        for target in ivs {
            for (src, offset) in &placed {
                let image_end = ord_add(offset, &src.length());
                let lo = std::cmp::max(offset, &target.start).clone();
                let hi = std::cmp::min(&image_end, &target.end).clone();
                if lo < hi {
                    let a = ord_add(&src.start, &ord_left_sub(offset, &lo)?);
                    let b = ord_add(&src.start, &ord_left_sub(offset, &hi)?);
                    pieces.push((lo, Interval::new(a, b)));
                }
            }
        }
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        classes.extend(pieces.into_iter().map(|(_, iv)| vec![iv]));
    }
    IntervalPartition::new(p.alpha.clone(), classes)
}

/// Searches `γ1 + γ2 = a` and `γ2 + γ1 = b` over `γ1` with exponents up to
/// the degree of `a` and coefficients up to `bound`, in increasing order of
/// `γ1`.
pub fn decomposition_search(
    a: &OrdinalCnf,
    b: &OrdinalCnf,
    bound: u64,
) -> Option<(OrdinalCnf, OrdinalCnf)> {
    let d = a.degree().unwrap_or(0);
    let width = d as usize + 1;
    // coefficient vector indexed from the top exponent down, counted like an odometer
    let mut coefs = vec![0u64; width];
    loop {
        let terms = coefs
            .iter()
            .enumerate()
            .map(|(i, &c)| (d - i as u32, c))
            .collect();
        let g1 = OrdinalCnf::from_terms(terms).expect("decreasing exponents");
        if g1 <= *a {
            let g2 = ord_left_sub(&g1, a).expect("g1 <= a");
            if ord_add(&g2, &g1) == *b {
                return Some((g1, g2));
            }
        }
        let mut k = width;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if coefs[k] < bound {
                coefs[k] += 1;
                coefs[k + 1..].iter_mut().for_each(|c| *c = 0);
                break;
            }
        }
    }
}

/// Default coefficient bound: one more than the largest coefficient of
/// either argument.
pub fn default_bound(a: &OrdinalCnf, b: &OrdinalCnf) -> u64 {
    a.max_coefficient().max(b.max_coefficient()) + 1
}

/// `Th^n(a)` with no parameters.
pub fn theory_of_ordinal(a: &OrdinalCnf, n: usize, budget: &Budget) -> Result<Theory, OrdinalError> {
    let mut powers: HashMap<u32, Theory> = HashMap::new();
    let point = eval_theory(&FiniteStructure::chain(1)?, &[], n, budget)?;
    let mut power = |k: u32| -> Result<Theory, OrdinalError> {
        let mut t = point.clone();
        for e in 1..=k {
            if let Some(p) = powers.get(&e) {
                t = p.clone();
                continue;
            }
            t = omega_power(&t, budget)?;
            powers.insert(e, t.clone());
        }
        Ok(t)
    };
    let mut acc = empty_theory(n, 0);
    for &(e, c) in a.terms() {
        acc = add(&acc, &times(&power(e)?, c)?)?;
    }
    Ok(acc)
}

/// `t + t + ... + t` (`c` copies), by doubling.
fn times(t: &Theory, c: u64) -> Result<Theory, OrdinalError> {
    let mut acc = empty_theory(t.level(), t.arity());
    let mut base = t.clone();
    let mut c = c;
    while c > 0 {
        if c & 1 == 1 {
            acc = add(&acc, &base)?;
        }
        base = add(&base, &base)?;
        c >>= 1;
    }
    Ok(acc)
}
