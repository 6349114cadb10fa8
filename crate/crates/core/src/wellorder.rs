//! Definable well orders of scattered chains.
//!
//! For a chain of degree `n` the certificate carries `n-1` parameter sets and
//! a formula `φ_n(X, Y, P1..P{n-1})`. At a sum node of degree `k+1`, `P_k`
//! marks the components with even index; two points are equivalent when no
//! change of `P_k` membership lies between them, distinct classes are
//! compared by `<` or its reverse depending on whether the classes are well
//! ordered, and equivalent points recurse with `φ_k` on their class. At the
//! bottom `φ_1` uses `<` on well-ordered classes and its reverse otherwise.

use rand::rngs::StdRng;
use rand::SeedableRng;

use crate::chain_term::{less_at, sum_types, Address, ChainError, ChainTerm};
use crate::formula::Formula;
use crate::ordinal::{ord_add, ord_mul, OrdinalCnf};

/// Which components of a sum node a parameter marks, by nonempty-component
/// index. `Even` is the synthesized choice; the others exist to corrupt a
/// certificate on purpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamPattern {
    Even,
    Odd,
    Constant(bool),
    /// Even up to index `s`, odd from there on, so components `s-1` and `s`
    /// fall into one run.
    Slip(u64),
}

impl ParamPattern {
    pub fn member(self, c: u64) -> bool {
        match self {
            ParamPattern::Even => c % 2 == 0,
            ParamPattern::Odd => c % 2 == 1,
            ParamPattern::Constant(b) => b,
            ParamPattern::Slip(s) => (c + u64::from(c >= s)) % 2 == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WellOrderCertificate {
    pub degree: usize,
    pub formula: Formula,
    /// One description per parameter `P1..P{n-1}`.
    pub params: Vec<String>,
    pub pattern: ParamPattern,
}

impl WellOrderCertificate {
    pub fn param_count(&self) -> usize {
        self.params.len()
    }

    pub fn with_pattern(mut self, pattern: ParamPattern) -> Self {
        self.pattern = pattern;
        self
    }

    /// Whether the point at `addr` lies in `P_k`.
    pub fn contains(&self, t: &ChainTerm, k: usize, addr: &Address) -> bool {
        let mut node = strip(t, false).0;
        let mut rest: &[u64] = &addr.0;
        loop {
            let d = node.hdeg();
            if d < 2 || rest.is_empty() {
                return false;
            }
            let (child, c) = component(node, rest[0]);
            if d == k + 1 {
                return self.pattern.member(c);
            }
            node = strip(child, false).0;
            rest = &rest[1..];
        }
    }
}

fn strip(t: &ChainTerm, flipped: bool) -> (&ChainTerm, bool) {
    match t {
        ChainTerm::Reverse(x) => strip(x, !flipped),
        other => (other, flipped),
    }
}

/// Child term at step `j` of a sum node, with its nonempty-component index.
fn component(t: &ChainTerm, j: u64) -> (&ChainTerm, u64) {
    match t {
        ChainTerm::Concat(items) => {
            let c = items[..j as usize].iter().filter(|x| !x.is_empty()).count() as u64;
            (&items[j as usize], c)
        }
        ChainTerm::OmegaSum { prefix, period } => {
            let live_pre = prefix.iter().filter(|x| !x.is_empty()).count() as u64;
            let live_per = period.iter().filter(|x| !x.is_empty()).count() as u64;
            let p = prefix.len() as u64;
            let c = if j < p {
                prefix[..j as usize].iter().filter(|x| !x.is_empty()).count() as u64
            } else {
                let q = (j - p) / period.len() as u64;
                let r = ((j - p) % period.len() as u64) as usize;
                live_pre + q * live_per + period[..r].iter().filter(|x| !x.is_empty()).count() as u64
            };
            (ChainTerm::block(prefix, period, j), c)
        }
        _ => unreachable!("only sums have components"),
    }
}

/// Number of nonempty components; `None` when infinite.
fn live_count(t: &ChainTerm) -> Option<u64> {
    match t {
        ChainTerm::Concat(items) => Some(items.iter().filter(|x| !x.is_empty()).count() as u64),
        _ => None,
    }
}

fn live_items(t: &ChainTerm) -> Vec<&ChainTerm> {
    match t {
        ChainTerm::Concat(items) => items.iter().filter(|x| !x.is_empty()).collect(),
        ChainTerm::OmegaSum { prefix, period } => {
            prefix.iter().chain(period).filter(|x| !x.is_empty()).collect()
        }
        _ => Vec::new(),
    }
}

/// The nonempty component with index `c`.
fn live_at(t: &ChainTerm, c: u64) -> &ChainTerm {
    match t {
        ChainTerm::Concat(items) => items.iter().filter(|x| !x.is_empty()).nth(c as usize).expect("in range"),
        ChainTerm::OmegaSum { prefix, period } => {
            let pre: Vec<&ChainTerm> = prefix.iter().filter(|x| !x.is_empty()).collect();
            let per: Vec<&ChainTerm> = period.iter().filter(|x| !x.is_empty()).collect();
            match pre.get(c as usize) {
                Some(x) => x,
                None => per[(c as usize - pre.len()) % per.len()],
            }
        }
        _ => unreachable!("only sums have components"),
    }
}

/// Builds the certificate for a chain of positive degree.
pub fn synthesize_wellorder(t: &ChainTerm) -> Result<WellOrderCertificate, ChainError> {
    let n = t.hdeg();
    if n == 0 {
        return Err(ChainError::Domain("a chain of degree 0 needs no well order".into()));
    }
    let formula = if n == 1 {
        if t.is_wo(false) {
            Formula::less("X", "Y")
        } else {
            Formula::less("Y", "X")
        }
    } else {
        let mut g = Gen::default();
        let z = g.fresh("Z");
        let u = g.fresh("U");
        Formula::exists(
            z.clone(),
            Formula::and(Formula::forall(u.clone(), Formula::sub(u, z.clone())), g.phi(n, "X", "Y", &z)),
        )
    };
    let params = (1..n)
        .map(|k| format!("P{k}: components with even index of every sum node of degree {}", k + 1))
        .collect();
    Ok(WellOrderCertificate {
        degree: n,
        formula,
        params,
        pattern: ParamPattern::Even,
    })
}

#[derive(Default)]
struct Gen {
    counter: usize,
}

impl Gen {
    fn fresh(&mut self, stem: &str) -> String {
        self.counter += 1;
        format!("{stem}{}", self.counter)
    }

    /// Every nonempty subset of `z` satisfying `filter(S)` has a least point.
    fn least_exists(&mut self, z: &str, filter: impl FnOnce(&mut Self, &str) -> Formula) -> Formula {
        let s = self.fresh("S");
        let m = self.fresh("M");
        let n = self.fresh("N");
        let cond = filter(self, &s);
        let mut guard = vec![Formula::sub(s.clone(), z), Formula::not(Formula::empty(s.clone()))];
        if cond != Formula::True {
            guard.push(cond);
        }
        let least = Formula::exists(
            m.clone(),
            Formula::conj([
                Formula::sing(m.clone()),
                Formula::sub(m.clone(), s.clone()),
                Formula::forall(
                    n.clone(),
                    Formula::implies(
                        Formula::and(Formula::sing(n.clone()), Formula::sub(n.clone(), s.clone())),
                        Formula::or(Formula::eq(n.clone(), m.clone()), Formula::less(m, n)),
                    ),
                ),
            ]),
        );
        Formula::forall(
            s.clone(),
            Formula::implies(Formula::conj(guard), least),
        )
    }

    fn wo(&mut self, z: &str) -> Formula {
        self.least_exists(z, |_, _| Formula::True)
    }

    fn sim(&mut self, x: &str, y: &str, z: &str, p: &str) -> Formula {
        let u = self.fresh("U");
        let between = Formula::or(
            Formula::and(Formula::less(x, u.clone()), Formula::less(u.clone(), y)),
            Formula::and(Formula::less(y, u.clone()), Formula::less(u.clone(), x)),
        );
        Formula::conj([
            Formula::sub(x, z),
            Formula::sub(y, z),
            Formula::iff(Formula::sub(x, p), Formula::sub(y, p)),
            Formula::forall(
                u.clone(),
                Formula::implies(
                    Formula::conj([Formula::sing(u.clone()), Formula::sub(u.clone(), z), between]),
                    Formula::iff(Formula::sub(u, p), Formula::sub(x, p)),
                ),
            ),
        ])
    }

    fn idx_wo(&mut self, z: &str, p: &str) -> Formula {
        self.least_exists(z, |g, s| {
            let u = g.fresh("U");
            let v = g.fresh("V");
            let apart = Formula::not(g.sim(&u, &v, z, p));
            Formula::forall(
                u.clone(),
                Formula::forall(
                    v.clone(),
                    Formula::implies(
                        Formula::conj([
                            Formula::sing(u.clone()),
                            Formula::sing(v.clone()),
                            Formula::sub(u.clone(), s),
                            Formula::sub(v.clone(), s),
                            Formula::not(Formula::eq(u, v)),
                        ]),
                        apart,
                    ),
                ),
            )
        })
    }

    fn directed(test: Formula, x: &str, y: &str) -> Formula {
        Formula::or(
            Formula::and(test.clone(), Formula::less(x, y)),
            Formula::and(Formula::not(test), Formula::less(y, x)),
        )
    }

    fn phi(&mut self, k: usize, x: &str, y: &str, z: &str) -> Formula {
        if k == 1 {
            let wo = self.wo(z);
            return Self::directed(wo, x, y);
        }
        let p = format!("P{}", k - 1);
        let w = self.fresh("W");
        let u = self.fresh("U");
        let class = Formula::and(
            Formula::sub(w.clone(), z),
            Formula::forall(
                u.clone(),
                Formula::implies(
                    Formula::sing(u.clone()),
                    Formula::iff(Formula::sub(u.clone(), w.clone()), self.sim(x, &u, z, &p)),
                ),
            ),
        );
        let inner = self.phi(k - 1, x, y, &w);
        let idx = self.idx_wo(z, &p);
        Formula::or(
            Formula::and(Formula::not(self.sim(x, y, z, &p)), Self::directed(idx, x, y)),
            Formula::and(self.sim(x, y, z, &p), Formula::exists(w, Formula::and(class, inner))),
        )
    }
}

/// Sum of `g(block b)` over blocks `b < i` of an ω-sum.
fn blocks_before(
    prefix: &[ChainTerm],
    period: &[ChainTerm],
    i: u64,
    g: impl Fn(&ChainTerm) -> OrdinalCnf,
) -> OrdinalCnf {
    let p = prefix.len() as u64;
    let total = |items: &[ChainTerm]| items.iter().fold(OrdinalCnf::zero(), |acc, t| ord_add(&acc, &g(t)));
    if i <= p {
        return total(&prefix[..i as usize]);
    }
    let q = (i - p) / period.len() as u64;
    let r = ((i - p) % period.len() as u64) as usize;
    let full = ord_mul(&total(period), &OrdinalCnf::finite(q));
    ord_add(&ord_add(&total(prefix), &full), &total(&period[..r]))
}

/// Items of a concatenation in chain order.
fn chain_ordered(items: &[ChainTerm], flipped: bool) -> Vec<(usize, &ChainTerm)> {
    let mut v: Vec<(usize, &ChainTerm)> = items.iter().enumerate().collect();
    if flipped {
        v.reverse();
    }
    v
}

/// Position in the chain order (reversed when `flipped`), which must be a
/// well order.
fn wo_rank(t: &ChainTerm, flipped: bool, a: &[u64]) -> OrdinalCnf {
    match t {
        ChainTerm::Reverse(x) => wo_rank(x, !flipped, a),
        ChainTerm::Fin(k) => OrdinalCnf::finite(if flipped { k - 1 - a[0] } else { a[0] }),
        ChainTerm::Omega => OrdinalCnf::finite(a[0]),
        ChainTerm::Concat(items) => {
            let mut acc = OrdinalCnf::zero();
            for (j, item) in chain_ordered(items, flipped) {
                if j as u64 == a[0] {
                    return ord_add(&acc, &wo_rank(item, flipped, &a[1..]));
                }
                acc = ord_add(&acc, &item.wo_type(flipped).expect("well ordered"));
            }
            unreachable!("valid address")
        }
        ChainTerm::OmegaSum { prefix, period } => {
            let before = blocks_before(prefix, period, a[0], |b| b.wo_type(false).expect("well ordered"));
            ord_add(&before, &wo_rank(ChainTerm::block(prefix, period, a[0]), false, &a[1..]))
        }
    }
}

/// Order type of the intended well order of `t`.
pub fn intended_type(t: &ChainTerm) -> OrdinalCnf {
    otp(t, false)
}

fn otp(t: &ChainTerm, flipped: bool) -> OrdinalCnf {
    if let ChainTerm::Reverse(x) = t {
        return otp(x, !flipped);
    }
    if t.hdeg() <= 1 {
        return t
            .wo_type(flipped)
            .or_else(|| t.wo_type(!flipped))
            .expect("degree at most 1");
    }
    match t {
        ChainTerm::Concat(items) => chain_ordered(items, flipped)
            .into_iter()
            .fold(OrdinalCnf::zero(), |acc, (_, x)| ord_add(&acc, &otp(x, flipped))),
        ChainTerm::OmegaSum { prefix, period } => {
            let head = sum_types(prefix.iter().map(|x| Some(otp(x, flipped)))).expect("total");
            let block = sum_types(period.iter().map(|x| Some(otp(x, flipped)))).expect("total");
            ord_add(&head, &ord_mul(&block, &OrdinalCnf::omega()))
        }
        _ => unreachable!("degree at least 2"),
    }
}

/// Position of `addr` in the intended well order of `t`.
pub fn rank(t: &ChainTerm, addr: &Address) -> Result<OrdinalCnf, ChainError> {
    t.validate(addr)?;
    Ok(rank_at(t, false, &addr.0))
}

fn rank_at(t: &ChainTerm, flipped: bool, a: &[u64]) -> OrdinalCnf {
    if let ChainTerm::Reverse(x) = t {
        return rank_at(x, !flipped, a);
    }
    if t.hdeg() <= 1 {
        return if t.is_wo(flipped) { wo_rank(t, flipped, a) } else { wo_rank(t, !flipped, a) };
    }
    match t {
        ChainTerm::Concat(items) => {
            let mut acc = OrdinalCnf::zero();
            for (j, item) in chain_ordered(items, flipped) {
                if j as u64 == a[0] {
                    return ord_add(&acc, &rank_at(item, flipped, &a[1..]));
                }
                acc = ord_add(&acc, &otp(item, flipped));
            }
            unreachable!("valid address")
        }
        // blocks in increasing index: the chain order when ω-indexed, its
        // reverse when the reversal makes the index ω*
        ChainTerm::OmegaSum { prefix, period } => {
            let before = blocks_before(prefix, period, a[0], |b| otp(b, flipped));
            ord_add(&before, &rank_at(ChainTerm::block(prefix, period, a[0]), flipped, &a[1..]))
        }
        _ => unreachable!("degree at least 2"),
    }
}

/// The class on which a formula of the family is evaluated: a whole node,
/// or a run of consecutive nonempty components `lo..=hi` of a sum node.
#[derive(Clone, Copy)]
enum Domain<'a> {
    Full(&'a ChainTerm, bool),
    Run(&'a ChainTerm, bool, u64, Option<u64>),
}

/// Evaluates `φ_n(x, y)` of the certificate on `t`.
pub fn evaluate(
    cert: &WellOrderCertificate,
    t: &ChainTerm,
    x: &Address,
    y: &Address,
) -> Result<bool, ChainError> {
    t.validate(x)?;
    t.validate(y)?;
    if cert.degree == 1 {
        let wo = t.is_wo(false);
        return Ok(if wo { t.less(x, y) } else { t.less(y, x) });
    }
    let (node, flipped) = strip(t, false);
    eval_family(cert.pattern, cert.degree, Domain::Full(node, flipped), &x.0, &y.0)
}

fn directed(wo: bool, t: &ChainTerm, flipped: bool, x: &[u64], y: &[u64]) -> bool {
    if wo {
        less_at(t, flipped, x, y)
    } else {
        less_at(t, flipped, y, x)
    }
}

fn eval_family(
    pattern: ParamPattern,
    level: usize,
    dom: Domain<'_>,
    x: &[u64],
    y: &[u64],
) -> Result<bool, ChainError> {
    match dom {
        Domain::Full(node, flipped) => {
            let (node, flipped) = strip(node, flipped);
            if level == 1 {
                return Ok(directed(node.is_wo(flipped), node, flipped, x, y));
            }
            let d = node.hdeg();
            if d < level {
                return eval_family(pattern, level - 1, Domain::Full(node, flipped), x, y);
            }
            if d > level {
                return Err(ChainError::Unresolvable(format!(
                    "degree-{d} node met at formula level {level}"
                )));
            }
            let (cx_term, cx) = component(node, x[0]);
            let (_, cy) = component(node, y[0]);
            let (lo, hi) = run_of(pattern, node, cx);
            let same = cy >= lo && hi.is_none_or(|h| cy <= h);
            if !same {
                let finite_runs = live_count(node).is_some() || matches!(pattern, ParamPattern::Constant(_));
                let idx_wo = !flipped || finite_runs;
                return Ok(directed(idx_wo, node, flipped, x, y));
            }
            if hi == Some(lo) {
                eval_family(pattern, level - 1, Domain::Full(cx_term, flipped), &x[1..], &y[1..])
            } else {
                eval_family(pattern, level - 1, Domain::Run(node, flipped, lo, hi), x, y)
            }
        }
        Domain::Run(node, flipped, lo, hi) => {
            let in_run: Vec<&ChainTerm> = match hi {
                Some(h) => (lo..=h).map(|c| live_at(node, c)).collect(),
                None => live_items(node),
            };
            if level == 1 {
                let wo = in_run.iter().all(|c| c.is_wo(flipped)) && (hi.is_some() || !flipped);
                return Ok(directed(wo, node, flipped, x, y));
            }
            if in_run.iter().any(|c| c.hdeg() >= level) {
                return Err(ChainError::Unresolvable(format!(
                    "parameter P{} would split a run of several components",
                    level - 1
                )));
            }
            eval_family(pattern, level - 1, dom, x, y)
        }
    }
}

/// Maximal run of equal parameter membership around component `c`.
fn run_of(pattern: ParamPattern, node: &ChainTerm, c: u64) -> (u64, Option<u64>) {
    let count = live_count(node);
    let m = pattern.member(c);
    let mut lo = c;
    while lo > 0 && pattern.member(lo - 1) == m {
        lo -= 1;
    }
    if let ParamPattern::Constant(_) = pattern {
        return (lo, count.map(|n| n - 1));
    }
    let mut hi = c;
    while count.is_none_or(|n| hi + 1 < n) && pattern.member(hi + 1) == m {
        hi += 1;
    }
    (lo, Some(hi))
}

/// Outcome of checking a certificate against the rank oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub pairs: usize,
    pub passed: bool,
    /// `(x, y, φ(x,y), rank x, rank y)` for the first disagreement.
    pub counterexample: Option<(Address, Address, bool, OrdinalCnf, OrdinalCnf)>,
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.counterexample {
            None => write!(
                f,
                "pass: formula agrees with rank order on {} sampled pairs (well-foundedness follows from ordinal ranks)",
                self.pairs
            ),
            Some((x, y, phi, rx, ry)) => write!(
                f,
                "fail: phi({x},{y}) = {phi} but rank {rx} vs {ry}"
            ),
        }
    }
}

/// Samples `samples` pairs of distinct points and checks
/// `φ(x,y) ⟺ rank(x) < rank(y)`.
pub fn verify_wellorder(
    cert: &WellOrderCertificate,
    t: &ChainTerm,
    samples: usize,
    seed: u64,
) -> Result<VerifyReport, ChainError> {
    let mut rng = StdRng::seed_from_u64(seed);
    if t.size().is_some_and(|k| k < 2) {
        return Ok(VerifyReport { pairs: 0, passed: true, counterexample: None });
    }
    let mut pairs = 0;
    while pairs < samples {
        let x = t.sample_address(&mut rng, 12);
        let y = t.sample_address(&mut rng, 12);
        if x == y {
            continue;
        }
        pairs += 1;
        let phi = evaluate(cert, t, &x, &y)?;
        let (rx, ry) = (rank(t, &x)?, rank(t, &y)?);
        if rx == ry || phi != (rx < ry) {
            return Ok(VerifyReport {
                pairs,
                passed: false,
                counterexample: Some((x, y, phi, rx, ry)),
            });
        }
    }
    Ok(VerifyReport { pairs, passed: true, counterexample: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(s: &str) -> ChainTerm {
        s.parse().unwrap()
    }

    fn o(s: &str) -> OrdinalCnf {
        s.parse().unwrap()
    }

    #[test]
    fn degree_one_formulas() {
        let c = synthesize_wellorder(&term("omega")).unwrap();
        assert_eq!(c.formula.to_string(), "X < Y");
        assert_eq!(c.param_count(), 0);
        let c = synthesize_wellorder(&term("(rev omega)")).unwrap();
        assert_eq!(c.formula.to_string(), "Y < X");
        assert!(synthesize_wellorder(&term("(fin 1)")).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&term("omega"), &Address(vec![5])).unwrap(), o("5"));
        assert_eq!(rank(&term("(rev omega)"), &Address(vec![7])).unwrap(), o("7"));
        let zeta = term("(concat (rev omega) omega)");
        assert_eq!(intended_type(&zeta), o("w*2"));
        assert_eq!(rank(&zeta, &Address(vec![1, 3])).unwrap(), o("w+3"));
        let t = term("(omegasum (prefix) (period (rev omega)))");
        assert_eq!(intended_type(&t), o("w^2"));
        assert_eq!(rank(&t, &Address(vec![2, 4])).unwrap(), o("w*2+4"));
        assert!(rank(&t, &Address(vec![2])).is_err());
    }

    #[test]
    fn degree_two_passes_and_mutations_fail() {
        let t = term("(omegasum (prefix) (period (rev omega)))");
        let c = synthesize_wellorder(&t).unwrap();
        assert_eq!(c.param_count(), 1);
        let r = verify_wellorder(&c, &t, 500, 1).unwrap();
        assert!(r.passed, "{r}");
        assert_eq!(r.pairs, 500);
        for p in [ParamPattern::Constant(false), ParamPattern::Slip(3)] {
            let r = verify_wellorder(&c.clone().with_pattern(p), &t, 500, 1).unwrap();
            assert!(!r.passed, "{p:?}");
        }
        // swapping the two colours changes nothing
        let r = verify_wellorder(&c.with_pattern(ParamPattern::Odd), &t, 500, 1).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn higher_degrees_pass() {
        for s in [
            "(concat (rev omega) omega)",
            "(rev (omegasum (prefix (fin 2)) (period (rev omega) (fin 3))))",
            "(omegasum (prefix) (period (concat (rev omega) omega)))",
            "(omegasum (prefix) (period (rev (omegasum (prefix) (period (rev omega))))))",
            "(rev (omegasum (prefix (fin 1)) (period (omegasum (prefix) (period (rev omega))) (fin 2))))",
            "(concat (omegasum (prefix) (period (rev omega))) (rev (omegasum (prefix) (period omega (rev omega)))))",
        ] {
            let t = term(s);
            let c = synthesize_wellorder(&t).unwrap();
            assert_eq!(c.param_count(), t.hdeg() - 1, "{s}");
            let r = verify_wellorder(&c, &t, 500, 7).unwrap();
            assert!(r.passed, "{s}: {r}");
        }
    }

    #[test]
    fn formula_text_parses_back() {
        let t = term("(omegasum (prefix) (period (rev (omegasum (prefix) (period (rev omega))))))");
        let c = synthesize_wellorder(&t).unwrap();
        assert_eq!(t.hdeg(), 3);
        let back = crate::formula::parse(&c.formula.to_string()).unwrap();
        assert_eq!(back, c.formula);
        let mut free = c.formula.free_vars().into_iter().collect::<Vec<_>>();
        free.sort();
        assert_eq!(free, ["P1", "P2", "X", "Y"]);
    }

    #[test]
    fn parameter_membership() {
        let t = term("(omegasum (prefix) (period (rev omega)))");
        let c = synthesize_wellorder(&t).unwrap();
        assert!(c.contains(&t, 1, &Address(vec![0, 3])));
        assert!(!c.contains(&t, 1, &Address(vec![1, 3])));
    }
}
