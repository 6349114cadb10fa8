//! Hereditarily finite n-theories, interned.
//!
//! A level-0 theory over `l` variables is a truth assignment to the atoms
//! `sing(Xi)`, `empty(Xi)`, `Xi sub Xj` and `Xi < Xj`. A level-(n+1) theory
//! over `l` variables is the set of level-n theories over `l+1` variables
//! obtained by letting the last variable range over all subsets.
//!
//! Every [`Theory`] is hash-consed: structurally equal theories share one
//! allocation and one id, so equality and hashing are O(1).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("arity or level mismatch: {0}")]
    Arity(String),
    #[error("coherence violation: {0}")]
    Coherence(String),
    #[error("resource limit exceeded: {0}")]
    Budget(String),
    #[error("{0}")]
    Domain(String),
    #[error("malformed theory text: {0}")]
    Syntax(String),
}

/// Bound on brute-force work. `limit` caps the number of leaves in any
/// exhaustive enumeration and the size of any generated closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub limit: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { limit: 1 << 26 }
    }
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit }
    }

    /// Fails unless `2^e` fits the budget.
    pub fn check_exponent(&self, e: usize) -> Result<(), TheoryError> {
        if e >= 63 || (1u64 << e) > self.limit {
            Err(TheoryError::Budget(format!(
                "2^{e} leaves exceed the budget of {}",
                self.limit
            )))
        } else {
            Ok(())
        }
    }

    pub fn check_count(&self, what: &str, n: usize) -> Result<(), TheoryError> {
        if n as u64 > self.limit {
            Err(TheoryError::Budget(format!(
                "{what} reached {n}, over the budget of {}",
                self.limit
            )))
        } else {
            Ok(())
        }
    }
}

/// Truth assignment to the level-0 atoms over `arity` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AtomType {
    arity: usize,
    bits: Vec<u64>,
}

impl AtomType {
    /// All atoms false except the reflexive inclusions.
    pub fn new(arity: usize) -> Self {
        let n = 2 * arity + 2 * arity * arity;
        let mut t = AtomType {
            arity,
            bits: vec![0; n.div_ceil(64).max(1)],
        };
        for i in 0..arity {
            t.set_sub(i, i, true);
        }
        t
    }

    /// The type of `arity` empty sets.
    pub fn all_empty(arity: usize) -> Self {
        let mut t = AtomType::new(arity);
        for i in 0..arity {
            t.set_empty(i, true);
            for j in 0..arity {
                t.set_sub(i, j, true);
            }
        }
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    fn get(&self, k: usize) -> bool {
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    fn put(&mut self, k: usize, v: bool) {
        if v {
            self.bits[k / 64] |= 1 << (k % 64);
        } else {
            self.bits[k / 64] &= !(1 << (k % 64));
        }
    }

    fn sub_index(&self, i: usize, j: usize) -> usize {
        2 * self.arity + i * self.arity + j
    }

    fn lt_index(&self, i: usize, j: usize) -> usize {
        2 * self.arity + self.arity * self.arity + i * self.arity + j
    }

    pub fn sing(&self, i: usize) -> bool {
        self.get(i)
    }

    pub fn empty(&self, i: usize) -> bool {
        self.get(self.arity + i)
    }

    pub fn sub(&self, i: usize, j: usize) -> bool {
        self.get(self.sub_index(i, j))
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.get(self.lt_index(i, j))
    }

    pub fn eq(&self, i: usize, j: usize) -> bool {
        self.sub(i, j) && self.sub(j, i)
    }

    pub fn set_sing(&mut self, i: usize, v: bool) {
        self.put(i, v)
    }

    pub fn set_empty(&mut self, i: usize, v: bool) {
        self.put(self.arity + i, v)
    }

    pub fn set_sub(&mut self, i: usize, j: usize, v: bool) {
        let k = self.sub_index(i, j);
        self.put(k, v)
    }

    pub fn set_lt(&mut self, i: usize, j: usize, v: bool) {
        let k = self.lt_index(i, j);
        self.put(k, v)
    }

    /// The forced facts every realizable assignment obeys.
    pub fn respects_forced_facts(&self) -> bool {
        let l = self.arity;
        (0..l).all(|i| {
            !(self.sing(i) && self.empty(i))
                && self.sub(i, i)
                && !self.lt(i, i)
                && (0..l).all(|j| !self.lt(i, j) || (self.sing(i) && self.sing(j)))
        })
    }

    /// Keeps only the variables in `keep`, in the given order.
    pub fn select(&self, keep: &[usize]) -> AtomType {
        let mut t = AtomType::new(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            t.set_sing(a, self.sing(i));
            t.set_empty(a, self.empty(i));
            for (b, &j) in keep.iter().enumerate() {
                t.set_sub(a, b, self.sub(i, j));
                t.set_lt(a, b, self.lt(i, j));
            }
        }
        t
    }

    /// Literals in display form: `sing(X0)`, `~empty(X1)`, `sub(X0,X1)`, ...
    pub fn literals(&self) -> Vec<(bool, String)> {
        let x = crate::formula::positional_name;
        let l = self.arity;
        let mut out = Vec::new();
        for i in 0..l {
            out.push((self.sing(i), format!("sing({})", x(i))));
            out.push((self.empty(i), format!("empty({})", x(i))));
        }
        for i in 0..l {
            for j in 0..l {
                if i != j {
                    out.push((self.sub(i, j), format!("sub({},{})", x(i), x(j))));
                    out.push((self.lt(i, j), format!("lt({},{})", x(i), x(j))));
                }
                if i < j {
                    out.push((self.eq(i, j), format!("eq({},{})", x(i), x(j))));
                }
            }
        }
        out
    }
}

#[derive(Debug)]
enum Payload {
    Atoms(AtomType),
    Set(Vec<Theory>),
}

#[derive(Debug)]
struct Node {
    id: u32,
    level: usize,
    arity: usize,
    payload: Payload,
}

/// An interned n-theory.
#[derive(Clone)]
pub struct Theory(Arc<Node>);

#[derive(Hash, PartialEq, Eq)]
enum Key {
    Atoms(AtomType),
    Set(usize, usize, Vec<u32>),
}

fn interner() -> &'static DashMap<Key, Theory> {
    static TABLE: OnceLock<DashMap<Key, Theory>> = OnceLock::new();
    TABLE.get_or_init(DashMap::new)
}

static NEXT_ID: AtomicU32 = AtomicU32::new(0);

fn intern(key: Key, make: impl FnOnce(u32) -> Node) -> Theory {
    if let Some(t) = interner().get(&key) {
        return t.clone();
    }
    interner()
        .entry(key)
        .or_insert_with(|| Theory(Arc::new(make(NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed)))))
        .clone()
}

impl Theory {
    /// Level-0 theory. Forced facts are not checked here; see
    /// [`AtomType::respects_forced_facts`].
    pub fn atoms(t: AtomType) -> Theory {
        let arity = t.arity;
        intern(Key::Atoms(t.clone()), |id| Node {
            id,
            level: 0,
            arity,
            payload: Payload::Atoms(t),
        })
    }

    /// Level-(m+1) theory from level-m members over `arity + 1` variables.
    /// Duplicates are removed.
    pub fn set(arity: usize, members: impl IntoIterator<Item = Theory>) -> Result<Theory, TheoryError> {
        let mut members: Vec<Theory> = members.into_iter().collect();
        let Some(first) = members.first() else {
            return Err(TheoryError::Domain("a theory of level >= 1 has at least one member".into()));
        };
        let level = first.level() + 1;
        for m in &members {
            if m.level() + 1 != level || m.arity() != arity + 1 {
                return Err(TheoryError::Arity(format!(
                    "member of level {} arity {} inside a level {level} arity {arity} theory",
                    m.level(),
                    m.arity()
                )));
            }
        }
        members.sort_by_key(|m| m.id());
        members.dedup_by_key(|m| m.id());
        let ids = members.iter().map(Theory::id).collect();
        Ok(intern(Key::Set(level, arity, ids), move |id| {
            members.sort();
            Node {
                id,
                level,
                arity,
                payload: Payload::Set(members),
            }
        }))
    }

    pub fn id(&self) -> u32 {
        self.0.id
    }

    pub fn level(&self) -> usize {
        self.0.level
    }

    pub fn arity(&self) -> usize {
        self.0.arity
    }

    /// Members in structural order; empty at level 0.
    pub fn members(&self) -> &[Theory] {
        match &self.0.payload {
            Payload::Set(m) => m,
            Payload::Atoms(_) => &[],
        }
    }

    pub fn atom_type(&self) -> Option<&AtomType> {
        match &self.0.payload {
            Payload::Atoms(a) => Some(a),
            Payload::Set(_) => None,
        }
    }

    pub fn contains(&self, member: &Theory) -> bool {
        self.members().iter().any(|m| m == member)
    }

    /// Number of interned nodes reachable from this theory, itself included.
    pub fn dag_size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(t) = stack.pop() {
            if seen.insert(t.id()) {
                stack.extend(t.members().iter().cloned());
            }
        }
        seen.len()
    }

    pub(crate) fn same_shape(&self, other: &Theory) -> Result<(), TheoryError> {
        if self.level() != other.level() || self.arity() != other.arity() {
            return Err(TheoryError::Arity(format!(
                "level {} arity {} vs level {} arity {}",
                self.level(),
                self.arity(),
                other.level(),
                other.arity()
            )));
        }
        Ok(())
    }
}

impl PartialEq for Theory {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Theory {}

impl Hash for Theory {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

impl PartialOrd for Theory {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Structural order, independent of interning history.
impl Ord for Theory {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.id() == other.id() {
            return Ordering::Equal;
        }
        (self.level(), self.arity())
            .cmp(&(other.level(), other.arity()))
            .then_with(|| match (&self.0.payload, &other.0.payload) {
                (Payload::Atoms(a), Payload::Atoms(b)) => cmp_bits(&a.bits, &b.bits),
                (Payload::Set(a), Payload::Set(b)) => a.cmp(b),
                _ => unreachable!("payload kind is determined by level"),
            })
    }
}

/// At the first differing atom, the assignment making it true comes first.
fn cmp_bits(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let d = x ^ y;
        if d != 0 {
            let k = d.trailing_zeros();
            return if x >> k & 1 == 1 { Ordering::Less } else { Ordering::Greater };
        }
    }
    Ordering::Equal
}

/// Memo table keyed by interned ids.
pub(crate) struct Memo<K>(OnceLock<DashMap<K, Theory>>);

impl<K: Hash + Eq> Memo<K> {
    pub(crate) const fn new() -> Self {
        Memo(OnceLock::new())
    }

    pub(crate) fn get_or_try(
        &self,
        key: K,
        compute: impl FnOnce() -> Result<Theory, TheoryError>,
    ) -> Result<Theory, TheoryError> {
        let table = self.0.get_or_init(DashMap::new);
        if let Some(t) = table.get(&key) {
            return Ok(t.clone());
        }
        let t = compute()?;
        table.insert(key, t.clone());
        Ok(t)
    }
}

impl fmt::Debug for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Theory#{}(level {}, arity {})", self.id(), self.level(), self.arity())
    }
}
