//! Finite semigroups given by addition tables, idempotent powers, and
//! homogeneous sets for additive colourings.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("table is incomplete: {0} + {1} is undefined")]
    Incomplete(String, String),
    #[error("not associative: ({0} + {1}) + {2} differs from {0} + ({1} + {2})")]
    NotAssociative(String, String, String),
    #[error("colouring is not additive at {0} < {1} < {2}")]
    NotAdditive(usize, usize, usize),
    #[error("{0}")]
    Domain(String),
}

/// A finite semigroup on `0..names.len()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupTable {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl SemigroupTable {
    /// Builds and checks associativity.
    pub fn from_fn(names: Vec<String>, op: impl Fn(usize, usize) -> usize) -> Result<Self, SemigroupError> {
        let n = names.len();
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| op(a, b)).collect()).collect();
        if table.iter().flatten().any(|&c| c >= n) {
            return Err(SemigroupError::Domain("operation leaves the carrier".into()));
        }
        let s = SemigroupTable { names, table };
        s.check_associative()?;
        Ok(s)
    }

    /// Cyclic group `Z_n` written additively, elements named `0..n`.
    pub fn cyclic(n: usize) -> Self {
        Self::from_fn((0..n).map(|i| i.to_string()).collect(), |a, b| (a + b) % n)
            .expect("cyclic groups are associative")
    }

    /// Parses the text format: element names on the first line, then one
    /// `a + b = c` line per ordered pair. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, SemigroupError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let Some((_, header)) = lines.next() else {
            return Err(SemigroupError::Syntax { line: 1, msg: "missing element names".into() });
        };
        let names: Vec<String> = header.split_whitespace().map(str::to_string).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        if index.len() != names.len() {
            return Err(SemigroupError::Syntax { line: 1, msg: "duplicate element name".into() });
        }
        let n = names.len();
        let mut table = vec![vec![None; n]; n];
        for (line, l) in lines {
            let bad = |msg: &str| SemigroupError::Syntax { line, msg: msg.into() };
            let (lhs, rhs) = l.split_once('=').ok_or_else(|| bad("expected 'a + b = c'"))?;
            let (a, b) = lhs.split_once('+').ok_or_else(|| bad("expected 'a + b = c'"))?;
            let look = |s: &str| index.get(s.trim()).copied().ok_or_else(|| bad(&format!("unknown element '{}'", s.trim())));
            let (a, b, c) = (look(a)?, look(b)?, look(rhs)?);
            if table[a][b].replace(c).is_some_and(|old| old != c) {
                return Err(bad("conflicting entries"));
            }
        }
        let mut full = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                full[a][b] = table[a][b]
                    .ok_or_else(|| SemigroupError::Incomplete(names[a].clone(), names[b].clone()))?;
            }
        }
        let s = SemigroupTable { names, table: full };
        s.check_associative()?;
        Ok(s)
    }

    fn check_associative(&self) -> Result<(), SemigroupError> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        return Err(SemigroupError::NotAssociative(
                            self.names[a].clone(),
                            self.names[b].clone(),
                            self.names[c].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// The idempotent `e = x^k` with the least `k >= 1`.
pub fn idempotent_power(s: &SemigroupTable, x: usize) -> (usize, usize) {
    let mut p = x;
    for k in 1..=s.len() {
        if s.add(p, p) == p {
            return (p, k);
        }
        p = s.add(p, x);
    }
    unreachable!("some power of every element of a finite semigroup is idempotent")
}

/// A colouring of pairs `i < j` of `0..size` by semigroup elements.
#[derive(Debug, Clone)]
pub struct AdditiveColoring {
    pub size: usize,
    pub semigroup: SemigroupTable,
    colour: Vec<Vec<usize>>,
}

impl AdditiveColoring {
    /// Builds the colouring and checks `f(x,z) = f(x,y) + f(y,z)`.
    pub fn new(
        size: usize,
        semigroup: SemigroupTable,
        f: impl Fn(usize, usize) -> usize,
    ) -> Result<Self, SemigroupError> {
        let colour: Vec<Vec<usize>> = (0..size)
            .map(|i| (0..size).map(|j| if i < j { f(i, j) } else { 0 }).collect())
            .collect();
        if colour.iter().flatten().any(|&c| c >= semigroup.len()) {
            return Err(SemigroupError::Domain("colour outside the semigroup".into()));
        }
        let c = AdditiveColoring { size, semigroup, colour };
        for x in 0..size {
            for y in x + 1..size {
                for z in y + 1..size {
                    if c.colour(x, z) != c.semigroup.add(c.colour(x, y), c.colour(y, z)) {
                        return Err(SemigroupError::NotAdditive(x, y, z));
                    }
                }
            }
        }
        Ok(c)
    }

    pub fn colour(&self, i: usize, j: usize) -> usize {
        self.colour[i][j]
    }
}

/// Lexicographically least increasing `size`-tuple on which the colouring is
/// constant, if one exists.
pub fn additive_ramsey(c: &AdditiveColoring, size: usize) -> Option<Vec<usize>> {
    fn extend(c: &AdditiveColoring, chosen: &mut Vec<usize>, size: usize) -> bool {
        if chosen.len() == size {
            return true;
        }
        let start = chosen.last().map_or(0, |&l| l + 1);
        for next in start..c.size {
            let fits = match chosen.as_slice() {
                [] | [_] => true,
                [a, b, ..] => {
                    let col = c.colour(*a, *b);
                    chosen.iter().all(|&i| c.colour(i, next) == col)
                }
            };
            if fits {
                chosen.push(next);
                if extend(c, chosen, size) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    extend(c, &mut chosen, size).then_some(chosen)
}
