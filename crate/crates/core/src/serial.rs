//! Canonical text form of theories.
//!
//! Level 0 is a bracketed list of signed literals, level n+1 a braced list of
//! member texts. Both lists are sorted as strings, so the text is an equality
//! key:
//!
//! ```text
//! [sing(X0),~empty(X0)]                     one variable, a singleton
//! {[empty(X0),~sing(X0)],[sing(X0),~empty(X0)]}
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::theory::{AtomType, Theory, TheoryError};

/// Canonical serialization.
pub fn serialize(t: &Theory) -> String {
    let mut cache = HashMap::new();
    ser(t, &mut cache)
}

fn ser(t: &Theory, cache: &mut HashMap<u32, String>) -> String {
    if let Some(s) = cache.get(&t.id()) {
        return s.clone();
    }
    let s = match t.atom_type() {
        Some(a) => {
            let mut lits: Vec<String> = a
                .literals()
                .into_iter()
                .map(|(v, s)| if v { s } else { format!("~{s}") })
                .collect();
            lits.sort();
            format!("[{}]", lits.join(","))
        }
        None => {
            let mut parts: Vec<String> = t.members().iter().map(|m| ser(m, cache)).collect();
            parts.sort();
            format!("{{{}}}", parts.join(","))
        }
    };
    cache.insert(t.id(), s.clone());
    s
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}

impl FromStr for Theory {
    type Err = TheoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_theory(s)
    }
}

/// Parses the canonical form. Whitespace is ignored; literal and member
/// order is free, but a level-0 list must assign every atom exactly once.
pub fn parse_theory(text: &str) -> Result<Theory, TheoryError> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Reader { chars, pos: 0 };
    let t = p.theory()?;
    if p.pos != p.chars.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

struct Reader {
    chars: Vec<char>,
    pos: usize,
}

impl Reader {
    fn err(&self, msg: &str) -> TheoryError {
        TheoryError::Syntax(format!("{msg} at offset {}", self.pos))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), TheoryError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn theory(&mut self) -> Result<Theory, TheoryError> {
        match self.peek() {
            Some('[') => self.atoms(),
            Some('{') => {
                self.pos += 1;
                let mut members = Vec::new();
                if self.peek() != Some('}') {
                    loop {
                        members.push(self.theory()?);
                        if self.peek() == Some(',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect('}')?;
                let Some(first) = members.first() else {
                    return Err(self.err("empty member set"));
                };
                let arity = first.arity().checked_sub(1).ok_or_else(|| self.err("member of arity 0"))?;
                Theory::set(arity, members)
            }
            _ => Err(self.err("expected '[' or '{'")),
        }
    }

    fn atoms(&mut self) -> Result<Theory, TheoryError> {
        self.expect('[')?;
        let mut lits: Vec<(bool, String, Vec<usize>)> = Vec::new();
        if self.peek() != Some(']') {
            loop {
                lits.push(self.literal()?);
                if self.peek() == Some(',') {
                    self.pos += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(']')?;
        let arity = lits.iter().flat_map(|(_, _, a)| a.iter().map(|i| i + 1)).max().unwrap_or(0);
        let mut seen: HashMap<(String, Vec<usize>), bool> = HashMap::new();
        for (v, name, args) in &lits {
            if seen.insert((name.clone(), args.clone()), *v).is_some() {
                return Err(self.err(&format!("literal {name}{args:?} repeated")));
            }
        }
        let mut t = AtomType::new(arity);
        let mut get = |name: &str, args: Vec<usize>| {
            seen.remove(&(name.to_string(), args.clone()))
                .ok_or_else(|| TheoryError::Syntax(format!("missing literal {name}{args:?}")))
        };
        for i in 0..arity {
            t.set_sing(i, get("sing", vec![i])?);
            t.set_empty(i, get("empty", vec![i])?);
        }
        let mut eqs = Vec::new();
        for i in 0..arity {
            for j in 0..arity {
                if i != j {
                    t.set_sub(i, j, get("sub", vec![i, j])?);
                    t.set_lt(i, j, get("lt", vec![i, j])?);
                }
                if i < j {
                    eqs.push((i, j, get("eq", vec![i, j])?));
                }
            }
        }
        if let Some(((name, args), _)) = seen.into_iter().next() {
            return Err(TheoryError::Syntax(format!("unexpected literal {name}{args:?}")));
        }
        if eqs.iter().any(|&(i, j, v)| t.eq(i, j) != v) {
            return Err(TheoryError::Coherence("eq literal disagrees with sub literals".into()));
        }
        if !t.respects_forced_facts() {
            return Err(TheoryError::Coherence("level-0 type violates a forced fact".into()));
        }
        Ok(Theory::atoms(t))
    }

    fn literal(&mut self) -> Result<(bool, String, Vec<usize>), TheoryError> {
        let positive = if self.peek() == Some('~') {
            self.pos += 1;
            false
        } else {
            true
        };
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_lowercase()) {
            self.pos += 1;
        }
        let name: String = self.chars[start..self.pos].iter().collect();
        let expected_args = match name.as_str() {
            "sing" | "empty" => 1,
            "sub" | "lt" | "eq" => 2,
            _ => return Err(self.err(&format!("unknown atom '{name}'"))),
        };
        self.expect('(')?;
        let mut args = Vec::new();
        for k in 0..expected_args {
            if k > 0 {
                self.expect(',')?;
            }
            self.expect('X')?;
            let s = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let digits: String = self.chars[s..self.pos].iter().collect();
            args.push(digits.parse().map_err(|_| self.err("expected variable index"))?);
        }
        self.expect(')')?;
        Ok((positive, name, args))
    }
}
