//! Monadic language of order: syntax tree, parser, printer and quantifier depth.
//!
//! Only set variables exist. Individuals are singletons, and `X < Y` holds
//! when both sides are singletons whose elements compare strictly.
//!
//! Concrete grammar (whitespace insignificant):
//!
//! ```text
//! formula  := quant | implies
//! quant    := ("EX" | "ALL") VAR "." formula
//! implies  := or (("->" | "<->") implies)?    "<->" unfolds into two implications
//! or       := and ("|" and)*
//! and      := unary ("&" unary)*
//! unary    := "~" unary | quant | atom | "(" formula ")"
//! atom     := "sing(" VAR ")" | "empty(" VAR ")" | VAR "sub" VAR
//!           | VAR "<" VAR | VAR "=" VAR | "true" | "false"
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// A syntax error, with a 1-based character column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Sing(String),
    Empty(String),
    Sub(String, String),
    Less(String, String),
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn sing(v: impl Into<String>) -> Self {
        Formula::Sing(v.into())
    }

    pub fn empty(v: impl Into<String>) -> Self {
        Formula::Empty(v.into())
    }

    pub fn sub(a: impl Into<String>, b: impl Into<String>) -> Self {
        Formula::Sub(a.into(), b.into())
    }

    pub fn less(a: impl Into<String>, b: impl Into<String>) -> Self {
        Formula::Less(a.into(), b.into())
    }

    pub fn eq(a: impl Into<String>, b: impl Into<String>) -> Self {
        Formula::Eq(a.into(), b.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(
            Formula::implies(a.clone(), b.clone()),
            Formula::implies(b, a),
        )
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(v.into(), Box::new(body))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    }

    /// Quantifier depth.
    pub fn dp(&self) -> usize {
        match self {
            Formula::True
            | Formula::False
            | Formula::Sing(_)
            | Formula::Empty(_)
            | Formula::Sub(..)
            | Formula::Less(..)
            | Formula::Eq(..) => 0,
            Formula::Not(f) => f.dp(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.dp().max(b.dp()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => f.dp() + 1,
        }
    }

    /// Free variables, as a sorted set.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Sing(v) | Formula::Empty(v) => note(v, bound),
            Formula::Sub(a, b) | Formula::Less(a, b) | Formula::Eq(a, b) => {
                note(a, bound);
                note(b, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring in the formula, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_vars(&mut |v| {
            out.insert(v.to_string());
        });
        out
    }

    fn visit_vars(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Sing(v) | Formula::Empty(v) => f(v),
            Formula::Sub(a, b) | Formula::Less(a, b) | Formula::Eq(a, b) => {
                f(a);
                f(b);
            }
            Formula::Not(g) => g.visit_vars(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                f(v);
                g.visit_vars(f);
            }
        }
    }

    /// Renames free occurrences of `from` to `to`. The caller guarantees `to`
    /// is not bound anywhere in `self`.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        let r = |v: &String| {
            if v == from {
                to.to_string()
            } else {
                v.clone()
            }
        };
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Sing(v) => Formula::Sing(r(v)),
            Formula::Empty(v) => Formula::Empty(r(v)),
            Formula::Sub(a, b) => Formula::Sub(r(a), r(b)),
            Formula::Less(a, b) => Formula::Less(r(a), r(b)),
            Formula::Eq(a, b) => Formula::Eq(r(a), r(b)),
            Formula::Not(f) => Formula::not(f.rename_free(from, to)),
            Formula::And(a, b) => Formula::and(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Or(a, b) => Formula::or(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_free(from, to), b.rename_free(from, to))
            }
            Formula::Exists(v, _) | Formula::Forall(v, _) if v == from => self.clone(),
            Formula::Exists(v, f) => Formula::exists(v.clone(), f.rename_free(from, to)),
            Formula::Forall(v, f) => Formula::forall(v.clone(), f.rename_free(from, to)),
        }
    }

    /// Immediate subformulas.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => vec![f],
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
            _ => vec![],
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }
}

/// Parses a formula. Rebinding a variable that is already bound in scope is
/// rejected.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        bound: Vec::new(),
    };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    bound: Vec<String>,
}

impl Parser {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek_word(&self) -> String {
        let mut i = self.pos;
        let mut s = String::new();
        while i < self.chars.len() && (self.chars[i].is_alphanumeric() || self.chars[i] == '_') {
            s.push(self.chars[i]);
            i += 1;
        }
        s
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        let n = tok.chars().count();
        if self.pos + n <= self.chars.len()
            && self.chars[self.pos..self.pos + n].iter().copied().eq(tok.chars())
        {
            // keywords must not run into identifiers
            let alpha = tok.chars().all(|c| c.is_alphabetic());
            if alpha {
                if let Some(c) = self.chars.get(self.pos + n) {
                    if c.is_alphanumeric() || *c == '_' {
                        return false;
                    }
                }
            }
            self.pos += n;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.skip_ws();
            Err(self.err(format!("expected `{tok}`")))
        }
    }

    fn var(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let w = self.peek_word();
        match w.chars().next() {
            Some(c) if c.is_ascii_uppercase() && w != "EX" && w != "ALL" => {
                self.pos += w.chars().count();
                Ok(w)
            }
            _ => Err(self.err("expected a variable (uppercase identifier)")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.implies()
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat("->") {
            let rhs = self.implies()?;
            Ok(Formula::implies(lhs, rhs))
        } else if self.eat("<->") {
            let rhs = self.implies()?;
            Ok(Formula::iff(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.and()?;
        while self.eat("|") {
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.eat("&") {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn quant(&mut self, universal: bool) -> Result<Formula, ParseError> {
        let at = self.pos;
        let v = self.var()?;
        if self.bound.contains(&v) {
            return Err(ParseError {
                pos: at + 1,
                msg: format!("variable {v} is already bound in this scope"),
            });
        }
        self.expect(".")?;
        self.bound.push(v.clone());
        let body = self.formula();
        self.bound.pop();
        let body = body?;
        Ok(if universal {
            Formula::forall(v, body)
        } else {
            Formula::exists(v, body)
        })
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        if self.eat("~") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat("EX") {
            return self.quant(false);
        }
        if self.eat("ALL") {
            return self.quant(true);
        }
        if self.eat("(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        if self.eat("true") {
            return Ok(Formula::True);
        }
        if self.eat("false") {
            return Ok(Formula::False);
        }
        if self.eat("sing") {
            self.expect("(")?;
            let v = self.var()?;
            self.expect(")")?;
            return Ok(Formula::Sing(v));
        }
        if self.eat("empty") {
            self.expect("(")?;
            let v = self.var()?;
            self.expect(")")?;
            return Ok(Formula::Empty(v));
        }
        if self.pos >= self.chars.len() {
            return Err(self.err("unexpected end of input"));
        }
        let a = self.var()?;
        if self.eat("sub") {
            Ok(Formula::Sub(a, self.var()?))
        } else if self.eat("<") {
            Ok(Formula::Less(a, self.var()?))
        } else if self.eat("=") {
            Ok(Formula::Eq(a, self.var()?))
        } else {
            self.skip_ws();
            Err(self.err("expected `sub`, `<` or `=`"))
        }
    }
}

// Precedence: 0 quantifier body / top, 1 implication, 2 or, 3 and, 4 unary.
fn write_prec(f: &Formula, ctx: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    let bin = |out: &mut fmt::Formatter<'_>,
               a: &Formula,
               b: &Formula,
               op: &str,
               p: u8,
               right_assoc: bool|
     -> fmt::Result {
        let open = ctx > p;
        if open {
            write!(out, "(")?;
        }
        let (lp, rp) = if right_assoc { (p + 1, p) } else { (p, p + 1) };
        write_prec(a, lp, out)?;
        write!(out, " {op} ")?;
        write_prec(b, rp, out)?;
        if open {
            write!(out, ")")?;
        }
        Ok(())
    };
    match f {
        Formula::True => write!(out, "true"),
        Formula::False => write!(out, "false"),
        Formula::Sing(v) => write!(out, "sing({v})"),
        Formula::Empty(v) => write!(out, "empty({v})"),
        Formula::Sub(a, b) => write!(out, "{a} sub {b}"),
        Formula::Less(a, b) => write!(out, "{a} < {b}"),
        Formula::Eq(a, b) => write!(out, "{a} = {b}"),
        Formula::Not(g) => {
            write!(out, "~")?;
            write_prec(g, 4, out)
        }
        Formula::And(a, b) => bin(out, a, b, "&", 3, false),
        Formula::Or(a, b) => bin(out, a, b, "|", 2, false),
        Formula::Implies(a, b) => bin(out, a, b, "->", 1, true),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let kw = if matches!(f, Formula::Exists(..)) { "EX" } else { "ALL" };
            if ctx > 0 {
                write!(out, "(")?;
            }
            write!(out, "{kw} {v}. ")?;
            write_prec(g, 0, out)?;
            if ctx > 0 {
                write!(out, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_prec(self, 0, f)
    }
}

/// Ordered free-variable context: position `i` of a theory's predicate tuple
/// is interpreted by the `i`-th name.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariableContext {
    names: Vec<String>,
}

impl VariableContext {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, String> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(format!("duplicate variable {n} in context"));
            }
        }
        Ok(VariableContext { names })
    }

    /// `X0, X1, ..., X{l-1}`.
    pub fn positional(l: usize) -> Self {
        VariableContext {
            names: (0..l).map(positional_name).collect(),
        }
    }

    /// Free variables of `phi`, ordered by alphabetic prefix then numeric suffix.
    pub fn of(phi: &Formula) -> Self {
        let mut names: Vec<String> = phi.free_vars().into_iter().collect();
        names.sort_by_key(|n| natural_key(n));
        VariableContext { names }
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

pub fn positional_name(i: usize) -> String {
    format!("X{i}")
}

fn natural_key(name: &str) -> (String, u64, String) {
    let digits: String = name
        .chars()
        .rev()
        .take_while(|c| c.is_ascii_digit())
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    let prefix = name[..name.len() - digits.len()].to_string();
    let num = digits.parse().unwrap_or(0);
    (prefix, num, name.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_simple_quantifier() {
        let f = parse("EX X. sing(X)").unwrap();
        assert_eq!(f, Formula::exists("X", Formula::sing("X")));
    }

    #[test]
    fn unbalanced_paren_reports_position() {
        let e = parse("sing(X").unwrap_err();
        assert_eq!(e.pos, 7);
    }

    #[test]
    fn nested_quantifiers_are_closed() {
        let f = parse("EX X. ALL Y. (sing(Y) -> (X < Y | X = Y))").unwrap();
        assert!(f.free_vars().is_empty());
        assert_eq!(f.dp(), 2);
        match &f {
            Formula::Exists(x, body) => {
                assert_eq!(x, "X");
                assert!(matches!(**body, Formula::Forall(..)));
            }
            _ => panic!("expected EX"),
        }
    }

    #[test]
    fn rebinding_is_an_error() {
        assert!(parse("EX X. EX X. sing(X)").is_err());
        // sibling scopes may reuse a name
        assert!(parse("(EX X. sing(X)) & (EX X. empty(X))").is_ok());
    }

    #[test]
    fn depth_examples() {
        assert_eq!(parse("sing(X)").unwrap().dp(), 0);
        assert_eq!(parse("EX X. sing(X)").unwrap().dp(), 1);
        assert_eq!(parse("EX X. ALL Y. X < Y").unwrap().dp(), 2);
    }

    #[test]
    fn precedence() {
        let f = parse("A sub B & sing(A) | empty(B) -> A = B").unwrap();
        let expect = Formula::implies(
            Formula::or(
                Formula::and(Formula::sub("A", "B"), Formula::sing("A")),
                Formula::empty("B"),
            ),
            Formula::eq("A", "B"),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn printer_brackets_quantifiers_in_operands() {
        let f = Formula::and(
            Formula::exists("X", Formula::sing("X")),
            Formula::empty("Y"),
        );
        let s = f.to_string();
        assert_eq!(s, "(EX X. sing(X)) & empty(Y)");
        assert_eq!(parse(&s).unwrap(), f);
    }

    #[test]
    fn keywords_do_not_swallow_identifiers() {
        assert!(parse("EXA sub B").is_ok());
        assert!(parse("singX").is_err());
    }

    #[test]
    fn context_orders_naturally() {
        let f = parse("X10 sub X2 & X1 sub A").unwrap();
        let ctx = VariableContext::of(&f);
        assert_eq!(ctx.names(), &["A", "X1", "X2", "X10"]);
    }
}
