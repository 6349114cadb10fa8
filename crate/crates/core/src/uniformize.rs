//! Uniformizers on finite structures: for a formula `φ(X, Y, Q...)` with
//! `∀Y ∃X φ`, a rule picking exactly one `X` for every `Y`.
//!
//! The designated variables are `X` and `Y`; any other free variable must
//! name a set of the structure. Subsets are compared lexicographically along
//! a linear order of the points: `X` comes first when the least point of the
//! symmetric difference lies in `X`.

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::composition::add;
use crate::eval::{decide_in, eval_theory};
use crate::formula::{Formula, VariableContext};
use crate::serial::serialize;
use crate::structure::{bit, compress, expand, model_check, points, subsets, FiniteStructure, Mask};
use crate::theory::{Budget, Theory, TheoryError};
use crate::a2::{a2_wellorder, A2WellOrder};
use crate::tree::{FiniteTree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UniformizeError {
    #[error("free variables {0} are neither X, Y nor a set of the structure")]
    Arity(String),
    #[error("not potentially uniformizable: no X works for Y = {0}")]
    NotPu(String),
    #[error("no coherent choice of theories: {0}")]
    CoherenceUnsatisfiable(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

pub const X_VAR: &str = "X";
pub const Y_VAR: &str = "Y";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Lexicographic,
    Product { block: usize, blocks: usize },
    Tree,
}

/// A selection `Y ↦ X` with the data it was built from. `params` and
/// `psi` are fixed per formula and structure; `certificates` records the
/// decisions made for each `Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Uniformizer {
    pub phi: Formula,
    pub method: Method,
    pub params: Vec<(String, Mask)>,
    pub psi: Option<Formula>,
    /// Depth of the theories the construction works with.
    pub level: usize,
    pub selection: BTreeMap<Mask, Mask>,
    pub certificates: BTreeMap<Mask, Vec<String>>,
}

impl Uniformizer {
    pub fn select(&self, y: Mask) -> Option<Mask> {
        self.selection.get(&y).copied()
    }

    /// Checks `φ(select(Y), Y)` for every `Y`.
    pub fn verify(&self, s: &FiniteStructure, budget: &Budget) -> Result<bool, UniformizeError> {
        for y in subsets(s.universe()) {
            let Some(x) = self.select(y) else {
                return Ok(false);
            };
            if !model_check(s, &self.phi, &[(X_VAR, x), (Y_VAR, y)], budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks that `ψ` has exactly the selected solution for every `Y`.
    pub fn verify_psi(&self, s: &FiniteStructure, budget: &Budget) -> Result<bool, UniformizeError> {
        let Some(psi) = &self.psi else {
            return Ok(true);
        };
        for y in subsets(s.universe()) {
            let mut found = Vec::new();
            for x in subsets(s.universe()) {
                if model_check(s, psi, &[(X_VAR, x), (Y_VAR, y)], budget)? {
                    found.push(x);
                }
            }
            if found != [self.select(y).unwrap_or(Mask::MAX)] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for Uniformizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "phi: {}", self.phi)?;
        writeln!(f, "method: {:?}, level {}", self.method, self.level)?;
        for (name, m) in &self.params {
            writeln!(f, "param {name} = {}", show_set(*m))?;
        }
        if let Some(psi) = &self.psi {
            writeln!(f, "psi: {psi}")?;
        }
        for (y, x) in &self.selection {
            writeln!(f, "Y = {} -> X = {}", show_set(*y), show_set(*x))?;
            for line in self.certificates.get(y).into_iter().flatten() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}

pub fn show_set(m: Mask) -> String {
    let v: Vec<String> = points(m).map(|p| p.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

/// Stable short name for a theory.
pub fn fingerprint(t: &Theory) -> String {
    let mut h = DefaultHasher::new();
    serialize(t).hash(&mut h);
    format!("{:016x}", h.finish())
}

/// Lexicographic comparison of subsets along `order`.
pub fn lex_cmp(order: &[usize], a: Mask, b: Mask) -> Ordering {
    for &p in order {
        match (a & bit(p) != 0, b & bit(p) != 0) {
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
    }
    Ordering::Equal
}

/// Subsets of `m` in lexicographic order along `order`.
pub fn lex_subsets(order: &[usize], m: Mask) -> Vec<Mask> {
    let mut v: Vec<Mask> = subsets(m).collect();
    v.sort_by(|&a, &b| lex_cmp(order, a, b));
    v
}

fn param_names(phi: &Formula, s: &FiniteStructure) -> Result<Vec<String>, UniformizeError> {
    let stray: Vec<String> = phi
        .free_vars()
        .into_iter()
        .filter(|v| v != X_VAR && v != Y_VAR && s.set(v).is_none())
        .collect();
    if !stray.is_empty() {
        return Err(UniformizeError::Arity(stray.join(", ")));
    }
    Ok(s.named().iter().map(|(n, _)| n.clone()).collect())
}

/// `∀Y ∃X φ` by exhaustive search.
pub fn check_pu(phi: &Formula, s: &FiniteStructure, budget: &Budget) -> Result<bool, UniformizeError> {
    Ok(pu_witness(phi, s, budget)?.is_none())
}

/// A `Y` without any `X`, if there is one.
fn pu_witness(phi: &Formula, s: &FiniteStructure, budget: &Budget) -> Result<Option<Mask>, UniformizeError> {
    param_names(phi, s)?;
    'outer: for y in subsets(s.universe()) {
        for x in subsets(s.universe()) {
            if model_check(s, phi, &[(X_VAR, x), (Y_VAR, y)], budget)? {
                continue 'outer;
            }
        }
        return Ok(Some(y));
    }
    Ok(None)
}

fn require_pu(phi: &Formula, s: &FiniteStructure, budget: &Budget) -> Result<(), UniformizeError> {
    match pu_witness(phi, s, budget)? {
        Some(y) => Err(UniformizeError::NotPu(show_set(y))),
        None => Ok(()),
    }
}

fn fresh(phi: &Formula, stem: &str) -> String {
    let used = phi.all_vars();
    (0..)
        .map(|i| if i == 0 { stem.to_string() } else { format!("{stem}{i}") })
        .find(|n| !used.contains(n))
        .expect("some name is free")
}

/// `lexle(a, b)`: `a = b`, or the least point where they differ lies in `a`.
pub fn lexle_formula(a: &str, b: &str, u: &str, v: &str) -> Formula {
    Formula::or(
        Formula::eq(a, b),
        Formula::exists(
            u,
            Formula::conj([
                Formula::sing(u),
                Formula::sub(u, a),
                Formula::not(Formula::sub(u, b)),
                Formula::forall(
                    v,
                    Formula::implies(
                        Formula::and(Formula::sing(v), Formula::less(v, u)),
                        Formula::iff(Formula::sub(v, a), Formula::sub(v, b)),
                    ),
                ),
            ]),
        ),
    )
}

/// Picks the lexicographically least solution on a finite chain.
pub fn lex_uniformize(phi: &Formula, s: &FiniteStructure, budget: &Budget) -> Result<Uniformizer, UniformizeError> {
    if !s.is_chain() {
        return Err(UniformizeError::Domain("lexicographic selection needs a chain".into()));
    }
    require_pu(phi, s, budget)?;
    let order: Vec<usize> = (0..s.size()).collect();
    let candidates = lex_subsets(&order, s.universe());
    let mut selection = BTreeMap::new();
    for y in subsets(s.universe()) {
        for &x in &candidates {
            if model_check(s, phi, &[(X_VAR, x), (Y_VAR, y)], budget)? {
                selection.insert(y, x);
                break;
            }
        }
    }
    let alt = fresh(phi, "Xalt");
    let u = fresh(phi, "Ulex");
    let v = fresh(phi, "Vlex");
    let psi = Formula::and(
        phi.clone(),
        Formula::forall(
            alt.clone(),
            Formula::implies(phi.rename_free(X_VAR, &alt), lexle_formula(X_VAR, &alt, &u, &v)),
        ),
    );
    let out = Uniformizer {
        phi: phi.clone(),
        method: Method::Lexicographic,
        params: Vec::new(),
        psi: Some(psi),
        level: phi.dp(),
        selection,
        certificates: BTreeMap::new(),
    };
    if !out.verify_psi(s, budget)? {
        return Err(UniformizeError::Domain("the emitted formula does not single out the selection".into()));
    }
    Ok(out)
}

/// The theories `Th^n(piece; Y, Q..., X)` reachable by some `X`, each with
/// its least witness, sorted by witness.
fn reachable(
    piece: &FiniteStructure,
    order: &[usize],
    fixed: &[Mask],
    n: usize,
    budget: &Budget,
) -> Result<Vec<(Theory, Mask)>, TheoryError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for x in lex_subsets(order, piece.universe()) {
        let mut sets = fixed.to_vec();
        sets.push(x);
        let t = eval_theory(piece, &sets, n, budget)?;
        if seen.insert(t.clone()) {
            out.push((t, x));
        }
    }
    Ok(out)
}

fn context(params: &[String]) -> VariableContext {
    let mut names = vec![Y_VAR.to_string()];
    names.extend(params.iter().cloned());
    names.push(X_VAR.to_string());
    VariableContext::new(names).expect("distinct names")
}

/// Per-`Y` decisions of the product construction.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockPlan {
    /// `Th^{n+1}(block; Y, Q...)`, which fixes the choices available.
    pub block_theories: Vec<Theory>,
    /// The theory each block's part of `X` must realize.
    pub targets: Vec<Theory>,
    pub x: Mask,
}

/// Plans one `Y` on `blocks` consecutive copies of a chain of size `block`.
pub fn plan_blocks(
    phi: &Formula,
    s: &FiniteStructure,
    block: usize,
    y: Mask,
    budget: &Budget,
) -> Result<BlockPlan, UniformizeError> {
    let params = param_names(phi, s)?;
    let n = phi.dp();
    let piece = FiniteStructure::chain(block)?;
    let order: Vec<usize> = (0..block).collect();
    let blocks = s.size() / block;
    let mut options = Vec::with_capacity(blocks);
    let mut block_theories = Vec::with_capacity(blocks);
    for j in 0..blocks {
        let nodes = crate::structure::low_bits(block) << (j * block);
        let mut fixed = vec![compress(y, nodes)];
        fixed.extend(s.named().iter().map(|(_, m)| compress(*m, nodes)));
        block_theories.push(eval_theory(&piece, &fixed, n + 1, budget)?);
        // ordered by theory rather than witness, so that the choice depends
        // on the block theory alone
        let mut opts = reachable(&piece, &order, &fixed, n, budget)?;
        opts.sort_by(|a, b| a.0.cmp(&b.0));
        options.push(opts);
    }
    let ctx = context(&params);
    let mut dead = HashSet::new();
    let mut chosen = Vec::new();
    if !search(phi, &ctx, &options, 0, None, &mut chosen, &mut dead)? {
        return Err(UniformizeError::CoherenceUnsatisfiable(format!("Y = {}", show_set(y))));
    }
    let mut x = 0;
    for (j, &i) in chosen.iter().enumerate() {
        x |= options[j][i].1 << (j * block);
    }
    let targets = chosen.iter().enumerate().map(|(j, &i)| options[j][i].0.clone()).collect();
    Ok(BlockPlan { block_theories, targets, x })
}

/// Least tuple of block theories whose sum satisfies `φ`.
fn search(
    phi: &Formula,
    ctx: &VariableContext,
    options: &[Vec<(Theory, Mask)>],
    j: usize,
    prefix: Option<Theory>,
    chosen: &mut Vec<usize>,
    dead: &mut HashSet<(usize, Option<Theory>)>,
) -> Result<bool, TheoryError> {
    if j == options.len() {
        let total = prefix.expect("at least one block");
        return decide_in(phi, ctx, &total);
    }
    if dead.contains(&(j, prefix.clone())) {
        return Ok(false);
    }
    for (i, (t, _)) in options[j].iter().enumerate() {
        let next = match &prefix {
            Some(p) => add(p, t)?,
            None => t.clone(),
        };
        chosen.push(i);
        if search(phi, ctx, options, j + 1, Some(next), chosen, dead)? {
            return Ok(true);
        }
        chosen.pop();
    }
    dead.insert((j, prefix));
    Ok(false)
}

/// Uniformizer on a chain of `blocks · block` points read as `blocks`
/// copies of a chain of size `block`: block theories are chosen first, then
/// each block realizes its theory by its least witness.
pub fn product_uniformize(
    phi: &Formula,
    s: &FiniteStructure,
    block: usize,
    budget: &Budget,
) -> Result<Uniformizer, UniformizeError> {
    if !s.is_chain() || block == 0 || s.size() % block != 0 {
        return Err(UniformizeError::Domain(format!(
            "a chain of {} points is not a product with blocks of {block}",
            s.size()
        )));
    }
    let mut selection = BTreeMap::new();
    let mut certificates = BTreeMap::new();
    for y in subsets(s.universe()) {
        // the search over block theories is exhaustive, so failing it
        // means no X exists
        let plan = plan_blocks(phi, s, block, y, budget).map_err(|e| match e {
            UniformizeError::CoherenceUnsatisfiable(_) => UniformizeError::NotPu(show_set(y)),
            e => e,
        })?;
        let lines = plan
            .targets
            .iter()
            .enumerate()
            .map(|(j, t)| format!("block {j}: target {}", fingerprint(t)))
            .collect();
        selection.insert(y, plan.x);
        certificates.insert(y, lines);
    }
    Ok(Uniformizer {
        phi: phi.clone(),
        method: Method::Product { block, blocks: s.size() / block },
        params: Vec::new(),
        psi: None,
        level: phi.dp(),
        selection,
        certificates,
    })
}

/// Whether block targets depend on block theories only: any two `Y` with
/// the same sequence of `Th^{n+1}(block; Y, Q...)` get the same targets.
pub fn swap_test(phi: &Formula, s: &FiniteStructure, block: usize, budget: &Budget) -> Result<bool, UniformizeError> {
    let mut seen: BTreeMap<Vec<Theory>, Vec<Theory>> = BTreeMap::new();
    for y in subsets(s.universe()) {
        let plan = plan_blocks(phi, s, block, y, budget)?;
        match seen.get(&plan.block_theories) {
            Some(t) if *t != plan.targets => return Ok(false),
            Some(_) => {}
            None => {
                seen.insert(plan.block_theories, plan.targets);
            }
        }
    }
    Ok(true)
}

/// Reachable theories of the piece of `s` on `nodes`, with witnesses as
/// global masks, ordered along `order`.
fn reachable_on(
    s: &FiniteStructure,
    nodes: Mask,
    order: &[usize],
    fixed: &[Mask],
    m: usize,
    budget: &Budget,
) -> Result<Vec<(Theory, Mask)>, TheoryError> {
    let piece = s.induced(nodes);
    let local_order: Vec<usize> = order
        .iter()
        .filter(|&&p| nodes & bit(p) != 0)
        .map(|&p| compress(bit(p), nodes).trailing_zeros() as usize)
        .collect();
    let local_fixed: Vec<Mask> = fixed.iter().map(|&f| compress(f, nodes)).collect();
    Ok(reachable(&piece, &local_order, &local_fixed, m, budget)?
        .into_iter()
        .map(|(t, x)| (t, expand(x, nodes)))
        .collect())
}

struct TreeRun<'a> {
    s: &'a FiniteStructure,
    w: &'a A2WellOrder,
    m: usize,
    budget: &'a Budget,
}

impl TreeRun<'_> {
    fn theory_on(&self, nodes: Mask, fixed: &[Mask], x: Mask) -> Result<Theory, TheoryError> {
        let mut sets: Vec<Mask> = fixed.iter().map(|&f| compress(f, nodes)).collect();
        sets.push(compress(x, nodes));
        eval_theory(&self.s.induced(nodes), &sets, self.m, self.budget)
    }

    /// Chooses `X ∩ A_η` and theories for the successor classes so that
    /// `T_η` gets theory `target`, then recurses into the successors.
    fn solve(
        &self,
        g: usize,
        target: &Theory,
        fixed: &[Mask],
        lines: &mut Vec<String>,
    ) -> Result<Mask, UniformizeError> {
        let node = &self.w.gamma[g];
        let a = node.branch.iter().fold(0, |acc, &x| acc | bit(x));
        let options: Vec<Vec<(Theory, Mask)>> = node
            .children
            .iter()
            .map(|&c| reachable_on(self.s, self.w.gamma[c].members, &self.w.order, fixed, self.m, self.budget))
            .collect::<Result<_, _>>()?;
        for xa in lex_subsets(&node.branch, a) {
            let mut pick = vec![0usize; options.len()];
            loop {
                let x = pick.iter().enumerate().fold(xa, |acc, (i, &k)| acc | options[i][k].1);
                if self.theory_on(node.members, fixed, x)? == *target {
                    lines.push(format!(
                        "A{:?}: X on branch = {}, successor targets [{}]",
                        node.index,
                        show_set(xa),
                        pick.iter()
                            .enumerate()
                            .map(|(i, &k)| fingerprint(&options[i][k].0))
                            .collect::<Vec<_>>()
                            .join(", ")
                    ));
                    let mut out = xa;
                    for (i, &c) in node.children.iter().enumerate() {
                        out |= self.solve(c, &options[i][pick[i]].0, fixed, lines)?;
                    }
                    return Ok(out);
                }
                if !advance(&mut pick, &options) {
                    break;
                }
            }
        }
        Err(UniformizeError::CoherenceUnsatisfiable(format!(
            "sub-branch A{:?} at level {}",
            node.index, self.m
        )))
    }
}

/// Next tuple in lexicographic order, last coordinate fastest.
fn advance(pick: &mut [usize], options: &[Vec<(Theory, Mask)>]) -> bool {
    for i in (0..pick.len()).rev() {
        pick[i] += 1;
        if pick[i] < options[i].len() {
            return true;
        }
        pick[i] = 0;
    }
    false
}

/// Uniformizer on a finite tree driven by the sub-branch decomposition: a
/// theory for the whole tree is fixed first, then each sub-branch picks its
/// part of `X` and the theories of the classes hanging off it. The depth of
/// those theories is the least from `dp(φ)` on at which every choice can
/// be met.
pub fn tree_uniformize(
    phi: &Formula,
    tree: &FiniteTree,
    sets: &[(String, Mask)],
    budget: &Budget,
) -> Result<Uniformizer, UniformizeError> {
    let mut s = tree.structure();
    for (name, m) in sets {
        s = s.with_set(name.clone(), *m)?;
    }
    require_pu(phi, &s, budget)?;
    let names = param_names(phi, &s)?;
    let ctx = context(&names);
    let w = a2_wellorder(tree);
    let n = phi.dp();
    let mut last = None;
    for m in n..=n + 3 {
        let run = TreeRun { s: &s, w: &w, m, budget };
        match tree_attempt(phi, &ctx, &run) {
            Ok((selection, certificates)) => {
                let mut params = vec![("K".to_string(), w.representatives())];
                params.extend(w.colour_sets().into_iter().enumerate().map(|(i, d)| (format!("D{i}"), d)));
                return Ok(Uniformizer {
                    phi: phi.clone(),
                    method: Method::Tree,
                    params,
                    psi: None,
                    level: m,
                    selection,
                    certificates,
                });
            }
            Err(e @ UniformizeError::CoherenceUnsatisfiable(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one level tried"))
}

type Selection = (BTreeMap<Mask, Mask>, BTreeMap<Mask, Vec<String>>);

fn tree_attempt(phi: &Formula, ctx: &VariableContext, run: &TreeRun<'_>) -> Result<Selection, UniformizeError> {
    let s = run.s;
    let mut selection = BTreeMap::new();
    let mut certificates = BTreeMap::new();
    for y in subsets(s.universe()) {
        let mut fixed = vec![y];
        fixed.extend(s.named().iter().map(|(_, m)| *m));
        let whole = reachable_on(s, s.universe(), &run.w.order, &fixed, run.m, run.budget)?;
        let mut root = None;
        for (t, _) in &whole {
            if decide_in(phi, ctx, t)? {
                root = Some(t.clone());
                break;
            }
        }
        let root = root.ok_or_else(|| UniformizeError::NotPu(show_set(y)))?;
        let mut lines = vec![format!("tree target {}", fingerprint(&root))];
        let x = run.solve(0, &root, &fixed, &mut lines)?;
        if run.theory_on(s.universe(), &fixed, x)? != root {
            return Err(UniformizeError::CoherenceUnsatisfiable(format!(
                "glued choice misses the target at level {}",
                run.m
            )));
        }
        selection.insert(y, x);
        certificates.insert(y, lines);
    }
    Ok((selection, certificates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn pu_examples() {
        let s = FiniteStructure::chain(2).unwrap();
        assert!(check_pu(&f("X sub Y"), &s, &b()).unwrap());
        assert!(!check_pu(&f("sing(X) & X sub Y"), &s, &b()).unwrap());
        let c3 = FiniteStructure::chain(3).unwrap();
        assert!(check_pu(&f("(empty(Y) & empty(X)) | (sing(X) & X sub Y)"), &c3, &b()).unwrap());
        assert!(matches!(check_pu(&f("X sub Z"), &s, &b()), Err(UniformizeError::Arity(_))));
    }

    #[test]
    fn lexicographic() {
        let c3 = FiniteStructure::chain(3).unwrap();
        let phi = f("(empty(Y) & empty(X)) | (sing(X) & X sub Y)");
        let u = lex_uniformize(&phi, &c3, &b()).unwrap();
        assert_eq!(u.select(0b110), Some(0b010));
        assert!(u.verify(&c3, &b()).unwrap());
        let id = lex_uniformize(&f("X = Y"), &c3, &b()).unwrap();
        assert!((0..8).all(|y| id.select(y) == Some(y)));
        assert!(matches!(
            lex_uniformize(&f("sing(X) & X sub Y"), &c3, &b()),
            Err(UniformizeError::NotPu(_))
        ));
    }

    #[test]
    fn products() {
        let phi = f("(empty(Y) & empty(X)) | (sing(X) & X sub Y)");
        let c4 = FiniteStructure::chain(4).unwrap();
        let u = product_uniformize(&phi, &c4, 2, &b()).unwrap();
        assert_eq!(u.select(0b1001), Some(0b0001));
        assert!(u.verify(&c4, &b()).unwrap());
        assert!(swap_test(&phi, &c4, 2, &b()).unwrap());
        let one = FiniteStructure::chain(1).unwrap();
        let p = product_uniformize(&phi, &one, 1, &b()).unwrap();
        assert_eq!(p.selection, lex_uniformize(&phi, &one, &b()).unwrap().selection);
        assert!(product_uniformize(&phi, &c4, 3, &b()).is_err());
    }

    #[test]
    fn trees() {
        let phi = f("(empty(Y) & empty(X)) | (sing(X) & X sub Y)");
        let t = FiniteTree::new(vec![None, Some(0), Some(0)]).unwrap();
        let u = tree_uniformize(&phi, &t, &[], &b()).unwrap();
        assert_eq!(u.select(0b110), Some(0b010));
        assert!(u.verify(&t.structure(), &b()).unwrap());
        let chain = FiniteTree::chain(3).unwrap();
        let u = tree_uniformize(&phi, &chain, &[], &b()).unwrap();
        assert!(u.verify(&chain.structure(), &b()).unwrap());
    }
}
