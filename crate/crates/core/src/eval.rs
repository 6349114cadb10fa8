//! Brute-force theory evaluation, decision, projections and characteristic
//! formulas.

use std::collections::HashSet;

use crate::formula::{positional_name, Formula, VariableContext};
use crate::structure::{subsets, FiniteStructure, Mask};
use crate::theory::{AtomType, Budget, Memo, Theory, TheoryError};

/// The level-0 type of `sets` in `s`.
pub fn atoms_of(s: &FiniteStructure, sets: &[Mask]) -> AtomType {
    let l = sets.len();
    let mut t = AtomType::new(l);
    let single = |m: Mask| (m.count_ones() == 1).then(|| m.trailing_zeros() as usize);
    for (i, &a) in sets.iter().enumerate() {
        t.set_sing(i, a.count_ones() == 1);
        t.set_empty(i, a == 0);
        for (j, &b) in sets.iter().enumerate() {
            t.set_sub(i, j, a & !b == 0);
            if let (Some(x), Some(y)) = (single(a), single(b)) {
                t.set_lt(i, j, s.less(x, y));
            }
        }
    }
    debug_assert_eq!(t.arity(), l);
    t
}

/// `Th^n(s; sets)` by direct recursion over all subsets.
pub fn eval_theory(
    s: &FiniteStructure,
    sets: &[Mask],
    n: usize,
    budget: &Budget,
) -> Result<Theory, TheoryError> {
    if sets.iter().any(|m| m & !s.universe() != 0) {
        return Err(TheoryError::Domain(
            "predicate set is not contained in the universe".into(),
        ));
    }
    budget.check_exponent(s.size() * n)?;
    let mut stack = sets.to_vec();
    Ok(eval_rec(s, &mut stack, n))
}

/// `Th^n` of `s` with its named sets, in the order they were added.
pub fn eval_named(s: &FiniteStructure, n: usize, budget: &Budget) -> Result<Theory, TheoryError> {
    let sets: Vec<Mask> = s.named().iter().map(|(_, m)| *m).collect();
    eval_theory(s, &sets, n, budget)
}

fn eval_rec(s: &FiniteStructure, sets: &mut Vec<Mask>, n: usize) -> Theory {
    let l = sets.len();
    if n == 0 {
        return Theory::atoms(atoms_of(s, sets));
    }
    let members: Vec<Theory> = if n == 1 {
        let mut seen = HashSet::new();
        for b in subsets(s.universe()) {
            sets.push(b);
            seen.insert(atoms_of(s, sets));
            sets.pop();
        }
        seen.into_iter().map(Theory::atoms).collect()
    } else {
        let mut seen = HashSet::new();
        for b in subsets(s.universe()) {
            sets.push(b);
            seen.insert(eval_rec(s, sets, n - 1));
            sets.pop();
        }
        seen.into_iter().collect()
    };
    Theory::set(l, members).expect("every structure has the empty subset")
}

/// Theory of the empty chain with `arity` (necessarily empty) sets.
pub fn empty_theory(level: usize, arity: usize) -> Theory {
    static MEMO: Memo<(usize, usize)> = Memo::new();
    MEMO.get_or_try((level, arity), || {
        Ok(if level == 0 {
            Theory::atoms(AtomType::all_empty(arity))
        } else {
            Theory::set(arity, [empty_theory(level - 1, arity + 1)])?
        })
    })
    .expect("empty theory is well formed")
}

/// Keeps the variables listed in `keep`, in that order.
pub fn project(t: &Theory, keep: &[usize]) -> Result<Theory, TheoryError> {
    let l = t.arity();
    for (a, &i) in keep.iter().enumerate() {
        if i >= l || keep[..a].contains(&i) {
            return Err(TheoryError::Arity(format!(
                "projection {keep:?} is not a list of distinct positions below {l}"
            )));
        }
    }
    Ok(project_unchecked(t, keep))
}

fn project_unchecked(t: &Theory, keep: &[usize]) -> Theory {
    static MEMO: Memo<(u32, Vec<usize>)> = Memo::new();
    if keep.len() == t.arity() && keep.iter().enumerate().all(|(a, &i)| a == i) {
        return t.clone();
    }
    MEMO.get_or_try((t.id(), keep.to_vec()), || {
        if let Some(a) = t.atom_type() {
            return Ok(Theory::atoms(a.select(keep)));
        }
        let mut inner = keep.to_vec();
        inner.push(t.arity());
        Theory::set(
            keep.len(),
            t.members().iter().map(|m| project_unchecked(m, &inner)),
        )
    })
    .expect("projection preserves shape")
}

/// Forgets the variable at `pos`.
pub fn drop_var(t: &Theory, pos: usize) -> Result<Theory, TheoryError> {
    if pos >= t.arity() {
        return Err(TheoryError::Arity(format!(
            "position {pos} out of range for arity {}",
            t.arity()
        )));
    }
    let keep: Vec<usize> = (0..t.arity()).filter(|&i| i != pos).collect();
    Ok(project_unchecked(t, &keep))
}

/// Inserts a variable interpreted by the empty set at `pos` (padding).
pub fn insert_empty_var(t: &Theory, pos: usize) -> Result<Theory, TheoryError> {
    static MEMO: Memo<(u32, usize)> = Memo::new();
    let l = t.arity();
    if pos > l {
        return Err(TheoryError::Arity(format!("position {pos} out of range for arity {l}")));
    }
    MEMO.get_or_try((t.id(), pos), || {
        if let Some(a) = t.atom_type() {
            let old = |i: usize| if i < pos { i } else { i - 1 };
            let mut b = AtomType::new(l + 1);
            for i in 0..=l {
                if i == pos {
                    b.set_empty(i, true);
                    for j in 0..=l {
                        b.set_sub(i, j, true);
                    }
                    continue;
                }
                b.set_sing(i, a.sing(old(i)));
                b.set_empty(i, a.empty(old(i)));
                for j in 0..=l {
                    if j == pos {
                        b.set_sub(i, j, a.empty(old(i)));
                    } else {
                        b.set_sub(i, j, a.sub(old(i), old(j)));
                        b.set_lt(i, j, a.lt(old(i), old(j)));
                    }
                }
            }
            return Ok(Theory::atoms(b));
        }
        let members = t
            .members()
            .iter()
            .map(|m| insert_empty_var(m, pos))
            .collect::<Result<Vec<_>, _>>()?;
        Theory::set(l + 1, members)
    })
}

/// One level down: the common drop-last projection of the members.
pub fn reduce_one(t: &Theory) -> Result<Theory, TheoryError> {
    static MEMO: Memo<u32> = Memo::new();
    if t.level() == 0 {
        return Err(TheoryError::Arity("cannot reduce a level-0 theory".into()));
    }
    MEMO.get_or_try(t.id(), || {
        let l = t.arity();
        let mut iter = t.members().iter().map(|m| drop_var(m, l));
        let first = iter.next().expect("nonempty")?;
        for other in iter {
            if other? != first {
                return Err(TheoryError::Coherence(
                    "members disagree on their drop-last projection".into(),
                ));
            }
        }
        Ok(first)
    })
}

/// The level-`m` theory of any realization of `t`.
pub fn reduce(t: &Theory, m: usize) -> Result<Theory, TheoryError> {
    if m > t.level() {
        return Err(TheoryError::Arity(format!(
            "cannot reduce level {} to level {m}",
            t.level()
        )));
    }
    let mut cur = t.clone();
    while cur.level() > m {
        cur = reduce_one(&cur)?;
    }
    Ok(cur)
}

/// Checks the full coherence condition recursively.
pub fn check_coherent(t: &Theory) -> Result<(), TheoryError> {
    if t.level() == 0 {
        return if t.atom_type().expect("level 0").respects_forced_facts() {
            Ok(())
        } else {
            Err(TheoryError::Coherence("level-0 type violates a forced fact".into()))
        };
    }
    reduce(t, 0)?;
    for m in t.members() {
        check_coherent(m)?;
    }
    Ok(())
}

/// Decides `phi` on `t`, reading free variables positionally: `X0..` when
/// they fit, otherwise in the natural order of [`VariableContext::of`].
pub fn decide(phi: &Formula, t: &Theory) -> Result<bool, TheoryError> {
    let positional = VariableContext::positional(t.arity());
    let ctx = if phi.free_vars().iter().all(|v| positional.position(v).is_some()) {
        positional
    } else {
        VariableContext::of(phi)
    };
    decide_in(phi, &ctx, t)
}

/// Decides `phi` on `t`, the `i`-th variable of `ctx` naming position `i`.
pub fn decide_in(phi: &Formula, ctx: &VariableContext, t: &Theory) -> Result<bool, TheoryError> {
    if ctx.arity() != t.arity() {
        return Err(TheoryError::Arity(format!(
            "context has {} variables, theory has arity {}",
            ctx.arity(),
            t.arity()
        )));
    }
    if let Some(v) = phi.free_vars().into_iter().find(|v| ctx.position(v).is_none()) {
        return Err(TheoryError::Arity(format!("free variable {v} not in context")));
    }
    if phi.dp() > t.level() {
        return Err(TheoryError::Arity(format!(
            "quantifier depth {} exceeds theory level {}",
            phi.dp(),
            t.level()
        )));
    }
    let mut names = ctx.names().to_vec();
    dec(phi, &mut names, t)
}

fn dec(phi: &Formula, names: &mut Vec<String>, t: &Theory) -> Result<bool, TheoryError> {
    let pos = |v: &str, names: &[String]| names.iter().rposition(|n| n == v).expect("checked");
    let base = || -> Result<Theory, TheoryError> { reduce(t, 0) };
    Ok(match phi {
        Formula::True => true,
        Formula::False => false,
        Formula::Sing(v) => base()?.atom_type().unwrap().sing(pos(v, names)),
        Formula::Empty(v) => base()?.atom_type().unwrap().empty(pos(v, names)),
        Formula::Sub(a, b) => base()?.atom_type().unwrap().sub(pos(a, names), pos(b, names)),
        Formula::Less(a, b) => base()?.atom_type().unwrap().lt(pos(a, names), pos(b, names)),
        Formula::Eq(a, b) => base()?.atom_type().unwrap().eq(pos(a, names), pos(b, names)),
        Formula::Not(f) => !dec(f, names, t)?,
        Formula::And(a, b) => dec(a, names, t)? && dec(b, names, t)?,
        Formula::Or(a, b) => dec(a, names, t)? || dec(b, names, t)?,
        Formula::Implies(a, b) => !dec(a, names, t)? || dec(b, names, t)?,
        Formula::Exists(v, f) | Formula::Forall(v, f) => {
            let universal = matches!(phi, Formula::Forall(..));
            names.push(v.clone());
            let mut result = universal;
            for m in t.members() {
                if dec(f, names, m)? != universal {
                    result = !universal;
                    break;
                }
            }
            names.pop();
            result
        }
    })
}

/// A formula over `X0..X{l-1}` of depth `level(t)` defining `t`.
pub fn characteristic_formula(t: &Theory) -> Formula {
    if let Some(a) = t.atom_type() {
        return Formula::conj(literal_formulas(a));
    }
    let x = positional_name(t.arity());
    let parts: Vec<Formula> = t.members().iter().map(characteristic_formula).collect();
    Formula::and(
        Formula::conj(parts.iter().map(|p| Formula::exists(x.clone(), p.clone()))),
        Formula::forall(x, Formula::disj(parts)),
    )
}

/// The level-0 payload as signed atomic formulas.
fn literal_formulas(a: &AtomType) -> Vec<Formula> {
    let x = positional_name;
    let sign = |v: bool, f: Formula| if v { f } else { Formula::not(f) };
    let l = a.arity();
    let mut out = Vec::new();
    for i in 0..l {
        out.push(sign(a.sing(i), Formula::sing(x(i))));
        out.push(sign(a.empty(i), Formula::empty(x(i))));
    }
    for i in 0..l {
        for j in 0..l {
            if i != j {
                out.push(sign(a.sub(i, j), Formula::sub(x(i), x(j))));
                out.push(sign(a.lt(i, j), Formula::less(x(i), x(j))));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::structure::model_check;

    fn chain(n: usize) -> FiniteStructure {
        FiniteStructure::chain(n).unwrap()
    }

    fn th(n: usize, sets: &[Mask], level: usize) -> Theory {
        eval_theory(&chain(n), sets, level, &Budget::default()).unwrap()
    }

    #[test]
    fn one_point_chain_level_zero() {
        let t = th(1, &[1], 0);
        let a = t.atom_type().unwrap();
        assert!(a.sing(0) && !a.empty(0) && a.sub(0, 0));
    }

    #[test]
    fn two_point_chain_has_three_member_types() {
        assert_eq!(th(2, &[], 1).members().len(), 3);
        let t = th(0, &[], 1);
        assert_eq!(t.members().len(), 1);
        assert_eq!(t, empty_theory(1, 0));
    }

    #[test]
    fn decide_examples() {
        let f = parse("EX X. sing(X)").unwrap();
        assert!(decide(&f, &th(2, &[], 1)).unwrap());
        assert!(!decide(&f, &th(0, &[], 1)).unwrap());
        let least = parse("EX X. ALL Y. (sing(Y) -> (X=Y | X<Y))").unwrap();
        assert!(decide(&least, &th(3, &[], 2)).unwrap());
        assert!(decide(&f, &th(2, &[], 0)).is_err());
    }

    #[test]
    fn reduce_matches_lower_evaluation() {
        for n in 0..=3 {
            for a in 0..(1u64 << n) {
                let t = th(n, &[a], 2);
                assert_eq!(reduce(&t, 2).unwrap(), t);
                for m in 0..2 {
                    assert_eq!(reduce(&t, m).unwrap(), th(n, &[a], m));
                }
            }
        }
    }

    #[test]
    fn reduce_rejects_incoherent_sets() {
        // realized on different chains, the members project to different arity-1 types
        let mixed = Theory::set(1, [th(1, &[1, 0], 0), th(2, &[3, 0], 0)]).unwrap();
        assert!(matches!(reduce(&mixed, 0), Err(TheoryError::Coherence(_))));
    }

    #[test]
    fn drop_and_pad_are_inverse() {
        for n in 0..=3 {
            for a in 0..(1u64 << n) {
                let t = th(n, &[a], 2);
                assert_eq!(drop_var(&t, 0).unwrap(), th(n, &[], 2));
                let padded = insert_empty_var(&t, 1).unwrap();
                assert_eq!(padded, th(n, &[a, 0], 2));
                assert_eq!(drop_var(&padded, 1).unwrap(), t);
            }
        }
        assert_eq!(drop_var(&th(1, &[1], 0), 0).unwrap().arity(), 0);
        assert!(drop_var(&th(1, &[1], 0), 1).is_err());
    }

    #[test]
    fn characteristic_formula_of_empty_type() {
        let t = th(2, &[0], 0);
        assert_eq!(characteristic_formula(&t).to_string(), "~sing(X0) & empty(X0)");
    }

    #[test]
    fn characteristic_formula_roundtrip_small() {
        let b = Budget::default();
        for n in 0..=3 {
            for level in 0..=2 {
                let t = th(n, &[], level);
                let psi = characteristic_formula(&t);
                assert_eq!(psi.dp(), level);
                for m in 0..=3 {
                    let holds = model_check(&chain(m), &psi, &[], &b).unwrap();
                    assert_eq!(holds, th(m, &[], level) == t, "n={n} m={m} level={level}");
                }
            }
        }
    }

    #[test]
    fn serialization_roundtrip() {
        for n in 0..=3 {
            for a in 0..(1u64 << n) {
                let t = th(n, &[a], 2);
                let text = t.to_string();
                assert_eq!(crate::serial::parse_theory(&text).unwrap(), t);
            }
        }
        assert_eq!(th(1, &[1], 0).to_string(), "[sing(X0),~empty(X0)]");
        assert_eq!(th(0, &[], 0).to_string(), "[]");
    }
}
