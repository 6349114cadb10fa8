use mso_compose::structure::bit;
use mso_compose::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn budget() -> Budget {
    Budget::default()
}

fn chain_theory(k: usize, pred: Option<Mask>, n: usize) -> Theory {
    let qs: Vec<Mask> = pred.map(|p| p & ((1 << k) - 1)).into_iter().collect();
    eval_theory(&FiniteStructure::chain(k).unwrap(), &qs, n, &budget()).unwrap()
}

fn ordinal() -> impl Strategy<Value = OrdinalCnf> {
    prop::collection::btree_map(0u32..5, 1u64..4, 0..4).prop_map(|m| {
        OrdinalCnf::from_terms(m.into_iter().rev().collect()).unwrap()
    })
}

fn random_term(rng: &mut StdRng, depth: usize) -> ChainTerm {
    let choice = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..5) };
    match choice {
        0 => ChainTerm::fin(rng.gen_range(1..=3)),
        1 => ChainTerm::omega(),
        2 => ChainTerm::reverse(random_term(rng, depth - 1)),
        3 => ChainTerm::concat((0..2).map(|_| random_term(rng, depth - 1)).collect()),
        _ => ChainTerm::omega_sum(vec![random_term(rng, depth - 1)], vec![random_term(rng, depth - 1)]).unwrap(),
    }
}

/// Parent vector where every node hangs below an earlier one, or is a root.
fn tree() -> impl Strategy<Value = FiniteTree> {
    (1usize..8, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = StdRng::seed_from_u64(seed);
        let parent = (0..n)
            .map(|i| if i == 0 || rng.gen_bool(0.1) { None } else { Some(rng.gen_range(0..i)) })
            .collect();
        FiniteTree::new(parent).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn add_is_associative(a in 0usize..4, b in 0usize..4, c in 0usize..4, p in any::<Mask>(), n in 0usize..3) {
        let (x, y, z) = (chain_theory(a, Some(p), n), chain_theory(b, Some(p >> 4), n), chain_theory(c, Some(p >> 8), n));
        prop_assert_eq!(add(&add(&x, &y).unwrap(), &z).unwrap(), add(&x, &add(&y, &z).unwrap()).unwrap());
    }

    #[test]
    fn add_matches_brute_force(a in 0usize..5, b in 0usize..5, p in any::<Mask>(), n in 0usize..3) {
        let (pa, pb) = (p & ((1 << a) - 1), (p >> 8) & ((1 << b) - 1));
        let sum = chain_theory(a + b, Some(pa | pb << a), n);
        prop_assert_eq!(add(&chain_theory(a, Some(pa), n), &chain_theory(b, Some(pb), n)).unwrap(), sum);
    }

    #[test]
    fn serialization_roundtrip(k in 0usize..5, p in any::<Mask>(), n in 0usize..3) {
        let t = chain_theory(k, Some(p), n);
        prop_assert_eq!(parse_theory(&serialize(&t)).unwrap(), t);
    }

    #[test]
    fn realized_theories_are_formally_possible(k in 0usize..5, p in any::<Mask>(), n in 0usize..3) {
        prop_assert!(is_formally_possible(&chain_theory(k, Some(p), n)).unwrap());
    }

    #[test]
    fn ordinal_sum_laws(a in ordinal(), b in ordinal(), c in ordinal()) {
        let ab = ord_add(&a, &b);
        prop_assert_eq!(ord_add(&ab, &c), ord_add(&a, &ord_add(&b, &c)));
        prop_assert!(a <= ab && b <= ab);
        prop_assert_eq!(ord_left_sub(&a, &ab).unwrap(), b);
    }

    #[test]
    fn ordinal_product_laws(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(ord_mul(&ord_mul(&a, &b), &c), ord_mul(&a, &ord_mul(&b, &c)));
        prop_assert_eq!(ord_mul(&a, &ord_add(&b, &c)), ord_add(&ord_mul(&a, &b), &ord_mul(&a, &c)));
    }

    #[test]
    fn hdeg_ignores_reversal(seed in any::<u64>()) {
        let t = random_term(&mut StdRng::seed_from_u64(seed), 4);
        prop_assert_eq!(ChainTerm::reverse(t.clone()).hdeg(), t.hdeg());
        prop_assert_eq!(ChainTerm::reverse(ChainTerm::reverse(t.clone())), t);
    }

    #[test]
    fn fine_classes_refine_coarse(t in tree(), pick in any::<usize>()) {
        let branches = t.branches();
        let a = branches[pick % branches.len()].iter().fold(0, |m, &x| m | bit(x));
        let coarse = sim_classes(&t, a, SimLevel::Zero).unwrap();
        let fine = sim_classes(&t, a, SimLevel::One).unwrap();
        for f in &fine {
            prop_assert!(coarse.iter().any(|c| f & !c == 0));
        }
        prop_assert_eq!(fine.iter().fold(0, |m, f| m | f), coarse.iter().fold(0, |m, c| m | c));
    }

    #[test]
    fn canonical_relabel_is_isomorphic(t in tree()) {
        let r = t.canonical_relabel();
        prop_assert!(r.is_isomorphic(&t));
        prop_assert_eq!(r.canonical_form(), t.canonical_form());
    }

    #[test]
    fn a2_order_on_random_forests(t in tree()) {
        prop_assert!(a2_wellorder(&t).verify().is_ok());
    }
}
