//! Formally possible theories, enumerated explicitly.

use mso_compose::{enumerate_types, eval_theory, Budget, FiniteStructure};

fn main() {
    let budget = Budget::default();
    for (n, l) in [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)] {
        let space = enumerate_types(n, l, &budget).expect("small space");
        println!("T({n},{l}) has {} members", space.len());
    }
    let space = enumerate_types(1, 1, &budget).expect("small space");
    let mut realized = std::collections::BTreeSet::new();
    for k in 0..=5 {
        let s = FiniteStructure::chain(k).expect("chain");
        for q in 0..1u64 << k {
            let t = eval_theory(&s, &[q], 1, &budget).expect("small");
            assert!(space.contains(&t));
            realized.insert(t);
        }
    }
    println!("{} of them occur on chains of at most 5 points", realized.len());
}
