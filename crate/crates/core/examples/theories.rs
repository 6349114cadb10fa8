//! Theories of small chains, checked against direct model checking.

use mso_compose::{characteristic_formula, decide, eval_theory, model_check, parse, Budget, FiniteStructure};

fn main() {
    let budget = Budget::default();
    let s = FiniteStructure::chain(4).expect("small chain");
    let q = 0b1010;
    let t = eval_theory(&s, &[q], 2, &budget).expect("within budget");
    println!("Th^2 of a 4-chain with X0 = {{1,3}} has {} members", t.members().len());

    let phi = parse("EX Z. (sing(Z) & Z sub X0 & ALL U. (sing(U) & U sub X0 -> ~(U < Z)))").expect("formula");
    let by_theory = decide(&phi, &t).expect("depth fits");
    let direct = model_check(&s, &phi, &[("X0", q)], &budget).expect("small");
    println!("{phi}\n  from the theory: {by_theory}, by model checking: {direct}");

    // the characteristic formula picks out exactly the structures with this theory
    let psi = characteristic_formula(&t);
    for x in [0b1010, 0b0101, 0b0011] {
        let holds = model_check(&s, &psi, &[("X0", x)], &budget).expect("small");
        println!("  psi_t on X0 = {x:04b}: {holds}");
    }
}
