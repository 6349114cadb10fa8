//! Sums of theories: finite sums, ω-sums and the ω-power tower.

use mso_compose::{add, eval_theory, omega_power_tower, omega_sum, serialize, Budget, FiniteStructure, TheorySequence};

fn main() {
    let budget = Budget::default();
    let th = |k: usize, q: u64| {
        eval_theory(&FiniteStructure::chain(k).expect("chain"), &[q], 1, &budget).expect("within budget")
    };
    let (a, b) = (th(2, 0b01), th(3, 0b100));
    let sum = add(&a, &b).expect("same shape");
    let direct = th(5, 0b10001);
    println!("Th(C) + Th(D) = Th(C + D): {}", sum == direct);

    let seq = TheorySequence::periodic(1, 1, vec![a.clone()], vec![b.clone()]).expect("periodic");
    let w = omega_sum(&seq, &budget).expect("within budget");
    println!("C + D + D + ... : {}", serialize(&w));

    let one = eval_theory(&FiniteStructure::chain(1).expect("chain"), &[], 1, &budget).expect("small");
    let tower = omega_power_tower(&one, 4, &budget).expect("within budget");
    println!(
        "tower over a point: stabilizes at p = {:?}, closure size {}",
        tower.stabilization, tower.reachable
    );
}
