//! Additive colourings and their homogeneous sets.

use mso_compose::{additive_ramsey, idempotent_power, AdditiveColoring, SemigroupTable};

fn main() {
    let z3 = SemigroupTable::cyclic(3);
    // letters of a word in Z/3; the colour of i < j is the sum strictly between
    let word = [1, 2, 0, 1, 1, 2, 1, 0, 2, 1, 1];
    let prefix: Vec<usize> = word.iter().scan(0, |acc, &x| {
        *acc = z3.add(*acc, x);
        Some(*acc)
    }).collect();
    let colouring = AdditiveColoring::new(word.len(), z3.clone(), |i, j| (prefix[j] + 3 - prefix[i]) % 3)
        .expect("additive");
    for size in 2..=5 {
        match additive_ramsey(&colouring, size) {
            Some(set) => println!("homogeneous {size}-set {set:?}, colour {}", colouring.colour(set[0], set[1])),
            None => println!("no homogeneous {size}-set"),
        }
    }
    for x in 0..z3.len() {
        println!("idempotent power of {}: {:?}", z3.name(x), idempotent_power(&z3, x));
    }
}
