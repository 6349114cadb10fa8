//! Choosing one `X` per `Y`: along a chain, blockwise on a product, and
//! along the sub-branches of a tree.

use mso_compose::{lex_uniformize, parse, product_uniformize, swap_test, tree_uniformize, Budget, FiniteStructure, FiniteTree};

fn main() {
    let budget = Budget::default();
    let phi = parse("(empty(Y) & empty(X)) | (sing(X) & X sub Y)").expect("formula");

    let chain = FiniteStructure::chain(3).expect("chain");
    let lex = lex_uniformize(&phi, &chain, &budget).expect("p.u. on chains");
    print!("{lex}");

    let product = FiniteStructure::chain(6).expect("chain");
    let u = product_uniformize(&phi, &product, 3, &budget).expect("p.u.");
    println!("product of two blocks: Y = 100100 -> X = {:06b}", u.select(0b100100).unwrap_or(0));
    println!("swap test: {}", swap_test(&phi, &product, 3, &budget).expect("p.u."));

    let cherry = FiniteTree::new(vec![None, Some(0), Some(0)]).expect("tree");
    let t = tree_uniformize(&phi, &cherry, &[], &budget).expect("p.u. on trees");
    println!("tree, level {}: verified {}", t.level, t.verify(&cherry.structure(), &budget).expect("small"));
}
