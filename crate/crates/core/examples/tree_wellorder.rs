//! Sub-branch decompositions and the induced well order of a finite tree.

use mso_compose::{a2_wellorder, tameness_profile, tree_corpus, FiniteTree};

fn main() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/shoots.tree"))
        .expect("example data");
    let (t, _) = FiniteTree::parse(&text).expect("tree file");
    let w = a2_wellorder(&t);
    print!("{w}");
    println!("verified: {:?}", w.verify());
    println!("tameness: {:?}", tameness_profile(&t));

    let trees = tree_corpus(7);
    let colours = trees.iter().map(|t| a2_wellorder(t).colours()).max().unwrap_or(0);
    println!("{} trees up to 7 nodes, at most {colours} colours used", trees.len());
}
