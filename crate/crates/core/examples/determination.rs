//! Does the labelled branch theory determine the tree theory?
//!
//! Runs the experiment on every tree with at most five nodes, every branch
//! and every single predicate, then repeats it with parts of the key removed.

use mso_compose::determination::{determination_experiment, full_corpus, KeyAblation};
use mso_compose::tree::tree_corpus;
use mso_compose::Budget;

fn main() {
    let corpus = full_corpus(&tree_corpus(5), 1);
    for ablation in [KeyAblation::Full, KeyAblation::DropCompletion, KeyAblation::DropLabels] {
        let report = determination_experiment(1, &corpus, ablation, &Budget::default()).expect("small corpus");
        println!("{report}\n");
    }
}
