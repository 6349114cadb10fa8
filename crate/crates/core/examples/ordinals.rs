//! Ordinal arithmetic below ω^ω and rearrangements of interval partitions.

use mso_compose::partition::default_bound;
use mso_compose::{decomposition_search, ord_add, ord_mul, partition_order_type, IntervalPartition, OrdinalCnf};

fn main() {
    let w = OrdinalCnf::omega();
    let a = ord_add(&ord_mul(&w, &w), &OrdinalCnf::finite(3));
    println!("w*w + 3 = {a}, 3 + w*w = {}", ord_add(&OrdinalCnf::finite(3), &ord_mul(&w, &w)));

    // move the last three points in front
    let p = IntervalPartition::parse(a.clone(), "[w^2, w^2+3) ; [0, w^2)").expect("partition");
    let b = partition_order_type(&p).expect("valid");
    println!("{p} has order type {b}");
    match decomposition_search(&a, &b, default_bound(&a, &b)) {
        Some((g1, g2)) => println!("{a} = ({g1}) + ({g2}) and {b} = ({g2}) + ({g1})"),
        None => println!("no decomposition"),
    }
}
