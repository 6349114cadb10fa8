//! Definable well orders on scattered chains given as terms.

use mso_compose::{intended_type, synthesize_wellorder, verify_wellorder, ChainTerm};

fn main() {
    for text in [
        "(concat (fin 2) omega)",
        "(concat (rev omega) omega)",
        "(omegasum (prefix) (period (rev omega)))",
        "(omegasum (prefix) (period (rev (omegasum (prefix) (period (rev omega))))))",
    ] {
        let t: ChainTerm = text.parse().expect("term");
        let cert = synthesize_wellorder(&t).expect("degree at least one");
        println!("{t}: degree {}, well ordered as {}", cert.degree, intended_type(&t));
        for p in &cert.params {
            println!("  parameter {p}");
        }
        println!("  {}", verify_wellorder(&cert, &t, 500, 0).expect("samples"));
    }
}
