//! Prints the single-step composition table and checks duality.

use nlixy::{compose, flip, ConceptRelation, Monotonicity};

fn main() {
    println!("{:<6} {:<5} {:<15}", "mon", "rel", "label");
    for mon in Monotonicity::ALL {
        for rel in ConceptRelation::ALL {
            println!("{:<6} {:<5} {:<15}", mon.as_str(), rel.as_str(), compose(mon, rel).as_str());
        }
    }
    for rel in ConceptRelation::ALL {
        assert_eq!(compose(Monotonicity::Down, rel), compose(Monotonicity::Up, flip(rel)));
    }
    println!("duality holds: compose(down, r) == compose(up, flip(r))");
}
