//! Runs the auditor on a healthy engine, then on one with a corrupted palette.

use arbcolour::oracle::{arboricity_upper_bound, audit_engine, exact_arboricity};
use arbcolour::{DynamicMaxEngine, Graph};

fn main() {
    let mut k5 = Graph::new(5);
    let mut engine = DynamicMaxEngine::new(5, 3, 4).unwrap();
    for u in 0..5 {
        for v in u + 1..5 {
            k5.add_edge(u, v).unwrap();
            engine.insert(u, v).unwrap();
        }
    }
    println!(
        "K5 arboricity {} (upper bound {})",
        exact_arboricity(&k5).unwrap(),
        arboricity_upper_bound(&k5)
    );
    println!("clean engine:\n{}", audit_engine(&engine));

    let c = engine.colour_of(0, 1).unwrap();
    engine.full_palette_mut(0).corrupt_bit_for_tests(c);
    let report = audit_engine(&engine);
    println!("after corrupting colour {c} at vertex 0:\n{report}");
    assert!(!report.is_clean());
}
