//! Fully dynamic colouring of a union of three forests with a fixed
//! arboricity bound.

use arbcolour::harness::{generate_stream, Op, StreamKind};
use arbcolour::oracle::audit_engine;
use arbcolour::DynamicMaxEngine;

fn main() {
    let n = 1000;
    let stream = generate_stream(StreamKind::Forests(3), n, 20_000, 7).unwrap();
    let delta = stream.max_degree();
    let mut engine = DynamicMaxEngine::new(stream.capacity, 3, delta).unwrap();

    for e in &stream.events {
        let (u, v) = e.edge.endpoints();
        match e.op {
            Op::Insert => engine.insert(u, v).map(|_| ()),
            Op::Delete => engine.delete(u, v).map(|_| ()),
        }
        .unwrap();
    }

    let report = audit_engine(&engine);
    let stats = engine.stats();
    println!(
        "{} live edges, Δ_max {}, bound {}",
        engine.edge_count(),
        delta,
        engine.config().colour_bound(delta)
    );
    println!(
        "max colour {:?}, top level {}",
        engine.max_colour(),
        engine.max_level()
    );
    println!(
        "level moves {}, cascade recolours {}, palette searches {}",
        stats.level_moves(),
        stats.cascade_recolours,
        stats.palette_searches
    );
    println!(
        "audit: {}",
        if report.is_clean() {
            "clean"
        } else {
            "violations"
        }
    );
}
