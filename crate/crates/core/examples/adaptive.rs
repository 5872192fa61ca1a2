//! Local colour bounds: a star of trees where only the hub gets high degree.

use arbcolour::harness::{generate_stream, GreedyEngine, Op, StreamKind};
use arbcolour::oracle::audit_engine;
use arbcolour::AdaptiveEngine;

fn main() {
    let stream = generate_stream(StreamKind::StarOfTrees, 1600, 4000, 3).unwrap();
    let mut adaptive = AdaptiveEngine::new(stream.capacity);
    let mut greedy = GreedyEngine::new(stream.capacity);

    let mut worst_slack = i64::MAX;
    for e in &stream.events {
        let (u, v) = e.edge.endpoints();
        match e.op {
            Op::Insert => {
                let c = adaptive.insert(u, v).unwrap();
                worst_slack = worst_slack.min(adaptive.bound_for(e.edge) as i64 - c as i64);
                greedy.insert(u, v).unwrap();
            }
            Op::Delete => {
                adaptive.delete(u, v).unwrap();
                greedy.delete(u, v).unwrap();
            }
        }
    }

    assert!(audit_engine(&adaptive).is_clean());
    let hub = (0..stream.capacity as u32)
        .max_by_key(|&v| adaptive.degree(v))
        .unwrap();
    let (mut at_hub, mut away) = (0, 0);
    for (k, c) in adaptive.colouring().iter() {
        if k.contains(hub) {
            at_hub = at_hub.max(c);
        } else {
            away = away.max(c);
        }
    }
    println!(
        "hub degree {}, group {}",
        adaptive.degree(hub),
        adaptive.group(hub)
    );
    println!("max colour at the hub {at_hub}, elsewhere {away}");
    println!(
        "max colour: adaptive {:?}, greedy {:?}",
        adaptive.max_colour(),
        greedy.max_colour()
    );
    println!("tightest slack against bound_for: {worst_slack}");
    let stats = adaptive.stats();
    println!(
        "degree recolours {}, level recolours {}",
        stats.degree_recolours, stats.level_recolours
    );
}
