//! Peels a random forest union into levels and colours it level by level.

use arbcolour::harness::{generate_stream, StreamKind};
use arbcolour::oracle::verify_graph_colouring;
use arbcolour::static_colouring::{build_hpartition, colour_by_partition};

fn main() {
    let alpha = 3;
    let stream = generate_stream(StreamKind::Forests(alpha), 2000, 6000, 42).unwrap();
    let g = stream.final_graph();

    for epsilon in [None, Some(0.5)] {
        let p = build_hpartition(&g, alpha, epsilon).unwrap();
        let colouring = colour_by_partition(&g, &p).unwrap();
        assert!(verify_graph_colouring(&g, &colouring).is_clean());
        println!(
            "epsilon {:?}: d = {}, {} levels, |Z_i| = {:?}",
            epsilon,
            p.d,
            p.k,
            p.suffix_sizes()
        );
        println!(
            "  Δ {}, max colour {}",
            g.max_degree(),
            colouring.max_colour().unwrap_or(0)
        );
    }
}
