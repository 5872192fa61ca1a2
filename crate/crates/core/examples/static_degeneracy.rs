//! Colours a triangulated grid along a degeneracy order and compares each
//! edge with its `Δ(uv) + d - 1` bound.

use arbcolour::oracle::verify_graph_colouring;
use arbcolour::static_colouring::{colour_by_order, degeneracy_order};
use arbcolour::Graph;

fn main() {
    let side = 12u32;
    let id = |r: u32, c: u32| r * side + c;
    let mut g = Graph::new((side * side) as usize);
    for r in 0..side {
        for c in 0..side {
            if c + 1 < side {
                g.add_edge(id(r, c), id(r, c + 1)).unwrap();
            }
            if r + 1 < side {
                g.add_edge(id(r, c), id(r + 1, c)).unwrap();
            }
            if r + 1 < side && c + 1 < side {
                g.add_edge(id(r, c), id(r + 1, c + 1)).unwrap();
            }
        }
    }

    let order = degeneracy_order(&g);
    let colouring = colour_by_order(&g, &order.order).unwrap();
    assert!(verify_graph_colouring(&g, &colouring).is_clean());

    let worst = g
        .edges()
        .iter()
        .map(|&k| {
            (g.edge_delta(k) + order.degeneracy - 1) as i64 - colouring.get(k).unwrap() as i64
        })
        .min()
        .unwrap();
    println!(
        "n {} m {} Δ {} degeneracy {}",
        g.n(),
        g.m(),
        g.max_degree(),
        order.degeneracy
    );
    println!(
        "max colour {}, {} distinct, tightest slack {}",
        colouring.max_colour().unwrap(),
        colouring.distinct_colours(),
        worst
    );
}
