//! Generates a stream, writes it as text, parses it back and replays it under
//! every dynamic algorithm, printing the last CSV metrics row of each.

use arbcolour::harness::{generate_stream, parse_stream, run, Algo, RunOptions, StreamKind};

fn main() {
    let kind: StreamKind = "sliding-window(200)".parse().unwrap();
    let stream = generate_stream(kind, 500, 3000, 11).unwrap();
    let text = stream.to_text();
    let parsed = parse_stream(&text).unwrap();
    assert_eq!(parsed, stream);
    eprintln!("{} events over {} vertices", parsed.len(), parsed.capacity);

    for algo in [
        Algo::DynamicMax,
        Algo::DynamicAdaptive,
        Algo::GreedyBaseline,
    ] {
        let mut opts = RunOptions::new(algo);
        opts.verify_every = 500;
        let mut csv = Vec::new();
        let metrics = run(&parsed, &opts, Some(&mut csv)).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        let mut lines = csv.lines();
        if algo == Algo::DynamicMax {
            println!("algo,{}", lines.next().unwrap());
        }
        println!("{algo},{}", lines.last().unwrap());
        eprintln!(
            "{algo}: {} audits, clean {}, max colour ever {}",
            metrics.audits,
            metrics.is_clean(),
            metrics.max_colour_ever
        );
    }
}
