//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use arbcolour::config::PartitionConfig;
use arbcolour::graph::{EdgeKey, Graph, VertexId};
use arbcolour::harness::{self, Algo, Op, RunOptions, StreamKind, UpdateStream};
use arbcolour::oracle;
use arbcolour::palette::{Colour, Palette};
use arbcolour::static_colouring::{self as st};
use arbcolour::{AdaptiveEngine, DynamicMaxEngine};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gen(kind: &str, n: usize, steps: usize, seed: u64) -> UpdateStream {
    harness::generate_stream(kind.parse().unwrap(), n, steps, seed).unwrap()
}

/// Degrees and exact arboricity after every prefix of a small stream.
struct Replay {
    degree: Vec<usize>,
}

impl Replay {
    fn new(n: usize) -> Self {
        Self { degree: vec![0; n] }
    }

    fn apply(&mut self, op: Op, e: EdgeKey) {
        for v in [e.lo(), e.hi()] {
            match op {
                Op::Insert => self.degree[v as usize] += 1,
                Op::Delete => self.degree[v as usize] -= 1,
            }
        }
    }

    fn delta(&self, e: EdgeKey) -> usize {
        self.degree[e.lo() as usize].max(self.degree[e.hi() as usize])
    }
}

/// `α_t` for `t = 0..=len`.
fn prefix_alphas(s: &UpdateStream) -> Vec<usize> {
    (0..=s.len())
        .map(|t| oracle::exact_arboricity(&s.graph_after(t)).unwrap())
        .collect()
}

fn small_streams() -> Vec<(String, UpdateStream)> {
    let mut out = Vec::new();
    let kinds = [
        "forest",
        "forests(2)",
        "forests(3)",
        "grid-planar",
        "erdos-renyi(0.3)",
        "erdos-renyi(0.7)",
        "sliding-window(20)",
        "star-of-trees",
    ];
    for (i, kind) in kinds.iter().enumerate() {
        for (j, n) in [8usize, 10, 12].into_iter().enumerate() {
            let seed = (i * 3 + j) as u64;
            out.push((format!("{kind} n={n}"), gen(kind, n, 1500, seed)));
        }
    }
    out
}

fn random_small_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(2..=12usize);
    let p: f64 = rng.gen_range(0.1..0.9);
    let mut g = Graph::new(n);
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Full grid with one diagonal per cell: planar, so `α <= 3`.
fn triangulated_grid(side: u32) -> Graph {
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
    g
}

fn insert_only(g: &Graph) -> UpdateStream {
    let events = g
        .edges()
        .iter()
        .map(|k| harness::Event::insert(k.lo(), k.hi()))
        .collect();
    UpdateStream::new(g.n(), events).unwrap()
}

fn criterion_1() -> Outcome {
    let kinds = [
        "forest",
        "forests(2)",
        "forests(3)",
        "grid-planar",
        "erdos-renyi",
        "sliding-window",
        "star-of-trees",
    ];
    let mut audits = 0;
    for i in 0..20usize {
        let n = [50usize, 200, 1000][i % 3];
        let kind: StreamKind = match kinds[i % kinds.len()] {
            "erdos-renyi" => StreamKind::ErdosRenyi(4.0 / n as f64),
            "sliding-window" => StreamKind::SlidingWindow(2 * n),
            k => k.parse().unwrap(),
        };
        let s = harness::generate_stream(kind, n, 100_000, 100 + i as u64).unwrap();
        for algo in [
            Algo::DynamicMax,
            Algo::DynamicAdaptive,
            Algo::GreedyBaseline,
        ] {
            let mut opts = RunOptions::new(algo);
            opts.verify_every = 100;
            opts.alpha_max = kind.declared_alpha();
            let m =
                harness::run(&s, &opts, None).map_err(|e| format!("{kind} n={n} {algo}: {e}"))?;
            audits += m.audits;
            if let Some((step, report)) = m.failures.first() {
                return Err(format!("{kind} n={n} {algo} step {step}: {report}"));
            }
        }
        let still = insert_only(&s.final_graph());
        for algo in [Algo::StaticDegeneracy, Algo::StaticHPartition] {
            let m =
                harness::run(&still, &RunOptions::new(algo), None).map_err(|e| e.to_string())?;
            audits += m.audits;
            ensure(m.is_clean(), || {
                format!("{kind} n={n} {algo}: final colouring not proper")
            })?;
        }
    }
    Ok(format!("20 streams x 10^5 events, {audits} clean audits"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut edges = 0;
    for i in 0..100 {
        let g = random_small_graph(&mut rng);
        let alpha = oracle::exact_arboricity(&g).unwrap();
        let c = st::colour_by_order(&g, &st::degeneracy_order(&g).order).unwrap();
        ensure(oracle::verify_graph_colouring(&g, &c).is_clean(), || {
            format!("graph {i} improper")
        })?;
        for &k in g.edges() {
            let col = c.get(k).unwrap() as usize;
            ensure(col + 2 <= g.edge_delta(k) + 2 * alpha, || {
                format!(
                    "graph {i}: edge {k} colour {col}, Δ(uv) {}, α {alpha}",
                    g.edge_delta(k)
                )
            })?;
            edges += 1;
        }
    }
    let mut planar = Vec::new();
    for side in [10, 20, 40] {
        planar.push(triangulated_grid(side));
    }
    for (n, seed) in [(100, 1), (400, 2), (1600, 3)] {
        planar.push(gen("grid-planar", n, 4 * n, seed).final_graph());
    }
    for (i, g) in planar.iter().enumerate() {
        let c = st::colour_by_order(g, &st::degeneracy_order(g).order).unwrap();
        ensure(oracle::verify_graph_colouring(g, &c).is_clean(), || {
            format!("planar {i} improper")
        })?;
        for &k in g.edges() {
            let col = c.get(k).unwrap() as usize;
            ensure(col <= g.edge_delta(k) + 4, || {
                format!("planar {i}: edge {k} colour {col}")
            })?;
            edges += 1;
        }
    }
    Ok(format!(
        "100 small graphs + 6 planar instances, {edges} edges within bound"
    ))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cases: Vec<(String, Graph, usize)> = Vec::new();
    for i in 0..100 {
        let g = random_small_graph(&mut rng);
        let alpha = oracle::exact_arboricity(&g).unwrap().max(1);
        cases.push((format!("small {i}"), g, alpha));
    }
    for side in [10, 30] {
        cases.push((format!("grid {side}"), triangulated_grid(side), 3));
    }
    for (kind, alpha) in [("forest", 1), ("forests(2)", 2), ("forests(3)", 3)] {
        for n in [100, 1000, 5000] {
            let s = gen(kind, n, 3 * n, n as u64);
            cases.push((format!("{kind} n={n}"), s.final_graph(), alpha));
        }
    }
    cases.push((
        "star-of-trees".into(),
        gen("star-of-trees", 2501, 2500, 0).final_graph(),
        1,
    ));
    for (name, g, alpha) in &cases {
        let p = st::build_hpartition(g, *alpha, None).map_err(|e| format!("{name}: {e}"))?;
        let log_bound = (g.n() as f64).log2().floor() as u32 + 1;
        ensure(p.k <= log_bound, || {
            format!("{name}: {} levels > {log_bound}", p.k)
        })?;
        for v in 0..g.n() as VertexId {
            let out = p.out_degree(g, v);
            ensure(out <= 4 * alpha, || {
                format!("{name}: vertex {v} out-degree {out}")
            })?;
        }
        let sizes = p.suffix_sizes();
        for (i, w) in sizes.windows(2).enumerate() {
            ensure(2 * w[1] <= w[0], || {
                format!(
                    "{name}: |Z_{}| = {} > |Z_{}|/2 = {}/2",
                    i + 2,
                    w[1],
                    i + 1,
                    w[0]
                )
            })?;
        }
    }
    Ok(format!("{} graphs", cases.len()))
}

/// Replays `s` and returns the largest colour held by any edge after any event.
fn dynamic_max_colour_ever(s: &UpdateStream, config: PartitionConfig) -> Result<Colour, String> {
    let mut e = DynamicMaxEngine::with_config(s.capacity, config, s.max_degree());
    let mut best = 0;
    for ev in &s.events {
        match ev.op {
            Op::Insert => e
                .insert(ev.edge.lo(), ev.edge.hi())
                .map_err(|x| x.to_string())?,
            Op::Delete => e
                .delete(ev.edge.lo(), ev.edge.hi())
                .map_err(|x| x.to_string())?,
        };
        best = best.max(e.max_colour().unwrap_or(0));
    }
    let report = oracle::audit_engine(&e);
    ensure(report.is_clean(), || report.to_string())?;
    Ok(best)
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    let mut tightest = 0i64;
    let streams = [
        ("forest", 500, 1),
        ("forests(2)", 300, 2),
        ("forests(3)", 200, 3),
        ("grid-planar", 400, 3),
        ("star-of-trees", 2501, 1),
    ];
    for (kind, n, alpha) in streams {
        let s = gen(kind, n, 20_000, 4);
        let cfg = PartitionConfig::for_alpha(alpha, n).unwrap();
        let best = dynamic_max_colour_ever(&s, cfg).map_err(|e| format!("{kind}: {e}"))?;
        let bound = s.max_degree() + 20 * alpha;
        ensure(best as usize <= bound, || {
            format!("{kind} n={n}: colour {best} > {bound}")
        })?;
        tightest = tightest.max(best as i64 - bound as i64);
        checked += 1;
    }
    for (name, s) in small_streams() {
        let alpha = prefix_alphas(&s).into_iter().max().unwrap().max(1);
        let cfg = PartitionConfig::for_alpha(alpha, s.capacity).unwrap();
        let best = dynamic_max_colour_ever(&s, cfg).map_err(|e| format!("{name}: {e}"))?;
        let bound = s.max_degree() + 20 * alpha;
        ensure(best as usize <= bound, || {
            format!("{name}: colour {best} > {bound}")
        })?;
        tightest = tightest.max(best as i64 - bound as i64);
        checked += 1;
    }
    Ok(format!(
        "{checked} streams, closest approach {tightest} to the bound"
    ))
}

fn criterion_5() -> Outcome {
    let mut checks = 0u64;
    let mut run = |name: &str, s: &UpdateStream, alphas: Option<&[usize]>| -> Result<(), String> {
        let mut e = AdaptiveEngine::new(s.capacity);
        let beta = e.config().beta;
        let mut shadow = Replay::new(s.capacity);
        for (t, ev) in s.events.iter().enumerate() {
            match ev.op {
                Op::Insert => e
                    .insert(ev.edge.lo(), ev.edge.hi())
                    .map_err(|x| x.to_string())?,
                Op::Delete => e
                    .delete(ev.edge.lo(), ev.edge.hi())
                    .map_err(|x| x.to_string())?,
            };
            shadow.apply(ev.op, ev.edge);
            for (k, c) in e.colouring().iter() {
                let lower = if e.level(k.lo()) <= e.level(k.hi()) {
                    k.lo()
                } else {
                    k.hi()
                };
                let delta = shadow.delta(k);
                let bound = (delta as f64 + 2.0 * beta * e.cap(lower) as f64).floor() as usize;
                ensure(c as usize <= bound, || {
                    format!("{name} step {}: {k} colour {c} > {bound}", t + 1)
                })?;
                if let Some(a) = alphas {
                    let bound = delta as f64 + 16.0 * beta * a[t + 1] as f64;
                    ensure(c as f64 <= bound, || {
                        format!("{name} step {}: {k} colour {c} > Δ + 16βα = {bound}", t + 1)
                    })?;
                }
                checks += 1;
            }
        }
        let report = oracle::audit_engine(&e);
        ensure(report.is_clean(), || format!("{name}: {report}"))
    };
    let big = [
        ("forest", 300),
        ("forests(3)", 200),
        ("grid-planar", 400),
        ("erdos-renyi(0.02)", 200),
        ("sliding-window(400)", 200),
        ("star-of-trees", 901),
    ];
    for (kind, n) in big {
        let s = gen(kind, n, 10_000, 5);
        run(&format!("{kind} n={n}"), &s, None)?;
    }
    for (name, s) in small_streams() {
        let alphas = prefix_alphas(&s);
        run(&name, &s, Some(&alphas))?;
    }
    Ok(format!("{checks} edge-after-event checks"))
}

/// Forest on 200 vertices, a clique on `size` of them inserted and deleted
/// again; checks the surviving forest edges against `Δ_t(uv) + 2β·2`.
fn clique_round_trip(size: usize, seed: u64) -> Outcome {
    let n = 200;
    let tree = gen("forest", n, n - 1, seed);
    let mut e = AdaptiveEngine::new(n);
    let mut degree = vec![0usize; n];
    for ev in &tree.events {
        e.insert(ev.edge.lo(), ev.edge.hi())
            .map_err(|x| x.to_string())?;
        degree[ev.edge.lo() as usize] += 1;
        degree[ev.edge.hi() as usize] += 1;
    }
    let forest: Vec<EdgeKey> = tree.events.iter().map(|ev| ev.edge).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut members: Vec<VertexId> = (0..n as VertexId).collect();
    rand::seq::SliceRandom::shuffle(&mut members[..], &mut rng);
    members.truncate(size);
    let mut clique = Vec::new();
    for (i, &u) in members.iter().enumerate() {
        for &v in &members[i + 1..] {
            let k = EdgeKey::new(u, v).unwrap();
            if !forest.contains(&k) {
                e.insert(u, v).map_err(|x| x.to_string())?;
                degree[u as usize] += 1;
                degree[v as usize] += 1;
                clique.push(k);
            }
        }
    }
    let peak_group = members.iter().map(|&v| e.group(v)).max().unwrap();
    for k in &clique {
        e.delete(k.lo(), k.hi()).map_err(|x| x.to_string())?;
        degree[k.lo() as usize] -= 1;
        degree[k.hi() as usize] -= 1;
    }
    let beta = e.config().beta;
    let mut worst = i64::MIN;
    for k in &forest {
        let c = e.colour_of(k.lo(), k.hi()).unwrap();
        let delta = degree[k.lo() as usize].max(degree[k.hi() as usize]);
        let bound = (delta as f64 + 2.0 * beta * 2.0).floor() as usize;
        worst = worst.max(c as i64 - bound as i64);
        ensure(c as usize <= bound, || {
            format!("forest edge {k} colour {c} > Δ_t(uv) + 4β = {bound}")
        })?;
    }
    let report = oracle::audit_engine(&e);
    ensure(report.is_clean(), || report.to_string())?;
    Ok(format!(
        "K{size}: peak group {peak_group}, max slack {worst}"
    ))
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    for size in [12, 48] {
        for seed in [6, 7] {
            parts.push(clique_round_trip(size, seed)?);
        }
    }
    Ok(parts.join("; "))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let key = EdgeKey::new(0, 1).unwrap();
    let fill = |rng: &mut ChaCha8Rng| -> (Palette, BTreeSet<Colour>) {
        let delta = rng.gen_range(1..=48usize);
        let mut p = Palette::for_delta(delta);
        let cap = p.capacity() as Colour;
        let mut set = BTreeSet::new();
        let mode = rng.gen_range(0..3);
        let density: f64 = rng.gen();
        for c in 1..=cap {
            let used = match mode {
                0 => rng.gen_bool(density),
                1 => c <= (density * cap as f64) as Colour,
                _ => rng.gen_bool(0.9) && c <= (density * cap as f64) as Colour + 1,
            };
            if used {
                p.mark(c, key).unwrap();
                set.insert(c);
            }
        }
        (p, set)
    };
    for i in 0..1_000_000u32 {
        let (p, a) = fill(&mut rng);
        let (q, b) = fill(&mut rng);
        let got = p.find_joint_free(&q);
        let want = oracle::min_free_colour(&a, &b);
        ensure(got == want, || {
            format!("pair {i}: search {got}, scan {want}")
        })?;
        ensure(got as usize <= a.len() + b.len() + 1, || {
            format!("pair {i}: {got} > a + b + 1")
        })?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("10^6 pairs agree in {secs:.1}s"))
}

fn criterion_8() -> Outcome {
    let mut lines = Vec::new();
    for algo in [Algo::DynamicMax, Algo::DynamicAdaptive] {
        let mut per_update = Vec::new();
        for exp in [8u32, 10, 12, 14] {
            let n = 1usize << exp;
            let s = gen("forest", n, 50 * n, 8);
            let mut opts = RunOptions::new(algo);
            opts.verify_every = 0;
            opts.alpha_max = Some(1);
            let m = harness::run(&s, &opts, None).map_err(|e| e.to_string())?;
            ensure(m.is_clean(), || format!("{algo} n={n}: final audit failed"))?;
            let last = m.rows.last().unwrap();
            per_update.push((last.level_moves + last.cascade_recolours) as f64 / s.len() as f64);
        }
        for (i, w) in per_update.windows(2).enumerate() {
            ensure(w[0] > 0.0, || {
                format!("{algo}: zero recourse at n=2^{}", 8 + 2 * i)
            })?;
            let ratio = w[1] / w[0];
            ensure(ratio <= 3.0, || {
                format!("{algo}: ratio {ratio:.2} at n=2^{}", 10 + 2 * i)
            })?;
        }
        let shown: Vec<String> = per_update.iter().map(|r| format!("{r:.4}")).collect();
        lines.push(format!("{algo} [{}]", shown.join(", ")));
    }
    Ok(format!("recourse/T {}", lines.join("; ")))
}

fn criterion_9() -> Outcome {
    let eps = 0.5;
    let mut checked = 0;
    for (name, s) in small_streams() {
        let alpha = prefix_alphas(&s).into_iter().max().unwrap().max(1);
        let cfg = PartitionConfig::with_epsilon(alpha, s.capacity, eps).unwrap();
        let best = dynamic_max_colour_ever(&s, cfg).map_err(|e| format!("{name}: {e}"))?;
        let bound = s.max_degree() as f64 + (2.0 + 3.0 * eps) * (2.0 + eps) * alpha as f64;
        ensure(best as f64 <= bound, || {
            format!("{name}: colour {best} > {bound}")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} streams"))
}

fn criterion_10() -> Outcome {
    let s = gen("star-of-trees", 3601, 7200, 10);
    let delta = s.max_degree();
    let alpha = st::degeneracy_order(&s.union_graph()).degeneracy;
    ensure(delta >= 50 * alpha, || {
        format!("Δ {delta} < 50·α = {}", 50 * alpha)
    })?;
    let mut best = [0; 2];
    for (slot, algo) in [Algo::DynamicAdaptive, Algo::GreedyBaseline]
        .into_iter()
        .enumerate()
    {
        let m = harness::run(&s, &RunOptions::new(algo), None).map_err(|e| e.to_string())?;
        ensure(m.is_clean(), || format!("{algo}: audit failed"))?;
        best[slot] = m.max_colour_ever;
    }
    ensure(best[0] < best[1], || {
        format!("adaptive {} >= greedy {}", best[0], best[1])
    })?;
    Ok(format!(
        "Δ {delta}, α {alpha}: adaptive {} < greedy {}",
        best[0], best[1]
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("properness of every engine under audit", criterion_1),
        ("static degeneracy-order colour bound", criterion_2),
        ("static H-partition shape", criterion_3),
        ("dynamic-max colour bound", criterion_4),
        ("adaptive per-edge colour bound", criterion_5),
        ("adaptivity after clique deletion", criterion_6),
        ("palette search equals linear scan", criterion_7),
        ("recourse scaling across n", criterion_8),
        ("epsilon preset colour bound", criterion_9),
        ("adaptive beats greedy on star-of-trees", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
