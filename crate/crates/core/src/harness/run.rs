//! Replays a stream through one algorithm, auditing and recording metrics.
//!
//! Metrics CSV columns, one header row:
//!
//! | column | meaning |
//! |---|---|
//! | `step` | events applied so far |
//! | `live_edges` | edges present |
//! | `current_delta` | current maximum degree |
//! | `declared_alpha` | `--alpha-max` or the generator's bound, empty if unknown |
//! | `measured_alpha` | exact for `n <= 16`, degeneracy (an upper bound) otherwise |
//! | `max_colour` | largest colour in use |
//! | `palette_searches` | cumulative joint free-colour searches |
//! | `cascade_recolours` | cumulative collision recolours |
//! | `level_moves` | cumulative level increments and decrements |
//! | `wall_ms` | milliseconds since the replay started |

use std::collections::HashMap;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use super::greedy::GreedyEngine;
use super::stream::{Op, UpdateStream};
use crate::adaptive::AdaptiveEngine;
use crate::config::{ConfigError, GroupedConfig, PartitionConfig};
use crate::dynamic::DynamicMaxEngine;
use crate::engine::EngineError;
use crate::graph::{EdgeKey, Graph};
use crate::oracle::{self, AuditReport};
use crate::palette::Colour;
use crate::static_colouring::{self, StaticError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algo {
    StaticDegeneracy,
    StaticHPartition,
    DynamicMax,
    DynamicAdaptive,
    GreedyBaseline,
}

impl Algo {
    pub const ALL: [Algo; 5] = [
        Algo::StaticDegeneracy,
        Algo::StaticHPartition,
        Algo::DynamicMax,
        Algo::DynamicAdaptive,
        Algo::GreedyBaseline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::StaticDegeneracy => "static-degeneracy",
            Self::StaticHPartition => "static-hpartition",
            Self::DynamicMax => "dynamic-max",
            Self::DynamicAdaptive => "dynamic-adaptive",
            Self::GreedyBaseline => "greedy-baseline",
        }
    }

    pub fn is_static(self) -> bool {
        matches!(self, Self::StaticDegeneracy | Self::StaticHPartition)
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|a| a.name()).collect();
                format!(
                    "unknown algorithm `{s}`; expected one of {}",
                    names.join(", ")
                )
            })
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub algo: Algo,
    pub beta: Option<f64>,
    pub epsilon: Option<f64>,
    /// Defaults to the degeneracy of every edge the stream ever inserts.
    pub alpha_max: Option<usize>,
    /// Defaults to the largest degree reached during the replay.
    pub delta_max: Option<usize>,
    /// Audit every `k` events; 0 audits only at the end.
    pub verify_every: usize,
    /// Known arboricity bound, reported in the metrics.
    pub declared_alpha: Option<usize>,
}

impl RunOptions {
    pub fn new(algo: Algo) -> Self {
        Self {
            algo,
            beta: None,
            epsilon: None,
            alpha_max: None,
            delta_max: None,
            verify_every: 100,
            declared_alpha: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Static(#[from] StaticError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricsRow {
    pub step: usize,
    pub live_edges: usize,
    pub current_delta: usize,
    pub declared_alpha: Option<usize>,
    pub measured_alpha: usize,
    pub max_colour: Colour,
    pub palette_searches: u64,
    pub cascade_recolours: u64,
    pub level_moves: u64,
    pub wall_ms: f64,
}

#[derive(Clone, Debug)]
pub struct RunMetrics {
    pub rows: Vec<MetricsRow>,
    /// Audits that found violations, with the step they ran at.
    pub failures: Vec<(usize, AuditReport)>,
    pub audits: usize,
    /// Largest colour any edge held at a checkpoint or was given on insert.
    pub max_colour_ever: Colour,
}

impl RunMetrics {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

trait Replay {
    fn insert(&mut self, e: EdgeKey) -> Result<Colour, EngineError>;
    fn delete(&mut self, e: EdgeKey) -> Result<(), EngineError>;
    fn audit(&self) -> AuditReport;
    fn max_colour(&self) -> Option<Colour>;
    /// Palette searches, cascade recolours, level moves.
    fn counters(&self) -> (u64, u64, u64);
}

impl Replay for DynamicMaxEngine {
    fn insert(&mut self, e: EdgeKey) -> Result<Colour, EngineError> {
        DynamicMaxEngine::insert(self, e.lo(), e.hi())
    }
    fn delete(&mut self, e: EdgeKey) -> Result<(), EngineError> {
        DynamicMaxEngine::delete(self, e.lo(), e.hi()).map(drop)
    }
    fn audit(&self) -> AuditReport {
        oracle::audit_engine(self)
    }
    fn max_colour(&self) -> Option<Colour> {
        DynamicMaxEngine::max_colour(self)
    }
    fn counters(&self) -> (u64, u64, u64) {
        let s = self.stats();
        (s.palette_searches, s.cascade_recolours, s.level_moves())
    }
}

impl Replay for AdaptiveEngine {
    fn insert(&mut self, e: EdgeKey) -> Result<Colour, EngineError> {
        AdaptiveEngine::insert(self, e.lo(), e.hi())
    }
    fn delete(&mut self, e: EdgeKey) -> Result<(), EngineError> {
        AdaptiveEngine::delete(self, e.lo(), e.hi()).map(drop)
    }
    fn audit(&self) -> AuditReport {
        oracle::audit_engine(self)
    }
    fn max_colour(&self) -> Option<Colour> {
        AdaptiveEngine::max_colour(self)
    }
    fn counters(&self) -> (u64, u64, u64) {
        let s = self.stats();
        (s.palette_searches, s.cascade_recolours, s.level_moves())
    }
}

impl Replay for GreedyEngine {
    fn insert(&mut self, e: EdgeKey) -> Result<Colour, EngineError> {
        GreedyEngine::insert(self, e.lo(), e.hi())
    }
    fn delete(&mut self, e: EdgeKey) -> Result<(), EngineError> {
        GreedyEngine::delete(self, e.lo(), e.hi()).map(drop)
    }
    fn audit(&self) -> AuditReport {
        oracle::verify_proper(self.colouring().iter().map(|(k, c)| (k, Some(c))))
    }
    fn max_colour(&self) -> Option<Colour> {
        GreedyEngine::max_colour(self)
    }
    fn counters(&self) -> (u64, u64, u64) {
        (self.palette_searches, 0, 0)
    }
}

/// Live edges and degrees, tracked independently of the engine under test.
struct Shadow {
    capacity: usize,
    edges: Vec<EdgeKey>,
    index: HashMap<EdgeKey, usize>,
    degree: Vec<usize>,
}

impl Shadow {
    fn new(capacity: usize) -> Self {
        Self {
            capacity,
            edges: Vec::new(),
            index: HashMap::new(),
            degree: vec![0; capacity],
        }
    }

    fn apply(&mut self, op: Op, e: EdgeKey) {
        match op {
            Op::Insert => {
                self.index.insert(e, self.edges.len());
                self.edges.push(e);
                self.degree[e.lo() as usize] += 1;
                self.degree[e.hi() as usize] += 1;
            }
            Op::Delete => {
                let i = self.index.remove(&e).expect("validated stream");
                self.edges.swap_remove(i);
                if let Some(&moved) = self.edges.get(i) {
                    self.index.insert(moved, i);
                }
                self.degree[e.lo() as usize] -= 1;
                self.degree[e.hi() as usize] -= 1;
            }
        }
    }

    fn graph(&self) -> Graph {
        Graph::from_edges(self.capacity, self.edges.iter().map(|k| (k.lo(), k.hi())))
            .expect("shadow holds a simple graph")
    }

    fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }
}

fn measured_alpha(g: &Graph) -> usize {
    oracle::arboricity_upper_bound(g)
}

/// Degeneracy of every edge the stream ever inserts, at least 1.
pub fn default_alpha_max(stream: &UpdateStream) -> usize {
    static_colouring::degeneracy_order(&stream.union_graph())
        .degeneracy
        .max(1)
}

fn partition_config(
    stream: &UpdateStream,
    opts: &RunOptions,
) -> Result<PartitionConfig, ConfigError> {
    let alpha = opts.alpha_max.unwrap_or_else(|| default_alpha_max(stream));
    let mut config = match opts.epsilon {
        Some(eps) => PartitionConfig::with_epsilon(alpha, stream.capacity, eps)?,
        None => PartitionConfig::for_alpha(alpha, stream.capacity)?,
    };
    if let Some(beta) = opts.beta {
        config = PartitionConfig::custom(beta, config.d, config.levels)?;
    }
    Ok(config)
}

fn grouped_config(stream: &UpdateStream, opts: &RunOptions) -> Result<GroupedConfig, ConfigError> {
    let config = match opts.epsilon {
        Some(eps) => GroupedConfig::with_epsilon(stream.capacity, eps)?,
        None => GroupedConfig::new(stream.capacity),
    };
    match opts.beta {
        Some(beta) => config.with_beta(beta),
        None => Ok(config),
    }
}

/// Replays `stream` with the chosen algorithm and writes metrics to
/// `metrics_out` if given.
pub fn run(
    stream: &UpdateStream,
    opts: &RunOptions,
    metrics_out: Option<&mut dyn Write>,
) -> Result<RunMetrics, RunError> {
    let metrics = match opts.algo {
        Algo::StaticDegeneracy | Algo::StaticHPartition => run_static(stream, opts)?,
        Algo::DynamicMax => {
            let config = partition_config(stream, opts)?;
            let delta = opts.delta_max.unwrap_or_else(|| stream.max_degree());
            let engine = DynamicMaxEngine::with_config(stream.capacity, config, delta);
            replay(engine, stream, opts)?
        }
        Algo::DynamicAdaptive => {
            let config = grouped_config(stream, opts)?;
            replay(
                AdaptiveEngine::with_config(stream.capacity, config),
                stream,
                opts,
            )?
        }
        Algo::GreedyBaseline => replay(GreedyEngine::new(stream.capacity), stream, opts)?,
    };
    if let Some(out) = metrics_out {
        metrics.write_csv(out)?;
    }
    Ok(metrics)
}

fn replay<E: Replay>(
    mut engine: E,
    stream: &UpdateStream,
    opts: &RunOptions,
) -> Result<RunMetrics, RunError> {
    let start = Instant::now();
    let mut shadow = Shadow::new(stream.capacity);
    let mut metrics = RunMetrics {
        rows: Vec::new(),
        failures: Vec::new(),
        audits: 0,
        max_colour_ever: 0,
    };
    let declared = opts.alpha_max.or(opts.declared_alpha);
    let checkpoint = |engine: &E, shadow: &Shadow, step: usize, metrics: &mut RunMetrics| {
        let report = engine.audit();
        metrics.audits += 1;
        if !report.is_clean() {
            metrics.failures.push((step, report));
        }
        let max_colour = engine.max_colour().unwrap_or(0);
        metrics.max_colour_ever = metrics.max_colour_ever.max(max_colour);
        let (searches, cascades, moves) = engine.counters();
        metrics.rows.push(MetricsRow {
            step,
            live_edges: shadow.edges.len(),
            current_delta: shadow.max_degree(),
            declared_alpha: declared,
            measured_alpha: measured_alpha(&shadow.graph()),
            max_colour,
            palette_searches: searches,
            cascade_recolours: cascades,
            level_moves: moves,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    };
    for (i, e) in stream.events.iter().enumerate() {
        match e.op {
            Op::Insert => {
                let c = engine.insert(e.edge)?;
                metrics.max_colour_ever = metrics.max_colour_ever.max(c);
            }
            Op::Delete => engine.delete(e.edge)?,
        }
        shadow.apply(e.op, e.edge);
        let step = i + 1;
        if opts.verify_every > 0 && step % opts.verify_every == 0 && step < stream.len() {
            checkpoint(&engine, &shadow, step, &mut metrics);
        }
    }
    checkpoint(&engine, &shadow, stream.len(), &mut metrics);
    Ok(metrics)
}

fn run_static(stream: &UpdateStream, opts: &RunOptions) -> Result<RunMetrics, RunError> {
    if stream.has_deletes() {
        return Err(RunError::Usage(format!(
            "{} needs an insert-only stream",
            opts.algo
        )));
    }
    let start = Instant::now();
    let graph = stream.final_graph();
    let alpha = opts
        .alpha_max
        .unwrap_or_else(|| oracle::arboricity_upper_bound(&graph).max(1));
    let colouring = match opts.algo {
        Algo::StaticDegeneracy => {
            let order = static_colouring::degeneracy_order(&graph);
            static_colouring::colour_by_order(&graph, &order.order)?
        }
        _ => {
            let partition = static_colouring::build_hpartition(&graph, alpha, opts.epsilon)?;
            static_colouring::colour_by_partition(&graph, &partition)?
        }
    };
    let report = oracle::verify_graph_colouring(&graph, &colouring);
    let max_colour = colouring.max_colour().unwrap_or(0);
    let row = MetricsRow {
        step: stream.len(),
        live_edges: graph.m(),
        current_delta: graph.max_degree(),
        declared_alpha: opts.alpha_max.or(opts.declared_alpha),
        measured_alpha: oracle::arboricity_upper_bound(&graph),
        max_colour,
        palette_searches: graph.m() as u64,
        cascade_recolours: 0,
        level_moves: 0,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let failures = if report.is_clean() {
        Vec::new()
    } else {
        vec![(stream.len(), report)]
    };
    Ok(RunMetrics {
        rows: vec![row],
        failures,
        audits: 1,
        max_colour_ever: max_colour,
    })
}
