//! Colourings of a fixed graph.
//!
//! Both algorithms colour the edges of one vertex at a time, always towards
//! vertices that come later in some order of bounded back-degree `d`. At
//! that moment the vertex itself carries fewer than `d` coloured edges, so
//! the joint smallest-free search stays below `Δ(uv) + d`.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::colouring::Colouring;
use crate::config::{ceil_int, floor_int};
use crate::graph::{EdgeKey, Graph, VertexId};
use crate::palette::Palette;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StaticError {
    #[error("alpha must be at least 1, got {0}")]
    Alpha(usize),
    #[error("epsilon must be positive and finite, got {0}")]
    Epsilon(f64),
    #[error("peeling stalled at level {level} with {remaining} vertices left; alpha is too small")]
    NoProgress { level: u32, remaining: usize },
    #[error("order has {got} vertices, graph has {expected}")]
    OrderLength { expected: usize, got: usize },
    #[error("order is not a permutation: vertex {0} repeated or out of range")]
    NotPermutation(VertexId),
    #[error("invalid partition at vertex {vertex}: {detail}")]
    Partition { vertex: VertexId, detail: String },
}

/// An elimination order and its back-degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegeneracyOrder {
    pub order: Vec<VertexId>,
    pub degeneracy: usize,
}

/// Repeatedly removes a minimum-degree vertex, lowest id first.
pub fn degeneracy_order(graph: &Graph) -> DegeneracyOrder {
    let n = graph.n();
    let mut degree: Vec<usize> = (0..n as VertexId).map(|v| graph.degree(v)).collect();
    let mut buckets: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); graph.max_degree() + 1];
    for v in 0..n as VertexId {
        buckets[degree[v as usize]].insert(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut degeneracy = 0;
    let mut low = 0;
    for _ in 0..n {
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop_first().unwrap();
        removed[v as usize] = true;
        degeneracy = degeneracy.max(low);
        order.push(v);
        for &u in graph.neighbours(v) {
            if !removed[u as usize] {
                let du = &mut degree[u as usize];
                buckets[*du].remove(&u);
                *du -= 1;
                buckets[*du].insert(u);
                low = low.min(*du);
            }
        }
    }
    DegeneracyOrder { order, degeneracy }
}

fn position_of(graph: &Graph, order: &[VertexId]) -> Result<Vec<usize>, StaticError> {
    let n = graph.n();
    if order.len() != n {
        return Err(StaticError::OrderLength {
            expected: n,
            got: order.len(),
        });
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v as usize >= n || pos[v as usize] != usize::MAX {
            return Err(StaticError::NotPermutation(v));
        }
        pos[v as usize] = i;
    }
    Ok(pos)
}

struct Greedy {
    palettes: Vec<Palette>,
    colouring: Colouring,
}

impl Greedy {
    fn new(graph: &Graph) -> Self {
        Self {
            palettes: (0..graph.n() as VertexId)
                .map(|v| Palette::for_delta(graph.degree(v)))
                .collect(),
            colouring: Colouring::new(),
        }
    }

    fn colour(&mut self, v: VertexId, u: VertexId) {
        let key = EdgeKey::new(v, u).expect("simple graph");
        let c = self.palettes[v as usize].find_joint_free(&self.palettes[u as usize]);
        for w in [v, u] {
            let p = &mut self.palettes[w as usize];
            p.fit_colour(c);
            p.mark(c, key).expect("joint free colour is free");
        }
        self.colouring.set(key, c);
    }
}

/// Colours the edges from each vertex to the vertices after it, last vertex
/// first. Every edge `uv` gets at most `Δ(uv) + d - 1` for back-degree `d`.
pub fn colour_by_order(graph: &Graph, order: &[VertexId]) -> Result<Colouring, StaticError> {
    let pos = position_of(graph, order)?;
    let mut greedy = Greedy::new(graph);
    for &v in order.iter().rev() {
        let mut later: Vec<VertexId> = graph
            .neighbours(v)
            .iter()
            .copied()
            .filter(|&u| pos[u as usize] > pos[v as usize])
            .collect();
        later.sort_unstable();
        for u in later {
            greedy.colour(v, u);
        }
    }
    Ok(greedy.colouring)
}

/// Levels `H_1..H_k` such that every vertex of `H_i` has at most `d`
/// neighbours in `Z_i = H_i ∪ ... ∪ H_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StaticHPartition {
    /// 1-based level per vertex.
    pub levels: Vec<u32>,
    pub d: f64,
    pub k: u32,
}

impl StaticHPartition {
    /// `|Z_i|` for `i = 1..=k`.
    pub fn suffix_sizes(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.k as usize + 2];
        for &l in &self.levels {
            counts[l as usize] += 1;
        }
        for i in (1..=self.k as usize).rev() {
            counts[i] += counts[i + 1];
        }
        counts[1..=self.k as usize].to_vec()
    }

    /// `deg_{Z_{l(v)}}(v)`.
    pub fn out_degree(&self, graph: &Graph, v: VertexId) -> usize {
        let l = self.levels[v as usize];
        graph
            .neighbours(v)
            .iter()
            .filter(|&&u| self.levels[u as usize] >= l)
            .count()
    }
}

/// Peels every vertex whose active degree is at most `d` into the next
/// level, all at once. `d = 4α`, or `(2+ε)·α` when `epsilon` is given.
pub fn build_hpartition(
    graph: &Graph,
    alpha: usize,
    epsilon: Option<f64>,
) -> Result<StaticHPartition, StaticError> {
    if alpha == 0 {
        return Err(StaticError::Alpha(alpha));
    }
    let d = match epsilon {
        None => 4.0 * alpha as f64,
        Some(e) if e > 0.0 && e.is_finite() => (2.0 + e) * alpha as f64,
        Some(e) => return Err(StaticError::Epsilon(e)),
    };
    let limit = floor_int(d);
    let n = graph.n();
    let mut active_degree: Vec<usize> = (0..n as VertexId).map(|v| graph.degree(v)).collect();
    let mut levels = vec![0u32; n];
    let mut remaining: Vec<VertexId> = (0..n as VertexId).collect();
    let mut level = 0;
    while !remaining.is_empty() {
        level += 1;
        let (peel, keep): (Vec<_>, Vec<_>) = remaining
            .iter()
            .partition(|&&v| active_degree[v as usize] <= limit);
        if peel.is_empty() {
            return Err(StaticError::NoProgress {
                level,
                remaining: keep.len(),
            });
        }
        for &v in &peel {
            levels[v as usize] = level;
        }
        for &v in &peel {
            for &u in graph.neighbours(v) {
                if levels[u as usize] == 0 {
                    active_degree[u as usize] -= 1;
                }
            }
        }
        remaining = keep;
    }
    Ok(StaticHPartition {
        levels,
        d,
        k: level.max(1),
    })
}

fn validate(graph: &Graph, partition: &StaticHPartition) -> Result<(), StaticError> {
    if partition.levels.len() != graph.n() {
        return Err(StaticError::OrderLength {
            expected: graph.n(),
            got: partition.levels.len(),
        });
    }
    let limit = floor_int(partition.d);
    for v in 0..graph.n() as VertexId {
        let l = partition.levels[v as usize];
        if l == 0 || l > partition.k {
            return Err(StaticError::Partition {
                vertex: v,
                detail: format!("level {l} outside 1..={}", partition.k),
            });
        }
        let out = partition.out_degree(graph, v);
        if out > limit {
            return Err(StaticError::Partition {
                vertex: v,
                detail: format!("{out} neighbours at or above its level, limit {limit}"),
            });
        }
    }
    Ok(())
}

/// Colours the edges from `H_i` to `Z_i` for `i = k..1`. Every edge `uv` gets
/// at most `Δ(uv) + floor(d) - 1`.
pub fn colour_by_partition(
    graph: &Graph,
    partition: &StaticHPartition,
) -> Result<Colouring, StaticError> {
    validate(graph, partition)?;
    let mut by_level: Vec<Vec<VertexId>> = vec![Vec::new(); partition.k as usize + 1];
    for v in 0..graph.n() as VertexId {
        by_level[partition.levels[v as usize] as usize].push(v);
    }
    let mut greedy = Greedy::new(graph);
    for i in (1..=partition.k).rev() {
        for &v in &by_level[i as usize] {
            let mut up: Vec<VertexId> = graph
                .neighbours(v)
                .iter()
                .copied()
                .filter(|&u| {
                    let lu = partition.levels[u as usize];
                    lu > i || (lu == i && u > v)
                })
                .collect();
            up.sort_unstable();
            for u in up {
                greedy.colour(v, u);
            }
        }
    }
    Ok(greedy.colouring)
}

/// Largest level count a valid partition can need: `floor(log_b n) + 1`
/// with `b = 2` by default or `(2+ε)/2`.
pub fn level_bound(n: usize, epsilon: Option<f64>) -> u32 {
    let base = epsilon.map_or(2.0, |e| (2.0 + e) / 2.0);
    let n = n.max(1) as f64;
    ceil_int((n.ln() / base.ln()).floor() + 1.0) as u32
}
