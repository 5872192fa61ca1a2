//! Fully dynamic colouring that adapts to the current degrees and arboricity.
//!
//! Levels are blocked into groups of `L` levels; a vertex in group `g` has
//! cap `d(v) = 2^g`, may keep at most `2β·d(v)` out-neighbours and, above
//! level 1, needs at least `d(v)` neighbours in the level below. Every edge
//! `uv` with `l(u) <= l(v)` keeps a colour of at most `Δ(uv) + 2β·d(u)`
//! (Invariant 3'), where `Δ(uv)` uses the current degrees. Two repairs keep
//! that bound as the graph shrinks:
//!
//! - after a deletion, each endpoint `w` probes its palette at the one colour
//!   per group that the degree drop can invalidate and recolours the offender;
//! - a level decrement recolours every edge whose lower endpoint dropped,
//!   since its cap may have halved.
//!
//! Recolouring is deferred until the partition is valid again, so the
//! out-palette bound the search relies on always holds.

use crate::colouring::Colouring;
use crate::config::{ConfigError, GroupedConfig};
use crate::engine::{EngineError, EngineStats, EngineView, LevelEngine, LevelPolicy};
use crate::graph::{EdgeId, EdgeKey, GraphError, LevelledAdjacency, VertexId};
use crate::palette::{Colour, Palette};

#[derive(Clone, Debug)]
struct GroupPolicy(GroupedConfig);

impl LevelPolicy for GroupPolicy {
    fn out_cap(&self, level: u32) -> usize {
        self.0.out_cap(level)
    }

    fn down_min(&self, level: u32) -> usize {
        self.0.down_min(level)
    }

    fn max_level(&self) -> u32 {
        self.0.levels()
    }
}

#[derive(Clone, Debug)]
pub struct AdaptiveEngine {
    core: LevelEngine<GroupPolicy>,
}

impl AdaptiveEngine {
    pub fn new(capacity: usize) -> Self {
        Self::with_config(capacity, GroupedConfig::new(capacity))
    }

    pub fn with_epsilon(capacity: usize, epsilon: f64) -> Result<Self, ConfigError> {
        Ok(Self::with_config(
            capacity,
            GroupedConfig::with_epsilon(capacity, epsilon)?,
        ))
    }

    pub fn with_config(capacity: usize, config: GroupedConfig) -> Self {
        let mut core = LevelEngine::new(capacity, GroupPolicy(config));
        core.recolour_on_decrement = true;
        Self { core }
    }

    pub fn config(&self) -> &GroupedConfig {
        &self.core.policy.0
    }

    pub fn capacity(&self) -> usize {
        self.core.adj.capacity()
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId) -> Result<Colour, EngineError> {
        let key = self.core.key(u, v)?;
        let id = self.core.attach(key)?;
        self.core.recover();
        self.core.flush_pending();
        Ok(self.core.colour_edge(id))
    }

    /// Removes `uv`; returns the colour it had.
    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<Colour, EngineError> {
        let key = self.core.key(u, v)?;
        let colour = self.core.detach(key)?;
        for w in [key.lo(), key.hi()] {
            self.adapt_to_degree_drop(w);
        }
        self.core.recover();
        self.core.flush_pending();
        colour.ok_or(EngineError::NotColoured(key))
    }

    /// `w` just lost one edge. In each group `g` at most one edge at `w` can
    /// sit exactly on its old bound `deg_old(w) + 2β·2^g`; those are the only
    /// edges the drop can push over the bound.
    fn adapt_to_degree_drop(&mut self, w: VertexId) {
        let old_degree = self.core.adj.degree(w) + 1;
        let config = self.core.policy.0.clone();
        for group in 1..=config.groups {
            let probe = crate::config::floor_int(
                old_degree as f64 + 2.0 * config.beta * config.cap_of_group(group) as f64,
            ) as Colour;
            let Some(key) = self.core.full_palette(w).owner_of(probe) else {
                continue;
            };
            if self.violates_bound(key) {
                let id = self.core.adj.edge_id(key).expect("palette owner is live");
                self.core.uncolour(id);
                self.core.defer(key);
                self.core.stats.degree_recolours += 1;
            }
        }
    }

    /// Invariant-3' bound for a live edge.
    pub fn bound_for(&self, key: EdgeKey) -> usize {
        let adj = &self.core.adj;
        let (a, b) = key.endpoints();
        let delta = adj.degree(a).max(adj.degree(b));
        let lower = adj.level(a).min(adj.level(b));
        self.config().colour_bound(delta, lower)
    }

    fn violates_bound(&self, key: EdgeKey) -> bool {
        self.core
            .colour_of(key)
            .is_some_and(|c| c as usize > self.bound_for(key))
    }

    /// Colours an uncoloured edge.
    pub fn recolour(&mut self, u: VertexId, v: VertexId) -> Result<Colour, EngineError> {
        let key = self.core.key(u, v)?;
        let id = self.core.id(key)?;
        if self.core.colour_by_id(id).is_some() {
            return Err(EngineError::AlreadyColoured(key));
        }
        Ok(self.core.colour_edge(id))
    }

    pub fn recover(&mut self) {
        self.core.recover();
        self.core.flush_pending();
    }

    /// Lowers an Invariant-2' violator by one level, recolours the edges whose
    /// lower endpoint dropped, and settles whatever became dirty.
    pub fn adaptive_decrement(&mut self, v: VertexId) -> Result<(), EngineError> {
        crate::graph::check_vertex(v, self.capacity())?;
        if self.core.adj.level(v) == 1 {
            return Err(GraphError::LevelFloor(v).into());
        }
        if !self.core.violates_down_min(v) {
            return Err(EngineError::NotDirty {
                vertex: v,
                invariant: "down-degree",
            });
        }
        self.core.decrement(v);
        self.recover();
        Ok(())
    }

    /// `k'`, the highest non-empty level.
    pub fn max_level(&self) -> u32 {
        self.core.max_level()
    }

    pub fn level(&self, v: VertexId) -> u32 {
        self.core.adj.level(v)
    }

    pub fn group(&self, v: VertexId) -> u32 {
        self.config().group_of(self.level(v))
    }

    /// `d(v) = 2^{g(v)}`.
    pub fn cap(&self, v: VertexId) -> usize {
        self.config().cap_at(self.level(v))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.core.adj.degree(v)
    }

    pub fn edge_count(&self) -> usize {
        self.core.adj.edge_count()
    }

    pub fn is_dirty(&self, v: VertexId) -> bool {
        self.core.is_dirty(v)
    }

    pub fn colour_of(&self, u: VertexId, v: VertexId) -> Option<Colour> {
        EdgeKey::new(u, v).ok().and_then(|k| self.core.colour_of(k))
    }

    pub fn colouring(&self) -> Colouring {
        self.core.colouring()
    }

    pub fn max_colour(&self) -> Option<Colour> {
        self.core.max_colour()
    }

    pub fn stats(&self) -> EngineStats {
        self.core.stats
    }
}

impl EngineView for AdaptiveEngine {
    fn adjacency(&self) -> &LevelledAdjacency {
        &self.core.adj
    }

    fn colour_by_id(&self, id: EdgeId) -> Option<Colour> {
        self.core.colour_by_id(id)
    }

    fn full_palette(&self, v: VertexId) -> &Palette {
        self.core.full_palette(v)
    }

    fn out_palette(&self, v: VertexId) -> &Palette {
        self.core.out_palette(v)
    }

    fn queued_work(&self) -> usize {
        self.core.queued_work()
    }

    fn out_cap(&self, level: u32) -> usize {
        self.core.policy.out_cap(level)
    }

    fn down_min(&self, level: u32) -> usize {
        self.core.policy.down_min(level)
    }

    fn colour_bound(&self, key: EdgeKey) -> Option<usize> {
        Some(self.bound_for(key))
    }
}
