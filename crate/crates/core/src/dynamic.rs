//! Fully dynamic colouring with `Δ_max + β·d` colours for a fixed
//! out-degree threshold `d` derived from a declared `α_max`.
//!
//! The engine keeps an H-partition where every vertex has at most `floor(βd)`
//! out-neighbours and, above level 1, at least `ceil(d)` neighbours in the
//! level right below it. An uncoloured edge `uv` with `l(u) <= l(v)` takes
//! the smallest colour free in `P_{Z_{l(u)}}(u) ∩ P_G(v)`; a collision at `u`
//! can only involve an edge to a strictly lower level, which is recoloured the
//! same way.

use crate::colouring::Colouring;
use crate::config::{ConfigError, PartitionConfig};
use crate::engine::{EngineError, EngineStats, EngineView, LevelEngine, LevelPolicy};
use crate::graph::{EdgeId, EdgeKey, GraphError, LevelledAdjacency, VertexId};
use crate::palette::{Colour, Palette};

#[derive(Clone, Debug)]
struct FixedPolicy {
    out_cap: usize,
    down_min: usize,
    levels: u32,
}

impl LevelPolicy for FixedPolicy {
    fn out_cap(&self, _level: u32) -> usize {
        self.out_cap
    }

    fn down_min(&self, _level: u32) -> usize {
        self.down_min
    }

    fn max_level(&self) -> u32 {
        self.levels
    }
}

#[derive(Clone, Debug)]
pub struct DynamicMaxEngine {
    core: LevelEngine<FixedPolicy>,
    config: PartitionConfig,
    delta_max: usize,
    observed_delta: usize,
}

impl DynamicMaxEngine {
    /// Default preset `d = 4·α_max`, `β = 5`.
    pub fn new(capacity: usize, alpha_max: usize, delta_max: usize) -> Result<Self, ConfigError> {
        Ok(Self::with_config(
            capacity,
            PartitionConfig::for_alpha(alpha_max, capacity)?,
            delta_max,
        ))
    }

    pub fn with_config(capacity: usize, config: PartitionConfig, delta_max: usize) -> Self {
        let policy = FixedPolicy {
            out_cap: config.out_cap(),
            down_min: config.down_min(),
            levels: config.levels,
        };
        Self {
            core: LevelEngine::new(capacity, policy),
            config,
            delta_max,
            observed_delta: 0,
        }
    }

    pub fn config(&self) -> &PartitionConfig {
        &self.config
    }

    pub fn capacity(&self) -> usize {
        self.core.adj.capacity()
    }

    pub fn delta_max(&self) -> usize {
        self.delta_max
    }

    /// Largest degree seen so far.
    pub fn observed_delta_max(&self) -> usize {
        self.observed_delta
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId) -> Result<Colour, EngineError> {
        let key = self.core.key(u, v)?;
        let id = self.core.attach(key)?;
        self.observed_delta = self
            .observed_delta
            .max(self.core.adj.degree(u))
            .max(self.core.adj.degree(v));
        self.core.recover();
        Ok(self.core.colour_edge(id))
    }

    /// Removes `uv`; returns the colour it had.
    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<Colour, EngineError> {
        let key = self.core.key(u, v)?;
        let colour = self.core.detach(key)?;
        self.core.recover();
        colour.ok_or(EngineError::NotColoured(key))
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

    /// Strips the colour of `uv`, leaving it for [`recolour`](Self::recolour).
    pub fn uncolour(&mut self, u: VertexId, v: VertexId) -> Result<Colour, EngineError> {
        let key = self.core.key(u, v)?;
        let id = self.core.id(key)?;
        if self.core.colour_by_id(id).is_none() {
            return Err(EngineError::NotColoured(key));
        }
        Ok(self.core.uncolour(id))
    }

    pub fn recover(&mut self) {
        self.core.recover();
    }

    /// Raises an Invariant-1 violator by one level.
    pub fn increment(&mut self, v: VertexId) -> Result<(), EngineError> {
        crate::graph::check_vertex(v, self.capacity())?;
        if !self.core.violates_out_cap(v) {
            return Err(EngineError::NotDirty {
                vertex: v,
                invariant: "out-degree",
            });
        }
        if self.core.adj.level(v) >= self.config.levels {
            return Err(EngineError::LevelCeiling(v));
        }
        self.core.increment(v);
        Ok(())
    }

    /// Lowers an Invariant-2 violator by one level.
    pub fn decrement(&mut self, v: VertexId) -> Result<(), EngineError> {
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
        Ok(())
    }

    pub fn is_dirty(&self, v: VertexId) -> bool {
        self.core.is_dirty(v)
    }

    pub fn level(&self, v: VertexId) -> u32 {
        self.core.adj.level(v)
    }

    pub fn max_level(&self) -> u32 {
        self.core.max_level()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.core.adj.degree(v)
    }

    pub fn edge_count(&self) -> usize {
        self.core.adj.edge_count()
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

    #[doc(hidden)]
    pub fn full_palette_mut(&mut self, v: VertexId) -> &mut Palette {
        self.core.full_palette_mut(v)
    }
}

impl EngineView for DynamicMaxEngine {
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

    fn colour_bound(&self, _key: EdgeKey) -> Option<usize> {
        Some(self.config.colour_bound(self.observed_delta))
    }
}
