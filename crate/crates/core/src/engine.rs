//! Machinery shared by the two dynamic engines: palettes per vertex, the
//! dirty stack, level moves and the recolour cascade. The engines differ only
//! in their degree thresholds ([`LevelPolicy`]) and in what they do after a
//! deletion or a level decrement.

use thiserror::Error;

use crate::colouring::Colouring;
use crate::graph::{EdgeId, EdgeKey, GraphError, LevelledAdjacency, VertexId};
use crate::palette::{Colour, Palette};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge {0} is already coloured")]
    AlreadyColoured(EdgeKey),
    #[error("edge {0} is not coloured")]
    NotColoured(EdgeKey),
    #[error("vertex {vertex} does not violate the {invariant} invariant")]
    NotDirty {
        vertex: VertexId,
        invariant: &'static str,
    },
    #[error("vertex {0} is at the top level")]
    LevelCeiling(VertexId),
    #[error("degree {degree} exceeds declared maximum degree {delta_max}")]
    DeltaExceeded { degree: usize, delta_max: usize },
}

/// Degree thresholds as a function of a vertex's level.
pub trait LevelPolicy {
    /// Largest out-degree allowed at `level`.
    fn out_cap(&self, level: u32) -> usize;
    /// Smallest degree into `Z_{level-1}` required at `level > 1`.
    fn down_min(&self, level: u32) -> usize;
    /// Highest level a vertex may occupy.
    fn max_level(&self) -> u32;
}

/// Work counters. All are cumulative since construction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub increments: u64,
    pub decrements: u64,
    /// List entries touched by level moves (out-list lengths before the move).
    pub moved_entries: u64,
    /// Edges recoloured because they collided with a newly chosen colour.
    pub cascade_recolours: u64,
    /// Every call to the joint free-colour search.
    pub palette_searches: u64,
    /// Recolours triggered by a degree drop (adaptive engine only).
    pub degree_recolours: u64,
    /// Recolours triggered by a level decrement (adaptive engine only).
    pub level_recolours: u64,
    /// Invariant-1 violations left in place because the vertex is at the
    /// top level.
    pub saturated: u64,
    pub inserts: u64,
    pub deletes: u64,
}

impl EngineStats {
    pub fn level_moves(&self) -> u64 {
        self.increments + self.decrements
    }

    /// Level moves plus cascade recolours.
    pub fn recourse(&self) -> u64 {
        self.level_moves() + self.cascade_recolours
    }
}

/// Read access to engine internals, used by the auditor.
pub trait EngineView {
    fn adjacency(&self) -> &LevelledAdjacency;
    fn colour_by_id(&self, id: EdgeId) -> Option<Colour>;
    fn full_palette(&self, v: VertexId) -> &Palette;
    fn out_palette(&self, v: VertexId) -> &Palette;
    fn queued_work(&self) -> usize;
    fn out_cap(&self, level: u32) -> usize;
    fn down_min(&self, level: u32) -> usize;
    /// Largest colour `key` may carry right now, if the engine promises one.
    fn colour_bound(&self, key: EdgeKey) -> Option<usize>;
}

#[derive(Clone, Debug)]
pub(crate) struct LevelEngine<P> {
    pub adj: LevelledAdjacency,
    pub policy: P,
    colours: Vec<Option<Colour>>,
    full: Vec<Palette>,
    out: Vec<Palette>,
    dirty: Vec<VertexId>,
    queued: Vec<bool>,
    pending: Vec<EdgeKey>,
    /// Uncolour out-edges on decrement and recolour them once Recover is done.
    pub recolour_on_decrement: bool,
    pub stats: EngineStats,
}

impl<P: LevelPolicy> LevelEngine<P> {
    pub fn new(capacity: usize, policy: P) -> Self {
        Self {
            adj: LevelledAdjacency::new(capacity),
            policy,
            colours: Vec::new(),
            full: vec![Palette::new(); capacity],
            out: vec![Palette::new(); capacity],
            dirty: Vec::new(),
            queued: vec![false; capacity],
            pending: Vec::new(),
            recolour_on_decrement: false,
            stats: EngineStats::default(),
        }
    }

    pub fn key(&self, u: VertexId, v: VertexId) -> Result<EdgeKey, EngineError> {
        crate::graph::check_vertex(u, self.adj.capacity())?;
        crate::graph::check_vertex(v, self.adj.capacity())?;
        Ok(EdgeKey::new(u, v)?)
    }

    pub fn id(&self, key: EdgeKey) -> Result<EdgeId, EngineError> {
        self.adj
            .edge_id(key)
            .ok_or(EngineError::Graph(GraphError::MissingEdge(key)))
    }

    pub fn colour_of(&self, key: EdgeKey) -> Option<Colour> {
        self.adj.edge_id(key).and_then(|id| self.colours[id])
    }

    pub fn colour_by_id(&self, id: EdgeId) -> Option<Colour> {
        self.colours.get(id).copied().flatten()
    }

    pub fn full_palette(&self, v: VertexId) -> &Palette {
        &self.full[v as usize]
    }

    pub fn out_palette(&self, v: VertexId) -> &Palette {
        &self.out[v as usize]
    }

    pub fn queued_work(&self) -> usize {
        self.dirty.len() + self.pending.len()
    }

    pub fn colouring(&self) -> Colouring {
        self.adj
            .edges()
            .filter_map(|(id, k)| self.colours[id].map(|c| (k, c)))
            .collect()
    }

    pub fn max_colour(&self) -> Option<Colour> {
        self.adj
            .edges()
            .filter_map(|(id, _)| self.colours[id])
            .max()
    }

    /// Adds the edge uncoloured and queues its endpoints for inspection.
    pub fn attach(&mut self, key: EdgeKey) -> Result<EdgeId, EngineError> {
        let id = self.adj.attach_edge(key.lo(), key.hi())?;
        if self.colours.len() <= id {
            self.colours.resize(id + 1, None);
        }
        self.colours[id] = None;
        self.stats.inserts += 1;
        self.mark_dirty(key.lo());
        self.mark_dirty(key.hi());
        Ok(id)
    }

    /// Removes the edge and its colour; returns the colour it had.
    pub fn detach(&mut self, key: EdgeKey) -> Result<Option<Colour>, EngineError> {
        let id = self.id(key)?;
        let colour = self.colours[id];
        if colour.is_some() {
            self.uncolour(id);
        }
        self.adj.detach_edge(key)?;
        for v in [key.lo(), key.hi()] {
            let deg = self.adj.degree(v);
            self.full[v as usize].ensure_capacity(deg);
            let out_deg = self.adj.out_degree(v);
            self.out[v as usize].ensure_capacity(out_deg);
        }
        self.stats.deletes += 1;
        self.mark_dirty(key.lo());
        self.mark_dirty(key.hi());
        Ok(colour)
    }

    pub fn is_dirty(&self, v: VertexId) -> bool {
        self.violates_out_cap(v) || self.violates_down_min(v)
    }

    pub fn violates_out_cap(&self, v: VertexId) -> bool {
        self.adj.out_degree(v) > self.policy.out_cap(self.adj.level(v))
    }

    pub fn violates_down_min(&self, v: VertexId) -> bool {
        let level = self.adj.level(v);
        level > 1 && self.adj.degree_into_level_below(v) < self.policy.down_min(level)
    }

    pub fn mark_dirty(&mut self, v: VertexId) {
        if !self.queued[v as usize] && self.is_dirty(v) {
            self.queued[v as usize] = true;
            self.dirty.push(v);
        }
    }

    /// Moves dirty vertices until none is left.
    pub fn recover(&mut self) {
        while let Some(v) = self.dirty.pop() {
            self.queued[v as usize] = false;
            let level = self.adj.level(v);
            if self.violates_out_cap(v) {
                if level < self.policy.max_level() {
                    self.increment(v);
                } else {
                    self.stats.saturated += 1;
                }
            } else if self.violates_down_min(v) {
                self.decrement(v);
            }
        }
    }

    pub fn increment(&mut self, v: VertexId) {
        let i = self.adj.level(v);
        self.stats.increments += 1;
        self.stats.moved_entries += self.adj.out_degree(v) as u64;
        self.adj.split_out_list(v);
        let adj = &self.adj;
        for (_, id) in adj.down_neighbours(v, i) {
            if let Some(c) = self.colours[id] {
                self.out[v as usize]
                    .unmark(c)
                    .expect("out-palette missing an out-edge colour");
            }
        }
        let mut touched = Vec::new();
        for (u, id) in adj.out_neighbours(v) {
            if adj.level(u) == i + 1 {
                touched.push(u);
                if let Some(c) = self.colours[id] {
                    let p = &mut self.out[u as usize];
                    p.fit_colour(c);
                    p.mark(c, adj.edge_key(id).unwrap())
                        .expect("colour clash in out-palette");
                }
            }
        }
        self.mark_dirty(v);
        for u in touched {
            self.mark_dirty(u);
        }
    }

    pub fn decrement(&mut self, v: VertexId) {
        let i = self.adj.level(v);
        debug_assert!(i > 1);
        self.stats.decrements += 1;
        let old_out: Vec<(VertexId, EdgeId)> = self.adj.out_neighbours(v).collect();
        self.stats.moved_entries += old_out.len() as u64;
        for &(u, id) in &old_out {
            let Some(c) = self.colours[id] else { continue };
            if self.recolour_on_decrement {
                self.uncolour(id);
                self.pending.push(self.adj.edge_key(id).unwrap());
                self.stats.level_recolours += 1;
            } else if self.adj.level(u) == i {
                self.out[u as usize]
                    .unmark(c)
                    .expect("out-palette missing a same-level colour");
            }
        }
        self.adj.merge_down(v).expect("decrement below level 1");
        let adj = &self.adj;
        for (u, id) in adj.out_neighbours(v) {
            if adj.level(u) == i - 1 {
                if let Some(c) = self.colours[id] {
                    let p = &mut self.out[v as usize];
                    p.fit_colour(c);
                    p.mark(c, adj.edge_key(id).unwrap())
                        .expect("colour clash in out-palette");
                }
            }
        }
        self.mark_dirty(v);
        for (u, _) in old_out {
            self.mark_dirty(u);
        }
    }

    /// Queues an uncoloured edge for the next [`flush_pending`](Self::flush_pending).
    pub fn defer(&mut self, key: EdgeKey) {
        self.pending.push(key);
    }

    pub fn flush_pending(&mut self) {
        while let Some(key) = self.pending.pop() {
            if let Some(id) = self.adj.edge_id(key) {
                if self.colours[id].is_none() {
                    self.colour_edge(id);
                }
            }
        }
    }

    /// Colours the uncoloured edge `id`, lower endpoint searching only its
    /// out-palette, and re-colours whatever lower-level edge it collides with.
    pub fn colour_edge(&mut self, id: EdgeId) -> Colour {
        let (colour, mut collided) = self.colour_once(id);
        while let Some(next) = collided {
            self.stats.cascade_recolours += 1;
            collided = self.colour_once(next).1;
        }
        colour
    }

    fn colour_once(&mut self, id: EdgeId) -> (Colour, Option<EdgeId>) {
        debug_assert!(self.colours[id].is_none());
        let key = self.adj.edge_key(id).expect("colouring a dead edge");
        let (a, b) = key.endpoints();
        let (u, v) = if self.adj.level(a) <= self.adj.level(b) {
            (a, b)
        } else {
            (b, a)
        };
        self.stats.palette_searches += 1;
        let c = self.out[u as usize].find_joint_free(&self.full[v as usize]);
        let collided = self.full[u as usize].owner_of(c).map(|other| {
            let oid = self.adj.edge_id(other).expect("palette owner is not live");
            debug_assert!(self.adj.level(other.other(u)) < self.adj.level(u));
            self.uncolour(oid);
            oid
        });
        self.assign(id, c);
        (c, collided)
    }

    pub fn assign(&mut self, id: EdgeId, c: Colour) {
        let key = self.adj.edge_key(id).unwrap();
        let (a, b) = key.endpoints();
        let (la, lb) = (self.adj.level(a), self.adj.level(b));
        self.colours[id] = Some(c);
        let put = |p: &mut Palette| {
            p.fit_colour(c);
            p.mark(c, key).expect("assigned colour already in use");
        };
        put(&mut self.full[a as usize]);
        put(&mut self.full[b as usize]);
        if la <= lb {
            put(&mut self.out[a as usize]);
        }
        if lb <= la {
            put(&mut self.out[b as usize]);
        }
    }

    pub fn uncolour(&mut self, id: EdgeId) -> Colour {
        let key = self.adj.edge_key(id).unwrap();
        let c = self.colours[id]
            .take()
            .expect("uncolouring an uncoloured edge");
        let (a, b) = key.endpoints();
        let (la, lb) = (self.adj.level(a), self.adj.level(b));
        let msg = "palette missing an edge colour";
        self.full[a as usize].unmark(c).expect(msg);
        self.full[b as usize].unmark(c).expect(msg);
        if la <= lb {
            self.out[a as usize].unmark(c).expect(msg);
        }
        if lb <= la {
            self.out[b as usize].unmark(c).expect(msg);
        }
        c
    }

    #[doc(hidden)]
    pub fn full_palette_mut(&mut self, v: VertexId) -> &mut Palette {
        &mut self.full[v as usize]
    }

    pub fn max_level(&self) -> u32 {
        (0..self.adj.capacity() as VertexId)
            .map(|v| self.adj.level(v))
            .max()
            .unwrap_or(1)
    }
}
