//! Comparison baseline: every new edge takes the smallest colour free at both
//! endpoints, so colours stay below `2Δ(uv)` at insertion time.

use std::collections::HashMap;

use crate::colouring::Colouring;
use crate::engine::EngineError;
use crate::graph::{check_vertex, EdgeKey, GraphError, VertexId};
use crate::palette::{Colour, Palette};

#[derive(Clone, Debug)]
pub struct GreedyEngine {
    palettes: Vec<Palette>,
    degree: Vec<usize>,
    colours: HashMap<EdgeKey, Colour>,
    pub palette_searches: u64,
}

impl GreedyEngine {
    pub fn new(capacity: usize) -> Self {
        Self {
            palettes: vec![Palette::new(); capacity],
            degree: vec![0; capacity],
            colours: HashMap::new(),
            palette_searches: 0,
        }
    }

    fn key(&self, u: VertexId, v: VertexId) -> Result<EdgeKey, EngineError> {
        check_vertex(u, self.degree.len())?;
        check_vertex(v, self.degree.len())?;
        Ok(EdgeKey::new(u, v)?)
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId) -> Result<Colour, EngineError> {
        let key = self.key(u, v)?;
        if self.colours.contains_key(&key) {
            return Err(GraphError::DuplicateEdge(key).into());
        }
        self.palette_searches += 1;
        let c = self.palettes[u as usize].find_joint_free(&self.palettes[v as usize]);
        for w in [u, v] {
            self.degree[w as usize] += 1;
            let p = &mut self.palettes[w as usize];
            p.fit_colour(c);
            p.mark(c, key).expect("joint free colour is free");
        }
        self.colours.insert(key, c);
        Ok(c)
    }

    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<Colour, EngineError> {
        let key = self.key(u, v)?;
        let c = self
            .colours
            .remove(&key)
            .ok_or(GraphError::MissingEdge(key))?;
        for w in [u, v] {
            self.degree[w as usize] -= 1;
            let p = &mut self.palettes[w as usize];
            p.unmark(c).expect("palette holds edge colour");
            p.ensure_capacity(self.degree[w as usize]);
        }
        Ok(c)
    }

    pub fn colour_of(&self, u: VertexId, v: VertexId) -> Option<Colour> {
        EdgeKey::new(u, v)
            .ok()
            .and_then(|k| self.colours.get(&k).copied())
    }

    pub fn colouring(&self) -> Colouring {
        self.colours.iter().map(|(&k, &c)| (k, c)).collect()
    }

    pub fn max_colour(&self) -> Option<Colour> {
        self.colours.values().copied().max()
    }

    pub fn edge_count(&self) -> usize {
        self.colours.len()
    }
}
