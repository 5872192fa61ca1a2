//! Graph storage shared by every algorithm in the crate.
//!
//! [`Graph`] is a plain simple undirected graph used by the static
//! algorithms and the oracle. [`LevelledAdjacency`] is the mutable structure
//! the dynamic engines work on: every vertex has a level `l(v) >= 1`, and its
//! neighbours are bucketed by level. A neighbour `u` with `l(u) < l(v)` lives
//! in the down bucket `N_{H_{l(u)}}(v)`; a neighbour with `l(u) >= l(v)` lives
//! in the out-list `N_{Z_{l(v)}}(v)`. Same-level edges therefore appear in
//! both out-lists.
//!
//! Lists are intrusive doubly linked lists backed by one arena. An edge with
//! id `e` owns exactly two arena slots, `2e` (the entry held by the smaller
//! endpoint) and `2e + 1` (the entry held by the larger endpoint), so the
//! cross-handles of an edge are implicit and removal is O(1) plus a bucket
//! lookup.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

pub type VertexId = u32;

/// Dense index of a live edge inside a [`LevelledAdjacency`]. Ids of
/// detached edges are recycled.
pub type EdgeId = usize;

/// An unordered vertex pair, stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    lo: VertexId,
    hi: VertexId,
}

impl EdgeKey {
    pub fn new(u: VertexId, v: VertexId) -> Result<Self, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        Ok(Self {
            lo: u.min(v),
            hi: u.max(v),
        })
    }

    pub fn lo(self) -> VertexId {
        self.lo
    }

    pub fn hi(self) -> VertexId {
        self.hi
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.lo, self.hi)
    }

    /// The endpoint that is not `v`. `v` must be an endpoint.
    pub fn other(self, v: VertexId) -> VertexId {
        debug_assert!(v == self.lo || v == self.hi);
        if v == self.lo {
            self.hi
        } else {
            self.lo
        }
    }

    pub fn contains(self, v: VertexId) -> bool {
        v == self.lo || v == self.hi
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("edge {0} already present")]
    DuplicateEdge(EdgeKey),
    #[error("edge {0} not present")]
    MissingEdge(EdgeKey),
    #[error("vertex {vertex} out of range for capacity {capacity}")]
    VertexOutOfRange { vertex: VertexId, capacity: usize },
    #[error("vertex {0} is already at level 1")]
    LevelFloor(VertexId),
}

/// Simple undirected graph with a fixed vertex count.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    edges: Vec<EdgeKey>,
    present: HashSet<EdgeKey>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
            present: HashSet::new(),
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Self::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeKey, GraphError> {
        check_vertex(u, self.n())?;
        check_vertex(v, self.n())?;
        let key = EdgeKey::new(u, v)?;
        if !self.present.insert(key) {
            return Err(GraphError::DuplicateEdge(key));
        }
        self.adj[u as usize].push(v);
        self.adj[v as usize].push(u);
        self.edges.push(key);
        Ok(key)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbours(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    /// Edges in insertion order.
    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn has_edge(&self, key: EdgeKey) -> bool {
        self.present.contains(&key)
    }

    /// `Δ(uv)`: the larger endpoint degree.
    pub fn edge_delta(&self, key: EdgeKey) -> usize {
        self.degree(key.lo()).max(self.degree(key.hi()))
    }
}

pub(crate) fn check_vertex(v: VertexId, capacity: usize) -> Result<(), GraphError> {
    if (v as usize) < capacity {
        Ok(())
    } else {
        Err(GraphError::VertexOutOfRange {
            vertex: v,
            capacity,
        })
    }
}

/// Which of its owner's lists an entry currently sits in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bucket {
    /// The out-list `N_{Z_{l(v)}}(v)`.
    Out,
    /// The down bucket `N_{H_j}(v)` for `j < l(v)`.
    Down(u32),
}

const NIL: usize = usize::MAX;

#[derive(Clone, Copy, Debug)]
struct Entry {
    owner: VertexId,
    neighbour: VertexId,
    bucket: Bucket,
    prev: usize,
    next: usize,
}

impl Entry {
    const VACANT: Entry = Entry {
        owner: 0,
        neighbour: 0,
        bucket: Bucket::Out,
        prev: NIL,
        next: NIL,
    };
}

#[derive(Clone, Copy, Debug)]
struct ListHead {
    head: usize,
    len: usize,
}

impl Default for ListHead {
    fn default() -> Self {
        Self { head: NIL, len: 0 }
    }
}

#[derive(Clone, Debug)]
struct VertexSlot {
    level: u32,
    degree: usize,
    out: ListHead,
    down: BTreeMap<u32, ListHead>,
}

impl Default for VertexSlot {
    fn default() -> Self {
        Self {
            level: 1,
            degree: 0,
            out: ListHead::default(),
            down: BTreeMap::new(),
        }
    }
}

/// Level-bucketed adjacency with O(1) edge removal.
#[derive(Clone, Debug)]
pub struct LevelledAdjacency {
    vertices: Vec<VertexSlot>,
    entries: Vec<Entry>,
    edges: Vec<Option<EdgeKey>>,
    free: Vec<EdgeId>,
    index: HashMap<EdgeKey, EdgeId>,
    scratch: Vec<usize>,
}

impl LevelledAdjacency {
    pub fn new(capacity: usize) -> Self {
        Self {
            vertices: vec![VertexSlot::default(); capacity],
            entries: Vec::new(),
            edges: Vec::new(),
            free: Vec::new(),
            index: HashMap::new(),
            scratch: Vec::new(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.index.len()
    }

    pub fn level(&self, v: VertexId) -> u32 {
        self.vertices[v as usize].level
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.vertices[v as usize].degree
    }

    /// `deg⁺(v)`, the cached out-list length.
    pub fn out_degree(&self, v: VertexId) -> usize {
        self.vertices[v as usize].out.len
    }

    /// Cached length of `N_{H_j}(v)`; zero for levels with no bucket.
    pub fn down_len(&self, v: VertexId, j: u32) -> usize {
        self.vertices[v as usize].down.get(&j).map_or(0, |h| h.len)
    }

    /// `deg_{Z_{l(v)-1}}(v)`: out-degree plus the bucket right below `l(v)`.
    /// For a level-1 vertex this is just the degree.
    pub fn degree_into_level_below(&self, v: VertexId) -> usize {
        let slot = &self.vertices[v as usize];
        if slot.level == 1 {
            return slot.degree;
        }
        slot.out.len + slot.down.get(&(slot.level - 1)).map_or(0, |h| h.len)
    }

    /// Levels that currently have a non-empty down bucket at `v`.
    pub fn down_levels(&self, v: VertexId) -> impl Iterator<Item = u32> + '_ {
        self.vertices[v as usize].down.keys().copied()
    }

    pub fn edge_id(&self, key: EdgeKey) -> Option<EdgeId> {
        self.index.get(&key).copied()
    }

    pub fn edge_key(&self, id: EdgeId) -> Option<EdgeKey> {
        self.edges.get(id).copied().flatten()
    }

    pub fn has_edge(&self, key: EdgeKey) -> bool {
        self.index.contains_key(&key)
    }

    /// Upper bound (exclusive) on live edge ids.
    pub fn edge_id_bound(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, EdgeKey)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter_map(|(id, k)| k.map(|k| (id, k)))
    }

    pub fn out_neighbours(&self, v: VertexId) -> ListIter<'_> {
        ListIter {
            adj: self,
            cursor: self.vertices[v as usize].out.head,
        }
    }

    pub fn down_neighbours(&self, v: VertexId, j: u32) -> ListIter<'_> {
        ListIter {
            adj: self,
            cursor: self.vertices[v as usize]
                .down
                .get(&j)
                .map_or(NIL, |h| h.head),
        }
    }

    /// Every neighbour of `v`, out-list first, then down buckets by level.
    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = (VertexId, EdgeId)> + '_ {
        self.out_neighbours(v).chain(
            self.vertices[v as usize]
                .down
                .keys()
                .flat_map(move |&j| self.down_neighbours(v, j)),
        )
    }

    /// The bucket holding `v`'s entry for edge `id`, i.e. the list its
    /// handle at `v` points into.
    pub fn bucket_of(&self, id: EdgeId, v: VertexId) -> Option<Bucket> {
        let key = self.edge_key(id)?;
        if !key.contains(v) {
            return None;
        }
        Some(self.entries[entry_at(id, key, v)].bucket)
    }

    pub fn attach_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        check_vertex(u, self.capacity())?;
        check_vertex(v, self.capacity())?;
        let key = EdgeKey::new(u, v)?;
        if self.index.contains_key(&key) {
            return Err(GraphError::DuplicateEdge(key));
        }
        let id = match self.free.pop() {
            Some(id) => {
                self.edges[id] = Some(key);
                id
            }
            None => {
                self.edges.push(Some(key));
                self.entries.push(Entry::VACANT);
                self.entries.push(Entry::VACANT);
                self.edges.len() - 1
            }
        };
        self.index.insert(key, id);
        for (owner, neighbour, slot) in [(key.lo, key.hi, 2 * id), (key.hi, key.lo, 2 * id + 1)] {
            self.entries[slot] = Entry {
                owner,
                neighbour,
                ..Entry::VACANT
            };
            let bucket = self.placement(owner, neighbour);
            self.link(slot, bucket);
            self.vertices[owner as usize].degree += 1;
        }
        Ok(id)
    }

    pub fn detach_edge(&mut self, key: EdgeKey) -> Result<EdgeId, GraphError> {
        let id = self
            .index
            .remove(&key)
            .ok_or(GraphError::MissingEdge(key))?;
        for slot in [2 * id, 2 * id + 1] {
            self.unlink(slot);
            let owner = self.entries[slot].owner;
            self.vertices[owner as usize].degree -= 1;
            self.entries[slot] = Entry::VACANT;
        }
        self.edges[id] = None;
        self.free.push(id);
        Ok(id)
    }

    /// Raises `l(v)` from `i` to `i + 1`, splitting the out-list: neighbours
    /// at level `i` move into the new bucket `N_{H_i}(v)`, and every affected
    /// neighbour re-files its entry for `v`.
    pub fn split_out_list(&mut self, v: VertexId) {
        let i = self.level(v);
        let mut moved = std::mem::take(&mut self.scratch);
        moved.clear();
        moved.extend(self.out_neighbours_slots(v));
        for &slot in &moved {
            let u = self.entries[slot].neighbour;
            let lu = self.level(u);
            if lu == i {
                self.relink(slot, Bucket::Down(i));
            } else if lu == i + 1 {
                self.relink(slot ^ 1, Bucket::Out);
            } else {
                self.relink(slot ^ 1, Bucket::Down(i + 1));
            }
        }
        self.vertices[v as usize].level = i + 1;
        self.scratch = moved;
    }

    /// Lowers `l(v)` from `i` to `i - 1`, merging `N_{Z_i}(v)` and
    /// `N_{H_{i-1}}(v)` into the new out-list.
    pub fn merge_down(&mut self, v: VertexId) -> Result<(), GraphError> {
        let i = self.level(v);
        if i <= 1 {
            return Err(GraphError::LevelFloor(v));
        }
        let mut moved = std::mem::take(&mut self.scratch);
        moved.clear();
        moved.extend(self.out_neighbours_slots(v));
        for &slot in &moved {
            // Neighbour at level >= i re-files v one bucket lower.
            self.relink(slot ^ 1, Bucket::Down(i - 1));
        }
        moved.clear();
        let head = self.vertices[v as usize]
            .down
            .get(&(i - 1))
            .map_or(NIL, |h| h.head);
        moved.extend(SlotIter {
            adj: self,
            cursor: head,
        });
        for &slot in &moved {
            self.relink(slot, Bucket::Out);
        }
        self.vertices[v as usize].level = i - 1;
        self.scratch = moved;
        Ok(())
    }

    fn placement(&self, owner: VertexId, neighbour: VertexId) -> Bucket {
        let lo = self.level(owner);
        let ln = self.level(neighbour);
        if ln < lo {
            Bucket::Down(ln)
        } else {
            Bucket::Out
        }
    }

    fn out_neighbours_slots(&self, v: VertexId) -> SlotIter<'_> {
        SlotIter {
            adj: self,
            cursor: self.vertices[v as usize].out.head,
        }
    }

    fn head_mut(&mut self, owner: VertexId, bucket: Bucket) -> &mut ListHead {
        let slot = &mut self.vertices[owner as usize];
        match bucket {
            Bucket::Out => &mut slot.out,
            Bucket::Down(j) => slot.down.entry(j).or_default(),
        }
    }

    fn link(&mut self, slot: usize, bucket: Bucket) {
        let owner = self.entries[slot].owner;
        let head = self.head_mut(owner, bucket);
        let old = head.head;
        head.head = slot;
        head.len += 1;
        let e = &mut self.entries[slot];
        e.bucket = bucket;
        e.prev = NIL;
        e.next = old;
        if old != NIL {
            self.entries[old].prev = slot;
        }
    }

    fn unlink(&mut self, slot: usize) {
        let Entry {
            owner,
            bucket,
            prev,
            next,
            ..
        } = self.entries[slot];
        if prev != NIL {
            self.entries[prev].next = next;
        }
        if next != NIL {
            self.entries[next].prev = prev;
        }
        let vertex = &mut self.vertices[owner as usize];
        match bucket {
            Bucket::Out => {
                if prev == NIL {
                    vertex.out.head = next;
                }
                vertex.out.len -= 1;
            }
            Bucket::Down(j) => {
                let head = vertex.down.get_mut(&j).expect("entry in a missing bucket");
                if prev == NIL {
                    head.head = next;
                }
                head.len -= 1;
                if head.len == 0 {
                    vertex.down.remove(&j);
                }
            }
        }
    }

    fn relink(&mut self, slot: usize, bucket: Bucket) {
        if self.entries[slot].bucket != bucket {
            self.unlink(slot);
            self.link(slot, bucket);
        }
    }
}

fn entry_at(id: EdgeId, key: EdgeKey, v: VertexId) -> usize {
    if v == key.lo() {
        2 * id
    } else {
        2 * id + 1
    }
}

/// Iterator over `(neighbour, edge id)` pairs of one list.
pub struct ListIter<'a> {
    adj: &'a LevelledAdjacency,
    cursor: usize,
}

impl Iterator for ListIter<'_> {
    type Item = (VertexId, EdgeId);

    fn next(&mut self) -> Option<Self::Item> {
        if self.cursor == NIL {
            return None;
        }
        let e = &self.adj.entries[self.cursor];
        let item = (e.neighbour, self.cursor / 2);
        self.cursor = e.next;
        Some(item)
    }
}

struct SlotIter<'a> {
    adj: &'a LevelledAdjacency,
    cursor: usize,
}

impl Iterator for SlotIter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.cursor == NIL {
            return None;
        }
        let slot = self.cursor;
        self.cursor = self.adj.entries[slot].next;
        Some(slot)
    }
}
