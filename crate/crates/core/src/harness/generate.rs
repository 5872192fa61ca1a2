//! Seeded update-stream generators.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::stream::{Event, Op, UpdateStream};
use crate::graph::{EdgeKey, VertexId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StreamKind {
    /// One forest under random link/cut.
    Forest,
    /// `f` edge-disjoint forests under random link/cut.
    Forests(usize),
    /// Toggles of a triangulated grid's edges.
    GridPlanar,
    /// Random pair toggles with stationary density `p`.
    ErdosRenyi(f64),
    /// Random edges, each deleted `w` insertions later.
    SlidingWindow(usize),
    /// A hub joined to spokes that each carry many pendant leaves.
    StarOfTrees,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerateError {
    #[error("unknown stream kind `{0}`")]
    UnknownKind(String),
    #[error("invalid parameter for {kind}: {detail}")]
    Parameter { kind: String, detail: String },
    #[error("{kind} needs at least {min} vertices, got {n}")]
    TooSmall { kind: String, min: usize, n: usize },
}

impl StreamKind {
    /// The arboricity bound the construction guarantees, if any.
    pub fn declared_alpha(&self) -> Option<usize> {
        match *self {
            Self::Forest | Self::StarOfTrees => Some(1),
            Self::Forests(f) => Some(f),
            Self::GridPlanar => Some(3),
            Self::ErdosRenyi(_) | Self::SlidingWindow(_) => None,
        }
    }

    fn validate(&self) -> Result<(), GenerateError> {
        let bad = |detail: &str| {
            Err(GenerateError::Parameter {
                kind: self.to_string(),
                detail: detail.into(),
            })
        };
        match *self {
            Self::Forests(0) => bad("need at least one forest"),
            Self::ErdosRenyi(p) if !(p > 0.0 && p <= 1.0) => bad("p must lie in (0, 1]"),
            Self::SlidingWindow(0) => bad("window must be positive"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for StreamKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Forest => f.write_str("forest"),
            Self::Forests(k) => write!(f, "forests({k})"),
            Self::GridPlanar => f.write_str("grid-planar"),
            Self::ErdosRenyi(p) => write!(f, "erdos-renyi({p})"),
            Self::SlidingWindow(w) => write!(f, "sliding-window({w})"),
            Self::StarOfTrees => f.write_str("star-of-trees"),
        }
    }
}

/// Accepts `name`, `name(arg)` and `name:arg`.
impl FromStr for StreamKind {
    type Err = GenerateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, arg) = match s.find(['(', ':']) {
            Some(i) => (&s[..i], Some(s[i + 1..].trim_end_matches(')'))),
            None => (s, None),
        };
        let unknown = || GenerateError::UnknownKind(s.to_string());
        let param = |detail: String| GenerateError::Parameter {
            kind: name.to_string(),
            detail,
        };
        let need = || arg.ok_or_else(|| param("missing argument".into()));
        let kind = match name {
            "forest" if arg.is_none() => Self::Forest,
            "forests" => Self::Forests(need()?.parse().map_err(|e| param(format!("{e}")))?),
            "grid-planar" if arg.is_none() => Self::GridPlanar,
            "erdos-renyi" => Self::ErdosRenyi(need()?.parse().map_err(|e| param(format!("{e}")))?),
            "sliding-window" => {
                Self::SlidingWindow(need()?.parse().map_err(|e| param(format!("{e}")))?)
            }
            "star-of-trees" if arg.is_none() => Self::StarOfTrees,
            _ => return Err(unknown()),
        };
        kind.validate()?;
        Ok(kind)
    }
}

/// Deterministic in `(kind, n, steps, seed)`.
pub fn generate_stream(
    kind: StreamKind,
    n: usize,
    steps: usize,
    seed: u64,
) -> Result<UpdateStream, GenerateError> {
    kind.validate()?;
    let min = match kind {
        StreamKind::StarOfTrees => 5,
        _ => 2,
    };
    if n < min {
        return Err(GenerateError::TooSmall {
            kind: kind.to_string(),
            min,
            n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let events = match kind {
        StreamKind::Forest => forests(n, 1, steps, &mut rng),
        StreamKind::Forests(f) => forests(n, f, steps, &mut rng),
        StreamKind::GridPlanar => grid_planar(n, steps, &mut rng),
        StreamKind::ErdosRenyi(p) => erdos_renyi(n, p, steps, &mut rng),
        StreamKind::SlidingWindow(w) => sliding_window(n, w, steps, &mut rng),
        StreamKind::StarOfTrees => star_of_trees(n, steps, &mut rng),
    };
    Ok(UpdateStream::new(n, events).expect("generators emit valid streams"))
}

/// A set supporting uniform sampling and O(1) removal.
#[derive(Default)]
struct Bag<T> {
    items: Vec<T>,
    index: HashMap<T, usize>,
}

impl<T: Copy + Eq + std::hash::Hash> Bag<T> {
    fn insert(&mut self, t: T) {
        if !self.index.contains_key(&t) {
            self.index.insert(t, self.items.len());
            self.items.push(t);
        }
    }

    fn remove(&mut self, t: T) {
        if let Some(i) = self.index.remove(&t) {
            self.items.swap_remove(i);
            if let Some(&moved) = self.items.get(i) {
                self.index.insert(moved, i);
            }
        }
    }

    fn len(&self) -> usize {
        self.items.len()
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Option<T> {
        self.items.choose(rng).copied()
    }
}

const HUB_FRACTION: usize = 40;
const HUB_BIAS: f64 = 0.9;

/// Each forest `j` fixes a random vertex ranking; every vertex may hold one
/// parent edge per forest, always to a vertex of smaller rank, so each
/// forest stays acyclic. Most parents come from the lowest `n / 40` ranks,
/// so hubs hover around the level-1 out-degree cap whatever `n` is.
fn forests(n: usize, f: usize, steps: usize, rng: &mut ChaCha8Rng) -> Vec<Event> {
    let ranked: Vec<Vec<VertexId>> = (0..f)
        .map(|_| {
            let mut p: Vec<VertexId> = (0..n as VertexId).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    // Slot (j, r): the vertex of rank r >= 1 in forest j.
    let mut parent: HashMap<(usize, usize), EdgeKey> = HashMap::new();
    let mut filled: Bag<(usize, usize)> = Bag::default();
    let mut empty: Bag<(usize, usize)> = Bag::default();
    let mut live: HashSet<EdgeKey> = HashSet::new();
    let mut first_pass: Vec<(usize, usize)> =
        (0..f).flat_map(|j| (1..n).map(move |r| (j, r))).collect();
    first_pass.shuffle(rng);
    for &slot in &first_pass {
        empty.insert(slot);
    }
    let hubs = (n / HUB_FRACTION).max(1);
    let link = |slot: (usize, usize), rng: &mut ChaCha8Rng, live: &mut HashSet<EdgeKey>| {
        let (j, r) = slot;
        for _ in 0..8 {
            let pr = if rng.gen_bool(HUB_BIAS) {
                rng.gen_range(0..hubs.min(r))
            } else {
                rng.gen_range(0..r)
            };
            let key = EdgeKey::new(ranked[j][r], ranked[j][pr]).unwrap();
            if live.insert(key) {
                return Some(key);
            }
        }
        None
    };
    let mut events = Vec::with_capacity(steps);
    let mut pass = first_pass.into_iter();
    let mut stalls = 0;
    while events.len() < steps && stalls < 64 {
        let slot = match pass.next() {
            Some(s) => Some((s, true)),
            None => {
                let insert = filled.len() == 0 || (empty.len() > 0 && rng.gen_bool(0.5));
                if insert {
                    empty.sample(rng).map(|s| (s, true))
                } else {
                    filled.sample(rng).map(|s| (s, false))
                }
            }
        };
        let Some((slot, insert)) = slot else { break };
        if insert {
            match link(slot, rng, &mut live) {
                Some(key) => {
                    parent.insert(slot, key);
                    empty.remove(slot);
                    filled.insert(slot);
                    events.push(Event {
                        op: Op::Insert,
                        edge: key,
                    });
                    stalls = 0;
                }
                None => stalls += 1,
            }
        } else {
            let key = parent.remove(&slot).unwrap();
            live.remove(&key);
            filled.remove(slot);
            empty.insert(slot);
            events.push(Event {
                op: Op::Delete,
                edge: key,
            });
        }
    }
    events
}

/// Toggles a uniformly random edge of the grid with one diagonal per cell.
fn grid_planar(n: usize, steps: usize, rng: &mut ChaCha8Rng) -> Vec<Event> {
    let side = (n as f64).sqrt().ceil() as usize;
    let id = |r: usize, c: usize| (r * side + c < n).then(|| (r * side + c) as VertexId);
    let mut candidates = Vec::new();
    for r in 0..side {
        for c in 0..side {
            let Some(a) = id(r, c) else { continue };
            for (dr, dc) in [(0, 1), (1, 0), (1, 1)] {
                if c + dc < side {
                    if let Some(b) = id(r + dr, c + dc) {
                        candidates.push(EdgeKey::new(a, b).unwrap());
                    }
                }
            }
        }
    }
    let mut live = HashSet::new();
    (0..steps)
        .map(|_| {
            let key = *candidates.choose(rng).unwrap();
            toggle(&mut live, key)
        })
        .collect()
}

fn toggle(live: &mut HashSet<EdgeKey>, key: EdgeKey) -> Event {
    if live.remove(&key) {
        Event {
            op: Op::Delete,
            edge: key,
        }
    } else {
        live.insert(key);
        Event {
            op: Op::Insert,
            edge: key,
        }
    }
}

fn random_pair(n: usize, rng: &mut ChaCha8Rng) -> EdgeKey {
    loop {
        let u = rng.gen_range(0..n as VertexId);
        let v = rng.gen_range(0..n as VertexId);
        if let Ok(k) = EdgeKey::new(u, v) {
            return k;
        }
    }
}

/// Picks a random pair; a dead pair becomes live with probability `p`, a
/// live one dies with probability `1 - p`. Each pair is live with
/// probability `p` in the long run.
fn erdos_renyi(n: usize, p: f64, steps: usize, rng: &mut ChaCha8Rng) -> Vec<Event> {
    let mut live = HashSet::new();
    let mut events = Vec::with_capacity(steps);
    while events.len() < steps {
        let key = random_pair(n, rng);
        let flip = if live.contains(&key) { 1.0 - p } else { p };
        if flip > 0.0 && rng.gen_bool(flip) {
            events.push(toggle(&mut live, key));
        } else if p == 1.0 && live.len() == n * (n - 1) / 2 {
            break;
        }
    }
    events
}

fn sliding_window(n: usize, w: usize, steps: usize, rng: &mut ChaCha8Rng) -> Vec<Event> {
    let w = w.min(n * (n - 1) / 2);
    let mut live = HashSet::new();
    let mut window = VecDeque::new();
    let mut events = Vec::with_capacity(steps);
    while events.len() < steps {
        if window.len() >= w {
            let key = window.pop_front().unwrap();
            live.remove(&key);
            events.push(Event {
                op: Op::Delete,
                edge: key,
            });
        } else {
            let key = random_pair(n, rng);
            if live.insert(key) {
                window.push_back(key);
                events.push(Event {
                    op: Op::Insert,
                    edge: key,
                });
            }
        }
    }
    events
}

/// `s = floor(sqrt(n - 1))` spokes, each receiving `s - 1` leaves before it
/// is joined to the hub, so every vertex but the leaves has degree `s`.
/// Remaining steps cut and relink random leaves.
fn star_of_trees(n: usize, steps: usize, rng: &mut ChaCha8Rng) -> Vec<Event> {
    let s = ((n - 1) as f64).sqrt().floor() as usize;
    let mut ids: Vec<VertexId> = (0..n as VertexId).collect();
    ids.shuffle(rng);
    let hub = ids[0];
    let mut next = 1;
    let mut events = Vec::new();
    let mut leaf_edges = Vec::new();
    for _ in 0..s {
        let spoke = ids[next];
        next += 1;
        for _ in 0..s - 1 {
            let key = EdgeKey::new(spoke, ids[next]).unwrap();
            next += 1;
            leaf_edges.push(key);
            events.push(Event {
                op: Op::Insert,
                edge: key,
            });
        }
        events.push(Event {
            op: Op::Insert,
            edge: EdgeKey::new(hub, spoke).unwrap(),
        });
    }
    events.truncate(steps);
    let mut cut: Option<EdgeKey> = None;
    while events.len() < steps {
        let op = match cut.take() {
            Some(key) => Event {
                op: Op::Insert,
                edge: key,
            },
            None => {
                let key = *leaf_edges.choose(rng).unwrap();
                cut = Some(key);
                Event {
                    op: Op::Delete,
                    edge: key,
                }
            }
        };
        events.push(op);
    }
    events
}
