//! Brute-force reference checks. Everything here recomputes from scratch and
//! trusts none of the cached state it inspects.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::colouring::Colouring;
use crate::engine::EngineView;
use crate::graph::{Bucket, EdgeKey, Graph, LevelledAdjacency, VertexId};
use crate::palette::{Colour, Palette};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    Bucket,
    Size,
    Invariant1,
    Invariant2,
    PaletteMismatch,
    Improper,
    Uncoloured,
    ColourBound,
    QueuedWork,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Bucket => "bucket",
            Self::Size => "size",
            Self::Invariant1 => "invariant-1",
            Self::Invariant2 => "invariant-2",
            Self::PaletteMismatch => "palette-mismatch",
            Self::Improper => "improper",
            Self::Uncoloured => "uncoloured",
            Self::ColourBound => "colour-bound",
            Self::QueuedWork => "queued-work",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subject {
    Vertex(VertexId),
    Edge(EdgeKey),
    Engine,
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Vertex(v) => write!(f, "vertex {v}"),
            Self::Edge(e) => write!(f, "edge {e}"),
            Self::Engine => f.write_str("engine"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub subject: Subject,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub violations: Vec<Violation>,
    /// Checks that passed, per kind.
    pub counters: BTreeMap<ViolationKind, usize>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    pub fn merge(&mut self, other: AuditReport) {
        self.violations.extend(other.violations);
        for (k, n) in other.counters {
            *self.counters.entry(k).or_default() += n;
        }
    }

    fn check(
        &mut self,
        ok: bool,
        kind: ViolationKind,
        subject: Subject,
        detail: impl FnOnce() -> String,
    ) {
        if ok {
            *self.counters.entry(kind).or_default() += 1;
        } else {
            self.violations.push(Violation {
                kind,
                subject,
                detail: detail(),
            });
        }
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            let checks: usize = self.counters.values().sum();
            return write!(f, "clean ({checks} checks)");
        }
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  [{}] {}: {}", v.kind, v.subject, v.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("exact arboricity needs n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
}

pub const EXACT_ARBORICITY_MAX_N: usize = 16;

/// Checks that every edge is coloured and no two edges at a vertex share a
/// colour.
pub fn verify_proper<I>(edges: I) -> AuditReport
where
    I: IntoIterator<Item = (EdgeKey, Option<Colour>)>,
{
    let mut report = AuditReport::default();
    let mut seen: HashMap<(VertexId, Colour), EdgeKey> = HashMap::new();
    for (key, colour) in edges {
        let Some(c) = colour else {
            report.check(false, ViolationKind::Uncoloured, Subject::Edge(key), || {
                "edge has no colour".into()
            });
            continue;
        };
        for v in [key.lo(), key.hi()] {
            let prior = seen.insert((v, c), key);
            report.check(
                prior.is_none(),
                ViolationKind::Improper,
                Subject::Vertex(v),
                || format!("colour {c} on both {} and {key}", prior.unwrap()),
            );
        }
    }
    report
}

/// [`verify_proper`] over a static graph and a colouring of it.
pub fn verify_graph_colouring(graph: &Graph, colouring: &Colouring) -> AuditReport {
    verify_proper(graph.edges().iter().map(|&k| (k, colouring.get(k))))
}

/// `max over U, |U| > 1, of ceil(|E(U)| / (|U| - 1))` by enumerating all
/// subsets.
pub fn exact_arboricity(graph: &Graph) -> Result<usize, OracleError> {
    let n = graph.n();
    if n > EXACT_ARBORICITY_MAX_N {
        return Err(OracleError::TooLarge {
            n,
            max: EXACT_ARBORICITY_MAX_N,
        });
    }
    let nbr: Vec<u32> = (0..n as VertexId)
        .map(|v| graph.neighbours(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let mut best = 0;
    for set in 1u32..(1u32 << n) {
        let size = set.count_ones() as usize;
        if size < 2 {
            continue;
        }
        let twice_edges: u32 = (0..n)
            .filter(|&v| set & (1 << v) != 0)
            .map(|v| (nbr[v] & set).count_ones())
            .sum();
        let edges = (twice_edges / 2) as usize;
        best = best.max(edges.div_ceil(size - 1));
    }
    Ok(best)
}

/// Exact arboricity for small graphs, degeneracy (which is at least `α`)
/// otherwise.
pub fn arboricity_upper_bound(graph: &Graph) -> usize {
    exact_arboricity(graph)
        .unwrap_or_else(|_| crate::static_colouring::degeneracy_order(graph).degeneracy)
}

/// Smallest positive colour in neither set, by linear scan.
pub fn min_free_colour(a: &BTreeSet<Colour>, b: &BTreeSet<Colour>) -> Colour {
    (1..).find(|c| !a.contains(c) && !b.contains(c)).unwrap()
}

/// Recomputes bucket membership and every list length.
pub fn check_adjacency(adj: &LevelledAdjacency) -> AuditReport {
    let mut report = AuditReport::default();
    let n = adj.capacity() as VertexId;
    let expected = |v: VertexId, u: VertexId| {
        let (lv, lu) = (adj.level(v), adj.level(u));
        if lu >= lv {
            Bucket::Out
        } else {
            Bucket::Down(lu)
        }
    };
    let mut incident = vec![0usize; n as usize];
    for (id, key) in adj.edges() {
        for v in [key.lo(), key.hi()] {
            incident[v as usize] += 1;
            let want = expected(v, key.other(v));
            let got = adj.bucket_of(id, v);
            report.check(
                got == Some(want),
                ViolationKind::Bucket,
                Subject::Edge(key),
                || format!("at {v}: expected {want:?}, found {got:?}"),
            );
        }
    }
    for v in 0..n {
        let mut listed = 0;
        let out: Vec<_> = adj.out_neighbours(v).collect();
        let out_ok = out.iter().all(|&(u, id)| {
            adj.edge_key(id) == EdgeKey::new(u, v).ok() && adj.level(u) >= adj.level(v)
        });
        report.check(
            out_ok && out.len() == adj.out_degree(v),
            ViolationKind::Size,
            Subject::Vertex(v),
            || {
                format!(
                    "out-list has {} entries, cached {}",
                    out.len(),
                    adj.out_degree(v)
                )
            },
        );
        listed += out.len();
        for j in adj.down_levels(v).collect::<Vec<_>>() {
            let down: Vec<_> = adj.down_neighbours(v, j).collect();
            let ok = down
                .iter()
                .all(|&(u, id)| adj.edge_key(id) == EdgeKey::new(u, v).ok() && adj.level(u) == j);
            report.check(
                ok && down.len() == adj.down_len(v, j) && j < adj.level(v),
                ViolationKind::Size,
                Subject::Vertex(v),
                || {
                    format!(
                        "down bucket {j} has {} entries, cached {}",
                        down.len(),
                        adj.down_len(v, j)
                    )
                },
            );
            listed += down.len();
        }
        let degree = incident[v as usize];
        report.check(
            listed == degree && adj.degree(v) == degree,
            ViolationKind::Size,
            Subject::Vertex(v),
            || {
                format!(
                    "{listed} list entries, cached degree {}, {degree} live edges",
                    adj.degree(v)
                )
            },
        );
    }
    report
}

/// Full structural audit of a dynamic engine.
pub fn audit_engine<E: EngineView>(engine: &E) -> AuditReport {
    let adj = engine.adjacency();
    let mut report = check_adjacency(adj);
    let n = adj.capacity() as VertexId;

    let edges: Vec<(EdgeKey, Option<Colour>)> = adj
        .edges()
        .map(|(id, key)| (key, engine.colour_by_id(id)))
        .collect();
    report.merge(verify_proper(edges.iter().copied()));

    let mut full: Vec<BTreeMap<Colour, EdgeKey>> = vec![BTreeMap::new(); n as usize];
    let mut out: Vec<BTreeMap<Colour, EdgeKey>> = vec![BTreeMap::new(); n as usize];
    for &(key, colour) in &edges {
        let Some(c) = colour else { continue };
        for v in [key.lo(), key.hi()] {
            full[v as usize].insert(c, key);
            if adj.level(key.other(v)) >= adj.level(v) {
                out[v as usize].insert(c, key);
            }
        }
        if let Some(bound) = engine.colour_bound(key) {
            report.check(
                c as usize <= bound,
                ViolationKind::ColourBound,
                Subject::Edge(key),
                || format!("colour {c} exceeds bound {bound}"),
            );
        }
    }

    for v in 0..n {
        let level = adj.level(v);
        let out_deg = adj
            .neighbours(v)
            .filter(|&(u, _)| adj.level(u) >= level)
            .count();
        let cap = engine.out_cap(level);
        report.check(
            out_deg <= cap,
            ViolationKind::Invariant1,
            Subject::Vertex(v),
            || format!("out-degree {out_deg} at level {level} exceeds {cap}"),
        );
        if level > 1 {
            let below = adj
                .neighbours(v)
                .filter(|&(u, _)| adj.level(u) + 1 >= level)
                .count();
            let min = engine.down_min(level);
            report.check(
                below >= min,
                ViolationKind::Invariant2,
                Subject::Vertex(v),
                || {
                    format!(
                        "{below} neighbours at level >= {} but {min} required",
                        level - 1
                    )
                },
            );
        }
        for (role, palette, want) in [
            ("full", engine.full_palette(v), &full[v as usize]),
            ("out", engine.out_palette(v), &out[v as usize]),
        ] {
            let mismatch = palette_mismatch(palette, want);
            report.check(
                mismatch.is_none(),
                ViolationKind::PaletteMismatch,
                Subject::Vertex(v),
                || format!("{role} palette: {}", mismatch.unwrap()),
            );
        }
    }

    let queued = engine.queued_work();
    report.check(
        queued == 0,
        ViolationKind::QueuedWork,
        Subject::Engine,
        || format!("{queued} queued items after an update"),
    );
    report
}

fn palette_mismatch(palette: &Palette, want: &BTreeMap<Colour, EdgeKey>) -> Option<String> {
    if !palette.verify_tree() {
        return Some("sum tree disagrees with the owner array".into());
    }
    let have: BTreeMap<Colour, EdgeKey> = palette.used_colours().collect();
    if &have != want {
        let extra: Vec<_> = have.keys().filter(|c| !want.contains_key(c)).collect();
        let missing: Vec<_> = want.keys().filter(|c| !have.contains_key(c)).collect();
        return Some(format!(
            "extra colours {extra:?}, missing {missing:?}, or wrong owners"
        ));
    }
    if palette.used_count() != want.len() {
        return Some(format!(
            "used count {} but {} colours",
            palette.used_count(),
            want.len()
        ));
    }
    None
}
