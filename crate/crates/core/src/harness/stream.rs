//! Text format for edge update sequences.
//!
//! ```text
//! # comment
//! n 4
//! + 0 1
//! + 1 2
//! - 0 1
//! ```
//!
//! Vertex ids are 0-based. The `n` header must be the first non-comment
//! line when present; without it the capacity is one more than the largest
//! id mentioned.

use std::collections::HashSet;
use std::fmt;
use std::io::{self, Write};

use thiserror::Error;

use crate::graph::{EdgeKey, Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Insert,
    Delete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Event {
    pub op: Op,
    pub edge: EdgeKey,
}

impl Event {
    pub fn insert(u: VertexId, v: VertexId) -> Self {
        Self {
            op: Op::Insert,
            edge: EdgeKey::new(u, v).expect("self-loop event"),
        }
    }

    pub fn delete(u: VertexId, v: VertexId) -> Self {
        Self {
            op: Op::Delete,
            edge: EdgeKey::new(u, v).expect("self-loop event"),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.op {
            Op::Insert => '+',
            Op::Delete => '-',
        };
        write!(f, "{sign} {} {}", self.edge.lo(), self.edge.hi())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StreamErrorKind {
    #[error("expected `n <capacity>`, `+ u v` or `- u v`")]
    Malformed,
    #[error("`{0}` is not a vertex id")]
    BadNumber(String),
    #[error("vertex {vertex} out of range for capacity {capacity}")]
    OutOfRange { vertex: VertexId, capacity: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("header must come before any event")]
    LateHeader,
    #[error("edge {0} is already present")]
    DuplicateInsert(EdgeKey),
    #[error("edge {0} is not present")]
    IllegalDelete(EdgeKey),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct StreamError {
    pub line: usize,
    pub column: usize,
    pub kind: StreamErrorKind,
}

/// A validated sequence of insertions and deletions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpdateStream {
    pub capacity: usize,
    pub events: Vec<Event>,
}

impl UpdateStream {
    /// Checks ids against `capacity` and every op against the live edge set.
    pub fn new(capacity: usize, events: Vec<Event>) -> Result<Self, StreamError> {
        let mut live = HashSet::new();
        for (i, e) in events.iter().enumerate() {
            let at = |kind| StreamError {
                line: i + 1,
                column: 1,
                kind,
            };
            for v in [e.edge.lo(), e.edge.hi()] {
                if v as usize >= capacity {
                    return Err(at(StreamErrorKind::OutOfRange {
                        vertex: v,
                        capacity,
                    }));
                }
            }
            apply(&mut live, *e).map_err(at)?;
        }
        Ok(Self { capacity, events })
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn has_deletes(&self) -> bool {
        self.events.iter().any(|e| e.op == Op::Delete)
    }

    /// Live edges after the last event.
    pub fn final_graph(&self) -> Graph {
        self.graph_after(self.events.len())
    }

    /// Live edges after the first `steps` events, in insertion order.
    pub fn graph_after(&self, steps: usize) -> Graph {
        let mut live: Vec<EdgeKey> = Vec::new();
        let mut index = std::collections::HashMap::new();
        for e in &self.events[..steps] {
            match e.op {
                Op::Insert => {
                    index.insert(e.edge, live.len());
                    live.push(e.edge);
                }
                Op::Delete => {
                    let i = index.remove(&e.edge).expect("validated stream");
                    live.swap_remove(i);
                    if let Some(&moved) = live.get(i) {
                        index.insert(moved, i);
                    }
                }
            }
        }
        Graph::from_edges(self.capacity, live.iter().map(|k| (k.lo(), k.hi())))
            .expect("validated stream")
    }

    /// Every edge ever inserted.
    pub fn union_graph(&self) -> Graph {
        let mut seen = HashSet::new();
        let edges: Vec<_> = self
            .events
            .iter()
            .filter(|e| e.op == Op::Insert && seen.insert(e.edge))
            .map(|e| (e.edge.lo(), e.edge.hi()))
            .collect();
        Graph::from_edges(self.capacity, edges).expect("validated stream")
    }

    /// Largest degree reached at any point of the replay.
    pub fn max_degree(&self) -> usize {
        let mut degree = vec![0usize; self.capacity];
        let mut best = 0;
        for e in &self.events {
            for v in [e.edge.lo(), e.edge.hi()] {
                let d = &mut degree[v as usize];
                match e.op {
                    Op::Insert => {
                        *d += 1;
                        best = best.max(*d);
                    }
                    Op::Delete => *d -= 1,
                }
            }
        }
        best
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n {}", self.capacity)?;
        for e in &self.events {
            writeln!(out, "{e}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

fn apply(live: &mut HashSet<EdgeKey>, e: Event) -> Result<(), StreamErrorKind> {
    match e.op {
        Op::Insert if !live.insert(e.edge) => Err(StreamErrorKind::DuplicateInsert(e.edge)),
        Op::Delete if !live.remove(&e.edge) => Err(StreamErrorKind::IllegalDelete(e.edge)),
        _ => Ok(()),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn parse_stream(text: &str) -> Result<UpdateStream, StreamError> {
    let mut capacity: Option<usize> = None;
    let mut events = Vec::new();
    let mut largest: Option<VertexId> = None;
    let mut live = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        if toks.is_empty() {
            continue;
        }
        let err = |column: usize, kind| StreamError {
            line: line_no,
            column,
            kind,
        };
        let number = |(col, tok): (usize, &str)| -> Result<usize, StreamError> {
            tok.parse::<usize>()
                .map_err(|_| err(col, StreamErrorKind::BadNumber(tok.to_string())))
        };
        match toks[0].1 {
            "n" => {
                if toks.len() != 2 {
                    return Err(err(toks[0].0, StreamErrorKind::Malformed));
                }
                if capacity.is_some() || !events.is_empty() {
                    return Err(err(toks[0].0, StreamErrorKind::LateHeader));
                }
                capacity = Some(number(toks[1])?);
            }
            sign @ ("+" | "-") => {
                if toks.len() != 3 {
                    return Err(err(toks[0].0, StreamErrorKind::Malformed));
                }
                let mut ends = [0 as VertexId; 2];
                for (slot, &tok) in ends.iter_mut().zip(&toks[1..]) {
                    let v = number(tok)?;
                    let v = VertexId::try_from(v)
                        .map_err(|_| err(tok.0, StreamErrorKind::BadNumber(tok.1.to_string())))?;
                    if let Some(cap) = capacity {
                        if v as usize >= cap {
                            return Err(err(
                                tok.0,
                                StreamErrorKind::OutOfRange {
                                    vertex: v,
                                    capacity: cap,
                                },
                            ));
                        }
                    }
                    *slot = v;
                }
                let [u, v] = ends;
                let edge =
                    EdgeKey::new(u, v).map_err(|_| err(toks[2].0, StreamErrorKind::SelfLoop(u)))?;
                let op = if sign == "+" { Op::Insert } else { Op::Delete };
                let event = Event { op, edge };
                apply(&mut live, event).map_err(|k| err(toks[0].0, k))?;
                largest = largest.max(Some(edge.hi()));
                events.push(event);
            }
            _ => return Err(err(toks[0].0, StreamErrorKind::Malformed)),
        }
    }
    let capacity = capacity.unwrap_or_else(|| largest.map_or(0, |v| v as usize + 1));
    Ok(UpdateStream { capacity, events })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_stream() {
        let s = parse_stream("n 3\n+ 0 1\n+ 1 2\n- 0 1").unwrap();
        assert_eq!(s.capacity, 3);
        assert_eq!(s.len(), 3);
        assert_eq!(s.events[2], Event::delete(1, 0));
        assert!(s.has_deletes());
    }

    #[test]
    fn comments_and_blank_lines() {
        let s = parse_stream("# header\n\nn 5 # five\n  + 3 4\n").unwrap();
        assert_eq!(s.capacity, 5);
        assert_eq!(s.events, vec![Event::insert(3, 4)]);
    }

    #[test]
    fn self_loop_reported_with_position() {
        let e = parse_stream("+ 0 0").unwrap_err();
        assert_eq!(e.kind, StreamErrorKind::SelfLoop(0));
        assert_eq!((e.line, e.column), (1, 5));
    }

    #[test]
    fn delete_before_insert_is_illegal() {
        let e = parse_stream("- 0 1").unwrap_err();
        assert!(matches!(e.kind, StreamErrorKind::IllegalDelete(_)));
    }

    #[test]
    fn other_errors() {
        let e = parse_stream("n 3\n+ 0 1\n+ 1 0").unwrap_err();
        assert!(matches!(e.kind, StreamErrorKind::DuplicateInsert(_)));
        assert_eq!(e.line, 3);
        let e = parse_stream("n 3\n+ 0 3").unwrap_err();
        assert_eq!((e.line, e.column), (2, 5));
        assert!(matches!(
            e.kind,
            StreamErrorKind::OutOfRange { vertex: 3, .. }
        ));
        let e = parse_stream("n 3\n+ 0 x").unwrap_err();
        assert_eq!(e.kind, StreamErrorKind::BadNumber("x".into()));
        assert_eq!(
            parse_stream("* 1 2").unwrap_err().kind,
            StreamErrorKind::Malformed
        );
        assert_eq!(
            parse_stream("+ 1").unwrap_err().kind,
            StreamErrorKind::Malformed
        );
        let e = parse_stream("+ 0 1\nn 3").unwrap_err();
        assert_eq!(e.kind, StreamErrorKind::LateHeader);
    }

    #[test]
    fn headerless_capacity_from_largest_id() {
        assert_eq!(parse_stream("+ 0 7\n").unwrap().capacity, 8);
        assert_eq!(parse_stream("").unwrap().capacity, 0);
    }

    #[test]
    fn text_round_trip() {
        let s = parse_stream("n 4\n+ 0 1\n+ 2 3\n- 1 0\n+ 0 1\n").unwrap();
        assert_eq!(parse_stream(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn replay_helpers() {
        let s = parse_stream("n 4\n+ 0 1\n+ 0 2\n+ 0 3\n- 0 2\n+ 1 2").unwrap();
        assert_eq!(s.max_degree(), 3);
        assert_eq!(s.final_graph().m(), 3);
        assert_eq!(s.graph_after(3).m(), 3);
        assert_eq!(s.union_graph().m(), 4);
    }

    #[test]
    fn new_validates() {
        assert!(UpdateStream::new(2, vec![Event::delete(0, 1)]).is_err());
        assert!(UpdateStream::new(2, vec![Event::insert(0, 2)]).is_err());
        assert!(UpdateStream::new(3, vec![Event::insert(0, 2)]).is_ok());
    }
}
