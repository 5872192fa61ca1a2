//! Edge colouring with `Δ + O(α)` colours, where `α` is the arboricity.
//!
//! - [`static_colouring`]: degeneracy-order and H-partition colourings of a
//!   fixed graph.
//! - [`DynamicMaxEngine`]: fully dynamic colouring with at most
//!   `Δ_max + floor(β·d)` colours for declared bounds `Δ_max`, `α_max`.
//! - [`AdaptiveEngine`]: fully dynamic colouring where every edge `uv` keeps a
//!   colour of at most `Δ(uv) + O(α)` for the current degrees.
//! - [`Palette`]: per-vertex colour sets with joint smallest-free search.
//! - [`oracle`]: brute-force checks used by tests and the harness.
//! - [`harness`]: update streams, generators and a metrics runner.
//!
//! ```
//! use arbcolour::DynamicMaxEngine;
//!
//! let mut engine = DynamicMaxEngine::new(4, 1, 3).unwrap();
//! engine.insert(0, 1).unwrap();
//! engine.insert(1, 2).unwrap();
//! engine.insert(2, 3).unwrap();
//! engine.delete(1, 2).unwrap();
//! assert!(arbcolour::oracle::audit_engine(&engine).is_clean());
//! ```

pub mod adaptive;
pub mod colouring;
pub mod config;
pub mod dynamic;
pub mod engine;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod palette;
pub mod static_colouring;

pub use adaptive::AdaptiveEngine;
pub use colouring::Colouring;
pub use config::{GroupedConfig, PartitionConfig};
pub use dynamic::DynamicMaxEngine;
pub use engine::{EngineError, EngineStats, EngineView};
pub use graph::{EdgeKey, Graph, GraphError, LevelledAdjacency, VertexId};
pub use palette::{Colour, Palette};
