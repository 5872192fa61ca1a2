//! Update streams, generators, the greedy baseline and the metrics runner.

pub mod generate;
pub mod greedy;
pub mod run;
pub mod stream;

pub use generate::{generate_stream, GenerateError, StreamKind};
pub use greedy::GreedyEngine;
pub use run::{run, Algo, MetricsRow, RunError, RunMetrics, RunOptions};
pub use stream::{parse_stream, Event, Op, StreamError, UpdateStream};
