//! Message flooding over temporal proximity networks.
//!
//! * [`graph`]: frame-aggregated contact graphs and trace I/O
//! * [`spread`]: flooding and Fastest Route Trees, plus [`oracle`] for cross-checks
//! * [`metrics`]: per-node delivery delays including the node-local contact clock
//! * [`stats`]: histograms, box statistics and dispersion summaries
//! * [`mobility`]: Random Waypoint / Truncated Lévy Walk trace generation

pub mod error;
pub mod graph;
pub mod metrics;
pub mod mobility;
pub mod oracle;
pub mod spread;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{FrameIndex, NodeId, ParseOptions, TemporalContactGraph};
pub use metrics::{delay_record, node_clock, DelayRecord, FirstContactRule};
pub use spread::{flood, flood_with, sweep, FastestRouteTree, Message, PropagationMode, SweepSpec, TieBreak};
