use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("line {line}: self-contact record for node {label:?}")]
    SelfLoop { line: usize, label: String },

    #[error("io: {0}")]
    Io(String),

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("node {node} is not part of the tree rooted at {root}")]
    NotInTree { node: NodeId, root: NodeId },

    #[error("tree has no entries, so t_r is undefined")]
    EmptyTree,

    #[error(
        "oracle size guard exceeded: {nodes} nodes, {frames} frames (limit {max_nodes} nodes, {max_frames} frames)"
    )]
    OracleTooLarge {
        nodes: usize,
        frames: usize,
        max_nodes: usize,
        max_frames: usize,
    },

    #[error("not enough samples: need at least {needed}, got {got}")]
    NotEnoughSamples { needed: usize, got: usize },

    #[error("invalid mobility config: {0}")]
    Config(String),

    #[error("trajectories do not share a sampling grid: {0}")]
    GridMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
