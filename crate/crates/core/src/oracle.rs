//! Brute-force earliest-arrival reference for small instances.
//!
//! Shares no code with [`crate::spread::flood`]: arrivals are relaxed over
//! every (frame, edge, direction) triple until a global fixpoint is reached,
//! with no frame-ordered scan and no tree bookkeeping.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{FrameIndex, NodeId, TemporalContactGraph};
use crate::spread::{Message, PropagationMode};

pub const ORACLE_MAX_NODES: usize = 15;
pub const ORACLE_MAX_FRAMES: usize = 100;

/// Minimum arrival frame of `message` at every reachable node over all
/// time-respecting paths. The root is not part of the result.
pub fn earliest_arrival_oracle(
    g: &TemporalContactGraph,
    message: Message,
    mode: PropagationMode,
) -> Result<BTreeMap<NodeId, FrameIndex>> {
    if g.node_count() > ORACLE_MAX_NODES || g.frame_count() > ORACLE_MAX_FRAMES {
        return Err(Error::OracleTooLarge {
            nodes: g.node_count(),
            frames: g.frame_count(),
            max_nodes: ORACLE_MAX_NODES,
            max_frames: ORACLE_MAX_FRAMES,
        });
    }
    if message.root.index() >= g.node_count() {
        return Err(Error::UnknownNode(message.root));
    }

    let mut best: BTreeMap<NodeId, FrameIndex> = BTreeMap::new();
    let can_send = |best: &BTreeMap<NodeId, FrameIndex>, u: NodeId, f: FrameIndex| -> bool {
        if u == message.root {
            return f >= message.t0;
        }
        match (best.get(&u), mode) {
            (Some(&a), PropagationMode::OneHopPerFrame) => a < f,
            (Some(&a), PropagationMode::IntraFrame) => a <= f,
            (None, _) => false,
        }
    };

    loop {
        let mut changed = false;
        for (f, frame) in g.frames() {
            for &(a, b) in frame.edges() {
                for (u, v) in [(a, b), (b, a)] {
                    if v == message.root || !can_send(&best, u, f) {
                        continue;
                    }
                    let improves = best.get(&v).is_none_or(|&cur| f < cur);
                    if improves {
                        best.insert(v, f);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_contact_stream, ParseOptions};

    fn toy() -> TemporalContactGraph {
        parse_contact_stream(["0 A B", "0 B C", "20 A B"], ParseOptions::new(20)).unwrap()
    }

    #[test]
    fn toy_graph() {
        let m = Message {
            root: NodeId(0),
            t0: FrameIndex(0),
        };
        let one = earliest_arrival_oracle(&toy(), m, PropagationMode::OneHopPerFrame).unwrap();
        assert_eq!(one, BTreeMap::from([(NodeId(1), FrameIndex(0))]));
        let intra = earliest_arrival_oracle(&toy(), m, PropagationMode::IntraFrame).unwrap();
        assert_eq!(
            intra,
            BTreeMap::from([(NodeId(1), FrameIndex(0)), (NodeId(2), FrameIndex(0))])
        );
    }

    #[test]
    fn unreachable_absent() {
        let g = TemporalContactGraph::from_frames(20, 4, &[vec![(0, 1)], vec![(2, 3)]]).unwrap();
        let m = Message {
            root: NodeId(0),
            t0: FrameIndex(0),
        };
        let r = earliest_arrival_oracle(&g, m, PropagationMode::IntraFrame).unwrap();
        assert!(!r.contains_key(&NodeId(2)));
        assert!(!r.contains_key(&NodeId(3)));
    }

    #[test]
    fn size_guard() {
        let g = TemporalContactGraph::from_frames(20, 16, &[vec![(0, 15)]]).unwrap();
        let m = Message {
            root: NodeId(0),
            t0: FrameIndex(0),
        };
        assert!(matches!(
            earliest_arrival_oracle(&g, m, PropagationMode::OneHopPerFrame),
            Err(Error::OracleTooLarge { .. })
        ));
    }
}
