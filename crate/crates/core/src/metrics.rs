//! Delivery delays of a Fastest Route Tree under four time definitions.
//!
//! For a node `i` reached at frame `t_i` by a message injected at `t0`:
//!
//! * `delay_t0 = t_i - t0`
//! * `delay_root = t_i - t_r`, where `t_r` is the first transmission of the root
//! * `delay_first_contact = t_i - t_i0`, where `t_i0` is the first contact of `i` from `t_r` on
//! * `elapsed_contact`: frames in `[t_i0, t_i]` in which `i` was in contact (the node clock)
//!
//! The first three are wall-clock seconds, the last one is in frames.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{FrameIndex, NodeId, TemporalContactGraph};
use crate::spread::FastestRouteTree;

/// How `t_i0` relates to `t_r`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FirstContactRule {
    /// First contact at or after `t_r`.
    #[default]
    Inclusive,
    /// First contact strictly after `t_r`, capped at the arrival frame.
    Exclusive,
}

/// Number of frames in `[start, end]` in which `n` has at least one contact.
pub fn node_clock(g: &TemporalContactGraph, n: NodeId, start: FrameIndex, end: FrameIndex) -> Result<u32> {
    let frames = g.node_contact_frames(n)?;
    if start > end {
        return Err(Error::InvalidArgument(format!(
            "clock window start {start} is after end {end}"
        )));
    }
    let lo = frames.partition_point(|&f| f < start);
    let hi = frames.partition_point(|&f| f <= end);
    Ok((hi - lo) as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelayRecord {
    pub node: NodeId,
    pub parent: NodeId,
    pub level: u32,
    pub arrival: FrameIndex,
    /// `t_i0`
    pub first_contact: FrameIndex,
    pub delay_t0: u64,
    pub delay_root: u64,
    pub delay_first_contact: u64,
    pub elapsed_contact: u32,
}

pub fn delay_record(g: &TemporalContactGraph, tree: &FastestRouteTree, n: NodeId) -> Result<DelayRecord> {
    delay_record_with(g, tree, n, FirstContactRule::Inclusive)
}

pub fn delay_record_with(
    g: &TemporalContactGraph,
    tree: &FastestRouteTree,
    n: NodeId,
    rule: FirstContactRule,
) -> Result<DelayRecord> {
    let entry = tree.get(n).ok_or(Error::NotInTree {
        node: n,
        root: tree.root(),
    })?;
    let t_r = tree.t_r.ok_or(Error::EmptyTree)?;
    let arrival = entry.arrival;
    let from = match rule {
        FirstContactRule::Inclusive => t_r,
        FirstContactRule::Exclusive => FrameIndex(t_r.0 + 1),
    };
    // the node is in contact in its arrival frame, so a first contact always exists
    let first_contact = g
        .first_contact_at_or_after(n, from)?
        .map_or(arrival, |f| f.min(arrival));
    let dt = g.delta_t();
    let frames = |a: FrameIndex, b: FrameIndex| (a.0 - b.0) as u64 * dt;
    Ok(DelayRecord {
        node: n,
        parent: entry.parent,
        level: entry.level,
        arrival,
        first_contact,
        delay_t0: frames(arrival, tree.message.t0),
        delay_root: frames(arrival, t_r),
        delay_first_contact: frames(arrival, first_contact),
        elapsed_contact: node_clock(g, n, first_contact, arrival)?,
    })
}

/// Delay records for every reached node of `tree`, in node order.
pub fn tree_delay_records(g: &TemporalContactGraph, tree: &FastestRouteTree) -> Result<Vec<DelayRecord>> {
    tree.entries.keys().map(|&n| delay_record(g, tree, n)).collect()
}
