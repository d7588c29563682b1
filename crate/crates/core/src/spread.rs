//! Deterministic flooding over a temporal contact graph and the resulting
//! Fastest Route Trees.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::ops::Range;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{FrameIndex, NodeId, TemporalContactGraph};

/// Whether a message received in frame `f` may be relayed again within `f`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PropagationMode {
    /// A node informed in frame `f` forwards from frame `f + 1` on.
    #[default]
    OneHopPerFrame,
    /// Within a frame the message spreads over the whole static graph of
    /// that frame reachable from already informed nodes.
    IntraFrame,
}

impl PropagationMode {
    pub const ALL: [PropagationMode; 2] = [PropagationMode::OneHopPerFrame, PropagationMode::IntraFrame];

    pub fn as_str(self) -> &'static str {
        match self {
            PropagationMode::OneHopPerFrame => "one-hop",
            PropagationMode::IntraFrame => "intra-frame",
        }
    }
}

impl fmt::Display for PropagationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PropagationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-hop" | "one-hop-per-frame" => Ok(PropagationMode::OneHopPerFrame),
            "intra-frame" => Ok(PropagationMode::IntraFrame),
            other => Err(Error::InvalidArgument(format!(
                "unknown propagation mode {other:?} (expected one-hop or intra-frame)"
            ))),
        }
    }
}

/// A message generated by `root` and available for transmission from frame `t0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Message {
    pub root: NodeId,
    pub t0: FrameIndex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEntry {
    pub parent: NodeId,
    pub arrival: FrameIndex,
    pub level: u32,
}

/// First-delivery history of one message under flooding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastestRouteTree {
    pub message: Message,
    pub mode: PropagationMode,
    pub tie_break: TieBreak,
    /// Earliest arrival over all entries: the first frame in which the root transmitted.
    pub t_r: Option<FrameIndex>,
    pub entries: BTreeMap<NodeId, TreeEntry>,
}

impl FastestRouteTree {
    pub fn root(&self) -> NodeId {
        self.message.root
    }

    /// Number of reached nodes, root excluded.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, n: NodeId) -> Option<&TreeEntry> {
        self.entries.get(&n)
    }

    pub fn contains(&self, n: NodeId) -> bool {
        n == self.message.root || self.entries.contains_key(&n)
    }

    /// Number of direct children for the root and every reached node.
    pub fn out_degrees(&self) -> BTreeMap<NodeId, usize> {
        let mut deg: BTreeMap<NodeId, usize> = BTreeMap::new();
        deg.insert(self.message.root, 0);
        for &n in self.entries.keys() {
            deg.insert(n, 0);
        }
        for e in self.entries.values() {
            *deg.get_mut(&e.parent).expect("parent is root or an entry") += 1;
        }
        deg
    }

    /// Number of nodes at each tree level; level 0 is the root.
    pub fn level_counts(&self) -> BTreeMap<u32, usize> {
        let mut counts = BTreeMap::new();
        counts.insert(0, 1);
        for e in self.entries.values() {
            *counts.entry(e.level).or_insert(0) += 1;
        }
        counts
    }

    pub fn depth(&self) -> u32 {
        self.entries.values().map(|e| e.level).max().unwrap_or(0)
    }

    /// CSV export: one `#` metadata line, a header, then
    /// `child,parent,arrival_frame,level` rows using node labels.
    pub fn write_csv<W: Write>(&self, g: &TemporalContactGraph, mut w: W) -> io::Result<()> {
        let label = |n: NodeId| g.label(n).unwrap_or("?").to_string();
        let t_r = self.t_r.map(|f| f.to_string()).unwrap_or_default();
        writeln!(
            w,
            "# root={},t0_frame={},t_r={},mode={},tie_break={}",
            label(self.message.root),
            self.message.t0,
            t_r,
            self.mode,
            self.tie_break
        )?;
        writeln!(w, "child,parent,arrival_frame,level")?;
        for (n, e) in &self.entries {
            writeln!(w, "{},{},{},{}", label(*n), label(e.parent), e.arrival, e.level)?;
        }
        Ok(())
    }
}

/// Which informer becomes the parent when several could deliver to a node
/// in the same step.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    /// Lowest rank in a pseudo-random permutation of node ids derived from
    /// `(root, t0)`. Deterministic, but favours no node across messages.
    #[default]
    Permuted,
    /// Smallest node id.
    LowestId,
}

impl TieBreak {
    pub fn as_str(self) -> &'static str {
        match self {
            TieBreak::Permuted => "permuted",
            TieBreak::LowestId => "lowest-id",
        }
    }

    /// Rank of every node for `message`; lower rank wins a tie.
    pub fn ranks(self, message: Message, n: usize) -> Vec<u32> {
        match self {
            TieBreak::LowestId => (0..n as u32).collect(),
            TieBreak::Permuted => {
                let key = splitmix64(((message.root.0 as u64) << 32) | message.t0.0 as u64);
                let mut order: Vec<(u64, u32)> = (0..n as u32)
                    .map(|i| (splitmix64(key ^ splitmix64(i as u64)), i))
                    .collect();
                order.sort_unstable();
                let mut rank = vec![0u32; n];
                for (r, &(_, i)) in order.iter().enumerate() {
                    rank[i as usize] = r as u32;
                }
                rank
            }
        }
    }
}

impl fmt::Display for TieBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TieBreak {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "permuted" => Ok(TieBreak::Permuted),
            "lowest-id" => Ok(TieBreak::LowestId),
            other => Err(Error::InvalidArgument(format!(
                "unknown tie-break {other:?} (expected permuted or lowest-id)"
            ))),
        }
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const UNSET: u32 = u32::MAX;

/// Flood `message` through `g` with the default tie-break.
pub fn flood(g: &TemporalContactGraph, message: Message, mode: PropagationMode) -> Result<FastestRouteTree> {
    flood_with(g, message, mode, TieBreak::default())
}

/// Flood `message` through `g` and record the Fastest Route Tree.
///
/// When several informed nodes can deliver to the same node in the same
/// step, `tie_break` picks the parent. In intra-frame mode only informers at
/// the same within-frame breadth-first depth compete.
pub fn flood_with(
    g: &TemporalContactGraph,
    message: Message,
    mode: PropagationMode,
    tie_break: TieBreak,
) -> Result<FastestRouteTree> {
    let n = g.node_count();
    let root = message.root;
    if root.index() >= n {
        return Err(Error::UnknownNode(root));
    }
    let rank = tie_break.ranks(message, n);

    let mut informed = vec![false; n];
    let mut parent = vec![UNSET; n];
    let mut arrival = vec![UNSET; n];
    let mut level = vec![0u32; n];
    informed[root.index()] = true;
    let mut remaining = n - 1;

    // per-frame scratch
    let mut claim = vec![UNSET; n];
    let mut fresh: Vec<u32> = Vec::new();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut touched: Vec<u32> = Vec::new();
    let mut frontier: Vec<u32> = Vec::new();

    let start = message.t0.index();
    for f in start..g.frame_count() {
        if remaining == 0 {
            break;
        }
        let frame = g.frame(FrameIndex(f as u32)).expect("in range");
        if frame.is_empty() {
            continue;
        }
        match mode {
            PropagationMode::OneHopPerFrame => {
                for &(a, b) in frame.edges() {
                    let (a, b) = (a.0, b.0);
                    for (src, dst) in [(a, b), (b, a)] {
                        if informed[src as usize] && !informed[dst as usize] {
                            let c = &mut claim[dst as usize];
                            if *c == UNSET {
                                fresh.push(dst);
                                *c = src;
                            } else if rank[src as usize] < rank[*c as usize] {
                                *c = src;
                            }
                        }
                    }
                }
                for &v in &fresh {
                    let p = claim[v as usize];
                    claim[v as usize] = UNSET;
                    informed[v as usize] = true;
                    parent[v as usize] = p;
                    arrival[v as usize] = f as u32;
                    level[v as usize] = level[p as usize] + 1;
                }
                remaining -= fresh.len();
                fresh.clear();
            }
            PropagationMode::IntraFrame => {
                for &(a, b) in frame.edges() {
                    let (a, b) = (a.0, b.0);
                    if adj[a as usize].is_empty() {
                        touched.push(a);
                    }
                    if adj[b as usize].is_empty() {
                        touched.push(b);
                    }
                    adj[a as usize].push(b);
                    adj[b as usize].push(a);
                }
                frontier.extend(touched.iter().copied().filter(|&u| informed[u as usize]));
                while !frontier.is_empty() {
                    for &u in &frontier {
                        for &v in &adj[u as usize] {
                            if !informed[v as usize] {
                                let c = &mut claim[v as usize];
                                if *c == UNSET {
                                    fresh.push(v);
                                    *c = u;
                                } else if rank[u as usize] < rank[*c as usize] {
                                    *c = u;
                                }
                            }
                        }
                    }
                    for &v in &fresh {
                        let p = claim[v as usize];
                        claim[v as usize] = UNSET;
                        informed[v as usize] = true;
                        parent[v as usize] = p;
                        arrival[v as usize] = f as u32;
                        level[v as usize] = level[p as usize] + 1;
                    }
                    remaining -= fresh.len();
                    frontier.clear();
                    std::mem::swap(&mut frontier, &mut fresh);
                }
                for &u in &touched {
                    adj[u as usize].clear();
                }
                touched.clear();
            }
        }
    }

    let entries: BTreeMap<NodeId, TreeEntry> = (0..n)
        .filter(|&i| arrival[i] != UNSET)
        .map(|i| {
            (
                NodeId(i as u32),
                TreeEntry {
                    parent: NodeId(parent[i]),
                    arrival: FrameIndex(arrival[i]),
                    level: level[i],
                },
            )
        })
        .collect();
    let t_r = entries.values().map(|e| e.arrival).min();
    Ok(FastestRouteTree {
        message,
        mode,
        tie_break,
        t_r,
        entries,
    })
}

/// A batch of messages: every root crossed with every injection frame.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub injection_frames: Vec<FrameIndex>,
    pub roots: Vec<NodeId>,
    pub mode: PropagationMode,
    #[serde(default)]
    pub tie_break: TieBreak,
}

impl SweepSpec {
    /// All nodes of `g` as roots.
    pub fn all_roots(g: &TemporalContactGraph, injection_frames: Vec<FrameIndex>, mode: PropagationMode) -> Self {
        SweepSpec {
            injection_frames,
            roots: g.nodes().collect(),
            mode,
            tie_break: TieBreak::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.injection_frames.len() * self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Message for tree id `k`; ids enumerate injection frames in the outer
    /// loop and roots in the inner loop.
    pub fn message(&self, k: usize) -> Message {
        let r = self.roots.len();
        Message {
            root: self.roots[k % r],
            t0: self.injection_frames[k / r],
        }
    }

    pub fn messages(&self) -> impl Iterator<Item = Message> + '_ {
        (0..self.len()).map(|k| self.message(k))
    }

    fn validate(&self, g: &TemporalContactGraph) -> Result<()> {
        if self.injection_frames.is_empty() || self.roots.is_empty() {
            return Err(Error::InvalidArgument(
                "sweep needs at least one root and one injection frame".into(),
            ));
        }
        if let Some(&bad) = self.roots.iter().find(|r| r.index() >= g.node_count()) {
            return Err(Error::UnknownNode(bad));
        }
        Ok(())
    }
}

/// Run every message of `spec` and return the trees in tree-id order.
pub fn sweep(g: &TemporalContactGraph, spec: &SweepSpec) -> Result<Vec<FastestRouteTree>> {
    sweep_map(g, spec, |_, tree| tree)
}

/// Run every message of `spec` in parallel and hand each tree to `f`
/// together with its tree id. Trees are dropped after `f` returns, so only
/// the mapped values are retained. Output order is tree-id order regardless
/// of scheduling.
pub fn sweep_map<T, F>(g: &TemporalContactGraph, spec: &SweepSpec, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, FastestRouteTree) -> T + Sync,
{
    sweep_map_range(g, spec, 0..spec.len(), f)
}

/// [`sweep_map`] restricted to the tree ids in `ids`, for callers that
/// process a large sweep in bounded-memory chunks.
pub fn sweep_map_range<T, F>(g: &TemporalContactGraph, spec: &SweepSpec, ids: Range<usize>, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, FastestRouteTree) -> T + Sync,
{
    spec.validate(g)?;
    if ids.end > spec.len() {
        return Err(Error::InvalidArgument(format!(
            "tree ids {ids:?} exceed sweep size {}",
            spec.len()
        )));
    }
    ids.into_par_iter()
        .map(|k| flood_with(g, spec.message(k), spec.mode, spec.tie_break).map(|tree| f(k, tree)))
        .collect()
}

/// `count` injection frames evenly spaced over `[first, last]`, both ends included.
pub fn evenly_spaced_frames(first: FrameIndex, last: FrameIndex, count: usize) -> Vec<FrameIndex> {
    match count {
        0 => Vec::new(),
        1 => vec![first],
        _ => {
            let span = last.0.saturating_sub(first.0) as u64;
            (0..count as u64)
                .map(|k| FrameIndex(first.0 + (k * span / (count as u64 - 1)) as u32))
                .collect()
        }
    }
}
