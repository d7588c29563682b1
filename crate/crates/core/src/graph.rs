//! Frame-aggregated temporal contact graphs.
//!
//! A trace is a list of `t i j` records. Each record is binned into frame
//! `floor(t / delta_t)` and becomes an undirected edge of that frame. Edges
//! are considered active for the whole frame.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node identifier, `0..node_count`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of a contact frame. Frame `f` covers `[f * delta_t, (f + 1) * delta_t)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FrameIndex(pub u32);

impl FrameIndex {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Wall-clock start of the frame in seconds.
    #[inline]
    pub fn start_secs(self, delta_t: u64) -> u64 {
        self.0 as u64 * delta_t
    }

    /// Frame containing the instant `t` (floor binning).
    pub fn containing(t: u64, delta_t: u64) -> FrameIndex {
        FrameIndex((t / delta_t) as u32)
    }

    /// First frame starting at or after `t`. A message generated mid-frame
    /// cannot use the frame already in progress.
    pub fn starting_at_or_after(t: u64, delta_t: u64) -> FrameIndex {
        FrameIndex(t.div_ceil(delta_t) as u32)
    }
}

impl fmt::Display for FrameIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Undirected edges active during one frame. Stored as `(low, high)` pairs,
/// sorted and deduplicated, never self-loops.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ContactFrame {
    edges: Vec<(NodeId, NodeId)>,
}

impl ContactFrame {
    fn from_unsorted(mut edges: Vec<(NodeId, NodeId)>) -> Self {
        edges.sort_unstable();
        edges.dedup();
        ContactFrame { edges }
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, a: NodeId, b: NodeId) -> bool {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges.binary_search(&key).is_ok()
    }
}

/// What to do with an `i == i` record while parsing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SelfLoopPolicy {
    #[default]
    Reject,
    /// Drop the record and log a warning.
    Skip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParseOptions {
    pub delta_t: u64,
    pub self_loops: SelfLoopPolicy,
}

impl ParseOptions {
    pub fn new(delta_t: u64) -> Self {
        ParseOptions {
            delta_t,
            self_loops: SelfLoopPolicy::Reject,
        }
    }
}

/// Incremental constructor for [`TemporalContactGraph`]. Contacts may be
/// added in any order; duplicates collapse.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    delta_t: u64,
    node_count: usize,
    frames: Vec<Vec<(NodeId, NodeId)>>,
    labels: Option<Vec<String>>,
}

impl GraphBuilder {
    pub fn new(delta_t: u64, node_count: usize) -> Self {
        assert!(delta_t > 0, "delta_t must be positive");
        GraphBuilder {
            delta_t,
            node_count,
            frames: Vec::new(),
            labels: None,
        }
    }

    /// Extend the timeline to at least `frames` frames, even if the tail is empty.
    pub fn timeline(mut self, frames: usize) -> Self {
        if self.frames.len() < frames {
            self.frames.resize_with(frames, Vec::new);
        }
        self
    }

    pub fn labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.node_count, "one label per node");
        self.labels = Some(labels);
        self
    }

    pub fn add_contact(&mut self, frame: FrameIndex, a: NodeId, b: NodeId) -> Result<()> {
        if a.index() >= self.node_count {
            return Err(Error::UnknownNode(a));
        }
        if b.index() >= self.node_count {
            return Err(Error::UnknownNode(b));
        }
        if a == b {
            return Err(Error::InvalidArgument(format!("self-contact on node {a}")));
        }
        let f = frame.index();
        if self.frames.len() <= f {
            self.frames.resize_with(f + 1, Vec::new);
        }
        self.frames[f].push(if a < b { (a, b) } else { (b, a) });
        Ok(())
    }

    pub fn build(self) -> TemporalContactGraph {
        let frames: Vec<ContactFrame> = self.frames.into_iter().map(ContactFrame::from_unsorted).collect();
        let labels = self
            .labels
            .unwrap_or_else(|| (0..self.node_count).map(|i| i.to_string()).collect());
        TemporalContactGraph::assemble(self.delta_t, frames, labels)
    }
}

/// Ordered sequence of contact frames over `node_count` nodes.
///
/// Immutable once built. Per-node contact frames are precomputed so that
/// presence queries are a binary search.
#[derive(Clone, Debug)]
pub struct TemporalContactGraph {
    delta_t: u64,
    frames: Vec<ContactFrame>,
    labels: Vec<String>,
    node_frames: Vec<Vec<FrameIndex>>,
}

impl PartialEq for TemporalContactGraph {
    fn eq(&self, other: &Self) -> bool {
        self.delta_t == other.delta_t && self.labels == other.labels && self.frames == other.frames
    }
}

impl TemporalContactGraph {
    fn assemble(delta_t: u64, frames: Vec<ContactFrame>, labels: Vec<String>) -> Self {
        let mut node_frames = vec![Vec::new(); labels.len()];
        for (f, frame) in frames.iter().enumerate() {
            let fi = FrameIndex(f as u32);
            for &(a, b) in frame.edges() {
                for n in [a, b] {
                    let list: &mut Vec<FrameIndex> = &mut node_frames[n.index()];
                    if list.last() != Some(&fi) {
                        list.push(fi);
                    }
                }
            }
        }
        TemporalContactGraph {
            delta_t,
            frames,
            labels,
            node_frames,
        }
    }

    /// Convenience constructor from per-frame edge lists of raw ids.
    pub fn from_frames(delta_t: u64, node_count: usize, frames: &[Vec<(u32, u32)>]) -> Result<Self> {
        let mut b = GraphBuilder::new(delta_t, node_count).timeline(frames.len());
        for (f, edges) in frames.iter().enumerate() {
            for &(x, y) in edges {
                b.add_contact(FrameIndex(f as u32), NodeId(x), NodeId(y))?;
            }
        }
        Ok(b.build())
    }

    pub fn delta_t(&self) -> u64 {
        self.delta_t
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    /// Timeline length: one past the last stored frame.
    pub fn frame_count(&self) -> usize {
        self.frames.len()
    }

    pub fn frame(&self, f: FrameIndex) -> Option<&ContactFrame> {
        self.frames.get(f.index())
    }

    pub fn frames(&self) -> impl ExactSizeIterator<Item = (FrameIndex, &ContactFrame)> {
        self.frames.iter().enumerate().map(|(i, fr)| (FrameIndex(i as u32), fr))
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.labels.len() as u32).map(NodeId)
    }

    pub fn label(&self, n: NodeId) -> Option<&str> {
        self.labels.get(n.index()).map(String::as_str)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.labels.iter().position(|l| l == label).map(|i| NodeId(i as u32))
    }

    /// Total number of (frame, edge) records.
    pub fn edge_frame_count(&self) -> usize {
        self.frames.iter().map(ContactFrame::len).sum()
    }

    /// Number of frames holding at least one contact.
    pub fn active_frame_count(&self) -> usize {
        self.frames.iter().filter(|f| !f.is_empty()).count()
    }

    pub fn first_active_frame(&self) -> Option<FrameIndex> {
        self.frames
            .iter()
            .position(|f| !f.is_empty())
            .map(|i| FrameIndex(i as u32))
    }

    pub fn last_active_frame(&self) -> Option<FrameIndex> {
        self.frames
            .iter()
            .rposition(|f| !f.is_empty())
            .map(|i| FrameIndex(i as u32))
    }

    fn check_node(&self, n: NodeId) -> Result<()> {
        if n.index() < self.labels.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(n))
        }
    }

    /// Sorted frames in which `n` has at least one edge.
    pub fn node_contact_frames(&self, n: NodeId) -> Result<&[FrameIndex]> {
        self.check_node(n)?;
        Ok(&self.node_frames[n.index()])
    }

    /// Smallest frame `>= f` in which `n` is in contact.
    pub fn first_contact_at_or_after(&self, n: NodeId, f: FrameIndex) -> Result<Option<FrameIndex>> {
        let frames = self.node_contact_frames(n)?;
        let i = frames.partition_point(|&x| x < f);
        Ok(frames.get(i).copied())
    }

    /// Edge-frame counts over consecutive windows of `window` seconds,
    /// starting at time 0. Empty windows are included.
    pub fn contact_density(&self, window: u64) -> Result<Vec<(u64, usize)>> {
        if window == 0 || !window.is_multiple_of(self.delta_t) {
            return Err(Error::InvalidArgument(format!(
                "window {window}s is not a positive multiple of delta_t {}s",
                self.delta_t
            )));
        }
        let per = (window / self.delta_t) as usize;
        Ok(self
            .frames
            .chunks(per)
            .enumerate()
            .map(|(k, chunk)| (k as u64 * window, chunk.iter().map(ContactFrame::len).sum()))
            .collect())
    }

    /// Copy of the graph with `count` empty frames inserted before frame `at`.
    /// Frames at or after `at` shift later by `count`.
    pub fn with_empty_frames_inserted(&self, at: FrameIndex, count: usize) -> Self {
        let at = at.index().min(self.frames.len());
        let mut frames = Vec::with_capacity(self.frames.len() + count);
        frames.extend_from_slice(&self.frames[..at]);
        frames.extend(std::iter::repeat_with(ContactFrame::default).take(count));
        frames.extend_from_slice(&self.frames[at..]);
        TemporalContactGraph::assemble(self.delta_t, frames, self.labels.clone())
    }

    /// Write the graph as `t i j` records sorted by `(t, i, j)`, with
    /// `t = frame * delta_t` and node labels in place of ids.
    pub fn write_trace<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (f, frame) in self.frames() {
            let t = f.start_secs(self.delta_t);
            for &(a, b) in frame.edges() {
                writeln!(w, "{t} {} {}", self.labels[a.index()], self.labels[b.index()])?;
            }
        }
        Ok(())
    }

    pub fn to_trace_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_trace(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("labels are UTF-8")
    }
}

/// Parse `t i j` lines into a graph. Blank lines and lines starting with `#`
/// are ignored. Node labels are mapped to dense ids in sorted label order
/// (numeric order when every label is an integer).
pub fn parse_contact_stream<I, S>(lines: I, opts: ParseOptions) -> Result<TemporalContactGraph>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    if opts.delta_t == 0 {
        return Err(Error::InvalidArgument("delta_t must be positive".into()));
    }
    let mut records: Vec<(u64, String, String)> = Vec::new();
    for (idx, line) in lines.into_iter().enumerate() {
        let line_no = idx + 1;
        let line = line.as_ref().trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(t), Some(i), Some(j)) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: line_no,
                reason: format!("expected `t i j`, got {line:?}"),
            });
        };
        let t: u64 = t.parse().map_err(|_| Error::Parse {
            line: line_no,
            reason: format!("timestamp {t:?} is not a non-negative integer"),
        })?;
        if i == j {
            match opts.self_loops {
                SelfLoopPolicy::Reject => {
                    return Err(Error::SelfLoop {
                        line: line_no,
                        label: i.to_string(),
                    })
                }
                SelfLoopPolicy::Skip => {
                    log::warn!("line {line_no}: skipping self-contact for {i:?}");
                    continue;
                }
            }
        }
        records.push((t, i.to_string(), j.to_string()));
    }

    let distinct: BTreeSet<&str> = records.iter().flat_map(|(_, i, j)| [i.as_str(), j.as_str()]).collect();
    let mut labels: Vec<String> = distinct.into_iter().map(str::to_string).collect();
    if labels.iter().all(|l| l.parse::<u64>().is_ok()) {
        labels.sort_by_key(|l| l.parse::<u64>().unwrap());
    }
    let ids: HashMap<&str, NodeId> = labels
        .iter()
        .enumerate()
        .map(|(k, l)| (l.as_str(), NodeId(k as u32)))
        .collect();

    let mut b = GraphBuilder::new(opts.delta_t, labels.len());
    for (t, i, j) in &records {
        let f = FrameIndex::containing(*t, opts.delta_t);
        b.add_contact(f, ids[i.as_str()], ids[j.as_str()])?;
    }
    Ok(b.labels(labels.clone()).build())
}

/// Read a trace from any buffered reader.
pub fn read_trace<R: BufRead>(reader: R, opts: ParseOptions) -> Result<TemporalContactGraph> {
    let lines: Vec<String> = reader
        .lines()
        .collect::<io::Result<_>>()
        .map_err(|e| Error::Io(e.to_string()))?;
    parse_contact_stream(lines, opts)
}
