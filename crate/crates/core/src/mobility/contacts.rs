use rayon::prelude::*;

use super::config::MobilityConfig;
use super::walk::{simulate, Trajectory};
use crate::error::{Error, Result};
use crate::graph::{FrameIndex, GraphBuilder, NodeId, TemporalContactGraph};

/// Proximity graph from sampled positions: frame `f` holds edge `(i, j)`
/// iff the two nodes are at most `detection_range` apart at time `f * delta_t`.
///
/// Trajectories must be ordered by node id and sampled at `0, delta_t, 2 delta_t, ...`.
pub fn trajectories_to_contacts(
    trajectories: &[Trajectory],
    detection_range: f64,
    delta_t: u64,
) -> Result<TemporalContactGraph> {
    if delta_t == 0 {
        return Err(Error::InvalidArgument("delta_t must be positive".into()));
    }
    let frames = trajectories.first().map_or(0, |t| t.samples.len());
    for (i, tr) in trajectories.iter().enumerate() {
        if tr.node != NodeId(i as u32) {
            return Err(Error::GridMismatch(format!(
                "trajectory {i} belongs to node {}",
                tr.node
            )));
        }
        if tr.samples.len() != frames {
            return Err(Error::GridMismatch(format!(
                "node {} has {} samples, expected {frames}",
                tr.node,
                tr.samples.len()
            )));
        }
        if let Some((k, s)) = tr.samples.iter().enumerate().find(|(k, s)| s.t != *k as u64 * delta_t) {
            return Err(Error::GridMismatch(format!(
                "node {} sample {k} at t={} is off the {delta_t}s grid",
                tr.node, s.t
            )));
        }
    }

    let r2 = detection_range * detection_range;
    let n = trajectories.len();
    let per_frame: Vec<Vec<(u32, u32)>> = (0..frames)
        .into_par_iter()
        .map(|k| {
            let mut edges = Vec::new();
            for i in 0..n {
                let a = trajectories[i].samples[k];
                for (j, tj) in trajectories.iter().enumerate().skip(i + 1) {
                    let b = tj.samples[k];
                    let (dx, dy) = (a.x - b.x, a.y - b.y);
                    if dx * dx + dy * dy <= r2 {
                        edges.push((i as u32, j as u32));
                    }
                }
            }
            edges
        })
        .collect();

    let mut b = GraphBuilder::new(delta_t, n).timeline(frames);
    for (k, edges) in per_frame.into_iter().enumerate() {
        for (i, j) in edges {
            b.add_contact(FrameIndex(k as u32), NodeId(i), NodeId(j))?;
        }
    }
    Ok(b.build())
}

/// Simulate the configured model and extract its contact graph.
pub fn generate_contacts(cfg: &MobilityConfig) -> Result<TemporalContactGraph> {
    let run = simulate(cfg)?;
    trajectories_to_contacts(&run.trajectories, cfg.detection_range, cfg.sample_interval)
}
