//! Heterogeneous community trace with day/night activity.
//!
//! Not a mobility model: contacts are drawn directly per frame. Nodes are
//! split into groups that meet often internally and rarely across groups,
//! with per-node activity and per-group openness spread over orders of
//! magnitude. Nothing happens outside the daily active window.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sampler::inverse_cdf;
use super::walk::node_rng;
use crate::error::{Error, Result};
use crate::graph::{FrameIndex, GraphBuilder, NodeId, TemporalContactGraph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BurstyConfig {
    pub node_count: usize,
    pub groups: usize,
    pub days: u32,
    pub delta_t: u64,
    /// Active seconds at the start of every 24 h period.
    pub active_secs: u64,
    /// Per-frame contact probability scale for two members of a group.
    pub intra_rate: f64,
    /// Per-frame contact probability scale across groups.
    pub inter_rate: f64,
    /// Group `g` has openness `10^(-openness_decades * g / (groups - 1))`.
    pub openness_decades: f64,
    /// Activity exponent; per-node activity is power-law on `[0.05, 1]`.
    pub activity_exponent: f64,
    pub seed: u64,
}

impl Default for BurstyConfig {
    fn default() -> Self {
        BurstyConfig {
            node_count: 100,
            groups: 10,
            days: 3,
            delta_t: 20,
            active_secs: 10 * 3600,
            intra_rate: 0.1,
            inter_rate: 0.05,
            openness_decades: 5.0,
            activity_exponent: 0.5,
            seed: 0,
        }
    }
}

const DAY: u64 = 24 * 3600;

pub fn bursty_trace(cfg: &BurstyConfig) -> Result<TemporalContactGraph> {
    if cfg.node_count < 2 || cfg.groups == 0 || cfg.groups > cfg.node_count {
        return Err(Error::Config(format!(
            "need at least 2 nodes and 1..=node_count groups (got {} nodes, {} groups)",
            cfg.node_count, cfg.groups
        )));
    }
    if cfg.delta_t == 0 || cfg.active_secs > DAY {
        return Err(Error::Config(
            "delta_t must be positive and active_secs at most a day".into(),
        ));
    }
    let ok = |x: f64| (0.0..=1.0).contains(&x);
    if !ok(cfg.intra_rate) || !ok(cfg.inter_rate) || cfg.openness_decades < 0.0 || cfg.activity_exponent <= 0.0 {
        return Err(Error::Config(
            "rates must lie in [0, 1] and exponents be positive".into(),
        ));
    }

    // node streams draw activities, stream u32::MAX draws contacts
    let n = cfg.node_count;
    let group: Vec<usize> = (0..n).map(|i| i * cfg.groups / n).collect();
    let activity: Vec<f64> = (0..n)
        .map(|i| {
            let mut rng = node_rng(cfg.seed, NodeId(i as u32));
            inverse_cdf(cfg.activity_exponent, 0.05, 1.0, rng.random::<f64>())
        })
        .collect();
    let spread = (cfg.groups.max(2) - 1) as f64;
    let openness: Vec<f64> = (0..cfg.groups)
        .map(|k| 10f64.powf(-cfg.openness_decades * k as f64 / spread))
        .collect();
    let mut rng = node_rng(cfg.seed, NodeId(u32::MAX));

    let frames = (cfg.days as u64 * DAY / cfg.delta_t) as usize;
    let mut b = GraphBuilder::new(cfg.delta_t, n).timeline(frames);
    for f in 0..frames {
        let t = f as u64 * cfg.delta_t;
        if t % DAY >= cfg.active_secs {
            continue;
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let base = activity[i] * activity[j];
                let p = if group[i] == group[j] {
                    cfg.intra_rate * base
                } else {
                    cfg.inter_rate * base * openness[group[i]] * openness[group[j]]
                };
                if rng.random::<f64>() < p {
                    b.add_contact(FrameIndex(f as u32), NodeId(i as u32), NodeId(j as u32))?;
                }
            }
        }
    }
    Ok(b.build())
}
