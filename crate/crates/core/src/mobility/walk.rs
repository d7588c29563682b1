//! Random Waypoint and Truncated Lévy Walk trajectory generation.
//!
//! Each node owns a ChaCha stream derived from `(seed, node id)`, so nodes
//! can be generated in parallel and the result does not depend on the
//! number of workers.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{MobilityConfig, Model};
use super::sampler::inverse_cdf;
use crate::error::{Error, Result};
use crate::graph::NodeId;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// Seconds since the start of recording.
    pub t: u64,
    pub x: f64,
    pub y: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub node: NodeId,
    pub samples: Vec<Sample>,
}

/// One movement leg followed by a pause. Times are simulation seconds,
/// negative during warm-up.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Flight {
    pub node: NodeId,
    pub start: f64,
    /// Path length before any boundary folding.
    pub length: f64,
    pub duration: f64,
    pub speed: f64,
    pub pause: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MobilityRun {
    pub trajectories: Vec<Trajectory>,
    pub flights: Vec<Flight>,
}

/// Fold a coordinate into `[0, side]` by specular reflection at both walls.
pub fn reflect(x: f64, side: f64) -> f64 {
    let m = x.rem_euclid(2.0 * side);
    if m > side {
        2.0 * side - m
    } else {
        m
    }
}

pub fn node_rng(seed: u64, node: NodeId) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(node.0 as u64);
    rng
}

struct Leg {
    dx: f64,
    dy: f64,
    length: f64,
    duration: f64,
    pause: f64,
}

fn walk_node<F>(cfg: &MobilityConfig, node: NodeId, mut next_leg: F) -> (Trajectory, Vec<Flight>)
where
    F: FnMut(&mut ChaCha8Rng, (f64, f64)) -> Leg,
{
    let (w, h) = (cfg.area.width, cfg.area.height);
    let mut rng = node_rng(cfg.seed, node);
    let mut pos = (rng.random::<f64>() * w, rng.random::<f64>() * h);
    let mut t = -cfg.warmup_secs();

    let total = cfg.sample_count();
    let interval = cfg.sample_interval;
    let sample_time = |k: usize| (k as u64 * interval) as f64;
    let mut samples = Vec::with_capacity(total);
    let mut flights = Vec::new();
    let push = |samples: &mut Vec<Sample>, k: usize, p: (f64, f64)| {
        samples.push(Sample {
            t: k as u64 * interval,
            x: p.0,
            y: p.1,
        })
    };

    while samples.len() < total {
        let leg = next_leg(&mut rng, pos);
        flights.push(Flight {
            node,
            start: t,
            length: leg.length,
            duration: leg.duration,
            speed: if leg.duration > 0.0 {
                leg.length / leg.duration
            } else {
                0.0
            },
            pause: leg.pause,
        });
        let end_move = t + leg.duration;
        while samples.len() < total && sample_time(samples.len()) <= end_move {
            let k = samples.len();
            let frac = if leg.duration > 0.0 {
                ((sample_time(k) - t) / leg.duration).max(0.0)
            } else {
                1.0
            };
            let p = (reflect(pos.0 + leg.dx * frac, w), reflect(pos.1 + leg.dy * frac, h));
            push(&mut samples, k, p);
        }
        pos = (reflect(pos.0 + leg.dx, w), reflect(pos.1 + leg.dy, h));
        t = end_move;
        let end_pause = t + leg.pause;
        while samples.len() < total && sample_time(samples.len()) <= end_pause {
            let k = samples.len();
            push(&mut samples, k, pos);
        }
        t = end_pause;
    }
    (Trajectory { node, samples }, flights)
}

fn run<F>(cfg: &MobilityConfig, leg: F) -> MobilityRun
where
    F: Fn(&mut ChaCha8Rng, (f64, f64)) -> Leg + Sync,
{
    let per_node: Vec<(Trajectory, Vec<Flight>)> = (0..cfg.node_count as u32)
        .into_par_iter()
        .map(|i| walk_node(cfg, NodeId(i), &leg))
        .collect();
    let mut trajectories = Vec::with_capacity(per_node.len());
    let mut flights = Vec::new();
    for (t, f) in per_node {
        trajectories.push(t);
        flights.extend(f);
    }
    MobilityRun { trajectories, flights }
}

fn expect_model(cfg: &MobilityConfig, model: Model) -> Result<()> {
    cfg.validate()?;
    if cfg.model != model {
        return Err(Error::Config(format!(
            "expected model {model:?}, config says {:?}",
            cfg.model
        )));
    }
    Ok(())
}

/// Random Waypoint: straight legs to uniform waypoints at a per-leg speed
/// uniform on `[speed_min, speed_max]`, each followed by a fixed pause.
pub fn simulate_rwp_detailed(cfg: &MobilityConfig) -> Result<MobilityRun> {
    expect_model(cfg, Model::Rwp)?;
    let (w, h) = (cfg.area.width, cfg.area.height);
    let p = cfg.rwp;
    Ok(run(cfg, |rng, (x, y)| {
        let to = (rng.random::<f64>() * w, rng.random::<f64>() * h);
        let speed = p.speed_min + rng.random::<f64>() * (p.speed_max - p.speed_min);
        let (dx, dy) = (to.0 - x, to.1 - y);
        let length = dx.hypot(dy);
        Leg {
            dx,
            dy,
            length,
            duration: length / speed,
            pause: p.pause,
        }
    }))
}

pub fn simulate_rwp(cfg: &MobilityConfig) -> Result<Vec<Trajectory>> {
    simulate_rwp_detailed(cfg).map(|r| r.trajectories)
}

/// Truncated Lévy Walk: power-law flight lengths in a uniform direction,
/// flight duration from the speed coupling, then a power-law pause.
/// Flights reflect specularly off the area walls.
pub fn simulate_tlw_detailed(cfg: &MobilityConfig) -> Result<MobilityRun> {
    expect_model(cfg, Model::Tlw)?;
    let p = cfg.tlw;
    Ok(run(cfg, |rng, _| {
        let length = inverse_cdf(p.alpha, p.l_min, p.l_max, rng.random::<f64>());
        let theta = TAU * rng.random::<f64>();
        let pause = inverse_cdf(p.beta, p.t_min, p.t_max, rng.random::<f64>());
        Leg {
            dx: length * theta.cos(),
            dy: length * theta.sin(),
            length,
            duration: p.speed_coupling.flight_duration(length),
            pause,
        }
    }))
}

pub fn simulate_tlw(cfg: &MobilityConfig) -> Result<Vec<Trajectory>> {
    simulate_tlw_detailed(cfg).map(|r| r.trajectories)
}

pub fn simulate(cfg: &MobilityConfig) -> Result<MobilityRun> {
    match cfg.model {
        Model::Rwp => simulate_rwp_detailed(cfg),
        Model::Tlw => simulate_tlw_detailed(cfg),
    }
}
