use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use frt::metrics::delay_record_with;
use frt::spread::{evenly_spaced_frames, sweep_map_range};
use frt::{FirstContactRule, FrameIndex, NodeId, ParseOptions, PropagationMode, SweepSpec, TemporalContactGraph};
use serde_json::json;

use crate::args::{GlobalArgs, SimulateArgs};
use crate::output::{OutputSet, RunManifest, MANIFEST_NAME};
use crate::tables::{DelayRow, TreeRow, DELAYS_NAME, TREES_NAME};
use crate::UsageError;

/// Trees flooded per parallel batch; bounds memory on large sweeps.
const CHUNK: usize = 2048;

/// The generator manifest written next to a trace, if there is one.
pub fn trace_manifest(trace: &Path) -> Option<RunManifest> {
    let mut p = trace.as_os_str().to_owned();
    p.push(".manifest.json");
    let p = PathBuf::from(p);
    p.exists().then(|| RunManifest::read(&p).ok()).flatten()
}

/// Frame length for `trace`: the flag if given, else the one its
/// generator recorded, else the default.
pub fn trace_delta_t(trace: &Path, global: &GlobalArgs) -> u64 {
    if let Some(dt) = global.delta_t {
        return dt;
    }
    trace_manifest(trace)
        .and_then(|m| {
            let c = &m.config;
            c.get("sample_interval")
                .or_else(|| c.get("delta_t"))
                .and_then(|v| v.as_u64())
        })
        .unwrap_or_else(|| global.delta_t())
}

pub fn load_trace(path: &Path, delta_t: u64) -> Result<TemporalContactGraph> {
    let f = File::open(path).with_context(|| format!("opening trace {}", path.display()))?;
    frt::graph::read_trace(BufReader::new(f), ParseOptions::new(delta_t))
        .with_context(|| format!("reading trace {}", path.display()))
}

pub fn parse_roots(g: &TemporalContactGraph, spec: &str) -> Result<Vec<NodeId>, UsageError> {
    if spec.trim() == "all" {
        return Ok(g.nodes().collect());
    }
    let roots: Vec<NodeId> = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|l| {
            g.node_by_label(l)
                .ok_or_else(|| UsageError(format!("--roots: node {l:?} does not appear in the trace")))
        })
        .collect::<Result<_, _>>()?;
    if roots.is_empty() {
        return Err(UsageError("--roots: no roots given".into()));
    }
    Ok(roots)
}

/// `N` evenly spaced frames over the active timeline, or an explicit
/// comma-separated list of times in seconds.
pub fn parse_times(g: &TemporalContactGraph, spec: &str) -> Result<Vec<FrameIndex>, UsageError> {
    let bad = |s: &str| UsageError(format!("--times: {s:?} is not a non-negative integer"));
    if spec.contains(',') {
        let frames: Vec<FrameIndex> = spec
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<u64>()
                    .map(|t| FrameIndex::starting_at_or_after(t, g.delta_t()))
                    .map_err(|_| bad(s))
            })
            .collect::<Result<_, _>>()?;
        if frames.is_empty() {
            return Err(UsageError("--times: empty list".into()));
        }
        return Ok(frames);
    }
    let n: usize = spec.trim().parse().map_err(|_| bad(spec))?;
    if n == 0 {
        return Err(UsageError("--times: need at least one injection time".into()));
    }
    match (g.first_active_frame(), g.last_active_frame()) {
        (Some(a), Some(b)) => Ok(evenly_spaced_frames(a, b, n)),
        _ => Err(UsageError(
            "--times: the trace has no contacts to space injection times over".into(),
        )),
    }
}

type TreeOutput = (TreeRow, Vec<DelayRow>, Option<Vec<u8>>);

fn tree_output(
    g: &TemporalContactGraph,
    k: usize,
    tree: frt::FastestRouteTree,
    rule: FirstContactRule,
    export: bool,
) -> Result<TreeOutput> {
    let label = |n: NodeId| g.label(n).unwrap_or_default().to_string();
    let root = label(tree.root());
    let t0 = tree.message.t0.0;
    let delays = tree
        .entries
        .keys()
        .map(|&n| {
            let r = delay_record_with(g, &tree, n, rule)?;
            Ok(DelayRow {
                tree_id: k as u64,
                root: root.clone(),
                t0_frame: t0,
                node: label(r.node),
                parent: label(r.parent),
                level: r.level,
                arrival_frame: r.arrival.0,
                first_contact_frame: r.first_contact.0,
                delay_t0: r.delay_t0,
                delay_root: r.delay_root,
                delay_first_contact: r.delay_first_contact,
                elapsed_contact: r.elapsed_contact,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let csv = if export {
        let mut buf = Vec::new();
        tree.write_csv(g, &mut buf)?;
        Some(buf)
    } else {
        None
    };
    let row = TreeRow {
        tree_id: k as u64,
        root,
        t0_frame: t0,
        t_r_frame: tree.t_r.map(|f| f.0),
        size: tree.len() as u64,
        depth: tree.depth(),
    };
    Ok((row, delays, csv))
}

pub fn run(args: &SimulateArgs, global: &GlobalArgs) -> Result<()> {
    let dt = trace_delta_t(&args.trace, global);
    let g = load_trace(&args.trace, dt)?;
    let roots = parse_roots(&g, &args.roots)?;
    let frames = parse_times(&g, &args.times)?;
    let modes = global.mode.modes();
    log::info!(
        "{} nodes, {} frames; {} roots x {} injection times",
        g.node_count(),
        g.frame_count(),
        roots.len(),
        frames.len()
    );

    // all mode directories succeed or none is kept
    let mut sets = Vec::new();
    for mode in modes {
        let dir = if global.mode.modes().len() > 1 {
            args.out_dir.join(mode.as_str())
        } else {
            args.out_dir.clone()
        };
        let spec = SweepSpec {
            injection_frames: frames.clone(),
            roots: roots.clone(),
            mode,
            tie_break: args.tie_break.into(),
        };
        sets.push(simulate_mode(args, &g, &spec, &dir, mode)?);
    }
    for (set, manifest) in sets {
        set.finish(manifest, MANIFEST_NAME)?;
    }
    Ok(())
}

fn simulate_mode(
    args: &SimulateArgs,
    g: &TemporalContactGraph,
    spec: &SweepSpec,
    dir: &Path,
    mode: PropagationMode,
) -> Result<(OutputSet, RunManifest)> {
    let rule: FirstContactRule = args.first_contact.into();
    let mut set = OutputSet::new(dir)?;
    let mut delays = csv::Writer::from_writer(set.create(DELAYS_NAME)?);
    let mut trees = csv::Writer::from_writer(set.create(TREES_NAME)?);
    let mut records = 0u64;

    let mut start = 0;
    while start < spec.len() {
        let end = (start + CHUNK).min(spec.len());
        let batch = sweep_map_range(g, spec, start..end, |k, tree| {
            tree_output(g, k, tree, rule, args.export_trees)
        })?;
        for (k, out) in (start..end).zip(batch) {
            let (row, rows, csv) = out?;
            trees.serialize(&row)?;
            for r in &rows {
                delays.serialize(r)?;
            }
            records += rows.len() as u64;
            if let Some(bytes) = csv {
                set.write(&format!("frt/tree_{k:06}.csv"), &bytes)?;
            }
        }
        start = end;
    }
    delays.into_inner().map_err(|e| e.into_error())?.flush()?;
    trees.into_inner().map_err(|e| e.into_error())?.flush()?;

    let labels =
        |ns: &[NodeId]| -> Vec<String> { ns.iter().map(|&n| g.label(n).unwrap_or_default().to_string()).collect() };
    let trace_meta = trace_manifest(&args.trace);
    let mut manifest = RunManifest::new(
        "simulate",
        json!({
            "trace_name": args.trace.file_stem().map(|s| s.to_string_lossy()),
            "delta_t": g.delta_t(),
            "node_count": g.node_count(),
            "frame_count": g.frame_count(),
            "active_frame_count": g.active_frame_count(),
            "edge_frame_count": g.edge_frame_count(),
            "roots": if args.roots.trim() == "all" { json!("all") } else { json!(labels(&spec.roots)) },
            "injection_frames": spec.injection_frames,
            "mode": mode.as_str(),
            "tie_break": spec.tie_break,
            "first_contact": rule,
            "export_trees": args.export_trees,
            "trees": spec.len(),
            "records": records,
        }),
    );
    manifest.input(&args.trace)?;
    manifest.seed = trace_meta.and_then(|m| m.seed);
    manifest.mode = Some(mode.as_str().to_string());
    log::info!("{}: {} trees, {} delay records", dir.display(), spec.len(), records);
    Ok((set, manifest))
}
