use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use frt::stats::{
    arrival_histogram, contact_histogram, level_boxplot, log_binned_pdf, summary, DegreeAverages, Histogram,
    SummaryStats,
};
use frt::NodeId;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::args::{AnalyzeArgs, GlobalArgs, Metric};
use crate::output::{sha256_file, OutputSet, RunManifest, MANIFEST_NAME};
use crate::simulate::load_trace;
use crate::tables::{DelayRow, TreeRow, TREES_NAME};
use crate::UsageError;

pub const SUMMARY_NAME: &str = "summary.json";
pub const SUMMARY_SCHEMA: &str = "frt-summary/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub unit: String,
    /// Absent when fewer than two records exist.
    pub stats: Option<SummaryStats>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutDegreeSummary {
    pub bin_width: f64,
    pub nodes: u64,
    pub mean: f64,
    /// Centre of the highest-density bin.
    pub mode_center: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub level: u32,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema: String,
    pub label: String,
    /// Settings of the simulate run that produced the table, when known.
    pub source: serde_json::Value,
    pub trees: u64,
    pub records: u64,
    pub metrics: BTreeMap<String, MetricSummary>,
    pub out_degree: OutDegreeSummary,
    pub levels: Vec<LevelRow>,
}

impl Summary {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let v: serde_json::Value =
            serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
        match v.get("schema").and_then(|s| s.as_str()) {
            Some(SUMMARY_SCHEMA) => {}
            Some(other) => bail!("{}: schema {other:?}, expected {SUMMARY_SCHEMA:?}", path.display()),
            None => bail!("{}: not a summary (no schema field)", path.display()),
        }
        serde_json::from_value(v).with_context(|| format!("{}: malformed summary", path.display()))
    }
}

/// Per-tree aggregates rebuilt from the two tables.
struct TreeAgg {
    degrees: BTreeMap<u32, usize>,
    levels: BTreeMap<u32, usize>,
}

#[derive(Default)]
struct Interner(BTreeMap<String, u32>);

impl Interner {
    fn id(&mut self, label: &str) -> u32 {
        if let Some(&i) = self.0.get(label) {
            return i;
        }
        let i = self.0.len() as u32;
        self.0.insert(label.to_string(), i);
        i
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<BufReader<File>>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(csv::Reader::from_reader(BufReader::new(f)))
}

fn write_histogram(set: &mut OutputSet, name: &str, h: &Histogram) -> Result<()> {
    let mut w = set.create(name)?;
    h.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

pub fn run(args: &AnalyzeArgs, global: &GlobalArgs) -> Result<()> {
    if args.log_factor.is_nan() || args.log_factor <= 1.0 {
        return Err(UsageError(format!("--log-factor {} must exceed 1", args.log_factor)).into());
    }
    if args.degree_bin.is_nan() || args.degree_bin <= 0.0 {
        return Err(UsageError(format!("--degree-bin {} must be positive", args.degree_bin)).into());
    }
    let mut metrics = if args.metrics.is_empty() {
        Metric::ALL.to_vec()
    } else {
        args.metrics.clone()
    };
    metrics.sort();
    metrics.dedup();

    let dir = args.delays.parent().unwrap_or(Path::new("."));
    let trees_path = args.trees.clone().unwrap_or_else(|| dir.join(TREES_NAME));
    let source = RunManifest::read(&dir.join(MANIFEST_NAME))
        .ok()
        .filter(|m| m.command == "simulate");
    let source_config = source
        .as_ref()
        .map(|m| m.config.clone())
        .unwrap_or(serde_json::Value::Null);
    let delta_t = global
        .delta_t
        .or_else(|| source_config.get("delta_t").and_then(|v| v.as_u64()))
        .unwrap_or_else(|| global.delta_t());

    // trees first, so trees that reached nobody still count
    let mut names = Interner::default();
    let mut trees: BTreeMap<u64, TreeAgg> = BTreeMap::new();
    for row in csv_reader(&trees_path)?.deserialize::<TreeRow>() {
        let row = row.with_context(|| format!("reading {}", trees_path.display()))?;
        let root = names.id(&row.root);
        trees.insert(
            row.tree_id,
            TreeAgg {
                degrees: BTreeMap::from([(root, 0)]),
                levels: BTreeMap::from([(0, 1)]),
            },
        );
    }

    let mut samples: BTreeMap<Metric, Vec<f64>> = metrics.iter().map(|&m| (m, Vec::new())).collect();
    let mut level_arrivals = Vec::new();
    let mut max_arrival = 0u64;
    let mut records = 0u64;
    for row in csv_reader(&args.delays)?.deserialize::<DelayRow>() {
        let row = row.with_context(|| format!("reading {}", args.delays.display()))?;
        records += 1;
        for (m, v) in samples.iter_mut() {
            v.push(match m {
                Metric::DelayT0 => row.delay_t0 as f64,
                Metric::DelayRoot => row.delay_root as f64,
                Metric::DelayFirstContact => row.delay_first_contact as f64,
                Metric::ElapsedContact => row.elapsed_contact as f64,
            });
        }
        let arrival = row.arrival_frame as u64 * delta_t;
        max_arrival = max_arrival.max(arrival);
        if row.level == args.level {
            level_arrivals.push(arrival);
        }
        let node = names.id(&row.node);
        let parent = names.id(&row.parent);
        let Some(t) = trees.get_mut(&row.tree_id) else {
            bail!(
                "{}: tree {} is not in {}",
                args.delays.display(),
                row.tree_id,
                trees_path.display()
            );
        };
        t.degrees.entry(node).or_insert(0);
        *t.degrees.entry(parent).or_insert(0) += 1;
        *t.levels.entry(row.level).or_insert(0) += 1;
    }

    let mut set = OutputSet::new(&args.out_dir)?;
    let mut metric_summaries = BTreeMap::new();
    for (m, v) in &samples {
        if !v.is_empty() {
            write_histogram(
                &mut set,
                &format!("{}.csv", m.key()),
                &log_binned_pdf(v, args.log_factor)?,
            )?;
        }
        let stats = (v.len() >= 2).then(|| summary(v)).transpose()?;
        metric_summaries.insert(
            m.key().to_string(),
            MetricSummary {
                unit: m.unit().to_string(),
                stats,
            },
        );
    }

    let mut degrees = DegreeAverages::new();
    for t in trees.values() {
        let d: BTreeMap<NodeId, usize> = t.degrees.iter().map(|(&n, &c)| (NodeId(n), c)).collect();
        degrees.add_tree(&d);
    }
    let density = degrees.density(args.degree_bin)?;
    write_histogram(&mut set, "out_degree.csv", &density)?;
    let avgs = degrees.averages();
    let out_degree = OutDegreeSummary {
        bin_width: args.degree_bin,
        nodes: avgs.len() as u64,
        mean: if avgs.is_empty() {
            0.0
        } else {
            avgs.values().sum::<f64>() / avgs.len() as f64
        },
        mode_center: density.mode().map(|b| b.center()),
    };

    let boxes = level_boxplot(trees.values().map(|t| &t.levels));
    let levels: Vec<LevelRow> = boxes
        .iter()
        .map(|b| LevelRow {
            level: b.level,
            median: b.median,
            q25: b.q25,
            q75: b.q75,
            whisker_low: b.whisker_low,
            whisker_high: b.whisker_high,
            outliers: b.outliers.len() as u64,
        })
        .collect();
    {
        let mut w = csv::Writer::from_writer(set.create("levels.csv")?);
        for l in &levels {
            w.serialize(l)?;
        }
        w.into_inner().map_err(|e| e.into_error())?.flush()?;
    }

    let mut manifest_inputs: Vec<PathBuf> = vec![args.delays.clone(), trees_path.clone()];
    let timeline_secs = match &args.trace {
        Some(path) => {
            let g = load_trace(path, delta_t)?;
            write_histogram(&mut set, "contacts.csv", &contact_histogram(&g, args.window)?)?;
            manifest_inputs.push(path.clone());
            g.frame_count() as u64 * delta_t
        }
        None => max_arrival + delta_t,
    };
    let arrivals = arrival_histogram(&level_arrivals, args.window, delta_t, timeline_secs)?;
    write_histogram(&mut set, &format!("arrivals_level{}.csv", args.level), &arrivals)?;

    let label = args
        .label
        .clone()
        .or_else(|| {
            source_config
                .get("trace_name")
                .and_then(|v| v.as_str())
                .map(String::from)
        })
        .unwrap_or_else(|| "dataset".to_string());
    let summary = Summary {
        schema: SUMMARY_SCHEMA.to_string(),
        label,
        source: json!({
            "delays_sha256": sha256_file(&args.delays)?,
            "simulate": source_config,
        }),
        trees: trees.len() as u64,
        records,
        metrics: metric_summaries,
        out_degree,
        levels,
    };
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    set.write(SUMMARY_NAME, json.as_bytes())?;
    anyhow::ensure!(
        Summary::read(&set.dir().join(SUMMARY_NAME))? == summary,
        "summary did not round-trip"
    );

    let mut manifest = RunManifest::new(
        "analyze",
        json!({
            "metrics": metrics.iter().map(|m| m.key()).collect::<Vec<_>>(),
            "log_factor": args.log_factor,
            "degree_bin": args.degree_bin,
            "level": args.level,
            "window": args.window,
            "delta_t": delta_t,
            "label": summary.label,
        }),
    );
    for p in &manifest_inputs {
        manifest.input(p)?;
    }
    manifest.seed = source.as_ref().and_then(|m| m.seed);
    manifest.mode = source.and_then(|m| m.mode);
    set.finish(manifest, MANIFEST_NAME)
}
