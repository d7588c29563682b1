use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;

use crate::analyze::Summary;
use crate::args::{CompareArgs, Metric};
use crate::output::{OutputSet, RunManifest};
use crate::UsageError;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareRow {
    pub dataset: String,
    pub average: f64,
    pub standard_deviation: f64,
    pub dispersion_ratio: f64,
    pub count: u64,
}

pub fn rows(paths: &[impl AsRef<Path>], metric: Metric) -> Result<Vec<CompareRow>> {
    paths
        .iter()
        .map(|p| {
            let p = p.as_ref();
            let s = Summary::read(p)?;
            let m = s
                .metrics
                .get(metric.key())
                .with_context(|| format!("{}: no {} metric", p.display(), metric.key()))?;
            let st = m
                .stats
                .with_context(|| format!("{}: too few records for {}", p.display(), metric.key()))?;
            Ok(CompareRow {
                dataset: s.label,
                average: st.average,
                standard_deviation: st.standard_deviation,
                dispersion_ratio: st.dispersion_ratio,
                count: st.count,
            })
        })
        .collect()
}

/// Right-aligned text table with four decimals.
pub fn render(rows: &[CompareRow]) -> String {
    let head = ["Dataset", "Average", "Standard Deviation", "Std. Dev. / Average"];
    let cells: Vec<[String; 4]> = rows
        .iter()
        .map(|r| {
            [
                r.dataset.clone(),
                format!("{:.4}", r.average),
                format!("{:.4}", r.standard_deviation),
                format!("{:.4}", r.dispersion_ratio),
            ]
        })
        .collect();
    let mut width = head.map(str::len);
    for c in &cells {
        for (w, s) in width.iter_mut().zip(c) {
            *w = (*w).max(s.chars().count());
        }
    }
    let line = |c: [&str; 4]| {
        let mut s = format!("{:<w$}", c[0], w = width[0]);
        for k in 1..4 {
            s.push_str(&format!("  {:>w$}", c[k], w = width[k]));
        }
        s.push('\n');
        s
    };
    let mut out = line(head);
    out.push_str(&line(width.map(|w| "-".repeat(w)).each_ref().map(String::as_str)));
    for c in &cells {
        out.push_str(&line(c.each_ref().map(String::as_str)));
    }
    out
}

pub fn run(args: &CompareArgs) -> Result<()> {
    if args.summaries.len() < 2 {
        return Err(UsageError("compare needs at least two summaries".into()).into());
    }
    let rows = rows(&args.summaries, args.metric)?;
    let table = render(&rows);

    if let Some(out) = &args.out {
        let name = out
            .file_name()
            .and_then(|s| s.to_str())
            .ok_or_else(|| UsageError(format!("--out {} is not a file path", out.display())))?
            .to_string();
        let dir = match out.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => ".".into(),
        };
        let mut set = OutputSet::new(&dir)?;
        {
            let mut w = csv::Writer::from_writer(set.create(&name)?);
            for r in &rows {
                w.serialize(r)?;
            }
            w.into_inner().map_err(|e| e.into_error())?.flush()?;
        }
        let mut manifest = RunManifest::new("compare", json!({ "metric": args.metric.key() }));
        for p in &args.summaries {
            manifest.input(p)?;
        }
        set.finish(manifest, &format!("{name}.manifest.json"))?;
    }
    print!("{table}");
    Ok(())
}
