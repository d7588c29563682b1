use std::fs;
use std::io::Write;

use anyhow::{bail, Context, Result};
use frt::mobility::{bursty_trace, generate_contacts, BurstyConfig, MobilityConfig, Model};
use frt::TemporalContactGraph;
use serde::Serialize;

use crate::args::{GenerateArgs, GlobalArgs, Preset};
use crate::output::{OutputSet, RunManifest};
use crate::UsageError;

/// Fully resolved generator settings; this is the manifest's config snapshot.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum GeneratorConfig {
    Mobility(MobilityConfig),
    Bursty {
        model: &'static str,
        #[serde(flatten)]
        config: BurstyConfig,
    },
}

impl GeneratorConfig {
    pub fn seed(&self) -> u64 {
        match self {
            GeneratorConfig::Mobility(c) => c.seed,
            GeneratorConfig::Bursty { config, .. } => config.seed,
        }
    }

    pub fn model_name(&self) -> &'static str {
        match self {
            GeneratorConfig::Mobility(c) => match c.model {
                Model::Rwp => "rwp",
                Model::Tlw => "tlw",
            },
            GeneratorConfig::Bursty { .. } => "bursty",
        }
    }

    pub fn build(&self) -> Result<TemporalContactGraph> {
        Ok(match self {
            GeneratorConfig::Mobility(c) => generate_contacts(c)?,
            GeneratorConfig::Bursty { config, .. } => bursty_trace(config)?,
        })
    }
}

/// Resolve the config file or preset and apply command-line overrides.
pub fn resolve(args: &GenerateArgs, global: &GlobalArgs) -> Result<GeneratorConfig> {
    let mut table = match (&args.config, args.preset) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            text.parse::<toml::Table>()
                .with_context(|| format!("parsing {}", path.display()))?
        }
        (None, Some(p)) => preset_table(p)?,
        (None, None) => return Err(UsageError("one of --config or --preset is required".into()).into()),
    };
    let model = match table.get("model").and_then(|v| v.as_str()) {
        Some(m @ ("rwp" | "tlw" | "bursty")) => m.to_string(),
        Some(other) => bail!("unknown model {other:?}; expected rwp, tlw or bursty"),
        None => bail!("config has no `model` key"),
    };
    let bursty = model == "bursty";

    let int = |x: u64| toml::Value::Integer(x as i64);
    if let Some(seed) = global.seed {
        table.insert("seed".into(), int(seed));
    } else if !table.contains_key("seed") {
        log::warn!("no seed in config or on the command line, using 0");
        table.insert("seed".into(), int(0));
    }
    if let Some(n) = args.nodes {
        table.insert("node_count".into(), int(n as u64));
    }
    if let Some(d) = args.duration {
        if bursty {
            return Err(UsageError("--duration applies to mobility models; set `days` for bursty".into()).into());
        }
        table.insert("duration".into(), int(d));
    }
    if let Some(dt) = global.delta_t {
        let key = if bursty { "delta_t" } else { "sample_interval" };
        table.insert(key.into(), int(dt));
    }

    let value = toml::Value::Table(table);
    if bursty {
        let config: BurstyConfig = value.try_into().context("invalid bursty config")?;
        Ok(GeneratorConfig::Bursty {
            model: "bursty",
            config,
        })
    } else {
        let config: MobilityConfig = value.try_into().context("invalid mobility config")?;
        config.validate()?;
        Ok(GeneratorConfig::Mobility(config))
    }
}

fn preset_table(p: Preset) -> Result<toml::Table> {
    let mut t = match p {
        Preset::Rwp => toml::Table::try_from(MobilityConfig::reference_rwp(0))?,
        Preset::Tlw => toml::Table::try_from(MobilityConfig::reference_tlw(0))?,
        Preset::Bursty => {
            let mut t = toml::Table::try_from(BurstyConfig::default())?;
            t.insert("model".into(), "bursty".into());
            t
        }
    };
    // presets carry no seed of their own
    t.remove("seed");
    Ok(t)
}

pub fn run(args: &GenerateArgs, global: &GlobalArgs) -> Result<()> {
    let cfg = resolve(args, global)?;
    let g = cfg.build()?;
    log::info!(
        "{}: {} nodes, {} frames, {} edge-frames",
        cfg.model_name(),
        g.node_count(),
        g.frame_count(),
        g.edge_frame_count()
    );

    let out = &args.out;
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
    let mut w = set.create(&name)?;
    writeln!(
        w,
        "# model={} nodes={} delta_t={} seed={}",
        cfg.model_name(),
        g.node_count(),
        g.delta_t(),
        cfg.seed()
    )?;
    g.write_trace(&mut w)?;
    w.flush()?;
    drop(w);

    let mut manifest = RunManifest::new("generate", serde_json::to_value(&cfg)?);
    if let Some(path) = &args.config {
        manifest.input(path)?;
    }
    manifest.seed = Some(cfg.seed());
    set.finish(manifest, &format!("{name}.manifest.json"))
}
