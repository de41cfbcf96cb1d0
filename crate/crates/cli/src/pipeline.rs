//! `pipeline`: every stage in order from one configuration file.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

use scholnet::catalog::ProviderConfig;
use scholnet::graph::ExportFormat;
use scholnet::sweep::SweepGrid;

use crate::output::read_text;
use crate::stages::{self, *};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusInputs {
    pub refs: PathBuf,
    pub links: PathBuf,
    #[serde(default)]
    pub seeds: Option<PathBuf>,
    #[serde(default)]
    pub dedup: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(flatten)]
    pub grid: SweepGrid,
    #[serde(default)]
    pub band: Option<(usize, usize)>,
}

/// Relative paths are resolved against the directory of the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: CorpusInputs,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default = "default_format")]
    pub format: String,
    #[serde(default)]
    pub enrich: Option<ProviderConfig>,
    #[serde(default)]
    pub communities: CommunityParams,
    #[serde(default)]
    pub ranksize: RanksizeParams,
    #[serde(default)]
    pub cliques: CliqueParams,
    #[serde(default)]
    pub keywords: KeywordOptions,
    #[serde(default)]
    pub semantic: SemanticParams,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

fn default_format() -> String {
    "gexf".into()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let mut cfg: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        resolve(&mut cfg.corpus.refs);
        resolve(&mut cfg.corpus.links);
        if let Some(s) = cfg.corpus.seeds.as_mut() {
            resolve(s);
        }
        resolve(&mut cfg.output);
        if let Some(p) = cfg.enrich.as_mut() {
            resolve(&mut p.cache_dir);
        }
        Ok(cfg)
    }
}

/// Run all stages; returns the summary lines printed by the stages.
pub fn run(cfg: &RunConfig, out: &Path, seed: u64) -> Result<Vec<String>> {
    let format: ExportFormat = cfg.format.parse().map_err(anyhow::Error::msg)?;
    let ext = format.extension();
    let store = out.join("store");
    let mut lines = Vec::new();

    stages::ingest(
        &IngestArgs {
            refs: cfg.corpus.refs.clone(),
            links: cfg.corpus.links.clone(),
            seeds: cfg.corpus.seeds.clone(),
            dedup: cfg.corpus.dedup,
            out: store.clone(),
        },
        seed,
    )?;
    if let Some(provider) = &cfg.enrich {
        stages::enrich(&store, provider.clone().with_env_overrides(), &store, seed)?;
    }
    stages::citation_graph(
        &CitationGraphArgs {
            store: store.clone(),
            out: out.to_path_buf(),
            format,
        },
        seed,
    )?;
    let core = out.join(format!("{CITATION_CORE}.{ext}"));
    let full = out.join(format!("{CITATION_GRAPH}.{ext}"));
    lines.push(format!(
        "citation {}",
        stages::communities(
            &CommunitiesArgs {
                graph: core,
                out: out.to_path_buf(),
                name: "citation".into(),
                params: cfg.communities.clone(),
            },
            seed,
        )?
    ));
    stages::ranksize(
        &RanksizeArgs {
            graph: full.clone(),
            out: out.to_path_buf(),
            params: cfg.ranksize.clone(),
        },
        seed,
    )?;
    stages::cliques(
        &CliquesArgs {
            graph: full,
            out: out.to_path_buf(),
            params: cfg.cliques.clone(),
        },
        seed,
    )?;
    stages::keywords(
        &KeywordsArgs {
            store: store.clone(),
            out: out.to_path_buf(),
            options: cfg.keywords.clone(),
        },
        seed,
    )?;
    lines.push(format!(
        "semantic {}",
        stages::semantic_graph(
            &SemanticGraphArgs {
                keywords: out.to_path_buf(),
                out: out.to_path_buf(),
                format,
                params: cfg.semantic.clone(),
            },
            seed,
        )?
    ));
    if let Some(s) = &cfg.sweep {
        stages::sweep(out, &s.grid, s.band, &out.join("sweep.csv"), seed)?;
    }
    stages::measures(
        &MeasuresArgs {
            store,
            citation_partition: out.join("citation_communities.csv"),
            keywords: out.to_path_buf(),
            semantic_partition: out.join("semantic_communities.csv"),
            out: out.to_path_buf(),
        },
        seed,
    )?;
    Ok(lines)
}
