//! One function per subcommand. `pipeline` chains the same functions.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use serde::Deserialize;
use serde_json::json;

use scholnet::catalog::{self, ProviderConfig};
use scholnet::citation::{build_citation_graph, core_filter, maximal_cliques, network_stats, rank_size_fit};
use scholnet::community::{bootstrap_significance, louvain, RewireMode};
use scholnet::corpus::{self, dedup_by_title, Store};
use scholnet::graph::{self, ExportFormat};
use scholnet::keywords::{
    self, extract_keywords, read_index, stopword_checksums, ExternalTagger, KeywordIndex, KeywordParams, Language,
    LexiconTagger, Tagger, SCORE_VERSION,
};
use scholnet::measures::{
    citation_probabilities, composition, correlation_matrix, density_grid, one_hot_citation, originality,
    originality_distributions, semantic_probabilities, ClassProbabilities, OriginalityTable,
};
use scholnet::semantic::{build_cooccurrence, filter_network, semantic_communities, FilterParams, FILTER_ORDER};
use scholnet::sweep::{pareto_front, pareto_front_within, render_sweep_csv, run_sweep, SweepGrid};
use scholnet::{Graph, Partition};

use crate::output::{csv_field, opt_num, read_partition, read_text, render_partition, write_json, write_text, Meta};

pub const KEYWORDS_FILE: &str = "keywords.csv";
pub const POSTINGS_FILE: &str = "postings.tsv";

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn require(path: &Path) -> Result<()> {
    if !path.exists() {
        bail!("input not found: {}", path.display());
    }
    Ok(())
}

fn load_graph(path: &Path) -> Result<Graph> {
    require(path)?;
    let format = ExportFormat::from_path(path)
        .ok_or_else(|| anyhow!("cannot infer graph format of {} (use .gexf, .graphml or .csv)", path.display()))?;
    Ok(graph::import(path, format)?)
}

fn load_store(dir: &Path) -> Result<corpus::Corpus> {
    require(dir)?;
    Ok(Store::new(dir).load()?)
}

fn load_index(dir: &Path) -> Result<KeywordIndex> {
    let (k, p) = (dir.join(KEYWORDS_FILE), dir.join(POSTINGS_FILE));
    require(&k)?;
    require(&p)?;
    Ok(read_index(&k, &p)?)
}

#[derive(Args, Debug, Clone)]
pub struct IngestArgs {
    /// Line-delimited JSON references.
    #[arg(long)]
    pub refs: PathBuf,
    /// `citing_id,cited_id` CSV.
    #[arg(long)]
    pub links: PathBuf,
    /// Seed ids, one per line (default: references with source "seed").
    #[arg(long)]
    pub seeds: Option<PathBuf>,
    /// Merge references with identical normalized titles.
    #[arg(long)]
    pub dedup: bool,
    /// Corpus store directory to create.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn ingest(a: &IngestArgs, seed: u64) -> Result<()> {
    require(&a.refs)?;
    require(&a.links)?;
    if let Some(s) = &a.seeds {
        require(s)?;
    }
    let (corpus, diagnostics) = corpus::ingest(&a.refs, &a.links, a.seeds.as_deref())?;
    let (corpus, dedup) = if a.dedup {
        let (c, r) = dedup_by_title(&corpus);
        (c, Some(r))
    } else {
        (corpus, None)
    };
    let meta = Meta::new("ingest", seed).param("dedup", a.dedup);
    Store::new(&a.out).write(&corpus, &meta.pairs())?;
    write_json(
        &a.out.join("ingest.json"),
        &meta,
        &json!({ "diagnostics": diagnostics, "dedup": dedup, "stats": corpus.stats() }),
    )?;
    eprintln!("ingest: {} references, {} links", corpus.len(), corpus.links().len());
    Ok(())
}

#[derive(Args, Debug, Clone)]
pub struct EnrichArgs {
    #[arg(long)]
    pub store: PathBuf,
    /// Provider description (JSON: name, base_url, rate_limit, timeout, cache_dir).
    #[arg(long)]
    pub provider: PathBuf,
    /// Cache directory; overrides SCHOLNET_CACHE and the provider file.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Store directory for the enriched corpus (default: update in place).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn read_provider(path: &Path) -> Result<ProviderConfig> {
    require(path)?;
    let cfg: ProviderConfig =
        serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing provider {}", path.display()))?;
    Ok(cfg)
}

pub fn enrich(store: &Path, provider: ProviderConfig, out: &Path, seed: u64) -> Result<()> {
    let corpus = load_store(store)?;
    let (enriched, diagnostics) = catalog::enrich(&corpus, &provider)?;
    let meta = Meta::new("enrich", seed)
        .param("provider", &provider.name)
        .param("rate_limit", provider.rate_limit);
    Store::new(out).write(&enriched, &meta.pairs())?;
    write_json(
        &out.join("enrich.json"),
        &meta,
        &json!({ "diagnostics": diagnostics, "stats": enriched.stats() }),
    )?;
    eprintln!(
        "enrich: {} lookups, {} requests, {} abstracts filled, {} errors",
        diagnostics.lookups, diagnostics.requests, diagnostics.abstracts_filled, diagnostics.errors
    );
    Ok(())
}

pub fn enrich_cmd(a: &EnrichArgs, seed: u64) -> Result<()> {
    let mut provider = read_provider(&a.provider)?.with_env_overrides();
    if let Some(c) = &a.cache {
        provider.cache_dir = c.clone();
    }
    enrich(&a.store, provider, a.out.as_deref().unwrap_or(&a.store), seed)
}

fn parse_format(s: &str) -> Result<ExportFormat, String> {
    s.parse()
}

#[derive(Args, Debug, Clone)]
pub struct CitationGraphArgs {
    #[arg(long)]
    pub store: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// gexf, graphml or csv.
    #[arg(long, default_value = "gexf", value_parser = parse_format)]
    pub format: ExportFormat,
}

pub const CITATION_GRAPH: &str = "citation_graph";
pub const CITATION_CORE: &str = "citation_core";

pub fn citation_graph(a: &CitationGraphArgs, seed: u64) -> Result<()> {
    let corpus = load_store(&a.store)?;
    ensure_dir(&a.out)?;
    let graph = build_citation_graph(&corpus)?;
    let core = core_filter(&graph)?;
    let meta = Meta::new("citation-graph", seed).param("core_filter", "in-degree >= 1 or out-degree >= 2");
    let ext = a.format.extension();
    graph::export(&graph, None, a.format, &a.out.join(format!("{CITATION_GRAPH}.{ext}")), &meta.lines())?;
    graph::export(&core, None, a.format, &a.out.join(format!("{CITATION_CORE}.{ext}")), &meta.lines())?;
    let full = network_stats(&graph, corpus.seed_ids());
    let filtered = network_stats(&core, corpus.seed_ids());
    write_json(&a.out.join("citation_stats.json"), &meta, &json!({ "full": full, "core": filtered }))?;
    eprintln!(
        "citation-graph: {} nodes, {} edges; core {} nodes",
        graph.node_count(),
        graph.edge_count(),
        core.node_count()
    );
    Ok(())
}

fn rewire_name(mode: RewireMode) -> &'static str {
    match mode {
        RewireMode::Uniform => "uniform",
        RewireMode::DegreePreserving => "degree-preserving",
    }
}

fn parse_rewire(s: &str) -> Result<RewireMode, String> {
    match s {
        "uniform" => Ok(RewireMode::Uniform),
        "degree-preserving" => Ok(RewireMode::DegreePreserving),
        other => Err(format!("unknown rewire mode `{other}` (uniform, degree-preserving)")),
    }
}

#[derive(Args, Deserialize, Debug, Clone)]
#[serde(default, deny_unknown_fields)]
pub struct CommunityParams {
    /// Number of rewired samples for the significance test.
    #[arg(long)]
    pub bootstrap: Option<usize>,
    /// uniform or degree-preserving.
    #[arg(long, default_value = "uniform", value_parser = parse_rewire)]
    pub rewire: RewireMode,
    /// Best-connected members listed per community.
    #[arg(long, default_value_t = 5)]
    pub top_titles: usize,
}

impl Default for CommunityParams {
    fn default() -> Self {
        Self {
            bootstrap: None,
            rewire: RewireMode::Uniform,
            top_titles: 5,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct CommunitiesArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Prefix of the output files.
    #[arg(long, default_value = "citation")]
    pub name: String,
    #[command(flatten)]
    pub params: CommunityParams,
}

pub fn communities(a: &CommunitiesArgs, seed: u64) -> Result<String> {
    let graph = load_graph(&a.graph)?;
    ensure_dir(&a.out)?;
    let p = &a.params;
    let mut meta = Meta::new("communities", seed).param("name", &a.name);
    if let Some(n) = p.bootstrap {
        meta = meta.param("bootstrap", n).param("rewire", rewire_name(p.rewire));
    }
    let result = louvain(&graph, seed)?;
    let boot = p
        .bootstrap
        .map(|n| bootstrap_significance(&graph, &result.partition, n, seed, p.rewire))
        .transpose()?;

    write_text(
        &a.out.join(format!("{}_communities.csv", a.name)),
        &render_partition(&result.partition, &meta),
    )?;
    write_json(
        &a.out.join(format!("{}_communities.json", a.name)),
        &meta,
        &json!({ "result": result, "bootstrap": boot }),
    )?;
    write_text(
        &a.out.join(format!("{}_names.csv", a.name)),
        &render_names(&graph, &result.partition, p.top_titles, &meta),
    )?;

    let mut line = format!("Q={} C={}", result.modularity, result.num_communities());
    if let Some(b) = &boot {
        line.push_str(&format!(" bootstrap_mean={} bootstrap_std={}", b.mean, b.std));
    }
    Ok(line)
}

/// Members with the most incoming links (all links for undirected graphs)
/// per community, to help naming communities by hand.
fn render_names(graph: &Graph, partition: &Partition, top: usize, meta: &Meta) -> String {
    let mut out = meta.comment_block();
    out.push_str("community,size,rank,node_id,degree,label\n");
    let degree = |i: usize| {
        if graph.is_directed() {
            graph.in_degree_of(i)
        } else {
            graph.total_degree_of(i)
        }
    };
    let sizes = partition.sizes();
    for (c, &size) in sizes.iter().enumerate() {
        let mut members: Vec<(usize, &str)> = partition
            .members(c)
            .into_iter()
            .filter_map(|id| graph.node_index(id).map(|i| (degree(i), id)))
            .collect();
        members.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
        for (rank, (d, id)) in members.into_iter().take(top).enumerate() {
            let label = graph.node_index(id).map(|i| graph.node_data(i).label.clone()).unwrap_or_default();
            out.push_str(&format!("{c},{size},{},{},{d},{}\n", rank + 1, csv_field(id), csv_field(&label)));
        }
    }
    out
}

#[derive(Args, Deserialize, Debug, Clone)]
#[serde(default, deny_unknown_fields)]
pub struct RanksizeParams {
    #[arg(long, default_value_t = 3)]
    pub regimes: usize,
    #[arg(long, default_value_t = 10)]
    pub min_points: usize,
}

impl Default for RanksizeParams {
    fn default() -> Self {
        Self {
            regimes: 3,
            min_points: 10,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct RanksizeArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub params: RanksizeParams,
}

pub fn ranksize(a: &RanksizeArgs, seed: u64) -> Result<()> {
    let graph = load_graph(&a.graph)?;
    ensure_dir(&a.out)?;
    let fit = rank_size_fit(&graph, a.params.regimes, a.params.min_points)?;
    let meta = Meta::new("ranksize", seed)
        .param("regimes", a.params.regimes)
        .param("min_points", a.params.min_points);
    let mut points = meta.comment_block();
    let mut fitted = meta.comment_block();
    points.push_str("rank,citations,regime,alpha\n");
    fitted.push_str("regime,rank,fitted\n");
    for n in &fit.ranked {
        let r = fit.regime_of(n.rank).expect("regimes tile the ranks");
        let regime = &fit.regimes[r];
        points.push_str(&format!("{},{},{r},{}\n", n.rank, n.citations, regime.alpha));
        fitted.push_str(&format!("{r},{},{}\n", n.rank, regime.fitted(n.rank)));
    }
    let mut regimes = meta.comment_block();
    regimes.push_str("regime,rank_start,rank_end,alpha,intercept,r2,mean_year\n");
    for (i, g) in fit.regimes.iter().enumerate() {
        regimes.push_str(&format!(
            "{i},{},{},{},{},{},{}\n",
            g.rank_start,
            g.rank_end,
            g.alpha,
            g.intercept,
            g.r2,
            opt_num(g.mean_year)
        ));
    }
    write_text(&a.out.join("ranksize.csv"), &points)?;
    write_text(&a.out.join("ranksize_fitted.csv"), &fitted)?;
    write_text(&a.out.join("ranksize_regimes.csv"), &regimes)?;
    Ok(())
}

#[derive(Args, Deserialize, Debug, Clone)]
#[serde(default, deny_unknown_fields)]
pub struct CliqueParams {
    #[arg(long, default_value_t = 3)]
    pub min_size: usize,
}

impl Default for CliqueParams {
    fn default() -> Self {
        Self { min_size: 3 }
    }
}

#[derive(Args, Debug, Clone)]
pub struct CliquesArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub params: CliqueParams,
}

pub fn cliques(a: &CliquesArgs, seed: u64) -> Result<usize> {
    let graph = load_graph(&a.graph)?;
    ensure_dir(&a.out)?;
    if a.params.min_size == 0 {
        bail!("--min-size must be positive");
    }
    let found = maximal_cliques(&graph, a.params.min_size);
    let meta = Meta::new("cliques", seed).param("min_size", a.params.min_size);
    let mut text = meta.comment_block();
    for c in &found {
        text.push_str(&c.join(","));
        text.push('\n');
    }
    write_text(&a.out.join("cliques.txt"), &text)?;
    Ok(found.len())
}

#[derive(Args, Deserialize, Debug, Clone)]
#[serde(default, deny_unknown_fields)]
pub struct KeywordOptions {
    /// Number of keywords kept.
    #[arg(long, default_value_t = 50_000)]
    pub kw: usize,
    /// Minimal document frequency of a scored candidate.
    #[arg(long, default_value_t = 3)]
    pub min_freq: usize,
    /// External tagger program (token-per-line protocol).
    #[arg(long)]
    pub tagger_cmd: Option<String>,
    /// Argument passed to the tagger program (repeatable).
    #[arg(long = "tagger-arg")]
    pub tagger_args: Vec<String>,
    /// Languages routed to the external tagger (default: en,fr).
    #[arg(long, value_delimiter = ',')]
    pub tagger_langs: Vec<String>,
}

impl Default for KeywordOptions {
    fn default() -> Self {
        Self {
            kw: 50_000,
            min_freq: 3,
            tagger_cmd: None,
            tagger_args: Vec::new(),
            tagger_langs: Vec::new(),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct KeywordsArgs {
    #[arg(long)]
    pub store: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub options: KeywordOptions,
}

pub fn keywords(a: &KeywordsArgs, seed: u64) -> Result<()> {
    let corpus = load_store(&a.store)?;
    ensure_dir(&a.out)?;
    let o = &a.options;
    let tagger: Box<dyn Tagger> = match &o.tagger_cmd {
        Some(cmd) => {
            let langs = if o.tagger_langs.is_empty() {
                vec![Language::En, Language::Fr]
            } else {
                o.tagger_langs
                    .iter()
                    .map(|l| l.parse::<Language>().map_err(|e| anyhow!("{e}")))
                    .collect::<Result<_>>()?
            };
            Box::new(ExternalTagger::new(cmd.clone(), o.tagger_args.clone(), langs))
        }
        None => Box::new(LexiconTagger),
    };
    let params = KeywordParams {
        kw: o.kw,
        min_freq: o.min_freq,
    };
    let run = extract_keywords(&corpus, &params, tagger.as_ref())?;
    let checksums = stopword_checksums();
    let mut meta = Meta::new("keywords", seed)
        .param("kw", o.kw)
        .param("min_freq", o.min_freq)
        .param("score", SCORE_VERSION)
        .param("tagger", tagger.name());
    for (lang, sum) in &checksums {
        meta = meta.param(&format!("stopwords_{lang}_sha256"), sum);
    }
    keywords::write_index(
        &run.index,
        &a.out.join(KEYWORDS_FILE),
        &a.out.join(POSTINGS_FILE),
        &meta.lines(),
    )?;
    write_json(&a.out.join("keywords.json"), &meta, &json!({ "diagnostics": run.diagnostics }))?;
    eprintln!(
        "keywords: {} documents, {} candidates, {} kept",
        run.index.documents, run.diagnostics.candidates, run.index.len()
    );
    Ok(())
}

#[derive(Args, Deserialize, Debug, Clone, Default)]
#[serde(default, deny_unknown_fields)]
pub struct SemanticParams {
    /// Start from thresholds scaled to the corpus size instead of the fixed defaults.
    #[arg(long)]
    pub scaled: bool,
    /// Maximal vertex degree [default: 1200].
    #[arg(long)]
    pub kmax: Option<usize>,
    /// Minimal edge weight [default: 100].
    #[arg(long)]
    pub theta: Option<u64>,
    /// Minimal document frequency [default: 50].
    #[arg(long)]
    pub fmin: Option<usize>,
    /// Maximal document frequency [default: 10000].
    #[arg(long)]
    pub fmax: Option<usize>,
    /// Communities smaller than this are flagged as noise [default: 4].
    #[arg(long)]
    pub noise_floor: Option<usize>,
}

impl SemanticParams {
    pub fn resolve(&self, documents: usize) -> FilterParams {
        let base = if self.scaled {
            FilterParams::scaled(documents)
        } else {
            FilterParams::default()
        };
        FilterParams {
            k_max: self.kmax.unwrap_or(base.k_max),
            theta_w: self.theta.unwrap_or(base.theta_w),
            f_min: self.fmin.unwrap_or(base.f_min),
            f_max: self.fmax.unwrap_or(base.f_max),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SemanticGraphArgs {
    /// Directory holding keywords.csv and postings.tsv.
    #[arg(long)]
    pub keywords: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "gexf", value_parser = parse_format)]
    pub format: ExportFormat,
    #[command(flatten)]
    pub params: SemanticParams,
}

pub fn semantic_graph(a: &SemanticGraphArgs, seed: u64) -> Result<String> {
    let index = load_index(&a.keywords)?;
    ensure_dir(&a.out)?;
    let params = a.params.resolve(index.documents);
    let noise_floor = a.params.noise_floor.unwrap_or(scholnet::semantic::DEFAULT_NOISE_FLOOR);
    let meta = Meta::new("semantic-graph", seed)
        .param("kmax", params.k_max)
        .param("theta", params.theta_w)
        .param("fmin", params.f_min)
        .param("fmax", params.f_max)
        .param("filter_order", FILTER_ORDER)
        .param("noise_floor", noise_floor);
    let matrix = build_cooccurrence(&index)?;
    let net = filter_network(&matrix, &index, &params)?;
    if net.empty {
        bail!(
            "no keyword survives the filter (kmax {}, theta {}, fmin {}, fmax {})",
            params.k_max,
            params.theta_w,
            params.f_min,
            params.f_max
        );
    }
    let sc = semantic_communities(&net.graph, &index, seed, noise_floor)?;
    let partition = &sc.result.partition;
    graph::export(
        &net.graph,
        Some(partition),
        a.format,
        &a.out.join(format!("semantic_graph.{}", a.format.extension())),
        &meta.lines(),
    )?;
    write_text(&a.out.join("semantic_communities.csv"), &render_partition(partition, &meta))?;
    let mut top = meta.comment_block();
    top.push_str("community,size,noise,rank,stems,surface\n");
    for c in &sc.communities {
        for (rank, (k, s)) in c.top_keywords.iter().zip(&c.top_surfaces).enumerate() {
            top.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.id,
                c.size,
                u8::from(c.noise),
                rank + 1,
                csv_field(k),
                csv_field(s)
            ));
        }
    }
    write_text(&a.out.join("top_keywords.csv"), &top)?;
    write_json(
        &a.out.join("semantic_summary.json"),
        &meta,
        &json!({
            "params": params,
            "documents": index.documents,
            "keywords": index.len(),
            "vertices": net.graph.node_count(),
            "edges": net.graph.edge_count(),
            "removed_by_frequency": net.removed_by_frequency,
            "removed_by_degree": net.removed_by_degree,
            "removed_isolated": net.removed_isolated,
            "result": sc.result,
            "communities": sc.communities,
        }),
    )?;
    Ok(format!(
        "Q={} C={} V={} E={}",
        sc.result.modularity,
        sc.result.num_communities(),
        net.graph.node_count(),
        net.graph.edge_count()
    ))
}

fn parse_band(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err("LO exceeds HI".into());
    }
    Ok((lo, hi))
}

#[derive(Args, Debug, Clone)]
pub struct SweepArgs {
    /// Directory holding keywords.csv and postings.tsv.
    #[arg(long)]
    pub keywords: PathBuf,
    /// JSON object with four arrays: kmax, theta, fmin, fmax.
    #[arg(long)]
    pub grid: PathBuf,
    /// Output CSV.
    #[arg(long, default_value = "sweep.csv")]
    pub out: PathBuf,
    /// Restrict the Pareto front to community counts in LO,HI.
    #[arg(long, value_parser = parse_band)]
    pub band: Option<(usize, usize)>,
}

pub fn read_grid(path: &Path) -> Result<SweepGrid> {
    require(path)?;
    serde_json::from_str(&read_text(path)?).with_context(|| format!("parsing grid {}", path.display()))
}

pub fn sweep(keywords_dir: &Path, grid: &SweepGrid, band: Option<(usize, usize)>, out: &Path, seed: u64) -> Result<usize> {
    let index = load_index(keywords_dir)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        ensure_dir(parent)?;
    }
    let mut grid = grid.clone();
    grid.seed = seed;
    let matrix = build_cooccurrence(&index)?;
    let outcome = run_sweep(&matrix, &index, &grid)?;
    let front = match band {
        Some(b) => pareto_front_within(&outcome.points, b),
        None => pareto_front(&outcome.points),
    }
    .unwrap_or_default();
    let list = |v: &[String]| v.join(" ");
    let mut meta = Meta::new("sweep", seed)
        .param("kmax", list(&grid.k_max.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
        .param("theta", list(&grid.theta_w.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
        .param("fmin", list(&grid.f_min.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
        .param("fmax", list(&grid.f_max.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
        .param("skipped", outcome.skipped.len())
        .param("louvain_seed", "seed + combination index")
        .param("filter_order", FILTER_ORDER);
    if let Some((lo, hi)) = band {
        meta = meta.param("band", format!("{lo},{hi}"));
    }
    write_text(out, &render_sweep_csv(&outcome.points, &front, &meta.lines()))?;
    Ok(outcome.points.len())
}

#[derive(Args, Debug, Clone)]
pub struct MeasuresArgs {
    #[arg(long)]
    pub store: PathBuf,
    /// `node_id,community` CSV of the citation communities.
    #[arg(long)]
    pub citation_partition: PathBuf,
    /// Directory holding keywords.csv and postings.tsv.
    #[arg(long)]
    pub keywords: PathBuf,
    /// `node_id,community` CSV of the semantic communities.
    #[arg(long)]
    pub semantic_partition: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

fn render_originality(table: &OriginalityTable, meta: &Meta) -> String {
    let mut out = meta.comment_block();
    out.push_str("node_id,originality,citation_class\n");
    for e in &table.entries {
        let class = e.class.map(|c| c.to_string()).unwrap_or_default();
        out.push_str(&format!("{},{},{class}\n", csv_field(&e.id), e.value));
    }
    out
}

fn class_counts(p: &ClassProbabilities) -> serde_json::Value {
    json!({
        "classes": p.num_classes,
        "defined": p.vectors.len() - p.undefined_count(),
        "undefined": p.undefined_count(),
    })
}

pub fn measures(a: &MeasuresArgs, seed: u64) -> Result<()> {
    let corpus = load_store(&a.store)?;
    require(&a.citation_partition)?;
    require(&a.semantic_partition)?;
    let citation_part = read_partition(&a.citation_partition)?;
    let semantic_part = read_partition(&a.semantic_partition)?;
    let index = load_index(&a.keywords)?;
    ensure_dir(&a.out)?;
    let meta = Meta::new("measures", seed)
        .param("originality", "1 - sum p^2")
        .param("density", "gaussian kernel, silverman bandwidth clipped to [0.01, 0.2], 256 points on [0, 1]")
        .param("correlation", "pearson, unbiased estimates");

    let sem = semantic_probabilities(&corpus, &index, &semantic_part);
    let cit = citation_probabilities(&corpus, &citation_part);
    let sem_table = originality(&sem).with_classes(&citation_part);
    let cit_table = originality(&cit).with_classes(&citation_part);
    write_text(&a.out.join("originality_semantic.csv"), &render_originality(&sem_table, &meta))?;
    write_text(&a.out.join("originality_citation.csv"), &render_originality(&cit_table, &meta))?;

    let mut dens = meta.comment_block();
    dens.push_str("classification,citation_class,x,density\n");
    let grid = density_grid();
    let mut class_means = BTreeMap::new();
    for (name, table) in [("semantic", &sem_table), ("citation", &cit_table)] {
        let dists = match originality_distributions(table) {
            Ok(d) => d,
            Err(_) => Vec::new(),
        };
        for d in &dists {
            if let Some(values) = &d.density {
                for (x, y) in grid.iter().zip(values) {
                    dens.push_str(&format!("{name},{},{x},{y}\n", d.class));
                }
            }
        }
        class_means.insert(name, dists);
    }
    write_text(&a.out.join("densities.csv"), &dens)?;

    let comp = composition(&sem, &citation_part);
    let mut text = meta.comment_block();
    text.push_str("citation_class,members");
    for k in 0..sem.num_classes {
        text.push_str(&format!(",semantic_{k}"));
    }
    text.push('\n');
    for (c, row) in &comp.rows {
        text.push_str(&format!("{c},{}", comp.members[c]));
        for v in row {
            text.push_str(&format!(",{v}"));
        }
        text.push('\n');
    }
    write_text(&a.out.join("composition.csv"), &text)?;

    let one_hot = one_hot_citation(&citation_part);
    let corr = correlation_matrix(&sem, &one_hot)?;
    let mut text = meta.comment_block();
    text.push_str("semantic_class");
    for k in 0..one_hot.num_classes {
        text.push_str(&format!(",citation_{k}"));
    }
    text.push('\n');
    for (k, row) in corr.entries.iter().enumerate() {
        text.push_str(&k.to_string());
        for v in row {
            text.push(',');
            text.push_str(&opt_num(*v));
        }
        text.push('\n');
    }
    write_text(&a.out.join("correlation.csv"), &text)?;

    let summaries: BTreeMap<&str, serde_json::Value> = class_means
        .iter()
        .map(|(name, dists)| {
            let rows: Vec<_> = dists
                .iter()
                .map(|d| json!({ "class": d.class, "count": d.count, "mean": d.mean, "bandwidth": d.bandwidth }))
                .collect();
            (*name, json!(rows))
        })
        .collect();
    write_json(
        &a.out.join("summary.json"),
        &meta,
        &json!({
            "semantic": class_counts(&sem),
            "citation": class_counts(&cit),
            "originality_by_citation_class": summaries,
            "composition_omitted": comp.omitted,
            "correlation": { "common_references": corr.common_references, "summary": corr.summary },
        }),
    )?;
    Ok(())
}
