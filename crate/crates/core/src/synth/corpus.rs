//! Planted-topic corpus: three disjoint vocabularies, topic-biased citations.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{CitationLink, Reference};

/// Noun phrases per planted topic. No word is shared between topics.
pub const TOPIC_VOCABULARIES: [(&str, &[&str]); 3] = [
    (
        "urban systems",
        &[
            "urban growth", "city size", "transport network", "spatial interaction",
            "urban hierarchy", "metropolitan area", "land use", "population density",
            "central place", "street pattern", "suburban sprawl", "road infrastructure",
            "urban morphology", "city system", "residential mobility", "commuter rail",
            "public transit", "urban form", "settlement pattern", "zoning regulation",
            "neighborhood segregation", "downtown district", "traffic congestion",
            "gravity model", "housing stock",
        ],
    ),
    (
        "ecology",
        &[
            "species richness", "habitat fragmentation", "forest cover", "biodiversity loss",
            "ecosystem service", "predator prey", "plant community", "soil erosion",
            "climate change", "river basin", "wetland restoration", "bird migration",
            "coral reef", "invasive species", "carbon storage", "vegetation dynamics",
            "water quality", "nature reserve", "fruit dispersal", "pollinator decline",
            "wildlife corridor", "marine sanctuary", "grassland ecology", "drought stress",
            "nitrogen cycle",
        ],
    ),
    (
        "economics",
        &[
            "labor market", "foreign investment", "trade agreement", "economic development",
            "firm productivity", "wage inequality", "monetary policy", "financial crisis",
            "regional income", "export performance", "tax revenue", "industrial cluster",
            "innovation diffusion", "supply chain", "consumer demand", "bank credit",
            "price index", "capital accumulation", "unemployment rate", "human capital",
            "small business", "fiscal transfer", "currency exchange",
            "entrepreneurial activity", "interest rate",
        ],
    ),
];

// Every word outside the placeholders is a stop word or a non-candidate verb form.
const TEMPLATES: &[&str] = &[
    "We investigate the {a} and the {b}.",
    "We describe how the {a} is related to the {b}.",
    "The {a} was measured for each {b}.",
    "We explore the {a} in the {b}.",
    "This is compared with the {a} across the {b}.",
    "We discuss the {a} and {b}.",
    "We found that the {a} is related to {b}.",
    "The {a} was studied with the {b}.",
    "We suggest that the {a} and the {b} were considered together.",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiniCorpusConfig {
    pub docs_per_topic: usize,
    /// Cited-only references without abstracts.
    pub externals: usize,
    pub seeds: usize,
    pub citations_per_doc: usize,
    /// Probability that a citation stays within the citing document's topic.
    pub p_within: f64,
    /// Probability that a noun phrase is drawn from another topic.
    pub vocabulary_noise: f64,
    pub sentences: (usize, usize),
    pub seed: u64,
}

impl Default for MiniCorpusConfig {
    fn default() -> Self {
        Self {
            docs_per_topic: 100,
            externals: 40,
            seeds: 60,
            citations_per_doc: 6,
            p_within: 0.85,
            vocabulary_noise: 0.02,
            sentences: (5, 8),
            seed: 2018,
        }
    }
}

/// Ground truth written next to the generated corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiniManifest {
    pub config: MiniCorpusConfig,
    pub references: usize,
    pub with_abstract: usize,
    pub links: usize,
    pub seeds: usize,
    pub topics: Vec<String>,
    pub topic_of: BTreeMap<String, usize>,
    pub vocabularies: Vec<Vec<String>>,
}

#[derive(Debug, Clone)]
pub struct MiniCorpus {
    pub references: Vec<Reference>,
    pub links: Vec<CitationLink>,
    pub manifest: MiniManifest,
}

fn abstract_for(topic: usize, sentences: usize, noise: f64, rng: &mut ChaCha8Rng) -> String {
    let phrase = |rng: &mut ChaCha8Rng| {
        let t = if rng.random_bool(noise) {
            (topic + rng.random_range(1..TOPIC_VOCABULARIES.len())) % TOPIC_VOCABULARIES.len()
        } else {
            topic
        };
        *TOPIC_VOCABULARIES[t].1.choose(rng).expect("nonempty vocabulary")
    };
    let mut out = Vec::with_capacity(sentences);
    for _ in 0..sentences {
        let template = TEMPLATES.choose(rng).expect("nonempty templates");
        let a = phrase(rng);
        let mut b = phrase(rng);
        while b == a {
            b = phrase(rng);
        }
        out.push(template.replace("{a}", a).replace("{b}", b));
    }
    out.join(" ")
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Generate the bundled mini-corpus.
pub fn mini_corpus(config: &MiniCorpusConfig) -> MiniCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let topics = TOPIC_VOCABULARIES.len();
    let docs = config.docs_per_topic * topics;
    let mut references = Vec::with_capacity(docs + config.externals);
    let mut topic_of = BTreeMap::new();
    let mut by_topic: Vec<Vec<String>> = vec![Vec::new(); topics];

    for i in 0..docs {
        let topic = i % topics;
        let id = format!("d{i:04}");
        let (lo, hi) = config.sentences;
        let sentences = rng.random_range(lo..=hi);
        let text = abstract_for(topic, sentences, config.vocabulary_noise, &mut rng);
        let vocab = TOPIC_VOCABULARIES[topic].1;
        let a = vocab.choose(&mut rng).expect("nonempty");
        let b = vocab.choose(&mut rng).expect("nonempty");
        let mut r = Reference::new(&id, format!("{} and {}, study {i}", capitalize(a), b)).with_abstract(text);
        r.year = Some(1995 + (i % 21) as i32);
        r.authors = vec![format!("Author {}", rng.random_range(0..80))];
        r.language = Some("en".into());
        r.source = if i < config.seeds { "seed".into() } else { "forward".into() };
        topic_of.insert(id.clone(), topic);
        by_topic[topic].push(id);
        references.push(r);
    }
    for j in 0..config.externals {
        let topic = j % topics;
        let id = format!("x{j:04}");
        let vocab = TOPIC_VOCABULARIES[topic].1;
        let a = vocab.choose(&mut rng).expect("nonempty");
        let mut r = Reference::new(&id, format!("Handbook of {a}, volume {j}"));
        r.year = Some(1970 + (j % 25) as i32);
        r.source = "backward".into();
        topic_of.insert(id.clone(), topic);
        by_topic[topic].push(id);
        references.push(r);
    }

    let mut links = Vec::new();
    for i in 0..docs {
        let citing = &references[i].id;
        let topic = topic_of[citing];
        let mut cited = std::collections::BTreeSet::new();
        let mut guard = 0;
        while cited.len() < config.citations_per_doc && guard < 100 * config.citations_per_doc {
            guard += 1;
            let t = if rng.random_bool(config.p_within) {
                topic
            } else {
                (topic + rng.random_range(1..topics)) % topics
            };
            let target = by_topic[t].choose(&mut rng).expect("nonempty topic");
            if target != citing {
                cited.insert(target.clone());
            }
        }
        links.extend(cited.into_iter().map(|t| CitationLink::new(citing.clone(), t)));
    }

    let manifest = MiniManifest {
        config: config.clone(),
        references: references.len(),
        with_abstract: docs,
        links: links.len(),
        seeds: config.seeds.min(docs),
        topics: TOPIC_VOCABULARIES.iter().map(|(n, _)| n.to_string()).collect(),
        topic_of,
        vocabularies: TOPIC_VOCABULARIES
            .iter()
            .map(|(_, v)| v.iter().map(|s| s.to_string()).collect())
            .collect(),
    };
    MiniCorpus {
        references,
        links,
        manifest,
    }
}

impl MiniCorpus {
    /// Line-delimited JSON, one reference per line.
    pub fn render_references(&self) -> String {
        self.references
            .iter()
            .map(|r| serde_json::to_string(r).expect("reference serializes") + "\n")
            .collect()
    }

    /// `citing_id,cited_id` CSV.
    pub fn render_links(&self) -> String {
        let mut out = String::from("citing_id,cited_id\n");
        for l in &self.links {
            out.push_str(&format!("{},{}\n", l.citing_id, l.cited_id));
        }
        out
    }

    pub fn render_manifest(&self) -> String {
        serde_json::to_string_pretty(&self.manifest).expect("manifest serializes") + "\n"
    }
}

/// `n` planted-topic abstracts (ids `s000000`, ...) for throughput tests.
pub fn synthetic_abstracts(n: usize, seed: u64) -> Vec<Reference> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let sentences = rng.random_range(6..=12);
            let text = abstract_for(i % TOPIC_VOCABULARIES.len(), sentences, 0.05, &mut rng);
            Reference::new(format!("s{i:06}"), format!("Synthetic abstract {i}")).with_abstract(text)
        })
        .collect()
}
