//! Regenerate the bundled mini-corpus: `cargo run -p scholnet-core --example gen_mini_corpus -- data/mini-corpus`

use std::path::PathBuf;

use scholnet::synth::{mini_corpus, MiniCorpusConfig};

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data/mini-corpus".into()));
    std::fs::create_dir_all(&dir)?;
    let mini = mini_corpus(&MiniCorpusConfig::default());
    std::fs::write(dir.join("refs.jsonl"), mini.render_references())?;
    std::fs::write(dir.join("links.csv"), mini.render_links())?;
    std::fs::write(dir.join("manifest.json"), mini.render_manifest())?;
    println!("{} references, {} links", mini.manifest.references, mini.manifest.links);
    Ok(())
}
