mod common;

use std::fs;

use gr1synth::harness::{corpus_plan, default_corpus_dir, load_corpus, write_plan};

#[test]
fn shipped_corpus_matches_plan() {
    let root = default_corpus_dir();
    for p in corpus_plan() {
        let path = root.join(p.dir).join(&p.file);
        let text = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(text, p.text(), "{} is stale; regenerate with `gr1synth gen --corpus corpus`", p.file);
    }
}

#[test]
fn corpus_has_toys_beside_the_plan() {
    let entries = common::corpus();
    let planned = corpus_plan().len();
    assert!(entries.len() > planned);
    assert!(entries.iter().any(|e| e.name.starts_with("toy_")));
}

#[test]
fn regenerated_corpus_loads() {
    let dir = std::env::temp_dir().join(format!("gr1synth-corpus-{}", std::process::id()));
    let written = write_plan(&dir).unwrap();
    let loaded = load_corpus(&dir).unwrap();
    assert_eq!(loaded.len(), written.len());
    fs::remove_dir_all(&dir).unwrap();
}
