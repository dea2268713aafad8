//! On-disk specification corpus: `listings/` holds the listing
//! reconstructions and hand-written toys, `generated/` the family members
//! at several sizes.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::families::{family_text, Family};
use crate::speclang::{parse_spec, SpecError, Specification};

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    /// File stem, or a synthetic name for in-memory entries.
    pub name: String,
    pub path: Option<PathBuf>,
    pub text: String,
    pub spec: Specification,
}

impl CorpusEntry {
    pub fn from_text(name: &str, text: &str) -> Result<CorpusEntry, SpecError> {
        Ok(CorpusEntry {
            name: name.to_string(),
            path: None,
            text: text.to_string(),
            spec: parse_spec(text)?,
        })
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{source}")]
    Parse { path: PathBuf, source: SpecError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlannedSpec {
    pub dir: &'static str,
    pub file: String,
    pub family: Family,
    pub n: u64,
}

impl PlannedSpec {
    pub fn text(&self) -> String {
        family_text(self.n, self.family)
    }
}

/// Every family member the corpus is expected to contain.
pub fn corpus_plan() -> Vec<PlannedSpec> {
    let listings = [
        ("listing01_efp_good", Family::EfpGood, 4),
        ("listing02_efp_bad", Family::EfpBad, 4),
        ("listing03_eun_good", Family::EunGood, 16),
        ("listing04_eun_bad", Family::EunBad, 16),
        ("listing05_fpr_good", Family::FprGood, 15),
        ("listing06_fpr_bad", Family::FprBad, 15),
        ("listing07_dd_good", Family::DdGood, 0),
        ("listing08_dd_bad", Family::DdBad, 0),
        ("listing09_deadlock", Family::Deadlock, 15),
        ("listing10_inc_good", Family::IncGood, 0),
        ("listing11_inc_bad", Family::IncBad, 0),
    ];
    let generated = [
        (Family::EfpGood, vec![2, 6]),
        (Family::EfpBad, vec![2, 6]),
        (Family::EunGood, vec![8, 100]),
        (Family::EunBad, vec![8, 100]),
        (Family::FprGood, vec![4, 31]),
        (Family::FprBad, vec![4, 31]),
        (Family::Deadlock, vec![7, 127]),
    ];
    let mut out: Vec<PlannedSpec> = listings
        .into_iter()
        .map(|(file, family, n)| PlannedSpec {
            dir: "listings",
            file: format!("{file}.spec"),
            family,
            n,
        })
        .collect();
    for (family, sizes) in generated {
        for n in sizes {
            out.push(PlannedSpec {
                dir: "generated",
                file: format!("{}_n{n}.spec", family.name().to_ascii_lowercase()),
                family,
                n,
            });
        }
    }
    out
}

/// Writes every planned file below `root`, returning the paths written.
pub fn write_plan(root: &Path) -> io::Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for p in corpus_plan() {
        let dir = root.join(p.dir);
        fs::create_dir_all(&dir)?;
        let path = dir.join(&p.file);
        fs::write(&path, p.text())?;
        written.push(path);
    }
    Ok(written)
}

/// The corpus shipped with the repository.
pub fn default_corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Loads every `.spec` file in `root` and its immediate subdirectories,
/// ordered by path.
pub fn load_corpus(root: &Path) -> Result<Vec<CorpusEntry>, CorpusError> {
    let io_err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CorpusError::Io { path, source }
    };
    let mut files = Vec::new();
    let mut dirs = vec![root.to_path_buf()];
    for entry in fs::read_dir(root).map_err(io_err(root))? {
        let p = entry.map_err(io_err(root))?.path();
        if p.is_dir() {
            dirs.push(p);
        }
    }
    for d in &dirs {
        for entry in fs::read_dir(d).map_err(io_err(d))? {
            let p = entry.map_err(io_err(d))?.path();
            if p.extension().is_some_and(|e| e == "spec") {
                files.push(p);
            }
        }
    }
    files.sort();
    files.iter().map(|p| load_file(p)).collect()
}

pub fn load_file(path: &Path) -> Result<CorpusEntry, CorpusError> {
    let text = fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let spec = parse_spec(&text).map_err(|source| CorpusError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(CorpusEntry {
        name: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        path: Some(path.to_path_buf()),
        text,
        spec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_names_are_unique() {
        let plan = corpus_plan();
        let mut names: Vec<&str> = plan.iter().map(|p| p.file.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), plan.len());
    }

    #[test]
    fn written_plan_loads_back() {
        let dir = std::env::temp_dir().join(format!("gr1synth-corpus-{}", std::process::id()));
        let written = write_plan(&dir).unwrap();
        let loaded = load_corpus(&dir).unwrap();
        assert_eq!(loaded.len(), written.len());
        fs::remove_dir_all(&dir).unwrap();
    }
}
