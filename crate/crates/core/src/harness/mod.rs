//! Specification families, the on-disk corpus, the benchmark runner and
//! the cross-validation suite.

pub mod bench;
pub mod corpus;
pub mod families;
pub mod validate;

pub use bench::{run_bench, BenchConfig, BenchReport, BenchRow, EngineChoice, Quartiles};
pub use corpus::{corpus_plan, default_corpus_dir, load_corpus, load_file, write_plan, CorpusEntry, CorpusError};
pub use families::{family_text, generate_counter_family, Family};
pub use validate::{validate_all, SolverBackend, Symbolic, ValidateOptions, ValidationReport, Violation};
