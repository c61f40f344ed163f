//! Group corpus, theorem suites, verdict persistence and reports.

mod corpus;
mod runner;
mod spec;
mod store;
mod suites;

pub use corpus::builtin_corpus;
pub use runner::{
    run_corpus, run_suite, scan_conjecture, ConjectureReport, CorpusReport, GroupResult, ScanEntry,
};
pub use spec::{ingest_directory, ingest_group_file, parse_group_spec, Expected, GroupSpec, SpecSource};
pub use store::{VerdictRecord, VerdictStore};
pub use suites::{evaluate, Outcome, SuiteId, Verdict};
