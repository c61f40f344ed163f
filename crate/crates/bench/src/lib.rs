//! Fixtures for the benchmarks.

use fov_core::harness::builtin_corpus;
use fov_core::PermGroup;

/// A built-in corpus group by name, e.g. `"A5"` or `"S3xC2"`.
pub fn group(name: &str) -> PermGroup {
    builtin_corpus(720)
        .into_iter()
        .find(|s| s.name == name)
        .unwrap_or_else(|| panic!("no built-in group named {name}"))
        .build()
        .expect("built-in groups build")
}
