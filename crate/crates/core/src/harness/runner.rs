use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::spec::{GroupSpec, SpecSource};
use super::store::{VerdictRecord, VerdictStore};
use super::suites::{evaluate, SuiteId, Verdict};
use crate::analysis::GroupAnalysis;
use crate::error::HarnessError;

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn analyse(spec: &GroupSpec) -> Result<GroupAnalysis, HarnessError> {
    let analysis = GroupAnalysis::new(spec.build()?)?;
    spec.check_expected(analysis.profile())?;
    Ok(analysis)
}

fn record(spec: &GroupSpec, hash: &str, analysis: &GroupAnalysis, suite: SuiteId) -> VerdictRecord {
    let outcome = evaluate(suite, analysis);
    VerdictRecord {
        group: spec.name.clone(),
        order: analysis.profile().order,
        suite: suite.as_str().to_string(),
        verdict: outcome.verdict,
        witness: outcome.witness,
        spec_hash: hash.to_string(),
        version: VERSION.to_string(),
        profile: analysis.profile().summary_line(&spec.name),
    }
}

/// Run one suite, given by id, on one group.
pub fn run_suite(suite: &str, spec: &GroupSpec) -> Result<VerdictRecord, HarnessError> {
    let id: SuiteId = suite.parse()?;
    let analysis = analyse(spec)?;
    Ok(record(spec, &spec.content_hash(), &analysis, id))
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupResult {
    pub name: String,
    pub order: u64,
    pub profile: String,
    pub records: Vec<VerdictRecord>,
    #[serde(skip)]
    pub from_cache: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub suites: Vec<String>,
    pub groups: Vec<GroupResult>,
}

impl CorpusReport {
    pub fn failures(&self) -> impl Iterator<Item = &VerdictRecord> {
        self.groups
            .iter()
            .flat_map(|g| &g.records)
            .filter(|r| r.verdict == Verdict::Fail)
    }

    pub fn has_failures(&self) -> bool {
        self.failures().next().is_some()
    }

    /// `(pass, fail, not applicable)` per suite, in suite order.
    pub fn tallies(&self) -> Vec<(String, usize, usize, usize)> {
        let mut counts: BTreeMap<&str, (usize, usize, usize)> = BTreeMap::new();
        for r in self.groups.iter().flat_map(|g| &g.records) {
            let c = counts.entry(r.suite.as_str()).or_default();
            match r.verdict {
                Verdict::Pass => c.0 += 1,
                Verdict::Fail => c.1 += 1,
                Verdict::NotApplicable => c.2 += 1,
            }
        }
        self.suites
            .iter()
            .map(|s| {
                let (p, f, n) = counts.get(s.as_str()).copied().unwrap_or_default();
                (s.clone(), p, f, n)
            })
            .collect()
    }

    pub fn cached_groups(&self) -> usize {
        self.groups.iter().filter(|g| g.from_cache).count()
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:<12} {:>6} {:>6} {:>6}", "suite", "PASS", "FAIL", "NA").unwrap();
        for (suite, p, f, n) in self.tallies() {
            writeln!(out, "{suite:<12} {p:>6} {f:>6} {n:>6}").unwrap();
        }
        for r in self.failures() {
            writeln!(out, "FAIL {} {}: {}", r.suite, r.group, r.witness).unwrap();
        }
        writeln!(out, "groups: {}", self.groups.len()).unwrap();
        for g in &self.groups {
            writeln!(out, "{}", g.profile).unwrap();
        }
        out
    }

    /// One JSON record per line.
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for r in self.groups.iter().flat_map(|g| &g.records) {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }
}

/// Run `suites` over `specs` in parallel, serving cached verdicts where the
/// store has them and appending new ones.
pub fn run_corpus(
    specs: &[GroupSpec],
    suites: &[SuiteId],
    store: &mut VerdictStore,
) -> Result<CorpusReport, HarnessError> {
    let shared: &VerdictStore = store;
    let results: Vec<GroupResult> = specs
        .par_iter()
        .map(|spec| -> Result<GroupResult, HarnessError> {
            let hash = spec.content_hash();
            let cached = suites
                .iter()
                .map(|&s| shared.lookup(spec, s).map(|r| r.cloned()))
                .collect::<Result<Option<Vec<_>>, _>>()?;
            if let Some(records) = cached {
                if let Some(first) = records.first() {
                    return Ok(GroupResult {
                        name: spec.name.clone(),
                        order: first.order,
                        profile: first.profile.clone(),
                        records,
                        from_cache: true,
                    });
                }
            }
            let analysis = analyse(spec)?;
            let records = suites
                .iter()
                .map(|&s| record(spec, &hash, &analysis, s))
                .collect();
            Ok(GroupResult {
                name: spec.name.clone(),
                order: analysis.profile().order,
                profile: analysis.profile().summary_line(&spec.name),
                records,
                from_cache: false,
            })
        })
        .collect::<Result<_, _>>()?;

    for g in results.iter().filter(|g| !g.from_cache) {
        store.append(&g.records)?;
    }
    Ok(CorpusReport {
        suites: suites.iter().map(|s| s.as_str().to_string()).collect(),
        groups: results,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanEntry {
    pub name: String,
    pub order: u64,
    pub h: usize,
    pub f: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub bound: usize,
    pub scanned: usize,
    pub builtin: usize,
    pub ingested: usize,
    pub max_order: u64,
    pub counterexamples: Vec<ScanEntry>,
    /// Groups with `f ≠ h` outside the bound, listed for context.
    pub unequal_outside_bound: Vec<ScanEntry>,
}

impl ConjectureReport {
    pub fn coverage(&self) -> String {
        format!(
            "coverage: {} groups scanned ({} built-in family members up to order {}, {} ingested); \
             the built-in families are a sample and do not enumerate every group of a given order",
            self.scanned, self.builtin, self.max_order, self.ingested
        )
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "conjecture scan: min(f, h) <= {} implies f = h", self.bound).unwrap();
        writeln!(out, "{}", self.coverage()).unwrap();
        writeln!(out, "counterexamples: {}", self.counterexamples.len()).unwrap();
        for e in &self.counterexamples {
            writeln!(out, "  {} {} h={} f={}", e.name, e.order, e.h, e.f).unwrap();
        }
        writeln!(
            out,
            "groups with f != h above the bound: {}",
            self.unequal_outside_bound.len()
        )
        .unwrap();
        for e in &self.unequal_outside_bound {
            writeln!(out, "  {} {} h={} f={}", e.name, e.order, e.h, e.f).unwrap();
        }
        out
    }
}

/// Every group with `min(f, h) ≤ bound` and `f ≠ h`.
pub fn scan_conjecture(specs: &[GroupSpec], bound: usize) -> Result<ConjectureReport, HarnessError> {
    let entries: Vec<ScanEntry> = specs
        .par_iter()
        .map(|spec| {
            let a = analyse(spec)?;
            Ok(ScanEntry {
                name: spec.name.clone(),
                order: a.profile().order,
                h: a.profile().h,
                f: a.profile().f,
            })
        })
        .collect::<Result<_, HarnessError>>()?;
    let (counterexamples, unequal_outside_bound) = entries
        .iter()
        .filter(|e| e.f != e.h)
        .cloned()
        .partition(|e| e.f.min(e.h) <= bound);
    Ok(ConjectureReport {
        bound,
        scanned: entries.len(),
        builtin: specs.iter().filter(|s| s.source == SpecSource::Builtin).count(),
        ingested: specs.iter().filter(|s| s.source == SpecSource::File).count(),
        max_order: entries.iter().map(|e| e.order).max().unwrap_or(0),
        counterexamples,
        unequal_outside_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::builtin_corpus;

    #[test]
    fn cache_round_trip_is_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("verdicts.jsonl");
        let specs = builtin_corpus(8);
        let suites = SuiteId::ALL.to_vec();
        let mut store = VerdictStore::open(&path).unwrap();
        let first = run_corpus(&specs, &suites, &mut store).unwrap();
        assert_eq!(first.cached_groups(), 0);
        let mut reopened = VerdictStore::open(&path).unwrap();
        let second = run_corpus(&specs, &suites, &mut reopened).unwrap();
        assert_eq!(second.cached_groups(), specs.len());
        assert_eq!(first.render_text(), second.render_text());
        assert_eq!(first.render_machine(), second.render_machine());
    }

    #[test]
    fn hash_collision_is_reported() {
        let specs = builtin_corpus(4);
        let mut store = VerdictStore::in_memory();
        let report = run_corpus(&specs[..1], &[SuiteId::ThmA], &mut store).unwrap();
        let mut forged = report.groups[0].records[0].clone();
        forged.group = "impostor".into();
        store.append(&[forged]).unwrap();
        assert!(matches!(
            store.lookup(&specs[0], SuiteId::ThmA),
            Err(HarnessError::HashMismatch { .. })
        ));
    }

    #[test]
    fn scan_bound_zero_is_empty() {
        let report = scan_conjecture(&builtin_corpus(12), 0).unwrap();
        assert!(report.counterexamples.is_empty());
        assert!(report.coverage().contains("groups scanned"));
    }

    #[test]
    fn unknown_suite() {
        let spec = &builtin_corpus(1)[0];
        assert!(matches!(
            run_suite("S-XYZ", spec),
            Err(HarnessError::UnknownSuite(_))
        ));
        assert_eq!(run_suite("S-H1", spec).unwrap().verdict, Verdict::Pass);
    }
}
