//! End-to-end acceptance run over the built-in corpus and the shipped group
//! files. Prints one PASS/FAIL line per criterion and exits non-zero if any
//! criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fov_core::fields::{class_fields_from_table, rational_element_orders, witness_prime};
use fov_core::harness::{
    builtin_corpus, evaluate, ingest_directory, scan_conjecture, GroupSpec, SuiteId, Verdict,
};
use fov_core::zmod::{count_bounded_subfields, euler_phi, is_prime, units};
use fov_core::{
    brauer_check, character_table, construct_sigma_for_field, permutation_isomorphic, verify_orthogonality,
    CharacterTable, ClassData, FieldKey, GroupAnalysis,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rayon::prelude::*;

const MAX_ORDER: u64 = 128;
const BUDGET: Duration = Duration::from_secs(300);

struct Corpus {
    specs: Vec<GroupSpec>,
    analyses: Vec<GroupAnalysis>,
    /// `verdicts[i][suite]`
    verdicts: Vec<BTreeMap<SuiteId, Verdict>>,
}

impl Corpus {
    fn load() -> Corpus {
        let mut specs = builtin_corpus(MAX_ORDER);
        specs.extend(ingest_directory(&data_dir()).expect("group files parse"));
        let analyses: Vec<GroupAnalysis> = specs
            .par_iter()
            .map(|s| {
                let a = GroupAnalysis::new(s.build().expect("spec builds")).expect("analysis");
                s.check_expected(a.profile()).expect("expected block matches");
                a
            })
            .collect();
        let verdicts = analyses
            .par_iter()
            .map(|a| {
                SuiteId::ALL
                    .iter()
                    .map(|&s| (s, evaluate(s, a).verdict))
                    .collect()
            })
            .collect();
        Corpus {
            specs,
            analyses,
            verdicts,
        }
    }

    fn groups(&self) -> impl Iterator<Item = (&GroupSpec, &GroupAnalysis)> {
        self.specs.iter().zip(&self.analyses)
    }

    fn fails(&self, suite: SuiteId) -> Vec<String> {
        self.specs
            .iter()
            .zip(&self.verdicts)
            .filter(|(_, v)| v[&suite] == Verdict::Fail)
            .map(|(s, _)| format!("{} on {}", suite, s.name))
            .collect()
    }

    fn count(&self, suite: SuiteId, verdict: Verdict) -> usize {
        self.verdicts.iter().filter(|v| v[&suite] == verdict).count()
    }
}

fn data_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/groups")
}

/// Outcome of one criterion: problems found, plus a short note.
struct Check {
    problems: Vec<String>,
    note: String,
}

impl Check {
    fn new(problems: Vec<String>, note: impl Into<String>) -> Check {
        Check {
            problems,
            note: note.into(),
        }
    }
}

fn order_32_examples(c: &Corpus) -> Check {
    let mut problems = Vec::new();
    let mut seen = Vec::new();
    for (name, irr_q, cl_q) in [("SmallGroup(32,42)", 10, 8), ("SmallGroup(32,15)", 6, 4)] {
        let Some((_, a)) = c.groups().find(|(s, _)| s.name == name) else {
            problems.push(format!("{name} missing"));
            continue;
        };
        let p = a.profile();
        if (p.order, p.irr_q, p.cl_q) != (32, irr_q, cl_q) {
            problems.push(format!(
                "{name}: order {} irrQ {} clQ {}",
                p.order, p.irr_q, p.cl_q
            ));
        }
        if permutation_isomorphic(a.actions()).is_some() {
            problems.push(format!("{name}: actions reported permutation isomorphic"));
        }
        seen.push(format!("{name} irrQ={} clQ={}", p.irr_q, p.cl_q));
    }
    Check::new(problems, seen.join(", "))
}

fn theorem_b(c: &Corpus) -> Check {
    let mut problems = c.fails(SuiteId::ThmB);
    let mut applicable = 0;
    for (s, a) in c.groups() {
        let p = a.profile();
        if p.h <= 3 {
            applicable += 1;
            if p.f != p.h {
                problems.push(format!("{}: h={} f={}", s.name, p.h, p.f));
            }
        }
    }
    Check::new(
        problems,
        format!(
            "{applicable} groups with h <= 3, S-THMB PASS {}",
            c.count(SuiteId::ThmB, Verdict::Pass)
        ),
    )
}

fn brauer(c: &Corpus) -> Check {
    let mut problems = c.fails(SuiteId::Brauer);
    let mut residues = 0;
    for (s, a) in c.groups() {
        let report = brauer_check(a.actions());
        residues += report.per_residue.len();
        if !report.passed() {
            problems.push(format!("{}: {:?}", s.name, report.violations()));
        }
    }
    Check::new(problems, format!("{residues} (group, residue) pairs"))
}

fn bg_cross_check(c: &Corpus) -> Check {
    let mut problems = c.fails(SuiteId::Bg);
    let mut checked = 0;
    for (s, a) in c.groups() {
        let classes = a.classes();
        let g = a.group();
        let from_table = class_fields_from_table(a.table());
        for k in 0..classes.len() {
            let class = classes.class(k);
            let rep = g.element(class.representative);
            let stab = classes.rationality_stabilizer(k).len() as u64;
            let field = &a.class_fields()[k];
            let normalizer = g.cyclic_normalizer_order(rep).unwrap();
            let centralizer = g.centralizer_order(rep).unwrap();
            if euler_phi(class.element_order) / stab != field.degree()
                || normalizer / centralizer != stab
                || &from_table[k] != field
            {
                problems.push(format!("{} class {k}", s.name));
            }
            checked += 1;
        }
    }
    Check::new(problems, format!("{checked} classes"))
}

fn theorem_a(c: &Corpus) -> Check {
    let mut problems = c.fails(SuiteId::ThmA);
    for (s, a) in c.groups() {
        let p = a.profile();
        if p.n_inv > 3 * p.h * p.h {
            problems.push(format!("{}: n={} h={}", s.name, p.n_inv, p.h));
        }
    }
    let mut cases = 0;
    for p in (2..=1024u64).filter(|&p| is_prime(p)) {
        let mut a = 1;
        while p.pow(a) <= 1024 {
            for d in 1..=6 {
                let count = count_bounded_subfields(p, a, d).unwrap() as u64;
                let bound = if p == 2 { 3 * d } else { d };
                if count > bound {
                    problems.push(format!("{p}^{a}, d={d}: {count} subfields"));
                }
                cases += 1;
            }
            a += 1;
        }
    }
    Check::new(
        problems,
        format!("{} groups, {cases} (p^a, d) cases", c.specs.len()),
    )
}

fn section_propositions(c: &Corpus) -> Check {
    let mut problems = Vec::new();
    for suite in [SuiteId::RatOrd, SuiteId::ClField, SuiteId::Sigma] {
        problems.extend(c.fails(suite));
    }
    let (mut ratord, mut clfield, mut sigma) = (0, 0, 0);
    for (s, a) in c.groups() {
        let p = a.profile();
        if p.cl_q == 2 || p.cl_q == 3 {
            ratord += 1;
            let orders: Vec<u64> = rational_element_orders(a.classes(), a.class_fields())
                .into_iter()
                .collect();
            let allowed = match orders.as_slice() {
                [1, 2] | [1, 2, 4] => true,
                [1, 2, q] => is_prime(*q) && *q > 2,
                _ => false,
            };
            if !allowed {
                problems.push(format!("{}: rational orders {orders:?}", s.name));
            }
        }
        if p.order % 2 == 0 && p.h <= 3 {
            clfield += 1;
            let fields: BTreeSet<&FieldKey> = a.class_fields().iter().collect();
            for f in fields {
                if witness_prime(f).is_none() {
                    problems.push(format!("{}: no witness prime for {f}", s.name));
                    continue;
                }
                if f.is_rational() {
                    continue;
                }
                match construct_sigma_for_field(a, f) {
                    Ok(sc) if sc.identity_holds() => sigma += 1,
                    Ok(_) => problems.push(format!("{}: fixed sets differ for {f}", s.name)),
                    Err(e) => problems.push(format!("{}: {e}", s.name)),
                }
            }
        }
    }
    Check::new(
        problems,
        format!("{ratord} groups with |Cl_Q| in {{2,3}}, {clfield} even groups with h <= 3, {sigma} sigma constructions"),
    )
}

/// `{r : g^r ~ g}` by searching for a conjugating element.
fn brute_force_class_field(a: &GroupAnalysis, k: usize) -> FieldKey {
    let g = a.group();
    let rep = g.element(a.classes().class(k).representative);
    let o = rep.order() as u32;
    let stab: Vec<u32> = units(o)
        .into_iter()
        .filter(|&r| {
            let target = rep.pow(r as u64);
            g.elements().iter().any(|x| rep.conjugate_by(x) == target)
        })
        .collect();
    FieldKey::canonicalize(o, &stab).unwrap()
}

fn table_correctness(c: &Corpus) -> Check {
    let mut problems = c.fails(SuiteId::Orth);
    for (s, a) in c.groups() {
        let report = verify_orthogonality(a.table(), a.classes());
        if !report.passed() {
            problems.push(format!("{}: {:?}", s.name, report.violations));
        }
        let squares: u64 = a.table().degrees().iter().map(|d| d * d).sum();
        if squares != a.profile().order {
            problems.push(format!("{}: sum of squared degrees {squares}", s.name));
        }
    }
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let corpus = builtin_corpus(60);
    let names = [
        ("C1", "trivial"),
        ("C3", "C3"),
        ("C4", "C4"),
        ("C5", "C5"),
        ("S3", "S3"),
        ("D5", "D5"),
        ("Q8", "Q8"),
        ("S4", "S4"),
        ("A5", "A5"),
    ];
    for (name, file) in names {
        let spec = corpus.iter().find(|s| s.name == name).expect("built-in group");
        let g = spec.build().unwrap();
        let classes = ClassData::compute(&g);
        let table: CharacterTable = character_table(&g, &classes).unwrap();
        let expected = std::fs::read_to_string(golden.join(format!("{file}.txt"))).unwrap_or_default();
        if table.dump(&g, &classes) != expected {
            problems.push(format!("golden table {file} differs"));
        }
    }
    let mut small = 0;
    for (s, a) in c.groups().filter(|(_, a)| a.profile().order <= 24) {
        small += 1;
        let from_table = class_fields_from_table(a.table());
        for k in 0..a.classes().len() {
            if brute_force_class_field(a, k) != from_table[k] {
                problems.push(format!("{}: class {k} field", s.name));
            }
        }
    }
    Check::new(
        problems,
        format!(
            "{} tables, {} golden, {small} groups of order <= 24 brute-forced",
            c.specs.len(),
            names.len()
        ),
    )
}

/// `(h, f)` straight from the table: column and row stabilizers under
/// `ε ↦ ε^r`, grouped by equal stabilizer.
fn brute_force_h_f(table: &CharacterTable) -> (usize, usize) {
    let residues = units(table.modulus());
    fn fixes<'a>(mut xs: impl Iterator<Item = &'a fov_core::Cyclotomic>, r: u32) -> bool {
        xs.all(|x| x.galois_apply(r as i64).unwrap() == *x)
    }
    let mut columns: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for k in 0..table.len() {
        let stab: Vec<u32> = residues
            .iter()
            .copied()
            .filter(|&r| fixes(table.rows().iter().map(|row| &row[k]), r))
            .collect();
        *columns.entry(stab).or_default() += 1;
    }
    let mut rows: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for row in table.rows() {
        let stab: Vec<u32> = residues
            .iter()
            .copied()
            .filter(|&r| fixes(row.iter(), r))
            .collect();
        *rows.entry(stab).or_default() += 1;
    }
    let max = |m: BTreeMap<Vec<u32>, usize>| m.into_values().max().unwrap_or(0);
    (max(columns), max(rows))
}

fn regression_set(c: &Corpus) -> Check {
    let mut problems = Vec::new();
    let expected = [
        ("C1", 1),
        ("C3", 2),
        ("C4", 2),
        ("D5", 2),
        ("S3", 3),
        ("C5", 4),
        ("Q8", 5),
    ];
    for (name, value) in expected {
        let Some((_, a)) = c.groups().find(|(s, _)| s.name == name) else {
            problems.push(format!("{name} missing"));
            continue;
        };
        let p = a.profile();
        let oracle = brute_force_h_f(a.table());
        if (p.h, p.f) != (value, value) || oracle != (value, value) {
            problems.push(format!(
                "{name}: h/f {}/{} oracle {}/{}",
                p.h, p.f, oracle.0, oracle.1
            ));
        }
    }
    Check::new(problems, format!("{} groups", expected.len()))
}

fn conjecture_scan(c: &Corpus) -> Check {
    let report = scan_conjecture(&c.specs, 5).expect("scan runs");
    let problems = report
        .counterexamples
        .iter()
        .map(|e| format!("{} h={} f={}", e.name, e.h, e.f))
        .collect();
    Check::new(problems, report.coverage())
}

fn properties() -> Check {
    let mut problems = Vec::new();
    let runner = || {
        TestRunner::new(Config {
            failure_persistence: None,
            ..Config::with_cases(1000)
        })
    };
    let mut record = |what: &str, r: Result<(), String>| {
        if let Err(e) = r {
            problems.push(format!("{what}: {e}"));
        }
    };
    record(
        "galois laws",
        runner()
            .run(&common::pair_with_unit(), |(x, y, r, s)| {
                common::galois_is_a_ring_automorphism(&x, &y, r)?;
                common::galois_composition(&x, r, s)?;
                common::trace_and_norm_are_real(&x)
            })
            .map_err(|e| e.to_string()),
    );
    record(
        "canonicalization",
        runner()
            .run(&common::unit_subgroup(), |(n, h)| {
                common::canonicalization_is_idempotent(n, &h)
            })
            .map_err(|e| e.to_string()),
    );
    record(
        "containment",
        runner()
            .run(
                &(common::field(), common::field(), common::field()),
                |(a, b, c)| common::containment_is_a_partial_order(&a, &b, &c),
            )
            .map_err(|e| e.to_string()),
    );
    let primes = prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 31]);
    record(
        "bounded subfields",
        runner()
            .run(&(primes, 0u32..=10, 1u64..=6), |(p, a, d)| {
                common::prime_power_cyclotomics(p, a, d)
            })
            .map_err(|e| e.to_string()),
    );
    record(
        "field invariants",
        runner()
            .run(&common::small_group(), common::field_invariants)
            .map_err(|e| e.to_string()),
    );
    Check::new(problems, "5 property suites x 1000 cases")
}

fn main() -> ExitCode {
    let start = Instant::now();
    let corpus = Corpus::load();
    let loaded = start.elapsed();
    let mut results: Vec<(&str, Check)> = vec![
        ("1 order-32 examples", order_32_examples(&corpus)),
        ("2 h <= 3 implies f = h", theorem_b(&corpus)),
        ("3 Brauer fixed points", brauer(&corpus)),
        ("4 B_G cross-check", bg_cross_check(&corpus)),
        ("5 n <= 3h^2 and subfield counts", theorem_a(&corpus)),
        (
            "6 rational orders, class fields, sigma",
            section_propositions(&corpus),
        ),
        ("7 character tables", table_correctness(&corpus)),
        ("8 h/f regression set", regression_set(&corpus)),
        ("9 conjecture scan", conjecture_scan(&corpus)),
    ];
    let mut props = properties();
    let elapsed = start.elapsed();
    if elapsed > BUDGET {
        props
            .problems
            .push(format!("runtime {elapsed:?} exceeds {BUDGET:?}"));
    }
    props.note = format!(
        "{}; corpus analysed in {loaded:.1?}, total {elapsed:.1?}",
        props.note
    );
    results.push(("10 properties and runtime", props));

    let mut failed = 0;
    for (name, check) in &results {
        let verdict = if check.problems.is_empty() { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {name}: {}", check.note);
        for p in check.problems.iter().take(20) {
            println!("    {p}");
        }
        if !check.problems.is_empty() {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
