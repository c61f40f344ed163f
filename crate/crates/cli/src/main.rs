use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fov_core::fields::{character_field, class_field};
use fov_core::harness::{
    builtin_corpus, ingest_directory, ingest_group_file, run_corpus, scan_conjecture, GroupSpec, SuiteId,
    VerdictStore,
};
use fov_core::{GroupAnalysis, HarnessError};

#[derive(Parser, Debug)]
#[command(
    name = "fov",
    version,
    about = "Fields of values of classes and characters of finite groups"
)]
struct Cli {
    /// Parallel workers for corpus scans.
    #[arg(long, global = true, default_value_t = default_jobs(), value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,

    /// Verdict store (JSON lines).
    #[arg(long, global = true, env = "FOV_CACHE")]
    cache: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the character table of a group file.
    Table { file: PathBuf },
    /// Print the field of values of every class and character.
    Fields { file: PathBuf },
    /// Print h, f and the rationality profile.
    Invariants { file: PathBuf },
    /// Run theorem suites over the built-in corpus and any ingested files.
    Verify {
        /// A suite id, a comma-separated list, or `all`.
        #[arg(long)]
        suite: String,
        /// Directory of group files to add to the corpus.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u64).range(1..))]
        max_order: u64,
    },
    /// List groups with min(f, h) <= bound and f != h.
    ScanConjecture {
        #[arg(long, default_value_t = 5)]
        bound: usize,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 128, value_parser = clap::value_parser!(u64).range(1..))]
        max_order: u64,
    },
}

fn default_jobs() -> u64 {
    std::thread::available_parallelism().map_or(1, |n| n.get() as u64)
}

/// Success, or a failed check (exit 1). Errors map to exit 2.
enum Status {
    Ok,
    Failed,
}

fn analyse_file(path: &Path) -> Result<(GroupSpec, GroupAnalysis)> {
    let spec = ingest_group_file(path).with_context(|| format!("reading {}", path.display()))?;
    let group = spec.build().map_err(HarnessError::from)?;
    let analysis = GroupAnalysis::new(group).map_err(HarnessError::from)?;
    spec.check_expected(analysis.profile())?;
    Ok((spec, analysis))
}

fn corpus(max_order: u64, dir: Option<&Path>) -> Result<Vec<GroupSpec>> {
    let mut specs = builtin_corpus(max_order);
    if let Some(dir) = dir {
        specs.extend(ingest_directory(dir).with_context(|| format!("reading corpus {}", dir.display()))?);
    }
    Ok(specs)
}

fn run(cli: Cli) -> Result<Status> {
    let machine = cli.format == Format::Machine;
    match cli.command {
        Command::Table { file } => {
            let (_, a) = analyse_file(&file)?;
            if machine {
                let classes: Vec<_> = a
                    .classes()
                    .classes()
                    .iter()
                    .map(|c| {
                        json!({
                            "representative": a.group().element(c.representative).to_string(),
                            "size": c.size(),
                            "order": c.element_order,
                        })
                    })
                    .collect();
                println!("{}", json!({ "classes": classes, "table": a.table() }));
            } else {
                print!("{}", a.table().dump(a.group(), a.classes()));
            }
        }
        Command::Fields { file } => {
            let (spec, a) = analyse_file(&file)?;
            let class_fields: Vec<String> = (0..a.classes().len())
                .map(|k| class_field(a.classes(), k).to_string())
                .collect();
            let char_fields: Vec<String> = (0..a.table().len())
                .map(|i| character_field(a.table(), a.classes(), i).to_string())
                .collect();
            if machine {
                println!(
                    "{}",
                    json!({
                        "name": spec.name,
                        "classes": class_fields,
                        "characters": char_fields,
                        "q_of_g": a.profile().q_of_g.to_string(),
                    })
                );
            } else {
                for (k, f) in class_fields.iter().enumerate() {
                    let c = a.classes().class(k);
                    println!("K{k} order={} size={} {f}", c.element_order, c.size());
                }
                for (i, f) in char_fields.iter().enumerate() {
                    println!("X{i} degree={} {f}", a.table().degrees()[i]);
                }
                println!("Q(G) {}", a.profile().q_of_g);
            }
        }
        Command::Invariants { file } => {
            let (spec, a) = analyse_file(&file)?;
            if machine {
                println!("{}", json!({ "name": spec.name, "profile": a.profile() }));
            } else {
                println!("{}", a.profile().summary_line(&spec.name));
            }
        }
        Command::Verify {
            suite,
            corpus: dir,
            max_order,
        } => {
            let suites = SuiteId::parse_list(&suite)?;
            let specs = corpus(max_order, dir.as_deref())?;
            let mut store = match &cli.cache {
                Some(path) => VerdictStore::open(path)?,
                None => VerdictStore::in_memory(),
            };
            let report = run_corpus(&specs, &suites, &mut store)?;
            if machine {
                print!("{}", report.render_machine());
            } else {
                print!("{}", report.render_text());
            }
            if report.has_failures() {
                return Ok(Status::Failed);
            }
        }
        Command::ScanConjecture {
            bound,
            corpus: dir,
            max_order,
        } => {
            let specs = corpus(max_order, dir.as_deref())?;
            let report = scan_conjecture(&specs, bound)?;
            if machine {
                println!("{}", serde_json::to_string(&report)?);
            } else {
                print!("{}", report.render_text());
            }
            if !report.counterexamples.is_empty() {
                return Ok(Status::Failed);
            }
        }
    }
    Ok(Status::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs as usize)
        .build_global()
    {
        eprintln!("fov: could not start worker pool: {e}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("fov: {e:#}");
            // A computed invariant disagreeing with a file's expected block is a failed check.
            if matches!(
                e.downcast_ref::<HarnessError>(),
                Some(HarnessError::ExpectedMismatch { .. })
            ) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
