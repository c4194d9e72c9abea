//! solenoid-lab: analyze solenoid towers and finite structure-group models.
//!
//! Exit codes: 0 success, 1 usage or config error, 2 enumeration limit
//! exceeded, 3 internal invariant violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use solenoid_core::config::{self, Config};
use solenoid_core::coset::{CosetTable, SubgroupSpec};
use solenoid_core::error::Error;
use solenoid_core::report::{self, Format};
use solenoid_core::schreier;

#[derive(Parser)]
#[command(name = "solenoid-lab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Config file path.
    config: PathBuf,
    /// Output format: text, json or dot.
    #[arg(long, default_value = "text")]
    format: String,
    /// Override the enumeration row limit.
    #[arg(long)]
    limit: Option<usize>,
    /// Deterministic seed for sampled checks.
    #[arg(long)]
    seed: Option<u64>,
    /// Include wall-clock timings in the report (breaks byte-for-byte
    /// reproducibility).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a tower, validate it, and compute the requested certificates.
    Analyze {
        #[command(flatten)]
        common: CommonArgs,
        /// Override the tower depth.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Validate a finite model and run its component and bihomogeneity checks.
    Model {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Enumerate cosets of a subgroup of the configured group.
    Cosets {
        /// Config file providing the [group] section.
        config: PathBuf,
        /// Comma-separated subgroup generator words, e.g. "a a, b".
        #[arg(long)]
        subgroup: String,
        /// Print the full table, one row of integers per coset.
        #[arg(long)]
        table: bool,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Replay the component and bihomogeneity lemmas over the generated
    /// finite-model catalog.
    Sweep {
        /// Output format: text or json.
        #[arg(long, default_value = "text")]
        format: String,
        /// Monomorphism policy: image-anywhere, image-in-chain or both.
        #[arg(long, default_value = "both")]
        policy: String,
        /// Comma-separated seed group names (defaults to every group of
        /// order 4, 6, 8 and 12).
        #[arg(long)]
        seeds: Option<String>,
    },
    /// Rewrite and print a presentation of a finite-index subgroup.
    SubgroupPresentation {
        /// Config file providing the [group] section.
        config: PathBuf,
        /// Comma-separated subgroup generator words.
        #[arg(long)]
        subgroup: String,
        /// Skip Tietze simplification.
        #[arg(long)]
        raw: bool,
        #[arg(long)]
        limit: Option<usize>,
    },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::LimitExceeded { .. } => 2,
        Error::InvariantViolation(_) | Error::WellDefinednessViolation(_) => 3,
        _ => 1,
    }
}

fn load_config(path: &PathBuf) -> Result<(Config, String), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
        line: 0,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let config = config::parse_config(&text)?;
    Ok((config, text))
}

fn env_limit() -> Option<usize> {
    std::env::var("SOLENOID_LAB_LIMIT")
        .ok()
        .and_then(|v| v.parse().ok())
}

fn apply_overrides(config: &mut Config, limit: Option<usize>, seed: Option<u64>) {
    // Precedence: flag, then config value, then the environment default.
    if let Some(l) = limit {
        config.analysis.limit = Some(l);
    } else if config.analysis.limit.is_none() {
        config.analysis.limit = env_limit();
    }
    if let Some(s) = seed {
        config.analysis.seed = s;
    }
}

fn parse_subgroup(
    config: &Config,
    words: &str,
) -> Result<(solenoid_core::words::Presentation, SubgroupSpec), Error> {
    let presentation = config::resolve_presentation(config)?;
    let mut generators = Vec::new();
    for item in words.split(',') {
        let item = item.trim().trim_matches('"');
        generators.push(presentation.parse_word(item)?);
    }
    Ok((presentation, SubgroupSpec::new(generators)))
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze { common, depth } => {
            let (mut config, text) = load_config(&common.config)?;
            apply_overrides(&mut config, common.limit, common.seed);
            if let Some(d) = depth {
                config.analysis.depth = Some(d);
            }
            let format: Format = common.format.parse()?;
            let report = report::run_tower(&config, &text, common.timing)?;
            print!("{}", report::emit_tower(&report, format));
            if report.checks.status.starts_with("limit-exceeded") {
                return Err(Error::LimitExceeded {
                    limit: config
                        .analysis
                        .limit
                        .unwrap_or(solenoid_core::tower::DEFAULT_ENUM_LIMIT),
                });
            }
            Ok(())
        }
        Command::Model { common } => {
            let (mut config, text) = load_config(&common.config)?;
            apply_overrides(&mut config, common.limit, common.seed);
            let format: Format = common.format.parse()?;
            let report = report::run_model(&config, &text, common.timing)?;
            print!("{}", report::emit_model(&report, format));
            Ok(())
        }
        Command::Cosets {
            config,
            subgroup,
            table,
            limit,
        } => {
            let (mut parsed, _) = load_config(&config)?;
            apply_overrides(&mut parsed, limit, None);
            let (presentation, spec) = parse_subgroup(&parsed, &subgroup)?;
            let effective_limit = parsed
                .analysis
                .limit
                .unwrap_or(solenoid_core::tower::DEFAULT_ENUM_LIMIT);
            let t = CosetTable::enumerate(&presentation, &spec, effective_limit)?;
            println!("index {}", t.index());
            if table {
                for row in t.rows_1based() {
                    let cells: Vec<String> = row.iter().map(usize::to_string).collect();
                    println!("{}", cells.join(" "));
                }
            }
            Ok(())
        }
        Command::Sweep {
            format,
            policy,
            seeds,
        } => {
            use solenoid_core::homsearch::MonPolicy;
            let format: Format = format.parse()?;
            let policies = match policy.as_str() {
                "image-anywhere" => vec![MonPolicy::ImageAnywhere],
                "image-in-chain" => vec![MonPolicy::ImageInChain],
                "both" => vec![MonPolicy::ImageAnywhere, MonPolicy::ImageInChain],
                other => {
                    return Err(Error::Config {
                        line: 0,
                        message: format!("unknown policy {other:?}"),
                    })
                }
            };
            let seed_storage: Vec<String> = match &seeds {
                Some(list) => list.split(',').map(|s| s.trim().to_string()).collect(),
                None => solenoid_core::catalog::sweep_seed_names()
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
            };
            let seed_refs: Vec<&str> = seed_storage.iter().map(String::as_str).collect();
            let report = report::run_catalog_sweep(&seed_refs, &policies)?;
            print!("{}", report::emit_sweep(&report, format)?);
            if report.policies.iter().any(|o| !o.all_pass()) {
                return Err(Error::InvariantViolation(
                    "lemma checks failed on the model catalog".into(),
                ));
            }
            Ok(())
        }
        Command::SubgroupPresentation {
            config,
            subgroup,
            raw,
            limit,
        } => {
            let (mut parsed, _) = load_config(&config)?;
            apply_overrides(&mut parsed, limit, None);
            let (presentation, spec) = parse_subgroup(&parsed, &subgroup)?;
            let effective_limit = parsed
                .analysis
                .limit
                .unwrap_or(solenoid_core::tower::DEFAULT_ENUM_LIMIT);
            let t = CosetTable::enumerate(&presentation, &spec, effective_limit)?;
            let data = schreier::rewrite_subgroup_presentation(&t)?;
            let p = if raw {
                data.presentation.clone()
            } else {
                schreier::simplify_presentation(&data.presentation)?
            };
            println!("index {}", t.index());
            println!("{}", p.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
