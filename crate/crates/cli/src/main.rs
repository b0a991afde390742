mod input;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pseudometric::campaign::{run_all, CampaignConfig};
use pseudometric::classify::{
    block_sizes_distinct, classify, is_ip_definitional, is_ip_fiber_form, is_ip_structural, metric_reflection,
    reflection_sym_full, ClassifyError, ClassifyOptions,
};
use pseudometric::construct::{
    discrete_from_relation, pseudorectangle_from_relation, strongly_rigid_from_relation, ConstructError,
};
use pseudometric::groups::{kernel, pi_group, reflection_hom, GroupError, PermutationGroup};
use pseudometric::similarity::{search_similarity, SearchOutcome, SimilarityError, DEFAULT_SEARCH_BOUND};
use pseudometric::{PseudometricSpace, SpaceError, DEFAULT_BRUTE_FORCE_BOUND};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Validation(#[from] SpaceError),
    #[error("{0}")]
    Relation(String),
    #[error(transparent)]
    Groups(#[from] GroupError),
    #[error(transparent)]
    Similarity(#[from] SimilarityError),
    #[error(transparent)]
    Disagreement(#[from] ClassifyError),
    #[error("{0}")]
    PropertyViolation(String),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error("MissingSeed: --kind {0} needs --seed")]
    MissingSeed(&'static str),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Validation(_) | CliError::Relation(_) => 3,
            CliError::Groups(_) => 4,
            CliError::Disagreement(_) | CliError::PropertyViolation(_) => 5,
            CliError::Similarity(_) => 6,
            CliError::Construct(_) | CliError::MissingSeed(_) => 7,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Pretty-printed JSON with sorted keys.
    Document,
    /// `key: value` lines.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Discrete,
    StronglyRigid,
    Pseudorectangle,
}

#[derive(Parser, Debug)]
#[command(name = "pmspace", version, about = "Classify finite pseudometric spaces and their self-similarity groups")]
struct Cli {
    /// Largest space for which permutation groups are enumerated
    #[arg(long, global = true, default_value_t = DEFAULT_BRUTE_FORCE_BOUND)]
    bound: usize,

    /// Skip every enumeration and definitional cross-check
    #[arg(long, global = true)]
    structural_only: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Document)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Class memberships, reflection size and group orders
    Classify { input: PathBuf },
    /// Membership in IP
    Ip { input: PathBuf },
    /// Cs, PI, the reflection homomorphism and its kernel
    Groups { input: PathBuf },
    /// Search for a combinatorial similarity between two spaces
    Similar {
        first: PathBuf,
        second: PathBuf,
        /// Largest space the backtracking search will attempt
        #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
        search_bound: usize,
    },
    /// Build a space whose zero-relation is the given relation
    Construct {
        relation: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run the seeded property campaign
    Propcheck {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

fn print_plain(value: &Value, prefix: &str) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                print_plain(v, &key);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            println!("{prefix}: [{}]", parts.join(", "));
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                print_plain(v, &format!("{prefix}[{i}]"));
            }
        }
        other => println!("{prefix}: {}", scalar(other)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn emit(format: Format, value: &Value) {
    match format {
        Format::Document => println!("{}", serde_json::to_string_pretty(value).expect("values serialize")),
        Format::Plain => print_plain(value, ""),
    }
}

fn options(cli: &Cli) -> ClassifyOptions {
    ClassifyOptions { bound: cli.bound, structural_only: cli.structural_only }
}

fn cmd_classify(cli: &Cli, input: &Path) -> Result<Value, CliError> {
    let space = input::read_space(input)?;
    let report = classify(&space, options(cli))?;
    Ok(serde_json::to_value(report).expect("reports serialize"))
}

fn cmd_ip(cli: &Cli, input: &Path) -> Result<Value, CliError> {
    let space = input::read_space(input)?;
    let by_classes = is_ip_structural(&space);
    let by_fibers = is_ip_fiber_form(&space);
    if by_classes != by_fibers {
        return Err(CliError::PropertyViolation(format!(
            "IP formulations disagree: classes {by_classes}, fibers {by_fibers}"
        )));
    }
    let mut method = "structural";
    if !cli.structural_only && space.len() <= cli.bound {
        let oracle = is_ip_definitional(&space, cli.bound)?;
        if oracle != by_classes {
            return Err(CliError::PropertyViolation(format!(
                "structural IP {by_classes} but enumeration gives {oracle}"
            )));
        }
        method = "both-agree";
    }
    Ok(json!({
        "ip_member": by_classes,
        "block_sizes_distinct": block_sizes_distinct(&space),
        "reflection_sym_full": reflection_sym_full(&space),
        "method": method,
    }))
}

fn group_value(group: &PermutationGroup, labels: &[String]) -> Value {
    json!({
        "order": group.order(),
        "elements": group.elements().iter().map(|p| p.display_with(labels)).collect::<Vec<_>>(),
    })
}

fn cmd_groups(cli: &Cli, input: &Path) -> Result<Value, CliError> {
    let space = input::read_space(input)?;
    let reflection = metric_reflection(&space);
    if space.len() > cli.bound && cli.structural_only {
        return Ok(json!({
            "enumerated": false,
            "points": space.len(),
            "reflection_size": reflection.space.len(),
            "reflection_sym_full": reflection_sym_full(&space),
            "pi_equals_cs_guaranteed": block_sizes_distinct(&space),
        }));
    }
    let hom = reflection_hom(&space, cli.bound)?;
    let pi = pi_group(&space, cli.bound)?;
    let ker = kernel(&hom);
    if ker != pi {
        return Err(CliError::PropertyViolation("kernel of H differs from PI".into()));
    }
    let labels = space.labels();
    let class_labels = reflection.space.labels();
    let image = hom.image();
    let table: Vec<Value> = hom
        .table()
        .map(|(phi, h)| json!({"element": phi.display_with(labels), "image": h.display_with(class_labels)}))
        .collect();
    Ok(json!({
        "enumerated": true,
        "cs": group_value(hom.source(), labels),
        "pi": group_value(&pi, labels),
        "reflection": {
            "points": class_labels,
            "cs": group_value(hom.target(), class_labels),
        },
        "h": table,
        "kernel_order": ker.order(),
        "image_order": image.order(),
        "h_surjective": image.order() == hom.target().order(),
    }))
}

fn cmd_similar(first: &Path, second: &Path, bound: usize) -> Result<Value, CliError> {
    let x = input::read_space(first)?;
    let y = input::read_space(second)?;
    Ok(match search_similarity(&x, &y, bound)? {
        SearchOutcome::Similar(w) => json!({
            "similar": true,
            "psi": w.psi.iter().enumerate()
                .map(|(b, &a)| json!({"second": y.label(b), "first": x.label(a)}))
                .collect::<Vec<_>>(),
            "f": w.f.iter()
                .map(|(s, t)| json!({"first": s.to_string(), "second": t.to_string()}))
                .collect::<Vec<_>>(),
        }),
        SearchOutcome::NotSimilar(reason) => json!({"similar": false, "reason": reason.to_string()}),
    })
}

fn print_similar(format: Format, value: &Value) {
    if format == Format::Document {
        return emit(format, value);
    }
    if value["similar"] == Value::Bool(false) {
        println!("NOT SIMILAR: {}", scalar(&value["reason"]));
        return;
    }
    println!("SIMILAR");
    println!("psi:");
    for row in value["psi"].as_array().into_iter().flatten() {
        println!("  {} -> {}", scalar(&row["second"]), scalar(&row["first"]));
    }
    println!("f:");
    for row in value["f"].as_array().into_iter().flatten() {
        println!("  {} -> {}", scalar(&row["first"]), scalar(&row["second"]));
    }
}

fn cmd_construct(relation: &Path, kind: Kind, seed: Option<u64>) -> Result<Value, CliError> {
    let rel = input::read_relation(relation)?;
    let space: PseudometricSpace = match kind {
        Kind::Discrete => discrete_from_relation(&rel)?,
        Kind::StronglyRigid => strongly_rigid_from_relation(&rel, seed.ok_or(CliError::MissingSeed("strongly-rigid"))?)?,
        Kind::Pseudorectangle => {
            pseudorectangle_from_relation(&rel, seed.ok_or(CliError::MissingSeed("pseudorectangle"))?)?
        }
    };
    Ok(input::space_to_value(&space))
}

fn cmd_propcheck(cli: &Cli, seed: u64, count: usize, max_n: usize) -> Result<(), CliError> {
    let config = CampaignConfig { seed, count, max_n, bound: cli.bound };
    let results = run_all(&config);
    match cli.format {
        Format::Document => emit(cli.format, &serde_json::to_value(&results).expect("results serialize")),
        Format::Plain => {
            for r in &results {
                let mark = if r.passed { "PASS" } else { "FAIL" };
                println!("[{mark}] AC{} {} ({} samples): {}", r.id, r.name, r.samples, r.detail);
            }
        }
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| format!("AC{}", r.id)).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::PropertyViolation(format!("failed criteria: {}", failed.join(", "))))
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Classify { input } => emit(cli.format, &cmd_classify(cli, input)?),
        Command::Ip { input } => emit(cli.format, &cmd_ip(cli, input)?),
        Command::Groups { input } => emit(cli.format, &cmd_groups(cli, input)?),
        Command::Similar { first, second, search_bound } => {
            print_similar(cli.format, &cmd_similar(first, second, *search_bound)?)
        }
        Command::Construct { relation, kind, seed } => emit(cli.format, &cmd_construct(relation, *kind, *seed)?),
        Command::Propcheck { seed, count, max_n } => cmd_propcheck(cli, *seed, *count, *max_n)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(64);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
