//! Command line front end for the analysis stages.
//!
//! Exit codes: 0 when every certificate passes, 1 when one fails or is left
//! inconclusive, 2 on malformed input. Diagnostics never change the code.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use split3::algebra::DEFAULT_NODE_BUDGET;
use split3::fixtures;
use split3::io::{self, InputDoc};
use split3::pipeline::{analyze, masa_search_report, reconstruct_report, AnalysisOptions, Stage};
use split3::report::Report;

#[derive(Parser)]
#[command(name = "split3", version, about = "exact analysis of graded ternary color algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct Common {
    /// Input record (JSON file)
    input: PathBuf,
    /// Output shape
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Replace the record's operator family: inline JSON or a file path
    #[arg(long)]
    masa: Option<String>,
    /// Widen the paired product spaces by all slot permutations
    #[arg(long = "talphabeta-wide")]
    talphabeta_wide: bool,
    /// Cross-check twisted inputs through the untwisted companion (on by default)
    #[arg(long = "via-dehom", num_args = 0..=1, default_missing_value = "true")]
    via_dehom: Option<bool>,
    /// Print per-stage timings to stderr
    #[arg(long)]
    timings: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the record's laws: grading, bicharacter, automorphism, identity
    Validate(Common),
    /// Build the operator algebra and the paired space
    Embed(Common),
    /// Split the record along a maximal abelian operator family
    Roots(Common),
    /// Partition the roots by connection and emit the ideal decomposition
    Decompose(Common),
    /// Push the decomposition down to the operator algebra
    Lpass(Common),
    /// Rebuild a ternary product from an arity-2 record
    Reconstruct(Common),
    /// Run a chosen span of stages
    Run {
        #[command(flatten)]
        common: Common,
        /// Comma-separated stage names; the latest one wins
        #[arg(long, value_delimiter = ',')]
        stages: Vec<String>,
    },
    /// List or emit the bundled example records
    Fixtures {
        #[command(subcommand)]
        which: FixturesCmd,
    },
    /// Search for a maximal abelian operator family
    MasaSearch(Common),
}

#[derive(Subcommand)]
enum FixturesCmd {
    /// Print the available record names
    List,
    /// Print a record, or write it with -o
    Emit {
        name: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Validate(c) => stage_cmd(c, Stage::Validate),
        Cmd::Embed(c) => stage_cmd(c, Stage::Embed),
        Cmd::Roots(c) => stage_cmd(c, Stage::Roots),
        Cmd::Decompose(c) => stage_cmd(c, Stage::Decompose),
        Cmd::Lpass(c) => stage_cmd(c, Stage::Lpass),
        Cmd::Run { common, stages } => {
            let mut upto = Stage::Lpass;
            if !stages.is_empty() {
                upto = Stage::Validate;
                for s in &stages {
                    let stage = Stage::parse(s).ok_or_else(|| {
                        format!("unknown stage {s:?} (expected validate, embed, roots, decompose or lpass)")
                    })?;
                    upto = upto.max(stage);
                }
            }
            stage_cmd(common, upto)
        }
        Cmd::Reconstruct(c) => {
            let doc = load_doc(&c.input)?;
            let report = reconstruct_report(&doc);
            Ok(emit(&c, &report))
        }
        Cmd::MasaSearch(c) => {
            let mut doc = load_doc(&c.input)?;
            apply_masa_flag(&c, &mut doc)?;
            let report = masa_search_report(&doc);
            Ok(emit(&c, &report))
        }
        Cmd::Fixtures { which } => {
            match which {
                FixturesCmd::List => {
                    for f in fixtures::FIXTURES {
                        println!("{:<18} {}", f.name, f.summary);
                    }
                }
                FixturesCmd::Emit { name, out } => {
                    let f = fixtures::fixture(&name)
                        .ok_or_else(|| format!("unknown record {name:?}; see `split3 fixtures list`"))?;
                    match out {
                        Some(path) => fs::write(&path, f.text)
                            .map_err(|e| format!("{}: {e}", path.display()))?,
                        None => print!("{}", f.text),
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_doc(path: &PathBuf) -> Result<InputDoc, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    io::parse_input(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn apply_masa_flag(c: &Common, doc: &mut InputDoc) -> Result<(), String> {
    if let Some(raw) = &c.masa {
        let text = if raw.trim_start().starts_with('[') {
            raw.clone()
        } else {
            fs::read_to_string(raw).map_err(|e| format!("{raw}: {e}"))?
        };
        let a = doc
            .ternary()
            .ok_or("a masa override only applies to ternary records")?;
        let entries = io::parse_masa(a.field(), &text, a.dim()).map_err(|e| e.to_string())?;
        doc.masa = Some(entries);
    }
    Ok(())
}

fn stage_cmd(c: Common, upto: Stage) -> Result<ExitCode, String> {
    let mut doc = load_doc(&c.input)?;
    if doc.ternary().is_none() {
        return Err("this command expects a ternary record; arity-2 records go through `split3 reconstruct`".into());
    }
    apply_masa_flag(&c, &mut doc)?;
    let opts = AnalysisOptions {
        upto,
        wide: c.talphabeta_wide,
        via_dehom: c.via_dehom,
        node_budget: node_budget_from_env()?,
        masa_override: None,
    };
    let report = analyze(&doc, &opts);
    Ok(emit(&c, &report))
}

fn node_budget_from_env() -> Result<usize, String> {
    match std::env::var("SPLIT3_NODE_BUDGET") {
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
        Ok(v) => v
            .parse()
            .map_err(|_| format!("SPLIT3_NODE_BUDGET: {v:?} is not a number")),
    }
}

fn emit(c: &Common, report: &Report) -> ExitCode {
    match c.format {
        Format::Json => print!("{}", report.to_json_string()),
        Format::Text => print!("{}", report.to_text()),
        Format::Dot => print!("{}", report.graph().unwrap_or("graph roots {\n}\n".into())),
    }
    if c.timings {
        for (stage, micros) in report.timings() {
            eprintln!("{stage}: {micros} us");
        }
    }
    ExitCode::from(report.exit_code())
}
