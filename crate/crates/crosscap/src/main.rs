use clap::{Parser, Subcommand, ValueEnum};
use crosscap::brown::{brown_invariant, is_even, normal_form, Z2InnerSpace, Z4QuadraticForm};
use crosscap::dataset::{render_certificates, render_table, run_single, run_table, Dataset};
use crosscap::embed::{find_embedding, EmbeddingProblem, SearchBudget, SearchOutcome};
use crosscap::forms::{
    form_from_weighted_graph, goeritz_from_incidence, CheckerboardIncidence, IntSymForm,
    WeightedGraphForm,
};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_DATA_ERROR: u8 = 2;
const EXIT_NEGATIVE: u8 = 3;
const EXIT_UNDECIDED: u8 = 4;

#[derive(Parser)]
#[command(name = "crosscap", version, about = "Non-orientable 4-genus bounds for small knots")]
struct Cli {
    /// Directory with knots.csv, bandmoves.csv, concordances.csv and forms/
    #[arg(long, global = true, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/data"))]
    data_dir: PathBuf,
    /// Worker threads for per-knot resolution
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Step budget per embedding search; exhaustion yields "undecided"
    #[arg(long, global = true, default_value_t = SearchBudget::default().max_steps)]
    node_budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve every knot in the dataset and print the genus table
    Table {
        /// Write the full report as JSON to this path
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Resolve a single knot
    Knot {
        name: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dump every certificate gathered while resolving a knot
    Certify { name: String },
    /// Decide whether a form embeds in a diagonal unimodular lattice
    Embed {
        /// Form as JSON: {"matrix": [[..]]}, {"weights": [..], "edges": [..]}
        /// or {"white_regions": n, "crossings": [[i,j,eta]..]}; '-' reads stdin
        form: String,
        #[arg(long)]
        target_rank: usize,
        /// Extend the form by a [-l] summand before searching
        #[arg(long)]
        summand: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Classify a Z4-valued quadratic refinement and print its Brown invariant
    Brown {
        /// Form as JSON: {"pairing": [[..]], "values": [..]}; '-' reads stdin
        form: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = SearchBudget { max_steps: cli.node_budget };
    let code = match cli.command {
        Command::Table { report, format } => cmd_table(&cli.data_dir, budget, cli.jobs, report, format),
        Command::Knot { name, format } => cmd_knot(&cli.data_dir, budget, &name, format),
        Command::Certify { name } => cmd_certify(&cli.data_dir, budget, &name),
        Command::Embed { form, target_rank, summand, format } => {
            cmd_embed(&form, target_rank, summand, budget, format)
        }
        Command::Brown { form, format } => cmd_brown(&form, format),
    };
    match code {
        Ok(c) => ExitCode::from(c),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(EXIT_DATA_ERROR)
        }
    }
}

fn load(dir: &Path) -> Result<Dataset, String> {
    Dataset::load(dir).map_err(|e| e.to_string())
}

fn cmd_table(
    dir: &Path,
    budget: SearchBudget,
    jobs: usize,
    report_path: Option<PathBuf>,
    format: Format,
) -> Result<u8, String> {
    let dataset = load(dir)?;
    let report = run_table(&dataset, budget, jobs).map_err(|e| e.to_string())?;
    if let Some(path) = &report_path {
        let json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
        std::fs::write(path, json).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    match format {
        Format::Text => print!("{}", render_table(&report)),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?
        ),
    }
    if !report.summary.undetermined.is_empty() {
        eprintln!("undetermined: {}", report.summary.undetermined.join(", "));
        return Ok(EXIT_NEGATIVE);
    }
    if report.summary.taints > 0 {
        eprintln!("{} knots carry undecided-engine taints", report.summary.taints);
        return Ok(EXIT_UNDECIDED);
    }
    Ok(EXIT_OK)
}

fn cmd_knot(dir: &Path, budget: SearchBudget, name: &str, format: Format) -> Result<u8, String> {
    let dataset = load(dir)?;
    let report = run_single(&dataset, name, budget).map_err(|e| e.to_string())?;
    let knot = &report.knots[0];
    match format {
        Format::Text => {
            if let Some(g) = knot.gamma4 {
                println!("{}: gamma4 = {g}", knot.name);
            } else {
                println!("{}: gamma4 in [{}, {}]", knot.name, knot.lower, knot.upper);
            }
        }
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(knot).map_err(|e| e.to_string())?)
        }
    }
    Ok(if knot.gamma4.is_some() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_certify(dir: &Path, budget: SearchBudget, name: &str) -> Result<u8, String> {
    let dataset = load(dir)?;
    let report = run_single(&dataset, name, budget).map_err(|e| e.to_string())?;
    print!("{}", render_certificates(&report.knots[0]));
    Ok(EXIT_OK)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FormInput {
    Matrix { matrix: Vec<Vec<i64>> },
    Graph(WeightedGraphForm),
    Checkerboard(CheckerboardIncidence),
}

fn read_input(arg: &str) -> Result<String, String> {
    if arg == "-" {
        use std::io::Read;
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| e.to_string())?;
        Ok(text)
    } else {
        std::fs::read_to_string(arg).map_err(|e| format!("{arg}: {e}"))
    }
}

fn parse_form(arg: &str) -> Result<IntSymForm, String> {
    let text = read_input(arg)?;
    let input: FormInput = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let form = match input {
        FormInput::Matrix { matrix } => {
            let rows: Vec<&[i64]> = matrix.iter().map(Vec::as_slice).collect();
            IntSymForm::from_rows(&rows).map_err(|e| e.to_string())?
        }
        FormInput::Graph(g) => form_from_weighted_graph(&g).map_err(|e| e.to_string())?,
        FormInput::Checkerboard(c) => goeritz_from_incidence(&c).map_err(|e| e.to_string())?,
    };
    Ok(form)
}

fn cmd_embed(
    form: &str,
    target_rank: usize,
    summand: Option<i64>,
    budget: SearchBudget,
    format: Format,
) -> Result<u8, String> {
    let mut source = parse_form(form)?;
    if let Some(ell) = summand {
        if ell <= 0 {
            return Err(format!("summand must be positive, got {ell}"));
        }
        source = source.direct_sum(&[-ell]);
    }
    let problem = EmbeddingProblem::new(source, target_rank).map_err(|e| e.to_string())?;
    let outcome = find_embedding(&problem, budget);
    let stats = outcome.stats();
    match format {
        Format::Text => match &outcome {
            SearchOutcome::Embeds(cert, _) => {
                println!("embeds into rank {target_rank}: columns {:?}", cert.columns);
            }
            SearchOutcome::NoEmbedding(_) => {
                println!(
                    "no embedding into rank {target_rank} (exhaustive: {} nodes, {} candidates, {} steps)",
                    stats.nodes_explored, stats.candidates_enumerated, stats.steps
                );
            }
            SearchOutcome::Undecided(_) => {
                println!("undecided after {} steps (raise --node-budget)", stats.steps);
            }
        },
        Format::Json => {
            let json = serde_json::json!({
                "target_rank": target_rank,
                "exists": outcome.exists(),
                "certificate": outcome.certificate().map(|c| c.columns.clone()),
                "nodes_explored": stats.nodes_explored,
                "candidates_enumerated": stats.candidates_enumerated,
                "steps": stats.steps,
            });
            println!("{}", serde_json::to_string_pretty(&json).map_err(|e| e.to_string())?);
        }
    }
    Ok(match outcome.exists() {
        Some(true) => EXIT_OK,
        Some(false) => EXIT_NEGATIVE,
        None => EXIT_UNDECIDED,
    })
}

#[derive(Deserialize)]
struct BrownInput {
    pairing: Vec<Vec<u8>>,
    values: Vec<u8>,
}

fn cmd_brown(form: &str, format: Format) -> Result<u8, String> {
    let text = read_input(form)?;
    let input: BrownInput = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let space = Z2InnerSpace::new(&input.pairing).map_err(|e| e.to_string())?;
    let even = is_even(&space).map_err(|e| e.to_string())?;
    let q = Z4QuadraticForm::new(space, input.values).map_err(|e| e.to_string())?;
    let beta = brown_invariant(&q).map_err(|e| e.to_string())?;
    let nf = normal_form(&q).map_err(|e| e.to_string())?;
    match format {
        Format::Text => {
            println!(
                "parity: {}  dim: {}  brown: {}  normal form: {}",
                if even { "even" } else { "odd" },
                q.dim(),
                beta,
                nf
            );
        }
        Format::Json => {
            let json = serde_json::json!({
                "parity": if even { "even" } else { "odd" },
                "dim": q.dim(),
                "brown": beta,
                "normal_form": nf,
            });
            println!("{}", serde_json::to_string_pretty(&json).map_err(|e| e.to_string())?);
        }
    }
    Ok(EXIT_OK)
}
