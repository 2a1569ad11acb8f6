//! `treespec`: spectra of standard Laplacians on metric trees and graphs,
//! bound verification, and the worked examples.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use treespec_cli::campaign::{render_summary, run_campaign, CampaignConfig};
use treespec_cli::examples::{
    render_gd_equality, render_loop_example, render_star_limit, star_limit_rows,
};
use treespec_cli::failure::CliFailure;
use treespec_cli::output::{render_spectrum, Format};
use treespec_cli::pool::worker_count;
use treespec_core::bounds::{check_all, BoundReport};
use treespec_core::fem::count_oracle;
use treespec_core::graph::{parse_graph, MetricGraph};
use treespec_core::method::{MethodOptions, MethodRegistry};
use treespec_core::secular::{count_up_to, eigenvalues_with, SolveOptions};

#[derive(Parser)]
#[command(
    name = "treespec",
    about = "Spectra and eigenvalue bounds of standard Laplacians on finite metric trees and graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SolveArgs {
    /// Relative eigenvalue tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Root-scan grid density divisor (step is pi / (scan-div * L)).
    #[arg(long = "scan-div", default_value_t = 16)]
    scan_div: u32,
}

impl SolveArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            tolerance: self.tol,
            scan_divisor: self.scan_div,
            ..SolveOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the first eigenvalues of a graph by the selected method.
    Spectrum {
        /// Graph file.
        graph: PathBuf,
        /// Number of eigenvalues.
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Method name: closed-form, secular, or oracle.
        #[arg(long, default_value = "secular")]
        method: String,
        /// Uniform elements per edge for the oracle method.
        #[arg(long)]
        elements: Option<usize>,
        /// Cross-check the eigenvalue count against the variational oracle.
        #[arg(long)]
        audit: bool,
        #[arg(long, default_value = "text")]
        format: Format,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Evaluate every applicable bound for k = 1..=K against the spectrum.
    Bounds {
        /// Graph file.
        graph: PathBuf,
        /// Largest bound index k.
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Run a randomized verification campaign over seeded random trees.
    Verify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long = "max-edges", default_value_t = 12)]
        max_edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Bound index budget per tree.
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Mix sqrt(2) components into random edge lengths.
        #[arg(long)]
        rad2: bool,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Reproduce a named example.
    Example {
        #[command(subcommand)]
        which: ExampleCommand,
    },
}

#[derive(Subcommand)]
enum ExampleCommand {
    /// The three-star family with legs pi/n, pi/n, pi: the gap approaches
    /// the longest-edge bound as n grows.
    StarLimit {
        /// Even values of n, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32,64")]
        n: Vec<u32>,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// The loop counterexample: the longest-edge bound fails off trees.
    Loop {
        #[arg(long)]
        length: f64,
    },
    /// The Dirichlet equality index of a rational-length tree.
    GdEquality {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's rendering, but the usage exit code contract is ours.
            let _ = e.print();
            let code = if e.use_stderr() { 1 } else { 0 };
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{failure}");
            ExitCode::from(failure.exit_code() as u8)
        }
    }
}

fn load_graph(path: &PathBuf) -> Result<(MetricGraph, String), CliFailure> {
    let text = std::fs::read_to_string(path)?;
    let graph = parse_graph(&text)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "graph".to_string());
    Ok((graph, id))
}

fn run(cli: Cli) -> Result<(), CliFailure> {
    match cli.command {
        Command::Spectrum {
            graph,
            k,
            method,
            elements,
            audit,
            format,
            solve,
        } => {
            let (graph, _) = load_graph(&graph)?;
            let registry = MethodRegistry::standard();
            let selected = registry.get(&method)?;
            let opts = MethodOptions {
                solve: solve.options(),
                elements_per_edge: elements,
            };
            let spectrum = selected.spectrum(&graph, k, &opts)?;
            print!("{}", render_spectrum(&spectrum, format));
            if audit {
                print!("{}", audit_counts(&graph, k, &opts)?);
            }
            Ok(())
        }
        Command::Bounds {
            graph,
            k,
            format,
            solve,
        } => {
            let (graph, id) = load_graph(&graph)?;
            let opts = solve.options();
            let spectrum = eigenvalues_with(&graph, k + 1, &opts)?;
            let report = check_all(&graph, k, &spectrum, &id)?;
            print_report(&report, format)?;
            Ok(())
        }
        Command::Verify {
            trials,
            max_edges,
            seed,
            k,
            rad2,
            solve,
        } => {
            if trials < 1 {
                return Err(CliFailure::Usage("at least one trial required".into()));
            }
            if max_edges < 1 {
                return Err(CliFailure::Usage("max-edges must be at least 1".into()));
            }
            let config = CampaignConfig {
                trials,
                max_edges,
                seed,
                k_budget: k,
                monotonicity_k: k.clamp(1, 8),
                tolerance: solve.tol,
                scan_divisor: solve.scan_div,
                rad2,
                workers: worker_count(),
            };
            let summary = run_campaign(&config);
            print!("{}", render_summary(&summary));
            if !summary.violations.is_empty() {
                return Err(CliFailure::Violation(format!(
                    "{} trial(s) violated a proved bound",
                    summary.violations.len()
                )));
            }
            if !summary.numerical_failures.is_empty() {
                return Err(CliFailure::Numerical(format!(
                    "{} trial(s) failed to converge",
                    summary.numerical_failures.len()
                )));
            }
            Ok(())
        }
        Command::Example { which } => match which {
            ExampleCommand::StarLimit { n, solve } => {
                let rows = star_limit_rows(&n, &solve.options())?;
                print!("{}", render_star_limit(&rows));
                Ok(())
            }
            ExampleCommand::Loop { length } => {
                print!("{}", render_loop_example(length)?);
                Ok(())
            }
            ExampleCommand::GdEquality { graph, solve } => {
                let (graph, _) = load_graph(&graph)?;
                print!("{}", render_gd_equality(&graph, &solve.options())?);
                Ok(())
            }
        },
    }
}

/// Cross-check the secular eigenvalue count against the variational oracle
/// at a threshold chosen inside a spectral gap beyond the requested window.
fn audit_counts(
    graph: &MetricGraph,
    k: usize,
    opts: &MethodOptions,
) -> Result<String, CliFailure> {
    let count = k.max(2);
    let extended = eigenvalues_with(graph, count + 1, &opts.solve)?;
    let values = extended.values();
    let mu = pick_audit_threshold(values);
    let secular = count_up_to(graph, mu, &opts.solve)?;
    let mut elements = opts.elements_per_edge.unwrap_or(16);
    for _ in 0..4 {
        let oracle = count_oracle(graph, mu, elements)?;
        if oracle.certified {
            let status = if oracle.count == secular.count {
                "agree"
            } else {
                "MISMATCH"
            };
            let line = format!(
                "# audit: mu = {mu:.12e}, secular count = {}, oracle count = {} ({status})\n",
                secular.count, oracle.count
            );
            if oracle.count != secular.count {
                return Err(CliFailure::Numerical(format!(
                    "count audit mismatch at mu = {mu:.6e}: secular {} vs oracle {}",
                    secular.count, oracle.count
                )));
            }
            return Ok(line);
        }
        elements *= 2;
    }
    Err(CliFailure::Numerical(format!(
        "count audit could not certify a count at mu = {mu:.6e}"
    )))
}

/// Midpoint of the widest gap in the tail of the computed spectrum, so the
/// count threshold stays clear of eigenvalues (the tail may be degenerate).
fn pick_audit_threshold(values: &[f64]) -> f64 {
    let start = values.len() / 2;
    let mut widest = (0.0, values.len() - 1);
    for i in start.max(1)..values.len() {
        let gap = values[i] - values[i - 1];
        if gap > widest.0 {
            widest = (gap, i);
        }
    }
    0.5 * (values[widest.1 - 1] + values[widest.1])
}

fn print_report(report: &BoundReport, format: Format) -> Result<(), CliFailure> {
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(report)
                .map_err(|e| CliFailure::Usage(e.to_string()))?;
            println!("{text}");
        }
        Format::Csv | Format::Text => {
            println!("{}", BoundReport::CSV_HEADER);
            print!("{}", report.to_csv());
            let kkmm = &report.kkmm;
            println!(
                "# edge-count gap bound (loops subdivided): |E| = {}, bound = {:.12e}, lambda_2 = {:.12e}, margin = {:.6e}, equality = {}",
                kkmm.edge_count, kkmm.bound, kkmm.lambda_2, kkmm.margin, kkmm.equality
            );
        }
    }
    Ok(())
}
