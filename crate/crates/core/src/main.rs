//! Command-line interface: measure label files, print model distributions,
//! and run the characterization grid, rank, and sweep reports.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use cluster_validity::characterization::{
    default_sweep_eps1, evaluate_grid, evaluate_grid_with, rank_table, sweep_eps1,
    violation_report_for, write_grid_csv, write_ranks_csv, write_sweep_csv, Convention, GridSpec,
    ViolationReport,
};
use cluster_validity::classic::all_measures;
use cluster_validity::info::q_scores;
use cluster_validity::model::{build_joint, ModelParams};
use cluster_validity::tables::{build_contingency, expected_table, Labeling};
use cluster_validity::ValidityError;

#[derive(Parser)]
#[command(
    name = "cluster-validity",
    version,
    about = "External cluster-validity measures and their characterization harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a labeled data set under all seven measures
    Measure {
        /// CSV file with header `class,cluster`, one row per object
        labels: PathBuf,
        /// Print the detailed q-score breakdown instead of the measure vector
        #[arg(long)]
        q_scores: bool,
    },
    /// Print the joint distribution of a model-family member
    Model {
        #[arg(long)]
        classes: usize,
        #[arg(long)]
        useful: usize,
        #[arg(long, default_value_t = 0)]
        noise: usize,
        #[arg(long, default_value_t = 0.0)]
        eps1: f64,
        #[arg(long, default_value_t = 0.0)]
        eps2: f64,
        /// Also print the expected contingency table for this sample size
        #[arg(long)]
        n: Option<u64>,
    },
    /// Evaluate the full parameter grid and report desiderata violations
    Grid {
        #[command(flatten)]
        spec: SpecArgs,
        /// Grid CSV output path
        #[arg(long, default_value = "grid.csv")]
        out: PathBuf,
        /// Violation report JSON output path
        #[arg(long, default_value = "violations.json")]
        report: PathBuf,
    },
    /// Rank every grid combination under each measure
    Ranks {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value = "ranks.csv")]
        out: PathBuf,
    },
    /// Sweep eps1 with the other model parameters fixed
    Sweep {
        #[arg(long, default_value_t = 5)]
        classes: usize,
        #[arg(long, default_value_t = 5)]
        useful: usize,
        #[arg(long, default_value_t = 0)]
        noise: usize,
        #[arg(long, default_value_t = 0.0)]
        eps2: f64,
        /// Ascending eps1 values (default 0, 0.05, ..., 0.8)
        #[arg(long, value_delimiter = ',')]
        eps1: Option<Vec<f64>>,
        #[arg(long, default_value_t = 500)]
        n: u64,
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// Grid spec JSON file; omitted fields keep their defaults
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Override the sample size of the spec
    #[arg(long)]
    n: Option<u64>,
}

impl SpecArgs {
    fn resolve(&self) -> anyhow::Result<GridSpec> {
        let mut spec = match &self.spec {
            None => GridSpec::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing grid spec {}", path.display()))?
            }
        };
        if let Some(n) = self.n {
            spec.n = n;
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            // internal inconsistencies exit 1, bad input or usage exits 2
            match err.downcast_ref::<ValidityError>() {
                Some(ValidityError::Inconsistent(_)) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Measure { labels, q_scores } => cmd_measure(&labels, q_scores),
        Command::Model {
            classes,
            useful,
            noise,
            eps1,
            eps2,
            n,
        } => cmd_model(
            ModelParams {
                num_classes: classes,
                useful_clusters: useful,
                noise_clusters: noise,
                eps1,
                eps2,
            },
            n,
        ),
        Command::Grid { spec, out, report } => cmd_grid(&spec.resolve()?, &out, &report),
        Command::Ranks { spec, out } => cmd_ranks(&spec.resolve()?, &out),
        Command::Sweep {
            classes,
            useful,
            noise,
            eps2,
            eps1,
            n,
            out,
        } => cmd_sweep(classes, useful, noise, eps2, eps1, n, &out),
    }
}

fn open_input(path: &Path) -> anyhow::Result<Box<dyn Read>> {
    Ok(Box::new(
        File::open(path).with_context(|| format!("opening {}", path.display()))?,
    ))
}

/// Round every float in a JSON tree to the report precision so printed
/// output honors the fixed 12-significant-digit formatting contract.
fn round_json_floats(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(f) = n.as_f64() {
                if n.as_i64().is_none() && n.as_u64().is_none() {
                    let rounded: f64 = cluster_validity::fmt::fmt_report(f)
                        .parse()
                        .unwrap_or(f);
                    if let Some(num) = serde_json::Number::from_f64(rounded) {
                        *n = num;
                    }
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_json_floats),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_json_floats),
        _ => {}
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> anyhow::Result<()> {
    let mut json = serde_json::to_value(value)?;
    round_json_floats(&mut json);
    println!("{}", serde_json::to_string_pretty(&json)?);
    Ok(())
}

fn cmd_measure(labels: &Path, detail: bool) -> anyhow::Result<()> {
    let labeling = Labeling::from_csv(open_input(labels)?)?;
    let table = build_contingency(&labeling);
    if detail {
        print_json(&q_scores(&table)?)
    } else {
        print_json(&all_measures(&table))
    }
}

fn cmd_model(params: ModelParams, n: Option<u64>) -> anyhow::Result<()> {
    let joint = build_joint(&params)?;
    match n {
        None => print_json(&joint),
        Some(n) => {
            let table = expected_table(&joint, n);
            print_json(&serde_json::json!({
                "joint": joint,
                "expected_table": table,
            }))
        }
    }
}

fn write_file<F>(path: &Path, write: F) -> anyhow::Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
{
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut writer = BufWriter::new(file);
    write(&mut writer)?;
    writer.flush()?;
    Ok(())
}

fn print_summary(report: &ViolationReport) {
    let classical = ["rand", "fowlkes", "gamma", "jaccard", "hamming"];
    let counts = |entries: &[cluster_validity::characterization::MeasureCount]| -> Vec<String> {
        classical
            .iter()
            .map(|name| {
                entries
                    .iter()
                    .find(|c| c.measure == *name)
                    .map_or_else(|| "-".to_string(), |c| c.count.to_string())
            })
            .collect()
    };

    println!("valid combinations: {}", report.combinations);
    println!();
    let denominator = report.p2.first().map_or(0, |c| c.denominator);
    println!("P2 violations out of {denominator} noise-cluster sweeps:");
    println!("{:>24}  {:>7} {:>7} {:>7} {:>7} {:>7}", "", "Rand", "Fowlkes", "Gamma", "Jaccard", "Hamming");
    let primary: Vec<String> = classical
        .iter()
        .map(|name| {
            report
                .p2
                .iter()
                .find(|c| c.measure == *name)
                .map_or_else(|| "-".to_string(), |c| c.count.to_string())
        })
        .collect();
    println!(
        "{:>24}  {:>7} {:>7} {:>7} {:>7} {:>7}",
        "continuous extension", primary[0], primary[1], primary[2], primary[3], primary[4]
    );
    let pop = counts(&report.p2_alternative_conventions.population_pairs);
    println!(
        "{:>24}  {:>7} {:>7} {:>7} {:>7} {:>7}",
        "population pairs", pop[0], pop[1], pop[2], pop[3], pop[4]
    );
    let rounded = counts(&report.p2_alternative_conventions.rounded_counts);
    println!(
        "{:>24}  {:>7} {:>7} {:>7} {:>7} {:>7}",
        "rounded counts", rounded[0], rounded[1], rounded[2], rounded[3], rounded[4]
    );
    println!();
    for check in &report.p1 {
        if check.p1_1 + check.p1_2 > 0 {
            println!(
                "P1 violations for {}: {} below the class count, {} at or above it",
                check.measure, check.p1_1, check.p1_2
            );
        }
    }
    for (name, checks) in [("P3.1", &report.p3_1), ("P3.2", &report.p3_2)] {
        for check in checks {
            if check.sequences > 0 {
                println!(
                    "{name} violations for {}: {} sequences ({} steps)",
                    check.measure, check.sequences, check.step_instances
                );
            }
        }
    }
}

fn cmd_grid(spec: &GridSpec, out: &Path, report_path: &Path) -> anyhow::Result<()> {
    let primary = evaluate_grid(spec)?;
    let population = evaluate_grid_with(spec, Convention::PopulationPairs)?;
    let rounded = evaluate_grid_with(spec, Convention::RoundedCounts)?;
    let report = violation_report_for(&primary, &population, &rounded);

    write_file(out, |w| write_grid_csv(w, &primary))?;
    write_file(report_path, |w| {
        let mut json = serde_json::to_value(&report).expect("report serializes");
        round_json_floats(&mut json);
        let text = serde_json::to_string_pretty(&json).expect("report serializes");
        w.write_all(text.as_bytes())?;
        w.write_all(b"\n")
    })?;
    print_summary(&report);
    println!();
    println!("wrote {} and {}", out.display(), report_path.display());
    Ok(())
}

fn cmd_ranks(spec: &GridSpec, out: &Path) -> anyhow::Result<()> {
    let grid = evaluate_grid(spec)?;
    let ranks = rank_table(&grid);
    write_file(out, |w| write_ranks_csv(w, &ranks))?;
    println!(
        "ranked {} combinations under {} measures; wrote {}",
        grid.rows.len(),
        ranks.measures.len(),
        out.display()
    );
    Ok(())
}

fn cmd_sweep(
    classes: usize,
    useful: usize,
    noise: usize,
    eps2: f64,
    eps1: Option<Vec<f64>>,
    n: u64,
    out: &Path,
) -> anyhow::Result<()> {
    let eps1_values = eps1.unwrap_or_else(default_sweep_eps1);
    let points = sweep_eps1(classes, useful, noise, eps2, &eps1_values, n)?;
    write_file(out, |w| write_sweep_csv(w, &points))?;
    println!("swept {} eps1 values; wrote {}", points.len(), out.display());
    Ok(())
}
