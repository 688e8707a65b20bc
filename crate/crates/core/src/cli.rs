//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classifiers::{fit, histogram_bounds, Classifier, FitConfig, Method, RuleBase};
use crate::dataset::{normalize, normalize_with, parse_wdbc, Dataset, RawRecord, SplitScheme};
use crate::evaluation::{compare_methods, evaluate, EvaluationReport};
use crate::io::{envelope_json, load_rulebase, save_rulebase};
use crate::membership::MembershipFunction;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fuzzy-rulegen", version, about = "Fuzzy if-then rule classifiers for the WDBC data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit one method and write its rule file
    Fit(FitArgs),
    /// Evaluate a rule file on a data file
    Eval(EvalArgs),
    /// Fit and evaluate all four methods and print a rate table
    Compare(CompareArgs),
    /// Pretty-print the rules of a rule file
    Inspect(InspectArgs),
    /// Emit histogram, Gaussian or scatter data as comma-separated text
    DumpPlotdata(PlotArgs),
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Fuzzy sets per attribute for the simple grid
    #[arg(long = "partitions", value_name = "K", default_value_t = 5)]
    partitions: usize,
    /// Triangular bins for the smoothed histogram
    #[arg(long = "bins", value_name = "H", default_value_t = 20)]
    bins: usize,
    /// Triangular sets spanning the class overlap in the modified grid
    #[arg(long = "inner-sets", value_name = "J", default_value_t = 1)]
    inner_sets: usize,
}

impl GridArgs {
    fn config(&self) -> FitConfig {
        FitConfig {
            grid_k: self.partitions,
            histogram_bins: self.bins,
            overlap_inner_sets: self.inner_sets,
            ..FitConfig::default()
        }
    }
}

#[derive(Debug, Args)]
struct FitArgs {
    /// mean-std, histogram, simple-grid or modified-grid
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// WDBC data file
    #[arg(long)]
    data: PathBuf,
    /// Output rule file
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Rule file written by `fit`
    #[arg(long)]
    rules: PathBuf,
    /// WDBC data file, normalized with the ranges stored in the rule file
    #[arg(long)]
    data: PathBuf,
    /// Print a JSON report instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CompareArgs {
    /// WDBC data file
    #[arg(long)]
    data: PathBuf,
    /// resubstitution or kfold:K
    #[arg(long, default_value = "resubstitution", value_parser = parse_scheme)]
    scheme: SplitScheme,
    /// Shuffle seed for k-fold splits
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Re-normalize each training fold with its own ranges
    #[arg(long)]
    per_fold_normalization: bool,
    #[command(flatten)]
    grid: GridArgs,
    /// Print a JSON report instead of the table
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct InspectArgs {
    /// Rule file written by `fit`
    #[arg(long)]
    rules: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PlotKind {
    /// class,attribute,bin_left,height
    Histogram,
    /// class,attribute,mu,sigma
    Gaussian,
    /// class followed by three normalized attributes
    Scatter,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// WDBC data file
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "histogram")]
    kind: PlotKind,
    /// Triangular bins for histograms
    #[arg(long = "bins", value_name = "H", default_value_t = 20)]
    bins: usize,
    /// Three 1-based attribute indices for scatter output
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3])]
    attributes: Vec<usize>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn parse_scheme(s: &str) -> Result<SplitScheme, String> {
    s.parse()
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => m,
        }
    }
}

fn data_err(context: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{}: {e}", context.display()))
}

/// Runs the tool with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Inspect(a) => cmd_inspect(a),
        Command::DumpPlotdata(a) => cmd_plot(a),
    };
    match result {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write output: {e}");
                EXIT_INTERNAL
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.code()
        }
    }
}

fn read_records(path: &Path) -> Result<Vec<RawRecord>, CliError> {
    let file = File::open(path).map_err(|e| data_err(path, e))?;
    let records = parse_wdbc(BufReader::new(file)).map_err(|e| data_err(path, e))?;
    if records.is_empty() {
        return Err(data_err(path, "no records"));
    }
    Ok(records)
}

fn read_dataset(path: &Path) -> Result<Dataset, CliError> {
    normalize(&read_records(path)?).map_err(|e| data_err(path, e))
}

fn read_rules(path: &Path) -> Result<RuleBase, CliError> {
    let file = File::open(path).map_err(|e| data_err(path, e))?;
    load_rulebase(BufReader::new(file)).map_err(|e| data_err(path, e))
}

fn accuracy_line(r: &EvaluationReport) -> String {
    format!(
        "accuracy {:.2}% ({}/{} correct, {} rejected)\n",
        r.accuracy * 100.0,
        r.correct,
        r.total,
        r.rejected
    )
}

fn cmd_fit(a: FitArgs) -> Result<String, CliError> {
    let ds = read_dataset(&a.data)?;
    let cfg = a.grid.config();
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let rb = fit(a.method, &ds, &cfg).map_err(|e| data_err(&a.data, e))?;
    let report = evaluate(&rb, &ds).map_err(|e| CliError::Internal(e.to_string()))?;
    let file = File::create(&a.out).map_err(|e| CliError::Internal(format!("{}: {e}", a.out.display())))?;
    save_rulebase(&rb, std::io::BufWriter::new(file))
        .map_err(|e| CliError::Internal(format!("{}: {e}", a.out.display())))?;
    let mut text = format!("{}: {} rules written to {}\n", a.method, rb.rule_count(), a.out.display());
    text.push_str("training ");
    text.push_str(&accuracy_line(&report));
    Ok(text)
}

fn cmd_eval(a: EvalArgs) -> Result<String, CliError> {
    let rb = read_rules(&a.rules)?;
    let records = read_records(&a.data)?;
    let ds = normalize_with(&records, rb.norm_params().to_vec()).map_err(|e| data_err(&a.data, e))?;
    let report = evaluate(&rb, &ds).map_err(|e| data_err(&a.data, e))?;
    if a.json {
        return Ok(envelope_json("evaluation-report", &report));
    }
    let mut text = format!("{}: {} rules\n", rb.method(), rb.rule_count());
    text.push_str(&accuracy_line(&report));
    let names = rb.class_names();
    let _ = writeln!(text, "confusion (rows actual, columns predicted, last column rejected):");
    for (k, row) in report.confusion.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>6}")).collect();
        let _ = writeln!(text, "  {:<6}{} {:>6}", names[k], cells.join(""), report.rejected_per_class[k]);
    }
    Ok(text)
}

fn cmd_compare(a: CompareArgs) -> Result<String, CliError> {
    let ds = read_dataset(&a.data)?;
    let cfg = a.grid.config();
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let scheme = match a.scheme {
        SplitScheme::KFold { k, .. } => SplitScheme::KFold { k, seed: a.seed },
        s => s,
    };
    let report = compare_methods(&ds, &cfg, scheme, a.per_fold_normalization, &Method::ALL)
        .map_err(|e| data_err(&a.data, e))?;
    Ok(if a.json {
        report.to_json()
    } else {
        report.render_table()
    })
}

fn describe_set(mf: &MembershipFunction, label: &str) -> String {
    match mf {
        MembershipFunction::Gaussian { mu, sigma } => format!("gauss(mu={mu:.4}, sigma={sigma:.4})"),
        MembershipFunction::PiecewiseConstant { .. } => format!("histogram[{label}]"),
        _ => label.to_string(),
    }
}

fn cmd_inspect(a: InspectArgs) -> Result<String, CliError> {
    let rb = read_rules(&a.rules)?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "method {} ({}): {} rules over {} attributes, classes {}",
        rb.method(),
        rb.method().title(),
        rb.rule_count(),
        rb.n_attributes(),
        rb.class_names().join(", ")
    );
    if matches!(rb.method(), Method::SimpleGrid | Method::ModifiedGrid) {
        let _ = writeln!(text, "partitions:");
        for (name, p) in rb.attribute_names().iter().zip(rb.partitions()) {
            let sets: Vec<String> = p
                .labels
                .iter()
                .zip(&p.sets)
                .map(|(l, s)| format!("{l}={}", shape(s)))
                .collect();
            let _ = writeln!(text, "  {name}: {}", sets.join(" "));
        }
    }
    let _ = writeln!(text, "rules:");
    for (j, rule) in rb.rules().iter().enumerate() {
        let Some(class) = rule.consequent else { continue };
        let terms: Vec<String> = rule
            .antecedents
            .iter()
            .zip(rb.partitions())
            .zip(rb.attribute_names())
            .map(|((&s, p), name)| format!("{name} is {}", describe_set(&p.sets[s], &p.labels[s])))
            .collect();
        let _ = writeln!(
            text,
            "  R{}: IF {} THEN class {} (CF {:.4})",
            j + 1,
            terms.join(" AND "),
            rb.class_names()[class],
            rule.cf
        );
    }
    Ok(text)
}

fn shape(mf: &MembershipFunction) -> String {
    match mf {
        MembershipFunction::Triangular { left, center, right } => format!("tri({left:.4},{center:.4},{right:.4})"),
        MembershipFunction::Trapezoid { a, b, c, d } => format!("trap({a:.4},{b:.4},{c:.4},{d:.4})"),
        MembershipFunction::Gaussian { mu, sigma } => format!("gauss({mu:.4},{sigma:.4})"),
        MembershipFunction::PiecewiseConstant { values, .. } => format!("steps({})", values.len()),
    }
}

fn cmd_plot(a: PlotArgs) -> Result<String, CliError> {
    let ds = read_dataset(&a.data)?;
    let mut text = String::new();
    match a.kind {
        PlotKind::Histogram => {
            let cfg = FitConfig {
                histogram_bins: a.bins,
                ..FitConfig::default()
            };
            cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let rb = fit(Method::Histogram, &ds, &cfg).map_err(|e| data_err(&a.data, e))?;
            let bounds = histogram_bounds(a.bins);
            text.push_str("class,attribute,bin_left,height\n");
            for k in 0..ds.n_classes() {
                for (i, p) in rb.partitions().iter().enumerate() {
                    let MembershipFunction::PiecewiseConstant { values, .. } = &p.sets[k] else {
                        return Err(CliError::Internal("histogram rule base without histograms".into()));
                    };
                    for (left, h) in bounds.iter().zip(values) {
                        let _ = writeln!(text, "{},{},{},{}", k + 1, i + 1, left, h);
                    }
                }
            }
        }
        PlotKind::Gaussian => {
            let rb = fit(Method::MeanStd, &ds, &FitConfig::default()).map_err(|e| data_err(&a.data, e))?;
            text.push_str("class,attribute,mu,sigma\n");
            for k in 0..ds.n_classes() {
                for (i, p) in rb.partitions().iter().enumerate() {
                    if let MembershipFunction::Gaussian { mu, sigma } = p.sets[k] {
                        let _ = writeln!(text, "{},{},{},{}", k + 1, i + 1, mu, sigma);
                    }
                }
            }
        }
        PlotKind::Scatter => {
            let n = ds.n_attributes();
            if a.attributes.len() != 3 {
                return Err(CliError::Usage(format!(
                    "--attributes takes three indices, got {}",
                    a.attributes.len()
                )));
            }
            if let Some(bad) = a.attributes.iter().find(|&&i| i == 0 || i > n) {
                return Err(CliError::Usage(format!("attribute {bad} is outside 1..={n}")));
            }
            let cols: Vec<usize> = a.attributes.iter().map(|i| i - 1).collect();
            let _ = writeln!(
                text,
                "class,{}",
                cols.iter().map(|&i| ds.attribute_names()[i].clone()).collect::<Vec<_>>().join(",")
            );
            for p in ds.patterns() {
                let vals: Vec<String> = cols.iter().map(|&i| p.x[i].to_string()).collect();
                let _ = writeln!(text, "{},{}", p.class + 1, vals.join(","));
            }
        }
    }
    Ok(text)
}
