//! Command-line entry point: gen, run, analyze, predict, filter, report, selftest.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::analysis::{
    aggregate_filtering, analyze_records, filter_records, fit_decay, predict_lstar, write_filter_report, AnalysisError,
    AnalysisOptions, AnalysisOutput, RegressionFile, DEFAULT_BUCKETS, DEFAULT_MIN_PER_BUCKET,
};
use crate::harness::{derive_seed, read_dataset, run_experiment, ExperimentConfig, HarnessError};
use crate::taskgen::{default_grid, generate_instance, oracle_solve, ComplexitySpec, KParams, TaskError, TaskKind};

#[derive(Debug, Parser)]
#[command(name = "critlen", version, about = "Reasoning-length versus task-complexity laboratory")]
pub struct Cli {
    /// Repeat for more log output.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate task instances as JSONL.
    Gen(GenArgs),
    /// Run an experiment grid against a reasoner.
    Run(RunArgs),
    /// Build curves, critical lengths, correlations and the regression.
    Analyze(AnalyzeArgs),
    /// Print the predicted critical length and window for one cell.
    Predict(PredictArgs),
    /// Filter generations to the predicted window and report accuracy deltas.
    Filter(FilterArgs),
    /// Analyze, filter in-sample, and write a markdown summary.
    Report(ReportArgs),
    /// Generator/oracle agreement and mock-pipeline recovery checks.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub kind: TaskKind,
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 1)]
    pub count: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Kind parameters as a JSON object, instead of the individual flags.
    #[arg(long, conflicts_with_all = ["k_s", "k_m", "k_d", "operators", "depth", "types", "range", "objects", "people"])]
    pub k_params: Option<String>,
    #[arg(long)]
    pub k_s: Option<u32>,
    #[arg(long)]
    pub k_m: Option<u32>,
    #[arg(long)]
    pub k_d: Option<u32>,
    #[arg(long)]
    pub operators: Option<u32>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long)]
    pub types: Option<u32>,
    #[arg(long)]
    pub range: Option<u32>,
    #[arg(long)]
    pub objects: Option<u32>,
    #[arg(long)]
    pub people: Option<u32>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Continue an interrupted run instead of starting over.
    #[arg(long)]
    pub resume: bool,
    /// Dotted-path override applied after parsing, e.g. `reasoner.window_width=12`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct BucketArgs {
    #[arg(long, default_value_t = DEFAULT_BUCKETS)]
    pub buckets: usize,
    #[arg(long, default_value_t = DEFAULT_MIN_PER_BUCKET)]
    pub min_per_bucket: usize,
    /// Also fit one regression per model pooled over tasks.
    #[arg(long)]
    pub pooled: bool,
}

impl BucketArgs {
    fn options(self) -> AnalysisOptions {
        AnalysisOptions { bucket_count: self.buckets, min_per_bucket: self.min_per_bucket, pooled: self.pooled }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub buckets: BucketArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub regression: PathBuf,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub model_id: Option<String>,
    #[arg(long)]
    pub kind: Option<TaskKind>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub regression: PathBuf,
    /// Directory receiving filter_report.csv.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub buckets: BucketArgs,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Instances per kind for the agreement sweep.
    #[arg(long, default_value_t = 1000)]
    pub instances: u32,
    /// Skip the mock-pipeline recovery checks.
    #[arg(long)]
    pub agreement_only: bool,
    /// Scratch directory for mock runs; a fresh temporary directory when absent.
    #[arg(long)]
    pub workdir: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Harness(#[from] HarnessError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Data(String),
    #[error("{0} selftest check(s) failed")]
    Selftest(usize),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Harness(e) => e.code(),
            CliError::Analysis(e) => e.code(),
            CliError::Task(_) => "TASK",
            CliError::Io { .. } => "IO",
            CliError::Data(_) => "DATA_PARSE",
            CliError::Selftest(_) => "SELFTEST_FAILED",
        }
    }
}

fn io_at(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// Parses `args` (program name first), runs the command, and returns the
/// process exit code: 0 success, 1 domain error, 2 usage error.
pub fn dispatch<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = if code == 0 { e.to_string() } else { e.render().to_string() };
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{rendered}");
            return code;
        }
    };
    init_logging(cli.verbose);
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error[{}]: {e}", e.code());
            1
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
}

pub fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    let out = |e: io::Error| CliError::Io { path: PathBuf::from("<stdout>"), source: e };
    match command {
        Command::Gen(a) => gen(&a, stdout),
        Command::Run(a) => {
            let summary = run(&a)?;
            writeln!(
                stdout,
                "records_written={} records_total={} cells_completed={}/{}",
                summary.records_written,
                summary.records_total,
                summary.cells_completed,
                summary.cells.len()
            )
            .map_err(out)
        }
        Command::Analyze(a) => {
            let analysis = analyze(&a.data, &a.out, a.buckets.options())?;
            print_analysis(&analysis, stdout).map_err(out)
        }
        Command::Predict(a) => {
            let file = load_regression(&a.regression)?;
            let fit = file.select(a.model_id.as_deref(), a.kind).ok_or_else(|| {
                CliError::Data(format!("{}: no fit matches the requested model/kind", a.regression.display()))
            })?;
            let p = predict_lstar(&fit.model, a.k, a.n);
            writeln!(stdout, "L*={} window=[{},{}]", fmt_num(p.l_star), fmt_num(p.lo), fmt_num(p.hi)).map_err(out)
        }
        Command::Filter(a) => {
            let (_, records) = read_dataset(&a.data)?;
            let file = load_regression(&a.regression)?;
            let cells = filter_records(&records, &file);
            fs::create_dir_all(&a.out).map_err(io_at(&a.out))?;
            let path = a.out.join("filter_report.csv");
            write_filter_report(&path, &cells).map_err(io_at(&path))?;
            let reports: Vec<_> = cells.iter().map(|c| c.report.clone()).collect();
            match aggregate_filtering(&reports) {
                Some(s) => writeln!(
                    stdout,
                    "cells={} acc_old={:.4} acc_new={:.4} delta={:+.4} se={:.4}",
                    s.cells, s.mean_acc_old, s.mean_acc_new, s.mean_delta, s.standard_error
                )
                .map_err(out),
                None => Err(CliError::Data("no cell had records inside its predicted window".into())),
            }
        }
        Command::Report(a) => report(&a, stdout),
        Command::Selftest(a) => selftest(&a, stdout),
    }
}

/// Integers print bare; everything else with two decimals.
pub fn fmt_num(x: f64) -> String {
    if (x - x.round()).abs() < 1e-9 {
        format!("{}", x.round() as i64)
    } else {
        format!("{x:.2}")
    }
}

fn load_regression(path: &Path) -> Result<RegressionFile, CliError> {
    RegressionFile::load(path)
        .map_err(io_at(path))?
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

pub fn gen_params(a: &GenArgs) -> Result<KParams, CliError> {
    let value = match &a.k_params {
        Some(text) => serde_json::from_str(text).map_err(|e| CliError::Data(format!("--k-params: {e}")))?,
        None => {
            let mut m = Map::new();
            let flags = [
                ("k_s", a.k_s),
                ("k_m", a.k_m),
                ("k_d", a.k_d),
                ("operators", a.operators),
                ("depth", a.depth),
                ("types", a.types),
                ("range", a.range),
                ("objects", a.objects),
                ("people", a.people),
            ];
            for (name, v) in flags {
                if let Some(v) = v {
                    m.insert(name.into(), json!(v));
                }
            }
            Value::Object(m)
        }
    };
    Ok(KParams::from_value(a.kind, &value)?)
}

fn gen(a: &GenArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let spec = ComplexitySpec::new(gen_params(a)?, a.n);
    spec.validate()?;
    let mut buf = Vec::new();
    for i in 0..a.count {
        let instance = generate_instance(&spec, derive_seed(a.seed, &spec, i, "gen"))?;
        serde_json::to_writer(&mut buf, &instance.to_line()).map_err(|e| CliError::Data(e.to_string()))?;
        buf.push(b'\n');
    }
    match &a.out {
        Some(path) => fs::write(path, buf).map_err(io_at(path)),
        None => stdout.write_all(&buf).map_err(io_at(Path::new("<stdout>"))),
    }
}

fn run(a: &RunArgs) -> Result<crate::harness::RunSummary, CliError> {
    let text = fs::read_to_string(&a.config).map_err(io_at(&a.config))?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| HarnessError::ConfigParse(e.to_string()))?;
    for o in &a.overrides {
        ExperimentConfig::apply_override(&mut value, o)?;
    }
    let config = ExperimentConfig::from_value(value)?;
    let reasoner = config.build_reasoner()?;
    Ok(run_experiment(&config, reasoner.as_ref(), a.resume)?)
}

fn analyze(data: &Path, out: &Path, options: AnalysisOptions) -> Result<AnalysisOutput, CliError> {
    let (_, records) = read_dataset(data)?;
    if records.is_empty() {
        return Err(AnalysisError::Insufficient(format!("{} holds no records", data.display())).into());
    }
    let analysis = analyze_records(&records, options);
    analysis.write(out).map_err(io_at(out))?;
    Ok(analysis)
}

fn print_analysis(a: &AnalysisOutput, w: &mut dyn Write) -> io::Result<()> {
    for p in &a.pairs {
        write!(w, "{} {}: records={} accuracy={:.4} chance={:.4}", p.key.model_id, p.key.kind, p.records, p.accuracy, p.chance)?;
        if !p.included {
            writeln!(w, " excluded (below chance gate)")?;
            continue;
        }
        match &p.correlations {
            Some(Ok(c)) => write!(w, " corr_n={:.3} corr_k={:.3}", c.corr_n, c.corr_k)?,
            Some(Err(e)) => write!(w, " correlations: {e}")?,
            None => {}
        }
        match &p.regression {
            Some(Ok(m)) => writeln!(w, " r2={:.3} epsilon={:.1}", m.r_squared, m.epsilon)?,
            Some(Err(e)) => writeln!(w, " regression: {e}")?,
            None => writeln!(w)?,
        }
    }
    Ok(())
}

fn report(a: &ReportArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let analysis = analyze(&a.data, &a.out, a.buckets.options())?;
    let (_, records) = read_dataset(&a.data)?;
    let cells = filter_records(&records, &analysis.regression);
    let path = a.out.join("filter_report.csv");
    write_filter_report(&path, &cells).map_err(io_at(&path))?;

    let mut md = String::from("# Critical-length report\n\n");
    md.push_str("| model | task | records | accuracy | chance | included | corr_n | corr_k | R² | ε | ΔAcc (in-sample) |\n");
    md.push_str("|---|---|---|---|---|---|---|---|---|---|---|\n");
    for p in &analysis.pairs {
        let (cn, ck) = match &p.correlations {
            Some(Ok(c)) => (format!("{:.3}", c.corr_n), format!("{:.3}", c.corr_k)),
            _ => ("n/a".into(), "n/a".into()),
        };
        let (r2, eps) = match &p.regression {
            Some(Ok(m)) => (format!("{:.3}", m.r_squared), format!("{:.1}", m.epsilon)),
            _ => ("n/a".into(), "n/a".into()),
        };
        let reports: Vec<_> = cells.iter().filter(|c| c.key == p.key).map(|c| c.report.clone()).collect();
        let delta = aggregate_filtering(&reports)
            .map(|s| format!("{:+.2} ± {:.2} pts", 100.0 * s.mean_delta, 100.0 * s.standard_error))
            .unwrap_or_else(|| "n/a".into());
        md.push_str(&format!(
            "| {} | {} | {} | {:.3} | {:.3} | {} | {cn} | {ck} | {r2} | {eps} | {delta} |\n",
            p.key.model_id,
            p.key.kind,
            p.records,
            p.accuracy,
            p.chance,
            if p.included { "yes" } else { "no" },
        ));
    }
    let path = a.out.join("report.md");
    fs::write(&path, &md).map_err(io_at(&path))?;
    stdout.write_all(md.as_bytes()).map_err(io_at(Path::new("<stdout>")))
}

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn selftest(a: &SelftestArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut checks = Vec::new();
    for kind in TaskKind::ALL {
        let grid = default_grid(kind);
        let mut mismatches = 0;
        let mut errors = 0;
        for i in 0..a.instances {
            let spec = grid[i as usize % grid.len()];
            match generate_instance(&spec, derive_seed(0x5e1f, &spec, i, "selftest")) {
                Ok(inst) => match oracle_solve(&inst) {
                    Ok(ans) if ans == inst.ground_truth => {}
                    Ok(_) => mismatches += 1,
                    Err(_) => errors += 1,
                },
                Err(_) => errors += 1,
            }
        }
        checks.push(Check {
            name: format!("agreement {kind}"),
            pass: mismatches == 0 && errors == 0,
            detail: format!("{} instances, {mismatches} mismatches, {errors} errors", a.instances),
        });
    }
    if !a.agreement_only {
        let dir = match &a.workdir {
            Some(d) => d.clone(),
            None => std::env::temp_dir().join(format!("critlen-selftest-{}", std::process::id())),
        };
        fs::create_dir_all(&dir).map_err(io_at(&dir))?;
        checks.push(decay_check(&dir)?);
        checks.push(correlation_check(&dir)?);
        if a.workdir.is_none() {
            let _ = fs::remove_dir_all(&dir);
        }
    }
    let w = |e: io::Error| CliError::Io { path: PathBuf::from("<stdout>"), source: e };
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        writeln!(stdout, "{:<width$}  {}  {}", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail).map_err(w)?;
    }
    match checks.iter().filter(|c| !c.pass).count() {
        0 => Ok(()),
        failed => Err(CliError::Selftest(failed)),
    }
}

fn mock_config(dir: &Path, name: &str, tasks: Value, samples: u32, reasoner: Value) -> Result<ExperimentConfig, CliError> {
    Ok(ExperimentConfig::from_value(json!({
        "version": 1,
        "tasks": tasks,
        "model_id": "mock",
        "samples_per_cell": samples,
        "seed": 20_240_601,
        "max_tokens": 100_000,
        "output_path": dir.join(format!("{name}.jsonl")),
        "parallelism": std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8),
        "reasoner": reasoner,
    }))?)
}

/// Injected d = 0.05 with a 1/81 guessing floor must be recovered by the decay fit.
fn decay_check(dir: &Path) -> Result<Check, CliError> {
    let ns = [1u32, 4, 8, 16, 24];
    let config = mock_config(
        dir,
        "decay",
        json!([{"kind": "index_tracking", "k_params": [{"k_s": 9, "k_m": 9}], "n": ns}]),
        2000,
        json!({"type": "mock", "noise": {"per_step_error": 0.05, "guess_baseline": 1.0 / 81.0, "verbosity": 2},
               "peak_length_coeffs": [20, 4], "window_width": 1e9, "derail_past_peak": 0.0}),
    )?;
    let reasoner = config.build_reasoner()?;
    run_experiment(&config, reasoner.as_ref(), false)?;
    let (_, records) = read_dataset(&config.output_path)?;
    let points: Vec<(u32, f64)> = ns
        .iter()
        .map(|&n| {
            let cell: Vec<_> = records.iter().filter(|r| r.instance.n == n).collect();
            (n, cell.iter().filter(|r| r.correct).count() as f64 / cell.len() as f64)
        })
        .collect();
    let fit = fit_decay(&points, 1.0 / 81.0)?;
    let monotone = points.windows(2).all(|w| w[1].1 <= w[0].1);
    Ok(Check {
        name: "decay recovery".into(),
        pass: (0.04..=0.06).contains(&fit.d_hat) && monotone,
        detail: format!("d_hat={:.4} (target 0.05), monotone={monotone}", fit.d_hat),
    })
}

/// Peak length 100 + 30·N with no k effect must show up as corr_n high, corr_k low.
fn correlation_check(dir: &Path) -> Result<Check, CliError> {
    let config = mock_config(
        dir,
        "correlation",
        json!([{"kind": "index_tracking",
                "k_params": [{"k_s": 3, "k_m": 3}, {"k_s": 5, "k_m": 3}, {"k_s": 7, "k_m": 3}],
                "n": [2, 4, 8, 12]}]),
        3000,
        json!({"type": "mock", "noise": {"per_step_error": 0.01, "guess_baseline": 0.05, "verbosity": 2},
               "peak_length_coeffs": [100, 30], "window_width": 15, "derail_past_peak": 0.004,
               "underthink_rate": 0.004, "length_spread": 0.6}),
    )?;
    let reasoner = config.build_reasoner()?;
    run_experiment(&config, reasoner.as_ref(), false)?;
    let (_, records) = read_dataset(&config.output_path)?;
    let analysis = analyze_records(&records, AnalysisOptions::default());
    let corr = analysis
        .pairs
        .first()
        .and_then(|p| p.correlations.clone())
        .ok_or_else(|| CliError::Data("mock pair was gated out".into()))?
        .map_err(CliError::Data)?;
    Ok(Check {
        name: "correlation recovery".into(),
        pass: corr.corr_n >= 0.9 && corr.corr_k.abs() <= 0.25,
        detail: format!("corr_n={:.3} (>= 0.9) corr_k={:.3} (|.| <= 0.25)", corr.corr_n, corr.corr_k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("critlen").chain(args.iter().copied());
        let code = dispatch(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn number_formatting() {
        assert_eq!(fmt_num(34.0), "34");
        assert_eq!(fmt_num(-2.0), "-2");
        assert_eq!(fmt_num(1.23456), "1.23");
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = call(&["gen", "--bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"), "{err}");
        assert_eq!(call(&[]).0, 2);
    }

    #[test]
    fn gen_counts_and_validates() {
        let (code, out, _) = call(&["gen", "--kind", "dyck", "--depth", "2", "--types", "4", "--n", "16", "--count", "10", "--seed", "7"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 10);
        let (code, _, err) = call(&["gen", "--kind", "dyck", "--depth", "2", "--n", "16"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error[TASK]"), "{err}");
        let (code, _, err) = call(&["gen", "--kind", "dyck", "--depth", "2", "--types", "2", "--objects", "3", "--n", "16"]);
        assert_eq!(code, 1, "{err}");
    }

    #[test]
    fn agreement_only_selftest() {
        let (code, out, err) = call(&["selftest", "--agreement-only", "--instances", "40"]);
        assert_eq!(code, 0, "{out}{err}");
        assert_eq!(out.lines().filter(|l| l.contains("PASS")).count(), TaskKind::ALL.len());
    }
}
