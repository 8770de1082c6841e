//! `pcm`: command-line front end.
//!
//! Exit codes: 0 success, 1 violations found, 2 parse or validation error,
//! 3 disconnected graph, 4 solver failure.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pcm_core::completion::complete;
use pcm_core::io::{format_number, parse_dag, parse_matrix, parse_weights, write_dag, write_matrix};
use pcm_core::pipeline::{
    alpha_grid, run_pipeline, sweep_alpha, sweep_csv, PipelineReport, Theorem1Config, CSV_HEADER,
};
use pcm_core::violation::{check_ordinal_violation, Violation, ViolationKind};
use pcm_core::weighting::eigenvector_weights;
use pcm_core::{CompletionMethod, ErrorCategory, PcmError, PreferenceDag, WeightingMethod};

#[derive(Parser)]
#[command(name = "pcm", version, about = "Complete incomplete pairwise comparison matrices and audit the derived weights")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Intensity assigned to each arc when a DAG is turned into a matrix (> 1).
    #[arg(long, global = true, default_value_t = 2.0)]
    alpha: f64,
    /// Seed for random generation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Relative tolerance for equal weights of indifferent items.
    #[arg(long, global = true, default_value_t = pcm_core::violation::DEFAULT_EQ_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Fill the missing entries of a matrix file.
    Complete {
        file: PathBuf,
        #[arg(long, short, default_value = "lex")]
        method: CompletionMethod,
        /// Print the frozen triads of the lexicographic method.
        #[arg(long)]
        audit: bool,
        /// Write the completed matrix here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Derive weights from a complete matrix file.
    Weights {
        file: PathBuf,
        #[arg(long, short, default_value = "em")]
        method: WeightingMethod,
    },
    /// Audit a weight vector against the known entries of a matrix file.
    CheckViolations { matrix: PathBuf, weights: PathBuf },
    /// Completion, weighting and audit in one go.
    Pipeline {
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        dag: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, default_value = "lex")]
        completion: CompletionMethod,
        #[arg(long, default_value = "em")]
        weighting: WeightingMethod,
    },
    /// Generate a random connected DAG.
    GenDag {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check on random DAGs that lexicographic completion never yields violations.
    VerifyTheorem1 {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [2.0, 5.0, 9.0])]
        alphas: Vec<f64>,
    },
    /// Run the pipeline on a DAG for a grid of alphas.
    SweepAlpha {
        dag: PathBuf,
        #[arg(long, default_value = "gci")]
        completion: CompletionMethod,
        #[arg(long, default_value = "llsm")]
        weighting: WeightingMethod,
        #[arg(long, default_value_t = 1.1)]
        from: f64,
        #[arg(long, default_value_t = 10.0)]
        to: f64,
        #[arg(long, default_value_t = 0.1)]
        step: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Pcm(PcmError),
    Io(String),
    Usage(String),
}

impl From<PcmError> for Failure {
    fn from(e: PcmError) -> Self {
        Self::Pcm(e)
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Pcm(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.category() {
                ErrorCategory::Input => 2,
                ErrorCategory::Disconnected => 3,
                ErrorCategory::Solver => 4,
            })
        }
        Err(Failure::Io(msg)) | Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CmdResult {
    let g = cli.global;
    match cli.command {
        Command::Complete {
            file,
            method,
            audit,
            output,
        } => cmd_complete(&file, method, audit, output.as_deref()),
        Command::Weights { file, method } => cmd_weights(&g, &file, method),
        Command::CheckViolations { matrix, weights } => cmd_check(&g, &matrix, &weights),
        Command::Pipeline {
            dag,
            matrix,
            completion,
            weighting,
        } => cmd_pipeline(&g, dag.as_deref(), matrix.as_deref(), completion, weighting),
        Command::GenDag { n, density, output } => {
            let dag = PreferenceDag::random(n, density, g.seed)?;
            emit(output.as_deref(), &write_dag(&dag))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyTheorem1 {
            trials,
            n_min,
            n_max,
            alphas,
        } => cmd_verify(&g, trials, n_min, n_max, alphas),
        Command::SweepAlpha {
            dag,
            completion,
            weighting,
            from,
            to,
            step,
            output,
        } => cmd_sweep(&g, &dag, completion, weighting, (from, to, step), output.as_deref()),
    }
}

fn cmd_complete(file: &Path, method: CompletionMethod, audit: bool, output: Option<&Path>) -> CmdResult {
    let a = parse_matrix(&read(file)?)?;
    let done = complete(&a, method)?;
    let mut report = String::new();
    if audit {
        match &done.lex {
            Some(lex) => {
                for (s, obj) in lex.stage_objectives.iter().enumerate() {
                    let _ = writeln!(
                        report,
                        "# stage {} objective: ln={} log2={}",
                        s + 1,
                        format_number(*obj),
                        format_number(obj / std::f64::consts::LN_2)
                    );
                }
                for f in &lex.audit {
                    let _ = writeln!(
                        report,
                        "triad {}  TI={}  stage={}",
                        f.triad,
                        format_number(f.ti),
                        f.stage
                    );
                }
            }
            None => eprintln!("note: --audit only applies to --method lex"),
        }
    }
    let matrix = write_matrix(&done.matrix);
    match output {
        Some(_) => {
            print!("{report}");
            emit(output, &matrix)?;
        }
        None => print!("{report}{matrix}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_weights(g: &Global, file: &Path, method: WeightingMethod) -> CmdResult {
    let m = parse_matrix(&read(file)?)?.into_complete()?;
    let w = method.weights(&m)?;
    let mut out = String::new();
    match g.format {
        Format::Text => {
            for (i, v) in w.as_slice().iter().enumerate() {
                let _ = writeln!(out, "{} {}", i + 1, format_number(*v));
            }
            if method == WeightingMethod::Em {
                let lambda = eigenvector_weights(&m, Default::default())?.lambda_max;
                let _ = writeln!(out, "# lambda_max={}", format_number(lambda));
            }
        }
        Format::Csv => {
            out.push_str("item,weight\n");
            for (i, v) in w.as_slice().iter().enumerate() {
                let _ = writeln!(out, "{},{}", i + 1, format_number(*v));
            }
        }
    }
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn violation_lines(violations: &[Violation], format: Format) -> String {
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str("i,j,a_ij,w_i,w_j,kind\n");
    }
    for v in violations {
        let kind = match v.kind {
            ViolationKind::Reversed => "reversed",
            ViolationKind::Unequal => "unequal",
        };
        let _ = match format {
            Format::Text => writeln!(
                out,
                "violation ({},{})  a={}  w_i={}  w_j={}  {kind}",
                v.i + 1,
                v.j + 1,
                format_number(v.a_ij),
                format_number(v.w_i),
                format_number(v.w_j)
            ),
            Format::Csv => writeln!(
                out,
                "{},{},{},{},{},{kind}",
                v.i + 1,
                v.j + 1,
                format_number(v.a_ij),
                format_number(v.w_i),
                format_number(v.w_j)
            ),
        };
    }
    out
}

fn cmd_check(g: &Global, matrix: &Path, weights: &Path) -> CmdResult {
    let a = parse_matrix(&read(matrix)?)?;
    let w = parse_weights(&read(weights)?)?;
    let violations = check_ordinal_violation(&a, &w, g.tol)?;
    print!("{}", violation_lines(&violations, g.format));
    if g.format == Format::Text {
        println!("{} violation(s)", violations.len());
    }
    Ok(if violations.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_pipeline(
    g: &Global,
    dag: Option<&Path>,
    matrix: Option<&Path>,
    completion: CompletionMethod,
    weighting: WeightingMethod,
) -> CmdResult {
    let (a, alpha) = match (dag, matrix) {
        (Some(d), _) => (parse_dag(&read(d)?)?.to_incomplete_matrix(g.alpha)?, Some(g.alpha)),
        (None, Some(m)) => (parse_matrix(&read(m)?)?, None),
        (None, None) => return Err(Failure::Usage("one of --dag or --matrix is required".into())),
    };
    let r = run_pipeline(&a, completion, weighting, g.tol)?;
    print!("{}", pipeline_report(&r, alpha, g.format));
    Ok(ExitCode::SUCCESS)
}

fn pipeline_report(r: &PipelineReport, alpha: Option<f64>, format: Format) -> String {
    let s = &r.summary;
    let mut out = String::new();
    match format {
        Format::Csv => {
            let _ = writeln!(
                out,
                "{CSV_HEADER}\n{},{},{},{},{},{},{:.3}",
                alpha.map(format_number).unwrap_or_default(),
                r.method_pair(),
                r.violations.len(),
                format_number(s.max_ti),
                format_number(s.ki),
                format_number(s.lambda_max),
                r.runtime_ms
            );
        }
        Format::Text => {
            let _ = writeln!(out, "method: {}", r.method_pair());
            if let Some(a) = alpha {
                let _ = writeln!(out, "alpha: {}", format_number(a));
            }
            let w: Vec<String> = r.weights.as_slice().iter().map(|v| format_number(*v)).collect();
            let _ = writeln!(out, "weights: {}", w.join(" "));
            let theta: Vec<String> = s.theta_prefix.iter().map(|v| format_number(*v)).collect();
            let _ = writeln!(out, "max TI: {}", format_number(s.max_ti));
            let _ = writeln!(out, "KI: {}", format_number(s.ki));
            let _ = writeln!(out, "lambda_max: {}", format_number(s.lambda_max));
            let _ = writeln!(out, "largest TIs: {}", theta.join(" "));
            let _ = writeln!(out, "runtime: {:.3} ms", r.runtime_ms);
            let _ = writeln!(out, "violations: {}", r.violations.len());
            out.push_str(&violation_lines(&r.violations, Format::Text));
        }
    }
    out
}

fn cmd_verify(g: &Global, trials: usize, n_min: usize, n_max: usize, alphas: Vec<f64>) -> CmdResult {
    if trials == 0 || alphas.is_empty() || n_min < 2 || n_max < n_min {
        return Err(Failure::Usage(
            "need trials >= 1, at least one alpha and 2 <= n-min <= n-max".into(),
        ));
    }
    let cfg = Theorem1Config {
        trials,
        n_min,
        n_max,
        alphas,
        seed: g.seed,
        eq_tol: g.tol,
    };
    let summary = pcm_core::pipeline::verify_theorem1(&cfg);
    for c in &summary.counterexamples {
        println!(
            "COUNTEREXAMPLE trial={} alpha={} weighting={}",
            c.trial,
            format_number(c.alpha),
            c.weighting
        );
        print!("{}", write_dag(&c.dag));
        print!("{}", write_matrix(&c.completed));
        print!("{}", violation_lines(&c.violations, Format::Text));
    }
    for (trial, msg) in &summary.solver_failures {
        eprintln!("solver failure in trial {trial}: {msg}");
    }
    let violating: usize = summary.counterexamples.iter().map(|c| c.violations.len()).sum();
    let verdict = if summary.passed() { "PASS" } else { "FAIL" };
    match g.format {
        Format::Text => println!(
            "{verdict}: trials={} audits={} violating_audits={} violations={} solver_failures={}",
            summary.trials,
            summary.audits,
            summary.counterexamples.len(),
            violating,
            summary.solver_failures.len()
        ),
        Format::Csv => println!(
            "trials,audits,violating_audits,violations,solver_failures,verdict\n{},{},{},{},{},{verdict}",
            summary.trials,
            summary.audits,
            summary.counterexamples.len(),
            violating,
            summary.solver_failures.len()
        ),
    }
    Ok(if !summary.counterexamples.is_empty() {
        ExitCode::from(1)
    } else if !summary.solver_failures.is_empty() {
        ExitCode::from(4)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_sweep(
    g: &Global,
    dag: &Path,
    completion: CompletionMethod,
    weighting: WeightingMethod,
    (from, to, step): (f64, f64, f64),
    output: Option<&Path>,
) -> CmdResult {
    let dag = parse_dag(&read(dag)?)?;
    let rows = sweep_alpha(&dag, completion, weighting, &alpha_grid(from, to, step), g.tol);
    for r in &rows {
        if let Some(e) = &r.error {
            eprintln!("alpha={}: {e}", format_number(r.alpha));
        }
    }
    let text = match g.format {
        Format::Csv => sweep_csv(&rows),
        Format::Text => {
            let mut out = format!("{:>8}  {:>10}  {:>10}  {:>14}  {:>10}\n", "alpha", "violations", "max TI", "lambda_max", "ms");
            for r in &rows {
                let opt = |v: Option<f64>| v.map(format_number).unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    out,
                    "{:>8}  {:>10}  {:>10}  {:>14}  {:>10.3}",
                    format_number(r.alpha),
                    r.n_violations.map_or_else(|| "-".into(), |v| v.to_string()),
                    opt(r.max_ti),
                    opt(r.lambda_max),
                    r.runtime_ms
                );
            }
            out
        }
    };
    emit(output, &text)?;
    Ok(ExitCode::SUCCESS)
}
