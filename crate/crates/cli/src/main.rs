use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use efa_core::corroborate::enclosure_violations;
use efa_core::input::{parse_input, EFunctionInput};
use efa_core::pipeline::{analyze, min_operator, Analysis, Config};
use efa_core::report::{build_report, verify_report, AnalysisReport};
use efa_core::{min_inhomog, EfaError};

/// Transcendence of E-functions and their algebraic values at algebraic points.
#[derive(Parser)]
#[command(name = "efa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Coefficient degree cap for the minimal-operator search [default: 4 deg L + 16].
    #[arg(long)]
    degree_cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run all steps and print the exceptional points.
    Analyze {
        /// Input JSON file (optional with --verify).
        input: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
        /// Order to which L_min f is checked to vanish.
        #[arg(long, default_value_t = 200)]
        series_check_order: usize,
        /// Stop at direct relations instead of completing the singularity removal.
        #[arg(long)]
        fast: bool,
        /// Working precision of the numeric corroboration.
        #[arg(long, default_value_t = 50)]
        digits: usize,
        /// Write the full JSON report with certificates here.
        #[arg(long, value_name = "PATH")]
        emit_certificate: Option<PathBuf>,
        /// Re-verify a previously emitted report instead of analyzing.
        #[arg(long, value_name = "REPORT")]
        verify: Option<PathBuf>,
        /// Print the JSON report on stdout.
        #[arg(long)]
        json: bool,
    },
    /// Minimal homogeneous operator only.
    MinOp {
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Minimal inhomogeneous relation and the transcendence verdict.
    MinInhom {
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Exceptional points of f (or of its j-th derivative).
    Exceptional {
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        fast: bool,
        /// Report the algebraic values of f^(j) instead of f.
        #[arg(long, default_value_t = 0)]
        derivative: usize,
    },
}

const EXIT_VALIDATION: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;

fn fail(e: &EfaError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(match e {
        EfaError::Validation { .. } | EfaError::Parse(_) | EfaError::Io(_) => EXIT_VALIDATION,
        EfaError::CapExhausted(_) => EXIT_CAP,
        EfaError::Inconsistency(_) | EfaError::DivisionByZero => EXIT_INCONSISTENT,
    })
}

fn load(path: &Path) -> Result<EFunctionInput, EfaError> {
    parse_input(path)
}

fn print_points(label: &str, pts: &[efa_core::desingular::ExceptionalPoint], digits: usize) {
    for e in pts {
        println!("  {label}({}) = {}", e.alpha.describe(digits), e.value.describe(digits));
    }
}

fn print_summary(a: &Analysis, report: &AnalysisReport) {
    println!("minimal operator: {}", a.min_op.op);
    if a.min_op.minimal_within_cap {
        println!("  (minimal among coefficient degrees <= {})", a.min_op.degree_cap);
    }
    println!("minimal inhomogeneous order s = {}, c = {}", a.inhom.s, a.inhom.c);
    let verdict = efa_core::report::verdict_of(a);
    println!("verdict: {verdict}");
    if let min_inhomog::Verdict::Polynomial(p) = &a.verdict {
        println!("f = {p}: algebraic at every algebraic point");
        return;
    }
    if let Some(sys) = &a.system {
        println!("u_0 = {}", sys.u0());
    }
    if let Some(reason) = &a.partial {
        println!("partial result: {reason}");
        return;
    }
    println!("exceptional points (f(alpha) algebraic):");
    print_points("f", &a.exceptional, 20);
    for (j, pts) in &a.derivative_exceptional {
        println!("algebraic values of f^({j}):");
        print_points(&format!("f^({j})"), pts, 20);
    }
    if let Some(d) = &a.decomposition {
        let parts: Vec<String> = d.parts.iter().map(|(h, m)| format!("({h})^{m}")).collect();
        println!("f = {} + {} g(z), g an E-function", d.p, parts.join(" "));
    }
    let failed: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
    println!("certificate checks: {} passed, {} failed", report.checks.len() - failed.len(), failed.len());
    for c in failed {
        println!("  FAILED {}: {}", c.name, c.detail);
    }
}

fn run_verify(input: Option<&Path>, report_path: &Path) -> ExitCode {
    let text = match std::fs::read_to_string(report_path) {
        Ok(t) => t,
        Err(e) => return fail(&e.into()),
    };
    let report = match AnalysisReport::from_json(&text) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    if let Some(path) = input {
        match load(path) {
            Ok(inp) if inp.doc == report.input => {}
            Ok(_) => {
                eprintln!("error: the report was produced for a different input");
                return ExitCode::from(EXIT_INCONSISTENT);
            }
            Err(e) => return fail(&e),
        }
    }
    let checks = match verify_report(&report) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let mut ok = true;
    for c in &checks {
        println!("{} {}{}", if c.passed { "ok  " } else { "FAIL" }, c.name, if c.detail.is_empty() { String::new() } else { format!(": {}", c.detail) });
        ok &= c.passed;
    }
    if !ok {
        return ExitCode::from(EXIT_INCONSISTENT);
    }
    if report.is_partial() {
        return ExitCode::from(EXIT_CAP);
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze { input, search, series_check_order, fast, digits, emit_certificate, verify, json } => {
            if let Some(report_path) = verify {
                return run_verify(input.as_deref(), &report_path);
            }
            let Some(path) = input else {
                eprintln!("error: an input file is required unless --verify is given");
                return ExitCode::from(EXIT_VALIDATION);
            };
            let inp = match load(&path) {
                Ok(i) => i,
                Err(e) => return fail(&e),
            };
            let config = Config { degree_cap: search.degree_cap, series_check_order, fast, digits, ..Config::default() };
            let a = match analyze(&inp, &config) {
                Ok(a) => a,
                Err(e) => return fail(&e),
            };
            let report = build_report(&inp, &a, &config);
            if let Some(out) = emit_certificate {
                if let Err(e) = std::fs::write(&out, report.to_json()) {
                    return fail(&e.into());
                }
            }
            if json {
                println!("{}", report.to_json());
            } else {
                print_summary(&a, &report);
            }
            let violations = enclosure_violations(&report.corroboration);
            if !violations.is_empty() || report.checks.iter().any(|c| !c.passed) {
                for v in violations {
                    eprintln!("error: numeric enclosure at {} excludes the claimed value ({})", v.point, v.detail);
                }
                return ExitCode::from(EXIT_INCONSISTENT);
            }
            if report.is_partial() {
                return ExitCode::from(EXIT_CAP);
            }
            ExitCode::SUCCESS
        }
        Command::MinOp { input, search } => {
            let inp = match load(&input) {
                Ok(i) => i,
                Err(e) => return fail(&e),
            };
            let r = min_operator(&inp, &Config { degree_cap: search.degree_cap, ..Config::default() });
            println!("{}", r.op);
            println!("order {}, candidates rejected {}", r.op.order(), r.rejected);
            if r.minimal_within_cap {
                println!("minimal among coefficient degrees <= {}", r.degree_cap);
            }
            ExitCode::SUCCESS
        }
        Command::MinInhom { input, search } => {
            let inp = match load(&input) {
                Ok(i) => i,
                Err(e) => return fail(&e),
            };
            let config = Config { degree_cap: search.degree_cap, ..Config::default() };
            let r = min_operator(&inp, &config);
            let eq = match min_inhomog::minimal_inhomogeneous(&r.op, &inp.series, config.relation_check_order) {
                Ok(eq) => eq,
                Err(e) => return fail(&e),
            };
            let terms: Vec<String> = eq.q.iter().enumerate().map(|(j, q)| format!("({q}) f^({j})")).collect();
            println!("{} = {}", eq.c, terms.join(" + "));
            match min_inhomog::transcendence_verdict(&eq) {
                min_inhomog::Verdict::Polynomial(p) => println!("polynomial: f = {p}"),
                min_inhomog::Verdict::Transcendental => {
                    println!("transcendental, s = {}", eq.s);
                    println!("u_0 = {}", min_inhomog::normalize(&eq).u0());
                }
            }
            ExitCode::SUCCESS
        }
        Command::Exceptional { input, search, fast, derivative } => {
            let inp = match load(&input) {
                Ok(i) => i,
                Err(e) => return fail(&e),
            };
            let config = Config { degree_cap: search.degree_cap, fast, ..Config::default() };
            let a = match analyze(&inp, &config) {
                Ok(a) => a,
                Err(e) => return fail(&e),
            };
            if let min_inhomog::Verdict::Polynomial(p) = &a.verdict {
                println!("f = {p} is a polynomial: algebraic at every algebraic point");
                return ExitCode::SUCCESS;
            }
            if let Some(reason) = &a.partial {
                println!("partial result: {reason}");
                return ExitCode::from(EXIT_CAP);
            }
            if derivative == 0 {
                print_points("f", &a.exceptional, 20);
            } else if let Some((_, pts)) = a.derivative_exceptional.iter().find(|(j, _)| *j == derivative) {
                print_points(&format!("f^({derivative})"), pts, 20);
            } else {
                eprintln!("error: derivative order must be below s = {}", a.inhom.s);
                return ExitCode::from(EXIT_VALIDATION);
            }
            ExitCode::SUCCESS
        }
    }
}
