//! Command-line dispatch. The heavy lifting lives in the library modules;
//! this file maps files and flags onto them and their errors onto exit codes:
//! 0 success, 2 input error, 3 precondition violated (witness on stderr),
//! 4 size or budget limit, 5 a counterexample was found, 1 internal guard.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::audit::{run_audit, AuditReport};
use crate::classify::{classify, ClassReport};
use crate::dimension::{hybrid_dim, interval_dim, order_dim, semiorder_dim, DimCertificate};
use crate::error::Error;
use crate::extend::{
    interval_extension, linear_extension, linear_interval_decompose, linear_semiorder_decompose,
    semiorder_extension, strong_interval_extension, Decomposition, LinearMode, PartnerClass,
};
use crate::geometry::{
    box_embedding, interval_representation, triangle_representation, unit_interval_representation,
    GeometricRep,
};
use crate::io::{emit, parse_relation, Artifact, EmitFormat, ParseFormat};
use crate::realize::{realizer, MemberClass, Realizer};
use crate::relation::Relation;
use crate::Limits;

#[derive(Parser)]
#[command(
    name = "hybrid-order",
    version,
    about = "Order-class checks, extensions, decompositions, realizers, \
             dimensions, and geometric representations of finite relations"
)]
struct Cli {
    /// Output format for the primary artifact.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Write the primary artifact to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the ground-set caps of the search-based operations.
    #[arg(long, global = true)]
    max_n: Option<usize>,
    /// Override the node budget of the backtracking searches.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Dot,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExtendClass {
    Linear,
    Interval,
    StrongInterval,
    Semiorder,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Strict,
    Reflexive,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecomposeClass {
    LinearInterval,
    LinearSemiorder,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RealizeClass {
    StrictLinear,
    Linear,
    Interval,
    StrongInterval,
    Semiorder,
    LinearInterval,
    LinearSemiorder,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DimQuantity {
    Dim,
    Idim,
    Sdim,
    Lidim,
    Lsdim,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepKindArg {
    Interval,
    Unit,
    Triangle,
    UnitTriangle,
    #[value(name = "box")]
    BoxKind,
}

#[derive(Subcommand)]
enum Command {
    /// Print the full order-class report of a relation.
    Check { file: PathBuf },
    /// Build a verified extension in the given class.
    Extend {
        #[arg(long = "class", value_enum)]
        class: ExtendClass,
        /// Strict or reflexive output for the linear class.
        #[arg(long, value_enum, default_value_t = Mode::Strict)]
        mode: Mode,
        file: PathBuf,
    },
    /// Decompose an acyclic relation into a linear part and a partner.
    Decompose {
        #[arg(long = "class", value_enum)]
        class: DecomposeClass,
        file: PathBuf,
    },
    /// Build a verified realizer with members of the given class.
    Realize {
        #[arg(long = "class", value_enum)]
        class: RealizeClass,
        file: PathBuf,
    },
    /// Compute an exact dimension with a certified witness realizer.
    Dim {
        #[arg(long, value_enum)]
        quantity: DimQuantity,
        file: PathBuf,
    },
    /// Build a verified geometric representation.
    Represent {
        #[arg(long, value_enum)]
        kind: RepKindArg,
        file: PathBuf,
    },
    /// Re-check a structural claim on seeded random instances.
    Audit {
        #[arg(long)]
        theorem: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Output {
    Relation(Relation),
    ClassReport(ClassReport),
    Decomposition(Decomposition),
    Realizer(Realizer),
    Certificate(DimCertificate),
    Geometry(GeometricRep),
    Audit(AuditReport),
}

impl Output {
    fn artifact(&self) -> Artifact<'_> {
        match self {
            Output::Relation(r) => Artifact::Relation(r),
            Output::ClassReport(c) => Artifact::ClassReport(c),
            Output::Decomposition(d) => Artifact::Decomposition(d),
            Output::Realizer(r) => Artifact::Realizer(r),
            Output::Certificate(c) => Artifact::Certificate(c),
            Output::Geometry(g) => Artifact::Geometry(g),
            Output::Audit(a) => Artifact::Audit(a),
        }
    }
}

fn load_relation(path: &Path) -> Result<Relation, Error> {
    let text = std::fs::read_to_string(path)?;
    let format = if path.extension().is_some_and(|e| e == "json")
        || text.trim_start().starts_with('{')
    {
        ParseFormat::Json
    } else {
        ParseFormat::Edgelist
    };
    parse_relation(&text, format)
}

fn execute(cli: &Cli) -> Result<Output, Error> {
    let mut limits = Limits::default();
    if let Some(n) = cli.max_n {
        limits.max_n_order = n;
        limits.max_n_pool = n;
    }
    if let Some(b) = cli.budget {
        limits.search_budget = b;
    }
    match &cli.command {
        Command::Check { file } => Ok(Output::ClassReport(classify(&load_relation(file)?))),
        Command::Extend { class, mode, file } => {
            let r = load_relation(file)?;
            let ext = match class {
                ExtendClass::Linear => linear_extension(
                    &r,
                    match mode {
                        Mode::Strict => LinearMode::Strict,
                        Mode::Reflexive => LinearMode::Reflexive,
                    },
                )?,
                ExtendClass::Interval => interval_extension(&r)?,
                ExtendClass::StrongInterval => strong_interval_extension(&r)?,
                ExtendClass::Semiorder => semiorder_extension(&r)?,
            };
            Ok(Output::Relation(ext))
        }
        Command::Decompose { class, file } => {
            let r = load_relation(file)?;
            let d = match class {
                DecomposeClass::LinearInterval => linear_interval_decompose(&r, &limits)?,
                DecomposeClass::LinearSemiorder => linear_semiorder_decompose(&r, &limits)?,
            };
            Ok(Output::Decomposition(d))
        }
        Command::Realize { class, file } => {
            let r = load_relation(file)?;
            let cls = match class {
                RealizeClass::StrictLinear => MemberClass::StrictLinear,
                RealizeClass::Linear => MemberClass::Linear,
                RealizeClass::Interval => MemberClass::IntervalOrder,
                RealizeClass::StrongInterval => MemberClass::StrongInterval,
                RealizeClass::Semiorder => MemberClass::Semiorder,
                RealizeClass::LinearInterval => MemberClass::LinearInterval,
                RealizeClass::LinearSemiorder => MemberClass::LinearSemiorder,
            };
            Ok(Output::Realizer(realizer(&r, cls, &limits)?))
        }
        Command::Dim { quantity, file } => {
            let r = load_relation(file)?;
            let cert = match quantity {
                DimQuantity::Dim => order_dim(&r, &limits)?,
                DimQuantity::Idim => interval_dim(&r, &limits)?,
                DimQuantity::Sdim => semiorder_dim(&r, &limits)?,
                DimQuantity::Lidim => hybrid_dim(&r, PartnerClass::IntervalOrder, &limits)?,
                DimQuantity::Lsdim => hybrid_dim(&r, PartnerClass::Semiorder, &limits)?,
            };
            Ok(Output::Certificate(cert))
        }
        Command::Represent { kind, file } => {
            let r = load_relation(file)?;
            let rep = match kind {
                RepKindArg::Interval => interval_representation(&r)?,
                RepKindArg::Unit => unit_interval_representation(&r)?,
                RepKindArg::Triangle => {
                    triangle_representation(&r, PartnerClass::IntervalOrder, &limits)?
                }
                RepKindArg::UnitTriangle => {
                    triangle_representation(&r, PartnerClass::Semiorder, &limits)?
                }
                RepKindArg::BoxKind => {
                    let real = realizer(&r, MemberClass::IntervalOrder, &limits)?;
                    box_embedding(&r, &real, &limits)?
                }
            };
            Ok(Output::Geometry(rep))
        }
        Command::Audit {
            theorem,
            n,
            count,
            seed,
        } => Ok(Output::Audit(run_audit(theorem, *n, *count, *seed, &limits)?)),
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. }
        | Error::UnknownElement { .. }
        | Error::DuplicateElement { .. }
        | Error::UnsupportedCombination(_)
        | Error::GroundSetMismatch
        | Error::EmptyFamily
        | Error::PairOutOfBounds { .. }
        | Error::MemberNotLinear { .. }
        | Error::Io(_)
        | Error::Json(_) => 2,
        Error::CyclicInput(_)
        | Error::SymmetricPair(_)
        | Error::NotReflexive { .. }
        | Error::NotIntervalOrder(_)
        | Error::NotSemiorder(_) => 3,
        Error::SizeLimit { .. } | Error::SearchBudgetExhausted { .. } => 4,
        Error::NoDecompositionFound { .. } => 5,
        Error::InfeasibleSystem
        | Error::InternalSaturationCycle
        | Error::InternalOperatorFailure(_)
        | Error::RealizerInvalid { .. }
        | Error::MemberConstructionFailed(..) => 1,
    }
}

/// Testable entry point: parses `args`, runs the command, writes the
/// artifact and diagnostics, and returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 2;
            }
            // --help / --version go to stdout with success.
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    let output = match execute(&cli) {
        Ok(output) => output,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let format = match cli.format {
        OutputFormat::Json => EmitFormat::Json,
        OutputFormat::Dot => EmitFormat::Dot,
        OutputFormat::Svg => EmitFormat::Svg,
    };
    let text = match emit(output.artifact(), format) {
        Ok(text) => text,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    } else if stdout.write_all(text.as_bytes()).is_err() {
        return 2;
    }
    if let Output::Audit(report) = &output {
        if report.failures > 0 {
            let _ = writeln!(
                stderr,
                "audit found {} counterexample(s) for {}",
                report.failures, report.theorem
            );
            return 5;
        }
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let full: Vec<&str> = std::iter::once("hybrid-order").chain(args.iter().copied()).collect();
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn write_fixture(dir: &tempfile::TempDir, name: &str, content: &str) -> String {
        let path = dir.path().join(name);
        std::fs::write(&path, content).unwrap();
        path.to_string_lossy().into_owned()
    }

    #[test]
    fn check_reports_interval_failure() {
        let dir = tempfile::tempdir().unwrap();
        let file = write_fixture(
            &dir,
            "two_plus_two.json",
            r#"{"elements":["x1","x2","x3","x4"],"pairs":[["x1","x2"],["x3","x4"]]}"#,
        );
        let (code, out, _) = run_cli(&["check", &file]);
        assert_eq!(code, 0);
        assert!(out.contains("\"interval_order\": false"));
        // Witness quadruple is serialized with the report.
        assert!(out.contains("\"kind\": \"two_plus_two\""));
    }

    #[test]
    fn dim_lidim_of_two_plus_two() {
        let dir = tempfile::tempdir().unwrap();
        let file = write_fixture(&dir, "r.json", r#"{"elements":["x1","x2","x3","x4"],"pairs":[["x1","x2"],["x3","x4"]]}"#);
        let (code, out, _) = run_cli(&["dim", "--quantity", "lidim", &file]);
        assert_eq!(code, 0);
        assert!(out.contains("\"value\": [\n    2,\n    0\n  ]"));
    }

    #[test]
    fn cyclic_input_exits_three_with_witness() {
        let dir = tempfile::tempdir().unwrap();
        let file = write_fixture(&dir, "cyc.txt", "a b\nb a\n");
        let (code, _, err) = run_cli(&["extend", "--class", "linear", &file]);
        assert_eq!(code, 3);
        assert!(err.contains("cycle"));
    }

    #[test]
    fn missing_file_exits_two() {
        let (code, _, err) = run_cli(&["check", "/nonexistent/file.json"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }

    #[test]
    fn size_limit_exits_four() {
        let dir = tempfile::tempdir().unwrap();
        let doc = crate::io::RelationDocument {
            name: None,
            elements: (1..=7).map(|i| format!("x{i}")).collect(),
            pairs: vec![],
        };
        let file = write_fixture(&dir, "big.json", &serde_json::to_string(&doc).unwrap());
        let (code, _, _) = run_cli(&["dim", "--quantity", "idim", &file]);
        assert_eq!(code, 4);
    }

    #[test]
    fn audit_counterexamples_exit_five() {
        let (code, out, err) = run_cli(&[
            "audit",
            "--theorem",
            "3.7-literal",
            "--n",
            "6",
            "--count",
            "50",
            "--seed",
            "1",
        ]);
        assert_eq!(code, 5);
        assert!(out.contains("counterexamples"));
        assert!(err.contains("counterexample"));
    }

    #[test]
    fn out_flag_writes_file() {
        let dir = tempfile::tempdir().unwrap();
        let file = write_fixture(&dir, "r.txt", "x1 x2\n");
        let target = dir.path().join("out.json");
        let (code, out, _) = run_cli(&[
            "check",
            &file,
            "--out",
            &target.to_string_lossy(),
        ]);
        assert_eq!(code, 0);
        assert!(out.is_empty());
        assert!(std::fs::read_to_string(target).unwrap().contains("strict_linear_order"));
    }
}
