//! Command-line front end: reads spec and polygon files, runs the core
//! computations, and renders a [`ReportDocument`].

pub mod document;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use ttm_core::cohomology::cohomology_of_x;
use ttm_core::invariants::{euler_characteristic, fundamental_group};
use ttm_core::signature::signature_total;
use ttm_core::ttm::{delzant_to_spec, delzant_validate};
use ttm_core::{Error, TwistedToricSpec};

use document::{PolygonDocument, SpecDocument};
use report::{CohomologyRecord, ErrorKind, ErrorRecord, PresentationRecord, ReportDocument, SignatureRecord, ValidationRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ttm", version, about = "Invariants of twisted toric 4-manifolds")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a spec file and list every finding.
    Validate { file: PathBuf },
    /// Euler characteristic and fundamental group.
    Invariants { file: PathBuf },
    /// Integral cohomology of the total space.
    Cohomology {
        file: PathBuf,
        /// Include the E2 page.
        #[arg(long)]
        e2: bool,
    },
    /// Signature via the Meyer cocycle and the boundary necklace.
    Signature {
        file: PathBuf,
        /// Show each term of the computation.
        #[arg(long)]
        verbose: bool,
    },
    /// Delzant polygon utilities.
    #[command(subcommand)]
    Delzant(DelzantCommand),
}

#[derive(Subcommand, Debug)]
enum DelzantCommand {
    /// Check the rational, simple, and non-singular conditions.
    Check { file: PathBuf },
    /// Write the polygon's toric manifold as a spec file.
    Convert {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
}

/// Result of one invocation: exit code, report, and the text for stdout.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub report: ReportDocument,
    pub output: String,
}

struct Failure {
    code: i32,
    kind: ErrorKind,
    message: String,
}

impl Failure {
    fn invalid(kind: ErrorKind, message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INVALID,
            kind,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unsupported(message) => Failure {
                code: EXIT_UNSUPPORTED,
                kind: ErrorKind::Unsupported,
                message,
            },
            other => Failure::invalid(ErrorKind::Invalid, other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(ErrorKind::Io, format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<TwistedToricSpec, Failure> {
    let text = read(path)?;
    let doc = SpecDocument::parse(&text).map_err(|e| Failure::invalid(ErrorKind::Parse, format!("{}: {e}", path.display())))?;
    doc.to_spec().map_err(|e| Failure::invalid(ErrorKind::Parse, e.to_string()))
}

fn load_polygon(path: &Path) -> Result<PolygonDocument, Failure> {
    let text = read(path)?;
    PolygonDocument::parse(&text).map_err(|e| Failure::invalid(ErrorKind::Parse, format!("{}: {e}", path.display())))
}

/// Loads and validates; a failing validation is recorded and aborts.
fn checked_spec(path: &Path, report: &mut ReportDocument) -> Result<TwistedToricSpec, Failure> {
    let spec = load_spec(path)?;
    let validation = spec.validate();
    report.validation = Some(ValidationRecord::from(&validation));
    if !validation.valid {
        return Err(Failure::invalid(ErrorKind::Invalid, "the data fails validation"));
    }
    Ok(spec)
}

fn execute(command: &Command, report: &mut ReportDocument) -> Result<(), Failure> {
    match command {
        Command::Validate { file } => {
            checked_spec(file, report)?;
        }
        Command::Invariants { file } => {
            let spec = checked_spec(file, report)?;
            report.euler_characteristic = Some(euler_characteristic(&spec)?);
            report.fundamental_group = Some(PresentationRecord::from(&fundamental_group(&spec)?));
        }
        Command::Cohomology { file, e2 } => {
            let spec = checked_spec(file, report)?;
            report.cohomology = Some(CohomologyRecord::new(&cohomology_of_x(&spec)?, *e2));
        }
        Command::Signature { file, verbose } => {
            let spec = checked_spec(file, report)?;
            report.signature = Some(SignatureRecord::new(&signature_total(&spec)?, *verbose));
        }
        Command::Delzant(DelzantCommand::Check { file }) => {
            let poly = load_polygon(file)?.to_polygon().map_err(|e| Failure::invalid(ErrorKind::Parse, e.to_string()))?;
            let validation = delzant_validate(&poly)?;
            report.validation = Some(ValidationRecord::from(&validation));
            if !validation.valid {
                return Err(Failure::invalid(ErrorKind::Invalid, "the polygon is not Delzant"));
            }
        }
        Command::Delzant(DelzantCommand::Convert { file, output }) => {
            let poly = load_polygon(file)?.to_polygon().map_err(|e| Failure::invalid(ErrorKind::Parse, e.to_string()))?;
            let validation = delzant_validate(&poly)?;
            report.validation = Some(ValidationRecord::from(&validation));
            let spec = delzant_to_spec(&poly)?;
            let doc = SpecDocument::from_spec(&spec).map_err(|e| Failure::invalid(ErrorKind::Invalid, e.to_string()))?;
            fs::write(output, doc.to_json())
                .map_err(|e| Failure::invalid(ErrorKind::Io, format!("{}: {e}", output.display())))?;
            report.written = Some(output.display().to_string());
        }
    }
    Ok(())
}

fn describe(command: &Command) -> (&'static str, &Path) {
    match command {
        Command::Validate { file } => ("validate", file),
        Command::Invariants { file } => ("invariants", file),
        Command::Cohomology { file, .. } => ("cohomology", file),
        Command::Signature { file, .. } => ("signature", file),
        Command::Delzant(DelzantCommand::Check { file }) => ("delzant check", file),
        Command::Delzant(DelzantCommand::Convert { file, .. }) => ("delzant convert", file),
    }
}

/// Runs `argv` (program name first) without touching the process state.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_UNSUPPORTED } else { EXIT_OK };
            let mut report = ReportDocument {
                command: "ttm".into(),
                ..Default::default()
            };
            if e.use_stderr() {
                report.error = Some(ErrorRecord {
                    kind: ErrorKind::Usage,
                    message: e.to_string().trim_end().to_string(),
                });
            }
            return Outcome {
                code,
                report,
                output: e.to_string(),
            };
        }
    };
    let (name, input) = describe(&cli.command);
    let mut report = ReportDocument {
        command: name.into(),
        input: Some(input.display().to_string()),
        ..Default::default()
    };
    let code = match execute(&cli.command, &mut report) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            report.error = Some(ErrorRecord {
                kind: f.kind,
                message: f.message,
            });
            f.code
        }
    };
    let output = if cli.json { report.to_json() } else { report.to_string() };
    Outcome { code, report, output }
}
