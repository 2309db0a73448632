//! `atf`: run jobs on ideal pairs and emit certificates.
//!
//! Exit codes: 0 TRUE, 1 FALSE, 2 UNDECIDED, 3 input error. Commands that
//! only print a presentation exit with 0 on success.

mod corpus;
mod error;
mod job;
mod run;
mod store;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use atf_core::Certificate;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::error::CliError;
use crate::job::{Command, JobSpec};
use crate::run::{run_job, Options};
use crate::store::DiskStore;

#[derive(Parser)]
#[command(name = "atf", version, about = "Exact checks of the Aluffi torsion-free property")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether J ⊆ I is torsion-free (exactly, or up to N with --truncated)
    Check(JobArgs),
    /// Strongly torsion-free test along the generator order of J
    Strong(JobArgs),
    /// Rees algebra presentation of I
    Rees(JobArgs),
    /// Symmetric algebra presentation of I
    Sym(JobArgs),
    /// Aluffi algebra presentation of J ⊆ I
    Aluffi(JobArgs),
    /// Standard-base test of J in the associated graded ring of I
    Grform(JobArgs),
    /// Vanishing of (J ∩ I^n) / J I^{n-1} for one n
    Vv(JobArgs),
    /// Jacobian ideal of J
    Jacobian(JobArgs),
    /// Print the ideals a job defines
    Family(JobArgs),
    /// Run the structural criterion named in the job
    Criterion(JobArgs),
    /// Run every job in a directory and compare with the expected verdicts
    Corpus(CorpusArgs),
    /// Re-check the witnesses of a certificate by membership tests
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Time budget in milliseconds; running out gives UNDECIDED
    #[arg(long)]
    budget_ms: Option<u64>,
    /// Directory for cached Gröbner bases
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Write the JSON result here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock times (output is then no longer reproducible)
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct JobArgs {
    #[arg(long)]
    job: PathBuf,
    /// Truncation degree, overriding the job's `N`
    #[arg(long = "N", value_name = "N")]
    max_n: Option<u32>,
    /// For check: compare degrees 1..N only
    #[arg(long)]
    truncated: bool,
    /// For strong: try every generator order
    #[arg(long)]
    all_orders: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long)]
    dir: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    cert: PathBuf,
    #[command(flatten)]
    common: Common,
}

fn options(c: &Common, max_n: Option<u32>) -> Result<Options, CliError> {
    if c.budget_ms == Some(0) {
        return Err(CliError::Input("--budget-ms must be positive".into()));
    }
    if max_n == Some(0) {
        return Err(CliError::Input("--N must be at least 1".into()));
    }
    let store = match &c.cache {
        Some(dir) => {
            let s = DiskStore::open(dir)
                .map_err(|e| CliError::Io(format!("cannot open cache {}: {e}", dir.display())))?;
            Some(Arc::new(s) as Arc<dyn atf_core::BasisStore>)
        }
        None => None,
    };
    Ok(Options {
        max_n,
        budget_ms: c.budget_ms,
        timing: c.timing,
        store,
    })
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match writeln!(out, "{text}") {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    Err(CliError::Io(format!("cannot write output: {e}")))
                }
                _ => Ok(()),
            }
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn job_command(cmd: Command, a: JobArgs) -> Result<u8, CliError> {
    let opts = options(&a.common, a.max_n)?;
    let mut job = JobSpec::load(&a.job)?;
    job.truncated |= a.truncated;
    job.all_orders |= a.all_orders;
    let out = run_job(&job, cmd, &opts)?;
    emit(&pretty(&out.doc), a.common.out.as_deref())?;
    Ok(out.code)
}

fn corpus_command(a: CorpusArgs) -> Result<u8, CliError> {
    let opts = options(&a.common, None)?;
    let jobs = corpus::load(&a.dir)?;
    let rows = corpus::run(&jobs, &opts);
    emit(corpus::table(&rows).trim_end(), None)?;
    if let Some(p) = &a.common.out {
        emit(&pretty(&json!({ "rows": rows })), Some(p))?;
    }
    Ok(if rows.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn verify_command(a: VerifyArgs) -> Result<u8, CliError> {
    let opts = options(&a.common, None)?;
    let text = std::fs::read_to_string(&a.cert)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", a.cert.display())))?;
    let cert: Certificate = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", a.cert.display())))?;
    let problems = run::verify(&cert, &opts)?;
    let doc = json!({
        "check": cert.check,
        "verdict": cert.verdict,
        "valid": problems.is_empty(),
        "problems": problems,
    });
    emit(&pretty(&doc), a.common.out.as_deref())?;
    Ok(if problems.is_empty() { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.cmd {
        Cmd::Check(a) => job_command(Command::Check, a),
        Cmd::Strong(a) => job_command(Command::Strong, a),
        Cmd::Rees(a) => job_command(Command::Rees, a),
        Cmd::Sym(a) => job_command(Command::Sym, a),
        Cmd::Aluffi(a) => job_command(Command::Aluffi, a),
        Cmd::Grform(a) => job_command(Command::Grform, a),
        Cmd::Vv(a) => job_command(Command::Vv, a),
        Cmd::Jacobian(a) => job_command(Command::Jacobian, a),
        Cmd::Family(a) => job_command(Command::Family, a),
        Cmd::Criterion(a) => job_command(Command::Criterion, a),
        Cmd::Corpus(a) => corpus_command(a),
        Cmd::Verify(a) => verify_command(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
