//! Regression runs over a directory of job files with expected verdicts.

use std::path::{Path, PathBuf};
use std::time::Instant;

use atf_core::Verdict;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::CliError;
use crate::job::{Command, JobSpec};
use crate::run::{run_job, Options};

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub job: String,
    pub command: Command,
    pub expected: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_n: Option<u32>,
    pub got: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub ms: u64,
    pub pass: bool,
}

/// Loads every `*.json` job in `dir`, sorted by file name. Every job must
/// name its command and expected verdict.
pub fn load(dir: &Path) -> Result<Vec<(String, JobSpec)>, CliError> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut jobs = Vec::new();
    for p in paths {
        let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let job = JobSpec::load(&p)?;
        if job.command.is_none() {
            return Err(CliError::Input(format!("{name}: corpus jobs need a `command`")));
        }
        if job.expect.is_none() {
            return Err(CliError::Input(format!("{name}: missing expectation field `expect`")));
        }
        jobs.push((name, job));
    }
    Ok(jobs)
}

/// Runs the jobs concurrently; rows come back in input order.
pub fn run(jobs: &[(String, JobSpec)], opts: &Options) -> Vec<Row> {
    jobs.par_iter()
        .map(|(name, job)| {
            let command = job.command.expect("checked on load");
            let expected = job.expect.expect("checked on load");
            let start = Instant::now();
            let out = run_job(job, command, opts);
            let ms = if opts.timing { start.elapsed().as_millis() as u64 } else { 0 };
            let (got, witness_n, error) = match out {
                Ok(o) => (o.verdict, o.witness_n, None),
                Err(e) => (None, None, Some(e.to_string())),
            };
            let pass = got == Some(expected) && (job.expect_n.is_none() || job.expect_n == witness_n);
            Row {
                job: name.clone(),
                command,
                expected,
                expected_n: job.expect_n,
                got,
                witness_n,
                error,
                ms,
                pass,
            }
        })
        .collect()
}

pub fn table(rows: &[Row]) -> String {
    let width = rows.iter().map(|r| r.job.len()).max().unwrap_or(3).max(3);
    let mut out = format!("{:<width$}  {:<9}  {:<9}  {:<9}  status\n", "job", "command", "expected", "got");
    for r in rows {
        let command = serde_json::to_value(r.command)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        let got = match (&r.got, &r.error) {
            (Some(v), _) => v.to_string(),
            (None, Some(_)) => "error".into(),
            (None, None) => "-".into(),
        };
        let got = match r.witness_n {
            Some(n) => format!("{got}@{n}"),
            None => got,
        };
        let expected = match r.expected_n {
            Some(n) => format!("{}@{n}", r.expected),
            None => r.expected.to_string(),
        };
        let status = if r.pass { "PASS" } else { "FAIL" };
        out.push_str(&format!("{:<width$}  {command:<9}  {expected:<9}  {got:<9}  {status}", r.job));
        if let Some(e) = &r.error {
            out.push_str(&format!("  ({e})"));
        }
        out.push('\n');
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    out.push_str(&format!("{} jobs, {} passed, {} failed\n", rows.len(), rows.len() - failed, failed));
    out
}
