//! The `opuc` command line.
//!
//! ```text
//! opuc <moments|verblunsky|scattering|baxter-check|product-check|extend>
//!      --config <path> [--out <dir>] [--n <int>] [--quadrature <int|auto>] [--window <lo:hi>]
//! ```
//!
//! Exit codes: 0 when every verdict passes, 2 on any failing verdict, 3 on
//! any inconclusive verdict, 1 on errors.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{compute_moments, levinson, Quadrature};
use crate::error::OpucError;
use crate::lab::report::alpha_table_csv;
use crate::lab::{
    baxter_check, bernstein_check, extend_baxter, product_check, BaxterReport, LabSettings,
    Verdict, VerdictStatus, Window,
};
use crate::scattering::{error_profile, log_weight_coeffs, predict_alphas, ErrorProfile, ScatteringData};

use config::{Case, RunConfig};
use output::{coefficient_csv, config_hash, json_document, write_atomic, Meta};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "opuc", version, about = "Numerical lab for orthogonal polynomials on the unit circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Truncation order N (overrides the config).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Quadrature size M, a power of two, or "auto".
    #[arg(long, global = true)]
    quadrature: Option<Quadrature>,
    /// Fit window `lo:hi`.
    #[arg(long, global = true)]
    window: Option<Window>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Moment table of each weight.
    Moments,
    /// Verblunsky coefficients of each weight.
    Verblunsky,
    /// f_+, f_-, S and the prediction error profile.
    Scattering,
    /// Classical and crucial equivalences; Bernstein check when `bernstein_p` is set.
    BaxterCheck,
    /// Decay of products of weights.
    ProductCheck,
    /// Pole removal for R > 1.
    Extend,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Moments => "moments",
            Command::Verblunsky => "verblunsky",
            Command::Scattering => "scattering",
            Command::BaxterCheck => "baxter-check",
            Command::ProductCheck => "product-check",
            Command::Extend => "extend",
        }
    }
}

/// Files and verdicts produced by one case.
struct CaseOutput {
    id: String,
    files: Vec<(String, Vec<u8>)>,
    statuses: Vec<VerdictStatus>,
}

#[derive(Serialize)]
struct SummaryEntry<'a> {
    id: &'a str,
    files: Vec<&'a str>,
    statuses: &'a [VerdictStatus],
}

#[derive(Serialize)]
struct Summary<'a> {
    config_hash: &'a str,
    subcommand: &'a str,
    #[serde(rename = "N")]
    n: usize,
    exit_code: i32,
    cases: Vec<SummaryEntry<'a>>,
}

struct Context {
    command: Command,
    hash: String,
    settings: LabSettings,
    config: RunConfig,
}

impl Context {
    fn meta(&self, id: &str, m: usize) -> Meta {
        Meta {
            config_hash: self.hash.clone(),
            subcommand: self.command.name().into(),
            weight_id: id.into(),
            n: self.settings.n,
            m,
            quadrature: self.settings.quadrature,
            window: self.settings.window(),
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("opuc: {msg}");
            EXIT_ERROR
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, String> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("OPUC_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("OPUC_THREADS must be a positive integer, got {v:?}"))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| e.to_string())
}

fn execute(cli: Cli) -> Result<i32, String> {
    let path = cli
        .config
        .ok_or_else(|| "missing required option --config <path>".to_string())?;
    let bytes = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let text = std::str::from_utf8(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut config = RunConfig::parse(text)?;
    if let Some(n) = cli.n {
        config.n = n;
    }
    if let Some(q) = cli.quadrature {
        config.quadrature = q;
    }
    if let Some(w) = cli.window {
        config.window = Some(w);
    }
    let cases = config.resolve()?;
    let selected: Vec<Case> = match &config.cases {
        Some(ids) => ids
            .iter()
            .map(|id| cases.iter().find(|c| &c.id == id).cloned().expect("checked"))
            .collect(),
        None => cases.clone(),
    };
    let out_dir = cli
        .out
        .or_else(|| config.out.clone())
        .unwrap_or_else(|| PathBuf::from("opuc-out"));
    std::fs::create_dir_all(&out_dir).map_err(|e| format!("{}: {e}", out_dir.display()))?;

    let settings = LabSettings {
        n: config.n,
        quadrature: config.quadrature,
        window: config.window,
    };
    let ctx = Context {
        command: cli.command,
        hash: config_hash(&bytes),
        settings,
        config,
    };

    let jobs: Vec<Job> = match ctx.command {
        Command::ProductCheck => product_pairs(&ctx, &cases, &selected),
        _ => selected.into_iter().map(Job::Single).collect(),
    };
    let pool = thread_pool()?;
    let results: Vec<Result<CaseOutput, String>> =
        pool.install(|| jobs.par_iter().map(|job| run_job(&ctx, job)).collect());
    let outputs = results.into_iter().collect::<Result<Vec<_>, String>>()?;

    for out in &outputs {
        for (name, bytes) in &out.files {
            write_atomic(&out_dir, name, bytes)?;
        }
    }
    let code = exit_code(outputs.iter().flat_map(|o| o.statuses.iter().copied()));
    let summary = Summary {
        config_hash: &ctx.hash,
        subcommand: ctx.command.name(),
        n: ctx.settings.n,
        exit_code: code,
        cases: outputs
            .iter()
            .map(|o| SummaryEntry {
                id: &o.id,
                files: o.files.iter().map(|f| f.0.as_str()).collect(),
                statuses: &o.statuses,
            })
            .collect(),
    };
    let mut doc = serde_json::to_vec_pretty(&summary).map_err(|e| e.to_string())?;
    doc.push(b'\n');
    write_atomic(&out_dir, "summary.json", &doc)?;
    for o in &outputs {
        if !o.statuses.is_empty() {
            let list: Vec<String> = o.statuses.iter().map(|s| status_name(*s)).collect();
            println!("{}: {}", o.id, list.join(" "));
        }
    }
    Ok(code)
}

fn status_name(s: VerdictStatus) -> String {
    serde_json::to_value(s)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Fail beats inconclusive beats pass; not-run and not-applicable verdicts
/// are neutral.
pub fn exit_code(statuses: impl IntoIterator<Item = VerdictStatus>) -> i32 {
    let mut code = EXIT_PASS;
    for s in statuses {
        match s {
            VerdictStatus::Fail => return EXIT_FAIL,
            VerdictStatus::Inconclusive => code = EXIT_INCONCLUSIVE,
            _ => {}
        }
    }
    code
}

enum Job {
    Single(Case),
    Pair(Case, Case),
}

fn product_pairs(ctx: &Context, all: &[Case], selected: &[Case]) -> Vec<Job> {
    let find = |id: &str| all.iter().find(|c| c.id == id).cloned().expect("checked");
    match &ctx.config.products {
        Some(pairs) => pairs
            .iter()
            .map(|(a, b)| Job::Pair(find(a), find(b)))
            .collect(),
        None => {
            let mut jobs = Vec::new();
            for i in 0..selected.len() {
                for j in i + 1..selected.len() {
                    jobs.push(Job::Pair(selected[i].clone(), selected[j].clone()));
                }
            }
            jobs
        }
    }
}

fn opuc_err(e: OpucError) -> String {
    e.to_string()
}

fn run_job(ctx: &Context, job: &Job) -> Result<CaseOutput, String> {
    match job {
        Job::Single(case) => run_case(ctx, case).map_err(|e| format!("weight `{}`: {e}", case.id)),
        Job::Pair(a, b) => {
            let report = product_check(
                (&a.id, &a.spec),
                (&b.id, &b.spec),
                &ctx.config.nu,
                &ctx.settings,
            )
            .map_err(|e| format!("pair `{}`*`{}`: {e}", a.id, b.id))?;
            report_output(ctx, &format!("{}__{}.product.json", a.id, b.id), report)
        }
    }
}

fn report_output(ctx: &Context, name: &str, report: BaxterReport) -> Result<CaseOutput, String> {
    let meta = ctx.meta(&report.weight_id, report.m);
    Ok(CaseOutput {
        id: report.weight_id.clone(),
        statuses: report.statuses().collect(),
        files: vec![(name.to_string(), json_document(&meta, &report)?)],
    })
}

#[derive(Serialize)]
struct ScatteringResult {
    data: ScatteringData,
    profile: Option<ErrorProfile>,
    #[serde(with = "crate::float_json")]
    unimodularity_defect: f64,
}

fn run_case(ctx: &Context, case: &Case) -> Result<CaseOutput, String> {
    let s = &ctx.settings;
    let id = case.id.as_str();
    let spec = &case.spec;
    let single = |files| {
        Ok(CaseOutput {
            id: id.to_string(),
            files,
            statuses: Vec::new(),
        })
    };
    match ctx.command {
        Command::Moments => {
            let table = compute_moments(spec, s.n, s.quadrature).map_err(opuc_err)?;
            let meta = ctx.meta(id, table.metadata.m);
            single(vec![(format!("{id}.moments.json"), json_document(&meta, &table)?)])
        }
        Command::Verblunsky => {
            let table = compute_moments(spec, s.n, s.quadrature).map_err(opuc_err)?;
            let seq = levinson(&table, s.n).map_err(opuc_err)?;
            let meta = ctx.meta(id, table.metadata.m);
            single(vec![
                (format!("{id}.verblunsky.json"), json_document(&meta, &seq)?),
                (format!("{id}.verblunsky.csv"), coefficient_csv(&meta, &seq.alpha)),
            ])
        }
        Command::Scattering => {
            let table = compute_moments(spec, s.n, s.quadrature).map_err(opuc_err)?;
            let seq = levinson(&table, s.n).map_err(opuc_err)?;
            let c = log_weight_coeffs(spec, s.n, s.quadrature).map_err(opuc_err)?;
            let data = ScatteringData::from_coeffs(&c, s.n).map_err(opuc_err)?;
            let tilde = predict_alphas(&data.s, s.n).map_err(opuc_err)?;
            let profile = error_profile(&seq, &tilde, s.window()).ok();
            let meta = ctx.meta(id, c.metadata.m);
            let csv = alpha_table_csv(&meta.csv_comment(), &seq.alpha, &tilde);
            let result = ScatteringResult {
                unimodularity_defect: data.unimodularity_defect(c.metadata.m).map_err(opuc_err)?,
                data,
                profile,
            };
            single(vec![
                (format!("{id}.scattering.json"), json_document(&meta, &result)?),
                (format!("{id}.scattering.csv"), csv.into_bytes()),
            ])
        }
        Command::BaxterCheck => {
            let mut report = baxter_check(id, spec, &ctx.config.nu, s).map_err(opuc_err)?;
            if let Some(p) = &ctx.config.bernstein_p {
                let b = bernstein_check(id, spec, p, &ctx.config.nu, s).map_err(opuc_err)?;
                report.verdicts.bernstein = b.verdicts.bernstein;
                report.p = b.p;
            }
            report_output(ctx, &format!("{id}.baxter.json"), report)
        }
        Command::Extend => {
            let report = match extend_baxter(id, spec, &ctx.config.nu, s) {
                Ok(r) => r,
                Err(OpucError::Precondition(msg)) => {
                    let mut r = baxter_check(id, spec, &ctx.config.nu, s).map_err(opuc_err)?;
                    r.verdicts.extended = Verdict::not_applicable(msg);
                    r
                }
                Err(e) => return Err(opuc_err(e)),
            };
            report_output(ctx, &format!("{id}.extend.json"), report)
        }
        Command::ProductCheck => unreachable!("pairs are dispatched separately"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_code_precedence() {
        use VerdictStatus::*;
        assert_eq!(exit_code([Pass, NotApplicable, NotRun]), EXIT_PASS);
        assert_eq!(exit_code([Pass, Inconclusive]), EXIT_INCONCLUSIVE);
        assert_eq!(exit_code([Inconclusive, Fail, Pass]), EXIT_FAIL);
        assert_eq!(exit_code([]), EXIT_PASS);
    }

    #[test]
    fn argument_errors() {
        assert_eq!(run(["opuc"]), EXIT_ERROR);
        assert_eq!(run(["opuc", "moments"]), EXIT_ERROR);
        assert_eq!(run(["opuc", "bogus", "--config", "x"]), EXIT_ERROR);
        assert_eq!(run(["opuc", "moments", "--config", "/nonexistent/x.json"]), EXIT_ERROR);
    }
}
