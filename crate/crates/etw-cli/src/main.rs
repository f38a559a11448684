//! `etw`: construct, enumerate, verify and demo the workbench objects.
//!
//! Exit status: 0 when everything verified, 1 on a refutation, 2 on an
//! unknown-at-budget verdict, 3 on usage errors.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use etw_core::budgets::{Budgets, DEFAULT_STAGES, DEFAULT_STEPS};
use etw_core::instance::{parse_instance, resolve, ResolvedInstance};
use etw_core::kernel::encode_program;
use etw_core::report::{digest_text, CheckRecord, Report, VerdictKind};
use etw_core::snapshot::{decode_snapshot, encode_snapshot, Job};
use etw_core::spaces::{EffOpenSet, IndexSetJob};
use etw_core::Nat;

mod demos;
mod verify;

#[derive(Parser)]
#[command(name = "etw", version, about = "step-bounded effective topology workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Instance file (.etw); built-in fixtures are always available.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Per-run machine step budget.
    #[arg(long)]
    budget: Option<u64>,
    /// Stage bound for enumerations.
    #[arg(long)]
    stages: Option<Nat>,
    /// Report bound for set comparisons and sweeps.
    #[arg(long)]
    bound: Option<Nat>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format (only json).
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Build a named object and report its shape.
    Construct {
        kind: String,
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a stage enumeration job, optionally snapshotting or resuming.
    Enumerate {
        /// Job type: we | image | index-set | sigma-t | alpha-c | resume.
        job: String,
        /// Job target (program/space/tree/domain name); unused for resume.
        #[arg(default_value = "")]
        target: String,
        /// Snapshot file to write after the run.
        #[arg(long)]
        snapshot: Option<PathBuf>,
        /// Snapshot file to resume from.
        #[arg(long)]
        resume: Option<PathBuf>,
        /// Input set for sigma-t/alpha-c (comma-separated naturals).
        #[arg(long)]
        input: Option<String>,
        /// Basis indices for index-set (comma-separated naturals).
        #[arg(long)]
        open: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the verification suite for a named object.
    Verify {
        kind: String,
        name: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a named demonstration scenario.
    Demo {
        scenario: String,
        #[command(flatten)]
        common: Common,
    },
}

pub(crate) struct Ctx {
    pub resolved: ResolvedInstance,
    pub budgets: Budgets,
    pub bound: Nat,
    pub digest: String,
}

fn load_ctx(common: &Common) -> Result<Ctx> {
    let default_steps = std::env::var("ETW_DEFAULT_BUDGET")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .unwrap_or(DEFAULT_STEPS);
    let budgets = Budgets::new(
        common.budget.unwrap_or(default_steps),
        common.stages.unwrap_or(DEFAULT_STAGES),
    );
    let (text, digest) = match &common.instance {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let digest = digest_text(&text);
            (text, digest)
        }
        None => (String::new(), "builtin".to_string()),
    };
    let parsed = parse_instance(&text).map_err(|e| anyhow!("parse error: {e}"))?;
    let resolved = resolve(&parsed, budgets).map_err(|e| anyhow!("resolve error: {e}"))?;
    Ok(Ctx {
        resolved,
        budgets,
        bound: common.bound.unwrap_or(10),
        digest,
    })
}

fn parse_nat_list(s: &str) -> Result<BTreeSet<Nat>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<Nat>()
                .map_err(|_| anyhow!("bad natural `{p}`"))
        })
        .collect()
}

fn emit(report: &Report, common: &Common) -> Result<i32> {
    if common.format != "json" {
        bail!("unknown format `{}`", common.format);
    }
    let text = report.to_json();
    match &common.out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(report.exit_status())
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    match cli.command {
        Command::Construct { kind, name, common } => {
            let ctx = load_ctx(&common)?;
            let start = Instant::now();
            let mut report = Report::new(ctx.digest.clone(), ctx.budgets);
            verify::construct(&ctx, &kind, &name, &mut report)?;
            report.metadata.wall_ms = start.elapsed().as_millis();
            emit(&report, &common)
        }
        Command::Verify { kind, name, common } => {
            let ctx = load_ctx(&common)?;
            let start = Instant::now();
            let mut report = Report::new(ctx.digest.clone(), ctx.budgets);
            verify::verify(&ctx, &kind, &name, &mut report)?;
            report.metadata.wall_ms = start.elapsed().as_millis();
            emit(&report, &common)
        }
        Command::Demo { scenario, common } => {
            let ctx = load_ctx(&common)?;
            let start = Instant::now();
            let mut report = Report::new(ctx.digest.clone(), ctx.budgets);
            demos::run_demo(&ctx, &scenario, &mut report)?;
            report.metadata.wall_ms = start.elapsed().as_millis();
            emit(&report, &common)
        }
        Command::Enumerate {
            job,
            target,
            snapshot,
            resume,
            input,
            open,
            common,
        } => {
            let ctx = load_ctx(&common)?;
            let start = Instant::now();
            let mut the_job = match (job.as_str(), &resume) {
                (_, Some(path)) => {
                    let bytes = std::fs::read(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    decode_snapshot(&bytes).map_err(|e| anyhow!("bad snapshot: {e}"))?
                }
                ("we", None) => Job::WeEnum {
                    index: program_index(&ctx, &target)?,
                    stage: 0,
                    produced: BTreeSet::new(),
                },
                ("image", None) => Job::ImageEnum {
                    index: program_index(&ctx, &target)?,
                    stage: 0,
                    produced: BTreeSet::new(),
                },
                ("index-set", None) => {
                    let space = verify::build_space(&ctx, &target)?;
                    let indices = match &open {
                        Some(s) => parse_nat_list(s)?,
                        None => BTreeSet::from([0]),
                    };
                    Job::IndexSet {
                        space: Box::new(space),
                        job: IndexSetJob::new(EffOpenSet {
                            index_set: etw_core::numberings::CeSet::Finite(indices),
                        }),
                    }
                }
                ("sigma-t", None) => {
                    let tree = ctx
                        .resolved
                        .tree(&target)
                        .ok_or_else(|| anyhow!("unknown tree `{target}`"))?;
                    let codes = parse_nat_list(input.as_deref().unwrap_or(""))?;
                    Job::SigmaT {
                        tree,
                        input: etw_core::numberings::CeSet::Finite(codes),
                        stage: 0,
                        produced: BTreeSet::new(),
                    }
                }
                ("alpha-c", None) => {
                    let domain = ctx
                        .resolved
                        .domain(&target)
                        .ok_or_else(|| anyhow!("unknown domain `{target}`"))?;
                    let indices = parse_nat_list(input.as_deref().unwrap_or(""))?;
                    Job::AlphaC {
                        domain,
                        input: etw_core::numberings::CeSet::Finite(indices),
                        stage: 0,
                        current: 0,
                    }
                }
                (other, None) => bail!("unknown job `{other}`"),
            };
            the_job.advance(ctx.budgets.stages);
            if let Some(path) = &snapshot {
                std::fs::write(path, encode_snapshot(&the_job))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let mut report = Report::new(ctx.digest.clone(), ctx.budgets);
            report.push(
                CheckRecord::new(
                    format!("enumerate/{}", job_name(&the_job)),
                    VerdictKind::Verified,
                    ctx.budgets,
                )
                .with_witness(the_job.result_value())
                .with_saturation(the_job.stage()),
            );
            report.metadata.wall_ms = start.elapsed().as_millis();
            emit(&report, &common)
        }
    }
}

fn job_name(job: &Job) -> &'static str {
    match job {
        Job::WeEnum { .. } => "we",
        Job::ImageEnum { .. } => "image",
        Job::IndexSet { .. } => "index-set",
        Job::SigmaT { .. } => "sigma-t",
        Job::AlphaC { .. } => "alpha-c",
    }
}

fn program_index(ctx: &Ctx, target: &str) -> Result<etw_core::kernel::ProgramIndex> {
    if let Ok(n) = target.parse::<Nat>() {
        return Ok(etw_core::kernel::ProgramIndex::from(n));
    }
    ctx.resolved
        .program(target)
        .map(|p| encode_program(&p))
        .ok_or_else(|| anyhow!("unknown program `{target}`"))
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code.clamp(0, 255) as u8),
        Err(e) => {
            eprintln!("etw: {e:#}");
            ExitCode::from(3)
        }
    }
}
