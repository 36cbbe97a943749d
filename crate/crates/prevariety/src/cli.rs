//! Command-line front end: flag parsing, mode normalization, and the
//! orchestration of the three stages (fans, tables, enumeration).

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::enumeration::{enumerate_recursive, enumerate_static, EnumerationStats};
use crate::pipeline::build_fans;
use crate::postprocess::{build_result, dedup_closure_bodies, PrevarietyResult, RunMeta};
use crate::report::{self, FileSink};
use crate::scheduler::{format_trace, run_enumeration_stage, run_table_stage, TraceEvent};
use crate::systems::{gen_cyclic, gen_minors, gen_nbody, gen_nvortex, parse_system, PolynomialSystem};
use crate::{Error, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Fixed input fan order.
    Static,
    /// Greedy per-branch fan order.
    Dynamic,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Toggle {
    On,
    Off,
}

impl Toggle {
    fn on(self) -> bool {
        self == Toggle::On
    }
}

/// Computes tropical prevarieties: the common refinement of the tropical
/// hypersurfaces of a polynomial system, in exact arithmetic.
#[derive(Parser, Debug)]
#[command(name = "prevariety", version)]
pub struct Args {
    /// Read the polynomial system from this file.
    #[arg(long, value_name = "PATH", conflicts_with = "system")]
    pub input: Option<PathBuf>,

    /// Generate a built-in family: cyclic, nbody, nvortex, or minors.
    #[arg(long, value_name = "NAME")]
    pub system: Option<String>,

    /// Size parameter for the families that take one.
    #[arg(long, value_name = "K", requires = "system")]
    pub n: Option<usize>,

    /// Fan ordering strategy.
    #[arg(long, value_enum, default_value_t = Algorithm::Dynamic)]
    pub algorithm: Algorithm,

    /// Queue-driven traversal; off runs the plain recursive loop.
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    pub iterative: Toggle,

    /// Relation-table pruning.
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    pub tables: Toggle,

    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_name = "W")]
    pub workers: Option<usize>,

    /// Orientation seed for the edge-graph direction draws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Write the result document here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Print `rays: <count>` after the run.
    #[arg(long)]
    pub rays: bool,

    /// Compute maximal cones and include MAXIMAL lines in the document.
    #[arg(long)]
    pub maximal: bool,

    /// Print enumeration counters to stderr.
    #[arg(long)]
    pub stats: bool,

    /// Record scheduler events (worker, action, depth, timestamp) here.
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
}

#[derive(Clone, Debug)]
pub enum SystemSource {
    File(PathBuf),
    Generated { family: String, n: Option<usize> },
}

/// A fully decided run. `normalized` enforces the mode rules: the static
/// algorithm runs without tables on one worker, and only the iterative
/// traversal can use more than one worker.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub source: SystemSource,
    pub algorithm: Algorithm,
    pub iterative: bool,
    pub tables: bool,
    pub workers: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub want_rays: bool,
    pub want_maximal: bool,
    pub want_stats: bool,
    pub trace_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<RunConfig> {
        let source = match (args.input, args.system) {
            (Some(path), None) => SystemSource::File(path),
            (None, Some(family)) => SystemSource::Generated { family, n: args.n },
            (None, None) => {
                return Err(Error::InvalidArgument(
                    "pass --input PATH or --system NAME".into(),
                ))
            }
            (Some(_), Some(_)) => unreachable!("clap rejects --input with --system"),
        };
        let workers = match args.workers {
            Some(0) => {
                return Err(Error::InvalidArgument("--workers must be at least 1".into()))
            }
            Some(w) => w,
            None => std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1),
        };
        Ok(RunConfig {
            source,
            algorithm: args.algorithm,
            iterative: args.iterative.on(),
            tables: args.tables.on(),
            workers,
            seed: args.seed,
            output: args.output,
            want_rays: args.rays,
            want_maximal: args.maximal,
            want_stats: args.stats,
            trace_path: args.trace,
        })
    }

    pub fn normalized(mut self) -> RunConfig {
        if self.algorithm == Algorithm::Static {
            self.tables = false;
            self.workers = 1;
        }
        if !self.iterative {
            self.workers = 1;
        }
        self
    }
}

pub fn load_system(source: &SystemSource) -> Result<PolynomialSystem> {
    match source {
        SystemSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidArgument(format!("cannot read {}: {e}", path.display()))
            })?;
            parse_system(&text)
        }
        SystemSource::Generated { family, n } => match (family.as_str(), n) {
            ("cyclic", Some(k)) => gen_cyclic(*k),
            ("nbody", Some(k)) => gen_nbody(*k),
            ("nvortex", Some(k)) => gen_nvortex(*k),
            ("minors", None) => Ok(gen_minors()),
            ("minors", Some(_)) => Err(Error::InvalidArgument(
                "the minors system has no --n parameter".into(),
            )),
            ("cyclic" | "nbody" | "nvortex", None) => Err(Error::InvalidArgument(format!(
                "--system {family} needs --n"
            ))),
            (other, _) => Err(Error::InvalidArgument(format!(
                "unknown system {other:?}; choose cyclic, nbody, nvortex, or minors"
            ))),
        },
    }
}

/// Runs the configured pipeline and returns the result plus any recorded
/// trace. Cones stream to a temporary file during enumeration and are
/// canonicalized in a final pass.
pub fn execute(config: &RunConfig) -> Result<(PrevarietyResult, Vec<TraceEvent>)> {
    let system = load_system(&config.source)?;
    let fans = build_fans(&system, config.seed)?;
    let tables = config.tables.then(|| run_table_stage(&fans, config.workers));

    let sink = FileSink::new(system.dim())?;
    let (stats, trace): (EnumerationStats, Vec<TraceEvent>) =
        if config.algorithm == Algorithm::Static {
            (enumerate_static(&fans, &sink), Vec::new())
        } else if !config.iterative {
            (enumerate_recursive(&fans, tables.as_ref(), &sink), Vec::new())
        } else {
            run_enumeration_stage(
                &fans,
                tables.as_ref(),
                config.workers,
                &sink,
                config.trace_path.is_some(),
            )?
        };

    let bodies = sink.finish()?;
    let keys = dedup_closure_bodies(&bodies);
    let meta = RunMeta {
        label: system.label().to_string(),
        dim: system.dim(),
        fan_count: fans.len(),
        seed: config.seed,
        workers: config.workers,
    };
    Ok((build_result(keys, stats, meta, config.want_maximal), trace))
}

/// Full CLI entry: execute, route the document and summaries.
pub fn run(args: Args) -> Result<()> {
    let config = RunConfig::from_args(args)?.normalized();
    let (result, trace) = execute(&config)?;

    let text = report::serialize(&report::Document::of(&result));
    match &config.output {
        Some(path) => std::fs::write(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &config.trace_path {
        std::fs::write(path, format_trace(&trace))?;
    }
    if config.want_rays {
        println!("rays: {}", result.rays.len());
    }
    if config.want_stats {
        eprintln!("attempted: {}", result.stats.intersections_attempted);
        eprintln!("nonempty: {}", result.stats.intersections_nonempty);
        eprintln!("pruned: {}", result.stats.pruned_by_table);
        eprintln!("cones: {}", result.stats.output_cones);
    }
    if result.lineality_cones > 0 {
        eprintln!(
            "note: {} cones carry lineality and are excluded from the ray list",
            result.lineality_cones
        );
    }
    Ok(())
}
