//! Command implementations behind the `flagrank` binary: settings, the
//! report cache, output formats, the parallel scan driver and the
//! verification suites. Every command returns its full output as a string
//! together with the process exit code, so it can be tested without spawning
//! a process.

pub mod cache;
pub mod config;
pub mod output;
pub mod parse;
pub mod verify;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use flagrank_core::bounds::{
    asymptotic_bound, flag_bound, identifiability_bound, product_bound, reduced_flag_bound, BoundReport, GateReading,
    IdentifiabilityReport,
};
use flagrank_core::flag::{span_size, weyl_dim};
use flagrank_core::secant::{certified_terracini_dim, scan_entry, terracini_dim, DefectReport, ReportCache, ScanEntry};
use flagrank_core::{Error, FlagShape, Mode};

use crate::cache::NdjsonCache;
use crate::config::Settings;
use crate::output::{report_line, reports_csv, to_json};

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for usage errors and violated preconditions.
pub const EXIT_USAGE: i32 = 2;
/// Exit code when a size cap refuses the computation.
pub const EXIT_CAP: i32 = 3;
/// Exit code for inconsistent results (including failed verification checks).
pub const EXIT_INCONSISTENT: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("io: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Core(Error::CapExceeded(_)) => EXIT_CAP,
            CliError::Core(Error::Inconsistency(_) | Error::SingularSample(_)) => EXIT_INCONSISTENT,
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}

/// Text written to stdout and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: EXIT_OK }
    }
}

/// Output format for commands that produce reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Runs `f` over `items` on a pool of `workers` threads, keeping input order.
pub fn run_parallel<T, R, F>(workers: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
    pool.install(|| items.into_par_iter().map(f).collect())
}

/// Sizes attached to a shape.
#[derive(Debug, Clone, Serialize)]
pub struct DimInfo {
    pub shape: FlagShape,
    pub mode: String,
    pub dim: usize,
    /// Projective dimension of the Plücker-Segre ambient space.
    pub ambient: u128,
    /// Projective dimension of the linear span (flags only).
    pub span: Option<u128>,
    pub alpha: usize,
}

pub fn cmd_dim(shape: &FlagShape, format: Format) -> Result<Output, CliError> {
    let ambient = shape.ambient_size().ok_or_else(|| Error::Overflow(format!("ambient size of {}", shape)))? - 1;
    let span = match shape.mode() {
        Mode::Flag => Some(weyl_dim(shape)? - 1),
        Mode::ProductOfGrassmannians => None,
    };
    let mode = match shape.mode() {
        Mode::Flag => "flag",
        Mode::ProductOfGrassmannians => "product",
    };
    let info = DimInfo { shape: shape.clone(), mode: mode.into(), dim: shape.dim(), ambient, span, alpha: shape.alpha() };
    let text = match format {
        Format::Json => to_json(&info),
        _ => {
            let mut t = format!("shape {}\nmode {}\ndim {}\n", info.shape, info.mode, info.dim);
            if let Some(span) = info.span {
                t += &format!("span {}\n", span);
            }
            t += &format!("ambient {}\nalpha {}", info.ambient, info.alpha);
            t
        }
    };
    Ok(Output::ok(text))
}

fn open_cache(settings: &Settings) -> Result<Option<NdjsonCache>, CliError> {
    settings.cache.as_deref().map(NdjsonCache::open).transpose()
}

/// Secant dimension of one `(shape, h)`, confirmed with the second prime unless `confirm` is false.
pub fn cmd_secant(shape: &FlagShape, h: usize, settings: &Settings, force: bool, confirm: bool, format: Format) -> Result<Output, CliError> {
    if h == 0 {
        return Err(CliError::Usage("--h must be at least 1".into()));
    }
    let config = settings.terracini(force);
    let confirm_prime = confirm.then_some(settings.prime2);
    let mut cache = open_cache(settings)?;
    let cached = cache.as_ref().and_then(|c| c.get(shape, h, &config, confirm_prime));
    let report = match cached {
        Some(report) => report,
        None => {
            let report = match confirm_prime {
                Some(p) => certified_terracini_dim(shape, h, &config, p)?,
                None => terracini_dim(shape, h, &config)?,
            };
            if let Some(cache) = cache.as_mut() {
                cache.put(&report);
            }
            report
        }
    };
    let text = match format {
        Format::Json => to_json(&report),
        Format::Csv => reports_csv([&report])?,
        Format::Text => report_line(&report),
    };
    Ok(Output::ok(text))
}

/// All applicable bounds of a shape.
#[derive(Debug, Clone, Serialize)]
pub struct BoundsSummary {
    pub shape: FlagShape,
    pub bounds: BTreeMap<String, BoundReport>,
    pub identifiability: IdentifiabilityReport,
}

pub fn bounds_summary(shape: &FlagShape, reading: GateReading) -> Result<BoundsSummary, CliError> {
    let mut candidates = Vec::new();
    match shape.mode() {
        Mode::ProductOfGrassmannians => candidates.push(("product_bound", product_bound(shape)?)),
        Mode::Flag => {
            candidates.push(("flag_bound", flag_bound(shape)?));
            candidates.push(("reduced_flag_bound", reduced_flag_bound(shape)?));
        }
    }
    candidates.push(("asymptotic", asymptotic_bound(shape)?));
    if shape.has_room_for_two_points() {
        candidates.retain(|(name, _)| *name != "reduced_flag_bound");
    }
    let bounds = candidates.into_iter().filter(|(_, r)| r.applicable).map(|(k, r)| (k.to_string(), r)).collect();
    Ok(BoundsSummary { shape: shape.clone(), bounds, identifiability: identifiability_bound(shape, reading)? })
}

pub fn cmd_bounds(shape: &FlagShape, reading: GateReading, format: Format) -> Result<Output, CliError> {
    let summary = bounds_summary(shape, reading)?;
    let text = match format {
        Format::Json => to_json(&summary),
        _ => {
            let mut lines = vec![format!("shape {}", summary.shape)];
            for (name, r) in &summary.bounds {
                let mut line = format!("{}: sigma_(h+1) is non-defective for h <= {}", name, r.h_max);
                if let Some(l) = r.parameters.l {
                    line += &format!(" (l = {})", l);
                }
                if let Some(note) = &r.note {
                    line += &format!(" [{}]", note);
                }
                lines.push(line);
            }
            let id = &summary.identifiability;
            if id.applicable {
                lines.push(format!("identifiability: h-identifiable for h <= {} (gate {} <= {})", id.h_max, id.gate, id.bound));
            } else {
                lines.push(format!("identifiability: not applicable (gate {} > {})", id.gate, id.bound));
            }
            lines.join("\n")
        }
    };
    Ok(Output::ok(text))
}

/// The family `F(0,k;n)` for `2 <= n <= nmax`, `1 <= k < n`.
pub fn point_flag_corpus(nmax: usize) -> Vec<FlagShape> {
    (2..=nmax).flat_map(|n| (1..n).map(move |k| FlagShape::flag(&[0, k], n).expect("valid shape"))).collect()
}

/// Scan outcome with the cells in grid order.
#[derive(Debug, Clone, Serialize)]
pub struct ScanSummary {
    pub entries: Vec<ScanEntry>,
    pub budget_exhausted: bool,
}

/// Computes the secant grid `shapes x hs` in parallel, reusing and filling the cache.
pub fn run_scan(
    shapes: &[FlagShape],
    hs: &[usize],
    settings: &Settings,
    force: bool,
    confirm: bool,
    budget: Option<Duration>,
) -> Result<ScanSummary, CliError> {
    let config = settings.terracini(force);
    let confirm_prime = confirm.then_some(settings.prime2);
    let mut cache = open_cache(settings)?;
    let cells: Vec<(FlagShape, usize)> = shapes.iter().flat_map(|s| hs.iter().map(move |&h| (s.clone(), h))).collect();
    let cached: Vec<Option<DefectReport>> =
        cells.iter().map(|(s, h)| cache.as_ref().and_then(|c| c.get(s, *h, &config, confirm_prime))).collect();
    let start = Instant::now();
    let jobs: Vec<_> = cells.into_iter().zip(cached).collect();
    let results = run_parallel(settings.workers, jobs, |((shape, h), hit)| match hit {
        Some(report) => (ScanEntry { shape, h, report: Some(report), error: None, skipped: false }, false, false),
        None if budget.is_some_and(|b| start.elapsed() > b) => {
            (ScanEntry { shape, h, report: None, error: Some("time budget exhausted".into()), skipped: true }, false, true)
        }
        None => (scan_entry(&shape, h, &config, confirm_prime), true, false),
    });
    let mut entries = Vec::with_capacity(results.len());
    let mut budget_exhausted = false;
    for (entry, fresh, out_of_time) in results {
        budget_exhausted |= out_of_time;
        if fresh {
            if let (Some(cache), Some(report)) = (cache.as_mut(), entry.report.as_ref()) {
                cache.put(report);
            }
        }
        entries.push(entry);
    }
    Ok(ScanSummary { entries, budget_exhausted })
}

pub fn cmd_scan(summary: &ScanSummary, format: Format) -> Result<Output, CliError> {
    let text = match format {
        Format::Json => to_json(summary),
        Format::Csv => reports_csv(summary.entries.iter().filter_map(|e| e.report.as_ref()))?,
        Format::Text => summary
            .entries
            .iter()
            .map(|e| match (&e.report, &e.error) {
                (Some(r), _) => report_line(r),
                (None, Some(err)) => format!("{} h={}: {}", e.shape, e.h, err),
                (None, None) => format!("{} h={}: skipped (the {}-secant is expected to fill the span)", e.shape, e.h, e.h - 1),
            })
            .collect::<Vec<_>>()
            .join("\n"),
    };
    let code = if summary.entries.iter().any(|e| e.error.is_some() && !e.skipped) { EXIT_INCONSISTENT } else { EXIT_OK };
    Ok(Output { text, code })
}

/// Projective dimension of the span used by the expected-dimension formula.
pub fn span_projective_dim(shape: &FlagShape) -> Result<u128, CliError> {
    Ok(span_size(shape)? - 1)
}

pub fn cmd_verify(suite: verify::Suite, options: &verify::VerifyOptions, settings: &Settings, format: Format) -> Result<Output, CliError> {
    let summary = verify::run_suite(suite, options, settings)?;
    let text = match format {
        Format::Json => to_json(&summary),
        _ => {
            let mut lines: Vec<String> = summary
                .checks
                .iter()
                .map(|c| {
                    let tag = match c.outcome {
                        verify::Outcome::Pass => "PASS",
                        verify::Outcome::Fail => "FAIL",
                        verify::Outcome::Skipped => "SKIP",
                    };
                    let info = if c.informational { " (informational)" } else { "" };
                    format!("{} {} {}{} {}", tag, c.name, c.input, info, c.detail)
                })
                .collect();
            lines.push(format!(
                "suite {}: {} ({} run, {} failed)",
                summary.suite,
                if summary.passed { "passed" } else { "failed" },
                summary.checks_run,
                summary.checks_failed
            ));
            lines.join("\n")
        }
    };
    Ok(Output { text, code: if summary.passed { EXIT_OK } else { EXIT_INCONSISTENT } })
}
