//! Verification suites: each one runs a list of independent checks in
//! parallel and reports one record per check.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;
use serde_json::{json, Value};

use flagrank_core::bounds::{asymptotic_bound, nondefectivity};
use flagrank_core::flag::{derivative_rank, osc_dim_formula, well_behaved_check, Variety};
use flagrank_core::index::{ball_positions, staircase_point};
use flagrank_core::oscproj::{alpha_osc_flatlimit_check, build_center, generic_finiteness, strong2_flatlimit_check};
use flagrank_core::secant::{certified_terracini_dim, chordal_hypersurface_check};
use flagrank_core::{seeded_rng, Error, FlagShape, Mode, PrimeField};

use crate::config::Settings;
use crate::{run_parallel, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Osculating spaces against the derivative rank and the counting formula.
    Osc,
    /// Well-behavedness of flag varieties.
    Wb,
    /// Flat limits of osculating spaces along degenerating curves.
    Flat,
    /// Generic finiteness of osculating projections.
    Proj,
    /// The chordal hypersurface of the point-hyperplane flag.
    Chordal,
    /// Bounds cross-checked against secant dimensions.
    Cross,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Osc, Suite::Wb, Suite::Flat, Suite::Proj, Suite::Chordal, Suite::Cross];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Osc => "osc",
            Suite::Wb => "wb",
            Suite::Flat => "flat",
            Suite::Proj => "proj",
            Suite::Chordal => "chordal",
            Suite::Cross => "cross",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown suite {:?} (expected osc, wb, flat, proj, chordal or cross)", s)))
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Replaces the suite's default shapes.
    pub shapes: Option<Vec<FlagShape>>,
    /// Largest `n` for the chordal suite.
    pub nmax: Option<usize>,
    /// Checks not started within this time are reported as skipped.
    pub budget: Option<Duration>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub input: String,
    pub outcome: Outcome,
    pub detail: Value,
    /// Informational checks do not affect the suite result.
    pub informational: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub suite: String,
    pub passed: bool,
    pub checks_run: usize,
    pub checks_failed: usize,
    pub budget_exhausted: bool,
    pub checks: Vec<Check>,
}

type Job = Box<dyn Fn(&Settings) -> Result<(bool, Value), Error> + Send + Sync>;

struct Task {
    name: &'static str,
    input: String,
    informational: bool,
    job: Job,
}

impl Task {
    fn new(name: &'static str, input: String, job: impl Fn(&Settings) -> Result<(bool, Value), Error> + Send + Sync + 'static) -> Self {
        Task { name, input, informational: false, job: Box::new(job) }
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

fn parse_shapes(list: &[&str]) -> Vec<FlagShape> {
    list.iter().map(|s| s.parse().expect("built-in shape")).collect()
}

fn variety(shape: &FlagShape, settings: &Settings) -> Result<Variety<PrimeField>, Error> {
    Variety::new(PrimeField::new(settings.prime)?, shape.clone())
}

fn osc_tasks(shapes: Vec<FlagShape>) -> Vec<Task> {
    let mut tasks = Vec::new();
    for shape in shapes {
        for s in 0..=shape.diameter() {
            let shape = shape.clone();
            tasks.push(Task::new("osculating_rank", format!("shape={} s={}", shape, s), move |settings| {
                let v = variety(&shape, settings)?;
                let mut rng = seeded_rng(settings.seed);
                let span = v.linear_span(&mut rng)?;
                let center = staircase_point(&shape, 1)?;
                let osc = v.osculating_span(&span, &center, s)?.rank();
                let derivatives = derivative_rank(&shape, s)?;
                let (formula, ball, ok) = match shape.mode() {
                    Mode::ProductOfGrassmannians => {
                        let formula = osc_dim_formula(&shape, s)?;
                        let ball = ball_positions(v.space(), &center, s)?.len();
                        let ok = osc == derivatives && formula == osc as u128 && ball == osc;
                        (Some(formula), Some(ball), ok)
                    }
                    Mode::Flag => (None, None, osc == derivatives),
                };
                Ok((ok, json!({ "osculating_rank": osc, "derivative_rank": derivatives, "formula": formula, "ball": ball })))
            }));
        }
    }
    tasks
}

fn wb_tasks(shapes: Vec<FlagShape>) -> Vec<Task> {
    let mut tasks = Vec::new();
    for shape in shapes {
        for s in 0..=shape.diameter() {
            let shape = shape.clone();
            tasks.push(Task::new("well_behaved", format!("shape={} s={}", shape, s), move |settings| {
                let v = variety(&shape, settings)?;
                let wb = well_behaved_check(&v, s, &mut seeded_rng(settings.seed))?;
                Ok((wb.holds(), json!({ "derivative_rank": wb.derivative_rank, "osculating_rank": wb.osculating_rank })))
            }));
        }
    }
    tasks
}

fn flat_detail(check: &flagrank_core::oscproj::FlatLimitCheck) -> Value {
    json!({
        "limit_rank": check.limit_rank,
        "target_order": check.target_order,
        "target_rank": check.target_rank,
        "contained": check.contained,
    })
}

fn flat_tasks(strong2: Vec<FlagShape>, alpha: Vec<FlagShape>) -> Vec<Task> {
    let mut tasks = Vec::new();
    for shape in strong2 {
        for (s1, s2) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let shape = shape.clone();
            tasks.push(Task::new("strong2_flat_limit", format!("shape={} s1={} s2={}", shape, s1, s2), move |settings| {
                let v = variety(&shape, settings)?;
                let mut rng = seeded_rng(settings.seed);
                let span = v.linear_span(&mut rng)?;
                let check = strong2_flatlimit_check(&v, &span, s1, s2, &mut rng)?;
                Ok((check.contained, flat_detail(&check)))
            }));
        }
    }
    for shape in alpha {
        for s in [0, 1] {
            let shape = shape.clone();
            tasks.push(Task::new("alpha_flat_limit", format!("shape={} s={}", shape, s), move |settings| {
                let v = variety(&shape, settings)?;
                let mut rng = seeded_rng(settings.seed);
                let span = v.linear_span(&mut rng)?;
                let check = alpha_osc_flatlimit_check(&v, &span, s, &mut rng)?;
                Ok((check.contained, flat_detail(&check)))
            }));
        }
    }
    tasks
}

fn projection_task(shape: FlagShape, orders: Vec<usize>) -> Task {
    let input = format!("shape={} orders={:?}", shape, orders);
    Task::new("projection_finite", input, move |settings| {
        let v = variety(&shape, settings)?;
        let mut rng = seeded_rng(settings.seed);
        let span = v.linear_span(&mut rng)?;
        let center = build_center(&v, &span, &orders)?;
        let finite = generic_finiteness(&v, &center, &mut rng)?;
        Ok((finite, json!({ "center_rank": center.center.rank(), "residual": center.residual, "dim": v.dim() })))
    })
}

/// Orders `r - 2 + Σ k_i` at the first `α - 1` staircase points.
fn standard_orders(shape: &FlagShape) -> Vec<usize> {
    let s = (shape.r() + shape.k_sum()).saturating_sub(2);
    vec![s; shape.alpha().saturating_sub(1)]
}

fn cross_secant_task(shape: FlagShape, h: usize, bound: &'static str) -> Task {
    let input = format!("shape={} h={}", shape, h);
    Task::new("secant_nondefective", input, move |settings| {
        let report = certified_terracini_dim(&shape, h, &settings.terracini(false), settings.prime2)?;
        Ok((
            report.defect == 0,
            json!({
                "bound": bound,
                "expected_dim": report.expected_dim,
                "computed_dim": report.computed_dim,
                "defect": report.defect,
            }),
        ))
    })
}

fn cross_tasks(shapes: Vec<FlagShape>, settings: &Settings) -> Result<Vec<Task>, CliError> {
    let mut tasks = Vec::new();
    for shape in shapes {
        let regime = nondefectivity(&shape)?;
        let asymptotic = asymptotic_bound(&shape)?;
        let rows_for = |h: usize| h.saturating_mul(shape.dim() + 1);
        let covered = if regime.applicable { regime.h_max } else { 0 };
        for h in 1..=covered {
            let h = usize::try_from(h + 1).map_err(|_| Error::Overflow("secant index".into()))?;
            tasks.push(cross_secant_task(shape.clone(), h, "regime"));
        }
        if asymptotic.applicable {
            let mut h = covered + 1;
            while h <= asymptotic.h_max {
                let sigma = usize::try_from(h + 1).map_err(|_| Error::Overflow("secant index".into()))?;
                if rows_for(sigma) > settings.cap_rows {
                    break;
                }
                tasks.push(cross_secant_task(shape.clone(), sigma, "asymptotic").informational());
                h += 1;
            }
        }
    }
    Ok(tasks)
}

fn suite_tasks(suite: Suite, options: &VerifyOptions, settings: &Settings) -> Result<Vec<Task>, CliError> {
    let shapes = |defaults: &[&str]| options.shapes.clone().unwrap_or_else(|| parse_shapes(defaults));
    Ok(match suite {
        Suite::Osc => osc_tasks(shapes(&["G:1;3", "G:2;5", "G:0,1;3", "G:1,1;4"])),
        Suite::Wb => wb_tasks(shapes(&["0,1;2", "0,1;3", "1,2;4", "0,2;3"])),
        Suite::Flat => match &options.shapes {
            Some(list) => {
                let list: Vec<FlagShape> = list.iter().filter(|s| s.alpha() >= 2).cloned().collect();
                flat_tasks(list.clone(), list)
            }
            None => flat_tasks(parse_shapes(&["1;3"]), parse_shapes(&["1;5"])),
        },
        Suite::Proj => match &options.shapes {
            Some(list) => list.iter().map(|s| projection_task(s.clone(), standard_orders(s))).collect(),
            None => {
                let mut tasks: Vec<Task> =
                    parse_shapes(&["0,1;3", "1,2;4"]).into_iter().map(|s| { let o = standard_orders(&s); projection_task(s, o) }).collect();
                tasks.push(projection_task(parse_shapes(&["1;3"]).remove(0), vec![0]));
                tasks
            }
        },
        Suite::Chordal => {
            let nmax = options.nmax.unwrap_or(4);
            if nmax < 2 {
                return Err(CliError::Usage("--nmax must be at least 2".into()));
            }
            (2..=nmax)
                .map(|n| {
                    Task::new("chordal_hypersurface", format!("n={}", n), move |settings| {
                        let c = chordal_hypersurface_check(n, settings.prime, settings.seed)?;
                        Ok((
                            c.holds(),
                            json!({
                                "samples": c.samples,
                                "equation_vanishes": c.equation_vanishes,
                                "equation_on_span": c.equation_on_span,
                                "span_rank": c.span_rank,
                                "expected_span_rank": c.expected_span_rank,
                                "nonflag_nonzero": c.nonflag_nonzero,
                            }),
                        ))
                    })
                })
                .collect()
        }
        Suite::Cross => cross_tasks(shapes(&["0,1;3", "1,2;5", "0,2;5", "G:2;8", "G:1,1;4"]), settings)?,
    })
}

/// Runs one suite.
pub fn run_suite(suite: Suite, options: &VerifyOptions, settings: &Settings) -> Result<VerifySummary, CliError> {
    let tasks = suite_tasks(suite, options, settings)?;
    let start = Instant::now();
    let checks = run_parallel(settings.workers, tasks, |task| {
        let (outcome, detail) = if options.budget.is_some_and(|b| start.elapsed() > b) {
            (Outcome::Skipped, json!({ "reason": "time budget exhausted" }))
        } else {
            match (task.job)(settings) {
                Ok((true, detail)) => (Outcome::Pass, detail),
                Ok((false, detail)) => (Outcome::Fail, detail),
                Err(e @ Error::CapExceeded(_)) => (Outcome::Skipped, json!({ "reason": e.to_string() })),
                Err(e) => (Outcome::Fail, json!({ "error": e.to_string() })),
            }
        };
        Check { name: task.name.to_string(), input: task.input, outcome, detail, informational: task.informational }
    });
    let budget_exhausted = checks.iter().any(|c| c.outcome == Outcome::Skipped && c.detail.get("reason") == Some(&json!("time budget exhausted")));
    let checks_run = checks.iter().filter(|c| c.outcome != Outcome::Skipped).count();
    let checks_failed = checks.iter().filter(|c| c.outcome == Outcome::Fail && !c.informational).count();
    Ok(VerifySummary { suite: suite.name().into(), passed: checks_failed == 0, checks_run, checks_failed, budget_exhausted, checks })
}
