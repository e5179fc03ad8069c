use std::fmt;
use std::str::FromStr;

use crate::scalar::Scalar;

/// How remainder degrees are grouped into solver steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Scheduler {
    /// One homogeneous degree per step, consecutively.
    Degree,
    /// With lowest remainder degree `d`, every degree in `d..2d-1` at once.
    #[default]
    Doubling,
}

impl fmt::Display for Scheduler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheduler::Degree => "degree",
            Scheduler::Doubling => "doubling",
        })
    }
}

impl FromStr for Scheduler {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "degree" => Ok(Scheduler::Degree),
            "doubling" => Ok(Scheduler::Doubling),
            other => Err(format!("unknown scheduler `{other}` (expected degree or doubling)")),
        }
    }
}

impl Scheduler {
    /// Degrees treated in the next step.
    ///
    /// `lowest` is the lowest remainder degree, `last` the highest degree
    /// treated so far and `max` the truncation order.
    pub fn next_block(self, lowest: u32, last: Option<u32>, max: u32) -> Vec<u32> {
        match self {
            Scheduler::Degree => {
                let e = last.map_or(lowest, |l| l + 1);
                if e <= max {
                    vec![e]
                } else {
                    Vec::new()
                }
            }
            Scheduler::Doubling => {
                let hi = (2 * lowest - 2).min(max);
                (lowest..=hi).collect()
            }
        }
    }
}

/// Engine settings shared by all normalizations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineOptions {
    pub scheduler: Scheduler,
    /// Radius of the diagnostic metric.
    pub radius: Scalar,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            scheduler: Scheduler::Doubling,
            radius: Scalar::from_integer(1.into()),
        }
    }
}

impl EngineOptions {
    pub fn with_scheduler(scheduler: Scheduler) -> Self {
        EngineOptions {
            scheduler,
            ..EngineOptions::default()
        }
    }
}

/// Which coboundary equation a step solved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    /// `H^2` step on a bracket.
    Bracket,
    /// `H^1` step on an action or on the s-r brackets.
    Action,
    /// Both, `H^2` first.
    Levi,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub index: usize,
    pub kind: StepKind,
    pub degrees: Vec<u32>,
    pub lowest_before: Option<u32>,
    pub lowest_after: Option<u32>,
    pub norm_before: f64,
    pub norm_after: f64,
    pub obstructed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationTrace {
    pub scheduler: Scheduler,
    pub radius: Scalar,
    pub steps: Vec<StepRecord>,
}

impl IterationTrace {
    pub fn new(opts: &EngineOptions) -> Self {
        IterationTrace {
            scheduler: opts.scheduler,
            radius: opts.radius.clone(),
            steps: Vec::new(),
        }
    }

    /// Degrees strictly increase and every completed step clears what it treated.
    pub fn is_consistent(&self) -> bool {
        let mut last = 0;
        for s in &self.steps {
            for &d in &s.degrees {
                if d <= last {
                    return false;
                }
                last = d;
            }
            if !s.obstructed {
                if let Some(after) = s.lowest_after {
                    if after <= last {
                        return false;
                    }
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub index: usize,
    pub lowest_degree: Option<u32>,
    pub norm: f64,
    /// `||R_{nu+1}|| / ||R_nu||^2`, when both are defined and the denominator is nonzero.
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    pub scheduler: Scheduler,
    pub rows: Vec<ReportRow>,
    /// Under the doubling scheduler, `lowest_degree(R_nu) >= 2^nu` for all steps.
    pub doubling_law: Option<bool>,
}

pub fn convergence_report(trace: &IterationTrace) -> ConvergenceReport {
    let rows: Vec<ReportRow> = trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let ratio = trace.steps.get(i + 1).and_then(|next| {
                (s.norm_before > 0.0).then(|| next.norm_before / (s.norm_before * s.norm_before))
            });
            ReportRow {
                index: s.index,
                lowest_degree: s.lowest_before,
                norm: s.norm_before,
                ratio,
            }
        })
        .collect();
    let doubling_law = (trace.scheduler == Scheduler::Doubling).then(|| {
        rows.iter().all(|r| match r.lowest_degree {
            Some(d) => r.index >= 32 || u64::from(d) >= 1u64 << r.index,
            None => true,
        })
    });
    ConvergenceReport {
        scheduler: trace.scheduler,
        rows,
        doubling_law,
    }
}
