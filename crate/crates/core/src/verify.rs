//! Simulation against prediction: per-instance comparison, exhaustive
//! sweeps, deadlock census and golden proof traces.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{classify_empirical, find_limit_cycle, simulate, EmpiricalMode};
use crate::error::{ModelError, Result};
use crate::model::{
    at_node, blocked_unchecked, canonical_state, occupies_node, ClusterId, SystemParams,
    SystemState,
};
use crate::ratio::ExactRatio;
use crate::theory::{lemma2_states, predict, ModePrediction};

/// Primary label of a disagreement, listed in precedence order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DiscrepancyKind {
    CrossedDeadlock,
    ModeMismatch,
    PeriodMismatch,
    VelocityMismatch,
}

impl DiscrepancyKind {
    pub const ALL: [DiscrepancyKind; 4] = [
        DiscrepancyKind::CrossedDeadlock,
        DiscrepancyKind::ModeMismatch,
        DiscrepancyKind::PeriodMismatch,
        DiscrepancyKind::VelocityMismatch,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            DiscrepancyKind::CrossedDeadlock => "crossed-deadlock",
            DiscrepancyKind::ModeMismatch => "mode-mismatch",
            DiscrepancyKind::PeriodMismatch => "period-mismatch",
            DiscrepancyKind::VelocityMismatch => "velocity-mismatch",
        }
    }
}

impl fmt::Display for DiscrepancyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub params: SystemParams,
    pub x0: SystemState,
    pub transient: usize,
    pub period: usize,
    pub moves: [u64; 2],
    pub velocities: [ExactRatio; 2],
    pub empirical: EmpiricalMode,
    pub predicted: ModePrediction,
    pub agree: bool,
    pub discrepancy_kind: Option<DiscrepancyKind>,
}

impl InstanceReport {
    fn sort_key(&self) -> (usize, usize, usize, usize, usize, usize) {
        let p = &self.params;
        (p.n(), p.d(), p.l1(), p.l2(), self.x0.x1, self.x0.x2)
    }
}

/// Each cluster waits at a different node that the other cluster straddles.
pub fn is_crossed_deadlock(params: &SystemParams, state: SystemState) -> bool {
    let (Some(a1), Some(a2)) = (
        at_node(params, state, ClusterId::C1),
        at_node(params, state, ClusterId::C2),
    ) else {
        return false;
    };
    a1 != a2
        && occupies_node(params, state, ClusterId::C2, a1)
        && occupies_node(params, state, ClusterId::C1, a2)
}

fn mode_matches(empirical: &EmpiricalMode, predicted: &ModePrediction) -> bool {
    matches!(
        (empirical, predicted),
        (EmpiricalMode::FreeMovement, ModePrediction::FreeMovement)
            | (EmpiricalMode::Collapse, ModePrediction::Collapse)
            | (
                EmpiricalMode::Intermediate { .. },
                ModePrediction::ClusterMotion { .. }
            )
    )
}

struct Evaluation {
    report: InstanceReport,
    /// `Some(hit)` for intermediate cycles: whether a delay-end state is on the cycle.
    lemma2_hit: Option<bool>,
}

fn evaluate(params: &SystemParams, x0: SystemState) -> Result<Evaluation> {
    let cycle = find_limit_cycle(params, x0)?;
    let empirical = classify_empirical(&cycle);
    let predicted = predict(params);
    let v = predicted.velocity();

    let kind = if empirical == EmpiricalMode::Collapse
        && predicted != ModePrediction::Collapse
        && is_crossed_deadlock(params, cycle.cycle_states[0])
    {
        Some(DiscrepancyKind::CrossedDeadlock)
    } else if !mode_matches(&empirical, &predicted) {
        Some(DiscrepancyKind::ModeMismatch)
    } else if cycle.period != predicted.period(params) {
        Some(DiscrepancyKind::PeriodMismatch)
    } else if cycle.velocities != [v, v] {
        Some(DiscrepancyKind::VelocityMismatch)
    } else {
        None
    };

    let lemma2_hit = matches!(empirical, EmpiricalMode::Intermediate { .. }).then(|| {
        let targets = lemma2_states(params);
        cycle.cycle_states.iter().any(|s| targets.contains(s))
    });

    Ok(Evaluation {
        report: InstanceReport {
            params: *params,
            x0,
            transient: cycle.transient_len,
            period: cycle.period,
            moves: cycle.moves,
            velocities: cycle.velocities,
            empirical,
            predicted,
            agree: kind.is_none(),
            discrepancy_kind: kind,
        },
        lemma2_hit,
    })
}

/// Finds the limit cycle from `x0` and compares it with the closed-form
/// prediction. Velocities are compared as exact ratios.
pub fn verify_instance(params: &SystemParams, x0: SystemState) -> Result<InstanceReport> {
    evaluate(params, x0).map(|e| e.report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialStatePolicy {
    AllAdmissible,
    Canonical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRange {
    pub n_min: usize,
    pub n_max: usize,
    pub policy: InitialStatePolicy,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscrepancyCounts {
    pub crossed_deadlock: usize,
    pub mode_mismatch: usize,
    pub period_mismatch: usize,
    pub velocity_mismatch: usize,
}

impl DiscrepancyCounts {
    pub fn get(&self, kind: DiscrepancyKind) -> usize {
        match kind {
            DiscrepancyKind::CrossedDeadlock => self.crossed_deadlock,
            DiscrepancyKind::ModeMismatch => self.mode_mismatch,
            DiscrepancyKind::PeriodMismatch => self.period_mismatch,
            DiscrepancyKind::VelocityMismatch => self.velocity_mismatch,
        }
    }

    fn bump(&mut self, kind: DiscrepancyKind) {
        match kind {
            DiscrepancyKind::CrossedDeadlock => self.crossed_deadlock += 1,
            DiscrepancyKind::ModeMismatch => self.mode_mismatch += 1,
            DiscrepancyKind::PeriodMismatch => self.period_mismatch += 1,
            DiscrepancyKind::VelocityMismatch => self.velocity_mismatch += 1,
        }
    }

    pub fn total(&self) -> usize {
        DiscrepancyKind::ALL.iter().map(|k| self.get(*k)).sum()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionTally {
    pub instances: usize,
    pub agreements: usize,
}

impl RegionTally {
    /// Agreement rate as an exact ratio; 1 for an empty region.
    pub fn agreement_rate(&self) -> ExactRatio {
        if self.instances == 0 {
            ExactRatio::ONE
        } else {
            ExactRatio::new(self.agreements as u64, self.instances as u64)
        }
    }
}

/// Tallies keyed by the predicted region.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionTallies {
    pub free: RegionTally,
    pub cluster: RegionTally,
    pub collapse: RegionTally,
}

impl RegionTallies {
    fn slot(&mut self, predicted: &ModePrediction) -> &mut RegionTally {
        match predicted {
            ModePrediction::FreeMovement => &mut self.free,
            ModePrediction::ClusterMotion { .. } => &mut self.cluster,
            ModePrediction::Collapse => &mut self.collapse,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTotals {
    pub instances: usize,
    pub agreements: usize,
    pub discrepancies: DiscrepancyCounts,
}

/// Informational metrics that are not part of the agreement verdict.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSurvey {
    /// Intermediate cycles seen.
    pub intermediate_cycles: usize,
    /// Intermediate cycles passing through at least one delay-end state.
    pub lemma2_covered: usize,
    /// Cycles with `v1 != v2`.
    pub asymmetric_cycles: usize,
    /// Asymmetric cycles that carry no discrepancy label.
    pub asymmetric_unclassified: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub range: SweepRange,
    pub totals: SweepTotals,
    pub regions: RegionTallies,
    pub survey: CycleSurvey,
    pub rows: Vec<InstanceReport>,
}

impl SweepReport {
    pub fn discrepancies(&self) -> impl Iterator<Item = &InstanceReport> {
        self.rows.iter().filter(|r| !r.agree)
    }
}

/// Every valid parameter tuple with `n` in range, lexicographic.
pub fn parameter_space(n_min: usize, n_max: usize) -> Vec<SystemParams> {
    let mut out = Vec::new();
    for n in n_min.max(2)..=n_max {
        for d in 1..=n / 2 {
            for l1 in 1..n {
                for l2 in 1..n {
                    out.push(SystemParams::new(n, d, l1, l2).expect("enumerated params are valid"));
                }
            }
        }
    }
    out
}

fn initial_states(params: &SystemParams, policy: InitialStatePolicy) -> Vec<SystemState> {
    match policy {
        InitialStatePolicy::AllAdmissible => params.admissible_states().collect(),
        InitialStatePolicy::Canonical => vec![canonical_state(params)],
    }
}

/// Exhaustive comparison over all valid parameters with `n_min <= n <= n_max`.
///
/// Work is spread over the ambient rayon pool; rows are sorted before
/// aggregation so the result does not depend on the worker count.
pub fn sweep(n_min: usize, n_max: usize, policy: InitialStatePolicy) -> Result<SweepReport> {
    if n_min < 2 || n_min > n_max {
        return Err(ModelError::InvalidRange(format!(
            "need 2 <= n_min <= n_max, got n_min = {n_min}, n_max = {n_max}"
        )));
    }
    let mut evaluations: Vec<Evaluation> = parameter_space(n_min, n_max)
        .par_iter()
        .flat_map_iter(|params| {
            initial_states(params, policy)
                .into_iter()
                .map(move |x0| evaluate(params, x0).expect("enumerated states are admissible"))
        })
        .collect();
    evaluations.sort_by_key(|e| e.report.sort_key());

    let mut totals = SweepTotals::default();
    let mut regions = RegionTallies::default();
    let mut survey = CycleSurvey::default();
    for e in &evaluations {
        let r = &e.report;
        totals.instances += 1;
        let region = regions.slot(&r.predicted);
        region.instances += 1;
        if r.agree {
            totals.agreements += 1;
            region.agreements += 1;
        }
        if let Some(kind) = r.discrepancy_kind {
            totals.discrepancies.bump(kind);
        }
        if let Some(hit) = e.lemma2_hit {
            survey.intermediate_cycles += 1;
            survey.lemma2_covered += usize::from(hit);
        }
        if r.velocities[0] != r.velocities[1] {
            survey.asymmetric_cycles += 1;
            survey.asymmetric_unclassified += usize::from(r.discrepancy_kind.is_none());
        }
    }

    Ok(SweepReport {
        range: SweepRange {
            n_min,
            n_max,
            policy,
        },
        totals,
        regions,
        survey,
        rows: evaluations.into_iter().map(|e| e.report).collect(),
    })
}

/// Admissible states in which neither cluster can move, lexicographic.
pub fn deadlock_census(params: &SystemParams) -> Vec<SystemState> {
    params
        .admissible_states()
        .filter(|s| {
            blocked_unchecked(params, *s, ClusterId::C1)
                && blocked_unchecked(params, *s, ClusterId::C2)
        })
        .collect()
}

/// The two crossed-deadlock families in closed form:
/// `(d-1, n-1)` when `l2 >= n-d+1` and `l1 >= d+1`, and
/// `(n-1, d-1)` when `l1 >= n-d+1` and `l2 >= d+1`.
pub fn crossed_deadlock_family(params: &SystemParams) -> Vec<SystemState> {
    let (n, d, l1, l2) = (params.n(), params.d(), params.l1(), params.l2());
    let mut out = Vec::with_capacity(2);
    if l2 > n - d && l1 > d {
        out.push(SystemState::new(d - 1, n - 1));
    }
    if l1 > n - d && l2 > d {
        out.push(SystemState::new(n - 1, d - 1));
    }
    out.sort();
    out
}

/// Proof-sequence checkpoints instantiated with concrete parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GoldenTrace {
    pub label: &'static str,
    /// Which argument the sequence comes from, e.g. `free-flow/case4`.
    pub source: &'static str,
    pub params: SystemParams,
    /// `(t, state)` pairs; the first entry is `t = 0`, times strictly increase.
    pub checkpoints: Vec<(usize, SystemState)>,
    /// False for sequences known not to hold under the synchronous rules.
    pub reproduces: bool,
}

impl GoldenTrace {
    pub fn start(&self) -> SystemState {
        self.checkpoints[0].1
    }

    pub fn horizon(&self) -> usize {
        self.checkpoints.last().map_or(0, |c| c.0)
    }
}

fn trace(
    label: &'static str,
    source: &'static str,
    (n, d, l1, l2): (usize, usize, usize, usize),
    checkpoints: &[(usize, (usize, usize))],
    reproduces: bool,
) -> GoldenTrace {
    GoldenTrace {
        label,
        source,
        params: SystemParams::new(n, d, l1, l2).expect("golden params are valid"),
        checkpoints: checkpoints
            .iter()
            .map(|&(t, (x1, x2))| (t, SystemState::new(x1, x2)))
            .collect(),
        reproduces,
    }
}

/// Checkpoint sequences for the four free-flow cases, cluster-motion case 1
/// and the collapse approach.
///
/// Normalized readings: the case-4 bound `l1 + l2 <= 1` is `<= n`, the
/// cell `1 - l1` is `n - l1`, and the case-2 time `n + l2` is `n - l2`.
pub fn golden_traces() -> Vec<GoldenTrace> {
    vec![
        // l2 <= d
        trace(
            "free/case1/from-(l1,0)",
            "free-flow/case1",
            (10, 4, 2, 3),
            &[
                (0, (2, 0)),
                (2, (4, 2)),
                (4, (6, 4)),
                (8, (0, 8)),
                (10, (2, 0)),
            ],
            true,
        ),
        trace(
            "free/case1/from-(0,l2)",
            "free-flow/case1",
            (10, 4, 2, 3),
            &[
                (0, (0, 3)),
                (1, (1, 4)),
                (4, (4, 7)),
                (7, (7, 0)),
                (10, (0, 3)),
            ],
            true,
        ),
        // l1 <= d < l2 < n-d
        trace(
            "free/case2/from-(l1,0)",
            "free-flow/case2",
            (10, 3, 2, 5),
            &[
                (0, (2, 0)),
                (1, (3, 1)),
                (3, (5, 3)),
                (8, (0, 8)),
                (10, (2, 0)),
            ],
            true,
        ),
        trace(
            "free/case2/from-(0,l2)",
            "free-flow/case2",
            (10, 3, 2, 5),
            &[
                (0, (0, 5)),
                (3, (3, 8)),
                (5, (5, 0)),
                (8, (8, 3)),
                (10, (0, 5)),
            ],
            true,
        ),
        // l1 <= d < l2, l2 >= n-d
        trace(
            "free/case3/from-(l1,0)",
            "free-flow/case3",
            (10, 3, 2, 7),
            &[
                (0, (2, 0)),
                (1, (3, 1)),
                (3, (5, 3)),
                (8, (0, 8)),
                (10, (2, 0)),
            ],
            true,
        ),
        trace(
            "free/case3/from-(0,l2)",
            "free-flow/case3",
            (10, 3, 2, 7),
            &[(0, (0, 7)), (3, (3, 0)), (6, (6, 3)), (10, (0, 7))],
            true,
        ),
        // l1 > d
        trace(
            "free/case4/from-(l1,0)",
            "free-flow/case4",
            (10, 3, 4, 5),
            &[
                (0, (4, 0)),
                (3, (7, 3)),
                (6, (0, 6)),
                (9, (3, 9)),
                (10, (4, 0)),
            ],
            true,
        ),
        trace(
            "free/case4/from-(0,l2)",
            "free-flow/case4",
            (10, 3, 4, 5),
            &[(0, (0, 5)), (3, (3, 8)), (5, (5, 0)), (10, (0, 5))],
            true,
        ),
        // Cluster 1 would have to pause at cell 0, which no blocking rule forces.
        trace(
            "cluster/case1/from-(l1,0)",
            "cluster-motion/case1",
            (7, 2, 2, 6),
            &[
                (0, (2, 0)),
                (2, (4, 2)),
                (5, (0, 5)),
                (6, (0, 6)),
                (7, (1, 0)),
                (8, (2, 0)),
            ],
            false,
        ),
        // Ends at (d, 0), which is not a fixed point of the literal rules.
        trace(
            "collapse/from-(0,l2)",
            "collapse/approach",
            (10, 3, 8, 9),
            &[(0, (0, 9)), (1, (1, 0)), (3, (3, 0))],
            false,
        ),
    ]
}

/// Simulated states at each checkpoint time.
pub fn observed_checkpoints(trace: &GoldenTrace) -> Result<Vec<(usize, SystemState)>> {
    let run = simulate(&trace.params, trace.start(), trace.horizon())?;
    Ok(trace
        .checkpoints
        .iter()
        .map(|&(t, _)| (t, run.states[t]))
        .collect())
}

/// True iff every checkpoint matches the simulation exactly.
pub fn check_golden(trace: &GoldenTrace) -> bool {
    observed_checkpoints(trace).is_ok_and(|obs| obs == trace.checkpoints)
}
