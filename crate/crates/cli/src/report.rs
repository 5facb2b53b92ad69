//! Wire formats. Field names here are the stable JSON/CSV schema.

use contour_duo::dynamics::Trajectory;
use contour_duo::verify::{CycleSurvey, DiscrepancyCounts, RegionTally, SweepReport};
use contour_duo::{ExactRatio, InstanceReport, ModePrediction, SystemParams, SystemState};
use serde::Serialize;

const DECIMAL_DIGITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParamsJson {
    pub n: usize,
    pub d: usize,
    pub l1: usize,
    pub l2: usize,
}

impl From<&SystemParams> for ParamsJson {
    fn from(p: &SystemParams) -> Self {
        Self {
            n: p.n(),
            d: p.d(),
            l1: p.l1(),
            l2: p.l2(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StateJson {
    pub x1: usize,
    pub x2: usize,
}

impl From<SystemState> for StateJson {
    fn from(s: SystemState) -> Self {
        Self { x1: s.x1, x2: s.x2 }
    }
}

/// Exact ratio plus a truncated decimal rendering for humans.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioJson {
    pub num: u64,
    pub den: u64,
    pub decimal: String,
}

impl From<ExactRatio> for RatioJson {
    fn from(r: ExactRatio) -> Self {
        Self {
            num: r.numerator(),
            den: r.denominator(),
            decimal: r.to_decimal_string(DECIMAL_DIGITS),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedJson {
    pub mode: &'static str,
    pub period: usize,
    pub v: RatioJson,
}

impl PredictedJson {
    pub fn new(params: &SystemParams, p: &ModePrediction) -> Self {
        Self {
            mode: p.label(),
            period: p.period(params),
            v: p.velocity().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceJson {
    pub params: ParamsJson,
    pub x0: StateJson,
    pub transient: usize,
    pub period: usize,
    pub moves: [u64; 2],
    pub velocity: [RatioJson; 2],
    pub empirical_mode: &'static str,
    pub predicted: PredictedJson,
    pub agree: bool,
    pub discrepancy_kind: Option<&'static str>,
}

impl From<&InstanceReport> for InstanceJson {
    fn from(r: &InstanceReport) -> Self {
        Self {
            params: (&r.params).into(),
            x0: r.x0.into(),
            transient: r.transient,
            period: r.period,
            moves: r.moves,
            velocity: [r.velocities[0].into(), r.velocities[1].into()],
            empirical_mode: r.empirical.label(),
            predicted: PredictedJson::new(&r.params, &r.predicted),
            agree: r.agree,
            discrepancy_kind: r.discrepancy_kind.map(|k| k.label()),
        }
    }
}

/// One CSV row of an instance or sweep report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceCsv {
    pub n: usize,
    pub d: usize,
    pub l1: usize,
    pub l2: usize,
    pub x1: usize,
    pub x2: usize,
    pub transient: usize,
    pub period: usize,
    pub a1: u64,
    pub a2: u64,
    pub v1_num: u64,
    pub v1_den: u64,
    pub v2_num: u64,
    pub v2_den: u64,
    pub empirical: &'static str,
    pub predicted: &'static str,
    pub agree: bool,
    pub discrepancy: &'static str,
}

impl From<&InstanceReport> for InstanceCsv {
    fn from(r: &InstanceReport) -> Self {
        let p = &r.params;
        Self {
            n: p.n(),
            d: p.d(),
            l1: p.l1(),
            l2: p.l2(),
            x1: r.x0.x1,
            x2: r.x0.x2,
            transient: r.transient,
            period: r.period,
            a1: r.moves[0],
            a2: r.moves[1],
            v1_num: r.velocities[0].numerator(),
            v1_den: r.velocities[0].denominator(),
            v2_num: r.velocities[1].numerator(),
            v2_den: r.velocities[1].denominator(),
            empirical: r.empirical.label(),
            predicted: r.predicted.label(),
            agree: r.agree,
            discrepancy: r.discrepancy_kind.map_or("", |k| k.label()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrajectoryRow {
    pub t: usize,
    pub x1: usize,
    pub x2: usize,
    /// Whether each cluster moved on the step that produced this state.
    pub moved1: bool,
    pub moved2: bool,
    pub h1: u64,
    pub h2: u64,
}

pub fn trajectory_rows(traj: &Trajectory) -> Vec<TrajectoryRow> {
    traj.states
        .iter()
        .enumerate()
        .map(|(t, s)| {
            let moved = if t == 0 {
                [false; 2]
            } else {
                traj.moves[t - 1]
            };
            let h = traj.cumulative_moves[t];
            TrajectoryRow {
                t,
                x1: s.x1,
                x2: s.x2,
                moved1: moved[0],
                moved2: moved[1],
                h1: h[0],
                h2: h[1],
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrajectoryJson {
    pub params: ParamsJson,
    pub x0: StateJson,
    pub steps: usize,
    pub rows: Vec<TrajectoryRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiagramCell {
    pub l1: usize,
    pub l2: usize,
    pub mode: char,
    pub v_num: u64,
    pub v_den: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiagramJson {
    pub n: usize,
    pub d: usize,
    pub source: &'static str,
    pub cells: Vec<DiagramCell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRangeJson {
    pub n_min: usize,
    pub n_max: usize,
    pub states: &'static str,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionJson {
    pub instances: usize,
    pub agreements: usize,
    pub agreement_rate: RatioJson,
}

impl From<&RegionTally> for RegionJson {
    fn from(t: &RegionTally) -> Self {
        Self {
            instances: t.instances,
            agreements: t.agreements,
            agreement_rate: t.agreement_rate().into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionsJson {
    pub free: RegionJson,
    pub cluster: RegionJson,
    pub collapse: RegionJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TotalsJson {
    pub instances: usize,
    pub agreements: usize,
    pub discrepancies: DiscrepancyCounts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepJson {
    pub range: SweepRangeJson,
    pub totals: TotalsJson,
    pub regions: RegionsJson,
    pub survey: CycleSurvey,
    pub rows: Vec<InstanceJson>,
}

impl From<&SweepReport> for SweepJson {
    fn from(r: &SweepReport) -> Self {
        use contour_duo::InitialStatePolicy;
        Self {
            range: SweepRangeJson {
                n_min: r.range.n_min,
                n_max: r.range.n_max,
                states: match r.range.policy {
                    InitialStatePolicy::AllAdmissible => "all",
                    InitialStatePolicy::Canonical => "canonical",
                },
            },
            totals: TotalsJson {
                instances: r.totals.instances,
                agreements: r.totals.agreements,
                discrepancies: r.totals.discrepancies,
            },
            regions: RegionsJson {
                free: (&r.regions.free).into(),
                cluster: (&r.regions.cluster).into(),
                collapse: (&r.regions.collapse).into(),
            },
            survey: r.survey,
            rows: r.rows.iter().map(InstanceJson::from).collect(),
        }
    }
}
