//! Trajectories, limit cycles and exact average velocities.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::model::{self, is_admissible, step_unchecked, SystemParams, SystemState};
use crate::ratio::ExactRatio;

/// States `x(0..=steps)` together with running move counts `H_i(t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: SystemParams,
    pub states: Vec<SystemState>,
    /// `cumulative_moves[t] = [H_1(t), H_2(t)]`.
    pub cumulative_moves: Vec<[u64; 2]>,
    /// `moves[t]` records which clusters moved between `t` and `t+1`.
    pub moves: Vec<[bool; 2]>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> SystemState {
        *self.states.last().expect("trajectory holds at least x(0)")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleInfo {
    pub transient_len: usize,
    pub period: usize,
    pub cycle_states: Vec<SystemState>,
    /// Cells advanced per period by cluster 1 and cluster 2.
    pub moves: [u64; 2],
    pub velocities: [ExactRatio; 2],
}

impl CycleInfo {
    pub fn v1(&self) -> ExactRatio {
        self.velocities[0]
    }

    pub fn v2(&self) -> ExactRatio {
        self.velocities[1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EmpiricalMode {
    FreeMovement,
    Collapse,
    Intermediate {
        period: usize,
        v1: ExactRatio,
        v2: ExactRatio,
    },
}

impl EmpiricalMode {
    pub fn label(&self) -> &'static str {
        match self {
            EmpiricalMode::FreeMovement => "free",
            EmpiricalMode::Collapse => "collapse",
            EmpiricalMode::Intermediate { .. } => "intermediate",
        }
    }
}

fn ensure_start(params: &SystemParams, x0: SystemState) -> Result<()> {
    params.check_range(x0)?;
    if !is_admissible(params, x0) {
        return Err(ModelError::Inadmissible(x0));
    }
    Ok(())
}

pub fn simulate(params: &SystemParams, x0: SystemState, steps: usize) -> Result<Trajectory> {
    ensure_start(params, x0)?;
    let mut states = Vec::with_capacity(steps + 1);
    let mut cumulative_moves = Vec::with_capacity(steps + 1);
    let mut moves = Vec::with_capacity(steps);
    let mut state = x0;
    let mut h = [0u64; 2];
    states.push(state);
    cumulative_moves.push(h);
    for _ in 0..steps {
        let out = step_unchecked(params, state);
        h[0] += u64::from(out.moved1);
        h[1] += u64::from(out.moved2);
        state = out.next;
        states.push(state);
        cumulative_moves.push(h);
        moves.push([out.moved1, out.moved2]);
    }
    Ok(Trajectory {
        params: *params,
        states,
        cumulative_moves,
        moves,
    })
}

/// Runs until the first repeated state, recording first-visit times.
pub fn find_limit_cycle(params: &SystemParams, x0: SystemState) -> Result<CycleInfo> {
    ensure_start(params, x0)?;
    let n = params.n();
    let mut first_visit: Vec<Option<usize>> = vec![None; n * n];
    let mut path = Vec::new();
    let mut state = x0;
    let mut t = 0usize;
    let transient_len = loop {
        let slot = &mut first_visit[state.x1 * n + state.x2];
        if let Some(seen) = *slot {
            break seen;
        }
        *slot = Some(t);
        path.push(state);
        state = step_unchecked(params, state).next;
        t += 1;
    };
    let period = t - transient_len;
    let cycle_states = path.split_off(transient_len);

    let mut moves = [0u64; 2];
    for &s in &cycle_states {
        let out = step_unchecked(params, s);
        moves[0] += u64::from(out.moved1);
        moves[1] += u64::from(out.moved2);
    }
    let velocities = average_velocities_from(moves, period);
    Ok(CycleInfo {
        transient_len,
        period,
        cycle_states,
        moves,
        velocities,
    })
}

fn average_velocities_from(moves: [u64; 2], period: usize) -> [ExactRatio; 2] {
    let t = period as u64;
    [ExactRatio::new(moves[0], t), ExactRatio::new(moves[1], t)]
}

/// `(A_1 / T, A_2 / T)` in lowest terms.
pub fn average_velocities(cycle: &CycleInfo) -> (ExactRatio, ExactRatio) {
    let [v1, v2] = average_velocities_from(cycle.moves, cycle.period);
    (v1, v2)
}

/// Both clusters blocked: the state is a fixed point.
pub fn is_deadlock(params: &SystemParams, state: SystemState) -> Result<bool> {
    let out = model::step(params, state)?;
    Ok(!out.moved1 && !out.moved2)
}

pub fn classify_empirical(cycle: &CycleInfo) -> EmpiricalMode {
    let t = cycle.period as u64;
    match cycle.moves {
        [a1, a2] if a1 == t && a2 == t => EmpiricalMode::FreeMovement,
        [0, 0] => EmpiricalMode::Collapse,
        _ => {
            let (v1, v2) = average_velocities(cycle);
            EmpiricalMode::Intermediate {
                period: cycle.period,
                v1,
                v2,
            }
        }
    }
}
