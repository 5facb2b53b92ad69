//! Closed-form regime predictions and the velocity-spectrum grid.
//!
//! Predictions depend on `min(l1, l2)` and `max(l1, l2)` only. The raw
//! dynamics are not label-symmetric because cluster 1 wins ties, so the
//! normalization happens here and nowhere in the simulator.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{validate_geometry, SystemParams, SystemState};
use crate::ratio::ExactRatio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModePrediction {
    /// `l1 + l2 <= n`: every particle moves at every step.
    FreeMovement,
    /// Neither free nor collapsing: period `l1 + l2`, velocity `n / (l1 + l2)`.
    ClusterMotion { period: usize, velocity: ExactRatio },
    /// `min(l1, l2) > n - d`: the system freezes.
    Collapse,
}

impl ModePrediction {
    pub fn velocity(&self) -> ExactRatio {
        match self {
            ModePrediction::FreeMovement => ExactRatio::ONE,
            ModePrediction::ClusterMotion { velocity, .. } => *velocity,
            ModePrediction::Collapse => ExactRatio::ZERO,
        }
    }

    /// Predicted limit-cycle period: `n` for free flow, `l1 + l2` for
    /// cluster motion, 1 for the collapse fixed point.
    pub fn period(&self, params: &SystemParams) -> usize {
        match self {
            ModePrediction::FreeMovement => params.n(),
            ModePrediction::ClusterMotion { period, .. } => *period,
            ModePrediction::Collapse => 1,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ModePrediction::FreeMovement => "free",
            ModePrediction::ClusterMotion { .. } => "cluster-motion",
            ModePrediction::Collapse => "collapse",
        }
    }

    /// Single-character region code: `.` free, `+` cluster motion, `#` collapse.
    pub fn glyph(&self) -> char {
        match self {
            ModePrediction::FreeMovement => '.',
            ModePrediction::ClusterMotion { .. } => '+',
            ModePrediction::Collapse => '#',
        }
    }
}

fn ordered_lengths(params: &SystemParams) -> (usize, usize) {
    let (a, b) = (params.l1(), params.l2());
    (a.min(b), a.max(b))
}

pub fn free_movement_possible(params: &SystemParams) -> bool {
    params.l1() + params.l2() <= params.n()
}

/// The closed-form collapse criterion `min(l1, l2) > n - d`.
///
/// This is the predicted condition only; `verify::deadlock_census` measures
/// which states actually freeze.
pub fn collapse_possible(params: &SystemParams) -> bool {
    let (lmin, _) = ordered_lengths(params);
    lmin > params.n() - params.d()
}

pub fn predict(params: &SystemParams) -> ModePrediction {
    if free_movement_possible(params) {
        ModePrediction::FreeMovement
    } else if collapse_possible(params) {
        ModePrediction::Collapse
    } else {
        let total = params.l1() + params.l2();
        ModePrediction::ClusterMotion {
            period: total,
            velocity: ExactRatio::new(params.n() as u64, total as u64),
        }
    }
}

/// States at which a delay ends on a non-trivial cycle:
/// `(l1, 0)`, `(0, l2)`, `(d + l1, d)`, `(d, d + l2)`, all mod `n`.
pub fn lemma2_states(params: &SystemParams) -> [SystemState; 4] {
    let n = params.n();
    let d = params.d();
    let (l1, l2) = (params.l1(), params.l2());
    [
        SystemState::new(l1 % n, 0),
        SystemState::new(0, l2 % n),
        SystemState::new((d + l1) % n, d),
        SystemState::new(d, (d + l2) % n),
    ]
}

/// Predictions over every `(l1, l2)` in `[1, n-1]^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumGrid {
    pub n: usize,
    pub d: usize,
    /// Row-major, `cells[(l1 - 1) * (n - 1) + (l2 - 1)]`.
    cells: Vec<ModePrediction>,
}

impl SpectrumGrid {
    pub fn side(&self) -> usize {
        self.n - 1
    }

    /// Panics if either length is outside `[1, n-1]`.
    pub fn get(&self, l1: usize, l2: usize) -> ModePrediction {
        assert!((1..self.n).contains(&l1) && (1..self.n).contains(&l2));
        self.cells[(l1 - 1) * self.side() + (l2 - 1)]
    }

    /// `((l1, l2), prediction)` with `l1` outer, both ascending.
    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), ModePrediction)> + '_ {
        let side = self.side();
        self.cells
            .iter()
            .enumerate()
            .map(move |(i, m)| ((i / side + 1, i % side + 1), *m))
    }
}

pub fn spectrum_grid(n: usize, d: usize) -> Result<SpectrumGrid> {
    validate_geometry(n, d)?;
    let mut cells = Vec::with_capacity((n - 1) * (n - 1));
    for l1 in 1..n {
        for l2 in 1..n {
            cells.push(predict(&SystemParams::new(n, d, l1, l2)?));
        }
    }
    Ok(SpectrumGrid { n, d, cells })
}
