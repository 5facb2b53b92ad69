//! The two-contour system and its synchronous update.
//!
//! Each contour is a ring of `n` cells numbered in the direction of
//! movement. Node 1 sits between cells `n-1` and `0`, node 2 between cells
//! `d-1` and `d`, on both contours. A cluster is a rigid block of `l`
//! particles; its position is the cell of its leading particle.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Contour size, node-2 offset and cluster lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SystemParams {
    n: usize,
    d: usize,
    l1: usize,
    l2: usize,
}

impl SystemParams {
    /// Validates `n >= 2`, `1 <= d`, `2d <= n` and `1 <= l_i <= n-1`.
    pub fn new(n: usize, d: usize, l1: usize, l2: usize) -> Result<Self> {
        validate_geometry(n, d)?;
        for (name, l) in [("l1", l1), ("l2", l2)] {
            if l == 0 || l >= n {
                return Err(ModelError::InvalidParams(format!(
                    "{name} = {l} must lie in [1, {}]",
                    n - 1
                )));
            }
        }
        Ok(Self { n, d, l1, l2 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn l1(&self) -> usize {
        self.l1
    }

    pub fn l2(&self) -> usize {
        self.l2
    }

    pub fn len(&self, cluster: ClusterId) -> usize {
        match cluster {
            ClusterId::C1 => self.l1,
            ClusterId::C2 => self.l2,
        }
    }

    /// Builds a state after checking both coordinates are cell indices.
    pub fn state(&self, x1: usize, x2: usize) -> Result<SystemState> {
        let state = SystemState::new(x1, x2);
        self.check_range(state)?;
        Ok(state)
    }

    pub(crate) fn check_range(&self, state: SystemState) -> Result<()> {
        if state.x1 >= self.n || state.x2 >= self.n {
            return Err(ModelError::StateOutOfRange { state, n: self.n });
        }
        Ok(())
    }

    /// Every state of the `n x n` grid, in lexicographic order.
    pub fn all_states(&self) -> impl Iterator<Item = SystemState> + '_ {
        (0..self.n).flat_map(move |x1| (0..self.n).map(move |x2| SystemState::new(x1, x2)))
    }

    /// All admissible states in lexicographic order.
    pub fn admissible_states(&self) -> impl Iterator<Item = SystemState> + '_ {
        self.all_states().filter(move |s| is_admissible(self, *s))
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} d={} l=({},{})", self.n, self.d, self.l1, self.l2)
    }
}

/// Checks the contour geometry alone (used where lengths are enumerated).
pub fn validate_geometry(n: usize, d: usize) -> Result<()> {
    if n < 2 {
        return Err(ModelError::InvalidParams(format!(
            "n = {n} must be at least 2"
        )));
    }
    if d == 0 || 2 * d > n {
        return Err(ModelError::InvalidParams(format!(
            "d = {d} must satisfy 1 <= d <= n/2 for n = {n}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClusterId {
    /// Wins ties at a shared node.
    C1,
    C2,
}

impl ClusterId {
    pub const BOTH: [ClusterId; 2] = [ClusterId::C1, ClusterId::C2];

    pub fn other(self) -> Self {
        match self {
            ClusterId::C1 => ClusterId::C2,
            ClusterId::C2 => ClusterId::C1,
        }
    }

    pub fn index(self) -> usize {
        match self {
            ClusterId::C1 => 0,
            ClusterId::C2 => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeId {
    Node1,
    Node2,
}

impl NodeId {
    pub const BOTH: [NodeId; 2] = [NodeId::Node1, NodeId::Node2];

    /// Cell just before the node.
    pub fn entry_cell(self, params: &SystemParams) -> usize {
        match self {
            NodeId::Node1 => params.n - 1,
            NodeId::Node2 => params.d - 1,
        }
    }

    /// Cell just past the node.
    pub fn exit_cell(self, params: &SystemParams) -> usize {
        match self {
            NodeId::Node1 => 0,
            NodeId::Node2 => params.d,
        }
    }
}

/// Leading-particle cells of both clusters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SystemState {
    pub x1: usize,
    pub x2: usize,
}

impl SystemState {
    pub const fn new(x1: usize, x2: usize) -> Self {
        Self { x1, x2 }
    }

    pub fn lead(&self, cluster: ClusterId) -> usize {
        match cluster {
            ClusterId::C1 => self.x1,
            ClusterId::C2 => self.x2,
        }
    }
}

impl fmt::Display for SystemState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x1, self.x2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub next: SystemState,
    pub moved1: bool,
    pub moved2: bool,
}

impl StepOutcome {
    pub fn moved(&self, cluster: ClusterId) -> bool {
        match cluster {
            ClusterId::C1 => self.moved1,
            ClusterId::C2 => self.moved2,
        }
    }
}

// A cell is covered when it lies at most l-1 cells behind the leader.
fn covers(params: &SystemParams, cluster: ClusterId, state: SystemState, cell: usize) -> bool {
    let n = params.n;
    (state.lead(cluster) + n - cell) % n < params.len(cluster)
}

/// Cells `(x_i - k) mod n` for `0 <= k < l_i`.
pub fn covered_cells(
    params: &SystemParams,
    cluster: ClusterId,
    state: SystemState,
) -> BTreeSet<usize> {
    let n = params.n;
    let lead = state.lead(cluster);
    (0..params.len(cluster))
        .map(|k| (lead + n - k) % n)
        .collect()
}

pub fn at_node(params: &SystemParams, state: SystemState, cluster: ClusterId) -> Option<NodeId> {
    let x = state.lead(cluster);
    NodeId::BOTH
        .into_iter()
        .find(|node| node.entry_cell(params) == x)
}

/// True when the node lies between two particles of the cluster.
pub fn occupies_node(
    params: &SystemParams,
    state: SystemState,
    cluster: ClusterId,
    node: NodeId,
) -> bool {
    covers(params, cluster, state, node.entry_cell(params))
        && covers(params, cluster, state, node.exit_cell(params))
}

pub fn is_admissible(params: &SystemParams, state: SystemState) -> bool {
    !NodeId::BOTH.into_iter().any(|node| {
        occupies_node(params, state, ClusterId::C1, node)
            && occupies_node(params, state, ClusterId::C2, node)
    })
}

fn ensure_admissible(params: &SystemParams, state: SystemState) -> Result<()> {
    params.check_range(state)?;
    if !is_admissible(params, state) {
        return Err(ModelError::Inadmissible(state));
    }
    Ok(())
}

// Occupation blocking takes precedence; the tie rule only delays cluster 2.
pub(crate) fn blocked_unchecked(
    params: &SystemParams,
    state: SystemState,
    cluster: ClusterId,
) -> bool {
    let Some(node) = at_node(params, state, cluster) else {
        return false;
    };
    let other = cluster.other();
    occupies_node(params, state, other, node)
        || (cluster == ClusterId::C2 && at_node(params, state, other) == Some(node))
}

pub fn is_blocked(params: &SystemParams, state: SystemState, cluster: ClusterId) -> Result<bool> {
    ensure_admissible(params, state)?;
    Ok(blocked_unchecked(params, state, cluster))
}

pub(crate) fn step_unchecked(params: &SystemParams, state: SystemState) -> StepOutcome {
    let n = params.n;
    let moved1 = !blocked_unchecked(params, state, ClusterId::C1);
    let moved2 = !blocked_unchecked(params, state, ClusterId::C2);
    let next = SystemState::new(
        if moved1 { (state.x1 + 1) % n } else { state.x1 },
        if moved2 { (state.x2 + 1) % n } else { state.x2 },
    );
    StepOutcome {
        next,
        moved1,
        moved2,
    }
}

/// One synchronous step: both blocking decisions read the time-t state.
pub fn step(params: &SystemParams, state: SystemState) -> Result<StepOutcome> {
    ensure_admissible(params, state)?;
    Ok(step_unchecked(params, state))
}

/// `(n-1, d-1)`: both leaders on node entry cells, always admissible.
pub fn canonical_state(params: &SystemParams) -> SystemState {
    SystemState::new(params.n - 1, params.d - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, d: usize, l1: usize, l2: usize) -> SystemParams {
        SystemParams::new(n, d, l1, l2).unwrap()
    }

    fn s(x1: usize, x2: usize) -> SystemState {
        SystemState::new(x1, x2)
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SystemParams::new(1, 1, 1, 1).is_err());
        assert!(SystemParams::new(10, 0, 2, 2).is_err());
        assert!(SystemParams::new(10, 6, 2, 2).is_err());
        assert!(SystemParams::new(10, 3, 0, 2).is_err());
        assert!(SystemParams::new(10, 3, 2, 10).is_err());
        assert!(SystemParams::new(2, 1, 1, 1).is_ok());
        assert!(SystemParams::new(10, 5, 9, 9).is_ok());
    }

    #[test]
    fn state_out_of_range() {
        let params = p(6, 2, 2, 2);
        assert!(params.state(6, 0).is_err());
        assert!(matches!(
            step(&params, s(0, 7)),
            Err(ModelError::StateOutOfRange { .. })
        ));
    }

    #[test]
    fn covered_cells_examples() {
        assert_eq!(
            covered_cells(&p(10, 3, 2, 2), ClusterId::C1, s(0, 0)),
            BTreeSet::from([0, 9])
        );
        assert_eq!(
            covered_cells(&p(7, 2, 2, 6), ClusterId::C2, s(0, 4)),
            BTreeSet::from([4, 3, 2, 1, 0, 6])
        );
        assert_eq!(
            covered_cells(&p(10, 3, 1, 1), ClusterId::C1, s(5, 0)),
            BTreeSet::from([5])
        );
    }

    #[test]
    fn node_cells() {
        let params = p(10, 3, 2, 2);
        assert_eq!(NodeId::Node1.entry_cell(&params), 9);
        assert_eq!(NodeId::Node1.exit_cell(&params), 0);
        assert_eq!(NodeId::Node2.entry_cell(&params), 2);
        assert_eq!(NodeId::Node2.exit_cell(&params), 3);
    }

    #[test]
    fn at_node_examples() {
        let params = p(10, 3, 2, 2);
        assert_eq!(
            at_node(&params, s(9, 5), ClusterId::C1),
            Some(NodeId::Node1)
        );
        assert_eq!(
            at_node(&params, s(5, 2), ClusterId::C2),
            Some(NodeId::Node2)
        );
        assert_eq!(at_node(&params, s(5, 5), ClusterId::C1), None);
    }

    #[test]
    fn occupies_node_examples() {
        let params = p(10, 3, 2, 2);
        assert!(occupies_node(
            &params,
            s(0, 5),
            ClusterId::C1,
            NodeId::Node1
        ));
        assert!(!occupies_node(
            &params,
            s(9, 5),
            ClusterId::C1,
            NodeId::Node1
        ));
        let single = p(10, 3, 1, 1);
        for x in 0..10 {
            for node in NodeId::BOTH {
                assert!(!occupies_node(&single, s(x, x), ClusterId::C1, node));
            }
        }
    }

    #[test]
    fn admissibility_examples() {
        assert!(!is_admissible(&p(10, 3, 2, 2), s(0, 0)));
        let single = p(10, 3, 1, 1);
        assert!(single.all_states().all(|st| is_admissible(&single, st)));
        assert!(is_admissible(
            &p(6, 3, 4, 5),
            canonical_state(&p(6, 3, 4, 5))
        ));
    }

    #[test]
    fn blocking_examples() {
        let params = p(6, 2, 2, 3);
        assert!(is_blocked(&params, s(5, 0), ClusterId::C1).unwrap());
        assert!(!is_blocked(&params, s(5, 0), ClusterId::C2).unwrap());

        let tie = p(6, 2, 2, 2);
        assert!(!is_blocked(&tie, s(5, 5), ClusterId::C1).unwrap());
        assert!(is_blocked(&tie, s(5, 5), ClusterId::C2).unwrap());

        let long = p(7, 2, 2, 6);
        assert!(is_blocked(&long, s(6, 4), ClusterId::C1).unwrap());
        assert!(!is_blocked(&long, s(6, 4), ClusterId::C2).unwrap());
    }

    #[test]
    fn blocking_rejects_inadmissible() {
        let params = p(10, 3, 2, 2);
        assert_eq!(
            is_blocked(&params, s(0, 0), ClusterId::C1),
            Err(ModelError::Inadmissible(s(0, 0)))
        );
        assert!(step(&params, s(0, 0)).is_err());
    }

    #[test]
    fn step_examples() {
        let out = step(&p(6, 2, 2, 2), s(5, 5)).unwrap();
        assert_eq!((out.next, out.moved1, out.moved2), (s(0, 5), true, false));

        let out = step(&p(7, 2, 2, 6), s(2, 0)).unwrap();
        assert_eq!((out.next, out.moved1, out.moved2), (s(3, 1), true, true));

        let out = step(&p(10, 3, 4, 8), s(2, 9)).unwrap();
        assert_eq!((out.next, out.moved1, out.moved2), (s(2, 9), false, false));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_state(&p(10, 3, 1, 1)), s(9, 2));
        assert_eq!(canonical_state(&p(4, 2, 1, 1)), s(3, 1));
        assert_eq!(canonical_state(&p(6, 3, 4, 5)), s(5, 2));
    }

    #[test]
    fn occupied_and_tie_favoured_stays_blocked() {
        // C1 waits at node 2 while C2 straddles it.
        let params = p(6, 2, 2, 4);
        let st = s(1, 3);
        assert!(is_admissible(&params, st));
        assert!(occupies_node(&params, st, ClusterId::C2, NodeId::Node2));
        assert!(is_blocked(&params, st, ClusterId::C1).unwrap());
    }
}
