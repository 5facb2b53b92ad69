use thiserror::Error;

use crate::model::SystemState;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("state {state} has a coordinate outside [0, {n})")]
    StateOutOfRange { state: SystemState, n: usize },
    #[error("state {0} is not admissible: a node is occupied by both clusters")]
    Inadmissible(SystemState),
    #[error("invalid sweep range: {0}")]
    InvalidRange(String),
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;
