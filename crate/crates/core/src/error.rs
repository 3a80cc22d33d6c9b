use thiserror::Error;

use crate::cftp::Diagnostics;
use crate::graph::Dyad;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid graph space: {0}")]
    InvalidSpace(String),

    #[error("dyad {dyad} is not valid in this space: {reason}")]
    InvalidDyad { dyad: Dyad, reason: &'static str },

    #[error("dyad {dyad} is restricted to be {}", if *.forced_present { "present" } else { "absent" })]
    RestrictionViolation { dyad: Dyad, forced_present: bool },

    #[error("states belong to different graph spaces")]
    SpaceMismatch,

    #[error("statistic `{stat}` is incompatible with this space: {reason}")]
    IncompatibleStatistic { stat: String, reason: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    #[error("no coalescence by depth {}: {0}", .0.depth)]
    NotCoalesced(Diagnostics),

    #[error("sandwich violated at step {step} of round {round}")]
    SandwichViolation { round: usize, step: usize },

    #[error("enumeration refused: {free} free dyads exceeds the cap of {cap}")]
    EnumerationCap { free: usize, cap: usize },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
