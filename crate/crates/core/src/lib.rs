//! Perfect sampling of random graph models by coupling from the past.
//!
//! The single-dyad Gibbs sampler of an exponential-family random graph
//! model is not monotone, but it is sandwiched by a pair of bounding chains
//! whose coalescence certifies that every trajectory has met. [`cftp::sample`]
//! runs those chains backward in time with geometric back-off and returns an
//! exact draw. The same engine samples biased net models through their
//! pseudo-Gibbs chain, and [`oracle`] provides exact enumeration on tiny
//! spaces for validation.

pub mod biased;
pub mod bounding;
pub mod cftp;
pub mod error;
pub mod format;
pub mod graph;
pub mod modelfile;
pub mod oracle;
pub mod statistics;

pub use biased::{BiasKind, BiasModel, BiasRegistry, BiasStatistic};
pub use bounding::{inverse_logit, logit, BoundPair};
pub use cftp::{sample, sample_many, CftpConfig, CoupledKernel, DrawResult, MaxDepthBehavior, RandomTape};
pub use error::{Error, Result};
pub use graph::{AdjacencyState, Dyad, GraphSpace};
pub use statistics::{Monotonicity, ModelSpec, Statistic, StatisticKind, StatisticRegistry};
