//! Belief contagion on social graphs.
//!
//! This crate is `no_std` (it needs `alloc`) and contains everything that is
//! pure computation:
//!
//! * [`kernel`]: simple, complex and cognitive contagion probabilities.
//! * [`graph`]: seeded ER / WS / BA / MAG generators and the homophily measure.
//! * [`pod`]: the public-opinion-diffusion engine, where institutions
//!   broadcast messages that cascade through subscribers and their neighbors.
//! * [`paths`]: path transmission probabilities, believing-neighbor sets,
//!   disjoint path selection and the belief-bounded path census.
//!
//! All randomness comes from seeded ChaCha streams, so every result is
//! reproducible from its seed.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod belief;
pub mod error;
pub mod graph;
pub mod kernel;
pub mod paths;
pub mod pod;
pub mod rng;

pub use belief::{Belief, Histogram};
pub use error::{Error, Result};
pub use graph::{AffinityMatrix, GraphKind, GraphSpec, NodeId, Normalization, SocialGraph};
pub use kernel::{BetaTable, ContagionModel, Disposition, Probability};
pub use pod::{
    BatchTrace, Institution, Message, MessageSchedule, RunConfig, SimState, SimulationTrace,
};
