//! Simulation and verification toolkit for distributed link scheduling
//! with size-`k` augmentations under node-exclusive interference.
//!
//! - [`graph`]: graphs, matchings, queue vectors, augmentations.
//! - [`oracle`]: brute-force maximum-weight matching and related bounds.
//! - [`decomposition`]: splitting `I Δ I*` into good size-`k` augmentations.
//! - [`protocol`]: the phase-accurate distributed control part.
//! - [`traffic`]: arrivals, queue updates and grid load presets.
//! - [`baseline`]: the centralized maximal-matching scheduler.
//! - [`experiment`]: the slotted simulation loop, sweeps and CSV metrics.

pub mod baseline;
pub mod decomposition;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod grid;
pub mod oracle;
pub mod protocol;
pub mod traffic;

pub use error::{Error, Result};
pub use graph::{AugKind, Augmentation, Graph, LinkId, Matching, NodeId, QueueVector};
