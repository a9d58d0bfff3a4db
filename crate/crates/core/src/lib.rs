//! Projection-aggregation decoding of Reed-Muller codes over pruned subspace
//! collections.
//!
//! Module map:
//! - [`subspace`]: subspaces of F₂^m, canonical form, enumeration, cosets and
//!   binary projections.
//! - [`codec`]: RM(r, m) encoding and membership.
//! - [`llr`]: boxplus projection kernels.
//! - [`fht`]: first-order ML decoding with the fast Hadamard transform.
//! - [`decoder`]: aggregation and the CPA/PCPA iteration.
//! - [`collection`]: correlation coefficients and collection builders.
//! - [`theorem`]: the projection agreement probability and its Monte Carlo check.
//! - [`channel`], [`sim`], [`stats`]: BPSK/AWGN simulation and reporting.

pub mod channel;
pub mod codec;
pub mod collection;
pub mod decoder;
mod error;
pub mod fht;
pub mod format;
pub mod llr;
pub mod sim;
pub mod stats;
pub mod subspace;
pub mod theorem;

pub use codec::RmCode;
pub use collection::{build_collection, Strategy, SubspaceCollection};
pub use decoder::{cpa_decode, pcpa_decode, DecodeOutcome, DecoderConfig, PcpaDecoder};
pub use error::{Error, Result};
pub use subspace::{CosetTable, Point, Subspace};
