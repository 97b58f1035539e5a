//! Energy profiling of wireless sensor networks.
//!
//! The pipeline has two phases. Profiling runs the [`sim`] simulator over
//! many sampled configurations ([`profiler`]); extraction screens each
//! configuration parameter against overall energy consumption with a
//! correlation significance test plus linear and squared-order correlation
//! ([`stats`]). The [`cli`] module wires both phases to a command line.

pub mod cli;
pub mod kv;
pub mod profiler;
pub mod sim;
pub mod stats;
