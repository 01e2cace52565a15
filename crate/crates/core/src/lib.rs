//! Quasi-stationary distributions of the discrete-time voter model.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every algorithm:
//! graph construction, the forward voter chain and its coalescing random walk
//! dual, exact substochastic eigen-solvers for the transient kernel, the
//! closed forms for complete bipartite graphs `K_{n,m}`, and the Sibuya law
//! that describes the number of dissenters in the large-`n` limit.
//!
//! File formats, command-line tooling and thread-parallel replica drivers
//! live in the companion `voter-qsd-cli` crate.

#![no_std]

extern crate alloc;

pub mod crw;
pub mod error;
pub mod graph;
pub mod matrix;
pub mod qsd;
pub mod rng;
pub mod sibuya;
pub mod voter;

mod compensated;

pub use error::{Error, Result};
pub use graph::{BipartiteSpec, Graph, Violation};
pub use matrix::SubstochasticMatrix;
pub use rng::RandomStream;
