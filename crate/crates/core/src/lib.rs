//! Dissipation-projected dynamics on networks of dissipation-generated modules.
//!
//! A strong local dissipator `𝓛₀` pins each module to its steady states; a weak
//! Hamiltonian `𝓚` then acts on the steady sector through `𝓟₀𝓚𝓟₀` at first
//! order, or `−𝓟₀𝓚𝓢𝓚𝓟₀` when the first order vanishes.

pub mod cli;
pub mod effective;
pub mod error;
pub mod lindblad;
pub mod network;
pub mod numerics;
pub mod projector;
pub mod scenarios;
pub mod spaces;

pub use error::{Error, Result};
