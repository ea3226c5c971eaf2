//! Targeted Hunter searches for totally real quintic fields ramified at a
//! single prime, with exact certification of every hit.

pub mod arith;
pub mod checkpoint;
pub mod cli;
pub mod engine;
pub mod error;
pub mod filter;
pub mod hunter;
pub mod modp;
pub mod pipeline;
pub mod poly;
pub mod sanity;
pub mod sturm;
pub mod targeting;
pub mod verifier;

pub use error::{KernelError, ParseError, TargetError};
pub use poly::IntPoly;
