//! Exact lattice geometry and iterative identification of integral
//! half-spaces from labeled lattice points.
//!
//! The crate is organized around five layers:
//!
//! - [`lattice`]: exact integer/rational geometry on `Z^d` — reduced
//!   hyperplane forms, tangent half-space pairs, basic sets, adjacency and
//!   the separation predicates the learners rely on.
//! - [`codec`]: the bijective codings between integers, integer vectors and
//!   natural numbers, plus half-space indices over those codes.
//! - [`streams`]: informant prefixes (consistently labeled data sequences),
//!   deterministic informant generators and the even/odd Boolean-mapping
//!   transforms between informants and texts.
//! - [`learners`]: the iterative learner contract, the lock-based
//!   half-space learner for arbitrary dimension, the fully coded 2-D
//!   variant, and the canny / witness-recording wrappers.
//! - [`harness`]: run loop with convergence refereeing, trace recording,
//!   behavioral-restriction validators, a learning-by-enumeration oracle,
//!   indexed language fixtures and brute-force geometry oracles for tests.
//!
//! All arithmetic is exact: arbitrary-precision integers and reduced
//! rationals throughout, distances handled squared so no irrational value
//! is ever represented. The crate is `no_std` (with `alloc`); IO and file
//! formats live in the companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod codec;
pub mod harness;
pub mod lattice;
pub mod learners;
pub mod mix;
pub mod streams;

pub use lattice::{BasicSet, HalfSpace, Hyperplane, Int, IntVec, Rat};
pub use learners::{IterativeLearner, Language, Mode};
pub use streams::Datum;
