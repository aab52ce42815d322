//! Exact, truncated O-operator calculus over finite-dimensional algebras.
//!
//! The crate is layered bottom-up:
//!
//! * [`rational`], [`algebra`]: exact scalars and structure-constant algebras `B`.
//! * [`series`]: truncated series of multilinear maps on `B`, the Cauchy and
//!   composition groups, twisted products and the e-transform.
//! * [`ncpart`]: noncrossing partitions and brute-force moment oracles.
//! * [`prob`]: distributions, the K/T/H transforms, the four multiplicative
//!   convolutions and subordination.
//! * [`hopf`]: truncated enveloping algebras of Lie modules, Guin-Oudom
//!   extension, the `#` product and the factorization checks.
//! * [`fliess`]: Chen-Fliess word series.
//! * [`report`], [`json`], [`suite`]: pass/fail reports, wire formats and the
//!   verification suites.

pub mod algebra;
pub mod fliess;
pub mod hopf;
pub mod json;
pub mod ncpart;
pub mod prob;
pub mod rational;
pub mod report;
pub mod series;
pub mod suite;
