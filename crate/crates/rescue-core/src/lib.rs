//! Deterministic building blocks for simulating emergency response to
//! drowning incidents on inland waters.
//!
//! The crate covers two response models over a shared scenario description:
//! a boat-based rescue chain (fire crew drives to a water access point, a
//! rescue boat is launched, both legs synchronise before the boat departs)
//! and a UAV fleet that flies pre-planned search patterns over incident
//! hotspots. Both are evaluated with seeded Monte-Carlo sampling so that
//! every result is reproducible bit-for-bit from `(scenario, seed)`.
//!
//! The crate is `no_std`-compatible (it requires `alloc`); builds without
//! `std` must enable the `libm` feature for float math.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod geom;
mod math;
pub mod mcs;
pub mod roadnet;
pub mod sampling;
pub mod scenario;
pub mod search;
pub mod sro;
pub mod uas;
pub mod waterway;
