//! Shellings of matroid independence complexes from sweeps of the matroid
//! polytope.
//!
//! A generic linear functional orders the vertices of the matroid polytope
//! and hence the bases; that order shells the independence complex and its
//! restriction sets are internally passive sets. A pinned broken line
//! changes functional along the way while keeping the first basis minimal.
//! This crate generates and verifies such sweeps, builds the posets of
//! their restriction sets and looks for pure multicomplexes labeling them.

pub mod cli;
pub mod fixtures;
pub mod matroid;
pub mod multicomplex;
pub mod polytope;
pub mod poset;
pub mod service;
pub mod session;
pub mod shelling;
pub mod sweep;
