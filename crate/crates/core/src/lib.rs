//! Solenoid towers over finitely presented groups.
//!
//! A solenoid is modeled by its base group G and a descending chain of
//! finite-index normal subgroups N₀ = G ⊇ N₁ ⊇ …; the structure group is the
//! inverse limit of the quotients G/Nᵢ and is analyzed here through its
//! finite truncations. The crate provides:
//!
//! - free-group words and presentations ([`words`]);
//! - Todd–Coxeter coset enumeration ([`coset`]);
//! - Reidemeister–Schreier subgroup presentations and abelianness
//!   certificates ([`schreier`]);
//! - explicit finite groups with homomorphism search ([`group`],
//!   [`homsearch`], [`catalog`]);
//! - finite models of structure-group data with exhaustive checks of the
//!   component and bihomogeneity lemmas ([`model`], [`sweep`]);
//! - tower construction, validation, and certified bihomogeneity verdicts
//!   ([`tower`], [`analysis`]);
//! - config parsing and deterministic reports ([`config`], [`report`]).
//!
//! The `parallel` feature (on by default) runs catalog sweeps and other
//! data-parallel loops on rayon; without it the same code runs sequentially
//! with identical results.

pub mod analysis;
pub mod catalog;
pub mod config;
pub mod coset;
pub mod error;
pub mod exec;
pub mod group;
pub mod homsearch;
pub mod model;
pub mod report;
pub mod rng;
pub mod schreier;
pub mod sweep;
pub mod tower;
pub mod words;

pub use error::{Error, Result};
