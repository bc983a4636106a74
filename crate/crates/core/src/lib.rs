//! Newton strata in loop groups via the Coxeter-type cross-section.
//!
//! The crate is organised bottom up: [`rootdata`] holds based root data with
//! a diagram automorphism, [`isocrystal`] the invariants of σ-conjugacy
//! classes, [`crosssec`] the stratum shapes of the cross-section, [`strata`]
//! the combinatorics built on them, and [`fqoracle`] a finite-field count
//! used to cross-check the point counts.

#![allow(clippy::needless_range_loop)]

pub mod crosssec;
pub mod error;
pub mod fqoracle;
pub mod isocrystal;
pub mod linalg;
pub mod rational;
pub mod rootdata;
pub mod strata;

pub use error::{Error, Result};
pub use isocrystal::{KottwitzClass, SigmaClass};
pub use rational::{ChVec, CoVec};
pub use rootdata::{preset, RootDatum, WeylWord};
