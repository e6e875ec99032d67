//! Exact minimal fillings of finite pseudometric spaces.
//!
//! A filling of a finite pseudometric space is a weighted tree joining its
//! points such that every pair is connected at least as far apart in the tree
//! as in the space. This crate computes, entirely in exact rational
//! arithmetic, the minimal filling weight over classical (non-negative)
//! weightings and over generalized (sign-unrestricted) weightings, for one
//! fixed tree type and globally over all binary types. The two global optima
//! coincide for every space satisfying the triangle inequality, and the
//! `denegativize` module realizes that equality constructively by rewiring
//! negative edges out of a generalized optimum without changing its weight.
//!
//! Modules:
//! - [`rational`]: exact rational parsing and formatting.
//! - [`metric`]: pseudometric spaces, classification, random instances.
//! - [`topology`]: tree types, binary enumeration, planar orders, splitting.
//! - [`filling`]: weighted fillings, induced distances, exactness reports.
//! - [`lp`]: exact rational two-phase simplex.
//! - [`solver`]: parametric and global minimal filling computation.
//! - [`denegativize`]: weight-preserving removal of negative edges.
//! - [`harness`]: fixtures, reference checks and randomized campaigns.

pub mod denegativize;
pub mod filling;
pub mod harness;
pub mod lp;
pub mod metric;
pub mod rational;
pub mod solver;
pub mod topology;
