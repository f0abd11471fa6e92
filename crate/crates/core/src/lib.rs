//! Numerical core for Hénon-like renormalization.
//!
//! The crate detects renormalization domains of Hénon-like maps, builds
//! straightening charts over their strong-stable foliations, certifies
//! two-sided cocycle regularity along chart directions, locates the
//! dynamical critical value, reduces return dynamics to one-dimensional
//! mapping schemes, and measures distortion and cross-ratio bounds across
//! renormalization depths.
//!
//! The crate is `no_std`-compatible (`alloc` required): disable the default
//! `std` feature and enable `libm`. IO, file formats and the command-line
//! driver live in the companion `henon-renorm` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod critical;
pub mod error;
pub mod geometry;
pub mod henon;
pub mod linalg;
pub(crate) mod math;
pub mod onedim;
pub mod regularity;
pub mod renorm;

pub use error::{Error, Result};
pub use geometry::{Chart, Curve, DirectionP, GraphFit, Interval, Point2, Rect};
pub use henon::HenonLikeMap;
