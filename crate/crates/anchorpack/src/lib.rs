//! Anchored rectangle and square packings.
//!
//! Given finitely many points in the unit square, each point gets an
//! axis-parallel rectangle (or square) having that point as one of its
//! corners, all boxes inside the unit square with pairwise disjoint
//! interiors. The goal is to maximize the covered area. Every quantity is an
//! exact rational.

pub mod algos;
pub mod bench;
pub mod cli;
pub mod generators;
pub mod geometry;
pub mod greedy;
pub mod io;
pub mod mwis;
pub mod oracle;
pub mod quadtree;
pub mod reach;
pub mod strip;
pub mod svg;
pub mod two_point;

pub use geometry::{AnchoredBox, Corner, Instance, Mode, Packing, Point, Rational, Rect};
