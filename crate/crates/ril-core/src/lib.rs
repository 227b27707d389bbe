//! Core library for random iteration of rational self-maps of projective
//! space: exact arithmetic, projective maps, weighted families, height and
//! degree growth, orbit counting, and Galois towers of iterated preimages.

pub mod exact;
pub mod logreal;
pub mod maps;
pub mod random;
pub mod heights;
pub mod monoid;
pub mod galois;
