//! Plumbing trees of disc bundles over spheres, their rolled-up Legendrian
//! surgery diagrams, and the planar open books supporting the induced
//! contact structures.

pub mod check;
pub mod contfrac;
pub mod gen;
pub mod graph;
pub mod intform;
pub mod legendrian;
pub mod openbook;
pub mod render;
pub mod rollup;

#[cfg(test)]
mod testing;

pub use graph::PlumbingTree;
