//! Exact curvature tensors of coordinate metrics and a classifier for
//! curvature conditions of pseudosymmetry type.

pub mod expr;
pub mod geometry;
pub mod tensor;
pub mod curvature;
pub mod fixtures;
pub mod structures;
