//! Polynomials with square-matrix coefficients: evaluation, slicing, determinantal
//! polynomials, root finding and sampling of the determinantal variety.

mod det;
mod poly;
mod scalar;
mod variety;

pub use det::{
    det_poly_univariate, point_null_space, refine_root, PointNullSpace, COEFFICIENT_SNAP,
};
pub use poly::{merge_point, total_degree, ExponentTuple, MatrixPolynomial};
pub use scalar::{cluster_roots, poly_roots, Root, ScalarPolynomial, ROOT_CLUSTER_TOL};
pub use variety::{
    sample_variety, slice_points, Strategy, VarietyPoint, VarietySampler, DEFAULT_TOL_NULL,
};
