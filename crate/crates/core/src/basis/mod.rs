//! Polygonal finite element basis: mean value coordinates, quadrature and
//! strain-displacement matrices.

mod element;
mod mvc;
pub mod polygon;
mod quadrature;

pub use element::{
    build_element_bases, element_bmatrices, BMatrices, BasisOptions, ElementBasis,
    GradientCorrection,
};
pub use mvc::{mvc_eval, BasisEval};
pub use quadrature::{polygon_quadrature, QuadratureRule, DEFAULT_ORDER};
