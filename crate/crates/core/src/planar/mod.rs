//! Origin-symmetric convex polygons with rational vertices and packings of their
//! translates.

pub mod boundary;
pub mod generate;
pub mod measure;
pub mod packing;
pub mod polygon;
pub mod separability;

pub use boundary::{boundary_analysis, BoundaryReport};
pub use generate::{csep_formula, generate_packing, lattice_for, packing_basis};
pub use measure::{
    arc_measure, build_pi_measure, interior_angle, lemma_piangle_check, polygon_angle_sum, triangle_angle_sum,
    AngularMeasure, ArcDirection, PiAngleConfig, Piece,
};
pub use packing::{contact_graph, gauge_f64, ContactGraph, PlanarPacking};
pub use polygon::{
    angle_cmp, angle_cmp_from, is_quasi_hexagon, min_area_circumscribed_parallelogram, BodyClass, BoundaryLocation,
    CircumscribedParallelogram, Line, Point, QuasiHexagonWitness, SymmetricPolygon,
};
pub use separability::{line_separates, misses_interior, verify_total_separability, PairWitness, SeparabilityReport};
