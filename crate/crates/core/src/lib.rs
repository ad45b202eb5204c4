//! Combinatorics of surfaces with a local index in a single tetrahedron:
//! normal curve arithmetic on the tetrahedron boundary, surgery bookkeeping,
//! finite candidate catalogs, homology of abstract disk complexes, and Farey
//! graph slope distances.

pub mod catalog;
pub mod cli;
pub mod complex;
pub mod curve;
pub mod slopes;
pub mod surgery;

pub use catalog::{
    base_index, compatible, enumerate_configurations, enumerate_connected, verify_constraints,
    CatalogOptions, CatalogRecord, Configuration, ConnectedCandidate, ConstraintReport,
};
pub use complex::{cone, homology_index, join, reduced_homology, HomologyIndex, SimplicialComplex};
pub use curve::{
    arc_coordinates, count_switches, decompose_loops, enumerate_loop_types, is_admissible, loop_length,
    weights_of, Edge, EdgeWeights, LoopKind, OppositePair, Side,
};
pub use slopes::{apply_torus_map, barrier_check, farey_distance, is_farey_edge, Distance, Slope, TorusMap};
pub use surgery::{
    apply_compression, apply_edge_compression, min_edge_compressions_to_disks, pinch_bound, BoundaryCurve,
    SurfacePiece, SurgeryMove,
};
