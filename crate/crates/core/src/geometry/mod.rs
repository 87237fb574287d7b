//! Generalized disks, Möbius maps and piecewise-circular domains.

mod arc;
mod disk;
mod domain;
mod mobius;
mod predicates;

pub use arc::{BoundaryPiece, CircularArc};
pub use disk::GeneralizedDisk;
pub use domain::{
    pole_set_report, pole_set_valid, Domain, ExteriorData, PiecewiseCircularDomain, PoleSetReport,
    CLOSURE_TOL,
};
pub use mobius::{canonical_map_to_unit_disk, mobius_image, MobiusMap};
pub use predicates::{
    condition_a_check, disk_misses_domain, exterior_disk_condition, min_enclosing_radius,
    transversal_at, ArcClause, ConditionAReport, CornerClause, ExteriorDiskReport, Sector,
    TransversalityReport, APERTURE_GRID, PLACEMENTS,
};

/// Membership of `z` in the closed generalized disk `d`.
pub fn disk_contains(d: &GeneralizedDisk, z: crate::ext::ExtComplex) -> bool {
    d.contains(z)
}
