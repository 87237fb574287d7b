//! Operator-versus-region tests. Continuum quantifiers are sampled on
//! explicit grids and every report carries the worst slack found.

mod disks;
mod report;
mod rho;
mod theorem2;

pub use disks::{
    default_tolerance, hyponormal_resolvent_identity, is_good_disk, is_hyponormal,
    numerical_radius, numerical_range_boundary, w_contained_in,
};
pub use report::{ClassifyReport, Verdict, Witness};
pub use rho::{
    d_a_rho, is_rho_contraction_disks, is_rho_contraction_poisson, is_rho_contraction_tangent,
    poisson_kernel, RhoGrid,
};
pub use theorem2::{theorem2_hypotheses, ArcSlack, Theorem2Report};
