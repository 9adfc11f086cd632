//! Density constructions: index selection, target gluing, least-squares
//! fitting, the perturbation `u = P + d z^p` and coefficient extension.

mod certificate;
mod fit;
mod index;
mod seleznev;
mod target;
mod universal;

pub use certificate::{Certificate, CertificateKind, PrefixCheck, RequirementSpec};
pub use fit::{fit_ramp, poly_fit, PolyFit, MAX_CONDITION};
pub use index::{select_index, IndexSequence};
pub use seleznev::{
    greedy_universal_run, seleznev_extend, verify_extension, GreedyRun, SeleznevRequirement, SeleznevStep,
};
pub use target::{TargetDescriptor, TargetFn, TargetPair};
pub use universal::{
    build_universal_polynomial, reproduction_spot_check, verify_conclusions, BuildOptions, UniversalBuild,
};
