//! Computational engine for Čech cohomology with finite coefficients over
//! finite simplicial nerves: degree-1 cohomology sets `H1(X, G)`, abelian
//! cohomology via Smith normal form, nonabelian degree-2 cohomology with
//! crossed-module coefficients, and the lifting obstruction `delta` of a
//! group extension, together with exactness, gerbe-collapse and
//! duality-breaking checks.
//!
//! All searches are exhaustive-or-error and deterministic: identical
//! inputs produce identical outputs regardless of worker count.

pub mod budget;
pub mod complexes;
pub mod error;
pub mod groups;
pub mod h1;
pub mod h2;
pub mod obstruction;

#[cfg(test)]
pub(crate) mod testsupport;

pub use budget::{Budget, SearchStats};
pub use complexes::{build_complex, builtin_complex, spanning_tree, Nerve, SpanningTree};
pub use error::{Error, Result};
pub use groups::{
    abelianization_data, adjoint_module, automorphism_group, builtin_group, commutator_closure,
    group_from_generators, quotient, subgroup_as_group, CrossedModule, Elem, ExtensionData,
    FiniteGroup, GroupAction, GroupMorphism,
};
pub use h1::{
    canonical_form, chern, coboundary_transform, gamma_star, h1_classes, is_cocycle, pushforward,
    ClassSet, OneCochain,
};
pub use h2::{
    abelian_cohomology, breve_gamma_star, d_star, is_cocycle_pair, nonabelian_h2_classes, nu,
    pairs_equivalent, pi_n_star, AbelianCoeff, AbelianCohomology, AbelianH2Class, AbelianH2Context,
    CocyclePair, EquivalencePair, TwoCochain,
};
pub use obstruction::{
    check_exactness, check_square, classify_gauge_lifts, delta, find_lifts, gerbe_class,
    obstruction_report, solve_coboundary_realization, ExactnessReport, GaugeClassification,
    GerbeReport, LiftGranularity, LiftSearch, ObstructionReport, SquareReport,
};
