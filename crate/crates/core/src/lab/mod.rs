//! Concrete sequences on ω at prefix scale: atom realizations, exact
//! generators for the infinite constructions, and cluster estimation.

mod clusters;
mod generators;
mod realization;

pub use clusters::{estimate_clusters, to_csv, ClusterEstimate, Epsilon, DEFAULT_TAIL};
pub use generators::{
    fusc, gen_combo, gen_fq, gen_rich, gen_spaceable, h_sequence, h_value, unit_rational, Flavor,
    Generator, HReport, PrefixSequence,
};
pub use realization::{cantor_pair, cantor_unpair, nu2, AtomLabel, AtomRealization, Scheme};

/// Realization for the given scheme.
pub fn realize_atoms(scheme: Scheme) -> AtomRealization {
    AtomRealization::new(scheme)
}
