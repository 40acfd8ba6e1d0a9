//! Computational additive combinatorics at desk scale: sumsets and additive
//! energy, dissociated sets and their spans, peeling decompositions, an
//! exact DFT over finite abelian groups with `L^p` dual norms, and two
//! structure pipelines that certify their inequality chains at runtime:
//! from an energy bound to a large span intersection, and from a doubling
//! bound to a full span cover by a logarithmic-size generating set.

pub mod corpus;
pub mod dissociation;
pub mod error;
pub mod fourier;
pub mod group;
pub mod peeling;
pub mod setops;
pub mod structure;

pub use dissociation::{
    find_dissociated_of_size, is_dissociated, max_dissociated_greedy, span_contains,
    span_enumerate, span_intersect, DissociationVerdict, DissociationWitness, SearchMode,
    SignVector, Strategy,
};
pub use error::{Error, Result};
pub use fourier::{
    dft, dft_indicator, dft_with_cap, energy_via_l4, hausdorff_young_check, indicator,
    logconvexity_check, lp_dual_norm, parseval_residual, rudin_probe, DualFunction, MarginReport,
    RudinProbeStats, DEFAULT_DFT_CAP,
};
pub use group::{
    canon, embed_to_torus, group_arith, signed_sum, Element, Factor, GroupOp, GroupSpec,
    TorusEmbedding,
};
pub use peeling::{bourgain_peel, peel_error_norm, peel_error_norms, PeelErrorNorm, PeelingTrace};
pub use setops::{
    additive_energy, convolve_indicators, doubling, sumset, EnergyCertificate, GSet, Rational,
};
pub use structure::{
    cover_structure, doubling_chain_check, energy_structure, structure_thresholds, ChainReport,
    CoverReport, FDiagnostics, StructureOptions, StructureReport, Thresholds,
};
