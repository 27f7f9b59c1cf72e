//! Finite branched covers of the blowup over its branching locus, built from
//! permutation labels on the coordinate projections.

mod certificate;
mod cover;
mod ordering;
mod perm;
mod projection;

pub use certificate::{branch_report, BranchReport, LabelEntry, LinkTypeCertificate, LoopSample, PairCertificate};
pub use cover::{branched_link_cover, BranchedCover};
pub use ordering::{find_int4cycles_ordering, OrderingOutcome};
pub use perm::{
    commutator, commutator_identity_check, is_prime, is_primitive_root, make_perm_pair, next_prime_above,
    smallest_primitive_root, Perm, PermPair,
};
pub use projection::{
    auto_primes, corner_loops, kept_pair, label_graph, label_graph_with_root, monodromy_of_loop, monodromy_rep,
    project_graphs, CornerLoop, EdgeLabeling, Family, LambdaEdge, MonodromyRep, PlanePoint, ProjectionGraph,
};
