//! Fully popular matchings in bipartite preference instances.
//!
//! An instance has agents on one side and jobs on the other, and every vertex
//! ranks its neighbours strictly. A matching is *popular* if it never loses a
//! head-to-head vote against another matching when every vertex votes, and
//! *A-popular* if it never loses when only agents vote. A matching that is both
//! is *fully popular*. [`solve`] decides whether one exists and returns a
//! maximum-size one together with a `{0, ±1}` certificate of its popularity.
//!
//! Layout:
//!
//! * [`instance`]: instances, matchings, top/second posts, votes and elections.
//! * [`engine`] / [`stable`]: a resumable proposal engine with forbidden edges,
//!   and the stable-matching queries built on it.
//! * [`assignment`] / [`popularity`]: a max-weight assignment solver generic
//!   over the scalar type, and the popularity checks built on it.
//! * [`legal`]: valid, popular and legal edge classification.
//! * [`mirror`]: the two-copy mirror graph and the maps between it and the
//!   original instance.
//! * [`solver`]: the iterated-forbidding algorithm and its runtime invariants.
//! * [`oracle`]: exhaustive ground truth for small instances.
//! * [`generate`]: seeded random instances.

pub mod assignment;
pub mod engine;
pub mod error;
pub mod generate;
pub mod instance;
pub mod legal;
pub mod mirror;
pub mod oracle;
pub mod popularity;
pub mod scalar;
pub mod solver;
pub mod stable;

/// Dense vertex id. Agents come first, then jobs.
pub type Vertex = usize;
/// Dense id of a genuine edge of an instance.
pub type EdgeId = usize;
/// Dense id of an edge of the mirror graph.
pub type MirrorEdgeId = usize;
/// Integer weight used by the popularity machinery; `wt_M` only takes values in `{-2, -1, 0, 2}`.
pub type Weight = i32;
/// A `{0, ±1}` witness entry.
pub type Alpha = i8;

/// Max-weight assignment over the popularity weights.
pub type IntAssignment = assignment::Assignment<Weight>;
/// Max-weight assignment over `f64` weights.
pub type FloatAssignment = assignment::Assignment<f64>;

pub use error::{InstanceError, MatchingError, ParseError};
pub use instance::{
    compute_posts, parse_instance, parse_matching, run_election, vote, Election, Instance, Matching, Posts, Side,
};
pub use legal::{legal_edge_set, popular_edges, valid_edges, EdgeClassification, EdgeSet, PopularBackend};
pub use popularity::{
    check_a_popular, check_witness, edge_weight, verify_popular, wt_total, Certificate, EdgeOrLoop, PopularityVerdict,
    Witness,
};
pub use solver::{solve, solve_with, SolveOptions, SolveOutcome, SolveReport, TriggerOrder};
