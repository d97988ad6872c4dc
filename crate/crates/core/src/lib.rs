//! Tropical (max-times) rating of alternatives from pairwise comparisons.
//!
//! Pairwise comparison matrices are approximated by consistent matrices in
//! the log-Chebyshev sense. In max-times algebra this becomes the problem
//! `min x⁻ A x`, solved completely by a Kleene star; when the solution is not
//! unique, the most and least differentiating vectors bracket the whole set.
//!
//! - [`semiring`]: scalar and matrix algebra, spectral radius, Kleene star.
//! - [`solve`]: single and weighted approximation problems.
//! - [`seminorm`]: most/least differentiating solutions.
//! - [`ranking`]: orders with ties and their combination.
//! - [`pipeline`]: the end-to-end rating procedure.
//! - [`document`]: JSON problem and result documents.

pub mod document;
pub mod error;
pub mod pipeline;
pub mod ranking;
pub mod semiring;
pub mod seminorm;
pub mod solve;

pub use error::{Error, Result};
pub use pipeline::{
    derive_weights, rate_alternatives, AhpProblem, AhpResult, PairwiseMatrix, RateOptions,
    ScoreVector, WeightPolicy,
};
pub use ranking::{combine_rankings, derive_ranking, RankingOrder, Relation};
pub use semiring::{PosMatrix, Tolerance};
pub use seminorm::{best_diff_solutions, least_diff_solutions, span_seminorm, SeminormResult};
pub use solve::{solve_min_form, solve_weighted, SolutionSet};
