//! End-to-end rating of alternatives from pairwise comparisons.
//!
//! 1. Criteria weights come from the criteria comparison matrix (or are given
//!    explicitly).
//! 2. The per-criterion matrices are merged into `C = ⊕ w_k A_k` and the
//!    complete solution set of `min x⁻ C x` is computed.
//! 3. The most and least differentiating members of that set are extracted,
//!    each is ranked, and the rankings are combined into one order.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ranking::{combine_rankings, derive_ranking, RankingOrder};
use crate::semiring::{PosMatrix, Tolerance};
use crate::seminorm::{
    best_diff_solutions, least_diff_solutions_capped, normalize_max, SeminormResult,
    DEFAULT_ENUM_CAP,
};
use crate::solve::{solve_min_form, solve_weighted, SolutionSet};

/// Square, strictly positive, reciprocal matrix with unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseMatrix(PosMatrix);

impl PairwiseMatrix {
    pub fn new(m: PosMatrix, tol: &Tolerance) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j);
                if v <= 0.0 {
                    return Err(Error::NonPositiveEntry {
                        row: i,
                        col: j,
                        value: v,
                    });
                }
            }
        }
        for i in 0..n {
            let d = m.get(i, i);
            if !tol.eq(d, 1.0) {
                return Err(Error::NonUnitDiagonal { index: i, value: d });
            }
            for j in i + 1..n {
                let product = m.get(i, j) * m.get(j, i);
                if !tol.eq(product, 1.0) {
                    return Err(Error::NotReciprocal {
                        row: i,
                        col: j,
                        product,
                    });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R], tol: &Tolerance) -> Result<Self> {
        Self::new(PosMatrix::from_rows(rows)?, tol)
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &PosMatrix {
        &self.0
    }
}

/// Positive priority vector scaled so its largest entry is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector(Vec<f64>);

impl ScoreVector {
    pub fn new(v: &[f64]) -> Result<Self> {
        crate::semiring::check_positive(v)?;
        if v.is_empty() {
            return Err(Error::Invalid("empty score vector".into()));
        }
        Ok(Self(normalize_max(v)))
    }

    pub fn scores(&self) -> &[f64] {
        &self.0
    }
}

/// Which member of a non-unique criteria solution set becomes the weight
/// vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightPolicy {
    /// Least differentiating representative.
    #[default]
    Least,
    /// Most differentiating representative.
    Most,
    /// Generator column `k`, one-based.
    Index(usize),
}

impl FromStr for WeightPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "least" => Ok(Self::Least),
            "most" => Ok(Self::Most),
            _ => s
                .strip_prefix("index:")
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|k| *k >= 1)
                .map(Self::Index)
                .ok_or_else(|| {
                    Error::Invalid(format!(
                        "weight policy `{s}`: expected least, most or index:<k> with k >= 1"
                    ))
                }),
        }
    }
}

impl fmt::Display for WeightPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Least => f.write_str("least"),
            Self::Most => f.write_str("most"),
            Self::Index(k) => write!(f, "index:{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateOptions {
    pub tol: Tolerance,
    pub weight_policy: WeightPolicy,
    pub enum_cap: u64,
}

impl Default for RateOptions {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            weight_policy: WeightPolicy::default(),
            enum_cap: DEFAULT_ENUM_CAP,
        }
    }
}

/// Where the criteria weights came from.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSource {
    /// The criteria solution set is a single ray.
    Unique,
    /// Picked from a non-unique solution set by the policy.
    Policy(WeightPolicy),
    /// Supplied by the caller.
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaWeights {
    /// Solution set of the criteria problem; `None` for explicit weights.
    pub solution: Option<SolutionSet>,
    /// Weights normalized to max entry 1.
    pub scores: ScoreVector,
    /// The weights used to combine the alternative matrices. For a unique
    /// solution this is the generator column as computed, unscaled.
    pub combining: Vec<f64>,
    pub source: WeightSource,
}

/// Criteria weights from the criteria comparison matrix.
pub fn derive_weights(a0: &PairwiseMatrix, opts: &RateOptions) -> Result<CriteriaWeights> {
    let solution = solve_min_form(a0.matrix(), &opts.tol)?;
    let (combining, source) = if solution.is_unique() {
        (solution.generators.column(0), WeightSource::Unique)
    } else {
        let chosen = match opts.weight_policy {
            WeightPolicy::Least => {
                least_diff_solutions_capped(&solution, &opts.tol, opts.enum_cap)?.vectors[0].clone()
            }
            WeightPolicy::Most => best_diff_solutions(&solution, &opts.tol)?.vectors[0].clone(),
            WeightPolicy::Index(k) => {
                if k > solution.generators.cols() {
                    return Err(Error::Invalid(format!(
                        "weight policy index:{k} but the criteria solution has {} generators",
                        solution.generators.cols()
                    )));
                }
                solution.generators.column(k - 1)
            }
        };
        (chosen, WeightSource::Policy(opts.weight_policy))
    };
    Ok(CriteriaWeights {
        scores: ScoreVector::new(&combining)?,
        combining,
        solution: Some(solution),
        source,
    })
}

/// A rating problem: `m` criteria and `n` alternatives.
#[derive(Debug, Clone, PartialEq)]
pub struct AhpProblem {
    pub criteria_labels: Vec<String>,
    pub alternative_labels: Vec<String>,
    pub criteria_matrix: Option<PairwiseMatrix>,
    pub alternative_matrices: Vec<PairwiseMatrix>,
    pub explicit_weights: Option<Vec<f64>>,
}

impl AhpProblem {
    pub fn new(
        criteria_labels: Vec<String>,
        alternative_labels: Vec<String>,
        criteria_matrix: Option<PairwiseMatrix>,
        alternative_matrices: Vec<PairwiseMatrix>,
        explicit_weights: Option<Vec<f64>>,
    ) -> Result<Self> {
        let m = criteria_labels.len();
        let n = alternative_labels.len();
        if m == 0 || n == 0 {
            return Err(Error::Invalid(
                "at least one criterion and one alternative are required".into(),
            ));
        }
        if alternative_matrices.len() != m {
            return Err(Error::DimensionMismatch {
                op: "problem",
                expected: format!("{m} alternative matrices"),
                found: format!("{}", alternative_matrices.len()),
            });
        }
        if let Some(a) = alternative_matrices.iter().find(|a| a.size() != n) {
            return Err(Error::DimensionMismatch {
                op: "problem",
                expected: format!("{n}x{n} alternative matrices"),
                found: format!("{0}x{0}", a.size()),
            });
        }
        match (&criteria_matrix, &explicit_weights) {
            (_, Some(w)) => {
                if w.len() != m {
                    return Err(Error::DimensionMismatch {
                        op: "problem",
                        expected: format!("{m} weights"),
                        found: format!("{}", w.len()),
                    });
                }
                crate::semiring::check_positive(w)?;
            }
            (Some(a0), None) if a0.size() != m => {
                return Err(Error::DimensionMismatch {
                    op: "problem",
                    expected: format!("{m}x{m} criteria matrix"),
                    found: format!("{0}x{0}", a0.size()),
                });
            }
            (Some(_), None) => {}
            (None, None) => {
                return Err(Error::Invalid(
                    "either a criteria matrix or explicit weights is required".into(),
                ))
            }
        }
        Ok(Self {
            criteria_labels,
            alternative_labels,
            criteria_matrix,
            alternative_matrices,
            explicit_weights,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Differentiation {
    Most,
    Least,
}

/// Ranking induced by one representative vector.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentativeRanking {
    pub kind: Differentiation,
    /// Position within the corresponding [`SeminormResult`].
    pub index: usize,
    pub scores: ScoreVector,
    pub ranking: RankingOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AhpResult {
    pub weights: CriteriaWeights,
    pub combined_matrix: PosMatrix,
    /// Optimum `μ` of the weighted problem.
    pub optimum: f64,
    pub solution_set: SolutionSet,
    pub best_diff: SeminormResult,
    pub least_diff: SeminormResult,
    /// Most differentiating representatives first, then least.
    pub rankings: Vec<RepresentativeRanking>,
    pub combined_order: RankingOrder,
}

/// Runs the full rating procedure.
pub fn rate_alternatives(p: &AhpProblem, opts: &RateOptions) -> Result<AhpResult> {
    let tol = &opts.tol;
    let weights = match (&p.explicit_weights, &p.criteria_matrix) {
        (Some(w), _) => CriteriaWeights {
            solution: None,
            scores: ScoreVector::new(w)?,
            combining: w.clone(),
            source: WeightSource::Explicit,
        },
        (None, Some(a0)) => derive_weights(a0, opts)?,
        (None, None) => {
            return Err(Error::Invalid(
                "either a criteria matrix or explicit weights is required".into(),
            ))
        }
    };

    let mats: Vec<PosMatrix> = p
        .alternative_matrices
        .iter()
        .map(|a| a.matrix().clone())
        .collect();
    let weighted = solve_weighted(&mats, &weights.combining, tol)?;
    let solution_set = weighted.solution;
    let best_diff = best_diff_solutions(&solution_set, tol)?;
    let least_diff = least_diff_solutions_capped(&solution_set, tol, opts.enum_cap)?;

    let mut rankings = Vec::new();
    for (kind, res) in [
        (Differentiation::Most, &best_diff),
        (Differentiation::Least, &least_diff),
    ] {
        for (index, v) in res.vectors.iter().enumerate() {
            let scores = ScoreVector::new(v)?;
            let ranking = derive_ranking(scores.scores(), tol);
            rankings.push(RepresentativeRanking {
                kind,
                index,
                scores,
                ranking,
            });
        }
    }
    let orders: Vec<RankingOrder> = rankings.iter().map(|r| r.ranking.clone()).collect();
    let combined_order = combine_rankings(&orders)?;

    Ok(AhpResult {
        weights,
        combined_matrix: weighted.combined,
        optimum: solution_set.optimum,
        solution_set,
        best_diff,
        least_diff,
        rankings,
        combined_order,
    })
}
