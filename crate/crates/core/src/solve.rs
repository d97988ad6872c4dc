//! Log-Chebyshev approximation by consistent matrices.
//!
//! For a square matrix `A` with spectral radius `λ > 0`, the minimum of
//! `x⁻ A x` over positive `x` is `λ`, and the minimizers are exactly the
//! vectors `(λ⁻¹A)* u` with `u > 0`. The weighted multi-matrix problem
//! reduces to the same form through the entrywise maximum of the weighted
//! matrices.

use crate::error::{Error, Result};
use crate::semiring::{
    conjugate_form, is_in_span, kleene_star, proportional, spectral_radius, PosMatrix, Tolerance,
};

/// Complete solution of a minimization problem: the attained optimum and a
/// minimal generator matrix `B`. Every `x = B ⊗ u` with `u > 0` is optimal.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    pub optimum: f64,
    pub generators: PosMatrix,
}

impl SolutionSet {
    /// Dimension of the solution vectors.
    pub fn source_dim(&self) -> usize {
        self.generators.rows()
    }

    /// True when the solution is unique up to a positive factor.
    pub fn is_unique(&self) -> bool {
        self.generators.cols() == 1
    }

    /// The solution `B ⊗ u`.
    pub fn member(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.generators.apply(u)
    }
}

/// Result of the weighted problem together with the combined matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSolution {
    pub combined: PosMatrix,
    pub solution: SolutionSet,
}

/// Minimizes `x⁻ A x` over positive vectors.
pub fn solve_min_form(a: &PosMatrix, tol: &Tolerance) -> Result<SolutionSet> {
    let lambda = spectral_radius(a)?;
    if lambda == 0.0 {
        return Err(Error::DegenerateSpectrum);
    }
    let star = kleene_star(&a.scale(1.0 / lambda), tol)?;
    let generators = reduce_generators(&star, tol);
    debug_assert!(generators
        .columns()
        .iter()
        .filter(|g| g.iter().all(|v| *v > 0.0))
        .all(|g| conjugate_form(a, g).is_ok_and(|v| tol.eq(v, lambda) || v < lambda)));
    Ok(SolutionSet {
        optimum: lambda,
        generators,
    })
}

/// Builds `C = ⊕_k w_k A_k`, i.e. `c_ij = max_k w_k a_ij^(k)`.
pub fn combine_matrices(mats: &[PosMatrix], weights: &[f64]) -> Result<PosMatrix> {
    let first = mats
        .first()
        .ok_or_else(|| Error::Invalid("at least one matrix is required".into()))?;
    if weights.len() != mats.len() {
        return Err(Error::DimensionMismatch {
            op: "weighted combination",
            expected: format!("{} weights", mats.len()),
            found: format!("{}", weights.len()),
        });
    }
    if let Some(k) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::NonPositiveEntry {
            row: k,
            col: 0,
            value: weights[k],
        });
    }
    if !first.is_square() {
        return Err(Error::NotSquare {
            rows: first.rows(),
            cols: first.cols(),
        });
    }
    let mut combined = PosMatrix::zeros(first.rows(), first.cols());
    for (a, w) in mats.iter().zip(weights) {
        combined = combined.oplus(&a.scale(*w))?;
    }
    Ok(combined)
}

/// Minimizes `⊕_k w_k x⁻ A_k x` over positive vectors.
pub fn solve_weighted(
    mats: &[PosMatrix],
    weights: &[f64],
    tol: &Tolerance,
) -> Result<WeightedSolution> {
    let combined = combine_matrices(mats, weights)?;
    let solution = solve_min_form(&combined, tol)?;
    Ok(WeightedSolution { combined, solution })
}

/// Indices of the columns kept by [`reduce_generators`].
pub fn retained_columns(b: &PosMatrix, tol: &Tolerance) -> Vec<usize> {
    let columns = b.columns();

    // zero columns add nothing to the span
    let nonzero: Vec<usize> = (0..b.cols())
        .filter(|&j| columns[j].iter().any(|v| *v != 0.0))
        .collect();
    if nonzero.is_empty() {
        return vec![0];
    }

    let mut kept: Vec<usize> = Vec::with_capacity(nonzero.len());
    for &j in &nonzero {
        if !kept.iter().any(|&k| proportional(&columns[k], &columns[j], tol)) {
            kept.push(j);
        }
    }

    // A removal only shrinks the span of the rest, so columns kept earlier in
    // the scan stay independent and one left-to-right pass is enough.
    let mut pos = 0;
    while pos < kept.len() && kept.len() > 1 {
        let j = kept[pos];
        let others: Vec<usize> = kept.iter().copied().filter(|&k| k != j).collect();
        let rest = b.select_columns(&others);
        if is_in_span(&rest, &columns[j], tol).unwrap_or(false) {
            kept.remove(pos);
        } else {
            pos += 1;
        }
    }
    kept
}

/// Removes generator columns that are tropically dependent on the others.
///
/// Collinear duplicates collapse onto the lowest index first; then columns
/// lying in the span of the remaining ones are dropped left to right. The
/// column span is unchanged.
pub fn reduce_generators(b: &PosMatrix, tol: &Tolerance) -> PosMatrix {
    b.select_columns(&retained_columns(b, tol))
}
