//! Most and least differentiating members of a solution set.
//!
//! Over the cone `x = B ⊗ u`, `u > 0`, the span seminorm
//! `max(x) / min(x)` is bounded above by `Δ = 1ᵀ B B⁻ 1` and below by
//! `Δ = (B (1ᵀB)⁻)⁻ 1`. Both bounds are attained, and the vectors that attain
//! them are generated by explicit matrices built from `B`. This module
//! enumerates those matrices and returns one normalized representative per
//! ray.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::semiring::{check_positive, is_collinear, PosMatrix, Tolerance};
use crate::solve::SolutionSet;

/// Default bound on the number of row selections examined by
/// [`least_diff_solutions`].
pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// How a representative was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Maximization: the generator column `column` and its minimal entry in
    /// row `row` (both zero-based).
    MaxPair { column: usize, row: usize },
    /// Minimization: for each row of `B`, the column whose entry was kept in
    /// the sparsified selection matrix.
    RowSelection(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeminormResult {
    /// The attained seminorm value.
    pub value: f64,
    /// Pairwise non-collinear representatives, each scaled to max entry 1.
    pub vectors: Vec<Vec<f64>>,
    /// Provenance of each representative, aligned with `vectors`.
    pub witnesses: Vec<Witness>,
    /// Number of candidate matrices examined.
    pub candidates: u64,
}

/// Contrast ratio `max(x) / min(x)` of a positive vector.
pub fn span_seminorm(x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::Invalid("seminorm of an empty vector".into()));
    }
    check_positive(x)?;
    let hi = x.iter().copied().fold(0.0_f64, f64::max);
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(hi / lo)
}

/// Scales a positive vector so that its largest entry is exactly 1.
pub fn normalize_max(x: &[f64]) -> Vec<f64> {
    let hi = x.iter().copied().fold(0.0_f64, f64::max);
    x.iter().map(|v| v / hi).collect()
}

/// Collects normalized, pairwise non-collinear representatives.
struct Representatives<'a> {
    tol: &'a Tolerance,
    vectors: Vec<Vec<f64>>,
    witnesses: Vec<Witness>,
}

impl<'a> Representatives<'a> {
    fn new(tol: &'a Tolerance) -> Self {
        Self {
            tol,
            vectors: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    fn offer(&mut self, v: &[f64], witness: &Witness) -> Result<()> {
        for seen in &self.vectors {
            if is_collinear(seen, v, self.tol)? {
                return Ok(());
            }
        }
        self.vectors.push(normalize_max(v));
        self.witnesses.push(witness.clone());
        Ok(())
    }

    /// Sorted in descending lexicographic order of the entries.
    fn finish(self, value: f64, candidates: u64) -> SeminormResult {
        let mut pairs: Vec<(Vec<f64>, Witness)> =
            self.vectors.into_iter().zip(self.witnesses).collect();
        // entries equal up to rounding must not decide the order, so compare
        // on a logarithmic grid of spacing rel_eq
        let step = self.tol.rel_eq;
        let key = |v: &[f64]| -> Vec<i64> {
            v.iter()
                .map(|x| {
                    if *x > 0.0 {
                        (x.ln() / step).round() as i64
                    } else {
                        i64::MIN
                    }
                })
                .collect()
        };
        pairs.sort_by_cached_key(|(v, _)| std::cmp::Reverse(key(v)));
        let (vectors, witnesses) = pairs.into_iter().unzip();
        SeminormResult {
            value,
            vectors,
            witnesses,
            candidates,
        }
    }
}

/// Most differentiating solutions: maximizes the span seminorm over the set.
///
/// For every column `k` and row `l` with `(1ᵀ b_k) / b_lk = Δ`, the columns of
/// `B (I ⊕ B_lk⁻ B)` generate maximizers, where `B_lk` keeps only the entry
/// `b_lk`. Row `k` of `B_lk⁻ B` is `b_l· / b_lk` and every other row is zero.
pub fn best_diff_solutions(s: &SolutionSet, tol: &Tolerance) -> Result<SeminormResult> {
    let b = &s.generators;
    if !b.is_positive() {
        return Err(Error::NonPositiveGenerators);
    }
    let (n, p) = (b.rows(), b.cols());
    let col_max = b.column_maxima();
    let col_min: Vec<f64> = (0..p)
        .map(|j| (0..n).map(|i| b.get(i, j)).fold(f64::INFINITY, f64::min))
        .collect();
    let delta = col_max
        .iter()
        .zip(&col_min)
        .map(|(hi, lo)| hi / lo)
        .fold(0.0_f64, f64::max);

    let mut reps = Representatives::new(tol);
    let mut candidates = 0;
    for k in 0..p {
        for l in 0..n {
            let blk = b.get(l, k);
            if !tol.eq(col_max[k] / blk, delta) {
                continue;
            }
            candidates += 1;
            let mut factor = PosMatrix::identity(p).as_slice().to_vec();
            for j in 0..p {
                let idx = k * p + j;
                factor[idx] = factor[idx].max(b.get(l, j) / blk);
            }
            let factor = PosMatrix::new(p, p, factor)?;
            let generated = b.otimes(&factor)?;
            let witness = Witness::MaxPair { column: k, row: l };
            for col in generated.columns() {
                reps.offer(&col, &witness)?;
            }
        }
    }
    Ok(reps.finish(delta, candidates))
}

/// Least differentiating solutions with the default enumeration cap.
pub fn least_diff_solutions(s: &SolutionSet, tol: &Tolerance) -> Result<SeminormResult> {
    least_diff_solutions_capped(s, tol, DEFAULT_ENUM_CAP)
}

/// Least differentiating solutions: minimizes the span seminorm over the set.
///
/// Entries of `B` below `Δ⁻¹ 1ᵀ b_j` are zeroed to give `B̂`. Each selection
/// `B₁` of one nonzero entry per row of `B̂` yields the generator matrix
/// `B (I ⊕ Δ⁻¹ B₁⁻ 1 1ᵀ B)`. Fails when the number of selections exceeds
/// `cap`.
pub fn least_diff_solutions_capped(
    s: &SolutionSet,
    tol: &Tolerance,
    cap: u64,
) -> Result<SeminormResult> {
    let b = &s.generators;
    let (n, p) = (b.rows(), b.cols());
    if let Some(i) = (0..n).find(|&i| b.row(i).iter().all(|v| *v == 0.0)) {
        return Err(Error::ZeroLine {
            kind: "row",
            index: i,
        });
    }
    let col_max = b.column_maxima();
    if let Some(j) = col_max.iter().position(|v| *v == 0.0) {
        return Err(Error::ZeroLine {
            kind: "column",
            index: j,
        });
    }

    // y = B (1ᵀB)⁻ and Δ = y⁻ 1
    let y: Vec<f64> = (0..n)
        .map(|i| (0..p).fold(0.0_f64, |acc, j| acc.max(b.get(i, j) / col_max[j])))
        .collect();
    let delta = y.iter().fold(0.0_f64, |acc, v| acc.max(1.0 / v));

    // admissible columns per row of the sparsified matrix
    let choices: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let kept: Vec<usize> = (0..p)
                .filter(|&j| {
                    let v = b.get(i, j);
                    v != 0.0 && tol.le(col_max[j] / delta, v)
                })
                .collect();
            if kept.is_empty() {
                // rounding pushed every entry under the threshold; keep the
                // one that defines y_i
                let best = (0..p)
                    .max_by(|&a, &c| (b.get(i, a) / col_max[a]).total_cmp(&(b.get(i, c) / col_max[c])))
                    .unwrap_or(0);
                vec![best]
            } else {
                kept
            }
        })
        .collect();

    let required: u128 = choices.iter().map(|c| c.len() as u128).product();
    if required > cap as u128 {
        return Err(Error::EnumerationCapExceeded { cap, required });
    }

    let mut reps = Representatives::new(tol);
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut selection = vec![0usize; n];
    let mut candidates = 0;
    loop {
        candidates += 1;
        let chosen: Vec<usize> = (0..n).map(|i| choices[i][selection[i]]).collect();

        // z = B₁⁻ 1: z_j = max over rows choosing j of 1 / b_ij
        let mut z = vec![0.0_f64; p];
        for (i, &j) in chosen.iter().enumerate() {
            z[j] = z[j].max(1.0 / b.get(i, j));
        }
        if seen.insert(z.iter().map(|v| v.to_bits()).collect()) {
            let mut factor = PosMatrix::identity(p).as_slice().to_vec();
            for r in 0..p {
                for c in 0..p {
                    let idx = r * p + c;
                    factor[idx] = factor[idx].max(z[r] * col_max[c] / delta);
                }
            }
            let factor = PosMatrix::new(p, p, factor)?;
            let generated = b.otimes(&factor)?;
            let witness = Witness::RowSelection(chosen);
            let columns: Vec<Vec<f64>> = generated.columns();
            let positive: Vec<&Vec<f64>> = columns
                .iter()
                .filter(|c| c.iter().all(|v| *v > 0.0))
                .collect();
            if positive.is_empty() {
                // only the interior of the cone is admissible
                reps.offer(&generated.apply(&vec![1.0; p])?, &witness)?;
            } else {
                for col in positive {
                    reps.offer(col, &witness)?;
                }
            }
        }

        // advance the mixed-radix counter; rows with one choice never move
        let mut i = 0;
        loop {
            if i == n {
                return Ok(reps.finish(delta, candidates));
            }
            selection[i] += 1;
            if selection[i] < choices[i].len() {
                break;
            }
            selection[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(columns: &[&[f64]]) -> SolutionSet {
        SolutionSet {
            optimum: 1.0,
            generators: PosMatrix::from_columns(columns).unwrap(),
        }
    }

    #[test]
    fn seminorm_values() {
        assert_eq!(span_seminorm(&[3.0, 3.0, 3.0]).unwrap(), 1.0);
        assert_eq!(span_seminorm(&[2.0, 1.0]).unwrap(), 2.0);
        assert!(span_seminorm(&[1.0, 0.0]).is_err());
        assert!(span_seminorm(&[1.0, -2.0]).is_err());
        assert!(span_seminorm(&[]).is_err());
    }

    #[test]
    fn single_column_set() {
        let tol = Tolerance::default();
        let s = set(&[&[2.0, 1.0, 4.0]]);
        let best = best_diff_solutions(&s, &tol).unwrap();
        let least = least_diff_solutions(&s, &tol).unwrap();
        for r in [&best, &least] {
            assert!((r.value - 4.0).abs() < 1e-15);
            assert_eq!(r.vectors, vec![vec![0.5, 0.25, 1.0]]);
        }
    }

    #[test]
    fn best_rejects_zero_entries() {
        let tol = Tolerance::default();
        let s = set(&[&[1.0, 0.0], &[1.0, 1.0]]);
        assert_eq!(best_diff_solutions(&s, &tol), Err(Error::NonPositiveGenerators));
    }

    #[test]
    fn least_rejects_zero_lines() {
        let tol = Tolerance::default();
        let s = set(&[&[1.0, 0.0], &[1.0, 0.0]]);
        assert!(matches!(
            least_diff_solutions(&s, &tol),
            Err(Error::ZeroLine { kind: "row", index: 1 })
        ));
        let s = set(&[&[1.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            least_diff_solutions(&s, &tol),
            Err(Error::ZeroLine { kind: "column", index: 1 })
        ));
    }

    #[test]
    fn enumeration_cap() {
        let tol = Tolerance::default();
        let s = set(&[&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]]);
        // equal columns: every row offers two choices, 2^3 selections
        let r = least_diff_solutions_capped(&s, &tol, 8).unwrap();
        assert_eq!(r.candidates, 8);
        assert_eq!(
            least_diff_solutions_capped(&s, &tol, 7),
            Err(Error::EnumerationCapExceeded { cap: 7, required: 8 })
        );
    }

    #[test]
    fn representatives_attain_value() {
        let tol = Tolerance::default();
        let s = set(&[&[1.0, 0.4, 0.7, 0.2], &[0.3, 1.0, 0.5, 0.6], &[0.5, 0.5, 1.0, 0.9]]);
        for r in [best_diff_solutions(&s, &tol).unwrap(), least_diff_solutions(&s, &tol).unwrap()] {
            assert!(!r.vectors.is_empty());
            for v in &r.vectors {
                assert!(tol.eq(span_seminorm(v).unwrap(), r.value));
                assert_eq!(v.iter().copied().fold(0.0, f64::max), 1.0);
            }
        }
    }
}
