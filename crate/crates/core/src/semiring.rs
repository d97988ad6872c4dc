//! Max-times semifield algebra over nonnegative reals.
//!
//! Addition is `max` (neutral element 0) and multiplication is the ordinary
//! product (neutral element 1). Matrices are dense and row-major; every
//! routine here is a pure function of its inputs.

use std::fmt;

use crate::error::{Error, Result};

/// Comparison tolerances shared by all numerical routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative tolerance for scalar equality.
    pub rel_eq: f64,
    /// Relative tolerance under which two scores are ranked as tied.
    pub tie_rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel_eq: 1e-9,
            tie_rel: 1e-6,
        }
    }
}

impl Tolerance {
    pub fn new(rel_eq: f64, tie_rel: f64) -> Result<Self> {
        let valid = rel_eq > 0.0 && rel_eq < tie_rel && tie_rel < 1.0;
        if !valid {
            return Err(Error::InvalidTolerance { rel_eq, tie_rel });
        }
        Ok(Self { rel_eq, tie_rel })
    }

    /// Relative equality `|a - b| <= rel_eq * max(a, b)`.
    ///
    /// Two exact zeros compare equal; a zero never equals a nonzero value.
    pub fn eq(&self, a: f64, b: f64) -> bool {
        rel_close(a, b, self.rel_eq)
    }

    /// `a <= b` up to the equality tolerance.
    pub fn le(&self, a: f64, b: f64) -> bool {
        a <= b || self.eq(a, b)
    }

    /// Whether two scores fall within the ranking tie threshold.
    pub fn tied(&self, a: f64, b: f64) -> bool {
        rel_close(a, b, self.tie_rel)
    }
}

pub(crate) fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Dense matrix over the nonnegative reals.
#[derive(Debug, Clone, PartialEq)]
pub struct PosMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl PosMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "matrix construction",
                expected: format!("{} entries", rows * cols),
                found: format!("{} entries", data.len()),
            });
        }
        if let Some(k) = data.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidEntry {
                row: k / cols,
                col: k % cols,
                value: data[k],
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    op: "matrix construction",
                    expected: format!("{cols} entries in row {i}"),
                    found: format!("{}", r.len()),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data)
    }

    /// Builds a matrix from its columns.
    pub fn from_columns<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        let cols = columns.len();
        let mut data = vec![0.0; rows * cols];
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    op: "matrix construction",
                    expected: format!("{rows} entries in column {j}"),
                    found: format!("{}", c.len()),
                });
            }
            for (i, v) in c.iter().enumerate() {
                data[i * cols + j] = *v;
            }
        }
        Self::new(rows, cols, data)
    }

    /// Single-column matrix holding `v`.
    pub fn column_vector(v: &[f64]) -> Result<Self> {
        Self::new(v.len(), 1, v.to_vec())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    /// Row-major view of the entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<f64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == 0.0)
    }

    pub fn is_positive(&self) -> bool {
        self.data.iter().all(|v| *v > 0.0)
    }

    /// Submatrix made of the listed columns, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> PosMatrix {
        let cols = idx.len();
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend(idx.iter().map(|&j| self.get(i, j)));
        }
        PosMatrix {
            rows: self.rows,
            cols,
            data,
        }
    }

    /// Multiplies every entry by the nonnegative scalar `c`.
    pub fn scale(&self, c: f64) -> PosMatrix {
        PosMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    /// Entrywise maximum, the tropical sum `A ⊕ B`.
    pub fn oplus(&self, other: &PosMatrix) -> Result<PosMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "tropical sum",
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(PosMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.max(*b))
                .collect(),
        })
    }

    /// Tropical product `self ⊗ other`.
    pub fn otimes(&self, other: &PosMatrix) -> Result<PosMatrix> {
        trop_mat_mul(self, other)
    }

    /// Tropical matrix-vector product `A ⊗ x`.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "matrix-vector product",
                expected: format!("vector of length {}", self.cols),
                found: format!("length {}", x.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(0.0_f64, |acc, (a, b)| acc.max(a * b))
            })
            .collect())
    }

    /// Maximum entry of each column, the row vector `1ᵀA`.
    pub fn column_maxima(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|j| (0..self.rows).fold(0.0_f64, |acc, i| acc.max(self.get(i, j))))
            .collect()
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl fmt::Display for PosMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(4);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|v| format!("{v:.prec$}")).collect();
            writeln!(f, "{}", line.join("  "))?;
        }
        Ok(())
    }
}

/// Tropical matrix product: `result[i][j] = max_k a[i][k] * b[k][j]`.
pub fn trop_mat_mul(a: &PosMatrix, b: &PosMatrix) -> Result<PosMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "tropical product",
            expected: format!("{} rows on the right", a.cols),
            found: format!("{}", b.rows),
        });
    }
    let mut data = vec![0.0_f64; a.rows * b.cols];
    for i in 0..a.rows {
        let out = &mut data[i * b.cols..(i + 1) * b.cols];
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if aik == 0.0 {
                continue;
            }
            for (o, bkj) in out.iter_mut().zip(b.row(k)) {
                *o = o.max(aik * bkj);
            }
        }
    }
    Ok(PosMatrix {
        rows: a.rows,
        cols: b.cols,
        data,
    })
}

/// Multiplicative conjugate transpose `A⁻`: transpose with nonzero entries
/// inverted and zeros kept.
pub fn conjugate_transpose(a: &PosMatrix) -> Result<PosMatrix> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let mut data = vec![0.0; a.rows * a.cols];
    for i in 0..a.rows {
        for j in 0..a.cols {
            let v = a.get(i, j);
            if v != 0.0 {
                data[j * a.rows + i] = 1.0 / v;
            }
        }
    }
    Ok(PosMatrix {
        rows: a.cols,
        cols: a.rows,
        data,
    })
}

/// Conjugate of a column vector, returned as the entries of the row `x⁻`.
pub fn conjugate_vector(x: &[f64]) -> Result<Vec<f64>> {
    if x.iter().all(|v| *v == 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(x.iter()
        .map(|v| if *v != 0.0 { 1.0 / v } else { 0.0 })
        .collect())
}

/// Tropical power with `A⁰ = I`.
pub fn trop_power(a: &PosMatrix, p: u32) -> Result<PosMatrix> {
    a.require_square()?;
    let mut acc = PosMatrix::identity(a.rows);
    for _ in 0..p {
        acc = trop_mat_mul(&acc, a)?;
    }
    Ok(acc)
}

/// Tropical trace: the largest diagonal entry.
fn trop_trace(a: &PosMatrix) -> f64 {
    (0..a.rows).fold(0.0_f64, |acc, i| acc.max(a.get(i, i)))
}

/// Tropical spectral radius: the maximum cycle geometric mean,
/// evaluated as `max_k tr(Aᵏ)^{1/k}` for `k = 1..n`.
pub fn spectral_radius(a: &PosMatrix) -> Result<f64> {
    a.require_square()?;
    let n = a.rows;
    let mut power = a.clone();
    let mut radius = 0.0_f64;
    for k in 1..=n {
        if k > 1 {
            power = trop_mat_mul(&power, a)?;
        }
        let tr = trop_trace(&power);
        if tr > 0.0 {
            radius = radius.max(tr.powf(1.0 / k as f64));
        }
    }
    Ok(radius)
}

/// Kleene star `A* = I ⊕ A ⊕ ... ⊕ Aⁿ⁻¹`, defined when the spectral radius
/// does not exceed 1 (up to `rel_eq`).
pub fn kleene_star(a: &PosMatrix, tol: &Tolerance) -> Result<PosMatrix> {
    let radius = spectral_radius(a)?;
    if radius > 1.0 && !tol.eq(radius, 1.0) {
        return Err(Error::DivergentClosure { radius });
    }
    let n = a.rows;
    let mut star = PosMatrix::identity(n);
    let mut power = PosMatrix::identity(n);
    for _ in 1..n {
        power = trop_mat_mul(&power, a)?;
        star = star.oplus(&power)?;
    }
    Ok(star)
}

/// The quadratic form `x⁻ A x = max_ij a_ij x_j / x_i` for positive `x`.
pub fn conjugate_form(a: &PosMatrix, x: &[f64]) -> Result<f64> {
    a.require_square()?;
    check_positive(x)?;
    let ax = a.apply(x)?;
    Ok(ax.iter().zip(x).fold(0.0_f64, |acc, (v, xi)| acc.max(v / xi)))
}

pub(crate) fn check_positive(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        Some(k) => Err(Error::NonPositiveEntry {
            row: k,
            col: 0,
            value: x[k],
        }),
        None => Ok(()),
    }
}

fn check_same_len(x: &[f64], y: &[f64], op: &'static str) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            op,
            expected: format!("length {}", x.len()),
            found: format!("length {}", y.len()),
        });
    }
    Ok(())
}

/// Whether positive vectors `x` and `y` differ by a scalar factor.
pub fn is_collinear(x: &[f64], y: &[f64], tol: &Tolerance) -> Result<bool> {
    check_same_len(x, y, "collinearity test")?;
    check_positive(x)?;
    check_positive(y)?;
    let (lo, hi) = x
        .iter()
        .zip(y)
        .map(|(a, b)| b / a)
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), r| (lo.min(r), hi.max(r)));
    Ok(tol.eq(lo, hi))
}

/// Collinearity for nonnegative vectors: same zero pattern and a common
/// ratio on the support.
pub(crate) fn proportional(x: &[f64], y: &[f64], tol: &Tolerance) -> bool {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0_f64;
    for (a, b) in x.iter().zip(y) {
        match (*a == 0.0, *b == 0.0) {
            (true, true) => {}
            (false, false) => {
                let r = b / a;
                lo = lo.min(r);
                hi = hi.max(r);
            }
            _ => return false,
        }
    }
    hi == 0.0 || tol.eq(lo, hi)
}

/// Greatest coefficient vector `û` with `B ⊗ û <= v` (residuation).
pub(crate) fn principal_coefficients(b: &PosMatrix, v: &[f64]) -> Vec<f64> {
    (0..b.cols)
        .map(|j| {
            (0..b.rows)
                .filter(|&i| b.get(i, j) != 0.0)
                .map(|i| v[i] / b.get(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Tropical span membership: `v` is a max-combination of the columns of `b`.
///
/// Uses the greatest subsolution `û_j = min_i v_i / b_ij` and checks that
/// `B ⊗ û` reproduces `v`.
pub fn is_in_span(b: &PosMatrix, v: &[f64], tol: &Tolerance) -> Result<bool> {
    if v.len() != b.rows {
        return Err(Error::DimensionMismatch {
            op: "span membership",
            expected: format!("vector of length {}", b.rows),
            found: format!("length {}", v.len()),
        });
    }
    if let Some(k) = v.iter().position(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(Error::InvalidEntry {
            row: k,
            col: 0,
            value: v[k],
        });
    }
    if v.iter().all(|x| *x == 0.0) {
        return Err(Error::ZeroVector);
    }
    if let Some(j) = (0..b.cols).find(|&j| (0..b.rows).all(|i| b.get(i, j) == 0.0)) {
        return Err(Error::ZeroLine {
            kind: "column",
            index: j,
        });
    }
    let u = principal_coefficients(b, v);
    let bu = b.apply(&u)?;
    Ok(bu.iter().zip(v).all(|(a, b)| tol.eq(*a, *b)))
}
