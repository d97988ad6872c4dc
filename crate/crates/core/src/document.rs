//! JSON problem and result documents.
//!
//! Matrix entries are numbers or rational strings such as `"1/7"`; both are
//! parsed exactly and converted to `f64` once. Pairwise matrices may be given
//! in full, with `null` for entries to be completed as reciprocals, or as an
//! upper triangle whose row `i` lists columns `i..n`.
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "criteria": ["cost", "comfort"],
//!   "alternatives": ["A", "B", "C"],
//!   "criteria_matrix": [[1, 3], [1]],
//!   "matrices": {
//!     "cost":    [[1, "1/2", 4], [1, 3], [1]],
//!     "comfort": [[1, 5, 1], [null, 1, "1/5"], [null, null, 1]]
//!   },
//!   "options": { "tie_rel": 1e-6, "weight_policy": "least" }
//! }
//! ```

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::pipeline::{
    derive_weights, rate_alternatives, AhpProblem, AhpResult, CriteriaWeights, PairwiseMatrix,
    RateOptions, ScoreVector, WeightPolicy, WeightSource,
};
use crate::ranking::derive_ranking;
use crate::semiring::{PosMatrix, Tolerance};
use crate::seminorm::{
    best_diff_solutions, least_diff_solutions_capped, SeminormResult, Witness,
};
use crate::solve::{solve_min_form, SolutionSet};

pub const SCHEMA_VERSION: &str = "1";

/// Position of an offending entry; `row` and `col` are one-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub matrix: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub row: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub col: Option<usize>,
}

impl Location {
    fn cell(matrix: &str, row: usize, col: usize) -> Self {
        Self {
            matrix: matrix.to_string(),
            row: Some(row + 1),
            col: Some(col + 1),
        }
    }

    fn whole(matrix: &str) -> Self {
        Self {
            matrix: matrix.to_string(),
            row: None,
            col: None,
        }
    }
}

/// Whether a failure comes from the input or from a solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorKind {
    #[default]
    Validation,
    Solver,
}

/// Structured error reported by the CLI and the HTTP service.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, thiserror::Error)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub location: Option<Location>,
    #[serde(skip)]
    pub kind: ErrorKind,
}

impl fmt::Display for ErrorBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)?;
        if let Some(loc) = &self.location {
            write!(f, " (in {}", loc.matrix)?;
            if let (Some(r), Some(c)) = (loc.row, loc.col) {
                write!(f, " at row {r}, column {c}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl ErrorBody {
    fn new(code: &str, message: impl Into<String>, location: Option<Location>) -> Self {
        Self {
            code: code.to_string(),
            message: message.into(),
            location,
            kind: ErrorKind::Validation,
        }
    }

    fn malformed(message: impl Into<String>) -> Self {
        Self::new("malformed_document", message, None)
    }

    /// Maps a core error, attaching `matrix` as the location when the error
    /// names an entry.
    pub fn from_core(err: &Error, matrix: Option<&str>) -> Self {
        let code = match err {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::NotSquare { .. } => "non_square",
            Error::Empty => "empty_matrix",
            Error::InvalidEntry { .. } | Error::NonPositiveEntry { .. } => "nonpositive_entry",
            Error::ZeroMatrix | Error::ZeroVector => "zero_input",
            Error::ZeroLine { .. } => "zero_line",
            Error::DivergentClosure { .. } => "divergent_closure",
            Error::DegenerateSpectrum => "degenerate_spectrum",
            Error::NonPositiveGenerators => "nonpositive_generators",
            Error::EnumerationCapExceeded { .. } => "enumeration_cap",
            Error::NotReciprocal { .. } => "reciprocity_violation",
            Error::NonUnitDiagonal { .. } => "non_unit_diagonal",
            Error::InvalidTolerance { .. } => "invalid_option",
            Error::Invalid(_) => "invalid_input",
        };
        let location = matrix.map(|m| match err {
            Error::InvalidEntry { row, col, .. }
            | Error::NonPositiveEntry { row, col, .. }
            | Error::NotReciprocal { row, col, .. } => Location::cell(m, *row, *col),
            Error::NonUnitDiagonal { index, .. } => Location::cell(m, *index, *index),
            _ => Location::whole(m),
        });
        Self {
            code: code.to_string(),
            message: err.to_string(),
            location,
            kind: if err.is_validation() {
                ErrorKind::Validation
            } else {
                ErrorKind::Solver
            },
        }
    }
}

impl From<Error> for ErrorBody {
    fn from(err: Error) -> Self {
        Self::from_core(&err, None)
    }
}

type DocResult<T> = std::result::Result<T, ErrorBody>;

/// A matrix entry as written in a document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Entry {
    Exact(Rational64),
    /// A number with no exact `i64` ratio representation.
    Float(f64),
}

impl Entry {
    pub fn value(&self) -> f64 {
        match self {
            Entry::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            Entry::Float(v) => *v,
        }
    }

    fn is_positive(&self) -> bool {
        match self {
            Entry::Exact(r) => *r.numer() > 0,
            Entry::Float(v) => v.is_finite() && *v > 0.0,
        }
    }

    fn is_nonnegative(&self) -> bool {
        match self {
            Entry::Exact(r) => *r.numer() >= 0,
            Entry::Float(v) => v.is_finite() && *v >= 0.0,
        }
    }

    fn reciprocal(&self) -> Entry {
        match self {
            Entry::Exact(r) => Entry::Exact(r.recip()),
            Entry::Float(v) => Entry::Float(1.0 / v),
        }
    }

    /// Product of two entries, exact when both are.
    fn product(&self, other: &Entry) -> Entry {
        if let (Entry::Exact(a), Entry::Exact(b)) = (self, other) {
            let num = a.numer().checked_mul(*b.numer());
            let den = a.denom().checked_mul(*b.denom());
            if let (Some(n), Some(d)) = (num, den) {
                return Entry::Exact(Rational64::new(n, d));
            }
        }
        Entry::Float(self.value() * other.value())
    }

    fn is_one(&self, tol: &Tolerance) -> bool {
        match self {
            Entry::Exact(r) => *r.numer() == *r.denom(),
            Entry::Float(v) => tol.eq(*v, 1.0),
        }
    }

    /// Integers render as JSON numbers, other ratios as `"p/q"` strings.
    pub fn to_json(&self) -> Value {
        match self {
            Entry::Exact(r) if *r.denom() == 1 => json!(*r.numer()),
            Entry::Exact(r) => Value::String(format!("{}/{}", r.numer(), r.denom())),
            Entry::Float(v) => json!(v),
        }
    }

    fn parse(v: &Value) -> Option<Entry> {
        match v {
            Value::Number(n) => match n.as_i64() {
                Some(i) => Some(Entry::Exact(Rational64::from_integer(i))),
                None => {
                    let f = n.as_f64()?;
                    Some(parse_decimal(&n.to_string()).map_or(Entry::Float(f), Entry::Exact))
                }
            },
            Value::String(s) => parse_entry_str(s.trim()),
            _ => None,
        }
    }
}

fn parse_entry_str(s: &str) -> Option<Entry> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p = parse_decimal(p.trim())?;
            let q = parse_decimal(q.trim())?;
            if *q.numer() == 0 {
                return None;
            }
            let num = p.numer().checked_mul(*q.denom())?;
            let den = p.denom().checked_mul(*q.numer())?;
            Some(Entry::Exact(Rational64::new(num, den)))
        }
        None => match parse_decimal(s) {
            Some(r) => Some(Entry::Exact(r)),
            None => s
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(Entry::Float),
        },
    }
}

/// Exact value of a decimal literal like `-12.375` or `2.5e-3`, when it fits
/// in an `i64` ratio.
fn parse_decimal(s: &str) -> Option<Rational64> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut num: i64 = 0;
    for b in int.bytes().chain(frac.bytes()) {
        num = num.checked_mul(10)?.checked_add(i64::from(b - b'0'))?;
    }
    let scale = exp - frac.len() as i32;
    let pow = 10i64.checked_pow(scale.unsigned_abs())?;
    let r = if scale >= 0 {
        Rational64::from_integer(num.checked_mul(pow)?)
    } else {
        Rational64::new(num, pow)
    };
    Some(if neg { -r } else { r })
}

/// Square matrix of document entries, complete after parsing.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix {
    size: usize,
    entries: Vec<Entry>,
}

impl ExactMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> Entry {
        self.entries[i * self.size + j]
    }

    pub fn to_pos_matrix(&self) -> PosMatrix {
        PosMatrix::new(
            self.size,
            self.size,
            self.entries.iter().map(Entry::value).collect(),
        )
        .expect("entries validated at parse time")
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.size)
                .map(|i| Value::Array((0..self.size).map(|j| self.entry(i, j).to_json()).collect()))
                .collect(),
        )
    }
}

/// How strictly a square matrix is validated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MatrixRules {
    /// Reciprocity and unit diagonal enforced.
    Pairwise,
    /// Missing entries are completed as reciprocals, nothing else enforced.
    Completed,
}

fn parse_square(
    v: &Value,
    name: &str,
    expected: Option<usize>,
    rules: MatrixRules,
    tol: &Tolerance,
) -> DocResult<ExactMatrix> {
    let rows = v.as_array().ok_or_else(|| {
        ErrorBody::new(
            "malformed_document",
            format!("{name} must be an array of rows"),
            Some(Location::whole(name)),
        )
    })?;
    let n = rows.len();
    let mut lens = Vec::with_capacity(n);
    for (i, r) in rows.iter().enumerate() {
        let r = r.as_array().ok_or_else(|| {
            ErrorBody::new(
                "malformed_document",
                format!("row {} of {name} must be an array", i + 1),
                Some(Location::whole(name)),
            )
        })?;
        lens.push(r.len());
    }
    if n == 0 {
        return Err(ErrorBody::new(
            "non_square",
            format!("{name} is empty"),
            Some(Location::whole(name)),
        ));
    }
    let full = lens.iter().all(|&l| l == n);
    let upper = n > 1 && lens.iter().enumerate().all(|(i, &l)| l == n - i);
    if !full && !upper {
        return Err(ErrorBody::new(
            "non_square",
            format!("{name} has row lengths {lens:?}; expected {n} per row or an upper triangle"),
            Some(Location::whole(name)),
        ));
    }
    if let Some(m) = expected {
        if m != n {
            return Err(ErrorBody::new(
                "dimension_mismatch",
                format!("{name} is {n}x{n}, expected {m}x{m}"),
                Some(Location::whole(name)),
            ));
        }
    }

    let mut given: Vec<Option<Entry>> = vec![None; n * n];
    for (i, r) in rows.iter().enumerate() {
        let offset = if full { 0 } else { i };
        for (k, cell) in r.as_array().into_iter().flatten().enumerate() {
            let j = k + offset;
            if cell.is_null() {
                continue;
            }
            let e = Entry::parse(cell).ok_or_else(|| {
                ErrorBody::new(
                    "malformed_document",
                    format!("entry {cell} is neither a number nor a rational string"),
                    Some(Location::cell(name, i, j)),
                )
            })?;
            if !e.is_positive() {
                return Err(ErrorBody::new(
                    "nonpositive_entry",
                    format!("entry {cell} must be positive"),
                    Some(Location::cell(name, i, j)),
                ));
            }
            given[i * n + j] = Some(e);
        }
    }

    let mut entries = vec![Entry::Exact(Rational64::from_integer(1)); n * n];
    for i in 0..n {
        match given[i * n + i] {
            Some(d) if rules == MatrixRules::Pairwise && !d.is_one(tol) => {
                return Err(ErrorBody::new(
                    "non_unit_diagonal",
                    format!("diagonal entry is {}, expected 1", d.value()),
                    Some(Location::cell(name, i, i)),
                ))
            }
            Some(d) => entries[i * n + i] = d,
            None => {}
        }
        for j in i + 1..n {
            let (a, b) = (given[i * n + j], given[j * n + i]);
            let (upper, lower) = match (a, b) {
                (Some(a), Some(b)) => {
                    let product = a.product(&b);
                    if rules == MatrixRules::Pairwise && !product.is_one(tol) {
                        return Err(ErrorBody::new(
                            "reciprocity_violation",
                            format!(
                                "entries ({0}, {1}) and ({1}, {0}) multiply to {2}, expected 1",
                                i + 1,
                                j + 1,
                                product.value()
                            ),
                            Some(Location::cell(name, i, j)),
                        ));
                    }
                    (a, b)
                }
                (Some(a), None) => (a, a.reciprocal()),
                (None, Some(b)) => (b.reciprocal(), b),
                (None, None) => {
                    return Err(ErrorBody::new(
                        "missing_entry",
                        format!("neither ({0}, {1}) nor ({1}, {0}) is given", i + 1, j + 1),
                        Some(Location::cell(name, i, j)),
                    ))
                }
            };
            entries[i * n + j] = upper;
            entries[j * n + i] = lower;
        }
    }
    Ok(ExactMatrix { size: n, entries })
}

/// Tolerance and policy settings carried by a document or given on the
/// command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocOptions {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rel_eq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tie_rel: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weight_policy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub enum_cap: Option<u64>,
}

impl DocOptions {
    /// `self` with every setting present in `overrides` replaced.
    pub fn merged(&self, overrides: &DocOptions) -> DocOptions {
        DocOptions {
            rel_eq: overrides.rel_eq.or(self.rel_eq),
            tie_rel: overrides.tie_rel.or(self.tie_rel),
            weight_policy: overrides
                .weight_policy
                .clone()
                .or_else(|| self.weight_policy.clone()),
            enum_cap: overrides.enum_cap.or(self.enum_cap),
        }
    }

    pub fn tolerance(&self) -> DocResult<Tolerance> {
        let d = Tolerance::default();
        Tolerance::new(self.rel_eq.unwrap_or(d.rel_eq), self.tie_rel.unwrap_or(d.tie_rel)).map_err(
            |e| ErrorBody::new("invalid_option", e.to_string(), Some(Location::whole("options"))),
        )
    }

    pub fn rate_options(&self) -> DocResult<RateOptions> {
        let d = RateOptions::default();
        let weight_policy = match &self.weight_policy {
            Some(s) => s.parse::<WeightPolicy>().map_err(|e| {
                ErrorBody::new("invalid_option", e.to_string(), Some(Location::whole("options")))
            })?,
            None => d.weight_policy,
        };
        let enum_cap = self.enum_cap.unwrap_or(d.enum_cap);
        if enum_cap == 0 {
            return Err(ErrorBody::new(
                "invalid_option",
                "enum_cap must be at least 1",
                Some(Location::whole("options")),
            ));
        }
        Ok(RateOptions {
            tol: self.tolerance()?,
            weight_policy,
            enum_cap,
        })
    }

    fn from_value(v: Option<&Value>) -> DocResult<DocOptions> {
        match v {
            None | Some(Value::Null) => Ok(DocOptions::default()),
            Some(v) => serde_json::from_value(v.clone()).map_err(|e| {
                ErrorBody::new(
                    "malformed_document",
                    format!("options: {e}"),
                    Some(Location::whole("options")),
                )
            }),
        }
    }
}

/// A validated rating problem in document form.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDocument {
    pub schema_version: String,
    pub criteria: Vec<String>,
    pub alternatives: Vec<String>,
    pub criteria_matrix: Option<ExactMatrix>,
    /// Alternative comparison matrices in criteria order.
    pub matrices: Vec<ExactMatrix>,
    pub weights: Option<Vec<Entry>>,
    pub options: DocOptions,
}

fn parse_json(text: &[u8]) -> DocResult<Value> {
    let text = std::str::from_utf8(text)
        .map_err(|e| ErrorBody::malformed(format!("document is not UTF-8: {e}")))?;
    serde_json::from_str(text).map_err(|e| ErrorBody::malformed(format!("invalid JSON: {e}")))
}

fn string_list(obj: &Map<String, Value>, key: &str) -> DocResult<Vec<String>> {
    let list = obj
        .get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| ErrorBody::malformed(format!("`{key}` must be a list of names")))?;
    let names: Vec<String> = list
        .iter()
        .map(|v| v.as_str().map(str::to_string))
        .collect::<Option<_>>()
        .ok_or_else(|| ErrorBody::malformed(format!("`{key}` must contain only strings")))?;
    if names.is_empty() {
        return Err(ErrorBody::malformed(format!("`{key}` must not be empty")));
    }
    let unique: BTreeSet<&String> = names.iter().collect();
    if unique.len() != names.len() {
        return Err(ErrorBody::malformed(format!("`{key}` contains duplicate names")));
    }
    Ok(names)
}

/// Parses and validates a problem document.
pub fn parse_problem(text: &[u8]) -> DocResult<ProblemDocument> {
    let root = parse_json(text)?;
    let obj = root
        .as_object()
        .ok_or_else(|| ErrorBody::malformed("document must be a JSON object"))?;
    const KNOWN: [&str; 7] = [
        "schema_version",
        "criteria",
        "alternatives",
        "criteria_matrix",
        "matrices",
        "weights",
        "options",
    ];
    if let Some(k) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(ErrorBody::malformed(format!("unknown field `{k}`")));
    }
    let schema_version = match obj.get("schema_version") {
        None => SCHEMA_VERSION.to_string(),
        Some(Value::String(s)) if s == SCHEMA_VERSION => s.clone(),
        Some(other) => {
            return Err(ErrorBody::malformed(format!(
                "unsupported schema_version {other}, expected \"{SCHEMA_VERSION}\""
            )))
        }
    };
    let options = DocOptions::from_value(obj.get("options"))?;
    let tol = options.tolerance()?;
    let criteria = string_list(obj, "criteria")?;
    let alternatives = string_list(obj, "alternatives")?;
    let (m, n) = (criteria.len(), alternatives.len());

    let criteria_matrix = match obj.get("criteria_matrix") {
        None | Some(Value::Null) => None,
        Some(v) => Some(parse_square(
            v,
            "criteria_matrix",
            Some(m),
            MatrixRules::Pairwise,
            &tol,
        )?),
    };

    let weights = match obj.get("weights") {
        None | Some(Value::Null) => None,
        Some(Value::Array(list)) => {
            if list.len() != m {
                return Err(ErrorBody::new(
                    "dimension_mismatch",
                    format!("{} weights given for {m} criteria", list.len()),
                    Some(Location::whole("weights")),
                ));
            }
            let mut out = Vec::with_capacity(m);
            for (k, v) in list.iter().enumerate() {
                let e = Entry::parse(v).filter(Entry::is_positive).ok_or_else(|| {
                    ErrorBody::new(
                        "nonpositive_entry",
                        format!("weight {v} must be a positive number"),
                        Some(Location::cell("weights", 0, k)),
                    )
                })?;
                out.push(e);
            }
            Some(out)
        }
        Some(_) => return Err(ErrorBody::malformed("`weights` must be a list")),
    };
    if criteria_matrix.is_none() && weights.is_none() {
        return Err(ErrorBody::malformed(
            "either `criteria_matrix` or `weights` is required",
        ));
    }

    let map = obj
        .get("matrices")
        .and_then(Value::as_object)
        .ok_or_else(|| ErrorBody::malformed("`matrices` must map criterion names to matrices"))?;
    if let Some(k) = map.keys().find(|k| !criteria.contains(k)) {
        return Err(ErrorBody::new(
            "unknown_criterion",
            format!("`matrices` has an entry for unknown criterion `{k}`"),
            Some(Location::whole(k)),
        ));
    }
    let mut matrices = Vec::with_capacity(m);
    for c in &criteria {
        let v = map.get(c).ok_or_else(|| {
            ErrorBody::new(
                "missing_criterion",
                format!("no comparison matrix for criterion `{c}`"),
                Some(Location::whole(c)),
            )
        })?;
        matrices.push(parse_square(v, c, Some(n), MatrixRules::Pairwise, &tol)?);
    }

    Ok(ProblemDocument {
        schema_version,
        criteria,
        alternatives,
        criteria_matrix,
        matrices,
        weights,
        options,
    })
}

impl ProblemDocument {
    /// Renders the document with complete matrices; exact entries keep their
    /// exact form.
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("schema_version".into(), json!(self.schema_version));
        obj.insert("criteria".into(), json!(self.criteria));
        obj.insert("alternatives".into(), json!(self.alternatives));
        if let Some(a0) = &self.criteria_matrix {
            obj.insert("criteria_matrix".into(), a0.to_json());
        }
        let matrices: Map<String, Value> = self
            .criteria
            .iter()
            .zip(&self.matrices)
            .map(|(c, m)| (c.clone(), m.to_json()))
            .collect();
        obj.insert("matrices".into(), Value::Object(matrices));
        if let Some(w) = &self.weights {
            obj.insert(
                "weights".into(),
                Value::Array(w.iter().map(Entry::to_json).collect()),
            );
        }
        if self.options != DocOptions::default() {
            obj.insert(
                "options".into(),
                serde_json::to_value(&self.options).expect("options serialize"),
            );
        }
        Value::Object(obj)
    }

    pub fn to_problem(&self, tol: &Tolerance) -> DocResult<AhpProblem> {
        let pairwise = |m: &ExactMatrix, name: &str| {
            PairwiseMatrix::new(m.to_pos_matrix(), tol)
                .map_err(|e| ErrorBody::from_core(&e, Some(name)))
        };
        let criteria_matrix = self
            .criteria_matrix
            .as_ref()
            .map(|m| pairwise(m, "criteria_matrix"))
            .transpose()?;
        let matrices = self
            .criteria
            .iter()
            .zip(&self.matrices)
            .map(|(c, m)| pairwise(m, c))
            .collect::<DocResult<Vec<_>>>()?;
        let weights = self
            .weights
            .as_ref()
            .map(|w| w.iter().map(Entry::value).collect());
        AhpProblem::new(
            self.criteria.clone(),
            self.alternatives.clone(),
            criteria_matrix,
            matrices,
            weights,
        )
        .map_err(ErrorBody::from)
    }
}

fn matrix_rows(m: &PosMatrix) -> Vec<Vec<f64>> {
    m.to_rows()
}

/// Provenance of a representative in a result document. Indices are
/// one-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessDoc {
    MaxPair { column: usize, row: usize },
    RowSelection(Vec<usize>),
}

impl From<&Witness> for WitnessDoc {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::MaxPair { column, row } => WitnessDoc::MaxPair {
                column: column + 1,
                row: row + 1,
            },
            Witness::RowSelection(sel) => {
                WitnessDoc::RowSelection(sel.iter().map(|j| j + 1).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentativeDoc {
    pub scores: Vec<f64>,
    pub ranking: String,
    pub witness: WitnessDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormDoc {
    pub value: f64,
    pub representatives: Vec<RepresentativeDoc>,
    pub candidates: u64,
}

impl SeminormDoc {
    pub fn new(res: &SeminormResult, tol: &Tolerance) -> Self {
        Self {
            value: res.value,
            representatives: res
                .vectors
                .iter()
                .zip(&res.witnesses)
                .map(|(v, w)| RepresentativeDoc {
                    scores: v.clone(),
                    ranking: derive_ranking(v, tol).to_string(),
                    witness: w.into(),
                })
                .collect(),
            candidates: res.candidates,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaDoc {
    pub labels: Vec<String>,
    /// `unique`, `explicit`, or `policy:<policy>`.
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub optimum: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub generators: Option<Vec<Vec<f64>>>,
    pub weights: Vec<f64>,
    pub combining_weights: Vec<f64>,
}

impl CriteriaDoc {
    fn new(labels: &[String], w: &CriteriaWeights) -> Self {
        Self {
            labels: labels.to_vec(),
            source: match &w.source {
                WeightSource::Unique => "unique".to_string(),
                WeightSource::Explicit => "explicit".to_string(),
                WeightSource::Policy(p) => format!("policy:{p}"),
            },
            optimum: w.solution.as_ref().map(|s| s.optimum),
            generators: w.solution.as_ref().map(|s| matrix_rows(&s.generators)),
            weights: w.scores.scores().to_vec(),
            combining_weights: w.combining.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub rel_eq: f64,
    pub tie_rel: f64,
    pub weight_policy: String,
    pub enum_cap: u64,
    pub most_candidates: u64,
    pub least_candidates: u64,
}

/// Full output of a rating run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: String,
    pub problem: Value,
    pub criteria: CriteriaDoc,
    pub combined_matrix: Vec<Vec<f64>>,
    pub optimum: f64,
    pub generators: Vec<Vec<f64>>,
    pub most_differentiating: SeminormDoc,
    pub least_differentiating: SeminormDoc,
    /// One ranking string per representative, most differentiating first.
    pub rankings: Vec<String>,
    pub combined_order: String,
    pub incomparable_pairs: Vec<(usize, usize)>,
    pub diagnostics: Diagnostics,
}

impl ResultDocument {
    pub fn new(doc: &ProblemDocument, res: &AhpResult, opts: &RateOptions) -> Self {
        let tol = &opts.tol;
        let rankings = res
            .rankings
            .iter()
            .map(|r| r.ranking.to_string())
            .collect();
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            problem: doc.to_json(),
            criteria: CriteriaDoc::new(&doc.criteria, &res.weights),
            combined_matrix: matrix_rows(&res.combined_matrix),
            optimum: res.optimum,
            generators: matrix_rows(&res.solution_set.generators),
            most_differentiating: SeminormDoc::new(&res.best_diff, tol),
            least_differentiating: SeminormDoc::new(&res.least_diff, tol),
            rankings,
            combined_order: res.combined_order.to_string(),
            incomparable_pairs: res
                .combined_order
                .incomparable
                .iter()
                .map(|(i, j)| (i + 1, j + 1))
                .collect(),
            diagnostics: Diagnostics {
                rel_eq: tol.rel_eq,
                tie_rel: tol.tie_rel,
                weight_policy: opts.weight_policy.to_string(),
                enum_cap: opts.enum_cap,
                most_candidates: res.best_diff.candidates,
                least_candidates: res.least_diff.candidates,
            },
        }
    }
}

/// Parses, validates and rates a problem document. Settings in `overrides`
/// take precedence over the document's own options.
pub fn rate_document(text: &[u8], overrides: &DocOptions) -> DocResult<ResultDocument> {
    let doc = parse_problem(text)?;
    let opts = doc.options.merged(overrides).rate_options()?;
    let problem = doc.to_problem(&opts.tol)?;
    let res = rate_alternatives(&problem, &opts)?;
    Ok(ResultDocument::new(&doc, &res, &opts))
}

/// Criteria weights only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsDocument {
    pub schema_version: String,
    pub criteria: CriteriaDoc,
}

pub fn weights_document(text: &[u8], overrides: &DocOptions) -> DocResult<WeightsDocument> {
    let doc = parse_problem(text)?;
    let opts = doc.options.merged(overrides).rate_options()?;
    let problem = doc.to_problem(&opts.tol)?;
    let weights = match (&problem.explicit_weights, &problem.criteria_matrix) {
        (Some(w), _) => CriteriaWeights {
            solution: None,
            scores: ScoreVector::new(w)?,
            combining: w.clone(),
            source: WeightSource::Explicit,
        },
        (None, Some(a0)) => derive_weights(a0, &opts)
            .map_err(|e| ErrorBody::from_core(&e, Some("criteria_matrix")))?,
        (None, None) => unreachable!("validated by parse_problem"),
    };
    Ok(WeightsDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        criteria: CriteriaDoc::new(&doc.criteria, &weights),
    })
}

/// Solution set of a single matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveDocument {
    pub schema_version: String,
    pub optimum: f64,
    pub source_dim: usize,
    /// Generator matrix, `source_dim` rows by one column per generator.
    pub generators: Vec<Vec<f64>>,
    pub unique: bool,
}

impl SolveDocument {
    pub fn new(s: &SolutionSet) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            optimum: s.optimum,
            source_dim: s.source_dim(),
            generators: matrix_rows(&s.generators),
            unique: s.is_unique(),
        }
    }
}

/// Splits a request body into its payload under `key` and its options.
/// A bare JSON array is taken as the payload itself.
fn payload<'a>(root: &'a Value, key: &str) -> DocResult<(&'a Value, DocOptions)> {
    match root {
        Value::Array(_) => Ok((root, DocOptions::default())),
        Value::Object(obj) => {
            if let Some(k) = obj.keys().find(|k| k.as_str() != key && k.as_str() != "options") {
                return Err(ErrorBody::malformed(format!("unknown field `{k}`")));
            }
            let v = obj
                .get(key)
                .ok_or_else(|| ErrorBody::malformed(format!("missing `{key}`")))?;
            Ok((v, DocOptions::from_value(obj.get("options"))?))
        }
        _ => Err(ErrorBody::malformed(format!(
            "expected a matrix or an object with `{key}`"
        ))),
    }
}

/// Solves `min x⁻ A x` for a square positive matrix given as
/// `{"matrix": [[...]], "options": {...}}` or as a bare array. Missing entries
/// are completed as reciprocals; reciprocity is not otherwise required.
pub fn solve_document(text: &[u8], overrides: &DocOptions) -> DocResult<SolveDocument> {
    let root = parse_json(text)?;
    let (v, options) = payload(&root, "matrix")?;
    let options = options.merged(overrides);
    let tol = options.tolerance()?;
    let m = parse_square(v, "matrix", None, MatrixRules::Completed, &tol)?;
    let s = solve_min_form(&m.to_pos_matrix(), &tol)
        .map_err(|e| ErrorBody::from_core(&e, Some("matrix")))?;
    Ok(SolveDocument::new(&s))
}

/// Most and least differentiating members of the span of a generator matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeminormDocument {
    pub schema_version: String,
    pub most_differentiating: SeminormDoc,
    pub least_differentiating: SeminormDoc,
}

pub fn seminorm_document(text: &[u8], overrides: &DocOptions) -> DocResult<SeminormDocument> {
    let root = parse_json(text)?;
    let (v, options) = payload(&root, "generators")?;
    let opts = options.merged(overrides).rate_options()?;
    let rows = v
        .as_array()
        .ok_or_else(|| ErrorBody::malformed("`generators` must be an array of rows"))?;
    let mut parsed: Vec<Vec<f64>> = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let r = r
            .as_array()
            .ok_or_else(|| ErrorBody::malformed("`generators` must be an array of rows"))?;
        let mut out = Vec::with_capacity(r.len());
        for (j, cell) in r.iter().enumerate() {
            let e = Entry::parse(cell).filter(Entry::is_nonnegative).ok_or_else(|| {
                ErrorBody::new(
                    "nonpositive_entry",
                    format!("generator entry {cell} must be a nonnegative number"),
                    Some(Location::cell("generators", i, j)),
                )
            })?;
            out.push(e.value());
        }
        parsed.push(out);
    }
    let b = PosMatrix::from_rows(&parsed).map_err(|e| ErrorBody::from_core(&e, Some("generators")))?;
    let s = SolutionSet {
        optimum: 1.0,
        generators: b,
    };
    let loc = Some("generators");
    let best = best_diff_solutions(&s, &opts.tol).map_err(|e| ErrorBody::from_core(&e, loc))?;
    let least = least_diff_solutions_capped(&s, &opts.tol, opts.enum_cap)
        .map_err(|e| ErrorBody::from_core(&e, loc))?;
    Ok(SeminormDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        most_differentiating: SeminormDoc::new(&best, &opts.tol),
        least_differentiating: SeminormDoc::new(&least, &opts.tol),
    })
}
