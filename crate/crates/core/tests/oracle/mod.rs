//! Reference implementations used as test oracles. They work on plain nested
//! vectors and share no code with the library.
#![allow(dead_code)]

use rand::Rng;

pub type Mat = Vec<Vec<f64>>;

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Maximum over all simple cycles of the geometric mean of the cycle
/// weights, by explicit enumeration. Each cycle is visited once, from its
/// smallest node.
pub fn cycle_radius(a: &Mat) -> f64 {
    let n = a.len();
    let mut best = 0.0f64;
    let mut path = Vec::with_capacity(n);
    let mut on_path = vec![false; n];

    fn walk(
        a: &Mat,
        start: usize,
        node: usize,
        weight: f64,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        best: &mut f64,
    ) {
        let n = a.len();
        for next in start..n {
            let w = a[node][next];
            if w == 0.0 {
                continue;
            }
            if next == start {
                let len = path.len() as f64;
                *best = best.max((weight * w).powf(1.0 / len));
            } else if !on_path[next] {
                on_path[next] = true;
                path.push(next);
                walk(a, start, next, weight * w, path, on_path, best);
                path.pop();
                on_path[next] = false;
            }
        }
    }

    for start in 0..n {
        path.clear();
        path.push(start);
        on_path[start] = true;
        walk(a, start, start, 1.0, &mut path, &mut on_path, &mut best);
        on_path[start] = false;
    }
    best
}

/// `I ⊕ A ⊕ A² ⊕ ...` by Floyd-Warshall on heaviest paths; valid when no
/// cycle has weight above 1.
pub fn closure(a: &Mat) -> Mat {
    let n = a.len();
    let mut d = a.clone();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] * d[k][j];
                if via > d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = row[i].max(1.0);
    }
    d
}

/// `max_ij a_ij x_j / x_i`.
pub fn conj_form(a: &Mat, x: &[f64]) -> f64 {
    let mut m = 0.0f64;
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m = m.max(v * x[j] / x[i]);
        }
    }
    m
}

pub fn contrast(x: &[f64]) -> f64 {
    let max = x.iter().cloned().fold(f64::MIN, f64::max);
    let min = x.iter().cloned().fold(f64::MAX, f64::min);
    max / min
}

/// Column `j` of `b`.
pub fn column(b: &Mat, j: usize) -> Vec<f64> {
    b.iter().map(|r| r[j]).collect()
}

/// `max_j b_ij u_j` for each row.
pub fn apply(b: &Mat, u: &[f64]) -> Vec<f64> {
    b.iter()
        .map(|r| r.iter().zip(u).map(|(x, y)| x * y).fold(0.0, f64::max))
        .collect()
}

/// Span membership by the greatest subsolution of `B u = v`.
pub fn in_span(b: &Mat, v: &[f64], rel: f64) -> bool {
    let p = b.first().map_or(0, Vec::len);
    let u: Vec<f64> = (0..p)
        .map(|j| {
            b.iter()
                .zip(v)
                .filter(|(r, _)| r[j] > 0.0)
                .map(|(r, vi)| vi / r[j])
                .fold(f64::INFINITY, f64::min)
        })
        .map(|x| if x.is_finite() { x } else { 0.0 })
        .collect();
    apply(b, &u)
        .iter()
        .zip(v)
        .all(|(x, y)| rel_close(*x, *y, rel))
}

pub fn collinear(x: &[f64], y: &[f64], rel: f64) -> bool {
    let ratios: Vec<f64> = x.iter().zip(y).map(|(a, b)| b / a).collect();
    let max = ratios.iter().cloned().fold(f64::MIN, f64::max);
    let min = ratios.iter().cloned().fold(f64::MAX, f64::min);
    rel_close(max, min, rel)
}

/// Log-uniform sample from `[10^-d, 10^d]`.
pub fn log_uniform<R: Rng>(rng: &mut R, d: f64) -> f64 {
    10f64.powf(rng.random_range(-d..=d))
}

pub fn random_positive<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Mat {
    (0..rows)
        .map(|_| (0..cols).map(|_| log_uniform(rng, 1.0)).collect())
        .collect()
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize, d: f64) -> Vec<f64> {
    (0..n).map(|_| log_uniform(rng, d)).collect()
}

/// Reciprocal matrix with upper entries drawn from the 1-9 judgment scale
/// and its reciprocals.
pub fn random_reciprocal<R: Rng>(rng: &mut R, n: usize) -> Mat {
    let mut a = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let k = f64::from(rng.random_range(1..=9));
            let v = if rng.random_bool(0.5) { k } else { 1.0 / k };
            a[i][j] = v;
            a[j][i] = 1.0 / v;
        }
    }
    a
}

/// `a_ij = x_i / x_j`.
pub fn consistent(x: &[f64]) -> Mat {
    x.iter().map(|xi| x.iter().map(|xj| xi / xj).collect()).collect()
}

pub fn is_consistent(a: &Mat, rel: f64) -> bool {
    let n = a.len();
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| rel_close(a[i][j], a[i][k] * a[k][j], rel))))
}
