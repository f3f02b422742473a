//! Grid helpers shared by the parameter sweeps.

use crate::error::{Error, Result};

/// `count` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        n => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// `count` logarithmically spaced values from `lo` to `hi` inclusive (both positive).
pub fn logspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    linspace(lo.ln(), hi.ln(), count).into_iter().map(f64::exp).collect()
}

/// Checks that a grid is non-empty, finite and strictly increasing.
pub fn check_grid(values: &[f64], name: &'static str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::NonMonotoneGrid(name));
    }
    Ok(())
}

/// Runs `f` on a dedicated pool of `workers` threads.
///
/// Sweeps collect results in grid order, so the output does not depend on
/// the worker count.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Err(Error::InvalidParameter { name: "workers", reason: "must be at least 1".into() });
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| {
        Error::InvalidParameter { name: "workers", reason: e.to_string() }
    })?;
    Ok(pool.install(f))
}

/// Vertex offset (in grid steps) and depth gain of the parabola through
/// `(-1, a), (0, b), (1, c)`; zero for a non-convex triple.
pub fn parabola_vertex(a: f64, b: f64, c: f64) -> (f64, f64) {
    let curv = a - 2.0 * b + c;
    if !(curv > 0.0) {
        return (0.0, 0.0);
    }
    let x = (0.5 * (a - c) / curv).clamp(-1.0, 1.0);
    (x, 0.5 * curv * x * x)
}

/// Extremum of a row-major grid after parabolic refinement along each axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridExtremum {
    pub row: usize,
    pub col: usize,
    pub x_row: f64,
    pub x_col: f64,
    pub value: f64,
    pub grid_value: f64,
    pub on_boundary: bool,
}

/// Minimum of `values` (row-major, `rows.len() x cols.len()`, `None` for failed
/// points). With `maximize` the maximum is located instead.
pub fn grid_extremum(rows: &[f64], cols: &[f64], values: &[Option<f64>], maximize: bool) -> Result<GridExtremum> {
    let (nr, nc) = (rows.len(), cols.len());
    if nr == 0 || nc == 0 || values.len() != nr * nc {
        return Err(Error::EmptyGrid);
    }
    let sign = if maximize { -1.0 } else { 1.0 };
    let v = |i: usize, j: usize| values[i * nc + j].filter(|x| x.is_finite()).map(|x| sign * x);
    let mut best: Option<(usize, usize, f64)> = None;
    for i in 0..nr {
        for j in 0..nc {
            if let Some(x) = v(i, j) {
                if best.map_or(true, |b| x < b.2) {
                    best = Some((i, j, x));
                }
            }
        }
    }
    let (i, j, b) = best.ok_or(Error::EmptyGrid)?;
    let mut x_row = rows[i];
    let mut x_col = cols[j];
    let mut value = b;
    let shift = |axis: &[f64], k: usize, x: f64| {
        if x < 0.0 {
            x * (axis[k] - axis[k - 1])
        } else {
            x * (axis[k + 1] - axis[k])
        }
    };
    if i > 0 && i + 1 < nr {
        if let (Some(a), Some(c)) = (v(i - 1, j), v(i + 1, j)) {
            let (x, drop) = parabola_vertex(a, b, c);
            x_row += shift(rows, i, x);
            value -= drop;
        }
    }
    if j > 0 && j + 1 < nc {
        if let (Some(a), Some(c)) = (v(i, j - 1), v(i, j + 1)) {
            let (x, drop) = parabola_vertex(a, b, c);
            x_col += shift(cols, j, x);
            value -= drop;
        }
    }
    let on_boundary = (nr > 1 && (i == 0 || i + 1 == nr)) || (nc > 1 && (j == 0 || j + 1 == nc));
    Ok(GridExtremum { row: i, col: j, x_row, x_col, value: sign * value, grid_value: sign * b, on_boundary })
}

/// Interval around `values[k]` where `values > threshold`, with linearly
/// interpolated edges. The flags mark edges that reach the end of the grid.
pub fn band_above(xs: &[f64], values: &[f64], k: usize, threshold: f64) -> Option<(f64, f64, bool, bool)> {
    if !(values[k] > threshold) {
        return None;
    }
    let cross = |a: usize, b: usize| {
        let t = (threshold - values[a]) / (values[b] - values[a]);
        xs[a] + t * (xs[b] - xs[a])
    };
    let mut lo = k;
    while lo > 0 && values[lo - 1] > threshold {
        lo -= 1;
    }
    let mut hi = k;
    while hi + 1 < xs.len() && values[hi + 1] > threshold {
        hi += 1;
    }
    let (x_lo, open_lo) = if lo == 0 { (xs[0], true) } else { (cross(lo - 1, lo), false) };
    let (x_hi, open_hi) = if hi + 1 == xs.len() { (xs[hi], true) } else { (cross(hi, hi + 1), false) };
    Some((x_lo, x_hi, open_lo, open_hi))
}
