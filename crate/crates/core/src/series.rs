//! Time data chains and the cross-dimensional mapping between two of them.
//!
//! Two series of equal length are aligned elementwise. Series of different
//! lengths are aligned with dynamic time warping under a squared-difference
//! local cost; the backtracked route tells, for every position of the first
//! series, which contiguous run of positions of the second series it maps to.

use std::ops::{Deref, RangeInclusive};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, DdwError, Result};

/// A nonempty, finite, real-valued sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Series(Vec<f64>);

impl Series {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("series must contain at least one value");
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return invalid(format!("series value at index {pos} is not finite"));
        }
        Ok(Series(values))
    }

    /// Builds a series without validation. Callers guarantee the invariants.
    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Series(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Series {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Series {
    type Error = DdwError;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Series::new(values)
    }
}

impl From<Series> for Vec<f64> {
    fn from(s: Series) -> Self {
        s.0
    }
}

/// Outcome of mapping series `b` onto series `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct MappingResult {
    /// Accumulated squared distance along the alignment.
    pub total: f64,
    /// For each position `i` of `a`, the smallest squared distance to any
    /// position of `b` it is aligned with.
    pub per_dim: Vec<f64>,
    /// For each position `i` of `a`, the positions of `b` aligned with it.
    pub dirs: Vec<RangeInclusive<usize>>,
}

#[inline]
fn sq(x: f64) -> f64 {
    x * x
}

/// Maps `b` onto `a`: elementwise when the lengths agree, DTW otherwise.
pub fn map_series(a: &Series, b: &Series) -> MappingResult {
    map_slices(a, b)
}

/// Same as [`map_series`] over raw slices. Both slices must be nonempty.
pub(crate) fn map_slices(a: &[f64], b: &[f64]) -> MappingResult {
    debug_assert!(!a.is_empty() && !b.is_empty());
    if a.len() == b.len() {
        let per_dim: Vec<f64> = a.iter().zip(b).map(|(x, y)| sq(x - y)).collect();
        let total = per_dim.iter().sum();
        let dirs = (0..a.len()).map(|i| i..=i).collect();
        return MappingResult {
            total,
            per_dim,
            dirs,
        };
    }

    let acc = accumulate(a, b);
    let total = acc[a.len() * b.len() - 1];
    let route = backtrack(&acc, a.len(), b.len());
    let dirs = route_to_dirs(&route, a.len());
    let per_dim = dirs
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.clone()
                .map(|j| sq(a[i] - b[j]))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    MappingResult {
        total,
        per_dim,
        dirs,
    }
}

/// Total mapping distance only, skipping route extraction.
pub(crate) fn map_total(a: &[f64], b: &[f64]) -> f64 {
    if a.len() == b.len() {
        return a.iter().zip(b).map(|(x, y)| sq(x - y)).sum();
    }
    // Two rolling rows are enough when the route is not needed.
    let (short, long) = if a.len() < b.len() { (a, b) } else { (b, a) };
    let mut prev: Vec<f64> = short
        .iter()
        .scan(0.0, |run, &s| {
            *run += sq(long[0] - s);
            Some(*run)
        })
        .collect();
    let mut cur = vec![0.0; short.len()];
    for &li in &long[1..] {
        let mut left = prev[0] + sq(li - short[0]);
        cur[0] = left;
        let mut diag = prev[0];
        for ((c, &up), &sj) in cur[1..].iter_mut().zip(&prev[1..]).zip(&short[1..]) {
            left = sq(li - sj) + min3(diag, up, left);
            *c = left;
            diag = up;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[short.len() - 1]
}

/// Minimal-cost warping route between two series of different lengths.
///
/// The route starts at `(0, 0)`, ends at `(len(a) - 1, len(b) - 1)` and
/// advances by `(1, 0)`, `(0, 1)` or `(1, 1)` per step.
pub fn dtw_best_route(a: &Series, b: &Series) -> Result<Vec<(usize, usize)>> {
    if a.len() == b.len() {
        return Err(DdwError::Precondition(
            "dtw_best_route requires series of different lengths".into(),
        ));
    }
    let acc = accumulate(a, b);
    Ok(backtrack(&acc, a.len(), b.len()))
}

/// Cumulative cost matrix, row-major with rows indexing `a`.
fn accumulate(a: &[f64], b: &[f64]) -> Vec<f64> {
    let (la, lb) = (a.len(), b.len());
    let mut acc = vec![0.0; la * lb];

    let a0 = a[0];
    let mut run = 0.0;
    for (j, &bj) in b.iter().enumerate() {
        run += sq(a0 - bj);
        acc[j] = run;
    }
    for i in 1..la {
        let ai = a[i];
        let (prev, cur) = acc[(i - 1) * lb..(i + 1) * lb].split_at_mut(lb);
        let mut left = prev[0] + sq(ai - b[0]);
        cur[0] = left;
        let mut diag = prev[0];
        for ((c, &up), &bj) in cur[1..].iter_mut().zip(&prev[1..]).zip(&b[1..]) {
            left = sq(ai - bj) + min3(diag, up, left);
            *c = left;
            diag = up;
        }
    }
    acc
}

/// Minimum of three finite values, without the NaN handling of `f64::min`.
#[inline(always)]
fn min3(a: f64, b: f64, c: f64) -> f64 {
    let m = if a < b { a } else { b };
    if m < c {
        m
    } else {
        c
    }
}

/// Walks back from the end cell. Ties prefer diagonal, then up, then left.
fn backtrack(acc: &[f64], la: usize, lb: usize) -> Vec<(usize, usize)> {
    let at = |i: usize, j: usize| acc[i * lb + j];
    let (mut i, mut j) = (la - 1, lb - 1);
    let mut route = Vec::with_capacity(la + lb - 1);
    route.push((i, j));
    while i > 0 || j > 0 {
        if i == 0 {
            j -= 1;
        } else if j == 0 {
            i -= 1;
        } else {
            let diag = at(i - 1, j - 1);
            let up = at(i - 1, j);
            let left = at(i, j - 1);
            if diag <= up && diag <= left {
                i -= 1;
                j -= 1;
            } else if up <= left {
                i -= 1;
            } else {
                j -= 1;
            }
        }
        route.push((i, j));
    }
    route.reverse();
    route
}

fn route_to_dirs(route: &[(usize, usize)], la: usize) -> Vec<RangeInclusive<usize>> {
    let mut first = vec![usize::MAX; la];
    let mut last = vec![0; la];
    for &(i, j) in route {
        first[i] = first[i].min(j);
        last[i] = last[i].max(j);
    }
    first.into_iter().zip(last).map(|(f, l)| f..=l).collect()
}

/// Position in `dirs` whose value in `other` is closest to `value`.
/// The first such position wins on ties.
pub(crate) fn closest_in(dirs: &RangeInclusive<usize>, other: &[f64], value: f64) -> usize {
    let mut best = *dirs.start();
    let mut best_d = f64::INFINITY;
    for j in dirs.clone() {
        let d = sq(value - other[j]);
        if d < best_d {
            best_d = d;
            best = j;
        }
    }
    best
}
