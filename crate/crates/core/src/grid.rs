//! Uniform grids and sampled functions.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether a grid covers a genuine interval or a window standing in for ℝ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainKind {
    FiniteInterval,
    TruncatedLine,
}

/// Side of a one-sided operator: `Left` integrates from `a`, `Right` from `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn opposite(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

/// Uniform grid with `n` intervals on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct Grid {
    a: f64,
    b: f64,
    n: usize,
    kind: DomainKind,
}

#[derive(Deserialize)]
struct RawGrid {
    a: f64,
    b: f64,
    n: usize,
    kind: DomainKind,
}

impl TryFrom<RawGrid> for Grid {
    type Error = Error;
    fn try_from(r: RawGrid) -> Result<Self> {
        Grid::new(r.a, r.b, r.n, r.kind)
    }
}

impl Grid {
    pub fn new(a: f64, b: f64, n: usize, kind: DomainKind) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidGrid(format!("endpoints must be finite, got ({a}, {b})")));
        }
        if a >= b {
            return Err(Error::InvalidGrid(format!("need a < b, got ({a}, {b})")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need n >= 2 intervals, got {n}")));
        }
        Ok(Grid { a, b, n, kind })
    }

    pub fn finite(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::new(a, b, n, DomainKind::FiniteInterval)
    }

    pub fn line(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::new(a, b, n, DomainKind::TruncatedLine)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Number of intervals.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn h(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn node(&self, i: usize) -> f64 {
        if i == self.n {
            self.b
        } else {
            self.a + i as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.n).map(|i| self.node(i)).collect()
    }

    /// Same spacing, extended by `left` nodes before `a` and `right` after `b`.
    pub fn extended(&self, left: usize, right: usize, kind: DomainKind) -> Result<Grid> {
        let h = self.h();
        Grid::new(self.a - left as f64 * h, self.b + right as f64 * h, self.n + left + right, kind)
    }

    /// Grid refined by `factor` (same interval, `factor·n` intervals).
    pub fn refined(&self, factor: usize) -> Result<Grid> {
        Grid::new(self.a, self.b, self.n * factor, self.kind)
    }

    /// Index of the node nearest `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let t = ((x - self.a) / self.h()).round();
        t.clamp(0.0, self.n as f64) as usize
    }
}

/// Samples of a real function on a [`Grid`].
///
/// Nodes in the excluded set carry no usable value (singular endpoints,
/// interior singularities); internally they hold NaN and every consumer skips
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    grid: Grid,
    values: Vec<f64>,
    excluded: BTreeSet<usize>,
}

impl SampledFunction {
    pub fn new(grid: Grid, values: Vec<f64>, excluded: impl IntoIterator<Item = usize>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidSamples(format!("expected {} values, got {}", grid.len(), values.len())));
        }
        let excluded: BTreeSet<usize> = excluded.into_iter().collect();
        if let Some(&bad) = excluded.iter().find(|&&i| i > grid.n()) {
            return Err(Error::InvalidSamples(format!("excluded node {bad} is out of range")));
        }
        let mut values = values;
        for (i, v) in values.iter_mut().enumerate() {
            if excluded.contains(&i) {
                *v = f64::NAN;
            } else if !v.is_finite() {
                return Err(Error::InvalidSamples(format!("non-finite value {v} at node {i}")));
            }
        }
        Ok(SampledFunction { grid, values, excluded })
    }

    /// Samples `f` at every node; non-finite results become excluded nodes.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let mut excluded = BTreeSet::new();
        let values = (0..=grid.n())
            .map(|i| {
                let v = f(grid.node(i));
                if v.is_finite() {
                    v
                } else {
                    excluded.insert(i);
                    f64::NAN
                }
            })
            .collect();
        SampledFunction { grid, values, excluded }
    }

    pub fn zeros(grid: Grid) -> Self {
        SampledFunction { grid, values: vec![0.0; grid.len()], excluded: BTreeSet::new() }
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<f64>, excluded: BTreeSet<usize>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        let mut values = values;
        for &i in &excluded {
            values[i] = f64::NAN;
        }
        SampledFunction { grid, values, excluded }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Raw values; excluded nodes hold NaN.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn excluded(&self) -> &BTreeSet<usize> {
        &self.excluded
    }

    pub fn is_excluded(&self, i: usize) -> bool {
        self.excluded.contains(&i)
    }

    pub fn value(&self, i: usize) -> Option<f64> {
        if self.is_excluded(i) {
            None
        } else {
            self.values.get(i).copied()
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest |value| over non-excluded nodes.
    pub fn max_abs(&self) -> f64 {
        self.defined().map(|(_, v)| v.abs()).fold(0.0, f64::max)
    }

    /// Iterator over `(index, value)` of non-excluded nodes.
    pub fn defined(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().enumerate().filter(move |(i, _)| !self.excluded.contains(i)).map(|(i, &v)| (i, v))
    }

    pub fn with_excluded(mut self, extra: impl IntoIterator<Item = usize>) -> Self {
        for i in extra {
            if i < self.values.len() {
                self.excluded.insert(i);
                self.values[i] = f64::NAN;
            }
        }
        self
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let values = self.values.iter().map(|&v| f(v)).collect();
        SampledFunction::from_parts(self.grid, values, self.excluded.clone())
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// Node-wise combination; the excluded sets are merged.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::pre("functions live on different grids"));
        }
        let values = self.values.iter().zip(&other.values).map(|(&x, &y)| f(x, y)).collect();
        let excluded = self.excluded.union(&other.excluded).copied().collect();
        Ok(SampledFunction::from_parts(self.grid, values, excluded))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x - y)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x * y)
    }

    /// Piecewise-linear interpolant at `x`; `None` outside `[a, b]` or next
    /// to an excluded node.
    pub fn interpolate(&self, x: f64) -> Option<f64> {
        let g = &self.grid;
        if !(x >= g.a() && x <= g.b()) {
            return None;
        }
        let t = (x - g.a()) / g.h();
        let i = (t.floor() as usize).min(g.n().saturating_sub(1));
        let w = t - i as f64;
        let (l, r) = (self.value(i)?, self.value(i + 1)?);
        Some(l + w * (r - l))
    }

    /// Mirror image about the interval midpoint: `x ↦ a + b − x`.
    pub fn reflect(&self) -> Self {
        let n = self.grid.n();
        let values = self.values.iter().rev().copied().collect();
        let excluded = self.excluded.iter().map(|&i| n - i).collect();
        SampledFunction::from_parts(self.grid, values, excluded)
    }

    /// Same samples viewed on another grid with the same node count.
    pub fn on_grid(&self, grid: Grid) -> Result<Self> {
        if grid.n() != self.grid.n() {
            return Err(Error::pre("grid node counts differ"));
        }
        Ok(SampledFunction::from_parts(grid, self.values.clone(), self.excluded.clone()))
    }

    /// Decay check for truncated-line windows; a no-op on finite intervals.
    pub fn check_truncation(&self) -> Result<()> {
        if self.grid.kind() != DomainKind::TruncatedLine {
            return Ok(());
        }
        let max = self.max_abs();
        if max == 0.0 {
            return Ok(());
        }
        let len = self.len();
        let m = ((len as f64) * 0.01).ceil().max(1.0) as usize;
        let edge = (0..m).chain(len - m..len).filter_map(|i| self.value(i)).map(f64::abs).fold(0.0, f64::max);
        if edge > 1e-8 * max {
            return Err(Error::TruncationUnsafe { edge, max });
        }
        Ok(())
    }
}
