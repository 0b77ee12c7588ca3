//! Piecewise-linear tables with strict range checks.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A piecewise-linear function through tabulated knots. Queries outside
/// `[first, last]` are rejected rather than extrapolated.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::param("table", "column lengths differ"));
        }
        if xs.len() < 2 {
            return Err(Error::TooFewPoints {
                found: xs.len(),
                required: 2,
            });
        }
        for (row, (&x, &y)) in xs.iter().zip(&ys).enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::InvalidTable {
                    row,
                    reason: "non-finite value",
                });
            }
            if row > 0 && x <= xs[row - 1] {
                return Err(Error::InvalidTable {
                    row,
                    reason: "abscissa not strictly increasing",
                });
            }
        }
        Ok(Self { xs, ys })
    }

    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        let (xs, ys) = points.iter().copied().unzip();
        Self::new(xs, ys)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.domain();
        x >= lo && x <= hi
    }

    /// Index `i` of the segment `[xs[i], xs[i + 1]]` holding `x`.
    fn segment(&self, x: f64) -> usize {
        let i = self.xs.partition_point(|&v| v <= x);
        i.clamp(1, self.xs.len() - 1) - 1
    }

    pub fn eval(&self, x: f64, quantity: &'static str) -> Result<f64> {
        if !self.contains(x) {
            let (min, max) = self.domain();
            return Err(Error::OutOfRange {
                quantity,
                value: x,
                min,
                max,
            });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluates with `x` clamped into the table domain.
    pub fn eval_clamped(&self, x: f64) -> f64 {
        let (lo, hi) = self.domain();
        self.eval_unchecked(x.clamp(lo, hi))
    }

    fn eval_unchecked(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1, y0, y1) = (self.xs[i], self.xs[i + 1], self.ys[i], self.ys[i + 1]);
        if x == x0 {
            return y0;
        }
        if x == x1 {
            return y1;
        }
        let t = (x - x0) / (x1 - x0);
        // keep the result inside the bracket despite rounding
        (y0 + t * (y1 - y0)).clamp(y0.min(y1), y0.max(y1))
    }

    /// Slope of the segment containing `x`.
    pub fn slope(&self, x: f64) -> f64 {
        let i = self.segment(x);
        (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])
    }

    pub fn max_point(&self) -> (f64, f64) {
        let mut best = (self.xs[0], self.ys[0]);
        for (&x, &y) in self.xs.iter().zip(&self.ys) {
            if y > best.1 {
                best = (x, y);
            }
        }
        best
    }
}
