//! Monotonicity-preserving cubic interpolation (Fritsch–Butland tangents)
//! for user-supplied tabulated functions, with exact piecewise integrals.

use crate::error::{Error, Result};
use crate::scalar::{as_f64, real, Real};

/// Piecewise-cubic Hermite interpolant whose tangents are limited so the
/// curve stays inside the data range on every knot interval. Evaluation
/// outside the knot range extends the boundary values constantly.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic<F> {
    x: Vec<F>,
    y: Vec<F>,
    tangent: Vec<F>,
    /// Cumulative integral from `x[0]` to each knot.
    cum: Vec<F>,
}

impl<F: Real> MonotoneCubic<F> {
    /// Builds the interpolant from `(x, y)` samples with strictly increasing
    /// `x` and finite `y`.
    pub fn new(points: &[(F, F)]) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidParameter {
                what: format!("need at least 2 table points, got {}", points.len()),
            });
        }
        let mut x = Vec::with_capacity(points.len());
        let mut y = Vec::with_capacity(points.len());
        for &(xi, yi) in points {
            if !xi.is_finite() || !yi.is_finite() {
                return Err(Error::InvalidParameter {
                    what: "table points must be finite".into(),
                });
            }
            if let Some(&last) = x.last() {
                if xi <= last {
                    return Err(Error::InvalidParameter {
                        what: format!("table abscissae must be strictly increasing near x = {}", as_f64(xi)),
                    });
                }
            }
            x.push(xi);
            y.push(yi);
        }

        let n = x.len();
        let mut secant = Vec::with_capacity(n - 1);
        for k in 0..n - 1 {
            secant.push((y[k + 1] - y[k]) / (x[k + 1] - x[k]));
        }

        // Fritsch–Butland: zero tangent at local extrema, otherwise a
        // weighted harmonic mean of the neighboring secants.
        let mut tangent = vec![F::zero(); n];
        tangent[0] = secant[0];
        tangent[n - 1] = secant[n - 2];
        for k in 1..n - 1 {
            let d0 = secant[k - 1];
            let d1 = secant[k];
            if d0 * d1 <= F::zero() {
                tangent[k] = F::zero();
            } else {
                let h0 = x[k] - x[k - 1];
                let h1 = x[k + 1] - x[k];
                let three = real::<F>(3.0);
                let two = real::<F>(2.0);
                let w = three * (h0 + h1);
                tangent[k] = w / ((two * h1 + h0) / d0 + (h1 + two * h0) / d1);
            }
        }

        let mut cum = vec![F::zero(); n];
        for k in 0..n - 1 {
            let h = x[k + 1] - x[k];
            let twelve = real::<F>(12.0);
            let seg = h * (y[k] + y[k + 1]) / real(2.0) + h * h * (tangent[k] - tangent[k + 1]) / twelve;
            cum[k + 1] = cum[k] + seg;
        }

        Ok(Self { x, y, tangent, cum })
    }

    pub fn x_min(&self) -> F {
        self.x[0]
    }

    pub fn x_max(&self) -> F {
        *self.x.last().unwrap()
    }

    pub fn min_value(&self) -> F {
        self.y.iter().copied().fold(self.y[0], F::min)
    }

    pub fn knots(&self) -> impl Iterator<Item = (F, F)> + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }

    fn segment_of(&self, t: F) -> usize {
        match self.x.binary_search_by(|xk| xk.partial_cmp(&t).unwrap()) {
            Ok(k) => k.min(self.x.len() - 2),
            Err(k) => k.saturating_sub(1).min(self.x.len() - 2),
        }
    }

    /// Cubic coefficients on segment `k` in the local variable `τ ∈ [0, 1]`.
    fn segment_coeffs(&self, k: usize) -> (F, F, F, F, F) {
        let h = self.x[k + 1] - self.x[k];
        let dy = self.y[k + 1] - self.y[k];
        let a = self.y[k];
        let b = h * self.tangent[k];
        let three = real::<F>(3.0);
        let two = real::<F>(2.0);
        let c = three * dy - two * h * self.tangent[k] - h * self.tangent[k + 1];
        let d = two.neg() * dy + h * (self.tangent[k] + self.tangent[k + 1]);
        (a, b, c, d, h)
    }

    /// Interpolated value at `t`, constant beyond the table range.
    pub fn eval(&self, t: F) -> F {
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= *self.x.last().unwrap() {
            return *self.y.last().unwrap();
        }
        let k = self.segment_of(t);
        let (a, b, c, d, h) = self.segment_coeffs(k);
        let tau = (t - self.x[k]) / h;
        a + tau * (b + tau * (c + tau * d))
    }

    /// Exact integral of the interpolant (with its constant extensions)
    /// over `[lo, hi]`.
    pub fn integral(&self, lo: F, hi: F) -> F {
        if hi <= lo {
            return F::zero();
        }
        let x0 = self.x[0];
        let x1 = *self.x.last().unwrap();
        let mut total = F::zero();
        if lo < x0 {
            total += (hi.min(x0) - lo) * self.y[0];
        }
        if hi > x1 {
            total += (hi - lo.max(x1)) * *self.y.last().unwrap();
        }
        let a = lo.max(x0);
        let b = hi.min(x1);
        if b > a {
            total += self.primitive(b) - self.primitive(a);
        }
        total
    }

    /// Integral of the interpolant from `x[0]` to `t` (for `t` inside the
    /// knot range).
    fn primitive(&self, t: F) -> F {
        let k = self.segment_of(t);
        let (a, b, c, d, h) = self.segment_coeffs(k);
        let tau = (t - self.x[k]) / h;
        let half = real::<F>(0.5);
        let third = real::<F>(1.0 / 3.0);
        let quarter = real::<F>(0.25);
        self.cum[k] + h * tau * (a + tau * (b * half + tau * (c * third + tau * d * quarter)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_knots_and_stays_in_range() {
        let pts: Vec<(f64, f64)> = (0..=10).map(|i| (i as f64, (i as f64).sqrt())).collect();
        let c = MonotoneCubic::new(&pts).unwrap();
        for &(x, y) in &pts {
            assert!((c.eval(x) - y).abs() < 1e-14);
        }
        // monotone data stays monotone
        let mut prev = c.eval(0.0);
        for i in 1..200 {
            let v = c.eval(i as f64 * 0.05);
            assert!(v >= prev - 1e-13);
            prev = v;
        }
    }

    #[test]
    fn integral_matches_linear_data_exactly() {
        let pts: Vec<(f64, f64)> = (0..=4).map(|i| (i as f64, 2.0 * i as f64 + 1.0)).collect();
        let c = MonotoneCubic::new(&pts).unwrap();
        // ∫_0^4 (2t+1) dt = 20
        assert!((c.integral(0.0, 4.0) - 20.0).abs() < 1e-12);
        // partial segment
        let part: f64 = c.integral(0.5f64, 1.5);
        assert!((part - (1.5f64.powi(2) + 1.5 - 0.25 - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn constant_extension_outside_range() {
        let c = MonotoneCubic::new(&[(1.0f64, 3.0), (2.0, 5.0)]).unwrap();
        assert_eq!(c.eval(0.0), 3.0);
        assert_eq!(c.eval(9.0), 5.0);
        assert!((c.integral(0.0, 1.0) - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_unsorted_abscissae() {
        assert!(MonotoneCubic::new(&[(0.0, 1.0), (0.0, 2.0)]).is_err());
    }
}
