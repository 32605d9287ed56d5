//! Savitzky-Golay smoothing with analytic derivatives.
//!
//! Each output sample is the value (or derivative) of the least-squares
//! polynomial fitted over a sliding window. Weights are built from Gram
//! polynomials, which also provide off-center evaluation so the leading and
//! trailing edges reuse the first/last window's polynomial instead of
//! shrinking the fit.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SavitzkyGolayError {
    #[error("window must be an odd integer >= 3, got {0}")]
    InvalidWindow(usize),
    #[error("polynomial order must satisfy 1 <= order < window, got order {order} for window {window}")]
    InvalidOrder { order: usize, window: usize },
    #[error("signal has {len} samples but the window needs {window}")]
    SignalTooShort { len: usize, window: usize },
    #[error("sample spacing must be positive, got {0}")]
    InvalidSpacing(f64),
}

/// Gram polynomial (s-th derivative) of order k evaluated at integer
/// offset i over a window of half-width m. Recurrence after Gorry (1990).
fn gram_poly(i: i64, m: i64, k: i64, s: i64) -> f64 {
    if k > 0 {
        let kf = k as f64;
        let mf = m as f64;
        let a = (4.0 * kf - 2.0) / (kf * (2.0 * mf - kf + 1.0));
        let b = ((kf - 1.0) * (2.0 * mf + kf)) / (kf * (2.0 * mf - kf + 1.0));
        a * (i as f64 * gram_poly(i, m, k - 1, s) + s as f64 * gram_poly(i, m, k - 1, s - 1))
            - b * gram_poly(i, m, k - 2, s)
    } else if k == 0 && s == 0 {
        1.0
    } else {
        0.0
    }
}

/// Generalized factorial a·(a−1)·…·(a−b+1).
fn gen_fact(a: i64, b: i64) -> f64 {
    ((a - b + 1)..=a).map(|j| j as f64).product()
}

/// Convolution weight of the sample at offset `i` for evaluating the s-th
/// derivative of the window's least-squares polynomial at offset `t`.
fn weight(i: i64, t: i64, m: i64, order: i64, s: i64) -> f64 {
    (0..=order)
        .map(|k| {
            (2.0 * k as f64 + 1.0) * (gen_fact(2 * m, k) / gen_fact(2 * m + k + 1, k + 1))
                * gram_poly(i, m, k, 0)
                * gram_poly(t, m, k, s)
        })
        .sum()
}

/// A Savitzky-Golay filter for a fixed window length and polynomial order.
///
/// Weight tables cover derivative orders 0..=2 at every in-window offset, so
/// a full smooth-plus-derivatives pass is a handful of dot products per
/// sample.
#[derive(Debug, Clone)]
pub struct SavitzkyGolay {
    window: usize,
    order: usize,
    // weights[s][t + m] is the window-length weight vector for derivative s
    // evaluated at offset t from the window center.
    weights: Vec<Vec<Vec<f64>>>,
}

impl SavitzkyGolay {
    pub fn new(window: usize, order: usize) -> Result<Self, SavitzkyGolayError> {
        if window < 3 || window.is_multiple_of(2) {
            return Err(SavitzkyGolayError::InvalidWindow(window));
        }
        if order < 1 || order >= window {
            return Err(SavitzkyGolayError::InvalidOrder { order, window });
        }
        let m = (window / 2) as i64;
        let order_i = order as i64;
        let weights = (0..=2i64)
            .map(|s| {
                (-m..=m)
                    .map(|t| (-m..=m).map(|i| weight(i, t, m, order_i, s)).collect())
                    .collect()
            })
            .collect();
        Ok(Self { window, order, weights })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Smooths a uniformly sampled signal and returns the fitted value plus
    /// the first and second derivatives of the local polynomials. `dt` is
    /// the sample spacing used to scale the derivatives.
    pub fn smooth_with_derivatives(
        &self,
        signal: &[f64],
        dt: f64,
    ) -> Result<[Vec<f64>; 3], SavitzkyGolayError> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(SavitzkyGolayError::InvalidSpacing(dt));
        }
        let n = signal.len();
        if n < self.window {
            return Err(SavitzkyGolayError::SignalTooShort { len: n, window: self.window });
        }
        let m = self.window / 2;
        let mut out = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for i in 0..n {
            // Clamp the window to the signal and evaluate the polynomial at
            // the matching off-center offset near the edges.
            let center = i.clamp(m, n - 1 - m);
            let start = center - m;
            let t = i as i64 - center as i64;
            let segment = &signal[start..start + self.window];
            for (s, out_s) in out.iter_mut().enumerate() {
                let w = &self.weights[s][(t + m as i64) as usize];
                let acc: f64 = w.iter().zip(segment).map(|(wi, yi)| wi * yi).sum();
                out_s[i] = acc / dt.powi(s as i32);
            }
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
