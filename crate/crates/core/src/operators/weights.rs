//! Product quadrature weights for the kernel `(x - t)^(β-1) / Γ(β)` on a
//! uniform mesh.
//!
//! The trapezoidal weights integrate the piecewise-linear interpolant of the
//! integrand exactly against the kernel. With `p = β + 1` and the common
//! factor `h^β / Γ(β + 2)` they read
//!
//! ```text
//! a_{0,j} = (j-1)^p - (j-1-β) j^β
//! a_{k,j} = (j-k+1)^p - 2 (j-k)^p + (j-k-1)^p      1 <= k <= j-1
//! a_{j,j} = 1
//! ```
//!
//! Evaluated literally these cancel badly for large `j`, so for larger
//! arguments both expressions are summed as binomial series in `1/m`.

use crate::error::Result;
use crate::special::gammafn;

// below this argument the literal formulas lose nothing worth recovering
const SERIES_FROM: usize = 4;
const SERIES_MAX_TERMS: usize = 200;

/// Σ_{k >= start, step} C(p, k) x^k with x in (-1, 1), k running over
/// `start, start + step, ...`; terms below machine precision end the sum.
fn binomial_tail(p: f64, x: f64, start: usize, step: usize) -> f64 {
    let mut coeff = 1.0; // C(p, 0)
    let mut power = 1.0;
    let mut sum = 0.0;
    for k in 1..SERIES_MAX_TERMS {
        coeff *= (p - (k as f64 - 1.0)) / k as f64;
        power *= x;
        if k < start || !(k - start).is_multiple_of(step) {
            continue;
        }
        let term = coeff * power;
        sum += term;
        if coeff == 0.0 || term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// `(m+1)^p - 2 m^p + (m-1)^p` for `m >= 1`.
pub(crate) fn second_difference(p: f64, m: usize) -> f64 {
    let mf = m as f64;
    if m < SERIES_FROM {
        return (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
    }
    // m^p [(1 + 1/m)^p + (1 - 1/m)^p - 2] = 2 m^p Σ_{even k >= 2} C(p, k) m^-k
    2.0 * mf.powf(p) * binomial_tail(p, 1.0 / mf, 2, 2)
}

/// `(j-1)^p - (j-1-β) j^β` with `p = β + 1`, for `j >= 1`.
pub(crate) fn first_weight(beta: f64, j: usize) -> f64 {
    let p = beta + 1.0;
    let jf = j as f64;
    if j < SERIES_FROM {
        return (jf - 1.0).powf(p) - (jf - 1.0 - beta) * jf.powf(beta);
    }
    // j^p [(1 - 1/j)^p - 1 + p/j] = j^p Σ_{k >= 2} C(p, k) (-1/j)^k
    jf.powf(p) * binomial_tail(p, -1.0 / jf, 2, 1)
}

/// `(m+1)^α - m^α` for `m >= 0`.
pub(crate) fn forward_difference(alpha: f64, m: usize) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mf = m as f64;
    mf.powf(alpha) * (alpha * (1.0 / mf).ln_1p()).exp_m1()
}

/// Product-trapezoidal weight table for a fixed order and mesh size.
#[derive(Debug, Clone)]
pub(crate) struct TrapezoidWeights {
    /// `h^β / Γ(β + 2)`
    pub scale: f64,
    /// `first[j] = a_{0,j}`, index 0 unused.
    pub first: Vec<f64>,
    /// `inner[m] = a_{k,j}` for `m = j - k`, index 0 unused.
    pub inner: Vec<f64>,
}

impl TrapezoidWeights {
    pub fn new(beta: f64, h: f64, n: usize) -> Result<Self> {
        let p = beta + 1.0;
        let scale = h.powf(beta) / gammafn(beta + 2.0)?;
        let mut first = vec![0.0; n];
        let mut inner = vec![0.0; n];
        for j in 1..n {
            first[j] = first_weight(beta, j);
            inner[j] = second_difference(p, j);
        }
        Ok(TrapezoidWeights {
            scale,
            first,
            inner,
        })
    }

    /// Quadrature at node `j` given integrand values `f[0..=j]`, summed in
    /// ascending node order.
    pub fn apply_at(&self, f: &[f64], j: usize) -> f64 {
        if j == 0 {
            return 0.0;
        }
        let mut sum = self.first[j] * f[0];
        for (k, fk) in f.iter().enumerate().take(j).skip(1) {
            sum += self.inner[j - k] * fk;
        }
        sum += f[j];
        self.scale * sum
    }
}

/// Product-rectangle (predictor) weights `h^α/Γ(α+1) · ((m+1)^α - m^α)`.
#[derive(Debug, Clone)]
pub(crate) struct RectangleWeights {
    pub scale: f64,
    /// `diff[m] = (m+1)^α - m^α`
    pub diff: Vec<f64>,
}

impl RectangleWeights {
    pub fn new(alpha: f64, h: f64, n: usize) -> Result<Self> {
        let scale = h.powf(alpha) / gammafn(alpha + 1.0)?;
        let diff = (0..n).map(|m| forward_difference(alpha, m)).collect();
        Ok(RectangleWeights { scale, diff })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_matches_literal_formula_where_both_are_accurate() {
        for &beta in &[0.25, 0.5, 0.75, 1.0, 1.5, 2.3] {
            let p = beta + 1.0;
            for m in SERIES_FROM..40 {
                let mf = m as f64;
                let literal = (mf + 1.0).powf(p) - 2.0 * mf.powf(p) + (mf - 1.0).powf(p);
                let series = second_difference(p, m);
                assert!(
                    (literal - series).abs() <= 1e-11 * literal.abs().max(1.0),
                    "{beta} {m}"
                );
                let literal = (mf - 1.0).powf(p) - (mf - 1.0 - beta) * mf.powf(beta);
                let series = first_weight(beta, m);
                assert!(
                    (literal - series).abs() <= 1e-11 * literal.abs().max(1.0),
                    "{beta} {m}"
                );
            }
        }
    }

    #[test]
    fn integer_order_weights_match_trapezoid_rule() {
        // β = 1 is the composite trapezoid rule: a_{k,j} = 2, a_{0,j} = 1
        for m in 1..100 {
            assert!((second_difference(2.0, m) - 2.0).abs() < 1e-13);
            assert!((first_weight(1.0, m) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn weights_sum_to_the_integral_of_one() {
        // Σ_k a_{k,j} = (β + 1) j^β
        for &beta in &[0.3, 0.5, 0.9] {
            let w = TrapezoidWeights::new(beta, 1.0, 3000).unwrap();
            for j in [1usize, 2, 5, 100, 2999] {
                let s: f64 = w.first[j] + (1..j).map(|k| w.inner[j - k]).sum::<f64>() + 1.0;
                let exact = (beta + 1.0) * (j as f64).powf(beta);
                assert!(
                    ((s - exact) / exact).abs() < 1e-13,
                    "{beta} {j}: {s} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn forward_differences_telescope() {
        let s: f64 = (0..1000).map(|m| forward_difference(0.4, m)).sum();
        assert!((s - 1000f64.powf(0.4)).abs() < 1e-12);
    }
}
