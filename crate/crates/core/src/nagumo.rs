//! The fractional Nagumo condition `x^α |f(x,y1) - f(x,y2)| <= Γ(α+1) |y1 - y2|`,
//! checked on a finite sample, plus the discontinuous right-hand side that
//! shows continuity at the initial point cannot be dropped, and the gap
//! functional `w(x) = x^-α |z(x) - z̃(x)|`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Ast;
use crate::operators::{FracOrder, Provenance, SampledFunction};
use crate::special::gammafn;

/// Ratio slack allowed before a sample counts as a violation.
pub const RATIO_SLACK: f64 = 1e-9;

/// Pairs with `|y1 - y2|` below this fraction of the y-range are skipped.
pub const PAIR_EXCLUSION: f64 = 1e-9;

/// Right-hand side `f(x, y)` of a Caputo initial value problem.
#[derive(Debug, Clone, PartialEq)]
pub enum Rhs2D {
    Expr(Ast),
    /// `scale ·` the piecewise right-hand side
    ///
    /// ```text
    /// Γ(α+1)               y > x^α
    /// Γ(α+1) x^-α y        0 < y <= x^α
    /// 0                    y <= 0
    /// ```
    Counterexample {
        order: FracOrder,
        gamma: f64,
        scale: f64,
    },
}

fn check_order(order: FracOrder) -> Result<()> {
    if !(order.alpha() > 0.0 && order.alpha() < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "order must lie in (0, 1), got {}",
            order.alpha()
        )));
    }
    Ok(())
}

/// The discontinuous right-hand side with infinitely many solutions from
/// `y(0) = 0`.
pub fn counterexample_rhs(order: FracOrder) -> Result<Rhs2D> {
    check_order(order)?;
    Ok(Rhs2D::Counterexample {
        order,
        gamma: gammafn(order.alpha() + 1.0)?,
        scale: 1.0,
    })
}

impl Rhs2D {
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        match self {
            Rhs2D::Expr(e) => e.eval(x, Some(y)),
            Rhs2D::Counterexample {
                order,
                gamma,
                scale,
            } => {
                let threshold = x.powf(order.alpha());
                let value = if y > threshold {
                    *gamma
                } else if y > 0.0 {
                    // here 0 < y <= x^α, so x > 0
                    gamma * y / threshold
                } else {
                    0.0
                };
                Ok(scale * value)
            }
        }
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> Rhs2D {
        match self {
            Rhs2D::Expr(e) => {
                Rhs2D::Expr(Ast::binary(crate::expr::BinOp::Mul, Ast::num(c), e.clone()))
            }
            Rhs2D::Counterexample {
                order,
                gamma,
                scale,
            } => Rhs2D::Counterexample {
                order: *order,
                gamma: *gamma,
                scale: scale * c,
            },
        }
    }

    pub fn is_counterexample(&self) -> bool {
        matches!(self, Rhs2D::Counterexample { .. })
    }
}

impl fmt::Display for Rhs2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rhs2D::Expr(e) => write!(f, "{e}"),
            Rhs2D::Counterexample { order, scale, .. } if *scale == 1.0 => {
                write!(f, "counterexample({})", order.alpha())
            }
            Rhs2D::Counterexample { order, scale, .. } => {
                write!(f, "{scale} * counterexample({})", order.alpha())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NagumoReport {
    /// Largest sampled `x^α |f(x,y1) - f(x,y2)| / (Γ(α+1) |y1 - y2|)`.
    pub sup_ratio: f64,
    /// `sup_ratio <= 1 + 1e-9`: the condition holds on the sample (this is
    /// not a proof for all reals).
    pub satisfied: bool,
    /// `(x, y1, y2)` attaining the sup; `None` when every ratio is zero.
    pub argmax: Option<(f64, f64, f64)>,
    /// Number of `(x, y1, y2)` triples evaluated.
    pub samples_used: usize,
}

/// Samples the Nagumo ratio over `x = b j / nx` (`j = 1..=nx`) and all
/// unordered pairs of an `ny`-point grid on `y_range`.
///
/// `x = 0` is left out: the left-hand side vanishes there.
pub fn nagumo_scan(
    f: &Rhs2D,
    order: FracOrder,
    b: f64,
    nx: usize,
    ny: usize,
    y_range: (f64, f64),
) -> Result<NagumoReport> {
    check_order(order)?;
    let (ylo, yhi) = y_range;
    if !(ylo.is_finite() && yhi.is_finite() && ylo < yhi) {
        return Err(Error::InvalidArgument(format!(
            "degenerate y range [{ylo}, {yhi}]"
        )));
    }
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "b must be positive, got {b}"
        )));
    }
    if nx < 3 || ny < 3 {
        return Err(Error::InvalidArgument(format!(
            "need nx, ny >= 3, got nx = {nx}, ny = {ny}"
        )));
    }
    let alpha = order.alpha();
    let gamma = gammafn(alpha + 1.0)?;
    let min_gap = PAIR_EXCLUSION * (yhi - ylo);
    let ys: Vec<f64> = (0..ny)
        .map(|i| {
            if i + 1 == ny {
                yhi
            } else {
                ylo + i as f64 * (yhi - ylo) / (ny - 1) as f64
            }
        })
        .collect();

    let mut report = NagumoReport {
        sup_ratio: 0.0,
        satisfied: true,
        argmax: None,
        samples_used: 0,
    };
    let mut fx = vec![0.0; ny];
    for j in 1..=nx {
        let x = b * j as f64 / nx as f64;
        let weight = x.powf(alpha);
        for (slot, &y) in fx.iter_mut().zip(&ys) {
            *slot = f.eval(x, y)?;
        }
        for i in 0..ny {
            for k in i + 1..ny {
                let dy = (ys[i] - ys[k]).abs();
                if dy < min_gap {
                    continue;
                }
                report.samples_used += 1;
                let ratio = weight * (fx[i] - fx[k]).abs() / (gamma * dy);
                if !ratio.is_finite() {
                    return Err(Error::domain(
                        "nagumo_scan",
                        format!(
                            "non-finite ratio at x = {x}, y1 = {}, y2 = {}",
                            ys[i], ys[k]
                        ),
                    ));
                }
                if ratio > report.sup_ratio {
                    report.sup_ratio = ratio;
                    report.argmax = Some((x, ys[i], ys[k]));
                }
            }
        }
    }
    report.satisfied = report.sup_ratio <= 1.0 + RATIO_SLACK;
    Ok(report)
}

/// `w(x_j) = (x_j - a)^-α |z(x_j) - z̃(x_j)|` with `w(x_0) = 0`.
pub fn uniqueness_gap(
    z: &SampledFunction,
    z_tilde: &SampledFunction,
    order: FracOrder,
) -> Result<SampledFunction> {
    if z.mesh() != z_tilde.mesh() {
        return Err(Error::MeshMismatch(format!(
            "{:?} vs {:?}",
            z.mesh(),
            z_tilde.mesh()
        )));
    }
    let mesh = *z.mesh();
    let a = mesh.a();
    let values = mesh
        .nodes()
        .zip(z.values().iter().zip(z_tilde.values()))
        .enumerate()
        .map(|(j, (x, (u, v)))| {
            if j == 0 {
                0.0
            } else {
                (x - a).powf(-order.alpha()) * (u - v).abs()
            }
        })
        .collect();
    SampledFunction::new(mesh, values, Provenance::Computed)
}
