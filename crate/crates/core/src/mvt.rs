//! Interior witnesses for the fractional mean value theorems.
//!
//! Each search reduces to finding `ξ ∈ (a, x)` with `φ(ξ) = target` for a
//! continuous `φ`: `φ = f` for the integral forms and `φ = D_{*a}^α f` for
//! the differential form. The open interval is scanned on a uniform grid,
//! the leftmost sign change of `φ - target` is bracketed and then bisected.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Ast;
use crate::operators::{
    rl_integral_at_end, taylor_poly, CaputoPoint, FracOrder, Mesh, SampledFunction,
};
use crate::special::gammafn;

/// A mean value point together with how well it satisfies its identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub xi: f64,
    /// Absolute defect of the mean value identity at `xi`.
    pub residual: f64,
    pub lo: f64,
    pub hi: f64,
    /// The value `φ(ξ)` has to attain.
    pub target: f64,
    /// The identity holds (up to tolerance) for every interior point; `xi`
    /// is then the midpoint.
    pub degenerate: bool,
}

impl Witness {
    pub fn bracket(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// `|φ - target|` at or below `tolerance · max(1, |target|)` counts as
    /// attained.
    pub tolerance: f64,
    /// Bisection stops once the bracket is narrower than this fraction of
    /// the interval.
    pub bisection_rel_width: f64,
    /// How many times the scan grid is refined tenfold before giving up.
    pub refinements: u32,
    /// Tolerance below which `g` samples count as zero in the sign check.
    pub sign_tolerance: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            tolerance: 1e-8,
            bisection_rel_width: 1e-12,
            refinements: 2,
            sign_tolerance: 1e-12,
        }
    }
}

struct Located {
    xi: f64,
    lo: f64,
    hi: f64,
    degenerate: bool,
}

const MAX_BISECTIONS: usize = 200;

fn locate<F>(
    mut phi: F,
    target: f64,
    a: f64,
    x: f64,
    n: usize,
    cfg: &SearchConfig,
) -> Result<Located>
where
    F: FnMut(f64) -> Result<f64>,
{
    let attained = cfg.tolerance * target.abs().max(1.0);
    let mut intervals = n.max(3) - 1;
    for level in 0..=cfg.refinements {
        let step = (x - a) / intervals as f64;
        let points: Vec<f64> = (1..intervals).map(|i| a + i as f64 * step).collect();
        let defects = points
            .iter()
            .map(|&t| phi(t).map(|v| v - target))
            .collect::<Result<Vec<f64>>>()?;

        if level == 0 && defects.iter().all(|d| d.abs() <= attained) {
            let mid = 0.5 * (a + x);
            return Ok(Located {
                xi: mid,
                lo: a,
                hi: x,
                degenerate: true,
            });
        }

        for i in 0..defects.len() {
            if defects[i] == 0.0 {
                return Ok(Located {
                    xi: points[i],
                    lo: points[i],
                    hi: points[i],
                    degenerate: false,
                });
            }
            if i + 1 < defects.len() && (defects[i] < 0.0) != (defects[i + 1] < 0.0) {
                return bisect(
                    &mut phi,
                    target,
                    points[i],
                    points[i + 1],
                    defects[i],
                    a,
                    x,
                    cfg,
                );
            }
        }

        let closest = defects
            .iter()
            .enumerate()
            .min_by(|p, q| p.1.abs().total_cmp(&q.1.abs()));
        if let Some((i, d)) = closest {
            if d.abs() < attained {
                return Ok(Located {
                    xi: points[i],
                    lo: points[i],
                    hi: points[i],
                    degenerate: true,
                });
            }
        }
        intervals *= 10;
    }
    Err(Error::NoWitness(format!(
        "no crossing of the target {target} on ({a}, {x}) after {} tenfold refinements; \
         quadrature error likely exceeds the tolerance",
        cfg.refinements
    )))
}

#[allow(clippy::too_many_arguments)]
fn bisect<F>(
    phi: &mut F,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    lo_defect: f64,
    a: f64,
    x: f64,
    cfg: &SearchConfig,
) -> Result<Located>
where
    F: FnMut(f64) -> Result<f64>,
{
    let lo_negative = lo_defect < 0.0;
    let width = cfg.bisection_rel_width * (x - a);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= width {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let d = phi(mid)? - target;
        if d == 0.0 {
            return Ok(Located {
                xi: mid,
                lo: mid,
                hi: mid,
                degenerate: false,
            });
        }
        if (d < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Located {
        xi: 0.5 * (lo + hi),
        lo,
        hi,
        degenerate: false,
    })
}

fn check_interval(a: f64, x: f64) -> Result<()> {
    if !(a.is_finite() && x.is_finite() && x > a) {
        return Err(Error::InvalidArgument(format!(
            "need a < x, got a = {a}, x = {x}"
        )));
    }
    Ok(())
}

/// Witness for `J_a^α (f g)(x) = f(ξ) J_a^α g(x)` with `g` of one sign.
pub fn integral_mvt_witness(
    f: &Ast,
    g: &Ast,
    order: FracOrder,
    a: f64,
    x: f64,
    n: usize,
) -> Result<Witness> {
    integral_mvt_witness_with(f, g, order, a, x, n, &SearchConfig::default())
}

pub fn integral_mvt_witness_with(
    f: &Ast,
    g: &Ast,
    order: FracOrder,
    a: f64,
    x: f64,
    n: usize,
    cfg: &SearchConfig,
) -> Result<Witness> {
    check_interval(a, x)?;
    let mesh = Mesh::new(a, x, n)?;
    let fs = SampledFunction::from_ast(f, mesh)?;
    let gs = SampledFunction::from_ast(g, mesh)?;

    let positive = gs.values().iter().position(|v| *v > cfg.sign_tolerance);
    let negative = gs.values().iter().position(|v| *v < -cfg.sign_tolerance);
    if let (Some(p), Some(q)) = (positive, negative) {
        return Err(Error::Precondition(format!(
            "g changes sign on [{a}, {x}]: g({}) = {} but g({}) = {}",
            mesh.node(p),
            gs.values()[p],
            mesh.node(q),
            gs.values()[q]
        )));
    }

    let product: Vec<f64> = fs
        .values()
        .iter()
        .zip(gs.values())
        .map(|(u, v)| u * v)
        .collect();
    let product = SampledFunction::new(mesh, product, fs.provenance())?;
    let weighted = rl_integral_at_end(&product, order.alpha())?;
    let mass = rl_integral_at_end(&gs, order.alpha())?;

    if mass == 0.0 {
        // g vanishes: both sides are zero for every ξ
        let mid = 0.5 * (a + x);
        return Ok(Witness {
            xi: mid,
            residual: 0.0,
            lo: a,
            hi: x,
            target: 0.0,
            degenerate: true,
        });
    }

    let target = weighted / mass;
    let found = locate(|t| f.eval_x(t), target, a, x, n, cfg)?;
    let residual = (weighted - f.eval_x(found.xi)? * mass).abs();
    Ok(Witness {
        xi: found.xi,
        residual,
        lo: found.lo,
        hi: found.hi,
        target,
        degenerate: found.degenerate,
    })
}

/// Witness for `J_a^α f(b) = (b - a)^α f(ξ) / Γ(α + 1)`.
pub fn simple_integral_mvt_witness(
    f: &Ast,
    order: FracOrder,
    a: f64,
    b: f64,
    n: usize,
) -> Result<Witness> {
    simple_integral_mvt_witness_with(f, order, a, b, n, &SearchConfig::default())
}

pub fn simple_integral_mvt_witness_with(
    f: &Ast,
    order: FracOrder,
    a: f64,
    b: f64,
    n: usize,
    cfg: &SearchConfig,
) -> Result<Witness> {
    check_interval(a, b)?;
    let mesh = Mesh::new(a, b, n)?;
    let fs = SampledFunction::from_ast(f, mesh)?;
    let integral = rl_integral_at_end(&fs, order.alpha())?;
    let scale = (b - a).powf(order.alpha()) / gammafn(order.alpha() + 1.0)?;
    let target = integral / scale;
    let found = locate(|t| f.eval_x(t), target, a, b, n, cfg)?;
    let residual = (integral - scale * f.eval_x(found.xi)?).abs();
    Ok(Witness {
        xi: found.xi,
        residual,
        lo: found.lo,
        hi: found.hi,
        target,
        degenerate: found.degenerate,
    })
}

/// Witness for
/// `(f(b) - T_{⌈α⌉-1}[f; a](b)) / (b - a)^α = D_{*a}^α f(ξ) / Γ(α + 1)`.
///
/// `D_{*a}^α f` is evaluated pointwise on local `n`-node meshes over
/// `[a, t]`, so scan and bisection see one continuous function.
pub fn differential_mvt_witness(
    f: &Ast,
    order: FracOrder,
    a: f64,
    b: f64,
    n: usize,
) -> Result<Witness> {
    differential_mvt_witness_with(f, order, a, b, n, &SearchConfig::default())
}

pub fn differential_mvt_witness_with(
    f: &Ast,
    order: FracOrder,
    a: f64,
    b: f64,
    n: usize,
    cfg: &SearchConfig,
) -> Result<Witness> {
    check_interval(a, b)?;
    let taylor = taylor_poly(f, a, order.ceil() - 1)?;
    let remainder = f.eval_x(b)? - taylor.eval(b);
    let target = gammafn(order.alpha() + 1.0)? * remainder / (b - a).powf(order.alpha());
    let caputo = CaputoPoint::new(f, order, a, n)?;
    let phi = |t: f64| -> Result<f64> {
        let v = caputo.at(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::domain(
                "caputo",
                format!("non-finite Caputo derivative at {t}"),
            ))
        }
    };
    let found = locate(phi, target, a, b, n, cfg)?;
    let residual = (phi(found.xi)? - target).abs();
    Ok(Witness {
        xi: found.xi,
        residual,
        lo: found.lo,
        hi: found.hi,
        target,
        degenerate: found.degenerate,
    })
}
