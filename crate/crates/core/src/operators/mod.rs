//! Riemann-Liouville integrals and Caputo derivatives on uniform meshes.
//!
//! `J_a^β f(x) = 1/Γ(β) ∫_a^x (x - t)^(β-1) f(t) dt` is discretized by
//! product-trapezoidal quadrature: the piecewise-linear interpolant of `f`
//! is integrated exactly against the kernel, so the singularity at `t = x`
//! only ever enters through closed-form weights.
//!
//! The Caputo derivative is available along two routes:
//!
//! * [`caputo_smooth`]: `J^(m-α) D^m f` with the classical derivative taken
//!   symbolically, `m = ⌈α⌉`;
//! * [`caputo_definition`]: `D^1 J^(1-α) (f - T_0[f; a])` with the outer
//!   derivative taken by finite differences (orders in `(0, 1]` only).

mod tanh_sinh;
pub(crate) mod weights;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Ast, Var};
use crate::special::gammafn;

use weights::TrapezoidWeights;

/// Nodes skipped after `x_0` when taking residual sups over values produced
/// by [`caputo_definition`], where one-sided differencing dominates the error.
pub const DEFINITION_ROUTE_SKIP: usize = 5;

/// Fraction of the interval next to the starting point that is also left out
/// of definition-route residual sups. The error there comes from
/// interpolating `x^α`-type behaviour at the origin and is a function of the
/// node index alone, so a window of fixed node count never shrinks under
/// refinement.
pub const DEFINITION_ROUTE_WINDOW: f64 = 0.05;

/// First node index included in a definition-route residual sup.
pub fn definition_route_start(mesh: &Mesh) -> usize {
    let window = (DEFINITION_ROUTE_WINDOW * (mesh.len() - 1) as f64).ceil() as usize;
    window.max(DEFINITION_ROUTE_SKIP + 1)
}

/// Uniform grid `x_j = a + j h`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Mesh {
    a: f64,
    b: f64,
    n: usize,
    h: f64,
}

impl Mesh {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Mesh> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "mesh endpoints must be finite, got [{a}, {b}]"
            )));
        }
        if b <= a {
            return Err(Error::InvalidArgument(format!(
                "mesh needs a < b, got [{a}, {b}]"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "mesh needs at least 2 nodes, got {n}"
            )));
        }
        Ok(Mesh {
            a,
            b,
            n,
            h: (b - a) / (n - 1) as f64,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Node count.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Node `j`; the last node is pinned to `b` exactly.
    pub fn node(&self, j: usize) -> f64 {
        if j + 1 == self.n {
            self.b
        } else {
            self.a + j as f64 * self.h
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.node(j))
    }

    /// Index of the node nearest to `x`, if `x` lies in `[a, b]`.
    pub fn nearest(&self, x: f64) -> Option<usize> {
        if !(x >= self.a && x <= self.b) {
            return None;
        }
        Some((((x - self.a) / self.h).round() as usize).min(self.n - 1))
    }
}

/// Fractional order `α > 0` together with `⌈α⌉` and the gap `⌈α⌉ - α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FracOrder {
    alpha: f64,
    ceil_m: usize,
    gap: f64,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<FracOrder> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "order must be a positive finite number, got {alpha}"
            )));
        }
        let ceil_m = alpha.ceil() as usize;
        Ok(FracOrder {
            alpha,
            ceil_m,
            gap: ceil_m as f64 - alpha,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `⌈α⌉`
    pub fn ceil(&self) -> usize {
        self.ceil_m
    }

    /// `⌈α⌉ - α`, in `[0, 1)`.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn is_integer(&self) -> bool {
        self.gap == 0.0
    }
}

/// Where the samples came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Analytic,
    Computed,
}

/// Function values on the nodes of a [`Mesh`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    mesh: Mesh,
    values: Vec<f64>,
    provenance: Provenance,
}

impl SampledFunction {
    pub fn new(mesh: Mesh, values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        if values.len() != mesh.len() {
            return Err(Error::MeshMismatch(format!(
                "{} values for a mesh of {} nodes",
                values.len(),
                mesh.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { step: j });
        }
        Ok(SampledFunction {
            mesh,
            values,
            provenance,
        })
    }

    /// Samples an expression in `x` at every node.
    pub fn from_ast(f: &Ast, mesh: Mesh) -> Result<Self> {
        let values = mesh
            .nodes()
            .map(|x| f.eval_x(x))
            .collect::<Result<Vec<_>>>()?;
        SampledFunction::new(mesh, values, Provenance::Analytic)
    }

    pub fn from_fn(mesh: Mesh, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = mesh.nodes().map(f).collect();
        SampledFunction::new(mesh, values, Provenance::Analytic)
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at the node nearest to `x`.
    pub fn at(&self, x: f64) -> Option<f64> {
        self.mesh.nearest(x).map(|j| self.values[j])
    }

    fn computed(mesh: Mesh, values: Vec<f64>) -> Result<Self> {
        SampledFunction::new(mesh, values, Provenance::Computed)
    }
}

/// `T_m[f; a](x) = Σ_{k<=m} c_k (x - a)^k` with `c_k = f^(k)(a) / k!`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaylorPoly {
    center: f64,
    coeffs: Vec<f64>,
}

impl TaylorPoly {
    pub fn new(center: f64, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument(
                "a Taylor polynomial needs at least one coefficient".into(),
            ));
        }
        Ok(TaylorPoly { center, coeffs })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        let dx = x - self.center;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * dx + c)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "integral order must be a finite number >= 0, got {beta}"
        )));
    }
    Ok(())
}

/// `J_a^β f` at every mesh node. `β = 0` returns `f` unchanged.
pub fn rl_integral(f: &SampledFunction, beta: f64) -> Result<SampledFunction> {
    check_beta(beta)?;
    if beta == 0.0 {
        return Ok(f.clone());
    }
    let mesh = *f.mesh();
    let w = TrapezoidWeights::new(beta, mesh.h(), mesh.len())?;
    let values = (0..mesh.len()).map(|j| w.apply_at(f.values(), j)).collect();
    SampledFunction::computed(mesh, values)
}

/// `J_a^β f(b)` only: the last node of [`rl_integral`] in O(n).
pub fn rl_integral_at_end(f: &SampledFunction, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let n = f.mesh().len();
    if beta == 0.0 {
        return Ok(f.values()[n - 1]);
    }
    let w = TrapezoidWeights::new(beta, f.mesh().h(), n)?;
    Ok(w.apply_at(f.values(), n - 1))
}

// k-th central difference with step h, symmetric stencil
fn central_derivative(f: &Ast, a: f64, k: usize, h: f64) -> Result<f64> {
    let mut binom = 1.0;
    let mut sum = 0.0;
    for i in 0..=k {
        let offset = (k as f64 / 2.0 - i as f64) * h;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * binom * f.eval_x(a + offset)?;
        binom = binom * (k - i) as f64 / (i + 1) as f64;
    }
    Ok(sum / h.powi(k as i32))
}

/// Taylor polynomial of degree `m` about `a`. Coefficients come from symbolic
/// derivatives; an expression that cannot be differentiated symbolically
/// (e.g. contains `abs`) falls back to central differences with step
/// `1e-5 (1 + |a|)`.
pub fn taylor_poly(f: &Ast, a: f64, m: usize) -> Result<TaylorPoly> {
    let mut coeffs = Vec::with_capacity(m + 1);
    let mut derivative = Some(f.clone());
    let mut factorial = 1.0;
    for k in 0..=m {
        if k > 0 {
            factorial *= k as f64;
        }
        let value = match &derivative {
            Some(d) => d.eval_x(a)?,
            None => central_derivative(f, a, k, 1e-5 * (1.0 + a.abs()))?,
        };
        coeffs.push(value / factorial);
        if k < m {
            derivative = match derivative.take() {
                Some(d) => match d.differentiate(Var::X) {
                    Ok(next) => Some(next),
                    Err(Error::NonDifferentiable(_)) => None,
                    Err(e) => return Err(e),
                },
                None => None,
            };
        }
    }
    TaylorPoly::new(a, coeffs)
}

/// Caputo derivative `J^(⌈α⌉-α) D^⌈α⌉ f` with the integer-order derivative
/// taken symbolically. For integer `α` this is just the sampled derivative.
pub fn caputo_smooth(f: &Ast, order: FracOrder, mesh: Mesh) -> Result<SampledFunction> {
    let derivative = f.nth_derivative(Var::X, order.ceil())?;
    let sampled = SampledFunction::from_ast(&derivative, mesh)?;
    if order.is_integer() {
        return SampledFunction::computed(mesh, sampled.into_values());
    }
    rl_integral(&sampled, order.gap())
}

/// Point evaluation of [`caputo_smooth`]: `D_{*a}^α f(x)` computed on a local
/// `n`-node mesh over `[a, x]`. Continuous in `x`, which makes it usable
/// inside a bisection.
#[derive(Debug, Clone)]
pub struct CaputoPoint {
    derivative: Ast,
    order: FracOrder,
    a: f64,
    n: usize,
}

impl CaputoPoint {
    pub fn new(f: &Ast, order: FracOrder, a: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "local mesh needs at least 2 nodes, got {n}"
            )));
        }
        Ok(CaputoPoint {
            derivative: f.nth_derivative(Var::X, order.ceil())?,
            order,
            a,
            n,
        })
    }

    /// The symbolic `⌈α⌉`-th derivative this evaluator integrates.
    pub fn derivative(&self) -> &Ast {
        &self.derivative
    }

    pub fn at(&self, x: f64) -> Result<f64> {
        if x == self.a {
            return if self.order.is_integer() {
                self.derivative.eval_x(x)
            } else {
                Ok(0.0)
            };
        }
        if self.order.is_integer() {
            return self.derivative.eval_x(x);
        }
        let mesh = Mesh::new(self.a, x, self.n)?;
        let sampled = SampledFunction::from_ast(&self.derivative, mesh)?;
        rl_integral_at_end(&sampled, self.order.gap())
    }
}

/// Caputo derivative `J^(⌈α⌉-α) D^⌈α⌉ f` by double-exponential quadrature of
/// the memory integral at each node.
///
/// Unlike [`caputo_smooth`] this never samples `D^⌈α⌉ f` at the endpoints,
/// so it also handles derivatives with an integrable singularity at the
/// starting point, such as `D (x^α) = α x^(α-1)`.
pub fn caputo_quadrature(f: &Ast, order: FracOrder, mesh: Mesh) -> Result<SampledFunction> {
    let derivative = f.nth_derivative(Var::X, order.ceil())?;
    let a = mesh.a();
    if order.is_integer() {
        let values = mesh
            .nodes()
            .map(|x| derivative.eval_x(x))
            .collect::<Result<_>>()?;
        return SampledFunction::computed(mesh, values);
    }
    let gap = order.gap();
    let norm = gammafn(gap)?;
    let mut values = Vec::with_capacity(mesh.len());
    values.push(0.0);
    for j in 1..mesh.len() {
        let x = mesh.node(j);
        let mut failure = None;
        let (integral, _) = tanh_sinh::integrate(x - a, 1e-13, |left, right| {
            let t = if left < right { a + left } else { x - right };
            match derivative.eval_x(t) {
                Ok(d) => right.powf(gap - 1.0) * d,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        values.push(integral / norm);
    }
    SampledFunction::computed(mesh, values)
}

/// Grid derivative: central differences inside, second-order one-sided
/// differences at both ends.
fn grid_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
    for j in 1..n - 1 {
        out[j] = (values[j + 1] - values[j - 1]) / (2.0 * h);
    }
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
    out
}

/// Caputo derivative from its definition: `D^1 J^(1-α) (f - T_0[f; a])`,
/// for `α ∈ (0, 1]` only.
pub fn caputo_definition(
    f: &SampledFunction,
    order: FracOrder,
    taylor: &TaylorPoly,
) -> Result<SampledFunction> {
    if order.alpha() > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "the grid route supports orders in (0, 1], got {}; use the smooth route",
            order.alpha()
        )));
    }
    let mesh = *f.mesh();
    if taylor.degree() != order.ceil() - 1 {
        return Err(Error::InvalidArgument(format!(
            "Taylor polynomial of degree {} supplied, order {} needs degree {}",
            taylor.degree(),
            order.alpha(),
            order.ceil() - 1
        )));
    }
    if taylor.center() != mesh.a() {
        return Err(Error::InvalidArgument(format!(
            "Taylor polynomial centred at {} but the mesh starts at {}",
            taylor.center(),
            mesh.a()
        )));
    }
    if mesh.len() < 3 {
        return Err(Error::InvalidArgument(
            "grid differentiation needs at least 3 nodes".into(),
        ));
    }
    let remainder: Vec<f64> = f
        .values()
        .iter()
        .zip(mesh.nodes())
        .map(|(v, x)| v - taylor.eval(x))
        .collect();
    let remainder = SampledFunction::computed(mesh, remainder)?;
    let integral = rl_integral(&remainder, order.gap())?;
    SampledFunction::computed(mesh, grid_derivative(integral.values(), mesh.h()))
}

fn sup_abs_diff(lhs: &[f64], rhs: &[f64], from: usize, to: usize) -> f64 {
    (from..to)
        .map(|j| (lhs[j] - rhs[j]).abs())
        .fold(0.0, f64::max)
}

fn require_nodes(mesh: &Mesh, needed: usize) -> Result<()> {
    if mesh.len() < needed {
        return Err(Error::InvalidArgument(format!(
            "residual needs at least {needed} nodes, got {}",
            mesh.len()
        )));
    }
    Ok(())
}

/// `sup |D_{*a}^α J_a^α f - f|` over interior nodes, with the outer Caputo
/// derivative taken along the definition route. `α ∈ (0, 1]`.
pub fn fundamental_residual(f: &Ast, order: FracOrder, mesh: Mesh) -> Result<f64> {
    require_nodes(&mesh, DEFINITION_ROUTE_SKIP + 3)?;
    let sampled = SampledFunction::from_ast(f, mesh)?;
    let integral = rl_integral(&sampled, order.alpha())?;
    // J^α f vanishes at the starting point, so its T_0 is its first sample
    let taylor = TaylorPoly::new(mesh.a(), vec![integral.values()[0]])?;
    let derivative = caputo_definition(&integral, order, &taylor)?;
    Ok(sup_abs_diff(
        derivative.values(),
        sampled.values(),
        definition_route_start(&mesh),
        mesh.len() - 1,
    ))
}

/// `sup |f - T_{⌈α⌉-1}[f; a] - J_a^α D_{*a}^α f|` over the nodes after `x_0`,
/// with the Caputo derivative from [`caputo_smooth`].
pub fn taylor_remainder_residual(f: &Ast, order: FracOrder, mesh: Mesh) -> Result<f64> {
    let taylor = taylor_poly(f, mesh.a(), order.ceil() - 1)?;
    let caputo = caputo_smooth(f, order, mesh)?;
    let rebuilt = rl_integral(&caputo, order.alpha())?;
    let sampled = SampledFunction::from_ast(f, mesh)?;
    let remainder: Vec<f64> = sampled
        .values()
        .iter()
        .zip(mesh.nodes())
        .map(|(v, x)| v - taylor.eval(x))
        .collect();
    Ok(sup_abs_diff(&remainder, rebuilt.values(), 1, mesh.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn ast(s: &str) -> Ast {
        parse(s).unwrap()
    }

    fn unit_mesh(n: usize) -> Mesh {
        Mesh::new(0.0, 1.0, n).unwrap()
    }

    #[test]
    fn mesh_invariants() {
        let m = Mesh::new(-1.0, 2.0, 7).unwrap();
        assert_eq!(m.node(0), -1.0);
        assert_eq!(m.node(6), 2.0);
        let nodes: Vec<_> = m.nodes().collect();
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        assert!(Mesh::new(1.0, 1.0, 5).is_err());
        assert!(Mesh::new(0.0, 1.0, 1).is_err());
        assert!(Mesh::new(0.0, f64::NAN, 5).is_err());
    }

    #[test]
    fn frac_order_parts() {
        let o = FracOrder::new(1.5).unwrap();
        assert_eq!(o.ceil(), 2);
        assert_eq!(o.gap(), 0.5);
        let o = FracOrder::new(1.0).unwrap();
        assert_eq!((o.ceil(), o.gap()), (1, 0.0));
        assert!(FracOrder::new(0.0).is_err());
        assert!(FracOrder::new(-0.5).is_err());
    }

    #[test]
    fn sampled_function_rejects_bad_input() {
        let m = unit_mesh(3);
        assert!(SampledFunction::new(m, vec![1.0, 2.0], Provenance::Computed).is_err());
        assert!(SampledFunction::new(m, vec![1.0, f64::NAN, 2.0], Provenance::Computed).is_err());
    }

    #[test]
    fn rl_integral_of_one() {
        let f = SampledFunction::from_ast(&ast("1"), unit_mesh(1025)).unwrap();
        let j = rl_integral(&f, 0.5).unwrap();
        // 2/sqrt(pi), see tests/oracle/derive_values.py
        assert!((j.values()[1024] - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-13);
        assert_eq!(j.values()[0], 0.0);
        assert_eq!(j.provenance(), Provenance::Computed);
    }

    #[test]
    fn rl_integral_order_one_is_classical() {
        let f = SampledFunction::from_ast(&ast("x"), unit_mesh(11)).unwrap();
        let j = rl_integral(&f, 1.0).unwrap();
        assert!((j.values()[10] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rl_integral_order_zero_is_identity() {
        let f = SampledFunction::from_ast(&ast("sin(x) + x^3"), unit_mesh(33)).unwrap();
        assert_eq!(rl_integral(&f, 0.0).unwrap(), f);
        assert!(rl_integral(&f, -0.1).is_err());
        assert_eq!(rl_integral_at_end(&f, 0.0).unwrap(), f.values()[32]);
    }

    #[test]
    fn end_value_matches_full_sweep() {
        let f = SampledFunction::from_ast(&ast("exp(x)*cos(3*x)"), unit_mesh(257)).unwrap();
        let full = rl_integral(&f, 0.37).unwrap();
        assert_eq!(rl_integral_at_end(&f, 0.37).unwrap(), full.values()[256]);
    }

    #[test]
    fn taylor_examples() {
        let t = taylor_poly(&ast("x^2"), 0.0, 0).unwrap();
        assert_eq!(t.coeffs(), &[0.0]);
        let t = taylor_poly(&ast("exp(x)"), 0.0, 1).unwrap();
        assert_eq!(t.coeffs(), &[1.0, 1.0]);
        let t = taylor_poly(&ast("sin(x)"), 0.0, 0).unwrap();
        assert_eq!(t.eval(0.7), 0.0);
        let t = taylor_poly(&ast("x^3"), 1.0, 3).unwrap();
        assert_eq!(t.coeffs(), &[1.0, 3.0, 3.0, 1.0]);
        assert_eq!(t.eval(1.0), 1.0);
    }

    #[test]
    fn taylor_falls_back_to_differences() {
        // abs(x) is smooth away from 0; d/dx at 2 is 1
        let t = taylor_poly(&ast("abs(x)*x"), 2.0, 2).unwrap();
        assert!((t.coeffs()[0] - 4.0).abs() < 1e-12);
        assert!((t.coeffs()[1] - 4.0).abs() < 1e-6);
        assert!((t.coeffs()[2] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn caputo_smooth_examples() {
        let o = FracOrder::new(0.5).unwrap();
        let d = caputo_smooth(&ast("x"), o, unit_mesh(1025)).unwrap();
        assert!((d.values()[1024] - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-13);
        let d = caputo_smooth(&ast("x^2"), o, unit_mesh(1025)).unwrap();
        assert!((d.values()[1024] - 1.504_505_556_127_350_1).abs() < 1e-12);
        let d = caputo_smooth(&ast("1"), o, unit_mesh(65)).unwrap();
        assert!(d.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn caputo_smooth_integer_order() {
        let o = FracOrder::new(1.0).unwrap();
        let d = caputo_smooth(&ast("x^2"), o, unit_mesh(5)).unwrap();
        assert_eq!(d.values(), &[0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn caputo_point_agrees_with_mesh_sweep() {
        let o = FracOrder::new(0.6).unwrap();
        let f = ast("sin(x) + x^2");
        let sweep = caputo_smooth(&f, o, unit_mesh(513)).unwrap();
        let point = CaputoPoint::new(&f, o, 0.0, 513).unwrap();
        assert!((point.at(1.0).unwrap() - sweep.values()[512]).abs() < 1e-14);
        assert_eq!(point.at(0.0).unwrap(), 0.0);
    }

    #[test]
    fn quadrature_route_handles_singular_derivative() {
        // D^α x^α = Γ(α + 1)
        let o = FracOrder::new(0.5).unwrap();
        let d = caputo_quadrature(&ast("x^0.5"), o, unit_mesh(33)).unwrap();
        let g = gammafn(1.5).unwrap();
        for v in &d.values()[1..] {
            assert!((v - g).abs() < 1e-11, "{v}");
        }
        // the sampled route cannot: D x^0.5 is infinite at 0
        assert!(caputo_smooth(&ast("x^0.5"), o, unit_mesh(33)).is_err());
    }

    #[test]
    fn quadrature_route_agrees_with_smooth_route() {
        let o = FracOrder::new(0.3).unwrap();
        let f = ast("x^2");
        let q = caputo_quadrature(&f, o, unit_mesh(9)).unwrap();
        let s = caputo_smooth(&f, o, unit_mesh(9)).unwrap();
        for (a, b) in q.values().iter().zip(s.values()) {
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn caputo_definition_examples() {
        let o = FracOrder::new(0.5).unwrap();
        let mesh = unit_mesh(2049);
        let f = SampledFunction::from_ast(&ast("x"), mesh).unwrap();
        let t = TaylorPoly::new(0.0, vec![0.0]).unwrap();
        let d = caputo_definition(&f, o, &t).unwrap();
        assert!((d.values()[2048] - std::f64::consts::FRAC_2_SQRT_PI).abs() < 5e-3);

        let f = SampledFunction::from_ast(&ast("7"), mesh).unwrap();
        let t = TaylorPoly::new(0.0, vec![7.0]).unwrap();
        let d = caputo_definition(&f, o, &t).unwrap();
        assert!(d.values().iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn caputo_definition_rejects_high_orders_and_bad_polynomials() {
        let mesh = unit_mesh(9);
        let f = SampledFunction::from_ast(&ast("x"), mesh).unwrap();
        let t0 = TaylorPoly::new(0.0, vec![0.0]).unwrap();
        assert!(caputo_definition(&f, FracOrder::new(1.5).unwrap(), &t0).is_err());
        let t1 = TaylorPoly::new(0.0, vec![0.0, 1.0]).unwrap();
        assert!(caputo_definition(&f, FracOrder::new(0.5).unwrap(), &t1).is_err());
        let shifted = TaylorPoly::new(0.5, vec![0.0]).unwrap();
        assert!(caputo_definition(&f, FracOrder::new(0.5).unwrap(), &shifted).is_err());
    }

    #[test]
    fn routes_agree_on_square() {
        let o = FracOrder::new(0.5).unwrap();
        let mesh = unit_mesh(2049);
        let f = ast("x^2");
        let smooth = caputo_smooth(&f, o, mesh).unwrap();
        let sampled = SampledFunction::from_ast(&f, mesh).unwrap();
        let t = taylor_poly(&f, 0.0, 0).unwrap();
        let def = caputo_definition(&sampled, o, &t).unwrap();
        let from = mesh.nearest(0.1).unwrap();
        let sup = sup_abs_diff(smooth.values(), def.values(), from, mesh.len());
        assert!(sup <= 1e-2, "{sup}");
    }

    #[test]
    fn fundamental_residual_examples() {
        let r =
            fundamental_residual(&ast("1"), FracOrder::new(0.5).unwrap(), unit_mesh(1025)).unwrap();
        assert!(r <= 1e-2, "{r}");
        let r =
            fundamental_residual(&ast("x"), FracOrder::new(1.0).unwrap(), unit_mesh(1025)).unwrap();
        assert!(r <= 1e-8, "{r}");
        assert!(
            fundamental_residual(&ast("x"), FracOrder::new(0.5).unwrap(), unit_mesh(7)).is_err()
        );
    }

    #[test]
    fn fundamental_residual_shrinks_under_refinement() {
        let o = FracOrder::new(0.5).unwrap();
        let r: Vec<f64> = [257, 513, 1025]
            .iter()
            .map(|&n| fundamental_residual(&ast("1"), o, unit_mesh(n)).unwrap())
            .collect();
        assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
    }

    #[test]
    fn taylor_remainder_examples() {
        let r =
            taylor_remainder_residual(&ast("x^2"), FracOrder::new(0.5).unwrap(), unit_mesh(1025))
                .unwrap();
        assert!(r <= 1e-4, "{r}");
        let r = taylor_remainder_residual(&ast("x"), FracOrder::new(1.5).unwrap(), unit_mesh(1025))
            .unwrap();
        assert!(r <= 1e-12, "{r}");
        let r = taylor_remainder_residual(
            &ast("exp(x)"),
            FracOrder::new(0.5).unwrap(),
            unit_mesh(2049),
        )
        .unwrap();
        assert!(r <= 1e-3, "{r}");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn sampled(values: Vec<f64>) -> SampledFunction {
            let n = values.len();
            SampledFunction::new(unit_mesh(n), values, Provenance::Computed).unwrap()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn linearity(
                pair in (3usize..80).prop_flat_map(|n| (
                    prop::collection::vec(-10.0f64..10.0, n),
                    prop::collection::vec(-10.0f64..10.0, n),
                )),
                c1 in -3.0f64..3.0,
                c2 in -3.0f64..3.0,
                beta in 0.05f64..2.5,
            ) {
                let (f1, f2) = pair;
                let combo: Vec<f64> = f1.iter().zip(&f2).map(|(a, b)| c1 * a + c2 * b).collect();
                let lhs = rl_integral(&sampled(combo), beta).unwrap();
                let j1 = rl_integral(&sampled(f1), beta).unwrap();
                let j2 = rl_integral(&sampled(f2), beta).unwrap();
                for k in 0..lhs.values().len() {
                    let rhs = c1 * j1.values()[k] + c2 * j2.values()[k];
                    prop_assert!((lhs.values()[k] - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()) * 10.0);
                }
            }

            #[test]
            fn positivity(
                f in prop::collection::vec(0.0f64..5.0, 3..120),
                beta in 0.05f64..3.0,
            ) {
                let j = rl_integral(&sampled(f), beta).unwrap();
                prop_assert!(j.values().iter().all(|v| *v >= -1e-14));
            }

            #[test]
            fn polynomials_below_the_ceiling_are_annihilated(
                coeffs in prop::collection::vec(-5.0f64..5.0, 1..4),
                alpha in 0.05f64..3.0,
            ) {
                let order = FracOrder::new(alpha).unwrap();
                let degree = (order.ceil() - 1).min(coeffs.len() - 1);
                let src = coeffs[..=degree]
                    .iter()
                    .enumerate()
                    .map(|(k, c)| format!("({c})*x^{k}"))
                    .collect::<Vec<_>>()
                    .join(" + ");
                let d = caputo_smooth(&parse(&src).unwrap(), order, unit_mesh(33)).unwrap();
                prop_assert!(d.values().iter().all(|v| v.abs() <= 1e-12));
            }
        }
    }
}
