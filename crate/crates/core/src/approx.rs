//! Least-squares polynomial fitting.
//!
//! Two measures are in play. Under the Chebyshev weight with endpoint masses
//! the generalized basis is meant to make the normal equations diagonal, so
//! coefficients are plain projections. Under plain `dx` on `[0, 1]` the
//! monomial basis gives the Hilbert matrix, solved directly for comparison.

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::chebyshev::{to_symmetric, ChebSeries, MonomialPoly};
use crate::error::{Error, Result};
use crate::gencheb::{gen_cheb, MassParams};
use crate::integrals::{Evaluable, QuadratureRule, WeightedMeasure, NODE_MARGIN};
use crate::scalar::{BigRational, Scalar};

/// Gauss-Chebyshev nodes used for non-polynomial integrands.
pub const WEIGHTED_NODES: usize = 256;
pub const DX_PANELS: usize = 32;
pub const DX_NODES_PER_PANEL: usize = 8;
/// Norms at or below this are treated as degenerate.
pub const NORM_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FitMeasure {
    /// `(1/pi)(1-x^2)^{-1/2} dx + M delta(x+1) + N delta(x-1)` on `[-1, 1]`.
    Weighted,
    /// `dx` on `[0, 1]`.
    Dx,
}

/// The fitted polynomial, in the variable of its own domain.
#[derive(Debug, Clone, PartialEq)]
pub enum Fitted {
    /// `sum_k c_k T_k(x)` on `[-1, 1]`.
    Cheb(ChebSeries<f64>),
    /// `sum_k c_k T_k(2x - 1)` on `[0, 1]`.
    ShiftedCheb(ChebSeries<f64>),
    /// `sum_k c_k x^k` on `[0, 1]`.
    Monomial(MonomialPoly<f64>),
}

impl Fitted {
    pub fn evaluate(&self, x: f64) -> f64 {
        match self {
            Fitted::Cheb(s) => s.eval_f64(x),
            Fitted::ShiftedCheb(s) => s.eval_f64(to_symmetric(x)),
            Fitted::Monomial(p) => p.eval_f64(x),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Fitted::Cheb(s) | Fitted::ShiftedCheb(s) => s.degree(),
            Fitted::Monomial(p) => p.degree(),
        }
    }

    pub fn to_json(&self) -> Value {
        let coeffs = |c: &[f64]| c.iter().map(Scalar::to_json).collect::<Vec<_>>();
        match self {
            Fitted::Cheb(s) => serde_json::json!({"basis": "chebyshev-T", "coeffs": coeffs(s.coeffs())}),
            Fitted::ShiftedCheb(s) => {
                serde_json::json!({"basis": "chebyshev-T(2x-1)", "coeffs": coeffs(s.coeffs())})
            }
            Fitted::Monomial(p) => serde_json::json!({"basis": "monomial", "coeffs": coeffs(p.coeffs())}),
        }
    }
}

impl Serialize for Fitted {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.to_json().serialize(s)
    }
}

impl Evaluable for Fitted {
    fn eval(&self, x: f64) -> f64 {
        self.evaluate(x)
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(self.degree())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub degree: usize,
    /// `"gen-cheb(M,N)"` or `"monomial"`.
    pub basis: String,
    pub measure: FitMeasure,
    pub domain: [f64; 2],
    pub coefficients: Vec<f64>,
    pub residual: f64,
    /// 1-norm condition number of the normal matrix.
    pub condition_estimate: f64,
    pub quadrature_nodes: usize,
    /// Sum of absolute off-diagonal normal-matrix entries over the diagonal sum.
    pub gram_offdiag_ratio: f64,
    pub polynomial: Fitted,
}

impl FitResult {
    pub fn evaluate(&self, x: f64) -> f64 {
        self.polynomial.evaluate(x)
    }

    /// `(x, f(x), p(x), f(x) - p(x))` at `count` equispaced points of the domain.
    pub fn samples(&self, f: &dyn Evaluable, count: usize) -> Vec<[f64; 4]> {
        let [a, b] = self.domain;
        (0..count)
            .map(|j| {
                let x = if count == 1 {
                    a
                } else {
                    a + (b - a) * j as f64 / (count - 1) as f64
                };
                let (fx, px) = (f.eval(x), self.evaluate(x));
                [x, fx, px, fx - px]
            })
            .collect()
    }
}

fn scalar_text<S: Scalar>(v: &S) -> String {
    match v.to_json() {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

fn gen_tag<S: Scalar>(params: &MassParams<S>) -> String {
    format!("gen-cheb({},{})", scalar_text(params.left()), scalar_text(params.right()))
}

fn weighted_rule(f: &dyn Evaluable, n: usize) -> QuadratureRule {
    let k = match f.degree_bound() {
        Some(d) => WEIGHTED_NODES.max(d + n + NODE_MARGIN),
        None => WEIGHTED_NODES,
    };
    QuadratureRule::gauss_chebyshev(k)
}

/// Composite Gauss-Legendre on `[0, 1]`: 32 panels of 8 nodes.
pub struct DxRule {
    rule: GaussLegendre,
    panels: usize,
}

impl DxRule {
    pub fn new() -> Self {
        DxRule {
            rule: GaussLegendre::new(NonZeroUsize::new(DX_NODES_PER_PANEL).expect("nonzero")),
            panels: DX_PANELS,
        }
    }

    pub fn node_count(&self) -> usize {
        self.panels * DX_NODES_PER_PANEL
    }

    /// `int_0^1 f(x) dx`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let h = 1.0 / self.panels as f64;
        (0..self.panels)
            .map(|p| {
                let a = p as f64 * h;
                self.rule.integrate(a, a + h, &f)
            })
            .sum()
    }
}

impl Default for DxRule {
    fn default() -> Self {
        Self::new()
    }
}

/// `<f - p, f - p>` under `measure`.
pub fn residual_error<S: Scalar>(
    f: &dyn Evaluable,
    p: &dyn Evaluable,
    measure: &WeightedMeasure<S>,
) -> f64 {
    let rule = weighted_rule(f, p.degree_bound().unwrap_or(0));
    let diff = |x: f64| f.eval(x) - p.eval(x);
    measure.inner_with_rule(diff, diff, &rule).max(0.0)
}

/// `int_0^1 (f - p)^2 dx`.
pub fn residual_error_dx(f: &dyn Evaluable, p: &dyn Evaluable) -> f64 {
    DxRule::new().integrate(|x| (f.eval(x) - p.eval(x)).powi(2))
}

fn offdiag_ratio(gram: &DMatrix<f64>) -> f64 {
    let diag: f64 = gram.diagonal().iter().map(|v| v.abs()).sum();
    let off: f64 = (0..gram.nrows())
        .flat_map(|i| (0..gram.ncols()).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|ij| gram[ij].abs())
        .sum();
    off / diag
}

fn norm_1(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `||A||_1 ||A^{-1}||_1`, infinite for a singular matrix.
pub fn condition_1norm(m: &DMatrix<f64>) -> f64 {
    match m.clone().try_inverse() {
        Some(inv) => norm_1(m) * norm_1(&inv),
        None => f64::INFINITY,
    }
}

fn check_norm(k: usize, norm: f64) -> Result<f64> {
    if norm.abs() <= NORM_FLOOR || !norm.is_finite() {
        return Err(Error::DegenerateNorm { k, norm });
    }
    Ok(norm)
}

/// Weighted least squares in the basis `T_0^{(M,N)}, ..., T_n^{(M,N)}` on
/// `[-1, 1]`, with `a_k = <f, phi_k> / <phi_k, phi_k>`.
pub fn fit_orthogonal<S: Scalar>(
    f: &dyn Evaluable,
    n: usize,
    params: &MassParams<S>,
) -> Result<FitResult> {
    let measure = WeightedMeasure::new(params.clone());
    let rule = weighted_rule(f, n);
    let phis: Vec<ChebSeries<f64>> = (0..=n).map(|k| gen_cheb(k, params).series().to_float()).collect();
    let inner = |a: &dyn Fn(f64) -> f64, b: &dyn Fn(f64) -> f64| measure.inner_with_rule(a, b, &rule);

    let gram = DMatrix::from_fn(n + 1, n + 1, |i, j| {
        inner(&|x| phis[i].eval_f64(x), &|x| phis[j].eval_f64(x))
    });
    let mut coefficients = Vec::with_capacity(n + 1);
    for (k, phi) in phis.iter().enumerate() {
        let norm = check_norm(k, gram[(k, k)])?;
        coefficients.push(inner(&|x| f.eval(x), &|x| phi.eval_f64(x)) / norm);
    }
    let series = phis
        .iter()
        .zip(&coefficients)
        .fold(ChebSeries::zero(), |acc, (phi, a)| acc.add(&phi.scale(a)));
    let polynomial = Fitted::Cheb(series);
    Ok(FitResult {
        degree: n,
        basis: gen_tag(params),
        measure: FitMeasure::Weighted,
        domain: [-1.0, 1.0],
        residual: residual_error(f, &polynomial, &measure),
        condition_estimate: condition_1norm(&gram),
        quadrature_nodes: rule.node_count(),
        gram_offdiag_ratio: offdiag_ratio(&gram),
        coefficients,
        polynomial,
    })
}

/// Exact `1/(i + j + 1)`, `0 <= i, j <= n`.
pub fn hilbert_matrix(n: usize) -> Vec<Vec<BigRational>> {
    (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| BigRational::new(1.into(), ((i + j + 1) as i64).into()))
                .collect()
        })
        .collect()
}

/// Exact inverse by Gauss-Jordan elimination; `None` when singular.
pub fn exact_inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let size = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect()
        })
        .collect();
    for col in 0..size {
        let pivot = (col..size).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..size {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..size {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..size {
                let (da, di) = (&factor * &a[col][j], &factor * &inv[col][j]);
                a[r][j] -= da;
                inv[r][j] -= di;
            }
        }
    }
    Some(inv)
}

fn exact_norm_1(m: &[Vec<BigRational>]) -> BigRational {
    (0..m.len())
        .map(|j| m.iter().fold(BigRational::zero(), |acc, row| acc + row[j].abs()))
        .max()
        .unwrap_or_else(BigRational::zero)
}

/// Exact 1-norm condition number of the Hilbert matrix of order `n + 1`.
pub fn hilbert_condition(n: usize) -> f64 {
    let h = hilbert_matrix(n);
    let inv = exact_inverse(&h).expect("Hilbert matrices are nonsingular");
    (exact_norm_1(&h) * exact_norm_1(&inv)).to_f64()
}

fn solve(gram: DMatrix<f64>, rhs: DVector<f64>, condition: f64) -> Result<Vec<f64>> {
    let x = gram.lu().solve(&rhs).ok_or(Error::Solver { condition })?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver { condition });
    }
    Ok(x.iter().copied().collect())
}

/// Least squares under `dx` on `[0, 1]` in the monomial basis, through the
/// Hilbert normal equations.
pub fn fit_monomial_normal_equations(f: &dyn Evaluable, n: usize) -> Result<FitResult> {
    let rule = DxRule::new();
    let hilbert = hilbert_matrix(n);
    let gram = DMatrix::from_fn(n + 1, n + 1, |i, j| hilbert[i][j].to_f64());
    let rhs = DVector::from_fn(n + 1, |i, _| rule.integrate(|x| f.eval(x) * x.powi(i as i32)));
    let condition = hilbert_condition(n);
    let coefficients = solve(gram.clone(), rhs, condition)?;
    let polynomial = Fitted::Monomial(MonomialPoly::new(coefficients.clone()));
    Ok(FitResult {
        degree: n,
        basis: "monomial".into(),
        measure: FitMeasure::Dx,
        domain: [0.0, 1.0],
        residual: residual_error_dx(f, &polynomial),
        condition_estimate: condition,
        quadrature_nodes: rule.node_count(),
        gram_offdiag_ratio: offdiag_ratio(&gram),
        coefficients,
        polynomial,
    })
}

/// Least squares under `dx` on `[0, 1]` in the basis `T_k^{(M,N)}(2x - 1)`.
/// The normal matrix is not diagonal here, so the full system is solved.
pub fn fit_gen_cheb_dx<S: Scalar>(
    f: &dyn Evaluable,
    n: usize,
    params: &MassParams<S>,
) -> Result<FitResult> {
    let rule = DxRule::new();
    let phis: Vec<ChebSeries<f64>> = (0..=n).map(|k| gen_cheb(k, params).series().to_float()).collect();
    let psi = |k: usize, x: f64| phis[k].eval_f64(to_symmetric(x));
    let gram = DMatrix::from_fn(n + 1, n + 1, |i, j| rule.integrate(|x| psi(i, x) * psi(j, x)));
    let rhs = DVector::from_fn(n + 1, |i, _| rule.integrate(|x| f.eval(x) * psi(i, x)));
    let condition = condition_1norm(&gram);
    let coefficients = solve(gram.clone(), rhs, condition)?;
    let series = phis
        .iter()
        .zip(&coefficients)
        .fold(ChebSeries::zero(), |acc, (phi, a)| acc.add(&phi.scale(a)));
    let polynomial = Fitted::ShiftedCheb(series);
    Ok(FitResult {
        degree: n,
        basis: gen_tag(params),
        measure: FitMeasure::Dx,
        domain: [0.0, 1.0],
        residual: residual_error_dx(f, &polynomial),
        condition_estimate: condition,
        quadrature_nodes: rule.node_count(),
        gram_offdiag_ratio: offdiag_ratio(&gram),
        coefficients,
        polynomial,
    })
}
