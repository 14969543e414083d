//! Weighted inner products, Gauss-Chebyshev quadrature, and the exact closed
//! form of `int_0^1 (x - x^2)^{-1/2} B_r^n(x) T_i^{(M,N)}(2x - 1) dx`.

use std::f64::consts::PI;

use num_traits::Zero;

use crate::bernstein::basis_value;
use crate::chebyshev::{to_symmetric, ChebSeries, MonomialPoly};
use crate::error::{Error, Result};
use crate::exact::{beta_half, binomial, central_ratio, half_binomial, sign, ScaledPi};
use crate::gencheb::{gen_cheb, lambda_coeffs, GenChebPoly, MassParams};
use crate::scalar::{BigRational, Scalar};

/// Extra nodes on top of the polynomial degree when sizing a rule.
pub const NODE_MARGIN: usize = 8;

/// `K`-node Gauss-Chebyshev rule: nodes `cos((2j-1) pi / 2K)`, weights `pi / K`.
///
/// Integrates `f(x) (1 - x^2)^{-1/2}` over `[-1, 1]` exactly when `f` is a
/// polynomial of degree `<= 2K - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weight: f64,
}

impl QuadratureRule {
    pub fn gauss_chebyshev(node_count: usize) -> Self {
        let k = node_count.max(1);
        let nodes = (1..=k)
            .map(|j| ((2 * j - 1) as f64 * PI / (2 * k) as f64).cos())
            .collect();
        QuadratureRule {
            nodes,
            weight: PI / k as f64,
        }
    }

    /// A rule that is exact for integrands of degree `degree` (`K = degree + 8`).
    pub fn for_degree(degree: usize) -> Self {
        Self::gauss_chebyshev(degree + NODE_MARGIN)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// `int_{-1}^{1} f(x) (1 - x^2)^{-1/2} dx`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.weight * self.nodes.iter().map(|&x| f(x)).sum::<f64>()
    }
}

/// Something that can be evaluated on `[-1, 1]`, with an optional degree bound.
pub trait Evaluable {
    fn eval(&self, x: f64) -> f64;

    /// `None` for non-polynomial functions.
    fn degree_bound(&self) -> Option<usize>;
}

impl<S: Scalar> Evaluable for ChebSeries<S> {
    fn eval(&self, x: f64) -> f64 {
        self.eval_f64(x)
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(self.degree())
    }
}

impl<S: Scalar> Evaluable for MonomialPoly<S> {
    fn eval(&self, x: f64) -> f64 {
        self.eval_f64(x)
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(self.degree())
    }
}

impl<S: Scalar> Evaluable for GenChebPoly<S> {
    fn eval(&self, x: f64) -> f64 {
        self.eval_f64(x)
    }

    fn degree_bound(&self) -> Option<usize> {
        Some(self.degree())
    }
}

/// A closure together with what is known about its degree.
pub struct FnEvaluable<F> {
    f: F,
    degree: Option<usize>,
}

impl<F: Fn(f64) -> f64> FnEvaluable<F> {
    pub fn polynomial(f: F, degree: usize) -> Self {
        FnEvaluable {
            f,
            degree: Some(degree),
        }
    }

    pub fn opaque(f: F) -> Self {
        FnEvaluable { f, degree: None }
    }
}

impl<F: Fn(f64) -> f64> Evaluable for FnEvaluable<F> {
    fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    fn degree_bound(&self) -> Option<usize> {
        self.degree
    }
}

/// `(1/pi) (1-x)^{-1/2} (1+x)^{-1/2} dx + M delta(x+1) + N delta(x-1)` on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMeasure<S> {
    params: MassParams<S>,
}

impl<S: Scalar> WeightedMeasure<S> {
    pub fn new(params: MassParams<S>) -> Self {
        WeightedMeasure { params }
    }

    pub fn params(&self) -> &MassParams<S> {
        &self.params
    }

    /// `1 + M + N`, obtained by integrating the constant 1.
    pub fn total_mass(&self) -> f64 {
        self.inner_with_rule(|_| 1.0, |_| 1.0, &QuadratureRule::for_degree(0))
    }

    /// Inner product with a caller-chosen rule (for non-polynomial integrands).
    pub fn inner_with_rule(
        &self,
        f: impl Fn(f64) -> f64,
        g: impl Fn(f64) -> f64,
        rule: &QuadratureRule,
    ) -> f64 {
        let continuous = rule.integrate(|x| f(x) * g(x)) / PI;
        let left = self.params.left().to_f64();
        let right = self.params.right().to_f64();
        continuous + left * f(-1.0) * g(-1.0) + right * f(1.0) * g(1.0)
    }
}

/// `<f, g>` under `measure`; both degree bounds must be known.
pub fn weighted_inner<S: Scalar>(
    f: &dyn Evaluable,
    g: &dyn Evaluable,
    measure: &WeightedMeasure<S>,
) -> Result<f64> {
    let df = f.degree_bound().ok_or(Error::UnknownDegreeBound)?;
    let dg = g.degree_bound().ok_or(Error::UnknownDegreeBound)?;
    let rule = QuadratureRule::for_degree(df + dg);
    Ok(measure.inner_with_rule(|x| f.eval(x), |x| g.eval(x), &rule))
}

/// `int_0^1 (x - x^2)^{-1/2} f(x) dx` via `x = (1 + u)/2`, which turns it into
/// the Gauss-Chebyshev integral of `f((1 + u)/2)`.
pub fn quadrature_01(f: impl Fn(f64) -> f64, degree_bound: usize) -> f64 {
    QuadratureRule::for_degree(degree_bound).integrate(|u| f((1.0 + u) / 2.0))
}

fn check_indices(n: usize, r: usize, i: usize) -> Result<()> {
    if r > n {
        return Err(Error::IndexOutOfRange {
            index: r as i64,
            max: n,
        });
    }
    if i > n {
        return Err(Error::IndexOutOfRange {
            index: i as i64,
            max: n,
        });
    }
    Ok(())
}

// sum_k (-1)^{d-k} C(d-1/2, k) C(d-1/2, d-k) B(r+k+1/2, n+d-r-k+1/2), as a multiple of pi.
fn beta_block(n: usize, r: usize, d: usize) -> BigRational {
    (0..=d).fold(BigRational::zero(), |acc, k| {
        let weight = sign((d - k) as i64)
            * half_binomial(d as u64, k as i64)
            * half_binomial(d as u64, (d - k) as i64);
        let beta = beta_half((r + k) as i64, (n + d - r - k) as i64).expect("nonnegative");
        acc + weight * beta.coeff()
    })
}

// Coefficient of pi. `printed` multiplies each block by c_i (resp. c_d) as in the
// originally published statement of the closed form.
fn closed_form_pi_multiple<S: Scalar>(
    n: usize,
    r: usize,
    i: usize,
    params: &MassParams<S>,
    printed: bool,
) -> Result<S> {
    check_indices(n, r, i)?;
    let outer = binomial(n as u64, r as i64);
    let extra = |d: usize| {
        if printed {
            central_ratio(d as u64)
        } else {
            BigRational::from_integer(1.into())
        }
    };
    let mut total = S::from_rational(&(&outer * extra(i) * beta_block(n, r, i)));
    if i > 0 {
        for (d, lambda) in lambda_coeffs(i, params)?.into_iter().enumerate() {
            if lambda.is_zero() {
                continue;
            }
            let block = &outer * extra(d) * beta_block(n, r, d);
            total = total + lambda * S::from_rational(&block);
        }
    }
    Ok(total)
}

/// Exact `int_0^1 (x - x^2)^{-1/2} B_r^n(x) T_i^{(M,N)}(2x - 1) dx` for rational
/// masses, as a rational multiple of `pi`:
///
/// ```text
/// C(n,r) sum_k (-1)^{i-k} C(i-1/2,k) C(i-1/2,i-k) B(r+k+1/2, n+i-r-k+1/2)
///   + sum_d lambda_d C(n,r) sum_j (-1)^{d-j} C(d-1/2,j) C(d-1/2,d-j) B(r+j+1/2, n+d-r-j+1/2)
/// ```
///
/// `lambda_d` comes from the degree-`i` polynomial's expansion. Point masses
/// enter only through `lambda`; the integral itself is the continuous part.
pub fn theorem2_integral(
    n: usize,
    r: usize,
    i: usize,
    params: &MassParams<BigRational>,
) -> Result<ScaledPi> {
    let coeff = closed_form_pi_multiple(n, r, i, params, false)?;
    ScaledPi::new(coeff, 2)
}

/// Float-mass version of [`theorem2_integral`].
pub fn theorem2_integral_f64<S: Scalar>(
    n: usize,
    r: usize,
    i: usize,
    params: &MassParams<S>,
) -> Result<f64> {
    Ok(closed_form_pi_multiple(n, r, i, params, false)?.to_f64() * PI)
}

/// The closed form with the extra `c_i`, `c_d` prefactors of the published
/// statement. Differs from the true integral whenever `i >= 1`; kept for the
/// erratum report only.
pub fn theorem2_integral_as_printed(
    n: usize,
    r: usize,
    i: usize,
    params: &MassParams<BigRational>,
) -> Result<ScaledPi> {
    let coeff = closed_form_pi_multiple(n, r, i, params, true)?;
    ScaledPi::new(coeff, 2)
}

/// The same integral by Gauss-Chebyshev quadrature of `B_r^n(x) T_i^{(M,N)}(2x-1)`.
pub fn theorem2_oracle<S: Scalar>(
    n: usize,
    r: usize,
    i: usize,
    params: &MassParams<S>,
) -> Result<f64> {
    check_indices(n, r, i)?;
    let poly = gen_cheb(i, params);
    Ok(quadrature_01(
        |x| basis_value(n, r, &x).expect("r <= n") * poly.eval_f64(to_symmetric(x)),
        n + i,
    ))
}
