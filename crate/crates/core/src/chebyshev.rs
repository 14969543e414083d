//! Classical Chebyshev polynomials of the first kind on `[-1, 1]`, exact
//! power/Chebyshev basis changes, and the Bernstein form on `[0, 1]`.
//!
//! Everything on `[-1, 1]` reaches `[0, 1]` through `x -> 2x - 1`; that
//! substitution lives only in [`to_symmetric`] and [`shifted_bernstein`].

use num_traits::{One, Zero};
use serde_json::Value;

use crate::bernstein::BernsteinPoly;
use crate::error::{Error, Result};
use crate::exact::{binomial, central_ratio, half_binomial, sign};
use crate::integrals::quadrature_01;
use crate::scalar::{BigRational, Scalar};

/// `T_n(x)`: `cos(n arccos x)` on `[-1, 1]`, three-term recurrence outside.
pub fn eval_t(n: usize, x: f64) -> f64 {
    if (-1.0..=1.0).contains(&x) {
        return (n as f64 * x.acos()).cos();
    }
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Maps `[0, 1]` onto `[-1, 1]`.
pub fn to_symmetric(x01: f64) -> f64 {
    2.0 * x01 - 1.0
}

fn trim<S: Scalar>(mut coeffs: Vec<S>) -> Vec<S> {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

fn zip_add<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(S::zero);
            let y = b.get(i).cloned().unwrap_or_else(S::zero);
            x + y
        })
        .collect()
}

/// Power-basis polynomial `sum_k c_k x^k`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPoly<S = BigRational> {
    coeffs: Vec<S>,
}

impl<S: Scalar> MonomialPoly<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        MonomialPoly {
            coeffs: trim(coeffs),
        }
    }

    pub fn zero() -> Self {
        MonomialPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(zip_add(&self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| factor.clone() * c.clone()).collect())
    }

    /// Product with `a + b x`.
    pub fn mul_linear(&self, a: &S, b: &S) -> Self {
        let mut out = vec![S::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] = out[k].clone() + a.clone() * c.clone();
            out[k + 1] = out[k + 1].clone() + b.clone() * c.clone();
        }
        Self::new(out)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| S::from_i64(k as i64) * c.clone())
                .collect(),
        )
    }

    /// `p(alpha t + beta)` as a polynomial in `t`.
    pub fn compose_affine(&self, alpha: &S, beta: &S) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| {
            acc.mul_linear(beta, alpha).add(&Self::new(vec![c.clone()]))
        })
    }

    pub fn evaluate(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64())
    }
}

/// `sum_k c_k T_k(x)` on `[-1, 1]`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries<S = BigRational> {
    coeffs: Vec<S>,
}

impl<S: Scalar> ChebSeries<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        ChebSeries {
            coeffs: trim(coeffs),
        }
    }

    pub fn zero() -> Self {
        ChebSeries { coeffs: Vec::new() }
    }

    /// `c T_n`.
    pub fn single(n: usize, c: S) -> Self {
        let mut coeffs = vec![S::zero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// Coefficient of `T_k`, zero past the end.
    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(zip_add(&self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| factor.clone() * c.clone()).collect())
    }

    /// The series of `p(-x)`: `T_k(-x) = (-1)^k T_k(x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Clenshaw summation in the coefficient flavor.
    pub fn evaluate(&self, x: &S) -> S {
        let two_x = S::from_i64(2) * x.clone();
        let (mut b1, mut b2) = (S::zero(), S::zero());
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = two_x.clone() * b1.clone() - b2 + c.clone();
            b2 = b1;
            b1 = b0;
        }
        match self.coeffs.first() {
            Some(c0) => c0.clone() + x.clone() * b1 - b2,
            None => S::zero(),
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let (mut b1, mut b2) = (0.0, 0.0);
        for c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + c.to_f64();
            b2 = b1;
            b1 = b0;
        }
        match self.coeffs.first() {
            Some(c0) => c0.to_f64() + x * b1 - b2,
            None => 0.0,
        }
    }

    pub fn to_float(&self) -> ChebSeries<f64> {
        ChebSeries::new(self.coeffs.iter().map(Scalar::to_f64).collect())
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "basis": "chebyshev-T",
            "coeffs": self.coeffs.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        if value.get("basis").and_then(Value::as_str) != Some("chebyshev-T") {
            return Err(Error::Parse("expected basis \"chebyshev-T\"".into()));
        }
        let coeffs = value
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing coeffs array".into()))?
            .iter()
            .map(S::from_json)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(coeffs))
    }
}

/// Exact power-basis coefficients of `T_n` from `T_{n+1} = 2x T_n - T_{n-1}`.
pub fn t_monomial(n: usize) -> MonomialPoly {
    let mut prev = MonomialPoly::new(vec![BigRational::one()]);
    if n == 0 {
        return prev;
    }
    let (zero, two) = (BigRational::zero(), BigRational::from_i64(2));
    let mut cur = MonomialPoly::new(vec![BigRational::zero(), BigRational::one()]);
    for _ in 1..n {
        let next = cur
            .mul_linear(&zero, &two)
            .add(&prev.scale(&BigRational::from_i64(-1)));
        prev = cur;
        cur = next;
    }
    cur
}

/// Power basis to Chebyshev basis, using `x T_j = (T_{j+1} + T_{|j-1|}) / 2`.
pub fn cheb_from_monomial<S: Scalar>(p: &MonomialPoly<S>) -> ChebSeries<S> {
    let half = S::from_ratio(1, 2);
    let mut power = vec![S::one()]; // x^k in the T basis
    let mut out: Vec<S> = Vec::new();
    for (k, a) in p.coeffs().iter().enumerate() {
        if k > 0 {
            let mut next = vec![S::zero(); power.len() + 1];
            for (j, b) in power.iter().enumerate() {
                if j == 0 {
                    next[1] = next[1].clone() + b.clone();
                } else {
                    let h = half.clone() * b.clone();
                    next[j + 1] = next[j + 1].clone() + h.clone();
                    next[j - 1] = next[j - 1].clone() + h;
                }
            }
            power = next;
        }
        let term: Vec<S> = power.iter().map(|b| a.clone() * b.clone()).collect();
        out = zip_add(&out, &term);
    }
    ChebSeries::new(out)
}

/// Chebyshev basis to power basis.
pub fn monomial_from_cheb<S: Scalar>(c: &ChebSeries<S>) -> MonomialPoly<S> {
    c.coeffs()
        .iter()
        .enumerate()
        .fold(MonomialPoly::zero(), |acc, (k, ck)| {
            let t = t_monomial(k);
            let t = MonomialPoly::new(t.coeffs().iter().map(S::from_rational).collect());
            acc.add(&t.scale(ck))
        })
}

/// Bernstein form of `p(2x - 1)` on `[0, 1]`, in degree `max(degree, deg p)`.
pub fn shifted_bernstein<S: Scalar>(series: &ChebSeries<S>, degree: usize) -> BernsteinPoly<S> {
    let power = monomial_from_cheb(series).compose_affine(&S::from_i64(2), &S::from_i64(-1));
    BernsteinPoly::from_power_basis(power.coeffs(), degree)
}

/// Bernstein coefficients of `T_n(2x - 1)`:
/// `[4^n (n!)^2 / (2n)!] (-1)^{n-k} C(n-1/2, k) C(n-1/2, n-k) / C(n, k)`.
pub fn t_in_bernstein(n: usize) -> BernsteinPoly<BigRational> {
    let scale = central_ratio(n as u64).recip();
    let coeffs = (0..=n)
        .map(|k| {
            let eta = half_binomial(n as u64, k as i64) * half_binomial(n as u64, (n - k) as i64)
                / binomial(n as u64, k as i64);
            &scale * sign((n - k) as i64) * eta
        })
        .collect();
    BernsteinPoly::new(coeffs).expect("n + 1 coefficients")
}

/// `int_0^1 (x - x^2)^{-1/2} T_m(2x-1) T_n(2x-1) dx` by Gauss-Chebyshev quadrature.
pub fn cheb_orthogonality(m: usize, n: usize) -> f64 {
    quadrature_01(
        |x| eval_t(m, to_symmetric(x)) * eval_t(n, to_symmetric(x)),
        m + n,
    )
}
