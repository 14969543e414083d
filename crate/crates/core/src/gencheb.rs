//! Chebyshev-type polynomials of the first kind with point masses `M` at
//! `x = -1` and `N` at `x = +1`:
//!
//! ```text
//! T_n^{(M,N)} = c_n T_n + M Q_n + N R_n + M N S_n,   c_n = (2n)! / (2^{2n} (n!)^2)
//! ```
//!
//! with the correction polynomials `Q_n`, `R_n`, `S_n` built from `T_n` and
//! its derivatives. Also: the Chebyshev expansion coefficients of the
//! corrections (`q_k`, `r_k`, `s_k`), their mass-weighted combination
//! `lambda_k`, the `eta_{i,n}` table and the Bernstein representation.

use std::sync::OnceLock;

use num_traits::One;
use serde_json::Value;

use crate::bernstein::BernsteinPoly;
use crate::chebyshev::{cheb_from_monomial, t_monomial, ChebSeries, MonomialPoly};
use crate::error::{Error, Result};
use crate::exact::{binomial, central_ratio, factorial, qr_prefactor, sign};
use crate::scalar::{int, rat, BigRational, Scalar};

/// Nonnegative endpoint masses: `left` (`M`) sits at `x = -1`, `right` (`N`) at `x = +1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MassParams<S> {
    left: S,
    right: S,
}

impl<S: Scalar> MassParams<S> {
    pub fn new(left: S, right: S) -> Result<Self> {
        if left.is_negative() || right.is_negative() {
            return Err(Error::NegativeMass {
                left: left.to_json().to_string(),
                right: right.to_json().to_string(),
            });
        }
        Ok(MassParams { left, right })
    }

    pub fn none() -> Self {
        MassParams {
            left: S::zero(),
            right: S::zero(),
        }
    }

    pub fn left(&self) -> &S {
        &self.left
    }

    pub fn right(&self) -> &S {
        &self.right
    }

    pub fn product(&self) -> S {
        self.left.clone() * self.right.clone()
    }

    /// `(N, M)`.
    pub fn swapped(&self) -> Self {
        MassParams {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    pub fn to_float(&self) -> MassParams<f64> {
        MassParams {
            left: self.left.to_f64(),
            right: self.right.to_f64(),
        }
    }
}

impl MassParams<BigRational> {
    pub fn from_ratios(left: (i64, i64), right: (i64, i64)) -> Result<Self> {
        MassParams::new(rat(left.0, left.1), rat(right.0, right.1))
    }
}

fn lift<S: Scalar>(series: &ChebSeries) -> ChebSeries<S> {
    ChebSeries::new(series.coeffs().iter().map(S::from_rational).collect())
}

// prefactor * [n^2 T_n + (a + b x) T_n']
fn correction(n: usize, prefactor: BigRational, a: BigRational, b: BigRational) -> ChebSeries {
    if n == 0 {
        return ChebSeries::zero();
    }
    let t = t_monomial(n);
    let bracket = t
        .scale(&int(n as i64 * n as i64))
        .add(&t.derivative().mul_linear(&a, &b));
    cheb_from_monomial(&bracket.scale(&prefactor))
}

/// `Q_n = [(2n)! / (2^{2n-1} (n!)^3)] [n^2 T_n - (x-1)/2 T_n']`, zero at `n = 0`.
pub fn q_poly(n: usize) -> ChebSeries {
    if n == 0 {
        return ChebSeries::zero();
    }
    correction(n, qr_prefactor(n as u64), rat(1, 2), rat(-1, 2))
}

/// `R_n = [(2n)! / (2^{2n-1} (n!)^3)] [n^2 T_n - (x+1)/2 T_n']`, zero at `n = 0`.
pub fn r_poly(n: usize) -> ChebSeries {
    if n == 0 {
        return ChebSeries::zero();
    }
    correction(n, qr_prefactor(n as u64), rat(-1, 2), rat(-1, 2))
}

/// `S_n = [(2n)! / (2^{2n-2} (n!)^3 (n-1)!)] [n^2 T_n - x T_n']`, zero at `n = 0`.
pub fn s_poly(n: usize) -> ChebSeries {
    if n == 0 {
        return ChebSeries::zero();
    }
    let prefactor = qr_prefactor(n as u64) * int(2) / int(factorial(n as u64 - 1));
    correction(n, prefactor, int(0), int(-1))
}

/// `S_n` through `(x^2 - 1) T_n'' = n^2 T_n - x T_n'`:
/// `[4 (2n-1)!! / (n! (n-1)! (2n)!!)] (x^2 - 1) T_n''`.
pub fn s_poly_second_derivative_form(n: usize) -> ChebSeries {
    if n == 0 {
        return ChebSeries::zero();
    }
    let prefactor = int(4) * central_ratio(n as u64)
        / int(factorial(n as u64) * factorial(n as u64 - 1));
    let second = t_monomial(n).derivative().derivative();
    let poly: MonomialPoly = second
        .mul_linear(&int(-1), &int(1))
        .mul_linear(&int(1), &int(1))
        .scale(&prefactor);
    cheb_from_monomial(&poly)
}

/// `T_n^{(M,N)}` with its Chebyshev series and a lazily built Bernstein form.
#[derive(Debug, Clone)]
pub struct GenChebPoly<S = BigRational> {
    degree: usize,
    params: MassParams<S>,
    series: ChebSeries<S>,
    bernstein: OnceLock<BernsteinPoly<S>>,
}

impl<S: Scalar> GenChebPoly<S> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn params(&self) -> &MassParams<S> {
        &self.params
    }

    pub fn series(&self) -> &ChebSeries<S> {
        &self.series
    }

    /// Degree-`n` Bernstein form of `T_n^{(M,N)}(2x - 1)` on `[0, 1]`.
    pub fn bernstein(&self) -> &BernsteinPoly<S> {
        self.bernstein
            .get_or_init(|| bernstein_form(self.degree, &self.params))
    }

    /// Value on `[-1, 1]`.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.series.eval_f64(x)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "n": self.degree,
            "M": self.params.left.to_json(),
            "N": self.params.right.to_json(),
            "cheb_series": self.series.coeffs().iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "bernstein": self.bernstein().to_json(),
        })
    }
}

/// Builds `c_n T_n + M Q_n + N R_n + M N S_n`.
pub fn gen_cheb<S: Scalar>(n: usize, params: &MassParams<S>) -> GenChebPoly<S> {
    let lead = ChebSeries::single(n, S::from_rational(&central_ratio(n as u64)));
    let series = lead
        .add(&lift::<S>(&q_poly(n)).scale(&params.left))
        .add(&lift::<S>(&r_poly(n)).scale(&params.right))
        .add(&lift::<S>(&s_poly(n)).scale(&params.product()));
    GenChebPoly {
        degree: n,
        params: params.clone(),
        series,
        bernstein: OnceLock::new(),
    }
}

/// Chebyshev expansion coefficients of `Q_n`, `R_n`, `S_n` in the normalization
/// `X_n = sum_k [(2k)! x_k / (2^{2k} (k!)^2)] T_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoeffs {
    pub n: usize,
    pub q: Vec<BigRational>,
    pub r: Vec<BigRational>,
    pub s: Vec<BigRational>,
}

/// Projects `Q_n`, `R_n`, `S_n` onto `T_0..T_n` and divides entry `k` by `c_k`.
pub fn expansion_coeffs(n: usize) -> Result<ExpansionCoeffs> {
    if n == 0 {
        return Err(Error::BelowMinimum {
            what: "expansion degree",
            min: 1,
            value: 0,
        });
    }
    let normalize = |series: ChebSeries| -> Vec<BigRational> {
        (0..=n)
            .map(|k| series.coeff(k) / central_ratio(k as u64))
            .collect()
    };
    Ok(ExpansionCoeffs {
        n,
        q: normalize(q_poly(n)),
        r: normalize(r_poly(n)),
        s: normalize(s_poly(n)),
    })
}

/// `lambda_k = M q_k + N r_k + M N s_k`, `k = 0..=n`.
pub fn lambda_coeffs<S: Scalar>(n: usize, params: &MassParams<S>) -> Result<Vec<S>> {
    let e = expansion_coeffs(n)?;
    let mn = params.product();
    Ok((0..=n)
        .map(|k| {
            params.left.clone() * S::from_rational(&e.q[k])
                + params.right.clone() * S::from_rational(&e.r[k])
                + mn.clone() * S::from_rational(&e.s[k])
        })
        .collect())
}

/// `c_n T_n + sum_k c_k lambda_k T_k`, the series rebuilt from `lambda`.
pub fn series_from_lambda<S: Scalar>(n: usize, lambda: &[S]) -> ChebSeries<S> {
    let lead = ChebSeries::single(n, S::from_rational(&central_ratio(n as u64)));
    let rest = ChebSeries::new(
        lambda
            .iter()
            .enumerate()
            .map(|(k, l)| S::from_rational(&central_ratio(k as u64)) * l.clone())
            .collect(),
    );
    lead.add(&rest)
}

/// `eta_{i,n} = C(2n, n) C(2n, 2i) / (2^{2n} C(n, i))`.
pub fn eta(i: usize, n: usize) -> Result<BigRational> {
    if i > n {
        return Err(Error::IndexOutOfRange {
            index: i as i64,
            max: n,
        });
    }
    let (n64, i64_) = (n as u64, i as i64);
    Ok(central_ratio(n64) * binomial(2 * n64, 2 * i64_) / binomial(n64, i64_))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EtaTable {
    n: usize,
    values: Vec<BigRational>,
}

impl EtaTable {
    /// `eta_{0,n} = C(2n,n)/4^n`, then `eta_{i,n} = (2n-2i+1)/(2i-1) eta_{i-1,n}`.
    pub fn by_recurrence(n: usize) -> Self {
        let mut values = Vec::with_capacity(n + 1);
        values.push(central_ratio(n as u64));
        for i in 1..=n {
            let factor = rat((2 * n - 2 * i + 1) as i64, (2 * i - 1) as i64);
            let next = &values[i - 1] * factor;
            values.push(next);
        }
        EtaTable { n, values }
    }

    pub fn closed_form(n: usize) -> Self {
        let values = (0..=n).map(|i| eta(i, n).expect("i <= n")).collect();
        EtaTable { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }
}

pub fn eta_table(n: usize) -> EtaTable {
    EtaTable::by_recurrence(n)
}

// sum_j (-1)^{k-j} eta_{j,k} B_j^k, which equals c_k T_k(2x - 1).
fn signed_eta_block(k: usize) -> BernsteinPoly<BigRational> {
    let table = eta_table(k);
    let coeffs = table
        .values()
        .iter()
        .enumerate()
        .map(|(j, e)| sign((k - j) as i64) * e)
        .collect();
    BernsteinPoly::new(coeffs).expect("k + 1 coefficients")
}

fn lift_bernstein<S: Scalar>(p: &BernsteinPoly<BigRational>) -> BernsteinPoly<S> {
    BernsteinPoly::new(p.coeffs().iter().map(S::from_rational).collect())
        .expect("nonempty")
}

fn bernstein_form<S: Scalar>(n: usize, params: &MassParams<S>) -> BernsteinPoly<S> {
    let mut total = lift_bernstein::<S>(&signed_eta_block(n));
    if n == 0 {
        return total;
    }
    let lambda = lambda_coeffs(n, params).expect("n >= 1");
    for (k, l) in lambda.iter().enumerate() {
        if l.is_zero() {
            continue;
        }
        let block = signed_eta_block(k)
            .degree_elevate(n)
            .expect("k <= n");
        total = total.add(&lift_bernstein::<S>(&block).scale(l));
    }
    total
}

/// Bernstein representation of `T_n^{(M,N)}(2x - 1)` in degree `n`:
///
/// ```text
/// sum_i (-1)^{n-i} eta_{i,n} B_i^n  +  sum_k lambda_k sum_j (-1)^{k-j} eta_{j,k} B_j^k
/// ```
///
/// with each inner degree-`k` block elevated to degree `n` before summing.
pub fn gen_cheb_bernstein<S: Scalar>(n: usize, params: &MassParams<S>) -> BernsteinPoly<S> {
    bernstein_form(n, params)
}

/// The mass pairs every orthogonality and consistency check runs over.
pub fn standard_mass_set() -> Vec<MassParams<BigRational>> {
    [((0, 1), (0, 1)), ((1, 1), (0, 1)), ((0, 1), (1, 1)), ((1, 1), (1, 1)), ((5, 2), (1, 3))]
        .into_iter()
        .map(|(l, r)| MassParams::from_ratios(l, r).expect("nonnegative"))
        .collect()
}

/// `T_n^{(M,N)}` series checked against `(-1)^n T_n^{(N,M)}(-x)`.
pub fn symmetry_holds(n: usize, params: &MassParams<BigRational>) -> bool {
    let lhs = gen_cheb(n, params);
    let rhs = gen_cheb(n, &params.swapped()).series().reflect();
    let rhs = if n % 2 == 1 {
        rhs.scale(&-BigRational::one())
    } else {
        rhs
    };
    *lhs.series() == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chebyshev::{eval_t, shifted_bernstein, to_symmetric};
    use crate::exact::{double_factorial, half_binomial};
    use num_traits::Zero;

    fn endpoint_factor(n: usize) -> BigRational {
        // 2 (2n-1)!! / ((n-1)! (2n)!!)
        BigRational::new(
            double_factorial(2 * n as i64 - 1).unwrap() * 2,
            factorial(n as u64 - 1) * double_factorial(2 * n as i64).unwrap(),
        )
    }

    #[test]
    fn corrections_vanish_at_degree_zero() {
        assert!(q_poly(0).is_zero());
        assert!(r_poly(0).is_zero());
        assert!(s_poly(0).is_zero());
    }

    #[test]
    fn q_at_degree_one() {
        // prefactor 2!/(2^1 1!^3) = 1: Q_1 = x - (x-1)/2 = (x+1)/2
        let via_monomial = cheb_from_monomial(&MonomialPoly::new(vec![rat(1, 2), rat(1, 2)]));
        assert_eq!(q_poly(1), via_monomial);
        assert_eq!(q_poly(1).coeffs(), &[rat(1, 2), rat(1, 2)]);
        assert_eq!(r_poly(1).coeffs(), &[rat(-1, 2), rat(1, 2)]);
    }

    #[test]
    fn endpoint_values() {
        // (x - 1) kills the derivative term at x = 1, so Q_n(1) = K_n n^2 T_n(1).
        // The published shortcut 2(2n-1)!!/((n-1)!(2n)!!) T_n(1) is n times smaller.
        for n in 1..=8u64 {
            let tm1 = if n % 2 == 0 { int(1) } else { int(-1) };
            let direct = qr_prefactor(n) * int(n * n);
            assert_eq!(q_poly(n as usize).evaluate(&int(1)), direct);
            assert_eq!(r_poly(n as usize).evaluate(&int(-1)), &direct * &tm1);
            assert_eq!(direct, endpoint_factor(n as usize) * int(n));
        }
    }

    #[test]
    fn q_and_r_mirror_each_other() {
        for n in 0..=10 {
            let mirrored = q_poly(n).reflect();
            let mirrored = if n % 2 == 1 {
                mirrored.scale(&int(-1))
            } else {
                mirrored
            };
            assert_eq!(r_poly(n), mirrored, "n={n}");
        }
    }

    #[test]
    fn s_forms_agree_and_have_parity() {
        for n in 0..=10 {
            assert_eq!(s_poly(n), s_poly_second_derivative_form(n), "n={n}");
            let s = s_poly(n);
            let flipped = if n % 2 == 1 {
                s.reflect().scale(&int(-1))
            } else {
                s.reflect()
            };
            assert_eq!(s, flipped);
        }
    }

    #[test]
    fn gen_cheb_examples() {
        let none = MassParams::<BigRational>::none();
        for n in 0..=10 {
            let p = gen_cheb(n, &none);
            assert!((0..n).all(|k| p.series().coeff(k).is_zero()));
            let expected = BigRational::new(
                double_factorial(2 * n as i64 - 1).unwrap(),
                double_factorial(2 * n as i64).unwrap(),
            );
            assert_eq!(p.series().coeff(n), expected);
        }
        let masses = MassParams::from_ratios((7, 3), (2, 1)).unwrap();
        assert_eq!(gen_cheb(0, &masses).series().coeffs(), &[int(1)]);
        assert_eq!(gen_cheb(5, &masses).degree(), 5);
        assert_eq!(gen_cheb(5, &masses).series().degree(), 5);
    }

    #[test]
    fn symmetry_relation() {
        let pairs = [((1, 1), (0, 1)), ((0, 1), (1, 1)), ((2, 1), (3, 1))];
        for n in 0..=10 {
            for (l, r) in pairs {
                assert!(symmetry_holds(n, &MassParams::from_ratios(l, r).unwrap()));
            }
        }
    }

    #[test]
    fn rejects_negative_masses() {
        assert!(MassParams::new(rat(-1, 2), int(0)).is_err());
        assert!(MassParams::new(0.0, -1e-9).is_err());
    }

    #[test]
    fn expansion_coeffs_rebuild_series() {
        assert!(expansion_coeffs(0).is_err());
        for n in 1..=10 {
            let e = expansion_coeffs(n).unwrap();
            let rebuild = |xs: &[BigRational]| {
                ChebSeries::new(
                    xs.iter()
                        .enumerate()
                        .map(|(k, x)| central_ratio(k as u64) * x)
                        .collect(),
                )
            };
            assert_eq!(rebuild(&e.q), q_poly(n));
            assert_eq!(rebuild(&e.r), r_poly(n));
            assert_eq!(rebuild(&e.s), s_poly(n));
        }
    }

    #[test]
    fn lambda_examples() {
        let zero = lambda_coeffs(4, &MassParams::<BigRational>::none()).unwrap();
        assert!(zero.iter().all(|l| l.is_zero()));
        let only_left = lambda_coeffs(4, &MassParams::from_ratios((1, 1), (0, 1)).unwrap()).unwrap();
        assert_eq!(only_left, expansion_coeffs(4).unwrap().q);
    }

    #[test]
    fn lambda_reproduces_series() {
        for params in standard_mass_set() {
            for n in 1..=8 {
                let lambda = lambda_coeffs(n, &params).unwrap();
                assert_eq!(&series_from_lambda(n, &lambda), gen_cheb(n, &params).series());
            }
        }
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(0, 2).unwrap(), rat(3, 8));
        assert_eq!(eta(1, 2).unwrap(), rat(9, 8));
        assert_eq!(eta_table(2).values()[1], rat(9, 8));
        for n in 0..=12 {
            assert_eq!(eta(n, n).unwrap(), eta(0, n).unwrap());
        }
        assert!(eta(3, 2).is_err());
    }

    #[test]
    fn eta_recurrence_closed_form_and_definition_agree() {
        for n in 0..=20usize {
            let rec = EtaTable::by_recurrence(n);
            assert_eq!(rec, EtaTable::closed_form(n));
            assert_eq!(rec.values()[0], binomial(2 * n as u64, n as i64) / int(num_bigint::BigInt::one() << (2 * n)));
            for i in 0..=n {
                let def = half_binomial(n as u64, i as i64) * half_binomial(n as u64, (n - i) as i64)
                    / binomial(n as u64, i as i64);
                assert_eq!(rec.values()[i], def);
            }
        }
    }

    #[test]
    fn bernstein_form_examples() {
        let any = MassParams::from_ratios((3, 1), (1, 2)).unwrap();
        assert_eq!(gen_cheb_bernstein(0, &any).coeffs(), &[int(1)]);
        let plain = gen_cheb_bernstein(2, &MassParams::<BigRational>::none());
        assert_eq!(plain.coeffs(), &[rat(3, 8), rat(-9, 8), rat(3, 8)]);
    }

    #[test]
    fn bernstein_form_equals_shifted_series() {
        for params in standard_mass_set() {
            for n in 0..=8 {
                let p = gen_cheb(n, &params);
                assert_eq!(p.bernstein(), &shifted_bernstein(p.series(), n), "n={n}");
            }
        }
    }

    #[test]
    fn float_flavor_tracks_exact() {
        let exact = MassParams::from_ratios((5, 2), (1, 3)).unwrap();
        let float = exact.to_float();
        for n in 0..=8 {
            let e = gen_cheb(n, &exact);
            let f = gen_cheb(n, &float);
            let fb = f.bernstein().clone();
            for j in 0..=20 {
                let x = j as f64 / 20.0;
                let want = e.eval_f64(to_symmetric(x));
                assert!((fb.evaluate(&x) - want).abs() < 1e-10 * want.abs().max(1.0));
                assert!((f.eval_f64(to_symmetric(x)) - want).abs() < 1e-10 * want.abs().max(1.0));
            }
        }
        // no masses: c_n T_n
        let p = gen_cheb(6, &MassParams::<f64>::none());
        let c6 = central_ratio(6).to_f64();
        assert!((p.eval_f64(0.3) - c6 * eval_t(6, 0.3)).abs() < 1e-14);
    }

    #[test]
    fn json_shape() {
        let p = gen_cheb(1, &MassParams::from_ratios((1, 1), (0, 1)).unwrap());
        let v = p.to_json();
        assert_eq!(v["n"], 1);
        assert_eq!(v["M"], "1");
        assert_eq!(v["N"], "0");
        assert_eq!(v["cheb_series"], serde_json::json!(["1/2", "1"]));
        assert_eq!(v["bernstein"]["flavor"], "rational");
    }
}
