//! Bernstein basis `B_k^n(x) = C(n,k) x^k (1-x)^{n-k}` on `[0, 1]`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::binomial;
use crate::scalar::{Flavor, Scalar};

/// `B_k^n(x)`, built row by row from `B_k^n = (1-x) B_k^{n-1} + x B_{k-1}^{n-1}`.
///
/// `x` outside `[0, 1]` is accepted (extrapolation) but loses the
/// stability guarantees of the interval.
pub fn basis_value<S: Scalar>(n: usize, k: usize, x: &S) -> Result<S> {
    if k > n {
        return Err(Error::IndexOutOfRange {
            index: k as i64,
            max: n,
        });
    }
    let one_minus = S::one() - x.clone();
    let mut row = vec![S::zero(); n + 1];
    row[0] = S::one();
    for j in 1..=n {
        for i in (0..=j).rev() {
            let keep = if i < j {
                one_minus.clone() * row[i].clone()
            } else {
                S::zero()
            };
            let shift = if i > 0 {
                x.clone() * row[i - 1].clone()
            } else {
                S::zero()
            };
            row[i] = keep + shift;
        }
    }
    Ok(row.swap_remove(k))
}

/// A polynomial `sum_k c_k B_k^n(x)` of fixed degree `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> BernsteinPoly<S> {
    /// Degree is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        Ok(BernsteinPoly { coeffs })
    }

    pub fn zero(degree: usize) -> Self {
        BernsteinPoly {
            coeffs: vec![S::zero(); degree + 1],
        }
    }

    /// The single basis element `B_k^n`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::IndexOutOfRange {
                index: k as i64,
                max: n,
            });
        }
        let mut p = Self::zero(n);
        p.coeffs[k] = S::one();
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// De Casteljau: repeated linear interpolation of the coefficients.
    pub fn evaluate(&self, x: &S) -> S {
        let one_minus = S::one() - x.clone();
        let mut work = self.coeffs.clone();
        for level in (1..work.len()).rev() {
            for j in 0..level {
                work[j] = one_minus.clone() * work[j].clone() + x.clone() * work[j + 1].clone();
            }
        }
        work.swap_remove(0)
    }

    /// Rewrites the polynomial in the degree-`target` basis without changing it.
    ///
    /// Each `B_k^r` is spread over `B_i^n`, `i = k..=n-r+k`, with weights
    /// `C(r,k) C(n-r,i-k) / C(n,i)`.
    pub fn degree_elevate(&self, target: usize) -> Result<Self> {
        let r = self.degree();
        if target < r {
            return Err(Error::DegreeDecrease {
                source_degree: r,
                target,
            });
        }
        if target == r {
            return Ok(self.clone());
        }
        let n = target as u64;
        let mut out = vec![S::zero(); target + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let head = binomial(r as u64, k as i64);
            for (i, slot) in out.iter_mut().enumerate().skip(k).take(target - r + 1) {
                let w = &head * binomial(n - r as u64, (i - k) as i64) / binomial(n, i as i64);
                *slot = slot.clone() + S::from_rational(&w) * c.clone();
            }
        }
        Ok(BernsteinPoly { coeffs: out })
    }

    /// Coefficients `n (c_{k+1} - c_k)` in degree `n - 1`; a constant maps to
    /// the degree-0 zero polynomial.
    pub fn derivative(&self) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::zero(0);
        }
        let scale = S::from_i64(n as i64);
        let coeffs = self
            .coeffs
            .windows(2)
            .map(|w| scale.clone() * (w[1].clone() - w[0].clone()))
            .collect();
        BernsteinPoly { coeffs }
    }

    /// `int_0^1 p(x) dx = (sum c_k) / (n + 1)`.
    pub fn integral_01(&self) -> S {
        let sum = self
            .coeffs
            .iter()
            .cloned()
            .fold(S::zero(), |acc, c| acc + c);
        sum * S::from_ratio(1, self.coeffs.len() as i64)
    }

    /// Converts `sum_i a_i x^i` on `[0, 1]` into the degree-`degree` Bernstein basis.
    /// `degree` is raised to the length of `power` when that is larger.
    pub fn from_power_basis(power: &[S], degree: usize) -> Self {
        let n = degree.max(power.len().saturating_sub(1));
        let coeffs = (0..=n)
            .map(|k| {
                power
                    .iter()
                    .enumerate()
                    .take(k + 1)
                    .fold(S::zero(), |acc, (i, a)| {
                        let w = binomial(k as u64, i as i64) / binomial(n as u64, i as i64);
                        acc + S::from_rational(&w) * a.clone()
                    })
            })
            .collect();
        BernsteinPoly { coeffs }
    }

    pub fn to_float(&self) -> BernsteinPoly<f64> {
        BernsteinPoly {
            coeffs: self.coeffs.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub fn scale(&self, factor: &S) -> Self {
        BernsteinPoly {
            coeffs: self.coeffs.iter().map(|c| factor.clone() * c.clone()).collect(),
        }
    }

    /// Sum of two polynomials; the lower-degree one is elevated first.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.degree().max(other.degree());
        let a = self.degree_elevate(n).expect("n >= degree");
        let b = other.degree_elevate(n).expect("n >= degree");
        BernsteinPoly {
            coeffs: a
                .coeffs
                .into_iter()
                .zip(b.coeffs)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "degree": self.degree(),
            "coeffs": self.coeffs.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "flavor": S::FLAVOR,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let wire: WireBernstein = serde_json::from_value(value.clone())
            .map_err(|e| Error::Parse(e.to_string()))?;
        if wire.flavor != S::FLAVOR {
            return Err(Error::FlavorMismatch {
                expected: S::FLAVOR.as_str(),
                found: wire.flavor.as_str().to_string(),
            });
        }
        if wire.coeffs.len() != wire.degree + 1 {
            return Err(Error::Parse(format!(
                "degree {} needs {} coefficients, found {}",
                wire.degree,
                wire.degree + 1,
                wire.coeffs.len()
            )));
        }
        let coeffs = wire
            .coeffs
            .iter()
            .map(S::from_json)
            .collect::<Result<Vec<_>>>()?;
        BernsteinPoly::new(coeffs)
    }
}

#[derive(Serialize, Deserialize)]
struct WireBernstein {
    degree: usize,
    coeffs: Vec<Value>,
    flavor: Flavor,
}

impl<S: Scalar> Serialize for BernsteinPoly<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for BernsteinPoly<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        BernsteinPoly::from_json(&value).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, BigRational};
    use num_traits::Pow;
    use proptest::prelude::*;

    fn closed_form(n: u64, k: u64, x: &BigRational) -> BigRational {
        binomial(n, k as i64) * Pow::pow(x, k) * Pow::pow(&(int(1) - x), n - k)
    }

    fn sample_points() -> Vec<BigRational> {
        (0..20).map(|j| rat(2 * j + 1, 41)).collect()
    }

    #[test]
    fn basis_value_examples() {
        for n in 0..6 {
            assert_eq!(basis_value(n, 0, &int(0)).unwrap(), int(1));
        }
        assert_eq!(basis_value(2, 1, &rat(1, 2)).unwrap(), rat(1, 2));
        let x = rat(3, 10);
        assert_eq!(basis_value(4, 2, &x).unwrap(), rat(2646, 10000));
        assert!((basis_value(4, 2, &0.3f64).unwrap() - 0.2646).abs() < 1e-15);
        assert!(basis_value(3, 4, &0.5f64).is_err());
    }

    #[test]
    fn recurrence_matches_closed_form() {
        for n in 0..=12u64 {
            for k in 0..=n {
                for x in sample_points() {
                    assert_eq!(basis_value(n as usize, k as usize, &x).unwrap(), closed_form(n, k, &x));
                }
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let ones = BernsteinPoly::new(vec![1.0f64; 7]).unwrap();
        for j in 0..=10 {
            assert!((ones.evaluate(&(j as f64 / 10.0)) - 1.0).abs() < 1e-15);
        }
        let lin = BernsteinPoly::new(vec![0.0f64, 1.0]).unwrap();
        assert_eq!(lin.evaluate(&0.25), 0.25);
        let p = BernsteinPoly::new(vec![int(1), int(0), int(2)]).unwrap();
        assert_eq!(p.evaluate(&rat(1, 2)), rat(3, 4));
    }

    #[test]
    fn partition_of_unity_and_symmetry_exact() {
        for n in 0..=15usize {
            for x in sample_points() {
                let sum = (0..=n).fold(int(0), |acc, k| acc + basis_value(n, k, &x).unwrap());
                assert_eq!(sum, int(1));
                let mirror = int(1) - x.clone();
                for k in 0..=n {
                    assert_eq!(
                        basis_value(n, k, &x).unwrap(),
                        basis_value(n, n - k, &mirror).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn maximum_at_i_over_n() {
        for n in 2..=10usize {
            for i in 1..n {
                let (mut best_x, mut best) = (0.0, f64::MIN);
                for j in 0..=10_000 {
                    let x = j as f64 * 1e-4;
                    let v = basis_value(n, i, &x).unwrap();
                    if v > best {
                        best = v;
                        best_x = x;
                    }
                }
                let target = i as f64 / n as f64;
                assert!((best_x - target).abs() <= 1e-4 + 1e-12, "n={n} i={i} at {best_x}");
                let (nf, fi) = (n as f64, i as f64);
                let predicted = binomial(n as u64, i as i64).to_f64()
                    * fi.powi(i as i32)
                    * (nf - fi).powi((n - i) as i32)
                    / nf.powi(n as i32);
                assert!((basis_value(n, i, &target).unwrap() - predicted).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degree_elevate_examples() {
        let c = BernsteinPoly::new(vec![int(5)]).unwrap();
        assert_eq!(c.degree_elevate(3).unwrap().coeffs(), &[int(5), int(5), int(5), int(5)]);
        let lin = BernsteinPoly::new(vec![int(0), int(1)]).unwrap();
        let up = lin.degree_elevate(2).unwrap();
        assert_eq!(up.coeffs(), &[int(0), rat(1, 2), int(1)]);
        for j in 0..10 {
            let x = rat(j, 9);
            assert_eq!(up.evaluate(&x), lin.evaluate(&x));
        }
        let x = rat(37, 100);
        let p = BernsteinPoly::new(vec![int(3), rat(-1, 2), int(7), int(0)]).unwrap();
        assert_eq!(p.degree_elevate(9).unwrap().evaluate(&x), p.evaluate(&x));
        assert!(p.degree_elevate(2).is_err());
    }

    #[test]
    fn elevating_basis_elements_preserves_values() {
        for n in 0..=12usize {
            for r in 0..=n {
                for k in 0..=r {
                    let b = BernsteinPoly::<BigRational>::basis(r, k).unwrap();
                    let up = b.degree_elevate(n).unwrap();
                    for x in sample_points() {
                        assert_eq!(up.evaluate(&x), b.evaluate(&x));
                    }
                }
            }
        }
    }

    #[test]
    fn float_elevation_chain_tracks_exact() {
        let exact = BernsteinPoly::new(vec![int(2), rat(-3, 7), rat(5, 11), int(1)]).unwrap();
        let mut e = exact.clone();
        let mut f = exact.to_float();
        for step in 1..=10 {
            e = e.degree_elevate(3 + step).unwrap();
            f = f.degree_elevate(3 + step).unwrap();
        }
        for (a, b) in e.coeffs().iter().zip(f.coeffs()) {
            let a = a.to_f64();
            assert!((a - b).abs() <= 1e-13 * a.abs().max(1.0));
        }
    }

    #[test]
    fn derivative_examples() {
        let c = BernsteinPoly::new(vec![int(4)]).unwrap();
        assert_eq!(c.derivative(), BernsteinPoly::zero(0));
        let lin = BernsteinPoly::new(vec![int(0), int(1)]).unwrap();
        assert_eq!(lin.derivative().coeffs(), &[int(1)]);
        let sq = BernsteinPoly::new(vec![int(0), int(0), int(1)]).unwrap();
        let d = sq.derivative();
        assert_eq!(d.coeffs(), &[int(0), int(2)]);
        for j in 0..5 {
            let x = rat(j, 4);
            assert_eq!(d.evaluate(&x), int(2) * x);
        }
    }

    #[test]
    fn integral_examples() {
        for n in 0..=20usize {
            for k in 0..=n {
                let b = BernsteinPoly::<BigRational>::basis(n, k).unwrap();
                assert_eq!(b.integral_01(), rat(1, n as i64 + 1));
            }
        }
        let ones = BernsteinPoly::new(vec![int(1); 5]).unwrap();
        assert_eq!(ones.integral_01(), int(1));
        let sq = BernsteinPoly::new(vec![int(0), int(0), int(1)]).unwrap();
        assert_eq!(sq.integral_01(), rat(1, 3));
    }

    #[test]
    fn power_basis_conversion() {
        // 8x^2 - 8x + 1 in degree 2
        let p = BernsteinPoly::from_power_basis(&[int(1), int(-8), int(8)], 2);
        assert_eq!(p.coeffs(), &[int(1), int(-3), int(1)]);
        let q = BernsteinPoly::from_power_basis(&[int(1), int(-8), int(8)], 5);
        for x in sample_points() {
            assert_eq!(q.evaluate(&x), p.evaluate(&x));
        }
    }

    #[test]
    fn json_shape() {
        let p = BernsteinPoly::new(vec![rat(1, 2), int(-3)]).unwrap();
        let v = p.to_json();
        assert_eq!(v, serde_json::json!({"degree": 1, "coeffs": ["1/2", "-3"], "flavor": "rational"}));
        assert!(BernsteinPoly::<f64>::from_json(&v).is_err());
        let bad = serde_json::json!({"degree": 2, "coeffs": ["1"], "flavor": "rational"});
        assert!(BernsteinPoly::<BigRational>::from_json(&bad).is_err());
    }

    fn small_rational() -> impl Strategy<Value = BigRational> {
        (-1000i64..1000, 1i64..50).prop_map(|(p, q)| rat(p, q))
    }

    proptest! {
        #[test]
        fn rational_json_round_trip(coeffs in prop::collection::vec(small_rational(), 1..12)) {
            let p = BernsteinPoly::new(coeffs).unwrap();
            let text = serde_json::to_string(&p).unwrap();
            let back: BernsteinPoly<BigRational> = serde_json::from_str(&text).unwrap();
            prop_assert_eq!(back, p);
        }

        #[test]
        fn float_json_round_trip(coeffs in prop::collection::vec(-1e6f64..1e6, 1..12)) {
            let p = BernsteinPoly::new(coeffs).unwrap();
            let text = serde_json::to_string(&p).unwrap();
            let back: BernsteinPoly<f64> = serde_json::from_str(&text).unwrap();
            prop_assert!(back.coeffs().iter().zip(p.coeffs()).all(|(a, b)| a.to_bits() == b.to_bits()));
        }

        #[test]
        fn derivative_integrates_to_endpoint_difference(coeffs in prop::collection::vec(small_rational(), 1..10)) {
            let p = BernsteinPoly::new(coeffs).unwrap();
            let lhs = p.derivative().integral_01();
            let rhs = p.evaluate(&int(1)) - p.evaluate(&int(0));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn convex_hull(coeffs in prop::collection::vec(-100.0f64..100.0, 1..15), x in 0.0f64..=1.0) {
            let p = BernsteinPoly::new(coeffs.clone()).unwrap();
            let lo = coeffs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = coeffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let v = p.evaluate(&x);
            prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
        }

        #[test]
        fn float_partition_of_unity(n in 0usize..=20, x in 0.0f64..=1.0) {
            let sum: f64 = (0..=n).map(|k| basis_value(n, k, &x).unwrap()).sum();
            prop_assert!((sum - 1.0).abs() < 1e-14);
        }
    }
}
