//! Exact combinatorial kernel: binomials, (double) factorials, half-integer
//! factorials and Beta values at half-integer arguments.
//!
//! Half-integer factorials and Beta values are not rational; they are carried
//! as [`ScaledPi`], a rational multiple of `pi^(h/2)` with `h` in `{0, 1, 2}`.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{int, BigRational};

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `n! / (k! (n-k)!)`, zero when `k` is outside `0..=n`.
pub fn binomial(n: u64, k: i64) -> BigRational {
    BigRational::from_integer(binomial_int(n, k))
}

pub(crate) fn binomial_int(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// `m (m-2) (m-4) ...` down to 2 or 1, with `0!! = (-1)!! = 1`.
pub fn double_factorial(m: i64) -> Result<BigInt> {
    if m < -1 {
        return Err(Error::BelowMinimum {
            what: "double factorial argument",
            min: -1,
            value: m,
        });
    }
    let mut acc = BigInt::one();
    let mut j = m;
    while j > 1 {
        acc *= j;
        j -= 2;
    }
    Ok(acc)
}

/// `1/m!`, taken as exactly zero for negative `m` (the reciprocal Gamma
/// function vanishes at the nonpositive integers).
pub fn reciprocal_factorial(m: i64) -> BigRational {
    if m < 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::one(), factorial(m as u64))
    }
}

/// `(2n)! / (2^{2n} (n!)^2) = (2n-1)!!/(2n)!! = C(2n, n)/4^n`.
pub fn central_ratio(n: u64) -> BigRational {
    BigRational::new(binomial_int(2 * n, n as i64), BigInt::one() << (2 * n))
}

/// Generalized binomial `C(r - 1/2, k)`, which is rational. Zero for `k < 0`.
pub fn half_binomial(r: u64, k: i64) -> BigRational {
    if k < 0 {
        return BigRational::zero();
    }
    // a (a-1) ... (a-k+1) / k!  with a = (2r-1)/2
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= 2 * r as i64 - 1 - 2 * j;
        den *= 2 * (j + 1);
    }
    BigRational::new(num, den)
}

/// `(r - 1/2)! = Gamma(r + 1/2) = r! (2r-1)!! sqrt(pi) / (2r)!!`.
pub fn half_integer_factorial(r: i64) -> Result<ScaledPi> {
    if r < 0 {
        return Err(Error::BelowMinimum {
            what: "half-integer factorial index",
            min: 0,
            value: r,
        });
    }
    let coeff = BigRational::new(
        factorial(r as u64) * double_factorial(2 * r - 1)?,
        double_factorial(2 * r)?,
    );
    ScaledPi::new(coeff, 1)
}

/// `B(a + 1/2, b + 1/2) = pi (2a-1)!! (2b-1)!! / (2^{a+b} (a+b)!)`.
pub fn beta_half(a: i64, b: i64) -> Result<ScaledPi> {
    for (what, v) in [("beta argument a", a), ("beta argument b", b)] {
        if v < 0 {
            return Err(Error::BelowMinimum { what, min: 0, value: v });
        }
    }
    let num = double_factorial(2 * a - 1)? * double_factorial(2 * b - 1)?;
    let den = (BigInt::one() << (a + b) as usize) * factorial((a + b) as u64);
    ScaledPi::new(BigRational::new(num, den), 2)
}

/// A value `coeff * pi^(half_pi_exponent / 2)` with the exponent in `{0, 1, 2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledPi {
    coeff: BigRational,
    half_pi_exponent: u8,
}

impl ScaledPi {
    pub fn new(coeff: BigRational, half_pi_exponent: u8) -> Result<Self> {
        if half_pi_exponent > 2 {
            return Err(Error::PiExponent(half_pi_exponent as u32));
        }
        let half_pi_exponent = if coeff.is_zero() { 0 } else { half_pi_exponent };
        Ok(ScaledPi {
            coeff,
            half_pi_exponent,
        })
    }

    pub fn rational(coeff: BigRational) -> Self {
        ScaledPi::new(coeff, 0).expect("exponent 0 is valid")
    }

    pub fn zero() -> Self {
        ScaledPi::rational(BigRational::zero())
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn half_pi_exponent(&self) -> u8 {
        self.half_pi_exponent
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Product of two values; fails if the pi exponents sum past 2.
    pub fn checked_mul(&self, other: &ScaledPi) -> Result<ScaledPi> {
        let h = self.half_pi_exponent as u32 + other.half_pi_exponent as u32;
        if self.is_zero() || other.is_zero() {
            return Ok(ScaledPi::zero());
        }
        if h > 2 {
            return Err(Error::PiExponent(h));
        }
        ScaledPi::new(&self.coeff * &other.coeff, h as u8)
    }

    /// Sum of two values with the same pi exponent (zero is compatible with anything).
    pub fn checked_add(&self, other: &ScaledPi) -> Result<ScaledPi> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.half_pi_exponent != other.half_pi_exponent {
            return Err(Error::PiMismatch(self.half_pi_exponent, other.half_pi_exponent));
        }
        ScaledPi::new(&self.coeff + &other.coeff, self.half_pi_exponent)
    }

    pub fn scale(&self, r: &BigRational) -> ScaledPi {
        ScaledPi::new(&self.coeff * r, self.half_pi_exponent).expect("exponent unchanged")
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        match self.half_pi_exponent {
            0 => c,
            1 => c * std::f64::consts::PI.sqrt(),
            _ => c * std::f64::consts::PI,
        }
    }
}

impl Mul<&BigRational> for &ScaledPi {
    type Output = ScaledPi;

    fn mul(self, rhs: &BigRational) -> ScaledPi {
        self.scale(rhs)
    }
}

/// Renders as `q`, `q·√π` or `q·π`.
impl fmt::Display for ScaledPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.half_pi_exponent {
            0 => write!(f, "{}", self.coeff),
            1 => write!(f, "{}·√π", self.coeff),
            _ => write!(f, "{}·π", self.coeff),
        }
    }
}

/// `(2n)! / (2^{2n-1} (n!)^3)`, the prefactor of the Q and R corrections.
pub(crate) fn qr_prefactor(n: u64) -> BigRational {
    BigRational::new(
        factorial(2 * n),
        (BigInt::one() << (2 * n - 1) as usize) * factorial(n).pow(3),
    )
}

pub(crate) fn sign(exponent: i64) -> BigRational {
    if exponent.abs() % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use gauss_quad::legendre::GaussLegendre;

    // Gamma(r + 1/2) / sqrt(pi) by Gamma(x + 1) = x Gamma(x) from Gamma(1/2).
    fn gamma_half_over_sqrt_pi(r: i64) -> BigRational {
        (0..r).fold(int(1), |acc, j| acc * rat(2 * j + 1, 2))
    }

    fn beta_quadrature(a: i64, b: i64) -> f64 {
        // x = sin^2 t turns the endpoint singularities into a smooth integrand.
        let rule = GaussLegendre::new(64.try_into().unwrap());
        2.0 * rule.integrate(0.0, std::f64::consts::FRAC_PI_2, |t: f64| {
            t.sin().powi(2 * a as i32) * t.cos().powi(2 * b as i32)
        })
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2), int(10));
        for n in 0..10 {
            assert_eq!(binomial(n, 0), int(1));
        }
        assert_eq!(binomial(4, 7), int(0));
        assert_eq!(binomial(4, -1), int(0));
    }

    #[test]
    fn pascal_rule() {
        for n in 1..=30u64 {
            for k in 0..=n as i64 {
                assert_eq!(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
            }
        }
    }

    #[test]
    fn double_factorial_examples() {
        assert_eq!(double_factorial(0).unwrap(), BigInt::one());
        assert_eq!(double_factorial(-1).unwrap(), BigInt::one());
        assert_eq!(double_factorial(6).unwrap(), BigInt::from(48));
        assert_eq!(double_factorial(7).unwrap(), BigInt::from(105));
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn factorial_splits_into_double_factorials() {
        for m in 0..=40i64 {
            let lhs = factorial(m as u64);
            let rhs = double_factorial(m).unwrap() * double_factorial(m - 1).unwrap();
            assert_eq!(lhs, rhs, "m = {m}");
        }
        for n in 0..=20i64 {
            let lhs = factorial(2 * n as u64);
            let rhs = double_factorial(2 * n - 1).unwrap()
                * (BigInt::one() << n as usize)
                * factorial(n as u64);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn half_integer_factorial_examples() {
        assert_eq!(half_integer_factorial(0).unwrap(), ScaledPi::new(int(1), 1).unwrap());
        assert_eq!(half_integer_factorial(1).unwrap(), ScaledPi::new(rat(1, 2), 1).unwrap());
        assert_eq!(half_integer_factorial(3).unwrap(), ScaledPi::new(rat(15, 8), 1).unwrap());
        for r in 0..25 {
            let v = half_integer_factorial(r).unwrap();
            assert_eq!(v.half_pi_exponent(), 1);
            assert_eq!(v.coeff(), &gamma_half_over_sqrt_pi(r));
        }
        assert!(half_integer_factorial(-1).is_err());
    }

    #[test]
    fn beta_half_examples() {
        let pi = |c| ScaledPi::new(c, 2).unwrap();
        assert_eq!(beta_half(0, 0).unwrap(), pi(int(1)));
        assert_eq!(beta_half(1, 0).unwrap(), pi(rat(1, 2)));
        assert_eq!(beta_half(2, 3).unwrap(), pi(rat(3, 256)));
        assert!((beta_half(2, 3).unwrap().to_f64() - beta_quadrature(2, 3)).abs() < 1e-12);
        assert!(beta_half(-1, 0).is_err());
    }

    #[test]
    fn beta_half_matches_gamma_ratio_and_is_symmetric() {
        for a in 0..=15 {
            for b in 0..=15 {
                let ab = beta_half(a, b).unwrap();
                assert_eq!(ab, beta_half(b, a).unwrap());
                let via_gamma = half_integer_factorial(a)
                    .unwrap()
                    .checked_mul(&half_integer_factorial(b).unwrap())
                    .unwrap()
                    .scale(&BigRational::new(BigInt::one(), factorial((a + b) as u64)));
                assert_eq!(ab, via_gamma);
            }
        }
    }

    #[test]
    fn beta_half_matches_quadrature() {
        for a in 0..=8 {
            for b in 0..=8 {
                let exact = beta_half(a, b).unwrap().to_f64();
                let numeric = beta_quadrature(a, b);
                assert!(((exact - numeric) / exact).abs() < 1e-11, "({a},{b})");
            }
        }
    }

    #[test]
    fn reciprocal_factorial_examples() {
        assert_eq!(reciprocal_factorial(3), rat(1, 6));
        assert_eq!(reciprocal_factorial(0), int(1));
        assert_eq!(reciprocal_factorial(-1), int(0));
    }

    #[test]
    fn half_binomial_matches_factorial_form() {
        // C(r - 1/2, k) = (r-1/2)! / (k! (r-k-1/2)!) for 0 <= k <= r
        for r in 0..12u64 {
            for k in 0..=r as i64 {
                let top = half_integer_factorial(r as i64).unwrap();
                let bottom = half_integer_factorial(r as i64 - k).unwrap();
                let expected = top.coeff() / bottom.coeff() * reciprocal_factorial(k);
                assert_eq!(half_binomial(r, k), expected, "r={r} k={k}");
            }
        }
        assert_eq!(half_binomial(3, -1), int(0));
    }

    #[test]
    fn central_ratio_forms_agree() {
        for n in 0..20u64 {
            let via_double = BigRational::new(
                double_factorial(2 * n as i64 - 1).unwrap(),
                double_factorial(2 * n as i64).unwrap(),
            );
            assert_eq!(central_ratio(n), via_double);
        }
    }

    #[test]
    fn scaled_pi_algebra() {
        let root = half_integer_factorial(0).unwrap();
        let pi = root.checked_mul(&root).unwrap();
        assert_eq!(pi.half_pi_exponent(), 2);
        assert!(pi.checked_mul(&pi).is_err());
        assert!(pi.checked_add(&root).is_err());
        let zero = ScaledPi::new(int(0), 2).unwrap();
        assert_eq!(zero.half_pi_exponent(), 0);
        assert_eq!(pi.checked_add(&zero).unwrap(), pi);
        assert_eq!(pi.to_string(), "1·π");
        assert_eq!(beta_half(1, 0).unwrap().to_string(), "1/2·π");
        assert!(ScaledPi::new(int(1), 3).is_err());
    }
}
