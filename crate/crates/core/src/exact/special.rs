//! Rising factorials and exact gamma-function ratios.
//!
//! Γ(a + n)/Γ(a) is rational whenever a is, so every gamma ratio with an
//! integer shift is carried exactly as a signed Pochhammer product.

use num_bigint::BigInt;

use super::Rational;
use crate::error::{Error, Result};

/// Rising factorial (a)_n = a(a+1)…(a+n−1); (a)_0 = 1.
pub fn pochhammer(a: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    let mut x = a.clone();
    let one = Rational::one();
    for _ in 0..n {
        acc *= &x;
        x += &one;
    }
    acc
}

/// Γ(a + shift)/Γ(a).
///
/// Equals (a)_shift for shift ≥ 0 and 1/(a+shift)_{−shift} otherwise.
/// Fails with a pole error when a or a + shift is a nonpositive integer.
pub fn gamma_ratio(a: &Rational, shift: i64) -> Result<Rational> {
    let top = a + &Rational::from(shift);
    for arg in [a, &top] {
        if arg.is_nonpositive_integer() {
            return Err(Error::Pole { argument: arg.to_string() });
        }
    }
    if shift >= 0 {
        Ok(pochhammer(a, shift as u32))
    } else {
        pochhammer(&top, (-shift) as u32).recip()
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// Γ(x) in double precision (Lanczos with reflection for x < 1/2).
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// ln|Γ(x)| for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::frac(n, d)
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&r(7, 5), 0), Rational::one());
        assert_eq!(pochhammer(&r(1, 3), 2), r(4, 9));
        // ((5/6 − N/2)_N)² at N = 1
        let p = pochhammer(&(r(5, 6) - r(1, 2)), 1);
        assert_eq!(&p * &p, r(1, 9));
    }

    #[test]
    fn gamma_ratio_examples() {
        assert_eq!(gamma_ratio(&r(2, 3), 1).unwrap(), r(2, 3));
        assert_eq!(gamma_ratio(&r(-1, 3), 1).unwrap(), r(-1, 3));
        assert_eq!(gamma_ratio(&r(1, 3), -1).unwrap(), r(-3, 2));
    }

    #[test]
    fn gamma_ratio_poles() {
        assert!(matches!(gamma_ratio(&r(0, 1), 2), Err(Error::Pole { .. })));
        assert!(matches!(gamma_ratio(&r(1, 1), -1), Err(Error::Pole { .. })));
        assert!(matches!(gamma_ratio(&r(-3, 1), 5), Err(Error::Pole { .. })));
        assert!(gamma_ratio(&r(1, 2), -4).is_ok());
    }

    #[test]
    fn gamma_ratio_matches_float_gamma() {
        for (n, d, s) in [(2, 3, 4), (1, 6, -3), (-7, 3, 2), (5, 6, -5)] {
            let a = r(n, d);
            let af = a.to_f64();
            let expect = gamma(af + s as f64) / gamma(af);
            let got = gamma_ratio(&a, s).unwrap().to_f64();
            assert!((got - expect).abs() <= 1e-12 * expect.abs(), "{a} {s}: {got} vs {expect}");
        }
    }

    #[test]
    fn factorial_and_binomial() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(10), BigInt::from(3_628_800));
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(3, 5), BigInt::from(0));
    }

    proptest! {
        #[test]
        fn pochhammer_splits(n in -40i64..40, d in 1i64..12, m in 0u32..6, k in 0u32..6) {
            let a = r(n, d);
            let lhs = pochhammer(&a, m + k);
            let rhs = pochhammer(&a, m) * pochhammer(&(&a + &Rational::from(m as i64)), k);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn legendre_duplication(z in 0.05f64..10.0) {
            // Γ(z)Γ(z+1/2) = √π 2^{1−2z} Γ(2z)
            let lhs = gamma(z) * gamma(z + 0.5);
            let rhs = std::f64::consts::PI.sqrt() * 2f64.powf(1.0 - 2.0 * z) * gamma(2.0 * z);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        }
    }
}
