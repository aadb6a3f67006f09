//! Fixed-precision binary floats (backed by `dashu-float`) and complex
//! numbers written on the basis {1, ω}, so that q = ω and its powers are
//! represented without rounding.

use std::ops::{Add, Mul, Neg, Sub};

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_complex::Complex64;

use crate::exact::{Cyclotomic, Rational};

/// Working precision in bits.
pub const DEFAULT_PRECISION: usize = 192;

pub type HpReal = FBig<HalfEven, 2>;

fn to_ibig(n: &BigInt) -> IBig {
    let mag = IBig::from(UBig::from_le_bytes(&n.magnitude().to_bytes_le()));
    if n.sign() == Sign::Minus {
        -mag
    } else {
        mag
    }
}

pub fn real_from_rational(r: &Rational, precision: usize) -> HpReal {
    let num = HpReal::from(to_ibig(r.numer())).with_precision(precision).value();
    let den = HpReal::from(to_ibig(r.denom())).with_precision(precision).value();
    num / den
}

pub fn real_from_f64(x: f64, precision: usize) -> HpReal {
    HpReal::try_from(x)
        .expect("finite float")
        .with_precision(precision)
        .value()
}

pub fn real_to_f64(x: &HpReal) -> f64 {
    x.to_f64().value()
}

pub fn sqrt(x: &HpReal) -> HpReal {
    x.sqrt()
}

/// `a + b·ω` with high-precision real components.
#[derive(Clone, Debug)]
pub struct HpCyc {
    pub a: HpReal,
    pub b: HpReal,
}

impl HpCyc {
    pub fn from_cyclotomic(x: &Cyclotomic, precision: usize) -> Self {
        HpCyc {
            a: real_from_rational(&x.a, precision),
            b: real_from_rational(&x.b, precision),
        }
    }

    /// Converts x + iy to the ω basis: b = 2y/√3, a = x − b/2.
    pub fn from_complex(z: Complex64, precision: usize) -> Self {
        let b = 2.0 * z.im / 3f64.sqrt();
        HpCyc {
            a: real_from_f64(z.re - 0.5 * b, precision),
            b: real_from_f64(b, precision),
        }
    }

    pub fn zero(precision: usize) -> Self {
        HpCyc::from_cyclotomic(&Cyclotomic::zero(), precision)
    }

    pub fn one(precision: usize) -> Self {
        HpCyc::from_cyclotomic(&Cyclotomic::one(), precision)
    }

    /// |x|² = a² + ab + b².
    pub fn norm_sqr(&self) -> HpReal {
        &self.a * &self.a + &self.a * &self.b + &self.b * &self.b
    }

    pub fn abs_f64(&self) -> f64 {
        real_to_f64(&self.norm_sqr()).max(0.0).sqrt()
    }

    pub fn conj(&self) -> Self {
        HpCyc {
            a: &self.a + &self.b,
            b: -self.b.clone(),
        }
    }

    pub fn div(&self, rhs: &HpCyc) -> HpCyc {
        let n = rhs.norm_sqr();
        let num = self * &rhs.conj();
        HpCyc {
            a: num.a / &n,
            b: num.b / n,
        }
    }

    pub fn pow(&self, mut e: u32) -> HpCyc {
        let precision = self.a.precision().max(self.b.precision());
        let mut base = self.clone();
        let mut acc = HpCyc::one(precision);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        let (a, b) = (real_to_f64(&self.a), real_to_f64(&self.b));
        Complex64::new(a + 0.5 * b, b * 3f64.sqrt() / 2.0)
    }
}

impl Add<&HpCyc> for &HpCyc {
    type Output = HpCyc;
    fn add(self, rhs: &HpCyc) -> HpCyc {
        HpCyc {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub<&HpCyc> for &HpCyc {
    type Output = HpCyc;
    fn sub(self, rhs: &HpCyc) -> HpCyc {
        HpCyc {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Mul<&HpCyc> for &HpCyc {
    type Output = HpCyc;
    fn mul(self, rhs: &HpCyc) -> HpCyc {
        let bd = &self.b * &rhs.b;
        HpCyc {
            a: &self.a * &rhs.a - &bd,
            b: &self.a * &rhs.b + &self.b * &rhs.a + bd,
        }
    }
}

impl Neg for &HpCyc {
    type Output = HpCyc;
    fn neg(self) -> HpCyc {
        HpCyc {
            a: -self.a.clone(),
            b: -self.b.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip_beyond_double() {
        let third = real_from_rational(&Rational::frac(1, 3), DEFAULT_PRECISION);
        let err = &third * &real_from_f64(3.0, DEFAULT_PRECISION) - real_from_f64(1.0, DEFAULT_PRECISION);
        assert!(real_to_f64(&err).abs() < 1e-50);
        let neg = real_from_rational(&Rational::frac(-7, 2), DEFAULT_PRECISION);
        assert_eq!(real_to_f64(&neg), -3.5);
    }

    #[test]
    fn omega_basis_matches_exact_field() {
        let p = DEFAULT_PRECISION;
        let x = Cyclotomic::new(Rational::frac(3, 7), Rational::frac(-2, 5));
        let y = Cyclotomic::new(Rational::frac(-1, 3), Rational::frac(5, 4));
        let hx = HpCyc::from_cyclotomic(&x, p);
        let hy = HpCyc::from_cyclotomic(&y, p);
        let exact = x.checked_div(&y).unwrap() * &x;
        let approx = &hx.div(&hy) * &hx;
        let diff = &approx - &HpCyc::from_cyclotomic(&exact, p);
        assert!(diff.abs_f64() < 1e-50);
        let z = Complex64::new(0.3, -1.7);
        assert!((HpCyc::from_complex(z, p).to_complex() - z).norm() < 1e-15);
        assert!((HpCyc::from_cyclotomic(&Cyclotomic::omega(), p).abs_f64() - 1.0).abs() < 1e-15);
    }
}
