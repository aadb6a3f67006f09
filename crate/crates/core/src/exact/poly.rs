use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Cyclotomic, Rational};
use crate::error::{Error, Result};

/// Dense polynomial over Q(ω), coefficients lowest degree first, with no
/// trailing zeros. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CycPolynomial {
    coeffs: Vec<Cyclotomic>,
}

impl CycPolynomial {
    pub fn new(mut coeffs: Vec<Cyclotomic>) -> Self {
        while coeffs.last().is_some_and(Cyclotomic::is_zero) {
            coeffs.pop();
        }
        CycPolynomial { coeffs }
    }

    pub fn from_rationals(coeffs: impl IntoIterator<Item = Rational>) -> Self {
        Self::new(coeffs.into_iter().map(Cyclotomic::from).collect())
    }

    pub fn zero() -> Self {
        CycPolynomial::default()
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Self::new(vec![c])
    }

    /// `(c0 + c1·x)^n`, built by repeated multiplication.
    pub fn binomial_power(c0: Cyclotomic, c1: Cyclotomic, n: usize) -> Self {
        let base = Self::new(vec![c0, c1]);
        (0..n).fold(Self::constant(Cyclotomic::one()), |acc, _| &acc * &base)
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Cyclotomic {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Cyclotomic> {
        self.coeffs.last()
    }

    pub fn has_rational_coefficients(&self) -> bool {
        self.coeffs.iter().all(Cyclotomic::is_rational)
    }

    pub fn eval(&self, x: &Cyclotomic) -> Cyclotomic {
        self.coeffs
            .iter()
            .rev()
            .fold(Cyclotomic::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Rational::from(k as i64)))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Cyclotomic) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `p(s·x)`: coefficient k is multiplied by s^k.
    pub fn scale_arg(&self, s: &Cyclotomic) -> Self {
        let mut power = Cyclotomic::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &power);
            power = &power * s;
        }
        Self::new(out)
    }

    /// Multiplies by x^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Cyclotomic::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        Self::new(out)
    }

    /// Polynomial long division: `(quotient, remainder)`.
    pub fn div_rem(&self, den: &Self) -> Result<(Self, Self)> {
        let lead_inv = den.leading().ok_or(Error::DivisionByZero)?.inverse()?;
        let dd = den.coeffs.len();
        if self.coeffs.len() < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Cyclotomic::zero(); rem.len() - dd + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd - 1] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in den.coeffs.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * dc);
            }
            quot[i] = c;
        }
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient; `NotDivisible` carries the nonzero remainder.
    pub fn divide_exact(&self, den: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(den)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible { remainder: r.to_string() })
        }
    }

    /// Index of the first coefficient where `self` and `other` differ.
    pub fn first_mismatch(&self, other: &Self) -> Option<usize> {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).find(|&k| self.coeff(k) != other.coeff(k))
    }
}

impl fmt::Display for CycPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CycPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add<&CycPolynomial> for &CycPolynomial {
    type Output = CycPolynomial;
    fn add(self, rhs: &CycPolynomial) -> CycPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CycPolynomial::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub<&CycPolynomial> for &CycPolynomial {
    type Output = CycPolynomial;
    fn sub(self, rhs: &CycPolynomial) -> CycPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        CycPolynomial::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl Mul<&CycPolynomial> for &CycPolynomial {
    type Output = CycPolynomial;
    fn mul(self, rhs: &CycPolynomial) -> CycPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return CycPolynomial::zero();
        }
        let mut out = vec![Cyclotomic::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        CycPolynomial::new(out)
    }
}

impl Neg for &CycPolynomial {
    type Output = CycPolynomial;
    fn neg(self) -> CycPolynomial {
        CycPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rpoly(cs: &[(i64, i64)]) -> CycPolynomial {
        CycPolynomial::from_rationals(cs.iter().map(|&(n, d)| Rational::frac(n, d)))
    }

    fn one_plus_x_pow(n: usize) -> CycPolynomial {
        CycPolynomial::binomial_power(Cyclotomic::one(), Cyclotomic::one(), n)
    }

    #[test]
    fn scale_arg_examples() {
        let p = rpoly(&[(1, 1), (1, 1)]);
        assert_eq!(p.scale_arg(&Cyclotomic::one()), p);

        // x − 1/2 at q²x
        let p = rpoly(&[(-1, 2), (1, 1)]);
        let q2 = Cyclotomic::omega_pow(2);
        let expected = CycPolynomial::new(vec![Cyclotomic::from(Rational::frac(-1, 2)), q2.clone()]);
        assert_eq!(p.scale_arg(&q2), expected);

        // x² at q³x
        let p = rpoly(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(p.scale_arg(&Cyclotomic::omega_pow(3)), p);
    }

    #[test]
    fn exact_division_examples() {
        // Q and P at N = 1
        let f_q = rpoly(&[(-1, 2), (0, 1), (3, 2), (1, 1)]);
        assert_eq!(f_q.divide_exact(&one_plus_x_pow(2)).unwrap(), rpoly(&[(-1, 2), (1, 1)]));
        let f_p = rpoly(&[(-2, 1), (-3, 1), (0, 1), (1, 1)]);
        assert_eq!(f_p.divide_exact(&one_plus_x_pow(2)).unwrap(), rpoly(&[(-2, 1), (1, 1)]));
        assert!(matches!(
            one_plus_x_pow(2).divide_exact(&one_plus_x_pow(3)),
            Err(Error::NotDivisible { .. })
        ));
        assert!(f_q.divide_exact(&CycPolynomial::zero()).is_err());
    }

    #[test]
    fn degree_is_canonical() {
        let p = CycPolynomial::new(vec![Cyclotomic::one(), Cyclotomic::zero(), Cyclotomic::zero()]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(CycPolynomial::zero().degree(), None);
        let d = &p - &p;
        assert!(d.is_zero());
    }

    #[test]
    fn derivative_and_eval() {
        let p = one_plus_x_pow(3);
        assert_eq!(p.derivative(), one_plus_x_pow(2).scale(&Cyclotomic::from(3)));
        assert_eq!(p.eval(&Cyclotomic::one()), Cyclotomic::from(8));
        // (1 + ω)³ evaluated directly
        let w = Cyclotomic::omega();
        let opw = &Cyclotomic::one() + &w;
        assert_eq!(p.eval(&w), &(&opw * &opw) * &opw);
    }

    #[test]
    fn div_rem_reconstructs() {
        let num = rpoly(&[(3, 1), (-1, 2), (0, 1), (7, 3), (1, 1)]);
        let den = CycPolynomial::new(vec![Cyclotomic::omega(), Cyclotomic::from(2)]);
        let (q, r) = num.div_rem(&den).unwrap();
        assert!(r.degree().unwrap_or(0) < den.degree().unwrap());
        assert_eq!(&(&q * &den) + &r, num);
    }
}
