use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::Rational;
use crate::error::{Error, Result};

/// Element `a + b·ω` of Q(ω), where ω = e^{iπ/3} is a primitive sixth root
/// of unity.
///
/// Multiplication reduces with ω² = ω − 1. Useful landmarks:
///
/// | value      | (a, b)   |
/// |------------|----------|
/// | q = ω      | (0, 1)   |
/// | q⁻¹ = ω̄    | (1, −1)  |
/// | q²         | (−1, 1)  |
/// | q⁻²        | (0, −1)  |
/// | i√3        | (−1, 2)  |
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Cyclotomic {
    pub a: Rational,
    pub b: Rational,
}

impl Cyclotomic {
    pub fn new(a: Rational, b: Rational) -> Self {
        Cyclotomic { a, b }
    }

    pub fn zero() -> Self {
        Cyclotomic::default()
    }

    pub fn one() -> Self {
        Cyclotomic::from(Rational::one())
    }

    /// ω = e^{iπ/3}, which plays the role of q at the stochastic point.
    pub fn omega() -> Self {
        Cyclotomic::new(Rational::zero(), Rational::one())
    }

    /// i√3 = q − q⁻¹ = 2ω − 1.
    pub fn i_sqrt3() -> Self {
        Cyclotomic::new(Rational::from(-1), Rational::from(2))
    }

    /// ω^k for any integer k, using ω⁶ = 1.
    pub fn omega_pow(k: i64) -> Self {
        let (a, b) = match k.rem_euclid(6) {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 1),
            3 => (-1, 0),
            4 => (0, -1),
            _ => (1, -1),
        };
        Cyclotomic::new(Rational::from(a), Rational::from(b))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value, if the ω-component vanishes.
    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn real_part(&self) -> Rational {
        &self.a + &(&self.b / &Rational::from(2))
    }

    /// Complex conjugation, ω ↦ ω̄ = 1 − ω.
    pub fn conj(&self) -> Self {
        Cyclotomic::new(&self.a + &self.b, -&self.b)
    }

    /// Field norm x·x̄ = a² + ab + b², a nonnegative rational.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a + &self.a * &self.b + &self.b * &self.b
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c = self.conj();
        Ok(Cyclotomic::new(&c.a / &n, &c.b / &n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Cyclotomic::new(&self.a * k, &self.b * k)
    }

    pub fn pow(&self, exp: i64) -> Result<Self> {
        let mut base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Cyclotomic::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn to_complex(&self) -> Complex64 {
        let (a, b) = (self.a.to_f64(), self.b.to_f64());
        Complex64::new(a + 0.5 * b, b * 3f64.sqrt() / 2.0)
    }
}

impl From<Rational> for Cyclotomic {
    fn from(a: Rational) -> Self {
        Cyclotomic::new(a, Rational::zero())
    }
}

impl From<i64> for Cyclotomic {
    fn from(a: i64) -> Self {
        Cyclotomic::from(Rational::from(a))
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}·ω", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}·ω", self.a, -&self.b)
        } else {
            write!(f, "{} + {}·ω", self.a, self.b)
        }
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self)
    }
}

impl Add<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        // (a + bω)(c + dω) = ac + (ad + bc)ω + bd·ω², with ω² = ω − 1
        let ac = &self.a * &rhs.a;
        let bd = &self.b * &rhs.b;
        let ad_bc = &self.a * &rhs.b + &self.b * &rhs.a;
        Cyclotomic::new(&ac - &bd, ad_bc + bd)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic::new(-&self.a, -&self.b)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                $tr::$method(&self, &rhs)
            }
        }
        impl $tr<&Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                $tr::$method(&self, rhs)
            }
        }
        impl $tr<Cyclotomic> for &Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                $tr::$method(self, &rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}
