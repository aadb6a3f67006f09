use std::ops::{Add, Mul, Sub};

use log::warn;

use super::{build_fsz, FszSolution};
use crate::closed_form::{nu_c_exact, nu_nc_exact};
use crate::error::{Error, Result};
use crate::exact::{CycPolynomial, Cyclotomic, Rational};

fn q() -> Cyclotomic {
    Cyclotomic::omega()
}

fn qp(k: i64) -> Cyclotomic {
    Cyclotomic::omega_pow(k)
}

/// First-order dual number `re + eps·ε` with ε² = 0.
#[derive(Clone, Debug)]
struct Dual {
    re: Cyclotomic,
    eps: Cyclotomic,
}

impl Dual {
    fn constant(re: Cyclotomic) -> Self {
        Dual { re, eps: Cyclotomic::zero() }
    }

    fn eval(p: &CycPolynomial, x: &Dual) -> Dual {
        p.coeffs()
            .iter()
            .rev()
            .fold(Dual::constant(Cyclotomic::zero()), |acc, c| &(&acc * x) + &Dual::constant(c.clone()))
    }
}

impl Add<&Dual> for &Dual {
    type Output = Dual;
    fn add(self, rhs: &Dual) -> Dual {
        Dual { re: &self.re + &rhs.re, eps: &self.eps + &rhs.eps }
    }
}

impl Sub<&Dual> for &Dual {
    type Output = Dual;
    fn sub(self, rhs: &Dual) -> Dual {
        Dual { re: &self.re - &rhs.re, eps: &self.eps - &rhs.eps }
    }
}

impl Mul<&Dual> for &Dual {
    type Output = Dual;
    fn mul(self, rhs: &Dual) -> Dual {
        Dual {
            re: &self.re * &rhs.re,
            eps: &self.re * &rhs.eps + &self.eps * &rhs.re,
        }
    }
}

/// Explicit q-derivative of the transfer eigenvalue numerator, written via
/// Q, P and their derivatives at q^{±2}.
pub fn quantity_a(sol: &FszSolution) -> Result<Cyclotomic> {
    quantity_a_with(sol, false)
}

/// Same as [`quantity_a`]; cross-checks against the frozen-root route and,
/// if `check_f_form`, also against the f_Q/f_P form (a mismatch there is
/// only logged).
pub fn quantity_a_with(sol: &FszSolution, check_f_form: bool) -> Result<Cyclotomic> {
    let a = quantity_a_qp_form(sol)?;
    let frozen = quantity_a_frozen_roots(sol)?;
    let (nu_main, nu_frozen) = (assemble_nu_c(sol.n, &a)?, assemble_nu_c(sol.n, &frozen)?);
    if nu_main != nu_frozen {
        return Err(Error::Inconsistency {
            what: "A",
            detail: format!("Q,P form gives nu_c = {nu_main}, frozen-root derivative gives {nu_frozen}"),
        });
    }
    if check_f_form {
        let f_form = quantity_a_f_form(sol)?;
        if f_form != a {
            warn!("N = {}: f-form of A = {f_form} differs from Q,P form {a}", sol.n);
        }
    }
    Ok(a)
}

fn quantity_a_qp_form(sol: &FszSolution) -> Result<Cyclotomic> {
    let (q2, qm2, qinv) = (qp(2), qp(-2), qp(-1));
    let (dq, dp) = (sol.q.derivative(), sol.p.derivative());
    let num = &q() * &dq.eval(&qm2) * sol.p.eval(&q2)
        - dq.eval(&q2) * sol.p.eval(&qm2)
        - &qinv * &sol.q.eval(&q2) * dp.eval(&qm2)
        - &qinv * &sol.q.eval(&qm2) * dp.eval(&q2);
    num.checked_div(&Cyclotomic::i_sqrt3())
}

/// Differentiates e^{2iφ}Q(s²)P(s⁻²) − e^{−2iφ}Q(s⁻²)P(s²) in s at s = q with
/// the polynomial coefficients held fixed and e^{iφ} = q. The result over
/// (q − q⁻¹) is 2A.
pub fn quantity_a_frozen_roots(sol: &FszSolution) -> Result<Cyclotomic> {
    let s = q();
    // s² and s⁻² as dual numbers around s = q, with ds = 1
    let s2 = Dual { re: qp(2), eps: s.scale(&Rational::from(2)) };
    let sm2 = Dual { re: qp(-2), eps: qp(-3).scale(&Rational::from(-2)) };
    let twist_up = Dual::constant(qp(2));
    let twist_down = Dual::constant(qp(-2));
    let num = &(&twist_up * &(&Dual::eval(&sol.q, &s2) * &Dual::eval(&sol.p, &sm2)))
        - &(&twist_down * &(&Dual::eval(&sol.q, &sm2) * &Dual::eval(&sol.p, &s2)));
    num.eps.checked_div(&Cyclotomic::i_sqrt3().scale(&Rational::from(2)))
}

/// The f_Q/f_P form of A, in which the (1+x)^{2N} factors have been
/// differentiated out.
pub fn quantity_a_f_form(sol: &FszSolution) -> Result<Cyclotomic> {
    let (q2, qm2, qinv) = (qp(2), qp(-2), qp(-1));
    let (fq, fp) = (&sol.f_q, &sol.f_p);
    let (dfq, dfp) = (fq.derivative(), fp.derivative());
    let is3 = Cyclotomic::i_sqrt3();
    let first = &q() * &dfq.eval(&qm2) * fp.eval(&q2)
        - dfq.eval(&q2) * fp.eval(&qm2)
        - &qinv * &fq.eval(&q2) * dfp.eval(&qm2)
        - &qinv * &fq.eval(&qm2) * dfp.eval(&q2);
    let first = first.checked_div(&is3)?;
    let mixed = (&Cyclotomic::one() + &qinv).checked_div(&is3)?;
    let second = fq.eval(&qm2) * fp.eval(&q2) - mixed * fq.eval(&q2) * fp.eval(&qm2);
    Ok(first - second.scale(&Rational::from(2 * sol.n as i64)))
}

/// q²Q(q²)P(q⁻²) + q⁻²Q(q⁻²)P(q²), checked against the f_Q/f_P form.
pub fn quantity_c(sol: &FszSolution) -> Result<Cyclotomic> {
    let (q2, qm2) = (qp(2), qp(-2));
    let from_qp = &q2 * &sol.q.eval(&q2) * sol.p.eval(&qm2) + &qm2 * &sol.q.eval(&qm2) * sol.p.eval(&q2);
    let from_f = &q2 * &sol.f_q.eval(&q2) * sol.f_p.eval(&qm2)
        + &qm2 * &sol.f_q.eval(&qm2) * sol.f_p.eval(&q2);
    if from_qp != from_f {
        return Err(Error::Inconsistency {
            what: "C",
            detail: format!("Q,P form {from_qp} vs f form {from_f}"),
        });
    }
    Ok(from_qp)
}

/// Twist derivative of the eigenvalue numerator with e^{iφ} → q(1 + ε),
/// ε = i·dφ. The dual part equals 2C.
pub fn quantity_c_twist_derivative(sol: &FszSolution) -> Cyclotomic {
    let (q2, qm2) = (qp(2), qp(-2));
    let two = Rational::from(2);
    let up = Dual { re: q2.clone(), eps: q2.scale(&two) };
    let down = Dual { re: qm2.clone(), eps: qm2.scale(&-two) };
    let num = &(&up * &Dual::constant(sol.q.eval(&q2) * sol.p.eval(&qm2)))
        - &(&down * &Dual::constant(sol.q.eval(&qm2) * sol.p.eval(&q2)));
    num.eps.scale(&Rational::frac(1, 2))
}

fn four_pow(n: u32) -> Rational {
    Rational::from(4).pow(n as i32).expect("nonzero base")
}

fn assemble_nu_c(n: u32, a: &Cyclotomic) -> Result<Cyclotomic> {
    // 1/2 + (1 − q⁻²)⁻¹/(2N) · 3·2^{−2N}·A
    let lead = (Cyclotomic::one() - qp(-2)).inverse()?;
    let scale = Rational::from(3) / (Rational::from(2 * n as i64) * four_pow(n));
    Ok(Cyclotomic::from(Rational::frac(1, 2)) + (lead * a).scale(&scale))
}

/// Everything the derivative route produces for one N.
#[derive(Clone, Debug)]
pub struct DerivativeBundle {
    pub n: u32,
    pub a: Cyclotomic,
    pub c: Cyclotomic,
    /// d ln T(1)/dq = 3·2^{−2N}·A
    pub dlnt_dq: Cyclotomic,
    /// d ln T(1)/dφ divided by √3, i.e. C/2^{2N}; the undivided value is
    /// not an element of Q(ω).
    pub dlnt_dphi_over_sqrt3: Cyclotomic,
    pub nu_c: Rational,
    pub nu_nc: Rational,
}

fn require_rational(what: &'static str, x: &Cyclotomic) -> Result<Rational> {
    x.to_rational().ok_or_else(|| Error::Inconsistency {
        what,
        detail: format!("expected a rational value, got {x}"),
    })
}

/// ν_c and ν_nc from the derivatives of the transfer eigenvalue, compared
/// with the closed forms.
pub fn densities_via_tq(n: u32) -> Result<DerivativeBundle> {
    let sol = build_fsz(n)?;
    let a = quantity_a(&sol)?;
    let c = quantity_c(&sol)?;
    if quantity_c_twist_derivative(&sol) != c {
        return Err(Error::Inconsistency {
            what: "C",
            detail: "twist derivative disagrees with direct evaluation".into(),
        });
    }
    let c_rat = require_rational("C", &c)?;
    if !c_rat.is_negative() {
        return Err(Error::Inconsistency { what: "C", detail: format!("expected negative, got {c_rat}") });
    }
    let nu_c = require_rational("nu_c", &assemble_nu_c(n, &a)?)?;
    let nu_nc = -(&c_rat / &(Rational::from(2 * n as i64) * four_pow(n)));
    for (what, got, want) in [("nu_c", &nu_c, nu_c_exact(n)), ("nu_nc", &nu_nc, nu_nc_exact(n))] {
        if *got != want {
            return Err(Error::Mismatch {
                what: format!("{what} at N = {n}"),
                computed: got.to_string(),
                expected: want.to_string(),
            });
        }
    }
    let inv4n = four_pow(n).recip()?;
    Ok(DerivativeBundle {
        n,
        dlnt_dq: a.scale(&(Rational::from(3) * &inv4n)),
        dlnt_dphi_over_sqrt3: c.scale(&inv4n),
        a,
        c,
        nu_c,
        nu_nc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(a: (i64, i64), b: (i64, i64)) -> Cyclotomic {
        Cyclotomic::new(Rational::frac(a.0, a.1), Rational::frac(b.0, b.1))
    }

    #[test]
    fn a_small_values() {
        let s1 = build_fsz(1).unwrap();
        let a1 = quantity_a(&s1).unwrap();
        assert_eq!(a1, cyc((-1, 1), (-1, 1)));
        assert_eq!(a1, -(Cyclotomic::one() - qp(-2)));
        let s2 = build_fsz(2).unwrap();
        assert_eq!(quantity_a(&s2).unwrap(), cyc((-42, 5), (-42, 5)));
    }

    #[test]
    fn a_routes_agree() {
        for n in 1..=10 {
            let s = build_fsz(n).unwrap();
            let a = quantity_a(&s).unwrap();
            assert_eq!(quantity_a_frozen_roots(&s).unwrap(), a, "N = {n}");
            assert_eq!(quantity_a_f_form(&s).unwrap(), a, "N = {n}");
        }
    }

    #[test]
    fn c_small_values_and_rationality() {
        assert_eq!(quantity_c(&build_fsz(1).unwrap()).unwrap(), Cyclotomic::from(-1));
        assert_eq!(
            quantity_c(&build_fsz(2).unwrap()).unwrap(),
            Cyclotomic::from(Rational::frac(-11, 5))
        );
        for n in 1..=12 {
            let s = build_fsz(n).unwrap();
            let c = quantity_c(&s).unwrap();
            assert!(c.is_rational());
            assert_eq!(quantity_c_twist_derivative(&s), c);
        }
    }

    #[test]
    fn densities_match_published_values() {
        let b = densities_via_tq(1).unwrap();
        assert_eq!((b.nu_c, b.nu_nc), (Rational::frac(1, 8), Rational::frac(1, 8)));
        let b = densities_via_tq(5).unwrap();
        assert_eq!((b.nu_c, b.nu_nc), (Rational::frac(14569, 146432), Rational::frac(4189, 732160)));
        let b = densities_via_tq(6).unwrap();
        assert_eq!(
            (b.nu_c, b.nu_nc),
            (Rational::frac(3945737, 39829504), Rational::frac(952067, 238977024))
        );
    }
}
