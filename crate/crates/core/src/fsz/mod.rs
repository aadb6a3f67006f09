//! Polynomial solution of the T-Q and T-P equations at the stochastic point
//! and the derivative machinery that turns it into loop densities.
//!
//! Q and P are obtained from terminating Gauss series in t = −x³ divided by
//! (1+x)^{2N}. Everything here is exact in Q(ω) except the Bethe residual.

mod bethe;
mod derivative;
mod kummer;

pub use bethe::{bethe_residual, bethe_roots};
pub use derivative::{
    densities_via_tq, quantity_a, quantity_a_f_form, quantity_a_frozen_roots, quantity_a_with,
    quantity_c, quantity_c_twist_derivative, DerivativeBundle,
};
pub use kummer::{
    fq_fp_closed_eval, kummer_contiguous, kummer_contiguous_f64, kummer_sweep, ClosedValues,
    KummerCase,
};

use crate::error::{Error, Result};
use crate::exact::{gamma_ratio, pochhammer, CycPolynomial, Cyclotomic, Rational};

/// Q, P and their unnormalized forms f_Q, f_P for circumference L = 2N in
/// the sector with N Bethe roots.
#[derive(Clone, Debug)]
pub struct FszSolution {
    pub n: u32,
    pub f_q: CycPolynomial,
    pub f_p: CycPolynomial,
    pub q: CycPolynomial,
    pub p: CycPolynomial,
    /// (1 + x)^{2N}
    pub t: CycPolynomial,
}

/// Coefficients of ₂F₁(a, b; c; t) in powers of t, for b a nonpositive
/// integer.
pub fn hyp2f1_coefficients(a: &Rational, b: &Rational, c: &Rational) -> Result<Vec<Rational>> {
    let terms = b
        .to_i64()
        .filter(|&v| v <= 0)
        .ok_or_else(|| Error::InvalidArgument(format!("series with b = {b} does not terminate")))?;
    let mut out = Vec::with_capacity((1 - terms) as usize);
    let mut term = Rational::one();
    for k in 0..=(-terms) {
        out.push(term.clone());
        if k == -terms {
            break;
        }
        let kr = Rational::from(k);
        let denom = (c + &kr) * (&kr + &Rational::one());
        if denom.is_zero() {
            return Err(Error::Pole { argument: (c + &kr).to_string() });
        }
        term = term * (a + &kr) * (b + &kr) / denom;
    }
    Ok(out)
}

/// Σ_k (a)_k (b)_k / ((c)_k k!) t^k, exact, for terminating b.
pub fn hyp2f1_terminating(a: &Rational, b: &Rational, c: &Rational, t: &Cyclotomic) -> Result<Cyclotomic> {
    let coeffs = hyp2f1_coefficients(a, b, c)?;
    Ok(coeffs
        .iter()
        .rev()
        .fold(Cyclotomic::zero(), |acc, k| &(&acc * t) + &Cyclotomic::from(k.clone())))
}

/// x^shift · ₂F₁(a, b; c; −x³) as a polynomial in x.
fn series_in_x(a: &Rational, b: &Rational, c: &Rational, shift: usize) -> Result<CycPolynomial> {
    let coeffs = hyp2f1_coefficients(a, b, c)?;
    let mut dense = vec![Cyclotomic::zero(); 3 * (coeffs.len() - 1) + 1];
    for (k, ck) in coeffs.into_iter().enumerate() {
        dense[3 * k] = Cyclotomic::from(if k % 2 == 0 { ck } else { -ck });
    }
    Ok(CycPolynomial::new(dense).shift(shift))
}

fn r(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

/// Assembles f_Q, f_P and divides out (1+x)^{2N}.
pub fn build_fsz(n: u32) -> Result<FszSolution> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let ni = n as i64;
    let nr = Rational::from(ni);
    let one = Rational::one();

    // f_Q = Γ(2/3)/Γ(2/3−N) [ Γ(2/3)/Γ(2/3+N) F(1/3−N, −N; 1/3)
    //        + x² N Γ(−2/3)/Γ(1/3+N) F(2/3−N, 1−N; 5/3) ]
    let q_pref = gamma_ratio(&(r(2, 3) - &nr), ni)?;
    let q_lead = gamma_ratio(&r(2, 3), ni)?.recip()?;
    let q_tail = &nr * &gamma_ratio(&r(-2, 3), ni + 1)?.recip()?;
    let f_q = &series_in_x(&(r(1, 3) - &nr), &(-&nr), &r(1, 3), 0)?.scale(&Cyclotomic::from(q_lead))
        + &series_in_x(&(r(2, 3) - &nr), &(&one - &nr), &r(5, 3), 2)?.scale(&Cyclotomic::from(q_tail));
    let f_q = f_q.scale(&Cyclotomic::from(q_pref));

    // f_P = Γ(2/3+N)/Γ(2/3) [ Γ(2/3−N)/Γ(2/3) F(2/3−N, −N; 2/3)
    //        + x N Γ(1/3−N)/Γ(4/3) F(1/3−N, 1−N; 4/3) ]
    let p_pref = pochhammer(&r(2, 3), n);
    let p_lead = pochhammer(&(r(2, 3) - &nr), n).recip()?;
    let p_tail = &nr * &pochhammer(&(r(1, 3) - &nr), n + 1).recip()?;
    let f_p = &series_in_x(&(r(2, 3) - &nr), &(-&nr), &r(2, 3), 0)?.scale(&Cyclotomic::from(p_lead))
        + &series_in_x(&(r(1, 3) - &nr), &(&one - &nr), &r(4, 3), 1)?.scale(&Cyclotomic::from(p_tail));
    let f_p = f_p.scale(&Cyclotomic::from(p_pref));

    let t = CycPolynomial::binomial_power(Cyclotomic::one(), Cyclotomic::one(), 2 * n as usize);
    let q = f_q.divide_exact(&t)?;
    let p = f_p.divide_exact(&t)?;
    Ok(FszSolution { n, f_q, f_p, q, p, t })
}

impl FszSolution {
    /// φ(u) = (1 − u)^{2N}.
    pub fn phi(&self) -> CycPolynomial {
        CycPolynomial::binomial_power(Cyclotomic::one(), Cyclotomic::from(-1), 2 * self.n as usize)
    }

    pub fn l(&self) -> u32 {
        2 * self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[(i64, i64)]) -> CycPolynomial {
        CycPolynomial::from_rationals(c.iter().map(|&(n, d)| r(n, d)))
    }

    #[test]
    fn terminating_series_examples() {
        let one = Cyclotomic::one();
        let minus_one = Cyclotomic::from(-1);
        let f = |a, b, c, t: &Cyclotomic| hyp2f1_terminating(&a, &b, &c, t).unwrap();
        assert_eq!(f(r(5, 7), r(0, 1), r(1, 2), &one), one);
        // two-term sums 1 + (ab/c)·t
        assert_eq!(f(r(-2, 3), r(-1, 1), r(1, 3), &minus_one), Cyclotomic::from(-1));
        assert_eq!(f(r(-2, 3), r(-1, 1), r(1, 3), &one), Cyclotomic::from(3));
        assert_eq!(f(r(-1, 3), r(-1, 1), r(2, 3), &minus_one), Cyclotomic::from(r(1, 2)));
        assert_eq!(f(r(-1, 3), r(-1, 1), r(2, 3), &one), Cyclotomic::from(r(3, 2)));
        assert!(matches!(
            hyp2f1_terminating(&r(1, 3), &r(-3, 1), &r(-1, 1), &one),
            Err(Error::Pole { .. })
        ));
        assert!(hyp2f1_terminating(&r(1, 3), &r(1, 2), &r(1, 1), &one).is_err());
    }

    #[test]
    fn small_solutions() {
        let s = build_fsz(1).unwrap();
        assert_eq!(s.f_q, poly(&[(-1, 2), (0, 1), (3, 2), (1, 1)]));
        assert_eq!(s.q, poly(&[(-1, 2), (1, 1)]));
        assert_eq!(s.f_p, poly(&[(-2, 1), (-3, 1), (0, 1), (1, 1)]));
        assert_eq!(s.p, poly(&[(-2, 1), (1, 1)]));

        let s = build_fsz(2).unwrap();
        assert_eq!(s.f_q.degree(), Some(6));
        assert_eq!(s.q, poly(&[(2, 5), (-8, 5), (1, 1)]));
        assert_eq!(s.p, poly(&[(5, 2), (-4, 1), (1, 1)]));
    }

    #[test]
    fn rational_monic_and_divisible_up_to_25() {
        for n in 1..=25 {
            let s = build_fsz(n).unwrap();
            assert!(s.f_q.has_rational_coefficients() && s.f_p.has_rational_coefficients());
            assert_eq!(s.q.degree(), Some(n as usize));
            assert_eq!(s.p.degree(), Some(n as usize));
            assert!(s.q.leading().unwrap() == &Cyclotomic::one());
            assert!(s.p.leading().unwrap() == &Cyclotomic::one());
            assert_eq!(&s.q * &s.t, s.f_q);
            assert_eq!(&s.p * &s.t, s.f_p);
        }
    }
}
