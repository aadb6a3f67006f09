//! Contiguous Kummer evaluations of ₂F₁(a, b; 1+a−b±n; −1) and the
//! gamma-ratio forms of f_Q, f_P at x = q^{±2}. These are cross-checks; the
//! production path always sums the terminating series.

use num_traits::ToPrimitive;
use serde::Serialize;

use super::{build_fsz, hyp2f1_terminating};
use crate::error::{Error, Result};
use crate::exact::special::{binomial, gamma};
use crate::exact::{gamma_ratio, pochhammer, Cyclotomic, Rational};

fn half(x: &Rational) -> Rational {
    x * &Rational::frac(1, 2)
}

fn shift_of(b: &Rational) -> Result<i64> {
    b.to_i64()
        .filter(|&v| v <= 0)
        .ok_or_else(|| Error::InvalidArgument(format!("b = {b} is not a nonpositive integer")))
}

/// Gamma-ratio side of the contiguous Kummer identity with c = 1+a−b+n for
/// `n ≥ 0` and c = 1+a−b−|n| for `n < 0`. Exact when b is a nonpositive
/// integer.
pub fn kummer_contiguous(a: &Rational, b: &Rational, n: i32) -> Result<Rational> {
    let b_int = shift_of(b)?;
    let m = n.unsigned_abs() as u64;
    let mut sum = Rational::zero();
    if n >= 0 {
        // Γ(1+a−b+m)Γ(1−b) / (2Γ(a)Γ(1−b+m)) Σ (−1)^k C(m,k) Γ(a/2+k/2)/Γ(a/2+k/2−b+1)
        let pref = gamma_ratio(a, 1 - b_int + m as i64)?
            / pochhammer(&Rational::from(1 - b_int), m as u32);
        for k in 0..=m {
            let x = half(&(a + &Rational::from(k as i64)));
            let term = Rational::from_integer(binomial(m, k)) * gamma_ratio(&x, 1 - b_int)?.recip()?;
            sum = if k % 2 == 0 { sum + term } else { sum - term };
        }
        Ok(half(&(pref * sum)))
    } else {
        // Γ(1+a−b−m) / (2Γ(a)) Σ C(m,k) Γ(a/2+k/2)/Γ(a/2+k/2−b+1−m)
        let shift = 1 - b_int - m as i64;
        let pref = gamma_ratio(a, shift)?;
        for k in 0..=m {
            let x = half(&(a + &Rational::from(k as i64)));
            sum = sum + Rational::from_integer(binomial(m, k)) * gamma_ratio(&x, shift)?.recip()?;
        }
        Ok(half(&(pref * sum)))
    }
}

/// The same gamma-ratio side evaluated with double-precision Γ.
pub fn kummer_contiguous_f64(a: f64, b: f64, n: i32) -> f64 {
    let m = n.unsigned_abs() as u64;
    let mf = m as f64;
    let choose = |k: u64| binomial(m, k).to_f64().unwrap_or(f64::NAN);
    let mut sum = 0.0;
    if n >= 0 {
        let pref = gamma(1.0 + a - b + mf) * gamma(1.0 - b) / (2.0 * gamma(a) * gamma(1.0 - b + mf));
        for k in 0..=m {
            let x = 0.5 * (a + k as f64);
            let term = choose(k) * gamma(x) / gamma(x - b + 1.0);
            sum += if k % 2 == 0 { term } else { -term };
        }
        pref * sum
    } else {
        let pref = gamma(1.0 + a - b - mf) / (2.0 * gamma(a));
        for k in 0..=m {
            let x = 0.5 * (a + k as f64);
            sum += choose(k) * gamma(x) / gamma(x - b + 1.0 - mf);
        }
        pref * sum
    }
}

/// One parameter point of the Kummer sweep.
#[derive(Clone, Debug, Serialize)]
pub struct KummerCase {
    pub n_size: u32,
    pub a: Rational,
    pub b: Rational,
    pub shift: i32,
    pub series: Rational,
    pub gamma_form: Rational,
    /// Relative deviation of the double-precision gamma form from the
    /// exact series.
    pub float_rel_err: f64,
}

impl KummerCase {
    pub fn exact_match(&self) -> bool {
        self.series == self.gamma_form
    }

    pub fn error(&self) -> f64 {
        let exact = (self.series.clone() - self.gamma_form.clone()).to_f64().abs()
            / self.series.to_f64().abs().max(1.0);
        exact.max(self.float_rel_err)
    }
}

fn r(n: i64, d: i64) -> Rational {
    Rational::frac(n, d)
}

/// Parameter pairs (a, b) of the series in f_Q and f_P at size N, together
/// with the pairs (a+1, b+1) produced by differentiating them.
fn sweep_pairs(n: u32) -> Vec<(Rational, Rational)> {
    let nr = Rational::from(n as i64);
    let one = Rational::one();
    let base = [
        (r(1, 3) - &nr, -&nr),
        (r(2, 3) - &nr, &one - &nr),
        (r(2, 3) - &nr, -&nr),
        (r(1, 3) - &nr, &one - &nr),
    ];
    let mut out = Vec::new();
    for (a, b) in base {
        let up = (&a + &one, &b + &one);
        out.push((a, b));
        if !up.1.is_positive() {
            out.push(up);
        }
    }
    out
}

/// Gamma form vs terminating series at t = −1 for every pair arising at
/// N = 1…n_max and every shift in −2…2.
pub fn kummer_sweep(n_max: u32) -> Result<Vec<KummerCase>> {
    let mut cases = Vec::new();
    let minus_one = Cyclotomic::from(-1);
    for n_size in 1..=n_max {
        for (a, b) in sweep_pairs(n_size) {
            for shift in -2..=2 {
                let c = Rational::one() + &a - &b + Rational::from(shift as i64);
                let series = hyp2f1_terminating(&a, &b, &c, &minus_one)?
                    .to_rational()
                    .expect("rational series");
                let gamma_form = kummer_contiguous(&a, &b, shift)?;
                let float = kummer_contiguous_f64(a.to_f64(), b.to_f64(), shift);
                let float_rel_err = (float - series.to_f64()).abs() / series.to_f64().abs().max(1.0);
                cases.push(KummerCase { n_size, a: a.clone(), b: b.clone(), shift, series, gamma_form, float_rel_err });
            }
        }
    }
    Ok(cases)
}

/// f_Q and f_P at a single point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedValues {
    pub f_q: Cyclotomic,
    pub f_p: Cyclotomic,
}

/// Gamma-ratio closed forms of f_Q(q^{2s}) and f_P(q^{2s}) for s = ±1, with
/// every ratio Γ(c − N/2)/Γ(c + N/2) written as 1/(c − N/2)_N. Checked
/// against direct evaluation of the polynomials.
pub fn fq_fp_closed_eval(n: u32, sign: i32) -> Result<ClosedValues> {
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidArgument(format!("sign must be ±1, got {sign}")));
    }
    let half_n = Rational::frac(n as i64, 2);
    let ratio = |c: Rational| pochhammer(&(c - &half_n), n).recip();
    let (r16, r23, r13, r56) = (ratio(r(1, 6))?, ratio(r(2, 3))?, ratio(r(1, 3))?, ratio(r(5, 6))?);
    let nr = Rational::from(n as i64);
    let s = sign as i64;

    let parity = if n.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let q_pref = pochhammer(&(r(2, 3) - &nr), n) * parity * r(1, 2);
    let q_inner = Cyclotomic::from(&r16 + &r23)
        - Cyclotomic::omega_pow(-2 * s).scale(&(&r13 - &r56));
    let f_q = q_inner.scale(&q_pref);

    let p_pref = pochhammer(&r(2, 3), n) * r(1, 2);
    let p_inner = Cyclotomic::from(&r13 + &r56)
        + Cyclotomic::omega_pow(2 * s).scale(&(&r16 - &r23));
    let f_p = p_inner.scale(&p_pref);

    let sol = build_fsz(n)?;
    let x = Cyclotomic::omega_pow(2 * s);
    for (what, closed, direct) in [("f_Q", &f_q, sol.f_q.eval(&x)), ("f_P", &f_p, sol.f_p.eval(&x))] {
        if *closed != direct {
            return Err(Error::Mismatch {
                what: format!("{what}(q^{}) at N = {n}", 2 * s),
                computed: closed.to_string(),
                expected: direct.to_string(),
            });
        }
    }
    Ok(ClosedValues { f_q, f_p })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kummer_base_case_matches_series() {
        let (a, b) = (r(-2, 3), r(-1, 1));
        let c = Rational::one() + &a - &b;
        let series = hyp2f1_terminating(&a, &b, &c, &Cyclotomic::from(-1)).unwrap();
        assert_eq!(Cyclotomic::from(kummer_contiguous(&a, &b, 0).unwrap()), series);
        assert!((kummer_contiguous_f64(-2.0 / 3.0, -1.0, 0) - series.to_complex().re).abs() < 1e-12);
    }

    #[test]
    fn sweep_is_exact_up_to_8() {
        let cases = kummer_sweep(8).unwrap();
        assert!(cases.len() >= 8 * 4 * 5);
        for c in &cases {
            assert!(c.exact_match(), "{c:?}");
            assert!(c.float_rel_err < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn non_terminating_b_rejected() {
        assert!(kummer_contiguous(&r(1, 3), &r(1, 2), 1).is_err());
    }

    #[test]
    fn closed_values_match_and_conjugate() {
        for n in 1..=25 {
            let plus = fq_fp_closed_eval(n, 1).unwrap();
            let minus = fq_fp_closed_eval(n, -1).unwrap();
            assert_eq!(minus.f_q, plus.f_q.conj());
            assert_eq!(minus.f_p, plus.f_p.conj());
        }
        let s1 = build_fsz(1).unwrap();
        assert_eq!(fq_fp_closed_eval(1, 1).unwrap().f_q, s1.f_q.eval(&Cyclotomic::omega_pow(2)));
        assert!(fq_fp_closed_eval(1, 0).is_err());
    }
}
