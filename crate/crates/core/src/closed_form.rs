//! Exact densities of contractible (ν_c) and non-contractible (ν_nc) loops
//! for circumference L = 2N, their gamma-function forms, and large-L
//! expansions.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::exact::special::{factorial, ln_gamma};
use crate::exact::{pochhammer, Rational};
use crate::hp::{self, HpReal};
use crate::record::{DensityRecord, Method};

fn pow_int(base: i64, exp: u32) -> Rational {
    Rational::from_integer(BigInt::from(base).pow(exp))
}

/// 2^k 3^m for possibly negative exponents.
fn pow2_pow3(k: i64, m: i64) -> Rational {
    let two = if k >= 0 {
        pow_int(2, k as u32)
    } else {
        pow_int(2, (-k) as u32).recip().expect("nonzero")
    };
    let three = if m >= 0 {
        pow_int(3, m as u32)
    } else {
        pow_int(3, (-m) as u32).recip().expect("nonzero")
    };
    two * three
}

fn parity_sign(n: u32) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// ν_c(2N) =
/// 2^{−2(N+1)} 3^{2−3N} (2 − (−1)^N) (3N−1)! / [(N−1)! ((5/6 − N/2)_N)²]
/// + (3/4) ((N+1)/2)_N / (N/2)_N − 5/2.
pub fn nu_c_exact(n: u32) -> Rational {
    assert!(n >= 1, "N must be positive");
    let ni = n as i64;
    let half_n = Rational::frac(ni, 2);
    let p = pochhammer(&(Rational::frac(5, 6) - &half_n), n);
    let first = pow2_pow3(-2 * (ni + 1), 2 - 3 * ni)
        * Rational::from(2 - parity_sign(n))
        * Rational::from_integer(factorial(3 * n as u64 - 1))
        / (Rational::from_integer(factorial(n as u64 - 1)) * &p * &p);
    let second = Rational::frac(3, 4) * pochhammer(&Rational::frac(ni + 1, 2), n)
        / pochhammer(&half_n, n);
    first + second - Rational::frac(5, 2)
}

/// ν_nc(2N) = 3·2^{2(N−1)} (N−1)! / (N (3N−1)!)
/// · [3^{3N−2} (2 + (−1)^N) ((5/6 − N/2)_N)² − ((N/2)_N)²].
pub fn nu_nc_exact(n: u32) -> Rational {
    assert!(n >= 1, "N must be positive");
    let ni = n as i64;
    let half_n = Rational::frac(ni, 2);
    let p = pochhammer(&(Rational::frac(5, 6) - &half_n), n);
    let h = pochhammer(&half_n, n);
    let prefactor = Rational::from(3) * pow2_pow3(2 * (ni - 1), 0)
        * Rational::from_integer(factorial(n as u64 - 1))
        / (Rational::from(ni) * Rational::from_integer(factorial(3 * n as u64 - 1)));
    let bracket = pow2_pow3(0, 3 * ni - 2) * Rational::from(2 + parity_sign(n)) * &p * &p - &h * &h;
    prefactor * bracket
}

/// Gamma-function form of ν_c evaluated in double precision (log-space).
pub fn nu_c_gamma_form(n: u32) -> f64 {
    let nf = n as f64;
    let (pi, ln2, ln3) = (std::f64::consts::PI, 2f64.ln(), 3f64.ln());
    let first = 0.75
        * (ln_gamma(nf / 2.0) + ln_gamma(1.5 * nf + 0.5) - ln_gamma(1.5 * nf) - ln_gamma((nf + 1.0) / 2.0))
            .exp();
    let second = (2.0 * pi.ln() - 2.0 * nf * ln2 + (2.0 - 3.0 * nf) * ln3 + ln_gamma(3.0 * nf)
        - 2.0 * ln_gamma(nf / 2.0 + 1.0 / 6.0)
        - 2.0 * ln_gamma(nf / 2.0 + 5.0 / 6.0)
        - ln_gamma(nf))
    .exp();
    first + second - 2.5
}

/// Gamma-function form of ν_nc evaluated in double precision (log-space).
pub fn nu_nc_gamma_form(n: u32) -> f64 {
    let nf = n as f64;
    let (pi, ln2, ln3) = (std::f64::consts::PI, 2f64.ln(), 3f64.ln());
    let pre = 2.0 * (nf - 2.0) * ln2 + ln_gamma(nf) - nf.ln() - 2.0 * pi.ln() - ln_gamma(3.0 * nf);
    let a = (pre + 3.0 * nf * ln3 + 2.0 * ln_gamma(nf / 2.0 + 1.0 / 6.0) + 2.0 * ln_gamma(nf / 2.0 + 5.0 / 6.0))
        .exp();
    let b = (pre + 12f64.ln() + 2.0 * pi.ln() + 2.0 * ln_gamma(1.5 * nf) - 2.0 * ln_gamma(nf / 2.0)).exp();
    a - b
}

/// Which density an expansion refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Contractible,
    NonContractible,
}

// One term c·(2N)^{−power}; c is rational/√3 when `over_sqrt3`, otherwise
// rational + sqrt3_part·√3.
struct Term {
    rational: Rational,
    sqrt3_part: Rational,
    over_sqrt3: bool,
    power: i32,
}

fn series_terms(quantity: Quantity) -> Vec<Term> {
    let t = |num, den, power| Term {
        rational: Rational::frac(num, den),
        sqrt3_part: Rational::zero(),
        over_sqrt3: true,
        power,
    };
    match quantity {
        // (3√3 − 5)/2 + (1/(4√3))(2N)^{−2} − (23/(48√3))(2N)^{−4}
        Quantity::Contractible => vec![
            Term {
                rational: Rational::frac(-5, 2),
                sqrt3_part: Rational::frac(3, 2),
                over_sqrt3: false,
                power: 0,
            },
            t(1, 4, 2),
            t(-23, 48, 4),
        ],
        // (1/√3)(2N)^{−2} − (17/(18√3))(2N)^{−4} + (1021/(216√3))(2N)^{−6}
        Quantity::NonContractible => vec![t(1, 1, 2), t(-17, 18, 4), t(1021, 216, 6)],
    }
}

fn term_f64(term: &Term, two_n: f64) -> f64 {
    let s3 = 3f64.sqrt();
    let c = if term.over_sqrt3 {
        term.rational.to_f64() / s3
    } else {
        term.rational.to_f64() + term.sqrt3_part.to_f64() * s3
    };
    c * two_n.powi(-term.power)
}

fn partial_sum_f64(quantity: Quantity, n: u32, terms: usize) -> f64 {
    let two_n = 2.0 * n as f64;
    series_terms(quantity).iter().take(terms).map(|t| term_f64(t, two_n)).sum()
}

/// Partial sum of the large-L expansion of ν_c through `order` (0, 1 or 2).
pub fn nu_c_asymptotic(n: u32, order: u32) -> f64 {
    assert!(order <= 2, "order must be 0, 1 or 2");
    partial_sum_f64(Quantity::Contractible, n, order as usize + 1)
}

/// Partial sum of the large-L expansion of ν_nc through `order` (0, 1 or 2);
/// order 0 is the leading (2N)^{−2} term.
pub fn nu_nc_asymptotic(n: u32, order: u32) -> f64 {
    assert!(order <= 2, "order must be 0, 1 or 2");
    partial_sum_f64(Quantity::NonContractible, n, order as usize + 1)
}

/// exact − (first `terms` terms of the expansion), computed at
/// [`hp::DEFAULT_PRECISION`] so that residuals far below one ulp of the
/// density itself are resolved.
pub fn expansion_residual(quantity: Quantity, n: u32, terms: usize) -> f64 {
    let prec = hp::DEFAULT_PRECISION;
    let exact = match quantity {
        Quantity::Contractible => nu_c_exact(n),
        Quantity::NonContractible => nu_nc_exact(n),
    };
    let sqrt3 = hp::sqrt(&hp::real_from_f64(3.0, prec));
    let two_n = Rational::from(2 * n as i64);
    let mut acc: HpReal = hp::real_from_rational(&exact, prec);
    for term in series_terms(quantity).iter().take(terms) {
        let scale = two_n.pow(-term.power).expect("nonzero");
        let c = if term.over_sqrt3 {
            hp::real_from_rational(&(&term.rational * &scale), prec) / &sqrt3
        } else {
            hp::real_from_rational(&(&term.rational * &scale), prec)
                + hp::real_from_rational(&(&term.sqrt3_part * &scale), prec) * &sqrt3
        };
        acc -= c;
    }
    hp::real_to_f64(&acc)
}

/// Records for N = 1…n_max, in order.
pub fn density_table(n_max: u32) -> Vec<DensityRecord> {
    (1..=n_max)
        .into_par_iter()
        .map(|n| DensityRecord::new(n, nu_c_exact(n), nu_nc_exact(n), Method::ClosedForm))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const NU_C: [(i64, i64); 6] = [
        (1, 8),
        (17, 160),
        (913, 8960),
        (3953, 39424),
        (14569, 146432),
        (3945737, 39829504),
    ];
    const NU_NC: [(i64, i64); 6] = [
        (1, 8),
        (11, 320),
        (421, 26880),
        (1403, 157696),
        (4189, 732160),
        (952067, 238977024),
    ];

    #[test]
    fn tabulated_values() {
        for n in 1..=6u32 {
            let (a, b) = NU_C[n as usize - 1];
            assert_eq!(nu_c_exact(n), Rational::frac(a, b), "nu_c N={n}");
            let (a, b) = NU_NC[n as usize - 1];
            assert_eq!(nu_nc_exact(n), Rational::frac(a, b), "nu_nc N={n}");
        }
    }

    #[test]
    fn gamma_forms_agree() {
        for n in 1..=40 {
            let dc = (nu_c_gamma_form(n) - nu_c_exact(n).to_f64()).abs();
            let dnc = (nu_nc_gamma_form(n) - nu_nc_exact(n).to_f64()).abs();
            assert!(dc < 1e-10 && dnc < 1e-10, "N={n}: {dc:e} {dnc:e}");
        }
    }

    #[test]
    fn asymptotic_examples() {
        let c0 = (3.0 * 3f64.sqrt() - 5.0) / 2.0;
        assert!((nu_c_asymptotic(7, 0) - c0).abs() < 1e-15);
        assert!((c0 - 0.098_076_211_3).abs() < 1e-10);
        let c1 = c0 + 1.0 / (16.0 * 3f64.sqrt());
        assert!((nu_c_asymptotic(1, 1) - c1).abs() < 1e-15);
        assert!((nu_nc_asymptotic(1, 0) - 1.0 / (4.0 * 3f64.sqrt())).abs() < 1e-15);
        assert!((nu_nc_asymptotic(1, 0) - 0.14434).abs() < 1e-5);

        let r1 = expansion_residual(Quantity::Contractible, 50, 2).abs();
        let r2 = expansion_residual(Quantity::Contractible, 50, 3).abs();
        assert!(r2 < r1);
    }

    #[test]
    fn nu_nc_order_two_residual_scaling() {
        let r64 = expansion_residual(Quantity::NonContractible, 64, 3);
        let r128 = expansion_residual(Quantity::NonContractible, 128, 3);
        let ratio = r64 / r128;
        assert!((128.0..512.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn limits_at_large_n() {
        let n = 200;
        let c0 = (3.0 * 3f64.sqrt() - 5.0) / 2.0;
        assert!((nu_c_exact(n).to_f64() - c0).abs() < 1e-3);
        let scaled = (2.0 * n as f64).powi(2) * nu_nc_exact(n).to_f64();
        assert!((scaled - 1.0 / 3f64.sqrt()).abs() < 1e-2);
    }

    #[test]
    fn table_shape_and_monotonicity() {
        let t = density_table(2);
        assert_eq!(t.len(), 2);
        assert_eq!((t[0].l, &t[0].nu_c, &t[0].nu_nc), (2, &Rational::frac(1, 8), &Rational::frac(1, 8)));
        assert_eq!((t[1].l, &t[1].nu_c, &t[1].nu_nc), (4, &Rational::frac(17, 160), &Rational::frac(11, 320)));
        let t = density_table(20);
        for w in t.windows(2) {
            assert!(w[1].nu_nc < w[0].nu_nc);
        }
        for r in &t {
            assert!(r.nu_c.is_positive() && r.nu_c < Rational::one());
            assert!(r.nu_nc.is_positive() && r.nu_nc <= r.nu_c);
            assert_eq!(r.method, Method::ClosedForm);
        }
    }
}
