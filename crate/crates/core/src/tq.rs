//! Exact coefficient-wise checks of the functional equations satisfied by
//! Q, P and T at the stochastic point, e^{iφ} = q = ω.
//!
//! With M = N Bethe roots the factors (−q)^{2M−L} equal one and are
//! dropped throughout.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::exact::{CycPolynomial, Cyclotomic};
use crate::fsz::{
    bethe_residual, build_fsz, densities_via_tq, fq_fp_closed_eval, kummer_sweep, quantity_a_f_form,
    quantity_a_frozen_roots, quantity_a_with, quantity_c, quantity_c_twist_derivative, FszSolution,
};

/// Outcome of one identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Check {
    Pass,
    /// The identity fails; `coefficient` is the first differing power of u
    /// when the failure is a polynomial mismatch.
    Fail { coefficient: Option<usize>, detail: String },
}

impl Check {
    pub fn passed(&self) -> bool {
        matches!(self, Check::Pass)
    }

    fn compare(lhs: &CycPolynomial, rhs: &CycPolynomial, what: &str) -> Check {
        match lhs.first_mismatch(rhs) {
            None => Check::Pass,
            Some(k) => Check::Fail {
                coefficient: Some(k),
                detail: format!("{what}: u^{k} coefficient {} vs {}", lhs.coeff(k), rhs.coeff(k)),
            },
        }
    }

    fn from_result<T>(r: crate::Result<T>) -> Check {
        match r {
            Ok(_) => Check::Pass,
            Err(e) => Check::Fail { coefficient: None, detail: e.to_string() },
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Pass => f.write_str("PASS"),
            Check::Fail { detail, .. } => write!(f, "FAIL ({detail})"),
        }
    }
}

fn qp(k: i64) -> Cyclotomic {
    Cyclotomic::omega_pow(k)
}

fn twisted_bilinear(a: &CycPolynomial, b: &CycPolynomial, k: i64, twist: i64) -> CycPolynomial {
    // [e^{twist·iφ} a(q^k u) b(q^{−k} u) − e^{−twist·iφ} a(q^{−k} u) b(q^k u)] / (q − q⁻¹)
    let plus = (&a.scale_arg(&qp(k)) * &b.scale_arg(&qp(-k))).scale(&qp(twist));
    let minus = (&a.scale_arg(&qp(-k)) * &b.scale_arg(&qp(k))).scale(&qp(-twist));
    let inv = Cyclotomic::i_sqrt3().inverse().expect("nonzero");
    (&plus - &minus).scale(&inv)
}

/// T(u) rebuilt from Q and P equals (1+u)^{2N}, and T(1) = 2^{2N}.
pub fn verify_t_form(sol: &FszSolution) -> Check {
    let t = twisted_bilinear(&sol.q, &sol.p, 2, 2);
    let check = Check::compare(&t, &sol.t, "T(u)");
    if !check.passed() {
        return check;
    }
    let at_one = t.eval(&Cyclotomic::one());
    let expected = Cyclotomic::from(crate::Rational::from(4).pow(sol.n as i32).expect("nonzero base"));
    if at_one != expected {
        return Check::Fail { coefficient: None, detail: format!("T(1) = {at_one}, expected {expected}") };
    }
    Check::Pass
}

/// Quantum Wronskian: [q Q(qu)P(q⁻¹u) − q⁻¹ Q(q⁻¹u)P(qu)]/(q − q⁻¹) = (1−u)^{2N}.
pub fn verify_wronskian(sol: &FszSolution) -> Check {
    Check::compare(&twisted_bilinear(&sol.q, &sol.p, 1, 1), &sol.phi(), "Wronskian")
}

/// T·Q = q φ(u/q) Q(q²u) + q⁻¹ φ(qu) Q(q⁻²u) and
/// T·P = q⁻¹ φ(u/q) P(q²u) + q φ(qu) P(q⁻²u).
pub fn verify_tq_tp(sol: &FszSolution) -> Check {
    let phi = sol.phi();
    let (phi_down, phi_up) = (phi.scale_arg(&qp(-1)), phi.scale_arg(&qp(1)));
    let side = |f: &CycPolynomial, first: i64| {
        &(&phi_down * &f.scale_arg(&qp(2))).scale(&qp(first))
            + &(&phi_up * &f.scale_arg(&qp(-2))).scale(&qp(-first))
    };
    let tq = Check::compare(&(&sol.t * &sol.q), &side(&sol.q, 1), "T-Q");
    if !tq.passed() {
        return tq;
    }
    Check::compare(&(&sol.t * &sol.p), &side(&sol.p, -1), "T-P")
}

/// Identities covered by [`verify_suite`], in report order.
pub const IDENTITIES: [&str; 6] = ["t_form", "wronskian", "tq_tp", "divisibility", "closed_values", "densities"];

/// One line of the verification report.
#[derive(Clone, Debug, Serialize)]
pub struct ReportRow {
    pub identity: &'static str,
    pub n: u32,
    #[serde(flatten)]
    pub check: Check,
}

/// f_Q and f_P have rational coefficients and equal (1+x)^{2N}·Q, (1+x)^{2N}·P.
pub fn verify_divisibility(sol: &FszSolution) -> Check {
    if !(sol.f_q.has_rational_coefficients() && sol.f_p.has_rational_coefficients()) {
        return Check::Fail { coefficient: None, detail: "irrational coefficient in f_Q or f_P".into() };
    }
    let fq = Check::compare(&(&sol.q * &sol.t), &sol.f_q, "f_Q");
    if !fq.passed() {
        return fq;
    }
    Check::compare(&(&sol.p * &sol.t), &sol.f_p, "f_P")
}

fn rows_for(n: u32) -> Vec<ReportRow> {
    let row = |identity, check| ReportRow { identity, n, check };
    let sol = match build_fsz(n) {
        Ok(sol) => sol,
        Err(e) => {
            let check = Check::Fail { coefficient: None, detail: e.to_string() };
            return IDENTITIES.iter().map(|id| row(id, check.clone())).collect();
        }
    };
    let closed = Check::from_result(fq_fp_closed_eval(n, 1).and_then(|_| fq_fp_closed_eval(n, -1)));
    vec![
        row(IDENTITIES[0], verify_t_form(&sol)),
        row(IDENTITIES[1], verify_wronskian(&sol)),
        row(IDENTITIES[2], verify_tq_tp(&sol)),
        row(IDENTITIES[3], verify_divisibility(&sol)),
        row(IDENTITIES[4], closed),
        row(IDENTITIES[5], Check::from_result(densities_via_tq(n))),
    ]
}

/// Runs every identity for N = 1…n_max; rows are ordered by identity, then
/// by N.
pub fn verify_suite(n_max: u32) -> Vec<ReportRow> {
    let per_n: Vec<Vec<ReportRow>> = (1..=n_max).into_par_iter().map(rows_for).collect();
    let mut rows: Vec<ReportRow> = per_n.into_iter().flatten().collect();
    rows.sort_by_key(|r| (IDENTITIES.iter().position(|id| *id == r.identity), r.n));
    rows
}

/// Checks of the polynomial construction itself, in report order.
pub const FSZ_CHECKS: [&str; 3] = ["construction", "derivative_routes", "bethe"];

/// Largest accepted Bethe-equation residual.
pub const BETHE_TOLERANCE: f64 = 1e-8;

fn derivative_routes(sol: &FszSolution) -> Check {
    let routes = || -> crate::Result<Option<String>> {
        let a = quantity_a_with(sol, false)?;
        let frozen = quantity_a_frozen_roots(sol)?;
        let f_form = quantity_a_f_form(sol)?;
        let c = quantity_c(sol)?;
        let twist = quantity_c_twist_derivative(sol);
        Ok(if a != frozen || a != f_form {
            Some(format!("A = {a}, frozen roots {frozen}, f form {f_form}"))
        } else if c != twist {
            Some(format!("C = {c}, twist derivative {twist}"))
        } else {
            None
        })
    };
    match routes() {
        Ok(None) => Check::Pass,
        Ok(Some(detail)) => Check::Fail { coefficient: None, detail },
        Err(e) => Check::Fail { coefficient: None, detail: e.to_string() },
    }
}

fn fsz_rows_for(n: u32) -> Vec<ReportRow> {
    let row = |identity, check| ReportRow { identity, n, check };
    let sol = match build_fsz(n) {
        Ok(sol) => sol,
        Err(e) => {
            let check = Check::Fail { coefficient: None, detail: e.to_string() };
            return FSZ_CHECKS.iter().map(|id| row(id, check.clone())).collect();
        }
    };
    let monic = sol.q.degree() == Some(n as usize)
        && sol.p.degree() == Some(n as usize)
        && sol.q.coeff(n as usize) == Cyclotomic::one();
    let construction = if monic && sol.q.has_rational_coefficients() && sol.p.has_rational_coefficients() {
        Check::Pass
    } else {
        Check::Fail { coefficient: None, detail: "Q or P not a rational monic polynomial of degree N".into() }
    };
    let bethe = match bethe_residual(&sol) {
        Ok(r) if r < BETHE_TOLERANCE => Check::Pass,
        Ok(r) => Check::Fail { coefficient: None, detail: format!("residual {r:.3e}") },
        Err(e) => Check::Fail { coefficient: None, detail: e.to_string() },
    };
    vec![
        row(FSZ_CHECKS[0], construction),
        row(FSZ_CHECKS[1], derivative_routes(&sol)),
        row(FSZ_CHECKS[2], bethe),
    ]
}

/// Construction, derivative and Bethe-root checks for N = 1…n_max.
pub fn fsz_suite(n_max: u32) -> Vec<ReportRow> {
    let per_n: Vec<Vec<ReportRow>> = (1..=n_max).into_par_iter().map(fsz_rows_for).collect();
    let mut rows: Vec<ReportRow> = per_n.into_iter().flatten().collect();
    rows.sort_by_key(|r| (FSZ_CHECKS.iter().position(|id| *id == r.identity), r.n));
    rows
}

/// Largest accepted deviation of the double-precision gamma form.
pub const KUMMER_TOLERANCE: f64 = 1e-12;

/// One row per N: every Kummer contiguous case arising at that size.
pub fn kummer_suite(n_max: u32) -> Vec<ReportRow> {
    let cases = match kummer_sweep(n_max) {
        Ok(cases) => cases,
        Err(e) => {
            let check = Check::Fail { coefficient: None, detail: e.to_string() };
            return (1..=n_max).map(|n| ReportRow { identity: "kummer", n, check: check.clone() }).collect();
        }
    };
    (1..=n_max)
        .map(|n| {
            let bad = cases
                .iter()
                .filter(|c| c.n_size == n)
                .find(|c| !c.exact_match() || c.float_rel_err.is_nan() || c.float_rel_err >= KUMMER_TOLERANCE);
            let check = match bad {
                None => Check::Pass,
                Some(c) => Check::Fail {
                    coefficient: None,
                    detail: format!(
                        "a = {}, b = {}, shift {}: series {} vs gamma form {} (float error {:.2e})",
                        c.a, c.b, c.shift, c.series, c.gamma_form, c.float_rel_err
                    ),
                },
            };
            ReportRow { identity: "kummer", n, check }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n1_by_hand() {
        let sol = build_fsz(1).unwrap();
        let t = twisted_bilinear(&sol.q, &sol.p, 2, 2);
        assert_eq!(t, CycPolynomial::from_rationals([1, 2, 1].map(crate::Rational::from)));
        assert!(verify_t_form(&sol).passed());
        assert!(verify_wronskian(&sol).passed());
        assert!(verify_tq_tp(&sol).passed());
    }

    #[test]
    fn identities_hold_up_to_10() {
        for n in 1..=10 {
            let sol = build_fsz(n).unwrap();
            assert_eq!(verify_t_form(&sol), Check::Pass, "N = {n}");
            assert_eq!(verify_wronskian(&sol), Check::Pass, "N = {n}");
            assert_eq!(verify_tq_tp(&sol), Check::Pass, "N = {n}");
        }
    }

    #[test]
    fn broken_q_is_reported() {
        let mut sol = build_fsz(2).unwrap();
        sol.q = &sol.q + &CycPolynomial::constant(Cyclotomic::one());
        assert!(matches!(verify_wronskian(&sol), Check::Fail { coefficient: Some(_), .. }));
        assert!(!verify_tq_tp(&sol).passed());
    }

    #[test]
    fn suite_shape_and_determinism() {
        let one = verify_suite(1);
        assert_eq!(one.len(), IDENTITIES.len());
        let four = verify_suite(4);
        assert_eq!(four.len(), 4 * IDENTITIES.len());
        assert!(four.iter().all(|r| r.check.passed()));
        let again = verify_suite(4);
        let key = |rows: &[ReportRow]| serde_json::to_string(rows).unwrap();
        assert_eq!(key(&four), key(&again));
    }

    #[test]
    fn fsz_and_kummer_suites() {
        let rows = fsz_suite(5);
        assert_eq!(rows.len(), 5 * FSZ_CHECKS.len());
        assert!(rows.iter().all(|r| r.check.passed()), "{rows:?}");
        let rows = kummer_suite(4);
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.check.passed()), "{rows:?}");
    }
}
