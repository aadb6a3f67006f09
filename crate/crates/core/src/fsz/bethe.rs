use num_complex::Complex64;

use super::FszSolution;
use crate::error::{Error, Result};
use crate::exact::{CycPolynomial, Cyclotomic};
use crate::hp::{HpCyc, DEFAULT_PRECISION};

const ABERTH_MAX_ITER: usize = 500;
const NEWTON_MAX_ITER: usize = 100;

fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Simultaneous Aberth–Ehrlich iteration in double precision.
fn aberth(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let lead = coeffs[deg];
    let radius = 1.0 + coeffs[..deg].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(0.5 * radius, 0.4 + std::f64::consts::TAU * k as f64 / deg as f64))
        .collect();
    for _ in 0..ABERTH_MAX_ITER {
        let mut worst: f64 = 0.0;
        for i in 0..deg {
            let (p, dp) = eval_with_derivative(coeffs, z[i]);
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            z[i] -= step;
            worst = worst.max(step.norm() / z[i].norm().max(1.0));
        }
        if worst < 1e-14 {
            return Ok(z);
        }
    }
    // Newton polishing downstream tolerates a rough start.
    Ok(z)
}

fn hp_eval(coeffs: &[HpCyc], x: &HpCyc) -> (HpCyc, HpCyc) {
    let zero = HpCyc::zero(DEFAULT_PRECISION);
    let mut p = zero.clone();
    let mut dp = zero;
    for c in coeffs.iter().rev() {
        dp = &(&dp * x) + &p;
        p = &(&p * x) + c;
    }
    (p, dp)
}

/// Roots of Q: double-precision Aberth start, then Newton on the full
/// (undeflated) polynomial at high precision.
pub fn bethe_roots(q: &CycPolynomial) -> Result<Vec<HpCyc>> {
    let complex: Vec<Complex64> = q.coeffs().iter().map(Cyclotomic::to_complex).collect();
    let hp: Vec<HpCyc> = q.coeffs().iter().map(|c| HpCyc::from_cyclotomic(c, DEFAULT_PRECISION)).collect();
    let tol = 2f64.powi(-(DEFAULT_PRECISION as i32) + 24);
    aberth(&complex)?
        .into_iter()
        .enumerate()
        .map(|(index, start)| {
            let mut u = HpCyc::from_complex(start, DEFAULT_PRECISION);
            for _ in 0..NEWTON_MAX_ITER {
                let (p, dp) = hp_eval(&hp, &u);
                let step = p.div(&dp);
                u = &u - &step;
                if step.abs_f64() <= tol * u.abs_f64().max(1.0) {
                    return Ok(u);
                }
            }
            Err(Error::RootFinding { index, iterations: NEWTON_MAX_ITER })
        })
        .collect()
}

/// Largest violation over the roots u_i of
/// e^{2iφ}((u_i − q)/(1 − q u_i))^{2N} = (−1)^{N−1} ∏_{j≠i} (q²u_j − u_i)/(q²u_i − u_j)
/// at e^{iφ} = q.
pub fn bethe_residual(sol: &FszSolution) -> Result<f64> {
    let roots = bethe_roots(&sol.q)?;
    let p = DEFAULT_PRECISION;
    let q = HpCyc::from_cyclotomic(&Cyclotomic::omega(), p);
    let q2 = HpCyc::from_cyclotomic(&Cyclotomic::omega_pow(2), p);
    let one = HpCyc::one(p);
    let sign = if sol.n % 2 == 1 { one.clone() } else { -&one };
    let mut worst: f64 = 0.0;
    for (i, ui) in roots.iter().enumerate() {
        let ratio = (ui - &q).div(&(&one - &(&q * ui)));
        let lhs = &q2 * &ratio.pow(sol.l());
        let mut rhs = sign.clone();
        for (j, uj) in roots.iter().enumerate() {
            if i != j {
                rhs = &rhs * &(&(&q2 * uj) - ui).div(&(&(&q2 * ui) - uj));
            }
        }
        worst = worst.max((&lhs - &rhs).abs_f64());
    }
    Ok(worst)
}
