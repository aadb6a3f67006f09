use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::closed_form::nu_nc_exact;
use crate::error::{Error, Result};

/// Twisted six-vertex weights at spectral parameter z.
#[derive(Clone, Debug, PartialEq)]
pub struct SixVertexWeights {
    pub a1: Complex64,
    pub a2: Complex64,
    pub b1: Complex64,
    pub b2: Complex64,
    pub c1: Complex64,
    pub c2: Complex64,
    pub z: Complex64,
    pub phi: f64,
    pub q: Complex64,
}

impl SixVertexWeights {
    /// a₁ = z e^{iφ/L}, a₂ = z e^{−iφ/L}, b₁ = e^{−iφ/L}, b₂ = e^{iφ/L},
    /// c₁ = z q^{1/2} + q^{−1/2}, c₂ = q^{1/2} + z q^{−1/2}, with q = e^{iπ/3}.
    pub fn new(l: usize, z: Complex64, phi: f64) -> Self {
        let q = Complex64::from_polar(1.0, PI / 3.0);
        let twist = Complex64::from_polar(1.0, phi / l as f64);
        let sq = q.sqrt();
        SixVertexWeights {
            a1: z * twist,
            a2: z / twist,
            b1: 1.0 / twist,
            b2: twist,
            c1: z * sq + 1.0 / sq,
            c2: sq + z / sq,
            z,
            phi,
            q,
        }
    }

    /// Weight of a vertex with horizontal arrows (in, out) and vertical
    /// arrows (in, out); 0 points right/up, 1 left/down. The twist phase
    /// follows the horizontal arrow.
    fn vertex(&self, h_in: usize, v_in: usize, h_out: usize, v_out: usize) -> Complex64 {
        match (h_in, v_in, h_out, v_out) {
            (0, 0, 0, 0) => self.a1,
            (1, 1, 1, 1) => self.a2,
            (0, 1, 0, 1) => self.b2,
            (1, 0, 1, 0) => self.b1,
            (0, 1, 1, 0) => self.c1,
            (1, 0, 0, 1) => self.c2,
            _ => Complex64::new(0.0, 0.0),
        }
    }
}

/// Row transfer matrix T[out, in] on 2^L vertical arrow configurations,
/// traced over the periodic horizontal line.
pub fn transfer_matrix_6v(l: usize, w: &SixVertexWeights) -> DMatrix<Complex64> {
    let n = 1usize << l;
    let mut t = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for v_in in 0..n {
        for v_out in 0..n {
            if v_in.count_ones() != v_out.count_ones() {
                continue;
            }
            let mut total = Complex64::new(0.0, 0.0);
            for h0 in 0..2 {
                let mut amp = Complex64::new(1.0, 0.0);
                let mut h = h0;
                for x in 0..l {
                    let (bi, bo) = (v_in >> x & 1, v_out >> x & 1);
                    // arrow conservation fixes the outgoing horizontal arrow
                    let Some(h_next) = (h + bi).checked_sub(bo).filter(|&v| v <= 1) else {
                        amp = Complex64::new(0.0, 0.0);
                        break;
                    };
                    amp *= w.vertex(h, bi, h_next, bo);
                    h = h_next;
                }
                if h == h0 {
                    total += amp;
                }
            }
            t[(v_out, v_in)] = total;
        }
    }
    t
}

fn leading_eigenvalue(l: usize, phi: f64) -> Result<(Complex64, f64)> {
    let t = transfer_matrix_6v(l, &SixVertexWeights::new(l, Complex64::new(1.0, 0.0), phi));
    let eig = t
        .eigenvalues()
        .ok_or_else(|| Error::Eigen(format!("Schur iteration failed for L = {l}")))?;
    let mut sorted: Vec<Complex64> = eig.iter().copied().collect();
    sorted.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    let gap = sorted[0].norm() - sorted.get(1).map_or(0.0, |z| z.norm());
    Ok((sorted[0], gap))
}

/// Numeric six-vertex cross-check at the stochastic point.
#[derive(Clone, Debug, Serialize)]
pub struct SixVertexReport {
    pub l: usize,
    pub delta_phi: f64,
    pub lambda_max: (f64, f64),
    /// |Λ_max − 2^L|
    pub lambda_error: f64,
    /// |Λ_max(φ) − Λ_max(−φ)|
    pub symmetry_error: f64,
    /// Gap in modulus to the next eigenvalue.
    pub spectral_gap: f64,
    pub nu_nc_estimate: f64,
    pub nu_nc_exact: f64,
    pub nu_nc_error: f64,
}

impl SixVertexReport {
    pub fn passes(&self, eigen_tol: f64, derivative_tol: f64) -> bool {
        self.lambda_error < eigen_tol && self.symmetry_error < eigen_tol && self.nu_nc_error < derivative_tol
    }
}

/// Leading eigenvalue at φ = π/3 and the central-difference estimate of
/// ν_nc = −(1/(2√3 N)) d ln Λ/dφ.
pub fn sixvertex_check(l: usize, delta_phi: f64) -> Result<SixVertexReport> {
    if l < 2 || l % 2 == 1 || l > 8 {
        return Err(Error::InvalidArgument(format!("L = {l} must be even and in 2..=8")));
    }
    if !(1e-6..=1e-3).contains(&delta_phi) {
        return Err(Error::InvalidArgument(format!("delta_phi = {delta_phi} outside [1e-6, 1e-3]")));
    }
    let phi = PI / 3.0;
    let (lambda, gap) = leading_eigenvalue(l, phi)?;
    if gap < 1e-9 {
        return Err(Error::Eigen(format!("leading eigenvalue degenerate in modulus at L = {l}")));
    }
    let (mirror, _) = leading_eigenvalue(l, -phi)?;
    let (up, _) = leading_eigenvalue(l, phi + delta_phi)?;
    let (down, _) = leading_eigenvalue(l, phi - delta_phi)?;
    let dlog = (up.ln() - down.ln()) / (2.0 * delta_phi);
    let n = (l / 2) as f64;
    let estimate = -dlog.re / (2.0 * 3f64.sqrt() * n);
    let exact = nu_nc_exact((l / 2) as u32).to_f64();
    Ok(SixVertexReport {
        l,
        delta_phi,
        lambda_max: (lambda.re, lambda.im),
        lambda_error: (lambda - Complex64::new((1u64 << l) as f64, 0.0)).norm(),
        symmetry_error: (lambda - mirror).norm(),
        spectral_gap: gap,
        nu_nc_estimate: estimate,
        nu_nc_exact: exact,
        nu_nc_error: (estimate - exact).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_at_stochastic_point() {
        let w = SixVertexWeights::new(4, Complex64::new(1.0, 0.0), PI / 3.0);
        assert!((w.a1 - w.a2.conj()).norm() < 1e-15);
        assert!((w.b1 - w.b2.conj()).norm() < 1e-15);
        assert!((w.c1 - w.c2).norm() < 1e-15 && w.c1.im.abs() < 1e-15);
        assert!((w.c1.re - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn leading_eigenvalue_is_power_of_two() {
        for l in [2, 4, 6] {
            let rep = sixvertex_check(l, 1e-4).unwrap();
            assert!(rep.lambda_error < 1e-9, "{rep:?}");
            assert!(rep.symmetry_error < 1e-9, "{rep:?}");
        }
    }

    #[test]
    fn twist_derivative_gives_winding_density() {
        let rep = sixvertex_check(4, 1e-4).unwrap();
        assert!(rep.nu_nc_error < 1e-6, "{rep:?}");
    }

    #[test]
    fn argument_guards() {
        assert!(sixvertex_check(3, 1e-4).is_err());
        assert!(sixvertex_check(4, 1e-2).is_err());
    }
}
