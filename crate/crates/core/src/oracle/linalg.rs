//! Fraction-free (Bareiss) elimination for exact null vectors of integer
//! matrices.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Normalized left null vector (entries summing to one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullVector {
    pub entries: Vec<Rational>,
}

/// Row echelon form by Bareiss elimination; returns the pivot columns.
fn bareiss(a: &mut [Vec<BigInt>]) -> Vec<usize> {
    let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// The unique (up to scale) x with x·m = 0, normalized so Σx = 1.
///
/// Fails with `NonSimplePerron` if the left null space is not
/// one-dimensional.
pub fn left_null_vector(m: &[Vec<BigInt>]) -> Result<NullVector> {
    let n = m.len();
    let mut t: Vec<Vec<BigInt>> = (0..n).map(|j| (0..n).map(|i| m[i][j].clone()).collect()).collect();
    let pivots = bareiss(&mut t);
    let nullity = n - pivots.len();
    if nullity != 1 {
        return Err(Error::NonSimplePerron { nullity });
    }
    let free = (0..n).find(|c| !pivots.contains(c)).expect("one free column");
    let mut x = vec![Rational::zero(); n];
    x[free] = Rational::one();
    for (row, &pc) in pivots.iter().enumerate().rev() {
        let mut acc = Rational::zero();
        for j in pc + 1..n {
            if !t[row][j].is_zero() {
                acc += &(Rational::from(t[row][j].clone()) * &x[j]);
            }
        }
        x[pc] = -(acc / Rational::from(t[row][pc].clone()));
    }
    for j in 0..n {
        let dot: Rational = m.iter().zip(&x).map(|(row, xi)| Rational::from(row[j].clone()) * xi).sum();
        if !dot.is_zero() {
            return Err(Error::Inconsistency { what: "null vector", detail: format!("column {j} gives {dot}") });
        }
    }
    let total: Rational = x.iter().cloned().sum();
    if total.is_zero() {
        return Err(Error::Inconsistency { what: "null vector", detail: "entries sum to zero".into() });
    }
    Ok(NullVector { entries: x.into_iter().map(|v| v / total.clone()).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn stationary_vector_of_small_chain() {
        // P − I for the chain [[1/2,1/2],[1/4,3/4]] scaled by 4
        let m = mat(&[&[-2, 2], &[1, -1]]);
        let v = left_null_vector(&m).unwrap();
        assert_eq!(v.entries, vec![Rational::frac(1, 3), Rational::frac(2, 3)]);
    }

    #[test]
    fn degenerate_null_space_is_reported() {
        let m = mat(&[&[0, 0, 0], &[0, 0, 0], &[1, -1, 0]]);
        assert!(matches!(left_null_vector(&m), Err(Error::NonSimplePerron { nullity: 2 })));
        let m = mat(&[&[1, 0], &[0, 1]]);
        assert!(matches!(left_null_vector(&m), Err(Error::NonSimplePerron { nullity: 0 })));
    }
}
