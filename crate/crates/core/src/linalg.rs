//! Dense Gaussian elimination over an exact field.
//!
//! Matrices are plain `Vec<Vec<T>>` in row-major order. All routines are
//! intended for [`Rational`](crate::scalar::Rational); instantiating them with
//! `f64` compiles but pivots on exact zero, which is rarely what you want.

use crate::scalar::Scalar;

/// Reduced row echelon form in place. Returns the pivot columns.
pub fn rref<T: Scalar>(mat: &mut [Vec<T>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut row = 0;

    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(found) = (row..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, found);

        let inv = T::one()
            .checked_div(&mat[row][col])
            .expect("pivot is nonzero");
        for v in mat[row].iter_mut() {
            *v = v.clone() * inv.clone();
        }

        let pivot_row = mat[row].clone();
        for (r, other) in mat.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (dst, src) in other.iter_mut().zip(&pivot_row) {
                if !src.is_zero() {
                    *dst = dst.clone() - factor.clone() * src.clone();
                }
            }
        }

        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<T: Scalar>(mat: &[Vec<T>]) -> usize {
    let mut work = mat.to_vec();
    rref(&mut work).len()
}

/// Basis of `{x : mat · x = 0}`, one vector per free column.
///
/// `cols` is needed for the degenerate zero-row case.
pub fn nullspace<T: Scalar>(mat: &[Vec<T>], cols: usize) -> Vec<Vec<T>> {
    let mut work = mat.to_vec();
    let pivots = rref(&mut work);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }

    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![T::zero(); cols];
            v[free] = T::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -work[r][free].clone();
            }
            v
        })
        .collect()
}

/// Determinant of a square matrix by elimination.
pub fn determinant<T: Scalar>(mat: &[Vec<T>]) -> T {
    let n = mat.len();
    let mut work = mat.to_vec();
    let mut det = T::one();

    for col in 0..n {
        let Some(found) = (col..n).find(|&r| !work[r][col].is_zero()) else {
            return T::zero();
        };
        if found != col {
            work.swap(found, col);
            det = -det;
        }
        let pivot = work[col][col].clone();
        det = det * pivot.clone();
        for r in col + 1..n {
            if work[r][col].is_zero() {
                continue;
            }
            let factor = work[r][col].checked_div(&pivot).expect("pivot is nonzero");
            for c in col..n {
                let sub = factor.clone() * work[col][c].clone();
                work[r][c] = work[r][c].clone() - sub;
            }
        }
    }
    det
}

pub fn mat_vec<T: Scalar>(mat: &[Vec<T>], v: &[T]) -> Vec<T> {
    mat.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}
