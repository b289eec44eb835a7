//! Small dense exact linear algebra: fraction-free (Bareiss) elimination,
//! Sylvester's criterion and congruence diagonalisation.
//!
//! Matrices are row-major `Vec<Vec<T>>`; everything here is sized for Gram
//! matrices of a handful of curves, so no attempt is made at blocking.

use crate::scalar::Scalar;

fn is_square<T>(matrix: &[Vec<T>]) -> bool {
    matrix.iter().all(|row| row.len() == matrix.len())
}

/// Solves `matrix · x = rhs` by Bareiss elimination with row pivoting.
/// Returns `None` for singular or malformed systems.
pub fn solve<T: Scalar>(matrix: &[Vec<T>], rhs: &[T]) -> Option<Vec<T>> {
    let n = matrix.len();
    if !is_square(matrix) || rhs.len() != n {
        return None;
    }
    let mut a: Vec<Vec<T>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut prev = T::one();
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, pivot_row);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone()) / prev.clone();
                a[i][j] = v;
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }

    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut s = a[i][n].clone();
        for j in i + 1..n {
            s = s - a[i][j].clone() * x[j].clone();
        }
        x[i] = s / a[i][i].clone();
    }
    Some(x)
}

/// Leading principal minors `D₁, D₂, …` read off the Bareiss pivots.
///
/// Elimination runs without pivoting; if some `D_k` vanishes the list is
/// truncated after it, since later minors are not needed by any caller.
pub fn leading_principal_minors<T: Scalar>(matrix: &[Vec<T>]) -> Vec<T> {
    let n = matrix.len();
    assert!(is_square(matrix), "leading minors of a non-square matrix");
    let mut a = matrix.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut prev = T::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (pivot.clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone()) / prev.clone();
                a[i][j] = v;
            }
        }
        prev = pivot;
    }
    minors
}

/// Sylvester's criterion: `(-1)^k D_k > 0` for every leading minor.
/// The empty matrix counts as negative definite.
pub fn is_negative_definite<T: Scalar>(matrix: &[Vec<T>]) -> bool {
    let minors = leading_principal_minors(matrix);
    minors.len() == matrix.len()
        && minors.iter().enumerate().all(|(k, d)| {
            // k is zero-based, so D_{k+1} must have sign (-1)^{k+1}.
            if k % 2 == 0 {
                d.is_negative()
            } else {
                d.is_positive()
            }
        })
}

pub fn determinant<T: Scalar>(matrix: &[Vec<T>]) -> T {
    let n = matrix.len();
    assert!(is_square(matrix), "determinant of a non-square matrix");
    let mut a = matrix.to_vec();
    let mut prev = T::one();
    let mut negate = false;
    for k in 0..n {
        let Some(pivot_row) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return T::zero();
        };
        if pivot_row != k {
            a.swap(k, pivot_row);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a[k][k].clone() * a[i][j].clone() - a[i][k].clone() * a[k][j].clone()) / prev.clone();
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return T::one();
    }
    if negate {
        -prev
    } else {
        prev
    }
}

/// Inertia `(positive, negative, zero)` of a symmetric matrix, computed by
/// exact congruence diagonalisation.
pub fn signature<T: Scalar>(matrix: &[Vec<T>]) -> (usize, usize, usize) {
    let n = matrix.len();
    assert!(is_square(matrix), "signature of a non-square matrix");
    let mut a = matrix.to_vec();
    let (mut pos, mut neg, mut null) = (0, 0, 0);

    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // Row/column k += row/column j; the new diagonal is 2·a[k][j].
                for c in 0..n {
                    let v = a[k][c].clone() + a[j][c].clone();
                    a[k][c] = v;
                }
                for r in 0..n {
                    let v = a[r][k].clone() + a[r][j].clone();
                    a[r][k] = v;
                }
            } else {
                null += 1;
                continue;
            }
        }

        let pivot = a[k][k].clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].clone() - a[i][k].clone() * a[k][j].clone() / pivot.clone();
                a[i][j] = v;
            }
        }
        for i in k + 1..n {
            a[i][k] = T::zero();
            a[k][i] = T::zero();
        }
    }
    (pos, neg, null)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| Rat::from_i64(v)).collect())
            .collect()
    }

    #[test]
    fn solves_with_row_swap() {
        let m = mat(&[&[0, 1], &[2, 3]]);
        let rhs = vec![Rat::from_i64(4), Rat::from_i64(5)];
        let x = solve(&m, &rhs).unwrap();
        assert_eq!(x, vec![Rat::from_frac(-7, 2), Rat::from_i64(4)]);
    }

    #[test]
    fn singular_system_has_no_solution() {
        let m = mat(&[&[-1, 1], &[1, -1]]);
        assert!(solve(&m, &[Rat::from_i64(1), Rat::from_i64(0)]).is_none());
    }

    #[test]
    fn sylvester_matches_known_cases() {
        assert!(is_negative_definite(&mat(&[&[-2, 1], &[1, -1]])));
        assert!(!is_negative_definite(&mat(&[&[-1, 1], &[1, -1]])));
        assert!(!is_negative_definite(&mat(&[&[0, 1], &[1, 0]])));
        assert!(is_negative_definite::<Rat>(&[]));
    }

    #[test]
    fn determinant_and_signature_of_hyperbolic_plane() {
        let m = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&m), Rat::from_i64(-1));
        assert_eq!(signature(&m), (1, 1, 0));
        assert_eq!(signature(&mat(&[&[0, 0], &[0, 0]])), (0, 0, 2));
    }
}
