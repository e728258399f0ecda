//! Dense linear algebra over an exact field.

use crate::field::Field;

/// Row-major square or rectangular matrix.
pub type Matrix<F> = Vec<Vec<F>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv().expect("pivot is nonzero");
        for c in col..cols {
            m[row][c] = m[row][c].mul_ref(&inv);
        }
        for i in 0..rows {
            if i == row || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone();
            for c in col..cols {
                let sub = factor.mul_ref(&m[row][c]);
                m[i][c] = m[i][c].sub_ref(&sub);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &Matrix<F>) -> usize {
    rref(&mut m.clone()).len()
}

/// Determinant by fraction-free-style elimination with exact division.
pub fn det<F: Field>(m: &Matrix<F>) -> F {
    let n = m.len();
    let mut a = m.clone();
    let mut acc = F::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return F::zero();
        };
        if p != col {
            a.swap(p, col);
            acc = acc.neg_ref();
        }
        acc = acc.mul_ref(&a[col][col]);
        let inv = a[col][col].inv().expect("pivot is nonzero");
        for i in col + 1..n {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = a[i][col].mul_ref(&inv);
            for c in col..n {
                let sub = factor.mul_ref(&a[col][c]);
                a[i][c] = a[i][c].sub_ref(&sub);
            }
        }
    }
    acc
}

/// Inverse of a square matrix, `None` if singular.
pub fn inverse<F: Field>(m: &Matrix<F>) -> Option<Matrix<F>> {
    let n = m.len();
    let mut aug: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(F::zero(), |acc, k| {
                        if row[k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            acc.add_ref(&row[k].mul_ref(&b[k][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// Solve `a · x = b` for `x` (a column), free variables set to zero.
/// `None` if the system is inconsistent.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let unknowns = a.first().map_or(0, Vec::len);
    let mut aug: Matrix<F> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&unknowns) {
        return None;
    }
    let mut x = vec![F::zero(); unknowns];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug[row][unknowns].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect()
    }

    #[test]
    fn determinant_and_inverse() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(det(&a), rat(1));
        let inv = inverse(&a).unwrap();
        assert_eq!(mul(&a, &inv), m(&[&[1, 0], &[0, 1]]));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])), rat(-1));
    }

    #[test]
    fn solving() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        assert_eq!(solve(&a, &[rat(3), rat(1), rat(4)]), Some(vec![rat(2), rat(1)]));
        assert_eq!(solve(&a, &[rat(3), rat(1), rat(5)]), None);
        // Underdetermined: free variable is zero.
        let u = m(&[&[1, 1]]);
        assert_eq!(solve(&u, &[rat(2)]), Some(vec![rat(2), rat(0)]));
        assert_eq!(rank(&u), 1);
    }
}
