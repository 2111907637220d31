//! Small dense linear algebra over [`Scalar`].

use num_traits::{One, Zero};

use crate::exactfield::Scalar;

/// Determinant by Gaussian elimination with exact division.
///
/// `rows` must be square; an empty matrix has determinant 1.
pub fn determinant(rows: &[Vec<Scalar>]) -> Scalar {
    let n = rows.len();
    assert!(
        rows.iter().all(|r| r.len() == n),
        "determinant of a non-square matrix"
    );
    let mut a: Vec<Vec<Scalar>> = rows.to_vec();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let inv = a[col][col].inv().expect("pivot is nonzero");
        det = &det * &a[col][col];
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] * &inv;
            let (top, bottom) = a.split_at_mut(r);
            for (dst, src) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *dst -= &(&factor * src);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| Scalar::from_i64(v)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        assert_eq!(determinant(&[]), Scalar::one());
        assert_eq!(determinant(&m(&[&[3]])), Scalar::from_i64(3));
        assert_eq!(determinant(&m(&[&[1, 2], &[3, 4]])), Scalar::from_i64(-2));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), Scalar::from_i64(-1));
        assert_eq!(
            determinant(&m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]])),
            Scalar::from_i64(2 + (1 - 3))
        );
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), Scalar::zero());
    }
}
