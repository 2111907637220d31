//! Exact sparse Gaussian elimination over Q.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;

pub enum Solved {
    /// A solution with every free unknown set to zero.
    Solution {
        values: Vec<BigRational>,
        rank: usize,
    },
    Inconsistent {
        rank: usize,
    },
}

type Row = BTreeMap<usize, BigRational>;

/// Solves `Σ_j a_ij x_j = b_i` where `rows[i]` lists `(j, a_ij)`.
///
/// Rows are reduced one at a time against the pivots found so far; each
/// pivot row keeps its leading unknown as its smallest column. Shorter
/// equations go first to limit fill-in.
pub fn solve_sparse(
    rows: Vec<Vec<(usize, BigRational)>>,
    rhs: Vec<BigRational>,
    unknowns: usize,
) -> Solved {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| rows[i].len());
    let mut pivots: HashMap<usize, (Row, BigRational)> = HashMap::new();
    let mut rows: Vec<Option<Vec<(usize, BigRational)>>> = rows.into_iter().map(Some).collect();
    for i in order {
        let mut row: Row = BTreeMap::new();
        for (j, a) in rows[i].take().expect("each row once") {
            let e = row.entry(j).or_insert_with(BigRational::zero);
            *e += a;
        }
        row.retain(|_, a| !a.is_zero());
        let mut b = rhs[i].clone();
        let mut from = 0;
        loop {
            let Some((&lead, _)) = row.range(from..).next() else {
                if !b.is_zero() {
                    return Solved::Inconsistent { rank: pivots.len() };
                }
                break;
            };
            match pivots.get(&lead) {
                Some((prow, pb)) => {
                    let factor = row[&lead].clone() / &prow[&lead];
                    for (j, a) in prow {
                        let e = row.entry(*j).or_insert_with(BigRational::zero);
                        *e -= &factor * a;
                        if e.is_zero() {
                            row.remove(j);
                        }
                    }
                    b -= factor * pb;
                    from = lead + 1;
                }
                None => {
                    // Normalize so the leading coefficient is 1.
                    let inv = BigRational::from_integer(1.into()) / &row[&lead];
                    for a in row.values_mut() {
                        *a *= &inv;
                    }
                    b *= inv;
                    pivots.insert(lead, (row, b));
                    break;
                }
            }
        }
    }
    let rank = pivots.len();
    let mut values = vec![BigRational::zero(); unknowns];
    let mut leads: Vec<usize> = pivots.keys().copied().collect();
    leads.sort_unstable_by(|a, b| b.cmp(a));
    for lead in leads {
        let (row, b) = &pivots[&lead];
        let mut v = b.clone();
        for (j, a) in row.range(lead + 1..) {
            if !values[*j].is_zero() {
                v -= a * &values[*j];
            }
        }
        values[lead] = v;
    }
    Solved::Solution { values, rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certs::poly::q;

    fn check(rows: &[Vec<(usize, i64)>], rhs: &[i64], n: usize) -> Option<Vec<BigRational>> {
        let r = rows
            .iter()
            .map(|r| r.iter().map(|&(j, a)| (j, q(a))).collect())
            .collect();
        match solve_sparse(r, rhs.iter().map(|&b| q(b)).collect(), n) {
            Solved::Solution { values, .. } => {
                for (row, &b) in rows.iter().zip(rhs) {
                    let s = row
                        .iter()
                        .fold(BigRational::zero(), |acc, &(j, a)| acc + q(a) * &values[j]);
                    assert_eq!(s, q(b));
                }
                Some(values)
            }
            Solved::Inconsistent { .. } => None,
        }
    }

    #[test]
    fn small_systems() {
        assert!(check(&[vec![(0, 2), (1, 1)], vec![(0, 1), (1, -1)]], &[3, 0], 2).is_some());
        assert!(check(&[vec![(0, 1), (1, 1)], vec![(0, 2), (1, 2)]], &[1, 3], 2).is_none());
        let v = check(&[vec![(1, 1), (2, 1)], vec![(0, 1), (2, 1)]], &[1, 1], 3).unwrap();
        assert_eq!(v[2], q(0));
        assert!(check(&[vec![]], &[0], 1).is_some());
    }
}
