//! Labeled skew-symmetric matrices, exact Pfaffians and the sub-Pfaffian maps.
//!
//! `sPf(M) = Σ_I Pf(M_I)|I⟩` and `sPf∨(M) = Σ_I Pf(M_I)⟨Ī|`. The pairing of a
//! cogate `sPf∨(T)` with a gate `sPf(X)` collapses to the single Pfaffian
//! `Pf(X + T̃)`, where `T̃_ij = (−1)^(i+j+1) T_ij` on 1-based positions.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::Scalar;
use crate::registry::{Registry, Strategy};
use crate::tensor::{QubitTensor, Variance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfaffianError {
    #[error("labels must be strictly increasing: {0:?}")]
    LabelsNotIncreasing(Vec<u32>),
    #[error("matrix is not skew-symmetric at ({0}, {1})")]
    NotSkew(usize, usize),
    #[error("expected a {expected}x{expected} matrix, found {found} rows/columns")]
    SizeMismatch { expected: usize, found: usize },
    #[error("label sets overlap at {0}")]
    OverlappingLabels(u32),
    #[error("label sets differ: {0:?} vs {1:?}")]
    LabelMismatch(Vec<u32>, Vec<u32>),
    #[error("entry ({0}, {1}) is not a strictly-upper position of the matrix")]
    BadEntry(u32, u32),
}

/// A skew-symmetric matrix whose rows and columns carry strictly increasing labels.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SkewMatrix {
    labels: Vec<u32>,
    entries: Vec<Scalar>,
}

fn check_labels(labels: &[u32]) -> Result<(), PfaffianError> {
    if labels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PfaffianError::LabelsNotIncreasing(labels.to_vec()));
    }
    Ok(())
}

impl SkewMatrix {
    /// The zero matrix on the given labels.
    pub fn zeros(labels: Vec<u32>) -> Result<Self, PfaffianError> {
        check_labels(&labels)?;
        let n = labels.len();
        Ok(SkewMatrix {
            labels,
            entries: vec![Scalar::zero(); n * n],
        })
    }

    /// The zero matrix labeled `1..=n`.
    pub fn zeros_sized(n: usize) -> Self {
        Self::zeros((1..=n as u32).collect()).expect("increasing labels")
    }

    /// Builds a matrix from full rows, checking skew-symmetry.
    pub fn from_rows(labels: Vec<u32>, rows: Vec<Vec<Scalar>>) -> Result<Self, PfaffianError> {
        check_labels(&labels)?;
        let n = labels.len();
        if rows.len() != n {
            return Err(PfaffianError::SizeMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(PfaffianError::SizeMismatch {
                expected: n,
                found: r.len(),
            });
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, entry) in row.iter().enumerate().skip(i) {
                if *entry != -&rows[j][i] {
                    return Err(PfaffianError::NotSkew(i, j));
                }
            }
        }
        Ok(SkewMatrix {
            labels,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from strictly-upper entries given by 0-based position.
    pub fn from_upper<I>(labels: Vec<u32>, upper: I) -> Result<Self, PfaffianError>
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut m = Self::zeros(labels)?;
        for (i, j, v) in upper {
            if i >= j || j >= m.size() {
                return Err(PfaffianError::BadEntry(i as u32, j as u32));
            }
            m.set(i, j, v);
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// Entry at 0-based positions `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.size() + j]
    }

    /// Sets entry `(i, j)` and its mirror `(j, i) = −v`. Panics on the diagonal.
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i != j, "diagonal of a skew matrix is fixed at zero");
        let n = self.size();
        self.entries[j * n + i] = -&v;
        self.entries[i * n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries
            .chunks(self.size().max(1))
            .take(self.size())
            .map(|r| r.to_vec())
            .collect()
    }

    /// Strictly-upper entries `(i, j, value)` by 0-based position, zeros omitted.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        let n = self.size();
        (0..n)
            .flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
            .map(move |(i, j)| (i, j, self.get(i, j)))
            .filter(|(_, _, v)| !v.is_zero())
    }

    pub fn with_labels(&self, labels: Vec<u32>) -> Result<Self, PfaffianError> {
        check_labels(&labels)?;
        if labels.len() != self.size() {
            return Err(PfaffianError::SizeMismatch {
                expected: self.size(),
                found: labels.len(),
            });
        }
        Ok(SkewMatrix {
            labels,
            entries: self.entries.clone(),
        })
    }

    fn map_entries(&self, f: impl Fn(usize, usize, &Scalar) -> Scalar) -> SkewMatrix {
        let n = self.size();
        SkewMatrix {
            labels: self.labels.clone(),
            entries: self
                .entries
                .iter()
                .enumerate()
                .map(|(k, v)| f(k / n, k % n, v))
                .collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> SkewMatrix {
        self.map_entries(|_, _, v| v * s)
    }

    /// Entrywise sum; both matrices must carry the same labels.
    pub fn add(&self, other: &SkewMatrix) -> Result<SkewMatrix, PfaffianError> {
        if self.labels != other.labels {
            return Err(PfaffianError::LabelMismatch(
                self.labels.clone(),
                other.labels.clone(),
            ));
        }
        Ok(self.map_entries(|i, j, v| v + other.get(i, j)))
    }

    /// The Pfaffian, computed by the default algorithm. Odd sizes give 0.
    pub fn pfaffian(&self) -> Scalar {
        Auto::default().pfaffian(self)
    }

    /// Submatrix on the given 0-based positions (kept in increasing order).
    pub fn principal_minor(&self, positions: &[usize]) -> SkewMatrix {
        let mut pos = positions.to_vec();
        pos.sort_unstable();
        pos.dedup();
        let n = pos.len();
        let mut entries = Vec::with_capacity(n * n);
        for &i in &pos {
            for &j in &pos {
                entries.push(self.get(i, j).clone());
            }
        }
        SkewMatrix {
            labels: pos.iter().map(|&i| self.labels[i]).collect(),
            entries,
        }
    }

    /// `Pf(M_I)` for every subset `I` of positions, indexed by bitmask.
    pub fn principal_pfaffians(&self) -> Vec<Scalar> {
        let n = self.size();
        assert!(
            n < usize::BITS as usize,
            "matrix too large for subset enumeration"
        );
        let mut pf = vec![Scalar::zero(); 1 << n];
        pf[0] = Scalar::one();
        for mask in 1usize..1 << n {
            if mask.count_ones() % 2 == 1 {
                continue;
            }
            let i = mask.trailing_zeros() as usize;
            let rest = mask & !(1 << i);
            let mut acc = Scalar::zero();
            let mut between = 0u32;
            for j in i + 1..n {
                if rest >> j & 1 == 0 {
                    continue;
                }
                let sub = &pf[rest & !(1 << j)];
                let a = self.get(i, j);
                if !a.is_zero() && !sub.is_zero() {
                    let term = a * sub;
                    if between.is_multiple_of(2) {
                        acc += &term;
                    } else {
                        acc -= &term;
                    }
                }
                between += 1;
            }
            pf[mask] = acc;
        }
        pf
    }

    /// `sPf(M) = Σ_I Pf(M_I)|I⟩`, an all-ket tensor of arity `n`.
    pub fn sub_pfaffian_gate(&self) -> QubitTensor {
        QubitTensor::new(vec![Variance::Ket; self.size()], self.principal_pfaffians())
            .expect("2^n coefficients")
    }

    /// `sPf∨(M) = Σ_I Pf(M_I)⟨Ī|`, an all-bra tensor of arity `n`.
    pub fn sub_pfaffian_cogate(&self) -> QubitTensor {
        let pf = self.principal_pfaffians();
        let full = pf.len() - 1;
        let coeffs = (0..pf.len()).map(|mask| pf[full ^ mask].clone()).collect();
        QubitTensor::new(vec![Variance::Bra; self.size()], coeffs).expect("2^n coefficients")
    }

    /// Direct sum of two disjointly labeled matrices, rows and columns
    /// rearranged so that the merged labels increase.
    pub fn interleaved_direct_sum(&self, other: &SkewMatrix) -> Result<SkewMatrix, PfaffianError> {
        // (label, owner, index in owner)
        let mut merged: Vec<(u32, bool, usize)> = self
            .labels
            .iter()
            .enumerate()
            .map(|(k, &l)| (l, false, k))
            .chain(other.labels.iter().enumerate().map(|(k, &l)| (l, true, k)))
            .collect();
        merged.sort_unstable_by_key(|e| e.0);
        if let Some(w) = merged.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(PfaffianError::OverlappingLabels(w[0].0));
        }
        let n = merged.len();
        let mut entries = vec![Scalar::zero(); n * n];
        for (p, &(_, op, ip)) in merged.iter().enumerate() {
            for (q, &(_, oq, iq)) in merged.iter().enumerate() {
                if op == oq {
                    let src = if op { other } else { self };
                    entries[p * n + q] = src.get(ip, iq).clone();
                }
            }
        }
        Ok(SkewMatrix {
            labels: merged.iter().map(|e| e.0).collect(),
            entries,
        })
    }

    /// `T̃_ij = (−1)^(i+j+1) T_ij` on 1-based positions.
    pub fn twist(&self) -> SkewMatrix {
        self.map_entries(|i, j, v| if (i + j) % 2 == 0 { -v } else { v.clone() })
    }

    pub fn to_json(&self) -> SkewJson {
        SkewJson {
            labels: self.labels.clone(),
            upper: self
                .upper_entries()
                .map(|(i, j, v)| (self.labels[i], self.labels[j], v.clone()))
                .collect(),
        }
    }

    pub fn from_json(j: &SkewJson) -> Result<Self, PfaffianError> {
        check_labels(&j.labels)?;
        let pos = |l: u32| j.labels.binary_search(&l).ok();
        let mut upper = Vec::with_capacity(j.upper.len());
        for (a, b, v) in &j.upper {
            match (pos(*a), pos(*b)) {
                (Some(p), Some(q)) if p < q => upper.push((p, q, v.clone())),
                _ => return Err(PfaffianError::BadEntry(*a, *b)),
            }
        }
        Self::from_upper(j.labels.clone(), upper)
    }
}

/// Whether two disjoint label sets sit on separate arcs of a circle: walking
/// the merged labels cyclically, ownership changes at most twice. For such
/// pairs every shuffle of an even subset of one into the other is even, so
/// the Pfaffians of `M ⊕̃ N` factor without signs.
pub fn labels_non_crossing(a: &[u32], b: &[u32]) -> bool {
    let mut merged: Vec<(u32, bool)> = a
        .iter()
        .map(|&l| (l, false))
        .chain(b.iter().map(|&l| (l, true)))
        .collect();
    merged.sort_unstable();
    let n = merged.len();
    (0..n)
        .filter(|&k| merged[k].1 != merged[(k + 1) % n].1)
        .count()
        <= 2
}

/// `a ⊗ b` with legs rearranged so that their labels increase.
pub fn product_in_label_order(
    a: &QubitTensor,
    la: &[u32],
    b: &QubitTensor,
    lb: &[u32],
) -> Result<QubitTensor, PfaffianError> {
    if a.arity() != la.len() || b.arity() != lb.len() {
        return Err(PfaffianError::SizeMismatch {
            expected: la.len() + lb.len(),
            found: a.arity() + b.arity(),
        });
    }
    let all: Vec<u32> = la.iter().chain(lb).copied().collect();
    let mut order: Vec<usize> = (0..all.len()).collect();
    order.sort_by_key(|&k| all[k]);
    if let Some(w) = order.windows(2).find(|w| all[w[0]] == all[w[1]]) {
        return Err(PfaffianError::OverlappingLabels(all[w[0]]));
    }
    Ok(a.tensor_product(b)
        .permute_legs(&order)
        .expect("a permutation"))
}

/// `⟨sPf∨(T), sPf(X)⟩` evaluated as `Pf(X + T̃)`.
pub fn pair_value(x: &SkewMatrix, t: &SkewMatrix) -> Result<Scalar, PfaffianError> {
    Ok(x.add(&t.twist())?.pfaffian())
}

/// JSON form: `{ "labels": [..], "upper": [[i, j, "scalar"], ..] }` with `i < j` labels.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SkewJson {
    pub labels: Vec<u32>,
    #[serde(default)]
    pub upper: Vec<(u32, u32, Scalar)>,
}

/// An exact Pfaffian algorithm.
pub trait PfaffianAlgorithm: Strategy {
    fn pfaffian(&self, m: &SkewMatrix) -> Scalar;
}

/// Expansion along the first row, memoised on the remaining index subset.
#[derive(Default, Debug, Clone, Copy)]
pub struct Expansion;

impl Expansion {
    fn expand(m: &SkewMatrix, mask: u64, memo: &mut HashMap<u64, Scalar>) -> Scalar {
        if mask == 0 {
            return Scalar::one();
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut acc = Scalar::zero();
        let mut between = 0u32;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let a = m.get(i, j);
            if !a.is_zero() {
                let sub = Self::expand(m, rest & !(1 << j), memo);
                if !sub.is_zero() {
                    let term = a * &sub;
                    if between.is_multiple_of(2) {
                        acc += &term;
                    } else {
                        acc -= &term;
                    }
                }
            }
            between += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }
}

impl Strategy for Expansion {
    fn name(&self) -> &'static str {
        "expansion"
    }
    fn description(&self) -> &'static str {
        "first-row expansion memoised on index subsets"
    }
}

impl PfaffianAlgorithm for Expansion {
    fn pfaffian(&self, m: &SkewMatrix) -> Scalar {
        let n = m.size();
        if n % 2 == 1 {
            return Scalar::zero();
        }
        assert!(n <= 64, "expansion supports at most 64 rows");
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Self::expand(m, full, &mut HashMap::new())
    }
}

/// Skew Gaussian elimination: pivot on a 2×2 block and take the Schur complement.
#[derive(Default, Debug, Clone, Copy)]
pub struct Elimination;

impl Strategy for Elimination {
    fn name(&self) -> &'static str {
        "elimination"
    }
    fn description(&self) -> &'static str {
        "block elimination with exact field division"
    }
}

impl PfaffianAlgorithm for Elimination {
    fn pfaffian(&self, m: &SkewMatrix) -> Scalar {
        let n = m.size();
        if n % 2 == 1 {
            return Scalar::zero();
        }
        let mut a = m.rows();
        let mut pf = Scalar::one();
        for k in (0..n).step_by(2) {
            let Some(p) = (k + 1..n).find(|&j| !a[k][j].is_zero()) else {
                return Scalar::zero();
            };
            if p != k + 1 {
                a.swap(p, k + 1);
                for row in a.iter_mut() {
                    row.swap(p, k + 1);
                }
                pf = -pf;
            }
            let pivot = a[k][k + 1].clone();
            pf = &pf * &pivot;
            let inv = pivot.inv().expect("pivot is nonzero");
            // D_il += (A[k+1][i]·A[k][l] − A[k][i]·A[k+1][l]) / A[k][k+1]
            for i in k + 2..n {
                for l in i + 1..n {
                    let delta = &a[k + 1][i] * &a[k][l] - &a[k][i] * &a[k + 1][l];
                    if delta.is_zero() {
                        continue;
                    }
                    let delta = &delta * &inv;
                    a[i][l] += &delta;
                    a[l][i] -= &delta;
                }
            }
        }
        pf
    }
}

/// Expansion up to a size threshold, elimination above it.
#[derive(Debug, Clone, Copy)]
pub struct Auto {
    pub threshold: usize,
}

impl Default for Auto {
    fn default() -> Self {
        Auto { threshold: 12 }
    }
}

impl Strategy for Auto {
    fn name(&self) -> &'static str {
        "auto"
    }
    fn description(&self) -> &'static str {
        "expansion for n <= 12, elimination above"
    }
}

impl PfaffianAlgorithm for Auto {
    fn pfaffian(&self, m: &SkewMatrix) -> Scalar {
        if m.size() <= self.threshold {
            Expansion.pfaffian(m)
        } else {
            Elimination.pfaffian(m)
        }
    }
}

/// The built-in Pfaffian algorithms, keyed by name.
pub fn algorithms() -> &'static Registry<dyn PfaffianAlgorithm> {
    static REG: OnceLock<Registry<dyn PfaffianAlgorithm>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut reg: Registry<dyn PfaffianAlgorithm> = Registry::new("pfaffian algorithm");
        reg.register(Arc::new(Expansion))
            .register(Arc::new(Elimination))
            .register(Arc::new(Auto::default()));
        reg
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::determinant;
    use crate::tensor::QubitTensor;
    use proptest::prelude::*;
    use proptest::strategy::Strategy;

    fn s(v: i64) -> Scalar {
        Scalar::from_i64(v)
    }

    fn upper4(vals: [i64; 6]) -> SkewMatrix {
        let pos = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        SkewMatrix::from_upper(
            vec![1, 2, 3, 4],
            pos.iter().zip(vals).map(|(&(i, j), v)| (i, j, s(v))),
        )
        .unwrap()
    }

    #[test]
    fn pfaffian_base_cases() {
        for alg in algorithms().iter() {
            assert_eq!(
                alg.pfaffian(&SkewMatrix::zeros_sized(0)),
                s(1),
                "{}",
                alg.name()
            );
            let m2 = SkewMatrix::from_upper(vec![1, 2], [(0, 1, s(7))]).unwrap();
            assert_eq!(alg.pfaffian(&m2), s(7));
            assert_eq!(alg.pfaffian(&SkewMatrix::zeros_sized(3)), s(0));
            // af − be + cd with (a..f) = (m12, m13, m14, m23, m24, m34)
            let (a, b, c, d, e, f) = (2, 3, 5, 7, 11, 13);
            assert_eq!(
                alg.pfaffian(&upper4([a, b, c, d, e, f])),
                s(a * f - b * e + c * d)
            );
        }
    }

    #[test]
    fn elimination_needs_pivoting() {
        // m12 = 0 forces a row/column swap.
        let m = upper4([0, 3, 5, 7, 11, 13]);
        assert_eq!(Elimination.pfaffian(&m), s(-3 * 11 + 5 * 7));
    }

    #[test]
    fn principal_minors() {
        let m = upper4([2, 3, 5, 7, 11, 13]);
        assert_eq!(m.principal_minor(&[]).size(), 0);
        assert_eq!(m.principal_minor(&[0, 1, 2, 3]), m);
        let top = m.principal_minor(&[0, 1]);
        assert_eq!(top.labels(), &[1, 2]);
        assert_eq!(top.get(0, 1), &s(2));
        let mid = m.principal_minor(&[3, 1]);
        assert_eq!(mid.labels(), &[2, 4]);
        assert_eq!(mid.get(0, 1), &s(11));
    }

    #[test]
    fn sub_pfaffian_examples() {
        assert_eq!(
            SkewMatrix::zeros_sized(0).sub_pfaffian_gate(),
            QubitTensor::scalar(s(1))
        );
        let x = s(9);
        let m = SkewMatrix::from_upper(vec![1, 2], [(0, 1, x.clone())]).unwrap();
        let gate = m.sub_pfaffian_gate();
        assert_eq!(gate.coeff(0), &s(1));
        assert_eq!(gate.coeff(3), &x);
        assert!(gate.coeff(1).is_zero() && gate.coeff(2).is_zero());
        let cogate = m.sub_pfaffian_cogate();
        assert_eq!(cogate.coeff(3), &s(1));
        assert_eq!(cogate.coeff(0), &x);
        let z = SkewMatrix::zeros_sized(4);
        assert_eq!(
            z.sub_pfaffian_gate(),
            QubitTensor::basis(vec![Variance::Ket; 4], 0).unwrap()
        );
        assert_eq!(
            z.sub_pfaffian_cogate(),
            QubitTensor::basis(vec![Variance::Bra; 4], 15).unwrap()
        );
    }

    #[test]
    fn direct_sum_layout_matches_worked_example() {
        // {1,3} ⊕̃ {2,4,5}: the distinct entries land exactly where the
        // interleaving puts them.
        let m = SkewMatrix::from_upper(vec![1, 3], [(0, 1, s(101))]).unwrap();
        let n = SkewMatrix::from_upper(
            vec![2, 4, 5],
            [(0, 1, s(201)), (0, 2, s(202)), (1, 2, s(203))],
        )
        .unwrap();
        let sum = m.interleaved_direct_sum(&n).unwrap();
        assert_eq!(sum.labels(), &[1, 2, 3, 4, 5]);
        let want = [
            [0, 0, 101, 0, 0],
            [0, 0, 0, 201, 202],
            [-101, 0, 0, 0, 0],
            [0, -201, 0, 0, 203],
            [0, -202, 0, -203, 0],
        ];
        for (i, row) in want.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(sum.get(i, j), &s(v), "({i},{j})");
            }
        }
        assert_eq!(
            m.interleaved_direct_sum(&SkewMatrix::zeros(vec![]).unwrap())
                .unwrap(),
            m
        );
        let a = SkewMatrix::from_upper(vec![1, 2], [(0, 1, s(3))]).unwrap();
        let b = SkewMatrix::from_upper(vec![3, 4], [(0, 1, s(4))]).unwrap();
        let block = a.interleaved_direct_sum(&b).unwrap();
        assert_eq!(block, upper4([3, 0, 0, 0, 0, 4]));
        assert_eq!(
            a.interleaved_direct_sum(&a),
            Err(PfaffianError::OverlappingLabels(1))
        );
    }

    #[test]
    fn direct_sum_factors_for_separated_labels() {
        let m = SkewMatrix::from_upper(vec![1, 4], [(0, 1, s(3))]).unwrap();
        let n = SkewMatrix::from_upper(vec![2, 3], [(0, 1, s(5))]).unwrap();
        assert!(labels_non_crossing(m.labels(), n.labels()));
        let sum = m.interleaved_direct_sum(&n).unwrap();
        for cogate in [false, true] {
            let (a, b, c) = if cogate {
                (
                    m.sub_pfaffian_cogate(),
                    n.sub_pfaffian_cogate(),
                    sum.sub_pfaffian_cogate(),
                )
            } else {
                (
                    m.sub_pfaffian_gate(),
                    n.sub_pfaffian_gate(),
                    sum.sub_pfaffian_gate(),
                )
            };
            assert_eq!(
                product_in_label_order(&a, m.labels(), &b, n.labels()).unwrap(),
                c
            );
        }
    }

    #[test]
    fn direct_sum_picks_up_signs_for_crossing_labels() {
        let m = SkewMatrix::from_upper(vec![1, 3], [(0, 1, s(3))]).unwrap();
        let n = SkewMatrix::from_upper(vec![2, 4], [(0, 1, s(5))]).unwrap();
        assert!(!labels_non_crossing(m.labels(), n.labels()));
        let sum = m.interleaved_direct_sum(&n).unwrap();
        let prod = product_in_label_order(
            &m.sub_pfaffian_gate(),
            m.labels(),
            &n.sub_pfaffian_gate(),
            n.labels(),
        )
        .unwrap();
        assert_eq!(prod.coeff(15), &s(15));
        assert_eq!(sum.sub_pfaffian_gate().coeff(15), &s(-15));
        assert!(labels_non_crossing(&[1, 2, 6], &[3, 4, 5]));
        assert!(labels_non_crossing(&[2, 3], &[1, 4, 5]));
        assert!(!labels_non_crossing(&[1, 3, 5], &[2, 4]));
        assert!(labels_non_crossing(&[], &[1, 2]));
    }

    #[test]
    fn twist_signs() {
        let m = SkewMatrix::from_upper(vec![1, 2], [(0, 1, s(5))]).unwrap();
        assert_eq!(m.twist(), m);
        let u = SkewMatrix::from_upper(vec![1, 2, 3, 4], [(0, 2, s(5))]).unwrap();
        assert_eq!(u.twist().get(0, 2), &s(-5));
        assert_eq!(u.twist().get(2, 0), &s(5));
        assert_eq!(
            SkewMatrix::zeros_sized(4).twist(),
            SkewMatrix::zeros_sized(4)
        );
    }

    #[test]
    fn pair_value_examples() {
        let x = SkewMatrix::from_upper(vec![1, 2], [(0, 1, s(3))]).unwrap();
        let t = SkewMatrix::from_upper(vec![1, 2], [(0, 1, s(10))]).unwrap();
        assert_eq!(pair_value(&x, &t).unwrap(), s(13));
        assert_eq!(
            pair_value(&SkewMatrix::zeros_sized(4), &SkewMatrix::zeros_sized(4)).unwrap(),
            s(0)
        );
        assert!(pair_value(&x, &SkewMatrix::zeros_sized(4)).is_err());
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            SkewMatrix::zeros(vec![2, 1]),
            Err(PfaffianError::LabelsNotIncreasing(_))
        ));
        let rows = vec![vec![s(0), s(1)], vec![s(1), s(0)]];
        assert_eq!(
            SkewMatrix::from_rows(vec![1, 2], rows),
            Err(PfaffianError::NotSkew(0, 1))
        );
        assert!(SkewMatrix::from_upper(vec![1, 2], [(1, 0, s(1))]).is_err());
        let j = SkewJson {
            labels: vec![1, 3],
            upper: vec![(1, 2, s(1))],
        };
        assert_eq!(
            SkewMatrix::from_json(&j),
            Err(PfaffianError::BadEntry(1, 2))
        );
    }

    #[test]
    fn json_uses_labels() {
        let m = SkewMatrix::from_upper(vec![2, 5, 9], [(0, 2, Scalar::sqrt2()), (1, 2, s(-1))])
            .unwrap();
        let text = serde_json::to_string(&m.to_json()).unwrap();
        assert_eq!(
            text,
            r#"{"labels":[2,5,9],"upper":[[2,9,"sqrt2"],[5,9,"-1"]]}"#
        );
        let back: SkewJson = serde_json::from_str(&text).unwrap();
        assert_eq!(SkewMatrix::from_json(&back).unwrap(), m);
    }

    pub(crate) fn arb_skew(n: usize) -> impl Strategy<Value = SkewMatrix> {
        proptest::collection::vec((-4i64..5, 1i64..3), n * n.saturating_sub(1) / 2).prop_map(
            move |vals| {
                let mut m = SkewMatrix::zeros_sized(n);
                let mut it = vals.into_iter();
                for i in 0..n {
                    for j in i + 1..n {
                        let (a, b) = it.next().unwrap();
                        m.set(i, j, Scalar::from_ratio(a, b));
                    }
                }
                m
            },
        )
    }

    fn arb_separated_pair() -> impl Strategy<Value = (SkewMatrix, SkewMatrix)> {
        (1usize..9)
            .prop_flat_map(|total| (Just(total), 0..=total, 0..total))
            .prop_flat_map(|(total, k, start)| {
                let labels: Vec<u32> = (0..total)
                    .map(|p| ((start + p) % total) as u32 + 1)
                    .collect();
                let (mut a, mut b) = (labels[..k].to_vec(), labels[k..].to_vec());
                a.sort_unstable();
                b.sort_unstable();
                (arb_skew(a.len()), arb_skew(b.len())).prop_map(move |(x, y)| {
                    (
                        x.with_labels(a.clone()).unwrap(),
                        y.with_labels(b.clone()).unwrap(),
                    )
                })
            })
    }

    proptest! {
        #[test]
        fn direct_sum_of_separated_pairs((m, n) in arb_separated_pair()) {
            prop_assert!(labels_non_crossing(m.labels(), n.labels()));
            let sum = m.interleaved_direct_sum(&n).unwrap();
            let gate = product_in_label_order(&m.sub_pfaffian_gate(), m.labels(), &n.sub_pfaffian_gate(), n.labels()).unwrap();
            prop_assert_eq!(gate, sum.sub_pfaffian_gate());
            let cogate = product_in_label_order(&m.sub_pfaffian_cogate(), m.labels(), &n.sub_pfaffian_cogate(), n.labels()).unwrap();
            prop_assert_eq!(cogate, sum.sub_pfaffian_cogate());
        }

        #[test]
        fn algorithms_agree(m in (0usize..9).prop_flat_map(arb_skew)) {
            let e = Expansion.pfaffian(&m);
            prop_assert_eq!(&Elimination.pfaffian(&m), &e);
            let all = m.principal_pfaffians();
            prop_assert_eq!(&all[all.len() - 1], &e);
        }

        #[test]
        fn pfaffian_squares_to_determinant(m in (0usize..5).prop_flat_map(|k| arb_skew(2 * k))) {
            let pf = m.pfaffian();
            prop_assert_eq!(&pf * &pf, determinant(&m.rows()));
        }

        #[test]
        fn odd_minors_vanish(m in (0usize..7).prop_flat_map(arb_skew)) {
            let g = m.sub_pfaffian_gate();
            prop_assert!(g.has_support_parity(crate::tensor::Parity::Even));
        }

        #[test]
        fn pair_value_matches_tensor_pairing(x in (0usize..7).prop_flat_map(arb_skew), seed in any::<u64>()) {
            let n = x.size();
            let mut t = SkewMatrix::zeros_sized(n);
            let mut state = seed;
            for i in 0..n {
                for j in i + 1..n {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    t.set(i, j, Scalar::from_i64((state >> 60) as i64 - 8));
                }
            }
            let brute = QubitTensor::pairing(&t.sub_pfaffian_cogate(), &x.sub_pfaffian_gate()).unwrap();
            prop_assert_eq!(pair_value(&x, &t).unwrap(), brute);
        }
    }
}
