//! Dense qubit tensors with per-leg variance.
//!
//! Coefficients are indexed by subsets `I ⊆ [n]` encoded as bitmasks with
//! leg 1 in the lowest bit, so the basis element `|I⟩` has a 1 on exactly the
//! legs in `I`. For arity 4 this puts the SWAP vector on flat positions
//! 1, 6, 11 and 16 of `x₁..x₁₆` (see [`QubitTensor::flatten_coeffs`]).

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::{FieldError, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("variance mismatch: {0}")]
    VarianceMismatch(String),
    #[error("coefficient vector has length {found}, expected 2^{arity}")]
    BadLength { arity: usize, found: usize },
    #[error("bitmask {mask} out of range for arity {arity}")]
    MaskOutOfRange { mask: usize, arity: usize },
    #[error("invalid tensor description: {0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Whether a leg is contravariant (ket, `C²`) or covariant (bra, `(C²)*`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    Ket,
    Bra,
}

impl Variance {
    pub fn letter(self) -> char {
        match self {
            Variance::Ket => 'k',
            Variance::Bra => 'b',
        }
    }

    pub fn dual(self) -> Variance {
        match self {
            Variance::Ket => Variance::Bra,
            Variance::Bra => Variance::Ket,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_mask(mask: usize) -> Parity {
        if mask.count_ones().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A 2×2 matrix `(a, b; c, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoByTwo {
    pub a: Scalar,
    pub b: Scalar,
    pub c: Scalar,
    pub d: Scalar,
}

impl TwoByTwo {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        TwoByTwo { a, b, c, d }
    }

    pub fn identity() -> Self {
        TwoByTwo::new(Scalar::one(), Scalar::zero(), Scalar::zero(), Scalar::one())
    }

    /// `(0, −1; 1, 0)`; conjugation by it sends `g ∈ SL₂` to `(g⁻¹)ᵀ`.
    pub fn t_matrix() -> Self {
        TwoByTwo::new(
            Scalar::zero(),
            Scalar::from_i64(-1),
            Scalar::one(),
            Scalar::zero(),
        )
    }

    /// Entry at row `i`, column `j` (0-based).
    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        match (i, j) {
            (0, 0) => &self.a,
            (0, 1) => &self.b,
            (1, 0) => &self.c,
            (1, 1) => &self.d,
            _ => panic!("TwoByTwo index ({i},{j}) out of range"),
        }
    }

    pub fn det(&self) -> Scalar {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn inverse(&self) -> Result<TwoByTwo, FieldError> {
        let inv_det = self.det().inv()?;
        Ok(TwoByTwo::new(
            &self.d * &inv_det,
            -(&self.b * &inv_det),
            -(&self.c * &inv_det),
            &self.a * &inv_det,
        ))
    }

    pub fn transpose(&self) -> TwoByTwo {
        TwoByTwo::new(
            self.a.clone(),
            self.c.clone(),
            self.b.clone(),
            self.d.clone(),
        )
    }

    pub fn mul(&self, rhs: &TwoByTwo) -> TwoByTwo {
        TwoByTwo::new(
            &self.a * &rhs.a + &self.b * &rhs.c,
            &self.a * &rhs.b + &self.b * &rhs.d,
            &self.c * &rhs.a + &self.d * &rhs.c,
            &self.c * &rhs.b + &self.d * &rhs.d,
        )
    }

    pub fn scale(&self, s: &Scalar) -> TwoByTwo {
        TwoByTwo::new(&self.a * s, &self.b * s, &self.c * s, &self.d * s)
    }
}

impl fmt::Display for TwoByTwo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// A dense tensor on `n` two-dimensional legs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QubitTensor {
    variance: Vec<Variance>,
    coeffs: Vec<Scalar>,
}

impl QubitTensor {
    pub fn new(variance: Vec<Variance>, coeffs: Vec<Scalar>) -> Result<Self, TensorError> {
        let arity = variance.len();
        if coeffs.len() != 1usize << arity {
            return Err(TensorError::BadLength {
                arity,
                found: coeffs.len(),
            });
        }
        Ok(QubitTensor { variance, coeffs })
    }

    pub fn zeros(variance: Vec<Variance>) -> Self {
        let len = 1usize << variance.len();
        QubitTensor {
            variance,
            coeffs: vec![Scalar::zero(); len],
        }
    }

    pub fn zeros_uniform(arity: usize, v: Variance) -> Self {
        Self::zeros(vec![v; arity])
    }

    /// The arity-0 tensor holding a single scalar.
    pub fn scalar(value: Scalar) -> Self {
        QubitTensor {
            variance: Vec::new(),
            coeffs: vec![value],
        }
    }

    /// The basis element `|I⟩` (or `⟨I|`) for the bitmask `mask`.
    pub fn basis(variance: Vec<Variance>, mask: usize) -> Result<Self, TensorError> {
        let mut t = Self::zeros(variance);
        t.set(mask, Scalar::one())?;
        Ok(t)
    }

    /// Builds a tensor from `(bitmask, coefficient)` pairs; repeated masks accumulate.
    pub fn from_entries<I>(variance: Vec<Variance>, entries: I) -> Result<Self, TensorError>
    where
        I: IntoIterator<Item = (usize, Scalar)>,
    {
        let mut t = Self::zeros(variance);
        for (mask, value) in entries {
            t.check_mask(mask)?;
            t.coeffs[mask] += &value;
        }
        Ok(t)
    }

    /// Parses a leg string such as `"0101"` (leg 1 first) into a bitmask.
    pub fn mask_of(bits: &str) -> Result<usize, TensorError> {
        bits.chars()
            .enumerate()
            .try_fold(0usize, |acc, (k, c)| match c {
                '0' => Ok(acc),
                '1' => Ok(acc | (1 << k)),
                _ => Err(TensorError::Invalid(format!("bad leg string `{bits}`"))),
            })
    }

    /// Leg string of a bitmask, leg 1 first.
    pub fn bits_of(mask: usize, arity: usize) -> String {
        (0..arity)
            .map(|k| if mask >> k & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    fn check_mask(&self, mask: usize) -> Result<(), TensorError> {
        if mask >= self.coeffs.len() {
            return Err(TensorError::MaskOutOfRange {
                mask,
                arity: self.arity(),
            });
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.variance.len()
    }

    pub fn variance(&self) -> &[Variance] {
        &self.variance
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, mask: usize) -> &Scalar {
        &self.coeffs[mask]
    }

    pub fn set(&mut self, mask: usize, value: Scalar) -> Result<(), TensorError> {
        self.check_mask(mask)?;
        self.coeffs[mask] = value;
        Ok(())
    }

    pub fn is_all(&self, v: Variance) -> bool {
        self.variance.iter().all(|&x| x == v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Nonzero coefficients as `(bitmask, value)` pairs in increasing mask order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Legs of `self` come first, then legs of `other`.
    pub fn tensor_product(&self, other: &QubitTensor) -> QubitTensor {
        let shift = self.arity();
        let mut variance = self.variance.clone();
        variance.extend_from_slice(&other.variance);
        let mut out = QubitTensor::zeros(variance);
        for (j, y) in other.nonzero() {
            for (i, x) in self.nonzero() {
                out.coeffs[i | (j << shift)] = x * y;
            }
        }
        out
    }

    /// The standard pairing `Σ_I cov[I]·vec[I]` of an all-bra tensor with an all-ket one.
    pub fn pairing(cov: &QubitTensor, vec: &QubitTensor) -> Result<Scalar, TensorError> {
        if cov.arity() != vec.arity() {
            return Err(TensorError::ArityMismatch {
                expected: cov.arity(),
                found: vec.arity(),
            });
        }
        if !cov.is_all(Variance::Bra) || !vec.is_all(Variance::Ket) {
            return Err(TensorError::VarianceMismatch(
                "pairing needs an all-bra covector and an all-ket vector".into(),
            ));
        }
        Ok(cov
            .coeffs
            .iter()
            .zip(&vec.coeffs)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum())
    }

    /// Keeps the coefficients on index sets of the given parity and zeroes the rest.
    pub fn parity_projection(&self, parity: Parity) -> QubitTensor {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| {
                if Parity::of_mask(mask) == parity {
                    c.clone()
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        QubitTensor {
            variance: self.variance.clone(),
            coeffs,
        }
    }

    /// True when every coefficient off the given parity vanishes.
    pub fn has_support_parity(&self, parity: Parity) -> bool {
        self.nonzero()
            .all(|(mask, _)| Parity::of_mask(mask) == parity)
    }

    /// Applies one 2×2 matrix per leg: ket legs are acted on from the left
    /// (`x ↦ g·x`), bra legs by right composition (`φ ↦ φ∘g`). Matrices are
    /// used exactly as given.
    pub fn apply_basis_change(&self, mats: &[TwoByTwo]) -> Result<QubitTensor, TensorError> {
        if mats.len() != self.arity() {
            return Err(TensorError::ArityMismatch {
                expected: self.arity(),
                found: mats.len(),
            });
        }
        let mut cur = self.coeffs.clone();
        for (leg, g) in mats.iter().enumerate() {
            if g.is_identity() {
                continue;
            }
            let bit = 1usize << leg;
            let mut next = vec![Scalar::zero(); cur.len()];
            for (mask, value) in cur.iter().enumerate() {
                if value.is_zero() {
                    continue;
                }
                let old = mask >> leg & 1;
                for new in 0..2 {
                    let factor = match self.variance[leg] {
                        Variance::Ket => g.entry(new, old),
                        Variance::Bra => g.entry(old, new),
                    };
                    if factor.is_zero() {
                        continue;
                    }
                    let target = (mask & !bit) | (new << leg);
                    next[target] += value * factor;
                }
            }
            cur = next;
        }
        Ok(QubitTensor {
            variance: self.variance.clone(),
            coeffs: cur,
        })
    }

    /// Reorders legs: leg `p` of the result is leg `order[p]` of `self`.
    pub fn permute_legs(&self, order: &[usize]) -> Result<QubitTensor, TensorError> {
        let n = self.arity();
        let mut seen = vec![false; n];
        if order.len() != n
            || order
                .iter()
                .any(|&o| o >= n || std::mem::replace(&mut seen[o], true))
        {
            return Err(TensorError::Invalid(format!(
                "{order:?} is not a permutation of {n} legs"
            )));
        }
        let variance = order.iter().map(|&o| self.variance[o]).collect();
        let mut out = QubitTensor::zeros(variance);
        for (mask, value) in self.nonzero() {
            let new_mask = order
                .iter()
                .enumerate()
                .fold(0usize, |acc, (p, &o)| acc | ((mask >> o & 1) << p));
            out.coeffs[new_mask] = value.clone();
        }
        Ok(out)
    }

    /// Fixes leg `leg` to the basis value `bit` and drops it.
    pub fn restrict_leg(&self, leg: usize, bit: usize) -> Result<QubitTensor, TensorError> {
        if leg >= self.arity() || bit > 1 {
            return Err(TensorError::Invalid(format!(
                "cannot fix leg {leg} to {bit}"
            )));
        }
        let mut variance = self.variance.clone();
        variance.remove(leg);
        let low = (1usize << leg) - 1;
        let coeffs = (0..1usize << variance.len())
            .map(|m| {
                let full = (m & low) | (bit << leg) | ((m & !low) << 1);
                self.coeffs[full].clone()
            })
            .collect();
        Ok(QubitTensor { variance, coeffs })
    }

    /// Flips every leg between ket and bra, keeping coefficients.
    pub fn transpose(&self) -> QubitTensor {
        QubitTensor {
            variance: self.variance.iter().map(|v| v.dual()).collect(),
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> QubitTensor {
        QubitTensor {
            variance: self.variance.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn zip_with(
        &self,
        other: &QubitTensor,
        f: impl Fn(&Scalar, &Scalar) -> Scalar,
    ) -> Result<QubitTensor, TensorError> {
        if self.variance != other.variance {
            return Err(TensorError::VarianceMismatch(format!(
                "{} vs {}",
                self.variance_string(),
                other.variance_string()
            )));
        }
        Ok(QubitTensor {
            variance: self.variance.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &QubitTensor) -> Result<QubitTensor, TensorError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &QubitTensor) -> Result<QubitTensor, TensorError> {
        self.zip_with(other, |a, b| a - b)
    }

    /// The SWAP gate vectorised: `|0000⟩+|0101⟩+|1010⟩+|1111⟩` (or its bra form).
    pub fn swap_gate(v: Variance) -> QubitTensor {
        let entries = ["0000", "0101", "1010", "1111"]
            .into_iter()
            .map(|b| (Self::mask_of(b).expect("literal"), Scalar::one()));
        Self::from_entries(vec![v; 4], entries).expect("masks in range")
    }

    /// The 16 coordinates `x₁..x₁₆` of an arity-4 tensor: `x_{1+mask} = coeff(mask)`.
    pub fn flatten_coeffs(&self) -> Result<[Scalar; 16], TensorError> {
        if self.arity() != 4 {
            return Err(TensorError::ArityMismatch {
                expected: 4,
                found: self.arity(),
            });
        }
        Ok(std::array::from_fn(|k| self.coeffs[k].clone()))
    }

    /// Inverse of [`flatten_coeffs`](Self::flatten_coeffs).
    pub fn from_flat(x: &[Scalar; 16], v: Variance) -> QubitTensor {
        QubitTensor {
            variance: vec![v; 4],
            coeffs: x.to_vec(),
        }
    }

    pub fn variance_string(&self) -> String {
        self.variance.iter().map(|v| v.letter()).collect()
    }

    pub fn to_json(&self) -> TensorJson {
        TensorJson {
            arity: self.arity(),
            variance: self.variance_string(),
            coeffs: self
                .nonzero()
                .map(|(m, c)| (m.to_string(), c.clone()))
                .collect(),
        }
    }

    pub fn from_json(j: &TensorJson) -> Result<Self, TensorError> {
        let variance = j
            .variance
            .chars()
            .map(|c| match c {
                'k' => Ok(Variance::Ket),
                'b' => Ok(Variance::Bra),
                _ => Err(TensorError::Invalid(format!("bad variance letter `{c}`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if variance.len() != j.arity {
            return Err(TensorError::Invalid(format!(
                "variance `{}` does not have arity {}",
                j.variance, j.arity
            )));
        }
        let entries = j
            .coeffs
            .iter()
            .map(|(k, v)| {
                k.trim()
                    .parse::<usize>()
                    .map(|m| (m, v.clone()))
                    .map_err(|_| TensorError::Invalid(format!("bad bitmask key `{k}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_entries(variance, entries)
    }
}

impl fmt::Display for QubitTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.arity();
        let mut first = true;
        for (mask, c) in self.nonzero() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let bits = Self::bits_of(mask, n);
            let basis = if self.is_all(Variance::Bra) {
                format!("<{bits}|")
            } else if self.is_all(Variance::Ket) {
                format!("|{bits}>")
            } else {
                format!("[{bits}]")
            };
            if c.is_one() {
                write!(f, "{basis}")?;
            } else {
                write!(f, "({c}){basis}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QubitTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QubitTensor[{}]({self})", self.variance_string())
    }
}

/// Sparse JSON form: `{ "arity": n, "variance": "kkbb", "coeffs": { "<bitmask>": "<scalar>" } }`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TensorJson {
    pub arity: usize,
    pub variance: String,
    #[serde(default)]
    pub coeffs: BTreeMap<String, Scalar>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_i64(v)
    }

    fn ket(bits: &str) -> QubitTensor {
        QubitTensor::basis(
            vec![Variance::Ket; bits.len()],
            QubitTensor::mask_of(bits).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn product_of_basis_vectors() {
        assert_eq!(ket("0").tensor_product(&ket("1")), ket("01"));
        let t = ket("0110");
        assert_eq!(QubitTensor::scalar(Scalar::one()).tensor_product(&t), t);
    }

    #[test]
    fn product_of_two_pair_gates() {
        let x = Scalar::from_i64(3);
        let y = Scalar::from_i64(5);
        let gx =
            QubitTensor::from_entries(vec![Variance::Ket; 2], [(0, s(1)), (3, x.clone())]).unwrap();
        let gy =
            QubitTensor::from_entries(vec![Variance::Ket; 2], [(0, s(1)), (3, y.clone())]).unwrap();
        let want = QubitTensor::from_entries(
            vec![Variance::Ket; 4],
            [
                (QubitTensor::mask_of("0000").unwrap(), s(1)),
                (QubitTensor::mask_of("0011").unwrap(), y.clone()),
                (QubitTensor::mask_of("1100").unwrap(), x.clone()),
                (QubitTensor::mask_of("1111").unwrap(), &x * &y),
            ],
        )
        .unwrap();
        assert_eq!(gx.tensor_product(&gy), want);
    }

    #[test]
    fn pairing_basics() {
        let bra00 = ket("00").transpose();
        let bra11 = ket("11").transpose();
        assert_eq!(QubitTensor::pairing(&bra00, &ket("00")).unwrap(), s(1));
        assert_eq!(QubitTensor::pairing(&bra11, &ket("00")).unwrap(), s(0));
        assert!(matches!(
            QubitTensor::pairing(&bra11, &ket("000")),
            Err(TensorError::ArityMismatch { .. })
        ));
        assert!(QubitTensor::pairing(&ket("00"), &ket("00")).is_err());
    }

    #[test]
    fn swap_vector() {
        let sw = QubitTensor::swap_gate(Variance::Ket);
        assert_eq!(sw.coeff(QubitTensor::mask_of("0101").unwrap()), &s(1));
        assert_eq!(sw.coeff(QubitTensor::mask_of("0001").unwrap()), &s(0));
        let flat = sw.flatten_coeffs().unwrap();
        for (k, x) in flat.iter().enumerate() {
            let want = if [1, 6, 11, 16].contains(&(k + 1)) {
                1
            } else {
                0
            };
            assert_eq!(x, &s(want), "x{}", k + 1);
        }
        assert_eq!(sw.parity_projection(Parity::Even), sw);
        assert!(sw.parity_projection(Parity::Odd).is_zero());
    }

    #[test]
    fn swap_exchanges_wires() {
        // Read as a map from legs (1,2) to legs (3,4) the vectorised SWAP
        // identifies leg 1 with leg 3 and leg 2 with leg 4; contracting legs
        // 1,2 with e_i ⊗ e_j leaves e_i ⊗ e_j on legs 3,4, so the wires cross.
        let sw = QubitTensor::swap_gate(Variance::Bra);
        for (i, j) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
            for (k, l) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
                let mask = i | (j << 1) | (k << 2) | (l << 3);
                let want = if (i, j) == (k, l) { 1 } else { 0 };
                assert_eq!(sw.coeff(mask), &s(want));
            }
        }
    }

    #[test]
    fn flatten_examples() {
        assert_eq!(ket("0000").flatten_coeffs().unwrap()[0], s(1));
        let z = QubitTensor::zeros_uniform(4, Variance::Ket);
        assert!(z.flatten_coeffs().unwrap().iter().all(Zero::is_zero));
        assert!(ket("000").flatten_coeffs().is_err());
    }

    #[test]
    fn basis_change_identity_and_diagonal() {
        let t = ket("0110");
        let id = vec![TwoByTwo::identity(); 4];
        assert_eq!(t.apply_basis_change(&id).unwrap(), t);
        let diag = TwoByTwo::new(s(1), s(0), s(0), s(1));
        assert_eq!(ket("0").apply_basis_change(&[diag]).unwrap(), ket("0"));
        assert!(t.apply_basis_change(&id[..3]).is_err());
    }

    #[test]
    fn restrict_leg_slices() {
        let t = ket("101");
        assert_eq!(t.restrict_leg(1, 0).unwrap(), ket("11"));
        assert!(t.restrict_leg(1, 1).unwrap().is_zero());
        assert_eq!(t.restrict_leg(2, 1).unwrap(), ket("10"));
    }

    #[test]
    fn json_round_trip_and_errors() {
        let t = QubitTensor::swap_gate(Variance::Bra).scale(&Scalar::inv_sqrt2());
        let j = serde_json::to_string(&t.to_json()).unwrap();
        let back: TensorJson = serde_json::from_str(&j).unwrap();
        assert_eq!(QubitTensor::from_json(&back).unwrap(), t);
        let bad = TensorJson {
            arity: 2,
            variance: "kkk".into(),
            coeffs: BTreeMap::new(),
        };
        assert!(QubitTensor::from_json(&bad).is_err());
    }

    fn arb_small() -> impl Strategy<Value = Scalar> {
        (-6i64..6, 1i64..4).prop_map(|(n, d)| Scalar::from_ratio(n, d))
    }

    fn arb_tensor(arity: usize, v: Variance) -> impl Strategy<Value = QubitTensor> {
        proptest::collection::vec(arb_small(), 1 << arity)
            .prop_map(move |c| QubitTensor::new(vec![v; arity], c).unwrap())
    }

    fn arb_matrix() -> impl Strategy<Value = TwoByTwo> {
        proptest::array::uniform4(arb_small()).prop_map(|[a, b, c, d]| TwoByTwo::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn product_is_associative(a in arb_tensor(1, Variance::Ket), b in arb_tensor(2, Variance::Bra), c in arb_tensor(1, Variance::Ket)) {
            prop_assert_eq!(a.tensor_product(&b).tensor_product(&c), a.tensor_product(&b.tensor_product(&c)));
        }

        #[test]
        fn pairing_is_bilinear(u in arb_tensor(3, Variance::Bra), v in arb_tensor(3, Variance::Ket), w in arb_tensor(3, Variance::Ket), k in arb_small()) {
            let lhs = QubitTensor::pairing(&u, &v.scale(&k).add(&w).unwrap()).unwrap();
            let rhs = &k * &QubitTensor::pairing(&u, &v).unwrap() + QubitTensor::pairing(&u, &w).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn parity_projections_split(t in arb_tensor(4, Variance::Bra), v in arb_tensor(4, Variance::Ket)) {
            let even = t.parity_projection(Parity::Even);
            let odd = t.parity_projection(Parity::Odd);
            prop_assert_eq!(even.parity_projection(Parity::Even), even.clone());
            prop_assert_eq!(even.add(&odd).unwrap(), t);
            prop_assert!(even.parity_projection(Parity::Odd).is_zero());
            let v_odd = v.parity_projection(Parity::Odd);
            prop_assert!(QubitTensor::pairing(&even, &v_odd).unwrap().is_zero());
        }

        #[test]
        fn basis_change_is_functorial(t in arb_tensor(2, Variance::Bra), m1 in arb_matrix(), m2 in arb_matrix(), n1 in arb_matrix(), n2 in arb_matrix()) {
            // Right composition: (φ∘A)∘B = φ∘(AB).
            let step = t.apply_basis_change(&[m1.clone(), n1.clone()]).unwrap()
                .apply_basis_change(&[m2.clone(), n2.clone()]).unwrap();
            let once = t.apply_basis_change(&[m1.mul(&m2), n1.mul(&n2)]).unwrap();
            prop_assert_eq!(step, once);
            let k = t.transpose();
            let step = k.apply_basis_change(&[m1.clone(), n1.clone()]).unwrap()
                .apply_basis_change(&[m2.clone(), n2.clone()]).unwrap();
            let once = k.apply_basis_change(&[m2.mul(&m1), n2.mul(&n1)]).unwrap();
            prop_assert_eq!(step, once);
        }

        #[test]
        fn basis_change_preserves_pairing(u in arb_tensor(2, Variance::Bra), v in arb_tensor(2, Variance::Ket), a in arb_matrix(), b in arb_matrix()) {
            // ⟨φ∘g, x⟩ = ⟨φ, g·x⟩
            let lhs = QubitTensor::pairing(&u.apply_basis_change(&[a.clone(), b.clone()]).unwrap(), &v).unwrap();
            let rhs = QubitTensor::pairing(&u, &v.apply_basis_change(&[a, b]).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
