//! Generators of the SL(2)^4 invariant ring on four-qubit tensors.
//!
//! Coordinates `x_1..x_16` follow [`QubitTensor::flatten_coeffs`]: `x_{1+m}` is
//! the coefficient at bitmask `m`. The formulas are written over any
//! commutative ring so the same code evaluates numbers and polynomials.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactfield::Scalar;
use crate::tensor::{QubitTensor, TensorError, TwoByTwo, Variance};

/// Degrees of `H`, `det L`, `det M`, `det B`.
pub const DEGREES: [u32; 4] = [2, 4, 4, 6];

pub trait CommRing:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> CommRing for T where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantError {
    #[error("four-qubit invariants need arity 4, got {0}")]
    WrongArity(usize),
    #[error("expected all legs {0}")]
    Variance(&'static str),
    #[error("group element {index} has determinant {det}, not 1")]
    NotUnimodular { index: usize, det: Box<Scalar> },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

fn x<T: Clone>(xs: &[T; 16], i: usize) -> T {
    xs[i - 1].clone()
}

/// `Σ ± a·b` over 1-based index pairs.
fn quad<T: CommRing>(xs: &[T; 16], terms: &[(i8, usize, usize)]) -> T {
    terms.iter().fold(T::zero(), |acc, &(s, a, b)| {
        let p = x(xs, a) * x(xs, b);
        if s > 0 {
            acc + p
        } else {
            acc - p
        }
    })
}

fn det3<T: CommRing>(m: &[[T; 3]; 3]) -> T {
    let minor = |r: usize, c: usize| {
        let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
        let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
        m[r1][c1].clone() * m[r2][c2].clone() - m[r1][c2].clone() * m[r2][c1].clone()
    };
    (0..3).fold(T::zero(), |acc, c| acc + m[0][c].clone() * minor(0, c))
}

fn det4<T: CommRing>(m: &[[T; 4]; 4]) -> T {
    let mut acc = T::zero();
    for c in 0..4 {
        let mut sub: [[T; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| T::zero()));
        for r in 1..4 {
            for (k, cc) in (0..4).filter(|&cc| cc != c).enumerate() {
                sub[r - 1][k] = m[r][cc].clone();
            }
        }
        let term = m[0][c].clone() * det3(&sub);
        acc = if c % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

fn grid4<T: Clone>(xs: &[T; 16], idx: [[usize; 4]; 4]) -> [[T; 4]; 4] {
    idx.map(|row| row.map(|i| x(xs, i)))
}

/// Cayley's hyperdeterminant `H`.
pub fn hyperdeterminant_h<T: CommRing>(xs: &[T; 16]) -> T {
    quad(
        xs,
        &[
            (1, 1, 16),
            (-1, 2, 15),
            (-1, 3, 14),
            (1, 4, 13),
            (-1, 5, 12),
            (1, 6, 11),
            (1, 7, 10),
            (-1, 8, 9),
        ],
    )
}

pub fn det_l<T: CommRing>(xs: &[T; 16]) -> T {
    det4(&grid4(
        xs,
        [
            [1, 5, 9, 13],
            [2, 6, 10, 14],
            [3, 7, 11, 15],
            [4, 8, 12, 16],
        ],
    ))
}

pub fn det_m<T: CommRing>(xs: &[T; 16]) -> T {
    det4(&grid4(
        xs,
        [
            [1, 9, 3, 11],
            [2, 10, 4, 12],
            [5, 13, 7, 15],
            [6, 14, 8, 16],
        ],
    ))
}

pub fn det_b<T: CommRing>(xs: &[T; 16]) -> T {
    let b = [
        [
            quad(xs, &[(1, 1, 4), (-1, 2, 3)]),
            quad(xs, &[(1, 1, 8), (1, 4, 5), (-1, 3, 6), (-1, 2, 7)]),
            quad(xs, &[(1, 5, 8), (-1, 6, 7)]),
        ],
        [
            quad(xs, &[(1, 1, 12), (1, 4, 9), (-1, 3, 10), (-1, 2, 11)]),
            quad(
                xs,
                &[
                    (1, 1, 16),
                    (1, 4, 13),
                    (1, 5, 12),
                    (1, 8, 9),
                    (-1, 3, 14),
                    (-1, 2, 15),
                    (-1, 7, 10),
                    (-1, 6, 11),
                ],
            ),
            quad(xs, &[(1, 5, 16), (1, 8, 13), (-1, 6, 15), (-1, 7, 14)]),
        ],
        [
            quad(xs, &[(1, 9, 12), (-1, 10, 11)]),
            quad(xs, &[(1, 9, 16), (1, 12, 13), (-1, 11, 14), (-1, 10, 15)]),
            quad(xs, &[(1, 13, 16), (-1, 14, 15)]),
        ],
    ];
    det3(&b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantVector {
    pub h: Scalar,
    pub det_l: Scalar,
    pub det_m: Scalar,
    pub det_b: Scalar,
}

impl InvariantVector {
    pub fn of_coords(xs: &[Scalar; 16]) -> Self {
        InvariantVector {
            h: hyperdeterminant_h(xs),
            det_l: det_l(xs),
            det_m: det_m(xs),
            det_b: det_b(xs),
        }
    }

    pub fn as_array(&self) -> [&Scalar; 4] {
        [&self.h, &self.det_l, &self.det_m, &self.det_b]
    }

    pub fn from_i64(v: [i64; 4]) -> Self {
        InvariantVector {
            h: Scalar::from_i64(v[0]),
            det_l: Scalar::from_i64(v[1]),
            det_m: Scalar::from_i64(v[2]),
            det_b: Scalar::from_i64(v[3]),
        }
    }
}

fn check_shape(t: &QubitTensor, v: Variance) -> Result<(), InvariantError> {
    if t.arity() != 4 {
        return Err(InvariantError::WrongArity(t.arity()));
    }
    if !t.is_all(v) {
        return Err(InvariantError::Variance(if v == Variance::Ket {
            "kets"
        } else {
            "bras"
        }));
    }
    Ok(())
}

/// The four generators on a ket tensor.
pub fn invariants(t: &QubitTensor) -> Result<InvariantVector, InvariantError> {
    check_shape(t, Variance::Ket)?;
    Ok(InvariantVector::of_coords(&t.flatten_coeffs()?))
}

/// `φ(v) = (Θ v)^T` with `Θ = T^{⊗4}`, `T = (0, −1; 1, 0)`: a covector becomes
/// the vector whose coefficient at `J̄` is `(−1)^{|J|} v_J`.
pub fn phi_transpose(t: &QubitTensor) -> Result<QubitTensor, InvariantError> {
    check_shape(t, Variance::Bra)?;
    let mut out = QubitTensor::zeros_uniform(4, Variance::Ket);
    for (j, c) in t.nonzero() {
        let v = if j.count_ones() % 2 == 0 {
            c.clone()
        } else {
            -c
        };
        out.set(15 ^ j, v)?;
    }
    Ok(out)
}

/// The daggered generators `H†(v) = H(φ(v)^T)` on a bra tensor.
pub fn dual_invariants(t: &QubitTensor) -> Result<InvariantVector, InvariantError> {
    Ok(InvariantVector::of_coords(
        &phi_transpose(t)?.flatten_coeffs()?,
    ))
}

/// `Σ_I |I⟩⟨Ī|` applied to a ket tensor: the coefficient at `I` moves to `Ī`.
pub fn psi_involution(t: &QubitTensor) -> Result<QubitTensor, InvariantError> {
    check_shape(t, Variance::Ket)?;
    let mut out = QubitTensor::zeros_uniform(4, Variance::Ket);
    for (i, c) in t.nonzero() {
        out.set(15 ^ i, c.clone())?;
    }
    Ok(out)
}

/// Whether all four generators survive the basis change `g` unchanged.
/// Ket tensors use the plain generators, bra tensors the daggered ones.
pub fn check_invariance(t: &QubitTensor, g: &[TwoByTwo; 4]) -> Result<bool, InvariantError> {
    for (index, m) in g.iter().enumerate() {
        let det = m.det();
        if !det.is_one() {
            return Err(InvariantError::NotUnimodular {
                index,
                det: Box::new(det),
            });
        }
    }
    let moved = t.apply_basis_change(g)?;
    let eval = |u: &QubitTensor| match t.variance().first() {
        Some(Variance::Bra) => dual_invariants(u),
        _ => invariants(u),
    };
    Ok(eval(t)? == eval(&moved)?)
}
