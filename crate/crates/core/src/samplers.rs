//! Seeded random generators for exact test inputs.

use rand::Rng;

use crate::circuit::{Assignment, Circuit};
use crate::exactfield::Scalar;
use crate::pfaffian::SkewMatrix;
use crate::tensor::{QubitTensor, TwoByTwo, Variance};

/// A small rational `p/q` with `|p| ≤ 6`, `1 ≤ q ≤ 4`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    Scalar::from_ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

/// A nonzero small rational.
pub fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    loop {
        let v = rational(rng);
        if !num_traits::Zero::is_zero(&v) {
            return v;
        }
    }
}

/// Mostly rational, sometimes with √2, i and i√2 parts.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    if rng.gen_bool(0.75) {
        return rational(rng);
    }
    let part = |rng: &mut R| Scalar::from_ratio(rng.gen_range(-3..=3), rng.gen_range(1..=2));
    part(rng)
        + part(rng) * Scalar::sqrt2()
        + part(rng) * Scalar::i()
        + part(rng) * Scalar::i() * Scalar::sqrt2()
}

pub fn skew_labeled<R: Rng + ?Sized>(labels: Vec<u32>, rng: &mut R) -> SkewMatrix {
    let n = labels.len();
    let mut m = SkewMatrix::zeros(labels).expect("caller supplies increasing labels");
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, scalar(rng));
        }
    }
    m
}

/// Random skew matrix labeled `1..=n`.
pub fn skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SkewMatrix {
    skew_labeled((1..=n as u32).collect(), rng)
}

/// Random skew matrix with rational entries only.
pub fn rational_skew<R: Rng + ?Sized>(n: usize, rng: &mut R) -> SkewMatrix {
    let mut m = SkewMatrix::zeros_sized(n);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, rational(rng));
        }
    }
    m
}

/// Dense random tensor of the given variances.
pub fn tensor<R: Rng + ?Sized>(variance: Vec<Variance>, rng: &mut R) -> QubitTensor {
    let coeffs = (0..1usize << variance.len()).map(|_| scalar(rng)).collect();
    QubitTensor::new(variance, coeffs).expect("2^n coefficients")
}

/// Exactly unimodular: a product of three elementary shears.
pub fn sl2<R: Rng + ?Sized>(rng: &mut R) -> TwoByTwo {
    let one = || Scalar::from_i64(1);
    let zero = || Scalar::from_i64(0);
    let upper = |x| TwoByTwo::new(one(), x, zero(), one());
    let lower = |x| TwoByTwo::new(one(), zero(), x, one());
    upper(rational(rng))
        .mul(&lower(rational(rng)))
        .mul(&upper(rational(rng)))
}

/// Random invertible 2×2 matrix with rational entries.
pub fn gl2<R: Rng + ?Sized>(rng: &mut R) -> TwoByTwo {
    loop {
        let m = TwoByTwo::new(rational(rng), rational(rng), rational(rng), rational(rng));
        if !num_traits::Zero::is_zero(&m.det()) {
            return m;
        }
    }
}

/// Replaces every elementary matrix with a random one of the same size.
pub fn randomize_circuit<R: Rng + ?Sized>(shape: &Circuit, rng: &mut R) -> Circuit {
    let mut c = shape.clone();
    for v in 0..c.vertices().len() {
        if let Assignment::Elementary(m) = &c.vertices()[v].assignment {
            let fresh = skew(m.size(), rng);
            c = c
                .with_assignment(v, Assignment::Elementary(fresh))
                .expect("same arity and side");
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sl2_is_unimodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            assert!(sl2(&mut rng).det().is_one());
        }
    }

    #[test]
    fn seeded_streams_repeat() {
        let a = skew(5, &mut ChaCha8Rng::seed_from_u64(9));
        let b = skew(5, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
    }
}
