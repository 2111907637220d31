//! Membership in the Pfaffian gate and cogate varieties.
//!
//! A gate point `Σ α_I |I⟩` must vanish on odd `I`, satisfy `α_∅ = 1`, and
//! satisfy every Grassmann–Plücker relation. We use the relations in their
//! Wick form: for subsets `I`, `J` of odd size with `I Δ J = {x_1 < … < x_m}`,
//!
//! ```text
//! Σ_k (−1)^k α_{I Δ x_k} α_{J Δ x_k} = 0.
//! ```
//!
//! With `S = I ∩ J`, `R = I \ J`, `T = J \ I` each relation is recorded under
//! its triple `(S, R, T)`; its order `k ≥ 1` is given by `|R| + |T| = 2k + 2`.
//! Cogate points use `α_I := β_Ī`, so the normalization becomes `β_[n] = 1`.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactfield::Scalar;
use crate::tensor::{QubitTensor, Variance};

/// Largest arity with enumerated relations.
pub const MAX_ARITY: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VarietyError {
    #[error("membership is implemented for arity <= {MAX_ARITY}, got {0}")]
    TooLarge(usize),
    #[error("{side} points must have all legs {expected}")]
    Variance {
        side: &'static str,
        expected: &'static str,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VarietySide {
    Gate,
    Cogate,
}

/// One quadratic relation `Σ sign · α_a · α_b = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GpRelation {
    pub s: usize,
    pub r: usize,
    pub t: usize,
    pub k: usize,
    /// `(sign, a, b)` with `a ≤ b`, sorted, first sign positive.
    pub terms: Vec<(i8, usize, usize)>,
}

impl GpRelation {
    fn from_pair(i: usize, j: usize) -> Option<Self> {
        let diff = i ^ j;
        let m = diff.count_ones() as usize;
        if m < 4 {
            return None;
        }
        let mut terms: Vec<(i8, usize, usize)> = (0..usize::BITS as usize)
            .filter(|&x| diff >> x & 1 == 1)
            .enumerate()
            .map(|(k, x)| {
                let (a, b) = (i ^ 1 << x, j ^ 1 << x);
                (if k % 2 == 0 { -1 } else { 1 }, a.min(b), a.max(b))
            })
            .collect();
        terms.sort_by_key(|&(_, a, b)| (a, b));
        if terms[0].0 < 0 {
            for t in &mut terms {
                t.0 = -t.0;
            }
        }
        Some(GpRelation {
            s: i & j,
            r: i & !j,
            t: j & !i,
            k: (m - 2) / 2,
            terms,
        })
    }

    /// Value of the relation under the coordinates `alpha`.
    /// Exact test on integer coordinates; `None` when an intermediate overflows.
    fn vanishes_on_integers<'a>(&self, alpha: impl Fn(usize) -> &'a IntScalar) -> Option<bool> {
        let mut acc = [0i128; 4];
        for &(sign, i, j) in &self.terms {
            let p = int_mul(alpha(i), alpha(j))?;
            for k in 0..4 {
                acc[k] = if sign > 0 {
                    acc[k].checked_add(p[k])?
                } else {
                    acc[k].checked_sub(p[k])?
                };
            }
        }
        Some(acc == [0; 4])
    }

    pub fn evaluate<'a>(&self, alpha: impl Fn(usize) -> &'a Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for &(sign, a, b) in &self.terms {
            let (x, y) = (alpha(a), alpha(b));
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let p = x * y;
            if sign > 0 {
                acc += &p;
            } else {
                acc -= &p;
            }
        }
        acc
    }
}

fn subset_name(mask: usize) -> String {
    if mask == 0 {
        return "∅".into();
    }
    (0..usize::BITS as usize)
        .filter(|&x| mask >> x & 1 == 1)
        .map(|x| (x + 1).to_string())
        .collect::<Vec<_>>()
        .join(if mask >> 9 == 0 { "" } else { "," })
}

impl fmt::Display for GpRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, &(sign, a, b)) in self.terms.iter().enumerate() {
            let op = match (n, sign > 0) {
                (0, _) => "",
                (_, true) => " + ",
                (_, false) => " - ",
            };
            write!(f, "{op}α[{}]·α[{}]", subset_name(a), subset_name(b))?;
        }
        write!(f, " = 0")
    }
}

fn build(n: usize) -> Vec<GpRelation> {
    let full = 1usize << n;
    let odd: Vec<usize> = (0..full).filter(|m| m.count_ones() % 2 == 1).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (x, &i) in odd.iter().enumerate() {
        for &j in &odd[x + 1..] {
            if let Some(rel) = GpRelation::from_pair(i, j) {
                if seen.insert(rel.terms.clone()) {
                    out.push(rel);
                }
            }
        }
    }
    out
}

/// All distinct relations on `[n]`, computed once per `n`.
pub fn relations(n: usize) -> Result<&'static [GpRelation], VarietyError> {
    static CACHE: [OnceLock<Vec<GpRelation>>; MAX_ARITY + 1] =
        [const { OnceLock::new() }; MAX_ARITY + 1];
    let cell = CACHE.get(n).ok_or(VarietyError::TooLarge(n))?;
    Ok(cell.get_or_init(|| build(n)))
}

/// Relations on `[n]` of order at most `max_k`.
pub fn enumerate_relations(n: usize, max_k: usize) -> Result<Vec<GpRelation>, VarietyError> {
    Ok(relations(n)?
        .iter()
        .filter(|r| r.k <= max_k)
        .cloned()
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A coefficient that must vanish by parity does not. `index` is the tensor bitmask.
    OddSupport { index: usize, value: Scalar },
    /// The normalizing coefficient is not 1.
    Normalization { value: Scalar },
    Relation {
        relation: String,
        s: usize,
        r: usize,
        t: usize,
        value: Scalar,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OddSupport { index, value } => {
                write!(
                    f,
                    "coefficient at index {index} should vanish by parity but is {value}"
                )
            }
            Violation::Normalization { value } => {
                write!(f, "normalizing coefficient is {value}, not 1")
            }
            Violation::Relation {
                relation, value, ..
            } => write!(f, "{relation} evaluates to {value}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipReport {
    pub side: VarietySide,
    pub cone: bool,
    pub member: bool,
    pub relations_checked: usize,
    /// The first failed condition, in the order parity, normalization, relations.
    pub violation: Option<Violation>,
}

/// Checks `t` against the gate or cogate variety, or its cone when `cone` is set.
pub fn check_membership(
    t: &QubitTensor,
    side: VarietySide,
    cone: bool,
) -> Result<MembershipReport, VarietyError> {
    let n = t.arity();
    if n > MAX_ARITY {
        return Err(VarietyError::TooLarge(n));
    }
    let (variance, name, expected) = match side {
        VarietySide::Gate => (Variance::Ket, "gate", "kets"),
        VarietySide::Cogate => (Variance::Bra, "cogate", "bras"),
    };
    if !t.is_all(variance) {
        return Err(VarietyError::Variance {
            side: name,
            expected,
        });
    }
    let full = (1usize << n) - 1;
    let index_of = |i: usize| match side {
        VarietySide::Gate => i,
        VarietySide::Cogate => full ^ i,
    };
    let alpha = |i: usize| t.coeff(index_of(i));
    let report = |violation: Option<Violation>, checked| MembershipReport {
        side,
        cone,
        member: violation.is_none(),
        relations_checked: checked,
        violation,
    };

    for i in (0..=full).filter(|i| i.count_ones() % 2 == 1) {
        if !alpha(i).is_zero() {
            return Ok(report(
                Some(Violation::OddSupport {
                    index: index_of(i),
                    value: alpha(i).clone(),
                }),
                0,
            ));
        }
    }
    if !cone && !alpha(0).is_one() {
        return Ok(report(
            Some(Violation::Normalization {
                value: alpha(0).clone(),
            }),
            0,
        ));
    }
    let rels = relations(n)?;
    let ints = integer_coords(t);
    for (checked, rel) in rels.iter().enumerate() {
        if let Some(ints) = &ints {
            if rel.vanishes_on_integers(|i| &ints[index_of(i)]) == Some(true) {
                continue;
            }
        }
        let value = rel.evaluate(alpha);
        if !value.is_zero() {
            return Ok(report(
                Some(Violation::Relation {
                    relation: rel.to_string(),
                    s: rel.s,
                    r: rel.r,
                    t: rel.t,
                    value,
                }),
                checked + 1,
            ));
        }
    }
    Ok(report(None, rels.len()))
}

/// Coordinates `(p, q, r, s)` of `p + q√2 + (r + s√2)i` with integer entries.
type IntScalar = [i128; 4];

/// All coefficients times one common denominator, when every scaled
/// coordinate fits in an `i64`. The relations are homogeneous quadrics, so
/// scaling does not change which of them vanish.
fn integer_coords(t: &QubitTensor) -> Option<Vec<IntScalar>> {
    let mut lcm = BigInt::one();
    for (_, c) in t.nonzero() {
        for x in c.coords() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let mut out = vec![[0i128; 4]; 1 << t.arity()];
    for (mask, c) in t.nonzero() {
        for (k, x) in c.coords().into_iter().enumerate() {
            let v = x.numer() * (&lcm / x.denom());
            out[mask][k] = v.to_i64()? as i128;
        }
    }
    Some(out)
}

fn int_mul(a: &IntScalar, b: &IntScalar) -> Option<IntScalar> {
    // Products in Q(√2): (x0 + x1√2)(y0 + y1√2).
    let q2 = |x0: i128, x1: i128, y0: i128, y1: i128| -> Option<(i128, i128)> {
        let rat = x0
            .checked_mul(y0)?
            .checked_add(x1.checked_mul(y1)?.checked_mul(2)?)?;
        let irr = x0.checked_mul(y1)?.checked_add(x1.checked_mul(y0)?)?;
        Some((rat, irr))
    };
    let (aa0, aa1) = q2(a[0], a[1], b[0], b[1])?;
    let (bb0, bb1) = q2(a[2], a[3], b[2], b[3])?;
    let (ab0, ab1) = q2(a[0], a[1], b[2], b[3])?;
    let (ba0, ba1) = q2(a[2], a[3], b[0], b[1])?;
    Some([
        aa0.checked_sub(bb0)?,
        aa1.checked_sub(bb1)?,
        ab0.checked_add(ba0)?,
        ab1.checked_add(ba1)?,
    ])
}

pub fn is_pfaffian_gate_point(t: &QubitTensor) -> Result<bool, VarietyError> {
    Ok(check_membership(t, VarietySide::Gate, false)?.member)
}

pub fn is_pfaffian_cogate_point(t: &QubitTensor) -> Result<bool, VarietyError> {
    Ok(check_membership(t, VarietySide::Cogate, false)?.member)
}

pub fn is_cone_point(t: &QubitTensor, side: VarietySide) -> Result<bool, VarietyError> {
    Ok(check_membership(t, side, true)?.member)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_path_matches_exact_evaluation() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for n in [4, 6] {
            for k in 0..6 {
                let t = if k % 2 == 0 {
                    crate::samplers::tensor(vec![Variance::Ket; n], &mut rng)
                } else {
                    crate::samplers::skew(n, &mut rng).sub_pfaffian_gate()
                };
                let ints = integer_coords(&t).unwrap();
                for rel in relations(n).unwrap() {
                    let fast = rel.vanishes_on_integers(|i| &ints[i]).unwrap();
                    assert_eq!(fast, rel.evaluate(|i| t.coeff(i)).is_zero());
                }
            }
        }
        let huge = Scalar::from_rational(num_rational::BigRational::from_integer(
            BigInt::from(1u64 << 40).pow(2),
        ));
        let mut t = QubitTensor::zeros_uniform(4, Variance::Ket);
        t.set(0, huge).unwrap();
        assert!(integer_coords(&t).is_none());
    }
    use crate::samplers;
    use crate::tensor::Variance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn relation_counts() {
        assert!(relations(2).unwrap().is_empty());
        assert!(relations(3).unwrap().is_empty());
        assert_eq!(relations(4).unwrap().len(), 1);
        assert_eq!(relations(6).unwrap().len(), 76);
        assert_eq!(relations(8).unwrap().len(), 2976);
        assert_eq!(relations(9), Err(VarietyError::TooLarge(9)));
        assert_eq!(
            enumerate_relations(8, 1).unwrap().iter().map(|r| r.k).max(),
            Some(1)
        );
        assert_eq!(enumerate_relations(8, 3).unwrap().len(), 2976);
    }

    #[test]
    fn four_leg_quadric() {
        // α∅·α1234 − α12·α34 + α13·α24 − α14·α23
        let rel = &relations(4).unwrap()[0];
        assert_eq!(
            rel.terms,
            vec![(1, 0, 15), (-1, 3, 12), (1, 5, 10), (-1, 6, 9)]
        );
        assert_eq!(
            rel.to_string(),
            "α[∅]·α[1234] - α[12]·α[34] + α[13]·α[24] - α[23]·α[14] = 0"
        );
    }

    #[test]
    fn eight_leg_relations_include_disjoint_quartets() {
        let rels = relations(8).unwrap();
        for s in [0usize, 0b11, 0b1111] {
            assert!(rels.iter().any(|r| r.k == 1 && r.s & s == s));
        }
    }

    #[test]
    fn sub_pfaffian_images_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 0..=7 {
            for _ in 0..10 {
                let m = samplers::skew(n, &mut rng);
                let g = m.sub_pfaffian_gate();
                let c = m.sub_pfaffian_cogate();
                assert!(is_pfaffian_gate_point(&g).unwrap(), "n={n}");
                assert!(is_pfaffian_cogate_point(&c).unwrap(), "n={n}");
                let three = Scalar::from_i64(3);
                assert!(is_cone_point(&g.scale(&three), VarietySide::Gate).unwrap());
                assert!(!is_pfaffian_gate_point(&g.scale(&three)).unwrap());
            }
        }
    }

    #[test]
    fn cyclic_relabeling_preserves_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in [4, 6] {
            let g = samplers::skew(n, &mut rng).sub_pfaffian_gate();
            let order: Vec<usize> = (1..n).chain([0]).collect();
            assert!(is_pfaffian_gate_point(&g.permute_legs(&order).unwrap()).unwrap());
        }
    }

    #[test]
    fn swap_is_not_a_point() {
        let ket = QubitTensor::swap_gate(Variance::Ket);
        let report = check_membership(&ket, VarietySide::Gate, false).unwrap();
        assert!(!report.member);
        match report.violation {
            Some(Violation::Relation {
                s: 0, ref value, ..
            }) => assert_eq!(value, &Scalar::from_i64(2)),
            ref other => panic!("unexpected {other:?}"),
        }
        let bra = QubitTensor::swap_gate(Variance::Bra);
        assert!(!is_pfaffian_cogate_point(&bra).unwrap());
        for l in [-2, 1, 5] {
            assert!(!is_cone_point(&bra.scale(&Scalar::from_i64(l)), VarietySide::Cogate).unwrap());
            assert!(!is_cone_point(&ket.scale(&Scalar::from_i64(l)), VarietySide::Gate).unwrap());
        }
    }

    #[test]
    fn simple_points() {
        let zero_ket = QubitTensor::basis(vec![Variance::Ket; 4], 0).unwrap();
        assert!(is_pfaffian_gate_point(&zero_ket).unwrap());
        assert!(is_cone_point(
            &QubitTensor::zeros_uniform(4, Variance::Bra),
            VarietySide::Cogate
        )
        .unwrap());
        let odd = QubitTensor::basis(vec![Variance::Ket; 4], 1).unwrap();
        let r = check_membership(&odd, VarietySide::Gate, true).unwrap();
        assert_eq!(
            r.violation,
            Some(Violation::OddSupport {
                index: 1,
                value: Scalar::one()
            })
        );
    }

    #[test]
    fn errors() {
        let bra = QubitTensor::zeros_uniform(2, Variance::Bra);
        assert!(matches!(
            is_pfaffian_gate_point(&bra),
            Err(VarietyError::Variance { .. })
        ));
        let big = QubitTensor::zeros_uniform(9, Variance::Ket);
        assert_eq!(is_pfaffian_gate_point(&big), Err(VarietyError::TooLarge(9)));
    }
}
