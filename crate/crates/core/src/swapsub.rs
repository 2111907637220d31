//! Replacing a SWAP cogate by a Pfaffian cogate after a change of basis.
//!
//! With `M = (a, b; c, d)` and `N = (e, f; g, h)` acting on the first two legs,
//! the covector `SWAP ∘ (M ⊗ N ⊗ I ⊗ I)` splits as `P + Q`, where `P` (the even
//! part) has coefficients `ae, bf, cg, bg, cf, de, ah, dh` and `Q` has odd
//! support. `P` is a normalized Pfaffian cogate exactly when `dh = 1` and
//! `ae = bcfg`. Paired against anything of even support, `Q` contributes nothing.
//!
//! Solutions are parameterized by `(b, c, f, h)` with `f, h ≠ 0`:
//! `d = 1/h`, `a = (1 + bc)h`, `e = −bc/h`, `g = −(1 + bc)/f`.

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{evaluate, evaluate_bruteforce, Assignment, Circuit, CircuitError, Side};
use crate::exactfield::Scalar;
use crate::pfaffian::SkewMatrix;
use crate::samplers;
use crate::tensor::{Parity, QubitTensor, TensorError, TwoByTwo, Variance};
use crate::varieties::{check_membership, VarietyError, VarietySide, Violation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SwapError {
    #[error("degenerate parameters: {0}")]
    Degenerate(&'static str),
    #[error("not a solution: {0}")]
    NotASolution(String),
    #[error("the even part is not the cogate of any skew matrix")]
    NotCogatePoint,
    #[error("substitution target must be a degree-4 cogate (vertex {0})")]
    BadTarget(usize),
    #[error("vertex {0} must be elementary for the substitution argument")]
    NotElementary(usize),
    #[error("obstruction check supports k = 2 or 3, got {0}")]
    UnsupportedK(usize),
    #[error("expected {expected} solutions, got {found}")]
    WrongCount { expected: usize, found: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

/// A pair of basis changes that turns the even part of SWAP into a Pfaffian cogate.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapSolution {
    m: TwoByTwo,
    n: TwoByTwo,
    s: SkewMatrix,
}

impl SwapSolution {
    /// Validates `(M, N)` and recovers the cogate matrix.
    pub fn from_matrices(m: TwoByTwo, n: TwoByTwo) -> Result<Self, SwapError> {
        if !m.det().is_one() || !n.det().is_one() {
            return Err(SwapError::NotASolution(
                "det M and det N must both be 1".into(),
            ));
        }
        let [a, b, c, d, e, f, g, h] = entries(&m, &n);
        if !(&d * &h).is_one() {
            return Err(SwapError::NotASolution("dh != 1".into()));
        }
        if &a * &e != &b * &c * &f * &g {
            return Err(SwapError::NotASolution("ae != bcfg".into()));
        }
        let (p, _) = decompose_swap(&m, &n);
        let s = cogate_matrix(&p)?;
        Ok(SwapSolution { m, n, s })
    }

    pub fn m(&self) -> &TwoByTwo {
        &self.m
    }

    pub fn n(&self) -> &TwoByTwo {
        &self.n
    }

    pub fn s(&self) -> &SkewMatrix {
        &self.s
    }

    /// `[a, b, c, d, e, f, g, h]`.
    pub fn entries(&self) -> [Scalar; 8] {
        entries(&self.m, &self.n)
    }

    /// `P` and `Q` for this solution.
    pub fn parts(&self) -> (QubitTensor, QubitTensor) {
        decompose_swap(&self.m, &self.n)
    }
}

fn entries(m: &TwoByTwo, n: &TwoByTwo) -> [Scalar; 8] {
    [
        m.entry(0, 0).clone(),
        m.entry(0, 1).clone(),
        m.entry(1, 0).clone(),
        m.entry(1, 1).clone(),
        n.entry(0, 0).clone(),
        n.entry(0, 1).clone(),
        n.entry(1, 0).clone(),
        n.entry(1, 1).clone(),
    ]
}

/// The solution with free parameters `[b, c, f, h]`.
pub fn sample_solution(params: &[Scalar; 4]) -> Result<SwapSolution, SwapError> {
    let [b, c, f, h] = params;
    if h.is_zero() {
        return Err(SwapError::Degenerate(
            "h = 0 forces d = 0, so dh = 1 is impossible",
        ));
    }
    if f.is_zero() {
        return Err(SwapError::Degenerate(
            "f = 0 leaves g undetermined by det N = 1",
        ));
    }
    let bc = b * c;
    let one_bc = Scalar::one() + &bc;
    let d = h.inv().expect("h is nonzero");
    let a = &one_bc * h;
    let e = -(&bc * &d);
    let g = -(&one_bc * &f.inv().expect("f is nonzero"));
    SwapSolution::from_matrices(
        TwoByTwo::new(a, b.clone(), c.clone(), d),
        TwoByTwo::new(e, f.clone(), g, h.clone()),
    )
}

/// `d = h = 1`, `a = e = 1/2`, `b = f = 1/√2`, `c = g = −1/√2`.
pub fn paper_solution() -> SwapSolution {
    let r = Scalar::inv_sqrt2();
    sample_solution(&[r.clone(), -&r, r, Scalar::one()]).expect("the explicit solution is valid")
}

/// A solution with small random rational parameters.
pub fn random_solution<R: Rng + ?Sized>(rng: &mut R) -> SwapSolution {
    loop {
        let params = [
            samplers::rational(rng),
            samplers::rational(rng),
            samplers::nonzero_rational(rng),
            samplers::nonzero_rational(rng),
        ];
        if let Ok(sol) = sample_solution(&params) {
            return sol;
        }
    }
}

/// `SWAP ∘ (M ⊗ N ⊗ I ⊗ I)` as a covector.
pub fn changed_swap(m: &TwoByTwo, n: &TwoByTwo) -> QubitTensor {
    QubitTensor::swap_gate(Variance::Bra)
        .apply_basis_change(&[
            m.clone(),
            n.clone(),
            TwoByTwo::identity(),
            TwoByTwo::identity(),
        ])
        .expect("four legs")
}

/// `(P, Q)`: the even and odd parts of the basis-changed SWAP covector.
pub fn decompose_swap(m: &TwoByTwo, n: &TwoByTwo) -> (QubitTensor, QubitTensor) {
    let full = changed_swap(m, n);
    (
        full.parity_projection(Parity::Even),
        full.parity_projection(Parity::Odd),
    )
}

/// The 4×4 skew `S` with `sPf∨(S) = p`: `S_ij` is the coefficient of `⟨[4] \ {i, j}|`.
pub fn cogate_matrix(p: &QubitTensor) -> Result<SkewMatrix, SwapError> {
    if p.arity() != 4 || !p.is_all(Variance::Bra) {
        return Err(SwapError::NotCogatePoint);
    }
    let mut s = SkewMatrix::zeros_sized(4);
    for i in 0..4 {
        for j in i + 1..4 {
            s.set(i, j, p.coeff(15 ^ (1 << i) ^ (1 << j)).clone());
        }
    }
    if &s.sub_pfaffian_cogate() != p {
        return Err(SwapError::NotCogatePoint);
    }
    Ok(s)
}

/// Values of the three circuits compared by [`demo_substitution`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubstitutionOutcome {
    /// Exhaustive value with the basis-changed Pfaffian cogate in place.
    pub before: Scalar,
    /// Exhaustive value with the SWAP covector in place.
    pub after: Scalar,
    /// Fast-path value of the elementary circuit carrying `S` itself.
    pub fast_path: Scalar,
}

impl SubstitutionOutcome {
    pub fn equal(&self) -> bool {
        self.before == self.after && self.after == self.fast_path
    }
}

/// Substitutes SWAP for the cogate at `v` and compares circuit values.
///
/// The gates at the far ends of `v`'s first two edges absorb `M` and `N` on
/// those legs, and `v` carries `sPf∨(S) ∘ (M⁻¹ ⊗ N⁻¹ ⊗ I ⊗ I)`; that circuit
/// has the same value as the elementary one with `S` at `v`. Replacing the
/// cogate at `v` by the bare SWAP covector then leaves the value unchanged.
pub fn demo_substitution(
    c: &Circuit,
    v: usize,
    sol: &SwapSolution,
) -> Result<SubstitutionOutcome, SwapError> {
    let target = c.vertex(v)?;
    if target.side != Side::Cogate || target.rotation.len() != 4 {
        return Err(SwapError::BadTarget(v));
    }
    if let Some(other) = (0..c.vertices().len())
        .find(|&u| u != v && !matches!(c.vertices()[u].assignment, Assignment::Elementary(_)))
    {
        return Err(SwapError::NotElementary(other));
    }
    let elementary = c.with_assignment(v, Assignment::Elementary(sol.s.clone()))?;
    let fast_path = evaluate(&elementary)?;

    // Per-vertex leg matrices on the gate side.
    let mut legs: Vec<Vec<TwoByTwo>> = c
        .vertices()
        .iter()
        .map(|vert| vec![TwoByTwo::identity(); vert.rotation.len()])
        .collect();
    for (edge, change) in [(target.rotation[0], &sol.m), (target.rotation[1], &sol.n)] {
        let [x, y] = c.edges()[edge];
        let gate = if x == v { y } else { x };
        let leg = c.vertices()[gate]
            .rotation
            .iter()
            .position(|&e| e == edge)
            .expect("validated rotation");
        legs[gate][leg] = change.mul(&legs[gate][leg]);
    }
    let mut changed = c.clone();
    for (u, mats) in legs.iter().enumerate() {
        if mats.iter().all(TwoByTwo::is_identity) {
            continue;
        }
        let vert = &c.vertices()[u];
        let t = vert.assignment.tensor(vert.side).apply_basis_change(mats)?;
        changed = changed.substitute(u, t)?;
    }
    let m_inv = sol.m.inverse().expect("unimodular");
    let n_inv = sol.n.inverse().expect("unimodular");
    let undone = sol.s.sub_pfaffian_cogate().apply_basis_change(&[
        m_inv,
        n_inv,
        TwoByTwo::identity(),
        TwoByTwo::identity(),
    ])?;
    let before = evaluate_bruteforce(&changed.substitute(v, undone)?)?;
    let after =
        evaluate_bruteforce(&changed.substitute(v, QubitTensor::swap_gate(Variance::Bra))?)?;
    Ok(SubstitutionOutcome {
        before,
        after,
        fast_path,
    })
}

/// What goes wrong when several SWAPs are replaced at once.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub k: usize,
    pub arity: usize,
    /// Arity of the tensor actually tested against the relations (at most 8).
    pub tested_arity: usize,
    /// Whether the even part of the product lies on the cogate cone.
    pub cone_member: bool,
    pub violation: Option<Violation>,
    /// For two factors: the even part equals `P₁⊗P₂ + Q₁⊗Q₂`.
    pub even_part_is_pp_plus_qq: Option<bool>,
    /// For two factors: `Q₁⊗Q₂` is nonzero.
    pub defect_nonzero: Option<bool>,
    /// For two factors: `P₁⊗P₂` alone is a cogate point.
    pub pp_is_cogate: Option<bool>,
}

/// Tests the even part of `f_1 ⊗ … ⊗ f_k` (four-leg covectors) against the
/// cogate cone. For `k = 3` the last four legs are pinned to `⟨1111|`, which
/// keeps cone points on the cone and leaves an 8-leg slice to test.
pub fn obstruction_for_factors(factors: &[QubitTensor]) -> Result<ObstructionReport, SwapError> {
    let k = factors.len();
    if !(2..=3).contains(&k) {
        return Err(SwapError::UnsupportedK(k));
    }
    let product = factors[1..]
        .iter()
        .fold(factors[0].clone(), |acc, f| acc.tensor_product(f));
    let even = product.parity_projection(Parity::Even);
    let mut slice = even.clone();
    for leg in (8..4 * k).rev() {
        slice = slice.restrict_leg(leg, 1)?;
    }
    let report = check_membership(&slice, VarietySide::Cogate, true)?;

    let (mut split, mut defect, mut pp_ok) = (None, None, None);
    if k == 2 {
        let [p1, q1] = [Parity::Even, Parity::Odd].map(|p| factors[0].parity_projection(p));
        let [p2, q2] = [Parity::Even, Parity::Odd].map(|p| factors[1].parity_projection(p));
        let pp = p1.tensor_product(&p2);
        let qq = q1.tensor_product(&q2);
        split = Some(pp.add(&qq)? == even);
        defect = Some(!qq.is_zero());
        pp_ok = Some(check_membership(&pp, VarietySide::Cogate, true)?.member);
    }
    Ok(ObstructionReport {
        k,
        arity: product.arity(),
        tested_arity: slice.arity(),
        cone_member: report.member,
        violation: report.violation,
        even_part_is_pp_plus_qq: split,
        defect_nonzero: defect,
        pp_is_cogate: pp_ok,
    })
}

/// The obstruction check for `k` basis-changed SWAPs.
pub fn multi_swap_obstruction(
    k: usize,
    sols: &[SwapSolution],
) -> Result<ObstructionReport, SwapError> {
    if !(2..=3).contains(&k) {
        return Err(SwapError::UnsupportedK(k));
    }
    if sols.len() != k {
        return Err(SwapError::WrongCount {
            expected: k,
            found: sols.len(),
        });
    }
    let factors: Vec<QubitTensor> = sols.iter().map(|s| changed_swap(&s.m, &s.n)).collect();
    obstruction_for_factors(&factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::topologies;
    use crate::varieties::is_pfaffian_cogate_point;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(v: i64) -> Scalar {
        Scalar::from_i64(v)
    }

    #[test]
    fn even_part_coefficients() {
        // Distinct primes stand in for symbolic a..h.
        let [a, b, c, d, e, f, g, h] = [2, 3, 5, 7, 11, 13, 17, 19].map(s);
        let m = TwoByTwo::new(a.clone(), b.clone(), c.clone(), d.clone());
        let n = TwoByTwo::new(e.clone(), f.clone(), g.clone(), h.clone());
        let (p, q) = decompose_swap(&m, &n);
        let at = |bits: &str| p.coeff(QubitTensor::mask_of(bits).unwrap()).clone();
        assert_eq!(at("0000"), &a * &e);
        assert_eq!(at("1100"), &b * &f);
        assert_eq!(at("0011"), &c * &g);
        assert_eq!(at("1001"), &b * &g);
        assert_eq!(at("0110"), &c * &f);
        assert_eq!(at("1010"), &d * &e);
        assert_eq!(at("0101"), &a * &h);
        assert_eq!(at("1111"), &d * &h);
        assert_eq!(p.nonzero().count(), 8);
        assert!(q.has_support_parity(Parity::Odd));
        assert_eq!(p.add(&q).unwrap(), changed_swap(&m, &n));
    }

    #[test]
    fn paper_solution_reproduces_a() {
        let sol = paper_solution();
        let half = Scalar::from_ratio(1, 2);
        let r = Scalar::inv_sqrt2();
        assert_eq!(
            sol.entries(),
            [
                half.clone(),
                r.clone(),
                -&r,
                s(1),
                half.clone(),
                r.clone(),
                -&r,
                s(1)
            ]
        );
        let a = SkewMatrix::from_rows(
            vec![1, 2, 3, 4],
            [[0, 1, 1, -1], [-1, 0, -1, 1], [-1, 1, 0, 1], [1, -1, -1, 0]]
                .iter()
                .map(|row| row.iter().map(|&v| &half * &s(v)).collect())
                .collect(),
        )
        .unwrap();
        assert_eq!(sol.s(), &a);
        assert_eq!(a.pfaffian(), Scalar::from_ratio(1, 4));
        let (p, _) = sol.parts();
        assert!(is_pfaffian_cogate_point(&p).unwrap());
        assert_eq!(sol.s().sub_pfaffian_cogate(), p);
    }

    #[test]
    fn chart_is_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let sol = random_solution(&mut rng);
            let [a, b, c, d, e, f, g, h] = sol.entries();
            assert!((&d * &h).is_one());
            assert_eq!(&a * &e, &b * &c * &f * &g);
            assert_eq!(sol.s().pfaffian(), &a * &e);
            let (p, _) = sol.parts();
            assert!(is_pfaffian_cogate_point(&p).unwrap());
        }
        assert!(matches!(
            sample_solution(&[s(1), s(1), s(1), s(0)]),
            Err(SwapError::Degenerate(_))
        ));
        assert!(matches!(
            sample_solution(&[s(1), s(1), s(0), s(1)]),
            Err(SwapError::Degenerate(_))
        ));
    }

    #[test]
    fn non_solutions_fail_membership() {
        let id = TwoByTwo::identity();
        let (p, q) = decompose_swap(&id, &id);
        assert_eq!(p, QubitTensor::swap_gate(Variance::Bra));
        assert!(q.is_zero());
        assert!(!is_pfaffian_cogate_point(&p).unwrap());
        assert!(SwapSolution::from_matrices(id.clone(), id).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..10 {
            let (m, n) = (samplers::sl2(&mut rng), samplers::sl2(&mut rng));
            let [a, b, c, _, e, f, g, _] = entries(&m, &n);
            if &a * &e == &b * &c * &f * &g {
                continue;
            }
            assert!(!crate::varieties::is_cone_point(
                &decompose_swap(&m, &n).0,
                VarietySide::Cogate
            )
            .unwrap());
        }
    }

    #[test]
    fn substitution_preserves_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let sols = [paper_solution(), random_solution(&mut rng)];
        for name in ["double-digon", "cogate-pair"] {
            let shape = topologies::by_name(name).unwrap();
            for sol in &sols {
                for _ in 0..3 {
                    let host = samplers::randomize_circuit(&shape, &mut rng);
                    let out = demo_substitution(&host, 0, sol).unwrap();
                    assert!(out.equal(), "{name}: {out:?}");
                }
            }
        }
    }

    #[test]
    fn substitution_rejects_bad_targets() {
        let c = topologies::by_name("double-digon").unwrap();
        assert_eq!(
            demo_substitution(&c, 1, &paper_solution()),
            Err(SwapError::BadTarget(1))
        );
        let changed = c
            .substitute(2, QubitTensor::zeros_uniform(2, Variance::Ket))
            .unwrap();
        assert_eq!(
            demo_substitution(&changed, 0, &paper_solution()),
            Err(SwapError::NotElementary(2))
        );
    }

    #[test]
    fn doubled_swap_is_obstructed() {
        let sol = paper_solution();
        let report = multi_swap_obstruction(2, &[sol.clone(), sol.clone()]).unwrap();
        assert!(!report.cone_member);
        assert!(matches!(report.violation, Some(Violation::Relation { .. })));
        assert_eq!(report.even_part_is_pp_plus_qq, Some(true));
        assert_eq!(report.defect_nonzero, Some(true));
        assert_eq!(report.pp_is_cogate, Some(true));

        let three = multi_swap_obstruction(3, &[sol.clone(), sol.clone(), sol.clone()]).unwrap();
        assert_eq!((three.arity, three.tested_arity), (12, 8));
        assert!(!three.cone_member);

        assert_eq!(
            multi_swap_obstruction(4, &[]),
            Err(SwapError::UnsupportedK(4))
        );
        assert!(matches!(
            multi_swap_obstruction(2, &[sol]),
            Err(SwapError::WrongCount { .. })
        ));
    }

    #[test]
    fn doubled_elementary_cogates_are_fine() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let f = [0, 1].map(|_| samplers::skew(4, &mut rng).sub_pfaffian_cogate());
        let report = obstruction_for_factors(&f).unwrap();
        assert!(report.cone_member);
        assert_eq!(report.defect_nonzero, Some(false));
    }
}
