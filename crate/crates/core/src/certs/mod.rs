//! Degree-bounded ideal membership certificates over Q.

mod linsolve;
pub mod poly;

pub use poly::{PolyJson, PolyQ};

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::{det_b, det_l, det_m, hyperdeterminant_h};

/// The sixteen-variable system for the SWAP point: the four invariants minus
/// their SWAP values, the eight odd-support coordinates and the quadric that
/// cuts out four-leg Pfaffian points.
pub fn paper_system() -> Vec<PolyQ> {
    let xs: [PolyQ; 16] = std::array::from_fn(|i| PolyQ::var(16, i));
    let c = |v: i64| PolyQ::from_i64(16, v);
    let mut gens = vec![
        hyperdeterminant_h(&xs) - c(2),
        det_l(&xs) - c(1),
        det_m(&xs),
        det_b(&xs),
    ];
    gens.extend(
        (0..16usize)
            .filter(|m| m.count_ones() % 2 == 1)
            .map(|m| xs[m].clone()),
    );
    let x = |k: usize| xs[k - 1].clone();
    gens.push(x(1) * x(16) - x(4) * x(13) + x(6) * x(11) - x(7) * x(10));
    gens
}

/// The substitution that removed single-variable generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Substitution {
    /// Variable count before elimination.
    pub nvars: usize,
    /// `(generator index, variable, coefficient)` for every linear generator `c·x_v`.
    pub eliminated: Vec<(usize, usize, BigRational)>,
    /// Original index of each surviving variable.
    pub kept_vars: Vec<usize>,
    /// Original index of each reduced generator.
    pub kept_gens: Vec<usize>,
}

impl Substitution {
    fn eliminated_vars(&self) -> Vec<usize> {
        self.eliminated.iter().map(|&(_, v, _)| v).collect()
    }

    /// Rewrites an original polynomial in the surviving variables.
    pub fn reduce(&self, p: &PolyQ) -> PolyQ {
        let mut map = vec![None; self.nvars];
        for (j, &v) in self.kept_vars.iter().enumerate() {
            map[v] = Some(j);
        }
        p.kill_vars(&self.eliminated_vars())
            .rename_vars(&map, self.kept_vars.len())
    }

    /// Moves a reduced polynomial back to the original variables.
    pub fn expand(&self, p: &PolyQ) -> PolyQ {
        let map: Vec<Option<usize>> = self.kept_vars.iter().map(|&v| Some(v)).collect();
        p.rename_vars(&map, self.nvars)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertError {
    #[error("generator {0} is linear but not a multiple of a single variable")]
    UnsupportedLinear(usize),
}

/// Uses generators of the form `c·x_v` to set `x_v = 0` in every other
/// generator, then renumbers the surviving variables.
pub fn eliminate_linears(gens: &[PolyQ]) -> Result<(Vec<PolyQ>, Substitution), CertError> {
    let nvars = gens.iter().map(PolyQ::nvars).max().unwrap_or(0);
    let mut eliminated = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.degree() != 1 {
            continue;
        }
        let mut terms = g.terms();
        match (terms.next(), terms.next()) {
            (Some((m, c)), None) if !m.is_empty() && poly::monomial_degree(m) == 1 => {
                eliminated.push((i, m.len() - 1, c.clone()));
            }
            _ => return Err(CertError::UnsupportedLinear(i)),
        }
    }
    let gone: Vec<usize> = eliminated.iter().map(|&(_, v, _)| v).collect();
    let kept_vars: Vec<usize> = (0..nvars).filter(|v| !gone.contains(v)).collect();
    let kept_gens: Vec<usize> = (0..gens.len())
        .filter(|i| !eliminated.iter().any(|e| e.0 == *i))
        .collect();
    let sub = Substitution {
        nvars,
        eliminated,
        kept_vars,
        kept_gens,
    };
    let reduced = sub
        .kept_gens
        .iter()
        .map(|&i| sub.reduce(&gens[i]))
        .collect();
    Ok((reduced, sub))
}

/// Witness that `target = Σ multiplier · gens[index]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub target: PolyQ,
    pub multipliers: Vec<(usize, PolyQ)>,
    /// Bound on `deg(multiplier) + deg(generator)` used in the search.
    pub degree: u32,
}

impl Certificate {
    /// Recomputes `Σ multiplier · generator` and compares with the target.
    pub fn verify(&self, gens: &[PolyQ]) -> bool {
        let mut sum = PolyQ::zero();
        for (i, m) in &self.multipliers {
            match gens.get(*i) {
                Some(g) => sum = sum + m * g,
                None => return false,
            }
        }
        sum == self.target
    }

    /// Total number of terms across all multipliers.
    pub fn size(&self) -> usize {
        self.multipliers.iter().map(|(_, m)| m.len()).sum()
    }

    /// Largest multiplier degree.
    pub fn max_multiplier_degree(&self) -> u32 {
        self.multipliers
            .iter()
            .map(|(_, m)| m.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            degree: self.degree,
            target: self.target.to_json(),
            multipliers: self
                .multipliers
                .iter()
                .map(|(i, m)| (*i, m.to_json()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub degree: u32,
    pub target: PolyJson,
    pub multipliers: Vec<(usize, PolyJson)>,
}

/// Size of one Macaulay system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub degree: u32,
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
}

/// No certificate with multipliers inside the degree bound. This says
/// nothing about membership at larger bounds.
pub type NotFound = SearchStats;

/// Searches for multipliers with `deg(m_i) + deg(g_i) ≤ degree` by solving
/// the Macaulay system exactly. Columns are the multiplier monomials of each
/// generator in graded lexicographic order.
pub fn membership_certificate(
    target: &PolyQ,
    gens: &[PolyQ],
    degree: u32,
) -> Result<Certificate, NotFound> {
    let (stats, cert) = search(target, gens, degree);
    cert.ok_or(stats)
}

/// The search behind [`membership_certificate`], reporting the system size either way.
pub fn search(target: &PolyQ, gens: &[PolyQ], degree: u32) -> (SearchStats, Option<Certificate>) {
    let nvars = gens
        .iter()
        .map(PolyQ::nvars)
        .chain([target.nvars()])
        .max()
        .unwrap_or(0);

    // Unknowns: one per (generator, multiplier monomial).
    let mut unknowns: Vec<(usize, poly::Monomial)> = Vec::new();
    let mut by_degree: BTreeMap<u32, Vec<poly::Monomial>> = BTreeMap::new();
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() || g.degree() > degree {
            continue;
        }
        let room = degree - g.degree();
        let monos = by_degree
            .entry(room)
            .or_insert_with(|| poly::monomials_up_to(nvars, room));
        unknowns.extend(monos.iter().map(|m| (i, m.clone())));
    }
    // Equations: one per monomial of some m·g or of the target.
    let mut eq_index: HashMap<poly::Monomial, usize> = HashMap::new();
    let mut equations: Vec<Vec<(usize, BigRational)>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    let mut row_of = |mono: poly::Monomial,
                      eqs: &mut Vec<Vec<(usize, BigRational)>>,
                      rhs: &mut Vec<BigRational>| {
        *eq_index.entry(mono).or_insert_with(|| {
            eqs.push(Vec::new());
            rhs.push(BigRational::zero());
            eqs.len() - 1
        })
    };
    for (u, (i, m)) in unknowns.iter().enumerate() {
        for (t, c) in gens[*i].terms() {
            let r = row_of(poly::monomial_mul(t, m), &mut equations, &mut rhs);
            equations[r].push((u, c.clone()));
        }
    }
    for (t, c) in target.terms() {
        let r = row_of(t.clone(), &mut equations, &mut rhs);
        rhs[r] = c.clone();
    }
    let (n_unknowns, n_equations) = (unknowns.len(), equations.len());
    let stats = |rank| SearchStats {
        degree,
        unknowns: n_unknowns,
        equations: n_equations,
        rank,
    };

    let (solution, rank) = match linsolve::solve_sparse(equations, rhs, n_unknowns) {
        linsolve::Solved::Solution { values, rank } => (values, rank),
        linsolve::Solved::Inconsistent { rank } => return (stats(rank), None),
    };
    let mut multipliers: BTreeMap<usize, PolyQ> = BTreeMap::new();
    for (u, value) in solution.into_iter().enumerate() {
        if value.is_zero() {
            continue;
        }
        let (i, m) = &unknowns[u];
        let entry = multipliers
            .entry(*i)
            .or_insert_with(|| PolyQ::zero_in(nvars));
        *entry = entry.clone() + PolyQ::monomial(nvars, m.clone(), value);
    }
    let cert = Certificate {
        target: target.clone(),
        multipliers: multipliers.into_iter().collect(),
        degree,
    };
    // A failed check would be a solver bug; it is reported as no certificate.
    let ok = cert.verify(gens);
    (stats(rank), ok.then_some(cert))
}

/// Carries a certificate for the reduced system back to the original one.
/// Every term of `g_i − reduce(g_i)` contains an eliminated variable `x_v`;
/// it is charged to the linear generator `c·x_v`.
pub fn lift_certificate(
    reduced: &Certificate,
    sub: &Substitution,
    target: &PolyQ,
    gens: &[PolyQ],
) -> Certificate {
    let mut multipliers: BTreeMap<usize, PolyQ> = BTreeMap::new();
    let mut defect = target.clone() - sub.expand(&sub.reduce(target));
    for (j, m) in &reduced.multipliers {
        let i = sub.kept_gens[*j];
        let m = sub.expand(m);
        let g = &gens[i];
        defect = defect - &m * &(g.clone() - sub.expand(&sub.reduce(g)));
        multipliers.insert(i, m);
    }
    let gone = sub.eliminated_vars();
    for (mono, c) in defect.terms() {
        let slot = gone
            .iter()
            .position(|&v| mono.get(v).copied().unwrap_or(0) > 0)
            .expect("defect terms contain an eliminated variable");
        let (i, v, a) = &sub.eliminated[slot];
        let mut unit = vec![0u16; v + 1];
        unit[*v] = 1;
        let quotient = poly::monomial_div(mono, &unit).expect("divisible");
        let term = PolyQ::monomial(sub.nvars, quotient, c / a);
        let entry = multipliers
            .entry(*i)
            .or_insert_with(|| PolyQ::zero_in(sub.nvars));
        *entry = entry.clone() + term;
    }
    Certificate {
        target: target.clone(),
        multipliers: multipliers
            .into_iter()
            .filter(|(_, m)| !m.is_zero())
            .collect(),
        degree: reduced.degree,
    }
}

/// Degree bounds tried in order by [`paper_certificate`].
pub const DEGREE_LADDER: [u32; 3] = [8, 10, 12];

/// Outcome of the certificate search for `1 ∈ I + J`.
#[derive(Clone, Debug)]
pub struct PaperRun {
    /// One entry per degree bound tried, in order.
    pub attempts: Vec<SearchStats>,
    /// The certificate in all sixteen variables, verified against [`paper_system`].
    pub certificate: Option<Certificate>,
    pub verified: bool,
}

impl PaperRun {
    pub fn degree_reached(&self) -> Option<u32> {
        self.attempts.last().map(|a| a.degree)
    }
}

/// Eliminates the odd coordinates, searches the given degree bounds in order
/// on the remaining eight variables, and lifts the first certificate found.
pub fn paper_certificate(degrees: &[u32]) -> PaperRun {
    let gens = paper_system();
    let (reduced, sub) = eliminate_linears(&gens).expect("odd coordinates are single variables");
    let one_reduced = PolyQ::from_i64(sub.kept_vars.len(), 1);
    let one = PolyQ::from_i64(16, 1);
    let mut attempts = Vec::new();
    for &d in degrees {
        let (stats, cert) = search(&one_reduced, &reduced, d);
        attempts.push(stats);
        if let Some(cert) = cert {
            let lifted = lift_certificate(&cert, &sub, &one, &gens);
            let verified = lifted.verify(&gens);
            return PaperRun {
                attempts,
                certificate: Some(lifted),
                verified,
            };
        }
    }
    PaperRun {
        attempts,
        certificate: None,
        verified: false,
    }
}

#[cfg(test)]
mod tests {
    use super::poly::q;
    use super::*;
    use proptest::prelude::*;

    fn x(n: usize, i: usize) -> PolyQ {
        PolyQ::var(n, i)
    }

    fn c(n: usize, v: i64) -> PolyQ {
        PolyQ::from_i64(n, v)
    }

    #[test]
    fn unit_from_complementary_linears() {
        let gens = [x(1, 0), c(1, 1) - x(1, 0)];
        let cert = membership_certificate(&c(1, 1), &gens, 1).unwrap();
        assert!(cert.verify(&gens));
        assert_eq!(cert.multipliers, vec![(0, c(1, 1)), (1, c(1, 1))]);
    }

    #[test]
    fn square_in_principal_ideal() {
        let gens = [x(1, 0)];
        let target = x(1, 0) * x(1, 0);
        let cert = membership_certificate(&target, &gens, 2).unwrap();
        assert_eq!(cert.multipliers, vec![(0, x(1, 0))]);
        let nf = membership_certificate(&target, &[x(1, 0) * x(1, 0) * x(1, 0)], 3).unwrap_err();
        assert_eq!(nf.degree, 3);
        assert!(membership_certificate(&c(1, 1), &gens, 4).is_err());
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let gens = [x(1, 0), c(1, 1) - x(1, 0)];
        let mut cert = membership_certificate(&c(1, 1), &gens, 1).unwrap();
        cert.multipliers[0].1 = c(1, 2);
        assert!(!cert.verify(&gens));
    }

    #[test]
    fn linear_elimination() {
        let gens = [x(3, 1), x(3, 0) * x(3, 1) + x(3, 2)];
        let (reduced, sub) = eliminate_linears(&gens).unwrap();
        assert_eq!(sub.kept_vars, vec![0, 2]);
        assert_eq!(sub.kept_gens, vec![1]);
        assert_eq!(reduced, vec![x(2, 1)]);
        assert_eq!(sub.expand(&reduced[0]), x(3, 2));

        let plain = [x(2, 0) * x(2, 1)];
        let (same, id) = eliminate_linears(&plain).unwrap();
        assert_eq!(same, plain.to_vec());
        assert!(id.eliminated.is_empty());

        assert_eq!(
            eliminate_linears(&[x(2, 0) + x(2, 1)]),
            Err(CertError::UnsupportedLinear(0))
        );
        assert_eq!(
            eliminate_linears(&[x(2, 0) + c(2, 1)]),
            Err(CertError::UnsupportedLinear(0))
        );
    }

    #[test]
    fn lifting_through_elimination() {
        // 1 ∈ ⟨3·x2, x1·x2 + x3 − 1, x3⟩, found after x2 is eliminated.
        let gens = [
            x(3, 1).scale(&q(3)),
            x(3, 0) * x(3, 1) + x(3, 2) - c(3, 1),
            x(3, 2),
        ];
        let (reduced, sub) = eliminate_linears(&gens).unwrap();
        let small = membership_certificate(&c(2, 1), &reduced, 2).unwrap();
        let lifted = lift_certificate(&small, &sub, &c(3, 1), &gens);
        assert!(lifted.verify(&gens));
        assert!(lifted.multipliers.iter().any(|(i, _)| *i == 0));
    }

    #[test]
    fn swap_system_reduces_to_eight_variables() {
        let gens = paper_system();
        assert_eq!(gens.len(), 13);
        let (reduced, sub) = eliminate_linears(&gens).unwrap();
        assert_eq!(sub.kept_vars, vec![0, 3, 5, 6, 9, 10, 12, 15]);
        assert_eq!(reduced.len(), 5);
        assert_eq!(reduced[0].to_string(), "x1*x8 + x2*x7 + x3*x6 + x4*x5 - 2");
        assert_eq!(reduced[4].to_string(), "x1*x8 - x2*x7 + x3*x6 - x4*x5");
        // The SWAP point satisfies the invariant equations but not the quadric.
        let swap: Vec<_> = (0..16)
            .map(|i| q([0, 5, 10, 15].contains(&i) as i64))
            .collect();
        let values: Vec<_> = gens.iter().map(|g| g.evaluate(&swap)).collect();
        assert!(values[..12].iter().all(|v| v == &q(0)));
        assert_eq!(values[12], q(2));
    }

    #[test]
    fn unit_ideal_certificate() {
        let run = paper_certificate(&DEGREE_LADDER);
        assert!(run.verified);
        assert_eq!(run.degree_reached(), Some(8));
        let cert = run.certificate.unwrap();
        assert!(cert.verify(&paper_system()));
        assert_eq!(cert.target, c(16, 1));

        let low = paper_certificate(&[4, 6]);
        assert!(!low.attempts[0].rank.eq(&0));
        assert_eq!(low.degree_reached(), Some(6));
        assert!(low.verified);
    }

    #[test]
    fn certificate_json_round_trip() {
        let gens = [x(1, 0), c(1, 1) - x(1, 0)];
        let cert = membership_certificate(&c(1, 1), &gens, 1).unwrap();
        let j = serde_json::to_string(&cert.to_json()).unwrap();
        let back: CertificateJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back, cert.to_json());
    }

    fn small_poly() -> impl Strategy<Value = PolyQ> {
        proptest::collection::vec(((0u16..3, 0u16..3), -3i64..4), 1..4).prop_map(|terms| {
            PolyQ::from_terms(2, terms.into_iter().map(|((a, b), v)| (vec![a, b], q(v))))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn success_is_monotone_in_degree(gens in proptest::collection::vec(small_poly(), 1..3), t in small_poly()) {
            let top = gens.iter().map(PolyQ::degree).max().unwrap().max(t.degree());
            if let Ok(cert) = membership_certificate(&t, &gens, top) {
                prop_assert!(cert.verify(&gens));
                for d in top + 1..=top + 2 {
                    prop_assert!(membership_certificate(&t, &gens, d).is_ok());
                }
            }
        }
    }
}
