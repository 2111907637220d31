//! Circuit evaluation: the Pfaffian fast path and the exhaustive pairing.

use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use super::embedding::{edge_order_from_embedding, EdgeOrder};
use super::{Assignment, Circuit, CircuitError, Side};
use crate::exactfield::Scalar;
use crate::pfaffian::{pair_value, SkewMatrix};
use crate::registry::{Registry, Strategy};

/// Largest edge count the exhaustive evaluator accepts.
pub const MAX_BRUTEFORCE_EDGES: usize = 18;

/// Rewrites a vertex matrix so its rows follow increasing edge label.
///
/// Only cyclic shifts and reversals of the rotation can be absorbed by signs:
/// moving a leg from the front to the back negates its row and column, and
/// reversing all legs negates the whole matrix.
fn relabel_vertex(
    m: &SkewMatrix,
    labels: &[u32],
    vertex: usize,
) -> Result<SkewMatrix, CircuitError> {
    let d = labels.len();
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    if d == 0 {
        return Ok(SkewMatrix::zeros(sorted)?);
    }
    let start = (0..d).min_by_key(|&k| labels[k]).unwrap();
    let forward: Vec<usize> = (0..d).map(|k| (start + k) % d).collect();
    let backward: Vec<usize> = (0..d).map(|k| (start + d - k) % d).collect();
    let increasing = |order: &[usize]| order.windows(2).all(|w| labels[w[0]] < labels[w[1]]);

    let (order, negated, flip): (Vec<usize>, Vec<bool>, bool) = if increasing(&forward) {
        (forward, (0..d).map(|leg| leg < start).collect(), false)
    } else if increasing(&backward) {
        (backward, (0..d).map(|leg| leg > start).collect(), true)
    } else {
        return Err(CircuitError::OrderNotDihedral { vertex });
    };
    let mut out = SkewMatrix::zeros(sorted)?;
    for i in 0..d {
        for j in i + 1..d {
            let (a, b) = (order[i], order[j]);
            let v = m.get(a, b);
            if v.is_zero() {
                continue;
            }
            let neg = negated[a] ^ negated[b] ^ flip;
            out.set(i, j, if neg { -v } else { v.clone() });
        }
    }
    Ok(out)
}

/// Collapses an elementary circuit to its gate-side and cogate-side matrices
/// under the given edge labels.
pub fn compile(c: &Circuit, order: &EdgeOrder) -> Result<(SkewMatrix, SkewMatrix), CircuitError> {
    if order.len() != c.edges().len() {
        return Err(CircuitError::BadOrder(format!(
            "order covers {} edges, circuit has {}",
            order.len(),
            c.edges().len()
        )));
    }
    let labels = order.labels();
    let mut x = SkewMatrix::zeros(Vec::new())?;
    let mut t = SkewMatrix::zeros(Vec::new())?;
    for (vi, v) in c.vertices().iter().enumerate() {
        let Assignment::Elementary(m) = &v.assignment else {
            return Err(CircuitError::NotElementary { vertex: vi });
        };
        let local: Vec<u32> = v.rotation.iter().map(|&e| labels[e]).collect();
        let block = relabel_vertex(m, &local, vi)?;
        match v.side {
            Side::Gate => x = x.interleaved_direct_sum(&block)?,
            Side::Cogate => t = t.interleaved_direct_sum(&block)?,
        }
    }
    Ok((x, t))
}

/// Fast evaluation of an elementary circuit: one Pfaffian per connected component.
pub fn evaluate(c: &Circuit) -> Result<Scalar, CircuitError> {
    if let Some(vi) = c
        .vertices()
        .iter()
        .position(|v| !matches!(v.assignment, Assignment::Elementary(_)))
    {
        return Err(CircuitError::NotElementary { vertex: vi });
    }
    let mut value = Scalar::one();
    for comp in c.components() {
        let order = edge_order_from_embedding(&comp)?;
        let (x, t) = compile(&comp, &order)?;
        value = &value * &pair_value(&x, &t)?;
        if value.is_zero() {
            break;
        }
    }
    Ok(value)
}

/// Result of evaluating under a caller-supplied edge order.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderedEvaluation {
    pub value: Scalar,
    /// Exhaustive value, present when verification was requested.
    pub oracle: Option<Scalar>,
}

impl OrderedEvaluation {
    pub fn agrees(&self) -> Option<bool> {
        self.oracle.as_ref().map(|o| o == &self.value)
    }
}

pub fn evaluate_with_order(
    c: &Circuit,
    order: &EdgeOrder,
    verify: bool,
) -> Result<OrderedEvaluation, CircuitError> {
    let (x, t) = compile(c, order)?;
    let value = pair_value(&x, &t)?;
    let oracle = if verify {
        Some(evaluate_bruteforce(c)?)
    } else {
        None
    };
    Ok(OrderedEvaluation { value, oracle })
}

/// The full pairing, summed over all `2^|E|` edge states.
pub fn evaluate_bruteforce(c: &Circuit) -> Result<Scalar, CircuitError> {
    let ne = c.edges().len();
    if ne > MAX_BRUTEFORCE_EDGES {
        return Err(CircuitError::TooLarge {
            edges: ne,
            limit: MAX_BRUTEFORCE_EDGES,
        });
    }
    let tensors: Vec<_> = c
        .vertices()
        .iter()
        .map(|v| v.assignment.tensor(v.side))
        .collect();
    let mut total = Scalar::zero();
    'states: for state in 0usize..1 << ne {
        let mut term = Scalar::one();
        for (v, t) in c.vertices().iter().zip(&tensors) {
            let local = v
                .rotation
                .iter()
                .enumerate()
                .fold(0usize, |acc, (leg, &e)| acc | (state >> e & 1) << leg);
            let coeff = t.coeff(local);
            if coeff.is_zero() {
                continue 'states;
            }
            term = &term * coeff;
        }
        total += &term;
    }
    Ok(total)
}

/// A way of computing a circuit's value.
pub trait CircuitEvaluator: Strategy {
    fn evaluate(&self, c: &Circuit) -> Result<Scalar, CircuitError>;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct PfaffianFastPath;

impl Strategy for PfaffianFastPath {
    fn name(&self) -> &'static str {
        "pfaffian"
    }
    fn description(&self) -> &'static str {
        "single Pfaffian per component after planar edge labeling"
    }
}

impl CircuitEvaluator for PfaffianFastPath {
    fn evaluate(&self, c: &Circuit) -> Result<Scalar, CircuitError> {
        evaluate(c)
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Bruteforce;

impl Strategy for Bruteforce {
    fn name(&self) -> &'static str {
        "bruteforce"
    }
    fn description(&self) -> &'static str {
        "exhaustive pairing over all edge states"
    }
}

impl CircuitEvaluator for Bruteforce {
    fn evaluate(&self, c: &Circuit) -> Result<Scalar, CircuitError> {
        evaluate_bruteforce(c)
    }
}

pub fn evaluators() -> &'static Registry<dyn CircuitEvaluator> {
    static REG: OnceLock<Registry<dyn CircuitEvaluator>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut reg: Registry<dyn CircuitEvaluator> = Registry::new("circuit evaluator");
        reg.register(Arc::new(PfaffianFastPath))
            .register(Arc::new(Bruteforce));
        reg
    })
}
