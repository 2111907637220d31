//! Pfaffian circuits: planar bipartite tensor networks with gates on one side
//! and cogates on the other.
//!
//! Every vertex carries a rotation (the cyclic order of its incident edges in
//! the plane) and an assignment. Leg `k` of a vertex tensor, and row `k` of an
//! elementary vertex matrix, belong to the `k`-th edge of the rotation.

mod embedding;
mod eval;
pub mod topologies;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pfaffian::{PfaffianError, SkewJson, SkewMatrix};
use crate::tensor::{QubitTensor, TensorError, TensorJson, Variance};

pub use embedding::{edge_order_from_embedding, faces, EdgeOrder};
pub use eval::{
    compile, evaluate, evaluate_bruteforce, evaluate_with_order, evaluators, Bruteforce,
    CircuitEvaluator, OrderedEvaluation, PfaffianFastPath, MAX_BRUTEFORCE_EDGES,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("edge {edge} has an endpoint outside the vertex list")]
    EdgeEndpoint { edge: usize },
    #[error("edge {edge} joins two vertices on the same side")]
    SameSide { edge: usize },
    #[error("vertex {vertex}: {reason}")]
    Rotation { vertex: usize, reason: String },
    #[error("vertex {vertex} has degree {degree} but its assignment has arity {arity}")]
    Arity {
        vertex: usize,
        degree: usize,
        arity: usize,
    },
    #[error("vertex {vertex}: tensor legs must all be {expected}")]
    Variance {
        vertex: usize,
        expected: &'static str,
    },
    #[error(
        "rotation system is not planar: V - E + F = {euler} on a connected component (expected 2)"
    )]
    NonPlanar { euler: i64 },
    #[error("circuit is disconnected ({components} components); order each component separately")]
    Disconnected { components: usize },
    #[error(
        "vertex {vertex} carries a general tensor; the Pfaffian fast path needs skew matrices"
    )]
    NotElementary { vertex: usize },
    #[error("invalid edge order: {0}")]
    BadOrder(String),
    #[error("edge labels around vertex {vertex} are not in cyclic or reversed cyclic order")]
    OrderNotDihedral { vertex: usize },
    #[error("brute force limited to {limit} edges, circuit has {edges}")]
    TooLarge { edges: usize, limit: usize },
    #[error("no vertex {0}")]
    NoSuchVertex(usize),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Pfaffian(#[from] PfaffianError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Gate,
    Cogate,
}

impl Side {
    /// Leg variance of tensors living on this side.
    pub fn variance(self) -> Variance {
        match self {
            Side::Gate => Variance::Ket,
            Side::Cogate => Variance::Bra,
        }
    }
}

/// What sits on a vertex: a skew matrix (expanded through sPf / sPf∨ by side)
/// or an arbitrary tensor.
#[derive(Clone, Debug, PartialEq)]
pub enum Assignment {
    Elementary(SkewMatrix),
    General(QubitTensor),
}

impl Assignment {
    pub fn arity(&self) -> usize {
        match self {
            Assignment::Elementary(m) => m.size(),
            Assignment::General(t) => t.arity(),
        }
    }

    /// The tensor this assignment denotes on a vertex of the given side.
    pub fn tensor(&self, side: Side) -> QubitTensor {
        match (self, side) {
            (Assignment::Elementary(m), Side::Gate) => m.sub_pfaffian_gate(),
            (Assignment::Elementary(m), Side::Cogate) => m.sub_pfaffian_cogate(),
            (Assignment::General(t), _) => t.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub side: Side,
    /// Incident edge ids in counter-clockwise order.
    pub rotation: Vec<usize>,
    pub assignment: Assignment,
}

/// A validated planar bipartite circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    vertices: Vec<Vertex>,
    edges: Vec<[usize; 2]>,
}

impl Circuit {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<[usize; 2]>) -> Result<Self, CircuitError> {
        let c = Circuit { vertices, edges };
        c.validate()?;
        Ok(c)
    }

    pub fn empty() -> Self {
        Circuit {
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    fn validate(&self) -> Result<(), CircuitError> {
        let nv = self.vertices.len();
        for (e, &[u, v]) in self.edges.iter().enumerate() {
            if u >= nv || v >= nv {
                return Err(CircuitError::EdgeEndpoint { edge: e });
            }
            if self.vertices[u].side == self.vertices[v].side {
                return Err(CircuitError::SameSide { edge: e });
            }
        }
        for (vi, vert) in self.vertices.iter().enumerate() {
            let incident: BTreeSet<usize> = (0..self.edges.len())
                .filter(|&e| self.edges[e].contains(&vi))
                .collect();
            let listed: BTreeSet<usize> = vert.rotation.iter().copied().collect();
            if listed.len() != vert.rotation.len() {
                return Err(CircuitError::Rotation {
                    vertex: vi,
                    reason: "rotation lists an edge twice".into(),
                });
            }
            if listed != incident {
                return Err(CircuitError::Rotation {
                    vertex: vi,
                    reason: format!(
                        "rotation {:?} does not match incident edges {:?}",
                        vert.rotation, incident
                    ),
                });
            }
            let arity = vert.assignment.arity();
            if arity != vert.rotation.len() {
                return Err(CircuitError::Arity {
                    vertex: vi,
                    degree: vert.rotation.len(),
                    arity,
                });
            }
            if let Assignment::General(t) = &vert.assignment {
                if !t.is_all(vert.side.variance()) {
                    return Err(CircuitError::Variance {
                        vertex: vi,
                        expected: if vert.side == Side::Gate {
                            "kets"
                        } else {
                            "bras"
                        },
                    });
                }
            }
        }
        embedding::check_planar(self)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> Result<&Vertex, CircuitError> {
        self.vertices.get(v).ok_or(CircuitError::NoSuchVertex(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertices[v].rotation.len()
    }

    pub fn is_elementary(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| matches!(v.assignment, Assignment::Elementary(_)))
    }

    /// Replaces the assignment at `v`; the original circuit is left untouched.
    pub fn substitute(&self, v: usize, t: QubitTensor) -> Result<Circuit, CircuitError> {
        self.with_assignment(v, Assignment::General(t))
    }

    pub fn with_assignment(&self, v: usize, a: Assignment) -> Result<Circuit, CircuitError> {
        self.vertex(v)?;
        let mut out = self.clone();
        out.vertices[v].assignment = a;
        out.validate()?;
        Ok(out)
    }

    /// Connected components as standalone circuits, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Circuit> {
        let nv = self.vertices.len();
        let mut comp = vec![usize::MAX; nv];
        let mut count = 0;
        for start in 0..nv {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                for &e in &self.vertices[u].rotation {
                    let [a, b] = self.edges[e];
                    let w = if a == u { b } else { a };
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (0..count)
            .map(|k| {
                let vmap: Vec<Option<usize>> = {
                    let mut next = 0;
                    comp.iter()
                        .map(|&c| {
                            (c == k).then(|| {
                                next += 1;
                                next - 1
                            })
                        })
                        .collect()
                };
                let kept_edges: Vec<usize> = (0..self.edges.len())
                    .filter(|&e| comp[self.edges[e][0]] == k)
                    .collect();
                let mut emap = vec![usize::MAX; self.edges.len()];
                for (new, &old) in kept_edges.iter().enumerate() {
                    emap[old] = new;
                }
                Circuit {
                    vertices: (0..nv)
                        .filter(|&v| comp[v] == k)
                        .map(|v| {
                            let old = &self.vertices[v];
                            Vertex {
                                side: old.side,
                                rotation: old.rotation.iter().map(|&e| emap[e]).collect(),
                                assignment: old.assignment.clone(),
                            }
                        })
                        .collect(),
                    edges: kept_edges
                        .iter()
                        .map(|&e| {
                            let [a, b] = self.edges[e];
                            [vmap[a].unwrap(), vmap[b].unwrap()]
                        })
                        .collect(),
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> CircuitJson {
        CircuitJson {
            vertices: self
                .vertices
                .iter()
                .map(|v| {
                    let (matrix, tensor) = match &v.assignment {
                        Assignment::Elementary(m) => (Some(m.to_json()), None),
                        Assignment::General(t) => (None, Some(t.to_json())),
                    };
                    VertexJson {
                        side: v.side,
                        rotation: v.rotation.clone(),
                        matrix,
                        tensor,
                    }
                })
                .collect(),
            edges: self.edges.clone(),
        }
    }

    pub fn from_json(j: &CircuitJson) -> Result<Self, CircuitError> {
        let mut vertices = Vec::with_capacity(j.vertices.len());
        for (vi, v) in j.vertices.iter().enumerate() {
            let assignment = match (&v.matrix, &v.tensor) {
                (Some(m), None) => Assignment::Elementary(SkewMatrix::from_json(m)?),
                (None, Some(t)) => Assignment::General(QubitTensor::from_json(t)?),
                _ => {
                    return Err(CircuitError::Rotation {
                        vertex: vi,
                        reason: "exactly one of `matrix` or `tensor` must be given".into(),
                    })
                }
            };
            vertices.push(Vertex {
                side: v.side,
                rotation: v.rotation.clone(),
                assignment,
            });
        }
        Circuit::new(vertices, j.edges.clone())
    }
}

/// JSON circuit file. Matrix labels are the vertex's leg numbers in rotation order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CircuitJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct VertexJson {
    pub side: Side,
    pub rotation: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<SkewJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<TensorJson>,
}
