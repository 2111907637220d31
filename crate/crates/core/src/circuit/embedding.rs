//! Faces of the embedded circuit and the closed curve that fixes edge labels.
//!
//! Dart `2e` runs along edge `e` from `edges[e][0]` to `edges[e][1]`, dart
//! `2e + 1` runs back. A face is traced by leaving the head of each dart along
//! the next edge of that vertex's rotation.
//!
//! The labeling curve is a Jordan curve crossing every edge once, with all
//! gates on one side. Inside each face it is a set of non-crossing arcs joining
//! pairs of edge sides. Gates reachable through a face get linked by an arc
//! that cuts off only the cogate corner between them; links are taken greedily
//! while they join different gate groups, so the gate side stays a disk.
//! Every other arc closes off the run of corners that ends at a gate corner.

use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, Side};

fn dart_tail(c: &Circuit, d: usize) -> usize {
    c.edges[d / 2][d % 2]
}

fn dart_head(c: &Circuit, d: usize) -> usize {
    c.edges[d / 2][1 - d % 2]
}

/// The dart following `d` around its face.
fn next_dart(c: &Circuit, d: usize) -> usize {
    let v = dart_head(c, d);
    let rot = &c.vertices[v].rotation;
    let pos = rot
        .iter()
        .position(|&e| e == d / 2)
        .expect("validated rotation");
    let e = rot[(pos + 1) % rot.len()];
    if c.edges[e][0] == v {
        2 * e
    } else {
        2 * e + 1
    }
}

/// Faces as cyclic dart sequences, each starting from its smallest dart.
pub fn faces(c: &Circuit) -> Vec<Vec<usize>> {
    let nd = 2 * c.edges.len();
    let mut seen = vec![false; nd];
    let mut out = Vec::new();
    for start in 0..nd {
        if seen[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            face.push(d);
            d = next_dart(c, d);
        }
        out.push(face);
    }
    out
}

/// Euler's formula on every connected component.
pub(super) fn check_planar(c: &Circuit) -> Result<(), CircuitError> {
    for comp in c.components() {
        let v = comp.vertices.len() as i64;
        let e = comp.edges.len() as i64;
        let f = if e == 0 { 1 } else { faces(&comp).len() as i64 };
        if v - e + f != 2 {
            return Err(CircuitError::NonPlanar { euler: v - e + f });
        }
    }
    Ok(())
}

/// A labeling of edges by `1..=|E|`, stored as the edge sequence in label order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeOrder {
    sequence: Vec<usize>,
}

impl EdgeOrder {
    /// `sequence[k]` is the edge receiving label `k + 1`.
    pub fn from_sequence(sequence: Vec<usize>, edge_count: usize) -> Result<Self, CircuitError> {
        let mut seen = vec![false; edge_count];
        if sequence.len() != edge_count {
            return Err(CircuitError::BadOrder(format!(
                "{} edges listed, circuit has {edge_count}",
                sequence.len()
            )));
        }
        for &e in &sequence {
            match seen.get_mut(e) {
                Some(s) if !*s => *s = true,
                Some(_) => return Err(CircuitError::BadOrder(format!("edge {e} listed twice"))),
                None => return Err(CircuitError::BadOrder(format!("no edge {e}"))),
            }
        }
        Ok(EdgeOrder { sequence })
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    /// Label of every edge, indexed by edge id.
    pub fn labels(&self) -> Vec<u32> {
        let mut out = vec![0; self.sequence.len()];
        for (k, &e) in self.sequence.iter().enumerate() {
            out[e] = k as u32 + 1;
        }
        out
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// The same curve started `shift` crossings later.
    pub fn rerooted(&self, shift: usize) -> EdgeOrder {
        let mut sequence = self.sequence.clone();
        if !sequence.is_empty() {
            let k = shift % sequence.len();
            sequence.rotate_left(k);
        }
        EdgeOrder { sequence }
    }

    /// The same curve traversed the other way.
    pub fn reversed(&self) -> EdgeOrder {
        EdgeOrder {
            sequence: self.sequence.iter().rev().copied().collect(),
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let p = self.0[x];
        if p == x {
            return x;
        }
        let r = self.find(p);
        self.0[x] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Edge labels read off a closed curve that crosses each edge once and
/// separates gates from cogates. Deterministic: the curve starts at edge 0.
pub fn edge_order_from_embedding(c: &Circuit) -> Result<EdgeOrder, CircuitError> {
    let comps = c.components().len();
    if comps > 1 {
        return Err(CircuitError::Disconnected { components: comps });
    }
    let nd = 2 * c.edges.len();
    if nd == 0 {
        return Ok(EdgeOrder {
            sequence: Vec::new(),
        });
    }
    let is_gate = |v: usize| c.vertices[v].side == Side::Gate;
    let mut uf = UnionFind((0..c.vertices.len()).collect());
    let mut partner: Vec<Option<usize>> = vec![None; nd];
    let all_faces = faces(c);

    // Corner k of a face sits at the head of its k-th dart.
    for face in &all_faces {
        let l = face.len();
        for j in 0..l {
            if is_gate(dart_head(c, face[j])) {
                continue;
            }
            let (dj, dn) = (face[j], face[(j + 1) % l]);
            if partner[dj].is_some() || partner[dn].is_some() {
                continue;
            }
            if uf.union(dart_tail(c, dj), dart_head(c, dn)) {
                partner[dj] = Some(dn);
                partner[dn] = Some(dj);
            }
        }
    }
    for face in &all_faces {
        let l = face.len();
        for k in 0..l {
            let dk = face[k];
            if partner[dk].is_some() || !is_gate(dart_head(c, dk)) {
                continue;
            }
            let Some(dm) = (1..l)
                .map(|s| face[(k + s) % l])
                .find(|&d| partner[d].is_none())
            else {
                return Err(CircuitError::BadOrder("face sides cannot be paired".into()));
            };
            partner[dk] = Some(dm);
            partner[dm] = Some(dk);
        }
    }

    let mut sequence = Vec::with_capacity(c.edges.len());
    let mut current = 0;
    loop {
        let p =
            partner[current].ok_or_else(|| CircuitError::BadOrder("unpaired edge side".into()))?;
        sequence.push(p / 2);
        current = p ^ 1;
        if current == 0 || sequence.len() > c.edges.len() {
            break;
        }
    }
    EdgeOrder::from_sequence(sequence, c.edges.len())
        .map_err(|_| CircuitError::BadOrder("curve does not cross every edge exactly once".into()))
}
