//! A catalog of small planar circuit shapes.
//!
//! Shapes carry zero matrices of the right sizes; fill them with
//! [`crate::samplers::randomize_circuit`].

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Assignment, Circuit, Side, Vertex};
use crate::pfaffian::SkewMatrix;

fn shape(sides: Vec<Side>, rotations: Vec<Vec<usize>>, edges: Vec<[usize; 2]>) -> Circuit {
    let vertices = sides
        .into_iter()
        .zip(rotations)
        .map(|(side, rotation)| Vertex {
            side,
            assignment: Assignment::Elementary(SkewMatrix::zeros_sized(rotation.len())),
            rotation,
        })
        .collect();
    Circuit::new(vertices, edges).expect("catalog shapes are valid planar circuits")
}

/// A straight-line drawing: each vertex lists its edges counter-clockwise by angle.
pub fn from_drawing(sides: Vec<Side>, positions: &[(f64, f64)], edges: Vec<[usize; 2]>) -> Circuit {
    let rotations = (0..sides.len())
        .map(|v| {
            let mut incident: Vec<(f64, usize)> = edges
                .iter()
                .enumerate()
                .filter(|(_, ends)| ends.contains(&v))
                .map(|(e, &[a, b])| {
                    let w = if a == v { b } else { a };
                    let (dx, dy) = (
                        positions[w].0 - positions[v].0,
                        positions[w].1 - positions[v].1,
                    );
                    (dy.atan2(dx), e)
                })
                .collect();
            incident.sort_by(|x, y| x.0.total_cmp(&y.0));
            incident.into_iter().map(|(_, e)| e).collect()
        })
        .collect();
    shape(sides, rotations, edges)
}

fn alternating(n: usize) -> Vec<Side> {
    (0..n)
        .map(|k| if k % 2 == 0 { Side::Gate } else { Side::Cogate })
        .collect()
}

/// An even cycle of `n` vertices alternating gate, cogate.
pub fn cycle(n: usize) -> Circuit {
    assert!(
        n >= 4 && n.is_multiple_of(2),
        "bipartite cycles have even length >= 4"
    );
    let pos: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .collect();
    from_drawing(
        alternating(n),
        &pos,
        (0..n).map(|k| [k, (k + 1) % n]).collect(),
    )
}

/// Complete bipartite `K_{2,m}`: two hubs of side `hub` and `m` spokes between them.
pub fn two_hubs(m: usize, hub: Side) -> Circuit {
    let other = if hub == Side::Gate {
        Side::Cogate
    } else {
        Side::Gate
    };
    let mut sides = vec![hub, hub];
    sides.extend(std::iter::repeat_n(other, m));
    let mut pos = vec![(-2.0, 0.0), (2.0, 0.0)];
    pos.extend((0..m).map(|k| (0.0, k as f64 - (m as f64 - 1.0) / 2.0)));
    let edges = (0..m).flat_map(|k| [[0, k + 2], [k + 2, 1]]).collect();
    from_drawing(sides, &pos, edges)
}

type Drawing = (Vec<Side>, Vec<(f64, f64)>, Vec<[usize; 2]>);

/// Grid graph of `rows × cols` vertices; side follows the checkerboard.
fn grid_positions(rows: usize, cols: usize) -> Drawing {
    let id = |r: usize, c: usize| r * cols + c;
    let mut sides = Vec::new();
    let mut pos = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            sides.push(if (r + c) % 2 == 0 {
                Side::Gate
            } else {
                Side::Cogate
            });
            pos.push((c as f64, r as f64));
        }
    }
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                edges.push([id(r, c), id(r, c + 1)]);
            }
            if r + 1 < rows {
                edges.push([id(r, c), id(r + 1, c)]);
            }
        }
    }
    (sides, pos, edges)
}

pub fn grid(rows: usize, cols: usize) -> Circuit {
    let (sides, pos, edges) = grid_positions(rows, cols);
    from_drawing(sides, &pos, edges)
}

/// A random connected spanning subgraph of a grid with at most `max_edges` edges.
pub fn random_grid_subgraph<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    max_edges: usize,
) -> Circuit {
    let (sides, pos, mut edges) = grid_positions(rows, cols);
    edges.shuffle(rng);
    let mut parent: Vec<usize> = (0..sides.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let (mut tree, mut spare) = (Vec::new(), Vec::new());
    for e in edges {
        let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
        if a != b {
            parent[a] = b;
            tree.push(e);
        } else {
            spare.push(e);
        }
    }
    let room = max_edges.saturating_sub(tree.len());
    let extra = rng.gen_range(0..=room.min(spare.len()));
    tree.extend(spare.into_iter().take(extra));
    from_drawing(sides, &pos, tree)
}

fn disjoint_union(a: &Circuit, b: &Circuit) -> Circuit {
    let (nv, ne) = (a.vertices().len(), a.edges().len());
    let mut vertices = a.vertices().to_vec();
    vertices.extend(b.vertices().iter().map(|v| Vertex {
        side: v.side,
        rotation: v.rotation.iter().map(|e| e + ne).collect(),
        assignment: v.assignment.clone(),
    }));
    let mut edges = a.edges().to_vec();
    edges.extend(b.edges().iter().map(|&[x, y]| [x + nv, y + nv]));
    Circuit::new(vertices, edges).expect("union of planar circuits")
}

pub const NAMES: &[&str] = &[
    "edge",
    "digon",
    "theta",
    "path4",
    "star4",
    "cycle4",
    "cycle6",
    "cycle8",
    "cycle10",
    "k23",
    "k24",
    "double-digon",
    "cogate-pair",
    "grid2x3",
    "grid2x4",
    "split-gates",
    "two-components",
];

pub fn by_name(name: &str) -> Option<Circuit> {
    use Side::{Cogate, Gate};
    Some(match name {
        "edge" => shape(vec![Gate, Cogate], vec![vec![0], vec![0]], vec![[0, 1]]),
        "digon" => shape(
            vec![Gate, Cogate],
            vec![vec![0, 1], vec![1, 0]],
            vec![[0, 1], [0, 1]],
        ),
        "theta" => shape(
            vec![Gate, Cogate],
            vec![vec![2, 1, 0], vec![0, 1, 2]],
            vec![[0, 1], [0, 1], [0, 1]],
        ),
        "path4" => from_drawing(
            alternating(4),
            &[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)],
            vec![[0, 1], [1, 2], [2, 3]],
        ),
        "star4" => from_drawing(
            vec![Cogate, Gate, Gate, Gate, Gate],
            &[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)],
            vec![[0, 1], [0, 2], [0, 3], [0, 4]],
        ),
        "cycle4" => cycle(4),
        "cycle6" => cycle(6),
        "cycle8" => cycle(8),
        "cycle10" => cycle(10),
        "k23" => two_hubs(3, Gate),
        "k24" => two_hubs(4, Gate),
        // One degree-4 cogate against two degree-2 gates, each joined twice.
        "double-digon" => shape(
            vec![Cogate, Gate, Gate],
            vec![vec![0, 1, 2, 3], vec![0, 1], vec![2, 3]],
            vec![[0, 1], [0, 1], [0, 2], [0, 2]],
        ),
        // Two degree-4 cogates with four degree-2 gates between them.
        "cogate-pair" => two_hubs(4, Cogate),
        "grid2x3" => grid(2, 3),
        "grid2x4" => grid(2, 4),
        "split-gates" => from_drawing(
            vec![Gate, Gate, Cogate, Cogate, Cogate, Cogate, Cogate],
            &[
                (0.0, 0.0),
                (5.0, 0.0),
                (-1.0, 1.0),
                (1.0, 1.0),
                (6.0, 1.0),
                (5.0, 1.0),
                (4.0, 1.0),
            ],
            vec![[0, 2], [0, 3], [1, 4], [1, 5], [1, 6]],
        ),
        "two-components" => disjoint_union(&by_name("edge")?, &by_name("digon")?),
        _ => return None,
    })
}

/// Every named shape, with zero matrices.
pub fn catalog_with_zero_entries() -> Vec<(&'static str, Circuit)> {
    NAMES
        .iter()
        .map(|&n| (n, by_name(n).expect("listed name")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn catalog_shapes_build() {
        assert_eq!(catalog_with_zero_entries().len(), NAMES.len());
        assert!(by_name("nope").is_none());
        let c = by_name("double-digon").unwrap();
        assert_eq!(c.degree(0), 4);
    }

    #[test]
    fn random_grids_are_connected_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let c = random_grid_subgraph(&mut rng, 3, 3, 10);
            assert!(c.edges().len() <= 10 && c.edges().len() >= 8);
            assert_eq!(c.components().len(), 1);
        }
    }
}
