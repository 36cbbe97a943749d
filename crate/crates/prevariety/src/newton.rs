//! Newton polytopes of polynomial supports: hull vertex extraction, the
//! edge graph, and the acyclic edge orientation induced by a generic vector.
//!
//! Everything downstream works with the minimizing convention: the normal
//! cone of a vertex `v` is the set of `w` with `<w,v> <= <w,u>` for all other
//! vertices `u`.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::kernel::{dimension, lp_feasible, ConstraintSystem, IntVector};
use crate::{Error, Result};

/// The monomial support of one polynomial: distinct exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Support {
    dim: usize,
    points: Vec<IntVector>,
}

impl Support {
    pub fn new(dim: usize, points: Vec<IntVector>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("empty support".into()));
        }
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: p.dim(),
                });
            }
            if p.coords().iter().any(|c| c.sign() == num_bigint::Sign::Minus) {
                return Err(Error::InvalidArgument(format!(
                    "negative exponent in support point {p}"
                )));
            }
        }
        let mut sorted = points.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("duplicate support point".into()));
        }
        Ok(Support { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[IntVector] {
        &self.points
    }
}

/// A Newton polytope reduced to what the tropical computation needs: its
/// vertices, its edge graph, and a linear functional `<r,.>` that is
/// injective on the vertices. Edges are stored once each as `(u, v)` with
/// `<r,u> < <r,v>`, so the directed graph is acyclic with a unique source
/// and sink.
#[derive(Clone, Debug)]
pub struct NewtonPolytope {
    dim: usize,
    vertices: Vec<IntVector>,
    edges: Vec<(usize, usize)>,
    orientation: IntVector,
}

impl NewtonPolytope {
    /// Full construction: hull vertices, edge graph, then orientation drawn
    /// from `seed`.
    pub fn build(support: &Support, seed: u64) -> Result<NewtonPolytope> {
        let vertices = compute_vertices(support);
        let edges = compute_edges(support.dim(), &vertices);
        orient(support.dim(), vertices, edges, seed)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    /// Directed edges `(u, v)` with `<r,u> < <r,v>`, each geometric edge
    /// listed exactly once.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn orientation(&self) -> &IntVector {
        &self.orientation
    }

    /// Vertex indices sorted by increasing `<r,.>`.
    pub fn vertex_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by_key(|&i| self.orientation.dot(&self.vertices[i]));
        order
    }
}

/// The subset of support points that are vertices of the convex hull.
///
/// A point is a vertex exactly when it is not a convex combination of the
/// other points. Feasibility of `sum l_i (q_i - p) = 0, l >= 0, sum l > 0`
/// in the coefficient space is equivalent (scale any solution to total
/// weight one), and that system is homogeneous, so one exact LP decides it.
pub fn compute_vertices(support: &Support) -> Vec<IntVector> {
    let points = support.points();
    points
        .iter()
        .enumerate()
        .filter(|(i, p)| {
            let others: Vec<&IntVector> = points
                .iter()
                .enumerate()
                .filter(|(j, _)| j != i)
                .map(|(_, q)| q)
                .collect();
            if others.is_empty() {
                return true;
            }
            let mut sys = ConstraintSystem::new(others.len());
            for k in 0..support.dim() {
                let row: Vec<BigInt> = others
                    .iter()
                    .map(|q| &q.coords()[k] - &p.coords()[k])
                    .collect();
                sys.push_equation(IntVector::new(row)).unwrap();
            }
            for j in 0..others.len() {
                let mut row = vec![BigInt::from(0); others.len()];
                row[j] = BigInt::from(-1);
                sys.push_nonstrict(IntVector::new(row)).unwrap();
            }
            sys.push_strict(IntVector::new(vec![BigInt::from(-1); others.len()]))
                .unwrap();
            !lp_feasible(&sys).feasible
        })
        .map(|(_, p)| p.clone())
        .collect()
}

/// Constraint system of the normal region `N(u, v)`: vectors `w` where the
/// minimum of `<w,.>` over the vertices is attained at both `u` and `v`.
fn normal_region(dim: usize, vertices: &[IntVector], u: usize, v: usize) -> ConstraintSystem {
    let mut sys = ConstraintSystem::new(dim);
    sys.push_equation(vertices[u].sub(&vertices[v])).unwrap();
    for (s, vs) in vertices.iter().enumerate() {
        if s != u && s != v {
            sys.push_nonstrict(vertices[u].sub(vs)).unwrap();
        }
    }
    sys
}

/// Unordered vertex pairs `{u, v}` (as `u < v`) forming polytope edges:
/// exactly the pairs whose normal region has dimension `n - 1` or more.
pub fn compute_edges(dim: usize, vertices: &[IntVector]) -> Vec<(usize, usize)> {
    let want = dim as i64 - 1;
    let mut edges = Vec::new();
    for u in 0..vertices.len() {
        for v in u + 1..vertices.len() {
            if dimension(&normal_region(dim, vertices, u, v)) >= want {
                edges.push((u, v));
            }
        }
    }
    edges
}

const ORIENTATION_DRAWS: usize = 64;
const ORIENTATION_BOUND: i64 = 1 << 16;

/// Draws an integer vector from a deterministic generator until `<r,.>`
/// separates all vertices, then directs each edge toward the endpoint with
/// the larger inner product.
pub fn orient(
    dim: usize,
    vertices: Vec<IntVector>,
    edges: Vec<(usize, usize)>,
    seed: u64,
) -> Result<NewtonPolytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ORIENTATION_DRAWS {
        let r = IntVector::new(
            (0..dim)
                .map(|_| BigInt::from(rng.gen_range(-ORIENTATION_BOUND..=ORIENTATION_BOUND)))
                .collect(),
        );
        let values: Vec<BigInt> = vertices.iter().map(|v| r.dot(v)).collect();
        let mut sorted = values.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let oriented = edges
            .iter()
            .map(|&(u, v)| if values[u] < values[v] { (u, v) } else { (v, u) })
            .collect();
        return Ok(NewtonPolytope {
            dim,
            vertices,
            edges: oriented,
            orientation: r,
        });
    }
    Err(Error::DegenerateOrientation(ORIENTATION_DRAWS))
}
