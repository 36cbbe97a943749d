//! Test-side oracles, independent of the production code paths: a
//! Fourier-Motzkin feasibility decision, a subset-enumeration extreme-ray
//! finder, and seeded random generators.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use prevariety::kernel::{kernel_basis, ConstraintSystem, IntVector};
use prevariety::newton::Support;
use prevariety::systems::PolynomialSystem;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Relation {
    Le,
    Lt,
}

#[derive(Clone)]
struct FmRow {
    coeffs: Vec<BigInt>,
    relation: Relation,
}

impl FmRow {
    fn normalized(mut self) -> FmRow {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        if !g.is_zero() {
            for c in &mut self.coeffs {
                *c = &*c / &g;
            }
        }
        self
    }
}

/// Exact Fourier-Motzkin feasibility for `{Ex = 0, Ax <= 0, A'x < 0}`.
/// Equations are split into opposite inequalities; variables are
/// eliminated one by one; the system is feasible iff no strict row
/// survives the last elimination (a surviving strict row reads `0 < 0`).
pub fn fm_feasible(sys: &ConstraintSystem) -> bool {
    if sys.is_trivially_empty() {
        return false;
    }
    let mut rows: Vec<FmRow> = Vec::new();
    for e in sys.equations() {
        rows.push(FmRow {
            coeffs: e.coords().to_vec(),
            relation: Relation::Le,
        });
        rows.push(FmRow {
            coeffs: e.coords().iter().map(|c| -c).collect(),
            relation: Relation::Le,
        });
    }
    for r in sys.nonstrict() {
        rows.push(FmRow {
            coeffs: r.coords().to_vec(),
            relation: Relation::Le,
        });
    }
    for r in sys.strict() {
        rows.push(FmRow {
            coeffs: r.coords().to_vec(),
            relation: Relation::Lt,
        });
    }

    for var in 0..sys.dim() {
        let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for row in rows {
            match row.coeffs[var].sign() {
                num_bigint::Sign::Plus => upper.push(row),
                num_bigint::Sign::Minus => lower.push(row),
                num_bigint::Sign::NoSign => rest.push(row),
            }
        }
        for lo in &lower {
            for up in &upper {
                // lo: -a x_var <= l(x), up: b x_var <= u(x); combine to
                // b l(x) + a u(x) (<= or <) 0.
                let a = -&lo.coeffs[var];
                let b = up.coeffs[var].clone();
                let coeffs: Vec<BigInt> = lo
                    .coeffs
                    .iter()
                    .zip(&up.coeffs)
                    .map(|(l, u)| &b * l + &a * u)
                    .collect();
                let relation = if lo.relation == Relation::Lt || up.relation == Relation::Lt {
                    Relation::Lt
                } else {
                    Relation::Le
                };
                rest.push(FmRow { coeffs, relation }.normalized());
            }
        }
        // Dedup keeps the row count manageable; a strict copy subsumes a
        // nonstrict one.
        rest.sort_by(|x, y| {
            x.coeffs
                .cmp(&y.coeffs)
                .then_with(|| (x.relation == Relation::Lt).cmp(&(y.relation == Relation::Lt)))
        });
        rest.dedup_by(|later, earlier| {
            later.coeffs == earlier.coeffs && {
                if later.relation == Relation::Lt {
                    earlier.relation = Relation::Lt;
                }
                true
            }
        });
        rows = rest;
    }

    rows.iter().all(|r| r.relation == Relation::Le)
}

/// Extreme rays of a pointed closed cone by subset enumeration: a ray is a
/// one-dimensional tight set that satisfies the remaining rows. Keep this
/// to small systems; the work is exponential in the inequality count.
pub fn brute_extreme_rays(sys: &ConstraintSystem) -> Vec<IntVector> {
    assert!(sys.strict().is_empty(), "closed cones only");
    let ineq = sys.nonstrict();
    assert!(ineq.len() <= 16, "too many rows for subset enumeration");
    let mut rays = Vec::new();
    for mask in 0u32..(1 << ineq.len()) {
        let mut tight: Vec<IntVector> = sys.equations().to_vec();
        for (i, row) in ineq.iter().enumerate() {
            if mask & (1 << i) != 0 {
                tight.push(row.clone());
            }
        }
        let kernel = kernel_basis(sys.dim(), &tight);
        if kernel.len() != 1 {
            continue;
        }
        let v = kernel[0].clone().primitive();
        for candidate in [v.clone(), v.negated().primitive()] {
            if sys.contains(&candidate) && !rays.contains(&candidate) {
                rays.push(candidate);
            }
        }
    }
    rays.sort();
    rays
}

/// A random closed cone system: a few small integer rows, some promoted to
/// equations.
pub fn random_closed_system(seed: u64, dim: usize) -> ConstraintSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut equations = Vec::new();
    let mut nonstrict = Vec::new();
    let rows = rng.gen_range(1..=dim + 2);
    for _ in 0..rows {
        let coords: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
        if coords.iter().all(|&c| c == 0) {
            continue;
        }
        let v = IntVector::from_i64(&coords);
        if rng.gen_bool(0.25) {
            equations.push(v);
        } else {
            nonstrict.push(v);
        }
    }
    ConstraintSystem::from_parts(dim, equations, nonstrict, vec![]).expect("rows match dim")
}

/// A random half-open system, possibly empty, for feasibility cross-checks.
pub fn random_half_open_system(seed: u64, dim: usize) -> ConstraintSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parts: [Vec<IntVector>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let rows = rng.gen_range(1..=dim + 3);
    for _ in 0..rows {
        let coords: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
        let v = IntVector::from_i64(&coords);
        let bucket = rng.gen_range(0..6);
        // Zero rows are legal input: 0 = 0 and 0 <= 0 hold, 0 < 0 never.
        match bucket {
            0 => parts[0].push(v),
            1 | 2 => parts[2].push(v),
            _ => parts[1].push(v),
        }
    }
    ConstraintSystem::from_parts(dim, parts[0].clone(), parts[1].clone(), parts[2].clone())
        .expect("rows match dim")
}

/// The closed normal cone of the edge `(a, b)` of a polytope: vectors
/// minimized on both endpoints at once.
pub fn edge_normal_cone(
    p: &prevariety::newton::NewtonPolytope,
    a: usize,
    b: usize,
) -> ConstraintSystem {
    let verts = p.vertices();
    let mut sys = ConstraintSystem::new(p.dim());
    sys.push_equation(verts[a].sub(&verts[b])).unwrap();
    for (u, vert) in verts.iter().enumerate() {
        if u != a && u != b {
            sys.push_nonstrict(verts[a].sub(vert)).unwrap();
        }
    }
    sys
}

/// Integer combination of vectors with given coefficients.
pub fn combine(parts: &[(IntVector, i64)], dim: usize) -> IntVector {
    let mut sum = vec![BigInt::from(0); dim];
    for (v, k) in parts {
        for (s, c) in sum.iter_mut().zip(v.coords()) {
            *s += c * BigInt::from(*k);
        }
    }
    IntVector::new(sum)
}

/// Is the minimum of `⟨w, ·⟩` over the polytope attained on two or more
/// vertices, i.e. does `w` lie on the tropical hypersurface?
pub fn minimized_at_least_twice(p: &prevariety::newton::NewtonPolytope, w: &IntVector) -> bool {
    let values: Vec<BigInt> = p.vertices().iter().map(|v| v.dot(w)).collect();
    let min = values.iter().min().expect("polytope has vertices");
    values.iter().filter(|v| *v == min).count() >= 2
}

/// Vectors on the tropical hypersurface of a polytope: random nonnegative
/// combinations of the extreme rays of each edge's normal cone, plus
/// arbitrary combinations of its lineality space. Yields `total` vectors
/// spread over the edges.
pub fn boundary_samples(
    p: &prevariety::newton::NewtonPolytope,
    total: usize,
    seed: u64,
) -> Vec<IntVector> {
    use prevariety::kernel::extreme_rays;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = p.edges();
    assert!(!edges.is_empty(), "polytope has no edges to sample");
    let per_edge = total / edges.len() + 1;
    let mut out = Vec::with_capacity(total);
    'outer: for &(a, b) in edges {
        let (lineality, rays) = extreme_rays(&edge_normal_cone(p, a, b));
        for _ in 0..per_edge {
            let mut parts: Vec<(IntVector, i64)> = rays
                .iter()
                .map(|r| (r.clone(), rng.gen_range(0..=4)))
                .collect();
            parts.extend(
                lineality
                    .iter()
                    .map(|l| (l.clone(), rng.gen_range(-3..=3))),
            );
            out.push(combine(&parts, p.dim()));
            if out.len() == total {
                break 'outer;
            }
        }
    }
    out
}

/// A random polynomial system: 3 supports in dimension 3, between 2 and 4
/// distinct small exponent vectors each, so every Newton polytope has at
/// least one edge.
pub fn random_system(seed: u64) -> PolynomialSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 3;
    let mut supports = Vec::new();
    for _ in 0..3 {
        let mut points: Vec<IntVector> = Vec::new();
        let wanted = rng.gen_range(2..=4);
        let mut guard = 0;
        while points.len() < wanted {
            guard += 1;
            assert!(guard < 1000, "support sampling stalled");
            let coords: Vec<i64> = (0..dim).map(|_| rng.gen_range(0..=3)).collect();
            let v = IntVector::from_i64(&coords);
            if !points.contains(&v) {
                points.push(v);
            }
        }
        supports.push(Support::new(dim, points).expect("valid support"));
    }
    let names = (0..dim).map(|i| format!("x{i}")).collect();
    PolynomialSystem::new(names, supports, format!("random-{seed}")).expect("valid system")
}
