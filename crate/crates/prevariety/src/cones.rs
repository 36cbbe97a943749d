//! Half-open cones, their intersection, and the decomposition of a tropical
//! hypersurface into pairwise disjoint half-open pieces.
//!
//! The hypersurface of a polytope is covered one vertex at a time: the
//! half-open normal cone of a vertex (strict rows for outgoing edges,
//! nonstrict for incoming) partitions space, and peeling its boundary off
//! constraint by constraint yields disjoint codimension-one cones whose
//! union is exactly the part of the hypersurface charged to that vertex.

use crate::kernel::lp::remove_redundant_nonempty;
use crate::kernel::{implied_equations, lp_feasible, ConstraintSystem, IntVector};
use crate::newton::NewtonPolytope;
use crate::{Error, Result};

/// Where a cone came from: a position in a hypersurface fan, or an
/// intersection computed during enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConeOrigin {
    FanCone { fan: usize, cone: usize },
    Derived,
}

/// A nonempty half-open polyhedral cone `{Ex = 0, Ax <= 0, A'x < 0}`
/// together with an exact point inside it.
#[derive(Clone, Debug)]
pub struct HalfOpenCone {
    body: ConstraintSystem,
    origin: ConeOrigin,
    witness: IntVector,
}

impl HalfOpenCone {
    /// LP-checks the body and packages it with the witness found; `None`
    /// when the body has no solutions.
    pub fn new(body: ConstraintSystem, origin: ConeOrigin) -> Option<HalfOpenCone> {
        let verdict = lp_feasible(&body);
        if !verdict.feasible {
            return None;
        }
        let witness = verdict.witness.expect("feasible verdict carries a witness");
        Some(HalfOpenCone {
            body,
            origin,
            witness,
        })
    }

    fn with_witness(body: ConstraintSystem, origin: ConeOrigin, witness: IntVector) -> Self {
        debug_assert!(body.contains(&witness));
        HalfOpenCone {
            body,
            origin,
            witness,
        }
    }

    pub fn body(&self) -> &ConstraintSystem {
        &self.body
    }

    pub fn origin(&self) -> ConeOrigin {
        self.origin
    }

    /// A stored exact member of the cone, kept so nonemptiness can be
    /// re-verified and so intersections can often skip their LP call.
    pub fn witness(&self) -> &IntVector {
        &self.witness
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    /// The same cone with an irredundant body; worth the LP calls only for
    /// cones that will be intersected against many others.
    pub fn reduced(&self) -> HalfOpenCone {
        HalfOpenCone::with_witness(
            remove_redundant_nonempty(&self.body),
            self.origin,
            self.witness.clone(),
        )
    }
}

/// The tropical hypersurface of one polytope as an ordered list of disjoint
/// half-open cones.
#[derive(Clone, Debug)]
pub struct Fan {
    polytope_index: usize,
    cones: Vec<HalfOpenCone>,
}

impl Fan {
    pub fn polytope_index(&self) -> usize {
        self.polytope_index
    }

    pub fn cones(&self) -> &[HalfOpenCone] {
        &self.cones
    }

    pub fn len(&self) -> usize {
        self.cones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cones.is_empty()
    }
}

/// The half-open normal cone of vertex `v`: for each edge at `v` with other
/// endpoint `u`, the row `v - u`, strict when the edge leaves `v`. Ties on
/// an edge direction are assigned to the endpoint ranked higher by the
/// orientation vector, which makes the vertex cones partition space.
pub fn vertex_cone(p: &NewtonPolytope, v: usize) -> ConstraintSystem {
    let verts = p.vertices();
    let mut sys = ConstraintSystem::new(p.dim());
    for &(a, b) in p.edges() {
        if b == v {
            sys.push_nonstrict(verts[v].sub(&verts[a]))
                .expect("edge rows share the polytope dimension");
        } else if a == v {
            sys.push_strict(verts[v].sub(&verts[b]))
                .expect("edge rows share the polytope dimension");
        }
    }
    sys
}

/// Disjoint half-open cones covering the boundary of `body`.
///
/// Peels nonstrict constraints in stored order: the first becomes an
/// equation (one output cone, if nonempty) and the remainder is processed
/// with that constraint made strict, so points satisfying it with equality
/// are never seen again. A body with only strict constraints has no
/// boundary to emit.
pub fn create_half_open_cones(body: &ConstraintSystem) -> Vec<(ConstraintSystem, IntVector)> {
    let mut out = Vec::new();
    let mut equations = body.equations().to_vec();
    let mut rest = body.nonstrict().to_vec();
    let mut strict = body.strict().to_vec();
    while !rest.is_empty() {
        let row = rest.remove(0);
        equations.push(row.clone());
        let on_boundary = ConstraintSystem::from_parts(
            body.dim(),
            equations.clone(),
            rest.clone(),
            strict.clone(),
        )
        .expect("rows share the body dimension");
        equations.pop();
        let verdict = lp_feasible(&on_boundary);
        if verdict.feasible {
            let w = verdict.witness.expect("feasible verdict carries a witness");
            out.push((on_boundary, w));
        }
        strict.push(row);
    }
    out
}

/// The tropical hypersurface fan of a polytope: boundary cones of every
/// vertex cone, in (vertex rank, constraint order) order. The pieces are
/// pairwise disjoint and their union is exactly the hypersurface.
pub fn hypersurface_fan(p: &NewtonPolytope, polytope_index: usize) -> Result<Fan> {
    if p.edges().is_empty() {
        return Err(Error::DegenerateFan(polytope_index));
    }
    let mut cones = Vec::new();
    for v in p.vertex_order() {
        for (body, witness) in create_half_open_cones(&vertex_cone(p, v)) {
            let origin = ConeOrigin::FanCone {
                fan: polytope_index,
                cone: cones.len(),
            };
            cones.push(HalfOpenCone::with_witness(body, origin, witness));
        }
    }
    debug_assert!(cones.len() <= p.edges().len());
    Ok(Fan {
        polytope_index,
        cones,
    })
}

/// Intersection of two half-open cones over the same space: the
/// concatenation of their constraints, or `None` when no point satisfies
/// both. When either stored witness lies in the other cone the LP call is
/// skipped.
pub fn intersect(a: &HalfOpenCone, b: &HalfOpenCone) -> Option<HalfOpenCone> {
    assert_eq!(a.dim(), b.dim(), "cones from different ambient spaces");
    let body = a
        .body
        .concat(&b.body)
        .expect("dimensions checked above");
    if b.body.contains(&a.witness) {
        return Some(HalfOpenCone::with_witness(
            body,
            ConeOrigin::Derived,
            a.witness.clone(),
        ));
    }
    if a.body.contains(&b.witness) {
        return Some(HalfOpenCone::with_witness(
            body,
            ConeOrigin::Derived,
            b.witness.clone(),
        ));
    }
    HalfOpenCone::new(body, ConeOrigin::Derived)
}

/// Verdict-only counterpart of `intersect`: no combined system or witness
/// is kept. Used to fill relation tables, where only the bit matters.
pub fn intersects(a: &HalfOpenCone, b: &HalfOpenCone) -> bool {
    assert_eq!(a.dim(), b.dim(), "cones from different ambient spaces");
    if b.body.contains(&a.witness) || a.body.contains(&b.witness) {
        return true;
    }
    crate::kernel::lp::lp_feasible_view(&crate::kernel::lp::RowsView::concat(&a.body, &b.body))
        .feasible
}

/// Canonical description of a cone's closure: equal point sets give equal
/// keys. Equations are the reduced echelon basis of the closure's linear
/// span's orthogonal complement; inequalities are the facet rows reduced
/// modulo the equations, primitive, sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClosureKey {
    dim: usize,
    equations: Vec<IntVector>,
    nonstrict: Vec<IntVector>,
}

impl ClosureKey {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn equations(&self) -> &[IntVector] {
        &self.equations
    }

    pub fn nonstrict(&self) -> &[IntVector] {
        &self.nonstrict
    }

    /// Dimension of the cone: the equations form a basis of the span's
    /// orthogonal complement, so no further rank computation is needed.
    pub fn cone_dim(&self) -> usize {
        self.dim - self.equations.len()
    }

    pub fn system(&self) -> ConstraintSystem {
        ConstraintSystem::from_parts(
            self.dim,
            self.equations.clone(),
            self.nonstrict.clone(),
            vec![],
        )
        .expect("key rows share the key dimension")
    }
}

/// Canonical form of the closure of a nonempty half-open cone.
pub fn closure_key(cone: &HalfOpenCone) -> ClosureKey {
    closure_key_of_closed(&cone.body.closure())
}

/// Canonical form of a nonempty closed system.
pub fn closure_key_of_closed(closed: &ConstraintSystem) -> ClosureKey {
    debug_assert!(closed.strict().is_empty());
    let implied = implied_equations(closed).expect("key requires a nonempty system");
    let mut equations = closed.equations().to_vec();
    let mut inequalities = Vec::new();
    let mut implied = implied.into_iter().peekable();
    for (i, row) in closed.nonstrict().iter().enumerate() {
        if implied.peek() == Some(&i) {
            implied.next();
            equations.push(row.clone());
        } else {
            inequalities.push(row.clone());
        }
    }
    let promoted = ConstraintSystem::from_parts(closed.dim(), equations, inequalities, vec![])
        .expect("rows share the system dimension");
    let reduced = remove_redundant_nonempty(&promoted);
    let mut nonstrict = reduced.nonstrict().to_vec();
    nonstrict.sort();
    ClosureKey {
        dim: closed.dim(),
        equations: reduced.equations().to_vec(),
        nonstrict,
    }
}
