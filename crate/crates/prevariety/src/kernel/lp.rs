//! Exact feasibility of homogeneous systems with strict rows, and the
//! operations built on top of it: implied equations, dimension, redundancy
//! removal.
//!
//! Strict inequalities are handled by homogenization. The system
//! `Ex = 0, Ax <= 0, A'x < 0` is nonempty exactly when the closed cone in
//! one more variable `t`, with `A'x + t <= 0`, meets the open halfspace
//! `t > 0`. Since the cone is invariant under positive scaling this reduces
//! to the bounded exact LP
//!
//! ```text
//!   maximize t   subject to   Ex = 0, Ax <= 0, A'x + t <= 0, t <= 1
//! ```
//!
//! whose optimum is positive iff the original system is feasible. The origin
//! is always a starting vertex, so no phase-one search is needed. Equations
//! are eliminated beforehand by substituting a kernel basis, and free
//! variables are split into differences of nonnegatives. The tableau keeps
//! each row as integers over a positive common denominator, renormalized by
//! gcd after every pivot; entering is by steepest reduced cost until
//! degenerate pivots stall, after which Bland's rule takes over and
//! guarantees termination.

use num_bigint::BigInt;
use num_integer::Integer;


use super::coeff::{slice_from_bigint, CalcResult, Coeff, Overflow};
use super::constraint::{ConstraintSystem, FeasibilityVerdict};
use super::linalg::Echelon;
use super::vec::IntVector;
use crate::{Error, Result};

/// Borrowed rows of one or more systems, so intersections can be tested
/// without materializing the concatenated system first.
#[derive(Clone)]
pub(crate) struct RowsView<'a> {
    pub dim: usize,
    pub equations: Vec<&'a IntVector>,
    pub nonstrict: Vec<&'a IntVector>,
    pub strict: Vec<&'a IntVector>,
    pub trivially_empty: bool,
}

impl<'a> RowsView<'a> {
    pub fn of(sys: &'a ConstraintSystem) -> Self {
        RowsView {
            dim: sys.dim(),
            equations: sys.equations().iter().collect(),
            nonstrict: sys.nonstrict().iter().collect(),
            strict: sys.strict().iter().collect(),
            trivially_empty: sys.is_trivially_empty(),
        }
    }

    pub fn concat(a: &'a ConstraintSystem, b: &'a ConstraintSystem) -> Self {
        debug_assert_eq!(a.dim(), b.dim());
        let mut v = RowsView::of(a);
        v.trivially_empty |= b.is_trivially_empty();
        v.equations.extend(b.equations().iter());
        v.nonstrict.extend(b.nonstrict().iter());
        v.strict.extend(b.strict().iter());
        v
    }
}

const STALL_LIMIT: usize = 96;

/// One tableau row: entries `num[j] / den` with `den > 0`. The last column
/// of `num` is the right-hand side.
struct Row<C> {
    num: Vec<C>,
    den: C,
}

impl<C: Coeff> Row<C> {
    fn normalize(&mut self) {
        let mut g = self.den.clone();
        for v in &self.num {
            g = g.gcd(v);
            if g == C::one() {
                return;
            }
        }
        if g == C::one() || g.is_zero() {
            return;
        }
        for v in self.num.iter_mut() {
            *v = v.exact_div(&g);
        }
        self.den = self.den.exact_div(&g);
    }
}

struct Tableau<C> {
    rows: Vec<Row<C>>,
    obj: Row<C>,
    basis: Vec<usize>,
    ncols: usize,
}

impl<C: Coeff> Tableau<C> {
    fn pivot(&mut self, r: usize, c: usize) -> CalcResult<()> {
        let pivot_num = self.rows[r].num[c].clone();
        debug_assert!(pivot_num.is_positive());
        let pivot_row = self.rows[r].num.clone();
        let update = |row: &mut Row<C>| -> CalcResult<()> {
            if row.num[c].is_zero() {
                return Ok(());
            }
            let f = row.num[c].clone();
            for (v, pv) in row.num.iter_mut().zip(&pivot_row) {
                *v = pivot_num.checked_mul(v)?.checked_sub(&f.checked_mul(pv)?)?;
            }
            row.den = row.den.checked_mul(&pivot_num)?;
            row.normalize();
            Ok(())
        };
        for i in 0..self.rows.len() {
            if i != r {
                update(&mut self.rows[i])?;
            }
        }
        update(&mut self.obj)?;
        self.rows[r].den = pivot_num;
        self.rows[r].normalize();
        self.basis[r] = c;
        Ok(())
    }

    fn entering_dantzig(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for j in 0..self.ncols {
            if self.obj.num[j].is_negative()
                && best.is_none_or(|b| self.obj.num[j] < self.obj.num[b])
            {
                best = Some(j);
            }
        }
        best
    }

    fn entering_bland(&self) -> Option<usize> {
        (0..self.ncols).find(|&j| self.obj.num[j].is_negative())
    }

    /// Minimum-ratio leaving row for column `c`, ties broken by smallest
    /// basic variable index (Bland). Returns `None` when the column is
    /// unbounded, which the bounded objective rules out here.
    fn leaving(&self, c: usize) -> CalcResult<Option<usize>> {
        let rhs = self.ncols;
        let mut best: Option<usize> = None;
        for i in 0..self.rows.len() {
            if !self.rows[i].num[c].is_positive() {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) => {
                    // Compare num_i[rhs]/num_i[c] with num_b[rhs]/num_b[c].
                    let lhs = self.rows[i].num[rhs].checked_mul(&self.rows[b].num[c])?;
                    let rhsv = self.rows[b].num[rhs].checked_mul(&self.rows[i].num[c])?;
                    if lhs < rhsv || (lhs == rhsv && self.basis[i] < self.basis[b]) {
                        best = Some(i);
                    }
                }
            }
        }
        Ok(best)
    }
}

/// Run the bounded max-`t` program. `rows` are the reduced inequality rows
/// over `d` free coordinates; `n_strict` of them (the tail) are strict.
/// Returns the optimal `y` (free coordinates, as numerator/denominator
/// pairs) when the optimum is positive, `None` when it is zero.
fn strict_feasibility_lp<C: Coeff>(
    d: usize,
    nonstrict: &[Vec<C>],
    strict: &[Vec<C>],
) -> CalcResult<Option<Vec<(C, C)>>> {
    let m = nonstrict.len() + strict.len() + 1;
    let t_col = 2 * d;
    let nstruct = 2 * d + 1;
    let ncols = nstruct + m;
    let mut rows = Vec::with_capacity(m);
    let mut make_row = |coeffs: &[C], t: bool, slack: usize, rhs: C| {
        let mut num = vec![C::zero(); ncols + 1];
        for (j, v) in coeffs.iter().enumerate() {
            num[j] = v.clone();
            num[d + j] = v.neg();
        }
        if t {
            num[t_col] = C::one();
        }
        num[nstruct + slack] = C::one();
        num[ncols] = rhs;
        rows.push(Row { num, den: C::one() });
    };
    for (k, r) in nonstrict.iter().enumerate() {
        make_row(r, false, k, C::zero());
    }
    for (k, r) in strict.iter().enumerate() {
        make_row(r, true, nonstrict.len() + k, C::zero());
    }
    make_row(&[], true, m - 1, C::one());

    let mut obj = Row {
        num: vec![C::zero(); ncols + 1],
        den: C::one(),
    };
    obj.num[t_col] = C::one().neg();

    let basis = (nstruct..ncols).collect();
    let mut t = Tableau {
        rows,
        obj,
        basis,
        ncols,
    };

    let mut stalls = 0usize;
    let mut bland = false;
    let mut iterations = 0usize;
    loop {
        iterations += 1;
        assert!(
            iterations < 200_000,
            "simplex failed to terminate under Bland's rule"
        );
        let entering = if bland {
            t.entering_bland()
        } else {
            t.entering_dantzig()
        };
        let Some(c) = entering else { break };
        let Some(r) = t.leaving(c)? else {
            // max t is bounded by the t <= 1 row, so an unbounded column
            // still means a positive optimum is reachable; treat as such by
            // pivoting being impossible only if no positive coefficient
            // exists, which cannot happen for the t column. Defensive:
            unreachable!("bounded objective cannot be unbounded");
        };
        if t.rows[r].num[t.ncols].is_zero() {
            stalls += 1;
            if stalls > STALL_LIMIT {
                bland = true;
            }
        } else {
            stalls = 0;
        }
        t.pivot(r, c)?;
    }

    if !t.obj.num[t.ncols].is_positive() {
        return Ok(None);
    }
    let mut y = vec![(C::zero(), C::one()); d];
    for (i, &v) in t.basis.iter().enumerate() {
        if v < 2 * d {
            let val = (t.rows[i].num[t.ncols].clone(), t.rows[i].den.clone());
            let j = v % d;
            let (pn, pd) = y[j].clone();
            // y_j = y+_j - y-_j accumulated as exact rationals.
            let (vn, vd) = if v < d { (val.0, val.1) } else { (val.0.neg(), val.1) };
            let num = pn.checked_mul(&vd)?.checked_add(&vn.checked_mul(&pd)?)?;
            let den = pd.checked_mul(&vd)?;
            y[j] = (num, den);
        }
    }
    Ok(Some(y))
}

fn transform_row(row: &IntVector, kernel: &[IntVector]) -> IntVector {
    IntVector::new(kernel.iter().map(|k| row.dot(k)).collect())
}

/// Eliminate equations from a view, returning the kernel basis (None when
/// there are no equations) and the transformed inequality rows, or a direct
/// verdict when the reduction already decides feasibility.
enum Reduced {
    Decided(FeasibilityVerdict),
    Open {
        kernel: Option<Vec<IntVector>>,
        nonstrict: Vec<IntVector>,
        strict: Vec<IntVector>,
    },
}

fn reduce_view(view: &RowsView<'_>) -> Reduced {
    if view.trivially_empty {
        return Reduced::Decided(FeasibilityVerdict::empty());
    }
    if view.equations.is_empty() {
        if view.strict.is_empty() {
            return Reduced::Decided(FeasibilityVerdict::with_witness(IntVector::zeros(
                view.dim,
            )));
        }
        return Reduced::Open {
            kernel: None,
            nonstrict: view.nonstrict.iter().map(|r| (*r).clone()).collect(),
            strict: view.strict.iter().map(|r| (*r).clone()).collect(),
        };
    }
    let eq_rows: Vec<IntVector> = view.equations.iter().map(|r| (*r).clone()).collect();
    let kernel = Echelon::new(view.dim, &eq_rows).kernel_basis();
    if kernel.is_empty() {
        // Only the origin satisfies the equations.
        if view.strict.is_empty() {
            return Reduced::Decided(FeasibilityVerdict::with_witness(IntVector::zeros(
                view.dim,
            )));
        }
        return Reduced::Decided(FeasibilityVerdict::empty());
    }
    let mut nonstrict = Vec::with_capacity(view.nonstrict.len());
    for row in &view.nonstrict {
        let t = transform_row(row, &kernel);
        if !t.is_zero() {
            nonstrict.push(t.primitive());
        }
    }
    let mut strict = Vec::with_capacity(view.strict.len());
    for row in &view.strict {
        let t = transform_row(row, &kernel);
        if t.is_zero() {
            // The row vanishes on the solution space of the equations, so
            // it can never be strictly negative.
            return Reduced::Decided(FeasibilityVerdict::empty());
        }
        strict.push(t.primitive());
    }
    if strict.is_empty() {
        return Reduced::Decided(FeasibilityVerdict::with_witness(IntVector::zeros(view.dim)));
    }
    Reduced::Open {
        kernel: Some(kernel),
        nonstrict,
        strict,
    }
}

fn run_lp<C: Coeff>(
    d: usize,
    nonstrict: &[IntVector],
    strict: &[IntVector],
) -> CalcResult<Option<Vec<(BigInt, BigInt)>>> {
    let conv = |rows: &[IntVector]| -> CalcResult<Vec<Vec<C>>> {
        rows.iter()
            .map(|r| slice_from_bigint::<C>(r.coords()).ok_or(Overflow))
            .collect()
    };
    let ns = conv(nonstrict)?;
    let st = conv(strict)?;
    Ok(strict_feasibility_lp(d, &ns, &st)?.map(|y| {
        y.into_iter()
            .map(|(n, dn)| (n.to_bigint(), dn.to_bigint()))
            .collect()
    }))
}

fn assemble_witness(
    dim: usize,
    kernel: Option<&[IntVector]>,
    y: &[(BigInt, BigInt)],
) -> IntVector {
    let mut scale = BigInt::from(1);
    for (_, den) in y {
        scale = scale.lcm(den);
    }
    let ints: Vec<BigInt> = y
        .iter()
        .map(|(num, den)| num * (&scale / den))
        .collect();
    let x = match kernel {
        None => IntVector::new(ints),
        Some(kb) => {
            let mut acc = vec![BigInt::zero(); dim];
            for (c, k) in ints.iter().zip(kb) {
                if c.is_zero() {
                    continue;
                }
                for (a, v) in acc.iter_mut().zip(k.coords()) {
                    *a += c * v;
                }
            }
            IntVector::new(acc)
        }
    };
    x.primitive()
}

fn verify_witness(view: &RowsView<'_>, x: &IntVector) {
    let ok = view.equations.iter().all(|r| r.dot(x).is_zero())
        && view.nonstrict.iter().all(|r| !r.dot(x).is_positive())
        && view.strict.iter().all(|r| r.dot(x).is_negative());
    assert!(ok, "LP witness {x} fails exact re-evaluation");
}

pub(crate) fn lp_feasible_view(view: &RowsView<'_>) -> FeasibilityVerdict {
    let (kernel, nonstrict, strict) = match reduce_view(view) {
        Reduced::Decided(v) => {
            if let Some(w) = &v.witness {
                verify_witness(view, w);
            }
            return v;
        }
        Reduced::Open {
            kernel,
            nonstrict,
            strict,
        } => (kernel, nonstrict, strict),
    };
    let d = kernel.as_ref().map_or(view.dim, Vec::len);
    let y = match run_lp::<i128>(d, &nonstrict, &strict) {
        Ok(y) => y,
        Err(Overflow) => run_lp::<BigInt>(d, &nonstrict, &strict)
            .expect("bigint arithmetic cannot overflow"),
    };
    match y {
        None => FeasibilityVerdict::empty(),
        Some(y) => {
            let witness = assemble_witness(view.dim, kernel.as_deref(), &y);
            verify_witness(view, &witness);
            FeasibilityVerdict::with_witness(witness)
        }
    }
}

/// Decide whether any point satisfies the system, returning an exact
/// integer witness when one exists.
pub fn lp_feasible(sys: &ConstraintSystem) -> FeasibilityVerdict {
    lp_feasible_view(&RowsView::of(sys))
}

/// Indices of nonstrict rows that hold with equality everywhere on the
/// closed region (strict rows relaxed). Feasible witnesses accumulate into
/// a running interior point so most rows are cleared without an LP call.
pub fn implied_equations(sys: &ConstraintSystem) -> Result<Vec<usize>> {
    if sys.is_trivially_empty() {
        return Err(Error::EmptyRegion);
    }
    let closed = sys.closure();
    let mut interior: Option<IntVector> = None;
    let mut implied = Vec::new();
    for (i, row) in sys.nonstrict().iter().enumerate() {
        if let Some(z) = &interior {
            if row.dot(z).is_negative() {
                continue;
            }
        }
        let mut probe = RowsView::of(&closed);
        probe.nonstrict.remove(i);
        probe.strict.push(row);
        let verdict = lp_feasible_view(&probe);
        match verdict.witness {
            Some(w) => {
                interior = Some(match interior.take() {
                    None => w,
                    Some(z) => z.add(&w),
                });
            }
            None => implied.push(i),
        }
    }
    Ok(implied)
}

/// Dimension of the solution set: the ambient dimension minus the rank of
/// the equations together with the implied equations of the closure, or -1
/// for an empty system.
pub fn dimension(sys: &ConstraintSystem) -> i64 {
    let verdict = lp_feasible(sys);
    if !verdict.feasible {
        return -1;
    }
    let closed = sys.closure();
    let implied = implied_equations(&closed).expect("closure of nonempty system is nonempty");
    let mut rows: Vec<IntVector> = closed.equations().to_vec();
    for i in implied {
        rows.push(closed.nonstrict()[i].clone());
    }
    sys.dim() as i64 - super::linalg::rank(sys.dim(), &rows) as i64
}

/// `remove_redundant` without the emptiness precheck, for callers that
/// already hold a feasibility witness.
pub fn remove_redundant_nonempty(sys: &ConstraintSystem) -> ConstraintSystem {
    debug_assert!(!sys.is_trivially_empty());
    let ech = Echelon::new(sys.dim(), sys.equations());
    let mut seen = std::collections::HashSet::new();
    let reduce_all = |rows: &[IntVector],
                      seen: &mut std::collections::HashSet<(bool, IntVector)>,
                      strict: bool| {
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let red = ech.reduce(r);
            if red.is_zero() {
                debug_assert!(!strict, "strict row vanished on a nonempty system");
                continue;
            }
            if seen.insert((strict, red.clone())) {
                out.push(red);
            }
        }
        out
    };
    let mut nonstrict = reduce_all(sys.nonstrict(), &mut seen, false);
    let mut strict = reduce_all(sys.strict(), &mut seen, true);

    // Sequentially drop rows whose negation is infeasible against the rest.
    let mut i = 0;
    while i < nonstrict.len() {
        let row = nonstrict[i].clone();
        let neg = row.negated();
        let mut probe = RowsView {
            dim: sys.dim(),
            equations: ech.rows().iter().collect(),
            nonstrict: nonstrict
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, r)| r)
                .collect(),
            strict: strict.iter().collect(),
            trivially_empty: false,
        };
        probe.strict.push(&neg);
        if lp_feasible_view(&probe).feasible {
            i += 1;
        } else {
            nonstrict.remove(i);
        }
    }
    let mut i = 0;
    while i < strict.len() {
        let row = strict[i].clone();
        let neg = row.negated();
        let mut probe = RowsView {
            dim: sys.dim(),
            equations: ech.rows().iter().collect(),
            nonstrict: nonstrict.iter().collect(),
            strict: strict
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, r)| r)
                .collect(),
            trivially_empty: false,
        };
        probe.nonstrict.push(&neg);
        if lp_feasible_view(&probe).feasible {
            i += 1;
        } else {
            strict.remove(i);
        }
    }

    ConstraintSystem::from_parts(sys.dim(), ech.rows().to_vec(), nonstrict, strict)
        .expect("rows share the system dimension")
}

/// An equivalent system in which no inequality row can be deleted without
/// enlarging the point set: equations are replaced by their echelon basis,
/// inequality rows are reduced modulo the equations, deduplicated, and each
/// surviving row is kept only if the system with that row negated stays
/// feasible.
pub fn remove_redundant(sys: &ConstraintSystem) -> Result<ConstraintSystem> {
    if !lp_feasible(sys).feasible {
        return Err(Error::EmptyRegion);
    }
    Ok(remove_redundant_nonempty(sys))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(coords: &[i64]) -> IntVector {
        IntVector::from_i64(coords)
    }

    fn sys(
        dim: usize,
        eq: &[&[i64]],
        ns: &[&[i64]],
        st: &[&[i64]],
    ) -> ConstraintSystem {
        ConstraintSystem::from_parts(
            dim,
            eq.iter().map(|r| IntVector::from_i64(r)).collect(),
            ns.iter().map(|r| IntVector::from_i64(r)).collect(),
            st.iter().map(|r| IntVector::from_i64(r)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn line_with_strict_halfspace() {
        // {(x,y) : x = 0, y < 0} is nonempty.
        let s = sys(2, &[&[1, 0]], &[], &[&[0, 1]]);
        let v = lp_feasible(&s);
        assert!(v.feasible);
        let w = v.witness.unwrap();
        assert!(s.contains(&w));
    }

    #[test]
    fn opposite_strict_rows_are_infeasible() {
        // x < 0 and -x < 0 cannot hold together.
        let s = sys(1, &[], &[], &[&[1], &[-1]]);
        assert!(!lp_feasible(&s).feasible);
    }

    #[test]
    fn closed_system_contains_origin() {
        let s = sys(1, &[], &[&[1], &[-1]], &[]);
        let v = lp_feasible(&s);
        assert!(v.feasible);
        assert_eq!(v.witness.unwrap(), iv(&[0]));
    }

    #[test]
    fn strict_row_vanishing_on_equations() {
        // x + y = 0 forces x + y < 0 to fail.
        let s = sys(2, &[&[1, 1]], &[], &[&[1, 1]]);
        assert!(!lp_feasible(&s).feasible);
    }

    #[test]
    fn implied_equation_pair() {
        // {x <= 0, -x <= 0, y <= 0}: both x rows are implied equations.
        let s = sys(2, &[], &[&[1, 0], &[-1, 0], &[0, 1]], &[]);
        assert_eq!(implied_equations(&s).unwrap(), vec![0, 1]);
    }

    #[test]
    fn no_implied_equations_in_full_quadrant() {
        let s = sys(2, &[], &[&[-1, 0], &[0, -1]], &[]);
        assert!(implied_equations(&s).unwrap().is_empty());
    }

    #[test]
    fn implied_equations_require_nonempty_flag() {
        let mut s = ConstraintSystem::new(2);
        s.push_strict(iv(&[0, 0])).unwrap();
        assert!(matches!(implied_equations(&s), Err(Error::EmptyRegion)));
    }

    #[test]
    fn dimensions() {
        // Full plane.
        assert_eq!(dimension(&sys(2, &[], &[], &[])), 2);
        // Half-open halfplane.
        assert_eq!(dimension(&sys(2, &[], &[], &[&[1, 0]])), 2);
        // A line.
        assert_eq!(dimension(&sys(2, &[&[1, 0]], &[], &[])), 1);
        // Implied equality cuts the dimension.
        assert_eq!(dimension(&sys(2, &[], &[&[1, 0], &[-1, 0]], &[])), 1);
        // Empty.
        assert_eq!(dimension(&sys(1, &[], &[], &[&[1], &[-1]])), -1);
        // The origin only.
        assert_eq!(dimension(&sys(2, &[&[1, 0], &[0, 1]], &[], &[])), 0);
    }

    #[test]
    fn redundant_duplicate_scaling() {
        // (2,0) is the same primitive row as (1,0).
        let s = sys(2, &[], &[&[1, 0], &[2, 0], &[0, 1]], &[]);
        let r = remove_redundant(&s).unwrap();
        assert_eq!(r.nonstrict(), &[iv(&[1, 0]), iv(&[0, 1])]);
        assert!(r.equations().is_empty() && r.strict().is_empty());
    }

    #[test]
    fn redundant_sum_row() {
        // x+y <= 0 follows from x <= 0 and y < 0.
        let s = sys(2, &[], &[&[1, 0], &[1, 1]], &[&[0, 1]]);
        let r = remove_redundant(&s).unwrap();
        assert_eq!(r.nonstrict(), &[iv(&[1, 0])]);
        assert_eq!(r.strict(), &[iv(&[0, 1])]);
    }

    #[test]
    fn remove_redundant_rejects_empty() {
        let s = sys(1, &[], &[], &[&[1], &[-1]]);
        assert!(matches!(remove_redundant(&s), Err(Error::EmptyRegion)));
    }

    #[test]
    fn rows_implied_by_equations_are_dropped() {
        // With x = 0, the row x <= 0 is vacuous.
        let s = sys(2, &[&[1, 0]], &[&[1, 0], &[0, 1]], &[]);
        let r = remove_redundant(&s).unwrap();
        assert_eq!(r.equations(), &[iv(&[1, 0])]);
        assert_eq!(r.nonstrict(), &[iv(&[0, 1])]);
    }
}
