//! Extreme rays of closed cones by the incremental double description
//! method.
//!
//! The cone is built one constraint at a time starting from the full space,
//! maintaining a lineality basis together with the extreme rays modulo that
//! lineality. While some lineality direction is not orthogonal to the new
//! constraint, the step is a projection: one lineality generator absorbs the
//! constraint (becoming a new ray for an inequality, disappearing for an
//! equation) and everything else is combined with it to land on the
//! constraint's hyperplane. Once the lineality is orthogonal, the classic
//! step keeps the satisfying rays and inserts combinations of adjacent
//! positive/negative pairs. Adjacency is the combinatorial test on sets of
//! tight constraints; tight sets of freshly created rays are recomputed from
//! scratch, because exact cancellation can make a combination tight at
//! constraints where neither parent was.

use num_bigint::BigInt;

use super::coeff::{normalize_primitive, slice_from_bigint, CalcResult, Coeff, Overflow};
use super::constraint::ConstraintSystem;
use super::linalg::Echelon;
use super::vec::{dot, IntVector};
use crate::bits::BitSet;

struct Ray<C> {
    v: Vec<C>,
    zero: BitSet,
}

fn identity<C: Coeff>(dim: usize) -> Vec<Vec<C>> {
    (0..dim)
        .map(|i| {
            let mut v = vec![C::zero(); dim];
            v[i] = C::one();
            v
        })
        .collect()
}

/// `|s| * a - sign(s) * f * b`, normalized primitive: a positive multiple of
/// `a - (f/s) b`, so it stays on the same side of every halfspace `a` was on
/// relative to directions orthogonal to `b`.
fn eliminate<C: Coeff>(a: &[C], f: &C, b: &[C], s: &C) -> CalcResult<Vec<C>> {
    debug_assert!(!s.is_zero());
    let (sa, sf) = if s.is_negative() {
        (s.neg(), f.neg())
    } else {
        (s.clone(), f.clone())
    };
    let mut out = Vec::with_capacity(a.len());
    for (av, bv) in a.iter().zip(b) {
        out.push(sa.checked_mul(av)?.checked_sub(&sf.checked_mul(bv)?)?);
    }
    normalize_primitive(&mut out);
    Ok(out)
}

fn run_dd<C: Coeff>(
    dim: usize,
    constraints: &[(Vec<C>, bool)],
    n_ineq: usize,
) -> CalcResult<Vec<Vec<C>>> {
    let mut lin = identity::<C>(dim);
    let mut rays: Vec<Ray<C>> = Vec::new();
    let mut processed: Vec<(Vec<C>, usize)> = Vec::new();
    let mut ineq_idx = 0usize;

    let zero_set = |v: &[C], processed: &[(Vec<C>, usize)]| -> CalcResult<BitSet> {
        let mut z = BitSet::zeros(n_ineq);
        for (row, bit) in processed {
            if dot(row, v)?.is_zero() {
                z.insert(*bit);
            }
        }
        Ok(z)
    };

    for (a, is_eq) in constraints {
        let lin_vals: Vec<C> = lin
            .iter()
            .map(|l| dot(a, l))
            .collect::<CalcResult<Vec<C>>>()?;
        if let Some(k0) = lin_vals.iter().position(|v| !v.is_zero()) {
            let mut l0 = lin.swap_remove(k0);
            let mut v0 = lin_vals[k0].clone();
            let mut rest_vals = lin_vals;
            rest_vals.swap_remove(k0);
            if !is_eq && v0.is_positive() {
                for x in l0.iter_mut() {
                    *x = x.neg();
                }
                v0 = v0.neg();
            }
            for (l, vl) in lin.iter_mut().zip(&rest_vals) {
                if !vl.is_zero() {
                    *l = eliminate(l, vl, &l0, &v0)?;
                }
            }
            for ray in rays.iter_mut() {
                let vr = dot(a, &ray.v)?;
                if !vr.is_zero() {
                    ray.v = eliminate(&ray.v, &vr, &l0, &v0)?;
                }
                // Values against processed constraints scale by a positive
                // factor (l0 was lineality), so tight sets are unchanged.
                if !is_eq {
                    ray.zero.insert(ineq_idx);
                }
            }
            if !is_eq {
                let mut zero = BitSet::zeros(n_ineq);
                for b in 0..ineq_idx {
                    zero.insert(b);
                }
                rays.push(Ray { v: l0, zero });
            }
        } else {
            let vals: Vec<C> = rays
                .iter()
                .map(|r| dot(a, &r.v))
                .collect::<CalcResult<Vec<C>>>()?;
            let mut fresh: Vec<Ray<C>> = Vec::new();
            for p in 0..rays.len() {
                if !vals[p].is_positive() {
                    continue;
                }
                for n in 0..rays.len() {
                    if !vals[n].is_negative() {
                        continue;
                    }
                    let meet = rays[p].zero.intersection(&rays[n].zero);
                    let blocked = rays
                        .iter()
                        .enumerate()
                        .any(|(k, r)| k != p && k != n && r.zero.is_superset_of(&meet));
                    if blocked {
                        continue;
                    }
                    // vals[p] * ray_n - vals[n] * ray_p: a positive
                    // combination landing on the hyperplane.
                    let mut w = Vec::with_capacity(dim);
                    for (nv, pv) in rays[n].v.iter().zip(&rays[p].v) {
                        w.push(
                            vals[p]
                                .checked_mul(nv)?
                                .checked_sub(&vals[n].checked_mul(pv)?)?,
                        );
                    }
                    normalize_primitive(&mut w);
                    debug_assert!(w.iter().any(|x| !x.is_zero()));
                    let mut zero = zero_set(&w, &processed)?;
                    if !is_eq && dot(a, &w)?.is_zero() {
                        zero.insert(ineq_idx);
                    }
                    fresh.push(Ray { v: w, zero });
                }
            }
            let mut kept = Vec::with_capacity(rays.len() + fresh.len());
            for (ray, val) in rays.into_iter().zip(&vals) {
                let keep = if *is_eq {
                    val.is_zero()
                } else {
                    !val.is_positive()
                };
                if keep {
                    let mut ray = ray;
                    if !is_eq && val.is_zero() {
                        ray.zero.insert(ineq_idx);
                    }
                    kept.push(ray);
                }
            }
            let mut seen: std::collections::HashSet<Vec<C>> =
                kept.iter().map(|r| r.v.clone()).collect();
            for r in fresh {
                if seen.insert(r.v.clone()) {
                    kept.push(r);
                }
            }
            rays = kept;
        }
        if !is_eq {
            processed.push((a.clone(), ineq_idx));
            ineq_idx += 1;
        }
    }
    Ok(rays.into_iter().map(|r| r.v).collect())
}

fn try_rays<C: Coeff>(sys: &ConstraintSystem) -> CalcResult<Vec<IntVector>> {
    let mut constraints: Vec<(&IntVector, bool)> = sys
        .equations()
        .iter()
        .map(|r| (r, true))
        .chain(sys.nonstrict().iter().map(|r| (r, false)))
        .collect();
    constraints.sort_by(|(a, aeq), (b, beq)| {
        a.count_zeros()
            .cmp(&b.count_zeros())
            .then(beq.cmp(aeq))
            .then(a.cmp(b))
    });
    let n_ineq = constraints.iter().filter(|(_, eq)| !eq).count();
    let converted: Vec<(Vec<C>, bool)> = constraints
        .iter()
        .map(|(r, eq)| {
            slice_from_bigint::<C>(r.coords())
                .map(|v| (v, *eq))
                .ok_or(Overflow)
        })
        .collect::<Result<_, _>>()?;
    let rays = run_dd(sys.dim(), &converted, n_ineq)?;
    Ok(rays
        .into_iter()
        .map(|v| IntVector::new(v.iter().map(|c| c.to_bigint()).collect()))
        .collect())
}

/// Minimal generator description of a closed cone `{Ex = 0, Ax <= 0}`:
/// a lineality basis (the largest linear subspace inside the cone) and the
/// extreme rays modulo lineality, each primitive, sorted lexicographically.
///
/// Requires a system without strict rows.
pub fn extreme_rays(sys: &ConstraintSystem) -> (Vec<IntVector>, Vec<IntVector>) {
    assert!(
        sys.strict().is_empty(),
        "extreme rays are defined on closed systems"
    );
    assert!(!sys.is_trivially_empty());

    // Canonical lineality: the null space of every row.
    let mut all_rows: Vec<IntVector> = sys.equations().to_vec();
    all_rows.extend(sys.nonstrict().iter().cloned());
    let lineality = super::linalg::kernel_basis(sys.dim(), &all_rows);

    let raw = match try_rays::<i128>(sys) {
        Ok(r) => r,
        Err(Overflow) => try_rays::<BigInt>(sys).expect("bigint arithmetic cannot overflow"),
    };

    // Pin a unique representative per ray modulo the lineality span.
    let lin_ech = Echelon::new(sys.dim(), &lineality);
    let mut rays: Vec<IntVector> = raw
        .into_iter()
        .map(|r| lin_ech.reduce(&r))
        .filter(|r| !r.is_zero())
        .collect();
    rays.sort();
    rays.dedup();
    debug_assert!(rays.iter().all(|r| sys.contains(r)));
    (lineality, rays)
}
