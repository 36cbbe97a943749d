//! From emitted cones to reported quantities: canonical closed cones, the
//! deduplicated ray list, maximal-cone counts, and a brute-force oracle
//! over closed cones.

use std::collections::{BTreeMap, BTreeSet};

use crate::cones::{closure_key, closure_key_of_closed, ClosureKey, Fan};
use crate::enumeration::{EnumerationStats, OutputCone};
use crate::kernel::{extreme_rays, lp_feasible, IntVector};
use crate::systems::PolynomialSystem;
use crate::{Error, Result};

/// A deduplicated closed cone of the refinement with its ray description.
#[derive(Clone, Debug)]
pub struct CanonicalCone {
    pub key: ClosureKey,
    pub lineality: Vec<IntVector>,
    pub rays: Vec<IntVector>,
}

impl CanonicalCone {
    pub fn of(key: ClosureKey) -> CanonicalCone {
        let (lineality, rays) = extreme_rays(&key.system());
        CanonicalCone {
            key,
            lineality,
            rays,
        }
    }

    pub fn dim(&self) -> usize {
        self.key.cone_dim()
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality.len()
    }
}

/// Closure keys of emitted cones, deduplicated and sorted. Emitted cones
/// are pairwise disjoint and each one contains the relative interior of
/// its closure, so on the production path distinct cones already carry
/// distinct keys; the dedup matters for the closed-cone oracle and makes
/// the result independent of emission order.
pub fn dedup_closures(cones: &[OutputCone]) -> Vec<ClosureKey> {
    let set: BTreeSet<ClosureKey> = cones.iter().map(|c| closure_key(&c.cone)).collect();
    set.into_iter().collect()
}

/// Same dedup for cone bodies read back from a stream, where only the
/// constraint systems survive.
pub fn dedup_closure_bodies(bodies: &[crate::kernel::ConstraintSystem]) -> Vec<ClosureKey> {
    let set: BTreeSet<ClosureKey> = bodies
        .iter()
        .map(|b| closure_key_of_closed(&b.closure()))
        .collect();
    set.into_iter().collect()
}

pub fn canonical_cones(keys: Vec<ClosureKey>) -> Vec<CanonicalCone> {
    keys.into_iter().map(CanonicalCone::of).collect()
}

/// Extreme rays of all pointed cones, primitive, deduplicated, sorted.
/// A cone with lineality has no extreme rays and contributes nothing; the
/// caller surfaces those separately.
pub fn collect_rays(cones: &[CanonicalCone]) -> Vec<IntVector> {
    let set: BTreeSet<IntVector> = cones
        .iter()
        .filter(|c| c.lineality.is_empty())
        .flat_map(|c| c.rays.iter().cloned())
        .collect();
    set.into_iter().collect()
}

/// Does `inner` lie inside `outer`? Both closed: yes iff every generator
/// of `inner` (rays, lineality in both signs) satisfies `outer`.
fn cone_contained(inner: &CanonicalCone, outer_system: &crate::kernel::ConstraintSystem) -> bool {
    inner.rays.iter().all(|r| outer_system.contains(r))
        && inner
            .lineality
            .iter()
            .all(|l| outer_system.contains(l) && outer_system.contains(&l.negated()))
}

/// Indices of the cones not contained in any other. Keys are unique, so
/// containment between distinct entries is always strict.
pub fn maximal_cones(cones: &[CanonicalCone]) -> Vec<usize> {
    let systems: Vec<_> = cones.iter().map(|c| c.key.system()).collect();
    (0..cones.len())
        .filter(|&i| {
            !(0..cones.len()).any(|j| {
                j != i && cones[i].dim() <= cones[j].dim() && cone_contained(&cones[i], &systems[j])
            })
        })
        .collect()
}

/// Count of maximal cones per dimension.
pub fn maximal_by_dim(cones: &[CanonicalCone]) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for i in maximal_cones(cones) {
        *counts.entry(cones[i].dim()).or_insert(0) += 1;
    }
    counts
}

/// Is the minimum of `⟨w, p⟩` over every support attained at least twice?
/// Ties over a support equal ties over its vertex set: the argmin is a
/// face, and a face holding two support points has two vertices.
pub fn verify_pretropism(w: &IntVector, system: &PolynomialSystem) -> Result<bool> {
    if w.is_zero() {
        return Err(Error::InvalidArgument(
            "pretropism test needs a nonzero vector".into(),
        ));
    }
    for support in system.supports() {
        let values: Vec<_> = support.points().iter().map(|p| w.dot(p)).collect();
        let min = values.iter().min().expect("supports are nonempty");
        if values.iter().filter(|v| *v == min).count() < 2 {
            return Ok(false);
        }
    }
    Ok(true)
}

const ORACLE_LIMIT: u128 = 1_000_000;

/// Brute-force refinement of the closed cones, deduplicating each level by
/// closure key. Exponential without the dedup and quadratic with it; kept
/// as an independent check on the half-open path, never for production.
pub fn oracle_refine_closed(fans: &[Fan]) -> Result<Vec<ClosureKey>> {
    let mut product: u128 = 1;
    for f in fans {
        product = product.saturating_mul(f.len() as u128);
    }
    if product > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge(format!(
            "{product} closed intersections exceed the {ORACLE_LIMIT} oracle guard"
        )));
    }
    let first = fans.first().expect("oracle needs at least one fan");
    let mut level: BTreeSet<ClosureKey> = first
        .cones()
        .iter()
        .map(|c| closure_key_of_closed(&c.body().closure()))
        .collect();
    for fan in &fans[1..] {
        let mut next = BTreeSet::new();
        for key in &level {
            let system = key.system();
            for cone in fan.cones() {
                let combined = system
                    .concat(&cone.body().closure())
                    .expect("fans share one ambient space");
                if lp_feasible(&combined).feasible {
                    next.insert(closure_key_of_closed(&combined));
                }
            }
        }
        level = next;
    }
    Ok(level.into_iter().collect())
}

/// Run description carried into the serialized header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunMeta {
    pub label: String,
    pub dim: usize,
    pub fan_count: usize,
    pub seed: u64,
    pub workers: usize,
}

/// Everything a run reports.
#[derive(Debug)]
pub struct PrevarietyResult {
    pub cones: Vec<CanonicalCone>,
    pub rays: Vec<IntVector>,
    /// Dimension to count over maximal cones; filled only when asked for.
    pub maximal_by_dim: Option<BTreeMap<usize, usize>>,
    /// Cones excluded from the ray list because they carry lineality.
    pub lineality_cones: usize,
    pub stats: EnumerationStats,
    pub meta: RunMeta,
}

pub fn build_result(
    keys: Vec<ClosureKey>,
    stats: EnumerationStats,
    meta: RunMeta,
    want_maximal: bool,
) -> PrevarietyResult {
    let cones = canonical_cones(keys);
    let rays = collect_rays(&cones);
    let lineality_cones = cones.iter().filter(|c| !c.lineality.is_empty()).count();
    let maximal = want_maximal.then(|| maximal_by_dim(&cones));
    PrevarietyResult {
        cones,
        rays,
        maximal_by_dim: maximal,
        lineality_cones,
        stats,
        meta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{enumerate_recursive, enumerate_static, VecSink};
    use crate::kernel::ConstraintSystem;
    use crate::pipeline::build_fans;
    use crate::systems::gen_cyclic;

    fn closed(dim: usize, eq: &[&[i64]], ns: &[&[i64]]) -> ClosureKey {
        let sys = ConstraintSystem::from_parts(
            dim,
            eq.iter().map(|r| IntVector::from_i64(r)).collect(),
            ns.iter().map(|r| IntVector::from_i64(r)).collect(),
            vec![],
        )
        .unwrap();
        closure_key_of_closed(&sys)
    }

    #[test]
    fn origin_cone_has_no_rays() {
        let key = closed(2, &[&[1, 0], &[0, 1]], &[]);
        let cones = canonical_cones(vec![key]);
        assert_eq!(cones[0].dim(), 0);
        assert!(collect_rays(&cones).is_empty());
    }

    #[test]
    fn lineality_cone_contributes_no_rays() {
        // The hyperplane {x = 0} in dim 2 is a line: pure lineality.
        let key = closed(2, &[&[1, 0]], &[]);
        let cones = canonical_cones(vec![key]);
        assert_eq!(cones[0].lineality_dim(), 1);
        assert!(collect_rays(&cones).is_empty());
    }

    #[test]
    fn nested_cones_keep_only_the_outer() {
        let inner = closed(2, &[&[1, 0]], &[&[0, 1]]);
        let outer = closed(2, &[], &[&[0, 1]]);
        let cones = canonical_cones(vec![inner, outer]);
        let max = maximal_cones(&cones);
        assert_eq!(max.len(), 1);
        assert_eq!(cones[max[0]].dim(), 2);
        let by_dim = maximal_by_dim(&cones);
        assert_eq!(by_dim.get(&2), Some(&1));
        assert_eq!(by_dim.len(), 1);
    }

    #[test]
    fn identical_cones_collapse_to_one_survivor() {
        let keys = vec![closed(2, &[], &[&[0, 1]]), closed(2, &[], &[&[0, -1]])];
        let cones = canonical_cones(keys);
        assert_eq!(maximal_cones(&cones).len(), 2);
        let same = canonical_cones(vec![closed(2, &[], &[&[0, 1]])]);
        assert_eq!(maximal_cones(&same).len(), 1);
    }

    #[test]
    fn pretropism_needs_a_tie_in_every_support() {
        let sys = gen_cyclic(4).unwrap();
        let e0 = IntVector::from_i64(&[1, 0, 0, 0]);
        assert!(!verify_pretropism(&e0, &sys).unwrap());
        assert!(verify_pretropism(&IntVector::zeros(4), &sys).is_err());
    }

    #[test]
    fn cyclic4_has_two_rays() {
        let sys = gen_cyclic(4).unwrap();
        let fans = build_fans(&sys, 0).unwrap();
        let sink = VecSink::new();
        enumerate_recursive(&fans, None, &sink);
        let cones = canonical_cones(dedup_closures(&sink.into_cones()));
        let rays = collect_rays(&cones);
        assert_eq!(rays.len(), 2);
        for r in &rays {
            assert!(verify_pretropism(r, &sys).unwrap());
        }
    }

    #[test]
    fn oracle_matches_production_on_cyclic4() {
        let fans = build_fans(&gen_cyclic(4).unwrap(), 0).unwrap();
        let sink = VecSink::new();
        enumerate_static(&fans, &sink);
        let prod = canonical_cones(dedup_closures(&sink.into_cones()));
        let oracle = canonical_cones(oracle_refine_closed(&fans).unwrap());
        assert_eq!(collect_rays(&prod), collect_rays(&oracle));
        let max_keys = |cones: &[CanonicalCone]| -> BTreeSet<ClosureKey> {
            maximal_cones(cones)
                .into_iter()
                .map(|i| cones[i].key.clone())
                .collect()
        };
        assert_eq!(max_keys(&prod), max_keys(&oracle));
    }

    #[test]
    fn oracle_guard_rejects_huge_products() {
        let fans = build_fans(&gen_cyclic(4).unwrap(), 0).unwrap();
        let sizes: Vec<Fan> = std::iter::repeat_with(|| fans[0].clone()).take(30).collect();
        assert!(matches!(
            oracle_refine_closed(&sizes),
            Err(Error::OracleTooLarge(_))
        ));
    }
}
