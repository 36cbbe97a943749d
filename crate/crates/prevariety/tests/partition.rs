//! Partition invariants: the half-open vertex cones of a polytope tile all
//! of space, and the half-open cones of a hypersurface fan tile exactly the
//! set of vectors minimized at two or more support points.

mod common;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{boundary_samples, minimized_at_least_twice, random_system};
use prevariety::cones::{hypersurface_fan, vertex_cone};
use prevariety::kernel::{ConstraintSystem, IntVector};
use prevariety::newton::NewtonPolytope;
use prevariety::systems::gen_cyclic;

fn assert_vertex_cones_tile_space(p: &NewtonPolytope, samples: usize, seed: u64) {
    let cones: Vec<ConstraintSystem> = (0..p.vertices().len())
        .map(|v| vertex_cone(p, v))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let coords: Vec<i64> = (0..p.dim()).map(|_| rng.gen_range(-9..=9)).collect();
        let w = IntVector::from_i64(&coords);
        let hits = cones.iter().filter(|c| c.contains(&w)).count();
        assert_eq!(hits, 1, "vector {w} lies in {hits} vertex cones");
    }
}

fn assert_fan_tiles_hypersurface(p: &NewtonPolytope, samples_per_edge: usize, seed: u64) {
    let fan = hypersurface_fan(p, 0).expect("polytope has an edge");
    let samples = boundary_samples(p, samples_per_edge * p.edges().len(), seed);
    assert!(!samples.is_empty(), "polytope has no edges to sample");
    for w in samples {
        assert!(
            minimized_at_least_twice(p, &w),
            "edge cone sample {w} misses the hypersurface"
        );
        let hits = fan
            .cones()
            .iter()
            .filter(|c| c.body().contains(&w))
            .count();
        assert_eq!(hits, 1, "hypersurface vector {w} lies in {hits} fan cones");
    }
}

#[test]
fn vertex_cones_tile_space_for_random_polytopes() {
    for seed in 0..12u64 {
        let sys = random_system(seed);
        for (i, support) in sys.supports().iter().enumerate() {
            let p = NewtonPolytope::build(support, seed + i as u64).unwrap();
            assert_vertex_cones_tile_space(&p, 200, seed * 101 + i as u64);
        }
    }
}

#[test]
fn vertex_cones_tile_space_for_cyclic_polytopes() {
    let sys = gen_cyclic(5).unwrap();
    for (i, support) in sys.supports().iter().enumerate() {
        let p = NewtonPolytope::build(support, i as u64).unwrap();
        assert_vertex_cones_tile_space(&p, 300, 4242 + i as u64);
    }
}

#[test]
fn fan_cones_tile_the_hypersurface_for_random_polytopes() {
    for seed in 0..12u64 {
        let sys = random_system(seed + 500);
        for (i, support) in sys.supports().iter().enumerate() {
            let p = NewtonPolytope::build(support, seed + i as u64).unwrap();
            assert_fan_tiles_hypersurface(&p, 20, seed * 77 + i as u64);
        }
    }
}

#[test]
fn fan_cones_tile_the_hypersurface_for_cyclic_polytopes() {
    let sys = gen_cyclic(5).unwrap();
    for (i, support) in sys.supports().iter().enumerate() {
        let p = NewtonPolytope::build(support, i as u64).unwrap();
        assert_fan_tiles_hypersurface(&p, 10, 999 + i as u64);
    }
}

#[test]
fn the_zero_vector_lies_in_exactly_one_fan_cone() {
    let sys = gen_cyclic(4).unwrap();
    for (i, support) in sys.supports().iter().enumerate() {
        let p = NewtonPolytope::build(support, 0).unwrap();
        let fan = hypersurface_fan(&p, i).unwrap();
        let zero = IntVector::zeros(p.dim());
        let hits = fan
            .cones()
            .iter()
            .filter(|c| c.body().contains(&zero))
            .count();
        assert_eq!(hits, 1);
    }
}

#[test]
fn off_hypersurface_vectors_lie_in_no_fan_cone() {
    let sys = gen_cyclic(4).unwrap();
    let support = &sys.supports()[0];
    let p = NewtonPolytope::build(support, 0).unwrap();
    let fan = hypersurface_fan(&p, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tested = 0usize;
    while tested < 100 {
        let coords: Vec<i64> = (0..p.dim()).map(|_| rng.gen_range(-9..=9)).collect();
        let w = IntVector::from_i64(&coords);
        if minimized_at_least_twice(&p, &w) {
            continue;
        }
        tested += 1;
        let hits = fan
            .cones()
            .iter()
            .filter(|c| c.body().contains(&w))
            .count();
        assert_eq!(hits, 0, "off-surface vector {w} hit a fan cone");
    }
}
