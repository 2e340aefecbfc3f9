//! Property tests that cross module boundaries.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics3d::{apply_word, AutomorphismWord, Axis};
use crate::elliptic::{arc_coordinate, point_at_arc, reflection, skeleton_cycle, twist};
use crate::geometry::{level_set_polytope, skeleton_mesh};
use crate::pl1d::{cocycle1d, evaluate_map, with_depth};
use crate::presets;
use crate::rational::{int, rat, to_f64};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn surface_reflections(seed in 0u64..40, pick in 0u64..1000) {
        let spec = presets::random_surface(seed, &int(2));
        let mesh = skeleton_mesh(&level_set_polytope(spec.hcirc(), spec.level()).unwrap()).unwrap();
        let p = mesh.random_points(1, &mut ChaCha8Rng::seed_from_u64(pick)).remove(0);
        for a in Axis::ALL {
            let q = spec.reflector().reflect(a.index(), &p);
            prop_assert_eq!(spec.h(&q), spec.level().clone());
            prop_assert_eq!(spec.reflector().reflect(a.index(), &q), p.clone());
        }
        let word: AutomorphismWord = "xyz".parse().unwrap();
        let q = apply_word(&spec, &word, &p).unwrap();
        prop_assert_eq!(apply_word(&spec, &word.inverse(), &q).unwrap(), p);
    }

    #[test]
    fn curve_reflections(seed in 0u64..40, num in 0i64..997) {
        let curve = presets::random_curve(seed, &int(2));
        let cycle = skeleton_cycle(&curve).unwrap();
        let p = point_at_arc(&cycle, &(&cycle.total * rat(num, 997)));
        prop_assert_eq!(curve.h(&p), curve.level().clone());
        for axis in 0..2 {
            let q = reflection(&curve, axis, &p);
            prop_assert_eq!(curve.h(&q), curve.level().clone());
            prop_assert_eq!(reflection(&curve, axis, &q), p.clone());
        }
        let s = arc_coordinate(&cycle, &twist(&curve, &p)).unwrap();
        prop_assert!(s >= int(0) && s < cycle.total);
    }

    #[test]
    fn tent_potential_equation(num in -3000i64..3000) {
        let f = presets::tent_map();
        let g = with_depth(&f, 40);
        let x = rat(num, 1000);
        let lhs = g.evaluate(&evaluate_map(&f, &x));
        let rhs = f.degree() as f64 * g.evaluate(&x) - to_f64(&cocycle1d(&f, &x));
        prop_assert!((lhs - rhs).abs() <= 1e-9, "{lhs} vs {rhs}");
    }

    #[test]
    fn random_potentials_are_half_lipschitz(seed in 0u64..20, a in -2000i64..2000, b in -2000i64..2000) {
        let g = with_depth(&presets::random_pl_map(seed), 30);
        let (x, y) = (rat(a, 500), rat(b, 500));
        let gap = (g.evaluate(&x) - g.evaluate(&y)).abs();
        prop_assert!(gap <= to_f64(&(x - y)).abs() / 2.0 + 1e-9);
    }
}
