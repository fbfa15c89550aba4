use cluster_surface::instances::{annulus_targets, flip_walk, polygon_targets, SplitMix64};
use cluster_surface::surface::{arc_from_json, arc_to_json};
use cluster_surface::{build_matrix, SurfaceSpec, Triangulation};
use proptest::prelude::*;

fn random_triangulation(seed: u64, annulus: bool, a: usize, b: usize) -> Triangulation {
    let spec = if annulus {
        SurfaceSpec::Annulus { outer: a, inner: b }
    } else {
        SurfaceSpec::Polygon { m: a + b + 2 }
    };
    let start = Triangulation::standard(spec).unwrap();
    flip_walk(&start, 2 * start.rank(), &mut SplitMix64::new(seed))
}

fn targets(t: &Triangulation) -> Vec<cluster_surface::Arc> {
    match t.surface() {
        SurfaceSpec::Polygon { .. } => polygon_targets(t),
        _ => annulus_targets(t, 1),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn flips_are_involutions(seed: u64, annulus: bool, a in 1usize..4, b in 1usize..4) {
        let t = random_triangulation(seed, annulus, a, b);
        for k in 0..t.rank() {
            let (once, new_arc) = t.flip(k).unwrap();
            prop_assert!(new_arc.is_some());
            prop_assert!(!once.same_as(&t));
            prop_assert!(once.flip(k).unwrap().0.same_as(&t));
        }
    }

    #[test]
    fn matrices_are_skew_and_follow_flips(seed: u64, annulus: bool, a in 1usize..4, b in 1usize..4) {
        let t = random_triangulation(seed, annulus, a, b);
        let m = build_matrix(&t);
        prop_assert!(m.is_principal_skew_symmetric());
        prop_assert!(m.max_abs_entry() <= 2);
        for k in 0..t.rank() {
            prop_assert_eq!(build_matrix(&t.flip(k).unwrap().0), m.mutate(k));
        }
    }

    #[test]
    fn crossing_numbers_are_symmetric(seed: u64, annulus: bool, a in 1usize..4, b in 1usize..4) {
        let t = random_triangulation(seed, annulus, a, b);
        let arcs = targets(&t);
        for x in arcs.iter().take(8) {
            for y in arcs.iter().rev().take(8) {
                prop_assert_eq!(t.crossing_number(*x, *y).unwrap(), t.crossing_number(*y, *x).unwrap());
            }
            // arcs of the triangulation never cross each other
            for i in 0..t.rank() {
                let ti = t.arc(i).unwrap();
                prop_assert_eq!(t.crossing_number(ti, ti).unwrap(), 0);
            }
        }
    }

    #[test]
    fn json_round_trips(seed: u64, annulus: bool, a in 1usize..4, b in 1usize..4) {
        let t = random_triangulation(seed, annulus, a, b);
        let back = Triangulation::from_json(&t.to_json().unwrap()).unwrap();
        prop_assert!(back.same_as(&t));
        let cover = t.cover().unwrap();
        for g in targets(&t) {
            let v = arc_to_json(&cover, g);
            let h = arc_from_json(t.surface(), &v).unwrap();
            prop_assert_eq!(cover.canonical(h), cover.canonical(g));
        }
    }
}

#[test]
fn rejects_crossing_arcs() {
    let err = Triangulation::new(
        SurfaceSpec::Polygon { m: 5 },
        vec![cluster_surface::Arc::chord(0, 2), cluster_surface::Arc::chord(1, 3)],
    );
    assert_eq!(err.unwrap_err(), cluster_surface::SurfaceError::Crossing(1, 2));
}
