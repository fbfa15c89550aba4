use cluster_surface::instances::{random_annulus, random_polygon, SplitMix64};
use cluster_surface::oracle::{
    exchange_rhs, expand_mutation_sequence, expand_recursive, five_arcs, five_arcs_with,
};
use cluster_surface::surface::quadrilateral_of;
use cluster_surface::tpaths::{enumerate_tpaths, expand_theorem1};
use cluster_surface::{Arc, LaurentPoly, Triangulation};

fn instances() -> Vec<cluster_surface::instances::Instance> {
    let mut v: Vec<_> = (0..12)
        .map(|i| random_polygon(&mut SplitMix64::for_trial(11, i), 4, 9))
        .collect();
    v.extend((0..30).map(|i| random_annulus(&mut SplitMix64::for_trial(12, i), 5, 2)));
    v
}

fn var_of(t: &Triangulation, a: Arc) -> LaurentPoly {
    match t.identify(a) {
        Some((i, _)) => LaurentPoly::var(i as u32 + 1),
        None => expand_theorem1(t, a).unwrap(),
    }
}

#[test]
fn first_step_leaves_the_first_triangle() {
    for inst in instances() {
        let t = &inst.triangulation;
        for &g in &inst.targets {
            let q = quadrilateral_of(t, g).unwrap();
            let allowed = [t.identify(q.tau1).unwrap().0, t.identify(q.tau3).unwrap().0];
            for p in enumerate_tpaths(t, g).unwrap() {
                assert!(allowed.contains(&p.steps[0].arc), "{g}: {p}");
            }
        }
    }
}

#[test]
fn quadrilateral_exchange_identity() {
    let mut checked = 0;
    for inst in instances() {
        let t = &inst.triangulation;
        let cover = t.cover().unwrap();
        for &g in &inst.targets {
            let q = quadrilateral_of(t, g).unwrap();
            // In an annulus the far sides may wind past a boundary.
            if [q.rho, q.sigma].iter().any(|&a| cover.check_arc(a).is_err()) {
                continue;
            }
            checked += 1;
            let lhs = &expand_theorem1(t, g).unwrap() * &var_of(t, q.tau2);
            assert_eq!(lhs, exchange_rhs(t, &q).unwrap(), "{g}");
        }
    }
    assert!(checked > 40);
}

#[test]
fn every_reducing_choice_of_tau_gives_the_same_exchange() {
    let mut checked = 0;
    for inst in instances() {
        let t = &inst.triangulation;
        for &g in &inst.targets {
            let k = t.crossing_count(g).unwrap();
            if k < 2 {
                continue;
            }
            let x = expand_theorem1(t, g).unwrap();
            let mut arcs: Vec<usize> = t.crossings(g).unwrap().iter().map(|c| c.arc).collect();
            arcs.dedup();
            for tau in arcs {
                let f = five_arcs_with(t, g, tau).unwrap();
                let valid = f.all().iter().all(|&a| {
                    t.cover().unwrap().check_arc(a).is_ok() && t.crossing_count(a).unwrap() < k
                });
                if !valid {
                    continue;
                }
                checked += 1;
                let lhs = &x * &var_of(t, f.beta_prime);
                let rhs = &(&var_of(t, f.rho1) * &var_of(t, f.rho2))
                    + &(&var_of(t, f.sigma1) * &var_of(t, f.sigma2));
                assert_eq!(lhs, rhs, "{g} with t{}", tau + 1);
                assert_eq!(t.crossing_number(g, f.beta_prime).unwrap(), 1, "{g}");
            }
            let chosen = five_arcs(t, g).unwrap();
            assert!(chosen.all().iter().all(|&a| t.crossing_count(a).unwrap() < k));
        }
    }
    assert!(checked > 100);
}

#[test]
fn recursion_matches_mutation_sequences_on_polygons() {
    for i in 0..8 {
        let inst = random_polygon(&mut SplitMix64::for_trial(13, i), 5, 9);
        let t = &inst.triangulation;
        for &g in &inst.targets {
            assert_eq!(expand_recursive(t, g).unwrap(), expand_mutation_sequence(t, g).unwrap());
        }
    }
}

#[test]
fn arcs_of_the_triangulation_expand_to_themselves() {
    for inst in instances() {
        let t = &inst.triangulation;
        for i in 0..t.rank() {
            let a = t.arc(i).unwrap();
            assert_eq!(expand_recursive(t, a).unwrap(), LaurentPoly::var(i as u32 + 1));
            assert_eq!(expand_theorem1(t, a).unwrap(), LaurentPoly::var(i as u32 + 1));
        }
    }
}
