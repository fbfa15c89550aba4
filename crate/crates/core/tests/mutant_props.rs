use std::collections::BTreeSet;

use cluster_surface::instances::{octagon_example, random_annulus, random_polygon, SplitMix64};
use cluster_surface::mutant::{
    build_context, check_decomposition, enumerate_gpaths, expand_theorem2_ctx, recurrence_rhs,
    recurrence_vertices, sign_exponent, substitute_mutants, Decomposition, GKind,
};
use cluster_surface::tpaths::expand_theorem1;

#[test]
fn octagon_context() {
    let (t, g) = octagon_example();
    let ctx = build_context(&t, g).unwrap();
    assert_eq!(ctx.num_internal(), 3);
    assert_eq!(ctx.e_arcs().len(), 2);
    assert_eq!(ctx.mutant_arcs().len(), 3);
    for (i, m) in ctx.mutant_arcs().into_iter().enumerate() {
        let crossed: Vec<usize> = ctx.internal_crossing(m.start, m.end);
        assert_eq!(crossed, vec![i]);
    }
    let x2 = expand_theorem2_ctx(&ctx);
    assert_eq!(substitute_mutants(&t, &x2).unwrap(), expand_theorem1(&t, g).unwrap());
}

#[test]
fn gpath_conditions_hold() {
    for i in 0..10 {
        let inst = random_polygon(&mut SplitMix64::for_trial(21, i), 5, 10);
        let t = &inst.triangulation;
        for &g in &inst.targets {
            let ctx = build_context(t, g).unwrap();
            for p in enumerate_gpaths(&ctx) {
                assert_eq!(p.steps.len() % 2, 1);
                assert_eq!(p.vertices[0], g.start);
                assert_eq!(*p.vertices.last().unwrap(), g.end);
                assert!(!p.vertices[1..].contains(&g.start));
                assert!(!p.vertices[..p.vertices.len() - 1].contains(&g.end));
                let mut last = None;
                for (j, s) in p.steps.iter().enumerate() {
                    let e = ctx.edges[s.edge];
                    if j % 2 == 1 {
                        assert!(matches!(e.kind, GKind::Side { in_e: true }));
                    }
                    match e.kind {
                        GKind::Internal(k) | GKind::Mutant(k) => {
                            assert!(last.is_none_or(|l| l < k));
                            last = Some(k);
                            if let GKind::Mutant(_) = e.kind {
                                assert!(s.forward);
                            } else {
                                assert!(ctx.ibar[k]);
                            }
                        }
                        GKind::Side { .. } => {}
                    }
                }
                let distinct: BTreeSet<usize> = p.steps.iter().map(|s| s.edge).collect();
                assert_eq!(distinct.len(), p.steps.len());
                let _ = sign_exponent(&ctx, &p);
            }
        }
    }
}

#[test]
fn recurrence_and_decompositions() {
    let mut seen = BTreeSet::new();
    for i in 0..40 {
        let inst = if i % 2 == 0 {
            random_polygon(&mut SplitMix64::for_trial(22, i), 5, 10)
        } else {
            random_annulus(&mut SplitMix64::for_trial(22, i), 5, 1)
        };
        let t = &inst.triangulation;
        for &g in &inst.targets {
            let ctx = build_context(t, g).unwrap();
            let x1 = expand_theorem1(t, g).unwrap();
            let x2 = expand_theorem2_ctx(&ctx);
            assert_eq!(substitute_mutants(t, &x2).unwrap(), x1, "{g}");
            let (_, den) = x2.reduced_fraction_form().unwrap();
            let e: BTreeSet<u32> = ctx.e_arcs().iter().map(|&a| a as u32 + 1).collect();
            assert!(den.iter().all(|(v, _)| e.contains(&v)), "{g}: {den}");
            if recurrence_vertices(&ctx).is_none() {
                continue;
            }
            let rhs = recurrence_rhs(t, &ctx).unwrap();
            assert_eq!(substitute_mutants(t, &rhs).unwrap(), x1, "{g}");
            let kind = check_decomposition(t, &ctx).unwrap_or_else(|e| panic!("{g}: {e}"));
            seen.insert(format!("{:?}", kind.unwrap()));
        }
    }
    // both shapes occur
    assert!(seen.contains(&format!("{:?}", Decomposition::DegreeTwo)));
    assert!(seen.contains(&format!("{:?}", Decomposition::Higher)));
}
