//! Seeded random instances and the fixed worked examples.
//!
//! Random triangulations come from flip walks starting at
//! [`Triangulation::standard`]; target arcs are drawn uniformly from the
//! arcs not in the triangulation. All randomness goes through
//! [`SplitMix64`] so that a `(seed, trial)` pair reproduces an instance
//! exactly on any platform.

use serde_json::json;

use crate::surface::{arc_from_json, Arc, Pt, SurfaceSpec, Triangulation};

/// The SplitMix64 generator (Steele, Lea and Flood).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    /// Independent stream for trial `index` of a run seeded with `seed`.
    pub fn for_trial(seed: u64, index: u64) -> Self {
        let mut base = SplitMix64::new(seed);
        let salt = base.next_u64();
        SplitMix64::new(salt ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish index in `0..len` (plain modulo reduction, so streams reproduce exactly).
    pub fn below(&mut self, len: usize) -> usize {
        assert!(len > 0, "empty range");
        (self.next_u64() % len as u64) as usize
    }

    /// Value in the inclusive range `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }
}

/// Random flip walk of `steps` flips from `t`.
pub fn flip_walk(t: &Triangulation, steps: usize, rng: &mut SplitMix64) -> Triangulation {
    let mut t = t.clone();
    for _ in 0..steps {
        let k = rng.below(t.rank());
        t = t.flip(k).expect("internal arcs are flippable").0;
    }
    t
}

/// Every arc of the polygon not in `t`.
pub fn polygon_targets(t: &Triangulation) -> Vec<Arc> {
    let SurfaceSpec::Polygon { m } = *t.surface() else {
        panic!("polygon expected")
    };
    let m = m as i64;
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 2..m {
            if i == 0 && j == m - 1 {
                continue;
            }
            let a = Arc::chord(i, j);
            if t.index_of(a).is_none() {
                out.push(a);
            }
        }
    }
    out
}

/// Arcs of the annulus not in `t`: bridging arcs `out i -> in j` whose
/// winding (in the JSON schema sense) is at most `max_winding` in absolute
/// value, and all peripheral arcs.
pub fn annulus_targets(t: &Triangulation, max_winding: i64) -> Vec<Arc> {
    let SurfaceSpec::Annulus { outer, inner } = *t.surface() else {
        panic!("annulus expected")
    };
    let (o, n) = (outer as i64, inner as i64);
    let mut out = Vec::new();
    for i in 0..o {
        for j in 0..n {
            for w in -max_winding..=max_winding {
                out.push(Arc::new(Pt::Out(i), Pt::In(j + w * n)));
            }
        }
    }
    for i in 0..o {
        for d in 2..=o {
            out.push(Arc::new(Pt::Out(i), Pt::Out(i + d)));
        }
    }
    for j in 0..n {
        for d in 2..=n {
            out.push(Arc::new(Pt::In(j), Pt::In(j + d)));
        }
    }
    out.retain(|&a| t.index_of(a).is_none());
    out
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub triangulation: Triangulation,
    pub targets: Vec<Arc>,
}

/// Random polygon with `min_m <= m <= max_m`, triangulated by a flip walk,
/// with every non-triangulation arc as a target.
pub fn random_polygon(rng: &mut SplitMix64, min_m: usize, max_m: usize) -> Instance {
    let m = rng.range(min_m, max_m);
    let start = Triangulation::standard(SurfaceSpec::Polygon { m }).expect("m >= 4");
    let triangulation = flip_walk(&start, 3 * start.rank(), rng);
    let targets = polygon_targets(&triangulation);
    Instance {
        triangulation,
        targets,
    }
}

/// Random annulus with `outer + inner <= max_m`, triangulated by a flip
/// walk from the zigzag, with one target drawn uniformly.
pub fn random_annulus(rng: &mut SplitMix64, max_m: usize, max_winding: i64) -> Instance {
    let mut pairs = Vec::new();
    for o in 1..max_m {
        for i in 1..=max_m - o {
            pairs.push((o, i));
        }
    }
    let (outer, inner) = pairs[rng.below(pairs.len())];
    let start = Triangulation::standard(SurfaceSpec::Annulus { outer, inner }).expect("valid");
    let triangulation = flip_walk(&start, start.rank(), rng);
    let all = annulus_targets(&triangulation, max_winding);
    let targets = vec![all[rng.below(all.len())]];
    Instance {
        triangulation,
        targets,
    }
}

/// The octagon example: vertices `0..8`, internal arcs
/// `τ1 = 3→1, τ2 = 5→3, τ3 = 5→1, τ4 = 1→7, τ5 = 7→5`, target `2 → 6`.
pub fn octagon_example() -> (Triangulation, Arc) {
    let arcs = vec![
        Arc::chord(3, 1),
        Arc::chord(5, 3),
        Arc::chord(5, 1),
        Arc::chord(1, 7),
        Arc::chord(7, 5),
    ];
    let t = Triangulation::new(SurfaceSpec::Polygon { m: 8 }, arcs).expect("valid octagon");
    (t, Arc::chord(2, 6))
}

/// The annulus example: two marked points on each boundary component and
/// target `out 0 -> in 0` winding once, crossing the triangulation five
/// times.
pub fn annulus_example() -> (Triangulation, Arc) {
    let surface = SurfaceSpec::Annulus { outer: 2, inner: 2 };
    let arc = |v: serde_json::Value| arc_from_json(&surface, &v).expect("valid arc");
    let arcs = vec![
        arc(json!({"from": ["in", 1], "to": ["out", 1], "winding": -1})),
        arc(json!({"from": ["out", 1], "to": ["in", 0], "winding": 0})),
        arc(json!({"from": ["in", 0], "to": ["out", 0], "winding": -1})),
        arc(json!({"from": ["out", 0], "to": ["in", 1], "winding": -1})),
    ];
    let gamma = arc(json!({"from": ["out", 0], "to": ["in", 0], "winding": 1}));
    let t = Triangulation::new(surface, arcs).expect("valid annulus");
    (t, gamma)
}

/// Annulus with one outer and two inner marked points where `τ2` and `τ3`
/// bound two triangles with the same orientation, so `b_23 = 2`.
pub fn double_edge_annulus() -> Triangulation {
    let arcs = vec![
        Arc::new(Pt::In(0), Pt::In(2)),
        Arc::new(Pt::Out(0), Pt::In(0)),
        Arc::new(Pt::Out(0), Pt::In(2)),
    ];
    Triangulation::new(SurfaceSpec::Annulus { outer: 1, inner: 2 }, arcs).expect("valid annulus")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 0 / 1234567 of the reference implementation.
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        let mut r = SplitMix64::new(1234567);
        assert_eq!(r.next_u64(), 6457827717110365317);
        assert_eq!(r.next_u64(), 3203168211198807973);
    }

    #[test]
    fn trial_streams_are_reproducible() {
        let a = random_polygon(&mut SplitMix64::for_trial(7, 3), 5, 9);
        let b = random_polygon(&mut SplitMix64::for_trial(7, 3), 5, 9);
        assert!(a.triangulation.same_as(&b.triangulation));
        assert_eq!(a.targets, b.targets);
    }

    #[test]
    fn polygon_target_count() {
        let t = Triangulation::standard(SurfaceSpec::Polygon { m: 7 }).unwrap();
        // 14 diagonals, 4 of them in the triangulation
        assert_eq!(polygon_targets(&t).len(), 10);
    }
}
