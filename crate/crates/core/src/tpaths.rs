//! T-paths and the T-path expansion of cluster variables.
//!
//! A T-path for an arc `γ` is an odd-length walk along arcs of the
//! triangulation from the start of `γ` to its end whose even steps cross
//! `γ` at strictly increasing crossing points. Enumeration happens on the
//! cover fragment of `γ` (the triangles of the lifted triangulation crossed
//! by a fixed lift of `γ`), where the homotopy condition is automatic and no
//! arc can be used twice.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::laurent::{Exponents, LaurentPoly};
use crate::surface::{Arc, Cover, Crossing, Pt, Result, SurfaceError, Triangulation};

/// One directed step of a path: arc index (0-based) and direction relative
/// to the arc's stored orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub arc: usize,
    pub forward: bool,
}

impl Step {
    /// Display label, `t7` or `t7-` for the reversed arc.
    pub fn label(&self) -> String {
        format!("t{}{}", self.arc + 1, if self.forward { "" } else { "-" })
    }

    pub fn parse(s: &str) -> Option<Step> {
        let body = s.strip_prefix('t')?;
        let (num, forward) = match body.strip_suffix('-') {
            Some(b) => (b, false),
            None => (body, true),
        };
        let i: usize = num.parse().ok()?;
        (i >= 1).then(|| Step {
            arc: i - 1,
            forward,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TPath {
    pub steps: Vec<Step>,
    /// Crossing labels (1-based, along `γ`) used by the even steps.
    pub witness: Vec<usize>,
    /// Cover vertices visited, starting at the lifted start of `γ`.
    pub lift: Vec<Pt>,
}

impl TPath {
    pub fn labels(&self) -> Vec<String> {
        self.steps.iter().map(Step::label).collect()
    }

    /// The monomial: odd-step variables over even-step variables.
    pub fn weight(&self) -> LaurentPoly {
        path_weight(&self.steps)
    }
}

impl fmt::Display for TPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.labels().join(","))
    }
}

pub fn path_weight(steps: &[Step]) -> LaurentPoly {
    let e = Exponents::from_pairs(
        steps
            .iter()
            .enumerate()
            .map(|(i, s)| (s.arc as u32 + 1, if i % 2 == 0 { 1 } else { -1 })),
    );
    LaurentPoly::monomial(BigInt::one(), e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FragmentEdge {
    /// The chord in the cover, oriented along the underlying arc.
    pub chord: Arc,
    pub arc: usize,
    /// Crossing label along `γ` (1-based) for crossed arcs.
    pub label: Option<usize>,
}

/// The triangulated polygon of lifted triangles crossed by a lift of `γ`.
#[derive(Clone, Debug)]
pub struct CoverFragment {
    pub cover: Cover,
    pub gamma: Arc,
    /// Crossed arcs in order along `γ`, oriented from the clockwise side.
    pub crossings: Vec<Crossing>,
    /// Polygon vertices in clockwise order starting at the start of `γ`.
    pub vertices: Vec<Pt>,
    /// Crossed chords first (edge `i` has label `i + 1`), then polygon sides
    /// in vertex order (side `j` joins `vertices[j]` and `vertices[j+1]`).
    pub edges: Vec<FragmentEdge>,
    /// Triangles along `γ`, each as a vertex triple.
    pub triangles: Vec<[Pt; 3]>,
}

impl CoverFragment {
    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn sides(&self) -> &[FragmentEdge] {
        &self.edges[self.crossings.len()..]
    }

    /// Arc indices of `X_γ`: crossed arcs and sides of crossed triangles.
    pub fn arc_set(&self) -> std::collections::BTreeSet<usize> {
        self.edges.iter().map(|e| e.arc).collect()
    }
}

fn oriented_edge(t: &Triangulation, chord: Arc) -> Result<(usize, Arc)> {
    let (idx, fwd) = t
        .identify(chord)
        .ok_or_else(|| SurfaceError::Malformed(format!("fragment side {chord} is not an arc")))?;
    Ok((idx, if fwd { chord } else { chord.reversed() }))
}

/// Builds the cover fragment of the chord `gamma`, which must cross at
/// least one arc of `t`.
pub fn build_cover_fragment(t: &Triangulation, gamma: Arc) -> Result<CoverFragment> {
    let cover = t.cover().ok_or(SurfaceError::Unsupported)?;
    let crossings = t.crossings(gamma)?;
    if crossings.is_empty() {
        return Err(SurfaceError::InvalidArc(format!(
            "{gamma} crosses no arc of the triangulation"
        )));
    }
    let (a, b) = (gamma.start, gamma.end);
    let mut vertices: Vec<Pt> = vec![a, b];
    for c in &crossings {
        vertices.push(c.chord.start);
        vertices.push(c.chord.end);
    }
    let pos = |w: Pt| {
        let k = cover.key(w);
        (k < cover.key(a), k)
    };
    vertices.sort_by_key(|&w| pos(w));
    vertices.dedup();

    let mut edges = Vec::new();
    for (i, c) in crossings.iter().enumerate() {
        let (arc, chord) = oriented_edge(t, c.chord)?;
        debug_assert_eq!(arc, c.arc);
        edges.push(FragmentEdge {
            chord,
            arc,
            label: Some(i + 1),
        });
    }
    for j in 0..vertices.len() {
        let side = Arc::new(vertices[j], vertices[(j + 1) % vertices.len()]);
        let (arc, chord) = oriented_edge(t, side)?;
        edges.push(FragmentEdge {
            chord,
            arc,
            label: None,
        });
    }

    let k = crossings.len();
    let mut triangles = Vec::with_capacity(k + 1);
    let first = crossings[0].chord;
    triangles.push([a, first.start, first.end]);
    for w in crossings.windows(2) {
        let (p, q) = (w[0].chord, w[1].chord);
        let third = if p.has_endpoint(q.start) { q.end } else { q.start };
        triangles.push([p.start, p.end, third]);
    }
    let last = crossings[k - 1].chord;
    triangles.push([last.start, last.end, b]);

    Ok(CoverFragment {
        cover,
        gamma,
        crossings,
        vertices,
        edges,
        triangles,
    })
}

struct Search<'a> {
    frag: &'a CoverFragment,
    adj: HashMap<Pt, Vec<usize>>,
    used: Vec<bool>,
    steps: Vec<Step>,
    witness: Vec<usize>,
    lift: Vec<Pt>,
}

impl<'a> Search<'a> {
    fn new(frag: &'a CoverFragment) -> Self {
        let mut adj: HashMap<Pt, Vec<usize>> = HashMap::new();
        for (i, e) in frag.edges.iter().enumerate() {
            adj.entry(e.chord.start).or_default().push(i);
            adj.entry(e.chord.end).or_default().push(i);
        }
        Search {
            frag,
            adj,
            used: vec![false; frag.edges.len()],
            steps: Vec::new(),
            witness: Vec::new(),
            lift: vec![frag.gamma.start],
        }
    }

    fn run(&mut self, visit: &mut dyn FnMut(&Search<'_>)) {
        let here = *self.lift.last().unwrap();
        let odd_next = self.steps.len() % 2 == 0;
        let last_label = self.witness.last().copied().unwrap_or(0);
        let candidates = self.adj.get(&here).cloned().unwrap_or_default();
        for ei in candidates {
            if self.used[ei] {
                continue;
            }
            let e = self.frag.edges[ei];
            if !odd_next && !matches!(e.label, Some(l) if l > last_label) {
                continue;
            }
            let forward = e.chord.start == here;
            let next = e.chord.other(here);
            self.used[ei] = true;
            self.steps.push(Step { arc: e.arc, forward });
            self.lift.push(next);
            if !odd_next {
                self.witness.push(e.label.unwrap());
            }
            if odd_next && next == self.frag.gamma.end {
                visit(self);
            }
            self.run(visit);
            if !odd_next {
                self.witness.pop();
            }
            self.lift.pop();
            self.steps.pop();
            self.used[ei] = false;
        }
    }
}

/// Calls `visit` on every T-path of the fragment, in a fixed order.
pub fn for_each_tpath(frag: &CoverFragment, mut visit: impl FnMut(&[Step], &[usize], &[Pt])) {
    let mut s = Search::new(frag);
    s.run(&mut |s| visit(&s.steps, &s.witness, &s.lift));
}

/// All T-paths of `gamma` (a cover lift of the target arc). For a
/// triangulation or boundary arc this is the single path `(γ)`.
pub fn enumerate_tpaths(t: &Triangulation, gamma: Arc) -> Result<Vec<TPath>> {
    let cover = t.cover().ok_or(SurfaceError::Unsupported)?;
    cover.check_arc(gamma)?;
    if let Some((arc, forward)) = t.identify(gamma) {
        return Ok(vec![TPath {
            steps: vec![Step { arc, forward }],
            witness: vec![],
            lift: vec![gamma.start, gamma.end],
        }]);
    }
    let frag = build_cover_fragment(t, gamma)?;
    let mut out = Vec::new();
    for_each_tpath(&frag, |steps, witness, lift| {
        out.push(TPath {
            steps: steps.to_vec(),
            witness: witness.to_vec(),
            lift: lift.to_vec(),
        })
    });
    Ok(out)
}

/// `x_γ = Σ_α x(α)` over all T-paths.
pub fn expand_theorem1(t: &Triangulation, gamma: Arc) -> Result<LaurentPoly> {
    let cover = t.cover().ok_or(SurfaceError::Unsupported)?;
    cover.check_arc(gamma)?;
    if let Some((arc, _)) = t.identify(gamma) {
        return Ok(LaurentPoly::var(arc as u32 + 1));
    }
    let frag = build_cover_fragment(t, gamma)?;
    let mut counts: HashMap<Vec<usize>, u64> = HashMap::new();
    for_each_tpath(&frag, |steps, _, _| {
        let mut key: Vec<usize> = steps
            .iter()
            .enumerate()
            .map(|(i, s)| 2 * s.arc + (i % 2))
            .collect();
        key.sort_unstable();
        *counts.entry(key).or_insert(0) += 1;
    });
    let mut out = LaurentPoly::zero();
    for (key, c) in counts {
        let e = Exponents::from_pairs(
            key.iter()
                .map(|&k| ((k / 2) as u32 + 1, if k % 2 == 0 { 1 } else { -1 })),
        );
        out.add_term(e, BigInt::from(c));
    }
    Ok(out)
}

/// Checks the T-path axioms for a projected path independently of the
/// enumerator: odd length, reduced, head-to-tail, even steps crossing `γ`
/// at strictly increasing labels within the crossing budget, and the lift
/// from the start of `γ` ending at its end with each even step on the
/// labelled crossing.
pub fn validate_tpath(
    t: &Triangulation,
    gamma: Arc,
    steps: &[Step],
    witness: &[usize],
) -> std::result::Result<(), String> {
    let cover = t.cover().ok_or("general surfaces have no cover")?;
    if steps.len() % 2 == 0 {
        return Err("even length".into());
    }
    if witness.len() != steps.len() / 2 {
        return Err("witness length differs from the number of even steps".into());
    }
    if witness.windows(2).any(|w| w[0] >= w[1]) {
        return Err("witness not strictly increasing".into());
    }
    for w in steps.windows(2) {
        if w[0].arc == w[1].arc && w[0].forward != w[1].forward {
            return Err("path is not reduced".into());
        }
    }
    let crossings = t.crossings(gamma).map_err(|e| e.to_string())?;
    let mut budget: HashMap<usize, usize> = HashMap::new();
    for c in &crossings {
        *budget.entry(c.arc).or_insert(0) += 1;
    }
    let mut here = gamma.start;
    for (i, s) in steps.iter().enumerate() {
        let a = t.arc(s.arc).ok_or("arc index out of range")?;
        let (from, to) = if s.forward { (a.start, a.end) } else { (a.end, a.start) };
        if cover.marked_index(from) != cover.marked_index(here) {
            return Err(format!("step {} does not start where step {} ended", i + 1, i));
        }
        let k = cover.period(here) - cover.period(from);
        let next = cover.shift(to, k);
        if i % 2 == 1 {
            let label = witness[i / 2];
            let c = crossings
                .get(label.wrapping_sub(1))
                .ok_or("witness label out of range")?;
            let chord = Arc::new(here, next);
            if c.arc != s.arc || (c.chord != chord && c.chord != chord.reversed()) {
                return Err(format!("even step {} is not on crossing {label}", i + 1));
            }
            let b = budget.get_mut(&s.arc).ok_or("even step does not cross γ")?;
            if *b == 0 {
                return Err(format!("t{} used more often than it crosses γ", s.arc + 1));
            }
            *b -= 1;
        }
        here = next;
    }
    if here != gamma.end {
        return Err("lifted path does not end at the end of γ".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::SurfaceSpec;

    #[test]
    fn square_has_two_paths() {
        let t = Triangulation::new(SurfaceSpec::Polygon { m: 4 }, vec![Arc::chord(0, 2)]).unwrap();
        let paths = enumerate_tpaths(&t, Arc::chord(1, 3)).unwrap();
        assert_eq!(paths.len(), 2);
        for p in &paths {
            assert_eq!(p.steps.len(), 3);
            validate_tpath(&t, Arc::chord(1, 3), &p.steps, &p.witness).unwrap();
        }
        let x = expand_theorem1(&t, Arc::chord(1, 3)).unwrap();
        // boundary arcs: t2={0,1}, t3={1,2}, t4={2,3}, t5={3,0}
        assert_eq!(x, "x1^-1*x2*x4 + x1^-1*x3*x5".parse().unwrap());
    }

    #[test]
    fn arc_in_triangulation_is_a_single_path() {
        let t = Triangulation::standard(SurfaceSpec::Polygon { m: 6 }).unwrap();
        let paths = enumerate_tpaths(&t, Arc::chord(3, 0)).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].labels(), vec!["t2-"]);
        assert_eq!(expand_theorem1(&t, Arc::chord(0, 3)).unwrap(), LaurentPoly::var(2));
    }

    #[test]
    fn one_crossing_fragment_is_a_quadrilateral() {
        let t = Triangulation::standard(SurfaceSpec::Polygon { m: 5 }).unwrap();
        let f = build_cover_fragment(&t, Arc::chord(1, 3)).unwrap();
        assert_eq!(f.num_crossings(), 1);
        assert_eq!(f.vertices.len(), 4);
        assert_eq!(f.triangles.len(), 2);
    }

    #[test]
    fn step_labels_round_trip() {
        for s in ["t7-", "t11", "t1"] {
            assert_eq!(Step::parse(s).unwrap().label(), s);
        }
        assert!(Step::parse("t0").is_none());
        assert!(Step::parse("x3").is_none());
    }
}
