//! Signed expansion of `x_AB` over paths through mutant arcs.
//!
//! Everything happens inside the cover fragment `P_AB` of the chord `AB`.
//! Its internal arcs `I^0, I^1, ...` are the crossed arcs in order along
//! `AB`; the mutant arc `M^i` is the other diagonal of the quadrilateral
//! around `I^i`. A G-path is an odd-length walk from `A` to `B` along
//! sides of `P_AB`, arcs of `Ī` (internal arcs joining vertices of
//! `I`-degree at least two) and forward mutant arcs, with every even step
//! on `E` (third sides of the interior triangles) and `Ī ∪ M` used in
//! increasing index. Its sign exponent counts backward sides, half the
//! length minus one, and the arcs of `I` crossing the chord between the
//! path's endpoints that are traversed against the direction of the chain.
//!
//! The variable of `M^i` is `x_{n+m+j+1}` where `τ_{j+1}` is the arc below
//! `I^i`, so it is shared by all lifts of the same arc.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::laurent::{Exponents, LaurentPoly};
use crate::oracle::{flipped_variable, OracleError};
use crate::surface::{Arc, Cover, Pt, SurfaceError, Triangulation};
use crate::tpaths::{build_cover_fragment, CoverFragment};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GKind {
    /// Side of `P_AB`; `in_e` marks membership of `E_AB`.
    Side { in_e: bool },
    /// Internal arc `I^i`.
    Internal(usize),
    /// Mutant arc `M^i`.
    Mutant(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GEdge {
    /// Sides point from `A` towards `B`, mutant arcs from the `A` side of
    /// `I^i` to the `B` side, and `I^i` from its endpoint on `I^{i-1}`.
    pub chord: Arc,
    pub kind: GKind,
    /// Underlying arc index; for mutants, the index of the flipped arc.
    pub arc: usize,
}

#[derive(Clone, Debug)]
pub struct MutantContext {
    pub cover: Cover,
    pub gamma: Arc,
    pub n: usize,
    pub m: usize,
    pub fragment: CoverFragment,
    /// Side edges, then `I^i` for all `i`, then `M^i` for all `i`.
    pub edges: Vec<GEdge>,
    /// For each `I^i`, whether it belongs to `Ī_AB`.
    pub ibar: Vec<bool>,
    adj: HashMap<Pt, Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GStep {
    pub edge: usize,
    pub forward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GPath {
    pub steps: Vec<GStep>,
    /// Cover vertices visited.
    pub vertices: Vec<Pt>,
}

impl MutantContext {
    pub fn num_internal(&self) -> usize {
        self.fragment.crossings.len()
    }

    pub fn internal_edge(&self, i: usize) -> &GEdge {
        &self.edges[self.fragment.sides().len() + i]
    }

    pub fn mutant_edge(&self, i: usize) -> &GEdge {
        &self.edges[self.fragment.sides().len() + self.num_internal() + i]
    }

    pub fn mutant_arcs(&self) -> Vec<Arc> {
        (0..self.num_internal()).map(|i| self.mutant_edge(i).chord).collect()
    }

    /// Arc indices of the sides in `E_AB`.
    pub fn e_arcs(&self) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter(|e| matches!(e.kind, GKind::Side { in_e: true }))
            .map(|e| e.arc)
            .collect()
    }

    /// Number of the variable carried by an edge.
    pub fn variable(&self, e: &GEdge) -> u32 {
        match e.kind {
            GKind::Mutant(_) => (self.n + self.m + e.arc + 1) as u32,
            _ => e.arc as u32 + 1,
        }
    }

    /// Arcs of `I` (as `I^i` indices) crossing the chord from `c` to `d`.
    pub fn internal_crossing(&self, c: Pt, d: Pt) -> Vec<usize> {
        (0..self.num_internal())
            .filter(|&i| self.cover.chords_cross(Arc::new(c, d), self.internal_edge(i).chord))
            .collect()
    }

    pub fn weight(&self, p: &GPath) -> LaurentPoly {
        let e = Exponents::from_pairs(p.steps.iter().enumerate().map(|(i, s)| {
            (
                self.variable(&self.edges[s.edge]),
                if i % 2 == 0 { 1 } else { -1 },
            )
        }));
        LaurentPoly::monomial(BigInt::one(), e)
    }

    /// Display label of a step: `tJ`/`tJ-` for triangulation and boundary
    /// arcs (direction relative to the arc), `mJ` for the mutant of `τ_J`.
    pub fn step_label(&self, t: &Triangulation, s: &GStep) -> String {
        let e = &self.edges[s.edge];
        match e.kind {
            GKind::Mutant(_) => format!("m{}", e.arc + 1),
            _ => {
                let chord = if s.forward { e.chord } else { e.chord.reversed() };
                let (_, fwd) = t.identify(chord).expect("fragment edge is an arc");
                format!("t{}{}", e.arc + 1, if fwd { "" } else { "-" })
            }
        }
    }
}

impl fmt::Display for GPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.vertices.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", v.join(" "))
    }
}

/// Builds `P_AB` with its internal, mutant, side and `E` arcs for a chord
/// `gamma = A -> B` crossing the triangulation.
pub fn build_context(t: &Triangulation, gamma: Arc) -> Result<MutantContext, SurfaceError> {
    let frag = build_cover_fragment(t, gamma)?;
    let cover = frag.cover;
    let (a, b) = (gamma.start, gamma.end);
    let k = frag.crossings.len();
    let verts = &frag.vertices;
    let jb = verts.iter().position(|&v| v == b).expect("B is a vertex");

    // Third sides of the interior triangles Δ_1..Δ_{k-1}.
    let mut e_chords = BTreeSet::new();
    for w in frag.crossings.windows(2) {
        let (p, q) = (w[0].chord, w[1].chord);
        let shared = if q.has_endpoint(p.start) { p.start } else { p.end };
        let third = Arc::new(p.other(shared), q.other(shared));
        e_chords.insert(cover.canonical(third));
    }

    let mut edges = Vec::new();
    for j in 0..verts.len() {
        let (x, y) = (verts[j], verts[(j + 1) % verts.len()]);
        let chord = if j < jb { Arc::new(x, y) } else { Arc::new(y, x) };
        let (arc, _) = t.identify(chord).expect("fragment side is an arc");
        edges.push(GEdge {
            chord,
            kind: GKind::Side {
                in_e: e_chords.contains(&cover.canonical(chord)),
            },
            arc,
        });
    }
    for (i, fe) in frag.edges[..k].iter().enumerate() {
        // Orient along the chain of internal arcs, away from I^{i-1}.
        let mut chord = fe.chord;
        if i > 0 && !frag.crossings[i - 1].chord.has_endpoint(chord.start) {
            chord = chord.reversed();
        }
        edges.push(GEdge {
            chord,
            kind: GKind::Internal(i),
            arc: fe.arc,
        });
    }
    let apex = |tri: &[Pt; 3], c: Arc| *tri.iter().find(|&&p| !c.has_endpoint(p)).unwrap();
    for i in 0..k {
        let c = frag.crossings[i].chord;
        let from = apex(&frag.triangles[i], c);
        let to = apex(&frag.triangles[i + 1], c);
        edges.push(GEdge {
            chord: Arc::new(from, to),
            kind: GKind::Mutant(i),
            arc: frag.crossings[i].arc,
        });
    }

    let mut degree: HashMap<Pt, usize> = HashMap::new();
    for c in &frag.crossings {
        *degree.entry(c.chord.start).or_default() += 1;
        *degree.entry(c.chord.end).or_default() += 1;
    }
    let ibar = frag
        .crossings
        .iter()
        .map(|c| degree[&c.chord.start] >= 2 && degree[&c.chord.end] >= 2)
        .collect();

    let mut adj: HashMap<Pt, Vec<usize>> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        adj.entry(e.chord.start).or_default().push(i);
        adj.entry(e.chord.end).or_default().push(i);
    }
    Ok(MutantContext {
        cover,
        gamma: Arc::new(a, b),
        n: t.rank(),
        m: t.num_boundary(),
        fragment: frag,
        edges,
        ibar,
        adj,
    })
}

struct Walk<'c> {
    ctx: &'c MutantContext,
    used: Vec<bool>,
    steps: Vec<GStep>,
    vertices: Vec<Pt>,
    out: Vec<GPath>,
}

impl Walk<'_> {
    fn run(&mut self, cursor: Option<usize>) {
        let ctx = self.ctx;
        let here = *self.vertices.last().unwrap();
        let odd_next = self.steps.len() % 2 == 0;
        for &ei in ctx.adj.get(&here).map(Vec::as_slice).unwrap_or(&[]) {
            if self.used[ei] {
                continue;
            }
            let e = ctx.edges[ei];
            let forward = e.chord.start == here;
            let mut next_cursor = cursor;
            match e.kind {
                GKind::Side { in_e } => {
                    if !odd_next && !in_e {
                        continue;
                    }
                }
                GKind::Internal(i) | GKind::Mutant(i) => {
                    if !odd_next || cursor.is_some_and(|c| i <= c) {
                        continue;
                    }
                    if let GKind::Internal(i) = e.kind {
                        if !ctx.ibar[i] {
                            continue;
                        }
                    } else if !forward {
                        continue;
                    }
                    next_cursor = Some(i);
                }
            }
            let next = e.chord.other(here);
            if next == ctx.gamma.start {
                continue;
            }
            self.used[ei] = true;
            self.steps.push(GStep { edge: ei, forward });
            self.vertices.push(next);
            if next == ctx.gamma.end {
                if odd_next {
                    self.out.push(GPath {
                        steps: self.steps.clone(),
                        vertices: self.vertices.clone(),
                    });
                }
            } else {
                self.run(next_cursor);
            }
            self.vertices.pop();
            self.steps.pop();
            self.used[ei] = false;
        }
    }
}

/// Paths from `start` to `B` satisfying the G-conditions of the context
/// (for `start = A` this is `G_AB`).
pub fn enumerate_from(ctx: &MutantContext, start: Pt) -> Vec<GPath> {
    if start == ctx.gamma.end {
        return Vec::new();
    }
    let mut w = Walk {
        ctx,
        used: vec![false; ctx.edges.len()],
        steps: Vec::new(),
        vertices: vec![start],
        out: Vec::new(),
    };
    w.run(None);
    w.out
}

pub fn enumerate_gpaths(ctx: &MutantContext) -> Vec<GPath> {
    enumerate_from(ctx, ctx.gamma.start)
}

/// `k(γ)`: backward sides, plus `(ℓ-1)/2`, plus arcs of `I_CD` (internal
/// arcs crossing the chord between the path's own endpoints) used against
/// the order of the chain `I^0, I^1, ...`.
///
/// Counting every `I_CD` arc regardless of direction breaks the expansion
/// as soon as a path reaches `Ī` through the far side of `V_1 V_2`;
/// internal arcs behave like sides here, with an orientation from `A`
/// towards `B` along the chain.
pub fn sign_exponent(ctx: &MutantContext, p: &GPath) -> usize {
    let (c, d) = (p.vertices[0], *p.vertices.last().unwrap());
    let icd: BTreeSet<usize> = ctx.internal_crossing(c, d).into_iter().collect();
    let mut k = (p.steps.len() - 1) / 2;
    for s in &p.steps {
        match ctx.edges[s.edge].kind {
            GKind::Side { .. } if !s.forward => k += 1,
            GKind::Internal(i) if !s.forward && icd.contains(&i) => k += 1,
            _ => {}
        }
    }
    k
}

/// `∫ A = Σ (-1)^{k(γ)} x(γ)` over a set of paths.
pub fn signed_sum(ctx: &MutantContext, paths: &[GPath]) -> LaurentPoly {
    let mut out = LaurentPoly::zero();
    for p in paths {
        let w = ctx.weight(p);
        out = if sign_exponent(ctx, p) % 2 == 0 {
            &out + &w
        } else {
            &out - &w
        };
    }
    out
}

pub fn expand_theorem2_ctx(ctx: &MutantContext) -> LaurentPoly {
    signed_sum(ctx, &enumerate_gpaths(ctx))
}

/// `x_AB` in the variables of `X_AB` and the mutant variables.
pub fn expand_theorem2(t: &Triangulation, gamma: Arc) -> Result<LaurentPoly, SurfaceError> {
    if let Some((i, _)) = t.identify(gamma) {
        return Ok(LaurentPoly::var(i as u32 + 1));
    }
    Ok(expand_theorem2_ctx(&build_context(t, gamma)?))
}

/// Replaces each mutant variable by the one-step exchange expression of
/// the flipped arc.
pub fn substitute_mutants(t: &Triangulation, p: &LaurentPoly) -> Result<LaurentPoly, OracleError> {
    let base = (t.rank() + t.num_boundary()) as u32;
    let mut out = p.clone();
    for v in p.support() {
        if v > base {
            let j = (v - base - 1) as usize;
            let value = flipped_variable(t, j)?;
            out = out
                .substitute(v, &value)
                .map_err(|e| OracleError::Division("mutant substitution".into(), e))?;
        }
    }
    Ok(out)
}

/// The vertices `V_0, V_1, V_2, V_3` around `A` used by the recurrence:
/// `V_0` is the endpoint of `I^0` on `I^1`, `V_1` the other endpoint,
/// `V_2` the next vertex after `V_1` away from `A` and `V_3` the next
/// vertex after `V_0` away from `A`. Needs at least two internal arcs.
pub fn recurrence_vertices(ctx: &MutantContext) -> Option<[Pt; 4]> {
    if ctx.num_internal() < 2 {
        return None;
    }
    let i0 = ctx.internal_edge(0).chord;
    let i1 = ctx.internal_edge(1).chord;
    let v0 = if i1.has_endpoint(i0.start) { i0.start } else { i0.end };
    let v1 = i0.other(v0);
    let verts = &ctx.fragment.vertices;
    let len = verts.len();
    let pos = |p: Pt| verts.iter().position(|&v| v == p).unwrap();
    // Walk away from A (index 0) along the boundary cycle.
    let away = |p: Pt| {
        let j = pos(p);
        if j == 1 {
            verts[2]
        } else {
            verts[(j + len - 1) % len]
        }
    };
    Some([v0, v1, away(v1), away(v0)])
}

/// Right-hand side `(x_{M^0} x_{V1 B} - x_{A V1} x_{V2 B}) / x_{V1 V2}` of
/// the recurrence, with the two shorter chords expanded by G-paths.
pub fn recurrence_rhs(t: &Triangulation, ctx: &MutantContext) -> Result<LaurentPoly, OracleError> {
    let [_, v1, v2, _] = recurrence_vertices(ctx)
        .ok_or_else(|| OracleError::Internal("recurrence needs two crossings".into()))?;
    let (a, b) = (ctx.gamma.start, ctx.gamma.end);
    let side = |x: Pt, y: Pt| -> Result<LaurentPoly, OracleError> {
        let (i, _) = t
            .identify(Arc::new(x, y))
            .ok_or_else(|| OracleError::Internal(format!("{x}-{y} is not a side")))?;
        Ok(LaurentPoly::var(i as u32 + 1))
    };
    let m0 = LaurentPoly::var(ctx.variable(ctx.mutant_edge(0)));
    let v1b = expand_theorem2(t, Arc::new(v1, b))?;
    let v2b = expand_theorem2(t, Arc::new(v2, b))?;
    let num = &(&m0 * &v1b) - &(&side(a, v1)? * &v2b);
    num.exact_div(&side(v1, v2)?)
        .map_err(|e| OracleError::Division("recurrence".into(), e))
}

/// Which of the two decompositions of `G_AB` applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decomposition {
    /// `AV2F1 ⊔ AV1V2V0F3 ⊔ AV0F3 ⊔ AV1G(V2B)`
    DegreeTwo,
    /// `AV2F1 ⊔ AV0F3 ⊔ AV1F2`
    Higher,
}

/// Drops immediate back-and-forth traversals `x -> y -> x` from a vertex
/// walk; they contribute `x_e / x_e` and an even change of sign exponent.
fn cancel_backtracks(walk: &[Pt]) -> Vec<Pt> {
    let mut out: Vec<Pt> = Vec::with_capacity(walk.len());
    for &p in walk {
        if out.len() >= 2 && out[out.len() - 2] == p {
            out.pop();
        } else {
            out.push(p);
        }
    }
    out
}

/// Checks that `G_AB` is the disjoint union of the pieces built from the
/// `F_i`, after cancelling backtracks created by the two-step prefixes.
pub fn check_decomposition(
    t: &Triangulation,
    ctx: &MutantContext,
) -> Result<Option<Decomposition>, String> {
    let Some([v0, v1, v2, v3]) = recurrence_vertices(ctx) else {
        return Ok(None);
    };
    let (a, b) = (ctx.gamma.start, ctx.gamma.end);
    let join = |pre: &[Pt], ps: &[GPath]| -> Vec<Vec<Pt>> {
        ps.iter()
            .map(|p| {
                let mut v = pre.to_vec();
                v.extend_from_slice(&p.vertices);
                cancel_backtracks(&v)
            })
            .collect()
    };
    let f1 = enumerate_from(ctx, v1);
    let f3 = enumerate_from(ctx, v3);
    let mut parts = join(&[a, v2], &f1);
    parts.extend(join(&[a, v0], &f3));
    let degree = (0..ctx.num_internal())
        .filter(|&i| ctx.internal_edge(i).chord.has_endpoint(v0))
        .count();
    let kind = if degree == 2 {
        parts.extend(join(&[a, v1, v2, v0], &f3));
        let c = Arc::new(v2, b);
        if t.identify(c).is_some() {
            parts.push(vec![a, v1, v2, b]);
        } else {
            let sub = build_context(t, c).map_err(|e| e.to_string())?;
            parts.extend(join(&[a, v1], &enumerate_gpaths(&sub)));
        }
        Decomposition::DegreeTwo
    } else {
        parts.extend(join(&[a, v1], &enumerate_from(ctx, v2)));
        Decomposition::Higher
    };
    let pieces: BTreeSet<Vec<Pt>> = parts.iter().cloned().collect();
    if pieces.len() != parts.len() {
        return Err(format!("{kind:?}: pieces overlap"));
    }
    let whole: BTreeSet<Vec<Pt>> = enumerate_gpaths(ctx)
        .into_iter()
        .map(|p| p.vertices)
        .collect();
    if whole != pieces {
        return Err(format!(
            "{kind:?}: {} paths, {} in the pieces",
            whole.len(),
            pieces.len()
        ));
    }
    Ok(Some(kind))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::SurfaceSpec;

    #[test]
    fn one_crossing_is_the_mutant() {
        let t = Triangulation::standard(SurfaceSpec::Polygon { m: 5 }).unwrap();
        let ctx = build_context(&t, Arc::chord(1, 3)).unwrap();
        let paths = enumerate_gpaths(&ctx);
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].steps.len(), 1);
        assert!(matches!(ctx.edges[paths[0].steps[0].edge].kind, GKind::Mutant(0)));
        assert_eq!(sign_exponent(&ctx, &paths[0]), 0);
        // variable 2 + 5 + 0 + 1
        assert_eq!(expand_theorem2_ctx(&ctx), LaurentPoly::var(8));
    }

    #[test]
    fn two_crossings_match_the_recurrence() {
        // Pentagon fan at 0; AB = 1 -> 4 crosses {0,2} and {0,3}.
        let t = Triangulation::standard(SurfaceSpec::Polygon { m: 5 }).unwrap();
        let ctx = build_context(&t, Arc::chord(1, 4)).unwrap();
        let [v0, v1, v2, v3] = recurrence_vertices(&ctx).unwrap();
        assert_eq!(
            [v0, v1, v2, v3],
            [Pt::Out(0), Pt::Out(2), Pt::Out(3), Pt::Out(4)]
        );
        let x = expand_theorem2_ctx(&ctx);
        assert_eq!(x.len(), 2);
        assert_eq!(x, recurrence_rhs(&t, &ctx).unwrap());
    }

    #[test]
    fn octagon_substitution() {
        let (t, g) = crate::instances::octagon_example();
        let x2 = expand_theorem2(&t, g).unwrap();
        let x1 = crate::tpaths::expand_theorem1(&t, g).unwrap();
        assert_eq!(substitute_mutants(&t, &x2).unwrap(), x1);
    }

    #[test]
    fn sign_examples() {
        // Octagon with a zigzag of internal arcs, AB = 2 -> 6.
        let arcs = [(3, 1), (0, 3), (4, 0), (4, 7), (5, 7)];
        let t = Triangulation::new(
            SurfaceSpec::Polygon { m: 8 },
            arcs.iter().map(|&(a, b)| Arc::chord(a, b)).collect(),
        )
        .unwrap();
        let ctx = build_context(&t, Arc::chord(2, 6)).unwrap();
        assert_eq!(ctx.ibar, [false, true, true, true, false]);
        assert_eq!(ctx.e_arcs().len(), 4);
        let sign_of = |verts: &[i64]| {
            let want: Vec<Pt> = verts.iter().map(|&v| Pt::Out(v)).collect();
            let p = enumerate_gpaths(&ctx)
                .into_iter()
                .find(|p| p.vertices == want)
                .expect("path present");
            sign_exponent(&ctx, &p)
        };
        // side, E side, Ī against the chain order, E side, side
        assert_eq!(sign_of(&[2, 3, 4, 0, 7, 6]), 3);
        // the same Ī arc along the chain order
        assert_eq!(sign_of(&[2, 1, 0, 4, 5, 6]), 2);
        // mutant, backward E side, mutant
        assert_eq!(sign_of(&[2, 1, 0, 5, 4, 6]), 3);
        let x2 = expand_theorem2_ctx(&ctx);
        let x1 = crate::tpaths::expand_theorem1(&t, ctx.gamma).unwrap();
        assert_eq!(substitute_mutants(&t, &x2).unwrap(), x1);
        assert_eq!(check_decomposition(&t, &ctx), Ok(Some(Decomposition::DegreeTwo)));
    }

    #[test]
    fn higher_degree_decomposition() {
        // Hexagon fan at 0: V0 = 0 carries every internal arc.
        let t = Triangulation::standard(SurfaceSpec::Polygon { m: 6 }).unwrap();
        let ctx = build_context(&t, Arc::chord(1, 5)).unwrap();
        assert_eq!(check_decomposition(&t, &ctx), Ok(Some(Decomposition::Higher)));
        let x1 = crate::tpaths::expand_theorem1(&t, ctx.gamma).unwrap();
        let rhs = recurrence_rhs(&t, &ctx).unwrap();
        assert_eq!(substitute_mutants(&t, &rhs).unwrap(), x1);
    }
}
