//! Unpunctured marked surfaces, arcs, triangulations and exchange matrices.
//!
//! Polygons and annuli are handled geometrically through a simply connected
//! cover. A polygon is its own cover. The annulus is unrolled to a strip
//! whose top line carries the lifts `Pt::Out(p)` of the outer marked points
//! and whose bottom line carries the lifts `Pt::In(q)` of the inner ones;
//! the deck transformation sends `Out(p) -> Out(p + outer)` and
//! `In(q) -> In(q + inner)`.
//!
//! Every marked point of the cover sits on the boundary of a disk, so an arc
//! lift is a chord and two lifts cross exactly when their endpoints strictly
//! interleave. The cyclic order around the disk is given by [`Cover::key`]:
//! polygon vertices in index order, then the top line left to right and the
//! bottom line right to left. Increasing key is the clockwise direction.
//!
//! General `(g, b)` surfaces are only supported combinatorially: a standard
//! triangulation, its exchange matrix and flips.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("invalid surface: {0}")]
    InvalidSpec(String),
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("arcs t{0} and t{1} cross")]
    Crossing(usize, usize),
    #[error("arcs t{0} and t{1} are equal")]
    Duplicate(usize, usize),
    #[error("expected {expected} internal arcs, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("malformed triangulation: {0}")]
    Malformed(String),
    #[error("operation not supported on general surfaces")]
    Unsupported,
    #[error("t{0} is not an internal arc")]
    NotInternal(usize),
    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T, E = SurfaceError> = std::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SurfaceSpec {
    Polygon { m: usize },
    Annulus { outer: usize, inner: usize },
    General { genus: usize, boundaries: Vec<usize> },
}

impl SurfaceSpec {
    pub fn genus(&self) -> usize {
        match self {
            SurfaceSpec::General { genus, .. } => *genus,
            _ => 0,
        }
    }

    pub fn boundary_count(&self) -> usize {
        match self {
            SurfaceSpec::Polygon { .. } => 1,
            SurfaceSpec::Annulus { .. } => 2,
            SurfaceSpec::General { boundaries, .. } => boundaries.len(),
        }
    }

    /// Number of marked points, which is also the number of boundary arcs.
    pub fn marked_points(&self) -> usize {
        match self {
            SurfaceSpec::Polygon { m } => *m,
            SurfaceSpec::Annulus { outer, inner } => outer + inner,
            SurfaceSpec::General { boundaries, .. } => boundaries.iter().sum(),
        }
    }

    /// `6g + 3b + m - 6`; may be non-positive for degenerate specs.
    pub fn rank(&self) -> i64 {
        6 * self.genus() as i64 + 3 * self.boundary_count() as i64 + self.marked_points() as i64
            - 6
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SurfaceSpec::Annulus { outer, inner } if *outer == 0 || *inner == 0 => {
                return Err(SurfaceError::InvalidSpec(
                    "each annulus boundary needs a marked point".into(),
                ))
            }
            SurfaceSpec::General { boundaries, .. } if boundaries.is_empty() => {
                return Err(SurfaceError::InvalidSpec("at least one boundary component".into()))
            }
            SurfaceSpec::General { boundaries, .. } if boundaries.contains(&0) => {
                return Err(SurfaceError::InvalidSpec(
                    "each boundary component needs a marked point".into(),
                ))
            }
            _ => {}
        }
        if self.rank() < 1 {
            return Err(SurfaceError::InvalidSpec(format!(
                "rank {} is not positive",
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn cover(&self) -> Option<Cover> {
        match *self {
            SurfaceSpec::Polygon { m } => Some(Cover::Polygon { m }),
            SurfaceSpec::Annulus { outer, inner } => Some(Cover::Strip { outer, inner }),
            SurfaceSpec::General { .. } => None,
        }
    }

    pub fn is_simply_connected(&self) -> bool {
        matches!(self, SurfaceSpec::Polygon { .. })
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceSpec::Polygon { m } => write!(f, "polygon(m={m})"),
            SurfaceSpec::Annulus { outer, inner } => write!(f, "annulus({outer},{inner})"),
            SurfaceSpec::General { genus, boundaries } => {
                write!(f, "surface(g={genus}, boundaries={boundaries:?})")
            }
        }
    }
}

/// A marked point in the cover. Polygon vertices use `Out`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pt {
    Out(i64),
    In(i64),
}

impl fmt::Display for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pt::Out(p) => write!(f, "o{p}"),
            Pt::In(q) => write!(f, "i{q}"),
        }
    }
}

/// An oriented chord in the cover. As a surface arc it stands for its
/// projection; [`Cover::canonical`] gives a representative that is equal for
/// equal arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub start: Pt,
    pub end: Pt,
}

impl Arc {
    pub fn new(start: Pt, end: Pt) -> Self {
        Arc { start, end }
    }

    /// Polygon diagonal between vertices `i` and `j`.
    pub fn chord(i: i64, j: i64) -> Self {
        Arc::new(Pt::Out(i), Pt::Out(j))
    }

    pub fn reversed(self) -> Self {
        Arc::new(self.end, self.start)
    }

    pub fn has_endpoint(&self, p: Pt) -> bool {
        self.start == p || self.end == p
    }

    /// Endpoint other than `p` (assumes `p` is an endpoint).
    pub fn other(&self, p: Pt) -> Pt {
        if self.start == p {
            self.end
        } else {
            self.start
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.start, self.end)
    }
}

pub type Key = (u8, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cover {
    Polygon { m: usize },
    Strip { outer: usize, inner: usize },
}

impl Cover {
    /// Position in the clockwise cyclic order around the cover's boundary.
    pub fn key(&self, p: Pt) -> Key {
        match p {
            Pt::Out(i) => (0, i),
            Pt::In(q) => (1, -q),
        }
    }

    fn side_len(&self, p: Pt) -> i64 {
        match (self, p) {
            (Cover::Polygon { m }, _) => *m as i64,
            (Cover::Strip { outer, .. }, Pt::Out(_)) => *outer as i64,
            (Cover::Strip { inner, .. }, Pt::In(_)) => *inner as i64,
        }
    }

    /// Index of the fundamental domain containing `p`.
    pub fn period(&self, p: Pt) -> i64 {
        match (self, p) {
            (Cover::Polygon { .. }, _) => 0,
            (_, Pt::Out(i)) | (_, Pt::In(i)) => i.div_euclid(self.side_len(p)),
        }
    }

    /// Image of `p` under the `k`-th power of the deck transformation.
    pub fn shift(&self, p: Pt, k: i64) -> Pt {
        match (self, p) {
            (Cover::Polygon { .. }, _) => p,
            (_, Pt::Out(i)) => Pt::Out(i + k * self.side_len(p)),
            (_, Pt::In(q)) => Pt::In(q + k * self.side_len(p)),
        }
    }

    pub fn shift_arc(&self, a: Arc, k: i64) -> Arc {
        Arc::new(self.shift(a.start, k), self.shift(a.end, k))
    }

    /// The marked point of the surface below `p`, as its period-0 lift.
    pub fn project(&self, p: Pt) -> Pt {
        self.shift(p, -self.period(p))
    }

    /// Dense index of the marked point below `p`: outer (or polygon) points
    /// first, then inner points.
    pub fn marked_index(&self, p: Pt) -> usize {
        match (self, self.project(p)) {
            (_, Pt::Out(i)) => i as usize,
            (Cover::Strip { outer, .. }, Pt::In(q)) => outer + q as usize,
            (Cover::Polygon { .. }, Pt::In(_)) => unreachable!("polygons have no inner points"),
        }
    }

    /// Next marked point clockwise along the same boundary line.
    pub fn next(&self, p: Pt) -> Pt {
        match (self, p) {
            (Cover::Polygon { m }, Pt::Out(i)) => Pt::Out((i + 1).rem_euclid(*m as i64)),
            (_, Pt::Out(i)) => Pt::Out(i + 1),
            (_, Pt::In(q)) => Pt::In(q + 1),
        }
    }

    /// Translate `a` so that its endpoint of smallest key lies in period 0.
    pub fn canonical_oriented(&self, a: Arc) -> Arc {
        let first = if self.key(a.start) <= self.key(a.end) {
            a.start
        } else {
            a.end
        };
        self.shift_arc(a, -self.period(first))
    }

    /// Orientation-free canonical representative of the projected arc.
    pub fn canonical(&self, a: Arc) -> Arc {
        let a = self.canonical_oriented(a);
        if self.key(a.start) <= self.key(a.end) {
            a
        } else {
            a.reversed()
        }
    }

    /// Whether `x` lies strictly inside the clockwise interval from `a` to `b`.
    pub fn between(&self, a: Pt, x: Pt, b: Pt) -> bool {
        let (ka, kx, kb) = (self.key(a), self.key(x), self.key(b));
        if ka < kb {
            ka < kx && kx < kb
        } else {
            kx > ka || kx < kb
        }
    }

    /// Whether two chords cross. Shared endpoints never count.
    pub fn chords_cross(&self, a: Arc, b: Arc) -> bool {
        if a.has_endpoint(b.start) || a.has_endpoint(b.end) {
            return false;
        }
        self.between(a.start, b.start, a.end) != self.between(a.start, b.end, a.end)
    }

    fn x_coord(&self, p: Pt) -> i64 {
        match (self, p) {
            (Cover::Polygon { .. }, _) => 0,
            (Cover::Strip { inner, .. }, Pt::Out(i)) => i * *inner as i64,
            (Cover::Strip { outer, .. }, Pt::In(q)) => q * *outer as i64,
        }
    }

    /// Deck powers `k` for which `shift(b, k)` can possibly cross `a`.
    pub fn translate_window(&self, a: Arc, b: Arc) -> std::ops::RangeInclusive<i64> {
        match self {
            Cover::Polygon { .. } => 0..=0,
            Cover::Strip { outer, inner } => {
                let l = (*outer * *inner) as i64;
                let (xa0, xa1) = (self.x_coord(a.start), self.x_coord(a.end));
                let (xb0, xb1) = (self.x_coord(b.start), self.x_coord(b.end));
                let (lo_a, hi_a) = (xa0.min(xa1), xa0.max(xa1));
                let (lo_b, hi_b) = (xb0.min(xb1), xb0.max(xb1));
                let from = (lo_a - hi_b).div_euclid(l) - 1;
                let to = -(lo_b - hi_a).div_euclid(l) + 1;
                from..=to
            }
        }
    }

    /// All deck translates of `b` crossing the fixed lift `a`.
    pub fn crossing_translates(&self, a: Arc, b: Arc) -> Vec<Arc> {
        self.translate_window(a, b)
            .map(|k| self.shift_arc(b, k))
            .filter(|&t| self.chords_cross(a, t))
            .collect()
    }

    /// Crossing number `e(a, b)` of the projected arcs.
    pub fn crossing_number(&self, a: Arc, b: Arc) -> usize {
        self.crossing_translates(a, b).len()
    }

    pub fn is_boundary_segment(&self, a: Arc) -> bool {
        match (self, a.start, a.end) {
            (Cover::Polygon { m }, Pt::Out(i), Pt::Out(j)) => {
                let d = (j - i).rem_euclid(*m as i64);
                d == 1 || d == *m as i64 - 1
            }
            (Cover::Strip { .. }, Pt::Out(i), Pt::Out(j)) | (Cover::Strip { .. }, Pt::In(i), Pt::In(j)) => {
                (i - j).abs() == 1
            }
            _ => false,
        }
    }

    /// Checks that `a` is an arc (not contractible, not a boundary segment,
    /// not cutting out a monogon or digon) or a boundary segment.
    pub fn check_arc(&self, a: Arc) -> Result<()> {
        let bad = |msg: &str| Err(SurfaceError::InvalidArc(format!("{a}: {msg}")));
        match (self, a.start, a.end) {
            (Cover::Polygon { m }, Pt::Out(i), Pt::Out(j)) => {
                let m = *m as i64;
                if !(0..m).contains(&i) || !(0..m).contains(&j) {
                    return bad("vertex out of range");
                }
                if i == j {
                    return bad("endpoints coincide");
                }
                Ok(())
            }
            (Cover::Polygon { .. }, _, _) => bad("polygons have a single boundary"),
            (Cover::Strip { .. }, s, t) => {
                if s == t {
                    return bad("endpoints coincide");
                }
                match (s, t) {
                    (Pt::Out(i), Pt::Out(j)) | (Pt::In(i), Pt::In(j)) => {
                        let d = (i - j).abs();
                        if d > self.side_len(s) {
                            return bad("peripheral arc winds past its own boundary");
                        }
                        Ok(())
                    }
                    _ => Ok(()),
                }
            }
        }
    }

    /// Boundary segments in their fixed order, oriented clockwise.
    pub fn boundary_arcs(&self) -> Vec<Arc> {
        match *self {
            Cover::Polygon { m } => (0..m as i64)
                .map(|i| Arc::chord(i, (i + 1) % m as i64))
                .collect(),
            Cover::Strip { outer, inner } => (0..outer as i64)
                .map(|i| Arc::new(Pt::Out(i), Pt::Out(i + 1)))
                .chain((0..inner as i64).map(|j| Arc::new(Pt::In(j), Pt::In(j + 1))))
                .collect(),
        }
    }

    /// Orients a chord that crosses `gamma` from the endpoint on the
    /// clockwise side of `gamma` (between its start and end) to the other.
    pub fn orient_across(&self, gamma: Arc, c: Arc) -> Arc {
        if self.between(gamma.start, c.start, gamma.end) {
            c
        } else {
            c.reversed()
        }
    }

    fn cyclic_pos(&self, origin: Pt, w: Pt) -> (bool, Key) {
        let k = self.key(w);
        (k < self.key(origin), k)
    }

    /// Compares two chords crossing `gamma` (both oriented by
    /// [`Cover::orient_across`]) by the position of the crossing along
    /// `gamma`, nearest to its start first.
    pub fn cmp_along(&self, gamma: Arc, a: Arc, b: Arc) -> Ordering {
        let o = gamma.start;
        self.cyclic_pos(o, a.start)
            .cmp(&self.cyclic_pos(o, b.start))
            .then_with(|| self.cyclic_pos(o, b.end).cmp(&self.cyclic_pos(o, a.end)))
    }
}

/// Marked-point side in the JSON schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Out,
    In,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct AnnulusArcJson {
    from: (Side, i64),
    to: (Side, i64),
    #[serde(default)]
    winding: i64,
}

/// Parses an arc in the JSON schema: `[i, j]` for polygons and
/// `{"from":["out",i],"to":["in",j],"winding":w}` for annuli. A peripheral
/// annulus arc (both ends on one side) runs from `from` in the direction of
/// increasing index until it reaches `to`, so `from == to` is the loop
/// around the whole boundary.
pub fn arc_from_json(surface: &SurfaceSpec, v: &Value) -> Result<Arc> {
    let cover = surface.cover().ok_or(SurfaceError::Unsupported)?;
    let schema = |e: serde_json::Error| SurfaceError::Schema(format!("{v}: {e}"));
    let arc = match cover {
        Cover::Polygon { .. } => {
            let (i, j): (i64, i64) = serde_json::from_value(v.clone()).map_err(schema)?;
            Arc::chord(i, j)
        }
        Cover::Strip { outer, inner } => {
            let a: AnnulusArcJson = serde_json::from_value(v.clone()).map_err(schema)?;
            let len = |s: Side| match s {
                Side::Out => outer as i64,
                Side::In => inner as i64,
            };
            for (s, i) in [a.from, a.to] {
                if !(0..len(s)).contains(&i) {
                    return Err(SurfaceError::InvalidArc(format!("{v}: index out of range")));
                }
            }
            let mk = |s: Side, i: i64| match s {
                Side::Out => Pt::Out(i),
                Side::In => Pt::In(i),
            };
            match (a.from, a.to) {
                ((Side::Out, i), (Side::In, j)) => {
                    Arc::new(Pt::Out(i), Pt::In(j + a.winding * inner as i64))
                }
                ((Side::In, j), (Side::Out, i)) => {
                    Arc::new(Pt::In(j + a.winding * inner as i64), Pt::Out(i))
                }
                ((s, i), (_, j)) => {
                    if a.winding != 0 {
                        return Err(SurfaceError::InvalidArc(format!(
                            "{v}: peripheral arcs carry no winding"
                        )));
                    }
                    let m = len(s);
                    let mut d = (j - i).rem_euclid(m);
                    if d == 0 {
                        d = m;
                    }
                    Arc::new(mk(s, i), mk(s, i + d))
                }
            }
        }
    };
    cover.check_arc(arc)?;
    Ok(arc)
}

/// Inverse of [`arc_from_json`] for the given lift.
pub fn arc_to_json(cover: &Cover, a: Arc) -> Value {
    match cover {
        Cover::Polygon { .. } => {
            let (Pt::Out(i), Pt::Out(j)) = (a.start, a.end) else {
                unreachable!("polygon arcs join outer points")
            };
            json!([i, j])
        }
        Cover::Strip { inner, .. } => {
            let inner = *inner as i64;
            let a = cover.canonical_oriented(a);
            let enc = |p: Pt| match cover.project(p) {
                Pt::Out(i) => json!(["out", i]),
                Pt::In(j) => json!(["in", j]),
            };
            let winding = match (a.start, a.end) {
                (Pt::Out(_), Pt::In(q)) | (Pt::In(q), Pt::Out(_)) => q.div_euclid(inner),
                _ => 0,
            };
            match (a.start, a.end) {
                (Pt::Out(i), Pt::Out(j)) | (Pt::In(i), Pt::In(j)) if j < i => {
                    // Peripheral arcs are always written along increasing index.
                    json!({"from": enc(a.end), "to": enc(a.start), "winding": 0})
                }
                _ => json!({"from": enc(a.start), "to": enc(a.end), "winding": winding}),
            }
        }
    }
}

/// Column-major-free dense `(n+m) x n` integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl ExtendedMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExtendedMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `b_{ij}` with 0-based indices.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    fn add(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn is_principal_skew_symmetric(&self) -> bool {
        (0..self.cols).all(|i| (0..self.cols).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    pub fn max_abs_entry(&self) -> i64 {
        self.data.iter().map(|v| v.abs()).max().unwrap_or(0)
    }

    /// Standard matrix mutation in direction `k` (0-based).
    pub fn mutate(&self, k: usize) -> ExtendedMatrix {
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = if i == k || j == k {
                    -self.get(i, j)
                } else {
                    let (a, b) = (self.get(i, k), self.get(k, j));
                    self.get(i, j) + (a.abs() * b + a * b.abs()) / 2
                };
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).map(|r| r.to_vec()).collect()
    }
}

#[derive(Clone, Debug)]
struct Geometry {
    cover: Cover,
    /// Oriented lifts of all `n + m` arcs, internal arcs first.
    arcs: Vec<Arc>,
    index: HashMap<Arc, usize>,
    /// Clockwise vertex triple of each triangle, aligned with `triangles`.
    lifted: Vec<[Pt; 3]>,
}

impl Geometry {
    /// Cover neighbours of `p` together with the arc index of the joining chord.
    fn neighbours(&self, p: Pt) -> Vec<(Pt, usize)> {
        let c = &self.cover;
        let target = c.marked_index(p);
        let mut out = Vec::new();
        for (idx, a) in self.arcs.iter().enumerate() {
            for (from, to) in [(a.start, a.end), (a.end, a.start)] {
                if c.marked_index(from) == target {
                    let k = c.period(p) - c.period(from);
                    let here = c.shift(from, k);
                    debug_assert_eq!(here, p);
                    out.push((c.shift(to, k), idx));
                }
            }
        }
        out
    }

    /// The apex of the triangle on the clockwise side of `u -> v`, i.e. among
    /// the points strictly between `u` and `v` in clockwise order.
    fn apex(&self, u: Pt, v: Pt) -> Result<Option<Pt>> {
        let nu: BTreeSet<Pt> = self.neighbours(u).into_iter().map(|x| x.0).collect();
        let nv: BTreeSet<Pt> = self.neighbours(v).into_iter().map(|x| x.0).collect();
        let mut found = nu
            .intersection(&nv)
            .copied()
            .filter(|&w| self.cover.between(u, w, v));
        let first = found.next();
        if found.next().is_some() {
            return Err(SurfaceError::Malformed(format!(
                "chord {u}-{v} has several triangles on one side"
            )));
        }
        Ok(first)
    }

    fn index_of(&self, a: Arc) -> Option<usize> {
        self.index.get(&self.cover.canonical(a)).copied()
    }
}

/// A triangulation with arcs `τ_1..τ_n` (internal) followed by the boundary
/// arcs `τ_{n+1}..τ_{n+m}`. Arc indices in this API are 0-based, so arc `j`
/// is `τ_{j+1}` and carries the variable `x_{j+1}`.
#[derive(Clone, Debug)]
pub struct Triangulation {
    surface: SurfaceSpec,
    n: usize,
    m: usize,
    /// Triangles as clockwise side triples.
    triangles: Vec<[usize; 3]>,
    geometry: Option<Geometry>,
}

impl Triangulation {
    /// Builds and validates a polygon or annulus triangulation from its
    /// internal arcs (given as cover lifts; any lift may be used).
    pub fn new(surface: SurfaceSpec, internal: Vec<Arc>) -> Result<Self> {
        surface.validate()?;
        let cover = surface.cover().ok_or(SurfaceError::Unsupported)?;
        let n = surface.rank() as usize;
        let m = surface.marked_points();
        if internal.len() != n {
            return Err(SurfaceError::WrongCount {
                expected: n,
                found: internal.len(),
            });
        }
        let mut arcs = Vec::with_capacity(n + m);
        let mut index = HashMap::new();
        for (i, a) in internal
            .iter()
            .copied()
            .chain(cover.boundary_arcs())
            .enumerate()
        {
            cover.check_arc(a)?;
            if i < n && cover.is_boundary_segment(a) {
                return Err(SurfaceError::InvalidArc(format!(
                    "t{} ({a}) is a boundary arc",
                    i + 1
                )));
            }
            if i < n && cover.crossing_number(a, a) > 0 {
                return Err(SurfaceError::InvalidArc(format!(
                    "t{} ({a}) crosses itself",
                    i + 1
                )));
            }
            if let Some(&j) = index.get(&cover.canonical(a)) {
                return Err(SurfaceError::Duplicate(j + 1, i + 1));
            }
            index.insert(cover.canonical(a), i);
            arcs.push(cover.canonical_oriented(a));
        }
        for i in 0..n {
            for j in i + 1..n {
                if cover.crossing_number(arcs[i], arcs[j]) > 0 {
                    return Err(SurfaceError::Crossing(i + 1, j + 1));
                }
            }
        }
        let mut geom = Geometry {
            cover,
            arcs,
            index,
            lifted: Vec::new(),
        };

        let mut seen: HashMap<[Pt; 3], usize> = HashMap::new();
        let mut triangles = Vec::new();
        for a in geom.arcs.clone() {
            for (u, v) in [(a.start, a.end), (a.end, a.start)] {
                let Some(w) = geom.apex(u, v)? else { continue };
                let mut tri = [u, v, w];
                tri.sort_by_key(|&p| cover.key(p));
                let k = cover.period(tri[0]);
                let tri = tri.map(|p| cover.shift(p, -k));
                if seen.contains_key(&tri) {
                    continue;
                }
                let mut sides = [0usize; 3];
                for s in 0..3 {
                    let chord = Arc::new(tri[s], tri[(s + 1) % 3]);
                    sides[s] = geom.index_of(chord).ok_or_else(|| {
                        SurfaceError::Malformed(format!("triangle side {chord} is not an arc"))
                    })?;
                }
                seen.insert(tri, triangles.len());
                triangles.push(sides);
                geom.lifted.push(tri);
            }
        }
        let t = Triangulation {
            surface,
            n,
            m,
            triangles,
            geometry: Some(geom),
        };
        t.check_triangles()?;
        Ok(t)
    }

    /// Builds a combinatorial triangulation from clockwise side triples.
    pub fn from_triangles(surface: SurfaceSpec, triangles: Vec<[usize; 3]>) -> Result<Self> {
        surface.validate()?;
        let t = Triangulation {
            n: surface.rank() as usize,
            m: surface.marked_points(),
            surface,
            triangles,
            geometry: None,
        };
        t.check_triangles()?;
        Ok(t)
    }

    fn check_triangles(&self) -> Result<()> {
        let (n, m) = (self.n, self.m);
        if 3 * self.triangles.len() != 2 * n + m {
            return Err(SurfaceError::Malformed(format!(
                "{} triangles for {n} internal and {m} boundary arcs",
                self.triangles.len()
            )));
        }
        let mut uses = vec![0usize; n + m];
        for tri in &self.triangles {
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(SurfaceError::Malformed(format!(
                    "triangle with repeated side {tri:?}"
                )));
            }
            for &s in tri {
                if s >= n + m {
                    return Err(SurfaceError::Malformed(format!("side index {s} out of range")));
                }
                uses[s] += 1;
            }
        }
        for (i, &u) in uses.iter().enumerate() {
            let want = if i < n { 2 } else { 1 };
            if u != want {
                return Err(SurfaceError::Malformed(format!(
                    "t{} is a side of {u} triangles",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Canonical starting triangulation: the fan at vertex 0 for polygons,
    /// the zigzag of bridging arcs for annuli, and a fan of a glued polygon
    /// for general surfaces.
    pub fn standard(surface: SurfaceSpec) -> Result<Self> {
        surface.validate()?;
        match surface {
            SurfaceSpec::Polygon { m } => {
                let arcs = (2..m as i64 - 1).map(|j| Arc::chord(0, j)).collect();
                Triangulation::new(surface, arcs)
            }
            SurfaceSpec::Annulus { outer, inner } => {
                let (outer, inner) = (outer as i64, inner as i64);
                let (mut p, mut q) = (0, 0);
                let mut arcs = vec![Arc::new(Pt::Out(0), Pt::In(0))];
                let mut turn = true;
                while p + q < outer + inner - 1 {
                    if (turn && p < outer) || q == inner {
                        p += 1;
                    } else {
                        q += 1;
                    }
                    turn = !turn;
                    arcs.push(Arc::new(Pt::Out(p), Pt::In(q)));
                }
                Triangulation::new(surface, arcs)
            }
            SurfaceSpec::General {
                genus,
                ref boundaries,
            } => {
                let tris = glued_fan(genus, boundaries);
                Triangulation::from_triangles(surface.clone(), tris)
            }
        }
    }

    pub fn surface(&self) -> &SurfaceSpec {
        &self.surface
    }

    /// Number of internal arcs.
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn num_boundary(&self) -> usize {
        self.m
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn cover(&self) -> Option<Cover> {
        self.geometry.as_ref().map(|g| g.cover)
    }

    fn geom(&self) -> Result<&Geometry> {
        self.geometry.as_ref().ok_or(SurfaceError::Unsupported)
    }

    /// Oriented lift of arc `i` (0-based, internal or boundary).
    pub fn arc(&self, i: usize) -> Option<Arc> {
        self.geometry.as_ref().and_then(|g| g.arcs.get(i).copied())
    }

    pub fn internal_arcs(&self) -> Vec<Arc> {
        self.geometry
            .as_ref()
            .map(|g| g.arcs[..self.n].to_vec())
            .unwrap_or_default()
    }

    /// Index of the triangulation or boundary arc equal to `a`, if any.
    pub fn index_of(&self, a: Arc) -> Option<usize> {
        self.geometry.as_ref().and_then(|g| g.index_of(a))
    }

    /// Identifies a cover chord as a lift of a triangulation or boundary
    /// arc, returning the arc index and whether the chord runs along the
    /// arc's orientation.
    pub fn identify(&self, chord: Arc) -> Option<(usize, bool)> {
        let g = self.geometry.as_ref()?;
        let idx = g.index_of(chord)?;
        let a = g.arcs[idx];
        let c = g.cover;
        let forward = c.marked_index(a.start) == c.marked_index(chord.start) && {
            let k = c.period(chord.start) - c.period(a.start);
            c.shift_arc(a, k) == chord
        };
        Some((idx, forward))
    }

    /// Lifted vertices of triangle `i`, in clockwise order.
    pub fn lifted_triangle(&self, i: usize) -> Option<[Pt; 3]> {
        self.geometry.as_ref().map(|g| g.lifted[i])
    }

    /// Set of canonical arcs (geometric triangulations only).
    pub fn arc_set(&self) -> BTreeSet<Arc> {
        match &self.geometry {
            Some(g) => g.arcs[..self.n].iter().map(|&a| g.cover.canonical(a)).collect(),
            None => BTreeSet::new(),
        }
    }

    /// Whether two triangulations agree up to relabelling of arcs.
    pub fn same_as(&self, other: &Triangulation) -> bool {
        if self.surface != other.surface {
            return false;
        }
        match (&self.geometry, &other.geometry) {
            (Some(_), Some(_)) => self.arc_set() == other.arc_set(),
            _ => {
                let norm = |t: &Triangulation| {
                    let mut v: Vec<[usize; 3]> = t.triangles.iter().map(|&x| rotate_min(x)).collect();
                    v.sort();
                    v
                };
                norm(self) == norm(other)
            }
        }
    }

    /// Crossing number of two arcs on this surface.
    pub fn crossing_number(&self, a: Arc, b: Arc) -> Result<usize> {
        let c = self.geom()?.cover;
        c.check_arc(a)?;
        c.check_arc(b)?;
        Ok(c.crossing_number(a, b))
    }

    /// Lifted internal arcs crossing the chord `gamma`, ordered along
    /// `gamma` from its start.
    pub fn crossings(&self, gamma: Arc) -> Result<Vec<Crossing>> {
        let g = self.geom()?;
        let c = g.cover;
        let mut out = Vec::new();
        for (idx, &a) in g.arcs[..self.n].iter().enumerate() {
            for t in c.crossing_translates(gamma, a) {
                out.push(Crossing {
                    chord: c.orient_across(gamma, t),
                    arc: idx,
                });
            }
        }
        out.sort_by(|x, y| c.cmp_along(gamma, x.chord, y.chord));
        Ok(out)
    }

    /// `e(gamma, T)`: total number of crossings with internal arcs.
    pub fn crossing_count(&self, gamma: Arc) -> Result<usize> {
        Ok(self.crossings(gamma)?.len())
    }

    /// Apex of the triangle on the clockwise side of the oriented cover
    /// chord `u -> v`, if that side is inside the surface.
    pub fn apex(&self, u: Pt, v: Pt) -> Result<Option<Pt>> {
        self.geom()?.apex(u, v)
    }

    /// Flips internal arc `k`, returning the new triangulation (with the new
    /// arc at index `k`) and the new arc when geometry is available.
    pub fn flip(&self, k: usize) -> Result<(Triangulation, Option<Arc>)> {
        if k >= self.n {
            return Err(SurfaceError::NotInternal(k));
        }
        match &self.geometry {
            Some(g) => {
                let a = g.arcs[k];
                let w1 = g.apex(a.start, a.end)?;
                let w2 = g.apex(a.end, a.start)?;
                let (Some(w1), Some(w2)) = (w1, w2) else {
                    return Err(SurfaceError::Malformed(format!(
                        "t{} is not bounded by two triangles",
                        k + 1
                    )));
                };
                let new = g.cover.canonical_oriented(Arc::new(w1, w2));
                let mut arcs = g.arcs[..self.n].to_vec();
                arcs[k] = new;
                Ok((Triangulation::new(self.surface.clone(), arcs)?, Some(new)))
            }
            None => {
                let sides: Vec<usize> = (0..self.triangles.len())
                    .filter(|&t| self.triangles[t].contains(&k))
                    .collect();
                let [t1, t2] = sides[..] else {
                    return Err(SurfaceError::Malformed(format!(
                        "t{} is not bounded by two triangles",
                        k + 1
                    )));
                };
                let r1 = rotate_to(self.triangles[t1], k);
                let r2 = rotate_to(self.triangles[t2], k);
                let (a, b, c, d) = (r1[1], r1[2], r2[1], r2[2]);
                let mut tris = self.triangles.clone();
                tris[t1] = [k, d, a];
                tris[t2] = [k, b, c];
                Ok((Triangulation::from_triangles(self.surface.clone(), tris)?, None))
            }
        }
    }

    /// Serializes the internal arcs in the JSON schema.
    pub fn to_json(&self) -> Result<Value> {
        let g = self.geom()?;
        Ok(json!({
            "surface": serde_json::to_value(&self.surface).expect("spec serializes"),
            "triangulation": g.arcs[..self.n]
                .iter()
                .map(|&a| arc_to_json(&g.cover, a))
                .collect::<Vec<_>>(),
        }))
    }

    /// Parses `{"surface": {...}, "triangulation": [...]}`.
    pub fn from_json(v: &Value) -> Result<Triangulation> {
        let surface: SurfaceSpec = serde_json::from_value(
            v.get("surface")
                .cloned()
                .ok_or_else(|| SurfaceError::Schema("missing \"surface\"".into()))?,
        )
        .map_err(|e| SurfaceError::Schema(e.to_string()))?;
        surface.validate()?;
        if surface.cover().is_none() {
            return Triangulation::standard(surface);
        }
        let arcs = v
            .get("triangulation")
            .and_then(Value::as_array)
            .ok_or_else(|| SurfaceError::Schema("missing \"triangulation\" array".into()))?
            .iter()
            .map(|a| arc_from_json(&surface, a))
            .collect::<Result<Vec<_>>>()?;
        Triangulation::new(surface, arcs)
    }
}

/// A lifted triangulation arc crossing a chord, oriented from the clockwise
/// side of the chord to the other side.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub chord: Arc,
    pub arc: usize,
}

fn rotate_to(t: [usize; 3], k: usize) -> [usize; 3] {
    let i = t.iter().position(|&x| x == k).expect("side present");
    [t[i], t[(i + 1) % 3], t[(i + 2) % 3]]
}

fn rotate_min(t: [usize; 3]) -> [usize; 3] {
    let i = (0..3).min_by_key(|&i| t[i]).unwrap();
    [t[i], t[(i + 1) % 3], t[(i + 2) % 3]]
}

/// Fan triangulation of the polygon with boundary word
/// `∂_1 · [a_i b_i a_i⁻ b_i⁻]_{i≤g} · [c_j ∂_j c_j⁻]_{j≥2}`, glued along the
/// paired letters.
fn glued_fan(genus: usize, boundaries: &[usize]) -> Vec<[usize; 3]> {
    #[derive(Clone, Copy)]
    enum Letter {
        Bnd(usize),
        Pair(usize),
    }
    let mut word = Vec::new();
    let mut next_bnd = 0;
    let mut next_pair = 0;
    for _ in 0..boundaries[0] {
        word.push(Letter::Bnd(next_bnd));
        next_bnd += 1;
    }
    for _ in 0..genus {
        let (a, b) = (next_pair, next_pair + 1);
        next_pair += 2;
        word.extend([Letter::Pair(a), Letter::Pair(b), Letter::Pair(a), Letter::Pair(b)]);
    }
    for &mj in &boundaries[1..] {
        let c = next_pair;
        next_pair += 1;
        word.push(Letter::Pair(c));
        for _ in 0..mj {
            word.push(Letter::Bnd(next_bnd));
            next_bnd += 1;
        }
        word.push(Letter::Pair(c));
    }
    let l = word.len();
    let diagonals = l - 3;
    let n = diagonals + next_pair;
    let edge = |i: usize| match word[i] {
        Letter::Bnd(b) => n + b,
        Letter::Pair(p) => diagonals + p,
    };
    // Diagonal (0, j) for j in 2..=l-2 is arc j-2.
    let side0 = |j: usize| {
        if j == 1 {
            edge(0)
        } else if j == l - 1 {
            edge(l - 1)
        } else {
            j - 2
        }
    };
    (1..l - 1)
        .map(|j| [side0(j), edge(j), side0(j + 1)])
        .collect()
}

/// Extended exchange matrix `B̃(T)`: for each triangle and each pair of
/// internal-or-boundary sides where `τ_j` follows `τ_i` clockwise,
/// `b_ij += 1` and `b_ji -= 1`.
pub fn build_matrix(t: &Triangulation) -> ExtendedMatrix {
    let (n, m) = (t.rank(), t.num_boundary());
    let mut b = ExtendedMatrix::zeros(n + m, n);
    for tri in t.triangles() {
        for s in 0..3 {
            let (i, j) = (tri[s], tri[(s + 1) % 3]);
            if j < n {
                b.add(i, j, 1);
            }
            if i < n {
                b.add(j, i, -1);
            }
        }
    }
    b
}

/// The quadrilateral of the exchange relation
/// `x_γ x_τ2 = x_τ1 x_ρ + x_τ3 x_σ` for a chord `gamma = a -> b` that crosses
/// the triangulation. `tau2` is the first crossed arc, `tau1` and `tau3` are
/// the other sides of the first triangle (sharing `d` and `c` with `tau2`),
/// and `rho`, `sigma` are the arcs from `c` and `d` to `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quadrilateral {
    pub tau2: Arc,
    pub tau1: Arc,
    pub tau3: Arc,
    pub rho: Arc,
    pub sigma: Arc,
}

pub fn quadrilateral_of(t: &Triangulation, gamma: Arc) -> Result<Quadrilateral> {
    let first = t
        .crossings(gamma)?
        .first()
        .copied()
        .ok_or_else(|| SurfaceError::InvalidArc(format!("{gamma} crosses no arc")))?;
    let (a, b) = (gamma.start, gamma.end);
    let (c, d) = (first.chord.start, first.chord.end);
    Ok(Quadrilateral {
        tau2: first.chord,
        tau1: Arc::new(a, d),
        tau3: Arc::new(a, c),
        rho: Arc::new(c, b),
        sigma: Arc::new(d, b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strip(outer: usize, inner: usize) -> Cover {
        Cover::Strip { outer, inner }
    }

    #[test]
    fn polygon_crossings() {
        let c = Cover::Polygon { m: 8 };
        assert_eq!(c.crossing_number(Arc::chord(1, 3), Arc::chord(2, 6)), 1);
        assert_eq!(c.crossing_number(Arc::chord(1, 3), Arc::chord(3, 6)), 0);
        assert_eq!(c.crossing_number(Arc::chord(1, 3), Arc::chord(1, 3)), 0);
    }

    #[test]
    fn annulus_bridging_arcs_with_same_ends() {
        let c = strip(3, 1);
        let a = Arc::new(Pt::Out(0), Pt::In(0));
        let b = Arc::new(Pt::Out(0), Pt::In(1));
        assert_eq!(c.crossing_number(a, b), 0);
        let b2 = Arc::new(Pt::Out(0), Pt::In(2));
        assert_eq!(c.crossing_number(a, b2), 1);
        assert_eq!(c.crossing_number(b2, a), 1);
    }

    #[test]
    fn peripheral_arcs_past_their_boundary_cross_themselves() {
        let c = strip(2, 1);
        assert!(c.check_arc(Arc::new(Pt::Out(0), Pt::Out(2))).is_ok());
        assert!(c.check_arc(Arc::new(Pt::Out(0), Pt::Out(3))).is_err());
    }

    #[test]
    fn fan_triangulation_counts() {
        let t = Triangulation::standard(SurfaceSpec::Polygon { m: 6 }).unwrap();
        assert_eq!(t.rank(), 3);
        assert_eq!(t.triangles().len(), 4);
        let t = Triangulation::standard(SurfaceSpec::Annulus { outer: 2, inner: 3 }).unwrap();
        assert_eq!(t.rank(), 5);
        assert_eq!(t.triangles().len(), 5);
    }

    #[test]
    fn square_matrix_principal_part_vanishes() {
        let t = Triangulation::new(SurfaceSpec::Polygon { m: 4 }, vec![Arc::chord(0, 2)]).unwrap();
        let b = build_matrix(&t);
        assert_eq!(b.get(0, 0), 0);
        let col: Vec<i64> = (1..5).map(|i| b.get(i, 0)).collect();
        assert_eq!(col.iter().map(|v| v.abs()).sum::<i64>(), 4);
    }

    #[test]
    fn pentagon_flip() {
        let t = Triangulation::standard(SurfaceSpec::Polygon { m: 5 }).unwrap();
        let (t2, new) = t.flip(0).unwrap();
        assert_eq!(t.cover().unwrap().canonical(new.unwrap()), Arc::chord(1, 3));
        let (t3, _) = t2.flip(0).unwrap();
        assert!(t3.same_as(&t));
    }

    #[test]
    fn crossing_pair_rejected() {
        let err = Triangulation::new(
            SurfaceSpec::Polygon { m: 5 },
            vec![Arc::chord(0, 2), Arc::chord(1, 3)],
        )
        .unwrap_err();
        assert_eq!(err, SurfaceError::Crossing(1, 2));
    }

    #[test]
    fn degenerate_specs_rejected() {
        assert!(SurfaceSpec::Polygon { m: 3 }.validate().is_err());
        assert!(SurfaceSpec::Annulus { outer: 0, inner: 2 }.validate().is_err());
        assert!(SurfaceSpec::Annulus { outer: 1, inner: 1 }.validate().is_ok());
    }

    #[test]
    fn general_surface_rank() {
        for (g, bs) in [(1, vec![1]), (1, vec![2, 1]), (2, vec![1]), (0, vec![2, 1, 1])] {
            let s = SurfaceSpec::General {
                genus: g,
                boundaries: bs,
            };
            let t = Triangulation::standard(s.clone()).unwrap();
            assert_eq!(t.rank() as i64, s.rank());
            let b = build_matrix(&t);
            assert!(b.is_principal_skew_symmetric());
        }
    }

    #[test]
    fn annulus_json_round_trip() {
        let s = SurfaceSpec::Annulus { outer: 2, inner: 3 };
        let c = s.cover().unwrap();
        for v in [
            json!({"from":["out",1],"to":["in",2],"winding":-1}),
            json!({"from":["in",2],"to":["in",1],"winding":0}),
            json!({"from":["out",0],"to":["out",0],"winding":0}),
        ] {
            let a = arc_from_json(&s, &v).unwrap();
            let back = arc_from_json(&s, &arc_to_json(&c, a)).unwrap();
            assert_eq!(c.canonical(a), c.canonical(back));
        }
        assert!(arc_from_json(&s, &json!({"from":["in",0],"to":["in",1]})).is_ok());
        assert!(arc_from_json(&s, &json!({"from":["out",2],"to":["in",1]})).is_err());
    }
}
