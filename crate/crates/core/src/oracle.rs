//! Independent computations of cluster variables: plain seed mutation along
//! a flip sequence, and a recursion on five-arc exchange relations that
//! strictly lowers the number of crossings with the triangulation.

use std::collections::HashMap;

use thiserror::Error;

use crate::laurent::{LaurentError, LaurentPoly};
use crate::surface::{build_matrix, Arc, Cover, ExtendedMatrix, Pt, SurfaceError, Triangulation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    /// Exact division failed; by the Laurent phenomenon this is a bug.
    #[error("exact division failed while expanding {0}")]
    Division(String, #[source] LaurentError),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Cluster variables of a seed expressed in the initial variables, with
/// the extended matrix and the matching triangulation.
#[derive(Clone, Debug)]
pub struct Seed {
    pub cluster: Vec<LaurentPoly>,
    pub matrix: ExtendedMatrix,
    pub triangulation: Triangulation,
}

impl Seed {
    pub fn initial(t: &Triangulation) -> Seed {
        Seed {
            cluster: (1..=t.rank() as u32).map(LaurentPoly::var).collect(),
            matrix: build_matrix(t),
            triangulation: t.clone(),
        }
    }

    /// Variable of row `i` of the extended matrix (frozen rows are plain
    /// boundary variables).
    pub fn variable(&self, i: usize) -> LaurentPoly {
        match self.cluster.get(i) {
            Some(p) => p.clone(),
            None => LaurentPoly::var(i as u32 + 1),
        }
    }

    pub fn same_as(&self, other: &Seed) -> bool {
        self.cluster == other.cluster
            && self.matrix == other.matrix
            && self.triangulation.same_as(&other.triangulation)
    }
}

/// The two exchange monomials of column `k`, as products of row variables.
fn exchange_numerator(s: &Seed, k: usize) -> LaurentPoly {
    let mut plus = LaurentPoly::one();
    let mut minus = LaurentPoly::one();
    for i in 0..s.matrix.rows() {
        let b = s.matrix.get(i, k);
        if b > 0 {
            plus = &plus * &s.variable(i).pow(b as u32);
        } else if b < 0 {
            minus = &minus * &s.variable(i).pow((-b) as u32);
        }
    }
    &plus + &minus
}

/// Mutation in direction `k` (0-based internal arc index).
pub fn mutate_seed(s: &Seed, k: usize) -> Result<Seed> {
    let (triangulation, _) = s.triangulation.flip(k)?;
    let num = exchange_numerator(s, k);
    let new = num
        .exact_div(&s.cluster[k])
        .map_err(|e| OracleError::Division(format!("mutation at t{}", k + 1), e))?;
    let mut cluster = s.cluster.clone();
    cluster[k] = new;
    Ok(Seed {
        cluster,
        matrix: s.matrix.mutate(k),
        triangulation,
    })
}

/// Expression of the flip of `τ_k` in the initial variables of `t`:
/// one mutation step from the initial seed.
pub fn flipped_variable(t: &Triangulation, k: usize) -> Result<LaurentPoly> {
    Ok(mutate_seed(&Seed::initial(t), k)?.cluster[k].clone())
}

/// Expansion of `gamma` by flipping the first arc it crosses until the
/// arc belongs to the triangulation.
pub fn expand_mutation_sequence(t: &Triangulation, gamma: Arc) -> Result<LaurentPoly> {
    let mut seed = Seed::initial(t);
    let mut last = usize::MAX;
    loop {
        if let Some((i, _)) = seed.triangulation.identify(gamma) {
            return Ok(seed.variable(i));
        }
        let crossings = seed.triangulation.crossings(gamma)?;
        if crossings.len() >= last {
            return Err(OracleError::Internal(format!(
                "flip sequence for {gamma} stopped reducing crossings"
            )));
        }
        last = crossings.len();
        seed = mutate_seed(&seed, crossings[0].arc)?;
    }
}

/// Index `ℓ` (1-based position along `τ`) whose β-label is midmost among
/// `k` crossings; ties go to the smallest position.
pub fn select_midmost(k: usize, labels: &[usize]) -> usize {
    let dist = |i: usize| (k as i64 + 1 - 2 * i as i64).abs();
    let mut best = 0;
    for (p, &i) in labels.iter().enumerate() {
        if dist(i) < dist(labels[best]) {
            best = p;
        }
    }
    best + 1
}

/// Endpoints used by the concatenation descriptors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    A,
    B,
    C,
    D,
}

/// One of the five arcs: endpoints plus the τ-positions it passes through.
#[derive(Clone, Copy, Debug)]
enum Desc {
    /// `(X, i_p, i_q, Y | β^±, τ^±, β^±)`
    Through(End, usize, usize, End),
    /// `(X, i_p, c | β^±, τ^±)` with `c` or `d` as the end.
    ToTau(End, usize, End),
    /// `(c, i_q, Y | τ^±, β^±)`
    FromTau(End, usize, End),
    /// The arc `τ` itself.
    Tau,
}

/// The five arcs of one recursion step, in the order
/// `β', ρ1, ρ2, σ1, σ2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiveArcs {
    pub beta_prime: Arc,
    pub rho1: Arc,
    pub rho2: Arc,
    pub sigma1: Arc,
    pub sigma2: Arc,
}

impl FiveArcs {
    pub fn all(&self) -> [Arc; 5] {
        [self.beta_prime, self.rho1, self.rho2, self.sigma1, self.sigma2]
    }
}

/// Record of one recursion step for the crossing-reduction check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub arc: Arc,
    pub crossings: usize,
    /// Crossing counts of `β', ρ1, ρ2, σ1, σ2`.
    pub children: [usize; 5],
}

struct Lifted {
    cover: Cover,
    a: Pt,
    b: Pt,
    c0: Pt,
    d0: Pt,
    /// Deck power of the lift of `τ` at each position along `τ` (1-based).
    shifts: Vec<i64>,
}

impl Lifted {
    fn resolve(&self, d: Desc, tau: Arc) -> Arc {
        let cv = &self.cover;
        let s = |p: usize| self.shifts[p - 1];
        let beta_end = |e: End| match e {
            End::A => self.a,
            End::B => self.b,
            _ => unreachable!("β endpoints are a or b"),
        };
        let tau_end = |e: End, p: usize| match e {
            End::C => cv.shift(self.c0, s(p)),
            End::D => cv.shift(self.d0, s(p)),
            _ => unreachable!("τ endpoints are c or d"),
        };
        match d {
            Desc::Through(x, p, q, y) => Arc::new(beta_end(x), cv.shift(beta_end(y), s(p) - s(q))),
            Desc::ToTau(x, p, e) => Arc::new(beta_end(x), tau_end(e, p)),
            Desc::FromTau(e, q, y) => Arc::new(tau_end(e, q), beta_end(y)),
            Desc::Tau => tau,
        }
    }
}

/// Builds the five arcs for the cover chord `beta`, which must cross the
/// triangulation at least twice.
///
/// `τ` is the arc of the first crossing unless that choice degenerates
/// (a constructed arc is not a valid arc, or does not cross fewer times
/// than `beta`); then the crossed arcs are tried in order of their first
/// crossing. This happens for loops around a hole crossed twice by
/// another such loop.
pub fn five_arcs(t: &Triangulation, beta: Arc) -> Result<FiveArcs> {
    let cover = t.cover().ok_or(SurfaceError::Unsupported)?;
    let crossings = t.crossings(beta)?;
    let k = crossings.len();
    let mut candidates: Vec<usize> = Vec::new();
    for c in &crossings {
        if !candidates.contains(&c.arc) {
            candidates.push(c.arc);
        }
    }
    let mut first = None;
    for &tau in &candidates {
        let five = five_arcs_with(t, beta, tau)?;
        let reduces = five.all().iter().all(|&a| {
            cover.check_arc(a).is_ok() && t.crossing_count(a).is_ok_and(|c| c < k)
        });
        if reduces {
            return Ok(five);
        }
        first.get_or_insert(five);
    }
    first.ok_or_else(|| OracleError::Internal(format!("{beta} crosses nothing")))
}

/// The five arcs for `beta` built from the lifts of the given arc `τ`,
/// which must cross `beta`.
pub fn five_arcs_with(t: &Triangulation, beta: Arc, tau_idx: usize) -> Result<FiveArcs> {
    let cover = t.cover().ok_or(SurfaceError::Unsupported)?;
    let crossings = t.crossings(beta)?;
    let k = crossings.len();
    if !crossings.iter().any(|c| c.arc == tau_idx) {
        return Err(OracleError::Internal(format!("{beta} does not cross t{}", tau_idx + 1)));
    }
    let tau0 = t.arc(tau_idx).expect("internal arc");

    // Lifts of τ crossing β̃: (β-label, deck power relative to τ̃⁰).
    let mut lifts = Vec::new();
    for (i, c) in crossings.iter().enumerate() {
        if c.arc != tau_idx {
            continue;
        }
        let (_, forward) = t.identify(c.chord).expect("crossing is a lifted arc");
        let start = if forward { c.chord.start } else { c.chord.end };
        let s = cover.period(start) - cover.period(tau0.start);
        debug_assert_eq!(cover.shift_arc(tau0, s), if forward { c.chord } else { c.chord.reversed() });
        lifts.push((i + 1, s));
    }
    // Order along τ̃⁰: translates shift_{-s}(β̃) crossing τ̃⁰.
    lifts.sort_by(|x, y| {
        let bx = cover.orient_across(tau0, cover.shift_arc(beta, -x.1));
        let by = cover.orient_across(tau0, cover.shift_arc(beta, -y.1));
        cover.cmp_along(tau0, bx, by)
    });
    let mut labels: Vec<usize> = lifts.iter().map(|x| x.0).collect();
    let shifts: Vec<i64> = lifts.iter().map(|x| x.1).collect();
    let r = labels.len();
    let mut lifted = Lifted {
        cover,
        a: beta.start,
        b: beta.end,
        c0: tau0.start,
        d0: tau0.end,
        shifts,
    };
    let tau_lift = cover.shift_arc(tau0, lifted.shifts[0]);

    use Desc::*;
    use End::*;
    let descs: [Desc; 5] = if r == 1 {
        [Tau, ToTau(A, 1, C), FromTau(D, 1, B), FromTau(C, 1, B), ToTau(A, 1, D)]
    } else {
        let l = select_midmost(k, &labels);
        if l > 1 && labels[l - 2] > labels[l - 1] {
            // Symmetric cases: read β backwards.
            for i in labels.iter_mut() {
                *i = k + 1 - *i;
            }
            std::mem::swap(&mut lifted.a, &mut lifted.b);
        }
        let case2 = l < r && labels[l] > labels[l - 1];
        if !case2 {
            // i_{ℓ-1} < i_ℓ and i_{ℓ+1} < i_ℓ
            let mut d = [
                Through(A, l.wrapping_sub(1), l + 1, A),
                Through(A, l, l.wrapping_sub(1), A),
                Through(B, l, l + 1, A),
                Through(A, l.wrapping_sub(1), l, B),
                Through(A, l + 1, l, A),
            ];
            if l == 1 {
                d[0] = FromTau(C, l + 1, A);
                d[1] = ToTau(A, l, C);
                d[3] = FromTau(C, l, B);
            }
            if l == r {
                d[0] = ToTau(A, l - 1, D);
                d[2] = ToTau(B, l, D);
                d[4] = FromTau(D, l, A);
            }
            d
        } else {
            // i_{ℓ-1} < i_ℓ < i_{ℓ+1}
            let mut d = [
                Through(A, l.wrapping_sub(1), l + 1, B),
                Through(A, l.wrapping_sub(1), l, A),
                Through(B, l + 1, l, B),
                Through(A, l, l + 1, B),
                Through(B, l, l.wrapping_sub(1), A),
            ];
            if l == 1 {
                d[0] = FromTau(C, l + 1, B);
                d[1] = FromTau(C, l, A);
                d[4] = ToTau(B, l, C);
            }
            if l == r {
                d[0] = ToTau(A, l - 1, D);
                d[2] = FromTau(D, l, B);
                d[3] = ToTau(A, l, D);
            }
            d
        }
    };
    let arcs = descs.map(|d| lifted.resolve(d, tau_lift));
    Ok(FiveArcs {
        beta_prime: arcs[0],
        rho1: arcs[1],
        rho2: arcs[2],
        sigma1: arcs[3],
        sigma2: arcs[4],
    })
}

/// Memoized recursive expansion on one triangulation.
pub struct Recursion<'t> {
    t: &'t Triangulation,
    cover: Cover,
    memo: HashMap<Arc, LaurentPoly>,
    /// One record per evaluated (non-memoized, non-trivial) arc.
    pub steps: Vec<StepRecord>,
}

impl<'t> Recursion<'t> {
    pub fn new(t: &'t Triangulation) -> Result<Self> {
        let cover = t.cover().ok_or(SurfaceError::Unsupported)?;
        Ok(Recursion {
            t,
            cover,
            memo: HashMap::new(),
            steps: Vec::new(),
        })
    }

    pub fn expand(&mut self, beta: Arc) -> Result<LaurentPoly> {
        self.cover
            .check_arc(beta)
            .map_err(|e| OracleError::Internal(format!("constructed invalid arc: {e}")))?;
        if let Some((i, _)) = self.t.identify(beta) {
            return Ok(LaurentPoly::var(i as u32 + 1));
        }
        let key = self.cover.canonical(beta);
        if let Some(p) = self.memo.get(&key) {
            return Ok(p.clone());
        }
        let k = self.t.crossing_count(beta)?;
        let five = five_arcs(self.t, beta)?;
        let mut children = [0usize; 5];
        for (slot, a) in children.iter_mut().zip(five.all()) {
            *slot = self.t.crossing_count(a)?;
        }
        self.steps.push(StepRecord {
            arc: key,
            crossings: k,
            children,
        });
        if children.iter().any(|&c| c >= k) {
            return Err(OracleError::Internal(format!(
                "five-arc step for {beta} did not reduce crossings: {k} -> {children:?}"
            )));
        }
        let bp = self.expand(five.beta_prime)?;
        let r1 = self.expand(five.rho1)?;
        let r2 = self.expand(five.rho2)?;
        let s1 = self.expand(five.sigma1)?;
        let s2 = self.expand(five.sigma2)?;
        let num = &(&r1 * &r2) + &(&s1 * &s2);
        let value = num
            .exact_div(&bp)
            .map_err(|e| OracleError::Division(beta.to_string(), e))?;
        self.memo.insert(key, value.clone());
        Ok(value)
    }
}

/// `x_β` by the recursive five-arc exchange relations.
pub fn expand_recursive(t: &Triangulation, beta: Arc) -> Result<LaurentPoly> {
    Recursion::new(t)?.expand(beta)
}

/// The Ptolemy-type monomial pair of a single exchange, for tests and
/// diagnostics: `x_τ1 x_ρ + x_τ3 x_σ`, with `ρ`, `σ` expanded recursively.
pub fn exchange_rhs(t: &Triangulation, q: &crate::surface::Quadrilateral) -> Result<LaurentPoly> {
    let mut rec = Recursion::new(t)?;
    let t1 = rec.expand(q.tau1)?;
    let t3 = rec.expand(q.tau3)?;
    let rho = rec.expand(q.rho)?;
    let sigma = rec.expand(q.sigma)?;
    Ok(&(&t1 * &rho) + &(&t3 * &sigma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::SurfaceSpec;

    #[test]
    fn ptolemy_on_the_square() {
        let t = Triangulation::new(SurfaceSpec::Polygon { m: 4 }, vec![Arc::chord(0, 2)]).unwrap();
        let s = mutate_seed(&Seed::initial(&t), 0).unwrap();
        assert_eq!(s.cluster[0], "x1^-1*x2*x4 + x1^-1*x3*x5".parse().unwrap());
        let back = mutate_seed(&s, 0).unwrap();
        assert!(back.same_as(&Seed::initial(&t)));
    }

    #[test]
    fn midmost_ties_pick_first() {
        assert_eq!(select_midmost(4, &[2, 3]), 1);
        assert_eq!(select_midmost(4, &[3, 2]), 1);
        assert_eq!(select_midmost(5, &[1, 3, 5]), 2);
        assert_eq!(select_midmost(12, &[1, 6, 11]), 2);
    }

    #[test]
    fn recursion_matches_mutation_on_hexagon() {
        let t = Triangulation::standard(SurfaceSpec::Polygon { m: 6 }).unwrap();
        let g = Arc::chord(1, 5);
        assert_eq!(
            expand_recursive(&t, g).unwrap(),
            expand_mutation_sequence(&t, g).unwrap()
        );
    }
}
