//! Randomized invariant checks over seeded instance families, plus the
//! golden-file comparisons.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use clap::ValueEnum;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use cluster_surface::golden::Golden;
use cluster_surface::instances::{random_annulus, random_polygon, Instance, SplitMix64};
use cluster_surface::mutant::{build_context, expand_theorem2_ctx, substitute_mutants};
use cluster_surface::oracle::{expand_mutation_sequence, expand_recursive, mutate_seed, Recursion, Seed};
use cluster_surface::surface::arc_to_json;
use cluster_surface::tpaths::{enumerate_tpaths, expand_theorem1};
use cluster_surface::{build_matrix, Arc, LaurentPoly, Triangulation};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Polygon,
    Annulus,
}

pub const CHECKS: [&str; 7] = [
    "oracle-equivalence",
    "positivity",
    "multiplicity-one",
    "denominator-discipline",
    "flip-involution",
    "matrix-shape",
    "recursion-metric",
];

const ORACLE: usize = 0;
const POSITIVITY: usize = 1;
const MULTIPLICITY: usize = 2;
const DENOMINATOR: usize = 3;
const FLIP: usize = 4;
const MATRIX: usize = 5;
const METRIC: usize = 6;

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub family: Family,
    pub trials: usize,
    pub seed: u64,
    pub max_m: usize,
    pub max_winding: i64,
    pub golden: Vec<Golden>,
}

impl CheckConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.trials == 0 && self.golden.is_empty() {
            return Err(CliError::Input("--trials must be at least 1".into()));
        }
        let min = match self.family {
            Family::Polygon => 4,
            Family::Annulus => 2,
        };
        if self.max_m < min {
            return Err(CliError::Input(format!("--max-m must be at least {min}")));
        }
        if self.max_winding < 0 {
            return Err(CliError::Input("--max-winding must be non-negative".into()));
        }
        Ok(())
    }

    pub fn instance(&self, trial: usize) -> Instance {
        let mut rng = SplitMix64::for_trial(self.seed, trial as u64);
        match self.family {
            Family::Polygon => random_polygon(&mut rng, 4, self.max_m),
            Family::Annulus => random_annulus(&mut rng, self.max_m, self.max_winding),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckSummary {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub millis: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GoldenSummary {
    pub name: String,
    pub paths: bool,
    pub tpath: bool,
    pub recursive: bool,
    pub matrix: Option<bool>,
    pub millis: f64,
}

impl GoldenSummary {
    pub fn ok(&self) -> bool {
        self.paths && self.tpath && self.recursive && self.matrix != Some(false)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub family: Family,
    pub seed: u64,
    pub trials: usize,
    pub max_m: usize,
    pub max_winding: i64,
    pub checks: Vec<CheckSummary>,
    pub golden: Vec<GoldenSummary>,
    pub ok: bool,
    pub counterexample: Option<Value>,
    pub millis: f64,
}

#[derive(Clone, Debug)]
struct Failure {
    check: usize,
    trial: usize,
    target: Option<Arc>,
    /// Crossing count of the target (0 for instance-level checks): the
    /// counterexample with the smallest size is reported.
    size: usize,
    detail: String,
}

#[derive(Default)]
struct Tally {
    passed: [usize; 7],
    failed: [usize; 7],
    skipped: [usize; 7],
    time: [Duration; 7],
    failures: Vec<Failure>,
}

impl Tally {
    fn timed<T>(&mut self, check: usize, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.time[check] += start.elapsed();
        out
    }

    fn record(&mut self, check: usize, trial: usize, target: Option<Arc>, size: usize, result: Result<(), String>) {
        match result {
            Ok(()) => self.passed[check] += 1,
            Err(detail) => {
                self.failed[check] += 1;
                self.failures.push(Failure {
                    check,
                    trial,
                    target,
                    size,
                    detail,
                });
            }
        }
    }
}

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

/// Denominator exponents of `x` are bounded by the crossing numbers
/// `e(γ, τ_i)`, with equality unless `τ_i` is a loop (a loop crossed twice
/// in a row by `γ` can contribute only once).
fn denominator_matches(t: &Triangulation, gamma: Arc, x: &LaurentPoly) -> Result<(), String> {
    let (_, den) = x.reduced_fraction_form().map_err(|e| e.to_string())?;
    let cover = t.cover().ok_or("surface has no cover")?;
    let mut want: BTreeMap<u32, i32> = BTreeMap::new();
    for c in t.crossings(gamma).map_err(|e| e.to_string())? {
        *want.entry(c.arc as u32 + 1).or_default() += 1;
    }
    for v in 1..=t.rank() as u32 {
        let arc = t.arc(v as usize - 1).ok_or("missing arc")?;
        let is_loop = cover.project(arc.start) == cover.project(arc.end);
        let (got, e) = (den.get(v), want.get(&v).copied().unwrap_or(0));
        ensure(got <= e && (is_loop || got == e), || {
            format!("x{v} has denominator exponent {got}, crossing number {e}")
        })?;
    }
    let interior = den.iter().all(|(v, _)| v as usize <= t.rank());
    ensure(interior, || format!("boundary variable in denominator {den}"))
}

fn mutant_discipline(t: &Triangulation, gamma: Arc, x: &LaurentPoly) -> Result<(), String> {
    let ctx = build_context(t, gamma).map_err(|e| e.to_string())?;
    let form = expand_theorem2_ctx(&ctx);
    let back = substitute_mutants(t, &form).map_err(|e| e.to_string())?;
    ensure(&back == x, || format!("mutant sum substitutes to {back}"))?;
    let (_, den) = form.reduced_fraction_form().map_err(|e| e.to_string())?;
    let e = ctx.e_arcs();
    let inside = den.iter().all(|(v, _)| e.contains(&(v as usize - 1)));
    ensure(inside, || format!("mutant denominator {den} outside E = {e:?}"))
}

fn run_trial(cfg: &CheckConfig, trial: usize) -> Tally {
    let inst = cfg.instance(trial);
    let t = &inst.triangulation;
    let polygon = cfg.family == Family::Polygon;
    let mut tally = Tally::default();

    for &g in &inst.targets {
        let size = t.crossing_count(g).unwrap_or(0);
        let x = match tally.timed(ORACLE, || expand_theorem1(t, g)) {
            Ok(x) => x,
            Err(e) => {
                tally.record(ORACLE, trial, Some(g), size, Err(format!("tpath: {e}")));
                continue;
            }
        };
        let mut rec = Recursion::new(t).expect("sampled surfaces are coverable");
        let result = tally.timed(ORACLE, || {
            let xr = rec.expand(g).map_err(|e| format!("recursive: {e}"))?;
            ensure(xr == x, || format!("recursive gives {xr}, tpath gives {x}"))?;
            let paths = enumerate_tpaths(t, g).map_err(|e| e.to_string())?;
            ensure(paths.len() == x.coefficient_sum().try_into().unwrap_or(usize::MAX), || {
                format!("{} paths for coefficient sum {}", paths.len(), x.coefficient_sum())
            })?;
            if polygon {
                let xm = expand_mutation_sequence(t, g).map_err(|e| format!("mutation sequence: {e}"))?;
                ensure(xm == x, || format!("mutation sequence gives {xm}"))?;
            }
            Ok(())
        });
        tally.record(ORACLE, trial, Some(g), size, result);

        let r = tally.timed(POSITIVITY, || ensure(x.is_positive(), || format!("{x}")));
        tally.record(POSITIVITY, trial, Some(g), size, r);

        if polygon {
            let r = tally.timed(MULTIPLICITY, || {
                ensure(x.all_coefficients_one(), || format!("{x}"))
            });
            tally.record(MULTIPLICITY, trial, Some(g), size, r);
        } else {
            tally.skipped[MULTIPLICITY] += 1;
        }

        let r = tally.timed(DENOMINATOR, || {
            denominator_matches(t, g, &x)?;
            mutant_discipline(t, g, &x)
        });
        tally.record(DENOMINATOR, trial, Some(g), size, r);

        let r = tally.timed(METRIC, || {
            match rec.steps.iter().find(|s| s.children.iter().any(|&c| c >= s.crossings)) {
                None => Ok(()),
                Some(s) => Err(format!("{} with {} crossings -> {:?}", s.arc, s.crossings, s.children)),
            }
        });
        tally.record(METRIC, trial, Some(g), size, r);
    }

    let b = build_matrix(t);
    let r = tally.timed(MATRIX, || {
        let (rows, cols) = (t.rank() + t.num_boundary(), t.rank());
        ensure(b.rows() == rows && b.cols() == cols, || {
            format!("matrix is {}x{}, want {rows}x{cols}", b.rows(), b.cols())
        })?;
        ensure(b.is_principal_skew_symmetric(), || "principal part not skew-symmetric".into())?;
        ensure(b.max_abs_entry() <= 2, || format!("entry of size {}", b.max_abs_entry()))
    });
    tally.record(MATRIX, trial, None, 0, r);

    let seed = Seed::initial(t);
    for k in 0..t.rank() {
        let r = tally.timed(FLIP, || {
            let (once, _) = t.flip(k).map_err(|e| e.to_string())?;
            let (twice, _) = once.flip(k).map_err(|e| e.to_string())?;
            ensure(twice.same_as(t), || format!("flipping t{} twice changes T", k + 1))?;
            ensure(b.mutate(k).mutate(k) == b, || format!("mutating B at {} twice", k + 1))?;
            ensure(build_matrix(&once) == b.mutate(k), || {
                format!("B of the flip at t{} is not the mutation of B", k + 1)
            })?;
            let s1 = mutate_seed(&seed, k).map_err(|e| e.to_string())?;
            let s2 = mutate_seed(&s1, k).map_err(|e| e.to_string())?;
            ensure(s2.same_as(&seed), || format!("seed mutation at {} twice", k + 1))
        });
        tally.record(FLIP, trial, None, 0, r);
    }
    tally
}

fn check_golden(g: &Golden) -> GoldenSummary {
    let start = Instant::now();
    let t = &g.triangulation;
    let mut got: Vec<String> = enumerate_tpaths(t, g.target)
        .map(|ps| ps.iter().map(|p| p.to_string()).collect())
        .unwrap_or_default();
    got.sort();
    let mut want = g.paths.clone();
    want.sort();
    let tpath = expand_theorem1(t, g.target).ok().as_ref() == Some(&g.expansion);
    let recursive = expand_recursive(t, g.target).ok().as_ref() == Some(&g.expansion);
    let matrix = g
        .exchange_matrix
        .as_ref()
        .map(|m| &build_matrix(t).to_rows() == m);
    GoldenSummary {
        name: g.name.clone(),
        paths: got == want,
        tpath,
        recursive,
        matrix,
        millis: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn counterexample(cfg: &CheckConfig, f: &Failure) -> Value {
    let inst = cfg.instance(f.trial);
    let t = &inst.triangulation;
    let mut job = t.to_json().unwrap_or(Value::Null);
    if let (Some(g), Some(cover)) = (f.target, t.cover()) {
        job["target"] = arc_to_json(&cover, g);
    }
    json!({
        "check": CHECKS[f.check],
        "trial": f.trial,
        "seed": cfg.seed,
        "crossings": f.size,
        "detail": f.detail,
        "job": job,
    })
}

/// Runs every trial (in parallel; results are merged in trial order) and
/// the golden comparisons.
pub fn cmd_check(cfg: &CheckConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let tallies: Vec<Tally> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect();
    let mut checks: Vec<CheckSummary> = CHECKS
        .iter()
        .map(|&name| CheckSummary {
            name,
            ..Default::default()
        })
        .collect();
    let mut failures = Vec::new();
    for tally in tallies {
        for (i, c) in checks.iter_mut().enumerate() {
            c.passed += tally.passed[i];
            c.failed += tally.failed[i];
            c.skipped += tally.skipped[i];
            c.millis += tally.time[i].as_secs_f64() * 1e3;
        }
        failures.extend(tally.failures);
    }
    let golden: Vec<GoldenSummary> = cfg.golden.iter().map(check_golden).collect();
    let smallest = failures
        .iter()
        .min_by_key(|f| (f.size, f.trial, f.check));
    let ok = failures.is_empty() && golden.iter().all(GoldenSummary::ok);
    Ok(Report {
        family: cfg.family,
        seed: cfg.seed,
        trials: cfg.trials,
        max_m: cfg.max_m,
        max_winding: cfg.max_winding,
        checks,
        golden,
        ok,
        counterexample: smallest.map(|f| counterexample(cfg, f)),
        millis: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Pass/fail table. Timings are left out so the table is reproducible.
pub fn table(r: &Report) -> String {
    let mut s = String::new();
    let family = match r.family {
        Family::Polygon => "polygon",
        Family::Annulus => "annulus",
    };
    writeln!(
        s,
        "family {family}, {} trials, seed {}, max-m {}, max-winding {}",
        r.trials, r.seed, r.max_m, r.max_winding
    )
    .unwrap();
    if r.trials > 0 {
        writeln!(s, "{:<24} {:>8} {:>8} {:>8}  status", "check", "passed", "failed", "skipped").unwrap();
        for c in &r.checks {
            let status = if c.failed == 0 { "PASS" } else { "FAIL" };
            writeln!(
                s,
                "{:<24} {:>8} {:>8} {:>8}  {status}",
                c.name, c.passed, c.failed, c.skipped
            )
            .unwrap();
        }
    }
    for g in &r.golden {
        let status = if g.ok() { "PASS" } else { "FAIL" };
        let matrix = match g.matrix {
            None => "n/a",
            Some(true) => "ok",
            Some(false) => "differs",
        };
        writeln!(
            s,
            "golden {:<17} paths {}, tpath {}, recursive {}, matrix {matrix}  {status}",
            g.name,
            if g.paths { "ok" } else { "differs" },
            if g.tpath { "ok" } else { "differs" },
            if g.recursive { "ok" } else { "differs" },
        )
        .unwrap();
    }
    writeln!(s, "{}", if r.ok { "all checks passed" } else { "FAILED" }).unwrap();
    s
}
