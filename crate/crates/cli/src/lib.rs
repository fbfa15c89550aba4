//! Driver behind the `clsurf` binary: job parsing, the four expansion
//! methods, output rendering and the randomized check suite.

pub mod check;

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Value};
use thiserror::Error;

use cluster_surface::mutant::{build_context, enumerate_gpaths, sign_exponent, signed_sum, substitute_mutants};
use cluster_surface::oracle::{expand_mutation_sequence, expand_recursive, OracleError};
use cluster_surface::surface::{arc_from_json, arc_to_json};
use cluster_surface::tpaths::enumerate_tpaths;
use cluster_surface::{Arc, LaurentError, LaurentPoly, SurfaceError, Triangulation};

/// Failure classes, one per non-zero exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Property(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Property(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<SurfaceError> for CliError {
    fn from(e: SurfaceError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Surface(s) => s.into(),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<LaurentError> for CliError {
    fn from(e: LaurentError) -> Self {
        CliError::Internal(e.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Tpath,
    Recursive,
    MutationSequence,
    Mutant,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Tpath => "tpath",
            Method::Recursive => "recursive",
            Method::MutationSequence => "mutation-sequence",
            Method::Mutant => "mutant",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Poly,
    Paths,
    Fraction,
    Json,
}

/// A parsed job: the triangulation and the arcs to expand. `method` and
/// `output` are optional defaults that command-line flags override.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub triangulation: Triangulation,
    pub targets: Vec<Arc>,
    pub method: Option<Method>,
    pub output: Option<Output>,
}

fn enum_field<T: ValueEnum>(v: &Value, key: &str) -> Result<Option<T>, CliError> {
    match v.get(key) {
        None => Ok(None),
        Some(s) => {
            let s = s
                .as_str()
                .ok_or_else(|| CliError::Input(format!("\"{key}\" must be a string")))?;
            T::from_str(s, false)
                .map(Some)
                .map_err(|_| CliError::Input(format!("unknown {key} {s:?}")))
        }
    }
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec, CliError> {
        let v: Value =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("job is not JSON: {e}")))?;
        JobSpec::from_json(&v)
    }

    /// `{"surface": …, "triangulation": […], "target": arc}` or
    /// `"targets": [arc, …]`.
    pub fn from_json(v: &Value) -> Result<JobSpec, CliError> {
        let triangulation = Triangulation::from_json(v)
            .map_err(|e| CliError::Input(format!("invalid triangulation: {e}")))?;
        let raw: Vec<&Value> = match (v.get("target"), v.get("targets")) {
            (Some(t), None) => vec![t],
            (None, Some(Value::Array(ts))) => ts.iter().collect(),
            (None, Some(_)) => return Err(CliError::Input("\"targets\" must be an array".into())),
            (Some(_), Some(_)) => {
                return Err(CliError::Input("give either \"target\" or \"targets\"".into()))
            }
            (None, None) => return Err(CliError::Input("missing \"target\"".into())),
        };
        if raw.is_empty() {
            return Err(CliError::Input("no targets".into()));
        }
        let targets = raw
            .into_iter()
            .map(|a| {
                arc_from_json(triangulation.surface(), a)
                    .map_err(|e| CliError::Input(format!("invalid target: {e}")))
            })
            .collect::<Result<_, _>>()?;
        Ok(JobSpec {
            triangulation,
            targets,
            method: enum_field(v, "method")?,
            output: enum_field(v, "output")?,
        })
    }
}

/// One step sequence: `T`-path labels or mutant-arc path labels with the
/// path's sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderedPath {
    pub labels: Vec<String>,
    pub sign: Option<i8>,
}

impl RenderedPath {
    fn text(&self) -> String {
        let body = format!("({})", self.labels.join(","));
        match self.sign {
            None => body,
            Some(s) if s > 0 => format!("+ {body}"),
            Some(_) => format!("- {body}"),
        }
    }

    fn to_json(&self) -> Value {
        match self.sign {
            None => json!({"steps": self.labels}),
            Some(s) => json!({"steps": self.labels, "sign": s}),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub target: Arc,
    pub poly: LaurentPoly,
    /// Only the path-based methods produce paths.
    pub paths: Option<Vec<RenderedPath>>,
    /// The mutant-arc sum before substituting the mutant variables.
    pub mutant_form: Option<LaurentPoly>,
}

/// Expands one target. Targets already in the triangulation are an input
/// error unless `allow_in_t` is set, in which case they expand to their own
/// variable by every method.
pub fn expand_one(
    t: &Triangulation,
    gamma: Arc,
    method: Method,
    allow_in_t: bool,
) -> Result<Expansion, CliError> {
    if let Some((i, fwd)) = t.identify(gamma) {
        if !allow_in_t {
            return Err(CliError::Input(format!(
                "target {gamma} is the arc t{} of the triangulation (pass --target-in-t to expand it)",
                i + 1
            )));
        }
        let label = format!("t{}{}", i + 1, if fwd { "" } else { "-" });
        let path = RenderedPath {
            labels: vec![label],
            sign: (method == Method::Mutant).then_some(1),
        };
        let paths = matches!(method, Method::Tpath | Method::Mutant).then(|| vec![path]);
        let poly = LaurentPoly::var(i as u32 + 1);
        return Ok(Expansion {
            target: gamma,
            mutant_form: (method == Method::Mutant).then(|| poly.clone()),
            poly,
            paths,
        });
    }
    t.crossings(gamma)?;
    let mut out = Expansion {
        target: gamma,
        poly: LaurentPoly::zero(),
        paths: None,
        mutant_form: None,
    };
    match method {
        Method::Tpath => {
            let paths = enumerate_tpaths(t, gamma)?;
            out.poly = paths.iter().map(|p| p.weight()).sum();
            out.paths = Some(
                paths
                    .iter()
                    .map(|p| RenderedPath {
                        labels: p.labels(),
                        sign: None,
                    })
                    .collect(),
            );
        }
        Method::Recursive => out.poly = expand_recursive(t, gamma)?,
        Method::MutationSequence => out.poly = expand_mutation_sequence(t, gamma)?,
        Method::Mutant => {
            let ctx = build_context(t, gamma)?;
            let paths = enumerate_gpaths(&ctx);
            let form = signed_sum(&ctx, &paths);
            out.poly = substitute_mutants(t, &form)?;
            out.mutant_form = Some(form);
            out.paths = Some(
                paths
                    .iter()
                    .map(|p| RenderedPath {
                        labels: p.steps.iter().map(|s| ctx.step_label(t, s)).collect(),
                        sign: Some(if sign_exponent(&ctx, p) % 2 == 0 { 1 } else { -1 }),
                    })
                    .collect(),
            );
        }
    }
    Ok(out)
}

/// `numerator / denominator`, or just the numerator for a polynomial.
pub fn fraction_text(p: &LaurentPoly) -> Result<String, CliError> {
    let (num, den) = p.reduced_fraction_form()?;
    Ok(if den.is_one() {
        num.to_string()
    } else {
        format!("({num}) / ({den})")
    })
}

/// Renders the expansions of a job. Output is a pure function of the
/// arguments.
pub fn render(
    t: &Triangulation,
    method: Method,
    output: Output,
    results: &[Expansion],
) -> Result<String, CliError> {
    let mut s = String::new();
    match output {
        Output::Poly => {
            for r in results {
                writeln!(s, "{}", r.poly).unwrap();
            }
        }
        Output::Fraction => {
            for r in results {
                writeln!(s, "{}", fraction_text(&r.poly)?).unwrap();
            }
        }
        Output::Paths => {
            for (i, r) in results.iter().enumerate() {
                let paths = r.paths.as_ref().ok_or_else(|| {
                    CliError::Input(format!(
                        "method {} produces no paths (use tpath or mutant)",
                        method.name()
                    ))
                })?;
                if i > 0 {
                    s.push('\n');
                }
                for p in paths {
                    writeln!(s, "{}", p.text()).unwrap();
                }
            }
        }
        Output::Json => {
            let cover = t.cover().ok_or(SurfaceError::Unsupported)?;
            let items: Vec<Value> = results
                .iter()
                .map(|r| {
                    let mut o = json!({
                        "target": arc_to_json(&cover, r.target),
                        "text": r.poly.to_string(),
                        "expansion": r.poly.to_json(),
                    });
                    if let Some(paths) = &r.paths {
                        o["paths"] = paths.iter().map(RenderedPath::to_json).collect();
                    }
                    if let Some(m) = &r.mutant_form {
                        o["mutant_text"] = json!(m.to_string());
                        o["mutant_expansion"] = m.to_json();
                    }
                    o
                })
                .collect();
            let doc = json!({"method": method.name(), "results": items});
            writeln!(s, "{}", serde_json::to_string_pretty(&doc).unwrap()).unwrap();
        }
    }
    Ok(s)
}

/// The whole `expand` command on an already-read job.
pub fn cmd_expand(
    job: &JobSpec,
    method: Option<Method>,
    output: Option<Output>,
    allow_in_t: bool,
) -> Result<String, CliError> {
    let method = method.or(job.method).unwrap_or(Method::Tpath);
    let output = output.or(job.output).unwrap_or(Output::Poly);
    let t = &job.triangulation;
    if t.cover().is_none() {
        return Err(CliError::Input(format!(
            "expansions are not supported on {}",
            t.surface()
        )));
    }
    let results = job
        .targets
        .iter()
        .map(|&g| expand_one(t, g, method, allow_in_t))
        .collect::<Result<Vec<_>, _>>()?;
    render(t, method, output, &results)
}
