//! Worked examples with their expected T-path sets and expansions.
//!
//! A golden file holds a triangulation in the usual JSON schema, a target
//! arc, the `expected` path list and expansion, and `frozen` values that
//! were computed once by this crate and cross-checked independently.

use std::path::Path;

use serde_json::Value;

use crate::laurent::LaurentPoly;
use crate::surface::{arc_from_json, Arc, SurfaceError, Triangulation};

pub const OCTAGON: &str = include_str!("../golden/octagon.json");
pub const ANNULUS: &str = include_str!("../golden/annulus.json");

#[derive(Debug, thiserror::Error)]
pub enum GoldenError {
    #[error("reading golden file: {0}")]
    Io(#[from] std::io::Error),
    #[error("golden file is not JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("golden file: {0}")]
    Field(String),
}

#[derive(Clone, Debug)]
pub struct Golden {
    pub name: String,
    pub triangulation: Triangulation,
    pub target: Arc,
    pub paths: Vec<String>,
    pub expansion: LaurentPoly,
    pub exchange_matrix: Option<Vec<Vec<i64>>>,
}

impl Golden {
    pub fn parse(text: &str) -> Result<Golden, GoldenError> {
        Golden::from_json(&serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Golden, GoldenError> {
        Golden::parse(&std::fs::read_to_string(path)?)
    }

    pub fn from_json(v: &Value) -> Result<Golden, GoldenError> {
        let field = |k: &str| v.get(k).ok_or_else(|| GoldenError::Field(format!("missing {k:?}")));
        let triangulation = Triangulation::from_json(v)?;
        let target = arc_from_json(triangulation.surface(), field("target")?)?;
        let expected = field("expected")?;
        let paths = expected
            .get("paths")
            .and_then(Value::as_array)
            .ok_or_else(|| GoldenError::Field("missing expected.paths".into()))?
            .iter()
            .map(|p| {
                p.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| GoldenError::Field("path labels are strings".into()))
            })
            .collect::<Result<_, _>>()?;
        let expansion = expected
            .get("expansion")
            .and_then(Value::as_str)
            .ok_or_else(|| GoldenError::Field("missing expected.expansion".into()))?
            .parse()
            .map_err(|e| GoldenError::Field(format!("expected.expansion: {e}")))?;
        let exchange_matrix = match v.get("frozen").and_then(|f| f.get("exchange_matrix")) {
            Some(m) => Some(serde_json::from_value(m.clone())?),
            None => None,
        };
        Ok(Golden {
            name: v.get("name").and_then(Value::as_str).unwrap_or("unnamed").to_string(),
            triangulation,
            target,
            paths,
            expansion,
            exchange_matrix,
        })
    }

    pub fn builtin() -> Vec<Golden> {
        [OCTAGON, ANNULUS]
            .iter()
            .map(|s| Golden::parse(s).expect("bundled golden files parse"))
            .collect()
    }
}
