//! Polytope sources and the JSON job format.

use std::path::Path;

use anyhow::{Context, Result};
use latsum::polytope::corpus;
use latsum::remainder::FunctionSpec;
use latsum::{Error, HPolytope, PolytopeJson};
use serde::{Deserialize, Serialize};

/// Accepts inline JSON (starting with `{`), an interval `[a,b]`, a corpus
/// name `corpus:NAME`, or a file path (`-` for stdin).
pub fn load_polytope(source: &str) -> Result<PolytopeJson> {
    let s = source.trim();
    if s.starts_with('{') {
        return Ok(PolytopeJson::parse(s)?);
    }
    if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let bad = || Error::Parse(format!("invalid interval `{s}`"));
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if a >= b {
            return Err(Error::Empty.into());
        }
        return Ok(PolytopeJson::from(&corpus::interval(a, b)));
    }
    if let Some(name) = s.strip_prefix("corpus:") {
        let h: HPolytope = corpus::named()
            .into_iter()
            .find(|(n, _)| *n == name)
            .map(|(_, h)| h)
            .ok_or_else(|| Error::Parse(format!("unknown corpus polytope `{name}`")))?;
        return Ok(PolytopeJson::from(&h));
    }
    let text = if s == "-" {
        std::io::read_to_string(std::io::stdin()).context("reading polytope from stdin")?
    } else {
        std::fs::read_to_string(Path::new(s))
            .with_context(|| format!("reading polytope file `{s}`"))?
    };
    Ok(PolytopeJson::parse(&text)?)
}

/// A complete invocation as JSON, for `latsum run`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Command,
    /// Any source accepted by [`load_polytope`], or an inline object.
    pub polytope: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    Sum,
    Count,
    VerifyPoly,
    VerifySmooth,
    Decompose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Table,
    Json,
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("job: {e}")).into())
    }

    pub fn polytope_source(&self) -> String {
        match &self.polytope {
            serde_json::Value::String(s) => s.clone(),
            other => other.to_string(),
        }
    }
}
