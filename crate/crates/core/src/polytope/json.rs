use serde::{Deserialize, Serialize};

use super::{HPolytope, SimplePolytope};
use crate::error::{Error, Result};

/// On-disk polytope: `{"dim", "normals", "offsets", "vertices"?}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeJson {
    pub dim: usize,
    pub normals: Vec<Vec<i64>>,
    pub offsets: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<i64>>>,
}

impl PolytopeJson {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polytope serializes")
    }

    pub fn to_hpolytope(&self) -> Result<HPolytope> {
        HPolytope::new(self.dim, self.normals.clone(), self.offsets.clone())
    }

    /// Validates, and cross-checks `vertices` when present.
    pub fn to_simple(&self) -> Result<SimplePolytope> {
        let h = self.to_hpolytope()?;
        match &self.vertices {
            Some(vs) => SimplePolytope::with_vertices(h, vs),
            None => SimplePolytope::new(h),
        }
    }
}

impl From<&HPolytope> for PolytopeJson {
    fn from(h: &HPolytope) -> Self {
        PolytopeJson {
            dim: h.dim(),
            normals: h.normals().to_vec(),
            offsets: h.offsets().to_vec(),
            vertices: None,
        }
    }
}

impl From<&SimplePolytope> for PolytopeJson {
    fn from(p: &SimplePolytope) -> Self {
        let mut j = PolytopeJson::from(p.h());
        j.vertices = Some(p.vertices().iter().map(|v| v.coords.clone()).collect());
        j
    }
}
