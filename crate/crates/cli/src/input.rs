//! Group, algebra and map ingestion.

use std::path::Path;
use std::sync::Arc;

use epiloc::{Algebra, AlgebraMap, Error, GroupTable, Result};
use serde::Deserialize;

/// A bundled group name, or a path to a GroupTable JSON file.
pub fn load_group(spec: &str) -> Result<GroupTable> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {spec}: {e}")))?;
        return GroupTable::from_json(&text);
    }
    GroupTable::from_name(spec)
}

pub fn group_algebra(spec: &str, p: u32) -> Result<Arc<Algebra>> {
    let g = load_group(spec)?;
    Ok(Arc::new(Algebra::group_algebra(&g, p)?))
}

/// One side of a map file: a group algebra, a named family, or raw
/// structure constants `table[(i * dim + j) * dim + k]`, the coefficient of
/// `e_k` in `e_i e_j`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub p: u32,
    #[serde(default)]
    pub group: Option<serde_json::Value>,
    #[serde(default)]
    pub truncated_polynomial: Option<usize>,
    #[serde(default)]
    pub upper_triangular: Option<usize>,
    #[serde(default)]
    pub matrix: Option<usize>,
    #[serde(default)]
    pub dim: Option<usize>,
    #[serde(default)]
    pub table: Option<Vec<u32>>,
    #[serde(default)]
    pub unit: Option<Vec<u32>>,
    #[serde(default)]
    pub augmentation: Option<Vec<u32>>,
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<Algebra> {
        let p = self.p;
        let chosen = [self.group.is_some(), self.truncated_polynomial.is_some(), self.upper_triangular.is_some(), self.matrix.is_some(), self.table.is_some()];
        if chosen.iter().filter(|&&c| c).count() != 1 {
            return Err(Error::InvalidInput(
                "an algebra needs exactly one of group, truncated_polynomial, upper_triangular, matrix or table".into(),
            ));
        }
        if let Some(g) = &self.group {
            let g = match g {
                serde_json::Value::String(name) => load_group(name)?,
                other => {
                    let g: GroupTable = serde_json::from_value(other.clone())?;
                    g.validate()?;
                    g
                }
            };
            return Algebra::group_algebra(&g, p);
        }
        if let Some(k) = self.truncated_polynomial {
            return Algebra::truncated_polynomial(p, k);
        }
        if let Some(n) = self.upper_triangular {
            return Algebra::upper_triangular(p, n);
        }
        if let Some(n) = self.matrix {
            return Algebra::matrix_algebra(p, n);
        }
        let table = self.table.clone().unwrap_or_default();
        let dim = self.dim.ok_or_else(|| Error::InvalidInput("structure constants need dim".into()))?;
        let unit = self.unit.clone().ok_or_else(|| Error::InvalidInput("structure constants need unit".into()))?;
        Algebra::from_constants(p, dim, table, unit, self.augmentation.clone())
    }
}

/// `{"source": ..., "target": ..., "images": [[...], ...]}`, with
/// `images[i]` the image of the i-th source basis vector.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub source: AlgebraSpec,
    pub target: AlgebraSpec,
    pub images: Vec<Vec<u32>>,
}

impl MapSpec {
    pub fn build(&self) -> Result<AlgebraMap> {
        let source = Arc::new(self.source.build()?);
        // equal descriptions give one shared algebra, so identities stay identities
        let target = if self.source == self.target { source.clone() } else { Arc::new(self.target.build()?) };
        AlgebraMap::from_images(source, target, &self.images)
    }
}

fn read_map(path: &Path) -> Result<MapSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn load_map(path: &Path) -> Result<AlgebraMap> {
    read_map(path)?.build()
}

/// Two maps out of one base; their sources must be described identically.
pub fn load_map_pair(first: &Path, second: &Path) -> Result<(AlgebraMap, AlgebraMap)> {
    let (s1, s2) = (read_map(first)?, read_map(second)?);
    if s1.source != s2.source {
        return Err(Error::InvalidInput("the two maps have different sources".into()));
    }
    let f = s1.build()?;
    let target = Arc::new(s2.target.build()?);
    let g = AlgebraMap::from_images(f.source.clone(), target, &s2.images)?;
    Ok((f, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_map_shares_its_algebra() {
        let json = r#"{"source": {"p": 3, "group": "C3"}, "target": {"p": 3, "group": "C3"},
                        "images": [[1,0,0],[0,1,0],[0,0,1]]}"#;
        let spec: MapSpec = serde_json::from_str(json).unwrap();
        let f = spec.build().unwrap();
        assert!(f.is_injective() && f.is_surjective());
    }

    #[test]
    fn ambiguous_algebra_is_rejected() {
        let spec = AlgebraSpec {
            p: 2,
            group: Some("C2".into()),
            truncated_polynomial: Some(2),
            upper_triangular: None,
            matrix: None,
            dim: None,
            table: None,
            unit: None,
            augmentation: None,
        };
        assert!(spec.build().is_err());
    }

    #[test]
    fn unknown_group_lists_the_library() {
        let err = load_group("Q8").unwrap_err().to_string();
        assert!(err.contains("S3") && err.contains("CpxCq"));
    }
}
