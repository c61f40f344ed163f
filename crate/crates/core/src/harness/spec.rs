use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, HarnessError};
use crate::fields::InvariantProfile;
use crate::group::{PermGroup, Permutation, DEFAULT_ORDER_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SpecSource {
    Builtin,
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub order: u64,
    pub h: u64,
    pub f: u64,
    #[serde(rename = "cl_Q")]
    pub cl_q: u64,
    #[serde(rename = "irr_Q")]
    pub irr_q: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub name: String,
    pub source: SpecSource,
    /// Free-text origin note from the file, if any.
    pub provenance: Option<String>,
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
    pub expected: Option<Expected>,
}

impl GroupSpec {
    pub fn builtin(name: impl Into<String>, degree: usize, generators: Vec<Vec<u32>>) -> Self {
        GroupSpec {
            name: name.into(),
            source: SpecSource::Builtin,
            provenance: None,
            degree,
            generators,
            expected: None,
        }
    }

    /// SHA-256 over name, degree, generators and the expected block.
    pub fn content_hash(&self) -> String {
        let canonical = serde_json::json!({
            "name": self.name,
            "degree": self.degree,
            "generators": self.generators,
            "expected": self.expected,
        });
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }

    pub fn build(&self) -> Result<PermGroup, Error> {
        let gens = self
            .generators
            .iter()
            .map(|g| Permutation::new(g.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PermGroup::from_generators(self.degree, gens, DEFAULT_ORDER_CAP)?)
    }

    pub fn check_expected(&self, profile: &InvariantProfile) -> Result<(), HarnessError> {
        let Some(exp) = self.expected else {
            return Ok(());
        };
        let checks = [
            ("order", exp.order, profile.order),
            ("h", exp.h, profile.h as u64),
            ("f", exp.f, profile.f as u64),
            ("cl_Q", exp.cl_q, profile.cl_q as u64),
            ("irr_Q", exp.irr_q, profile.irr_q as u64),
        ];
        for (field, expected, computed) in checks {
            if expected != computed {
                return Err(HarnessError::ExpectedMismatch {
                    group: self.name.clone(),
                    field: field.to_string(),
                    expected,
                    computed,
                });
            }
        }
        Ok(())
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line of a top-level key, or 1 if it cannot be found.
fn key_line(text: &str, key: &str) -> usize {
    text.find(&format!("\"{key}\"")).map_or(1, |i| line_of(text, i))
}

/// Line on which the `index`-th inner array of `generators` starts.
fn generator_line(text: &str, index: usize) -> usize {
    let Some(start) = text.find("\"generators\"") else {
        return 1;
    };
    let mut depth = 0usize;
    let mut seen = 0usize;
    for (i, ch) in text[start..].char_indices() {
        match ch {
            '[' => {
                depth += 1;
                if depth == 2 {
                    if seen == index {
                        return line_of(text, start + i);
                    }
                    seen += 1;
                }
            }
            ']' => {
                if depth <= 1 {
                    break;
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    key_line(text, "generators")
}

/// Parse a group file. `path` is used only in diagnostics.
pub fn parse_group_spec(text: &str, path: &str) -> Result<GroupSpec, HarnessError> {
    let err = |line: usize, field: &str, message: String| HarnessError::Parse {
        path: path.to_string(),
        line,
        field: field.to_string(),
        message,
    };
    let doc: Value = serde_json::from_str(text).map_err(|e| err(e.line(), "<document>", e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| err(1, "<document>", "expected a JSON object".into()))?;

    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| {
            err(
                key_line(text, "name"),
                "name",
                "missing or not a non-empty string".into(),
            )
        })?
        .to_string();
    let provenance = match obj.get("source") {
        None => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(err(key_line(text, "source"), "source", "not a string".into())),
    };
    let degree = obj
        .get("degree")
        .and_then(Value::as_u64)
        .filter(|&d| d >= 1)
        .ok_or_else(|| {
            err(
                key_line(text, "degree"),
                "degree",
                "missing or not a positive integer".into(),
            )
        })? as usize;
    let gens = obj.get("generators").and_then(Value::as_array).ok_or_else(|| {
        err(
            key_line(text, "generators"),
            "generators",
            "missing or not an array".into(),
        )
    })?;

    let mut generators = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let field = format!("generators[{i}]");
        let line = generator_line(text, i);
        let images = g
            .as_array()
            .ok_or_else(|| err(line, &field, "not an array".into()))?
            .iter()
            .map(|x| x.as_u64().filter(|&v| v <= u32::MAX as u64).map(|v| v as u32))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| err(line, &field, "entries must be non-negative integers".into()))?;
        if images.len() != degree {
            return Err(err(
                line,
                &field,
                format!("has {} entries, degree is {}", images.len(), degree),
            ));
        }
        Permutation::new(images.clone()).map_err(|e| err(line, &field, e.to_string()))?;
        generators.push(images);
    }

    let expected = match obj.get("expected") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            serde_json::from_value::<Expected>(v.clone())
                .map_err(|e| err(key_line(text, "expected"), "expected", e.to_string()))?,
        ),
    };

    Ok(GroupSpec {
        name,
        source: SpecSource::File,
        provenance,
        degree,
        generators,
        expected,
    })
}

pub fn ingest_group_file(path: &Path) -> Result<GroupSpec, HarnessError> {
    let text = fs::read_to_string(path)?;
    parse_group_spec(&text, &path.display().to_string())
}

/// Every `*.json` file in `dir`, in file-name order.
pub fn ingest_directory(dir: &Path) -> Result<Vec<GroupSpec>, HarnessError> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.iter().map(|p| ingest_group_file(p)).collect()
}
