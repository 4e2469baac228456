//! JSON inputs. Every rational is a string such as `"-13/2"`; matrices are
//! row-major arrays.

use std::path::Path;

use packlab::inversive::EuclideanSphere;
use packlab::surface::{ReflectionVector, SurfaceModel};
use packlab::{parse_rational, ExactVector, Rational, RationalMatrix, SignatureConvention};
use serde::Deserialize;

use crate::CliError;

/// A Coxeter polytope with an optional seed cluster.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeFile {
    pub gram: Vec<Vec<String>>,
    #[serde(default)]
    pub seed: Option<Vec<String>>,
    #[serde(default)]
    pub spheres: Option<Vec<SphereEntry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SphereEntry {
    pub curvature: Option<String>,
    pub center: Option<Vec<String>>,
    pub normal: Option<Vec<String>>,
    pub offset: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub label: String,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaEntry {
    pub label: String,
    pub vector: Vec<String>,
    pub word: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub name: String,
    pub gram: Vec<Vec<String>>,
    /// `one-positive` (default) or `one-negative`.
    #[serde(default)]
    pub signature: Option<String>,
    #[serde(default)]
    pub basis: Option<Vec<String>>,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub alphas: Vec<AlphaEntry>,
    pub h: Vec<String>,
    #[serde(default)]
    pub c: Option<Vec<String>>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn rational(field: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Config(format!("field {field}: {e}")))
}

pub fn vector(field: &str, items: &[String]) -> Result<ExactVector, CliError> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| rational(&format!("{field}[{i}]"), s))
        .collect::<Result<Vec<_>, _>>()
        .map(ExactVector::new)
}

pub fn matrix(field: &str, rows: &[Vec<String>]) -> Result<RationalMatrix, CliError> {
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, row)| vector(&format!("{field}[{i}]"), row).map(|v| v.0))
        .collect::<Result<Vec<_>, _>>()?;
    RationalMatrix::from_rows(rows).map_err(|e| CliError::Config(format!("field {field}: {e}")))
}

/// Comma-separated rationals from a flag.
pub fn list(flag: &str, text: &str) -> Result<Vec<Rational>, CliError> {
    text.split(',').map(|s| rational(flag, s)).collect()
}

/// A matrix given inline as JSON.
pub fn inline_matrix(flag: &str, text: &str) -> Result<RationalMatrix, CliError> {
    let rows: Vec<Vec<serde_json::Value>> =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("{flag}: {e}")))?;
    let rows: Vec<Vec<String>> = rows
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|v| match v {
                    serde_json::Value::String(s) => s,
                    other => other.to_string(),
                })
                .collect()
        })
        .collect();
    matrix(flag, &rows)
}

pub fn spheres(entries: &[SphereEntry]) -> Result<Vec<EuclideanSphere>, CliError> {
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let field = format!("spheres[{i}]");
            let built = match (&e.curvature, &e.center, &e.normal, &e.offset) {
                (Some(k), Some(c), None, None) => {
                    EuclideanSphere::sphere(rational(&field, k)?, vector(&format!("{field}.center"), c)?.0)
                }
                (_, None, Some(n), Some(o)) => {
                    EuclideanSphere::hyperplane(vector(&format!("{field}.normal"), n)?.0, rational(&field, o)?)
                }
                _ => {
                    return Err(CliError::Config(format!(
                        "field {field}: give curvature and center, or normal and offset"
                    )))
                }
            };
            built.map_err(|e| CliError::Config(format!("field {field}: {e}")))
        })
        .collect()
}

pub fn model(file: &ModelFile) -> Result<SurfaceModel, CliError> {
    let convention = match file.signature.as_deref() {
        None | Some("one-positive") => SignatureConvention::OnePositive,
        Some("one-negative") => SignatureConvention::OneNegative,
        Some(other) => {
            return Err(CliError::Config(format!(
                "field signature: expected one-positive or one-negative, found {other:?}"
            )))
        }
    };
    let gram = matrix("gram", &file.gram)?;
    let labels = file
        .basis
        .clone()
        .unwrap_or_else(|| (0..gram.rows()).map(|i| format!("e{}", i + 1)).collect());
    let generators = file
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| Ok((g.label.clone(), matrix(&format!("generators[{i}].matrix"), &g.matrix)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let alphas = file
        .alphas
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if let Some(&bad) = a.word.iter().find(|&&w| w >= generators.len()) {
                return Err(CliError::Config(format!("field alphas[{i}].word: no generator {bad}")));
            }
            Ok(ReflectionVector {
                label: a.label.clone(),
                alpha: vector(&format!("alphas[{i}].vector"), &a.vector)?,
                word: a.word.clone(),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let h = vector("h", &file.h)?;
    let c = match &file.c {
        Some(c) => vector("c", c)?,
        None => h.clone(),
    };
    Ok(SurfaceModel::custom(file.name.clone(), gram, convention, labels, h, c, generators, alphas)?)
}
