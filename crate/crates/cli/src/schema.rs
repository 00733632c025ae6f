//! Scenario files: one JSON object per invocation, `{"version": 1,
//! "command": "...", ...}`. Integers only. Matrices are `[[a, b], [c, d]]`
//! and are reduced modulo `n` when loaded.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const SCHEMA_VERSION: u64 = 1;

/// `[[a, b], [c, d]]`, acting on column vectors.
pub type Mat2 = [[i64; 2]; 2];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Scenario {
    Commutant(CommutantInput),
    EndInvariants(GroupInput),
    HomInvariants(HomInput),
    ClassifyAbelian(GroupInput),
    BrauerBound(BrauerInput),
    H1Bound(H1Input),
    FiniteGl2r(RealInput),
}

impl Scenario {
    pub fn command(&self) -> &'static str {
        match self {
            Scenario::Commutant(_) => "commutant",
            Scenario::EndInvariants(_) => "end-invariants",
            Scenario::HomInvariants(_) => "hom-invariants",
            Scenario::ClassifyAbelian(_) => "classify-abelian",
            Scenario::BrauerBound(_) => "brauer-bound",
            Scenario::H1Bound(_) => "h1-bound",
            Scenario::FiniteGl2r(_) => "finite-gl2r",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommutantInput {
    /// A prime power.
    pub modulus: u64,
    pub matrix: Mat2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInput {
    pub modulus: u64,
    pub generators: Vec<Mat2>,
}

/// One generator acting on both curves: `target Φ = chi Φ source`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairInput {
    pub source: Mat2,
    pub target: Mat2,
    #[serde(default = "one")]
    pub chi: i8,
}

fn one() -> i8 {
    1
}

/// Draw the action at random from `--seed` instead of listing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomAction {
    #[serde(default)]
    pub twisted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomInput {
    pub modulus: u64,
    pub d: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<PairInput>>,
    /// Defaults to `diag(d, 1)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Mat2>,
    /// Defaults to `diag(1, d)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_dual: Option<Mat2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomAction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceInput {
    AbelianTorsor,
    Kummer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BrauerInput {
    pub modulus: u64,
    pub d: u64,
    pub period: u64,
    #[serde(default = "one_u32")]
    pub base_change_degree: u32,
    pub surface: SurfaceInput,
    /// Omitted: the trivial action.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<PairInput>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Mat2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi_dual: Option<Mat2>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomAction>,
}

fn one_u32() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H1Input {
    pub rank: usize,
    /// `rank x rank` integer matrices of determinant `±1`.
    pub generators: Vec<Vec<Vec<i64>>>,
}

/// `a` or `[a, b]` for `a + b sqrt(d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuadEntry {
    Int(i64),
    Quad([i64; 2]),
}

impl QuadEntry {
    pub fn parts(self) -> (i64, i64) {
        match self {
            QuadEntry::Int(a) => (a, 0),
            QuadEntry::Quad([a, b]) => (a, b),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealInput {
    /// Positive non-square.
    pub d: i64,
    pub generators: Vec<[[QuadEntry; 2]; 2]>,
}

/// Parses and version-checks a scenario file.
pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    let mut value: Value = serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| CliError::Schema("scenario must be a JSON object".into()))?;
    match obj.remove("version") {
        Some(Value::Number(v)) if v.as_u64() == Some(SCHEMA_VERSION) => {}
        Some(v) => return Err(CliError::Schema(format!("unsupported version {v}, expected {SCHEMA_VERSION}"))),
        None => return Err(CliError::Schema("missing field `version`".into())),
    }
    serde_json::from_value(value).map_err(|e| CliError::Schema(e.to_string()))
}

/// Parses a scenario and checks that it is meant for `command`.
pub fn parse_for(text: &str, command: &str) -> Result<Scenario, CliError> {
    let s = parse_scenario(text)?;
    if s.command() != command {
        return Err(CliError::Schema(format!("file is a `{}` scenario, not `{command}`", s.command())));
    }
    Ok(s)
}

/// Serializes a scenario with its version field.
pub fn to_json(s: &Scenario) -> String {
    let mut value = serde_json::to_value(s).expect("scenario serializes");
    if let Value::Object(map) = &mut value {
        map.insert("version".into(), Value::from(SCHEMA_VERSION));
    }
    serde_json::to_string_pretty(&value).expect("value serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_commutant() {
        let s = parse_scenario(r#"{"version": 1, "command": "commutant", "modulus": 9, "matrix": [[1, 3], [0, 1]]}"#)
            .unwrap();
        assert_eq!(s, Scenario::Commutant(CommutantInput { modulus: 9, matrix: [[1, 3], [0, 1]] }));
        assert_eq!(parse_scenario(&to_json(&s)).unwrap(), s);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            r#"{"command": "commutant", "modulus": 9, "matrix": [[1, 3], [0, 1]]}"#,
            r#"{"version": 2, "command": "commutant", "modulus": 9, "matrix": [[1, 3], [0, 1]]}"#,
            r#"{"version": 1, "command": "commutant", "modulus": 9, "matrix": [[1, 3], [0]]}"#,
            r#"{"version": 1, "command": "commutant", "modulus": 9, "matrix": [[1.5, 3], [0, 1]]}"#,
            r#"{"version": 1, "command": "commutant", "modulus": 9, "matrix": [[1, 3], [0, 1]], "extra": 0}"#,
            r#"{"version": 1, "command": "nope"}"#,
            r#"[1]"#,
        ] {
            assert!(matches!(parse_scenario(text), Err(CliError::Schema(_))), "{text}");
        }
    }

    #[test]
    fn quad_entries() {
        let s = parse_scenario(
            r#"{"version": 1, "command": "finite-gl2r", "d": 2, "generators": [[[0, [1, 1]], [-1, 0]]]}"#,
        )
        .unwrap();
        let Scenario::FiniteGl2r(r) = s else { panic!() };
        assert_eq!(r.generators[0][0][1].parts(), (1, 1));
        assert_eq!(r.generators[0][1][0].parts(), (-1, 0));
    }

    #[test]
    fn wrong_command() {
        let text = r#"{"version": 1, "command": "end-invariants", "modulus": 6, "generators": []}"#;
        assert!(parse_for(text, "end-invariants").is_ok());
        assert!(matches!(parse_for(text, "commutant"), Err(CliError::Schema(_))));
    }
}
