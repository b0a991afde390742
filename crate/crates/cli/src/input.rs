//! Reading space and relation documents.
//!
//! A space is `{"points": [...], "distances": [...]}` where distances are
//! listed row-major, either flat (`n²` entries) or as `n` rows. Each entry
//! is an integer or a rational string such as `"3/2"`.
//!
//! A relation is `{"blocks": [["a"], ["b", "c"]]}`.

use std::fs;
use std::path::Path;

use pseudometric::partition::{EquivalenceRelation, Partition};
use pseudometric::{PseudometricSpace, Rational};
use serde_json::Value;

use crate::CliError;

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_entry(v: &Value) -> Result<Rational, CliError> {
    match v {
        Value::String(s) => s.parse().map_err(|e| CliError::Parse(format!("distance {s:?}: {e}"))),
        Value::Number(n) => n
            .as_i64()
            .map(Rational::from)
            .ok_or_else(|| CliError::Parse(format!("distance {n} is not an integer; write fractions as \"p/q\""))),
        other => Err(CliError::Parse(format!("distance {other} is neither a number nor a string"))),
    }
}

fn field<'a>(doc: &'a Value, name: &str) -> Result<&'a Vec<Value>, CliError> {
    doc.get(name)
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Parse(format!("missing array field {name:?}")))
}

fn strings(values: &[Value], what: &str) -> Result<Vec<String>, CliError> {
    values
        .iter()
        .map(|v| match v {
            Value::String(s) => Ok(s.clone()),
            other => Err(CliError::Parse(format!("{what} entry {other} is not a string"))),
        })
        .collect()
}

pub fn space_from_value(doc: &Value) -> Result<PseudometricSpace, CliError> {
    let points = strings(field(doc, "points")?, "points")?;
    let distances = field(doc, "distances")?;
    let nested = distances.first().is_some_and(Value::is_array);
    if nested {
        let rows = distances
            .iter()
            .map(|row| match row {
                Value::Array(r) => r.iter().map(parse_entry).collect::<Result<Vec<_>, _>>(),
                other => Err(CliError::Parse(format!("row {other} is not an array"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PseudometricSpace::validate(points, rows)?)
    } else {
        let flat = distances.iter().map(parse_entry).collect::<Result<Vec<_>, _>>()?;
        Ok(PseudometricSpace::from_row_major(points, flat)?)
    }
}

pub fn read_space(path: &Path) -> Result<PseudometricSpace, CliError> {
    space_from_value(&read_json(path)?)
}

pub fn read_relation(path: &Path) -> Result<EquivalenceRelation<String>, CliError> {
    let doc = read_json(path)?;
    let blocks = field(&doc, "blocks")?
        .iter()
        .map(|b| match b {
            Value::Array(items) => strings(items, "block"),
            other => Err(CliError::Parse(format!("block {other} is not an array"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Partition::from_blocks(blocks).map_err(|e| CliError::Relation(e.to_string()))?.to_relation())
}

/// The document form of a space, round-trippable through [`space_from_value`].
pub fn space_to_value(space: &PseudometricSpace) -> Value {
    serde_json::json!({
        "points": space.labels(),
        "distances": space.row_major().iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn flat_and_nested_forms_agree() {
        let flat = json!({"points": ["a", "b"], "distances": [0, "1/2", "1/2", 0]});
        let nested = json!({"points": ["a", "b"], "distances": [[0, "1/2"], ["2/4", 0]]});
        assert_eq!(space_from_value(&flat).unwrap(), space_from_value(&nested).unwrap());
    }

    #[test]
    fn floats_are_rejected() {
        let doc = json!({"points": ["a", "b"], "distances": [0, 0.5, 0.5, 0]});
        assert!(matches!(space_from_value(&doc), Err(CliError::Parse(_))));
    }

    #[test]
    fn document_round_trip() {
        let doc = json!({"points": ["a", "b"], "distances": ["0", "3/2", "3/2", "0"]});
        let s = space_from_value(&doc).unwrap();
        assert_eq!(space_to_value(&s), doc);
        assert_eq!(space_from_value(&space_to_value(&s)).unwrap(), s);
    }

    #[test]
    fn validation_errors_pass_through() {
        let doc = json!({"points": ["a", "b"], "distances": [0, 1, 2, 0]});
        assert_eq!(space_from_value(&doc).unwrap_err().to_string(), "Asymmetric at (0,1)");
    }
}
