//! Cord files (`a b` per line) and partial-distance files (`a b d`).
//! `#` starts a comment; blank lines are ignored.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cords::{Cord, CordSet};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::tree::LeafLabel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct CordFileError {
    pub line: usize,
    pub message: String,
}

/// Cord-to-distance table read from or written to a partial-distance file.
pub type PartialDistances = BTreeMap<Cord, Rational>;

fn parse_lines(
    text: &str,
    x_set: Option<&[LeafLabel]>,
    with_distance: bool,
) -> Result<Vec<(Cord, Option<Rational>)>, CordFileError> {
    let mut seen = CordSet::new();
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| CordFileError { line, message };
        let content = raw.split('#').next().unwrap_or("");
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let expected = if with_distance { 3 } else { 2 };
        if fields.len() != expected {
            return Err(err(format!("expected {expected} fields, found {}", fields.len())));
        }
        let cord = Cord::parse(fields[0], fields[1]).map_err(|e| err(e.to_string()))?;
        if let Some(x) = x_set {
            for label in [cord.first(), cord.second()] {
                if !x.contains(label) {
                    return Err(err(format!("unknown leaf `{label}`")));
                }
            }
        }
        if !seen.insert(cord.clone()) {
            return Err(err(format!("duplicate cord `{} {}`", cord.first(), cord.second())));
        }
        let distance = if with_distance {
            let d = parse_rational(fields[2]).map_err(|e| err(e.to_string()))?;
            if d <= Rational::from_integer(0.into()) {
                return Err(err(format!("distance `{}` is not positive", fields[2])));
            }
            Some(d)
        } else {
            None
        };
        out.push((cord, distance));
    }
    Ok(out)
}

/// Reads a cord file; labels are checked against `x_set` when given.
pub fn read_cords(text: &str, x_set: Option<&[LeafLabel]>) -> Result<CordSet, CordFileError> {
    Ok(parse_lines(text, x_set, false)?.into_iter().map(|(c, _)| c).collect())
}

pub fn read_partial_distances(text: &str, x_set: Option<&[LeafLabel]>) -> Result<PartialDistances, CordFileError> {
    Ok(parse_lines(text, x_set, true)?.into_iter().map(|(c, d)| (c, d.expect("distance column"))).collect())
}

pub fn write_cords(cords: &CordSet) -> String {
    cords.iter().map(|c| format!("{} {}\n", c.first(), c.second())).collect()
}

pub fn write_partial_distances(distances: &PartialDistances) -> String {
    distances.iter().map(|(c, d)| format!("{} {} {}\n", c.first(), c.second(), format_rational(d))).collect()
}
