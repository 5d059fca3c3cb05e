//! The orbit file format and fiber-target syntax.
//!
//! ```json
//! {"F": {"0": [[{"im": "0", "re": "1"}, {"im": "0", "re": "0"}]]},
//!  "N": [[0, 0], [1, 0]], "label": "example", "rank": 2, "weight": -1}
//! ```
//!
//! `N` is row-major. `F` maps a level `p` to vectors spanning `F^p`
//! together with everything listed at higher levels; unlisted levels follow
//! the nearest listed level above, and levels below the lowest listed one
//! are the whole space. Scalars are exact rational strings.

use std::collections::BTreeMap;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::hodge::{HodgeError, NilpotentOrbit};
use crate::linalg::{format_ratio, parse_ratio, Filtration, GScalar, GVector};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Hodge(#[from] HodgeError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        // serde_json appends " at line L column C"; keep only the message
        let full = e.to_string();
        let message = match full.rfind(" at line ") {
            Some(i) => full[..i].to_string(),
            None => full,
        };
        FormatError::Json {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScalar {
    re: String,
    im: String,
}

struct FileScalar(GScalar);

impl<'de> Deserialize<'de> for FileScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawScalar::deserialize(d)?;
        let re = parse_ratio(&raw.re)
            .ok_or_else(|| de::Error::custom(format!("`{}` is not an exact rational", raw.re)))?;
        let im = parse_ratio(&raw.im)
            .ok_or_else(|| de::Error::custom(format!("`{}` is not an exact rational", raw.im)))?;
        Ok(FileScalar(GScalar::new(re, im)))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrbit {
    rank: usize,
    weight: i32,
    #[serde(rename = "N")]
    n: Vec<Vec<i64>>,
    #[serde(rename = "F")]
    f: BTreeMap<String, Vec<Vec<FileScalar>>>,
    #[serde(default)]
    label: String,
}

fn scalar_json(s: &GScalar) -> Value {
    json!({"re": format_ratio(&s.re), "im": format_ratio(&s.im)})
}

/// Parses an orbit file.
pub fn parse_orbit(text: &str) -> Result<NilpotentOrbit, FormatError> {
    let raw: RawOrbit = serde_json::from_str(text)?;
    if raw.n.len() != raw.rank || raw.n.iter().any(|r| r.len() != raw.rank) {
        return Err(FormatError::Shape(format!(
            "N must be a {0}x{0} integer matrix",
            raw.rank
        )));
    }
    let mut generators = BTreeMap::new();
    for (key, vectors) in raw.f {
        let p: i32 = key
            .trim()
            .parse()
            .map_err(|_| FormatError::Shape(format!("F level `{key}` is not an integer")))?;
        let mut vs = Vec::with_capacity(vectors.len());
        for v in vectors {
            if v.len() != raw.rank {
                return Err(FormatError::Shape(format!(
                    "F^{p} vector has {} entries, rank is {}",
                    v.len(),
                    raw.rank
                )));
            }
            vs.push(GVector(v.into_iter().map(|s| s.0).collect()));
        }
        if generators.insert(p, vs).is_some() {
            return Err(FormatError::Shape(format!("F level {p} listed twice")));
        }
    }
    let f = Filtration::decreasing_closure(raw.rank, &generators)
        .map_err(|e| FormatError::Hodge(HodgeError::Linalg(e)))?;
    Ok(NilpotentOrbit::new(raw.weight, raw.n, f, raw.label)?)
}

/// Canonical JSON value of an orbit: every stored level of `F` with its
/// reduced echelon basis.
pub fn orbit_value(orbit: &NilpotentOrbit) -> Value {
    let f: serde_json::Map<String, Value> = orbit
        .hodge()
        .levels()
        .iter()
        .map(|(p, s)| {
            let vs: Vec<Value> = s
                .basis()
                .iter()
                .map(|v| Value::Array(v.iter().map(scalar_json).collect()))
                .collect();
            (p.to_string(), Value::Array(vs))
        })
        .collect();
    json!({
        "rank": orbit.rank(),
        "weight": orbit.weight(),
        "N": orbit.n_int(),
        "F": f,
        "label": orbit.label(),
    })
}

/// Canonical text: sorted keys, reduced fractions, two-space indentation
/// and a trailing newline.
pub fn canonical_json(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn serialize_orbit(orbit: &NilpotentOrbit) -> String {
    canonical_json(&orbit_value(orbit))
}

/// Parses a fiber target such as `(1, 1/2+1/4i)`, `0` or `(0)`.
pub fn parse_target(text: &str) -> Result<GVector, String> {
    let t = text.trim();
    let inner = match (t.strip_prefix('('), t.strip_suffix(')')) {
        (Some(_), Some(_)) => &t[1..t.len() - 1],
        (None, None) => t,
        _ => return Err(format!("unbalanced parentheses in `{text}`")),
    };
    if inner.trim().is_empty() {
        return Ok(GVector(Vec::new()));
    }
    inner
        .split(',')
        .map(|s| s.parse::<GScalar>())
        .collect::<Result<Vec<_>, _>>()
        .map(GVector)
}

/// Exact scalar as text, as accepted by [`parse_target`].
pub fn format_vector(v: &GVector) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Serializes anything to a canonical JSON value (sorted keys).
pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}
