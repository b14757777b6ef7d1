//! On-disk JSON formats for twisted toric data and Delzant polygons.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use ttm_core::ttm::DelzantPolygon;
use ttm_core::{BaseSurface, CharacteristicData, IntMat, IntVec, MonodromyRep, TwistedToricSpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    /// Malformed JSON, wrong types, unknown or missing keys.
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    /// Well-formed JSON with a value of the wrong shape.
    #[error("{field}: {message}")]
    Field { field: String, message: String },
}

fn field(field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError::Field {
        field: field.into(),
        message: message.into(),
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        let full = e.to_string();
        // serde_json appends " at line L column C"
        let message = match full.rfind(" at line ") {
            Some(i) => full[..i].to_string(),
            None => full,
        };
        ParseError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

pub type Matrix = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum BaseRecord {
    OneBoundary { genus: usize, corners: usize },
    Cylinder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonodromyRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<Matrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<Matrix>>,
    #[serde(default, rename = "loop", skip_serializing_if = "Option::is_none")]
    pub loop_matrix: Option<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub fiber_rank: usize,
    pub base: BaseRecord,
    pub monodromy: MonodromyRecord,
    pub characteristic: Vec<Vec<i64>>,
}

fn matrix2(m: &Matrix, name: &str) -> Result<IntMat, ParseError> {
    if m.len() != 2 || m.iter().any(|r| r.len() != 2) {
        let cols: Vec<usize> = m.iter().map(Vec::len).collect();
        return Err(field(name, format!("expected a 2x2 matrix, found {} row(s) of lengths {cols:?}", m.len())));
    }
    Ok(IntMat::mat2(m[0][0], m[0][1], m[1][0], m[1][1]))
}

fn vector2(v: &[i64], name: &str) -> Result<IntVec, ParseError> {
    if v.len() != 2 {
        return Err(field(name, format!("expected a vector of length 2, found length {}", v.len())));
    }
    Ok(IntVec::from_i64s(v))
}

fn int_rows(m: &IntMat, name: &str) -> Result<Matrix, ParseError> {
    m.to_i64_rows().ok_or_else(|| field(name, "entry does not fit in 64 bits"))
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let doc: SpecDocument = serde_json::from_str(text)?;
        doc.to_spec()?;
        Ok(doc)
    }

    /// Structural conversion; the mathematical checks belong to validation.
    pub fn to_spec(&self) -> Result<TwistedToricSpec, ParseError> {
        let base = match self.base {
            BaseRecord::OneBoundary { genus, corners } => BaseSurface::OneBoundary { genus, corners },
            BaseRecord::Cylinder => BaseSurface::Cylinder,
        };
        let m = &self.monodromy;
        let monodromy = match (&base, &m.alpha, &m.beta, &m.loop_matrix) {
            (BaseSurface::OneBoundary { .. }, Some(a), Some(b), None) => {
                let list = |ms: &[Matrix], key: &str| {
                    ms.iter()
                        .enumerate()
                        .map(|(i, x)| matrix2(x, &format!("monodromy.{key}[{i}]")))
                        .collect::<Result<Vec<_>, _>>()
                };
                MonodromyRep::Surface {
                    alphas: list(a, "alpha")?,
                    betas: list(b, "beta")?,
                }
            }
            (BaseSurface::Cylinder, None, None, Some(l)) => MonodromyRep::Loop(matrix2(l, "monodromy.loop")?),
            (BaseSurface::OneBoundary { .. }, ..) => {
                return Err(field("monodromy", "a one_boundary base needs exactly the keys \"alpha\" and \"beta\""))
            }
            (BaseSurface::Cylinder, ..) => {
                return Err(field("monodromy", "a cylinder base needs exactly the key \"loop\""))
            }
        };
        let vectors = self
            .characteristic
            .iter()
            .enumerate()
            .map(|(i, v)| vector2(v, &format!("characteristic[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TwistedToricSpec {
            fiber_rank: self.fiber_rank,
            base,
            monodromy,
            characteristic: CharacteristicData::new(vectors),
        })
    }

    pub fn from_spec(spec: &TwistedToricSpec) -> Result<Self, ParseError> {
        let base = match spec.base {
            BaseSurface::OneBoundary { genus, corners } => BaseRecord::OneBoundary { genus, corners },
            BaseSurface::Cylinder => BaseRecord::Cylinder,
        };
        let monodromy = match &spec.monodromy {
            MonodromyRep::Surface { alphas, betas } => MonodromyRecord {
                alpha: Some(alphas.iter().map(|m| int_rows(m, "monodromy.alpha")).collect::<Result<_, _>>()?),
                beta: Some(betas.iter().map(|m| int_rows(m, "monodromy.beta")).collect::<Result<_, _>>()?),
                loop_matrix: None,
            },
            MonodromyRep::Loop(m) => MonodromyRecord {
                alpha: None,
                beta: None,
                loop_matrix: Some(int_rows(m, "monodromy.loop")?),
            },
        };
        let characteristic = spec
            .characteristic
            .vectors
            .iter()
            .map(|v| v.to_i64s().ok_or_else(|| field("characteristic", "entry does not fit in 64 bits")))
            .collect::<Result<_, _>>()?;
        Ok(SpecDocument {
            fiber_rank: spec.fiber_rank,
            base,
            monodromy,
            characteristic,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes") + "\n"
    }
}

/// An integer, or an exact fraction written as the string `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Int(i64),
    Text(String),
}

impl RationalValue {
    fn to_rational(&self, name: &str) -> Result<BigRational, ParseError> {
        let text = match self {
            RationalValue::Int(n) => return Ok(BigRational::from_integer((*n).into())),
            RationalValue::Text(t) => t.trim(),
        };
        let bad = || field(name, format!("\"{text}\" is not an integer or a fraction p/q"));
        let (p, q) = match text.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (text, "1"),
        };
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        if q == BigInt::from(0) {
            return Err(field(name, "zero denominator"));
        }
        Ok(BigRational::new(p, q))
    }

    fn from_rational(r: &BigRational) -> Self {
        if r.denom().is_one() {
            if let Some(n) = r.numer().to_i64() {
                return RationalValue::Int(n);
            }
        }
        RationalValue::Text(r.to_string())
    }
}

impl fmt::Display for RationalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalValue::Int(n) => write!(f, "{n}"),
            RationalValue::Text(t) => f.write_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonDocument {
    pub normals: Vec<Vec<RationalValue>>,
    pub offsets: Vec<RationalValue>,
}

impl PolygonDocument {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let doc: PolygonDocument = serde_json::from_str(text)?;
        doc.to_polygon()?;
        Ok(doc)
    }

    pub fn to_polygon(&self) -> Result<DelzantPolygon, ParseError> {
        let normals = self
            .normals
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let name = format!("normals[{i}]");
                if n.len() != 2 {
                    return Err(field(&name, format!("expected a vector of length 2, found length {}", n.len())));
                }
                Ok([n[0].to_rational(&name)?, n[1].to_rational(&name)?])
            })
            .collect::<Result<Vec<_>, _>>()?;
        let offsets = self
            .offsets
            .iter()
            .enumerate()
            .map(|(i, o)| o.to_rational(&format!("offsets[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DelzantPolygon { normals, offsets })
    }

    pub fn from_polygon(poly: &DelzantPolygon) -> Self {
        PolygonDocument {
            normals: poly
                .normals
                .iter()
                .map(|n| n.iter().map(RationalValue::from_rational).collect())
                .collect(),
            offsets: poly.offsets.iter().map(RationalValue::from_rational).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes") + "\n"
    }
}
