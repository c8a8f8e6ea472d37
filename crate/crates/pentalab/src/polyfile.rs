//! JSON file formats. Every rational is written as a `"p/q"` string (or an
//! integer string) so that files round-trip exactly; plain JSON integers are
//! accepted on input.

use serde::{Deserialize, Deserializer, Serialize};

use crate::condensation::Matrix;
use crate::dynamics::{Class, Kind, TwistedPolygon};
use crate::error::{Error, Result};
use crate::invariants::CoordVector;
use crate::projective::{Hom, ProjMap};
use crate::scalar::{fmt_q, parse_q, Q};

/// A rational read from a string or an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub Q);

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Rat(Q::from_integer(i.into()))),
            Raw::Str(s) => parse_q(&s).map(Rat).map_err(serde::de::Error::custom),
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(&self.0))
    }
}

fn rats(xs: &[Q]) -> Vec<Rat> {
    xs.iter().cloned().map(Rat).collect()
}

fn unrat(xs: Vec<Rat>) -> Vec<Q> {
    xs.into_iter().map(|r| r.0).collect()
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolygonFile {
    pub n: usize,
    pub kind: Kind,
    pub parity: i64,
    pub reps: Vec<[Rat; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monodromy: Option<[[Rat; 3]; 3]>,
}

impl PolygonFile {
    pub fn from_polygon(p: &TwistedPolygon) -> Self {
        let reps = p.reps().iter().map(|h| h.coords().clone().map(Rat)).collect();
        let monodromy = if p.is_closed() { None } else { Some(p.monodromy().rows().clone().map(|r| r.map(Rat))) };
        PolygonFile { n: p.n(), kind: p.kind(), parity: p.class().base(), reps, monodromy }
    }

    pub fn to_polygon(&self) -> Result<TwistedPolygon> {
        if self.reps.len() != self.n {
            return Err(Error::InvalidInput(format!("n = {} but {} representatives given", self.n, self.reps.len())));
        }
        let class = Class::from_base(self.parity)?;
        let reps = self
            .reps
            .iter()
            .enumerate()
            .map(|(i, r)| {
                Hom::new(r.clone().map(|x| x.0))
                    .map_err(|_| Error::InvalidInput(format!("representative {i} is the zero triple")))
            })
            .collect::<Result<Vec<_>>>()?;
        let t = match &self.monodromy {
            Some(m) => ProjMap::new(m.clone().map(|r| r.map(|x| x.0)))
                .map_err(|_| Error::InvalidInput("monodromy is singular".into()))?,
            None => ProjMap::identity(),
        };
        TwistedPolygon::new(self.kind, class, reps, t)
    }
}

pub fn read_polygon(text: &str) -> Result<TwistedPolygon> {
    from_json::<PolygonFile>(text)?.to_polygon()
}

pub fn write_polygon(p: &TwistedPolygon) -> String {
    to_json(&PolygonFile::from_polygon(p))
}

/// The `2n` coordinates `x_1 … x_{2n}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordFile {
    pub n: usize,
    pub x: Vec<Rat>,
}

pub fn read_coords(text: &str) -> Result<CoordVector> {
    let f: CoordFile = from_json(text)?;
    if f.x.len() != 2 * f.n {
        return Err(Error::InvalidInput(format!("n = {} needs {} coordinates, got {}", f.n, 2 * f.n, f.x.len())));
    }
    CoordVector::new(unrat(f.x))
}

pub fn write_coords(v: &CoordVector) -> String {
    to_json(&CoordFile { n: v.n(), x: rats(v.as_slice()) })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub matrix: Vec<Vec<Rat>>,
}

/// A square matrix.
pub fn read_matrix(text: &str) -> Result<Matrix> {
    let f: MatrixFile = from_json(text)?;
    let k = f.matrix.len();
    if k == 0 || f.matrix.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidInput("matrix must be square and nonempty".into()));
    }
    Ok(f.matrix.into_iter().map(unrat).collect())
}

pub fn write_matrix(m: &Matrix) -> String {
    to_json(&MatrixFile { matrix: m.iter().map(|r| rats(r)).collect() })
}
