//! Projective-plane primitives over the rationals.
//!
//! Points and lines are both nonzero homogeneous triples; a line `l` contains
//! a point `p` when `l · p = 0`. Triples are stored as given and compared
//! projectively through the cross product.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{fmt_q, q, Q};

pub type Vec3 = [Q; 3];

pub fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn dot3(a: &Vec3, b: &Vec3) -> Q {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

pub fn det3(a: &Vec3, b: &Vec3, c: &Vec3) -> Q {
    dot3(&cross3(a, b), c)
}

fn is_zero3(a: &Vec3) -> bool {
    a.iter().all(Zero::is_zero)
}

/// A nonzero homogeneous triple, read as a point or as a line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hom(Vec3);

pub type HPoint = Hom;
pub type HLine = Hom;

impl Hom {
    pub fn new(c: Vec3) -> Result<Self> {
        if is_zero3(&c) {
            Err(Error::ZeroTriple)
        } else {
            Ok(Hom(c))
        }
    }

    /// Panics on the zero triple; meant for literals.
    pub fn ints(a: i64, b: i64, c: i64) -> Self {
        Hom::new([q(a), q(b), q(c)]).expect("zero triple literal")
    }

    pub fn coords(&self) -> &Vec3 {
        &self.0
    }

    pub fn into_coords(self) -> Vec3 {
        self.0
    }

    pub fn dot(&self, other: &Hom) -> Q {
        dot3(&self.0, &other.0)
    }

    pub fn cross(&self, other: &Hom) -> Vec3 {
        cross3(&self.0, &other.0)
    }

    pub fn proj_eq(&self, other: &Hom) -> bool {
        is_zero3(&self.cross(other))
    }

    pub fn scaled(&self, s: &Q) -> Result<Hom> {
        Hom::new([&self.0[0] * s, &self.0[1] * s, &self.0[2] * s])
    }

    /// Representative whose last nonzero coordinate is one. Keeps rational
    /// sizes in check during long iterations.
    pub fn normalized(&self) -> Hom {
        let piv = self.0.iter().rev().find(|c| !c.is_zero()).expect("nonzero triple").clone();
        Hom([&self.0[0] / &piv, &self.0[1] / &piv, &self.0[2] / &piv])
    }
}

impl fmt::Display for Hom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", fmt_q(&self.0[0]), fmt_q(&self.0[1]), fmt_q(&self.0[2]))
    }
}

/// Line through two points.
pub fn join(p: &HPoint, r: &HPoint) -> Result<HLine> {
    Hom::new(p.cross(r)).map_err(|_| Error::CoincidentArguments)
}

/// Intersection of two lines.
pub fn meet(l: &HLine, m: &HLine) -> Result<HPoint> {
    Hom::new(l.cross(m)).map_err(|_| Error::CoincidentArguments)
}

/// Point-line duality. Coordinates carry over unchanged, so duality is the
/// identity at the level of triples; it exists to make intent explicit.
pub fn dual(h: &Hom) -> Hom {
    h.clone()
}

/// Classical cross ratio `(a-c)(b-d) / ((a-b)(c-d))`.
pub fn cross_ratio(a: &Q, b: &Q, c: &Q, d: &Q) -> Result<Q> {
    let den = (a - b) * (c - d);
    if den.is_zero() {
        return Err(Error::DegenerateQuadruple);
    }
    Ok((a - c) * (b - d) / den)
}

fn rank_at_most_two(w: [&Hom; 4]) -> bool {
    [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        .iter()
        .all(|&(i, j, k)| det3(w[i].coords(), w[j].coords(), w[k].coords()).is_zero())
}

/// The vector form `X = (w1×w2)*(w3×w4) / ((w1×w3)*(w2×w4))` with `*` taken
/// coordinatewise. All four vectors must span at most a plane; `X` is then a
/// multiple of `(1,1,1)` and the common value is returned.
///
/// This is the reciprocal of [`cross_ratio_collinear`] and is the form the
/// polygon invariants are built from.
pub fn plane_cross_ratio(w1: &Hom, w2: &Hom, w3: &Hom, w4: &Hom) -> Result<Q> {
    let a = w1.cross(w2);
    let b = w3.cross(w4);
    let c = w1.cross(w3);
    let d = w2.cross(w4);
    for t in 0..3 {
        let den = &c[t] * &d[t];
        if !den.is_zero() {
            return Ok(&a[t] * &b[t] / den);
        }
    }
    Err(Error::DegenerateQuadruple)
}

/// Cross ratio of four collinear points, agreeing with [`cross_ratio`] on an
/// affinely parametrized line.
pub fn cross_ratio_collinear(w1: &HPoint, w2: &HPoint, w3: &HPoint, w4: &HPoint) -> Result<Q> {
    if !rank_at_most_two([w1, w2, w3, w4]) {
        return Err(Error::NotCollinear);
    }
    plane_cross_ratio(w1, w3, w2, w4)
}

/// An invertible 3×3 matrix acting on points by `M v` and on lines by the
/// inverse transpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjMap {
    m: [Vec3; 3],
}

impl ProjMap {
    pub fn new(m: [Vec3; 3]) -> Result<Self> {
        let p = ProjMap { m };
        if p.det().is_zero() {
            Err(Error::SingularMap)
        } else {
            Ok(p)
        }
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Result<Self> {
        ProjMap::new(m.map(|r| r.map(q)))
    }

    pub fn identity() -> Self {
        let o = Q::one;
        let z = Q::zero;
        ProjMap { m: [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]] }
    }

    /// Matrix whose columns are `c0, c1, c2`.
    pub fn from_columns(c0: &Vec3, c1: &Vec3, c2: &Vec3) -> Result<Self> {
        ProjMap::new(std::array::from_fn(|i| [c0[i].clone(), c1[i].clone(), c2[i].clone()]))
    }

    pub fn rows(&self) -> &[Vec3; 3] {
        &self.m
    }

    pub fn column(&self, j: usize) -> Vec3 {
        std::array::from_fn(|i| self.m[i][j].clone())
    }

    pub fn det(&self) -> Q {
        let c: [Vec3; 3] = std::array::from_fn(|j| self.column(j));
        det3(&c[0], &c[1], &c[2])
    }

    pub fn trace(&self) -> Q {
        &self.m[0][0] + &self.m[1][1] + &self.m[2][2]
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        std::array::from_fn(|i| dot3(&self.m[i], v))
    }

    pub fn apply(&self, p: &HPoint) -> HPoint {
        Hom(self.mul_vec(p.coords()))
    }

    /// Action on lines: the cofactor matrix, a scalar multiple of the
    /// inverse transpose.
    pub fn apply_dual(&self, l: &HLine) -> HLine {
        Hom(self.cofactor().mul_vec(l.coords()))
    }

    fn cofactor(&self) -> ProjMap {
        let r = &self.m;
        let c0 = cross3(&r[1], &r[2]);
        let c1 = cross3(&r[2], &r[0]);
        let c2 = cross3(&r[0], &r[1]);
        ProjMap { m: [c0, c1, c2] }
    }

    pub fn transpose(&self) -> ProjMap {
        ProjMap { m: std::array::from_fn(|i| self.column(i)) }
    }

    pub fn inverse(&self) -> ProjMap {
        let d = self.det();
        let c = self.cofactor();
        ProjMap { m: std::array::from_fn(|i| std::array::from_fn(|j| &c.m[j][i] / &d)) }
    }

    /// The induced map on the dual plane.
    pub fn inverse_transpose(&self) -> ProjMap {
        self.inverse().transpose()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ProjMap) -> ProjMap {
        let c: [Vec3; 3] = std::array::from_fn(|j| self.mul_vec(&other.column(j)));
        ProjMap { m: std::array::from_fn(|i| std::array::from_fn(|j| c[j][i].clone())) }
    }

    pub fn scaled(&self, s: &Q) -> Result<ProjMap> {
        ProjMap::new(self.m.clone().map(|r| r.map(|x| x * s)))
    }

    /// Equality up to a nonzero scalar.
    pub fn proj_eq(&self, other: &ProjMap) -> bool {
        let a = self.m.iter().flatten();
        let b = other.m.iter().flatten();
        let pairs: Vec<(&Q, &Q)> = a.zip(b).collect();
        let Some((x0, y0)) = pairs.iter().find(|(x, _)| !x.is_zero()) else {
            return false;
        };
        if y0.is_zero() {
            return false;
        }
        pairs.iter().all(|(x, y)| *x * *y0 == *y * *x0)
    }
}

fn frame(p: &[Hom; 4]) -> Result<ProjMap> {
    let m = ProjMap::from_columns(p[0].coords(), p[1].coords(), p[2].coords())
        .map_err(|_| Error::DegeneratePosition)?;
    let lam = m.inverse().mul_vec(p[3].coords());
    if lam.iter().any(Zero::is_zero) {
        return Err(Error::DegeneratePosition);
    }
    let cols: [Vec3; 3] = std::array::from_fn(|j| m.column(j).map(|x| x * &lam[j]));
    ProjMap::from_columns(&cols[0], &cols[1], &cols[2])
}

/// The projective map sending `src[i]` to `dst[i]`, through the standard
/// frame `e1, e2, e3, (1,1,1)`.
pub fn map_from_correspondence(src: &[Hom; 4], dst: &[Hom; 4]) -> Result<ProjMap> {
    let fs = frame(src)?;
    let fd = frame(dst)?;
    Ok(fd.compose(&fs.inverse()))
}

/// `(Ω₁, Ω₂) = (tr³/det, same for the inverse transpose)`; both are
/// independent of the scale of `t`.
pub fn omega_invariants(t: &ProjMap) -> (Q, Q) {
    let d = t.det();
    let tr = t.trace();
    let o1 = &tr * &tr * &tr / &d;
    let tri = t.inverse().trace();
    let o2 = &tri * &tri * &tri * &d;
    (o1, o2)
}
