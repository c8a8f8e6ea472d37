//! The pentagram map in coordinates and on twisted polygons.
//!
//! A [`TwistedPolygon`] stores one period of a bi-infinite sequence of points
//! or lines. Labels all share one odd residue mod 4 (its [`Class`]); the `i`-th
//! stored triple has label `c + 4i`, and label `c + 4i + 4n·t` is obtained by
//! applying the monodromy `t` times. The monodromy is always stored by its
//! action on points; lines are moved by the inverse transpose.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{eval_E, eval_O, invariant_sum, CoordVector, Parity};
use crate::projective::{det3, plane_cross_ratio, Hom, ProjMap, Vec3};
use crate::scalar::Q;

fn pole(v: &CoordVector, a: i64) -> Result<Q> {
    let d = Q::one() - v.get(a) * v.get(a + 1);
    if d.is_zero() {
        Err(Error::MapSingularity { index: v.wrap(a) })
    } else {
        Ok(d)
    }
}

/// First pentagram involution:
/// `x'_{2k-1} = x_{2k}(1 - x_{2k+1}x_{2k+2}) / (1 - x_{2k-3}x_{2k-2})` and
/// `x'_{2k} = x_{2k-1}(1 - x_{2k-3}x_{2k-2}) / (1 - x_{2k+1}x_{2k+2})`.
pub fn alpha1(v: &CoordVector) -> Result<CoordVector> {
    let n = v.n() as i64;
    let mut y = vec![Q::zero(); 2 * n as usize];
    for k in 1..=n {
        let before = pole(v, 2 * k - 3)?;
        let after = pole(v, 2 * k + 1)?;
        y[(2 * k - 2) as usize] = v.get(2 * k) * &after / &before;
        y[(2 * k - 1) as usize] = v.get(2 * k - 1) * &before / &after;
    }
    CoordVector::new(y)
}

/// Second pentagram involution:
/// `x''_{2k+1} = x_{2k}(1 - x_{2k-2}x_{2k-1}) / (1 - x_{2k+2}x_{2k+3})` and
/// `x''_{2k} = x_{2k+1}(1 - x_{2k+2}x_{2k+3}) / (1 - x_{2k-2}x_{2k-1})`.
pub fn alpha2(v: &CoordVector) -> Result<CoordVector> {
    let n = v.n() as i64;
    let mut y = vec![Q::zero(); 2 * n as usize];
    for k in 1..=n {
        let before = pole(v, 2 * k - 2)?;
        let after = pole(v, 2 * k + 2)?;
        y[v.wrap(2 * k + 1) - 1] = v.get(2 * k) * &before / &after;
        y[(2 * k - 1) as usize] = v.get(2 * k + 1) * &after / &before;
    }
    CoordVector::new(y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Points,
    Lines,
}

impl Kind {
    pub fn other(self) -> Kind {
        match self {
            Kind::Points => Kind::Lines,
            Kind::Lines => Kind::Points,
        }
    }
}

/// Residue mod 4 shared by all labels of a polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    One,
    Three,
}

impl Class {
    pub fn base(self) -> i64 {
        match self {
            Class::One => 1,
            Class::Three => 3,
        }
    }

    pub fn flip(self) -> Class {
        match self {
            Class::One => Class::Three,
            Class::Three => Class::One,
        }
    }

    pub fn from_base(c: i64) -> Result<Class> {
        match c.rem_euclid(4) {
            1 => Ok(Class::One),
            3 => Ok(Class::Three),
            _ => Err(Error::InvalidInput(format!("parity class must be 1 or 3 mod 4, got {c}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPolygon {
    kind: Kind,
    class: Class,
    reps: Vec<Hom>,
    monodromy: ProjMap,
    inverse: ProjMap,
}

impl TwistedPolygon {
    pub fn new(kind: Kind, class: Class, reps: Vec<Hom>, monodromy: ProjMap) -> Result<Self> {
        if reps.len() < 3 {
            return Err(Error::InvalidInput(format!("need at least 3 representatives, got {}", reps.len())));
        }
        let inverse = monodromy.inverse();
        Ok(TwistedPolygon { kind, class, reps, monodromy, inverse })
    }

    /// A periodic polygon: the monodromy is the identity.
    pub fn closed(kind: Kind, class: Class, reps: Vec<Hom>) -> Result<Self> {
        TwistedPolygon::new(kind, class, reps, ProjMap::identity())
    }

    pub fn n(&self) -> usize {
        self.reps.len()
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn class(&self) -> Class {
        self.class
    }

    pub fn reps(&self) -> &[Hom] {
        &self.reps
    }

    pub fn monodromy(&self) -> &ProjMap {
        &self.monodromy
    }

    pub fn is_closed(&self) -> bool {
        self.monodromy.proj_eq(&ProjMap::identity())
    }

    /// The triple with the given label (which must match the class).
    pub fn at(&self, label: i64) -> Hom {
        let c = self.class.base();
        assert_eq!((label - c).rem_euclid(4), 0, "label {label} is not in class {c}");
        let idx = (label - c) / 4;
        let n = self.n() as i64;
        let (t, r) = (idx.div_euclid(n), idx.rem_euclid(n));
        let mut h = self.reps[r as usize].clone();
        let (m, steps) = if t >= 0 { (&self.monodromy, t) } else { (&self.inverse, -t) };
        for _ in 0..steps {
            h = match self.kind {
                Kind::Points => m.apply(&h),
                Kind::Lines => m.apply_dual(&h),
            };
        }
        h
    }

    fn cross_at(&self, a: i64, b: i64, label: i64) -> Result<Hom> {
        Hom::new(self.at(a).cross(&self.at(b))).map_err(|_| Error::DegenerateConstruction { label })
    }

    /// Image under a projective map (points move by `s`, lines by its dual).
    pub fn transformed(&self, s: &ProjMap) -> TwistedPolygon {
        let reps = self
            .reps
            .iter()
            .map(|h| match self.kind {
                Kind::Points => s.apply(h),
                Kind::Lines => s.apply_dual(h),
            })
            .collect();
        let m = s.compose(&self.monodromy).compose(&s.inverse());
        TwistedPolygon::new(self.kind, self.class, reps, m).expect("same size")
    }

    fn with_reps(&self, kind: Kind, class: Class, reps: Vec<Hom>, monodromy: ProjMap) -> TwistedPolygon {
        TwistedPolygon::new(kind, class, reps, monodromy).expect("same size")
    }

    /// Same sequence with every representative rescaled to last nonzero
    /// coordinate one.
    pub fn normalized(&self) -> TwistedPolygon {
        let reps = self.reps.iter().map(Hom::normalized).collect();
        self.with_reps(self.kind, self.class, reps, self.monodromy.clone())
    }
}

/// Associate at offset 2: `B_j = S_{j-2} × S_{j+2}`. Swaps kind and class.
pub fn delta1(p: &TwistedPolygon) -> Result<TwistedPolygon> {
    let class = p.class.flip();
    let c = class.base();
    let reps = (0..p.n() as i64)
        .map(|i| {
            let l = c + 4 * i;
            p.cross_at(l - 2, l + 2, l)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(p.with_reps(p.kind.other(), class, reps, p.monodromy.clone()))
}

/// Offset-4 construction `B_j = S_{j-4} × S_{j+4}`. Swaps kind, keeps class.
pub fn delta2(p: &TwistedPolygon) -> Result<TwistedPolygon> {
    let c = p.class.base();
    let reps = (0..p.n() as i64)
        .map(|i| {
            let l = c + 4 * i;
            p.cross_at(l - 4, l + 4, l)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(p.with_reps(p.kind.other(), p.class, reps, p.monodromy.clone()))
}

/// The dual polygon: the associate, read in the dual plane. Kind is kept,
/// the class flips and the monodromy becomes its inverse transpose.
pub fn dual(p: &TwistedPolygon) -> Result<TwistedPolygon> {
    let d = delta1(p)?;
    Ok(p.with_reps(p.kind, d.class, d.reps, p.monodromy.inverse_transpose()))
}

/// One step of the pentagram map, `δ₁ ∘ δ₂`. For points this is the
/// polygon of intersections of consecutive short diagonals.
pub fn pentagram_step(p: &TwistedPolygon) -> Result<TwistedPolygon> {
    delta1(&delta2(p)?)
}

/// The `2n` projective invariants, flattened to `x_1 … x_{2n}`.
///
/// For a label `j` of the polygon `S` with associate `S'`:
/// `x_{(j+1)/2} = X(S_{j+8}, S_{j+4}, S'_{j+6}×S'_{j-2}, S'_{j+6}×S'_{j-6})` and
/// `x_{(j-1)/2} = X(S_{j-8}, S_{j-4}, S'_{j-6}×S'_{j+2}, S'_{j-6}×S'_{j+6})`,
/// where `X` is [`plane_cross_ratio`].
pub fn extract_invariants(p: &TwistedPolygon) -> Result<CoordVector> {
    let n = p.n() as i64;
    let c = p.class.base();
    let assoc = |i: i64| p.cross_at(i - 2, i + 2, i);
    let mut x = vec![Q::zero(); 2 * n as usize];
    let slot = |i: i64| (i - 1).rem_euclid(2 * n) as usize;
    for t in 0..n {
        let j = c + 4 * t;
        let err = |_| Error::DegenerateConstruction { label: j };
        let a6 = assoc(j + 6)?;
        let m1 = Hom::new(a6.cross(&assoc(j - 2)?)).map_err(err)?;
        let m2 = Hom::new(a6.cross(&assoc(j - 6)?)).map_err(err)?;
        x[slot((j + 1) / 2)] = plane_cross_ratio(&p.at(j + 8), &p.at(j + 4), &m1, &m2).map_err(err)?;
        let b6 = assoc(j - 6)?;
        let m3 = Hom::new(b6.cross(&assoc(j + 2)?)).map_err(err)?;
        let m4 = Hom::new(b6.cross(&assoc(j + 6)?)).map_err(err)?;
        x[slot((j - 1) / 2)] = plane_cross_ratio(&p.at(j - 8), &p.at(j - 4), &m3, &m4).map_err(err)?;
    }
    CoordVector::new(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    /// Extracted coordinates of the geometric `α₁` image equal `α₁(x)`.
    pub alpha1: bool,
    /// Same for `α₂`.
    pub alpha2: bool,
}

/// Geometric realizations: `δ₂` acts as `α₂` and `δ₁δ₂δ₁` as `α₁` on class-1
/// polygons; on class-3 polygons the two roles are exchanged.
pub fn geometric_alpha(p: &TwistedPolygon, which: u8) -> Result<TwistedPolygon> {
    let direct = matches!((p.class, which), (Class::One, 2) | (Class::Three, 1));
    if direct {
        delta2(p)
    } else {
        delta1(&delta2(&delta1(p)?)?)
    }
}

pub fn coordinate_geometric_agreement(p: &TwistedPolygon) -> Result<AgreementReport> {
    let x = extract_invariants(p)?;
    let g1 = extract_invariants(&geometric_alpha(p, 1)?)?;
    let g2 = extract_invariants(&geometric_alpha(p, 2)?)?;
    Ok(AgreementReport { alpha1: g1 == alpha1(&x)?, alpha2: g2 == alpha2(&x)? })
}

fn rank_le_two(vs: &[Vec3]) -> bool {
    for a in 0..vs.len() {
        for b in (a + 1)..vs.len() {
            let c = crate::projective::cross3(&vs[a], &vs[b]);
            if c.iter().any(|t| !t.is_zero()) {
                return vs.iter().all(|v| det3(&vs[a], &vs[b], v).is_zero());
            }
        }
    }
    true
}

/// A closed polygon with an even number of representatives is degenerate
/// when each of its two alternating subsequences is collinear (for points)
/// or concurrent (for lines). Returns false for twisted or odd-length input.
pub fn is_degenerate(p: &TwistedPolygon) -> bool {
    if !p.is_closed() || p.n() % 2 != 0 {
        return false;
    }
    alternating_classes_degenerate(p.reps())
}

/// Collinearity of both alternating subsequences of a closed vertex list.
pub fn alternating_classes_degenerate(reps: &[Hom]) -> bool {
    (0..2).all(|s| {
        let cls: Vec<Vec3> = reps.iter().skip(s).step_by(2).map(|h| h.coords().clone()).collect();
        rank_le_two(&cls)
    })
}

/// Coordinate form of degeneracy: `x_{2k} x_{2k+1} = 1` for every `k` on a
/// class-1 polygon (that is, `q_j p_{j+1} = 1`), and `x_{2k-1} x_{2k} = 1` on
/// a class-3 polygon. The same test applies to points and to lines.
pub fn degeneracy_coords(v: &CoordVector, class: Class) -> bool {
    let first = match class {
        Class::One => 2,
        Class::Three => 1,
    };
    (0..v.n() as i64).all(|k| (v.get(first + 2 * k) * v.get(first + 2 * k + 1)).is_one())
}

/// Closed polygon through the points `(1, t, t²)` of the parabola, optionally
/// moved by a projective map.
pub fn conic_polygon(ts: &[Q], map: Option<&ProjMap>) -> Result<TwistedPolygon> {
    let reps = ts
        .iter()
        .map(|t| {
            let h = Hom::new([Q::one(), t.clone(), t * t])?;
            Ok(match map {
                Some(m) => m.apply(&h),
                None => h,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    TwistedPolygon::closed(Kind::Points, Class::One, reps)
}

/// The two relations satisfied by the coordinates of a polygon inscribed in
/// a conic, checked for every `k`:
/// `(1-q_{2k})(1-q_{2k-2}p_{2k-1}) = (1-p_{2k-1})(1-q_{2k}p_{2k+1})` and
/// `(1-p_{2k-1}) q_{2k} (1-p_{2k+1}) = (1-q_{2k-2}) p_{2k-1} (1-q_{2k})`.
pub fn conic_identities(v: &CoordVector) -> (bool, bool) {
    let x = |i: i64| v.get(i).clone();
    let one = || Q::one();
    let first = (1..=v.n() as i64).all(|k| {
        (one() - x(2 * k)) * (one() - x(2 * k - 2) * x(2 * k - 1))
            == (one() - x(2 * k - 1)) * (one() - x(2 * k) * x(2 * k + 1))
    });
    let second = (1..=v.n() as i64).all(|k| {
        (one() - x(2 * k - 1)) * x(2 * k) * (one() - x(2 * k + 1))
            == (one() - x(2 * k - 2)) * x(2 * k - 1) * (one() - x(2 * k))
    });
    (first, second)
}

/// For a closed polygon the monodromy is trivial, which forces
/// `(Σ O_k)³ = 27 O_n² E_n` and `(Σ E_k)³ = 27 E_n² O_n`.
pub fn closed_relations(v: &CoordVector) -> Result<(bool, bool)> {
    let n = v.n();
    let on = eval_O(v, n)?;
    let en = eval_E(v, n)?;
    let so = invariant_sum(v, Parity::Odd);
    let se = invariant_sum(v, Parity::Even);
    let c = Q::from_integer(27.into());
    Ok((&so * &so * &so == &c * &on * &on * &en, &se * &se * &se == &c * &en * &en * &on))
}

/// One pentagram step on a closed vertex list:
/// `v'_i = (v_{i-1} v_{i+1}) ∩ (v_i v_{i+2})`, normalized.
pub fn pentagram_vertices(v: &[Hom]) -> Result<Vec<Hom>> {
    let m = v.len();
    (0..m)
        .map(|i| {
            let d1 = v[(i + m - 1) % m].cross(&v[(i + 1) % m]);
            let d2 = v[i].cross(&v[(i + 2) % m]);
            let p = crate::projective::cross3(&d1, &d2);
            Hom::new(p).map(|h| h.normalized()).map_err(|_| Error::MapSingularity { index: i + 1 })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn alpha1_alternating_example() {
        let v = CoordVector::new([2, 3, 2, 3, 2, 3].map(q).to_vec()).unwrap();
        let w = CoordVector::new([3, 2, 3, 2, 3, 2].map(q).to_vec()).unwrap();
        assert_eq!(alpha1(&v).unwrap(), w);
    }

    #[test]
    fn constant_vectors_are_fixed() {
        let v = CoordVector::constant(5, q(3));
        assert_eq!(alpha1(&v).unwrap(), v);
        assert_eq!(alpha2(&v).unwrap(), v);
        let bad = CoordVector::constant(4, q(1));
        assert!(matches!(alpha1(&bad), Err(Error::MapSingularity { .. })));
    }

    #[test]
    fn pole_is_named() {
        let mut x = vec![q(2); 8];
        x[2] = q(1);
        x[3] = q(1);
        let v = CoordVector::new(x).unwrap();
        assert_eq!(alpha1(&v), Err(Error::MapSingularity { index: 3 }));
    }

    #[test]
    fn two_line_polygon_is_degenerate() {
        // alternate between the lines y = 0 and y = 1
        let reps: Vec<Hom> = (0..6).map(|i| Hom::ints(i * i + 1, i % 2, 1)).collect();
        let p = TwistedPolygon::closed(Kind::Points, Class::One, reps).unwrap();
        assert!(is_degenerate(&p));
        let generic: Vec<Hom> = (0..6).map(|i| Hom::ints(i, i * i, 1)).collect();
        let g = TwistedPolygon::closed(Kind::Points, Class::One, generic).unwrap();
        assert!(!is_degenerate(&g));
    }
}
