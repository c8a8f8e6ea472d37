//! Dodgson condensation on the octahedral tiling and its bridge to the
//! pentagram map.
//!
//! Vertices of the tiling are integer triples `(a, b, z)` with all three
//! coordinates of one parity. The octahedron with bottom `(0,0,0)` has top
//! `(0,0,2)` and middle vertices `(±1, ±1, 1)`; every octahedron satisfies
//! `V_t V_b = V_nw V_se - V_sw V_ne`.
//!
//! A [`LayerGrid`] stores layer `z` with cell `(i, j)` at `a = 2j + z`,
//! `b = -(2i + z)`, so that the rule reads as the usual Desnanot–Jacobi step
//! on matrix minors.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use serde::Serialize;

use crate::dynamics::{alternating_classes_degenerate, degeneracy_coords, extract_invariants, pentagram_vertices};
use crate::dynamics::{Class, Kind, TwistedPolygon};
use crate::error::{Error, Result};
use crate::invariants::{eval_E, eval_O, mod4_products, weight_polynomial, CoordVector, Parity};
use crate::projective::Hom;
use crate::sample::{distinct_rationals, Rng};
use crate::scalar::{exact_root, fmt_q, q, Q};

pub type Matrix = Vec<Vec<Q>>;

/// One doubly periodic horizontal layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerGrid {
    period: usize,
    cells: Matrix,
    height: i64,
}

impl LayerGrid {
    pub fn new(cells: Matrix, height: i64) -> Result<Self> {
        let period = cells.len();
        if period == 0 || cells.iter().any(|r| r.len() != period) {
            return Err(Error::InvalidInput("a layer needs a nonempty square block".into()));
        }
        Ok(LayerGrid { period, cells, height })
    }

    pub fn constant(period: usize, value: Q, height: i64) -> Self {
        LayerGrid { period, cells: vec![vec![value; period]; period], height }
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn cells(&self) -> &Matrix {
        &self.cells
    }

    pub fn get(&self, i: i64, j: i64) -> &Q {
        let p = self.period as i64;
        &self.cells[i.rem_euclid(p) as usize][j.rem_euclid(p) as usize]
    }

    pub fn is_constant(&self) -> bool {
        let first = &self.cells[0][0];
        self.cells.iter().flatten().all(|c| c == first)
    }
}

/// The layer above `current`, given the one below it.
pub fn octahedron_step(lower: &LayerGrid, current: &LayerGrid) -> Result<LayerGrid> {
    if lower.period != current.period {
        return Err(Error::InvalidInput("layers must share a period".into()));
    }
    let p = current.period as i64;
    let mut cells = vec![vec![Q::zero(); current.period]; current.period];
    for i in 0..p {
        for j in 0..p {
            let bottom = lower.get(i + 1, j + 1);
            if bottom.is_zero() {
                return Err(Error::SingularInterior {
                    layer: lower.height,
                    row: ((i + 1) % p) as usize,
                    col: ((j + 1) % p) as usize,
                });
            }
            let c = |a: i64, b: i64| current.get(a, b);
            cells[i as usize][j as usize] = (c(i, j) * c(i + 1, j + 1) - c(i + 1, j) * c(i, j + 1)) / bottom;
        }
    }
    Ok(LayerGrid { period: current.period, cells, height: current.height + 1 })
}

fn check_square(m: &Matrix) -> Result<usize> {
    let k = m.len();
    if k == 0 || m.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidInput("matrix must be square and nonempty".into()));
    }
    Ok(k)
}

/// Determinant by condensation: start from a layer of ones under `M` and
/// replace each layer by its connected `2×2` minors divided by the interior
/// of the layer below, until one entry is left.
pub fn dodgson_det(m: &Matrix) -> Result<Q> {
    let k = check_square(m)?;
    let mut lower: Matrix = vec![vec![Q::one(); k + 1]; k + 1];
    let mut cur = m.clone();
    for layer in 1..k {
        let size = cur.len() - 1;
        let mut next = vec![vec![Q::zero(); size]; size];
        for i in 0..size {
            for j in 0..size {
                let b = &lower[i + 1][j + 1];
                if b.is_zero() {
                    return Err(Error::SingularInterior { layer: layer as i64 - 1, row: i + 1, col: j + 1 });
                }
                next[i][j] = (&cur[i][j] * &cur[i + 1][j + 1] - &cur[i + 1][j] * &cur[i][j + 1]) / b;
            }
        }
        lower = std::mem::replace(&mut cur, next);
    }
    Ok(cur[0][0].clone())
}

/// Fraction-free elimination with row pivoting.
pub fn bareiss_det(m: &Matrix) -> Result<Q> {
    let k = check_square(m)?;
    let mut a = m.clone();
    let mut sign = Q::one();
    let mut prev = Q::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !a[r][c].is_zero()) else {
            return Ok(Q::zero());
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for r in (c + 1)..k {
            for j in (c + 1)..k {
                a[r][j] = (&a[r][j] * &a[c][c] - &a[r][c] * &a[c][j]) / &prev;
            }
            a[r][c] = Q::zero();
        }
        prev = a[c][c].clone();
    }
    Ok(sign * &a[k - 1][k - 1])
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut seen = vec![false; p.len()];
    let mut sign = 1;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut i = s;
        while !seen[i] {
            seen[i] = true;
            i = p[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// [`dodgson_det`] with retries. On a vanishing interior minor the rows and
/// columns are shuffled (sign corrected); after the first few attempts `M`
/// is also mixed with random unit-triangular integer matrices, which keeps
/// the determinant and makes further zero minors unlikely. The result is compared with [`bareiss_det`] before it is
/// returned.
pub fn dodgson_det_with_retry(m: &Matrix, rng: &mut Rng, attempts: usize) -> Result<Q> {
    let k = check_square(m)?;
    let oracle = bareiss_det(m)?;
    let mut last = match dodgson_det(m) {
        Ok(d) => return certify(d, oracle),
        Err(e) => e,
    };
    let mut rows: Vec<usize> = (0..k).collect();
    let mut cols: Vec<usize> = (0..k).collect();
    for attempt in 0..attempts {
        let base = if attempt * 4 >= attempts { unit_mix(m, rng) } else { m.clone() };
        rows.shuffle(rng);
        cols.shuffle(rng);
        let shuffled: Matrix = rows.iter().map(|&r| cols.iter().map(|&c| base[r][c].clone()).collect()).collect();
        match dodgson_det(&shuffled) {
            Ok(d) => {
                let s = permutation_sign(&rows) * permutation_sign(&cols);
                return certify(d * q(s), oracle);
            }
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// `L M U` with `L` unit lower and `U` unit upper triangular integer
/// matrices whose entries are drawn from `-64..=64`.
fn unit_mix(m: &Matrix, rng: &mut Rng) -> Matrix {
    use rand::Rng as _;
    let k = m.len();
    let mut a = m.clone();
    for r in 1..k {
        let (head, tail) = a.split_at_mut(r);
        for source in head.iter() {
            let t = q(rng.gen_range(-64..=64));
            for (x, y) in tail[0].iter_mut().zip(source) {
                *x += &t * y;
            }
        }
    }
    for c in 1..k {
        for s in 0..c {
            let t = q(rng.gen_range(-64..=64));
            for row in a.iter_mut() {
                let add = &t * &row[s];
                row[c] += add;
            }
        }
    }
    a
}

fn certify(d: Q, oracle: Q) -> Result<Q> {
    if d == oracle {
        Ok(d)
    } else {
        Err(Error::InvalidInput(format!("condensation gave {d}, elimination gave {oracle}")))
    }
}

/// Layers `0..=m` of the sandwich over `M`: ones, then `M` repeated
/// periodically, then successive connected minors.
pub fn sandwich(m: &Matrix) -> Result<Vec<LayerGrid>> {
    let k = check_square(m)?;
    let mut layers = vec![LayerGrid::constant(k, Q::one(), 0), LayerGrid::new(m.clone(), 1)?];
    while layers.len() <= k {
        let l = layers.len();
        let next = octahedron_step(&layers[l - 2], &layers[l - 1])?;
        layers.push(next);
    }
    Ok(layers)
}

/// Cell `(i, j)` of the top sandwich layer is the determinant of `M` with
/// rows and columns cyclically shifted, which is `(-1)^{(m-1)(i+j)} det M`.
/// The top layer is constant when `m` is odd and a checkerboard of `±det M`
/// when `m` is even.
pub fn sandwich_top_expected(m: &Matrix) -> Result<LayerGrid> {
    let k = check_square(m)?;
    let d = bareiss_det(m)?;
    let cells = (0..k)
        .map(|i| (0..k).map(|j| if (k - 1) * (i + j) % 2 == 0 { d.clone() } else { -d.clone() }).collect())
        .collect();
    LayerGrid::new(cells, k as i64)
}

/// `π(a, b, z) = (2a - b, z)`.
pub fn project_pi(a: i64, b: i64, z: i64) -> Result<(i64, i64)> {
    let p = a.rem_euclid(2);
    if b.rem_euclid(2) != p || z.rem_euclid(2) != p {
        return Err(Error::NotATilingVertex(a, b, z));
    }
    Ok((2 * a - b, z))
}

/// The six vertices of the octahedron with bottom `(0,0,0)`, in the order
/// bottom, top, nw, ne, sw, se.
pub const MODEL_OCTAHEDRON: [(i64, i64, i64); 6] = [(0, 0, 0), (0, 0, 2), (-1, 1, 1), (1, 1, 1), (-1, -1, 1), (1, -1, 1)];

/// Vertex labels along one row of the planar triangulation. Entry `i`
/// is the label the paper writes `c_{i+1/2}`: the zigzag vertex between the
/// edges `x_i` and `x_{i+1}`. Period `2n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CirculentLabelling {
    #[serde(with = "crate::scalar::serde_q::vec")]
    pub c: Vec<Q>,
}

impl CirculentLabelling {
    pub fn new(c: Vec<Q>) -> Result<Self> {
        if c.len() < 6 || c.len() % 2 != 0 {
            return Err(Error::InvalidInput(format!("need an even number >= 6 of labels, got {}", c.len())));
        }
        Ok(CirculentLabelling { c })
    }

    pub fn n(&self) -> usize {
        self.c.len() / 2
    }

    pub fn get(&self, i: i64) -> &Q {
        &self.c[i.rem_euclid(self.c.len() as i64) as usize]
    }
}

/// `x_j = c_{j-5/2} c_{j+5/2} / (c_{j-3/2} c_{j+3/2})`.
pub fn circulent_to_pentagram(c: &CirculentLabelling) -> Result<CoordVector> {
    if let Some(i) = c.c.iter().position(Zero::is_zero) {
        return Err(Error::ZeroVertexLabel { index: i as i64 });
    }
    let x = (1..=c.c.len() as i64)
        .map(|j| c.get(j - 3) * c.get(j + 2) / (c.get(j - 2) * c.get(j + 1)))
        .collect();
    CoordVector::new(x)
}

/// A preimage of `x` under [`circulent_to_pentagram`].
///
/// First solve `x_j = r_{j+2} / r_{j-2}` one residue class mod 4 at a time;
/// this closes up because `f_j = 1`. Then `c` is recovered from
/// `r_j = c_{j+1/2} / c_{j-1/2}`, which needs `∏ r_j = 1`. Each class of `r`
/// can be rescaled, multiplying its product `ρ` by a `(n/2)`-th power: when
/// every `ρ` has a rational `(n/2)`-th root all four are set to one,
/// otherwise only the total product is, through the first class. The
/// remaining freedom is one scalar per residue class of `c` mod 4; the
/// normalization fixes `r_1 … r_4` before rescaling and `c_{1/2} = 1`.
pub fn lift_pentagram(x: &CoordVector) -> Result<CirculentLabelling> {
    let n = x.n();
    if n % 4 != 0 {
        return Err(Error::UnsupportedPeriod { n });
    }
    let f = mod4_products(x)?;
    if let Some((i, v)) = f.iter().enumerate().find(|(_, v)| !v.is_one()) {
        return Err(Error::NotLiftable { class: i + 1, value: fmt_q(v) });
    }
    let len = 2 * n;
    let mut r = vec![Q::one(); len + 1]; // r[j] for j = 1..=2n
    for j in 5..=len {
        r[j] = x.get(j as i64 - 2) * &r[j - 4];
    }
    let rho: Vec<Q> = (1..=4).map(|c| (c..=len).step_by(4).fold(Q::one(), |a, j| a * &r[j])).collect();
    let per = (n / 2) as u32;
    let roots: Option<Vec<Q>> = rho.iter().map(|p| exact_root(p, per)).collect();
    let scale: Vec<Q> = match roots {
        Some(rs) => rs.iter().map(|t| Q::one() / t).collect(),
        None => {
            let total = rho.iter().fold(Q::one(), |a, p| a * p);
            let t = exact_root(&total, per).ok_or_else(|| Error::NoRationalLift(fmt_q(&total), per as usize))?;
            vec![Q::one() / t, Q::one(), Q::one(), Q::one()]
        }
    };
    for j in 1..=len {
        r[j] *= &scale[(j - 1) % 4];
    }
    let mut c = vec![Q::one(); len];
    for j in 1..len {
        c[j] = &r[j] * &c[j - 1];
    }
    debug_assert!((&r[len] * &c[len - 1]).is_one());
    CirculentLabelling::new(c)
}

/// The gauge relating two labellings with the same image: ratios
/// `lifted_i / original_i = g_{i mod 4} · d^{⌊i/4⌋}` with `d^{n/2} = 1`.
/// Returns `(g, d)`, or `None` when the ratios have another form.
pub fn gauge_factors(lifted: &CirculentLabelling, original: &CirculentLabelling) -> Option<([Q; 4], Q)> {
    let len = lifted.c.len();
    if len != original.c.len() || len % 4 != 0 || original.c.iter().any(Zero::is_zero) {
        return None;
    }
    let t: Vec<Q> = lifted.c.iter().zip(&original.c).map(|(a, b)| a / b).collect();
    let d = &t[4] / &t[0];
    let blocks = (len / 4) as u32;
    let ok = crate::scalar::pow(&d, blocks).is_one()
        && (0..len).all(|i| t[i] == &t[i % 4] * crate::scalar::pow(&d, (i / 4) as u32));
    ok.then(|| (std::array::from_fn(|i| t[i].clone()), d))
}

/// A circulent condensation pushed into the plane: row `z` holds the labels
/// at positions `u ≡ z (mod 2)`, `u = 2i + (z mod 2)`, period `2n` in `u`.
/// Successive rows obey
/// `c(u, z+1) c(u, z-1) = c(u-3, z) c(u+3, z) - c(u-1, z) c(u+1, z)`.
#[derive(Clone, Debug)]
pub struct CirculentGrid {
    n: usize,
    rows: BTreeMap<i64, Vec<Q>>,
}

impl CirculentGrid {
    /// Two successive rows `z0` and `z0 + 1`, each with `n` labels.
    pub fn from_rows(z0: i64, lower: Vec<Q>, upper: Vec<Q>) -> Result<Self> {
        let n = lower.len();
        if n < 3 || upper.len() != n {
            return Err(Error::InvalidInput("rows must have the same length n >= 3".into()));
        }
        let rows = BTreeMap::from([(z0, lower), (z0 + 1, upper)]);
        Ok(CirculentGrid { n, rows })
    }

    /// The grid whose strip `z0` is the zigzag `c`.
    pub fn from_labelling(z0: i64, c: &CirculentLabelling) -> Result<Self> {
        let n = c.n();
        let row = |z: i64| -> Vec<Q> { (0..n as i64).map(|i| c.get(2 * i + z.rem_euclid(2)).clone()).collect() };
        CirculentGrid::from_rows(z0, row(z0), row(z0 + 1))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> impl Iterator<Item = (&i64, &Vec<Q>)> {
        self.rows.iter()
    }

    pub fn row(&self, z: i64) -> Option<&Vec<Q>> {
        self.rows.get(&z)
    }

    pub fn top(&self) -> i64 {
        *self.rows.keys().next_back().expect("two rows")
    }

    pub fn bottom(&self) -> i64 {
        *self.rows.keys().next().expect("two rows")
    }

    /// Label at position `u` on row `z`.
    pub fn label(&self, u: i64, z: i64) -> Result<&Q> {
        if (u - z).rem_euclid(2) != 0 {
            return Err(Error::NotATilingVertex(u, 0, z));
        }
        let row = self.rows.get(&z).ok_or_else(|| Error::OutOfRange(format!("row {z} not developed")))?;
        let i = (u - z.rem_euclid(2)).div_euclid(2).rem_euclid(self.n as i64);
        Ok(&row[i as usize])
    }

    /// Adds rows until `top`.
    pub fn develop_up(&mut self, top: i64) -> Result<()> {
        while self.top() < top {
            let z = self.top();
            let mut next = Vec::with_capacity(self.n);
            for i in 0..self.n as i64 {
                let u = 2 * i + (z + 1).rem_euclid(2);
                let b = self.label(u, z - 1)?;
                if b.is_zero() {
                    return Err(Error::SingularInterior { layer: z - 1, row: 0, col: i as usize });
                }
                let v = (self.label(u - 3, z)? * self.label(u + 3, z)? - self.label(u - 1, z)? * self.label(u + 1, z)?) / b;
                next.push(v);
            }
            self.rows.insert(z + 1, next);
        }
        Ok(())
    }

    /// Adds rows until `bottom`, running the same rule downward.
    pub fn develop_down(&mut self, bottom: i64) -> Result<()> {
        while self.bottom() > bottom {
            let z = self.bottom();
            let mut next = Vec::with_capacity(self.n);
            for i in 0..self.n as i64 {
                let u = 2 * i + (z - 1).rem_euclid(2);
                let t = self.label(u, z + 1)?;
                if t.is_zero() {
                    return Err(Error::SingularInterior { layer: z + 1, row: 0, col: i as usize });
                }
                let v = (self.label(u - 3, z)? * self.label(u + 3, z)? - self.label(u - 1, z)? * self.label(u + 1, z)?) / t;
                next.push(v);
            }
            self.rows.insert(z - 1, next);
        }
        Ok(())
    }

    /// The zigzag of strip `z` (rows `z` and `z + 1`) as a circulent
    /// labelling: entry `w` sits on whichever row has the parity of `w`.
    pub fn zigzag(&self, z: i64) -> Result<CirculentLabelling> {
        let c = (0..2 * self.n as i64)
            .map(|w| if (w - z).rem_euclid(2) == 0 { self.label(w, z) } else { self.label(w, z + 1) }.cloned())
            .collect::<Result<Vec<_>>>()?;
        CirculentLabelling::new(c)
    }

    /// The pentagram labelling of strip `z`.
    pub fn strip(&self, z: i64) -> Result<CoordVector> {
        circulent_to_pentagram(&self.zigzag(z)?)
    }

    /// Label of the horizontal edge on row `z` with midpoint `e`: its two
    /// apexes over the product of its endpoints.
    pub fn horizontal_label(&self, e: i64, z: i64) -> Result<Q> {
        let den = self.label(e - 1, z)? * self.label(e + 1, z)?;
        if den.is_zero() {
            return Err(Error::ZeroVertexLabel { index: e });
        }
        Ok(self.label(e, z + 1)? * self.label(e, z - 1)? / den)
    }

    /// Checks the two local rules of a pentagram labelling on strip `z`
    /// (needs rows `z-1 ..= z+2`). In every triangle the two slanted edges
    /// `a, b` and the horizontal edge `c` satisfy `ab - c = 1`; the two
    /// triangles on either side of a horizontal edge of row `z+1` then have
    /// equal slanted products `wx = yz`.
    pub fn compatibility(&self, z: i64) -> Result<CompatibilityReport> {
        let x = self.strip(z)?;
        let above = self.strip(z + 1)?;
        let mut triangle = true;
        let mut shared = true;
        for e in 1..=2 * self.n as i64 {
            let base = if (e - z).rem_euclid(2) == 1 { z } else { z + 1 };
            let ab = x.get(e) * x.get(e + 1);
            if &ab - self.horizontal_label(e, base)? != Q::one() {
                triangle = false;
            }
            if base == z + 1 && ab != above.get(e) * above.get(e + 1) {
                shared = false;
            }
        }
        Ok(CompatibilityReport { triangle_rule: triangle, shared_edge_rule: shared })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CompatibilityReport {
    /// `ab - c = 1` in every triangle.
    pub triangle_rule: bool,
    /// `wx = yz` across every horizontal edge.
    pub shared_edge_rule: bool,
}

/// Closed `4N`-gon with axis-parallel sides, alternately horizontal and
/// vertical: `v_{2i-1} = (ξ_i, η_i)`, `v_{2i} = (ξ_{i+1}, η_i)`.
pub fn rectilinear_polygon(big_n: usize, rng: &mut Rng) -> Result<Vec<Hom>> {
    if big_n < 3 {
        return Err(Error::OutOfRange(format!("N = {big_n} is below 3")));
    }
    let m = 2 * big_n;
    let xi = distinct_rationals(rng, m, 24);
    let eta = distinct_rationals(rng, m, 24);
    let mut v = Vec::with_capacity(2 * m);
    for i in 0..m {
        v.push(Hom::new([xi[i].clone(), eta[i].clone(), Q::one()])?);
        v.push(Hom::new([xi[(i + 1) % m].clone(), eta[i].clone(), Q::one()])?);
    }
    Ok(v)
}

/// The closed PolyLine of edges `v_i v_{i+1}`.
pub fn edge_polyline(vertices: &[Hom]) -> Result<TwistedPolygon> {
    let m = vertices.len();
    let reps = (0..m)
        .map(|i| Hom::new(vertices[i].cross(&vertices[(i + 1) % m])))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::DegeneratePosition)?;
    TwistedPolygon::closed(Kind::Lines, Class::One, reps)
}

/// Invariants of a polygon with `n = 4m` sides that collapses: `O_k = E_k = 0`
/// for `0 < k < 2m`, `O_{2m} = E_{2m} = 2` and `O_n = E_n = 1`.
pub fn degenerate_profile_holds(x: &CoordVector) -> Result<bool> {
    let n = x.n();
    if n % 4 != 0 {
        return Err(Error::UnsupportedPeriod { n });
    }
    let half = n / 2;
    for p in [Parity::Odd, Parity::Even] {
        let w = weight_polynomial(x, p);
        if w[1..half].iter().any(|t| !t.is_zero()) || w[half] != q(2) {
            return Ok(false);
        }
    }
    Ok(eval_O(x, n)?.is_one() && eval_E(x, n)?.is_one())
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseReport {
    /// Half the number of vertices over two: the polygon has `4N` vertices.
    pub big_n: usize,
    pub vertices: usize,
    /// Degeneracy after each application of the vertex map, starting with
    /// the input polygon at index 0.
    pub trace: Vec<bool>,
    /// First vertex-map iterate whose two alternating vertex classes are
    /// collinear.
    pub collapse_step: Option<usize>,
    /// The same count with `α₁∘α₂` as one step.
    pub collapse_step_paired: Option<usize>,
    /// Edge invariants show the degenerate profile before iteration.
    pub degenerate_profile: bool,
    /// Row of the lifted condensation that is constant (it is zero).
    pub constant_row: Option<i64>,
    /// Strip just below that row, counted from the input strip.
    pub predicted_step: Option<usize>,
    /// That strip's labelling satisfies a coordinate degeneracy pattern.
    pub predicted_strip_degenerate: bool,
}

/// Iterates the pentagram map on a rectilinear polygon until both
/// alternating vertex classes are collinear, and predicts the step from the
/// condensation over the lifted edge labelling: the input is strip 1, each
/// row up is one application of the map, and the first constant row above
/// the input marks the last defined strip.
pub fn collapse_experiment(vertices: &[Hom], max_steps: usize) -> Result<CollapseReport> {
    let m = vertices.len();
    if m % 4 != 0 || m < 12 {
        return Err(Error::InvalidInput(format!("need 4N vertices with N >= 3, got {m}")));
    }
    let big_n = m / 4;
    let mut trace = vec![alternating_classes_degenerate(vertices)];
    let mut cur = vertices.to_vec();
    let mut collapse = None;
    for step in 1..=max_steps {
        cur = pentagram_vertices(&cur)?;
        let d = alternating_classes_degenerate(&cur);
        trace.push(d);
        if d {
            collapse = Some(step);
            break;
        }
    }
    let x = extract_invariants(&edge_polyline(vertices)?)?;
    let degenerate_profile = degenerate_profile_holds(&x)?;
    let c = lift_pentagram(&x)?;
    let mut grid = CirculentGrid::from_labelling(1, &c)?;
    let mut constant_row = None;
    for z in 3..=(2 * max_steps as i64 + 4) {
        grid.develop_up(z)?;
        let row = grid.row(z).expect("developed");
        if row.iter().all(|v| v == &row[0]) {
            constant_row = Some(z);
            break;
        }
    }
    let predicted_step = constant_row.map(|z| (z - 3) as usize);
    let predicted_strip_degenerate = match constant_row {
        Some(z) => {
            let s = grid.strip(z - 2)?;
            degeneracy_coords(&s, Class::One) || degeneracy_coords(&s, Class::Three)
        }
        None => false,
    };
    Ok(CollapseReport {
        big_n,
        vertices: m,
        trace,
        collapse_step: collapse,
        collapse_step_paired: collapse.filter(|s| s % 2 == 0).map(|s| s / 2),
        degenerate_profile,
        constant_row,
        predicted_step,
        predicted_strip_degenerate,
    })
}
