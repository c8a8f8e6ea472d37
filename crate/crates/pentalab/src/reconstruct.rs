//! Rebuilding a polygon and its monodromy from prescribed invariants.
//!
//! The variables `p_1, q_2, p_3, …` are indexed by positive integers. A
//! [`TruncatedTable`] holds the finite truncations `O_r^s` (odd `r, s`) and
//! `E_r^s` (even `r, s`): the signed admissible-subset sums over the integer
//! line that only use variables strictly between `r` and `s`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::dynamics::{Class, Kind, TwistedPolygon};
use crate::error::{Error, Result};
use crate::invariants::{eval_E, eval_O, invariant_sum, parity_product, CoordVector, Parity};
use crate::projective::{det3, map_from_correspondence, Hom, ProjMap, Vec3};
use crate::scalar::Q;

/// Memoized `O_r^s` and `E_r^s` for all `r ≤ s` up to `hi`.
#[derive(Clone, Debug)]
pub struct TruncatedTable {
    vars: Vec<Q>,
    hi: i64,
    // odd[(s+1)/2][(r+1)/2] for -1 <= r <= s
    odd: Vec<Vec<Q>>,
    // even[s/2][r/2] for 0 <= r <= s
    even: Vec<Vec<Q>>,
}

fn lowest(parity: Parity) -> i64 {
    match parity {
        Parity::Odd => -1,
        Parity::Even => 0,
    }
}

impl TruncatedTable {
    /// Table over an explicit list `vars[0] = p_1, vars[1] = q_2, …`.
    /// Truncations are computed for `s ≤ hi`, which must not exceed the list.
    pub fn from_sequence(vars: Vec<Q>, hi: i64) -> Result<Self> {
        if hi < 1 || hi as usize > vars.len() {
            return Err(Error::WindowExceeded { index: hi });
        }
        let mut t = TruncatedTable { vars, hi, odd: Vec::new(), even: Vec::new() };
        t.odd = t.build(Parity::Odd)?;
        t.even = t.build(Parity::Even)?;
        Ok(t)
    }

    /// Table for `2n`-periodic invariants, `p_{j+2n} = p_j`.
    pub fn periodic(v: &CoordVector, hi: i64) -> Result<Self> {
        let vars = (1..=hi.max(1)).map(|j| v.get(j).clone()).collect();
        TruncatedTable::from_sequence(vars, hi)
    }

    pub fn window(&self) -> i64 {
        self.hi
    }

    /// The variable with index `j` (`p_j` for odd `j`, `q_j` for even `j`).
    pub fn var(&self, j: i64) -> Result<&Q> {
        if j < 1 || j as usize > self.vars.len() {
            return Err(Error::WindowExceeded { index: j });
        }
        Ok(&self.vars[j as usize - 1])
    }

    fn build(&self, parity: Parity) -> Result<Vec<Vec<Q>>> {
        let lo = lowest(parity);
        let mut cols = Vec::new();
        let mut s = lo;
        while s <= self.hi {
            let len = ((s - lo) / 2 + 1) as usize;
            let mut col = vec![Q::zero(); len];
            // right recurrence, r descending from s
            let get = |col: &Vec<Q>, r: i64| -> Q {
                if r > s {
                    Q::zero()
                } else {
                    col[((r - lo) / 2) as usize].clone()
                }
            };
            let mut r = s;
            while r >= lo {
                let val = if r == s || r == s - 2 {
                    Q::one()
                } else {
                    let a = self.var(r + 2)?;
                    let tri = a * self.var(r + 3)? * self.var(r + 4)?;
                    get(&col, r + 2) - a * get(&col, r + 4) + tri * get(&col, r + 6)
                };
                col[((r - lo) / 2) as usize] = val;
                r -= 2;
            }
            cols.push(col);
            s += 2;
        }
        Ok(cols)
    }

    /// `O_r^s` or `E_r^s`; zero when `r > s`.
    pub fn truncated(&self, r: i64, s: i64, parity: Parity) -> Result<Q> {
        let lo = lowest(parity);
        let want = if parity == Parity::Odd { 1 } else { 0 };
        if r.rem_euclid(2) != want || s.rem_euclid(2) != want {
            return Err(Error::InvalidInput(format!("indices ({r}, {s}) do not match {parity:?} parity")));
        }
        if s > self.hi {
            return Err(Error::WindowExceeded { index: s });
        }
        if r > s {
            return Ok(Q::zero());
        }
        if r < lo {
            return Err(Error::WindowExceeded { index: r });
        }
        let tab = if parity == Parity::Odd { &self.odd } else { &self.even };
        Ok(tab[((s - lo) / 2) as usize][((r - lo) / 2) as usize].clone())
    }

    /// Re-derives every entry through the left recurrence
    /// `O_r^s = O_r^{s-2} - p_{s-2} O_r^{s-4} + p_{s-4}q_{s-3}p_{s-2} O_r^{s-6}`
    /// and returns the pairs `(r, s)` where it disagrees.
    pub fn left_recurrence_mismatches(&self, parity: Parity) -> Result<Vec<(i64, i64)>> {
        let lo = lowest(parity);
        let mut bad = Vec::new();
        let mut s = lo + 6;
        while s <= self.hi {
            let mut r = lo;
            while r < s - 2 {
                let a = self.var(s - 2)?;
                let tri = self.var(s - 4)? * self.var(s - 3)? * a;
                let rhs = self.truncated(r, s - 2, parity)? - a * self.truncated(r, s - 4, parity)?
                    + tri * self.truncated(r, s - 6, parity)?;
                if rhs != self.truncated(r, s, parity)? {
                    bad.push((r, s));
                }
                r += 2;
            }
            s += 2;
        }
        Ok(bad)
    }

    fn o(&self, r: i64, s: i64) -> Result<Q> {
        self.truncated(r, s, Parity::Odd)
    }

    fn e(&self, r: i64, s: i64) -> Result<Q> {
        self.truncated(r, s, Parity::Even)
    }

    /// `A_{-3} = [0,1,0]` and, for `j ≥ 0`,
    /// `A_{4j+1} = [O_1^{2j-1}, O_{-1}^{2j-1} + p_1 O_3^{2j-1}, O_{-1}^{2j-1}]`.
    pub fn point(&self, label: i64) -> Result<Vec3> {
        if label == -3 {
            return Ok(Hom::ints(0, 1, 0).into_coords());
        }
        if label < 1 || (label - 1) % 4 != 0 {
            return Err(Error::InvalidInput(format!("point label {label} is not 1 mod 4 and >= -3")));
        }
        let s = 2 * ((label - 1) / 4) - 1;
        let om = self.o(-1, s)?;
        Ok([self.o(1, s)?, &om + self.var(1)? * self.o(3, s)?, om])
    }

    /// `B_{-5} = [0,0,1]`, `B_{-1} = [1,0,0]` and, for `j ≥ 0`,
    /// `B_{4j+3} = [-E_2^{2j} + p_1 q_2 E_4^{2j}, E_0^{2j}, -E_0^{2j} + E_2^{2j}]`.
    pub fn line(&self, label: i64) -> Result<Vec3> {
        match label {
            -5 => return Ok(Hom::ints(0, 0, 1).into_coords()),
            -1 => return Ok(Hom::ints(1, 0, 0).into_coords()),
            _ => {}
        }
        if label < 3 || (label - 3) % 4 != 0 {
            return Err(Error::InvalidInput(format!("line label {label} is not 3 mod 4 and >= -5")));
        }
        let s = 2 * ((label - 3) / 4);
        let e0 = self.e(0, s)?;
        let e2 = self.e(2, s)?;
        let p1q2 = self.var(1)? * self.var(2)?;
        Ok([-&e2 + p1q2 * self.e(4, s)?, e0.clone(), -e0 + e2])
    }

    fn var_product(&self, from: i64, to: i64) -> Result<Q> {
        let mut p = Q::one();
        for j in from..=to {
            p *= self.var(j)?;
        }
        Ok(p)
    }

    fn var_product_step2(&self, from: i64, to: i64) -> Result<Q> {
        let mut p = Q::one();
        let mut j = from;
        while j <= to {
            p *= self.var(j)?;
            j += 2;
        }
        Ok(p)
    }
}

pub fn default_window(n: usize) -> i64 {
    4 * n as i64 + 16
}

fn hom(v: Vec3, label: i64) -> Result<Hom> {
    Hom::new(v).map_err(|_| Error::DegenerateConstruction { label })
}

/// The PolyPoint with the prescribed `2n`-periodic invariants, stored as the
/// class-1 representatives `A_1, A_5, …, A_{4n-3}` with the lifted monodromy.
pub fn build_polypoint(v: &CoordVector) -> Result<TwistedPolygon> {
    let t = TruncatedTable::periodic(v, default_window(v.n()))?;
    let n = v.n() as i64;
    let reps = (0..n).map(|i| hom(t.point(1 + 4 * i)?, 1 + 4 * i)).collect::<Result<Vec<_>>>()?;
    let m = monodromy_lift_from(&t, v.n())?.matrix()?;
    TwistedPolygon::new(Kind::Points, Class::One, reps, m)
}

/// The associated PolyLine `B_3, B_7, …, B_{4n-1}` with the same monodromy.
pub fn build_polyline(v: &CoordVector) -> Result<TwistedPolygon> {
    let t = TruncatedTable::periodic(v, default_window(v.n()))?;
    let n = v.n() as i64;
    let reps = (0..n).map(|i| hom(t.line(3 + 4 * i)?, 3 + 4 * i)).collect::<Result<Vec<_>>>()?;
    let m = monodromy_lift_from(&t, v.n())?.matrix()?;
    TwistedPolygon::new(Kind::Lines, Class::Three, reps, m)
}

/// The columns of a lift of the monodromy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyLift {
    pub v1: Vec3,
    pub v2: Vec3,
    pub v3: Vec3,
}

impl MonodromyLift {
    pub fn matrix(&self) -> Result<ProjMap> {
        ProjMap::from_columns(&self.v1, &self.v2, &self.v3)
    }

    pub fn trace(&self) -> Q {
        &self.v1[0] + &self.v2[1] + &self.v3[2]
    }

    pub fn det(&self) -> Q {
        det3(&self.v1, &self.v2, &self.v3)
    }
}

fn lin(a: &Q, u: &Vec3, b: &Q, w: &Vec3) -> Vec3 {
    std::array::from_fn(|i| a * &u[i] + b * &w[i])
}

fn monodromy_lift_from(t: &TruncatedTable, n: usize) -> Result<MonodromyLift> {
    let n = n as i64;
    let p1 = t.var(1)?.clone();
    let c2 = t.var(2 * n - 1)? * t.var(2 * n)? * t.var(2 * n + 1)?;
    let a_m3 = t.point(4 * n - 3)?;
    let a_p1 = t.point(4 * n + 1)?;
    let a_p5 = t.point(4 * n + 5)?;
    let zero = Q::zero();
    let v1 = lin(&p1, &a_p5, &-&p1, &a_p1);
    let v2 = lin(&c2, &a_m3, &zero, &a_m3);
    let v3 = lin(&p1, &a_p1, &-&c2, &a_m3);
    let lift = MonodromyLift { v1, v2, v3 };
    if lift.det().is_zero() {
        return Err(Error::SingularMap);
    }
    Ok(lift)
}

/// `T̃ = (V₁, V₂, V₃)` with `V₁ = p₁A_{4n+5} - p₁A_{4n+1}`,
/// `V₂ = c A_{4n-3}` and `V₃ = p₁A_{4n+1} - c A_{4n-3}`, where
/// `c = p_{2n-1} q_{2n} p_1`.
pub fn monodromy_lift(v: &CoordVector) -> Result<MonodromyLift> {
    let t = TruncatedTable::periodic(v, default_window(v.n()))?;
    monodromy_lift_from(&t, v.n())
}

/// The monodromy recovered from four points and their images one period on.
pub fn geometric_monodromy(v: &CoordVector) -> Result<ProjMap> {
    let t = TruncatedTable::periodic(v, default_window(v.n()))?;
    let n = v.n() as i64;
    let pts = |base: i64| -> Result<[Hom; 4]> {
        let l = [base, base + 4, base + 8, base + 12];
        Ok([hom(t.point(l[0])?, l[0])?, hom(t.point(l[1])?, l[1])?, hom(t.point(l[2])?, l[2])?, hom(t.point(l[3])?, l[3])?])
    };
    map_from_correspondence(&pts(-3)?, &pts(4 * n - 3)?)
}

/// `Ω₁ = (Σ O_k)³ / (O_n² E_n)` and `Ω₂ = (Σ E_k)³ / (E_n² O_n)`.
pub fn omega_from_invariants(v: &CoordVector) -> Result<(Q, Q)> {
    let n = v.n();
    let on = eval_O(v, n)?;
    let en = eval_E(v, n)?;
    if on.is_zero() || en.is_zero() {
        return Err(Error::ZeroLeadingInvariant);
    }
    let so = invariant_sum(v, Parity::Odd);
    let se = invariant_sum(v, Parity::Even);
    let o1 = &so * &so * &so / (&on * &on * &en);
    let o2 = &se * &se * &se / (&en * &en * &on);
    Ok((o1, o2))
}

/// `p₁ · Σ_{k=0}^{⌊n/2⌋} O_k`, the predicted trace of the lift.
pub fn predicted_trace(v: &CoordVector) -> Q {
    v.get(1) * invariant_sum(v, Parity::Odd)
}

/// `p₁³ (p₁p₃⋯p_{2n-1})² (q₂⋯q_{2n})`, the predicted determinant of the lift.
pub fn predicted_det(v: &CoordVector) -> Q {
    let p1 = v.get(1);
    let po = parity_product(v, Parity::Odd);
    p1 * p1 * p1 * &po * &po * parity_product(v, Parity::Even)
}

/// `det(A_{-3}, A_5, A_13)`; equals `p₁(1 - q₂p₃)`.
pub fn recip_determinant(t: &TruncatedTable) -> Result<Q> {
    Ok(det3(&t.point(-3)?, &t.point(5)?, &t.point(13)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub k: i64,
    pub d: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IncidenceReport {
    pub checks: Vec<IdentityCheck>,
}

impl IncidenceReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&IdentityCheck> {
        self.checks.iter().filter(|c| !c.holds).collect()
    }
}

fn scaled(v: &Vec3, s: &Q) -> Vec3 {
    std::array::from_fn(|i| &v[i] * s)
}

fn dot(a: &Vec3, b: &Vec3) -> Q {
    crate::projective::dot3(a, b)
}

/// Checks the dot- and cross-product identities between the points `A` and
/// lines `B` of one table for `2 ≤ k ≤ k_max` and `0 ≤ d ≤ d_max`.
pub fn verify_incidence_identities(t: &TruncatedTable, k_max: i64, d_max: i64) -> Result<IncidenceReport> {
    let mut checks = Vec::new();
    let mut push = |name: &str, k: i64, d: i64, holds: bool| {
        checks.push(IdentityCheck { name: name.to_string(), k, d, holds });
    };
    let a = |l: i64| t.point(l);
    let b = |l: i64| t.line(l);
    for k in 2..=k_max {
        let upto_q2k = t.var_product(1, 2 * k)?;
        let upto_p2k1 = t.var_product(1, 2 * k + 1)?;
        for d in 0..=d_max {
            let lhs = dot(&a(4 * k + 1)?, &b(4 * k + 3 + 4 * d)?);
            let rhs = &upto_q2k * t.e(2 * k + 2, 2 * k + 2 * d)?;
            push("A(4k+1).B(4k+3+4d)", k, d, lhs == rhs);
            let lhs = dot(&b(4 * k + 3)?, &a(4 * k + 5 + 4 * d)?);
            let rhs = &upto_p2k1 * t.o(2 * k + 3, 2 * k + 1 + 2 * d)?;
            push("B(4k+3).A(4k+5+4d)", k, d, lhs == rhs);
        }
        let lam = t.var_product_step2(1, 2 * k - 1)?;
        let cross = crate::projective::cross3(&a(4 * k + 1)?, &a(4 * k + 5)?);
        push("A(4k+1)xA(4k+5)", k, 0, cross == scaled(&b(4 * k + 3)?, &lam));
        let mu = t.var_product_step2(2, 2 * k)?;
        let cross = crate::projective::cross3(&b(4 * k + 3)?, &b(4 * k + 7)?);
        push("B(4k+3)xB(4k+7)", k, 0, cross == scaled(&a(4 * k + 5)?, &mu));
        push("A(4k+1).B(4k+7)", k, 0, dot(&a(4 * k + 1)?, &b(4 * k + 7)?) == upto_q2k);
        push("B(4k+3).A(4k+9)", k, 0, dot(&b(4 * k + 3)?, &a(4 * k + 9)?) == upto_p2k1);
        push("A(4k+1).B(4k+11)", k, 0, dot(&a(4 * k + 1)?, &b(4 * k + 11)?) == upto_q2k);
        push("B(4k+3).A(4k+13)", k, 0, dot(&b(4 * k + 3)?, &a(4 * k + 13)?) == upto_p2k1);
    }
    Ok(IncidenceReport { checks })
}

/// The scale `λ_k` with `A_{4k+1} × A_{4k+5} = λ_k B_{4k+3}`.
pub fn associate_scale(t: &TruncatedTable, k: i64) -> Result<Q> {
    let c = crate::projective::cross3(&t.point(4 * k + 1)?, &t.point(4 * k + 5)?);
    let b = t.line(4 * k + 3)?;
    let i = (0..3).find(|&i| !b[i].is_zero()).ok_or(Error::DegenerateConstruction { label: 4 * k + 3 })?;
    Ok(&c[i] / &b[i])
}
