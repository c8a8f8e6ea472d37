//! Admissible subsets and the pentagram invariants `O_k`, `E_k`.
//!
//! Indices are 1-based and read modulo `2n`. For odd parity, the `n` odd
//! indices `1, 3, …, 2n-1` are thought of as sites `0..n` on a cycle; a
//! singleton `{j}` occupies one site and a triple `{k-1, k, k+1}` occupies the
//! two sites of `k-1` and `k+1`. A subset is admissible when distinct units
//! leave at least one free site between them. Even parity is the same picture
//! shifted by one.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Q;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    fn offset(self) -> usize {
        match self {
            Parity::Odd => 1,
            Parity::Even => 2,
        }
    }

    pub fn other(self) -> Parity {
        match self {
            Parity::Odd => Parity::Even,
            Parity::Even => Parity::Odd,
        }
    }

    pub fn of(index: usize) -> Parity {
        if index % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// The `2n` variables `x_1 … x_{2n}`, with the `p`/`q` aliases `p_j = x_j`
/// for odd `j` and `q_j = x_j` for even `j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoordVector {
    x: Vec<Q>,
}

impl CoordVector {
    pub fn new(x: Vec<Q>) -> Result<Self> {
        if x.len() < 6 || x.len() % 2 != 0 {
            return Err(Error::InvalidInput(format!(
                "a coordinate vector needs 2n >= 6 entries, got {}",
                x.len()
            )));
        }
        Ok(CoordVector { x })
    }

    pub fn constant(n: usize, c: Q) -> Self {
        CoordVector { x: vec![c; 2 * n] }
    }

    pub fn n(&self) -> usize {
        self.x.len() / 2
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn as_slice(&self) -> &[Q] {
        &self.x
    }

    pub fn into_vec(self) -> Vec<Q> {
        self.x
    }

    /// `x_i` with `i` taken modulo `2n` (1-based).
    pub fn get(&self, i: i64) -> &Q {
        let m = self.x.len() as i64;
        &self.x[(i - 1).rem_euclid(m) as usize]
    }

    /// Reduces an index to `1..=2n`.
    pub fn wrap(&self, i: i64) -> usize {
        ((i - 1).rem_euclid(self.x.len() as i64) + 1) as usize
    }

    /// `y_i = x_{i+s}`.
    pub fn shifted(&self, s: i64) -> CoordVector {
        let x = (1..=self.x.len() as i64).map(|i| self.get(i + s).clone()).collect();
        CoordVector { x }
    }

    pub fn with_entry(&self, i: usize, value: Q) -> CoordVector {
        let mut x = self.x.clone();
        x[i - 1] = value;
        CoordVector { x }
    }

    /// The scaling `S_t`: odd entries divided by `t`, even entries multiplied.
    pub fn scale_homogeneous(&self, t: &Q) -> CoordVector {
        let x = self
            .x
            .iter()
            .enumerate()
            .map(|(i, v)| if i % 2 == 0 { v / t } else { v * t })
            .collect();
        CoordVector { x }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Unit {
    Singleton(usize),
    /// `{k-1, k, k+1}`, stored by its center `k`.
    Triple(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleSubset {
    pub parity: Parity,
    pub n: usize,
    pub units: Vec<Unit>,
}

fn wrap_index(i: i64, n: usize) -> usize {
    ((i - 1).rem_euclid(2 * n as i64) + 1) as usize
}

impl AdmissibleSubset {
    pub fn weight(&self) -> usize {
        self.units.len()
    }

    pub fn is_full(&self) -> bool {
        self.units.len() == self.n && self.units.iter().all(|u| matches!(u, Unit::Singleton(_)))
    }

    /// +1 for an even number of singletons. The full set counts as +1.
    pub fn sign(&self) -> i32 {
        if self.is_full() {
            return 1;
        }
        let s = self.units.iter().filter(|u| matches!(u, Unit::Singleton(_))).count();
        if s % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        let mut v = Vec::new();
        for u in &self.units {
            match *u {
                Unit::Singleton(j) => v.push(j),
                Unit::Triple(k) => {
                    v.push(wrap_index(k as i64 - 1, self.n));
                    v.push(k);
                    v.push(wrap_index(k as i64 + 1, self.n));
                }
            }
        }
        v.sort_unstable();
        v
    }

    /// `sign · ∏ x_j`.
    pub fn monomial(&self, v: &CoordVector) -> Q {
        let mut p = Q::one();
        for u in &self.units {
            match *u {
                Unit::Singleton(j) => p *= v.get(j as i64),
                Unit::Triple(k) => {
                    let k = k as i64;
                    p *= v.get(k - 1) * v.get(k) * v.get(k + 1);
                }
            }
        }
        if self.sign() < 0 {
            -p
        } else {
            p
        }
    }

    fn site(&self, index: usize) -> usize {
        (index - self.parity.offset()) / 2 % self.n
    }

    fn sites(&self, u: &Unit) -> Vec<usize> {
        match *u {
            Unit::Singleton(j) => vec![self.site(j)],
            Unit::Triple(k) => vec![
                self.site(wrap_index(k as i64 - 1, self.n)),
                self.site(wrap_index(k as i64 + 1, self.n)),
            ],
        }
    }

    fn unit_valid(&self, u: &Unit) -> bool {
        match *u {
            Unit::Singleton(j) => (1..=2 * self.n).contains(&j) && Parity::of(j) == self.parity,
            Unit::Triple(k) => (1..=2 * self.n).contains(&k) && Parity::of(k) != self.parity,
        }
    }

    /// Checks the unit grammar: correct parities, no overlaps and no two
    /// units on neighbouring sites. The full set is accepted as the exception.
    pub fn is_admissible(&self) -> bool {
        if !self.units.iter().all(|u| self.unit_valid(u)) {
            return false;
        }
        if self.is_full() {
            let mut s: Vec<usize> = self.units.iter().flat_map(|u| self.sites(u)).collect();
            s.sort_unstable();
            s.dedup();
            return s.len() == self.n;
        }
        let n = self.n;
        let occ: Vec<Vec<usize>> = self.units.iter().map(|u| self.sites(u)).collect();
        let total: usize = occ.iter().map(Vec::len).sum();
        if total + self.units.len() > n && self.units.len() > 1 {
            return false;
        }
        if self.units.len() == 1 && occ[0].len() >= n {
            return false;
        }
        for a in 0..occ.len() {
            for b in (a + 1)..occ.len() {
                for &s in &occ[a] {
                    for &t in &occ[b] {
                        let d = (s + n - t) % n;
                        if d == 0 || d == 1 || d == n - 1 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// The weights for which the subset families are defined.
pub fn supported_weight(n: usize, k: usize) -> bool {
    k <= n / 2 || k == n
}

type Memo = RwLock<HashMap<(usize, usize, Parity), Arc<Vec<AdmissibleSubset>>>>;

fn memo() -> &'static Memo {
    static M: OnceLock<Memo> = OnceLock::new();
    M.get_or_init(|| RwLock::new(HashMap::new()))
}

/// All weight-`k` admissible subsets of the given parity, in a fixed order.
/// Results are cached per `(n, k, parity)`.
pub fn enumerate_admissible(n: usize, k: usize, parity: Parity) -> Result<Arc<Vec<AdmissibleSubset>>> {
    if n < 3 || !supported_weight(n, k) {
        return Err(Error::UnsupportedWeight { n, k });
    }
    if let Some(v) = memo().read().expect("memo poisoned").get(&(n, k, parity)) {
        return Ok(Arc::clone(v));
    }
    let list = Arc::new(enumerate_uncached(n, k, parity));
    memo()
        .write()
        .expect("memo poisoned")
        .entry((n, k, parity))
        .or_insert_with(|| Arc::clone(&list));
    Ok(list)
}

fn enumerate_uncached(n: usize, k: usize, parity: Parity) -> Vec<AdmissibleSubset> {
    let off = parity.offset();
    let index = |site: usize| 2 * (site % n) + off;
    if k == n {
        let units = (0..n).map(|s| Unit::Singleton(index(s))).collect();
        return vec![AdmissibleSubset { parity, n, units }];
    }
    if k == 0 {
        return vec![AdmissibleSubset { parity, n, units: vec![] }];
    }
    // units as (start site, size in sites), starts strictly increasing
    let mut out = Vec::new();
    let mut stack: Vec<(usize, usize)> = Vec::new();
    fn rec(
        n: usize,
        k: usize,
        next: usize,
        stack: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if stack.len() == k {
            let (s0, _) = stack[0];
            let (sl, zl) = stack[stack.len() - 1];
            let last_end = sl + zl - 1;
            if s0 + n >= last_end + 2 {
                out.push(stack.clone());
            }
            return;
        }
        for s in next..n {
            for size in 1..=2 {
                stack.push((s, size));
                rec(n, k, s + size + 1, stack, out);
                stack.pop();
            }
        }
    }
    let mut raw = Vec::new();
    rec(n, k, 0, &mut stack, &mut raw);
    for units in raw {
        let units = units
            .into_iter()
            .map(|(s, size)| {
                if size == 1 {
                    Unit::Singleton(index(s))
                } else {
                    Unit::Triple(wrap_index(index(s) as i64 + 1, n))
                }
            })
            .collect();
        out.push(AdmissibleSubset { parity, n, units });
    }
    out
}

fn eval(v: &CoordVector, k: usize, parity: Parity) -> Result<Q> {
    let n = v.n();
    if !supported_weight(n, k) {
        return Err(Error::UnsupportedWeight { n, k });
    }
    if k == n {
        return Ok(parity_product(v, parity));
    }
    Ok(weight_polynomial(v, parity).swap_remove(k))
}

/// Sum over the enumerated subsets; slow, kept as a cross-check.
pub fn eval_by_enumeration(v: &CoordVector, k: usize, parity: Parity) -> Result<Q> {
    let subsets = enumerate_admissible(v.n(), k, parity)?;
    Ok(subsets.iter().fold(Q::zero(), |acc, s| acc + s.monomial(v)))
}

fn poly_add_scaled(acc: &mut [Q], p: &[Q], c: &Q, shift: usize) {
    for (i, a) in p.iter().enumerate() {
        if i + shift < acc.len() {
            acc[i + shift] += a * c;
        }
    }
}

fn poly_mul_scalar(p: &[Q], c: &Q, shift: usize, len: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); len];
    poly_add_scaled(&mut out, p, c, shift);
    out
}

/// `[O_0, O_1, …, O_{⌊n/2⌋}]` (or the `E` list) by a transfer recursion
/// around the cycle of sites, without enumerating subsets.
///
/// Site `s` carries the index `2s + 1` (odd) or `2s + 2` (even). A unit is a
/// singleton on one site (factor `-x`) or a triple spanning two consecutive
/// sites (factor `x_{i} x_{i+1} x_{i+2}`); units are separated by an empty site.
pub fn weight_polynomial(v: &CoordVector, parity: Parity) -> Vec<Q> {
    let n = v.n() as i64;
    let len = v.n() / 2 + 1;
    let off = parity.offset() as i64;
    let idx = |s: i64| 2 * s.rem_euclid(n) + off;
    let single = |s: i64| -v.get(idx(s)).clone();
    let triple = |s: i64| {
        let i = idx(s);
        v.get(i) * v.get(i + 1) * v.get(i + 2)
    };
    // arrangements on the open path of sites a..=b
    let path = |a: i64, b: i64| -> Vec<Q> {
        let mut one = vec![Q::zero(); len];
        one[0] = Q::one();
        if a > b {
            return one;
        }
        let m = (b - a + 3) as usize;
        let mut g = vec![vec![Q::zero(); len]; m];
        g[0] = one;
        for i in 0..(b - a + 1) as usize {
            let cur = std::mem::take(&mut g[i]);
            let site = a + i as i64;
            poly_add_scaled(&mut g[i + 1], &cur, &Q::one(), 0);
            poly_add_scaled(&mut g[i + 2], &cur, &single(site), 1);
            if site < b {
                poly_add_scaled(&mut g[i + 3], &cur, &triple(site), 1);
            }
            g[i] = cur;
        }
        let mut out = g[m - 2].clone();
        poly_add_scaled(&mut out, &g[m - 1], &Q::one(), 0);
        out
    };
    let mut total = path(1, n - 1);
    let add = |total: &mut Vec<Q>, p: Vec<Q>| poly_add_scaled(total, &p, &Q::one(), 0);
    add(&mut total, poly_mul_scalar(&path(2, n - 2), &single(0), 1, len));
    add(&mut total, poly_mul_scalar(&path(3, n - 2), &triple(0), 1, len));
    add(&mut total, poly_mul_scalar(&path(2, n - 3), &triple(n - 1), 1, len));
    total
}

/// `O_k`: the sum of signed monomials over odd admissible subsets of weight `k`.
#[allow(non_snake_case)]
pub fn eval_O(v: &CoordVector, k: usize) -> Result<Q> {
    eval(v, k, Parity::Odd)
}

/// `E_k`: the even counterpart of [`eval_O`].
#[allow(non_snake_case)]
pub fn eval_E(v: &CoordVector, k: usize) -> Result<Q> {
    eval(v, k, Parity::Even)
}

pub fn eval_invariant(v: &CoordVector, k: usize, parity: Parity) -> Result<Q> {
    eval(v, k, parity)
}

/// `(O_1, …, O_m, E_1, …, E_m, O_n, E_n)` with `m = ⌊n/2⌋`.
pub fn invariant_tuple(v: &CoordVector) -> Vec<Q> {
    let n = v.n();
    let m = n / 2;
    let mut t = Vec::with_capacity(2 * m + 2);
    for p in [Parity::Odd, Parity::Even] {
        t.extend(weight_polynomial(v, p).into_iter().skip(1).take(m));
    }
    t.push(eval(v, n, Parity::Odd).expect("supported weight"));
    t.push(eval(v, n, Parity::Even).expect("supported weight"));
    t
}

/// The tuple with its `O` and `E` halves exchanged.
pub fn swap_tuple(t: &[Q]) -> Vec<Q> {
    let m = (t.len() - 2) / 2;
    let mut s = Vec::with_capacity(t.len());
    s.extend_from_slice(&t[m..2 * m]);
    s.extend_from_slice(&t[..m]);
    s.push(t[2 * m + 1].clone());
    s.push(t[2 * m].clone());
    s
}

/// `Σ_{k=0}^{⌊n/2⌋} O_k` (or the `E` version).
pub fn invariant_sum(v: &CoordVector, parity: Parity) -> Q {
    weight_polynomial(v, parity).into_iter().fold(Q::zero(), |acc, x| acc + x)
}

/// `f_j = ∏_{i ≡ j (mod 4)} x_i` for `j = 1..4`. Needs `2n` divisible by 4.
pub fn mod4_products(v: &CoordVector) -> Result<[Q; 4]> {
    if v.n() % 2 != 0 {
        return Err(Error::UnsupportedPeriod { n: v.n() });
    }
    let mut f: [Q; 4] = std::array::from_fn(|_| Q::one());
    for (i, x) in v.as_slice().iter().enumerate() {
        f[i % 4] *= x;
    }
    Ok(f)
}

/// Exact `∂/∂x_j` of `O_k` or `E_k`. Every monomial uses each variable at
/// most once, so a unit forward difference is exact.
pub fn partial_derivative(v: &CoordVector, k: usize, parity: Parity, j: usize) -> Result<Q> {
    if j == 0 || j > v.len() {
        return Err(Error::OutOfRange(format!("index {j} outside 1..={}", v.len())));
    }
    let bumped = v.with_entry(j, v.get(j as i64) + Q::one());
    Ok(eval(&bumped, k, parity)? - eval(v, k, parity)?)
}

/// Splits a singleton-only subset into maximal tight blocks
/// `{j, j+4, …, j+4a}` (indices mod `2n`), each listed in chain order.
/// Blocks are ordered by their first element.
pub fn tight_factorization(s: &AdmissibleSubset) -> Result<Vec<Vec<usize>>> {
    let mut idx = Vec::with_capacity(s.units.len());
    for u in &s.units {
        match *u {
            Unit::Singleton(j) => idx.push(j),
            Unit::Triple(_) => return Err(Error::NotSingletonOnly),
        }
    }
    if 2 * idx.len() >= s.n {
        return Err(Error::OutOfRange(format!(
            "tight factorization needs weight < n/2, got {} for n = {}",
            idx.len(),
            s.n
        )));
    }
    idx.sort_unstable();
    let has = |j: usize| idx.contains(&j);
    let step = |j: usize, d: i64| wrap_index(j as i64 + d, s.n);
    let mut blocks = Vec::new();
    for &j in &idx {
        if has(step(j, -4)) {
            continue;
        }
        let mut b = vec![j];
        let mut cur = j;
        while has(step(cur, 4)) {
            cur = step(cur, 4);
            b.push(cur);
        }
        blocks.push(b);
    }
    Ok(blocks)
}

/// Which side a singleton's partner triple grows towards.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `{j}` or `{j-2, j-1, j}`.
    Right,
    /// `{j}` or `{j, j+1, j+2}`.
    Left,
}

/// Sum of `O_{S'}` over the admissible partners `S'` of a singleton set:
/// `RO_S` for [`Side::Right`], `LE_S` for [`Side::Left`].
pub fn partner_sum(singletons: &[usize], parity: Parity, n: usize, side: Side, v: &CoordVector) -> Q {
    let k = singletons.len();
    let mut total = Q::zero();
    for mask in 0u32..(1u32 << k) {
        let units = singletons
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                if mask & (1 << i) == 0 {
                    Unit::Singleton(j)
                } else {
                    let d = if side == Side::Right { -1 } else { 1 };
                    Unit::Triple(wrap_index(j as i64 + d, n))
                }
            })
            .collect();
        let s = AdmissibleSubset { parity, n, units };
        if s.is_admissible() {
            total += s.monomial(v);
        }
    }
    total
}

/// `O_n E_n`-style products of all odd (or even) entries.
pub fn parity_product(v: &CoordVector, parity: Parity) -> Q {
    let off = parity.offset() - 1;
    v.as_slice().iter().skip(off).step_by(2).fold(Q::one(), |acc, x| acc * x)
}

/// `x_{2k}x_{2k+1}` products, used by the degenerate-polygon tests.
pub fn adjacent_products(v: &CoordVector, first: i64) -> Vec<Q> {
    (0..v.n() as i64).map(|k| v.get(first + 2 * k) * v.get(first + 2 * k + 1)).collect()
}
