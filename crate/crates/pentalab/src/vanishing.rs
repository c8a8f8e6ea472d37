//! Roots-of-unity sums behind the independence of the invariants, and the
//! exact Jacobian rank test.
//!
//! Throughout, `n` is odd and `ω = exp(2πi/n)`. For `1 ≤ v ≤ (n-3)/2`,
//! `λ_v = Σ ω^{s_1 + … + s_v}` over increasing sequences in `{2, …, n-2}`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{invariant_tuple, partial_derivative, CoordVector, Parity};
use crate::sample::{generic_coords, Rng};
use crate::scalar::{pow, Q};

pub const TOL: f64 = 1e-9;

fn omega_pow(n: usize, e: i64) -> Complex64 {
    let t = 2.0 * std::f64::consts::PI * (e.rem_euclid(n as i64) as f64) / n as f64;
    Complex64::new(t.cos(), t.sin())
}

fn check_range(n: usize, v: usize) -> Result<()> {
    if n < 5 || n % 2 == 0 {
        return Err(Error::OutOfRange(format!("n = {n} must be odd and at least 5")));
    }
    if v < 1 || v > (n - 3) / 2 {
        return Err(Error::OutOfRange(format!("v = {v} outside 1..={}", (n - 3) / 2)));
    }
    Ok(())
}

/// How the constraint on consecutive entries of a sequence is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reading {
    /// `s_{j+1} ≥ s_j + 2`: no two consecutive values.
    Gap,
    /// `s_j ≤ s_{j+1} + 2`, vacuous for increasing sequences.
    Printed,
}

fn sequences(n: usize, v: usize, reading: Reading) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(v);
    fn rec(n: usize, v: usize, start: usize, gap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == v {
            out.push(cur.clone());
            return;
        }
        for s in start..=n - 2 {
            cur.push(s);
            rec(n, v, s + gap, gap, cur, out);
            cur.pop();
        }
    }
    let gap = if reading == Reading::Gap { 2 } else { 1 };
    rec(n, v, 2, gap, &mut cur, &mut out);
    out
}

/// `λ_v` by summing over the sequences directly.
pub fn lambda_direct(n: usize, v: usize, reading: Reading) -> Result<Complex64> {
    check_range(n, v)?;
    Ok(sequences(n, v, reading)
        .iter()
        .map(|s| omega_pow(n, s.iter().sum::<usize>() as i64))
        .sum())
}

/// A positive measure with integer atoms on the `n`-th roots of unity,
/// stored as the sorted list of exponents (with repetition).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AdaptedMeasure {
    n: usize,
    atoms: Vec<usize>,
}

impl AdaptedMeasure {
    pub fn new(n: usize, exponents: impl IntoIterator<Item = i64>) -> Self {
        let mut atoms: Vec<usize> = exponents.into_iter().map(|e| e.rem_euclid(n as i64) as usize).collect();
        atoms.sort_unstable();
        AdaptedMeasure { n, atoms }
    }

    pub fn empty(n: usize) -> Self {
        AdaptedMeasure { n, atoms: Vec::new() }
    }

    pub fn mass(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    /// At most one unit of mass at each root.
    pub fn is_sparse(&self) -> bool {
        self.atoms.windows(2).all(|w| w[0] != w[1])
    }

    /// Mass at the root `ω^e`.
    pub fn mass_at(&self, e: i64) -> usize {
        let e = e.rem_euclid(self.n as i64) as usize;
        self.atoms.iter().filter(|&&a| a == e).count()
    }

    /// Adding the two measures.
    pub fn product(&self, other: &AdaptedMeasure) -> AdaptedMeasure {
        assert_eq!(self.n, other.n, "measures on different circles");
        AdaptedMeasure::new(self.n, self.atoms.iter().chain(&other.atoms).map(|&a| a as i64))
    }

    /// `⟨τ⟩ = ω^{Σ atoms}`.
    pub fn eval(&self) -> Complex64 {
        omega_pow(self.n, self.atoms.iter().sum::<usize>() as i64)
    }
}

/// A formal integer combination of adapted measures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MeasureSum {
    terms: BTreeMap<AdaptedMeasure, i64>,
}

impl MeasureSum {
    pub fn zero() -> Self {
        MeasureSum::default()
    }

    pub fn unit(n: usize) -> Self {
        MeasureSum::from(AdaptedMeasure::empty(n))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AdaptedMeasure, &i64)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: AdaptedMeasure, c: i64) {
        let e = self.terms.entry(m).or_insert(0);
        *e += c;
        if *e == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn add(&self, other: &MeasureSum) -> MeasureSum {
        let mut s = self.clone();
        for (m, c) in &other.terms {
            s.add_term(m.clone(), *c);
        }
        s
    }

    pub fn scale(&self, c: i64) -> MeasureSum {
        let mut s = MeasureSum::zero();
        for (m, d) in &self.terms {
            s.add_term(m.clone(), c * d);
        }
        s
    }

    pub fn mul(&self, other: &MeasureSum) -> MeasureSum {
        let mut s = MeasureSum::zero();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                s.add_term(a.product(b), c * d);
            }
        }
        s
    }

    pub fn eval(&self) -> Complex64 {
        self.terms.iter().map(|(m, c)| m.eval() * *c as f64).sum()
    }
}

impl From<AdaptedMeasure> for MeasureSum {
    fn from(m: AdaptedMeasure) -> Self {
        let mut s = MeasureSum::zero();
        s.add_term(m, 1);
        s
    }
}

/// All mass-`k` measures supported on the given exponents.
pub fn psi(n: usize, support: &[i64], k: usize) -> MeasureSum {
    let mut s = MeasureSum::zero();
    let mut cur = Vec::new();
    fn rec(n: usize, sup: &[i64], k: usize, from: usize, sparse: bool, cur: &mut Vec<i64>, s: &mut MeasureSum) {
        if cur.len() == k {
            s.add_term(AdaptedMeasure::new(n, cur.iter().copied()), 1);
            return;
        }
        for i in from..sup.len() {
            cur.push(sup[i]);
            rec(n, sup, k, if sparse { i + 1 } else { i }, sparse, cur, s);
            cur.pop();
        }
    }
    rec(n, support, k, 0, false, &mut cur, &mut s);
    s
}

/// All sparse mass-`k` measures supported on the given exponents.
pub fn psi_sparse(n: usize, support: &[i64], k: usize) -> MeasureSum {
    let mut s = MeasureSum::zero();
    let mut cur = Vec::new();
    fn rec(n: usize, sup: &[i64], k: usize, from: usize, cur: &mut Vec<i64>, s: &mut MeasureSum) {
        if cur.len() == k {
            s.add_term(AdaptedMeasure::new(n, cur.iter().copied()), 1);
            return;
        }
        for i in from..sup.len() {
            cur.push(sup[i]);
            rec(n, sup, k, i + 1, cur, s);
            cur.pop();
        }
    }
    rec(n, support, k, 0, &mut cur, &mut s);
    s
}

/// Exponents in the open arc through `-1` with endpoints `ω^{±v}`.
pub fn arc_a(n: usize, v: usize) -> Vec<i64> {
    ((v + 1) as i64..=(n - v - 1) as i64).collect()
}

/// Exponents in the closed complementary arc, `-v ..= v`.
pub fn arc_a_complement(v: usize) -> Vec<i64> {
    (-(v as i64)..=v as i64).collect()
}

/// The compression `(s_1, …, s_v) ↦ (s_j + v + 1 - 2j)_j`. It preserves the
/// total and sends gap sequences onto the mass-`v` measures on [`arc_a`].
pub fn compress(n: usize, s: &[usize]) -> AdaptedMeasure {
    let v = s.len() as i64;
    AdaptedMeasure::new(n, s.iter().enumerate().map(|(j, &x)| x as i64 + v - 1 - 2 * j as i64))
}

/// Whether compression is a sum-preserving bijection from the sequences of
/// the given reading onto the mass-`v` measures supported on [`arc_a`].
pub fn compression_is_bijective(n: usize, v: usize, reading: Reading) -> Result<bool> {
    check_range(n, v)?;
    let target = psi(n, &arc_a(n, v), v);
    let mut image = MeasureSum::zero();
    for s in sequences(n, v, reading) {
        let m = compress(n, &s);
        if (m.eval() - omega_pow(n, s.iter().sum::<usize>() as i64)).norm() > TOL {
            return Ok(false);
        }
        image.add_term(m, 1);
    }
    Ok(image == target)
}

/// `⟨Θ_j⟩`: all mass-`j` measures on the full circle.
pub fn theta(n: usize, j: usize) -> MeasureSum {
    let all: Vec<i64> = (0..n as i64).collect();
    psi(n, &all, j)
}

/// `P(v, w) = ⟨Ψ'(A_v^c, w)⟩` for `0 ≤ w ≤ 2v+1`, by peeling the pair
/// `ω^{±v}` off the arc:
/// `P(v, w) = P(v-1, w) + 2 Re(ω^v) P(v-1, w-1) + P(v-1, w-2)`, from `A_0^c = {1}`.
pub fn sparse_complement_table(n: usize, v: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![1.0, 1.0]];
    for a in 1..=v {
        let prev = &rows[a - 1];
        let get = |w: i64| if w < 0 { 0.0 } else { prev.get(w as usize).copied().unwrap_or(0.0) };
        let c = 2.0 * omega_pow(n, a as i64).re;
        let row = (0..=(2 * a + 1) as i64).map(|w| get(w) + c * get(w - 1) + get(w - 2)).collect();
        rows.push(row);
    }
    rows
}

/// Exponents of the conjugation-symmetric arc `B_w` through `-1` holding
/// `w` roots; `w` is even because `n` is odd.
pub fn arc_b(n: usize, w: usize) -> Vec<i64> {
    let lo = (n.div_ceil(2) - w / 2) as i64;
    (lo..lo + w as i64).collect()
}

/// `⟨Ψ(w, k', k)⟩`: mass-`k` measures on `B_w` with at most `k'` on the outer
/// pair `α, ᾱ`. Splitting off the mass `a` on that pair,
/// `Ψ(w, k', k) = Σ_{a ≤ min(k', k)} h_a(α, ᾱ) Ψ(w-2, k-a, k-a)`,
/// with `h_a` the complete homogeneous polynomial.
pub fn psi_outer(n: usize, w: usize, k_outer: usize, k: usize) -> Complex64 {
    let mut memo = BTreeMap::new();
    psi_outer_memo(n, w, k_outer, k, &mut memo)
}

fn complete_pair(alpha: Complex64, a: usize) -> Complex64 {
    let beta = alpha.conj();
    (0..=a).map(|i| alpha.powu(i as u32) * beta.powu((a - i) as u32)).sum()
}

fn psi_outer_memo(n: usize, w: usize, k_outer: usize, k: usize, memo: &mut BTreeMap<(usize, usize, usize), Complex64>) -> Complex64 {
    if w == 0 {
        return if k == 0 { Complex64::one() } else { Complex64::zero() };
    }
    if let Some(v) = memo.get(&(w, k_outer, k)) {
        return *v;
    }
    let alpha = omega_pow(n, arc_b(n, w)[0]);
    let mut total = Complex64::zero();
    for a in 0..=k_outer.min(k) {
        total += complete_pair(alpha, a) * psi_outer_memo(n, w - 2, k - a, k - a, memo);
    }
    memo.insert((w, k_outer, k), total);
    total
}

/// The same sum by listing the measures.
pub fn psi_outer_enumerated(n: usize, w: usize, k_outer: usize, k: usize) -> Complex64 {
    let b = arc_b(n, w);
    let outer = if w >= 2 { vec![b[0], b[w - 1]] } else { vec![] };
    psi(n, &b, k)
        .terms()
        .filter(|(m, _)| outer.iter().map(|&e| m.mass_at(e)).sum::<usize>() <= k_outer)
        .map(|(m, c)| m.eval() * *c as f64)
        .sum()
}

/// Which path [`lambda_via_measures`] took.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MeasurePath {
    /// `v < n/4`: `λ_v = (-1)^v ⟨Ψ'(A_v^c, v)⟩`.
    SparseComplement,
    /// `v ≥ n/4`: `λ_v = ⟨Ψ(w, v, v)⟩` with `w = n - 2v - 1`.
    OuterPairs,
}

/// `λ_v` through compression and the measure identities.
pub fn lambda_via_measures(n: usize, v: usize) -> Result<(Complex64, MeasurePath)> {
    check_range(n, v)?;
    if 4 * v < n {
        let p = sparse_complement_table(n, v)[v][v];
        let sign = if v % 2 == 0 { 1.0 } else { -1.0 };
        Ok((Complex64::new(sign * p, 0.0), MeasurePath::SparseComplement))
    } else {
        let w = n - 2 * v - 1;
        Ok((psi_outer(n, w, v, v), MeasurePath::OuterPairs))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingRow {
    pub n: usize,
    pub v: usize,
    pub re: f64,
    pub im: f64,
    /// `|λ_v - v|`.
    pub margin: f64,
    /// `|direct - measure path|`.
    pub delta: f64,
    pub path: MeasurePath,
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingReport {
    pub n: usize,
    pub rows: Vec<VanishingRow>,
}

impl VanishingReport {
    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.margin > TOL && r.delta < TOL)
    }
}

pub fn vanishing_check(n: usize) -> Result<VanishingReport> {
    let mut rows = Vec::new();
    for v in 1..=(n.saturating_sub(3)) / 2 {
        let d = lambda_direct(n, v, Reading::Gap)?;
        let (m, path) = lambda_via_measures(n, v)?;
        rows.push(VanishingRow {
            n,
            v,
            re: d.re,
            im: d.im,
            margin: (d - Complex64::new(v as f64, 0.0)).norm(),
            delta: (d - m).norm(),
            path,
        });
    }
    if rows.is_empty() {
        check_range(n, 1)?;
    }
    Ok(VanishingReport { n, rows })
}

/// Every value of the sparse-complement table with `1 ≤ w ≤ 2a+1` is
/// positive when `a < n/4`.
pub fn sparse_complement_positive(n: usize) -> bool {
    let v = (n - 1) / 4;
    if v == 0 {
        return true;
    }
    let t = sparse_complement_table(n, v);
    t.iter().skip(1).all(|row| row.iter().all(|&p| p > TOL))
}

#[derive(Clone, Debug, Serialize)]
pub struct SignSample {
    pub n: usize,
    pub w: usize,
    pub k_outer: usize,
    pub k: usize,
    pub value: f64,
    pub ok: bool,
}

/// Checks `(-1)^k ⟨Ψ(w, k', k)⟩ > 0` on every triple the recursion for some
/// `λ_v` with `v ≥ n/4` can reach: `w ≤ n - 2v - 1` even and `k ≤ v`, so
/// `k ≤ (n - 1 - w)/2`, restricted to nonempty sums (for `w = 2` that needs
/// `k' ≥ k`).
pub fn outer_sign_samples(n: usize) -> Vec<SignSample> {
    let mut out = Vec::new();
    let v_max = (n - 3) / 2;
    let v_min = n.div_ceil(4);
    if v_min > v_max {
        return out;
    }
    let w_max = n - 2 * v_min - 1;
    for w in (2..=w_max).step_by(2) {
        for k in 1..=(n - 1 - w) / 2 {
            for k_outer in 0..=k {
                if w == 2 && k_outer < k {
                    continue;
                }
                let val = psi_outer(n, w, k_outer, k);
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                out.push(SignSample {
                    n,
                    w,
                    k_outer,
                    k,
                    value: val.re,
                    ok: val.im.abs() < TOL && sign * val.re > TOL,
                });
            }
        }
    }
    out
}

/// Residuals of two candidate recursions on the arc `B_2 = {α, ᾱ}`:
/// `h_k = (α+ᾱ) h_{k-1} + αᾱ h_{k-2}` and `h_k = (α+ᾱ) h_{k-1} - αᾱ h_{k-2}`.
pub fn pair_recursion_residuals(n: usize, k: usize) -> (f64, f64) {
    let alpha = omega_pow(n, arc_b(n, 2)[0]);
    let e1 = alpha + alpha.conj();
    let e2 = alpha * alpha.conj();
    let h = |a: usize| complete_pair(alpha, a);
    let plus = (h(k) - (e1 * h(k - 1) + e2 * h(k - 2))).norm();
    let minus = (h(k) - (e1 * h(k - 1) - e2 * h(k - 2))).norm();
    (plus, minus)
}

/// `H_k(z) = (-1)^k Σ ∏_{i ∈ S} z_i` over cyclically non-adjacent `k`-subsets
/// `S` of `{1, …, n}` (for `k < n`), and `H_n = z_1 ⋯ z_n`.
fn nonadjacent_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            if k < 2 || !(cur[0] == 1 && cur[k - 1] == n) {
                out.push(cur.clone());
            }
            return;
        }
        for i in from..=n {
            cur.push(i);
            rec(n, k, i + 2, cur, out);
            cur.pop();
        }
    }
    if k == n {
        return vec![(1..=n).collect()];
    }
    rec(n, k, 1, &mut cur, &mut out);
    out
}

/// `∇H_k` at `p = (ω, ω², …, ωⁿ)`.
pub fn h_gradient(n: usize, k: usize) -> Vec<Complex64> {
    let sign = if k == n || k % 2 == 0 { 1.0 } else { -1.0 };
    let mut g = vec![Complex64::zero(); n];
    for s in nonadjacent_subsets(n, k) {
        let total: usize = s.iter().sum();
        for &i in &s {
            g[i - 1] += omega_pow(n, (total - i) as i64) * sign;
        }
    }
    g
}

/// Largest deviation of `∇H_k(p)` from `μ · V_m`, where
/// `V_m = (ω^m, ω^{2m}, …, ω^{nm})` and `μ` is fitted from the last entry.
pub fn gradient_power_deviation(n: usize, k: usize, m: i64) -> (Complex64, f64) {
    let g = h_gradient(n, k);
    let mu = g[n - 1] / omega_pow(n, m * n as i64);
    let dev = (1..=n).map(|j| (g[j - 1] - mu * omega_pow(n, m * j as i64)).norm()).fold(0.0, f64::max);
    (mu, dev)
}

/// Rank of a rational matrix by elimination.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut().filter(|row| !row[c].is_zero()) {
            let f = &row[c] / &pivot_row[c];
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= &f * y;
            }
        }
        r += 1;
    }
    r
}

/// Jacobian of [`invariant_tuple`] in the `2n` coordinates. Each invariant
/// has degree at most one in every variable, so unit differences are exact.
pub fn jacobian(v: &CoordVector) -> Vec<Vec<Q>> {
    let base = invariant_tuple(v);
    let cols: Vec<Vec<Q>> = (1..=v.len())
        .map(|j| {
            let bumped = v.with_entry(j, v.get(j as i64) + Q::one());
            invariant_tuple(&bumped).into_iter().zip(&base).map(|(a, b)| a - b).collect()
        })
        .collect();
    (0..base.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceReport {
    pub n: usize,
    pub expected: usize,
    pub rank: usize,
    pub attempts: usize,
    #[serde(with = "crate::scalar::serde_q::vec")]
    pub point: Vec<Q>,
    pub homogeneity: bool,
}

impl IndependenceReport {
    pub fn passes(&self) -> bool {
        self.rank == self.expected && self.homogeneity
    }
}

/// `∂_j O_k(S_t q) = t^{-k_j} ∂_j O_k(q)` with `k_j = k + (-1)^j`, where `S_t`
/// divides odd coordinates by `t` and multiplies even ones by `t`.
pub fn homogeneity_holds(q: &CoordVector, k: usize, j: usize, t: &Q, parity: Parity) -> Result<bool> {
    let lhs = partial_derivative(&q.scale_homogeneous(t), k, parity, j)?;
    let rhs = partial_derivative(q, k, parity, j)?;
    // for E_k the roles of odd and even coordinates are exchanged
    let up = matches!((parity, j % 2), (Parity::Odd, 0) | (Parity::Even, 1));
    let kj = if up { k + 1 } else { k - 1 };
    let scale = pow(t, kj as u32);
    let expect = match parity {
        Parity::Odd => rhs / scale,
        Parity::Even => rhs * scale,
    };
    Ok(lhs == expect)
}

/// Exact rank of the Jacobian at a random rational point, retried at fresh
/// points while deficient, plus a homogeneity spot check.
pub fn independence_check(n: usize, rng: &mut Rng, attempts: usize) -> Result<IndependenceReport> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("n = {n} is below 3")));
    }
    let expected = 2 * (n / 2) + 2;
    let mut best = None;
    for attempt in 1..=attempts.max(1) {
        let v = generic_coords(rng, n, 9)?;
        let r = rank(&jacobian(&v));
        let done = r == expected;
        best = Some((r, attempt, v));
        if done {
            break;
        }
    }
    let (r, used, v) = best.expect("at least one attempt");
    let t = crate::scalar::random_q(rng, 7);
    let mut homogeneity = true;
    for k in 1..=(n / 2).min(3) {
        for j in [1, 2, 3, 2 * n] {
            for parity in [Parity::Odd, Parity::Even] {
                homogeneity &= homogeneity_holds(&v, k, j, &t, parity)?;
            }
        }
    }
    Ok(IndependenceReport { n, expected, rank: r, attempts: used, point: v.into_vec(), homogeneity })
}
