//! Serializable reports behind each command-line subcommand. Every report
//! knows whether its internal checks passed.

use num_traits::Zero;
use serde::Serialize;

use crate::condensation::{
    bareiss_det, collapse_experiment, dodgson_det, dodgson_det_with_retry, rectilinear_polygon,
    CollapseReport, Matrix,
};
use crate::dynamics::{
    alpha1, alpha2, degeneracy_coords, extract_invariants, geometric_alpha, is_degenerate, Class, Kind,
    TwistedPolygon,
};
use crate::error::{Error, Result};
use crate::invariants::{eval_E, eval_O, invariant_tuple, swap_tuple, weight_polynomial, CoordVector, Parity};
use crate::polyfile::PolygonFile;
use crate::projective::omega_invariants;
use crate::reconstruct::{
    build_polypoint, default_window, monodromy_lift, omega_from_invariants, predicted_det, predicted_trace,
    verify_incidence_identities, TruncatedTable,
};
use crate::sample::Rng;
use crate::scalar::{serde_q, Q};
use crate::vanishing::{
    independence_check, outer_sign_samples, sparse_complement_positive, vanishing_check, IndependenceReport,
    VanishingRow, TOL,
};

/// Settings echoed at the top of every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub seed: u64,
    pub scalar: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub config: RunConfig,
    pub passed: bool,
    pub report: T,
}

/// `(Ω₁, Ω₂)` of the monodromy, ordered to match [`omega_from_invariants`]:
/// the pair is exchanged for class-3 points and class-1 lines.
pub fn oriented_monodromy_omegas(p: &TwistedPolygon) -> (Q, Q) {
    let (a, b) = omega_invariants(p.monodromy());
    match (p.kind(), p.class()) {
        (Kind::Points, Class::One) | (Kind::Lines, Class::Three) => (a, b),
        _ => (b, a),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantsReport {
    pub n: usize,
    pub kind: Kind,
    pub parity: i64,
    #[serde(with = "serde_q::vec")]
    pub x: Vec<Q>,
    /// `O_0, …, O_{⌊n/2⌋}`.
    #[serde(with = "serde_q::vec")]
    pub odd: Vec<Q>,
    #[serde(with = "serde_q::vec")]
    pub even: Vec<Q>,
    #[serde(with = "serde_q")]
    pub odd_n: Q,
    #[serde(with = "serde_q")]
    pub even_n: Q,
    /// From the invariants; absent when `O_n` or `E_n` vanishes.
    #[serde(with = "serde_q::vec")]
    pub omega_from_invariants: Vec<Q>,
    #[serde(with = "serde_q::vec")]
    pub omega_from_monodromy: Vec<Q>,
    pub omega_agree: bool,
    pub degenerate: bool,
    pub degenerate_coords_class1: bool,
    pub degenerate_coords_class3: bool,
}

pub fn invariants_report(p: &TwistedPolygon) -> Result<InvariantsReport> {
    let x = extract_invariants(p)?;
    let n = x.n();
    let from_inv = match omega_from_invariants(&x) {
        Ok((a, b)) => vec![a, b],
        Err(Error::ZeroLeadingInvariant) => vec![],
        Err(e) => return Err(e),
    };
    let (a, b) = oriented_monodromy_omegas(p);
    let from_mono = vec![a, b];
    Ok(InvariantsReport {
        n,
        kind: p.kind(),
        parity: p.class().base(),
        odd: weight_polynomial(&x, Parity::Odd),
        even: weight_polynomial(&x, Parity::Even),
        odd_n: eval_O(&x, n)?,
        even_n: eval_E(&x, n)?,
        omega_agree: from_inv.is_empty() || from_inv == from_mono,
        omega_from_invariants: from_inv,
        omega_from_monodromy: from_mono,
        degenerate: is_degenerate(p),
        degenerate_coords_class1: degeneracy_coords(&x, Class::One),
        degenerate_coords_class3: degeneracy_coords(&x, Class::Three),
        x: x.into_vec(),
    })
}

impl InvariantsReport {
    pub fn passes(&self) -> bool {
        self.omega_agree
    }
}

/// The map applied at each step of `iterate`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepMap {
    Alpha1,
    Alpha2,
    /// `α₂` then `α₁`, alternately, so two steps make one pentagram step.
    Alternate,
}

impl StepMap {
    fn at(self, step: usize) -> u8 {
        match self {
            StepMap::Alpha1 => 1,
            StepMap::Alpha2 => 2,
            StepMap::Alternate => {
                if step % 2 == 1 {
                    2
                } else {
                    1
                }
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StepRow {
    pub step: usize,
    /// `1` or `2`; zero for the input row.
    pub map: u8,
    pub kind: Kind,
    pub parity: i64,
    #[serde(with = "serde_q::vec")]
    pub x: Vec<Q>,
    /// `(O_1, …, O_m, E_1, …, E_m, O_n, E_n)`.
    #[serde(with = "serde_q::vec")]
    pub tuple: Vec<Q>,
    /// The tuple is the O/E swap of the previous one.
    pub swapped: bool,
    /// The coordinates of the geometric image equal the coordinate map.
    pub coords_agree: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IterateReport {
    pub map: StepMap,
    pub rows: Vec<StepRow>,
}

impl IterateReport {
    pub fn passes(&self) -> bool {
        self.rows.iter().all(|r| r.swapped && r.coords_agree)
    }
}

fn at_step(step: usize) -> impl Fn(Error) -> Error {
    move |e| Error::AtStep { step, source: Box::new(e) }
}

/// Applies the chosen involutions geometrically, extracting the coordinates
/// after each step and comparing with the coordinate maps. Returns the
/// polygons visited, starting with the input.
pub fn iterate_report(p: &TwistedPolygon, steps: usize, map: StepMap) -> Result<(IterateReport, Vec<TwistedPolygon>)> {
    let x0 = extract_invariants(p).map_err(at_step(0))?;
    let mut rows = vec![StepRow {
        step: 0,
        map: 0,
        kind: p.kind(),
        parity: p.class().base(),
        tuple: invariant_tuple(&x0),
        x: x0.clone().into_vec(),
        swapped: true,
        coords_agree: true,
    }];
    let mut polys = vec![p.clone()];
    let mut x = x0;
    for step in 1..=steps {
        let which = map.at(step);
        let expect = if which == 1 { alpha1(&x) } else { alpha2(&x) }.map_err(at_step(step))?;
        let next = geometric_alpha(polys.last().expect("nonempty"), which).map_err(at_step(step))?;
        let got = extract_invariants(&next).map_err(at_step(step))?;
        let tuple = invariant_tuple(&got);
        let prev = &rows.last().expect("nonempty").tuple;
        rows.push(StepRow {
            step,
            map: which,
            kind: next.kind(),
            parity: next.class().base(),
            swapped: tuple == swap_tuple(prev),
            coords_agree: got == expect,
            tuple,
            x: got.clone().into_vec(),
        });
        polys.push(next);
        x = got;
    }
    Ok((IterateReport { map, rows }, polys))
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseRun {
    /// The input vertices as a closed polygon.
    pub polygon: PolygonFile,
    /// `2N - 2`.
    pub expected_step: usize,
    pub result: CollapseReport,
}

impl CollapseRun {
    pub fn passes(&self) -> bool {
        let r = &self.result;
        r.degenerate_profile
            && r.collapse_step == Some(self.expected_step)
            && r.predicted_step == r.collapse_step
            && r.predicted_strip_degenerate
    }
}

pub fn collapse_run(big_n: usize, rng: &mut Rng) -> Result<CollapseRun> {
    let vertices = rectilinear_polygon(big_n, rng)?;
    let polygon = PolygonFile::from_polygon(&TwistedPolygon::closed(Kind::Points, Class::One, vertices.clone())?);
    let result = collapse_experiment(&vertices, 2 * big_n + 2)?;
    Ok(CollapseRun { polygon, expected_step: 2 * big_n - 2, result })
}

#[derive(Clone, Debug, Serialize)]
pub struct CondenseReport {
    pub size: usize,
    #[serde(with = "serde_q")]
    pub determinant: Q,
    /// `direct`, or `retry` when an interior entry vanished and the matrix
    /// was mixed before condensing.
    pub method: &'static str,
    #[serde(with = "serde_q")]
    pub elimination: Q,
    pub agree: bool,
}

impl CondenseReport {
    pub fn passes(&self) -> bool {
        self.agree
    }
}

pub fn condense_report(m: &Matrix, rng: &mut Rng) -> Result<CondenseReport> {
    let (determinant, method) = match dodgson_det(m) {
        Ok(d) => (d, "direct"),
        Err(Error::SingularInterior { .. }) => (dodgson_det_with_retry(m, rng, 32)?, "retry"),
        Err(e) => return Err(e),
    };
    let elimination = bareiss_det(m)?;
    Ok(CondenseReport { size: m.len(), agree: determinant == elimination, determinant, method, elimination })
}

#[derive(Clone, Debug, Serialize)]
pub struct VanishingSweep {
    pub n_max: usize,
    pub rows: Vec<VanishingRow>,
    pub min_margin: f64,
    pub max_delta: f64,
    pub sign_samples: usize,
    pub sign_failures: usize,
    pub positivity: bool,
}

impl VanishingSweep {
    pub fn passes(&self) -> bool {
        self.min_margin > TOL && self.max_delta < TOL && self.sign_failures == 0 && self.positivity
    }
}

/// Every odd `n` from 5 to `n_max`.
pub fn vanishing_sweep(n_max: usize) -> Result<VanishingSweep> {
    if n_max < 5 {
        return Err(Error::OutOfRange(format!("n-max = {n_max} is below 5")));
    }
    let mut rows = Vec::new();
    let (mut sign_samples, mut sign_failures, mut positivity) = (0, 0, true);
    for n in (5..=n_max).step_by(2) {
        rows.extend(vanishing_check(n)?.rows);
        let s = outer_sign_samples(n);
        sign_samples += s.len();
        sign_failures += s.iter().filter(|t| !t.ok).count();
        positivity &= sparse_complement_positive(n);
    }
    Ok(VanishingSweep {
        n_max,
        min_margin: rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min),
        max_delta: rows.iter().map(|r| r.delta).fold(0.0, f64::max),
        rows,
        sign_samples,
        sign_failures,
        positivity,
    })
}

pub fn independence_report(n: usize, rng: &mut Rng) -> Result<IndependenceReport> {
    independence_check(n, rng, 8)
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconstructReport {
    pub n: usize,
    pub polygon: PolygonFile,
    pub round_trip: bool,
    #[serde(with = "serde_q::vec")]
    pub omega_from_invariants: Vec<Q>,
    #[serde(with = "serde_q::vec")]
    pub omega_from_monodromy: Vec<Q>,
    pub omega_agree: bool,
    pub trace_formula: bool,
    pub det_formula: bool,
    pub identities_checked: usize,
    pub identities_hold: bool,
}

impl ReconstructReport {
    pub fn passes(&self) -> bool {
        self.round_trip && self.omega_agree && self.trace_formula && self.det_formula && self.identities_hold
    }
}

/// Builds the PolyPoint with the given coordinates, extracts them back and
/// checks the monodromy formulas and the incidence identities.
pub fn reconstruct_report(v: &CoordVector) -> Result<ReconstructReport> {
    let p = build_polypoint(v)?;
    let round_trip = extract_invariants(&p)? == *v;
    let (from_inv, omega_agree) = match omega_from_invariants(v) {
        Ok((a, b)) => {
            let m = oriented_monodromy_omegas(&p);
            let agree = a == m.0 && b == m.1;
            (vec![a, b], agree)
        }
        Err(Error::ZeroLeadingInvariant) => (vec![], true),
        Err(e) => return Err(e),
    };
    let (a, b) = oriented_monodromy_omegas(&p);
    let lift = monodromy_lift(v)?;
    let table = TruncatedTable::periodic(v, default_window(v.n()))?;
    let ids = verify_incidence_identities(&table, 4, 2)?;
    Ok(ReconstructReport {
        n: v.n(),
        polygon: PolygonFile::from_polygon(&p),
        round_trip,
        omega_from_invariants: from_inv,
        omega_from_monodromy: vec![a, b],
        omega_agree,
        trace_formula: lift.trace() == predicted_trace(v),
        det_formula: !lift.det().is_zero() && lift.det() == predicted_det(v),
        identities_checked: ids.checks.len(),
        identities_hold: ids.all_hold(),
    })
}
